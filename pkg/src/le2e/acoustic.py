"""Acoustic latent model: text encoder, variance adaptor, acoustic decoder.

The generator's left half. Phoneme ids become positional-aware embeddings,
a four-block transformer encoder contextualizes them, the variance adaptor
predicts log durations and pitch and upsamples to frame rate, and a second
four-block transformer produces the [T, 256] latents the vocoder consumes.

Weights arrive as a flat name -> array mapping (see weights module for the
naming contract). All forwards are pure; a loaded bundle can be shared by
any number of concurrent calls.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InputError
from .numerics import (conv1d, layer_norm, linear, multi_head_self_attention,
                       relu, sinusoidal_positions)


@dataclass(frozen=True)
class ModelConfig:
    """Every architectural hyperparameter of the acoustic model."""

    vocab_size: int = 256
    hidden: int = 256
    heads: int = 2
    attention_dim: int = 64
    encoder_kernels: tuple = (5, 25, 13, 9)
    decoder_kernels: tuple = (17, 21, 9, 13)
    dur_layers: int = 2
    dur_kernel: int = 3
    pitch_layers: int = 5
    pitch_kernel: int = 5
    pitch_bins: int = 256
    sample_rate: int = 22050
    frame_hop: int = 300

    def __post_init__(self):
        if self.hidden % self.heads != 0:
            raise ConfigError(f"hidden {self.hidden} not divisible by "
                              f"{self.heads} heads")
        if self.attention_dim % self.heads != 0:
            raise ConfigError(f"attention_dim {self.attention_dim} not "
                              f"divisible by {self.heads} heads")
        if len(self.encoder_kernels) != len(self.decoder_kernels):
            raise ConfigError("encoder/decoder kernel lists must have equal "
                              "length")
        if self.vocab_size < 1:
            raise ConfigError("vocab_size must be positive")


def _get(weights, name: str) -> np.ndarray:
    try:
        return weights[name]
    except KeyError:
        raise ConfigError(f"missing weight tensor '{name}'") from None


def _has_prefix(weights, prefix: str) -> bool:
    return any(k.startswith(prefix) for k in weights.keys())


def embed_phonemes(ids, embedding: np.ndarray) -> np.ndarray:
    """Look up phoneme embeddings and add the sinusoidal positional term."""
    ids = np.asarray(ids)
    if ids.ndim != 1 or ids.shape[0] < 1:
        raise InputError("phoneme sequence must be a non-empty 1D id list")
    vocab = embedding.shape[0]
    if ids.min() < 0 or ids.max() >= vocab:
        bad = int(ids[(ids < 0) | (ids >= vocab)][0])
        raise InputError(f"phoneme id {bad} outside vocabulary [0, {vocab})")
    emb = np.asarray(embedding, dtype=np.float32)[ids]
    return emb + sinusoidal_positions(len(ids), embedding.shape[1])


def _sepconv(x: np.ndarray, weights, prefix: str,
             inner_relu: bool = False) -> np.ndarray:
    """Depthwise conv then pointwise 1x1 over a [T, D] sequence."""
    d = x.shape[1]
    y = conv1d(x.T, _get(weights, prefix + ".dw_weight"),
               _get(weights, prefix + ".dw_bias"), groups=d)
    if inner_relu:
        y = relu(y)
    y = conv1d(y, _get(weights, prefix + ".pw_weight"),
               _get(weights, prefix + ".pw_bias"))
    return y.T


def transformer_block_forward(x: np.ndarray, weights, prefix: str,
                              heads: int) -> np.ndarray:
    """One post-norm block: attention sublayer, then separable-conv FFN."""
    attn = multi_head_self_attention(
        x,
        _get(weights, prefix + ".attn.wq"), _get(weights, prefix + ".attn.wk"),
        _get(weights, prefix + ".attn.wv"), _get(weights, prefix + ".attn.wo"),
        heads,
        bq=_get(weights, prefix + ".attn.bq"),
        bk=_get(weights, prefix + ".attn.bk"),
        bv=_get(weights, prefix + ".attn.bv"),
        bo=_get(weights, prefix + ".attn.bo"))
    x = layer_norm(x + attn, _get(weights, prefix + ".attn_norm.gamma"),
                   _get(weights, prefix + ".attn_norm.beta"))
    ffn = _sepconv(x, weights, prefix + ".ffn", inner_relu=True)
    return layer_norm(x + ffn, _get(weights, prefix + ".ffn_norm.gamma"),
                      _get(weights, prefix + ".ffn_norm.beta"))


def transformer_stack_forward(x: np.ndarray, weights, prefix: str,
                              kernels, heads: int) -> np.ndarray:
    """Run the block stack under `prefix`; block i uses kernel kernels[i].

    The per-block kernel size is baked into the stored depthwise weights;
    `kernels` is validated against them so a mismatched bundle fails loudly.
    """
    n = len(kernels)
    if _has_prefix(weights, f"{prefix}.blocks.{n}."):
        raise ConfigError(f"weights contain more than {n} blocks under "
                          f"'{prefix}.blocks.'")
    for i, k in enumerate(kernels):
        bp = f"{prefix}.blocks.{i}"
        dw = _get(weights, bp + ".ffn.dw_weight")
        if dw.shape[-1] != k:
            raise ConfigError(f"block {i} under '{prefix}' has kernel "
                              f"{dw.shape[-1]}, config says {k}")
        x = transformer_block_forward(x, weights, bp, heads)
    return x


def _predictor_stack(x: np.ndarray, weights, prefix: str,
                     layers: int) -> np.ndarray:
    for i in range(layers):
        lp = f"{prefix}.layers.{i}"
        y = _sepconv(x, weights, lp)
        y = relu(y)
        x = layer_norm(y, _get(weights, lp + ".norm_gamma"),
                       _get(weights, lp + ".norm_beta"))
    return x


def predict_durations(encoded: np.ndarray, weights,
                      layers: int = 2) -> np.ndarray:
    """Per-phoneme log-scale durations from encoder output [N, D]."""
    h = _predictor_stack(encoded, weights, "variance.duration", layers)
    d = linear(h, _get(weights, "variance.duration.proj.weight"),
               _get(weights, "variance.duration.proj.bias"))
    return d[:, 0]


def decode_durations(log_durations: np.ndarray) -> np.ndarray:
    """Log-scale predictions to integer frame counts.

    frames = clamp(round(exp(d) - 1), min 0); the -1 keeps zero-frame
    phonemes representable. Rounding is round-half-to-even.
    """
    frames = np.rint(np.exp(np.asarray(log_durations, dtype=np.float64)) - 1.0)
    return np.maximum(frames, 0.0).astype(np.int64)


def length_regulate(encoded: np.ndarray, durations) -> np.ndarray:
    """Repeat phoneme rows by their frame durations: [N, D] -> [sum, D]."""
    durations = np.asarray(durations)
    if durations.ndim != 1 or durations.shape[0] != encoded.shape[0]:
        raise InputError(f"durations shape {durations.shape} does not match "
                         f"{encoded.shape[0]} phonemes")
    if not np.issubdtype(durations.dtype, np.integer):
        raise InputError("durations must be integers")
    if (durations < 0).any():
        raise InputError("durations must be non-negative")
    if durations.sum() == 0:
        raise InputError("all durations are zero: empty utterance")
    return np.repeat(encoded, durations, axis=0)


def pitch_forward(upsampled: np.ndarray, weights, layers: int = 5):
    """Pitch sub-network over frame-rate features [T, D].

    Returns (logits, enriched): logits [T, 256] exist for the loss only;
    enriched = upsampled + h where h is the pre-projection hidden features
    (the pitch latents).
    """
    h = _predictor_stack(upsampled, weights, "variance.pitch", layers)
    logits = linear(h, _get(weights, "variance.pitch.proj.weight"),
                    _get(weights, "variance.pitch.proj.bias"))
    return logits, upsampled + h


def acoustic_forward(ids, weights, cfg: ModelConfig,
                     durations_override=None) -> np.ndarray:
    """Full acoustic pass: phoneme ids to frame latents [T, hidden].

    T is the sum of predicted durations, or of `durations_override` when
    given (the trained-aligner path).
    """
    emb = embed_phonemes(ids, _get(weights, "encoder.embedding"))
    enc = transformer_stack_forward(emb, weights, "encoder",
                                    cfg.encoder_kernels, cfg.heads)
    if durations_override is not None:
        durations = np.asarray(durations_override)
        if not np.issubdtype(durations.dtype, np.integer):
            raise InputError("duration override must be integers")
    else:
        durations = decode_durations(predict_durations(enc, weights,
                                                       cfg.dur_layers))
    up = length_regulate(enc, durations)
    _, enriched = pitch_forward(up, weights, cfg.pitch_layers)
    return transformer_stack_forward(enriched, weights, "decoder",
                                     cfg.decoder_kernels, cfg.heads)
