"""End-to-end synthesis facade and random weight initialization.

Synthesizer wires the acoustic model, the vocoder and a PQMF bank together
behind one object. Weight bundles are immutable after construction, so one
Synthesizer may serve any number of concurrent calls.

The random initializers exist for benchmarks, self-verification and tests:
they emit every tensor the forward passes consume, at the exact shapes the
configs imply, with fan-in scaled values. They are not trained models.
"""

import numpy as np

from .acoustic import ModelConfig, acoustic_forward
from .discriminators import (MpdConfig, MrdConfig, mpd_layer_plan,
                             mrd_layer_plan)
from .errors import ConfigError
from .vocoder import PqmfBank, VocoderConfig, pqmf_design, vocoder_forward
from .weights import WeightBundle


class Synthesizer:
    """Phoneme ids to waveform, at sample_rate from the model config."""

    def __init__(self, weights, model_cfg: ModelConfig = None,
                 vocoder_cfg: VocoderConfig = None, bank: PqmfBank = None):
        self.model_cfg = model_cfg or ModelConfig()
        self.vocoder_cfg = vocoder_cfg or VocoderConfig()
        self.bank = bank or pqmf_design(subbands=self.vocoder_cfg.subbands)
        if self.vocoder_cfg.total_upsampling != self.model_cfg.frame_hop:
            raise ConfigError(
                f"vocoder upsamples {self.vocoder_cfg.total_upsampling}x but "
                f"the model frame hop is {self.model_cfg.frame_hop}")
        self.weights = weights

    @property
    def sample_rate(self) -> int:
        return self.model_cfg.sample_rate

    def synthesize(self, phoneme_ids, durations=None) -> np.ndarray:
        """Returns a float32 waveform in [-1, 1].

        With `durations` (integer frames per phoneme) the duration
        predictor is bypassed; otherwise predicted durations are used.
        """
        latent = acoustic_forward(phoneme_ids, self.weights, self.model_cfg,
                                  durations_override=durations)
        return vocoder_forward(latent, self.weights, self.vocoder_cfg,
                               self.bank)


def _normal(rng, shape, fan_in: int) -> np.ndarray:
    return (rng.standard_normal(shape) / np.sqrt(max(fan_in, 1))).astype(
        np.float32)


def _zeros(shape) -> np.ndarray:
    return np.zeros(shape, dtype=np.float32)


def _ones(shape) -> np.ndarray:
    return np.ones(shape, dtype=np.float32)


def _sepconv_entries(entries, rng, prefix: str, dim: int, kernel: int):
    entries[prefix + ".dw_weight"] = _normal(rng, (dim, 1, kernel), kernel)
    entries[prefix + ".dw_bias"] = _zeros(dim)
    entries[prefix + ".pw_weight"] = _normal(rng, (dim, dim, 1), dim)
    entries[prefix + ".pw_bias"] = _zeros(dim)


def _predictor_entries(entries, rng, prefix: str, dim: int, kernel: int,
                       layers: int):
    for i in range(layers):
        lp = f"{prefix}.layers.{i}"
        _sepconv_entries(entries, rng, lp, dim, kernel)
        entries[lp + ".norm_gamma"] = _ones(dim)
        entries[lp + ".norm_beta"] = _zeros(dim)


def init_random_weights(model_cfg: ModelConfig = None,
                        vocoder_cfg: VocoderConfig = None,
                        seed: int = 0) -> WeightBundle:
    """Seeded random generator bundle covering every required tensor."""
    mc = model_cfg or ModelConfig()
    vc = vocoder_cfg or VocoderConfig()
    rng = np.random.default_rng(seed)
    d = mc.hidden
    a = mc.attention_dim
    entries = {}

    entries["encoder.embedding"] = (
        0.1 * rng.standard_normal((mc.vocab_size, d))).astype(np.float32)
    for prefix, kernels in (("encoder", mc.encoder_kernels),
                            ("decoder", mc.decoder_kernels)):
        for b, kernel in enumerate(kernels):
            bp = f"{prefix}.blocks.{b}"
            for proj in ("wq", "wk", "wv"):
                entries[f"{bp}.attn.{proj}"] = _normal(rng, (d, a), d)
            entries[bp + ".attn.wo"] = _normal(rng, (a, d), a)
            for bias, width in (("bq", a), ("bk", a), ("bv", a), ("bo", d)):
                entries[f"{bp}.attn.{bias}"] = _zeros(width)
            entries[bp + ".attn_norm.gamma"] = _ones(d)
            entries[bp + ".attn_norm.beta"] = _zeros(d)
            _sepconv_entries(entries, rng, bp + ".ffn", d, kernel)
            entries[bp + ".ffn_norm.gamma"] = _ones(d)
            entries[bp + ".ffn_norm.beta"] = _zeros(d)

    _predictor_entries(entries, rng, "variance.duration", d, mc.dur_kernel,
                       mc.dur_layers)
    entries["variance.duration.proj.weight"] = _normal(rng, (d, 1), d)
    # bias ln(6) so untrained predictions land near 5 frames per phoneme
    entries["variance.duration.proj.bias"] = np.full(1, np.log(6.0),
                                                     dtype=np.float32)
    _predictor_entries(entries, rng, "variance.pitch", d, mc.pitch_kernel,
                       mc.pitch_layers)
    entries["variance.pitch.proj.weight"] = _normal(rng, (d, mc.pitch_bins), d)
    entries["variance.pitch.proj.bias"] = _zeros(mc.pitch_bins)

    entries["vocoder.input_conv.weight"] = _normal(
        rng, (vc.stem_channels, vc.input_channels, 7), vc.input_channels * 7)
    entries["vocoder.input_conv.bias"] = _zeros(vc.stem_channels)
    c_in = vc.stem_channels
    for i, (c_out, kernel) in enumerate(zip(vc.up_channels, vc.up_kernels)):
        sp = f"vocoder.stages.{i}"
        entries[sp + ".up.weight"] = _normal(rng, (c_in, c_out, kernel),
                                             c_in * kernel)
        entries[sp + ".up.bias"] = _zeros(c_out)
        for j in range(vc.resblocks_per_stage):
            rp = f"{sp}.res.{j}"
            entries[rp + ".conv1.weight"] = _normal(
                rng, (c_out, c_out, vc.res_kernel), c_out * vc.res_kernel)
            entries[rp + ".conv1.bias"] = _zeros(c_out)
            entries[rp + ".conv2.weight"] = _normal(rng, (c_out, c_out, 1),
                                                    c_out)
            entries[rp + ".conv2.bias"] = _zeros(c_out)
        c_in = c_out
    entries["vocoder.output_conv.weight"] = _normal(
        rng, (vc.subbands, c_in, vc.out_kernel), c_in * vc.out_kernel)
    entries["vocoder.output_conv.bias"] = _zeros(vc.subbands)
    return WeightBundle(entries)


def init_random_discriminator_weights(mpd_cfg: MpdConfig = None,
                                      mrd_cfg: MrdConfig = None,
                                      seed: int = 0) -> WeightBundle:
    """Seeded random MPD + MRD bundle matching the layer plans."""
    mpd = mpd_cfg or MpdConfig()
    mrd = mrd_cfg or MrdConfig()
    rng = np.random.default_rng(seed)
    entries = {}

    def tower(prefix: str, convs, post):
        c_in = 1
        for j, (c_out, (kh, kw), _, _) in enumerate(convs):
            entries[f"{prefix}.convs.{j}.weight"] = _normal(
                rng, (c_out, c_in, kh, kw), c_in * kh * kw)
            entries[f"{prefix}.convs.{j}.bias"] = _zeros(c_out)
            c_in = c_out
        c_out, (kh, kw), _, _ = post
        entries[prefix + ".post.weight"] = _normal(rng, (c_out, c_in, kh, kw),
                                                   c_in * kh * kw)
        entries[prefix + ".post.bias"] = _zeros(c_out)

    convs, post = mpd_layer_plan(mpd.base_channels)
    for p in mpd.periods:
        tower(f"mpd.p{p}", convs, post)
    convs, post = mrd_layer_plan(mrd.base_channels)
    for r in range(len(mrd.fft_sizes)):
        tower(f"mrd.r{r}", convs, post)
    return WeightBundle(entries)
