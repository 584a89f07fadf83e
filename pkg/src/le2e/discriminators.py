"""Forward passes of the discriminator set: multi-period and multi-resolution.

Inference-side only: each sub-discriminator maps audio to a final score map
plus the ordered list of intermediate features the feature-matching loss
consumes. Channel schedules scale with a base channel count so desk-scale
tests stay fast; the default of 32 is the documented topology.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InputError
from .numerics import StftConfig, conv2d, leaky_relu, relu, stft

_ACTIVATIONS = ("relu", "leaky_relu")


def _check_activation(kind: str):
    if kind not in _ACTIVATIONS:
        raise ConfigError(f"unknown activation '{kind}', expected one "
                          f"of {_ACTIVATIONS}")


@dataclass(frozen=True)
class MpdConfig:
    periods: tuple = (2, 3, 5, 7, 11)
    base_channels: int = 32
    activation: str = "relu"

    def __post_init__(self):
        if list(self.periods) != sorted(set(self.periods)):
            raise ConfigError("periods must be strictly increasing")
        for i, p in enumerate(self.periods):
            for q in self.periods[i + 1:]:
                if np.gcd(p, q) != 1:
                    raise ConfigError(f"periods must be pairwise coprime, "
                                      f"{p} and {q} are not")
        _check_activation(self.activation)


@dataclass(frozen=True)
class MrdConfig:
    fft_sizes: tuple = (1024, 2048, 512)
    hop_lengths: tuple = (120, 240, 50)
    win_lengths: tuple = (600, 1200, 240)
    base_channels: int = 32
    activation: str = "relu"

    def __post_init__(self):
        if not (len(self.fft_sizes) == len(self.hop_lengths)
                == len(self.win_lengths)):
            raise ConfigError("fft/hop/win lists must have equal length")
        _check_activation(self.activation)

    def resolutions(self):
        return tuple(zip(self.fft_sizes, self.hop_lengths, self.win_lengths))


@dataclass
class DiscriminatorOutput:
    score_map: np.ndarray
    features: list = field(default_factory=list)


def _activate(x, kind: str):
    if kind == "relu":
        return relu(x)
    if kind == "leaky_relu":
        return leaky_relu(x, 0.2)
    raise ConfigError(f"unknown activation '{kind}'")


def _get(weights, name: str) -> np.ndarray:
    try:
        return weights[name]
    except KeyError:
        raise ConfigError(f"missing weight tensor '{name}'") from None


# layer plans: (out_channels, kernel, stride, padding) per conv, shared by
# the forward passes and the random-weight initializer so they cannot drift

def mpd_layer_plan(base: int):
    convs = [(base, (5, 1), (3, 1), (2, 0)),
             (base * 4, (5, 1), (3, 1), (2, 0)),
             (base * 16, (5, 1), (3, 1), (2, 0)),
             (base * 32, (5, 1), (3, 1), (2, 0)),
             (base * 32, (5, 1), (1, 1), (2, 0))]
    post = (1, (3, 1), (1, 1), (1, 0))
    return convs, post


def mrd_layer_plan(base: int):
    convs = [(base, (3, 9), (1, 1), (1, 4)),
             (base, (3, 9), (1, 2), (1, 4)),
             (base, (3, 9), (1, 2), (1, 4)),
             (base, (3, 9), (1, 2), (1, 4)),
             (base, (3, 3), (1, 1), (1, 1))]
    post = (1, (3, 3), (1, 1), (1, 1))
    return convs, post


def mpd_reshape(audio: np.ndarray, period: int) -> np.ndarray:
    """Fold [T] audio into [ceil(T/period), period], reflect-padding the

    tail up to a full row. A single-sample input falls back to edge
    padding (nothing to reflect).
    """
    audio = np.asarray(audio, dtype=np.float32).reshape(-1)
    t = audio.shape[0]
    if period < 1:
        raise InputError(f"period must be >= 1, got {period}")
    pad = (-t) % period
    if pad:
        mode = "reflect" if t > 1 else "edge"
        audio = np.pad(audio, (0, pad), mode=mode)
    return audio.reshape(-1, period)


def _conv_tower(x: np.ndarray, weights, prefix: str, plan, post_plan,
                activation: str) -> DiscriminatorOutput:
    feats = []
    for j, (_, _, stride, padding) in enumerate(plan):
        x = conv2d(x, _get(weights, f"{prefix}.convs.{j}.weight"),
                   _get(weights, f"{prefix}.convs.{j}.bias"),
                   stride=stride, padding=padding)
        x = _activate(x, activation)
        feats.append(x)
    _, _, stride, padding = post_plan
    score = conv2d(x, _get(weights, f"{prefix}.post.weight"),
                   _get(weights, f"{prefix}.post.bias"),
                   stride=stride, padding=padding)
    feats.append(score)
    return DiscriminatorOutput(score_map=score, features=feats)


def mpd_forward(audio: np.ndarray, weights, cfg: MpdConfig) -> list:
    """One DiscriminatorOutput per period, in config order."""
    convs, post = mpd_layer_plan(cfg.base_channels)
    outs = []
    for p in cfg.periods:
        x = mpd_reshape(audio, p)[None, :, :]  # [1, H, period]
        outs.append(_conv_tower(x, weights, f"mpd.p{p}", convs, post,
                                cfg.activation))
    return outs


def mrd_forward(audio: np.ndarray, weights, cfg: MrdConfig) -> list:
    """One DiscriminatorOutput per STFT resolution, in config order."""
    audio = np.asarray(audio, dtype=np.float32).reshape(-1)
    if audio.shape[0] < max(cfg.win_lengths):
        raise InputError(f"audio length {audio.shape[0]} shorter than the "
                         f"largest analysis window {max(cfg.win_lengths)}")
    convs, post = mrd_layer_plan(cfg.base_channels)
    outs = []
    for r, (fft, hop, win) in enumerate(cfg.resolutions()):
        mag = stft(audio, StftConfig(fft, hop, win))
        x = mag[None, :, :]  # [1, frames, bins]
        outs.append(_conv_tower(x, weights, f"mrd.r{r}", convs, post,
                                cfg.activation))
    return outs
