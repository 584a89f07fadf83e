"""Every training objective as a pure scalar kernel.

Duration MSE, pitch cross-entropy, LSGAN discriminator/generator losses,
feature matching, multi-resolution STFT (full band and sub band), mel loss,
and the weighted total. No autodiff, no state: plain functions from arrays
to python floats, accumulating in float64.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, InputError
from .numerics import (LOG_FLOOR, MelFilterbank, StftConfig, log_softmax,
                       mel_spectrogram, stft)
from .vocoder import PqmfBank, pqmf_analysis

# (fft, hop, win) triples; same resolutions the MRD consumes
DEFAULT_STFT_RESOLUTIONS = ((1024, 120, 600), (2048, 240, 1200),
                            (512, 50, 240))

# sub-band analysis runs at 1/4 rate: resolutions divide by the band count,
# floor-clamped so tiny windows stay valid
SUBBAND_MIN_FFT = 32
SUBBAND_MIN_HOP = 8
SUBBAND_MIN_WIN = 32


@dataclass(frozen=True)
class LossWeights:
    lambda_fm: float = 2.0
    lambda_mel: float = 5.0
    lambda_stft: float = 2.5

    def __post_init__(self):
        if min(self.lambda_fm, self.lambda_mel, self.lambda_stft) <= 0:
            raise ConfigError("loss weights must be positive")


@dataclass
class LossReport:
    dur: float = 0.0
    f0: float = 0.0
    gan_g: float = 0.0
    gan_d: float = 0.0
    fm: float = 0.0
    mel: float = 0.0
    stft_full: float = 0.0
    stft_sub: float = 0.0
    total: float = 0.0


@dataclass(frozen=True)
class PitchQuantizer:
    """256-bin quantizer over the standardized pitch range [-span, +span]."""

    mean: float
    std: float
    bins: int = 256
    span: float = 4.0

    def __post_init__(self):
        if self.std <= 0:
            raise ConfigError("pitch std must be > 0")
        if self.bins != 256:
            raise ConfigError(f"pitch quantizer is a 256-bin contract, "
                              f"got {self.bins}")
        if self.span <= 0:
            raise ConfigError("pitch span must be > 0")


def duration_loss(pred_log, oracle_log) -> float:
    """MSE between log-scale duration vectors."""
    pred = np.asarray(pred_log, dtype=np.float64).reshape(-1)
    oracle = np.asarray(oracle_log, dtype=np.float64).reshape(-1)
    if pred.shape != oracle.shape:
        raise InputError(f"duration length mismatch: {pred.shape[0]} vs "
                         f"{oracle.shape[0]}")
    diff = pred - oracle
    return float(np.mean(diff * diff))


def pitch_quantize(f0, q: PitchQuantizer) -> np.ndarray:
    """Hz values to bin indices; unvoiced frames (f0 == 0) map to bin 0."""
    f0 = np.asarray(f0, dtype=np.float64).reshape(-1)
    z = (f0 - q.mean) / q.std
    idx = np.floor((z + q.span) / (2.0 * q.span) * q.bins)
    idx = np.clip(idx, 0, q.bins - 1).astype(np.int64)
    idx[f0 == 0.0] = 0
    return idx


def pitch_ce_loss(logits, target_bins) -> float:
    """Mean cross-entropy of softmaxed pitch logits against bin targets."""
    logits = np.asarray(logits, dtype=np.float64)
    targets = np.asarray(target_bins).reshape(-1)
    if logits.ndim != 2 or logits.shape[0] != targets.shape[0]:
        raise InputError(f"logits {logits.shape} do not match "
                         f"{targets.shape[0]} targets")
    bins = logits.shape[1]
    if targets.min() < 0 or targets.max() >= bins:
        raise InputError(f"target bin outside [0, {bins})")
    logp = log_softmax(logits, axis=-1).astype(np.float64)
    picked = logp[np.arange(targets.shape[0]), targets]
    return float(-picked.mean())


def _mean_sq(x, target: float) -> float:
    x = np.asarray(x, dtype=np.float64)
    d = x - target
    return float(np.mean(d * d))


def lsgan_d_loss(real_scores, fake_scores) -> float:
    """Least-squares discriminator loss, averaged over sub-discriminators.

    Per discriminator k: mean[(D_k(x) - 1)^2] + mean[D_k(x_hat)^2].
    """
    if len(real_scores) == 0 or len(fake_scores) == 0:
        raise InputError("empty score list")
    if len(real_scores) != len(fake_scores):
        raise InputError(f"score list lengths differ: {len(real_scores)} vs "
                         f"{len(fake_scores)}")
    terms = [_mean_sq(r, 1.0) + _mean_sq(f, 0.0)
             for r, f in zip(real_scores, fake_scores)]
    return float(np.mean(terms))


def lsgan_g_loss(fake_scores) -> float:
    """Least-squares generator loss: mean[(D_k(x_hat) - 1)^2] over k."""
    if len(fake_scores) == 0:
        raise InputError("empty score list")
    return float(np.mean([_mean_sq(f, 1.0) for f in fake_scores]))


def feature_matching_loss(real_feats, fake_feats) -> float:
    """L1 between discriminator feature maps.

    Inputs nest as [discriminator][layer] -> array. Per discriminator the
    per-layer mean absolute differences are summed; the result is averaged
    over discriminators.
    """
    if len(real_feats) == 0:
        raise InputError("empty feature list")
    if len(real_feats) != len(fake_feats):
        raise InputError("feature nests have different discriminator counts")
    per_disc = []
    for k, (rf, ff) in enumerate(zip(real_feats, fake_feats)):
        if len(rf) != len(ff):
            raise InputError(f"discriminator {k}: layer counts differ")
        acc = 0.0
        for i, (r, f) in enumerate(zip(rf, ff)):
            r = np.asarray(r, dtype=np.float64)
            f = np.asarray(f, dtype=np.float64)
            if r.shape != f.shape:
                raise InputError(f"discriminator {k} layer {i}: shape "
                                 f"{r.shape} vs {f.shape}")
            acc += float(np.mean(np.abs(r - f)))
        per_disc.append(acc)
    return float(np.mean(per_disc))


def spectral_convergence(s, s_hat) -> float:
    """Relative Frobenius error || s - s_hat ||_F / || s ||_F."""
    s = np.asarray(s, dtype=np.float64)
    s_hat = np.asarray(s_hat, dtype=np.float64)
    if s.shape != s_hat.shape:
        raise InputError(f"spectrogram shapes differ: {s.shape} vs "
                         f"{s_hat.shape}")
    denom = np.linalg.norm(s)
    if denom == 0.0:
        raise InputError("reference spectrogram is all zeros")
    return float(np.linalg.norm(s - s_hat) / denom)


def stft_magnitude_loss(s, s_hat) -> float:
    """Mean absolute log-magnitude difference, clamped at the log floor."""
    s = np.asarray(s, dtype=np.float64)
    s_hat = np.asarray(s_hat, dtype=np.float64)
    if s.shape != s_hat.shape:
        raise InputError(f"spectrogram shapes differ: {s.shape} vs "
                         f"{s_hat.shape}")
    ls = np.log(np.maximum(s, LOG_FLOOR))
    lh = np.log(np.maximum(s_hat, LOG_FLOOR))
    return float(np.mean(np.abs(ls - lh)))


def stft_loss(x, x_hat, cfg: StftConfig):
    """Single-resolution (L_sc, L_mag) pair for a waveform pair."""
    s = stft(x, cfg)
    s_hat = stft(x_hat, cfg)
    return spectral_convergence(s, s_hat), stft_magnitude_loss(s, s_hat)


def mr_stft_loss(x, x_hat,
                 resolutions=DEFAULT_STFT_RESOLUTIONS) -> float:
    """Multi-resolution STFT loss: mean over resolutions of L_sc + L_mag."""
    x = np.asarray(x).reshape(-1)
    x_hat = np.asarray(x_hat).reshape(-1)
    if x.shape != x_hat.shape:
        raise InputError(f"waveform lengths differ: {x.shape[0]} vs "
                         f"{x_hat.shape[0]}")
    total = 0.0
    for fft, hop, win in resolutions:
        sc, mag = stft_loss(x, x_hat, StftConfig(fft, hop, win))
        total += sc + mag
    return total / len(resolutions)


def subband_resolutions(resolutions=DEFAULT_STFT_RESOLUTIONS,
                        subbands: int = 4):
    """Scale full-band resolutions down to the decimated band rate."""
    out = []
    for fft, hop, win in resolutions:
        out.append((max(fft // subbands, SUBBAND_MIN_FFT),
                    max(hop // subbands, SUBBAND_MIN_HOP),
                    max(win // subbands, SUBBAND_MIN_WIN)))
    return tuple(out)


def mr_stft_full_sub(x, x_hat, bank: PqmfBank,
                     resolutions=DEFAULT_STFT_RESOLUTIONS):
    """Full-band and sub-band multi-resolution STFT losses.

    Returns (full, sub, combined) where sub averages mr_stft_loss over the
    PQMF analysis bands at the scaled-down resolutions and
    combined = (full + sub) / 2.
    """
    full = mr_stft_loss(x, x_hat, resolutions)
    bands = pqmf_analysis(x, bank)
    bands_hat = pqmf_analysis(x_hat, bank)
    sub_res = subband_resolutions(resolutions, bank.subbands)
    sub = float(np.mean([mr_stft_loss(bands[b], bands_hat[b], sub_res)
                         for b in range(bank.subbands)]))
    return full, sub, (full + sub) / 2.0


def mel_loss(x, x_hat, cfg: StftConfig, fb: MelFilterbank) -> float:
    """L1 between log mel spectrograms of two waveforms."""
    x = np.asarray(x).reshape(-1)
    x_hat = np.asarray(x_hat).reshape(-1)
    if x.shape != x_hat.shape:
        raise InputError(f"waveform lengths differ: {x.shape[0]} vs "
                         f"{x_hat.shape[0]}")
    m = mel_spectrogram(x, cfg, fb).astype(np.float64)
    m_hat = mel_spectrogram(x_hat, cfg, fb).astype(np.float64)
    return float(np.mean(np.abs(m - m_hat)))


def total_generator_loss(dur: float, f0: float, gan_g: float, fm: float,
                         mel: float, stft_full: float, stft_sub: float,
                         weights: LossWeights = LossWeights()) -> float:
    """Weighted generator total.

    total = dur + f0 + gan_g + lambda_fm * fm + lambda_mel * mel
            + lambda_stft * (stft_full + stft_sub) / 2
    """
    parts = {"dur": dur, "f0": f0, "gan_g": gan_g, "fm": fm, "mel": mel,
             "stft_full": stft_full, "stft_sub": stft_sub}
    for name, v in parts.items():
        if not np.isfinite(v):
            raise InputError(f"loss component '{name}' is not finite: {v}")
    return float(dur + f0 + gan_g + weights.lambda_fm * fm
                 + weights.lambda_mel * mel
                 + weights.lambda_stft * (stft_full + stft_sub) / 2.0)
