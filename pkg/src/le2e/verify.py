"""Built-in invariant suite behind `le2e verify`.

Four check families: PQMF round-trip SNR, the end-to-end rate identity,
closed-form loss identities, and the parameter count of a generator bundle
against the architectural target. Each check returns a CheckResult; the CLI
prints one line per check and exits nonzero if any fail.

All randomness is seeded, so the suite is deterministic.
"""

import math
from dataclasses import dataclass

import numpy as np

from .acoustic import ModelConfig
from .losses import (LossWeights, duration_loss, feature_matching_loss,
                     lsgan_d_loss, lsgan_g_loss, mr_stft_loss, pitch_ce_loss,
                     spectral_convergence, stft_magnitude_loss,
                     total_generator_loss)
from .synthesis import init_random_weights
from .vocoder import (PqmfBank, VocoderConfig, pqmf_analysis, pqmf_design,
                      pqmf_synthesis, vocoder_forward)
from .weights import GENERATOR_PREFIXES, WeightBundle, count_parameters

PARAM_TARGET = 3_710_000
PARAM_REL_TOL = 0.15
SNR_THRESHOLD_DB = 35.0


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str

    def __post_init__(self):
        # numpy comparisons leave np.bool_ behind, which json.dumps rejects
        self.passed = bool(self.passed)


def roundtrip_snr(bank: PqmfBank, signal: np.ndarray) -> float:
    """Delay-compensated reconstruction SNR in dB for one signal."""
    x = np.asarray(signal, dtype=np.float64).reshape(-1)
    y = pqmf_synthesis(pqmf_analysis(x, bank), bank).astype(np.float64)
    d = bank.delay
    ref = x[:x.shape[0] - d]
    rec = y[d:d + ref.shape[0]]
    err = ref - rec
    return float(10.0 * np.log10(np.sum(ref * ref) / np.sum(err * err)))


def chirp(duration_s: float = 1.0, sample_rate: int = 22050,
          f_start: float = 100.0, f_end: float = 8000.0) -> np.ndarray:
    """Linear sweep, the speech-like wideband test signal."""
    n = int(duration_s * sample_rate)
    t = np.arange(n, dtype=np.float64) / sample_rate
    sweep = f_start * t + 0.5 * (f_end - f_start) / duration_s * t * t
    return np.sin(2.0 * np.pi * sweep)


def check_pqmf_roundtrip(bank: PqmfBank = None, seed: int = 0,
                         threshold: float = SNR_THRESHOLD_DB) -> CheckResult:
    bank = bank or pqmf_design()
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(16384)
    snr_noise = roundtrip_snr(bank, noise)
    snr_chirp = roundtrip_snr(bank, chirp(16384 / 22050.0))
    ok = snr_noise > threshold and snr_chirp > threshold
    detail = (f"taps={bank.taps} cutoff={bank.cutoff_ratio} beta={bank.beta}: "
              f"noise {snr_noise:.1f} dB, chirp {snr_chirp:.1f} dB "
              f"(threshold {threshold:.0f} dB)")
    return CheckResult("pqmf_roundtrip", ok, detail)


def check_rate_identity(bundle: WeightBundle = None,
                        vocoder_cfg: VocoderConfig = None,
                        seed: int = 0) -> CheckResult:
    vc = vocoder_cfg or VocoderConfig()
    bundle = bundle or init_random_weights(vocoder_cfg=vc, seed=seed)
    bank = pqmf_design(subbands=vc.subbands)
    rng = np.random.default_rng(seed)
    bad = []
    for t in (1, 2, 7, 31, 64):
        latent = rng.standard_normal((t, vc.input_channels)).astype(np.float32)
        wave = vocoder_forward(latent, bundle, vc, bank)
        if wave.shape[0] != t * vc.total_upsampling:
            bad.append((t, wave.shape[0]))
    if bad:
        return CheckResult("rate_identity", False,
                           f"length mismatches (frames, samples): {bad}")
    return CheckResult(
        "rate_identity", True,
        f"waveform length == {vc.total_upsampling} * T for T in (1,2,7,31,64)")


def check_loss_identities(tol: float = 1e-5) -> CheckResult:
    rng = np.random.default_rng(7)
    failures = []

    def expect(name, value, target):
        if not math.isclose(value, target, rel_tol=0.0, abs_tol=tol):
            failures.append(f"{name}: {value!r} != {target!r}")

    v = rng.standard_normal(16)
    expect("duration identity", duration_loss(v, v), 0.0)
    expect("pitch_ce uniform", pitch_ce_loss(np.zeros((4, 256)),
                                             np.array([0, 10, 128, 255])),
           math.log(256.0))
    ones = [np.ones((3, 5))] * 2
    zeros = [np.zeros((3, 5))] * 2
    halves = [np.full((3, 5), 0.5)] * 2
    expect("lsgan_d perfect", lsgan_d_loss(ones, zeros), 0.0)
    expect("lsgan_g perfect", lsgan_g_loss(ones), 0.0)
    expect("lsgan_d at 0.5", lsgan_d_loss(halves, halves), 0.5)
    expect("lsgan_g at 0.5", lsgan_g_loss(halves), 0.25)
    feats = [[rng.standard_normal((2, 3)) for _ in range(4)]]
    expect("fm identity", feature_matching_loss(feats, feats), 0.0)
    s = np.abs(rng.standard_normal((6, 9))) + 0.1
    expect("sc identity", spectral_convergence(s, s), 0.0)
    expect("sc 2x", spectral_convergence(s, 2.0 * s), 1.0)
    expect("mag 2x", stft_magnitude_loss(s, 2.0 * s), math.log(2.0))
    x = rng.standard_normal(2048)
    expect("mr_stft identity",
           mr_stft_loss(x, x, ((256, 64, 128), (128, 32, 64))), 0.0)
    expect("total unit components",
           total_generator_loss(1, 1, 1, 1, 1, 1, 1, LossWeights()), 12.5)

    if failures:
        return CheckResult("loss_identities", False, "; ".join(failures))
    return CheckResult("loss_identities", True,
                       f"all closed forms within {tol}")


def check_param_count(bundle: WeightBundle = None,
                      model_cfg: ModelConfig = None,
                      vocoder_cfg: VocoderConfig = None,
                      seed: int = 0) -> CheckResult:
    bundle = bundle or init_random_weights(model_cfg, vocoder_cfg, seed=seed)
    report = count_parameters(bundle, GENERATOR_PREFIXES)
    for prefix in GENERATOR_PREFIXES:
        if report.per_module.get(prefix, 0) == 0:
            return CheckResult("param_count", False,
                               f"no parameters under '{prefix}'\n"
                               + report.breakdown())
    lo = PARAM_TARGET * (1 - PARAM_REL_TOL)
    hi = PARAM_TARGET * (1 + PARAM_REL_TOL)
    ok = lo <= report.total <= hi
    deviation = 100.0 * (report.total - PARAM_TARGET) / PARAM_TARGET
    detail = (f"total {report.total:,} vs target {PARAM_TARGET:,} "
              f"({deviation:+.1f}%, band +/-{PARAM_REL_TOL:.0%})\n"
              + report.breakdown())
    return CheckResult("param_count", ok, detail)


def run_all(bundle: WeightBundle = None, model_cfg: ModelConfig = None,
            vocoder_cfg: VocoderConfig = None, bank: PqmfBank = None,
            seed: int = 0) -> list:
    """The full suite. A provided bundle is used for the structural checks;

    otherwise a seeded random one is built once and shared.
    """
    if bundle is None:
        bundle = init_random_weights(model_cfg, vocoder_cfg, seed=seed)
    return [
        check_pqmf_roundtrip(bank, seed=seed),
        check_rate_identity(bundle, vocoder_cfg, seed=seed),
        check_loss_identities(),
        check_param_count(bundle, model_cfg, vocoder_cfg, seed=seed),
    ]
