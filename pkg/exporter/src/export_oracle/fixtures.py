"""Golden fixture generation.

Each fixture is a directory of three files:

    inputs.le2e     v1 tensor file holding the operation inputs
    expected.le2e   v1 tensor file holding the oracle outputs
    meta.json       oracle id, tolerance, seed, operation parameters

The engine repository walks these directories in its own test suite;
nothing here imports the engine. Expected values come from the naive
oracles, never from the code under test, so agreement means two
independent implementations landed on the same numbers.

v1 files carry float32 only, so integer inputs (phoneme ids, durations,
class targets) are stored as float32 and cast back by the consumer. The
model-level fixtures pack a full exported weight set into inputs.le2e
next to `input.`-prefixed tensors; their meta carries engine-keyword
config dicts. The loss_report fixture additionally ships a WAV pair,
written through the oracle PCM16 encoder.
"""

import json
import wave as wave_mod
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import oracles as orc
from .export import map_state
from .mapping import fuse_weight_norm
from .v1format import write_tensors

# engine defaults, restated here on purpose: the two sides must agree on
# these numbers without sharing a constant
STFT_RESOLUTIONS = ((1024, 120, 600), (2048, 240, 1200), (512, 50, 240))
PQMF_DEFAULTS = {"taps": 62, "cutoff_ratio": 0.142, "beta": 9.0,
                 "subbands": 4}


@dataclass(frozen=True)
class GoldenFixture:
    name: str
    oracle: str
    tolerance: float
    seed: int


def _f32(arr):
    """Round through float32: fixtures store f32, oracles must see the
    exact values the consumer will."""
    return np.asarray(arr, dtype=np.float32).astype(np.float64)


def _scalar(value):
    return np.array([value], dtype=np.float32)


def _write_wav(path, pcm, sample_rate):
    with wave_mod.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(sample_rate)
        fh.writeframes(np.asarray(pcm, dtype="<i2").tobytes())


def _emit(out_dir, name, oracle, tolerance, seed, inputs, expected,
          params=None, extra_meta=None):
    fdir = Path(out_dir) / name
    fdir.mkdir(parents=True, exist_ok=True)
    write_tensors({k: np.asarray(v, dtype=np.float32)
                   for k, v in inputs.items()}, fdir / "inputs.le2e")
    write_tensors({k: np.asarray(v, dtype=np.float32)
                   for k, v in expected.items()}, fdir / "expected.le2e")
    meta = {"name": name, "oracle": oracle, "tolerance": tolerance,
            "seed": seed, "params": params or {}}
    if extra_meta:
        meta.update(extra_meta)
    with open(fdir / "meta.json", "w") as fh:
        json.dump(meta, fh, indent=2)
        fh.write("\n")
    return GoldenFixture(name, oracle, tolerance, seed)


# ---------------------------------------------------------------------------
# kernel fixtures


def _fx_conv1d(rng):
    x = _f32(rng.standard_normal((6, 40)))
    w = _f32(rng.standard_normal((8, 6, 5)) * (6 * 5) ** -0.5)
    b = _f32(rng.standard_normal(8) * 0.1)
    # symmetric same padding for kernel 5 at dilation 2
    y = orc.conv1d_naive(x, w, b, dilation=2, pad=(4, 4))
    return ("conv1d", 1e-6, {"x": x, "weight": w, "bias": b}, {"y": y},
            {"dilation": 2, "groups": 1, "padding": "same"})


def _fx_conv1d_grouped(rng):
    x = _f32(rng.standard_normal((6, 33)))
    w = _f32(rng.standard_normal((8, 3, 4)) * (3 * 4) ** -0.5)
    b = _f32(rng.standard_normal(8) * 0.1)
    # even kernel: same padding is asymmetric, left 1 right 2
    y = orc.conv1d_naive(x, w, b, dilation=1, pad=(1, 2), groups=2)
    return ("conv1d", 1e-6, {"x": x, "weight": w, "bias": b}, {"y": y},
            {"dilation": 1, "groups": 2, "padding": "same"})


def _fx_conv_transpose1d(rng):
    x = _f32(rng.standard_normal((6, 20)))
    w = _f32(rng.standard_normal((6, 4, 6)) * (6 * 6) ** -0.5)
    b = _f32(rng.standard_normal(4) * 0.1)
    y = orc.conv_transpose1d_naive(x, w, b, stride=3)
    return ("conv_transpose1d", 1e-6,
            {"x": x, "weight": w, "bias": b}, {"y": y}, {"stride": 3})


def _fx_conv2d(rng):
    x = _f32(rng.standard_normal((3, 12, 10)))
    w = _f32(rng.standard_normal((5, 3, 3, 4)) * (3 * 3 * 4) ** -0.5)
    b = _f32(rng.standard_normal(5) * 0.1)
    y = orc.conv2d_naive(x, w, b, stride=(2, 2), pad=(1, 2))
    return ("conv2d", 1e-6, {"x": x, "weight": w, "bias": b}, {"y": y},
            {"stride": [2, 2], "padding": [1, 2]})


def _fx_attention(rng):
    d, a = 8, 8
    x = _f32(rng.standard_normal((11, d)))
    proj = {k: _f32(rng.standard_normal((d, a)) * d ** -0.5)
            for k in ("wq", "wk", "wv")}
    proj["wo"] = _f32(rng.standard_normal((a, d)) * a ** -0.5)
    biases = {k: _f32(rng.standard_normal(a) * 0.1)
              for k in ("bq", "bk", "bv", "bo")}
    y = orc.attention_naive(x, proj["wq"], proj["wk"], proj["wv"],
                            proj["wo"], 2, biases["bq"], biases["bk"],
                            biases["bv"], biases["bo"])
    return ("attention", 1e-6, {"x": x, **proj, **biases}, {"y": y},
            {"heads": 2})


def _fx_layer_norm(rng):
    x = _f32(rng.standard_normal((7, 9)) * 3.0)
    gamma = _f32(1.0 + rng.standard_normal(9) * 0.1)
    beta = _f32(rng.standard_normal(9) * 0.1)
    y = orc.layer_norm_naive(x, gamma, beta)
    return ("layer_norm", 1e-6,
            {"x": x, "gamma": gamma, "beta": beta}, {"y": y}, {})


def _fx_length_regulator(rng):
    enc = _f32(rng.standard_normal((5, 6)))
    durations = np.array([2, 0, 3, 1, 4])
    y = orc.length_regulate_naive(enc, durations)
    return ("length_regulator", 1e-7,
            {"encoded": enc, "durations": durations}, {"y": y}, {})


# ---------------------------------------------------------------------------
# spectral fixtures


def _fx_stft(rng):
    audio = _f32(rng.standard_normal(1000) * 0.5)
    mag = orc.stft_magnitude_naive(audio, 256, 64, 192)
    return ("stft", 1e-4, {"audio": audio}, {"magnitude": mag},
            {"fft_size": 256, "hop_length": 64, "win_length": 192})


def _fx_mel_spectrogram(rng):
    audio = _f32(rng.standard_normal(3000) * 0.3)
    fb = orc.mel_filterbank_naive(40, 22050, 512, 0.0, 8000.0)
    mel = orc.log_mel_naive(audio, 512, 128, 512, fb)
    return ("mel_spectrogram", 1e-4, {"audio": audio},
            {"mel": mel, "filterbank": fb},
            {"fft_size": 512, "hop_length": 128, "win_length": 512,
             "n_mels": 40, "sample_rate": 22050, "f_min": 0.0,
             "f_max": 8000.0})


def _fx_pqmf(rng):
    n = np.arange(1600, dtype=np.float64)
    audio = _f32(0.6 * np.sin(2 * np.pi * 0.01 * n)
                 + 0.3 * np.sin(2 * np.pi * 0.11 * n + 1.0)
                 + 0.05 * rng.standard_normal(1600))
    analysis, synthesis = orc.pqmf_filters_naive(**{
        k: PQMF_DEFAULTS[k] for k in ("taps", "cutoff_ratio", "beta")},
        subbands=PQMF_DEFAULTS["subbands"])
    bands = orc.pqmf_analysis_naive(audio, analysis, 4)
    recon = orc.pqmf_synthesis_naive(bands, synthesis, 4)
    return ("pqmf", 1e-5, {"audio": audio},
            {"analysis_filters": analysis, "synthesis_filters": synthesis,
             "bands": bands, "reconstruction": recon},
            dict(PQMF_DEFAULTS))


def _fx_wav_io(rng):
    samples = _f32(rng.uniform(-1.3, 1.3, 333))  # tails exercise the clamp
    pcm = orc.encode_pcm16_naive(samples)
    decoded = orc.decode_pcm16_naive(pcm)
    return ("wav_io", 1e-7, {"samples": samples},
            {"pcm": pcm, "decoded": decoded}, {"sample_rate": 8000})


# ---------------------------------------------------------------------------
# loss fixtures


def _fx_loss_duration(rng):
    pred = _f32(rng.standard_normal(7))
    oracle = _f32(pred + 0.3 * rng.standard_normal(7))
    loss = orc.duration_loss_naive(pred, oracle)
    return ("loss_duration", 1e-6, {"pred_log": pred, "oracle_log": oracle},
            {"loss": _scalar(loss)}, {})


def _fx_loss_pitch_ce(rng):
    logits = _f32(rng.standard_normal((9, 16)) * 2.0)
    targets = rng.integers(0, 16, 9)
    loss = orc.pitch_ce_naive(logits, targets)
    return ("loss_pitch_ce", 1e-6, {"logits": logits, "targets": targets},
            {"loss": _scalar(loss)}, {})


def _fx_loss_lsgan(rng):
    real = [_f32(1.0 + 0.2 * rng.standard_normal((1, 24))),
            _f32(1.0 + 0.2 * rng.standard_normal((1, 16)))]
    fake = [_f32(0.2 * rng.standard_normal((1, 24))),
            _f32(0.2 * rng.standard_normal((1, 16)))]
    inputs = {f"real.{i}": r for i, r in enumerate(real)}
    inputs.update({f"fake.{i}": f for i, f in enumerate(fake)})
    return ("loss_lsgan", 1e-6, inputs,
            {"d_loss": _scalar(orc.lsgan_d_naive(real, fake)),
             "g_loss": _scalar(orc.lsgan_g_naive(fake))},
            {"discriminators": 2})


def _fx_loss_feature_matching(rng):
    shapes = [[(4, 10), (8, 5), (3, 7)], [(6, 6), (2, 12)]]
    real = [[_f32(rng.standard_normal(s)) for s in disc] for disc in shapes]
    fake = [[_f32(r + 0.1 * rng.standard_normal(r.shape)) for r in disc]
            for disc in real]
    inputs = {}
    for d, disc in enumerate(real):
        for l, arr in enumerate(disc):
            inputs[f"real.{d}.{l}"] = arr
            inputs[f"fake.{d}.{l}"] = fake[d][l]
    loss = orc.feature_matching_naive(real, fake)
    return ("loss_feature_matching", 1e-6, inputs,
            {"loss": _scalar(loss)}, {"layers": [3, 2]})


def _fx_loss_spectral(rng):
    s = _f32(np.abs(rng.standard_normal((20, 65))) + 0.05)
    s_hat = _f32(s * (1.0 + 0.1 * rng.standard_normal((20, 65)))
                 + 0.02 * np.abs(rng.standard_normal((20, 65))))
    return ("loss_spectral", 1e-6, {"s": s, "s_hat": s_hat},
            {"sc": _scalar(orc.spectral_convergence_naive(s, s_hat)),
             "mag": _scalar(orc.stft_magnitude_loss_naive(s, s_hat))}, {})


def _fx_loss_mr_stft(rng):
    n = np.arange(4096, dtype=np.float64)
    x = _f32(0.5 * np.sin(2 * np.pi * 0.013 * n)
             + 0.1 * rng.standard_normal(4096))
    x_hat = _f32(x + 0.05 * rng.standard_normal(4096))
    loss = orc.mr_stft_naive(x, x_hat, STFT_RESOLUTIONS)
    return ("loss_mr_stft", 1e-5, {"x": x, "x_hat": x_hat},
            {"loss": _scalar(loss)},
            {"resolutions": [list(r) for r in STFT_RESOLUTIONS]})


def _fx_loss_total(rng):
    # components round through f32 storage; the total must be computed
    # from the exact values the consumer reads back
    parts = {k: float(np.float32(np.abs(rng.standard_normal()))) for k in
             ("dur", "f0", "gan_g", "fm", "mel", "stft_full", "stft_sub")}
    total = orc.total_loss_naive(**parts)
    # tolerance floor: the f32 storage of the expected total alone costs
    # up to half an ulp, ~4e-7 at these magnitudes
    return ("loss_total", 1e-6,
            {k: _scalar(v) for k, v in parts.items()},
            {"total": _scalar(total)}, {})


_BUILDERS = (
    ("conv1d", _fx_conv1d),
    ("conv1d_grouped", _fx_conv1d_grouped),
    ("conv_transpose1d", _fx_conv_transpose1d),
    ("conv2d", _fx_conv2d),
    ("attention", _fx_attention),
    ("layer_norm", _fx_layer_norm),
    ("length_regulator", _fx_length_regulator),
    ("stft", _fx_stft),
    ("mel_spectrogram", _fx_mel_spectrogram),
    ("pqmf", _fx_pqmf),
    ("wav_io", _fx_wav_io),
    ("loss_duration", _fx_loss_duration),
    ("loss_pitch_ce", _fx_loss_pitch_ce),
    ("loss_lsgan", _fx_loss_lsgan),
    ("loss_feature_matching", _fx_loss_feature_matching),
    ("loss_spectral", _fx_loss_spectral),
    ("loss_mr_stft", _fx_loss_mr_stft),
    ("loss_total", _fx_loss_total),
)


# ---------------------------------------------------------------------------
# loss report golden (WAV pair plus deterministic component values)


def _loss_report_fixture(out_dir, seed, rng):
    sr = 22050
    n = np.arange(8192, dtype=np.float64) / sr
    ref = (0.5 * np.sin(2 * np.pi * 220.0 * n)
           + 0.2 * np.sin(2 * np.pi * 3500.0 * n)
           + 0.05 * rng.standard_normal(8192))
    pred = (0.5 * np.sin(2 * np.pi * 220.0 * n + 0.08)
            + 0.18 * np.sin(2 * np.pi * 3600.0 * n)
            + 0.07 * rng.standard_normal(8192))

    pcm_ref = orc.encode_pcm16_naive(ref)
    pcm_pred = orc.encode_pcm16_naive(pred)
    dec_ref = orc.decode_pcm16_naive(pcm_ref)
    dec_pred = orc.decode_pcm16_naive(pcm_pred)

    fb = orc.mel_filterbank_naive(80, sr, 1024, 0.0, 8000.0)
    # the engine emits float32 log mels; mirror that boundary before L1
    lm_ref = _f32(orc.log_mel_naive(dec_ref, 1024, 256, 1024, fb))
    lm_pred = _f32(orc.log_mel_naive(dec_pred, 1024, 256, 1024, fb))
    mel = float(np.mean(np.abs(lm_ref - lm_pred)))

    full = orc.mr_stft_naive(dec_ref, dec_pred, STFT_RESOLUTIONS)
    analysis, _ = orc.pqmf_filters_naive(62, 0.142, 9.0, 4)
    bands_ref = orc.pqmf_analysis_naive(dec_ref, analysis, 4)
    bands_pred = orc.pqmf_analysis_naive(dec_pred, analysis, 4)
    sub_res = orc.subband_resolutions_naive(STFT_RESOLUTIONS, 4)
    sub = float(np.mean([orc.mr_stft_naive(bands_ref[b], bands_pred[b],
                                           sub_res)
                         for b in range(4)]))

    dur_pred = "0.2 1.1 2.3"
    dur_oracle = "0.0 1.0 2.0"
    dur = orc.duration_loss_naive([float(v) for v in dur_pred.split()],
                                  [float(v) for v in dur_oracle.split()])

    fx = _emit(out_dir, "loss_report", "loss_report_cli", 5e-4, seed,
               {"ref_decoded": dec_ref, "pred_decoded": dec_pred},
               {"dur": _scalar(dur), "f0": _scalar(0.0),
                "mel": _scalar(mel), "stft_full": _scalar(full),
                "stft_sub": _scalar(sub)},
               params={"sample_rate": sr},
               extra_meta={
                   "compare_keys": ["dur", "f0", "mel", "stft_full",
                                    "stft_sub"],
                   "dur_pred": dur_pred,
                   "dur_oracle": dur_oracle,
                   "wav_files": ["ref.wav", "pred.wav"],
               })
    fdir = Path(out_dir) / "loss_report"
    _write_wav(fdir / "ref.wav", pcm_ref, sr)
    _write_wav(fdir / "pred.wav", pcm_pred, sr)
    return fx


# ---------------------------------------------------------------------------
# model-level goldens from the torch reference


def _packed_weights(model):
    state = {k: v.numpy() for k, v in model.state_dict().items()}
    return map_state(fuse_weight_norm(state))


def _model_fixtures(out_dir, seed, rng):
    from .reference import TINY_MODEL, TINY_VOCODER, build_reference
    from .reference import config_dicts
    import torch

    model = build_reference(TINY_MODEL, TINY_VOCODER, seed=seed)
    weights = _packed_weights(model)
    config = config_dicts(TINY_MODEL, TINY_VOCODER)
    out = []

    def packed(ids, durations):
        inputs = dict(weights)
        inputs["input.ids"] = np.asarray(ids, dtype=np.float32)
        inputs["input.durations"] = np.asarray(durations, dtype=np.float32)
        return inputs

    # acoustic half only: latents for fixed durations
    ids = rng.integers(0, TINY_MODEL.vocab_size, 6)
    durations = np.array([3, 0, 4, 2, 1, 5])
    with torch.no_grad():
        latent, _ = model.acoustic(torch.as_tensor(ids),
                                   torch.as_tensor(durations))
    out.append(_emit(out_dir, "tiny_acoustic", "acoustic_forward", 1e-4,
                     seed, packed(ids, durations),
                     {"latent": latent.numpy()}, extra_meta={
                         "config": config}))

    # the full stack to a waveform
    ids = rng.integers(0, TINY_MODEL.vocab_size, 7)
    durations = np.array([2, 4, 0, 3, 1, 2, 4])
    wave = model.synthesize(ids, durations)
    out.append(_emit(out_dir, "tiny_e2e", "synthesize", 1e-3, seed,
                     packed(ids, durations), {"wave": wave},
                     extra_meta={"config": config}))

    # through the CLI: reference waveform after the PCM16 round trip
    ids = rng.integers(0, TINY_MODEL.vocab_size, 5)
    durations = np.array([1, 3, 2, 0, 5])
    wave = orc.decode_pcm16_naive(orc.encode_pcm16_naive(
        model.synthesize(ids, durations)))
    out.append(_emit(out_dir, "cli_synth", "synth_cli", 2e-3, seed,
                     packed(ids, durations), {"wave": wave},
                     extra_meta={
                         "config": config,
                         "cli": {"phonemes": " ".join(str(i) for i in ids),
                                 "durations": " ".join(str(d) for d
                                                       in durations)}}))
    return out


def generate_fixtures(seed: int = 0, out_dir="fixtures"):
    """Write every fixture under out_dir; returns the GoldenFixture list.

    Deterministic for a fixed seed: each fixture derives its own RNG from
    (seed, index), so inserting a fixture never reshuffles the others.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for idx, (name, builder) in enumerate(_BUILDERS):
        rng = np.random.default_rng([seed, idx])
        oracle, tol, inputs, expected, params = builder(rng)
        written.append(_emit(out_dir, name, oracle, tol, seed,
                             inputs, expected, params))
    written.append(_loss_report_fixture(
        out_dir, seed, np.random.default_rng([seed, 100])))
    written.extend(_model_fixtures(
        out_dir, seed, np.random.default_rng([seed, 101])))
    return written
