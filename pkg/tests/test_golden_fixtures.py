"""Golden fixture tests.

The fixtures/ tree at the repository root is produced by a separate
export tool with its own reference implementations. Each directory holds
inputs.le2e, expected.le2e and meta.json; this suite only assumes that
layout, loads both tensor files through the public v1 reader, and drives
public engine APIs (or the CLI, for the *_cli oracles). Agreement within
the per-fixture tolerance means two codebases that share nothing but the
documented formats computed the same numbers.
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from le2e.acoustic import ModelConfig, acoustic_forward, length_regulate
from le2e.audio_io import encode_pcm16, read_wav, write_wav
from le2e.losses import (DEFAULT_STFT_RESOLUTIONS, duration_loss,
                         feature_matching_loss, lsgan_d_loss, lsgan_g_loss,
                         mr_stft_loss, pitch_ce_loss, spectral_convergence,
                         stft_magnitude_loss, total_generator_loss)
from le2e.numerics import (StftConfig, conv1d, conv2d, conv_transpose1d,
                           layer_norm, mel_filterbank, mel_spectrogram,
                           multi_head_self_attention, stft)
from le2e.synthesis import Synthesizer
from le2e.vocoder import (VocoderConfig, pqmf_analysis, pqmf_design,
                          pqmf_synthesis)
from le2e.weights import load_bundle

FIXTURE_ROOT = Path(__file__).resolve().parent.parent / "fixtures"


def _fixture_dirs():
    if not FIXTURE_ROOT.is_dir():
        return []
    return sorted(p for p in FIXTURE_ROOT.iterdir()
                  if (p / "meta.json").is_file())


def _close(actual, expected, tol, what):
    actual = np.asarray(actual, dtype=np.float64)
    expected = np.asarray(expected, dtype=np.float64)
    assert actual.shape == expected.shape, \
        f"{what}: shape {actual.shape} vs expected {expected.shape}"
    worst = float(np.max(np.abs(actual - expected)))
    assert worst <= tol, f"{what}: worst |diff| {worst:.3g} > tol {tol:g}"


def _ints(arr):
    return np.asarray(arr, dtype=np.float64).round().astype(np.int64)


def _configs(meta):
    def build(cls, section):
        kwargs = {k: tuple(v) if isinstance(v, list) else v
                  for k, v in meta["config"][section].items()}
        return cls(**kwargs)
    return build(ModelConfig, "model"), build(VocoderConfig, "vocoder")


# --- one handler per oracle id -------------------------------------------


def _run_conv1d(meta, inp, exp, tol, fdir, tmp):
    p = meta["params"]
    y = conv1d(inp["x"], inp["weight"], inp["bias"], dilation=p["dilation"],
               groups=p["groups"], padding=p["padding"])
    _close(y, exp["y"], tol, "conv1d")


def _run_conv_transpose1d(meta, inp, exp, tol, fdir, tmp):
    y = conv_transpose1d(inp["x"], inp["weight"], inp["bias"],
                         stride=meta["params"]["stride"])
    _close(y, exp["y"], tol, "conv_transpose1d")


def _run_conv2d(meta, inp, exp, tol, fdir, tmp):
    p = meta["params"]
    y = conv2d(inp["x"], inp["weight"], inp["bias"],
               stride=tuple(p["stride"]), padding=tuple(p["padding"]))
    _close(y, exp["y"], tol, "conv2d")


def _run_attention(meta, inp, exp, tol, fdir, tmp):
    y = multi_head_self_attention(
        inp["x"], inp["wq"], inp["wk"], inp["wv"], inp["wo"],
        meta["params"]["heads"], bq=inp["bq"], bk=inp["bk"],
        bv=inp["bv"], bo=inp["bo"])
    _close(y, exp["y"], tol, "attention")


def _run_layer_norm(meta, inp, exp, tol, fdir, tmp):
    _close(layer_norm(inp["x"], inp["gamma"], inp["beta"]), exp["y"], tol,
           "layer_norm")


def _run_length_regulator(meta, inp, exp, tol, fdir, tmp):
    y = length_regulate(inp["encoded"], _ints(inp["durations"]))
    _close(y, exp["y"], tol, "length_regulate")


def _run_stft(meta, inp, exp, tol, fdir, tmp):
    p = meta["params"]
    cfg = StftConfig(p["fft_size"], p["hop_length"], p["win_length"])
    _close(stft(inp["audio"], cfg), exp["magnitude"], tol, "stft")


def _run_mel(meta, inp, exp, tol, fdir, tmp):
    p = meta["params"]
    fb = mel_filterbank(p["n_mels"], p["sample_rate"], p["fft_size"],
                        p["f_min"], p["f_max"])
    _close(fb.weights, exp["filterbank"], tol, "mel filterbank")
    cfg = StftConfig(p["fft_size"], p["hop_length"], p["win_length"])
    _close(mel_spectrogram(inp["audio"], cfg, fb), exp["mel"], tol,
           "mel spectrogram")


def _run_pqmf(meta, inp, exp, tol, fdir, tmp):
    p = meta["params"]
    bank = pqmf_design(p["taps"], p["cutoff_ratio"], p["beta"],
                       p["subbands"])
    _close(bank.analysis_filters, exp["analysis_filters"], tol,
           "analysis filters")
    _close(bank.synthesis_filters, exp["synthesis_filters"], tol,
           "synthesis filters")
    _close(pqmf_analysis(inp["audio"], bank), exp["bands"], tol, "bands")
    _close(pqmf_synthesis(exp["bands"], bank), exp["reconstruction"], tol,
           "reconstruction")


def _run_wav_io(meta, inp, exp, tol, fdir, tmp):
    pcm = encode_pcm16(inp["samples"])
    _close(pcm, exp["pcm"], tol, "pcm encode")
    path = tmp / "roundtrip.wav"
    write_wav(path, inp["samples"], meta["params"]["sample_rate"])
    decoded, rate = read_wav(path)
    assert rate == meta["params"]["sample_rate"]
    _close(decoded, exp["decoded"], tol, "wav round trip")


def _run_loss_duration(meta, inp, exp, tol, fdir, tmp):
    loss = duration_loss(inp["pred_log"], inp["oracle_log"])
    _close(loss, exp["loss"][0], tol, "duration loss")


def _run_loss_pitch_ce(meta, inp, exp, tol, fdir, tmp):
    loss = pitch_ce_loss(inp["logits"], _ints(inp["targets"]))
    _close(loss, exp["loss"][0], tol, "pitch CE loss")


def _run_loss_lsgan(meta, inp, exp, tol, fdir, tmp):
    n = meta["params"]["discriminators"]
    real = [inp[f"real.{i}"] for i in range(n)]
    fake = [inp[f"fake.{i}"] for i in range(n)]
    _close(lsgan_d_loss(real, fake), exp["d_loss"][0], tol, "lsgan d")
    _close(lsgan_g_loss(fake), exp["g_loss"][0], tol, "lsgan g")


def _run_loss_fm(meta, inp, exp, tol, fdir, tmp):
    layers = meta["params"]["layers"]
    real = [[inp[f"real.{d}.{i}"] for i in range(n)]
            for d, n in enumerate(layers)]
    fake = [[inp[f"fake.{d}.{i}"] for i in range(n)]
            for d, n in enumerate(layers)]
    _close(feature_matching_loss(real, fake), exp["loss"][0], tol,
           "feature matching")


def _run_loss_spectral(meta, inp, exp, tol, fdir, tmp):
    _close(spectral_convergence(inp["s"], inp["s_hat"]), exp["sc"][0], tol,
           "spectral convergence")
    _close(stft_magnitude_loss(inp["s"], inp["s_hat"]), exp["mag"][0], tol,
           "magnitude loss")


def _run_loss_mr_stft(meta, inp, exp, tol, fdir, tmp):
    resolutions = tuple(tuple(r) for r in meta["params"]["resolutions"])
    # the fixture pins the engine's documented default resolutions
    assert resolutions == DEFAULT_STFT_RESOLUTIONS
    loss = mr_stft_loss(inp["x"], inp["x_hat"], resolutions)
    _close(loss, exp["loss"][0], tol, "mr-stft loss")


def _run_loss_total(meta, inp, exp, tol, fdir, tmp):
    total = total_generator_loss(*(float(inp[k][0]) for k in
                                   ("dur", "f0", "gan_g", "fm", "mel",
                                    "stft_full", "stft_sub")))
    _close(total, exp["total"][0], tol, "total loss")


def _run_loss_report_cli(meta, inp, exp, tol, fdir, tmp):
    ref_path = fdir / "ref.wav"
    pred_path = fdir / "pred.wav"
    # the WAVs are bound to the stored tensors, then to the CLI output
    decoded, rate = read_wav(ref_path)
    assert rate == meta["params"]["sample_rate"]
    _close(decoded, inp["ref_decoded"], 1e-7, "ref.wav decode")
    decoded, _ = read_wav(pred_path)
    _close(decoded, inp["pred_decoded"], 1e-7, "pred.wav decode")

    proc = subprocess.run(
        [sys.executable, "-m", "le2e", "loss-report", str(ref_path),
         str(pred_path), "--dur-pred", meta["dur_pred"],
         "--dur-oracle", meta["dur_oracle"], "--json"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    report = json.loads(proc.stdout)
    for key in meta["compare_keys"]:
        _close(report[key], exp[key][0], tol, f"loss-report {key}")
    # seed-dependent terms are not compared, but must exist and be finite
    for key in ("gan_g", "gan_d", "fm", "total"):
        assert np.isfinite(report[key]), f"{key} not finite"


def _run_acoustic_forward(meta, inp, exp, tol, fdir, tmp):
    mc, _ = _configs(meta)
    latent = acoustic_forward(_ints(inp["input.ids"]), inp, mc,
                              durations_override=_ints(
                                  inp["input.durations"]))
    _close(latent, exp["latent"], tol, "acoustic latent")


def _run_synthesize(meta, inp, exp, tol, fdir, tmp):
    mc, vc = _configs(meta)
    wave = Synthesizer(inp, mc, vc).synthesize(
        _ints(inp["input.ids"]), _ints(inp["input.durations"]))
    _close(wave, exp["wave"], tol, "waveform")


def _run_synth_cli(meta, inp, exp, tol, fdir, tmp):
    cfg_path = tmp / "config.json"
    cfg_path.write_text(json.dumps(meta["config"]))
    out_path = tmp / "out.wav"
    proc = subprocess.run(
        [sys.executable, "-m", "le2e", "synth",
         "--weights", str(fdir / "inputs.le2e"), "--config", str(cfg_path),
         "--phonemes", meta["cli"]["phonemes"],
         "--durations", meta["cli"]["durations"], "--out", str(out_path)],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    wave, rate = read_wav(out_path)
    assert rate == meta["config"]["model"]["sample_rate"]
    _close(wave, exp["wave"], tol, "CLI waveform")


_HANDLERS = {
    "conv1d": _run_conv1d,
    "conv_transpose1d": _run_conv_transpose1d,
    "conv2d": _run_conv2d,
    "attention": _run_attention,
    "layer_norm": _run_layer_norm,
    "length_regulator": _run_length_regulator,
    "stft": _run_stft,
    "mel_spectrogram": _run_mel,
    "pqmf": _run_pqmf,
    "wav_io": _run_wav_io,
    "loss_duration": _run_loss_duration,
    "loss_pitch_ce": _run_loss_pitch_ce,
    "loss_lsgan": _run_loss_lsgan,
    "loss_feature_matching": _run_loss_fm,
    "loss_spectral": _run_loss_spectral,
    "loss_mr_stft": _run_loss_mr_stft,
    "loss_total": _run_loss_total,
    "loss_report_cli": _run_loss_report_cli,
    "acoustic_forward": _run_acoustic_forward,
    "synthesize": _run_synthesize,
    "synth_cli": _run_synth_cli,
}


def test_fixture_tree_present():
    assert FIXTURE_ROOT.is_dir(), "fixtures/ missing at the repository root"
    assert len(_fixture_dirs()) >= 20


@pytest.mark.parametrize("fdir", _fixture_dirs(), ids=lambda p: p.name)
def test_fixture(fdir, tmp_path):
    meta = json.loads((fdir / "meta.json").read_text())
    inputs = load_bundle(fdir / "inputs.le2e")
    expected = load_bundle(fdir / "expected.le2e")
    handler = _HANDLERS.get(meta["oracle"])
    assert handler is not None, f"no handler for oracle {meta['oracle']!r}"
    handler(meta, inputs, expected, float(meta["tolerance"]), fdir,
            tmp_path)
