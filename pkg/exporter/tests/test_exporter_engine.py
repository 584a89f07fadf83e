"""Acceptance checks that run the exporter against the installed engine.

Three criteria, one test each, each printing a [PASS] line on success:

  1. export -> engine load -> re-export is byte-identical
  2. exported bundles (tiny and full size) load with zero validation
     errors; the full bundle also passes the engine's own verify CLI
  3. tiny-config end to end: engine synthesis from an exported bundle
     matches the torch reference within 1e-3

The exporter package itself never touches le2e; these tests are the
boundary where the two meet, so they exercise only the public surface
(the weight file, load_bundle, Synthesizer, and the CLI).
"""

import json
import subprocess
import sys

import numpy as np
import torch

from export_oracle.export import export_checkpoint
from export_oracle.reference import (
    TINY_MODEL,
    TINY_VOCODER,
    RefModelConfig,
    RefVocoderConfig,
    build_reference,
    config_dicts,
    save_checkpoint,
)
from export_oracle.v1format import write_tensors

from le2e.acoustic import ModelConfig, acoustic_forward
from le2e.synthesis import Synthesizer
from le2e.vocoder import VocoderConfig
from le2e.weights import count_parameters, load_bundle

FULL_PARAM_TARGET = 3_710_000
FULL_PARAM_EXACT = 3_838_357


def _engine_configs(mc, vc):
    """Reference config dataclasses -> engine config dataclasses."""
    cfg = config_dicts(mc, vc)

    def detuple(d):
        return {k: tuple(v) if isinstance(v, list) else v for k, v in d.items()}

    return ModelConfig(**detuple(cfg["model"])), VocoderConfig(**detuple(cfg["vocoder"]))


def _export_reference(model, path):
    state = {k: v.numpy() for k, v in model.state_dict().items()}
    return export_checkpoint(state, out_path=str(path))


def test_acceptance_round_trip_byte_identity(tmp_path):
    model = build_reference(seed=3)
    first = tmp_path / "tiny.le2e"
    _export_reference(model, first)
    blob = first.read_bytes()

    bundle = load_bundle(str(first))
    second = tmp_path / "again.le2e"
    write_tensors(dict(bundle.items()), str(second))

    assert second.read_bytes() == blob
    print(f"\n[PASS] export -> engine load -> re-export byte-identical "
          f"({len(blob)} bytes, {len(bundle)} tensors)")


def test_acceptance_exported_bundles_load_clean(tmp_path):
    # Tiny: load_bundle raises on any structural problem, so a clean
    # return is the zero-validation-errors claim. Run a forward too.
    tiny_model = build_reference(seed=5)
    tiny_path = tmp_path / "tiny.le2e"
    _export_reference(tiny_model, tiny_path)
    tiny_bundle = load_bundle(str(tiny_path))
    mc, vc = _engine_configs(TINY_MODEL, TINY_VOCODER)
    latent = acoustic_forward(np.array([1, 2, 3, 4]), tiny_bundle, mc,
                              durations_override=np.array([2, 1, 0, 3]))
    assert latent.shape == (6, mc.hidden)
    assert np.isfinite(latent).all()

    # Full size: a checkpoint saved to disk, exported, counted, and then
    # handed to the engine's verify CLI.
    full_model = build_reference(RefModelConfig(), RefVocoderConfig(), seed=5)
    ckpt = tmp_path / "full.pt"
    save_checkpoint(full_model, str(ckpt))
    full_path = tmp_path / "full.le2e"
    manifest = export_checkpoint(str(ckpt), out_path=str(full_path))
    assert manifest.total_params == FULL_PARAM_EXACT

    report = count_parameters(load_bundle(str(full_path)))
    assert report.total == manifest.total_params
    assert abs(report.total - FULL_PARAM_TARGET) <= 0.15 * FULL_PARAM_TARGET

    proc = subprocess.run(
        [sys.executable, "-m", "le2e", "verify",
         "--weights", str(full_path), "--json"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    result = json.loads(proc.stdout)
    assert result["passed"]
    assert all(check["passed"] for check in result["checks"])

    print(f"\n[PASS] exported bundles load with zero validation errors "
          f"(tiny {len(tiny_bundle)} tensors; full {report.total:,} params, "
          f"verify CLI: {len(result['checks'])} checks green)")


def test_acceptance_tiny_e2e_golden(tmp_path):
    model = build_reference(seed=11)
    path = tmp_path / "tiny.le2e"
    _export_reference(model, path)
    bundle = load_bundle(str(path))
    mc, vc = _engine_configs(TINY_MODEL, TINY_VOCODER)

    ids = np.array([3, 1, 7, 2, 9, 4])
    durations = np.array([2, 4, 0, 3, 1, 2])

    with torch.no_grad():
        ref_latent, _ = model.acoustic(torch.as_tensor(ids),
                                       torch.as_tensor(durations))
    got_latent = acoustic_forward(ids, bundle, mc,
                                  durations_override=durations)
    latent_diff = float(np.max(np.abs(got_latent - ref_latent.numpy())))
    assert latent_diff < 1e-4

    ref_wave = model.synthesize(ids, durations)
    got_wave = Synthesizer(bundle, mc, vc).synthesize(ids, durations=durations)
    assert got_wave.shape == ref_wave.shape
    wave_diff = float(np.max(np.abs(got_wave.astype(np.float64) - ref_wave)))
    assert wave_diff < 1e-3

    print(f"\n[PASS] tiny e2e golden: engine vs reference wave "
          f"worst |diff| {wave_diff:.2e} < 1e-3 "
          f"(latent {latent_diff:.2e} < 1e-4, {ref_wave.shape[0]} samples)")
