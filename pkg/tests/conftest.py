import numpy as np
import pytest

from le2e import (
    ModelConfig,
    PqmfBank,
    VocoderConfig,
    init_random_weights,
    pqmf_design,
)

# one line per acceptance criterion, printed after the run regardless of
# output capture; tests append via record_criterion before asserting
ACCEPTANCE_LINES = []


def record_criterion(name: str, passed: bool, detail: str):
    status = "PASS" if passed else "FAIL"
    ACCEPTANCE_LINES.append(f"[{status}] {name}: {detail}")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def tiny_model_config(**overrides):
    base = dict(
        vocab_size=13,
        hidden=16,
        heads=2,
        attention_dim=8,
        encoder_kernels=(3, 5),
        decoder_kernels=(3, 3),
        dur_layers=2,
        dur_kernel=3,
        pitch_layers=2,
        pitch_kernel=3,
        pitch_bins=256,
        sample_rate=1600,
        frame_hop=16,
    )
    base.update(overrides)
    return ModelConfig(**base)


def tiny_vocoder_config(**overrides):
    base = dict(
        upsample_factors=(2, 2),
        up_channels=(8, 4),
        up_kernels=(4, 4),
        resblocks_per_stage=2,
        res_dilations=(1, 3),
        res_kernel=3,
        leaky_slope=0.2,
        out_kernel=7,
        subbands=4,
        input_channels=16,
        stem_channels=12,
    )
    base.update(overrides)
    return VocoderConfig(**base)


def tiny_bank():
    return pqmf_design(subbands=4, taps=62, cutoff_ratio=0.142, beta=9.0)


@pytest.fixture
def tiny_cfg():
    return tiny_model_config()


@pytest.fixture
def tiny_voc_cfg():
    return tiny_vocoder_config()


@pytest.fixture
def tiny_weights(tiny_cfg, tiny_voc_cfg):
    return init_random_weights(tiny_cfg, tiny_voc_cfg, seed=7)


def full_bank() -> PqmfBank:
    return pqmf_design()
