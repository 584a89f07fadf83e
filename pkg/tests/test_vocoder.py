import numpy as np
import pytest

from conftest import tiny_bank
from le2e import (
    ConfigError,
    InputError,
    PqmfBank,
    VocoderConfig,
    pqmf_analysis,
    pqmf_design,
    pqmf_synthesis,
    residual_stack_forward,
    vocoder_forward,
)
from le2e.vocoder import (
    DEFAULT_PQMF_BETA,
    DEFAULT_PQMF_CUTOFF,
    DEFAULT_PQMF_TAPS,
    prototype_lowpass,
)


class TestPrototype:
    def test_symmetric(self):
        h = prototype_lowpass(62, 0.142, 9.0)
        assert h.shape == (63,)
        np.testing.assert_allclose(h, h[::-1], atol=1e-12)

    def test_center_value_is_cutoff_times_window_peak(self):
        h = prototype_lowpass(62, 0.142, 9.0)
        # Kaiser window peaks at 1.0 in the middle
        np.testing.assert_allclose(h[31], 0.142, rtol=1e-6)

    def test_dc_gain_tracks_cutoff(self):
        # a lowpass at ratio c keeps roughly a 2c slice of the spectrum, so
        # sum(h) (the DC gain) should sit near 1 after the window shaves the
        # tails; allow 5%
        for cutoff in (0.1, 0.142, 0.2):
            h = prototype_lowpass(62, cutoff, 9.0)
            dc = float(np.sum(h))
            assert abs(dc - 1.0) < 0.05, (cutoff, dc)


class TestPqmfDesign:
    def test_default_bank_shape_and_delay(self):
        bank = pqmf_design()
        assert bank.subbands == 4
        assert bank.analysis_filters.shape == (4, DEFAULT_PQMF_TAPS + 1)
        assert bank.synthesis_filters.shape == (4, DEFAULT_PQMF_TAPS + 1)
        assert bank.delay == DEFAULT_PQMF_TAPS

    def test_rejects_odd_taps(self):
        with pytest.raises(ConfigError):
            pqmf_design(taps=63)

    def test_rejects_bad_cutoff(self):
        with pytest.raises(ConfigError):
            pqmf_design(cutoff_ratio=0.0)
        with pytest.raises(ConfigError):
            pqmf_design(cutoff_ratio=1.0)


class TestPqmfAnalysis:
    def test_band_zero_captures_low_sine(self):
        bank = pqmf_design()
        sr = 22050
        t = np.arange(8192) / sr
        audio = np.sin(2 * np.pi * 200.0 * t).astype(np.float32)
        bands = pqmf_analysis(audio, bank)
        energy = (bands ** 2).sum(axis=1)
        assert energy[0] / energy.sum() > 0.90

    def test_linearity(self, rng):
        bank = pqmf_design()
        x = rng.standard_normal(1024)
        y = rng.standard_normal(1024)
        lhs = pqmf_analysis(2.0 * x + 3.0 * y, bank)
        rhs = 2.0 * pqmf_analysis(x, bank) + 3.0 * pqmf_analysis(y, bank)
        np.testing.assert_allclose(lhs, rhs, atol=1e-6)

    def test_shapes_and_tail_padding(self, rng):
        bank = pqmf_design()
        assert pqmf_analysis(rng.standard_normal(1024), bank).shape == (4, 256)
        assert pqmf_analysis(rng.standard_normal(1022), bank).shape == (4, 256)

    def test_synthesis_rejects_wrong_band_count(self, rng):
        bank = pqmf_design()
        with pytest.raises(InputError):
            pqmf_synthesis(rng.standard_normal((3, 64)), bank)

    def test_roundtrip_delay_is_taps(self, rng):
        bank = pqmf_design()
        x = rng.standard_normal(4096)
        y = pqmf_synthesis(pqmf_analysis(x, bank), bank)
        d = bank.delay
        err = y[d:] - x[:len(x) - d]
        snr = 10 * np.log10((x[:len(x) - d] ** 2).sum() / (err ** 2).sum())
        assert snr > 35.0
        # and the delay is exactly `taps`: one sample off collapses the SNR
        for wrong in (d - 1, d + 1):
            err_w = y[wrong:len(x)] - x[:len(x) - wrong]
            snr_w = 10 * np.log10((x ** 2).sum() / (err_w ** 2).sum())
            assert snr_w < 10.0


class TestResidualStack:
    def _zero_stack(self, c: int, prefix: str, dilations, kernel=3):
        w = {}
        for j, _ in enumerate(dilations):
            w[f"{prefix}.{j}.conv1.weight"] = np.zeros((c, c, kernel),
                                                       dtype=np.float32)
            w[f"{prefix}.{j}.conv1.bias"] = np.zeros(c, dtype=np.float32)
            w[f"{prefix}.{j}.conv2.weight"] = np.zeros((c, c, 1),
                                                       dtype=np.float32)
            w[f"{prefix}.{j}.conv2.bias"] = np.zeros(c, dtype=np.float32)
        return w

    def test_zero_weights_identity(self, rng):
        x = rng.standard_normal((6, 40), dtype=np.float32)
        w = self._zero_stack(6, "s", (1, 3, 9, 27))
        out = residual_stack_forward(x, w, "s")
        np.testing.assert_array_equal(out, x)

    def test_receptive_field_bounded(self, rng):
        # dilations (1,3,9,27) at kernel 3 spread at most 2*(1+3+9+27) = 80
        # samples, so a point change cannot reach past +/-40
        c, t = 4, 200
        w = {}
        g = np.random.default_rng(3)
        for j, _ in enumerate((1, 3, 9, 27)):
            w[f"s.{j}.conv1.weight"] = g.standard_normal(
                (c, c, 3)).astype(np.float32) * 0.2
            w[f"s.{j}.conv1.bias"] = np.zeros(c, dtype=np.float32)
            w[f"s.{j}.conv2.weight"] = g.standard_normal(
                (c, c, 1)).astype(np.float32) * 0.2
            w[f"s.{j}.conv2.bias"] = np.zeros(c, dtype=np.float32)
        x = rng.standard_normal((c, t), dtype=np.float32)
        x2 = x.copy()
        x2[:, 100] += 1.0
        a = residual_stack_forward(x, w, "s")
        b = residual_stack_forward(x2, w, "s")
        diff = np.abs(a - b).max(axis=0)
        assert diff[100] > 0
        assert np.all(diff[:60] == 0)
        assert np.all(diff[141:] == 0)
        assert np.any(diff[60:141] > 0)


class TestVocoderConfig:
    def test_total_upsampling(self):
        cfg = VocoderConfig()
        assert cfg.total_upsampling == 300
        assert cfg.total_upsampling == 3 * 5 * 5 * 4

    def test_rejects_kernel_below_stride(self):
        with pytest.raises(ConfigError):
            VocoderConfig(upsample_factors=(3, 5, 5), up_kernels=(2, 10, 10))

    def test_rejects_mismatched_lists(self):
        with pytest.raises(ConfigError):
            VocoderConfig(upsample_factors=(3, 5), up_kernels=(6, 10, 10))


class TestVocoderForward:
    def test_rate_identity_tiny(self, rng, tiny_voc_cfg, tiny_cfg,
                                tiny_weights):
        bank = tiny_bank()
        for t in (1, 2, 7, 31):
            latent = rng.standard_normal((t, tiny_voc_cfg.input_channels),
                                         dtype=np.float32)
            audio = vocoder_forward(latent, tiny_weights, tiny_voc_cfg, bank)
            assert audio.shape == (t * tiny_voc_cfg.total_upsampling,)

    def test_output_bounded(self, rng, tiny_voc_cfg, tiny_weights):
        latent = rng.standard_normal((5, tiny_voc_cfg.input_channels),
                                     dtype=np.float32) * 10
        audio = vocoder_forward(latent, tiny_weights, tiny_voc_cfg,
                                tiny_bank())
        assert audio.min() >= -1.0 and audio.max() <= 1.0

    def test_rejects_wrong_channels(self, rng, tiny_voc_cfg, tiny_weights):
        latent = rng.standard_normal((5, 3), dtype=np.float32)
        with pytest.raises(InputError):
            vocoder_forward(latent, tiny_weights, tiny_voc_cfg, tiny_bank())

    def test_rejects_band_mismatch(self, rng, tiny_voc_cfg, tiny_weights):
        bank = pqmf_design(subbands=2)
        latent = rng.standard_normal((5, tiny_voc_cfg.input_channels),
                                     dtype=np.float32)
        with pytest.raises(ConfigError):
            vocoder_forward(latent, tiny_weights, tiny_voc_cfg, bank)

    def test_time_equivariance(self, rng, tiny_voc_cfg, tiny_weights):
        # shifting the latents by one frame shifts the audio by one hop;
        # compare away from the edges where padding bleeds in
        bank = tiny_bank()
        up = tiny_voc_cfg.total_upsampling
        latent = rng.standard_normal((64, tiny_voc_cfg.input_channels),
                                     dtype=np.float32)
        shifted = np.vstack([np.zeros((1, latent.shape[1]), dtype=np.float32),
                             latent[:-1]])
        a = vocoder_forward(latent, tiny_weights, tiny_voc_cfg, bank)
        b = vocoder_forward(shifted, tiny_weights, tiny_voc_cfg, bank)
        # frames 30..55 sit clear of both the zero-filled head (whose causal
        # PQMF smear runs right) and the dropped tail frame
        lo, hi = 30 * up, 55 * up
        np.testing.assert_allclose(b[lo + up:hi + up], a[lo:hi], atol=1e-4)

    def test_deterministic(self, rng, tiny_voc_cfg, tiny_weights):
        latent = rng.standard_normal((8, tiny_voc_cfg.input_channels),
                                     dtype=np.float32)
        bank = tiny_bank()
        a = vocoder_forward(latent, tiny_weights, tiny_voc_cfg, bank)
        b = vocoder_forward(latent, tiny_weights, tiny_voc_cfg, bank)
        assert a.tobytes() == b.tobytes()
