import numpy as np
import pytest

from le2e import (
    ConfigError,
    DiscriminatorOutput,
    InputError,
    MpdConfig,
    MrdConfig,
    init_random_discriminator_weights,
    mpd_forward,
    mpd_reshape,
    mrd_forward,
)


def small_mpd():
    return MpdConfig(periods=(2, 3, 5), base_channels=4)


def small_mrd():
    return MrdConfig(fft_sizes=(64, 128), hop_lengths=(16, 32),
                     win_lengths=(32, 64), base_channels=4)


@pytest.fixture
def disc_weights():
    return init_random_discriminator_weights(small_mpd(), small_mrd(), seed=11)


class TestMpdReshape:
    def test_even_fold(self):
        out = mpd_reshape(np.arange(10, dtype=np.float32), 2)
        assert out.shape == (5, 2)
        np.testing.assert_array_equal(out[0], [0, 1])
        np.testing.assert_array_equal(out[4], [8, 9])

    def test_reflect_padded_fold(self):
        out = mpd_reshape(np.arange(10, dtype=np.float32), 3)
        assert out.shape == (4, 3)
        # last row starts with the real tail, then reflects backwards
        np.testing.assert_array_equal(out[3], [9, 8, 7])

    def test_single_sample_edge_pads(self):
        out = mpd_reshape(np.asarray([2.5], dtype=np.float32), 5)
        assert out.shape == (1, 5)
        np.testing.assert_array_equal(out[0], [2.5] * 5)

    def test_rejects_bad_period(self):
        with pytest.raises(InputError):
            mpd_reshape(np.zeros(4, dtype=np.float32), 0)


class TestConfigs:
    def test_default_periods_coprime(self):
        cfg = MpdConfig()
        assert cfg.periods == (2, 3, 5, 7, 11)

    def test_rejects_non_coprime_periods(self):
        with pytest.raises(ConfigError):
            MpdConfig(periods=(2, 3, 4))

    def test_rejects_unsorted_periods(self):
        with pytest.raises(ConfigError):
            MpdConfig(periods=(3, 2, 5))

    def test_rejects_unknown_activation(self):
        with pytest.raises(ConfigError):
            MpdConfig(activation="gelu")

    def test_mrd_resolutions_zip(self):
        cfg = small_mrd()
        assert cfg.resolutions() == ((64, 16, 32), (128, 32, 64))

    def test_mrd_rejects_mismatched_lists(self):
        with pytest.raises(ConfigError):
            MrdConfig(fft_sizes=(64,), hop_lengths=(16, 32),
                      win_lengths=(32, 64))


class TestMpdForward:
    def test_one_output_per_period(self, rng, disc_weights):
        audio = rng.standard_normal(400, dtype=np.float32)
        outs = mpd_forward(audio, disc_weights, small_mpd())
        assert len(outs) == 3
        for out in outs:
            assert isinstance(out, DiscriminatorOutput)
            assert len(out.features) == 6
            assert out.features[-1] is out.score_map
            assert out.score_map.shape[0] == 1

    def test_period_width_collapses_to_one(self, rng, disc_weights):
        # kernels are (5,1): the period axis stays the same width throughout
        audio = rng.standard_normal(300, dtype=np.float32)
        outs = mpd_forward(audio, disc_weights, small_mpd())
        for p, out in zip((2, 3, 5), outs):
            assert out.score_map.shape[2] == p

    def test_deterministic(self, rng, disc_weights):
        audio = rng.standard_normal(256, dtype=np.float32)
        a = mpd_forward(audio, disc_weights, small_mpd())
        b = mpd_forward(audio, disc_weights, small_mpd())
        for x, y in zip(a, b):
            assert x.score_map.tobytes() == y.score_map.tobytes()


class TestMrdForward:
    def test_one_output_per_resolution(self, rng, disc_weights):
        audio = rng.standard_normal(512, dtype=np.float32)
        outs = mrd_forward(audio, disc_weights, small_mrd())
        assert len(outs) == 2
        for out in outs:
            assert len(out.features) == 6
            assert np.isfinite(out.score_map).all()

    def test_rejects_short_audio(self, rng, disc_weights):
        with pytest.raises(InputError):
            mrd_forward(rng.standard_normal(32, dtype=np.float32),
                        disc_weights, small_mrd())

    def test_distinguishes_inputs(self, rng, disc_weights):
        a = mrd_forward(rng.standard_normal(512, dtype=np.float32),
                        disc_weights, small_mrd())
        b = mrd_forward(np.zeros(512, dtype=np.float32),
                        disc_weights, small_mrd())
        assert not np.allclose(a[0].score_map, b[0].score_map)
