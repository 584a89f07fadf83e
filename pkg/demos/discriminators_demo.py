"""Running waveforms through the two discriminator families.

These are forward passes only: during training they would score real vs
generated audio, and their intermediate activations feed the feature
matching loss. Here we just look at what comes out.
"""
import numpy as np

from le2e import (MpdConfig, MrdConfig, feature_matching_loss, lsgan_g_loss,
                  init_random_discriminator_weights, mpd_forward, mpd_reshape,
                  mrd_forward)

rng = np.random.default_rng(3)
audio = rng.standard_normal(4096).astype(np.float32) * 0.2

# the MPD folds audio into a [T/p, p] grid per period, so each
# discriminator sees the signal strided at its own periodicity
for p in (2, 3, 5):
    grid = mpd_reshape(audio, p)
    print(f"period {p}: grid {grid.shape}")
    assert grid.shape[1] == p

mpd_cfg = MpdConfig(base_channels=4)  # small towers, quick to run
mrd_cfg = MrdConfig(fft_sizes=(128, 256), hop_lengths=(32, 64),
                    win_lengths=(64, 128), base_channels=4)
weights = init_random_discriminator_weights(mpd_cfg, mrd_cfg, seed=1)

mpd_outs = mpd_forward(audio, weights, mpd_cfg)
print(f"\nMPD: {len(mpd_outs)} sub-discriminators "
      f"(periods {mpd_cfg.periods})")
for p, out in zip(mpd_cfg.periods, mpd_outs):
    # the period axis is never downsampled, so the score map keeps width p
    assert out.score_map.shape[-1] == p
    print(f"  p={p}: score map {out.score_map.shape}, "
          f"{len(out.features)} feature maps")
assert all(out.features[-1] is out.score_map for out in mpd_outs)

mrd_outs = mrd_forward(audio, weights, mrd_cfg)
print(f"\nMRD: {len(mrd_outs)} resolutions {mrd_cfg.resolutions()}")
for out in mrd_outs:
    print(f"  score map {out.score_map.shape}")

# these outputs plug straight into the GAN losses
outs = mpd_outs + mrd_outs
g = lsgan_g_loss([o.score_map for o in outs])
fm = feature_matching_loss([o.features for o in outs],
                           [o.features for o in outs])
print(f"\ngenerator adversarial loss on noise: {g:.4f}")
print(f"feature matching against itself: {fm} (exactly zero)")
assert fm == 0.0
