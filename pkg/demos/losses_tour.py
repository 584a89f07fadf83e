"""Closed-form checks for every training loss.

None of these need a model: each loss is a pure function of arrays, so the
identities can be verified with hand-built inputs.
"""
import numpy as np

from le2e import (LossWeights, duration_loss, feature_matching_loss,
                  lsgan_d_loss, lsgan_g_loss, mr_stft_full_sub, mr_stft_loss,
                  pitch_ce_loss, pqmf_design, spectral_convergence,
                  stft_magnitude_loss, total_generator_loss)

rng = np.random.default_rng(7)

# duration: MSE in log space, so predicting log 1 vs log e gives exactly 1
print("duration [0] vs [1]:", duration_loss([0.0], [1.0]))
assert duration_loss([0.0], [1.0]) == 1.0

# pitch CE: uniform logits over 256 bins cost exactly ln 256
logits = np.zeros((10, 256), dtype=np.float32)
targets = np.arange(10) % 256
ce = pitch_ce_loss(logits, targets)
print(f"uniform CE {ce:.6f} vs ln256 {np.log(256.0):.6f}")
assert abs(ce - np.log(256.0)) < 1e-9

# LSGAN: a perfect discriminator scores real=1, fake=0 and pays nothing
real = [np.ones((3, 4), dtype=np.float32)]
fake = [np.zeros((3, 4), dtype=np.float32)]
assert lsgan_d_loss(real, fake) == 0.0
# a fully fooled generator (fake scored 1) also pays nothing
assert lsgan_g_loss(real) == 0.0
half = [np.full((2, 2), 0.5, dtype=np.float32)]
print("half-confident d loss:", lsgan_d_loss(half, half))
assert lsgan_d_loss(half, half) == 0.5
assert lsgan_g_loss(half) == 0.25

# feature matching: constant offset of 1 in one layer costs exactly 1
f_real = [[np.zeros((4, 4), dtype=np.float32)]]
f_fake = [[np.ones((4, 4), dtype=np.float32)]]
assert feature_matching_loss(f_real, f_fake) == 1.0

# spectral losses on magnitudes: doubling the estimate gives sc = 1
# (||S - 2S|| / ||S||) and mag = ln 2
s = np.abs(rng.standard_normal((12, 33))).astype(np.float32) + 0.1
print("sc(s, 2s):", spectral_convergence(s, 2 * s))
assert abs(spectral_convergence(s, 2 * s) - 1.0) < 1e-6
assert abs(stft_magnitude_loss(s, 2 * s) - np.log(2.0)) < 1e-6

# multi-resolution STFT of a waveform against itself is exactly zero
x = rng.standard_normal(4000).astype(np.float32)
assert mr_stft_loss(x, x) == 0.0

# and the sub-band variant decimates through the PQMF bank first
bank = pqmf_design()
full, sub, combined = mr_stft_full_sub(x, 0.5 * x, bank)
print(f"full {full:.4f}  sub {sub:.4f}  combined {combined:.4f}")
assert combined == (full + sub) / 2.0

# the weighted total: unit components under default weights come to
# 1 + 1 + 1 + 2*1 + 5*1 + 2.5*(1+1)/2 = 12.5
total = total_generator_loss(1, 1, 1, 1, 1, 1, 1)
print("unit total:", total)
assert total == 12.5

w = LossWeights()
print(f"weights: fm {w.lambda_fm}  mel {w.lambda_mel}  stft {w.lambda_stft}")
