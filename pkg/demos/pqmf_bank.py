"""The four-band PQMF filter bank, inspected piece by piece.

The vocoder emits four decimated sub-band signals; the synthesis bank folds
them back into one waveform. The round trip is not bit exact, but with the
default prototype it is transparent to well over 35 dB.
"""
import numpy as np

from le2e import pqmf_analysis, pqmf_design, pqmf_synthesis
from le2e.vocoder import prototype_lowpass

bank = pqmf_design()
print(f"default bank: taps={bank.taps} cutoff={bank.cutoff_ratio} "
      f"beta={bank.beta} subbands={bank.subbands}")
print("analysis filters:", bank.analysis_filters.shape)

# the prototype is a linear-phase lowpass: symmetric, center tap = cutoff
h = prototype_lowpass(bank.taps, bank.cutoff_ratio, bank.beta)
assert np.allclose(h, h[::-1])
assert abs(h[bank.taps // 2] - bank.cutoff_ratio) < 1e-12
print(f"prototype center tap {h[bank.taps // 2]:.4f}, DC gain {h.sum():.4f}")

# a low tone should land almost entirely in band 0
sr = 22050
t = np.arange(sr) / sr
tone = np.sin(2 * np.pi * 200.0 * t).astype(np.float32)
bands = pqmf_analysis(tone, bank)
energy = (bands ** 2).sum(axis=1)
share = energy / energy.sum()
print("band energy share for a 200 Hz tone:", np.round(share, 4))
assert share[0] > 0.9

# round trip: analysis then synthesis delays the signal by exactly `taps`
# samples. Aligning for that delay, measure the SNR on noise.
rng = np.random.default_rng(0)
noise = rng.standard_normal(4 * sr).astype(np.float32) * 0.3
rec = pqmf_synthesis(pqmf_analysis(noise, bank), bank)

d = bank.delay
ref = noise[: noise.shape[0] - d]
out = rec[d: d + ref.shape[0]]
err = out - ref
snr = 10.0 * np.log10((ref ** 2).sum() / (err ** 2).sum())
print(f"round-trip SNR at delay {d}: {snr:.1f} dB")
assert snr > 35.0

# one sample off and the alignment story falls apart, which is the point:
# the delay is structural, not approximate
ref1 = ref[:-1]
err_off = rec[d + 1: d + 1 + ref1.shape[0]] - ref1
snr_off = 10.0 * np.log10((ref1 ** 2).sum() / (err_off ** 2).sum())
print(f"misaligned by one sample: {snr_off:.1f} dB")
assert snr_off < 10.0
