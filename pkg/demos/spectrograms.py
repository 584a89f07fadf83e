import numpy as np

from le2e import StftConfig, mel_filterbank, mel_spectrogram, stft

SR = 22050

# a 440 Hz tone, one second
t = np.arange(SR) / SR
tone = np.sin(2 * np.pi * 440.0 * t).astype(np.float32)

cfg = StftConfig(fft_size=1024, hop_length=256, win_length=1024)
mag = stft(tone, cfg)
print("stft shape:", mag.shape, "(frames, bins)")
assert mag.shape == (1 + SR // 256, 513)

# the tone should land in the bin closest to 440 Hz
bin_hz = SR / 1024
peak = int(np.argmax(mag[mag.shape[0] // 2]))
print(f"peak bin {peak} is {peak * bin_hz:.1f} Hz (bin width {bin_hz:.1f})")
assert peak == round(440.0 / bin_hz)

# mel filterbank: 80 triangular filters, every row touches the spectrum
fb = mel_filterbank(n_mels=80, sample_rate=SR, fft_size=1024,
                    f_min=0.0, f_max=8000.0)
print("filterbank:", fb.weights.shape)
assert fb.weights.shape == (80, 513)
assert (fb.weights >= 0).all()
assert (fb.weights.sum(axis=1) > 0).all()

mel = mel_spectrogram(tone, cfg, fb)
print("mel spectrogram:", mel.shape)

# silence hits the log floor everywhere: log(1e-5)
silence = np.zeros(SR, dtype=np.float32)
mel_silence = mel_spectrogram(silence, cfg, fb)
print("silence mel value:", float(mel_silence[0, 0]))
assert np.allclose(mel_silence, np.log(1e-5), atol=1e-6)

# a chirp sweeps upward, so the mel peak should drift toward higher bands
chirp = np.sin(2 * np.pi * (100 * t + (4000 - 100) / 2 * t * t))
mel_chirp = mel_spectrogram(chirp.astype(np.float32), cfg, fb)
first = int(np.argmax(mel_chirp[2]))
last = int(np.argmax(mel_chirp[-3]))
print(f"chirp mel peak moves from band {first} to band {last}")
assert last > first
