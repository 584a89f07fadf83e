"""End-to-end synthesis with randomly initialized weights.

Untrained weights produce noise, not speech, but the whole pipeline runs:
phoneme ids -> encoder -> durations -> length regulation -> decoder ->
vocoder -> waveform, with every shape obeying the 300x rate identity.
"""
import os
import tempfile

import numpy as np

from le2e import ModelConfig, Synthesizer, init_random_weights
from le2e.audio_io import write_wav

cfg = ModelConfig()
weights = init_random_weights(seed=0)
synth = Synthesizer(weights, model_cfg=cfg)

phonemes = np.array([5, 12, 3, 44, 7, 19], dtype=np.int64)

# fixed durations first: 6 phonemes * 20 frames = 120 frames, and the
# vocoder upsamples 300x, so the waveform length is pinned
durations = np.full(6, 20, dtype=np.int64)
wave = synth.synthesize(phonemes, durations=durations)
print(f"fixed durations: {wave.shape[0]} samples "
      f"({wave.shape[0] / synth.sample_rate:.3f} s at {synth.sample_rate} Hz)")
assert wave.shape[0] == 120 * 300
assert wave.dtype == np.float32
assert np.abs(wave).max() <= 1.0

# predicted durations: whatever the predictor says, the identity holds
wave2 = synth.synthesize(phonemes)
print(f"predicted durations: {wave2.shape[0]} samples "
      f"= {wave2.shape[0] // 300} frames * 300")
assert wave2.shape[0] % 300 == 0

# same seed, same bytes: inference is deterministic
wave3 = Synthesizer(init_random_weights(seed=0)).synthesize(
    phonemes, durations=durations)
assert wave.tobytes() == wave3.tobytes()
print("re-synthesis is byte-identical")

out = os.path.join(tempfile.gettempdir(), "demo_synth.wav")
write_wav(out, wave, synth.sample_rate)
print("wrote", out, f"({os.path.getsize(out)} bytes)")
