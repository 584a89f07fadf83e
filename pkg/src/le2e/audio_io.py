"""WAV read/write: RIFF, PCM16, mono.

Quantization is round-half-away-from-zero at full scale 32767 with a
[-1, 1] clamp first, so writing then reading a signal already inside the
clamp range loses at most half a PCM step.
"""

import wave

import numpy as np

from .errors import InputError

FULL_SCALE = 32767.0


def encode_pcm16(samples: np.ndarray) -> np.ndarray:
    """Float samples to int16 with clamp and round-half-away."""
    x = np.clip(np.asarray(samples, dtype=np.float64).reshape(-1), -1.0, 1.0)
    scaled = x * FULL_SCALE
    q = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    return q.astype(np.int16)


def write_wav(path, samples: np.ndarray, sample_rate: int = 22050) -> None:
    pcm = encode_pcm16(samples)
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(sample_rate)
        fh.writeframes(pcm.tobytes())


def read_wav(path):
    """Returns (float32 samples scaled by 1/32767, sample_rate)."""
    with wave.open(str(path), "rb") as fh:
        if fh.getnchannels() != 1:
            raise InputError(f"{path}: expected mono, got "
                             f"{fh.getnchannels()} channels")
        if fh.getsampwidth() != 2:
            raise InputError(f"{path}: expected 16-bit PCM, got "
                             f"{8 * fh.getsampwidth()}-bit")
        rate = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    pcm = np.frombuffer(raw, dtype="<i2")
    return (pcm.astype(np.float32) / np.float32(FULL_SCALE)), rate
