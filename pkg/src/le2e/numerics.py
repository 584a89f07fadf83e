"""Minimal tensor and DSP kernel layer.

Convolutions, attention, normalization, STFT and mel projection. Everything
upstream composes these. All kernels are pure functions over float32 numpy
arrays: no shared state, deterministic, safe to call concurrently.

Conventions:
  - conv kernels use correlation semantics (no kernel flip), torch-style
  - "same" padding is symmetric zero padding
  - STFT is reflect-centered with a periodic Hann window
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InputError

# Shared log floor for magnitude/mel clamping, kept in one place so the loss
# kernels and the spectrogram path cannot drift apart.
LOG_FLOOR = 1e-5


def _as_f32(x) -> np.ndarray:
    return np.ascontiguousarray(x, dtype=np.float32)


# ---------------------------------------------------------------------------
# convolutions


def _pad_amounts(kernel: int, dilation: int, padding):
    """Resolve a padding spec to (left, right) sample counts."""
    if padding == "same":
        total = (kernel - 1) * dilation
        left = total // 2
        return left, total - left
    if padding == "valid":
        return 0, 0
    if isinstance(padding, int):
        return padding, padding
    left, right = padding
    return int(left), int(right)


def conv1d(x: np.ndarray, weight: np.ndarray, bias=None, dilation: int = 1,
           groups: int = 1, padding="same") -> np.ndarray:
    """1D convolution (correlation) over [C_in, T] input.

    Args:
        x: input of shape [C_in, T].
        weight: kernel of shape [C_out, C_in // groups, K].
        bias: optional [C_out] vector.
        dilation: spacing between kernel taps, >= 1.
        groups: channel groups; depthwise when groups == C_in.
        padding: "same", "valid", an int, or an explicit (left, right) pair.

    Returns:
        Output of shape [C_out, T'] where T' == T under "same" padding.
    """
    x = _as_f32(x)
    weight = _as_f32(weight)
    if x.ndim != 2 or weight.ndim != 3:
        raise InputError(f"conv1d expects [C,T] input and [O,I,K] weight, "
                          f"got {x.shape} and {weight.shape}")
    c_in, t = x.shape
    c_out, c_in_g, k = weight.shape
    if dilation < 1 or k < 1:
        raise ConfigError("conv1d needs dilation >= 1 and K >= 1")
    if groups < 1 or c_in % groups != 0 or c_out % groups != 0:
        raise InputError(f"groups {groups} does not divide channels "
                          f"({c_in} in, {c_out} out)")
    if c_in_g != c_in // groups:
        raise InputError(f"weight expects {c_in_g} input channels per group, "
                          f"input provides {c_in // groups}")

    left, right = _pad_amounts(k, dilation, padding)
    xp = np.pad(x, ((0, 0), (left, right)))
    t_out = xp.shape[1] - (k - 1) * dilation
    if t_out < 1:
        raise InputError(f"conv1d input too short: {t} samples for kernel {k} "
                         f"dilation {dilation}")

    # strided windows [C_in, T_out, K]; no copy until the GEMM reshape.
    # accumulation runs in float64 so results track the per-op tolerances
    # regardless of summation order, then rounds once on the way out
    xp = xp.astype(np.float64)
    w64 = weight.astype(np.float64)
    s0, s1 = xp.strides
    win = np.lib.stride_tricks.as_strided(
        xp, shape=(c_in, t_out, k), strides=(s0, s1, s1 * dilation))

    if groups == c_in and c_out == c_in:
        out = np.einsum("ctk,ck->ct", win, w64[:, 0, :], optimize=True)
    elif groups == 1:
        cols = win.transpose(0, 2, 1).reshape(c_in * k, t_out)
        out = w64.reshape(c_out, c_in * k) @ cols
    else:
        out = np.empty((c_out, t_out), dtype=np.float64)
        og = c_out // groups
        for g in range(groups):
            wg = w64[g * og:(g + 1) * og].reshape(og, c_in_g * k)
            cols = win[g * c_in_g:(g + 1) * c_in_g].transpose(0, 2, 1)
            out[g * og:(g + 1) * og] = wg @ cols.reshape(c_in_g * k, t_out)

    if bias is not None:
        out = out + np.asarray(bias, dtype=np.float64)[:, None]
    return _as_f32(out)


def conv_transpose1d(x: np.ndarray, weight: np.ndarray, bias=None,
                     stride: int = 1) -> np.ndarray:
    """Transposed 1D convolution upsampling [C_in, T] to [C_out, T * stride].

    The raw transposed output has length (T - 1) * stride + K; a symmetric
    crop of (K - stride) total samples pins the length to exactly T * stride.
    """
    x = _as_f32(x)
    weight = _as_f32(weight)
    c_in, t = x.shape
    w_in, c_out, k = weight.shape
    if w_in != c_in:
        raise InputError(f"conv_transpose1d weight expects {w_in} input "
                          f"channels, input has {c_in}")
    if stride < 1:
        raise ConfigError("stride must be >= 1")
    if k < stride:
        raise InputError(f"kernel {k} < stride {stride} would leave "
                          f"unfilled gaps")

    # [C_out, K, T] contributions, then K strided scatter-adds in float64
    prod = np.tensordot(weight.astype(np.float64), x.astype(np.float64),
                        axes=([0], [0]))
    full = np.zeros((c_out, (t - 1) * stride + k), dtype=np.float64)
    for kk in range(k):
        full[:, kk:kk + (t - 1) * stride + 1:stride] += prod[:, kk, :]

    left = (k - stride) // 2
    out = full[:, left:left + t * stride]
    if bias is not None:
        out = out + np.asarray(bias, dtype=np.float64)[:, None]
    return _as_f32(out)


def conv2d(x: np.ndarray, weight: np.ndarray, bias=None,
           stride=(1, 1), padding=(0, 0)) -> np.ndarray:
    """2D convolution (correlation) over [C_in, H, W], torch weight layout."""
    x = _as_f32(x)
    weight = _as_f32(weight)
    c_in, h, w = x.shape
    c_out, c_in_w, kh, kw = weight.shape
    if c_in_w != c_in:
        raise InputError(f"conv2d weight expects {c_in_w} input channels, "
                          f"input has {c_in}")
    sh, sw = stride
    ph, pw = padding
    xp = np.pad(x, ((0, 0), (ph, ph), (pw, pw)))
    h_out = (xp.shape[1] - kh) // sh + 1
    w_out = (xp.shape[2] - kw) // sw + 1
    if h_out < 1 or w_out < 1:
        raise InputError(f"conv2d input {x.shape[1:]} too small for kernel "
                         f"({kh},{kw}) stride ({sh},{sw})")
    xp = xp.astype(np.float64)
    s0, s1, s2 = xp.strides
    win = np.lib.stride_tricks.as_strided(
        xp, shape=(c_in, h_out, w_out, kh, kw),
        strides=(s0, s1 * sh, s2 * sw, s1, s2))
    cols = win.transpose(0, 3, 4, 1, 2).reshape(c_in * kh * kw, h_out * w_out)
    out = weight.astype(np.float64).reshape(c_out, c_in * kh * kw) @ cols
    out = out.reshape(c_out, h_out, w_out)
    if bias is not None:
        out = out + np.asarray(bias, dtype=np.float64)[:, None, None]
    return _as_f32(out)


# ---------------------------------------------------------------------------
# pointwise and normalization


def linear(x: np.ndarray, weight: np.ndarray, bias=None) -> np.ndarray:
    """Affine map over the last axis; weight is [in, out]."""
    out = _as_f32(x) @ _as_f32(weight)
    if bias is not None:
        out = out + _as_f32(bias)
    return _as_f32(out)


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0).astype(np.float32)


def leaky_relu(x: np.ndarray, slope: float = 0.2) -> np.ndarray:
    x = _as_f32(x)
    return np.where(x >= 0, x, x * np.float32(slope)).astype(np.float32)


def layer_norm(x: np.ndarray, gamma: np.ndarray, beta: np.ndarray,
               eps: float = 1e-5) -> np.ndarray:
    """Normalize the last axis to zero mean, unit (biased) variance, then

    apply the gamma/beta affine transform.
    """
    if eps <= 0:
        raise ConfigError("layer_norm eps must be > 0")
    x = _as_f32(x)
    mean = x.mean(axis=-1, keepdims=True)
    var = x.var(axis=-1, keepdims=True)
    norm = (x - mean) / np.sqrt(var + np.float32(eps))
    return _as_f32(norm * _as_f32(gamma) + _as_f32(beta))


def softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    # computed in float64, returned in the caller's float dtype
    x = np.asarray(x)
    out_dtype = x.dtype if x.dtype == np.float64 else np.float32
    x64 = x.astype(np.float64)
    shifted = x64 - x64.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    return (e / e.sum(axis=axis, keepdims=True)).astype(out_dtype)


def log_softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    # float64 inside (the CE loss wants tight tails), caller's float dtype out
    x = np.asarray(x)
    out_dtype = x.dtype if x.dtype == np.float64 else np.float32
    x64 = x.astype(np.float64)
    shifted = x64 - x64.max(axis=axis, keepdims=True)
    lse = np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    return (shifted - lse).astype(out_dtype)


# ---------------------------------------------------------------------------
# attention and positions


def multi_head_self_attention(x: np.ndarray, wq, wk, wv, wo, heads: int,
                              bq=None, bk=None, bv=None, bo=None) -> np.ndarray:
    """Full (non-causal) scaled dot-product self-attention over [T, D].

    Args:
        x: input sequence [T, D].
        wq, wk, wv: projection matrices [D, A].
        wo: output projection [A, D].
        heads: head count; must divide A.
        bq, bk, bv, bo: optional bias vectors.

    Returns:
        [T, D] output; per-row attention weights sum to 1.

    Square projections (A == D) are the common case; A < D gives the narrow
    attention used by the acoustic model.
    """
    x = np.asarray(x, dtype=np.float64)
    t, d = x.shape
    a = np.asarray(wq).shape[1]
    if a % heads != 0:
        raise InputError(f"attention width {a} not divisible by {heads} heads")
    hd = a // heads
    scale = 1.0 / np.sqrt(hd)

    def proj(w, b):
        out = x @ np.asarray(w, dtype=np.float64)
        if b is not None:
            out = out + np.asarray(b, dtype=np.float64)
        return out.reshape(t, heads, hd)

    # score/softmax path runs in float64: at full width the logits get large
    # enough that float32 rounding visibly perturbs the attention weights
    q = proj(wq, bq)
    k = proj(wk, bk)
    v = proj(wv, bv)

    scores = np.einsum("thd,shd->hts", q, k, optimize=True) * scale
    attn = softmax(scores, axis=-1)
    ctx = np.einsum("hts,shd->thd", attn, v, optimize=True).reshape(t, a)
    out = ctx @ np.asarray(wo, dtype=np.float64)
    if bo is not None:
        out = out + np.asarray(bo, dtype=np.float64)
    return out.astype(np.float32)


def sinusoidal_positions(length: int, dim: int) -> np.ndarray:
    """Fixed sinusoidal positional table [length, dim].

    Even columns are sines, odd columns cosines, so position 0 reads
    [0, 1, 0, 1, ...].
    """
    pos = np.arange(length, dtype=np.float64)[:, None]
    i = np.arange(0, dim, 2, dtype=np.float64)[None, :]
    angle = pos / np.power(10000.0, i / dim)
    table = np.zeros((length, dim), dtype=np.float64)
    table[:, 0::2] = np.sin(angle)
    table[:, 1::2] = np.cos(angle[:, : dim // 2])
    return _as_f32(table)


# ---------------------------------------------------------------------------
# STFT and mel


def hann_window(length: int) -> np.ndarray:
    """Periodic Hann window."""
    n = np.arange(length, dtype=np.float64)
    return (0.5 - 0.5 * np.cos(2.0 * np.pi * n / length)).astype(np.float32)


@dataclass(frozen=True)
class StftConfig:
    fft_size: int
    hop_length: int
    win_length: int
    window: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not (self.win_length <= self.fft_size):
            raise ConfigError(f"win_length {self.win_length} exceeds "
                              f"fft_size {self.fft_size}")
        if not (1 <= self.hop_length <= self.win_length):
            raise ConfigError(f"hop_length {self.hop_length} out of range "
                              f"for win_length {self.win_length}")
        if self.window is None:
            object.__setattr__(self, "window", hann_window(self.win_length))
        elif len(self.window) != self.win_length:
            raise ConfigError("window length must equal win_length")


def stft(audio: np.ndarray, cfg: StftConfig) -> np.ndarray:
    """Magnitude STFT of a 1D signal.

    Reflect-centered framing: frames = 1 + floor(T / hop). The window is
    zero-padded symmetrically to fft_size. Output is [frames, fft_size/2 + 1],
    non-negative, float32 (float64 accumulation internally).
    """
    audio = np.asarray(audio, dtype=np.float64).reshape(-1)
    t = audio.shape[0]
    if t < cfg.win_length:
        raise InputError(f"audio length {t} shorter than analysis window "
                         f"{cfg.win_length}")
    half = cfg.fft_size // 2
    if t < half + 1:
        raise InputError(f"audio length {t} too short to reflect-pad "
                         f"fft_size {cfg.fft_size}")
    padded = np.pad(audio, (half, half), mode="reflect")

    wpad = np.zeros(cfg.fft_size, dtype=np.float64)
    off = (cfg.fft_size - cfg.win_length) // 2
    wpad[off:off + cfg.win_length] = np.asarray(cfg.window, dtype=np.float64)

    frames = 1 + t // cfg.hop_length
    idx = np.arange(cfg.fft_size)[None, :] + \
        (np.arange(frames) * cfg.hop_length)[:, None]
    mat = padded[idx] * wpad[None, :]
    mag = np.abs(np.fft.rfft(mat, axis=1))
    return _as_f32(mag)


def _hz_to_mel(f):
    # Slaney scale: linear below 1 kHz, log above
    f = np.asarray(f, dtype=np.float64)
    f_sp = 200.0 / 3.0
    log_step = np.log(6.4) / 27.0
    mel = f / f_sp
    above = f >= 1000.0
    mel = np.where(above, 15.0 + np.log(np.maximum(f, 1e-12) / 1000.0) / log_step, mel)
    return mel


def _mel_to_hz(m):
    m = np.asarray(m, dtype=np.float64)
    f_sp = 200.0 / 3.0
    log_step = np.log(6.4) / 27.0
    hz = m * f_sp
    above = m >= 15.0
    return np.where(above, 1000.0 * np.exp(log_step * (m - 15.0)), hz)


@dataclass(frozen=True)
class MelFilterbank:
    n_mels: int
    sample_rate: int
    f_min: float
    f_max: float
    weights: np.ndarray = field(repr=False, compare=False)


def mel_filterbank(n_mels: int = 80, sample_rate: int = 22050,
                   fft_size: int = 1024, f_min: float = 0.0,
                   f_max: float = 8000.0) -> MelFilterbank:
    """Triangular Slaney-scale filterbank with Slaney area normalization.

    Returns a MelFilterbank whose weights matrix is [n_mels, fft_size/2 + 1];
    every row is non-negative with at least one positive entry.
    """
    if not (0 <= f_min < f_max <= sample_rate / 2):
        raise ConfigError(f"bad mel band edges ({f_min}, {f_max}) at "
                          f"sample rate {sample_rate}")
    n_bins = fft_size // 2 + 1
    bin_hz = np.arange(n_bins, dtype=np.float64) * sample_rate / fft_size

    mel_pts = np.linspace(_hz_to_mel(f_min), _hz_to_mel(f_max), n_mels + 2)
    hz_pts = _mel_to_hz(mel_pts)

    weights = np.zeros((n_mels, n_bins), dtype=np.float64)
    for m in range(n_mels):
        lo, center, hi = hz_pts[m], hz_pts[m + 1], hz_pts[m + 2]
        up = (bin_hz - lo) / max(center - lo, 1e-12)
        down = (hi - bin_hz) / max(hi - center, 1e-12)
        tri = np.maximum(0.0, np.minimum(up, down))
        weights[m] = tri * (2.0 / (hi - lo))
    fb = MelFilterbank(n_mels, sample_rate, f_min, f_max, _as_f32(weights))
    if not (fb.weights >= 0).all() or not (fb.weights.sum(axis=1) > 0).all():
        raise ConfigError("degenerate mel filterbank: empty filter row")
    return fb


def mel_spectrogram(audio: np.ndarray, cfg: StftConfig,
                    fb: MelFilterbank) -> np.ndarray:
    """Log mel spectrogram: log(clamp(fb @ |STFT|, 1e-5)), [frames, n_mels]."""
    mag = stft(audio, cfg)
    if fb.weights.shape[1] != mag.shape[1]:
        raise InputError(f"filterbank built for {fb.weights.shape[1]} bins, "
                          f"spectrogram has {mag.shape[1]}")
    mel = mag.astype(np.float64) @ fb.weights.T.astype(np.float64)
    return _as_f32(np.log(np.maximum(mel, LOG_FLOOR)))
