"""Brute-force reference implementations.

Every function here is written the slow, obvious way: explicit loops,
direct DFT sums, flat loss formulas. None of them share code with the
engine's fast paths (or with each other, where that would hide a bug), so
a fixture produced here is independent evidence.

All oracles compute in float64 and return float64; fixture serialization
rounds to float32 at the very end.
"""

import math

import numpy as np


# ---------------------------------------------------------------------------
# convolutions


def conv1d_naive(x, w, b=None, dilation=1, pad=(0, 0), groups=1):
    """Direct correlation over [C_in, T]; weight [C_out, C_in//groups, K]."""
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    c_in, t = x.shape
    c_out, c_in_g, k = w.shape
    xp = np.pad(x, ((0, 0), (int(pad[0]), int(pad[1]))))
    t_out = xp.shape[1] - (k - 1) * dilation
    out = np.zeros((c_out, t_out))
    og = c_out // groups
    for o in range(c_out):
        g = o // og
        for ti in range(t_out):
            acc = 0.0
            for ci in range(c_in_g):
                for ki in range(k):
                    acc += (w[o, ci, ki]
                            * xp[g * c_in_g + ci, ti + ki * dilation])
            out[o, ti] = acc + (0.0 if b is None else float(b[o]))
    return out


def conv_transpose1d_naive(x, w, b=None, stride=1):
    """Scatter-add transposed conv; weight [C_in, C_out, K].

    The raw output of length (T-1)*stride + K is cropped by (K - stride)//2
    on the left so the result is exactly T * stride long.
    """
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    c_in, t = x.shape
    _, c_out, k = w.shape
    full = np.zeros((c_out, (t - 1) * stride + k))
    for ci in range(c_in):
        for ti in range(t):
            for o in range(c_out):
                for ki in range(k):
                    full[o, ti * stride + ki] += x[ci, ti] * w[ci, o, ki]
    left = (k - stride) // 2
    out = full[:, left:left + t * stride]
    if b is not None:
        out = out + np.asarray(b, dtype=np.float64)[:, None]
    return out


def conv2d_naive(x, w, b=None, stride=(1, 1), pad=(0, 0)):
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    c_in, h, width = x.shape
    c_out, _, kh, kw = w.shape
    xp = np.pad(x, ((0, 0), (pad[0], pad[0]), (pad[1], pad[1])))
    h_out = (xp.shape[1] - kh) // stride[0] + 1
    w_out = (xp.shape[2] - kw) // stride[1] + 1
    out = np.zeros((c_out, h_out, w_out))
    for o in range(c_out):
        for i in range(h_out):
            for j in range(w_out):
                acc = 0.0
                for ci in range(c_in):
                    for a in range(kh):
                        for bb in range(kw):
                            acc += (w[o, ci, a, bb]
                                    * xp[ci, i * stride[0] + a,
                                         j * stride[1] + bb])
                out[o, i, j] = acc + (0.0 if b is None else float(b[o]))
    return out


# ---------------------------------------------------------------------------
# attention and normalization


def _softmax_row(row):
    m = max(row)
    ex = [math.exp(v - m) for v in row]
    s = sum(ex)
    return [v / s for v in ex]


def attention_naive(x, wq, wk, wv, wo, heads, bq, bk, bv, bo):
    """Per-head scaled dot-product attention, one score at a time."""
    x = np.asarray(x, dtype=np.float64)
    t, d = x.shape
    a = wq.shape[1]
    hd = a // heads
    q = x @ wq + bq
    k = x @ wk + bk
    v = x @ wv + bv
    ctx = np.zeros((t, a))
    for h in range(heads):
        sl = slice(h * hd, (h + 1) * hd)
        for ti in range(t):
            scores = [float(q[ti, sl] @ k[si, sl]) / math.sqrt(hd)
                      for si in range(t)]
            weights = _softmax_row(scores)
            for si in range(t):
                ctx[ti, sl] += weights[si] * v[si, sl]
    return ctx @ wo + bo


def layer_norm_naive(x, gamma, beta, eps=1e-5):
    x = np.asarray(x, dtype=np.float64)
    out = np.zeros_like(x)
    for i in range(x.shape[0]):
        mu = float(np.mean(x[i]))
        var = float(np.mean((x[i] - mu) ** 2))
        out[i] = (x[i] - mu) / math.sqrt(var + eps) * gamma + beta
    return out


def length_regulate_naive(rows, durations):
    out = []
    for row, n in zip(rows, durations):
        for _ in range(int(n)):
            out.append(np.asarray(row, dtype=np.float64))
    return np.stack(out)


# ---------------------------------------------------------------------------
# spectral


def hann_periodic_naive(length):
    return np.array([0.5 - 0.5 * math.cos(2 * math.pi * i / length)
                     for i in range(length)])


def stft_magnitude_naive(audio, fft_size, hop, win_length):
    """Reflect-centered magnitude STFT via a direct DFT matrix.

    No FFT anywhere: bin b of frame f is |sum_n frame[n] e^{-2 pi i b n / N}|
    computed with explicit cos/sin sums.
    """
    audio = np.asarray(audio, dtype=np.float64).reshape(-1)
    t = audio.shape[0]
    half = fft_size // 2
    padded = np.concatenate([audio[1:half + 1][::-1], audio,
                             audio[-half - 1:-1][::-1]])
    window = hann_periodic_naive(win_length)
    lpad = (fft_size - win_length) // 2
    full_window = np.zeros(fft_size)
    full_window[lpad:lpad + win_length] = window

    frames = 1 + t // hop
    n = np.arange(fft_size)
    bins = fft_size // 2 + 1
    cos_mat = np.cos(2 * np.pi * np.outer(np.arange(bins), n) / fft_size)
    sin_mat = np.sin(2 * np.pi * np.outer(np.arange(bins), n) / fft_size)
    mag = np.zeros((frames, bins))
    for f in range(frames):
        seg = padded[f * hop:f * hop + fft_size] * full_window
        re = cos_mat @ seg
        im = -(sin_mat @ seg)
        mag[f] = np.sqrt(re * re + im * im)
    return mag


def hz_to_mel_naive(f):
    # Slaney: linear to 1 kHz, logarithmic above
    if f < 1000.0:
        return f * 3.0 / 200.0
    return 15.0 + math.log(f / 1000.0) / (math.log(6.4) / 27.0)


def mel_to_hz_naive(m):
    if m < 15.0:
        return m * 200.0 / 3.0
    return 1000.0 * math.exp((math.log(6.4) / 27.0) * (m - 15.0))


def mel_filterbank_naive(n_mels, sample_rate, fft_size, f_min, f_max):
    n_bins = fft_size // 2 + 1
    mel_lo = hz_to_mel_naive(f_min)
    mel_hi = hz_to_mel_naive(f_max)
    pts = [mel_to_hz_naive(mel_lo + (mel_hi - mel_lo) * i / (n_mels + 1))
           for i in range(n_mels + 2)]
    weights = np.zeros((n_mels, n_bins))
    for m in range(n_mels):
        lo, center, hi = pts[m], pts[m + 1], pts[m + 2]
        for b in range(n_bins):
            f = b * sample_rate / fft_size
            up = (f - lo) / max(center - lo, 1e-12)
            down = (hi - f) / max(hi - center, 1e-12)
            tri = max(0.0, min(up, down))
            weights[m, b] = tri * 2.0 / (hi - lo)
    return weights


def log_mel_naive(audio, fft_size, hop, win_length, fb, floor=1e-5):
    mag = stft_magnitude_naive(audio, fft_size, hop, win_length)
    # the engine projects float32 magnitudes through float32 filter weights;
    # match those roundings so tiny bins near the floor agree
    mel = (mag.astype(np.float32).astype(np.float64)
           @ fb.astype(np.float32).astype(np.float64).T)
    return np.log(np.maximum(mel, floor))


# ---------------------------------------------------------------------------
# PQMF


def kaiser_window_naive(length, beta):
    """I0-ratio Kaiser window from the definition."""
    m = length - 1
    out = np.zeros(length)
    for i in range(length):
        r = 2.0 * i / m - 1.0
        out[i] = np.i0(beta * math.sqrt(max(0.0, 1.0 - r * r))) / np.i0(beta)
    return out


def pqmf_filters_naive(taps, cutoff_ratio, beta, subbands):
    """Cosine-modulated analysis/synthesis banks from the prototype."""
    proto = np.zeros(taps + 1)
    for i in range(taps + 1):
        m = i - taps / 2.0
        if m == 0.0:
            proto[i] = cutoff_ratio
        else:
            proto[i] = math.sin(math.pi * cutoff_ratio * m) / (math.pi * m)
    proto *= kaiser_window_naive(taps + 1, beta)
    analysis = np.zeros((subbands, taps + 1))
    synthesis = np.zeros((subbands, taps + 1))
    for k in range(subbands):
        for i in range(taps + 1):
            arg = ((2 * k + 1) * (math.pi / (2 * subbands))
                   * (i - taps / 2.0))
            phase = (-1.0) ** k * math.pi / 4.0
            analysis[k, i] = 2.0 * proto[i] * math.cos(arg + phase)
            synthesis[k, i] = 2.0 * proto[i] * math.cos(arg - phase)
    return analysis, synthesis


def pqmf_analysis_naive(audio, analysis_filters, subbands):
    """Causal filter + decimate; mirrors the engine's float32 filter taps."""
    audio = np.asarray(audio, dtype=np.float64).reshape(-1)
    t = audio.shape[0]
    if t % subbands:
        audio = np.concatenate([audio, np.zeros(subbands - t % subbands)])
        t = audio.shape[0]
    filters = analysis_filters.astype(np.float32).astype(np.float64)
    bands = np.zeros((subbands, t // subbands))
    for k in range(subbands):
        filtered = np.convolve(audio, filters[k])[:t]
        bands[k] = filtered[::subbands]
    return bands.astype(np.float32).astype(np.float64)


def pqmf_synthesis_naive(bands, synthesis_filters, subbands):
    """Zero-stuff by the band count, filter, sum; gain n per band."""
    bands = np.asarray(bands, dtype=np.float64)
    t = bands.shape[1] * subbands
    filters = synthesis_filters.astype(np.float32).astype(np.float64)
    out = np.zeros(t)
    for k in range(subbands):
        stuffed = np.zeros(t)
        stuffed[::subbands] = bands[k] * subbands
        out += np.convolve(stuffed, filters[k])[:t]
    return out.astype(np.float32).astype(np.float64)


# ---------------------------------------------------------------------------
# losses, as flat formulas


def duration_loss_naive(pred_log, oracle_log):
    pred = np.asarray(pred_log, dtype=np.float64)
    oracle = np.asarray(oracle_log, dtype=np.float64)
    return float(np.mean((pred - oracle) ** 2))


def pitch_ce_naive(logits, targets):
    logits = np.asarray(logits, dtype=np.float64)
    total = 0.0
    for i, target in enumerate(targets):
        row = logits[i]
        m = float(np.max(row))
        lse = m + math.log(float(np.sum(np.exp(row - m))))
        total += lse - float(row[int(target)])
    return total / logits.shape[0]


def lsgan_d_naive(real_maps, fake_maps):
    total = 0.0
    for r, f in zip(real_maps, fake_maps):
        total += float(np.mean((np.asarray(r, dtype=np.float64) - 1.0) ** 2))
        total += float(np.mean(np.asarray(f, dtype=np.float64) ** 2))
    return total / len(real_maps)


def lsgan_g_naive(fake_maps):
    total = 0.0
    for f in fake_maps:
        total += float(np.mean((np.asarray(f, dtype=np.float64) - 1.0) ** 2))
    return total / len(fake_maps)


def feature_matching_naive(real_feats, fake_feats):
    total = 0.0
    for r_list, f_list in zip(real_feats, fake_feats):
        for r, f in zip(r_list, f_list):
            diff = np.abs(np.asarray(r, dtype=np.float64)
                          - np.asarray(f, dtype=np.float64))
            total += float(np.mean(diff))
    return total / len(real_feats)


def spectral_convergence_naive(s, s_hat):
    s = np.asarray(s, dtype=np.float64)
    s_hat = np.asarray(s_hat, dtype=np.float64)
    return float(np.sqrt(np.sum((s - s_hat) ** 2)) / np.sqrt(np.sum(s * s)))


def stft_magnitude_loss_naive(s, s_hat, floor=1e-5):
    s = np.maximum(np.asarray(s, dtype=np.float64), floor)
    s_hat = np.maximum(np.asarray(s_hat, dtype=np.float64), floor)
    return float(np.mean(np.abs(np.log(s) - np.log(s_hat))))


def mr_stft_naive(x, x_hat, resolutions):
    """Mean over resolutions of L_sc + L_mag, magnitudes via the naive DFT.

    Matches the engine's float32 magnitude boundary before the loss math.
    """
    total = 0.0
    for fft, hop, win in resolutions:
        s = stft_magnitude_naive(x, fft, hop, win).astype(np.float32)
        s_hat = stft_magnitude_naive(x_hat, fft, hop, win).astype(np.float32)
        total += spectral_convergence_naive(s, s_hat)
        total += stft_magnitude_loss_naive(s, s_hat)
    return total / len(resolutions)


def subband_resolutions_naive(resolutions, subbands):
    return [(max(fft // subbands, 32), max(hop // subbands, 8),
             max(win // subbands, 32)) for fft, hop, win in resolutions]


def total_loss_naive(dur, f0, gan_g, fm, mel, stft_full, stft_sub,
                     lambda_fm=2.0, lambda_mel=5.0, lambda_stft=2.5):
    return (dur + f0 + gan_g + lambda_fm * fm + lambda_mel * mel
            + lambda_stft * (stft_full + stft_sub) / 2.0)


# ---------------------------------------------------------------------------
# PCM16 WAV, for golden audio files


def encode_pcm16_naive(samples):
    """Clamp to [-1, 1], scale by 32767, round half away from zero."""
    out = np.zeros(len(samples), dtype=np.int16)
    for i, v in enumerate(np.asarray(samples, dtype=np.float64)):
        v = min(1.0, max(-1.0, v)) * 32767.0
        out[i] = int(math.floor(abs(v) + 0.5)) * (1 if v >= 0 else -1)
    return out


def decode_pcm16_naive(pcm):
    # float32 division, the engine's WAV-decode convention
    scaled = np.asarray(pcm, dtype=np.float32) / np.float32(32767.0)
    return scaled.astype(np.float64)
