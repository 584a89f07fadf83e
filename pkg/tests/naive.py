"""Deliberately naive reference implementations for oracle tests.

Everything here is written with explicit loops (or an explicit DFT matrix)
and shares no code with the package's fast paths. Slow on purpose; only run
at tiny sizes.
"""

import math

import numpy as np


def conv1d_oracle(x, w, b=None, dilation=1, groups=1, pad=(0, 0)):
    """Direct correlation with nested loops. x [C_in,T], w [C_out,C_in/g,K]."""
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    c_in, t = x.shape
    c_out, c_in_g, k = w.shape
    xp = np.zeros((c_in, pad[0] + t + pad[1]))
    xp[:, pad[0]:pad[0] + t] = x
    t_out = xp.shape[1] - (k - 1) * dilation
    out = np.zeros((c_out, t_out))
    out_per_group = c_out // groups
    for o in range(c_out):
        g = o // out_per_group
        for pos in range(t_out):
            acc = 0.0
            for ci in range(c_in_g):
                for kk in range(k):
                    acc += w[o, ci, kk] * xp[g * c_in_g + ci,
                                             pos + kk * dilation]
            out[o, pos] = acc + (b[o] if b is not None else 0.0)
    return out


def conv_transpose1d_oracle(x, w, b=None, stride=1):
    """Scatter-accumulate transposed conv. x [C_in,T], w [C_in,C_out,K]."""
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    c_in, t = x.shape
    _, c_out, k = w.shape
    full = np.zeros((c_out, (t - 1) * stride + k))
    for ci in range(c_in):
        for pos in range(t):
            for o in range(c_out):
                for kk in range(k):
                    full[o, pos * stride + kk] += x[ci, pos] * w[ci, o, kk]
    left = (k - stride) // 2
    out = full[:, left:left + t * stride]
    if b is not None:
        out = out + np.asarray(b, dtype=np.float64)[:, None]
    return out


def conv2d_oracle(x, w, b=None, stride=(1, 1), pad=(0, 0)):
    x = np.asarray(x, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    c_in, h, wd = x.shape
    c_out, _, kh, kw = w.shape
    xp = np.zeros((c_in, h + 2 * pad[0], wd + 2 * pad[1]))
    xp[:, pad[0]:pad[0] + h, pad[1]:pad[1] + wd] = x
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
                            acc += w[o, ci, a, bb] * xp[
                                ci, i * stride[0] + a, j * stride[1] + bb]
                out[o, i, j] = acc + (b[o] if b is not None else 0.0)
    return out


def _softmax_row(row):
    m = max(row)
    e = [math.exp(v - m) for v in row]
    s = sum(e)
    return [v / s for v in e]


def attention_oracle(x, wq, wk, wv, wo, heads, bq=None, bk=None, bv=None,
                     bo=None):
    """Explicit per-head attention loop. x [T,D], projections [D,A]/[A,D]."""
    x = np.asarray(x, dtype=np.float64)
    wq = np.asarray(wq, dtype=np.float64)
    wk = np.asarray(wk, dtype=np.float64)
    wv = np.asarray(wv, dtype=np.float64)
    wo = np.asarray(wo, dtype=np.float64)
    t = x.shape[0]
    a = wq.shape[1]
    hd = a // heads
    q = x @ wq + (0.0 if bq is None else np.asarray(bq, dtype=np.float64))
    k = x @ wk + (0.0 if bk is None else np.asarray(bk, dtype=np.float64))
    v = x @ wv + (0.0 if bv is None else np.asarray(bv, dtype=np.float64))
    ctx = np.zeros((t, a))
    for h in range(heads):
        sl = slice(h * hd, (h + 1) * hd)
        for i in range(t):
            scores = []
            for j in range(t):
                scores.append(float(q[i, sl] @ k[j, sl]) / math.sqrt(hd))
            weights = _softmax_row(scores)
            for j in range(t):
                ctx[i, sl] += weights[j] * v[j, sl]
    out = ctx @ wo
    if bo is not None:
        out = out + np.asarray(bo, dtype=np.float64)
    return out


def layer_norm_oracle(x, gamma, beta, eps=1e-5):
    x = np.asarray(x, dtype=np.float64)
    flat = x.reshape(-1, x.shape[-1])
    out = np.zeros_like(flat)
    for i, row in enumerate(flat):
        mean = sum(row) / len(row)
        var = sum((v - mean) ** 2 for v in row) / len(row)
        out[i] = (row - mean) / math.sqrt(var + eps) * gamma + beta
    return out.reshape(x.shape)


def stft_oracle(audio, fft_size, hop, win):
    """Framing plus an explicit DFT matrix; no FFT anywhere."""
    audio = np.asarray(audio, dtype=np.float64)
    t = audio.shape[0]
    half = fft_size // 2
    padded = np.concatenate([audio[1:half + 1][::-1], audio,
                             audio[-half - 1:-1][::-1]])
    window = np.zeros(fft_size)
    off = (fft_size - win) // 2
    for n in range(win):
        window[off + n] = 0.5 - 0.5 * math.cos(2.0 * math.pi * n / win)
    frames = 1 + t // hop
    n_bins = half + 1
    n_idx = np.arange(fft_size)
    mag = np.zeros((frames, n_bins))
    for f in range(frames):
        seg = padded[f * hop:f * hop + fft_size] * window
        for kbin in range(n_bins):
            angle = -2.0 * math.pi * kbin * n_idx / fft_size
            re = float(np.sum(seg * np.cos(angle)))
            im = float(np.sum(seg * np.sin(angle)))
            mag[f, kbin] = math.sqrt(re * re + im * im)
    return mag


def mel_oracle(mag, fb_weights, floor=1e-5):
    mag = np.asarray(mag, dtype=np.float64)
    fbw = np.asarray(fb_weights, dtype=np.float64)
    frames, _ = mag.shape
    n_mels = fbw.shape[0]
    out = np.zeros((frames, n_mels))
    for f in range(frames):
        for m in range(n_mels):
            out[f, m] = math.log(max(float(mag[f] @ fbw[m]), floor))
    return out


# --- loss oracles -----------------------------------------------------------


def duration_loss_oracle(pred, oracle):
    pred = list(np.asarray(pred, dtype=np.float64))
    oracle = list(np.asarray(oracle, dtype=np.float64))
    return sum((p - o) ** 2 for p, o in zip(pred, oracle)) / len(pred)


def pitch_ce_oracle(logits, targets):
    logits = np.asarray(logits, dtype=np.float64)
    total = 0.0
    for i, target in enumerate(targets):
        row = logits[i]
        m = float(row.max())
        lse = m + math.log(float(np.exp(row - m).sum()))
        total += lse - float(row[int(target)])
    return total / len(targets)


def lsgan_d_oracle(reals, fakes):
    terms = []
    for r, f in zip(reals, fakes):
        r = np.asarray(r, dtype=np.float64).reshape(-1)
        f = np.asarray(f, dtype=np.float64).reshape(-1)
        terms.append(sum((v - 1.0) ** 2 for v in r) / len(r)
                     + sum(v ** 2 for v in f) / len(f))
    return sum(terms) / len(terms)


def lsgan_g_oracle(fakes):
    terms = []
    for f in fakes:
        f = np.asarray(f, dtype=np.float64).reshape(-1)
        terms.append(sum((v - 1.0) ** 2 for v in f) / len(f))
    return sum(terms) / len(terms)


def feature_matching_oracle(reals, fakes):
    per_disc = []
    for rf, ff in zip(reals, fakes):
        acc = 0.0
        for r, f in zip(rf, ff):
            r = np.asarray(r, dtype=np.float64).reshape(-1)
            f = np.asarray(f, dtype=np.float64).reshape(-1)
            acc += sum(abs(a - b) for a, b in zip(r, f)) / len(r)
        per_disc.append(acc)
    return sum(per_disc) / len(per_disc)


def spectral_convergence_oracle(s, s_hat):
    s = np.asarray(s, dtype=np.float64).reshape(-1)
    s_hat = np.asarray(s_hat, dtype=np.float64).reshape(-1)
    num = math.sqrt(sum((a - b) ** 2 for a, b in zip(s, s_hat)))
    den = math.sqrt(sum(a ** 2 for a in s))
    return num / den


def stft_magnitude_oracle(s, s_hat, floor=1e-5):
    s = np.asarray(s, dtype=np.float64).reshape(-1)
    s_hat = np.asarray(s_hat, dtype=np.float64).reshape(-1)
    return sum(abs(math.log(max(a, floor)) - math.log(max(b, floor)))
               for a, b in zip(s, s_hat)) / len(s)


def mr_stft_oracle(x, x_hat, resolutions):
    total = 0.0
    for fft, hop, win in resolutions:
        s = stft_oracle(x, fft, hop, win)
        s_hat = stft_oracle(x_hat, fft, hop, win)
        total += (spectral_convergence_oracle(s, s_hat)
                  + stft_magnitude_oracle(s, s_hat))
    return total / len(resolutions)


def length_regulate_oracle(rows, durations):
    out = []
    for row, d in zip(rows, durations):
        for _ in range(int(d)):
            out.append(row)
    return np.asarray(out)
