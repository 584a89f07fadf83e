"""A walk through the core numerical kernels.

Everything below is plain numpy in, plain numpy out. Run it top to bottom;
each section prints what it computes and asserts the property it relies on.
"""
import numpy as np

from le2e import (conv1d, conv_transpose1d, layer_norm, linear,
                  multi_head_self_attention, sinusoidal_positions, softmax)

rng = np.random.default_rng(0)

# --- conv1d ----------------------------------------------------------------
# A box filter is the easiest sanity check: "same" padding keeps the length,
# and the edges only see two of the three taps.
x = np.ones((1, 4), dtype=np.float32)
w = np.ones((1, 1, 3), dtype=np.float32)
y = conv1d(x, w, padding="same")
print("box filter over ones:", y[0])
assert y.shape == (1, 4)
np.testing.assert_allclose(y[0], [2.0, 3.0, 3.0, 2.0])

# Dilation widens the receptive field without adding taps. With dilation 4
# and kernel 3 the filter spans 9 input samples.
x = np.zeros((1, 21), dtype=np.float32)
x[0, 10] = 1.0
y = conv1d(x, w, dilation=4, padding="same")
taps_hit = np.nonzero(y[0])[0]
print("impulse through dilated kernel lands at samples", taps_hit)
assert list(taps_hit) == [6, 10, 14]

# --- conv_transpose1d ------------------------------------------------------
# The transposed conv is the upsampler: [C, T] -> [C, T * stride], always.
x = rng.standard_normal((2, 8), dtype=np.float32)
w = rng.standard_normal((2, 3, 6), dtype=np.float32)
y = conv_transpose1d(x, w, stride=3)
print("upsample 8 frames by 3:", y.shape)
assert y.shape == (3, 24)

# --- attention -------------------------------------------------------------
# With a single timestep there is nothing to attend over, so the attention
# weight is exactly 1 and the whole operation collapses to v @ wo.
d, a, heads = 16, 8, 2
x = rng.standard_normal((1, d), dtype=np.float32)
wq, wk, wv = (rng.standard_normal((d, a), dtype=np.float32) for _ in range(3))
wo = rng.standard_normal((a, d), dtype=np.float32)
out = multi_head_self_attention(x, wq, wk, wv, wo, heads)
expect = linear(linear(x, wv), wo)
print("T=1 attention vs direct projection, max diff",
      float(np.abs(out - expect).max()))
np.testing.assert_allclose(out, expect, atol=1e-5)

# Softmax rows always sum to one, whatever the logits.
logits = rng.standard_normal((5, 7)) * 30.0
p = softmax(logits)
assert np.allclose(p.sum(axis=-1), 1.0, atol=1e-6)

# --- layer_norm ------------------------------------------------------------
x = rng.standard_normal((3, 32), dtype=np.float32) * 5 + 2
g = np.ones(32, dtype=np.float32)
b = np.zeros(32, dtype=np.float32)
y = layer_norm(x, g, b)
print("layer_norm row means:", np.round(y.mean(axis=-1), 6))
assert np.abs(y.mean(axis=-1)).max() < 1e-5
assert np.abs(y.std(axis=-1) - 1.0).max() < 1e-3

# --- positional encoding ---------------------------------------------------
# Position 0 interleaves sin(0)=0 and cos(0)=1.
pe = sinusoidal_positions(4, 8)
print("position 0:", pe[0])
assert np.allclose(pe[0, 0::2], 0.0) and np.allclose(pe[0, 1::2], 1.0)
assert np.abs(pe).max() <= 1.0 + 1e-6

print("kernels tour: all good")
