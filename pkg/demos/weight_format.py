import os
import tempfile

import numpy as np

from le2e import (FormatError, WeightBundle, count_parameters,
                  init_random_weights, load_bundle, save_bundle)

# a small hand-built bundle round-trips exactly
tensors = {
    "encoder.embedding": np.arange(20, dtype=np.float32).reshape(5, 4),
    "decoder.blocks.0.norm_gamma": np.ones(4, dtype=np.float32),
}
path = os.path.join(tempfile.gettempdir(), "demo_weights.bin")
save_bundle(WeightBundle(tensors), path)
print("saved", path, f"({os.path.getsize(path)} bytes)")

loaded = load_bundle(path)
assert list(loaded.keys()) == list(tensors)  # order preserved
for name in tensors:
    np.testing.assert_array_equal(loaded[name], tensors[name])
print("round trip exact for", len(tensors), "tensors")
print("manifest:", loaded.manifest)

# saving the loaded bundle again reproduces the file byte for byte
path2 = path + ".resave"
save_bundle(loaded, path2)
assert open(path, "rb").read() == open(path2, "rb").read()
print("re-save is byte-identical")

# corrupt the magic and the loader refuses with the failing offset
blob = bytearray(open(path, "rb").read())
blob[:4] = b"NOPE"
bad = path + ".bad"
open(bad, "wb").write(bytes(blob))
try:
    load_bundle(bad)
except FormatError as e:
    print("corrupt magic rejected:", e)

# parameter accounting over a full random init, grouped by name prefix
report = count_parameters(init_random_weights(seed=0))
print("\nparameter breakdown:")
print(report.breakdown())

for p in (path, path2, bad):
    os.remove(p)
