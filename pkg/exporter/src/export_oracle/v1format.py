"""Standalone v1 weight-file writer/reader.

This is a second, independent implementation of the byte layout the engine
reads, kept here so exported files double as a format cross-check:

    magic "LE2E" | u32 version=1 | u64 tensor count |
    per tensor: u32 name length | ASCII name | u32 ndim |
                ndim x u64 dims | row-major little-endian f32 data

Writes are deterministic: the same tensors in the same order produce the
same bytes.
"""

import struct

import numpy as np

MAGIC = b"LE2E"
VERSION = 1


def write_tensors(tensors: dict, path) -> None:
    """Write an ordered name -> array mapping as a v1 file."""
    parts = [MAGIC, struct.pack("<I", VERSION),
             struct.pack("<Q", len(tensors))]
    for name, arr in tensors.items():
        arr = np.ascontiguousarray(arr, dtype="<f4")
        if not name or not name.isascii():
            raise ValueError(f"bad tensor name {name!r}")
        if arr.size == 0:
            raise ValueError(f"empty tensor {name!r}")
        if not np.isfinite(arr).all():
            raise ValueError(f"non-finite values in {name!r}")
        encoded = name.encode("ascii")
        parts.append(struct.pack("<I", len(encoded)))
        parts.append(encoded)
        parts.append(struct.pack("<I", arr.ndim))
        parts.append(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        parts.append(arr.tobytes())
    with open(path, "wb") as fh:
        fh.write(b"".join(parts))


def read_tensors(path) -> dict:
    """Read a v1 file back into an ordered name -> float32 array dict."""
    with open(path, "rb") as fh:
        data = fh.read()
    pos = 0

    def take(count):
        nonlocal pos
        if pos + count > len(data):
            raise ValueError(f"truncated v1 file at offset {pos}")
        out = data[pos:pos + count]
        pos += count
        return out

    if take(4) != MAGIC:
        raise ValueError("not a v1 weight file (bad magic)")
    version = struct.unpack("<I", take(4))[0]
    if version != VERSION:
        raise ValueError(f"unsupported version {version}")
    count = struct.unpack("<Q", take(8))[0]
    tensors = {}
    for _ in range(count):
        name_len = struct.unpack("<I", take(4))[0]
        name = take(name_len).decode("ascii")
        ndim = struct.unpack("<I", take(4))[0]
        dims = struct.unpack(f"<{ndim}Q", take(8 * ndim))
        n = int(np.prod(dims))
        tensors[name] = np.frombuffer(take(4 * n),
                                      dtype="<f4").reshape(dims).copy()
    if pos != len(data):
        raise ValueError(f"{len(data) - pos} trailing bytes")
    return tensors
