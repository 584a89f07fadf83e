"""Portable binary weight format (v1) and parameter accounting.

Layout, little-endian throughout:

    bytes 0..4    magic "LE2E"
    bytes 4..8    format version, u32 (= 1)
    bytes 8..16   tensor count, u64
    per tensor:   name length u32, name bytes (ASCII),
                  ndim u32, dims u64 * ndim,
                  raw float32 data, row-major

One dtype, one sequential pass, deterministic byte output: an empty bundle
is exactly 16 bytes. Tensor names follow the prefix convention
("encoder.", "variance.", "decoder.", "vocoder.", "mpd.", "mrd.") that
parameter counting and validation group by.
"""

import hashlib
import struct
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, DataError, FormatError

MAGIC = b"LE2E"
FORMAT_VERSION = 1

GENERATOR_PREFIXES = ("encoder.", "variance.", "decoder.", "vocoder.")
ALL_PREFIXES = GENERATOR_PREFIXES + ("mpd.", "mrd.")


def _check_name(name: str):
    if not name:
        raise ConfigError("tensor names must be non-empty")
    if not name.isascii():
        raise ConfigError(f"tensor name not ASCII: {name!r}")


class WeightBundle:
    """Ordered, immutable-by-convention map of name -> float32 array."""

    def __init__(self, entries: dict):
        self.entries = {}
        for name, arr in entries.items():
            _check_name(name)
            self.entries[name] = np.ascontiguousarray(arr, dtype=np.float32)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.entries[name]

    def __contains__(self, name: str) -> bool:
        return name in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def keys(self):
        return self.entries.keys()

    def items(self):
        return self.entries.items()

    @property
    def manifest(self) -> dict:
        """Format version plus a hash of the architecture (names + shapes)."""
        h = hashlib.sha256()
        for name, arr in self.entries.items():
            h.update(name.encode("ascii"))
            h.update(str(tuple(arr.shape)).encode("ascii"))
        return {"version": FORMAT_VERSION, "config_hash": h.hexdigest()}


def save_bundle(bundle: WeightBundle, path) -> None:
    """Write the bundle in v1 format; byte output is deterministic."""
    chunks = [MAGIC, struct.pack("<I", FORMAT_VERSION),
              struct.pack("<Q", len(bundle))]
    for name, arr in bundle.items():
        _check_name(name)
        if not np.isfinite(arr).all():
            raise DataError("refusing to save non-finite values", name)
        encoded = name.encode("ascii")
        chunks.append(struct.pack("<I", len(encoded)))
        chunks.append(encoded)
        chunks.append(struct.pack("<I", arr.ndim))
        chunks.append(struct.pack(f"<{arr.ndim}Q", *arr.shape))
        chunks.append(arr.astype("<f4").tobytes())
    try:
        with open(path, "wb") as fh:
            fh.write(b"".join(chunks))
    except OSError as exc:
        raise OSError(f"cannot write weight bundle to {path}: {exc}") from exc


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.pos = 0

    def take(self, count: int, what: str) -> bytes:
        if self.pos + count > len(self.data):
            raise FormatError(f"truncated file while reading {what}: needed "
                              f"{count} bytes", len(self.data))
        out = self.data[self.pos:self.pos + count]
        self.pos += count
        return out


def load_bundle(path) -> WeightBundle:
    """Read a v1 file; a single sequential pass materializes every tensor."""
    with open(path, "rb") as fh:
        data = fh.read()
    r = _Reader(data)

    if r.take(4, "magic") != MAGIC:
        raise FormatError(f"bad magic, expected {MAGIC!r}", 0)
    version = struct.unpack("<I", r.take(4, "version"))[0]
    if version != FORMAT_VERSION:
        raise FormatError(f"unsupported format version {version}", 4)
    count = struct.unpack("<Q", r.take(8, "tensor count"))[0]

    entries = {}
    for i in range(count):
        name_len = struct.unpack("<I", r.take(4, f"name length #{i}"))[0]
        raw = r.take(name_len, f"name #{i}")
        try:
            name = raw.decode("ascii")
        except UnicodeDecodeError:
            raise FormatError(f"tensor name #{i} is not ASCII",
                              r.pos - name_len) from None
        if not name:
            raise FormatError(f"tensor name #{i} is empty", r.pos - name_len)
        if name in entries:
            raise FormatError(f"duplicate tensor name '{name}'",
                              r.pos - name_len)
        ndim = struct.unpack("<I", r.take(4, f"ndim of '{name}'"))[0]
        dims = struct.unpack(f"<{ndim}Q", r.take(8 * ndim,
                                                 f"dims of '{name}'"))
        if any(d == 0 for d in dims):
            raise FormatError(f"zero-sized dim in '{name}'", r.pos - 8 * ndim)
        n_elem = 1
        for d in dims:
            n_elem *= d
        payload = r.take(4 * n_elem, f"data of '{name}'")
        arr = np.frombuffer(payload, dtype="<f4").reshape(dims)
        if not np.isfinite(arr).all():
            raise DataError("non-finite values in loaded tensor", name)
        entries[name] = arr.copy()
    if r.pos != len(data):
        raise FormatError(f"{len(data) - r.pos} trailing bytes after the "
                          f"last tensor", r.pos)
    return WeightBundle(entries)


@dataclass
class ParamCountReport:
    per_module: dict
    total: int

    def breakdown(self) -> str:
        lines = [f"  {prefix:<12} {count:>12,}"
                 for prefix, count in self.per_module.items()]
        lines.append(f"  {'total':<12} {self.total:>12,}")
        return "\n".join(lines)


def count_parameters(bundle: WeightBundle,
                     grouping=GENERATOR_PREFIXES) -> ParamCountReport:
    """Count every tensor element, grouped by name prefix.

    Names matching none of the grouping prefixes land in an "other" bucket.
    Prefixes with no tensors report 0, so callers can detect a missing
    module at a glance.
    """
    per = {prefix: 0 for prefix in grouping}
    other = 0
    for name, arr in bundle.items():
        for prefix in grouping:
            if name.startswith(prefix):
                per[prefix] += arr.size
                break
        else:
            other += arr.size
    if other:
        per["other"] = other
    return ParamCountReport(per_module=per, total=sum(per.values()))
