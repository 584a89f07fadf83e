"""Checkpoint conversion: torch state dict to v1 weight file + manifest."""

import hashlib
import json
from dataclasses import asdict, dataclass

import numpy as np

from .mapping import DEFAULT_MAPPING, fuse_weight_norm
from .v1format import write_tensors


class ExportError(Exception):
    pass


@dataclass(frozen=True)
class TensorRecord:
    name: str
    shape: tuple
    sha256: str


@dataclass(frozen=True)
class ExportManifest:
    source: str
    rules: tuple
    tensors: tuple
    total_params: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)


def _load_state(source):
    if isinstance(source, dict):
        return {k: np.asarray(v) for k, v in source.items()}, "<dict>"
    import torch

    state = torch.load(source, map_location="cpu", weights_only=True)
    if isinstance(state, dict) and "state_dict" in state:
        state = state["state_dict"]
    return {k: v.numpy() for k, v in state.items()}, str(source)


def map_state(state, mapping=DEFAULT_MAPPING) -> dict:
    """Rename a fused state dict into engine tensor names, sorted.

    First matching rule wins. Every source tensor must be claimed by some
    rule and no two sources may claim one target; either case aborts with
    the full offender list, since a silently dropped or clobbered tensor
    is a checkpoint bug.
    """
    mapped = {}
    origin = {}
    leftovers = []
    for name, arr in state.items():
        for rule in mapping:
            target = rule.apply(name)
            if target is None:
                continue
            if target in mapped:
                raise ExportError(f"both '{origin[target]}' and '{name}' "
                                  f"map to '{target}'")
            mapped[target] = arr.T.copy() if rule.transpose else arr
            origin[target] = name
            break
        else:
            leftovers.append(name)
    if leftovers:
        raise ExportError("unmapped tensors: " + ", ".join(sorted(leftovers)))
    return {name: mapped[name] for name in sorted(mapped)}


def export_checkpoint(source, mapping=DEFAULT_MAPPING,
                      out_path="weights.le2e") -> ExportManifest:
    """Convert a checkpoint into a v1 file the engine can load.

    `source` is a torch checkpoint path (a saved state dict, possibly
    wrapped in a {"state_dict": ...} envelope) or an already-materialized
    name -> array dict. Weight-norm pairs are fused first, then the
    names go through `map_state`.

    The v1 file is written sorted by target name, so exports are
    deterministic regardless of state-dict ordering. A JSON manifest goes
    next to it at out_path + ".manifest.json".
    """
    state, source_label = _load_state(source)
    ordered = map_state(fuse_weight_norm(state), mapping)
    write_tensors(ordered, out_path)

    records = tuple(
        TensorRecord(name, tuple(int(d) for d in arr.shape),
                     hashlib.sha256(
                         np.ascontiguousarray(arr, dtype="<f4").tobytes())
                     .hexdigest())
        for name, arr in ordered.items())
    manifest = ExportManifest(
        source=source_label,
        rules=tuple((r.pattern, r.replacement, r.transpose)
                    for r in mapping),
        tensors=records,
        total_params=int(sum(np.prod(r.shape) for r in records)))
    with open(str(out_path) + ".manifest.json", "w") as fh:
        fh.write(manifest.to_json() + "\n")
    return manifest
