"""Name mapping from torch state-dict keys to v1 tensor names.

Rules are ordered regexes; the first match wins. A rule can transpose the
tensor, which covers the one layout difference between the frameworks:
torch Linear weights are [out, in] while the engine's linear kernel takes
[in, out]. Conv weights share torch's layout on both sides and pass
through untouched.
"""

import re
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MapRule:
    pattern: str
    replacement: str
    transpose: bool = False

    def apply(self, name: str):
        """The mapped name, or None when the rule does not match."""
        if re.fullmatch(self.pattern, name):
            return re.sub(self.pattern, self.replacement, name)
        return None


_STACK = r"(encoder|decoder)\.blocks\.(\d+)"
_PRED = r"(duration|pitch)_predictor"

DEFAULT_MAPPING = (
    MapRule(r"embedding\.weight", r"encoder.embedding"),

    MapRule(_STACK + r"\.attn\.q\.weight", r"\1.blocks.\2.attn.wq", True),
    MapRule(_STACK + r"\.attn\.k\.weight", r"\1.blocks.\2.attn.wk", True),
    MapRule(_STACK + r"\.attn\.v\.weight", r"\1.blocks.\2.attn.wv", True),
    MapRule(_STACK + r"\.attn\.out\.weight", r"\1.blocks.\2.attn.wo", True),
    MapRule(_STACK + r"\.attn\.q\.bias", r"\1.blocks.\2.attn.bq"),
    MapRule(_STACK + r"\.attn\.k\.bias", r"\1.blocks.\2.attn.bk"),
    MapRule(_STACK + r"\.attn\.v\.bias", r"\1.blocks.\2.attn.bv"),
    MapRule(_STACK + r"\.attn\.out\.bias", r"\1.blocks.\2.attn.bo"),
    MapRule(_STACK + r"\.attn_norm\.weight", r"\1.blocks.\2.attn_norm.gamma"),
    MapRule(_STACK + r"\.attn_norm\.bias", r"\1.blocks.\2.attn_norm.beta"),
    MapRule(_STACK + r"\.ffn\.(dw|pw)\.weight", r"\1.blocks.\2.ffn.\3_weight"),
    MapRule(_STACK + r"\.ffn\.(dw|pw)\.bias", r"\1.blocks.\2.ffn.\3_bias"),
    MapRule(_STACK + r"\.ffn_norm\.weight", r"\1.blocks.\2.ffn_norm.gamma"),
    MapRule(_STACK + r"\.ffn_norm\.bias", r"\1.blocks.\2.ffn_norm.beta"),

    MapRule(_PRED + r"\.layers\.(\d+)\.(dw|pw)\.weight",
            r"variance.\1.layers.\2.\3_weight"),
    MapRule(_PRED + r"\.layers\.(\d+)\.(dw|pw)\.bias",
            r"variance.\1.layers.\2.\3_bias"),
    MapRule(_PRED + r"\.layers\.(\d+)\.norm\.weight",
            r"variance.\1.layers.\2.norm_gamma"),
    MapRule(_PRED + r"\.layers\.(\d+)\.norm\.bias",
            r"variance.\1.layers.\2.norm_beta"),
    MapRule(_PRED + r"\.proj\.weight", r"variance.\1.proj.weight", True),
    MapRule(_PRED + r"\.proj\.bias", r"variance.\1.proj.bias"),

    # vocoder tensors keep their names; weight norm is fused before mapping
    MapRule(r"vocoder\..+", r"\g<0>"),
)


def fuse_weight_norm(state: dict) -> dict:
    """Collapse every weight_g/weight_v pair into a plain weight.

    weight = g * v / ||v||, with the norm taken over all axes but the
    first (torch weight_norm's default dim=0). Tensors without a partner
    pass through unchanged; a dangling half is an error.
    """
    def is_half(name, suffix):
        # bare "weight_g" (a single layer's state dict) counts too
        return name == suffix or name.endswith("." + suffix)

    out = {}
    for name, value in state.items():
        arr = np.asarray(value, dtype=np.float64)
        if is_half(name, "weight_g"):
            base = name[: -len("_g")]
            v_name = base + "_v"
            if v_name not in state:
                raise KeyError(f"{name} has no matching {v_name}")
            v = np.asarray(state[v_name], dtype=np.float64)
            axes = tuple(range(1, v.ndim))
            norm = np.sqrt((v * v).sum(axis=axes, keepdims=True))
            out[base] = (arr * v / norm).astype(np.float32)
        elif is_half(name, "weight_v"):
            if name[: -len("_v")] + "_g" not in state:
                raise KeyError(f"{name} has no matching weight_g")
        else:
            out[name] = arr.astype(np.float32)
    return out
