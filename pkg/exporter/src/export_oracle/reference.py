"""Torch reference implementation of the generator.

This is the "training framework" side of the export contract: a plain
PyTorch model whose state dict is what `export_checkpoint` consumes. The
forward pass mirrors the engine's inference semantics (post-norm blocks,
correlation convs, symmetric same padding, the exact transposed-conv crop)
so a forward here doubles as the golden reference for end-to-end fixtures.

Vocoder convolutions carry torch weight normalization, which the exporter
must fuse; the acoustic side is plain parameters.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from torch.nn.utils import weight_norm as _weight_norm


def weight_norm(module: nn.Module) -> nn.Module:
    """Legacy weight normalization, quietly.

    The deprecated API is the point: it stores weight_g/weight_v pairs,
    the checkpoint layout the exporter's fusing contract is written
    against. The parametrized replacement uses different state keys.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", FutureWarning)
        return _weight_norm(module)


@dataclass(frozen=True)
class RefModelConfig:
    vocab_size: int = 256
    hidden: int = 256
    heads: int = 2
    attention_dim: int = 64
    encoder_kernels: tuple = (5, 25, 13, 9)
    decoder_kernels: tuple = (17, 21, 9, 13)
    dur_layers: int = 2
    dur_kernel: int = 3
    pitch_layers: int = 5
    pitch_kernel: int = 5
    pitch_bins: int = 256
    sample_rate: int = 22050
    frame_hop: int = 300


@dataclass(frozen=True)
class RefVocoderConfig:
    upsample_factors: tuple = (3, 5, 5)
    up_channels: tuple = (192, 96, 48)
    up_kernels: tuple = (6, 10, 10)
    resblocks_per_stage: int = 4
    res_dilations: tuple = (1, 3, 9, 27)
    res_kernel: int = 3
    leaky_slope: float = 0.2
    out_kernel: int = 7
    subbands: int = 4
    input_channels: int = 256
    stem_channels: int = 384


TINY_MODEL = RefModelConfig(
    vocab_size=13, hidden=8, heads=2, attention_dim=8,
    encoder_kernels=(3,), decoder_kernels=(3,), dur_layers=1,
    pitch_layers=1, pitch_bins=16, sample_rate=1600, frame_hop=16)

TINY_VOCODER = RefVocoderConfig(
    upsample_factors=(2, 2), up_channels=(8, 4), up_kernels=(4, 4),
    resblocks_per_stage=2, res_dilations=(1, 3), input_channels=8,
    stem_channels=12)


def config_dicts(mc: RefModelConfig, vc: RefVocoderConfig) -> dict:
    """Engine-keyword config dicts, for fixture metadata and the CLI."""
    return {
        "model": {k: list(v) if isinstance(v, tuple) else v
                  for k, v in vars(mc).items()},
        "vocoder": {k: list(v) if isinstance(v, tuple) else v
                    for k, v in vars(vc).items()},
    }


def sinusoidal_positions(length: int, dim: int) -> torch.Tensor:
    pos = torch.arange(length, dtype=torch.float64)[:, None]
    i = torch.arange(0, dim, 2, dtype=torch.float64)[None, :]
    angle = pos / torch.pow(torch.tensor(10000.0, dtype=torch.float64),
                            i / dim)
    table = torch.zeros(length, dim, dtype=torch.float64)
    table[:, 0::2] = torch.sin(angle)
    table[:, 1::2] = torch.cos(angle[:, : dim // 2])
    return table.float()


class SelfAttention(nn.Module):
    """Rectangular multi-head self-attention over [T, D]."""

    def __init__(self, dim: int, attn_dim: int, heads: int):
        super().__init__()
        self.heads = heads
        self.head_dim = attn_dim // heads
        self.q = nn.Linear(dim, attn_dim)
        self.k = nn.Linear(dim, attn_dim)
        self.v = nn.Linear(dim, attn_dim)
        self.out = nn.Linear(attn_dim, dim)

    def forward(self, x):
        t = x.shape[0]
        q = self.q(x).reshape(t, self.heads, self.head_dim)
        k = self.k(x).reshape(t, self.heads, self.head_dim)
        v = self.v(x).reshape(t, self.heads, self.head_dim)
        scores = torch.einsum("thd,shd->hts", q, k) / math.sqrt(self.head_dim)
        attn = torch.softmax(scores, dim=-1)
        ctx = torch.einsum("hts,shd->thd", attn, v).reshape(t, -1)
        return self.out(ctx)


class SepConv(nn.Module):
    """Depthwise then pointwise conv over [T, D] with symmetric padding."""

    def __init__(self, dim: int, kernel: int, inner_relu: bool):
        super().__init__()
        self.dw = nn.Conv1d(dim, dim, kernel, groups=dim,
                            padding=(kernel - 1) // 2)
        self.pw = nn.Conv1d(dim, dim, 1)
        self.inner_relu = inner_relu

    def forward(self, x):
        y = self.dw(x.T[None])
        if self.inner_relu:
            y = F.relu(y)
        return self.pw(y)[0].T


class Block(nn.Module):
    """Post-norm transformer block with a separable-conv FFN."""

    def __init__(self, dim: int, attn_dim: int, heads: int, kernel: int):
        super().__init__()
        self.attn = SelfAttention(dim, attn_dim, heads)
        self.attn_norm = nn.LayerNorm(dim)
        self.ffn = SepConv(dim, kernel, inner_relu=True)
        self.ffn_norm = nn.LayerNorm(dim)

    def forward(self, x):
        x = self.attn_norm(x + self.attn(x))
        return self.ffn_norm(x + self.ffn(x))


class PredictorLayer(nn.Module):
    def __init__(self, dim: int, kernel: int):
        super().__init__()
        self.dw = nn.Conv1d(dim, dim, kernel, groups=dim,
                            padding=(kernel - 1) // 2)
        self.pw = nn.Conv1d(dim, dim, 1)
        self.norm = nn.LayerNorm(dim)

    def forward(self, x):
        y = self.pw(self.dw(x.T[None]))[0].T
        return self.norm(F.relu(y))


class Predictor(nn.Module):
    def __init__(self, dim: int, kernel: int, layers: int, out_dim: int):
        super().__init__()
        self.layers = nn.ModuleList(
            PredictorLayer(dim, kernel) for _ in range(layers))
        self.proj = nn.Linear(dim, out_dim)

    def forward(self, x):
        for layer in self.layers:
            x = layer(x)
        return self.proj(x), x


class ResBlock(nn.Module):
    def __init__(self, channels: int, kernel: int, dilation: int,
                 slope: float):
        super().__init__()
        self.slope = slope
        self.conv1 = weight_norm(nn.Conv1d(
            channels, channels, kernel, dilation=dilation,
            padding=dilation * (kernel - 1) // 2))
        self.conv2 = weight_norm(nn.Conv1d(channels, channels, 1))

    def forward(self, x):
        y = self.conv1(F.leaky_relu(x, self.slope))
        y = self.conv2(F.leaky_relu(y, self.slope))
        return x + y


class UpStage(nn.Module):
    def __init__(self, c_in: int, c_out: int, kernel: int, stride: int,
                 dilations, res_kernel: int, slope: float):
        super().__init__()
        self.stride = stride
        self.kernel = kernel
        self.up = weight_norm(nn.ConvTranspose1d(c_in, c_out, kernel,
                                                 stride=stride))
        self.res = nn.ModuleList(
            ResBlock(c_out, res_kernel, d, slope) for d in dilations)

    def forward(self, x):
        t = x.shape[-1]
        full = self.up(x)
        left = (self.kernel - self.stride) // 2
        x = full[..., left:left + t * self.stride]
        for block in self.res:
            x = block(x)
        return x


class ReferenceGenerator(nn.Module):
    """The full acoustic model + vocoder, inference semantics."""

    def __init__(self, mc: RefModelConfig = TINY_MODEL,
                 vc: RefVocoderConfig = TINY_VOCODER):
        super().__init__()
        self.mc = mc
        self.vc = vc
        d = mc.hidden
        self.embedding = nn.Embedding(mc.vocab_size, d)
        self.encoder = nn.ModuleDict({"blocks": nn.ModuleList(
            Block(d, mc.attention_dim, mc.heads, k)
            for k in mc.encoder_kernels)})
        self.duration_predictor = Predictor(d, mc.dur_kernel,
                                            mc.dur_layers, 1)
        self.pitch_predictor = Predictor(d, mc.pitch_kernel,
                                         mc.pitch_layers, mc.pitch_bins)
        self.decoder = nn.ModuleDict({"blocks": nn.ModuleList(
            Block(d, mc.attention_dim, mc.heads, k)
            for k in mc.decoder_kernels)})
        self.vocoder = nn.ModuleDict({
            "input_conv": weight_norm(nn.Conv1d(
                vc.input_channels, vc.stem_channels, 7, padding=3)),
            "stages": nn.ModuleList(),
            "output_conv": weight_norm(nn.Conv1d(
                vc.up_channels[-1], vc.subbands, vc.out_kernel,
                padding=(vc.out_kernel - 1) // 2)),
        })
        c_prev = vc.stem_channels
        for factor, channels, kernel in zip(vc.upsample_factors,
                                            vc.up_channels, vc.up_kernels):
            self.vocoder["stages"].append(UpStage(
                c_prev, channels, kernel, factor, vc.res_dilations,
                vc.res_kernel, vc.leaky_slope))
            c_prev = channels

    def encode(self, ids: torch.Tensor) -> torch.Tensor:
        x = self.embedding(ids) + sinusoidal_positions(ids.shape[0],
                                                       self.mc.hidden)
        for block in self.encoder["blocks"]:
            x = block(x)
        return x

    def acoustic(self, ids: torch.Tensor, durations: torch.Tensor):
        """Returns (latent [T, D], predicted log durations [N])."""
        enc = self.encode(ids)
        log_dur, _ = self.duration_predictor(enc)
        x = torch.repeat_interleave(enc, durations, dim=0)
        # pitch logits exist for the loss; inference keeps only the latents
        x = x + self.pitch_predictor(x)[1]
        for block in self.decoder["blocks"]:
            x = block(x)
        return x, log_dur[:, 0]

    def bands(self, latent: torch.Tensor) -> torch.Tensor:
        x = self.vocoder["input_conv"](latent.T[None])
        for stage in self.vocoder["stages"]:
            x = stage(x)
        x = F.leaky_relu(x, self.vc.leaky_slope)
        return torch.tanh(self.vocoder["output_conv"](x))[0]

    @torch.no_grad()
    def synthesize(self, ids, durations) -> np.ndarray:
        """Full reference forward to a float64 waveform."""
        from .oracles import pqmf_filters_naive

        ids = torch.as_tensor(np.asarray(ids), dtype=torch.long)
        durations = torch.as_tensor(np.asarray(durations), dtype=torch.long)
        latent, _ = self.acoustic(ids, durations)
        bands = self.bands(latent).numpy().astype(np.float64)
        _, synthesis = pqmf_filters_naive(62, 0.142, 9.0, self.vc.subbands)
        synthesis = synthesis.astype(np.float32).astype(np.float64)
        n = self.vc.subbands
        t = bands.shape[1] * n
        wave = np.zeros(t)
        for k in range(n):
            stuffed = np.zeros(t)
            stuffed[::n] = bands[k] * n
            wave += np.convolve(stuffed, synthesis[k])[:t]
        return np.clip(wave, -1.0, 1.0)


def build_reference(mc: RefModelConfig = TINY_MODEL,
                    vc: RefVocoderConfig = TINY_VOCODER,
                    seed: int = 0) -> ReferenceGenerator:
    """Seeded construction; parameters at torch's default init scales."""
    torch.manual_seed(seed)
    model = ReferenceGenerator(mc, vc)
    model.eval()
    return model


def save_checkpoint(model: ReferenceGenerator, path) -> None:
    torch.save(model.state_dict(), path)
