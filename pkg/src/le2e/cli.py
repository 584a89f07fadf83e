"""Command-line surface.

Commands:
    synth        phoneme ids -> WAV
    bench        real-time-factor benchmark
    loss-report  loss components for a (reference, predicted) WAV pair
    verify       built-in invariant suite

Exit codes: 0 success, 1 invariant/verification failure, 2 usage error,
3 I/O or format error. Set LE2E_LOG=debug|info for diagnostics on stderr.
"""

import argparse
import json
import logging
import os
import statistics
import sys
import time
import wave as wave_mod
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .acoustic import ModelConfig
from .audio_io import read_wav, write_wav
from .discriminators import MpdConfig, MrdConfig, mpd_forward, mrd_forward
from .errors import ConfigError, DataError, FormatError, InputError
from .losses import (duration_loss, feature_matching_loss, lsgan_d_loss,
                     lsgan_g_loss, mel_loss, mr_stft_full_sub,
                     total_generator_loss)
from .numerics import StftConfig, mel_filterbank
from .synthesis import (Synthesizer, init_random_discriminator_weights,
                        init_random_weights)
from .vocoder import VocoderConfig, pqmf_design
from .weights import load_bundle
from . import verify as verify_mod

log = logging.getLogger("le2e")


def _parse_int_list(text: str, what: str):
    try:
        values = [int(tok) for tok in text.split()]
    except ValueError:
        raise InputError(f"{what} must be whitespace-separated integers, "
                         f"got {text!r}") from None
    if not values or any(v < 0 for v in values):
        raise InputError(f"{what} must be non-empty and non-negative")
    return values


def _parse_float_list(text: str, what: str):
    try:
        return [float(tok) for tok in text.split()]
    except ValueError:
        raise InputError(f"{what} must be whitespace-separated floats, "
                         f"got {text!r}") from None


def _load_configs(path):
    """Optional JSON config: {"model": {...}, "vocoder": {...},

    "pqmf": {...}}, each section overriding dataclass defaults.
    """
    sections = {}
    if path:
        with open(path) as fh:
            sections = json.load(fh)
    def build(cls, key):
        kwargs = sections.get(key, {})
        kwargs = {k: tuple(v) if isinstance(v, list) else v
                  for k, v in kwargs.items()}
        try:
            return cls(**kwargs)
        except TypeError as exc:
            raise InputError(f"bad '{key}' config section: {exc}") from None
    model = build(ModelConfig, "model")
    vocoder = build(VocoderConfig, "vocoder")
    pqmf_kwargs = sections.get("pqmf", {})
    bank = pqmf_design(subbands=vocoder.subbands, **pqmf_kwargs)
    return model, vocoder, bank


def _bundle_for(args, model_cfg, vocoder_cfg):
    if args.weights:
        log.info("loading weights from %s", args.weights)
        return load_bundle(args.weights)
    log.info("no --weights given, using seeded random weights (seed %d)",
             args.seed)
    return init_random_weights(model_cfg, vocoder_cfg, seed=args.seed)


def cmd_synth(args) -> int:
    model_cfg, vocoder_cfg, bank = _load_configs(args.config)
    ids = _parse_int_list(args.phonemes, "--phonemes")
    durations = None
    if args.durations:
        durations = np.asarray(_parse_int_list(args.durations, "--durations"),
                               dtype=np.int64)
    synth = Synthesizer(_bundle_for(args, model_cfg, vocoder_cfg),
                        model_cfg, vocoder_cfg, bank)
    start = time.perf_counter()
    wave = synth.synthesize(ids, durations)
    elapsed = time.perf_counter() - start
    write_wav(args.out, wave, synth.sample_rate)
    log.info("synthesized %d samples (%.2f s audio) in %.3f s",
             wave.shape[0], wave.shape[0] / synth.sample_rate, elapsed)
    print(f"{args.out}: {wave.shape[0]} samples at {synth.sample_rate} Hz")
    return 0


def cmd_bench(args) -> int:
    if args.seconds <= 0:
        raise InputError("--seconds must be positive")
    if args.runs < 3:
        raise InputError("--runs must be at least 3 (warm-up excluded)")
    if args.threads < 1:
        raise InputError("--threads must be >= 1")
    model_cfg, vocoder_cfg, bank = _load_configs(args.config)
    synth = Synthesizer(_bundle_for(args, model_cfg, vocoder_cfg),
                        model_cfg, vocoder_cfg, bank)

    hop = model_cfg.frame_hop
    total_frames = max(1, round(args.seconds * model_cfg.sample_rate / hop))
    n_phonemes = max(1, total_frames // 8)
    ids = [i % model_cfg.vocab_size for i in range(n_phonemes)]
    durations = np.full(n_phonemes, total_frames // n_phonemes, dtype=np.int64)
    durations[:total_frames - int(durations.sum())] += 1

    def one_utterance():
        return synth.synthesize(ids, durations)

    samples = one_utterance().shape[0]  # warm-up, excluded from timing
    synthesized_s = samples / model_cfg.sample_rate * args.threads

    rtfs, walls = [], []
    with ThreadPoolExecutor(max_workers=args.threads) as pool:
        for _ in range(args.runs):
            start = time.perf_counter()
            futures = [pool.submit(one_utterance)
                       for _ in range(args.threads)]
            for f in futures:
                f.result()
            wall = time.perf_counter() - start
            walls.append(wall)
            rtfs.append(wall / synthesized_s)

    report = {
        "runs": args.runs,
        "threads": args.threads,
        "synthesized_seconds": synthesized_s,
        "samples_per_utterance": samples,
        "wall_seconds": walls,
        "rtf_runs": rtfs,
        "rtf_mean": statistics.mean(rtfs),
        "rtf_std": statistics.stdev(rtfs) if len(rtfs) > 1 else 0.0,
    }
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        print(f"synthesized {synthesized_s:.2f} s per run, "
              f"{args.runs} timed runs, {args.threads} thread(s)")
        print(f"rtf mean {report['rtf_mean']:.4f} "
              f"+/- {report['rtf_std']:.4f}")
    return 0


def cmd_loss_report(args) -> int:
    ref, sr_ref = read_wav(args.reference)
    pred, sr_pred = read_wav(args.predicted)
    if sr_ref != sr_pred:
        raise InputError(f"sample-rate mismatch: {sr_ref} vs {sr_pred}")
    if ref.shape[0] != pred.shape[0]:
        n = min(ref.shape[0], pred.shape[0])
        log.info("trimming to common length %d samples", n)
        ref, pred = ref[:n], pred[:n]

    _, vocoder_cfg, bank = _load_configs(args.config)
    mel_cfg = StftConfig(1024, 256, 1024)
    fb = mel_filterbank(80, sr_ref, 1024, 0.0, 8000.0)

    mel = mel_loss(ref, pred, mel_cfg, fb)
    full, sub, _ = mr_stft_full_sub(ref, pred, bank)

    if args.disc_weights:
        disc = load_bundle(args.disc_weights)
    else:
        log.info("no --disc-weights, using seeded random discriminators "
                 "(seed %d)", args.seed)
        disc = init_random_discriminator_weights(seed=args.seed)
    mpd_cfg, mrd_cfg = MpdConfig(), MrdConfig()
    real = mpd_forward(ref, disc, mpd_cfg) + mrd_forward(ref, disc, mrd_cfg)
    fake = mpd_forward(pred, disc, mpd_cfg) + mrd_forward(pred, disc, mrd_cfg)
    gan_g = lsgan_g_loss([o.score_map for o in fake])
    gan_d = lsgan_d_loss([o.score_map for o in real],
                         [o.score_map for o in fake])
    fm = feature_matching_loss([o.features for o in real],
                               [o.features for o in fake])

    dur = 0.0
    if args.dur_pred or args.dur_oracle:
        if not (args.dur_pred and args.dur_oracle):
            raise InputError("--dur-pred and --dur-oracle go together")
        dur = duration_loss(_parse_float_list(args.dur_pred, "--dur-pred"),
                            _parse_float_list(args.dur_oracle, "--dur-oracle"))
    f0 = 0.0  # pitch CE needs logit tensors, outside the CLI surface

    total = total_generator_loss(dur, f0, gan_g, fm, mel, full, sub)
    report = {"dur": dur, "f0": f0, "gan_g": gan_g, "gan_d": gan_d, "fm": fm,
              "mel": mel, "stft_full": full, "stft_sub": sub, "total": total}
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        for key, value in report.items():
            print(f"{key:>10}: {value:.6f}")
    return 0


def cmd_verify(args) -> int:
    model_cfg, vocoder_cfg, bank = _load_configs(args.config)
    bundle = None
    if args.weights:
        bundle = load_bundle(args.weights)
    results = verify_mod.run_all(bundle, model_cfg, vocoder_cfg, bank,
                                 seed=args.seed)
    ok = all(r.passed for r in results)
    if args.json:
        print(json.dumps({"passed": ok,
                          "checks": [r.__dict__ for r in results]}, indent=2))
    else:
        for r in results:
            status = "PASS" if r.passed else "FAIL"
            print(f"[{status}] {r.name}: {r.detail}")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="le2e",
        description="Lightweight end-to-end TTS inference engine")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, weights=True):
        if weights:
            p.add_argument("--weights", help="v1 weight bundle path "
                           "(default: seeded random weights)")
        p.add_argument("--config", help="JSON config overrides")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized fixtures")

    p = sub.add_parser("synth", help="synthesize a WAV from phoneme ids")
    common(p)
    p.add_argument("--phonemes", required=True,
                   help='whitespace-separated ids, e.g. "1 5 9"')
    p.add_argument("--durations",
                   help="per-phoneme frame counts overriding the predictor")
    p.add_argument("--out", required=True, help="output WAV path")
    p.set_defaults(fn=cmd_synth)

    p = sub.add_parser("bench", help="measure the real-time factor")
    common(p)
    p.add_argument("--seconds", type=float, default=10.0,
                   help="target utterance length per run")
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--threads", type=int, default=1,
                   help="parallel independent utterances per run")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("loss-report",
                       help="loss components for a WAV pair")
    p.add_argument("reference", help="reference WAV")
    p.add_argument("predicted", help="predicted WAV")
    common(p, weights=False)
    p.add_argument("--disc-weights",
                   help="discriminator bundle for GAN/FM terms "
                        "(default: seeded random)")
    p.add_argument("--dur-pred", help="log-scale predicted durations")
    p.add_argument("--dur-oracle", help="log-scale oracle durations")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_loss_report)

    p = sub.add_parser("verify", help="run the built-in invariant suite")
    common(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    level = {"debug": logging.DEBUG, "info": logging.INFO}.get(
        os.environ.get("LE2E_LOG", "").lower(), logging.WARNING)
    logging.basicConfig(level=level,
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (FormatError, DataError, wave_mod.Error, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
