"""Exporter command line.

Subcommands:
    export     torch checkpoint -> v1 weight file plus JSON manifest
    fixtures   regenerate the golden fixture tree
    reference  save a seeded reference checkpoint (tiny or full size)

Exit codes: 0 success, 1 export contract violation, 2 usage error.
"""

import argparse
import sys


def cmd_export(args) -> int:
    from .export import ExportError, export_checkpoint

    try:
        manifest = export_checkpoint(args.checkpoint, out_path=args.out)
    except (ExportError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"{args.out}: {len(manifest.tensors)} tensors, "
          f"{manifest.total_params} parameters")
    return 0


def cmd_fixtures(args) -> int:
    from .fixtures import generate_fixtures

    written = generate_fixtures(args.seed, args.out)
    for fx in written:
        print(f"{fx.name}: oracle {fx.oracle}, tolerance {fx.tolerance:g}")
    print(f"{len(written)} fixtures under {args.out}")
    return 0


def cmd_reference(args) -> int:
    from .reference import (TINY_MODEL, TINY_VOCODER, RefModelConfig,
                            RefVocoderConfig, build_reference,
                            save_checkpoint)

    if args.full:
        mc, vc = RefModelConfig(), RefVocoderConfig()
    else:
        mc, vc = TINY_MODEL, TINY_VOCODER
    model = build_reference(mc, vc, seed=args.seed)
    save_checkpoint(model, args.out)
    n = sum(p.numel() for p in model.parameters())
    print(f"{args.out}: {'full' if args.full else 'tiny'} reference, "
          f"{n} parameters, seed {args.seed}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="export-oracle",
        description="Checkpoint conversion and golden fixture generation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="convert a checkpoint to v1")
    p.add_argument("checkpoint", help="torch checkpoint path")
    p.add_argument("--out", default="weights.le2e", help="v1 output path")
    p.set_defaults(fn=cmd_export)

    p = sub.add_parser("fixtures", help="write the golden fixture tree")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="fixtures", help="output directory")
    p.set_defaults(fn=cmd_fixtures)

    p = sub.add_parser("reference", help="save a seeded reference checkpoint")
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--full", action="store_true",
                   help="full-size model instead of the tiny config")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_reference)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
