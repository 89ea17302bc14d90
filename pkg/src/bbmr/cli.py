"""Command-line front end.

Subcommands::

    bbmr downscale IN.png OUT.bbmr    plan an image and write the container
    bbmr upscale IN.bbmr OUT.png      decode a container and reconstruct
    bbmr roundtrip IN.png OUT.png     full cycle, reports PSNR vs the input
    bbmr bench PATH [PATH ...]        benchmark a corpus of PNGs
    bbmr inspect IN.bbmr              print header and plan summary

Exit codes: 0 success, 2 usage or configuration error (including missing
input files), 3 unreadable or unsupported image, 10 bad container magic,
11 unsupported container version, 12 truncated container, 13 checksum
mismatch, 14 container invariant violation.

Set BBMR_THREADS=<n> to score candidate blocks on a thread pool.
"""

import argparse
import json
import sys
from pathlib import Path

from .allocate import FactorTriple
from .bench import (TaxonomyThresholds, bench_corpus, report_to_csv,
                    write_report)
from .container import (BadMagicError, ChecksumMismatchError, FormatError,
                        TruncatedStreamError, UnsupportedVersionError, decode)
from .image import load_png, save_png
from .pipeline import (DEFAULT_BLOCK, DEFAULT_DEBLOCK_RADIUS,
                       DEFAULT_THRESHOLD_DB, PipelineConfig, compress,
                       reconstruct, roundtrip)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IMAGE = 3

_CONTAINER_EXIT = (
    (BadMagicError, 10),
    (UnsupportedVersionError, 11),
    (TruncatedStreamError, 12),
    (ChecksumMismatchError, 13),
    (FormatError, 14),
)


class _ImageIOError(Exception):
    pass


def _parse_factors(text: str) -> FactorTriple:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("expected three factors, e.g. 2,4,8")
    try:
        k1, k2, k3 = (int(p) for p in parts)
        return FactorTriple(k1, k2, k3)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _parse_block(text: str) -> tuple[int, int]:
    """One int for square blocks, or HxW."""
    try:
        if "x" in text:
            h, w = (int(p) for p in text.split("x"))
        else:
            h = w = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad block size {text!r}")
    if h < 1 or w < 1:
        raise argparse.ArgumentTypeError("block size must be positive")
    return h, w


def _add_pipeline_flags(parser, reconstruction_only: bool = False):
    if not reconstruction_only:
        parser.add_argument("--factors", type=_parse_factors,
                            default=FactorTriple(2, 4, 8),
                            help="scale factors k1,k2,k3 (default 2,4,8)")
        parser.add_argument("--block", type=_parse_block,
                            default=(DEFAULT_BLOCK, DEFAULT_BLOCK),
                            metavar="N|HxW",
                            help=f"block size (default {DEFAULT_BLOCK})")
        parser.add_argument("--proxy", default="bilinear", metavar="KERNEL",
                            help="scoring proxy kernel (default bilinear)")
        parser.add_argument("--allocate-with", choices=("final", "proxy"),
                            default="final",
                            help="kernel used for candidate scoring")
        parser.add_argument("--t", type=float, default=DEFAULT_THRESHOLD_DB,
                            metavar="DB", dest="threshold_db",
                            help="trade margin threshold in dB (default 0.5)")
        parser.add_argument("--block-max", type=int, default=None,
                            metavar="N",
                            help="cap on promoted blocks (default N/(a+c))")
    parser.add_argument("--kernel", default="bicubic",
                        help="resampling kernel (default bicubic)")
    parser.add_argument("--no-deblock", action="store_true",
                        help="skip seam smoothing on reconstruction")
    parser.add_argument("--deblock-radius", type=int,
                        default=DEFAULT_DEBLOCK_RADIUS, metavar="R",
                        help="half-width of the smoothed seam strip")


def _config_from_args(args) -> PipelineConfig:
    block_h, block_w = getattr(args, "block", (DEFAULT_BLOCK, DEFAULT_BLOCK))
    return PipelineConfig(
        factors=getattr(args, "factors", FactorTriple(2, 4, 8)),
        block_w=block_w,
        block_h=block_h,
        final_kernel=args.kernel,
        proxy_kernel=getattr(args, "proxy", "bilinear"),
        allocate_with=getattr(args, "allocate_with", "final"),
        threshold_db=getattr(args, "threshold_db", DEFAULT_THRESHOLD_DB),
        block_max_k1=getattr(args, "block_max", None),
        deblock=not args.no_deblock,
        deblock_radius=args.deblock_radius,
    )


def _load_image(path: str):
    if not Path(path).is_file():
        raise FileNotFoundError(f"no such file: {path}")
    try:
        return load_png(path)
    except FileNotFoundError:
        raise
    except Exception as exc:
        raise _ImageIOError(f"cannot read image {path}: {exc}") from exc


def _save_image(image, path: str) -> None:
    try:
        save_png(image, path)
    except OSError as exc:
        raise _ImageIOError(f"cannot write image {path}: {exc}") from exc


def _read_container(path: str) -> bytes:
    if not Path(path).is_file():
        raise FileNotFoundError(f"no such file: {path}")
    return Path(path).read_bytes()


def _plan_summary(plan_counts, trades) -> str:
    n1, n2, n3 = plan_counts
    return f"trades={trades} plan k1={n1} k2={n2} k3={n3}"


def cmd_downscale(args) -> int:
    image = _load_image(args.input)
    config = _config_from_args(args)
    result = compress(image, config)
    data = result.to_bytes()
    Path(args.output).write_bytes(data)
    print(f"wrote {args.output} ({len(data)} bytes, "
          f"{_plan_summary(result.plan.counts(), result.plan.trades)})")
    return EXIT_OK


def cmd_upscale(args) -> int:
    header, codes, blocks = decode(_read_container(args.input))
    config = PipelineConfig(
        factors=FactorTriple(header.k1, header.k2, header.k3),
        block_w=header.block_w,
        block_h=header.block_h,
        final_kernel=args.kernel,
        deblock=not args.no_deblock,
        deblock_radius=args.deblock_radius,
    )
    image = reconstruct(header, codes, blocks, config)
    _save_image(image, args.output)
    print(f"wrote {args.output} ({header.orig_w}x{header.orig_h})")
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    image = _load_image(args.input)
    config = _config_from_args(args)
    result = roundtrip(image, config)
    _save_image(result.reconstructed, args.output)
    print(f"wrote {args.output}  psnr={result.psnr_db:.2f} dB  "
          f"{_plan_summary(result.plan.counts(), result.plan.trades)}  "
          f"seam={result.seam_index_final:.3f}")
    if args.report:
        report = {
            "input": args.input,
            "psnr_db": round(result.psnr_db, 4),
            "trades": result.plan.trades,
            "plan_histogram": dict(zip(("k1", "k2", "k3"),
                                       result.plan.counts())),
            "seam_index_raw": round(result.seam_index_raw, 4),
            "seam_index_deblocked": round(result.seam_index_final, 4),
            "container_bytes": result.container_bytes,
        }
        Path(args.report).write_text(json.dumps(report, indent=2,
                                                sort_keys=True) + "\n")
    return EXIT_OK


def _collect_pngs(paths: list[str]) -> list[str]:
    found: list[str] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            found.extend(str(q) for q in sorted(p.glob("*.png")))
        elif p.is_file():
            found.append(str(p))
        else:
            raise FileNotFoundError(f"no such file or directory: {raw}")
    if not found:
        raise ValueError("no PNG files found under the given paths")
    return found


def cmd_bench(args) -> int:
    config = _config_from_args(args)
    paths = _collect_pngs(args.paths)
    thresholds = TaxonomyThresholds(args.taxonomy_simple, args.taxonomy_hard)
    report = bench_corpus(paths, config, thresholds=thresholds,
                          compare_proxy=args.compare_proxy,
                          warn=lambda msg: print(f"warning: {msg}",
                                                 file=sys.stderr))
    agg = report["aggregate"]
    print(f"{agg['count']} images, {agg['total_blocks']} blocks: "
          f"uniform {agg['mean_psnr_uniform_db']:.2f} dB, "
          f"multi-scale {agg['mean_psnr_multiscale_db']:.2f} dB "
          f"(gain {agg['mean_gain_db']:+.2f} dB)")
    if args.report:
        write_report(report, args.report)
        print(f"report: {args.report}")
    if args.csv:
        report_to_csv(report, args.csv)
        print(f"csv: {args.csv}")
    return EXIT_OK


def cmd_inspect(args) -> int:
    header, codes, _blocks = decode(_read_container(args.input))
    counts = {code: int((codes == code).sum()) for code in (1, 2, 3)}
    info = {
        "magic": "BBMR",
        "version": 1,
        "width": header.orig_w,
        "height": header.orig_h,
        "block": [header.block_h, header.block_w],
        "factors": [header.k1, header.k2, header.k3],
        "blocks": header.n_blocks,
        "plan_histogram": {"k1": counts[1], "k2": counts[2], "k3": counts[3]},
    }
    if args.json:
        print(json.dumps(info, indent=2, sort_keys=True))
    else:
        print(f"{args.input}: {header.orig_w}x{header.orig_h}, "
              f"{header.block_h}x{header.block_w} blocks, "
              f"factors {header.k1},{header.k2},{header.k3}")
        print(f"  plan: k1={counts[1]} k2={counts[2]} k3={counts[3]} "
              f"({header.n_blocks} blocks)")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bbmr",
        description="Block-based multi-scale image rescaling.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("downscale", help="plan an image into a container")
    p.add_argument("input")
    p.add_argument("output")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_downscale)

    p = sub.add_parser("upscale", help="reconstruct from a container")
    p.add_argument("input")
    p.add_argument("output")
    _add_pipeline_flags(p, reconstruction_only=True)
    p.set_defaults(func=cmd_upscale)

    p = sub.add_parser("roundtrip", help="downscale, upscale, report quality")
    p.add_argument("input")
    p.add_argument("output")
    _add_pipeline_flags(p)
    p.add_argument("--report", metavar="JSON",
                   help="write a JSON quality report")
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("bench", help="benchmark a corpus of PNG files")
    p.add_argument("paths", nargs="+", metavar="PATH",
                   help="PNG files or directories of PNGs")
    _add_pipeline_flags(p)
    p.add_argument("--report", metavar="JSON", help="write the full report")
    p.add_argument("--csv", metavar="CSV", help="write per-image rows")
    p.add_argument("--compare-proxy", action="store_true",
                   help="also score plans with the other kernel")
    p.add_argument("--taxonomy-simple", type=float, default=1.5, metavar="DB",
                   help="max pay for a block to count as simple")
    p.add_argument("--taxonomy-hard", type=float, default=4.0, metavar="DB",
                   help="min earn for a block to count as hard")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("inspect", help="print container header and plan")
    p.add_argument("input")
    p.add_argument("--json", action="store_true", help="machine readable")
    p.set_defaults(func=cmd_inspect)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _ImageIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IMAGE
    except tuple(cls for cls, _ in _CONTAINER_EXIT) as exc:
        print(f"error: {exc}", file=sys.stderr)
        for cls, code in _CONTAINER_EXIT:
            if isinstance(exc, cls):
                return code
        raise AssertionError("unreachable")
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
