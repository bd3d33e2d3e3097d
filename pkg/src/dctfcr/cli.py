"""Command-line entry point: ``dctfcr <subcommand> ...``.

Exit status is 0 on success, 1 for usage errors (bad flags, unknown presets,
invalid config) and 2 for data errors (unreadable or malformed inputs).
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import io, netshape
from .pipeline import PipelineConfig, channel_energy, decode_tensor, encode_image, load_config, psnr
from .quant import build_qmatrix
from .select import make_selection, parse_selection, resolve_preset

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2
TENSOR_SUFFIX = ".fcrt"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_triple(text):
    try:
        vals = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    if len(vals) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated integers, got {text!r}")
    return vals


def _add_pipeline_flags(p):
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--qf", type=int, help="quantize with this quality factor (1-100)")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--preset", help="named component selection, e.g. M-36-16-16")
    g.add_argument("--select", metavar="nY,nCb,nCr", help="low-frequency component counts")
    p.add_argument("--square", action="store_true",
                   help="select top-left k x k sub-bands instead of zigzag prefixes")
    p.add_argument("--dequantize", action="store_true", default=None,
                   help="export dequantized reals instead of quantized integers")
    p.add_argument("--dtype", choices=("auto", "f32", "i16"))
    p.add_argument("--scale", type=float, help="multiply real-valued output (default 1.0)")


def build_config(args) -> PipelineConfig:
    d = load_config(args.config) if args.config else {}
    if args.qf is not None:
        d["quality_factor"] = args.qf
    if args.preset or args.select:
        d.pop("preset", None)
        d.pop("selection", None)
    if args.preset:
        d["preset"] = args.preset
    if args.select:
        d["selection"] = list(parse_selection(args.select).counts)
    if args.dequantize is not None:
        d["dequantize"] = args.dequantize
    if args.dtype:
        d["dtype"] = args.dtype
    if args.scale is not None:
        d["scale"] = args.scale
    config = PipelineConfig.from_dict(d)
    if args.square:
        sel = config.selection
        config = PipelineConfig(
            quality_factor=config.quality_factor,
            selection=make_selection(*sel.counts, name=sel.name, square=True),
            dequantize=config.dequantize, dtype=config.dtype, scale=config.scale,
        )
    return config


def _encode_one(src: Path, dst: Path, config: PipelineConfig) -> Path:
    img = io.load_ppm(src)
    io.write_tensor(encode_image(img, config), dst)
    return dst


def _collect_inputs(path: Path) -> list:
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix.lower() in (".ppm", ".pnm"))
        if not files:
            raise FileNotFoundError(f"no .ppm files in {path}")
        return files
    return [path]


def cmd_encode(args) -> int:
    config = build_config(args)
    src = Path(args.input)
    inputs = _collect_inputs(src)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        jobs = [(p, out_dir / (p.stem + TENSOR_SUFFIX)) for p in inputs]
    elif args.output and len(inputs) == 1:
        jobs = [(inputs[0], Path(args.output))]
    else:
        jobs = [(p, p.with_suffix(TENSOR_SUFFIX)) for p in inputs]

    failures = 0
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as ex:
            futures = [(s, ex.submit(_encode_one, s, d, config)) for s, d in jobs]
            for s, fut in futures:
                try:
                    print(fut.result())
                except (io.FormatError, OSError) as e:
                    failures += 1
                    print(f"{s}: {e}", file=sys.stderr)
    else:
        for s, d in jobs:
            try:
                print(_encode_one(s, d, config))
            except (io.FormatError, OSError) as e:
                failures += 1
                print(f"{s}: {e}", file=sys.stderr)
    return EXIT_DATA if failures else EXIT_OK


def cmd_decode(args) -> int:
    tf = io.read_tensor(args.tensor)
    img = decode_tensor(tf, zero_fill=args.zero_fill, scale=args.scale)
    out = args.output or str(Path(args.tensor).with_suffix(".ppm"))
    io.save_ppm(img, out)
    print(out)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    config = build_config(args)
    img = io.load_ppm(args.input)
    tf = encode_image(img, config)
    rec = decode_tensor(tf, zero_fill=True, scale=config.scale)
    err = np.abs(img.to_array().astype(int) - rec.to_array().astype(int)).max()
    print(f"shape {tf.dims[0]}x{tf.dims[1]}x{tf.dims[2]}")
    print(f"max_abs_error {int(err)}")
    print(f"psnr {psnr(img, rec):.4f}")
    if args.output:
        io.save_ppm(rec, args.output)
    return EXIT_OK


def cmd_qtable(args) -> int:
    print(build_qmatrix(args.qf))
    return EXIT_OK


def cmd_select(args) -> int:
    if args.preset:
        spec = resolve_preset(args.preset)
        if args.square:
            spec = make_selection(*spec.counts, name=spec.name, square=True)
    elif args.select:
        spec = parse_selection(args.select, square=args.square)
    else:
        raise UsageError("give --preset or --select")
    print(f"total {spec.total}")
    print(" ".join(str(c) for c in spec.channels))
    return EXIT_OK


def _load_spec(ref: str) -> netshape.NetSpec:
    if os.path.exists(ref):
        return netshape.load_netspec(ref)
    try:
        return netshape.shipped_netspec(ref)
    except FileNotFoundError:
        raise FileNotFoundError(f"no network description file or bundled spec named {ref!r}")


def cmd_complexity(args) -> int:
    spec = _load_spec(args.spec)
    if args.input:
        spec = netshape.with_input(spec, args.input)
    if args.compare:
        other = _load_spec(args.compare)
        print(netshape.compare(spec, other)["report"])
    else:
        print(netshape.describe(spec))
    return EXIT_OK


def cmd_stats(args) -> int:
    tf = io.read_tensor(args.tensor)
    energy = channel_energy(tf)
    print(f"dims {tf.dims[0]}x{tf.dims[1]}x{tf.dims[2]} qf {tf.qf} "
          f"selection {','.join(map(str, tf.selection))}")
    for i, e in enumerate(energy):
        print(f"{i} {e:.6g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dctfcr", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("encode", help="PPM image(s) -> FCRT tensor(s)")
    p.add_argument("input", help="PPM file or directory of PPM files")
    p.add_argument("-o", "--output", help="output file (single input only)")
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs", type=int, default=1)
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="FCRT tensor -> PPM image")
    p.add_argument("tensor")
    p.add_argument("-o", "--output")
    p.add_argument("--zero-fill", action="store_true",
                   help="treat sub-bands dropped by selection as zero")
    p.add_argument("--scale", type=float, default=1.0)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("roundtrip", help="encode + decode one image and report PSNR")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="write the reconstruction here")
    _add_pipeline_flags(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("qtable", help="print the quantization matrix for a quality factor")
    p.add_argument("--qf", type=int, required=True)
    p.set_defaults(func=cmd_qtable)

    p = sub.add_parser("select", help="print the channel indices of a selection")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--preset")
    g.add_argument("--select", metavar="nY,nCb,nCr")
    p.add_argument("--square", action="store_true")
    p.set_defaults(func=cmd_select)

    p = sub.add_parser("complexity", help="feature shapes and multiply-adds of a network description")
    p.add_argument("--spec", required=True, help="JSON file, or bundled name edanet / dct_edanet")
    p.add_argument("--input", type=_int_triple, metavar="H,W,C")
    p.add_argument("--compare", help="second spec; prints the cost ratio spec/compare")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("stats", help="per-channel mean squared value of a tensor")
    p.add_argument("tensor")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        return args.func(args)
    except UsageError as e:
        print(f"dctfcr: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (io.FormatError, netshape.NetSpecError, OSError) as e:
        print(f"dctfcr: {e}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as e:
        # flag and config validation
        print(f"dctfcr: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
