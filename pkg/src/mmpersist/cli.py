"""Command-line entry point: ``mmpersist <subcommand> ...``."""

from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from . import __version__
from .cubical import build_complex
from .diagram import (
    bottleneck_distance,
    death_histogram,
    normalize,
    read_pd,
    write_pd,
)
from .errors import MalformedInput, MMPersistError
from .filtration import EntryTimeGrid, FilterKind, FiltrationSpec, build_filtration, mm_filtration
from .image import (
    ImageFormat,
    add_salt_noise,
    as_binary,
    read_image,
    serialize_image,
    threshold,
    write_image,
)
from .morphology import apply_op, parse_se
from .persistence import compute_persistence
from .pipeline import (
    PipelineConfig,
    compare_sequences,
    mm_persistence,
    pipeline_grayscale,
    sublevel_persistence,
    summary_csv,
)
from .plotting import PlotKind, emit_svg
from .synth import gradient_blobs_image, rect_holes_image


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(2, f"{self.prog}: error: {message}\n")


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def format_distance(d: float) -> str:
    if math.isinf(d):
        return "inf"
    if float(d).is_integer():
        return str(int(d))
    return repr(float(d))


def _binary_input(path, thresh):
    img = read_image(path)
    if thresh is not None:
        return threshold(img, thresh)
    if img.pixels.max() > 1:
        raise MalformedInput(f"{path} is not a 0/1 image; pass --threshold to binarise it")
    return as_binary(img)


def _spec_from_args(args, kind: FilterKind) -> FiltrationSpec:
    if args.se_max is None:
        raise MalformedInput(f"--se-max is required for the {kind.value} filtration")
    return FiltrationSpec.square_range(kind, args.se_max, args.se_min, args.cap)


def _write_bytes(path, data: bytes):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def cmd_morph(args):
    img = read_image(args.input)
    out = apply_op(args.op, img, parse_se(args.se))
    write_image(out, args.out)


def cmd_noise(args):
    img = read_image(args.input)
    write_image(add_salt_noise(img, args.fraction, args.seed), args.out)


def cmd_filtration(args):
    kind = FilterKind(args.kind)
    if kind is FilterKind.EXPLICIT:
        images = [_binary_input(p, args.threshold) for p in args.input]
        grid = build_filtration(images, kind)
    elif len(args.input) != 1:
        raise MalformedInput(f"the {kind.value} filtration takes exactly one --in image")
    elif kind is FilterKind.SUBLEVEL:
        grid = build_filtration(read_image(args.input[0]), kind)
    else:
        grid = mm_filtration(_binary_input(args.input[0], args.threshold),
                             _spec_from_args(args, kind))
    _write_bytes(args.out, grid.to_csv())


def cmd_persistence(args):
    grid = EntryTimeGrid.read(args.grid)
    pd = compute_persistence(build_complex(grid))
    if args.close_at_max_level:
        pd = pd.close_essential(grid.max_level, dims=(1,))
    pd = pd.restrict(args.dims)
    _write_bytes(args.out, _serialize(pd))


def _serialize(pd):
    from .diagram import serialize_pd

    return serialize_pd(pd)


def cmd_bottleneck(args):
    a, b = read_pd(args.a), read_pd(args.b)
    if args.normalize is not None:
        a, b = normalize(a, args.normalize), normalize(b, args.normalize)
    print(format_distance(bottleneck_distance(a, b, args.dim)))


def cmd_plot(args):
    pd = read_pd(args.input)
    kind = PlotKind(args.kind)
    options = {}
    if args.title is not None:
        options["title"] = args.title
    if kind is PlotKind.HISTOGRAM:
        data = death_histogram(pd, args.dim if args.dim is not None else 1, args.bin_width)
    else:
        data = pd
        if args.dim is not None:
            options["dims"] = (args.dim,)
    _write_bytes(args.out, emit_svg(kind, data, options))


def cmd_pipeline(args):
    kind = FilterKind(args.kind)
    cfg = PipelineConfig(tuple(args.thresholds), _spec_from_args(args, kind),
                         args.divisor, tuple(args.dims))
    img = read_image(args.input)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = pipeline_grayscale(img, cfg)
    for t, pd in results:
        write_pd(pd, out / f"pd_t{t}.json")
    compared = distances = None
    if args.compare is not None:
        compared = pipeline_grayscale(read_image(args.compare), cfg)
        for t, pd in compared:
            write_pd(pd, out / f"compare_pd_t{t}.json")
        distances = compare_sequences(results, compared, dim=1)
    (out / "summary.csv").write_bytes(summary_csv(results, distances))
    if not args.no_figure:
        from .report import pipeline_figure

        pipeline_figure(out / "overview.png", results, compared, distances)


def cmd_demo_rect_holes(args):
    widths = args.widths
    se_max = args.se_max if args.se_max is not None else max(widths) + 2
    img, rects = rect_holes_image(widths, size=args.size)
    spec = FiltrationSpec.square_range(FilterKind.EROSION, se_max, args.se_min, cap_all_black=True)
    grid = mm_filtration(img, spec)
    pd = compute_persistence(build_complex(grid))
    hist = death_histogram(pd, 1, args.bin_width)

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "image.pgm").write_bytes(serialize_image(img, ImageFormat.PGM_ASCII))
    grid.write(out / "grid.csv")
    write_pd(pd, out / "pd.json")
    (out / "pd.svg").write_bytes(emit_svg(PlotKind.DIAGRAM, pd, {"title": "Erosion filtration"}))
    (out / "barcode.svg").write_bytes(emit_svg(PlotKind.BARCODE, pd, {"dims": (1,)}))
    (out / "hist.svg").write_bytes(emit_svg(PlotKind.HISTOGRAM, hist))

    deaths = sorted(d for b, d in pd.in_dim(1) if b == 0)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["hole", "x", "y", "width", "height", "death"])
    for k, (rect, w) in enumerate(sorted(zip(rects, widths), key=lambda rw: rw[1])):
        death = deaths[k] if k < len(deaths) else ""
        writer.writerow([k + 1, rect.x, rect.y, rect.width, rect.height, format_distance(death)
                         if death != "" else ""])
    (out / "summary.csv").write_bytes(buf.getvalue().encode("ascii"))
    if not args.no_figure:
        from .report import holes_figure

        holes_figure(out / "overview.png", img, pd, hist)
    print(" ".join(format_distance(d) for d in deaths))


def cmd_demo_salt_noise(args):
    f = gradient_blobs_image(args.size)
    spec = FiltrationSpec.square_range(FilterKind.OPENING, args.se_max, args.se_min)
    cfg = PipelineConfig(tuple(args.thresholds), spec)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_image(f, out / "image.pgm")
    clean = pipeline_grayscale(f, cfg)
    clean_sub = sublevel_persistence(f)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["seed", "sublevel_distance", "mm_mean_distance"]
                    + [f"mm_distance_t{t}" for t in cfg.thresholds])
    last = None
    for seed in args.seeds:
        g = add_salt_noise(f, args.fraction, seed)
        noisy = pipeline_grayscale(g, cfg)
        dists = compare_sequences(clean, noisy, dim=1)
        sub = bottleneck_distance(clean_sub, sublevel_persistence(g), 1)
        mean = sum(d for _, d in dists) / len(dists)
        writer.writerow([seed, f"{sub:.6g}", f"{mean:.6g}"] + [f"{d:.6g}" for _, d in dists])
        last = (g, noisy, dists)
    (out / "summary.csv").write_bytes(buf.getvalue().encode("ascii"))
    if last is not None and not args.no_figure:
        from .report import pipeline_figure

        g, noisy, dists = last
        write_image(g, out / "noisy.pgm")
        pipeline_figure(out / "overview.png", clean, noisy, dists)
    sys.stdout.write(buf.getvalue())


def _add_spec_args(p, se_required=False):
    p.add_argument("--se-max", type=int, required=se_required,
                   help="largest square SE index; SEs S_min..S_max give levels 1..n")
    p.add_argument("--se-min", type=int, default=2, help="smallest square SE index (default 2)")
    p.add_argument("--cap", dest="cap", action="store_true", default=None,
                   help="append an all-black level (default for erosion/opening/combined)")
    p.add_argument("--no-cap", dest="cap", action="store_false")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mmpersist",
                     description="Persistent homology of images under morphological filtrations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("morph", help="apply erosion, dilation, opening or closing")
    p.add_argument("--op", required=True, choices=["erode", "dilate", "open", "close"])
    p.add_argument("--se", required=True, help="square:N or offsets:(dx,dy);(dx,dy);...")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_morph)

    p = sub.add_parser("noise", help="add seeded salt noise to an image")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--fraction", type=float, default=0.01)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("filtration", help="build an entry-time grid")
    p.add_argument("--kind", required=True, choices=[k.value for k in FilterKind])
    _add_spec_args(p)
    p.add_argument("--threshold", type=int, help="binarise a grayscale input first")
    p.add_argument("--in", dest="input", required=True, action="append",
                   help="input image (repeat for an explicit nested sequence)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_filtration)

    p = sub.add_parser("persistence", help="persistence diagram of an entry-time grid")
    p.add_argument("--grid", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dims", type=_int_list, default=[0, 1])
    p.add_argument("--close-at-max-level", action="store_true",
                   help="give essential loops the grid's last level as death")
    p.set_defaults(func=cmd_persistence)

    p = sub.add_parser("bottleneck", help="bottleneck distance between two diagrams")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--dim", type=int, required=True, choices=[0, 1])
    p.add_argument("--normalize", type=float, metavar="DIVISOR")
    p.set_defaults(func=cmd_bottleneck)

    p = sub.add_parser("pipeline", help="multi-threshold morphological persistence")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--thresholds", type=_int_list, required=True)
    p.add_argument("--kind", required=True,
                   choices=[k.value for k in FilterKind if k.is_morphological])
    _add_spec_args(p, se_required=True)
    p.add_argument("--divisor", type=float, help="normalisation divisor (default: n + 1)")
    p.add_argument("--dims", type=_int_list, default=[0, 1])
    p.add_argument("--compare", help="second image; adds per-threshold bottleneck distances")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--no-figure", action="store_true", help="skip overview.png")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("plot", help="render a diagram, barcode or histogram as SVG")
    p.add_argument("--kind", required=True, choices=[k.value for k in PlotKind])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--dim", type=int, choices=[0, 1])
    p.add_argument("--bin-width", type=float, default=1.0)
    p.add_argument("--title")
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("demo", help="synthetic experiments")
    demos = p.add_subparsers(dest="demo", required=True, parser_class=_Parser)
    d = demos.add_parser("rect-holes", help="black field with rectangular holes, erosion filtration")
    d.add_argument("--widths", type=_int_list, required=True)
    d.add_argument("--size", type=int, default=200)
    d.add_argument("--se-max", type=int)
    d.add_argument("--se-min", type=int, default=2)
    d.add_argument("--bin-width", type=float, default=1.0)
    d.add_argument("--out-dir", required=True)
    d.add_argument("--no-figure", action="store_true")
    d.set_defaults(func=cmd_demo_rect_holes)

    d = demos.add_parser("salt-noise", help="opening vs sublevel robustness to salt noise")
    d.add_argument("--seeds", type=_int_list, default=[0, 1, 2, 3, 4])
    d.add_argument("--fraction", type=float, default=0.01)
    d.add_argument("--thresholds", type=_int_list, default=[50, 100, 150])
    d.add_argument("--size", type=int, default=200)
    d.add_argument("--se-max", type=int, default=11)
    d.add_argument("--se-min", type=int, default=2)
    d.add_argument("--out-dir", required=True)
    d.add_argument("--no-figure", action="store_true")
    d.set_defaults(func=cmd_demo_salt_noise)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (MMPersistError, OSError, ValueError) as exc:
        msg = " ".join(str(exc).split())
        sys.stderr.write(f"mmpersist: error: {msg}\n")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
