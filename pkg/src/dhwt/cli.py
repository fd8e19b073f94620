"""Command line front end.

Exit status: 0 on success, 2 for user errors (bad arguments, unreadable or
corrupt inputs), 1 for anything unexpected.
"""

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import codec, metrics
from .errors import DHWTError
from .filters import available_wavelets
from .imageio import read_image, write_image
from .testimage import synthetic_image
from .transform import MAX_LEVELS

BUILTIN = "@builtin"
COMPARE_WAVELETS = ("dhwt", "sym2", "coif2", "db2")
PLOT_METRICS = {"mse": "mse", "psnr": "psnr", "bpp": "bpp", "cr": "cr_percent"}

EXIT_OK, EXIT_INTERNAL, EXIT_USAGE = 0, 1, 2


class UsageError(DHWTError):
    pass


@dataclass
class RunConfig:
    command: str
    input: str = None
    output: str = None
    wavelet: str = "dhwt"
    levels: int = 2
    threshold: float = 100.0
    loop_ratio: float = 0.6
    loops: int = 11
    q: float = 1.0
    csv: str = None
    plot_dir: str = None
    wavelets: tuple = field(default=COMPARE_WAVELETS)

    def schedule(self):
        return codec.ThresholdSchedule(
            base_threshold=self.threshold, loop_ratio=self.loop_ratio, loops=self.loops
        )


def load_input(spec):
    if spec == BUILTIN:
        return synthetic_image()
    path = Path(spec)
    if not path.is_file():
        raise UsageError(f"{spec}: no such file")
    return read_image(path)


def _emit_csv(rows, target):
    if target in (None, "-"):
        metrics.write_csv(rows, sys.stdout)
        return
    with open(target, "w", newline="") as fh:
        metrics.write_csv(rows, fh)


def _fmt(v):
    return f"{v:.6g}" if isinstance(v, float) else str(v)


def cmd_compress(cfg):
    img = load_input(cfg.input)
    ci, report = codec.compress_image(img, cfg.wavelet, cfg.levels, cfg.schedule(), cfg.q)
    out = Path(cfg.output or Path(cfg.input).with_suffix(".dhwt").name)
    out.write_bytes(ci.to_bytes())
    print(f"output={out}")
    for key, value in report.as_dict().items():
        print(f"{key}={_fmt(value)}")
    if cfg.csv:
        _emit_csv([report.as_row(cfg.wavelet, cfg.levels, 1)], cfg.csv)
    return report


def _read_container(path):
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"{path}: no such file")
    return codec.CompressedImage.from_bytes(path.read_bytes())


def cmd_decompress(cfg):
    ci = _read_container(cfg.input)
    pixels = codec.decompress_image(ci, display=True)
    out = cfg.output or str(Path(cfg.input).with_suffix(".png").name)
    write_image(out, pixels)
    print(f"output={out}")


def cmd_inspect(cfg):
    ci = _read_container(cfg.input)
    # decoding validates the payload against the header
    codec.decode(ci)
    for key in ("version", "width", "height", "channels", "levels", "wavelet_id", "q"):
        print(f"{key}={_fmt(getattr(ci, key))}")
    print("thresholds=" + ",".join(_fmt(t) for t in ci.thresholds))
    print(f"payload_bytes={len(ci.payload)}")
    print(f"total_bytes={len(ci)}")


def cmd_loops(cfg):
    img = load_input(cfg.input)
    reports = codec.compression_loop(img, cfg.wavelet, cfg.levels, cfg.schedule(), cfg.q)
    rows = [r.as_row(cfg.wavelet, cfg.levels, i) for i, r in enumerate(reports, start=1)]
    _emit_csv(rows, cfg.csv)
    return rows


def write_plot_data(rows, directory):
    """One two-column file (level, value) per metric and wavelet."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    wavelets = list(dict.fromkeys(r["wavelet"] for r in rows))
    for name, column in PLOT_METRICS.items():
        for wid in wavelets:
            path = directory / f"{name}_{wid}.dat"
            lines = [f"{r['level']} {r[column]!r}" for r in rows if r["wavelet"] == wid]
            path.write_text("\n".join(lines) + "\n")
            written.append(path)
    return written


def cmd_compare(cfg):
    img = load_input(cfg.input)
    rows = metrics.comparison_table(
        img, cfg.wavelets, range(1, MAX_LEVELS + 1), codec.ThresholdSchedule(cfg.threshold, loops=1), cfg.q
    )
    _emit_csv(rows, cfg.csv)
    if cfg.plot_dir:
        write_plot_data(rows, cfg.plot_dir)
    return rows


COMMANDS = {
    "compress": cmd_compress,
    "decompress": cmd_decompress,
    "inspect": cmd_inspect,
    "loops": cmd_loops,
    "compare": cmd_compare,
}


def _levels(text):
    value = int(text)
    if not 1 <= value <= MAX_LEVELS:
        raise argparse.ArgumentTypeError(f"levels must be in [1, {MAX_LEVELS}]")
    return value


def _positive(text):
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return value


def _non_negative(text):
    value = float(text)
    if not value >= 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def _ratio(text):
    value = float(text)
    if not 0 < value < 1:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return value


def _count(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dhwt", description="Hermite wavelet image compression toolkit."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def image_opts(p):
        p.add_argument("input", help=f"PNG/PPM/PGM image, or {BUILTIN} for the synthetic test image")
        p.add_argument("--wavelet", default="dhwt", choices=available_wavelets())
        p.add_argument("--levels", type=_levels, default=2)
        p.add_argument("--threshold", type=_non_negative, default=100.0, help="hard threshold T0")
        p.add_argument("--q", type=_positive, default=1.0, help="quantizer step")
        p.add_argument("--csv", help="CSV output path ('-' for stdout)")

    p = sub.add_parser("compress", help="compress an image into a .dhwt container")
    image_opts(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("decompress", help="rebuild an image from a .dhwt container")
    p.add_argument("input")
    p.add_argument("-o", "--output", help="PNG or PPM/PGM path")

    p = sub.add_parser("inspect", help="print a container header")
    p.add_argument("input")

    p = sub.add_parser("loops", help="re-compress under a geometric threshold schedule")
    image_opts(p)
    p.add_argument("--loop-ratio", type=_ratio, default=0.6)
    p.add_argument("--loops", type=_count, default=11)

    p = sub.add_parser("compare", help="wavelets x levels 1-8 comparison grid")
    image_opts(p)
    p.add_argument("--wavelets", default=",".join(COMPARE_WAVELETS),
                   help="comma separated wavelet ids")
    p.add_argument("--plot-dir", help="directory for per-metric plot data files")
    return parser


def parse_config(argv=None):
    ns = build_parser().parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    if "wavelets" in values:
        ids = tuple(w.strip() for w in values["wavelets"].split(",") if w.strip())
        unknown = sorted(set(ids) - set(available_wavelets()))
        if unknown or not ids:
            raise UsageError(f"unknown wavelet ids: {unknown}")
        values["wavelets"] = ids
    return RunConfig(**values)


def main(argv=None):
    try:
        cfg = parse_config(argv)
    except SystemExit as exc:  # argparse reports usage errors with status 2
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except DHWTError as exc:
        print(f"dhwt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        COMMANDS[cfg.command](cfg)
    except (DHWTError, OSError) as exc:
        print(f"dhwt: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"dhwt: internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
