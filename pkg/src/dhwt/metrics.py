"""Rate and distortion measures for the compression pipeline.

CR follows the convention of the published tables: the percentage of
quantised coefficients that are non-zero, so that ``BPP = 8 * channels * CR / 100``.
"""

import csv
import math
from dataclasses import dataclass, asdict

import numpy as np

__all__ = [
    "PEAK",
    "CSV_FIELDS",
    "QualityReport",
    "mse",
    "psnr",
    "cr",
    "bpp",
    "energy_stats",
    "comparison_table",
    "write_csv",
]

PEAK = 255.0

CSV_FIELDS = (
    "wavelet",
    "level",
    "loop",
    "mse",
    "psnr",
    "cr_percent",
    "bpp",
    "energy_retained",
    "zero_share",
)


@dataclass(frozen=True)
class QualityReport:
    mse: float
    psnr: float
    cr: float
    bpp: float
    energy_retained: float
    zero_share: float
    # container bytes / raw 8-bit bytes * 100; informational only
    stream_cr: float = float("nan")

    def as_row(self, wavelet, level, loop):
        return {
            "wavelet": wavelet,
            "level": level,
            "loop": loop,
            "mse": self.mse,
            "psnr": self.psnr,
            "cr_percent": self.cr,
            "bpp": self.bpp,
            "energy_retained": self.energy_retained,
            "zero_share": self.zero_share,
        }

    def as_dict(self):
        return asdict(self)


def mse(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"image shapes differ: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def psnr(mse_value, peak=PEAK):
    """``10 log10(peak**2 / mse)`` in dB; ``inf`` for a perfect reconstruction."""
    if mse_value < 0 or math.isnan(mse_value):
        raise ValueError(f"mse must be non-negative, got {mse_value}")
    if mse_value == 0:
        return math.inf
    return 10.0 * math.log10(peak**2 / mse_value)


def _band_arrays(pyramid):
    return pyramid.bands() if hasattr(pyramid, "bands") else list(pyramid)


def cr(pq):
    """Percentage of non-zero coefficients over every band and channel."""
    bands = _band_arrays(pq)
    total = sum(b.size for b in bands)
    if total == 0:
        raise ValueError("pyramid has no coefficients")
    nonzero = sum(int(np.count_nonzero(b)) for b in bands)
    return 100.0 * nonzero / total


def bpp(cr_percent, channels, bit_depth=8):
    if not 0.0 <= cr_percent <= 100.0:
        raise ValueError(f"cr must be a percentage in [0, 100], got {cr_percent}")
    return bit_depth * channels * cr_percent / 100.0


def energy_stats(before, after):
    """Retained energy and share of zero coefficients, both in percent."""
    b = _band_arrays(before)
    a = _band_arrays(after)
    if len(a) != len(b) or any(x.shape != y.shape for x, y in zip(a, b)):
        raise ValueError("pyramids have different shapes")
    e_before = sum(float(np.sum(np.square(x, dtype=float))) for x in b)
    if e_before == 0:
        raise ValueError("reference pyramid has zero energy")
    e_after = sum(float(np.sum(np.square(x, dtype=float))) for x in a)
    total = sum(x.size for x in a)
    zeros = total - sum(int(np.count_nonzero(x)) for x in a)
    return 100.0 * e_after / e_before, 100.0 * zeros / total


def comparison_table(image, wavelet_ids, levels_range, schedule=None, q=1.0):
    """One compression per (wavelet, level); rows follow :data:`CSV_FIELDS`."""
    from .codec import compress_image

    rows = []
    for wid in wavelet_ids:
        for level in levels_range:
            _, report = compress_image(image, wid, level, schedule, q)
            rows.append(report.as_row(wid, level, 1))
    return rows


def _fmt(value):
    if isinstance(value, float):
        return repr(value) if math.isfinite(value) else str(value)
    return str(value)


def write_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_fmt(row[k]) for k in CSV_FIELDS])
