"""Separable analysis/synthesis, multilevel pyramids and 1-D packet trees.

Boundaries are handled by periodic extension, so every analysis step halves
the length exactly.  Odd image dimensions are padded (edge replication) to
the next even size before each level and cropped again on reconstruction.
Arrays may carry a trailing channel axis; it is transformed independently.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .filters import get_filter

__all__ = [
    "MAX_LEVELS",
    "SubbandPyramid",
    "PacketTree",
    "analyze_1d",
    "synthesize_1d",
    "analyze_2d",
    "synthesize_2d",
    "level_shapes",
    "decompose",
    "reconstruct",
    "approximation",
    "detail_component",
    "packet_decompose",
    "packet_reconstruct",
]

MAX_LEVELS = 8


def _wrap(x, extra):
    """``x`` followed by ``extra`` samples of its periodic continuation (last axis)."""
    n = x.shape[-1]
    return x[..., np.arange(n + extra) % n]


def analyze_1d(signal, filt, axis=-1):
    """One analysis step along ``axis``; returns ``(approx, detail)``."""
    filt = get_filter(filt)
    x = np.moveaxis(np.asarray(signal, dtype=float), axis, -1)
    n = x.shape[-1]
    if n < 2 or n % 2:
        raise ValueError(f"analysis needs an even length >= 2, got {n}; pad first")
    taps = len(filt)
    # windows[..., i, j] = x[(2i + j) mod n]
    windows = sliding_window_view(_wrap(x, taps - 1), taps, axis=-1)[..., : n : 2, :]
    out = windows @ np.stack([filt.analysis_low, filt.analysis_high], axis=1)
    return np.moveaxis(out[..., 0], -1, axis), np.moveaxis(out[..., 1], -1, axis)


def synthesize_1d(approx, detail, filt, axis=-1):
    filt = get_filter(filt)
    a = np.moveaxis(np.asarray(approx, dtype=float), axis, -1)
    d = np.moveaxis(np.asarray(detail, dtype=float), axis, -1)
    if a.shape != d.shape:
        raise ValueError(f"approx/detail shapes differ: {a.shape} vs {d.shape}")
    half = a.shape[-1]
    if half < 1:
        raise ValueError("cannot synthesize from empty bands")
    n, taps = 2 * half, len(filt)
    # contrib[..., i, j] lands on sample 2i + j
    contrib = np.stack([a, d], axis=-1) @ np.stack([filt.synthesis_low, filt.synthesis_high])
    ext = np.zeros(a.shape[:-1] + (n + taps,))
    for j in range(taps):
        ext[..., j : j + n : 2] += contrib[..., j]
    # fold the periodic overhang back onto [0, n)
    out = ext[..., :n].copy()
    for start in range(n, n + taps, n):
        chunk = ext[..., start : start + n]
        out[..., : chunk.shape[-1]] += chunk
    return np.moveaxis(out, -1, axis)


def analyze_2d(matrix, filt):
    """Rows first, then columns.  Returns ``(ll, lh, hl, hh)``.

    ``lh`` (low along rows, high along columns) holds the horizontal details,
    ``hl`` the vertical ones and ``hh`` the diagonal ones.
    """
    filt = get_filter(filt)
    x = np.asarray(matrix, dtype=float)
    if x.ndim < 2 or x.shape[0] % 2 or x.shape[1] % 2:
        raise ValueError(f"analyze_2d needs even height and width, got shape {x.shape}")
    lo, hi = analyze_1d(x, filt, axis=1)
    ll, lh = analyze_1d(lo, filt, axis=0)
    hl, hh = analyze_1d(hi, filt, axis=0)
    return ll, lh, hl, hh


def synthesize_2d(ll, lh, hl, hh, filt):
    filt = get_filter(filt)
    shapes = {np.shape(b) for b in (ll, lh, hl, hh)}
    if len(shapes) != 1:
        raise ValueError(f"quadrant shapes disagree: {sorted(shapes)}")
    lo = synthesize_1d(ll, lh, filt, axis=0)
    hi = synthesize_1d(hl, hh, filt, axis=0)
    return synthesize_1d(lo, hi, filt, axis=1)


def level_shapes(height, width, levels):
    """Unpadded ``(height, width)`` of the approximation entering each level.

    Entry 0 is the image itself, entry ``levels`` the final LL band.
    """
    shapes = [(int(height), int(width))]
    for _ in range(levels):
        h, w = shapes[-1]
        shapes.append(((h + 1) // 2, (w + 1) // 2))
    return shapes


@dataclass(eq=False)
class SubbandPyramid:
    """Multilevel decomposition.

    ``details[l - 1]`` holds ``(d_h, d_v, d_d)`` for level ``l``; ``ll`` is the
    deepest approximation.  ``original_shape`` is the shape of the input
    array (including a channel axis when present).
    """

    ll: np.ndarray
    details: list
    wavelet_id: str
    original_shape: tuple
    extra: dict = field(default_factory=dict)

    @property
    def levels(self):
        return len(self.details)

    @property
    def channels(self):
        return self.original_shape[2] if len(self.original_shape) == 3 else 1

    def bands(self):
        """All bands, coarse to fine: LL, then (d_h, d_v, d_d) from the deepest level up."""
        out = [self.ll]
        for trio in reversed(self.details):
            out.extend(trio)
        return out

    def band_names(self):
        names = ["LL"]
        for lvl in range(self.levels, 0, -1):
            names += [f"D_h{lvl}", f"D_v{lvl}", f"D_d{lvl}"]
        return names

    def size(self):
        return sum(b.size for b in self.bands())

    def map_details(self, fn):
        """New pyramid with ``fn(band, level)`` applied to every detail band."""
        details = [
            tuple(fn(b, lvl) for b in trio) for lvl, trio in enumerate(self.details, start=1)
        ]
        return SubbandPyramid(self.ll.copy(), details, self.wavelet_id, self.original_shape)

    def map_bands(self, fn):
        """New pyramid with ``fn`` applied to every band, LL included."""
        details = [tuple(fn(b) for b in trio) for trio in self.details]
        return SubbandPyramid(fn(self.ll), details, self.wavelet_id, self.original_shape)

    def __add__(self, other):
        return _combine(self, other, np.add)

    def __sub__(self, other):
        return _combine(self, other, np.subtract)

    def __mul__(self, alpha):
        return self.map_bands(lambda b: alpha * b)

    __rmul__ = __mul__


def _combine(p, q, op):
    if p.original_shape != q.original_shape or p.levels != q.levels:
        raise ValueError("pyramids have different layouts")
    details = [tuple(op(a, b) for a, b in zip(tp, tq)) for tp, tq in zip(p.details, q.details)]
    return SubbandPyramid(op(p.ll, q.ll), details, p.wavelet_id, p.original_shape)


def _pad_even(x):
    ph, pw = x.shape[0] % 2, x.shape[1] % 2
    if not (ph or pw):
        return x
    pad = [(0, ph), (0, pw)] + [(0, 0)] * (x.ndim - 2)
    return np.pad(x, pad, mode="edge")


def _check_levels(levels):
    if int(levels) != levels or not 1 <= levels <= MAX_LEVELS:
        raise ValueError(f"levels must be an integer in [1, {MAX_LEVELS}], got {levels!r}")
    return int(levels)


def decompose(image, filt, levels):
    """Multilevel 2-D decomposition of a gray ``(H, W)`` or colour ``(H, W, C)`` array."""
    filt = get_filter(filt)
    levels = _check_levels(levels)
    x = np.asarray(image, dtype=float)
    if x.ndim not in (2, 3) or x.shape[0] < 1 or x.shape[1] < 1:
        raise ValueError(f"expected an (H, W) or (H, W, C) array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("image contains non-finite samples")
    details = []
    current = x
    for _ in range(levels):
        current, *trio = analyze_2d(_pad_even(current), filt)
        details.append(tuple(trio))
    return SubbandPyramid(current, details, filt.name, x.shape)


def _check_pyramid(p):
    shapes = level_shapes(p.original_shape[0], p.original_shape[1], p.levels)
    tail = tuple(p.original_shape[2:])
    for lvl, trio in enumerate(p.details, start=1):
        want = shapes[lvl] + tail
        if len(trio) != 3 or any(np.shape(b) != want for b in trio):
            raise ValueError(f"malformed pyramid: level {lvl} detail bands must be {want}")
    if np.shape(p.ll) != shapes[-1] + tail:
        raise ValueError(f"malformed pyramid: LL must be {shapes[-1] + tail}")
    return shapes


def _synthesize_levels(p, filt, stop, zero_from=None):
    """Run synthesis from the deepest level down to ``stop``.

    Details of levels ``<= zero_from`` are replaced by zeros.
    """
    shapes = _check_pyramid(p)
    current = np.asarray(p.ll, dtype=float)
    for lvl in range(p.levels, stop, -1):
        trio = p.details[lvl - 1]
        if zero_from is not None and lvl <= zero_from:
            trio = tuple(np.zeros_like(b, dtype=float) for b in trio)
        full = synthesize_2d(current, *trio, filt)
        h, w = shapes[lvl - 1]
        current = full[:h, :w]
    return current


def reconstruct(pyramid, filt=None):
    """Invert :func:`decompose`, cropping padding back to the original shape."""
    filt = get_filter(filt if filt is not None else pyramid.wavelet_id)
    return _synthesize_levels(pyramid, filt, 0)


def approximation(pyramid, level, filt=None):
    """Signal-domain approximation ``A_level`` (details of levels 1..level zeroed)."""
    filt = get_filter(filt if filt is not None else pyramid.wavelet_id)
    if not 0 <= level <= pyramid.levels:
        raise ValueError(f"level must be in [0, {pyramid.levels}]")
    return _synthesize_levels(pyramid, filt, 0, zero_from=level)


def detail_component(pyramid, level, filt=None):
    """``D_level = A_{level-1} - A_level``."""
    if not 1 <= level <= pyramid.levels:
        raise ValueError(f"level must be in [1, {pyramid.levels}]")
    return approximation(pyramid, level - 1, filt) - approximation(pyramid, level, filt)


@dataclass(frozen=True, eq=False)
class PacketTree:
    depth: int
    bands: tuple
    wavelet_id: str

    def __len__(self):
        return len(self.bands)


def packet_decompose(signal, filt, depth):
    """Full binary packet tree: both branches are split at every level.

    Children of band ``i`` are ``2i`` (approximation) and ``2i + 1`` (detail).
    """
    filt = get_filter(filt)
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError("packet_decompose works on 1-D signals")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    if x.size % 2**depth or x.size == 0:
        raise ValueError(f"signal length {x.size} is not divisible by 2**{depth}")
    bands = [x]
    for _ in range(depth):
        bands = [half for b in bands for half in analyze_1d(b, filt)]
    return PacketTree(depth, tuple(bands), filt.name)


def packet_reconstruct(tree, filt=None):
    filt = get_filter(filt if filt is not None else tree.wavelet_id)
    if len(tree.bands) != 2**tree.depth:
        raise ValueError(f"expected {2**tree.depth} bands, got {len(tree.bands)}")
    bands = list(tree.bands)
    while len(bands) > 1:
        bands = [synthesize_1d(bands[i], bands[i + 1], filt) for i in range(0, len(bands), 2)]
    return bands[0]
