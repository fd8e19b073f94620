"""Two-channel filter banks: the 2-tap Hermite filter and comparison wavelets.

Taps are stored in correlation order: the approximation output is
``a[i] = sum_j low[j] * s[2i + j]`` (indices wrap periodically).
"""

from dataclasses import dataclass
from math import pi, sqrt

import numpy as np

from .errors import UnknownWaveletError
from .hermite import hermite_eval

__all__ = [
    "FilterPair",
    "PacketFilters",
    "dhwt_filter",
    "standard_filter",
    "get_filter",
    "available_wavelets",
    "verify_pr",
    "packet_filters",
    "packet_function_eval",
    "PACKET_MAX_LEVEL",
]

_INV_SQRT_PI = 1.0 / sqrt(pi)


def _frozen(taps):
    arr = np.array(taps, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FilterPair:
    name: str
    analysis_low: np.ndarray
    analysis_high: np.ndarray
    synthesis_low: np.ndarray
    synthesis_high: np.ndarray

    def __post_init__(self):
        for field in ("analysis_low", "analysis_high", "synthesis_low", "synthesis_high"):
            object.__setattr__(self, field, _frozen(getattr(self, field)))
        n = len(self.analysis_low)
        if n < 2 or n % 2:
            raise ValueError(f"filter {self.name!r}: tap count must be even and >= 2, got {n}")
        for field in ("analysis_high", "synthesis_low", "synthesis_high"):
            if len(getattr(self, field)) != n:
                raise ValueError(f"filter {self.name!r}: {field} length differs from analysis_low")

    def __len__(self):
        return len(self.analysis_low)

    def analysis_matrix(self):
        """The 2x2 block ``[[high], [low]]`` of a 2-tap bank (the layout of ``F``)."""
        if len(self) != 2:
            raise ValueError("analysis_matrix is only defined for 2-tap banks")
        return np.vstack([self.analysis_high, self.analysis_low])


def dhwt_filter():
    """The extracted Hermite filter ``F = (1/sqrt(pi)) [[1, -1], [1, 1]]``.

    The ``[1, 1]`` row is the low-pass branch.  Because ``F F^T = (2/pi) I``
    the synthesis taps carry an extra factor ``pi/2``.
    """
    c = _INV_SQRT_PI
    low = [c, c]
    high = [c, -c]
    gain = pi / 2
    return FilterPair(
        "dhwt",
        analysis_low=low,
        analysis_high=high,
        synthesis_low=[gain * v for v in low],
        synthesis_high=[gain * v for v in high],
    )


def _orthogonal(name, low):
    low = np.asarray(low, dtype=float)
    # quadrature mirror: g[j] = (-1)^j h[L-1-j]
    high = low[::-1] * (-1.0) ** np.arange(len(low))
    return FilterPair(name, low, high, low, high)


def _haar():
    return _orthogonal("haar", [1 / sqrt(2), 1 / sqrt(2)])


def _db2_taps():
    s3 = sqrt(3.0)
    d = 4.0 * sqrt(2.0)
    return [(1 + s3) / d, (3 + s3) / d, (3 - s3) / d, (1 - s3) / d]


def _db2():
    return _orthogonal("db2", _db2_taps())


def _sym2():
    # with two vanishing moments the least-asymmetric root choice coincides with db2
    return _orthogonal("sym2", _db2_taps())


# Coiflet order 2, obtained by solving the orthonormality, wavelet moment and
# scaling-function moment equations (centre 4) to machine precision.
_COIF2 = [
    0.016387336463203873,
    -0.0414649367868722,
    -0.06737255472372614,
    0.38611006682276416,
    0.8127236354494138,
    0.4170051844232373,
    -0.07648859907828048,
    -0.05943441864643,
    0.02368017194684736,
    0.005611434819368565,
    -0.001823208870910896,
    -0.0007205494455203444,
]


def _coif2():
    return _orthogonal("coif2", _COIF2)


_STANDARD = {"haar": _haar, "db2": _db2, "sym2": _sym2, "coif2": _coif2}
_REGISTRY = {"dhwt": dhwt_filter, **_STANDARD}


def standard_filter(name):
    try:
        return _STANDARD[name]()
    except KeyError:
        raise UnknownWaveletError(
            f"unknown wavelet {name!r}; standard wavelets are {sorted(_STANDARD)}"
        ) from None


def get_filter(name):
    """Look up any registered filter by id (``"dhwt"``, ``"haar"``, ...).

    A :class:`FilterPair` passed in is returned unchanged.
    """
    if isinstance(name, FilterPair):
        return name
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise UnknownWaveletError(
            f"unknown wavelet {name!r}; available: {available_wavelets()}"
        ) from None


def available_wavelets():
    return sorted(_REGISTRY)


def verify_pr(filt, tol, n_signals=100, seed=0):
    """Check perfect reconstruction on random even-length signals (2..256)."""
    from .transform import analyze_1d, synthesize_1d

    if tol <= 0:
        raise ValueError("tol must be positive")
    rng = np.random.default_rng(seed)
    for _ in range(n_signals):
        length = 2 * int(rng.integers(1, 129))
        x = rng.standard_normal(length)
        a, d = analyze_1d(x, filt)
        err = np.max(np.abs(synthesize_1d(a, d, filt) - x))
        if not err <= tol:
            return False
    return True


# ---------------------------------------------------------------------------
# wavelet packets

PACKET_MAX_LEVEL = 2


@dataclass(frozen=True, eq=False)
class PacketFilters:
    u: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "u", _frozen(self.u))
        object.__setattr__(self, "y", _frozen(self.y))
        if len(self.u) != len(self.y) or len(self.u) % 2:
            raise ValueError("packet filters must have equal, even length")


def packet_filters():
    """Scaling (``u``) and wavelet (``y``) branch filters of the 2-tap packet tree."""
    c = _INV_SQRT_PI
    return PacketFilters(u=[c, c], y=[c, -c])


def packet_function_eval(m, k, n, t):
    """Packet atom ``(1/sqrt(pi)) H_m(2**k t - n)`` on its cell ``[n/2**k, (n+1)/2**k)``.

    The tabulated atoms at depth ``k`` take ``m == n``; values are zero
    outside the cell.  Only depths up to :data:`PACKET_MAX_LEVEL` are supported.
    """
    if not 0 <= k <= PACKET_MAX_LEVEL:
        raise ValueError(f"packet level k={k} outside [0, {PACKET_MAX_LEVEL}]")
    if not 0 <= n < 2**k:
        raise ValueError(f"translation n={n} outside [0, {2**k - 1}] at level {k}")
    if not 0 <= m < 2**k:
        raise ValueError(f"branch index m={m} outside [0, {2**k - 1}] at level {k}")
    t = np.asarray(t, dtype=float)
    x = 2.0**k * t - n
    inside = (x >= 0.0) & (x < 1.0)
    out = np.where(inside, _INV_SQRT_PI * hermite_eval(m, x), 0.0)
    return out if out.ndim else float(out)
