"""Level-threshold compression: threshold, quantise, zero-run encode, and back.

Container layout (little-endian)::

    b"DHWT" | u8 version | u32 width | u32 height | u8 channels | u8 levels
    | u8 len(id) + id | f64 q | u8 n + n * f64 thresholds
    | for each channel, for each band (LL, then D_h, D_v, D_d from the
      deepest level to level 1): u32 count + zero-run stream

A zero-run stream is a sequence of varint tokens ``run, value, run, value,
...`` where ``run`` counts the zeros before the next non-zero ``value``
(zigzag coded).  Trailing zeros are emitted as one final run token.
"""

import struct
from dataclasses import dataclass

import numpy as np

from .errors import ContainerError
from .filters import get_filter
from .metrics import QualityReport, bpp, cr, energy_stats, mse, psnr
from .transform import SubbandPyramid, decompose, level_shapes, reconstruct

__all__ = [
    "MAGIC",
    "VERSION",
    "ThresholdSchedule",
    "CompressedImage",
    "threshold_pyramid",
    "quantize",
    "dequantize",
    "zero_run_encode",
    "zero_run_decode",
    "encode",
    "decode",
    "compress_image",
    "decompress_image",
    "compression_loop",
]

MAGIC = b"DHWT"
VERSION = 1

_HEADER = struct.Struct("<4sBIIBB")
_U32 = struct.Struct("<I")
_F64 = struct.Struct("<d")

# largest quantised magnitude we agree to store (fits zigzag in 64 bits)
_QMAX = 2**62


@dataclass(frozen=True)
class ThresholdSchedule:
    """Hard-threshold levels for a run of ``loops`` independent compressions.

    Loop ``i`` (1-based) uses ``T_i = T0 * loop_ratio**(i - 1)``; in
    ``"per-level"`` mode ``per_level[l-1]`` replaces ``T0`` for level ``l``.
    """

    base_threshold: float = 100.0
    loop_ratio: float = 0.6
    loops: int = 11
    mode: str = "global"
    per_level: tuple = None

    def __post_init__(self):
        if self.mode not in ("global", "per-level"):
            raise ValueError(f"mode must be 'global' or 'per-level', got {self.mode!r}")
        if not self.base_threshold >= 0:
            raise ValueError("base_threshold must be >= 0")
        if not 0 < self.loop_ratio < 1:
            raise ValueError("loop_ratio must lie in (0, 1)")
        if int(self.loops) != self.loops or self.loops < 1:
            raise ValueError("loops must be a positive integer")
        if self.mode == "per-level":
            if not self.per_level:
                raise ValueError("per-level mode needs per_level thresholds")
            object.__setattr__(self, "per_level", tuple(float(t) for t in self.per_level))
            if any(not t >= 0 for t in self.per_level):
                raise ValueError("thresholds must be >= 0")

    def thresholds(self, loop_index, levels):
        """Threshold for each level ``1..levels`` at ``loop_index``."""
        if not 1 <= loop_index <= self.loops:
            raise ValueError(f"loop_index must be in [1, {self.loops}], got {loop_index}")
        factor = self.loop_ratio ** (loop_index - 1)
        if self.mode == "global":
            return [self.base_threshold * factor] * levels
        if len(self.per_level) < levels:
            raise ValueError(f"per_level has {len(self.per_level)} entries, need {levels}")
        return [t * factor for t in self.per_level[:levels]]

    def header_thresholds(self, loop_index, levels):
        t = self.thresholds(loop_index, levels)
        return t[:1] if self.mode == "global" else t


def _as_schedule(schedule):
    if schedule is None:
        return ThresholdSchedule()
    if isinstance(schedule, ThresholdSchedule):
        return schedule
    return ThresholdSchedule(base_threshold=float(schedule), loops=1)


def threshold_pyramid(p, schedule, loop_index=1):
    """Zero every detail coefficient with ``|c| <= T``.  LL is never touched.

    ``schedule`` may also be a plain number, used as a global threshold.
    """
    if isinstance(schedule, ThresholdSchedule):
        per_level = schedule.thresholds(loop_index, p.levels)
    else:
        if not schedule >= 0:
            raise ValueError("threshold must be >= 0")
        per_level = [float(schedule)] * p.levels

    def hard(band, level):
        band = np.asarray(band, dtype=float)
        return np.where(np.abs(band) <= per_level[level - 1], 0.0, band)

    return p.map_details(hard)


def _check_step(q):
    if not q > 0:
        raise ValueError(f"quantizer step must be positive, got {q}")


def quantize(p, q):
    """Uniform scalar quantiser, rounding half away from zero."""
    _check_step(q)

    def rnd(band):
        scaled = np.asarray(band, dtype=float) / q
        if np.any(np.abs(scaled) >= _QMAX):
            raise ValueError("coefficient too large for the quantizer step")
        return (np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)).astype(np.int64)

    return p.map_bands(rnd)


def dequantize(pq, q):
    _check_step(q)
    return pq.map_bands(lambda band: q * band.astype(float))


# ---------------------------------------------------------------------------
# varints


def _zigzag(v):
    v = v.astype(np.int64)
    return ((v << 1) ^ (v >> 63)).astype(np.uint64)


def _unzigzag(u):
    u = u.astype(np.uint64)
    return ((u >> np.uint64(1)).astype(np.int64)) ^ -((u & np.uint64(1)).astype(np.int64))


def _varint_bytes(tokens):
    """LEB128 encoding of an array of unsigned 64-bit tokens."""
    tokens = np.asarray(tokens, dtype=np.uint64)
    if tokens.size == 0:
        return b""
    lens = np.ones(tokens.size, dtype=np.int64)
    rest = tokens >> np.uint64(7)
    while np.any(rest):
        lens += rest > 0
        rest >>= np.uint64(7)
    offsets = np.concatenate(([0], np.cumsum(lens)[:-1]))
    out = np.empty(int(lens.sum()), dtype=np.uint8)
    for b in range(int(lens.max())):
        sel = lens > b
        chunk = (tokens[sel] >> np.uint64(7 * b)) & np.uint64(0x7F)
        cont = np.where(lens[sel] - 1 > b, 0x80, 0).astype(np.uint64)
        out[offsets[sel] + b] = (chunk | cont).astype(np.uint8)
    return out.tobytes()


def _read_varints(buf, start, max_tokens):
    """Decode up to ``max_tokens`` varints from ``buf[start:]``.

    Returns ``(tokens, end_offsets, byte_lengths)``; offsets are relative to ``buf``.
    """
    window = np.frombuffer(buf, dtype=np.uint8, count=min(len(buf) - start, 10 * max_tokens),
                           offset=start)
    ends = np.flatnonzero((window & 0x80) == 0)[:max_tokens]
    if ends.size == 0:
        return np.zeros(0, dtype=np.uint64), ends, ends
    starts = np.concatenate(([0], ends[:-1] + 1))
    pos = np.arange(ends[-1] + 1) - np.repeat(starts, ends - starts + 1)
    # over-long varints are rejected by the caller; keep the shifts defined meanwhile
    shift = (7 * np.minimum(pos, 9)).astype(np.uint64)
    payload = (window[: ends[-1] + 1] & 0x7F).astype(np.uint64) << shift
    tokens = np.add.reduceat(payload, starts)
    return tokens, ends + start + 1, ends - starts + 1


def zero_run_encode(values):
    """Token stream for a flat integer array."""
    values = np.asarray(values, dtype=np.int64).ravel()
    nz = np.flatnonzero(values)
    runs = np.diff(np.concatenate(([-1], nz))) - 1
    tokens = np.empty(2 * nz.size, dtype=np.uint64)
    tokens[0::2] = runs.astype(np.uint64)
    tokens[1::2] = _zigzag(values[nz])
    tail = values.size - (nz[-1] + 1 if nz.size else 0)
    if tail:
        tokens = np.append(tokens, np.uint64(tail))
    return _varint_bytes(tokens)


def zero_run_decode(buf, count, start=0):
    """Inverse of :func:`zero_run_encode`; returns ``(values, end_offset)``."""
    out = np.zeros(count, dtype=np.int64)
    if count == 0:
        return out, start
    tokens, ends, lengths = _read_varints(buf, start, 2 * count + 1)
    if tokens.size == 0:
        raise ContainerError("truncated coefficient stream")
    # tokens past the band may be unrelated bytes; clipping keeps the cumsum monotone
    inc = np.minimum(tokens, np.uint64(count + 1)).astype(np.int64)
    inc[1::2] = 1
    covered = np.cumsum(inc)
    last = int(np.searchsorted(covered, count))
    if last >= tokens.size:
        raise ContainerError("truncated coefficient stream")
    if covered[last] != count:
        raise ContainerError("coefficient stream overruns the band")
    if np.any(lengths[: last + 1] > 10):
        raise ContainerError("varint longer than 10 bytes")
    tokens = tokens[: last + 1]
    values = tokens[1::2]
    if np.any(values == 0):
        raise ContainerError("zero value token in run stream")
    positions = covered[1 : last + 1 : 2] - 1
    out[positions] = _unzigzag(values)
    return out, int(ends[last])


# ---------------------------------------------------------------------------
# container


@dataclass(frozen=True)
class CompressedImage:
    width: int
    height: int
    channels: int
    levels: int
    wavelet_id: str
    q: float
    thresholds: tuple
    payload: bytes
    version: int = VERSION

    def header_bytes(self):
        wid = self.wavelet_id.encode("ascii")
        if len(wid) > 255 or len(self.thresholds) > 255:
            raise ValueError("wavelet id or threshold list too long for the header")
        parts = [
            _HEADER.pack(MAGIC, self.version, self.width, self.height, self.channels, self.levels),
            bytes([len(wid)]),
            wid,
            _F64.pack(self.q),
            bytes([len(self.thresholds)]),
            b"".join(_F64.pack(t) for t in self.thresholds),
        ]
        return b"".join(parts)

    def to_bytes(self):
        return self.header_bytes() + self.payload

    def __len__(self):
        return len(self.header_bytes()) + len(self.payload)

    @classmethod
    def from_bytes(cls, data):
        data = bytes(data)
        try:
            magic, version, width, height, channels, levels = _HEADER.unpack_from(data, 0)
            pos = _HEADER.size
            if magic != MAGIC:
                raise ContainerError(f"bad magic {magic!r}")
            if version != VERSION:
                raise ContainerError(f"unsupported container version {version}")
            n = data[pos]
            wid = data[pos + 1 : pos + 1 + n]
            if len(wid) != n:
                raise ContainerError("truncated header")
            pos += 1 + n
            (q,) = _F64.unpack_from(data, pos)
            pos += _F64.size
            nt = data[pos]
            pos += 1
            thresholds = tuple(_F64.unpack_from(data, pos + 8 * i)[0] for i in range(nt))
            pos += 8 * nt
        except (struct.error, IndexError):
            raise ContainerError("truncated header") from None
        if width < 1 or height < 1 or channels not in (1, 3) or not 1 <= levels <= 8:
            raise ContainerError(
                f"implausible header: {width}x{height}, {channels} channels, {levels} levels"
            )
        if not q > 0:
            raise ContainerError(f"bad quantizer step {q}")
        try:
            wavelet_id = wid.decode("ascii")
        except UnicodeDecodeError:
            raise ContainerError("wavelet id is not ASCII") from None
        return cls(width, height, channels, levels, wavelet_id, q, thresholds, data[pos:], version)


def _channel_bands(pq, c):
    for band in pq.bands():
        yield band if band.ndim == 2 else band[..., c]


def encode(pq, q, thresholds=(), wavelet_id=None):
    """Pack an integer pyramid into a :class:`CompressedImage`."""
    h, w = pq.original_shape[:2]
    chunks = []
    for c in range(pq.channels):
        for band in _channel_bands(pq, c):
            if not np.issubdtype(band.dtype, np.integer):
                raise ValueError("encode expects a quantised (integer) pyramid")
            chunks.append(_U32.pack(band.size))
            chunks.append(zero_run_encode(band))
    return CompressedImage(
        width=w,
        height=h,
        channels=pq.channels,
        levels=pq.levels,
        wavelet_id=wavelet_id or pq.wavelet_id,
        q=float(q),
        thresholds=tuple(float(t) for t in thresholds),
        payload=b"".join(chunks),
    )


def decode(ci):
    """Rebuild the integer pyramid stored in ``ci`` (object or raw bytes)."""
    if isinstance(ci, (bytes, bytearray, memoryview)):
        ci = CompressedImage.from_bytes(ci)
    shapes = level_shapes(ci.height, ci.width, ci.levels)
    band_shapes = [shapes[-1]]
    for lvl in range(ci.levels, 0, -1):
        band_shapes += [shapes[lvl]] * 3
    buf = ci.payload
    pos = 0
    per_channel = []
    for _ in range(ci.channels):
        bands = []
        for shape in band_shapes:
            want = shape[0] * shape[1]
            if pos + 4 > len(buf):
                raise ContainerError("truncated payload")
            (count,) = _U32.unpack_from(buf, pos)
            pos += 4
            if count != want:
                raise ContainerError(f"band has {count} coefficients, header implies {want}")
            values, pos = zero_run_decode(buf, count, pos)
            bands.append(values.reshape(shape))
        per_channel.append(bands)
    if pos != len(buf):
        raise ContainerError(f"{len(buf) - pos} trailing bytes after payload")
    if ci.channels == 1:
        merged = per_channel[0]
        original_shape = (ci.height, ci.width)
    else:
        merged = [np.stack(group, axis=-1) for group in zip(*per_channel)]
        original_shape = (ci.height, ci.width, ci.channels)
    ll, rest = merged[0], merged[1:]
    details = [tuple(rest[3 * i : 3 * i + 3]) for i in range(ci.levels)][::-1]
    return SubbandPyramid(ll, details, ci.wavelet_id, original_shape)


# ---------------------------------------------------------------------------
# pipeline


def _image_array(img):
    x = np.asarray(img, dtype=float)
    if x.ndim == 3 and x.shape[2] == 1:
        x = x[..., 0]
    if x.ndim not in (2, 3) or (x.ndim == 3 and x.shape[2] != 3):
        raise ValueError(f"expected a gray (H, W) or RGB (H, W, 3) image, got shape {x.shape}")
    return x


def decompress_image(ci, display=True):
    """Decode and invert the transform.

    With ``display=True`` the result is rounded and clamped to ``uint8``;
    otherwise the unclamped float reconstruction is returned (used for metrics).
    """
    if isinstance(ci, (bytes, bytearray, memoryview)):
        ci = CompressedImage.from_bytes(ci)
    get_filter(ci.wavelet_id)
    pq = decode(ci)
    rec = reconstruct(dequantize(pq, ci.q), ci.wavelet_id)
    if display:
        return np.clip(np.rint(rec), 0, 255).astype(np.uint8)
    return rec


def compress_image(img, wavelet_id="dhwt", levels=2, schedule=None, q=1.0, loop_index=1):
    """Decompose, threshold, quantise and encode one image.

    Returns ``(CompressedImage, QualityReport)``; the report is measured on
    the decoded container, not on intermediate arrays.
    """
    x = _image_array(img)
    schedule = _as_schedule(schedule)
    _check_step(q)
    pyr = decompose(x, wavelet_id, levels)
    kept = threshold_pyramid(pyr, schedule, loop_index)
    pq = quantize(kept, q)
    ci = encode(pq, q, schedule.header_thresholds(loop_index, levels), get_filter(wavelet_id).name)
    ci = CompressedImage.from_bytes(ci.to_bytes())
    rec = decompress_image(ci, display=False)
    err = mse(x, rec)
    rate = cr(pq)
    channels = 1 if x.ndim == 2 else x.shape[2]
    try:
        energy, _ = energy_stats(pyr, kept)
        _, zeros = energy_stats(pyr, dequantize(pq, q))
    except ValueError:
        # all-zero image: nothing to lose
        energy, zeros = 100.0, 100.0 - rate
    report = QualityReport(
        mse=err,
        psnr=psnr(err),
        cr=rate,
        bpp=bpp(rate, channels),
        energy_retained=energy,
        zero_share=zeros,
        stream_cr=100.0 * len(ci) / x.size,
    )
    return ci, report


def compression_loop(img, wavelet_id="dhwt", levels=2, schedule=None, q=1.0):
    """Independent re-compressions of ``img`` under a geometric threshold schedule."""
    schedule = _as_schedule(schedule)
    return [
        compress_image(img, wavelet_id, levels, schedule, q, loop_index=i)[1]
        for i in range(1, schedule.loops + 1)
    ]
