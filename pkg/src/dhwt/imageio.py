"""Reading and writing 8-bit gray/RGB images (PNG, binary PPM/PGM) via Pillow."""

from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import DHWTError

__all__ = ["ImageFormatError", "read_image", "write_image", "WRITE_SUFFIXES"]

WRITE_SUFFIXES = (".png", ".ppm", ".pgm", ".pnm")
_FORMATS = {"PNG", "PPM"}


class ImageFormatError(DHWTError, ValueError):
    """Input is not an 8-bit gray or RGB PNG/PPM/PGM image."""


def read_image(path):
    """Return a ``uint8`` array, ``(H, W)`` for gray or ``(H, W, 3)`` for RGB."""
    path = Path(path)
    try:
        with Image.open(path) as im:
            if im.format not in _FORMATS:
                raise ImageFormatError(f"{path}: unsupported file format {im.format}")
            mode = im.mode
            if mode == "P":
                im = im.convert("RGB")
                mode = "RGB"
            if mode not in ("L", "RGB"):
                raise ImageFormatError(f"{path}: unsupported pixel format {mode!r} (need 8-bit L or RGB)")
            return np.asarray(im, dtype=np.uint8).copy()
    except UnidentifiedImageError:
        raise ImageFormatError(f"{path}: not a readable PNG/PPM/PGM image") from None


def write_image(path, pixels):
    path = Path(path)
    arr = np.asarray(pixels)
    if arr.dtype != np.uint8:
        arr = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    if arr.ndim == 3 and arr.shape[2] == 1:
        arr = arr[..., 0]
    if not (arr.ndim == 2 or (arr.ndim == 3 and arr.shape[2] == 3)):
        raise ImageFormatError(f"cannot write array of shape {arr.shape}")
    suffix = path.suffix.lower()
    if suffix not in WRITE_SUFFIXES:
        raise ImageFormatError(f"{path}: output must end in one of {WRITE_SUFFIXES}")
    fmt = "PNG" if suffix == ".png" else "PPM"
    Image.fromarray(arr).save(path, format=fmt)
