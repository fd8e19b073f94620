"""Deterministic 256x256 RGB test image: smooth gradients, edges, texture, noise."""

import numpy as np

__all__ = ["synthetic_image"]


def _soft(dist, width):
    # 1 inside (dist < 0), 0 outside, logistic ramp of about `width` samples
    return 1.0 / (1.0 + np.exp(np.clip(dist / width, -50, 50)))


def _paint(img, mask, colour):
    return img * (1.0 - mask[..., None]) + mask[..., None] * np.asarray(colour, dtype=float)


def synthetic_image(size=256, seed=1234, noise=2.0, edge_width=1.5):
    """Return a ``(size, size, 3)`` ``uint8`` image.

    The same arguments always give the same pixels.  ``edge_width`` is the
    ramp width of the shape boundaries in pixels.
    """
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:size, 0:size].astype(float)
    x, y = xx / size, yy / size

    r = 200 * x + 30 * np.sin(6 * np.pi * y)
    g = 60 + 150 * y + 25 * np.cos(4 * np.pi * (x + y))
    b = 180 - 120 * np.hypot(x - 0.5, y - 0.5) + 20 * np.sin(10 * np.pi * x * y)
    img = np.stack([r, g, b], axis=-1)

    # signed distances in pixels
    disk = np.hypot(xx - 0.3 * size, yy - 0.65 * size) - 0.17 * size
    box = np.maximum(np.abs(xx - 0.72 * size) - 0.16 * size, np.abs(yy - 0.28 * size) - 0.12 * size)
    bar = np.maximum(np.abs(xx + yy - 1.35 * size) / np.sqrt(2) - 0.02 * size, 0.45 * size - xx)
    img = _paint(img, _soft(disk, edge_width), (235, 210, 40))
    img = _paint(img, _soft(box, edge_width), (25, 70, 160))
    # the bar keeps a hard edge so the largest details stay well above the default threshold
    img = _paint(img, _soft(bar, 0.25), (250, 250, 250))

    patch = np.maximum(np.abs(xx - 0.78 * size) - 0.16 * size, np.abs(yy - 0.8 * size) - 0.14 * size)
    stripes = 128 + 70 * np.sin(2 * np.pi * xx / 40.0) * np.cos(2 * np.pi * yy / 56.0)
    img = _paint(img, _soft(patch, edge_width), (0, 0, 0)) + _soft(patch, edge_width)[..., None] * stripes[..., None]

    img = img + rng.normal(0.0, noise, img.shape)
    return np.clip(np.rint(img), 0, 255).astype(np.uint8)
