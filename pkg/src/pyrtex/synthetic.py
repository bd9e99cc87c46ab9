"""Seeded synthetic test images: structure-only scenes, textures, noise, dithering."""

from __future__ import annotations

import numpy as np

from .image import ContractError, as_image, clamp01, like_input

PATTERNS = ("checker", "stripes", "noise-dots")

_BAYER8 = np.array(
    [
        [0, 32, 8, 40, 2, 34, 10, 42],
        [48, 16, 56, 24, 50, 18, 58, 26],
        [12, 44, 4, 36, 14, 46, 6, 38],
        [60, 28, 52, 20, 62, 30, 54, 22],
        [3, 35, 11, 43, 1, 33, 9, 41],
        [51, 19, 59, 27, 49, 17, 57, 25],
        [15, 47, 7, 39, 13, 45, 5, 37],
        [63, 31, 55, 23, 61, 29, 53, 21],
    ]
)


def texture_pattern(h: int, w: int, pattern: str, period: int, seed: int = 0) -> np.ndarray:
    """Zero-mean texture field in [-1, 1] of shape (h, w).

    `period` is the side of one checker cell / the width of one stripe /
    the spacing of the dot grid.
    """
    if period < 2:
        raise ContractError(f"period must be >= 2, got {period}")
    yy, xx = np.mgrid[0:h, 0:w]
    if pattern == "checker":
        return np.where(((yy // period) + (xx // period)) % 2 == 0, -1.0, 1.0)
    if pattern == "stripes":
        return np.where((xx // period) % 2 == 0, -1.0, 1.0)
    if pattern == "noise-dots":
        rng = np.random.default_rng(seed)
        gh, gw = -(-h // period), -(-w // period)
        signs = rng.choice([-1.0, 1.0], size=(gh, gw))
        radius = max(period / 4.0, 0.75)
        lo = radius
        hi = max(period - radius, lo)
        cy = rng.uniform(lo, hi, size=(gh, gw))
        cx = rng.uniform(lo, hi, size=(gh, gw))
        cell_y, cell_x = yy // period, xx // period
        dy = (yy % period) + 0.5 - cy[cell_y, cell_x]
        dx = (xx % period) + 0.5 - cx[cell_y, cell_x]
        inside = dy * dy + dx * dx <= radius * radius
        return np.where(inside, signs[cell_y, cell_x], 0.0)
    raise ContractError(f"unknown pattern {pattern!r}; expected one of {PATTERNS}")


def add_synthetic_texture(structure, pattern: str, amplitude: float, period: int, seed: int = 0):
    """Overlay a texture of the given amplitude on a structure-only image."""
    if not 0.0 < amplitude <= 0.5:
        raise ContractError(f"amplitude must be in (0, 0.5], got {amplitude}")
    s = as_image(structure)
    t = texture_pattern(s.shape[0], s.shape[1], pattern, period, seed)
    return like_input(clamp01(s + amplitude * t[:, :, None]), structure)


def add_gaussian_noise(img, sigma: float, seed: int = 0):
    if not 0.0 <= sigma <= 0.1:
        raise ContractError(f"sigma must be in [0, 0.1], got {sigma}")
    a = as_image(img)
    if sigma == 0.0:
        return like_input(a.copy(), img)
    n = np.random.default_rng(seed).normal(0.0, sigma, size=a.shape)
    return like_input(clamp01(a + n), img)


def structure_image(h: int, w: int, seed: int = 0, channels: int = 3, shapes: int = 6) -> np.ndarray:
    """Piecewise-constant scene of rectangles and disks on a flat background.

    Colors stay inside [0.25, 0.75] so a texture of amplitude <= 0.25 never clips.
    """
    rng = np.random.default_rng(seed)
    img = np.empty((h, w, channels))
    img[:] = rng.uniform(0.25, 0.75, size=channels)
    yy, xx = np.mgrid[0:h, 0:w]
    for i in range(shapes):
        color = rng.uniform(0.25, 0.75, size=channels)
        if i % 2 == 0:
            y0, x0 = rng.integers(0, h * 3 // 4), rng.integers(0, w * 3 // 4)
            y1 = min(h, y0 + rng.integers(h // 6, h // 2))
            x1 = min(w, x0 + rng.integers(w // 6, w // 2))
            img[y0:y1, x0:x1] = color
        else:
            cy, cx = rng.uniform(0, h), rng.uniform(0, w)
            r = rng.uniform(min(h, w) / 10, min(h, w) / 4)
            img[(yy - cy) ** 2 + (xx - cx) ** 2 <= r * r] = color
    return img


def textured_corpus(n: int, size: tuple[int, int] = (256, 256), pattern: str = "checker",
                    amplitude: float = 0.2, period: int = 8, seed: int = 0):
    """`n` (ground truth, textured) pairs built from seeded structure scenes."""
    pairs = []
    for i in range(n):
        gt = structure_image(size[0], size[1], seed=seed + i)
        pairs.append((gt, add_synthetic_texture(gt, pattern, amplitude, period, seed=seed + i)))
    return pairs


def gray_ramp(h: int, w: int) -> np.ndarray:
    """Horizontal ramp from 0 to 1, single channel."""
    return np.broadcast_to(np.linspace(0.0, 1.0, w), (h, w))[:, :, None].copy()


def bayer_dither(img) -> np.ndarray:
    """Binary ordered dither with the 8x8 Bayer threshold matrix."""
    a = as_image(img)
    h, w = a.shape[:2]
    thresh = (_BAYER8[np.arange(h)[:, None] % 8, np.arange(w)[None, :] % 8] + 0.5) / 64.0
    return like_input((a > thresh[:, :, None]).astype(np.float64), img)


def hdr_ramp(h: int, w: int, decades: float = 3.0, texture: float = 0.1, period: int = 8) -> np.ndarray:
    """Gray radiance ramp spanning `decades` orders of magnitude plus a log-domain checker."""
    log_lum = np.linspace(-decades, 0.0, w)[None, :] + texture * texture_pattern(h, w, "checker", period)
    return np.repeat((10.0 ** log_lum)[:, :, None], 3, axis=2)
