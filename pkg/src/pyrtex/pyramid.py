"""Gaussian and Laplacian pyramids with half-rate bilinear resampling.

Levels are (H, W, C) float64 arrays. Level k+1 has ceil(H/2) x ceil(W/2)
pixels. The default depth stops as soon as the long axis of the coarsest
level falls into [32, 64).
"""

from __future__ import annotations

import math

import numpy as np

from .image import ContractError, as_image

COARSEST_MIN = 32
COARSEST_MAX = 64  # exclusive


def gaussian_kernel_1d(sigma: float = 1.0, radius: int = 2) -> np.ndarray:
    x = np.arange(-radius, radius + 1, dtype=np.float64)
    g = np.exp(-x * x / (2.0 * sigma * sigma))
    return g / g.sum()


def gaussian_kernel_5x5() -> np.ndarray:
    """5x5 Gaussian with standard deviation 1, normalized to unit sum."""
    g = gaussian_kernel_1d()
    k = np.outer(g, g)
    return k / k.sum()


def _smooth_axis(a: np.ndarray, w: np.ndarray, axis: int) -> np.ndarray:
    r = len(w) // 2
    pad = [(0, 0)] * a.ndim
    pad[axis] = (r, r)
    p = np.pad(a, pad, mode="edge")
    n = a.shape[axis]
    # Written as x + sum w_i (x_i - x) so constant regions stay bit-exact.
    out = a.copy()
    for i, wi in enumerate(w):
        if i == r:
            continue
        out += wi * (np.take(p, np.arange(i, i + n), axis=axis) - a)
    return out


def gaussian_smooth(img) -> np.ndarray:
    """Separable 5x5, sigma 1 Gaussian blur with replicated borders."""
    a = as_image(img)
    w = gaussian_kernel_1d()
    return _smooth_axis(_smooth_axis(a, w, 0), w, 1)


def _resample_axis(a: np.ndarray, n_out: int, axis: int) -> np.ndarray:
    n_in = a.shape[axis]
    if n_in == n_out:
        return a
    src = (np.arange(n_out) + 0.5) * (n_in / n_out) - 0.5
    src = np.clip(src, 0.0, n_in - 1)
    i0 = np.floor(src).astype(np.intp)
    i1 = np.minimum(i0 + 1, n_in - 1)
    shape = [1] * a.ndim
    shape[axis] = n_out
    f = (src - i0).reshape(shape)
    lo = np.take(a, i0, axis=axis)
    hi = np.take(a, i1, axis=axis)
    return lo + f * (hi - lo)


def resize_bilinear(img, h: int, w: int) -> np.ndarray:
    """Half-pixel aligned bilinear resampling with clamped borders."""
    a = as_image(img)
    return _resample_axis(_resample_axis(a, h, 0), w, 1)


def half_size(h: int, w: int) -> tuple[int, int]:
    return -(-h // 2), -(-w // 2)


def downsample_half(img) -> np.ndarray:
    a = as_image(img)
    h, w = a.shape[:2]
    if h < 2 or w < 2:
        raise ContractError(f"cannot halve a {h}x{w} image; both sides must be >= 2")
    return resize_bilinear(gaussian_smooth(a), *half_size(h, w))


def upsample_bilinear(img, target_h: int, target_w: int) -> np.ndarray:
    a = as_image(img)
    if target_h < a.shape[0] or target_w < a.shape[1]:
        raise ContractError(
            f"upsample target {target_h}x{target_w} is smaller than source {a.shape[0]}x{a.shape[1]}"
        )
    return resize_bilinear(a, target_h, target_w)


def pyramid_depth(h: int, w: int) -> int:
    """Number of halvings until the long axis first lands in [32, 64)."""
    a = max(h, w)
    if a < COARSEST_MAX:
        raise ContractError(
            f"long axis {a} < {COARSEST_MAX}: the automatic depth rule needs a larger image; "
            "pass depth_override explicitly"
        )
    n = 0
    while a >= COARSEST_MAX:
        a = math.ceil(a / 2)
        n += 1
    return n


def build_gaussian_pyramid(img, depth_override: int | None = None) -> list[np.ndarray]:
    """Return [G_0, ..., G_N] with G_0 the input image."""
    a = as_image(img)
    if depth_override is None:
        n = pyramid_depth(a.shape[0], a.shape[1])
    else:
        if depth_override < 1:
            raise ContractError(f"depth_override must be >= 1, got {depth_override}")
        n = int(depth_override)
    levels = [a]
    for _ in range(n):
        levels.append(downsample_half(levels[-1]))
    return levels


def build_laplacian_pyramid(gp: list[np.ndarray]) -> list[np.ndarray]:
    """L_k = G_k - upsample(G_{k+1}) for k < N and L_N = G_N."""
    lp = []
    for fine, coarse in zip(gp[:-1], gp[1:]):
        lp.append(fine - upsample_bilinear(coarse, fine.shape[0], fine.shape[1]))
    lp.append(gp[-1].copy())
    return lp


def collapse(lp: list[np.ndarray]) -> np.ndarray:
    g = lp[-1]
    for lap in reversed(lp[:-1]):
        g = lap + upsample_bilinear(g, lap.shape[0], lap.shape[1])
    return g
