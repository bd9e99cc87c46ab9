"""Joint bilateral filtering with a shared multi-channel range weight.

The kernel evaluates the full d x d window exactly (no separable or
grid approximation). Rows are distributed over numba threads; every output
pixel is computed independently, so results do not depend on thread count.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numba
import numpy as np

from .image import ContractError, as_image, like_input
from .pyramid import half_size, upsample_bilinear

if "NUMBA_THREADING_LAYER" not in os.environ:
    # The bundled TBB is often too old; skip it instead of warning on first use.
    numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]


@dataclass(frozen=True)
class BilateralParams:
    sigma_s: float
    sigma_r: float
    window_d: int

    def __post_init__(self):
        if not self.sigma_s > 0:
            raise ContractError(f"sigma_s must be > 0, got {self.sigma_s}")
        if not self.sigma_r > 0:
            raise ContractError(f"sigma_r must be > 0, got {self.sigma_r}")
        if self.window_d < 3 or self.window_d % 2 == 0:
            raise ContractError(f"window_d must be odd and >= 3, got {self.window_d}")


def range_weight(a, b, sigma_r: float) -> float:
    """exp(-|a - b|^2 / (2 sigma_r^2)) over all channels at once."""
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    if a.shape != b.shape:
        raise ContractError(f"channel count mismatch: {a.shape} vs {b.shape}")
    d2 = float(np.sum((a - b) ** 2))
    return math.exp(-d2 / (2.0 * sigma_r * sigma_r))


def spatial_kernel(sigma_s: float, d: int) -> np.ndarray:
    r = d // 2
    y, x = np.mgrid[-r : r + 1, -r : r + 1].astype(np.float64)
    return np.exp(-(x * x + y * y) / (2.0 * sigma_s * sigma_s))


@numba.njit(parallel=True, cache=True, error_model="numpy")
def _jbf_kernel(src, guide, spatial, inv_two_sr2):
    # src, guide: planar (C, H + 2r, W + 2r) arrays, replicate-padded by r.
    c = src.shape[0]
    cg = guide.shape[0]
    d = spatial.shape[0]
    r = d // 2
    h = src.shape[1] - 2 * r
    w = src.shape[2] - 2 * r
    out = np.empty((c, h, w))
    for y in numba.prange(h):
        acc = np.zeros((c, w))
        norm = np.zeros(w)
        dist2 = np.empty(w)
        for dy in range(d):
            for dx in range(d):
                sw = spatial[dy, dx]
                dist2[:] = 0.0
                for ch in range(cg):
                    for x in range(w):
                        t = guide[ch, y + r, x + r] - guide[ch, y + dy, x + dx]
                        dist2[x] += t * t
                for x in range(w):
                    dist2[x] = sw * math.exp(-dist2[x] * inv_two_sr2)
                    norm[x] += dist2[x]
                # Offsets from the centre value keep constant regions bit-exact.
                for ch in range(c):
                    for x in range(w):
                        acc[ch, x] += dist2[x] * (src[ch, y + dy, x + dx] - src[ch, y + r, x + r])
        for ch in range(c):
            for x in range(w):
                out[ch, y, x] = src[ch, y + r, x + r] + acc[ch, x] / norm[x]
    return out


def _planar_padded(a: np.ndarray, r: int) -> np.ndarray:
    return np.ascontiguousarray(np.pad(a, ((r, r), (r, r), (0, 0)), mode="edge").transpose(2, 0, 1))


def _check_pair(src: np.ndarray, guide: np.ndarray) -> None:
    if src.shape[:2] != guide.shape[:2]:
        raise ContractError(f"input {src.shape[:2]} and guide {guide.shape[:2]} differ in size")


def jbf(src, guide, p: BilateralParams) -> np.ndarray:
    """Joint bilateral filter of `src` with range weights taken from `guide`.

    Windows are d x d with replicated borders. The range weight is one
    scalar per pixel pair from the Euclidean distance between guide vectors.
    """
    s, g = as_image(src), as_image(guide)
    _check_pair(s, g)
    r = p.window_d // 2
    out = _jbf_kernel(
        _planar_padded(s, r),
        _planar_padded(g, r),
        spatial_kernel(p.sigma_s, p.window_d),
        1.0 / (2.0 * p.sigma_r * p.sigma_r),
    )
    return like_input(np.ascontiguousarray(out.transpose(1, 2, 0)), src)


def jbf_upsample(low, guide_fine, p: BilateralParams) -> np.ndarray:
    """Bilinearly upsample `low` to the guide's size, then apply `jbf` under `guide_fine`.

    `low` must be the next coarser pyramid level of the guide's size.
    """
    lo, g = as_image(low), as_image(guide_fine)
    if lo.shape[:2] != half_size(*g.shape[:2]):
        raise ContractError(
            f"low-res {lo.shape[:2]} is not the half-size level of guide {g.shape[:2]}"
        )
    up = upsample_bilinear(lo, g.shape[0], g.shape[1])
    return like_input(jbf(up, g, p), low)
