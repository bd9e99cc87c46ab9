"""Texture smoothing by guided upsampling of the coarsest pyramid level.

The coarsest Gaussian level is taken as a texture-free seed and upsampled
level by level. Each step first upsamples under the finer Gaussian level,
then adds back that level's Laplacian detail and filters the sum guided by
the texture-free upsampled image.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bilateral import BilateralParams, jbf, jbf_upsample
from .image import ContractError, as_image, clamp01, like_input
from .pyramid import build_gaussian_pyramid, build_laplacian_pyramid, half_size

SIGMA_S_RANGE = (3.0, 15.0)
SIGMA_R_RANGE = (0.02, 0.09)
VARIANTS = ("standard", "laplacian_first")


@dataclass(frozen=True)
class FilterParams:
    sigma_s: float = 5.0
    sigma_r: float = 0.07
    depth_override: Optional[int] = None
    variant: str = "standard"

    def __post_init__(self):
        if not self.sigma_s > 0 or not self.sigma_r > 0:
            raise ContractError(f"sigmas must be positive, got ({self.sigma_s}, {self.sigma_r})")
        if self.variant not in VARIANTS:
            raise ContractError(f"unknown variant {self.variant!r}")
        if self.depth_override is not None and self.depth_override < 1:
            raise ContractError(f"depth_override must be >= 1, got {self.depth_override}")

    def in_envelope(self) -> bool:
        """True when both sigmas lie in the recommended operating ranges."""
        return (SIGMA_S_RANGE[0] <= self.sigma_s <= SIGMA_S_RANGE[1]
                and SIGMA_R_RANGE[0] <= self.sigma_r <= SIGMA_R_RANGE[1])


@dataclass(frozen=True)
class LevelSchedule:
    sigma_s: float
    sigma_r: float
    d_up: int
    d_refine: int

    def up_params(self) -> BilateralParams:
        return BilateralParams(self.sigma_s, self.sigma_r, self.d_up)

    def refine_params(self) -> BilateralParams:
        return BilateralParams(self.sigma_s, self.sigma_r, self.d_refine)


def nearest_odd(x: float) -> int:
    """Odd integer closest to x; exact ties (even x) go to the larger odd."""
    return 2 * math.floor((x - 1.0) / 2.0 + 0.5) + 1


def make_schedule(p: FilterParams, n: int) -> list[LevelSchedule]:
    """Per-output-level parameters for levels 0..n-1.

    The spatial sigma halves with every coarser level; the window sizes are
    the odd values nearest max(sigma, 3) and max(4 sigma, 3).
    """
    if n < 1:
        raise ContractError(f"pyramid depth must be >= 1, got {n}")
    out = []
    for k in range(n):
        s = p.sigma_s / 2.0 ** k
        out.append(LevelSchedule(
            sigma_s=s,
            sigma_r=p.sigma_r,
            d_up=max(nearest_odd(max(s, 3.0)), 3),
            d_refine=max(nearest_odd(max(4.0 * s, 3.0)), 3),
        ))
    return out


def _check_step_shapes(r_k: np.ndarray, g_prev: np.ndarray, l_prev: np.ndarray) -> None:
    if g_prev.shape != l_prev.shape:
        raise ContractError(f"Gaussian level {g_prev.shape} and Laplacian level {l_prev.shape} differ")
    if r_k.shape[:2] != half_size(*g_prev.shape[:2]):
        raise ContractError(f"coarse result {r_k.shape[:2]} is not half of {g_prev.shape[:2]}")


def psu_step(r_k, g_prev, l_prev, sched: LevelSchedule, clamp: bool = True) -> np.ndarray:
    """One upsampling step from level k to level k-1.

    `sched` holds the parameters of the output level k-1. Intermediate levels
    of the full pipeline call this with clamp=False to keep signed headroom.
    """
    r_k, g_prev, l_prev = as_image(r_k), as_image(g_prev), as_image(l_prev)
    _check_step_shapes(r_k, g_prev, l_prev)
    r_hat = jbf_upsample(r_k, g_prev, sched.up_params())
    out = jbf(r_hat + l_prev, r_hat, sched.refine_params())
    return clamp01(out) if clamp else out


def psu_step_variant_e(r_k, g_prev, l_prev, sched: LevelSchedule, clamp: bool = True) -> np.ndarray:
    """Ablation: filter the Laplacian alone under the upsampled image, then add it back."""
    r_k, g_prev, l_prev = as_image(r_k), as_image(g_prev), as_image(l_prev)
    _check_step_shapes(r_k, g_prev, l_prev)
    r_hat = jbf_upsample(r_k, g_prev, sched.up_params())
    out = r_hat + jbf(l_prev, r_hat, sched.refine_params())
    return clamp01(out) if clamp else out


def pyramid_texture_filter(
    img,
    params: FilterParams | None = None,
    callback: Callable[[int, np.ndarray], None] | None = None,
    pyramids: tuple[list, list] | None = None,
) -> np.ndarray:
    """Smooth out texture while keeping structure edges.

    `callback(k, R_k)` is invoked for every intermediate result, coarsest
    first. `pyramids` may supply prebuilt (gaussian, laplacian) lists.
    """
    params = params or FilterParams()
    src = as_image(img)
    if pyramids is None:
        gp = build_gaussian_pyramid(src, params.depth_override)
        lp = build_laplacian_pyramid(gp)
    else:
        gp, lp = pyramids
    n = len(gp) - 1
    schedule = make_schedule(params, n)
    step = psu_step if params.variant == "standard" else psu_step_variant_e
    r = gp[n]
    if callback is not None:
        callback(n, r)
    for k in range(n - 1, -1, -1):
        r = step(r, gp[k], lp[k], schedule[k], clamp=(k == 0))
        if callback is not None:
            callback(k, r)
    return like_input(r, img)
