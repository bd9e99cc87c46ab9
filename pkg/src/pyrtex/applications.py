"""Image manipulation built on top of the texture smoothing filter."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .image import ContractError, as_image, clamp01, like_input
from .psu import FilterParams, pyramid_texture_filter

APPS = ("detail_enhance", "abstraction", "tonemap", "inverse_halftone", "ldr_enhance")

_DEFAULT_FILTERS = {
    "abstraction": FilterParams(sigma_s=3.0, sigma_r=0.03),
    "inverse_halftone": FilterParams(sigma_s=4.0, sigma_r=0.03),
}

LUMA_WEIGHTS = np.array([0.2126, 0.7152, 0.0722])
ILLUMINATION_FLOOR = 1e-3


@dataclass(frozen=True)
class AppConfig:
    app: str = "detail_enhance"
    filter: Optional[FilterParams] = None
    boost_alpha: float = 2.5
    gamma: float = 0.7
    # Contrast ratio (max/min) of the compressed base layer.
    tonemap_target_contrast: float = 5.0

    def __post_init__(self):
        if self.app not in APPS:
            raise ContractError(f"unknown application {self.app!r}")
        if self.boost_alpha < 0:
            raise ContractError(f"boost_alpha must be >= 0, got {self.boost_alpha}")
        if not 0.0 < self.gamma < 1.0:
            raise ContractError(f"gamma must be in (0, 1), got {self.gamma}")
        if not self.tonemap_target_contrast > 1.0:
            raise ContractError("tonemap_target_contrast must be > 1")

    @property
    def filter_params(self) -> FilterParams:
        if self.filter is not None:
            return self.filter
        return _DEFAULT_FILTERS.get(self.app, FilterParams())


def _cfg(cfg: AppConfig | None, app: str) -> AppConfig:
    return cfg if cfg is not None else AppConfig(app=app)


def boost_detail(img, smooth, alpha: float) -> np.ndarray:
    """smooth + alpha * (img - smooth), unclamped; alpha == 1 returns img exactly."""
    i = as_image(img)
    r = as_image(smooth)
    return i + (alpha - 1.0) * (i - r)


def detail_enhance(img, cfg: AppConfig | None = None) -> np.ndarray:
    cfg = _cfg(cfg, "detail_enhance")
    r = pyramid_texture_filter(as_image(img), cfg.filter_params)
    return like_input(clamp01(boost_detail(img, r, cfg.boost_alpha)), img)


def abstraction(img, cfg: AppConfig | None = None) -> np.ndarray:
    cfg = _cfg(cfg, "abstraction")
    return pyramid_texture_filter(img, cfg.filter_params)


def inverse_halftone(img, cfg: AppConfig | None = None) -> np.ndarray:
    cfg = _cfg(cfg, "inverse_halftone")
    return pyramid_texture_filter(img, cfg.filter_params)


def ldr_enhance(img, cfg: AppConfig | None = None) -> np.ndarray:
    """Brighten a poorly lit image by dividing out a smoothed illumination map.

    The illumination is the per-pixel channel maximum, texture-filtered and
    floored at 1e-3; the output is img / illum**gamma.
    """
    cfg = _cfg(cfg, "ldr_enhance")
    i = as_image(img)
    illum = i.max(axis=2, keepdims=True)
    smooth = np.clip(pyramid_texture_filter(illum, cfg.filter_params), ILLUMINATION_FLOOR, 1.0)
    return like_input(clamp01(i / smooth ** cfg.gamma), img)


def luminance(rad: np.ndarray) -> np.ndarray:
    if rad.shape[2] == 1:
        return rad[:, :, 0].copy()
    return rad @ LUMA_WEIGHTS


class ToneLayers(NamedTuple):
    log_lum: np.ndarray
    base: np.ndarray
    detail: np.ndarray
    compressed_base: np.ndarray
    out_log_lum: np.ndarray


def tonemap_layers(hdr, cfg: AppConfig | None = None) -> ToneLayers:
    """Base/detail split of log10 luminance with the base compressed to the target contrast."""
    cfg = _cfg(cfg, "tonemap")
    rad = as_image(hdr)
    if not np.all(np.isfinite(rad)) or np.any(rad <= 0):
        raise ContractError("tone mapping needs finite, strictly positive radiance")
    log_lum = np.log10(luminance(rad))
    lo, hi = float(log_lum.min()), float(log_lum.max())
    span = hi - lo
    if span == 0.0:
        base = log_lum.copy()
    else:
        norm = (log_lum - lo) / span
        base = pyramid_texture_filter(norm, cfg.filter_params) * span + lo
    detail = log_lum - base
    base_span = float(base.max() - base.min())
    target = math.log10(cfg.tonemap_target_contrast)
    scale = min(1.0, target / base_span) if base_span > 0 else 1.0
    compressed = (base - base.max()) * scale
    return ToneLayers(log_lum, base, detail, compressed, compressed + detail)


def tonemap(hdr, cfg: AppConfig | None = None) -> np.ndarray:
    """Tone-map linear radiance to [0, 1]; colors keep their ratio to luminance."""
    layers = tonemap_layers(hdr, cfg)
    rad = as_image(hdr)
    out_lum = 10.0 ** layers.out_log_lum
    return like_input(clamp01(rad / luminance(rad)[:, :, None] * out_lum[:, :, None]), hdr)


def run_app(img, cfg: AppConfig) -> np.ndarray:
    return {
        "detail_enhance": detail_enhance,
        "abstraction": abstraction,
        "tonemap": tonemap,
        "inverse_halftone": inverse_halftone,
        "ldr_enhance": ldr_enhance,
    }[cfg.app](img, cfg)
