"""Slow reference implementations used to cross-check the fast paths.

Nothing here is used by the filtering pipeline itself.
"""

from __future__ import annotations

import math

import numpy as np

from .bilateral import BilateralParams, _check_pair
from .image import as_image, like_input


def jbf_oracle(src, guide, p: BilateralParams) -> np.ndarray:
    """Joint bilateral filter as a plain per-pixel loop over the window."""
    s, g = as_image(src), as_image(guide)
    _check_pair(s, g)
    h, w, c = s.shape
    r = p.window_d // 2
    out = np.zeros_like(s)
    for y in range(h):
        for x in range(w):
            num = [0.0] * c
            k = 0.0
            for qy0 in range(y - r, y + r + 1):
                for qx0 in range(x - r, x + r + 1):
                    qy = min(max(qy0, 0), h - 1)
                    qx = min(max(qx0, 0), w - 1)
                    ds = math.hypot(y - qy0, x - qx0)
                    dr = math.sqrt(sum((g[y, x, i] - g[qy, qx, i]) ** 2 for i in range(g.shape[2])))
                    wgt = math.exp(-ds * ds / (2 * p.sigma_s ** 2)) * math.exp(-dr * dr / (2 * p.sigma_r ** 2))
                    k += wgt
                    for ch in range(c):
                        num[ch] += wgt * s[qy, qx, ch]
            for ch in range(c):
                out[y, x, ch] = num[ch] / k
    return like_input(out, src)


def truncated_gaussian_blur(src, sigma_s: float, d: int) -> np.ndarray:
    """Normalized d x d Gaussian blur with replicated borders (constant-guide JBF)."""
    s = as_image(src)
    r = d // 2
    p = np.pad(s, ((r, r), (r, r), (0, 0)), mode="edge")
    h, w = s.shape[:2]
    num = np.zeros_like(s)
    den = 0.0
    for dy in range(-r, r + 1):
        for dx in range(-r, r + 1):
            wgt = math.exp(-(dx * dx + dy * dy) / (2 * sigma_s ** 2))
            num += wgt * p[r + dy : r + dy + h, r + dx : r + dx + w]
            den += wgt
    return like_input(num / den, src)
