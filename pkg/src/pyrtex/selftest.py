"""Quick invariant checks on generated images, run by `pyrtex selftest`."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from . import synthetic
from .applications import AppConfig, boost_detail, ldr_enhance
from .bilateral import BilateralParams, jbf
from .image import max_abs_diff, psnr
from .oracle import jbf_oracle
from .psu import FilterParams, make_schedule, pyramid_texture_filter
from .pyramid import (build_gaussian_pyramid, build_laplacian_pyramid, collapse,
                      gaussian_kernel_5x5, pyramid_depth)


def _kernel(rng):
    k = gaussian_kernel_5x5()
    ok = abs(k.sum() - 1.0) < 1e-12 and np.allclose(k, k.T) and np.allclose(k, k[::-1])
    return ok, f"sum={k.sum():.15f}"


def _depth(rng):
    got = (pyramid_depth(600, 600), pyramid_depth(720, 1280), pyramid_depth(64, 64))
    return got == (4, 5, 1), f"N={got}"


def _pyramid_identity(rng):
    worst = 0.0
    for _ in range(5):
        img = rng.random((int(rng.integers(64, 160)), int(rng.integers(64, 160)), 3))
        worst = max(worst, max_abs_diff(collapse(build_laplacian_pyramid(build_gaussian_pyramid(img))), img))
    return worst <= 1e-6, f"max|diff|={worst:.2e}"


def _oracle(rng):
    worst = 0.0
    for d in (3, 5):
        a, g = rng.random((10, 10, 3)), rng.random((10, 10, 3))
        p = BilateralParams(2.0, 0.07, d)
        worst = max(worst, max_abs_diff(jbf(a, g, p), jbf_oracle(a, g, p)))
    return worst <= 1e-10, f"max|diff|={worst:.2e}"


def _constancy(rng):
    outs = [pyramid_texture_filter(np.full((64, 80, 3), c)) for c in (0.0, 0.5, 1.0)]
    ok = all(np.array_equal(o, np.full_like(o, c)) for o, c in zip(outs, (0.0, 0.5, 1.0)))
    return ok, "exact"


def _schedule(rng):
    s = make_schedule(FilterParams(5.0, 0.07), 2)
    got = (s[0].d_up, s[0].d_refine, s[1].d_up, s[1].d_refine)
    return got == (5, 21, 3, 11), f"windows={got}"


def _texture_removal(rng):
    gt = synthetic.structure_image(256, 256, seed=int(rng.integers(1 << 30)))
    tex = synthetic.add_synthetic_texture(gt, "checker", 0.2, 8)
    gain = psnr(pyramid_texture_filter(tex), gt) - psnr(tex, gt)
    return gain >= 5.0, f"gain={gain:.2f} dB"


def _applications(rng):
    img = rng.random((64, 64, 3))
    smooth = pyramid_texture_filter(img)
    ident = np.array_equal(boost_detail(img, smooth, 1.0), img)
    ldr = ldr_enhance(np.full((64, 64), 0.25), AppConfig(app="ldr_enhance"))
    err = float(np.max(np.abs(ldr - 0.25 ** 0.3)))
    return ident and err <= 1e-6, f"ldr err={err:.1e}"


CHECKS: list[tuple[str, Callable]] = [
    ("gaussian kernel", _kernel),
    ("depth rule", _depth),
    ("pyramid identity", _pyramid_identity),
    ("jbf oracle", _oracle),
    ("schedule", _schedule),
    ("constancy", _constancy),
    ("texture removal", _texture_removal),
    ("applications", _applications),
]


def run_selftest(seed: int = 0, out=print) -> bool:
    rng = np.random.default_rng(seed)
    all_ok = True
    for name, check in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = check(rng)
        except Exception as exc:  # report and keep going
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        all_ok &= bool(ok)
        out(f"{'PASS' if ok else 'FAIL'}  {name:<18} {detail}  ({time.perf_counter() - t0:.2f}s)")
    out("selftest " + ("passed" if all_ok else "FAILED"))
    return all_ok


if __name__ == "__main__":
    raise SystemExit(0 if run_selftest() else 1)
