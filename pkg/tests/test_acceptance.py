"""Exit criteria for the filter, one test per criterion.

Each test records a PASS/FAIL line that is printed in the pytest terminal
summary. Tolerances are fixed here and never tuned at run time.
"""

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from pyrtex import synthetic
from pyrtex.applications import AppConfig, boost_detail, inverse_halftone, ldr_enhance
from pyrtex.bilateral import BilateralParams, jbf
from pyrtex.cli import bench_image
from pyrtex.image import max_abs_diff, psnr
from pyrtex.oracle import jbf_oracle
from pyrtex.psu import FilterParams, pyramid_texture_filter
from pyrtex.pyramid import (build_gaussian_pyramid, build_laplacian_pyramid, collapse, pyramid_depth,
                            upsample_bilinear)

CORPUS_SIZE = (512, 512)
CORPUS_COUNT = 6


def report(number: int, name: str, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {name}: {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def corpus():
    """Structure-only scenes with an amplitude 0.2, period 8 checker, plus filter outputs."""
    rows = []
    for i, (gt, tex) in enumerate(synthetic.textured_corpus(CORPUS_COUNT, CORPUS_SIZE, seed=100)):
        out = pyramid_texture_filter(tex)
        rows.append(dict(gt=gt, tex=tex, out=out, seed=i))
    return rows


def test_01_pyramid_identity():
    rng = np.random.default_rng(2024)
    images = [rng.random((int(rng.integers(64, 300)), int(rng.integers(64, 300)), int(rng.choice([1, 3]))))
              for _ in range(20)]
    images += [synthetic.add_synthetic_texture(synthetic.structure_image(h, w, seed=s), p, 0.2, 8, seed=s)
               for s, (h, w, p) in enumerate([(600, 600, "checker"), (720, 1280, "stripes"),
                                              (256, 256, "noise-dots"), (300, 451, "checker"),
                                              (64, 64, "stripes")])]
    t0 = time.perf_counter()
    worst = max(max_abs_diff(collapse(build_laplacian_pyramid(build_gaussian_pyramid(img))), img)
                for img in images)
    elapsed = time.perf_counter() - t0
    report(1, "pyramid identity", worst <= 1e-6 and elapsed < 10.0,
           f"max|diff|={worst:.2e} (<=1e-6) over 25 images in {elapsed:.2f}s (<10s)")


def test_02_depth_rule():
    got = []
    for h, w in ((600, 600), (720, 1280), (64, 64)):
        gp = build_gaussian_pyramid(np.zeros((h, w)))
        got.append((pyramid_depth(h, w), len(gp) - 1, gp[-1].shape[:2]))
    ok = got == [(4, 4, (38, 38)), (5, 5, (23, 40)), (1, 1, (32, 32))]
    report(2, "depth rule", ok, f"(N, levels, coarsest) = {got}")


def test_03_jbf_oracle_equivalence():
    rng = np.random.default_rng(7)
    combos = [(s, r, d) for s in (1.0, 2.0, 5.0) for r in (0.02, 0.07) for d in (3, 5, 9)]
    worst = 0.0
    for i in range(50):
        s, r, d = combos[i % len(combos)]
        x, g = rng.random((16, 16, 3)), rng.random((16, 16, 3))
        p = BilateralParams(s, r, d)
        worst = max(worst, max_abs_diff(jbf(x, g, p), jbf_oracle(x, g, p)))
    report(3, "jbf oracle equivalence", worst <= 1e-10, f"max|diff|={worst:.2e} (<=1e-10) over 50 pairs")


def test_04_constancy():
    bad = []
    for c in (0.0, 0.5, 1.0):
        out = pyramid_texture_filter(np.full((150, 200, 3), c))
        if not np.array_equal(out, np.full_like(out, c)):
            bad.append(c)
    report(4, "constancy", not bad, "exact for c in {0, 0.5, 1}" if not bad else f"failed for {bad}")


def test_05_synthetic_ground_truth(corpus):
    gains, margins = [], []
    for row in corpus:
        gt, tex, out = row["gt"], row["tex"], row["out"]
        coarsest = build_gaussian_pyramid(tex)[-1]
        bilinear = upsample_bilinear(coarsest, *gt.shape[:2])
        gains.append(psnr(out, gt) - psnr(tex, gt))
        margins.append(psnr(out, gt) - psnr(bilinear, gt))
    ok = min(gains) >= 5.0 and min(margins) >= 3.0
    report(5, "synthetic ground truth", ok,
           f"min gain over input {min(gains):.2f} dB (>=5), min gain over bilinear G_N {min(margins):.2f} dB (>=3)")


def test_06_ablation_ordering(corpus):
    wins = 0
    for row in corpus:
        variant = pyramid_texture_filter(row["tex"], FilterParams(variant="laplacian_first"))
        wins += psnr(variant, row["gt"]) < psnr(row["out"], row["gt"])
    frac = wins / len(corpus)
    report(6, "ablation ordering", frac >= 0.8, f"variant worse on {wins}/{len(corpus)} images (>=80%)")


def test_07_resmoothing_stability(corpus):
    worst = max(float(np.mean(np.abs(pyramid_texture_filter(row["out"]) - row["out"]))) for row in corpus)
    report(7, "re-smoothing stability", worst <= 0.01, f"max mean|diff|={worst:.4f} (<=0.01)")


def test_08_noise_robustness(corpus):
    worst = min(psnr(row["out"], pyramid_texture_filter(synthetic.add_gaussian_noise(row["tex"], 0.02, seed=row["seed"])))
                for row in corpus)
    report(8, "noise robustness", worst >= 30.0, f"min PSNR={worst:.2f} dB (>=30)")


def test_09_depth_sweep_trend():
    pairs = synthetic.textured_corpus(4, CORPUS_SIZE, pattern="checker", amplitude=0.2, period=32, seed=200)
    rule = pyramid_depth(*CORPUS_SIZE)
    means = {}
    for depth in (2, rule):
        means[depth] = float(np.mean([psnr(pyramid_texture_filter(tex, FilterParams(depth_override=depth)), gt)
                                      for gt, tex in pairs]))
    report(9, "depth sweep trend", means[rule] > means[2],
           f"mean GT-PSNR depth {rule}: {means[rule]:.3f} dB > depth 2: {means[2]:.3f} dB")


_THREADED_RUN = """
import sys, numpy as np, numba
numba.set_num_threads(4)
from pyrtex.cli import bench_image
from pyrtex.psu import pyramid_texture_filter
np.save(sys.argv[1], pyramid_texture_filter(bench_image(1280, 720, seed=0)))
"""


def test_10_performance(tmp_path):
    import numba

    img = bench_image(1280, 720, seed=0)
    pyramid_texture_filter(img[:16, :16], FilterParams(depth_override=1))  # compile outside the timing
    prev = numba.get_num_threads()
    numba.set_num_threads(1)
    try:
        t0 = time.perf_counter()
        single = pyramid_texture_filter(img)
        elapsed = time.perf_counter() - t0
    finally:
        numba.set_num_threads(prev)
    sane = single.shape == img.shape and np.all(np.isfinite(single)) and single.min() >= 0 and single.max() <= 1
    npy = tmp_path / "threaded.npy"
    env = dict(os.environ, NUMBA_NUM_THREADS="4")
    proc = subprocess.run([sys.executable, "-c", _THREADED_RUN, str(npy)], env=env, capture_output=True, text=True)
    identical = proc.returncode == 0 and np.array_equal(np.load(npy), single)
    report(10, "performance", elapsed <= 10.0 and sane and identical,
           f"1280x720 single-thread {elapsed:.2f}s (<=10s), 4-thread output identical={identical}")


def test_11_application_identities():
    rng = np.random.default_rng(11)
    img = rng.random((96, 128, 3))
    smooth = pyramid_texture_filter(img)
    identity = np.array_equal(boost_detail(img, smooth, 1.0), img)
    ldr = ldr_enhance(np.full((64, 64, 3), 0.25), AppConfig(app="ldr_enhance"))
    ldr_err = float(np.max(np.abs(ldr - 0.25 ** 0.3)))
    ramp = synthetic.gray_ramp(256, 256)
    dith = synthetic.bayer_dither(ramp)
    gain = psnr(inverse_halftone(dith), ramp) - psnr(dith, ramp)
    ok = identity and ldr_err <= 1e-6 and gain >= 10.0
    report(11, "application identities", ok,
           f"alpha=1 exact={identity}, ldr err={ldr_err:.1e} (<=1e-6), halftone gain={gain:.2f} dB (>=10)")
