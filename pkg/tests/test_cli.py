import os
import subprocess
import sys

import numpy as np
import pytest

from pyrtex import synthetic
from pyrtex.cli import run
from pyrtex.image import load_image, save_hdr, save_image


@pytest.fixture(scope="module")
def textured(tmp_path_factory):
    path = tmp_path_factory.mktemp("cli") / "in.png"
    gt = synthetic.structure_image(96, 128, seed=3)
    save_image(synthetic.add_synthetic_texture(gt, "checker", 0.2, 6), path)
    return path


def _cli(*args, env=None):
    full_env = dict(os.environ, **(env or {}))
    return subprocess.run([sys.executable, "-m", "pyrtex", *map(str, args)],
                          capture_output=True, text=True, env=full_env)


def test_smooth_writes_output(textured, tmp_path):
    out = tmp_path / "out.png"
    assert run(["smooth", str(textured), str(out), "--sigma-s", "5", "--sigma-r", "0.07"]) == 0
    img = load_image(out)
    assert img.shape == (96, 128, 3)


def test_out_of_range_sigma_is_usage_error(textured, tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        run(["smooth", str(textured), str(tmp_path / "o.png"), "--sigma-r", "0.5"])
    assert exc.value.code == 2
    assert "--force" in capsys.readouterr().err


def test_force_accepts_out_of_range(textured, tmp_path):
    assert run(["smooth", str(textured), str(tmp_path / "o.png"), "--sigma-r", "0.5", "--force"]) == 0


@pytest.mark.parametrize("flags", [["--threads", "0"], ["--depth", "0"], ["--sigma-s", "-2", "--force"]])
def test_bad_flags(textured, tmp_path, flags):
    with pytest.raises(SystemExit) as exc:
        run(["smooth", str(textured), str(tmp_path / "o.png"), *flags])
    assert exc.value.code == 2


def test_missing_input_exit_one(tmp_path, capsys):
    assert run(["smooth", str(tmp_path / "missing.png"), str(tmp_path / "o.png")]) == 1
    assert "error" in capsys.readouterr().err


def test_small_image_without_depth_exit_one(tmp_path, capsys):
    src = tmp_path / "small.pgm"
    save_image(np.full((20, 20), 0.5), src)
    assert run(["smooth", str(src), str(tmp_path / "o.pgm")]) == 1
    assert "depth_override" in capsys.readouterr().err
    assert run(["smooth", str(src), str(tmp_path / "o.pgm"), "--depth", "1"]) == 0


def test_dumps(textured, tmp_path):
    pyr, inter = tmp_path / "pyr", tmp_path / "inter"
    assert run(["smooth", str(textured), str(tmp_path / "o.png"),
                "--dump-pyramid", str(pyr), "--dump-intermediate", str(inter)]) == 0
    assert sorted(p.name for p in pyr.iterdir()) == ["G0.png", "G1.png", "G2.png", "L0.png", "L1.png", "L2.png"]
    assert sorted(p.name for p in inter.iterdir()) == ["R0.png", "R1.png", "R2.png"]
    assert np.array_equal(load_image(inter / "R0.png"), load_image(tmp_path / "o.png"))


@pytest.mark.parametrize("cmd,extra", [("enhance", ["--alpha", "2.5"]), ("abstract", []),
                                       ("halftone", []), ("ldr", ["--gamma", "0.7"])])
def test_app_commands(textured, tmp_path, cmd, extra):
    out = tmp_path / f"{cmd}.png"
    assert run([cmd, str(textured), str(out), *extra]) == 0
    assert load_image(out).shape == (96, 128, 3)


def test_tonemap_command(tmp_path):
    src, out = tmp_path / "in.pfm", tmp_path / "tm.png"
    save_hdr(synthetic.hdr_ramp(64, 96), src)
    assert run(["tonemap", str(src), str(out)]) == 0
    assert load_image(out).shape == (64, 96, 3)


def test_deterministic_output(textured, tmp_path):
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    run(["smooth", str(textured), str(a)])
    run(["smooth", str(textured), str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_thread_count_independence(textured, tmp_path):
    a, b, c = tmp_path / "t1.ppm", tmp_path / "t4.ppm", tmp_path / "env.ppm"
    r1 = _cli("smooth", textured, a, "--threads", "1")
    r4 = _cli("smooth", textured, b, "--threads", "4")
    renv = _cli("smooth", textured, c, env={"PYRTEX_THREADS": "3"})
    assert r1.returncode == r4.returncode == renv.returncode == 0, r4.stderr + renv.stderr
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_bench_prints_throughput():
    r = _cli("bench", "--size", "128x96", "--threads", "2")
    assert r.returncode == 0, r.stderr
    assert "MP/s" in r.stdout and "threads 2" in r.stdout


def test_selftest_passes():
    r = _cli("selftest")
    assert r.returncode == 0, r.stdout
    assert "selftest passed" in r.stdout
    assert "FAIL" not in r.stdout
