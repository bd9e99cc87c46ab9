"""Command-line front end.

    pyrtex smooth in.png out.png --sigma-s 5 --sigma-r 0.07
    pyrtex enhance in.png out.png --alpha 2.5
    pyrtex tonemap in.hdr out.png
    pyrtex bench --size 1280x720
    pyrtex selftest

Exit codes: 0 success, 1 runtime/contract/I-O error, 2 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

THREADS_ENV = "PYRTEX_THREADS"

# subcommand -> (application name, default sigma_s, default sigma_r)
FILTER_COMMANDS = {
    "smooth": (None, 5.0, 0.07),
    "enhance": ("detail_enhance", 5.0, 0.07),
    "abstract": ("abstraction", 3.0, 0.03),
    "tonemap": ("tonemap", 5.0, 0.07),
    "halftone": ("inverse_halftone", 4.0, 0.03),
    "ldr": ("ldr_enhance", 5.0, 0.07),
}


def _size(text: str) -> tuple[int, int]:
    try:
        w, h = (int(v) for v in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected WIDTHxHEIGHT, got {text!r}") from None
    if w < 1 or h < 1:
        raise argparse.ArgumentTypeError("size must be positive")
    return w, h


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV} or all cores)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pyrtex", description="Structure-preserving texture smoothing")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in FILTER_COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", type=Path)
        p.add_argument("output", type=Path)
        p.add_argument("--sigma-s", type=float, default=None)
        p.add_argument("--sigma-r", type=float, default=None)
        p.add_argument("--depth", type=int, default=None, help="override the pyramid depth")
        p.add_argument("--force", action="store_true",
                       help="accept sigmas outside sigma_s in [3, 15], sigma_r in [0.02, 0.09]")
        _add_common(p)
        if name == "smooth":
            p.add_argument("--variant", choices=("standard", "laplacian_first"), default="standard")
            p.add_argument("--dump-pyramid", type=Path, metavar="DIR")
            p.add_argument("--dump-intermediate", type=Path, metavar="DIR")
        if name == "enhance":
            p.add_argument("--alpha", type=float, default=2.5)
        if name == "ldr":
            p.add_argument("--gamma", type=float, default=0.7)
        if name == "tonemap":
            p.add_argument("--target-contrast", type=float, default=5.0)
    bench = sub.add_parser("bench", help="time the default filter on a generated image")
    bench.add_argument("--size", type=_size, default=(1280, 720), metavar="WxH")
    bench.add_argument("--repeat", type=int, default=1)
    bench.add_argument("--output", type=Path, default=None, help="also save the filtered image")
    _add_common(bench)
    st = sub.add_parser("selftest", help="run built-in invariant checks")
    _add_common(st)
    return parser


def _validate(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    threads = args.threads
    if threads is None and os.environ.get(THREADS_ENV):
        try:
            threads = int(os.environ[THREADS_ENV])
        except ValueError:
            parser.error(f"${THREADS_ENV} must be an integer")
    if threads is not None and threads < 1:
        parser.error("--threads must be >= 1")
    args.threads = threads
    if args.command not in FILTER_COMMANDS:
        if args.command == "bench" and args.repeat < 1:
            parser.error("--repeat must be >= 1")
        return
    _, default_s, default_r = FILTER_COMMANDS[args.command]
    args.sigma_s = default_s if args.sigma_s is None else args.sigma_s
    args.sigma_r = default_r if args.sigma_r is None else args.sigma_r
    if args.sigma_s <= 0 or args.sigma_r <= 0:
        parser.error("sigmas must be positive")
    if not args.force and not (3.0 <= args.sigma_s <= 15.0 and 0.02 <= args.sigma_r <= 0.09):
        parser.error(f"sigma_s={args.sigma_s}, sigma_r={args.sigma_r} outside "
                     "[3, 15] x [0.02, 0.09]; pass --force to use them anyway")
    if args.depth is not None and args.depth < 1:
        parser.error("--depth must be >= 1")
    if getattr(args, "alpha", 0.0) < 0:
        parser.error("--alpha must be >= 0")
    if not 0.0 < getattr(args, "gamma", 0.5) < 1.0:
        parser.error("--gamma must be in (0, 1)")
    if getattr(args, "target_contrast", 5.0) <= 1.0:
        parser.error("--target-contrast must be > 1")


def _set_threads(n: int | None) -> int:
    # numba caps the pool size at import time, so raise the cap first.
    if n is not None and "numba" not in sys.modules:
        cur = int(os.environ.get("NUMBA_NUM_THREADS", "0") or 0)
        os.environ["NUMBA_NUM_THREADS"] = str(max(cur, n, os.cpu_count() or 1))
    import numba

    from . import bilateral  # noqa: F401  (selects the threading layer before the pool starts)

    if n is None:
        return numba.get_num_threads()
    usable = min(n, numba.config.NUMBA_NUM_THREADS)
    if usable < n:
        print(f"warning: only {usable} threads available", file=sys.stderr)
    numba.set_num_threads(usable)
    return usable


def _dump_pyramid(directory: Path, gp, lp) -> None:
    from .image import save_image

    directory.mkdir(parents=True, exist_ok=True)
    n = len(gp) - 1
    for k, (g, lap) in enumerate(zip(gp, lp)):
        save_image(g, directory / f"G{k}.png")
        save_image(lap if k == n else lap + 0.5, directory / f"L{k}.png")


def _run_filter(args: argparse.Namespace) -> int:
    from .applications import AppConfig, run_app
    from .image import load_hdr, load_image, save_image
    from .psu import FilterParams, pyramid_texture_filter
    from .pyramid import build_gaussian_pyramid, build_laplacian_pyramid

    app, _, _ = FILTER_COMMANDS[args.command]
    params = FilterParams(args.sigma_s, args.sigma_r, args.depth, getattr(args, "variant", "standard"))
    if app == "tonemap":
        img = load_hdr(args.input)
    else:
        img = load_image(args.input)

    if app is None:
        gp = build_gaussian_pyramid(img, params.depth_override)
        lp = build_laplacian_pyramid(gp)
        if args.dump_pyramid:
            _dump_pyramid(args.dump_pyramid, gp, lp)
        callback = None
        if args.dump_intermediate:
            args.dump_intermediate.mkdir(parents=True, exist_ok=True)

            def callback(k, r):
                save_image(r, args.dump_intermediate / f"R{k}.png")

        out = pyramid_texture_filter(img, params, callback=callback, pyramids=(gp, lp))
    else:
        cfg = AppConfig(
            app=app,
            filter=params,
            boost_alpha=getattr(args, "alpha", 2.5),
            gamma=getattr(args, "gamma", 0.7),
            tonemap_target_contrast=getattr(args, "target_contrast", 5.0),
        )
        out = run_app(img, cfg)
    save_image(out, args.output)
    return 0


def bench_image(width: int, height: int, seed: int = 0):
    from . import synthetic

    base = synthetic.structure_image(height, width, seed=seed)
    tex = synthetic.add_synthetic_texture(base, "noise-dots", 0.2, 8, seed=seed)
    return synthetic.add_gaussian_noise(tex, 0.02, seed=seed)


def _run_bench(args: argparse.Namespace, threads: int) -> int:
    from .image import save_image
    from .psu import FilterParams, pyramid_texture_filter

    w, h = args.size
    img = bench_image(w, h, args.seed)
    t0 = time.perf_counter()
    # Compile the kernels outside the timed region.
    pyramid_texture_filter(img[:16, :16], FilterParams(depth_override=1))
    warmup = time.perf_counter() - t0
    times = []
    for _ in range(args.repeat):
        t0 = time.perf_counter()
        out = pyramid_texture_filter(img)
        times.append(time.perf_counter() - t0)
    best = min(times)
    print(f"size {w}x{h}  threads {threads}  warmup {warmup:.2f}s")
    print(f"time {best:.3f}s (best of {args.repeat})  {w * h / 1e6 / best:.3f} MP/s")
    if args.output:
        save_image(out, args.output)
    return 0


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(parser, args)
    try:
        threads = _set_threads(args.threads)
        if args.command == "bench":
            return _run_bench(args, threads)
        if args.command == "selftest":
            from .selftest import run_selftest

            return 0 if run_selftest(args.seed) else 1
        return _run_filter(args)
    except (ValueError, OSError) as exc:
        print(f"pyrtex: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
