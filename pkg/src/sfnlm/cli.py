"""Command-line interface: ``sfnlm <command> ...``."""

import argparse
import logging
import os
import sys

import numpy as np

from . import bench
from .fileio import read_image, write_image
from .fnlm import FrequencyParams, fnlm_filter
from .image import NoiseModel, add_gaussian_noise, psnr
from .nlm import SpatialParams, nlm_filter
from .patches import DEFAULT_A, DEFAULT_PATCH_RADIUS
from .pipeline import SfnlmConfig, fourier_better_map, sfnlm_denoise
from .spectral import forward_dft, inverse_dft


def _floats(text):
    return [float(t) for t in text.split(",") if t]


def _ints(text):
    return [int(t) for t in text.split(",") if t]


def _config_overrides(args) -> dict:
    out = {}
    for name in ("l_factor", "r", "h_factor", "d", "a", "patch_radius"):
        val = getattr(args, name, None)
        if val is not None:
            out[name] = val
    return out


def _log_magnitude(s) -> np.ndarray:
    mag = np.log1p(np.abs(s.coeffs))
    return 255.0 * mag / max(float(mag.max()), 1e-12)


def cmd_noise(args):
    u = read_image(args.input)
    v = add_gaussian_noise(u, NoiseModel(args.sigma, args.seed))
    write_image(args.output, v)
    print(f"PSNR {psnr(u, v):.2f} dB")


def cmd_denoise(args):
    v = read_image(args.input)
    a = DEFAULT_A if args.a is None else args.a
    p = DEFAULT_PATCH_RADIUS if args.patch_radius is None else args.patch_radius
    if args.dump_spectrum:
        write_image(args.dump_spectrum, _log_magnitude(forward_dft(v)))

    if args.method == "nlm":
        h = args.h if args.h is not None else args.sigma
        if h is None:
            sys.exit("denoise --method nlm needs --h or --sigma")
        d = 4.0 if args.d is None else args.d
        out = nlm_filter(v, SpatialParams(h=h, d=d, a=a, patch_radius=p))
    elif args.method == "fnlm":
        if args.l is not None:
            fp = FrequencyParams(l=args.l, r=2.0 if args.r is None else args.r, a=a, patch_radius=p)
        elif args.sigma is not None:
            fp = SfnlmConfig(sigma=args.sigma, **_config_overrides(args)).frequency_params()
        else:
            sys.exit("denoise --method fnlm needs --l or --sigma")
        out = inverse_dft(fnlm_filter(forward_dft(v), fp))
    else:
        if args.sigma is None:
            sys.exit("denoise --method sfnlm needs --sigma")
        cfg = SfnlmConfig(sigma=args.sigma, **_config_overrides(args))
        out, mid = sfnlm_denoise(v, cfg, return_intermediate=True)
        if args.dump_intermediate:
            write_image(args.dump_intermediate, mid)
    write_image(args.output, out)
    if args.reference:
        print(f"PSNR {psnr(read_image(args.reference), out):.2f} dB")


def cmd_psnr(args):
    print(f"{psnr(read_image(args.reference), read_image(args.image)):.4f}")


def cmd_map(args):
    u = read_image(args.input)
    cfg = SfnlmConfig(sigma=args.sigma, **_config_overrides(args))
    m = fourier_better_map(u, NoiseModel(args.sigma, args.seed), args.realizations, cfg)
    write_image(args.output, m)
    print(f"white fraction {np.mean(m > 0):.4f}")


def cmd_bench(args):
    report = bench.run_benchmark(
        args.corpus, methods=args.methods.split(","), sigmas=_floats(args.sigma),
        seeds=_ints(args.seeds), images=args.images.split(",") if args.images else None,
        workers=args.workers, **_config_overrides(args))
    if args.out:
        report.to_csv(args.out)
    print(report.summary())
    if args.check:
        failed = 0
        for name, ok, detail in bench.check_table(report):
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
            failed += not ok
        return 1 if failed else 0
    return 0


def cmd_house(args):
    res = bench.run_house_experiment(args.input, sigma=args.sigma, seed=args.seed,
                                     **_config_overrides(args))
    if args.outdir:
        os.makedirs(args.outdir, exist_ok=True)
        for name, img in res.images.items():
            write_image(os.path.join(args.outdir, f"house_{name}.png"), img)
    for name, val in res.psnr.items():
        print(f"{name:<8} {val:6.2f} dB")
    print(f"gain     {res.gain:6.2f} dB")
    failed = 0
    if args.sigma == 10:
        for name, ok in res.checks():
            print(f"{'PASS' if ok else 'FAIL'}  {name}")
            failed += not ok
    return 1 if failed else 0


def _add_config_args(p):
    p.add_argument("--l-factor", dest="l_factor", type=float)
    p.add_argument("--h-factor", dest="h_factor", type=float)
    p.add_argument("--r", type=float, help="half-annulus half-width (frequency units)")
    p.add_argument("--d", type=float, help="spatial search radius (pixels)")
    p.add_argument("--a", type=float, help=f"patch weight std (default {DEFAULT_A})")
    p.add_argument("--patch-radius", dest="patch_radius", type=int)


def build_parser():
    ap = argparse.ArgumentParser(prog="sfnlm", description="Space-frequency NL-means denoising")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("noise", help="add seeded white Gaussian noise")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--seed", type=int, default=1)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("denoise", help="denoise one image")
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--method", choices=bench.METHODS, default="sfnlm")
    p.add_argument("--sigma", type=float)
    p.add_argument("--h", type=float, help="spatial filtering strength (nlm)")
    p.add_argument("--l", type=float, help="frequency filtering strength (fnlm)")
    _add_config_args(p)
    p.add_argument("--dump-intermediate", help="write the frequency-stage image (sfnlm)")
    p.add_argument("--dump-spectrum", help="write log |DFT| of the input as an image")
    p.add_argument("--reference", help="clean image; prints the output PSNR")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("psnr", help="PSNR of IMAGE against REFERENCE")
    p.add_argument("reference")
    p.add_argument("image")
    p.set_defaults(func=cmd_psnr)

    p = sub.add_parser("map", help="map of pixels better restored in the Fourier domain")
    p.add_argument("input", help="clean image")
    p.add_argument("output")
    p.add_argument("--sigma", type=float, default=20.0)
    p.add_argument("--realizations", type=int, default=10)
    p.add_argument("--seed", type=int, default=1)
    _add_config_args(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("bench", help="PSNR benchmark over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--sigma", default="20", help="comma-separated noise levels")
    p.add_argument("--methods", default="nlm,fnlm,sfnlm")
    p.add_argument("--seeds", default="1")
    p.add_argument("--images", help="comma-separated image ids (default: all files)")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV report path")
    p.add_argument("--check", action="store_true",
                   help="compare with the sigma=20 reference table; exit 1 on any failure")
    _add_config_args(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("house", help="House experiment (noisy / NL-means / SFNL-means)")
    p.add_argument("input")
    p.add_argument("--sigma", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--outdir")
    _add_config_args(p)
    p.set_defaults(func=cmd_house)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args) or 0


if __name__ == "__main__":
    sys.exit(main())
