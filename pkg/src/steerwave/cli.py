"""Command-line interface.

Exit codes: 0 success, 1 usage / IO / shape errors, 2 verification or
precondition failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .angular import (
    AngularCoeffs,
    InsufficientDesignError,
    assemble_gram,
    format_profile_csv,
    harmonic_bank,
    kernel_profile,
    optimal_coeffs,
    window_coeffs,
    zonal_bank,
)
from .designs import (
    DesignError,
    DesignParseError,
    SphericalDesign,
    builtin_design,
    builtin_names,
    resolve_design,
    read_design_points,
    verify_design,
)
from .frame import PartitionError, ShapeTooSmallError, analyze, build_frame, make_radial, synthesize
from .steering import harmonic_steering, parse_rotation, steer_pyramid, steering_kernel, steering_matrix_zonal
from .tensorio import TensorFormatError, read_pyramid, read_tensor, write_pyramid, write_tensor

log = logging.getLogger("steerwave")

EXIT_OK, EXIT_USAGE, EXIT_FAIL = 0, 1, 2

WEIGHTS = {"arccos2": lambda t: np.arccos(t) ** 2}


class CommandError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, newline="\n")


# ----------------------------------------------------------------------------
# design-verify


def cmd_design_verify(args) -> int:
    if args.builtin:
        design = resolve_design(args.builtin)
        points, label = design.points, design.source
    else:
        if args.d is None:
            raise CommandError("--file needs --d")
        try:
            points = read_design_points(args.file, args.d)
        except FileNotFoundError as exc:
            raise CommandError(f"cannot read design file: {exc}") from exc
        label = args.file
    report = verify_design(points, args.t)
    print(f"design {label}: {len(points)} points on S^{points.shape[1] - 1}, checking degrees 1..{args.t}")
    for line in report.lines():
        print("  " + line)
    if report.passed:
        print(f"PASS: {args.t}-design")
        return EXIT_OK
    print(f"FAIL: first failing degree {report.first_failure}")
    return EXIT_FAIL


# ----------------------------------------------------------------------------
# kernel


def cmd_kernel(args) -> int:
    theta = np.linspace(0.0, np.pi, args.samples)
    if args.window == "flat":
        table = np.column_stack([theta, steering_kernel(args.d, args.lmax, args.nmax, np.cos(theta))])
    else:
        if args.window == "optimal":
            problem = assemble_gram(args.d, args.lmax, WEIGHTS[args.weight])
            coeffs = optimal_coeffs(problem, args.sense)
        else:
            coeffs = window_coeffs(args.window, args.lmax, args.d)
        table = kernel_profile(coeffs, args.nmax, theta)
    _emit(format_profile_csv(table), args.out)
    return EXIT_OK


# ----------------------------------------------------------------------------
# decompose / reconstruct / steer


def _coeffs_for(args, d: int) -> AngularCoeffs:
    if args.window == "optimal":
        return optimal_coeffs(assemble_gram(d, args.lmax, WEIGHTS[args.weight]), "minimize")
    return window_coeffs(args.window, args.lmax, d)


def cmd_decompose(args) -> int:
    signal = read_tensor(args.input)
    if np.iscomplexobj(signal):
        raise CommandError("input tensor must be real (f64)")
    d = signal.ndim
    coeffs = _coeffs_for(args, d)
    design = None
    if args.bank == "zonal":
        if not args.design:
            raise CommandError("zonal bank needs --design")
        design = resolve_design(args.design, d=d, claimed_t=args.design_t)
        if design.d != d:
            raise CommandError(f"design lives on S^{design.d - 1} but the input has {d} dimensions")
        bank = zonal_bank(design, coeffs)
    else:
        bank = harmonic_bank(d, coeffs)
    frame = build_frame(signal.shape, args.scales, make_radial(args.radial), bank)
    pyramid = analyze(signal, frame)
    write_pyramid(args.out, pyramid, None if design is None else design.points)
    energy = float((signal**2).sum())
    log.info("wrote %d arrays to %s; energy %.17g (input %.17g)", pyramid.n_arrays(), args.out, pyramid.energy(), energy)
    return EXIT_OK


def frame_for_pyramid(manifest: dict, design_points) -> tuple:
    """Rebuild the frame (and design) a stored pyramid was computed with."""
    desc = manifest["bank"]
    coeffs = AngularCoeffs(desc["d"], desc["coeffs"], desc.get("window", "custom"))
    design = None
    if desc["kind"] == "zonal":
        if design_points is None:
            raise CommandError("zonal pyramid is missing its design file")
        design = SphericalDesign(design_points, desc["design_strength"], desc["design"])
        if design.checksum() != desc["design_checksum"]:
            raise CommandError("design file does not match the manifest checksum", EXIT_FAIL)
        bank = zonal_bank(design, coeffs)
    else:
        bank = harmonic_bank(desc["d"], coeffs)
    frame = build_frame(tuple(manifest["shape"]), manifest["J"], make_radial(manifest["radial"]), bank)
    return frame, design


def cmd_reconstruct(args) -> int:
    pyramid, design_points = read_pyramid(args.pyramid)
    frame, _ = frame_for_pyramid(pyramid.manifest, design_points)
    write_tensor(args.out, synthesize(pyramid, frame))
    return EXIT_OK


def _default_quad(d: int, lmax: int) -> SphericalDesign:
    if d == 2:
        return builtin_design("equiangular", 2 * lmax + 1)
    quad = builtin_design("icosahedral120")
    if quad.strength < 2 * lmax:
        raise CommandError(f"no built-in quadrature of strength {2 * lmax} on S^2; pass --quad", EXIT_FAIL)
    return quad


def cmd_steer(args) -> int:
    pyramid, design_points = read_pyramid(args.pyramid)
    frame, _ = frame_for_pyramid(pyramid.manifest, design_points)
    bank = frame.bank
    rotation = parse_rotation(args.rotation)
    if rotation.d != bank.d:
        raise CommandError(f"rotation is {rotation.d}-dimensional but the pyramid is {bank.d}-dimensional")
    if args.mode != bank.kind:
        raise CommandError(f"--mode {args.mode} does not match the pyramid's {bank.kind} bank", EXIT_FAIL)
    if args.mode == "zonal":
        steer = steering_matrix_zonal(bank, rotation)
    else:
        quad = resolve_design(args.quad, d=bank.d, claimed_t=2 * bank.lmax) if args.quad else _default_quad(bank.d, bank.lmax)
        steer = harmonic_steering(bank, rotation, quad)
    steered = steer_pyramid(pyramid, steer)
    write_pyramid(args.out, steered, design_points)
    return EXIT_OK


# ----------------------------------------------------------------------------
# selftest


def cmd_selftest(args) -> int:
    from .acceptance import format_table, run_all

    results = run_all(seed=args.seed)
    print(format_table(results, verbose=not args.brief))
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


# ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="steerwave", description="Steerable wavelet frames on d-dimensional grids.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design-verify", help="check quadrature exactness of a spherical design")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--builtin", help=f"built-in design ({', '.join(builtin_names())}; equiangular:<n>)")
    src.add_argument("--file", help="design file (n lines of d numbers, or a flat stream)")
    p.add_argument("--d", type=int, help="ambient dimension (required with --file)")
    p.add_argument("--t", type=int, required=True, help="design strength to check")
    p.set_defaults(func=cmd_design_verify)

    p = sub.add_parser("kernel", help="emit a zonal kernel profile as CSV")
    p.add_argument("--d", type=int, default=3)
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--window", choices=["cubic", "bspline1", "bspline3", "flat", "optimal"], default="cubic",
                   help="'flat' emits the steering kernel Lambda_lmax = sum_l N(d,l)/nmax P_l")
    p.add_argument("--weight", choices=sorted(WEIGHTS), default="arccos2", help="energy weight for --window optimal")
    p.add_argument("--sense", choices=["minimize", "maximize"], default="minimize")
    p.add_argument("--samples", type=int, default=721, help="number of theta samples on [0, pi]")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("decompose", help="analyze a tensor into a steerable pyramid")
    p.add_argument("--input", required=True)
    p.add_argument("--scales", "-J", type=int, required=True)
    p.add_argument("--bank", choices=["zonal", "harmonic"], default="zonal")
    p.add_argument("--design", help="built-in name, equiangular:<n>, or a design file")
    p.add_argument("--design-t", type=int, help="claimed strength when --design is a file")
    p.add_argument("--lmax", type=int, required=True)
    p.add_argument("--window", choices=["cubic", "bspline1", "bspline3", "flat", "optimal"], default="cubic")
    p.add_argument("--weight", choices=sorted(WEIGHTS), default="arccos2")
    p.add_argument("--radial", choices=["simoncelli-logcos", "meyer-smooth"], default="simoncelli-logcos")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("reconstruct", help="synthesize a tensor from a pyramid")
    p.add_argument("--pyramid", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("steer", help="rotate the channels of a pyramid")
    p.add_argument("--pyramid", required=True)
    p.add_argument("--rotation", required=True, help="angle=<rad> | axis=x,y,z;angle=<rad> | matrix CSV file")
    p.add_argument("--mode", choices=["zonal", "harmonic"], required=True)
    p.add_argument("--quad", help="quadrature design for harmonic mode (default: built-in of sufficient strength)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_steer)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--brief", action="store_true", help="one line per criterion")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InsufficientDesignError, PartitionError, DesignError) as exc:
        code = EXIT_USAGE if isinstance(exc, DesignParseError) else EXIT_FAIL
        print(f"error: {exc}", file=sys.stderr)
        return code
    except (ShapeTooSmallError, TensorFormatError, FileNotFoundError, OSError, ValueError, KeyError,
            NotImplementedError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
