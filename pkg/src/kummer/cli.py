"""Command-line driver: ``kummer verify|simulate|compare|surface``.

Exit codes: 0 success, 1 failed checks (or a gap above tolerance), 2 invalid
flags, 3 empty level-set intersection, 4 integration stopped early.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .errors import KummerError
from .integrate import IntegratorConfig, full_field, integrate, monitor, reduced_field
from .lie_algebra import casimir_c2, casimir_c3
from .momentum import algebra_for, j_resonant
from .reduction import (monomial_reduced, preset_full_hamiltonian, preset_reduced_hamiltonian,
                        preset_signature)
from .resonance import ResonanceSignature, r_invariant
from .surface import EmptyIntersection, sphere_mesh, trace_level_curve, write_obj
from .verify import PRESET_SIGNATURES, REDUCTION_DEFAULTS, check_reduction_commutes, run_suite

log = logging.getLogger("kummer")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EMPTY, EXIT_EARLY = 0, 1, 2, 3, 4
COMPARE_TOL = {"res12": 1e-6, "res112": 1e-5, "harmonic": 1e-8}
SURFACE_TOL = 1e-9


class UsageError(Exception):
    """Flag combination rejected after parsing; maps to exit 2."""


# -- flag parsers ----------------------------------------------------------------

def _signature(text: str) -> ResonanceSignature:
    try:
        return ResonanceSignature.parse(text)
    except (KummerError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _complex_vector(text: str) -> np.ndarray:
    """``re,im:re,im:...`` -> complex array."""
    out = []
    for part in text.split(":"):
        fields = part.split(",")
        if len(fields) != 2:
            raise argparse.ArgumentTypeError(f"expected re,im pairs joined by ':', got {part!r}")
        try:
            out.append(complex(float(fields[0]), float(fields[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number in {part!r}") from None
    return np.array(out)


def _reals(text: str) -> np.ndarray:
    try:
        return np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _span(text: str):
    try:
        t0, t1 = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected t0:t1, got {text!r}") from None
    if not t1 > t0:
        raise argparse.ArgumentTypeError("t-span must be increasing")
    return t0, t1


def _positive(text: str) -> float:
    val = float(text)
    if not val > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return val


# -- output ----------------------------------------------------------------------

def _fmt(x) -> str:
    return "%.17g" % x


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    def default(o):
        if isinstance(o, np.ndarray):
            return o.tolist()
        if isinstance(o, np.generic):
            return o.item()
        raise TypeError(type(o).__name__)

    return json.dumps(obj, indent=2, default=default) + "\n"


def _table(header: Sequence[str], rows: np.ndarray, status: str, message: str) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(x) for x in row])
    buf.write(f"# status,{status}" + (f",{message}" if message else "") + "\n")
    return buf.getvalue()


# -- verify ----------------------------------------------------------------------

def cmd_verify(args) -> int:
    seed = args.seed
    env = os.environ.get("RESONANCE_SEED")
    if env is not None:
        try:
            seed = int(env)
        except ValueError:
            raise UsageError(f"RESONANCE_SEED must be an integer, got {env!r}") from None
    sigs = [ResonanceSignature(s) for s in PRESET_SIGNATURES] if args.all else [args.sig]
    reports = [run_suite(s, seed=seed, n_points=args.points, n_identity_points=args.identity_points)
               for s in sigs]
    for rep in reports:
        for chk in rep["checks"]:
            if not chk["pass"]:
                log.error("%s %s: residual %.3e > %.3e", rep["signature"], chk["name"],
                          chk["max_residual"], chk["tolerance"])
    _emit(_json(reports if args.all else reports[0]), args.out)
    return EXIT_OK if all(r["pass"] for r in reports) else EXIT_FAIL


# -- simulate / compare ------------------------------------------------------------

def _resolve_problem(args):
    """Signature, full and reduced Hamiltonians, and y0 for a preset and flags."""
    if args.preset == "harmonic":
        if args.freqs is None:
            raise UsageError("harmonic preset needs --freqs")
        sig = args.sig or ResonanceSignature(tuple([1] * len(args.freqs)))
        if len(args.freqs) != sig.d:
            raise UsageError(f"--freqs has {len(args.freqs)} entries for a {sig.d}-dimensional signature")
        H = preset_full_hamiltonian("harmonic", args.freqs)

        def reduced():
            return preset_reduced_hamiltonian("harmonic", sig, args.freqs)
    else:
        sig = preset_signature(args.preset)
        if args.sig is not None and args.sig != sig:
            raise UsageError(f"preset {args.preset} uses signature {sig}, got --sig {args.sig}")
        H = preset_full_hamiltonian(args.preset)

        def reduced():
            return preset_reduced_hamiltonian(args.preset)

    y0 = args.y0
    if y0 is None:
        if args.preset not in REDUCTION_DEFAULTS:
            raise UsageError(f"preset {args.preset} needs --y0")
        y0 = np.asarray(REDUCTION_DEFAULTS[args.preset]["y0"], dtype=complex)
    if y0.size != sig.d:
        raise UsageError(f"--y0 has {y0.size} coordinates, signature {sig} needs {sig.d}")
    return sig, H, reduced, y0


def _config(args, default_span):
    try:
        return IntegratorConfig(t_span=args.t or default_span, method=args.method, atol=args.atol,
                                rtol=args.rtol, dt=args.dt, n_out=args.n_out)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_simulate(args) -> int:
    sig, H, reduced, y0 = _resolve_problem(args)
    cfg = _config(args, (0.0, 5.0))
    if args.space == "full":
        traj = integrate(full_field(H, sig.weights), y0, cfg,
                         monitors={"R": lambda a: r_invariant(sig, a), "H": H})
        header = ["t"] + [f"{p}_a{j + 1}" for j in range(sig.d) for p in ("re", "im")] + ["R", "H"]
        coords = np.empty((len(traj.times), 2 * sig.d))
        coords[:, 0::2], coords[:, 1::2] = traj.states.real, traj.states.imag
        body = np.column_stack([traj.times, coords, traj.monitors["R"], traj.monitors["H"]])
    else:
        try:
            h = reduced()
        except (KummerError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        alg = algebra_for(sig)
        mu0 = j_resonant(sig, y0)
        mons = {"norm": np.linalg.norm, "h": h, "C2": lambda mu: casimir_c2(alg, mu)}
        if alg.d == 3:
            mons["C3"] = lambda mu: casimir_c3(alg, mu)
        traj = integrate(reduced_field(alg, h), mu0, cfg, monitors=mons)
        header = ["t"] + [f"mu{j + 1}" for j in range(alg.dim)] + list(mons)
        body = np.column_stack([traj.times, traj.states] + [traj.monitors[k] for k in mons])

    if args.format == "json":
        text = _json({"preset": args.preset, "space": args.space, "signature": list(sig.n),
                      "columns": header, "rows": body, "status": traj.status, "message": traj.message,
                      "drift": monitor(traj)})
    else:
        text = _table(header, body, traj.status, traj.message)
    _emit(text, args.out)
    return EXIT_OK if traj.ok else EXIT_EARLY


def cmd_compare(args) -> int:
    sig, H, reduced, y0 = _resolve_problem(args)
    try:
        h = reduced()
    except (KummerError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    default_span = REDUCTION_DEFAULTS.get(args.preset, {}).get("t_span", (0.0, 1.0))
    cfg = _config(args, default_span)
    cmp = check_reduction_commutes(sig, H, h, y0, cfg)
    tol = args.tol if args.tol is not None else COMPARE_TOL[args.preset]
    passed = bool(cmp.ok and cmp.gap <= tol)
    report = {"preset": args.preset, "signature": list(sig.n), "t_span": list(cfg.t_span),
              "gap": cmp.gap, "tolerance": tol, "pass": passed,
              "status": "ok" if cmp.ok else cmp.message,
              "min_coordinate": cmp.min_coordinate, "min_domain_margin": cmp.min_domain_margin,
              "times": cmp.times, "series": cmp.series}
    _emit(_json(report), args.out)
    log.info("gap %.3e (tolerance %.1e)", cmp.gap, tol)
    if not cmp.ok:
        return EXIT_EARLY
    return EXIT_OK if passed else EXIT_FAIL


# -- surface -------------------------------------------------------------------

def cmd_surface(args) -> int:
    sig = args.sig
    if sig.d != 2 or sig.mixed:
        raise UsageError("surface needs a positive two-dimensional signature")
    if args.n_lat < 2 or args.n_lon < 3:
        raise UsageError("--n-lat must be >= 2 and --n-lon >= 3")
    h = preset_reduced_hamiltonian("res12") if sig.n == (1, 2) else monomial_reduced(sig)
    try:
        curve = trace_level_curve(h, args.r, args.h0)
    except EmptyIntersection as exc:
        print(f"empty intersection: {exc}", file=sys.stderr)
        return EXIT_EMPTY

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    V, faces = sphere_mesh(args.r, args.n_lat, args.n_lon)
    write_obj(out_dir / "sphere.obj", V, faces)

    res_r, res_h = curve.residuals(h)
    rows = []
    for c, comp in enumerate(curve.components):
        for mu in comp:
            rows.append([c, *mu])
    with open(out_dir / "curve.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["component", "mu1", "mu2", "mu3"])
        for row in rows:
            w.writerow([row[0]] + [_fmt(x) for x in row[1:]])

    mesh_err = float(np.max(np.abs(np.linalg.norm(V, axis=1) - args.r)))
    summary = {"signature": list(sig.n), "r": args.r, "h0": args.h0,
               "components": len(curve.components), "points": len(rows),
               "max_norm_residual": float(res_r.max()), "max_level_residual": float(res_h.max()),
               "mesh_radius_error": mesh_err,
               "files": [str(out_dir / "sphere.obj"), str(out_dir / "curve.csv")]}
    sys.stdout.write(_json(summary))
    ok = max(res_r.max(), res_h.max()) <= SURFACE_TOL and mesh_err <= 1e-12
    return EXIT_OK if ok else EXIT_FAIL


# -- parser --------------------------------------------------------------------

def _add_dynamics_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--preset", required=True, choices=("res12", "res112", "harmonic"))
    p.add_argument("--sig", type=_signature, help="resonance signature, e.g. 1,2")
    p.add_argument("--y0", type=_complex_vector, help="initial point as re,im:re,im:...")
    p.add_argument("--t", type=_span, help="time span t0:t1")
    p.add_argument("--freqs", type=_reals, help="harmonic frequencies, comma-separated")
    p.add_argument("--method", choices=("rk45", "rk4"), default="rk45")
    p.add_argument("--atol", type=_positive, default=1e-10)
    p.add_argument("--rtol", type=_positive, default=1e-10)
    p.add_argument("--dt", type=_positive, help="fixed step for rk4")
    p.add_argument("--n-out", type=int, default=201, help="number of output samples")
    p.add_argument("--out", help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kummer", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the verification suites")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--sig", type=_signature)
    which.add_argument("--all", action="store_true", help="run every preset signature")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (RESONANCE_SEED overrides)")
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--identity-points", type=int, default=1000)
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="integrate a preset in full or reduced space")
    _add_dynamics_flags(p)
    p.add_argument("--space", choices=("full", "reduced"), default="full")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="gap between J(a(t)) and the reduced flow mu(t)")
    _add_dynamics_flags(p)
    p.add_argument("--tol", type=_positive, help="gap tolerance (default depends on preset)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("surface", help="sphere mesh and level-set curve data")
    p.add_argument("--sig", type=_signature, default=ResonanceSignature((1, 2)))
    p.add_argument("--r", type=_positive, default=1.0)
    p.add_argument("--h0", type=float, default=0.0)
    p.add_argument("--n-lat", type=int, default=24)
    p.add_argument("--n-lon", type=int, default=48)
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_surface)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "n_out", 2) is not None and getattr(args, "n_out", 2) < 2:
        parser.error("--n-out must be at least 2")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except KummerError as exc:  # e.g. an initial point outside the domain
        parser.error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
