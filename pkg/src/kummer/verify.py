"""Numerical certification of the structural claims at sampled points.

Every check returns a :class:`CheckResult`; :func:`run_suite` bundles them
into a JSON-ready report for one signature.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import KummerError
from .integrate import IntegratorConfig, Trajectory, full_field, integrate, reduced_field
from .lie_algebra import LieAlgebra, random_group_element
from .momentum import (
    algebra_for, equivariance_residual, j_closed_form, j_resonant, j_resonant_real_jacobian,
    j_unit, kummer_residual,
)
from .phase_space import (
    ScalarField, from_real, poisson_bracket, random_quadratic_field, symplectic_matrix, to_real,
)
from .reduction import (
    DualFunction, linear_function, lie_poisson_bracket, preset_full_hamiltonian,
    preset_reduced_hamiltonian, quadratic_function,
)
from .resonance import (
    ResonanceSignature, _sig, circle_generator, f_map, f_real_jacobian, r_gradient_real,
    r_invariant, random_points,
)

log = logging.getLogger(__name__)

PRESET_SIGNATURES = [(1, 1), (1, 2), (2, 3), (3, 5), (1, -1), (2, -3), (1, 1, 2)]

SVD_RTOL = 1e-9

TOL = {
    "kummer_surface": 1e-12,
    "kummer_norm": 1e-12,
    "hyperbolic_sheet": 0.0,
    "r_commutation": 1e-14,
    "j_commutation": 1e-14,
    "j_closed_form": 1e-13,
    "f_fibers": 1e-13,
    "f_jacobian_fd": 1e-7,
    "f_poisson": 1e-6,
    "f_local_symplectic": 1e-10,
    "j_poisson": 1e-6,
    "dual_pair_dims": 0.0,
    "dual_pair_pairing": 1e-8,
    "generator_alignment": 1e-6,
    "equivariance": 1e-12,
}

REDUCTION_DEFAULTS = {
    "res12": {"y0": (1.0, 0.5), "t_span": (0.0, 2.0), "tol": 1e-6},
    "res112": {"y0": (1.0, 0.8, 0.6), "t_span": (0.0, 0.5), "tol": 1e-5},
}


@dataclass
class CheckResult:
    name: str
    n_points: int
    max_residual: float
    tolerance: float
    residuals: np.ndarray = field(default=None, repr=False)
    info: Dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(np.isfinite(self.max_residual) and self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        out = {"name": self.name, "n_points": self.n_points,
               "max_residual": float(self.max_residual), "tolerance": self.tolerance,
               "pass": self.passed}
        if self.info:
            out["info"] = self.info
        return out


def _result(name, residuals, tol=None, **info) -> CheckResult:
    residuals = np.atleast_1d(np.asarray(residuals, dtype=float))
    mx = float(np.max(residuals)) if residuals.size else float("nan")
    return CheckResult(name, int(residuals.size), mx, TOL[name] if tol is None else tol, residuals, info)


# -- Poisson maps ---------------------------------------------------------------

TargetBracket = Callable[[object, object, np.ndarray], float]


def canonical_target(k) -> TargetBracket:
    return lambda F, G, y: poisson_bracket(F, G, y, k)


def lie_poisson_target(alg: LieAlgebra) -> TargetBracket:
    return lambda F, G, mu: lie_poisson_bracket(alg, F, G, mu)


def check_poisson_map(phi: Callable[[np.ndarray], np.ndarray], source_weights,
                      target_bracket: TargetBracket, points, trial_fields: Sequence,
                      name: str = "poisson_map", tol: float = 1e-6) -> CheckResult:
    """max |{F o phi, G o phi}_source - {F, G}_target o phi| over points and field pairs."""
    if len(trial_fields) < 2:
        raise ValueError("need at least two trial fields")
    pulled = [ScalarField(lambda a, F=F: F(phi(a))) for F in trial_fields]
    residuals = []
    for a in np.atleast_2d(points):
        y = phi(a)
        worst = 0.0
        for i in range(len(trial_fields)):
            for j in range(i + 1, len(trial_fields)):
                lhs = poisson_bracket(pulled[i], pulled[j], a, source_weights)
                rhs = target_bracket(trial_fields[i], trial_fields[j], y)
                worst = max(worst, abs(lhs - rhs))
        residuals.append(worst)
    return CheckResult(name, len(residuals), float(max(residuals)), tol, np.array(residuals))


def check_f_poisson(sig, points, rng: np.random.Generator, n_fields: int = 3) -> CheckResult:
    sig = _sig(sig)
    fields = [random_quadratic_field(sig.d, rng) for _ in range(n_fields)]
    k = sig.weights
    return check_poisson_map(lambda a: f_map(sig, a), k, canonical_target(k), points, fields,
                             name="f_poisson", tol=TOL["f_poisson"])


def dual_trial_fields(alg: LieAlgebra, rng: np.random.Generator, n_quadratic: int = 2) -> List[DualFunction]:
    fields = [linear_function(np.eye(alg.dim)[j]) for j in range(alg.dim)]
    for _ in range(n_quadratic):
        fields.append(quadratic_function(rng.standard_normal((alg.dim, alg.dim)), rng.standard_normal(alg.dim)))
    return fields


def check_j_poisson(sig, points, rng: np.random.Generator, n_quadratic: int = 2) -> CheckResult:
    sig = _sig(sig)
    alg = algebra_for(sig)
    fields = dual_trial_fields(alg, rng, n_quadratic)
    return check_poisson_map(lambda a: j_resonant(sig, a), sig.weights, lie_poisson_target(alg),
                             points, fields, name="j_poisson", tol=TOL["j_poisson"])


# -- local symplecticity and dual pairs --------------------------------------------

def check_local_symplectomorphism(sig, a) -> float:
    """|Tf^T W Tf - W|_max with the real form matrix W of the signature's weights."""
    sig = _sig(sig)
    Jf = f_real_jacobian(sig, a)
    W = symplectic_matrix(sig.weights)
    return float(np.max(np.abs(Jf.T @ W @ Jf - W)))


def fd_real_jacobian(fn: Callable[[np.ndarray], np.ndarray], a, rel_step: float = 1e-6) -> np.ndarray:
    """Central-difference Jacobian of ``fn`` in the real view of ``a``."""
    x = to_real(a)
    cols = []
    for i in range(x.size):
        h = rel_step * max(1.0, abs(x[i]))
        e = np.zeros(x.size)
        e[i] = h
        fp = np.atleast_1d(fn(from_real(x + e)))
        fm = np.atleast_1d(fn(from_real(x - e)))
        d = (fp - fm) / (2 * h)
        cols.append(to_real(d) if np.iscomplexobj(d) else d)
    return np.array(cols).T


def _angle_to_span(v: np.ndarray, basis: np.ndarray) -> float:
    """Angle between vector ``v`` and the column span of orthonormal ``basis``."""
    proj = basis @ (basis.T @ v)
    return float(np.arctan2(np.linalg.norm(v - proj), np.linalg.norm(proj)))


def check_dual_pair(sig, a) -> dict:
    """Kernel dimensions of TR and TJ and their symplectic pairing at one point."""
    sig = _sig(sig)
    a = np.asarray(a, dtype=complex)
    d = sig.d
    TR = r_gradient_real(sig, a)[None, :]
    TJ = j_resonant_real_jacobian(sig, a)
    ker_R = null_space(TR, rcond=SVD_RTOL)
    ker_J = null_space(TJ, rcond=SVD_RTOL)
    W = symplectic_matrix(sig.weights)
    pairing = np.abs(ker_R.T @ W @ ker_J)
    gen = to_real(circle_generator(sig.positive, a))
    return {
        "dim_ker_R": ker_R.shape[1],
        "dim_ker_J": ker_J.shape[1],
        "expected": (2 * d - 1, 1),
        "pairing_residual": float(pairing.max()) if pairing.size else float("nan"),
        "generator_angle": _angle_to_span(gen, ker_J) if ker_J.shape[1] else float("nan"),
    }


# -- identities -----------------------------------------------------------------

def check_kummer(sig, points) -> CheckResult:
    """Kummer surface residual with r = R(a), normalized by max(1, r^2)."""
    sig = _sig(sig)
    points = np.atleast_2d(points)
    r = r_invariant(sig, points)
    res = np.abs(kummer_residual(sig, j_resonant(sig, points), r)) / np.maximum(1.0, r ** 2)
    return _result("kummer_surface", res)


def kummer_norm_identity(sig, points) -> CheckResult:
    """| |J(a)| - R(a) | / max(1, R) for positive d = 2 signatures."""
    points = np.atleast_2d(points)
    r = r_invariant(sig, points)
    nrm = np.linalg.norm(j_resonant(sig, points), axis=-1)
    return _result("kummer_norm", np.abs(nrm - r) / np.maximum(1.0, r))


def hyperbolic_identity(sig, points) -> CheckResult:
    """mu3^2 - mu1^2 - mu2^2 = R^2 (relative to max(1, R^2)) with mu3 > 0."""
    points = np.atleast_2d(points)
    r = r_invariant(sig, points)
    mu = j_resonant(sig, points)
    res = np.abs(kummer_residual(sig, mu, r)) / np.maximum(1.0, r ** 2)
    res = np.where(mu[:, 2] > 0, res, np.inf)
    return _result("kummer_surface", res, info={"min_mu3": float(mu[:, 2].min())})


def check_commuting_diagram(sig, points) -> List[CheckResult]:
    sig = _sig(sig)
    points = np.atleast_2d(points)
    b = f_map(sig, points)
    R = r_invariant(sig, points)
    r_res = np.abs(R - r_invariant(sig.ones(), b)) / np.maximum(1.0, np.abs(R))
    alg = algebra_for(sig)
    mu = j_resonant(sig, points)
    j_res = np.max(np.abs(mu - j_unit(alg, b)), axis=-1)
    out = [_result("r_commutation", r_res), _result("j_commutation", j_res)]
    try:
        closed = j_closed_form(sig, points)
    except NotImplementedError:
        return out
    scale = np.maximum(1.0, np.linalg.norm(mu, axis=-1))
    out.append(_result("j_closed_form", np.max(np.abs(closed - mu), axis=-1) / scale))
    return out


def check_fibers(sig, points) -> CheckResult:
    """Rotating slot j by 2 pi k / nu_j leaves f unchanged."""
    sig = _sig(sig)
    points = np.atleast_2d(points)
    b = f_map(sig, points)
    worst = np.zeros(len(points))
    for j, nu in enumerate(sig.nu):
        for kk in range(1, int(nu)):
            rot = points.copy()
            rot[:, j] *= np.exp(2j * np.pi * kk / nu)
            diff = np.max(np.abs(f_map(sig, rot) - b), axis=-1) / np.maximum(1.0, np.abs(b).max(axis=-1))
            worst = np.maximum(worst, diff)
    return _result("f_fibers", worst, info={"preimage_multiplicity": sig.preimage_multiplicity})


def check_f_jacobian_fd(sig, points) -> CheckResult:
    sig = _sig(sig)
    res = [np.max(np.abs(f_real_jacobian(sig, a) - fd_real_jacobian(lambda x: f_map(sig, x), a)))
           for a in np.atleast_2d(points)]
    return _result("f_jacobian_fd", res)


def check_equivariance(alg: LieAlgebra, rng: np.random.Generator, count: int = 100,
                       relative: bool = True) -> CheckResult:
    """|J_1(U b) - Ad*_{U^-1} J_1(b)| for random U = exp(xi).

    SU(1,1) elements grow hyperbolically with |xi|, so the default residual is
    taken relative to max(1, |J_1(U b)|).
    """
    res = []
    for _ in range(count):
        U = random_group_element(alg, rng)
        b = rng.uniform(0.3, 2.0, alg.d) * np.exp(2j * np.pi * rng.uniform(size=alg.d))
        scale = max(1.0, float(np.linalg.norm(j_unit(alg, U @ b)))) if relative else 1.0
        res.append(equivariance_residual(alg, b, U) / scale)
    return _result("equivariance", res, info={"algebra": alg.name, "relative": relative})


# -- full vs reduced --------------------------------------------------------------

@dataclass
class ReductionComparison:
    gap: float
    times: np.ndarray
    series: np.ndarray
    full: Trajectory
    reduced: Trajectory
    min_coordinate: float
    min_domain_margin: float

    @property
    def ok(self) -> bool:
        return self.full.ok and self.reduced.ok and len(self.full.times) == len(self.reduced.times)

    @property
    def message(self) -> str:
        return "; ".join(m for m in (self.full.message, self.reduced.message) if m)


def check_reduction_commutes(sig, H: ScalarField, h: DualFunction, y0,
                             cfg: IntegratorConfig) -> ReductionComparison:
    """Integrate a(t) and mu(t) from mu0 = J(a0) on a common output grid."""
    sig = _sig(sig)
    if cfg.n_out is None:
        cfg = IntegratorConfig(cfg.t_span, cfg.method, cfg.atol, cfg.rtol, cfg.dt, cfg.max_steps, 201)
    alg = algebra_for(sig)
    y0 = np.asarray(y0, dtype=complex)
    full = integrate(full_field(H, sig.weights), y0, cfg)
    red = integrate(reduced_field(alg, h), j_resonant(sig, y0), cfg)
    n = min(len(full.times), len(red.times))
    series = np.linalg.norm(j_resonant(sig, full.states[:n]) - red.states[:n], axis=-1)
    margins = []
    for mu in red.states[:n]:
        try:
            margins.append(h.domain(mu) if h.domain else np.inf)
        except KummerError:
            margins.append(0.0)
    gap = float(series.max()) if n == len(full.times) == len(red.times) else float("inf")
    return ReductionComparison(gap, full.times[:n], series, full, red,
                               float(np.abs(full.states).min()), float(min(margins)))


def reduction_check(name: str) -> CheckResult:
    conf = REDUCTION_DEFAULTS[name]
    sig = {"res12": (1, 2), "res112": (1, 1, 2)}[name]
    cmp = check_reduction_commutes(sig, preset_full_hamiltonian(name), preset_reduced_hamiltonian(name),
                                   conf["y0"], IntegratorConfig(conf["t_span"], n_out=201))
    return CheckResult(f"reduction_{name}", len(cmp.times), cmp.gap, conf["tol"], cmp.series,
                       {"min_coordinate": cmp.min_coordinate, "min_domain_margin": cmp.min_domain_margin,
                        "status": "ok" if cmp.ok else cmp.message})


# -- suite --------------------------------------------------------------------------

def run_suite(sig, seed: int = 0, n_points: int = 100, n_identity_points: int = 1000,
              include_reduction: bool = True) -> dict:
    """All checks for one signature as ``{seed, signature, checks: [...], pass}``."""
    sig = _sig(sig)
    rng = np.random.default_rng([seed, *(x % 2**32 for x in sig.n)])
    many = random_points(sig, n_identity_points, rng)
    few = many[:n_points]
    checks: List[CheckResult] = []

    if sig.d == 2:
        checks.append(hyperbolic_identity(sig, many) if sig.mixed else kummer_norm_identity(sig, many))
        if not sig.mixed:
            checks.append(check_kummer(sig, many))
    checks += check_commuting_diagram(sig, many)
    checks.append(check_fibers(sig, few))
    checks.append(check_f_jacobian_fd(sig, few))
    checks.append(check_f_poisson(sig, few, rng))
    checks.append(_result("f_local_symplectic", [check_local_symplectomorphism(sig, a) for a in few]))
    checks.append(check_j_poisson(sig, few[: max(1, n_points // 4)], rng))

    reports = [check_dual_pair(sig, a) for a in few]
    dims = [abs(r["dim_ker_R"] - r["expected"][0]) + abs(r["dim_ker_J"] - r["expected"][1]) for r in reports]
    checks.append(_result("dual_pair_dims", dims))
    checks.append(_result("dual_pair_pairing", [r["pairing_residual"] for r in reports]))
    checks.append(_result("generator_alignment", [r["generator_angle"] for r in reports]))

    checks.append(check_equivariance(algebra_for(sig.ones()), rng, n_points))

    if include_reduction:
        for name, preset_sig in (("res12", (1, 2)), ("res112", (1, 1, 2))):
            if sig.n == preset_sig:
                checks.append(reduction_check(name))

    return {
        "seed": seed,
        "signature": list(sig.n),
        "preimage_multiplicity": sig.preimage_multiplicity,
        "checks": [c.to_dict() for c in checks],
        "pass": all(c.passed for c in checks),
    }
