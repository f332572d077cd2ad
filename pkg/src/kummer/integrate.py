"""ODE integration of full and reduced flows with invariant monitoring.

No projection is applied: conserved quantities are monitored, not enforced.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import RK45

from .errors import KummerError
from .lie_algebra import LieAlgebra
from .phase_space import ScalarField, hamiltonian_vector_field
from .reduction import DualFunction, lie_poisson_field

log = logging.getLogger(__name__)

Field = Callable[[np.ndarray], np.ndarray]

METHODS = ("rk45", "rk4")


@dataclass(frozen=True)
class IntegratorConfig:
    t_span: Tuple[float, float] = (0.0, 1.0)
    method: str = "rk45"
    atol: float = 1e-10
    rtol: float = 1e-10
    dt: Optional[float] = None
    max_steps: int = 1_000_000
    n_out: Optional[int] = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        t0, t1 = self.t_span
        if not t1 > t0:
            raise ValueError("t_span must be increasing")
        if self.atol <= 0 or self.rtol <= 0:
            raise ValueError("tolerances must be positive")
        if self.method == "rk4" and (self.dt is None or self.dt <= 0):
            raise ValueError("rk4 needs a positive dt")
        if self.max_steps <= 0:
            raise ValueError("max_steps must be positive")
        if self.n_out is not None and self.n_out < 2:
            raise ValueError("n_out must be at least 2")

    @property
    def t_eval(self) -> Optional[np.ndarray]:
        if self.n_out is None:
            return None
        return np.linspace(self.t_span[0], self.t_span[1], self.n_out)


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    monitors: Dict[str, np.ndarray] = field(default_factory=dict)
    status: str = "ok"          # ok | domain_exit | step_failure | max_steps
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def full_field(H: ScalarField, k=None) -> Field:
    return lambda a: hamiltonian_vector_field(H, a, k)


def reduced_field(alg: LieAlgebra, h: DualFunction) -> Field:
    return lambda mu: lie_poisson_field(alg, h, mu)


def rk4_step(f: Field, y: np.ndarray, h: float) -> np.ndarray:
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def _rk4(f, y0, cfg):
    t0, t1 = cfg.t_span
    n = int(np.ceil((t1 - t0) / cfg.dt - 1e-12))
    if n > cfg.max_steps:
        return [t0], [y0], "max_steps", f"{n} steps exceed max_steps={cfg.max_steps}"
    h = (t1 - t0) / n
    times, states = [t0], [y0]
    y = y0
    for i in range(1, n + 1):
        try:
            y = rk4_step(f, y, h)
        except KummerError as exc:
            return times, states, "domain_exit", f"t={times[-1]:.17g}: {exc}"
        times.append(t0 + i * h)
        states.append(y)
    return times, states, "ok", ""


def _rk45(f, y0, cfg):
    t0, t1 = cfg.t_span
    t_eval = cfg.t_eval
    solver = RK45(lambda t, y: f(y), t0, y0, t1, rtol=cfg.rtol, atol=cfg.atol)
    times, states = [t0], [y0.copy()]
    next_out = 1
    steps = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            return times, states, "max_steps", f"stopped after {steps} steps at t={solver.t:.17g}"
        try:
            msg = solver.step()
        except KummerError as exc:
            return times, states, "domain_exit", f"t={solver.t:.17g}: {exc}"
        steps += 1
        if solver.status == "failed":
            return times, states, "step_failure", f"t={solver.t:.17g}: {msg}"
        if t_eval is None:
            times.append(solver.t)
            states.append(solver.y.copy())
            continue
        dense = solver.dense_output()
        while next_out < t_eval.size and t_eval[next_out] <= solver.t:
            tt = t_eval[next_out]
            times.append(tt)
            states.append(solver.y.copy() if tt == solver.t else dense(tt))
            next_out += 1
    return times, states, "ok", ""


def integrate(f: Field, y0, cfg: IntegratorConfig = IntegratorConfig(),
              monitors: Optional[Mapping[str, Callable[[np.ndarray], float]]] = None) -> Trajectory:
    """Integrate dy/dt = f(y) over ``cfg.t_span``.

    A :class:`~kummer.errors.KummerError` raised by the field (typically a
    domain guard) stops the run; the states accepted so far are returned with
    ``status="domain_exit"``.
    """
    y0 = np.array(y0)
    f0 = f(y0)  # fails fast if the initial state is outside the field's domain
    y0 = y0.astype(complex if np.iscomplexobj(y0) or np.iscomplexobj(f0) else float)
    if cfg.method == "rk4":
        times, states, status, message = _rk4(f, y0, cfg)
    else:
        times, states, status, message = _rk45(f, y0, cfg)
    if status != "ok":
        log.warning("integration stopped early (%s): %s", status, message)
    traj = Trajectory(np.asarray(times, dtype=float), np.asarray(states), status=status, message=message)
    if monitors:
        traj.monitors.update(evaluate_monitors(traj, monitors))
    return traj


def evaluate_monitors(traj: Trajectory, functions: Mapping[str, Callable]) -> Dict[str, np.ndarray]:
    """Evaluate each function on every state; failures become NaN."""
    out = {}
    for name, fn in functions.items():
        vals = np.empty(len(traj.times))
        for i, y in enumerate(traj.states):
            try:
                vals[i] = float(fn(y))
            except (KummerError, ArithmeticError, ValueError) as exc:
                log.debug("monitor %s failed at sample %d: %s", name, i, exc)
                vals[i] = np.nan
        out[name] = vals
    return out


def monitor(traj: Trajectory, functions: Optional[Mapping[str, Callable]] = None) -> Dict[str, dict]:
    """Drift report ``{name: {"drift": max |f(t) - f(0)|, "failures": count}}``."""
    series = dict(traj.monitors)
    if functions:
        series.update(evaluate_monitors(traj, functions))
    report = {}
    for name, vals in series.items():
        bad = ~np.isfinite(vals)
        good = vals[~bad]
        drift = float(np.max(np.abs(good - good[0]))) if good.size else float("nan")
        report[name] = {"drift": drift, "failures": int(bad.sum())}
    return report


def global_error(f: Field, y0, exact: np.ndarray, t_span: Sequence[float], dt: float) -> float:
    cfg = IntegratorConfig(t_span=tuple(t_span), method="rk4", dt=dt)
    return float(np.linalg.norm(integrate(f, y0, cfg).final - exact))
