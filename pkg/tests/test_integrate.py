import numpy as np
import pytest

from kummer.integrate import (IntegratorConfig, evaluate_monitors, full_field, global_error, integrate,
                              monitor, reduced_field, rk4_step)
from kummer.lie_algebra import casimir_c2, casimir_c3, make_su_d
from kummer.momentum import j_resonant
from kummer.reduction import DualFunction, harmonic_full, preset_full_hamiltonian, preset_reduced_hamiltonian
from kummer.resonance import r_invariant

SU2, SU3 = make_su_d(2), make_su_d(3)


def harmonic_12():
    return full_field(harmonic_full((1, 2)))


def test_harmonic_period():
    traj = integrate(harmonic_12(), [1, 1], IntegratorConfig((0, 2 * np.pi), atol=1e-12, rtol=1e-12))
    assert traj.ok
    assert np.max(np.abs(traj.final - np.array([1, 1]))) <= 1e-10


def test_zero_field():
    traj = integrate(lambda y: np.zeros_like(y), [1.0, 2.0], IntegratorConfig((0, 3), n_out=7))
    np.testing.assert_array_equal(traj.states, np.tile([1.0, 2.0], (7, 1)))
    np.testing.assert_allclose(traj.times, np.linspace(0, 3, 7))


def test_output_grid_and_rk4_grid():
    traj = integrate(harmonic_12(), [1, 1], IntegratorConfig((0, 1), n_out=11))
    np.testing.assert_array_equal(traj.times, np.linspace(0, 1, 11))
    traj = integrate(harmonic_12(), [1, 1], IntegratorConfig((0, 1), method="rk4", dt=0.1))
    assert len(traj.times) == 11 and traj.times[-1] == pytest.approx(1.0)
    assert np.all(np.diff(traj.times) > 0)


def test_res12_r_conserved():
    sig = (1, 2)
    H = preset_full_hamiltonian("res12")
    traj = integrate(full_field(H), [1, 0.5], IntegratorConfig((0, 5), n_out=101),
                     monitors={"R": lambda a: r_invariant(sig, a), "H": H})
    rep = monitor(traj)
    assert rep["R"]["drift"] <= 1e-9 and rep["R"]["failures"] == 0
    assert rep["H"]["drift"] <= 1e-9


def test_harmonic_r_drift():
    cfg = IntegratorConfig((0, 2 * np.pi), atol=1e-13, rtol=1e-13, n_out=50)
    traj = integrate(harmonic_12(), [1 + 0.2j, 0.5 - 1j], cfg)
    assert monitor(traj, {"R": lambda a: r_invariant((1, 2), a)})["R"]["drift"] <= 1e-12


def test_res112_casimirs():
    sig = (1, 1, 2)
    mu0 = j_resonant(sig, [1, 0.8, 0.6])
    h = preset_reduced_hamiltonian("res112")
    traj = integrate(reduced_field(SU3, h), mu0, IntegratorConfig((0, 1), n_out=101),
                     monitors={"C2": lambda m: casimir_c2(SU3, m), "C3": lambda m: casimir_c3(SU3, m)})
    assert traj.ok
    rep = monitor(traj)
    assert rep["C2"]["drift"] <= 1e-8 and rep["C3"]["drift"] <= 1e-8


def test_res12_reduced_energy():
    h = preset_reduced_hamiltonian("res12")
    mu0 = j_resonant((1, 2), [1, 0.5])
    traj = integrate(reduced_field(SU2, h), mu0, IntegratorConfig((0, 5), n_out=101))
    rep = monitor(traj, {"h": h, "norm": np.linalg.norm})
    assert rep["h"]["drift"] <= 1e-9
    assert rep["norm"]["drift"] <= 1e-9


def test_rk4_order():
    exact = np.exp(1j * np.array([1.0, 2.0]) * 2.0)
    errs = [global_error(harmonic_12(), [1, 1], exact, (0, 2.0), dt) for dt in (0.1, 0.05, 0.025)]
    for e0, e1 in zip(errs, errs[1:]):
        assert 12 <= e0 / e1 <= 20


def test_rk4_step_exact_for_linear_cubic():
    # y' = 1 integrates exactly
    np.testing.assert_allclose(rk4_step(lambda y: np.ones_like(y), np.zeros(2), 0.3), [0.3, 0.3])


@pytest.mark.parametrize("method,dt", [("rk45", None), ("rk4", 0.01)])
def test_deterministic(method, dt):
    cfg = IntegratorConfig((0, 1), method=method, dt=dt, n_out=21 if method == "rk45" else None)
    f = full_field(preset_full_hamiltonian("res12"))
    t1 = integrate(f, [1, 0.5], cfg)
    t2 = integrate(f, [1, 0.5], cfg)
    np.testing.assert_array_equal(t1.states, t2.states)
    np.testing.assert_array_equal(t1.times, t2.times)


def test_domain_exit_returns_partial():
    # h = mu3 rotates about the third axis; a guard on mu2 stops the run part way
    h = DualFunction(lambda mu: mu[2], lambda mu: np.array([0.0, 0.0, 1.0]),
                     domain=lambda mu: 0.5 - mu[1], eps=0.0)
    traj = integrate(reduced_field(SU2, h), [1.0, 0.0, 0.0], IntegratorConfig((0, 5), n_out=101))
    assert traj.status == "domain_exit" and not traj.ok
    assert 1 < len(traj.times) < 101
    assert "outside its domain" in traj.message
    assert np.all(0.5 - traj.states[:, 1] >= 0)


def test_max_steps():
    traj = integrate(harmonic_12(), [1, 1], IntegratorConfig((0, 100), max_steps=3))
    assert traj.status == "max_steps"
    traj = integrate(harmonic_12(), [1, 1], IntegratorConfig((0, 100), method="rk4", dt=0.01, max_steps=10))
    assert traj.status == "max_steps"


def test_monitor_failures_are_counted():
    # y runs -1, -0.5, 0, 0.5, 1; the guard fails on the first two samples
    traj = integrate(lambda y: np.ones_like(y), [-1.0], IntegratorConfig((0, 2), n_out=5))
    guard = {"guard": lambda y: 1 / 0 if y[0] < -0.25 else 1.0}
    vals = evaluate_monitors(traj, guard)["guard"]
    assert np.isnan(vals[:2]).all() and np.all(vals[2:] == 1.0)
    assert monitor(traj, guard)["guard"] == {"drift": 0.0, "failures": 2}


@pytest.mark.parametrize("kwargs", [dict(method="euler"), dict(t_span=(1, 0)), dict(atol=0),
                                    dict(method="rk4"), dict(n_out=1), dict(max_steps=0)])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        IntegratorConfig(**kwargs)
