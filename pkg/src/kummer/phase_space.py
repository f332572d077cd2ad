"""Complex phase space C^d_x with a (possibly signed) symplectic structure.

Points and tangent vectors are complex numpy arrays of shape ``(d,)``.
Weights ``k`` are arrays of +1/-1; the standard form uses all +1.  In real
coordinates ``a_j = x_j + i y_j`` the symplectic form is
``-sum_j k_j dx_j ^ dy_j`` and Hamilton's equations read
``da_j/dt = 2i k_j dH/d(conj a_j)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from .errors import DimensionError, DomainError

EPS_DOM = 1e-12
FD_REL_STEP = 1e-6

WirtingerGrad = Callable[[np.ndarray], Tuple[np.ndarray, np.ndarray]]


def as_point(a, eps: float = EPS_DOM) -> np.ndarray:
    """Return ``a`` as a complex array, rejecting points near a coordinate origin."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        a = a.reshape(1)
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite coordinate")
    if np.any(np.abs(a) <= eps):
        raise DomainError(f"coordinate within {eps:g} of the origin: {a}")
    return a


def as_weights(k, d: Optional[int] = None) -> np.ndarray:
    if k is None:
        if d is None:
            raise DimensionError("weights need an explicit dimension")
        return np.ones(d)
    k = np.asarray(k, dtype=float).reshape(-1)
    if not np.all(np.abs(k) == 1.0):
        raise ValueError(f"form weights must be +1 or -1, got {k}")
    if d is not None and k.size != d:
        raise DimensionError(f"weights have length {k.size}, expected {d}")
    return k


def to_real(a: np.ndarray) -> np.ndarray:
    """Complex ``(..., d)`` -> real ``(..., 2d)`` ordered ``(x_1, y_1, ..., x_d, y_d)``."""
    a = np.asarray(a, dtype=complex)
    out = np.empty(a.shape[:-1] + (2 * a.shape[-1],))
    out[..., 0::2] = a.real
    out[..., 1::2] = a.imag
    return out


def from_real(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def symplectic_matrix(k) -> np.ndarray:
    """Real ``2d x 2d`` matrix W with ``Omega(u, v) = u^T W v`` in the :func:`to_real` ordering."""
    k = as_weights(k)
    W = np.zeros((2 * k.size, 2 * k.size))
    for j, kj in enumerate(k):
        W[2 * j, 2 * j + 1] = -kj
        W[2 * j + 1, 2 * j] = kj
    return W


def symplectic_pairing(u, v, k=None) -> float:
    u = np.asarray(u, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if u.shape != v.shape:
        raise DimensionError(f"tangent dimensions differ: {u.size} vs {v.size}")
    k = as_weights(k, u.size)
    return float(-np.sum(k * np.imag(np.conj(u) * v)))


def canonical_one_form(a, v, k=None) -> float:
    """Theta(v) = (1/2) sum_j k_j Im(conj(a_j) v_j)."""
    a = np.asarray(a, dtype=complex).reshape(-1)
    v = np.asarray(v, dtype=complex).reshape(-1)
    if a.shape != v.shape:
        raise DimensionError(f"point/tangent dimensions differ: {a.size} vs {v.size}")
    k = as_weights(k, a.size)
    return float(0.5 * np.sum(k * np.imag(np.conj(a) * v)))


def fd_wirtinger(F: Callable[[np.ndarray], float], a: np.ndarray,
                 rel_step: float = FD_REL_STEP) -> Tuple[np.ndarray, np.ndarray]:
    """Central-difference Wirtinger partials ``(dF/da_j, dF/d(conj a_j))``."""
    a = np.asarray(a, dtype=complex)
    d = a.size
    Fx = np.empty(d)
    Fy = np.empty(d)
    for j in range(d):
        h = rel_step * max(1.0, abs(a[j]))
        e = np.zeros(d, dtype=complex)
        e[j] = h
        Fx[j] = (F(a + e) - F(a - e)) / (2 * h)
        e[j] = 1j * h
        Fy[j] = (F(a + e) - F(a - e)) / (2 * h)
    return 0.5 * (Fx - 1j * Fy), 0.5 * (Fx + 1j * Fy)


@dataclass(frozen=True)
class ScalarField:
    """Real function on C^d_x with optional analytic Wirtinger gradient.

    ``grad(a)`` must return the pair ``(dF/da, dF/d(conj a))``; without it
    the partials come from central differences with step
    ``rel_step * max(1, |a_j|)``.
    """

    value: Callable[[np.ndarray], float]
    grad: Optional[WirtingerGrad] = None
    rel_step: float = FD_REL_STEP
    name: str = ""

    def __call__(self, a) -> float:
        return float(self.value(np.asarray(a, dtype=complex)))

    def wirtinger(self, a) -> Tuple[np.ndarray, np.ndarray]:
        a = np.asarray(a, dtype=complex)
        if self.grad is not None:
            da, dabar = self.grad(a)
            return np.asarray(da, dtype=complex), np.asarray(dabar, dtype=complex)
        return fd_wirtinger(self.value, a, self.rel_step)

    def __mul__(self, other: "ScalarField") -> "ScalarField":
        return ScalarField(lambda a: self.value(a) * other.value(a), rel_step=self.rel_step)


def poisson_bracket(F: ScalarField, G: ScalarField, a, k=None, imag_tol: float = 1e-8) -> float:
    a = as_point(a)
    k = as_weights(k, a.size)
    Fa, Fab = F.wirtinger(a)
    Ga, Gab = G.wirtinger(a)
    val = 2j * np.sum(k * (Fa * Gab - Ga * Fab))
    if abs(val.imag) > imag_tol * max(1.0, abs(val.real)):
        raise ValueError(f"bracket has imaginary part {val.imag:.3e}; gradient is inconsistent")
    return float(val.real)


def hamiltonian_vector_field(H: ScalarField, a, k=None) -> np.ndarray:
    a = as_point(a)
    k = as_weights(k, a.size)
    _, Hab = H.wirtinger(a)
    return 2j * k * Hab


def real_quadratic_field(S: np.ndarray, g: np.ndarray) -> ScalarField:
    """F(a) = x^T S x / 2 + g . x on the real view x of a (S symmetrized)."""
    S = 0.5 * (np.asarray(S, float) + np.asarray(S, float).T)
    g = np.asarray(g, float)

    def value(a):
        x = to_real(a)
        return 0.5 * x @ S @ x + g @ x

    def grad(a):
        dx = S @ to_real(a) + g
        Fx, Fy = dx[0::2], dx[1::2]
        return 0.5 * (Fx - 1j * Fy), 0.5 * (Fx + 1j * Fy)

    return ScalarField(value, grad, name="quadratic")


def random_quadratic_field(d: int, rng: np.random.Generator) -> ScalarField:
    S = rng.standard_normal((2 * d, 2 * d))
    return real_quadratic_field(S, rng.standard_normal(2 * d))
