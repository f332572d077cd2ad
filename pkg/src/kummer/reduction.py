"""Lie-Poisson dynamics on duals and the preset full/reduced Hamiltonians.

The (+)-bracket on dual coordinates is ``{F, G}(mu) = c_jkl dF_j dG_k mu_l``
with the structure constants of the basis; on su(2) this is
``2 mu . (grad F x grad G)`` and the Lie-Poisson equation becomes
``dmu/dt = -2 mu x grad h``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, SignatureError
from .lie_algebra import LieAlgebra, ad_star
from .phase_space import ScalarField
from .resonance import ResonanceSignature, _sig

EPS_POLE = 1e-10


@dataclass(frozen=True)
class DualFunction:
    """Real function on a dual with optional analytic gradient and a domain predicate.

    ``domain(mu)`` returns a positive margin inside the domain; evaluation
    raises :class:`DomainError` when the margin drops below ``eps``.
    """

    value: Callable[[np.ndarray], float]
    grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    domain: Optional[Callable[[np.ndarray], float]] = None
    eps: float = EPS_POLE
    rel_step: float = 1e-6
    name: str = ""

    def check(self, mu) -> np.ndarray:
        mu = np.asarray(mu, dtype=float)
        if self.domain is not None:
            margin = self.domain(mu)
            if not margin >= self.eps:
                raise DomainError(f"{self.name or 'function'} evaluated outside its domain "
                                  f"(margin {margin:.3e})")
        return mu

    def __call__(self, mu) -> float:
        return float(self.value(self.check(mu)))

    def gradient(self, mu) -> np.ndarray:
        mu = self.check(mu)
        if self.grad is not None:
            return np.asarray(self.grad(mu), dtype=float)
        return fd_gradient(self.value, mu, self.rel_step)


ReducedHamiltonian = DualFunction


def fd_gradient(F, x, rel_step: float = 1e-6) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    g = np.empty(x.size)
    for j in range(x.size):
        h = rel_step * max(1.0, abs(x[j]))
        e = np.zeros(x.size)
        e[j] = h
        g[j] = (F(x + e) - F(x - e)) / (2 * h)
    return g


def linear_function(c) -> DualFunction:
    c = np.asarray(c, dtype=float)
    return DualFunction(lambda mu: float(c @ mu), lambda mu: c.copy(), name="linear")


def quadratic_function(S, g) -> DualFunction:
    S = 0.5 * (np.asarray(S, float) + np.asarray(S, float).T)
    g = np.asarray(g, float)
    return DualFunction(lambda mu: float(0.5 * mu @ S @ mu + g @ mu), lambda mu: S @ mu + g,
                        name="quadratic")


def lie_poisson_bracket(alg: LieAlgebra, F: DualFunction, G: DualFunction, mu) -> float:
    mu = np.asarray(mu, dtype=float)
    return float(np.einsum("jkl,j,k,l->", alg.struct_c, F.gradient(mu), G.gradient(mu), mu))


def lie_poisson_field(alg: LieAlgebra, h: DualFunction, mu) -> np.ndarray:
    """dmu/dt = -ad*_{grad h} mu."""
    mu = np.asarray(mu, dtype=float)
    return -ad_star(alg, h.gradient(mu), mu)


# -- full Hamiltonians on C^d -------------------------------------------------

def _res12_full() -> ScalarField:
    def value(a):
        return (a[0] ** 2 * np.conj(a[1])).real

    def grad(a):
        dab = np.array([np.conj(a[0]) * a[1], 0.5 * a[0] ** 2])
        return dab.conj(), dab

    return ScalarField(value, grad, name="res12")


def _res112_full() -> ScalarField:
    def value(a):
        return (a[0] ** 2 * (np.conj(a[1]) ** 2 + np.conj(a[2]))).real

    def grad(a):
        dab = np.array([np.conj(a[0]) * (a[1] ** 2 + a[2]),
                        a[0] ** 2 * np.conj(a[1]),
                        0.5 * a[0] ** 2])
        return dab.conj(), dab

    return ScalarField(value, grad, name="res112")


def harmonic_full(freqs: Sequence[float]) -> ScalarField:
    """H = (1/2) sum_j w_j |a_j|^2, whose flow rotates slot j at rate w_j."""
    w = np.asarray(freqs, dtype=float)

    def value(a):
        return 0.5 * float(np.sum(w * np.abs(a) ** 2))

    def grad(a):
        dab = 0.5 * w * a
        return dab.conj(), dab

    return ScalarField(value, grad, name="harmonic")


def monomial_full(sig) -> ScalarField:
    """H = Re(a1^nu1 conj(a2)^nu2), the lowest-order n:m resonant coupling."""
    sig = _sig(sig)
    _require_positive_pair(sig)
    p, q = (int(x) for x in sig.nu)

    def value(a):
        return (a[0] ** p * np.conj(a[1]) ** q).real

    def grad(a):
        dab = np.array([0.5 * p * np.conj(a[0]) ** (p - 1) * a[1] ** q,
                        0.5 * q * a[0] ** p * np.conj(a[1]) ** (q - 1)])
        return dab.conj(), dab

    return ScalarField(value, grad, name=f"monomial{sig.n}")


def preset_full_hamiltonian(name: str, freqs: Optional[Sequence[float]] = None) -> ScalarField:
    if name == "res12":
        return _res12_full()
    if name == "res112":
        return _res112_full()
    if name == "harmonic":
        if freqs is None:
            raise ValueError("harmonic preset needs frequencies")
        return harmonic_full(freqs)
    raise ValueError(f"unknown preset {name!r}")


# -- reduced Hamiltonians on duals --------------------------------------------

def _res12_reduced() -> DualFunction:
    def value(mu):
        nrm = np.linalg.norm(mu)
        return 2 * mu[0] * np.sqrt(nrm + mu[2])

    def grad(mu):
        nrm = np.linalg.norm(mu)
        s = np.sqrt(nrm + mu[2])
        return np.array([2 * s + mu[0] ** 2 / (nrm * s),
                         mu[0] * mu[1] / (nrm * s),
                         mu[0] * s / nrm])

    return DualFunction(value, grad, domain=lambda mu: np.linalg.norm(mu) + mu[2], name="res12")


def _res112_reduced() -> DualFunction:
    def parts(mu):
        P = mu[0] ** 2 + mu[1] ** 2
        Q = mu[3] ** 2 + mu[4] ** 2
        S = mu[5] ** 2 + mu[6] ** 2
        return P, Q, S, (P * Q / S) ** 0.25

    def value(mu):
        P, Q, S, W = parts(mu)
        return 4 * mu[0] * np.sqrt(P) + 2 * mu[3] * W

    def grad(mu):
        P, Q, S, W = parts(mu)
        sP = np.sqrt(P)
        g = np.zeros(8)
        g[0] = 4 * sP + 4 * mu[0] ** 2 / sP + mu[3] * W * mu[0] / P
        g[1] = 4 * mu[0] * mu[1] / sP + mu[3] * W * mu[1] / P
        g[3] = 2 * W + mu[3] ** 2 * W / Q
        g[4] = mu[3] * mu[4] * W / Q
        g[5] = -mu[3] * mu[5] * W / S
        g[6] = -mu[3] * mu[6] * W / S
        return g

    def domain(mu):
        return min(np.hypot(mu[0], mu[1]), np.hypot(mu[3], mu[4]), np.hypot(mu[5], mu[6]))

    return DualFunction(value, grad, domain=domain, name="res112")


def harmonic_reduced(sig, freqs: Sequence[float]) -> DualFunction:
    """Reduced form of :func:`harmonic_full` for a positive two-dimensional signature.

    With ``|a1|^2 = nu1 (|mu| + mu3)`` and ``|a2|^2 = nu2 (|mu| - mu3)`` the
    harmonic energy is ``A |mu| + B mu3``; the ``|mu|`` part is a Casimir.
    """
    sig = _sig(sig)
    _require_positive_pair(sig)
    p, q = (float(x) for x in sig.nu)
    w1, w2 = (float(x) for x in freqs)
    A = 0.5 * (w1 * p + w2 * q)
    B = 0.5 * (w1 * p - w2 * q)

    def value(mu):
        return A * np.linalg.norm(mu) + B * mu[2]

    def grad(mu):
        return A * mu / np.linalg.norm(mu) + np.array([0.0, 0.0, B])

    return DualFunction(value, grad, domain=lambda mu: np.linalg.norm(mu), name="harmonic")


def monomial_reduced(sig) -> DualFunction:
    """h with h o J_{n:m} = Re(a1^nu1 conj(a2)^nu2):
    h = sqrt(nu1 nu2) mu1 (nu1 (|mu| + mu3))^((nu1-1)/2) (nu2 (|mu| - mu3))^((nu2-1)/2).
    """
    sig = _sig(sig)
    _require_positive_pair(sig)
    p, q = (int(x) for x in sig.nu)
    alpha, beta = 0.5 * (p - 1), 0.5 * (q - 1)
    c = np.sqrt(p * q)

    def value(mu):
        nrm = np.linalg.norm(mu)
        return c * mu[0] * (p * (nrm + mu[2])) ** alpha * (q * (nrm - mu[2])) ** beta

    def grad(mu):
        nrm = np.linalg.norm(mu)
        P, Q = p * (nrm + mu[2]), q * (nrm - mu[2])
        base = c * P ** alpha * Q ** beta
        g = np.zeros(3)
        g[0] = base
        dn = mu / nrm
        if alpha:
            g += c * mu[0] * alpha * P ** (alpha - 1) * Q ** beta * p * (dn + [0, 0, 1])
        if beta:
            g += c * mu[0] * beta * P ** alpha * Q ** (beta - 1) * q * (dn - [0, 0, 1])
        return g

    def domain(mu):
        nrm = np.linalg.norm(mu)
        margins = [nrm]
        if p > 1:
            margins.append(nrm + mu[2])
        if q > 1:
            margins.append(nrm - mu[2])
        return min(margins)

    return DualFunction(value, grad, domain=domain, name=f"monomial{sig.n}")


def preset_reduced_hamiltonian(name: str, sig=None, freqs: Optional[Sequence[float]] = None) -> DualFunction:
    if name == "res12":
        return _res12_reduced()
    if name == "res112":
        return _res112_reduced()
    if name == "harmonic":
        if sig is None or freqs is None:
            raise ValueError("harmonic preset needs a signature and frequencies")
        return harmonic_reduced(sig, freqs)
    raise ValueError(f"unknown preset {name!r}")


def preset_signature(name: str) -> ResonanceSignature:
    return {"res12": ResonanceSignature((1, 2)), "res112": ResonanceSignature((1, 1, 2))}[name]


def reduced_12_display(mu, r) -> np.ndarray:
    """Component form of the 1:2 reduced equations on the sphere |mu| = r."""
    mu = np.asarray(mu, dtype=float)
    s = np.sqrt(r + mu[..., 2])
    return np.stack([
        -2 * mu[..., 0] * mu[..., 1] / s,
        (2 * mu[..., 0] ** 2 - 4 * mu[..., 2] * (r + mu[..., 2])) / s,
        4 * mu[..., 1] * s,
    ], axis=-1)


def _require_positive_pair(sig: ResonanceSignature) -> None:
    if sig.d != 2 or sig.mixed:
        raise SignatureError("this preset needs a positive two-dimensional signature")
