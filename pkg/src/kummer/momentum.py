"""Momentum maps J_1 and J_n = J_1 o f_n, closed-form cross-checks, Kummer surfaces.

Positive signatures map into su(d)*, the mixed two-dimensional signature
into su(1,1)*.  The mixed-sign Kummer surface ``mu3^2 - mu1^2 - mu2^2 = R^2``
(with ``mu3 > 0``) is one sheet of a two-sheeted hyperboloid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SignatureError
from .lie_algebra import LieAlgebra, coadjoint_action, make_su_1_1, make_su_d
from .phase_space import as_point
from .resonance import ResonanceSignature, _check, _sig, f_map, f_real_jacobian


def algebra_for(sig) -> LieAlgebra:
    sig = _sig(sig)
    if sig.mixed:
        return make_su_1_1()
    if sig.d < 2:
        raise SignatureError("momentum maps need d >= 2")
    return make_su_d(sig.d)


@dataclass(frozen=True)
class MomentumMapSpec:
    signature: ResonanceSignature
    algebra: LieAlgebra

    @classmethod
    def for_signature(cls, sig) -> "MomentumMapSpec":
        sig = _sig(sig)
        return cls(sig, algebra_for(sig))

    def __call__(self, a) -> np.ndarray:
        return j_resonant(self.signature, a)


def _unit_matrix(alg: LieAlgebra, b: np.ndarray) -> np.ndarray:
    outer = np.einsum("...i,...j->...ij", b, b.conj())
    Kbb = np.einsum("ij,...jk->...ik", alg.K, outer)
    tr = np.trace(Kbb, axis1=-2, axis2=-1)
    return 1j * (Kbb - (tr / alg.d)[..., None, None] * np.eye(alg.d))


def j_unit(alg: LieAlgebra, b) -> np.ndarray:
    """i (K b b^* - tr(K b b^*) I / d) in dual coordinates."""
    b = np.asarray(b, dtype=complex)
    if b.shape[-1] != alg.d:
        raise DimensionError(f"{alg.name} acts on C^{alg.d}, got shape {b.shape}")
    return alg.matrix_to_vector(_unit_matrix(alg, b))


def j_unit_pairing(alg: LieAlgebra, b) -> np.ndarray:
    """The same map through its defining pairing mu_j = Theta(gamma_j b) = Im(b^* K gamma_j b) / 2."""
    b = np.asarray(b, dtype=complex)
    Kg = np.einsum("ab,jbc->jac", alg.K, alg.basis)
    return 0.5 * np.imag(np.einsum("...a,jab,...b->...j", b.conj(), Kg, b))


def j_unit_real_jacobian(alg: LieAlgebra, b) -> np.ndarray:
    """Real Jacobian (dim x 2d) of :func:`j_unit` at a single point."""
    b = np.asarray(b, dtype=complex).reshape(-1)
    Kg = np.einsum("ab,jbc->jac", alg.K, alg.basis)
    c = np.einsum("a,jab->jb", b.conj(), Kg)
    Jr = np.empty((alg.dim, 2 * alg.d))
    Jr[:, 0::2] = c.imag
    Jr[:, 1::2] = c.real
    return Jr


def j_resonant(sig, a) -> np.ndarray:
    sig = _sig(sig)
    return j_unit(algebra_for(sig), f_map(sig, a))


def j_resonant_real_jacobian(sig, a) -> np.ndarray:
    sig = _sig(sig)
    a = as_point(a)
    return j_unit_real_jacobian(algebra_for(sig), f_map(sig, a)) @ f_real_jacobian(sig, a)


def j_closed_form(sig, a) -> np.ndarray:
    """Coordinate expressions of J_n written directly in ``a``.

    Available for two-dimensional signatures (either sign pattern) and for
    the 1:1:2 resonance.
    """
    sig = _sig(sig)
    a = _check(sig, a)
    if sig.d == 2:
        n, m = abs(sig.n[0]), abs(sig.n[1])
        a1, a2 = a[..., 0], a[..., 1]
        z = a1 ** m * np.conj(a2) ** n / (
            np.sqrt(n * m) * np.abs(a1) ** (m - 1) * np.abs(a2) ** (n - 1))
        if sig.mixed:
            third = 0.5 * (np.abs(a1) ** 2 / m + np.abs(a2) ** 2 / n)
            return np.stack([z.real, -z.imag, third], axis=-1)
        third = 0.5 * (np.abs(a1) ** 2 / m - np.abs(a2) ** 2 / n)
        return np.stack([z.real, z.imag, third], axis=-1)
    if sig.n == (1, 1, 2):
        a1, a2, a3 = a[..., 0], a[..., 1], a[..., 2]
        r1, r2, r3 = np.abs(a1), np.abs(a2), np.abs(a3)
        z12 = a1 ** 2 * np.conj(a2) ** 2 / (2 * r1 * r2)
        z13 = a1 ** 2 * np.conj(a3) / (np.sqrt(2) * r1)
        z23 = a2 ** 2 * np.conj(a3) / (np.sqrt(2) * r2)
        return np.stack([
            z12.real, z12.imag, 0.25 * (r1 ** 2 - r2 ** 2),
            z13.real, z13.imag, z23.real, z23.imag,
            (r1 ** 2 + r2 ** 2 - 4 * r3 ** 2) / (4 * np.sqrt(3)),
        ], axis=-1)
    raise NotImplementedError(f"no closed form for signature {sig}")


def kummer_residual(sig, mu, r) -> np.ndarray:
    """Zero exactly on the Kummer surface of level ``r``."""
    sig = _sig(sig)
    if sig.d != 2:
        raise SignatureError("Kummer surface equations are only available for d = 2")
    mu = np.asarray(mu, dtype=float)
    r = np.asarray(r, dtype=float)
    if sig.mixed:
        return mu[..., 2] ** 2 - mu[..., 0] ** 2 - mu[..., 1] ** 2 - r ** 2
    return np.sum(mu ** 2, axis=-1) - r ** 2


def group_action(U, b) -> np.ndarray:
    return np.asarray(b, dtype=complex) @ np.asarray(U).T


def equivariance_residual(alg: LieAlgebra, b, U) -> float:
    """|J_1(U b) - Ad*_{U^-1} J_1(b)|."""
    U = alg.check_group_element(U)
    b = as_point(b)
    lhs = j_unit(alg, group_action(U, b))
    rhs = coadjoint_action(alg, U, j_unit(alg, b))
    return float(np.linalg.norm(lhs - rhs))


def check_equivariance_sample(sig, b, U) -> float:
    sig = _sig(sig)
    if any(abs(x) != 1 for x in sig.n):
        raise SignatureError("equivariance holds for unit signatures only")
    return equivariance_residual(algebra_for(sig), b, U)
