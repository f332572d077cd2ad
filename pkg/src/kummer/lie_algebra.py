"""Matrix Lie algebras su(d) and su(1,1) with coordinates on their duals.

A dual vector ``mu`` is always stored through its components
``mu_j = <mu, gamma_j>`` against the basis.  Every bracket, coadjoint action
and Casimir is computed on those coordinates; matrices are only views.

For su(d) the basis is the generalized Gell-Mann family multiplied by ``i``,
ordered block by block so that d = 2 and d = 3 reproduce the usual
identifications ``i [[x3, x1 + i x2], [x1 - i x2, -x3]]`` and its 3x3 analogue.
It is orthonormal for ``<X, Y> = tr(X^* Y) / 2``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.linalg import expm

from .errors import DimensionError, GroupMembershipError


def _readonly(x: np.ndarray) -> np.ndarray:
    x.flags.writeable = False
    return x


@dataclass(frozen=True, eq=False)
class LieAlgebra:
    kind: str                   # "su" or "su11"
    d: int                      # matrix size
    basis: np.ndarray           # (dim, d, d)
    K: np.ndarray               # (d, d) metric defining the group
    casimir_metric: np.ndarray  # quadratic Casimir is mu^T G mu
    struct_c: np.ndarray = field(init=False)
    sym_d: Optional[np.ndarray] = field(init=False, default=None)

    def __post_init__(self):
        flat = np.concatenate([self.basis.real.reshape(self.dim, -1),
                               self.basis.imag.reshape(self.dim, -1)], axis=1)
        object.__setattr__(self, "_coord_pinv", _readonly(np.linalg.pinv(flat.T)))
        object.__setattr__(self, "struct_c", _readonly(_structure_constants(self)))
        if self.kind == "su" and self.d == 3:
            object.__setattr__(self, "sym_d", _readonly(_su3_d_constants(self)))
        for arr in (self.basis, self.K, self.casimir_metric):
            _readonly(arr)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def name(self) -> str:
        return "su(1,1)" if self.kind == "su11" else f"su({self.d})"

    def __repr__(self) -> str:
        return f"LieAlgebra({self.name})"

    def vector_to_matrix(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.shape[-1] != self.dim:
            raise DimensionError(f"{self.name} vectors have {self.dim} components")
        return np.tensordot(xi, self.basis, axes=([-1], [0]))

    def matrix_to_vector(self, X) -> np.ndarray:
        """Coefficients of X in the basis (least squares for matrices outside the span)."""
        X = np.asarray(X, dtype=complex)
        flat = np.concatenate([X.real.reshape(X.shape[:-2] + (-1,)),
                               X.imag.reshape(X.shape[:-2] + (-1,))], axis=-1)
        return flat @ self._coord_pinv.T

    def check_group_element(self, U, tol: float = 1e-10) -> np.ndarray:
        U = np.asarray(U, dtype=complex)
        if U.shape != (self.d, self.d):
            raise GroupMembershipError(f"expected a {self.d}x{self.d} matrix")
        if np.max(np.abs(U.conj().T @ self.K @ U - self.K)) > tol or abs(np.linalg.det(U) - 1) > tol:
            group = "SU(1,1)" if self.kind == "su11" else f"SU({self.d})"
            raise GroupMembershipError(f"matrix is not in {group}")
        return U


def _structure_constants(alg: LieAlgebra) -> np.ndarray:
    g = alg.basis
    comm = np.einsum("jab,kbc->jkac", g, g) - np.einsum("kab,jbc->jkac", g, g)
    return alg.matrix_to_vector(comm)


def _su3_d_constants(alg: LieAlgebra) -> np.ndarray:
    g = alg.basis
    anti = np.einsum("jab,kbc->jkac", g, g) + np.einsum("kab,jbc->jkac", g, g)
    anti = anti + (4.0 / 3.0) * np.eye(8)[:, :, None, None] * np.eye(3)
    return alg.matrix_to_vector(anti / 2j)


def gell_mann_basis(d: int) -> np.ndarray:
    """Anti-Hermitian generalized Gell-Mann basis of su(d)."""
    mats = []
    for k in range(1, d):
        for j in range(k):
            S = np.zeros((d, d), dtype=complex)
            S[j, k] = S[k, j] = 1.0
            A = np.zeros((d, d), dtype=complex)
            A[j, k], A[k, j] = 1j, -1j
            mats += [1j * S, 1j * A]
        D = np.zeros(d)
        D[:k] = 1.0
        D[k] = -k
        mats.append(1j * np.sqrt(2.0 / (k * (k + 1))) * np.diag(D).astype(complex))
    return np.array(mats)


@lru_cache(maxsize=None)
def make_su_d(d: int) -> LieAlgebra:
    if d < 2:
        raise ValueError("su(d) requires d >= 2")
    dim = d * d - 1
    return LieAlgebra("su", d, gell_mann_basis(d), np.eye(d, dtype=complex), np.eye(dim))


@lru_cache(maxsize=None)
def make_su_1_1() -> LieAlgebra:
    """su(1,1) with coordinates matching the triple (Re b1 conj b2, -Im b1 conj b2, (|b1|^2+|b2|^2)/2)."""
    basis = np.array([
        [[0, 1j], [-1j, 0]],
        [[0, 1], [1, 0]],
        [[1j, 0], [0, -1j]],
    ], dtype=complex)
    K = np.diag([1.0, -1.0]).astype(complex)
    return LieAlgebra("su11", 2, basis, K, np.diag([-1.0, -1.0, 1.0]))


def structure_constants(alg: LieAlgebra) -> np.ndarray:
    """c[j, k, l] with [gamma_j, gamma_k] = sum_l c[j, k, l] gamma_l."""
    return alg.struct_c


def symmetric_d_constants(alg: LieAlgebra) -> np.ndarray:
    if alg.sym_d is None:
        raise ValueError(f"symmetric d-constants are only provided for su(3), not {alg.name}")
    return alg.sym_d


def casimir_c2(alg: LieAlgebra, mu) -> np.ndarray:
    mu = np.asarray(mu, dtype=float)
    return np.einsum("...j,jk,...k->...", mu, alg.casimir_metric, mu)


def casimir_c3(alg: LieAlgebra, mu) -> np.ndarray:
    d = symmetric_d_constants(alg)
    mu = np.asarray(mu, dtype=float)
    return np.einsum("jkl,...j,...k,...l->...", d, mu, mu, mu)


def ad_star(alg: LieAlgebra, xi, mu) -> np.ndarray:
    """Coordinates of ad*_xi mu, i.e. <ad*_xi mu, gamma_l> = <mu, [xi, gamma_l]>."""
    return np.einsum("klm,...k,...m->...l", alg.struct_c, np.asarray(xi, float), np.asarray(mu, float))


def adjoint_matrix(alg: LieAlgebra, U) -> np.ndarray:
    """A[k, j] = k-th coefficient of U gamma_j U^{-1}."""
    U = np.asarray(U, dtype=complex)
    conj = U @ alg.basis @ np.linalg.inv(U)
    return alg.matrix_to_vector(conj).T


def coadjoint_action(alg: LieAlgebra, U, mu, tol: float = 1e-10) -> np.ndarray:
    """Ad*_{U^{-1}} mu, the action that makes the unit momentum maps equivariant."""
    U = alg.check_group_element(U, tol)
    A = adjoint_matrix(alg, np.linalg.inv(U))
    return np.asarray(mu, float) @ A


def random_algebra_element(alg: LieAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return scale * rng.standard_normal(alg.dim)


def exp_element(alg: LieAlgebra, xi) -> np.ndarray:
    return expm(alg.vector_to_matrix(xi))


def random_group_element(alg: LieAlgebra, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    return exp_element(alg, random_algebra_element(alg, rng, scale))
