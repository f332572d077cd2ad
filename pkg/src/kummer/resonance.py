"""Resonance signatures, circle actions, the regularizing map f and the ratio invariant R.

Mixed-sign (n:-m) resonances live in the signed-form picture: the state
uses weights ``k = (1, -1)`` and the positive-exponent map.  Standard-form
initial data is brought over with :func:`conjugate_second`.

All point-wise maps accept batches of shape ``(..., d)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import prod
from typing import Sequence, Tuple

import numpy as np

from .errors import DomainError, DimensionError, SignatureError
from .phase_space import EPS_DOM


@dataclass(frozen=True)
class ResonanceSignature:
    """Integer frequency vector ``n``.

    A negative entry is only accepted in the second slot of a two-dimensional
    signature (the n:-m case).
    """

    n: Tuple[int, ...]

    def __post_init__(self):
        n = tuple(int(x) for x in self.n)
        object.__setattr__(self, "n", n)
        if len(n) < 1:
            raise SignatureError("signature needs at least one frequency")
        if any(x == 0 for x in n):
            raise SignatureError("frequency must be nonzero")
        negatives = [j for j, x in enumerate(n) if x < 0]
        if negatives and (len(n) != 2 or negatives != [1]):
            raise SignatureError(
                "negative frequencies are only supported as the second entry of a 2-d signature")

    @classmethod
    def parse(cls, text: str) -> "ResonanceSignature":
        try:
            n = [int(tok) for tok in text.replace(":", ",").split(",") if tok.strip()]
        except ValueError as exc:
            raise SignatureError(f"cannot parse signature {text!r}") from exc
        return cls(tuple(n))

    @property
    def d(self) -> int:
        return len(self.n)

    @cached_property
    def nu(self) -> np.ndarray:
        a = [abs(x) for x in self.n]
        return np.array([prod(a[:j] + a[j + 1:]) for j in range(self.d)], dtype=np.int64)

    @cached_property
    def N(self) -> int:
        return prod(abs(x) for x in self.n)

    @cached_property
    def weights(self) -> np.ndarray:
        return np.sign(np.array(self.n, dtype=float))

    @property
    def mixed(self) -> bool:
        return any(x < 0 for x in self.n)

    @property
    def positive(self) -> "ResonanceSignature":
        return ResonanceSignature(tuple(abs(x) for x in self.n))

    def ones(self) -> "ResonanceSignature":
        """Unit signature carrying the same sign pattern."""
        return ResonanceSignature(tuple(1 if x > 0 else -1 for x in self.n))

    @property
    def preimage_multiplicity(self) -> int:
        """Number of points in a generic fiber of :func:`f_map`."""
        return int(np.prod(self.nu))

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.n)


def _sig(sig) -> ResonanceSignature:
    if isinstance(sig, ResonanceSignature):
        return sig
    return ResonanceSignature(tuple(sig))


def _check(sig: ResonanceSignature, a, eps: float = EPS_DOM) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape[-1:] != (sig.d,):
        raise DimensionError(f"point has shape {a.shape}, signature has d={sig.d}")
    if np.any(np.abs(a) <= eps):
        raise DomainError("coordinate at the excluded origin")
    return a


def _unit_phase(a: np.ndarray) -> np.ndarray:
    u = a / np.abs(a)
    return u / np.abs(u)


def conjugate_second(a) -> np.ndarray:
    """(a1, a2) -> (a1, conj a2): standard-form n:-m data to the signed-form picture."""
    a = np.array(a, dtype=complex)
    a[..., 1] = np.conj(a[..., 1])
    return a


def circle_action(sig, theta: float, a) -> np.ndarray:
    sig = _sig(sig)
    a = _check(sig, a)
    return np.exp(1j * np.asarray(sig.n) * theta) * a


def circle_generator(sig, a, omega: float = 1.0) -> np.ndarray:
    sig = _sig(sig)
    a = _check(sig, a)
    return 1j * omega * np.asarray(sig.n) * a


def f_map(sig, a) -> np.ndarray:
    """b_j = a_j^nu_j / (sqrt(nu_j) |a_j|^(nu_j - 1))."""
    sig = _sig(sig)
    a = _check(sig, a)
    nu = sig.nu
    r = np.abs(a)
    phase = np.exp(1j * nu * np.angle(_unit_phase(a)))
    return np.where(nu == 1, a, r / np.sqrt(nu) * phase)


def f_jacobian(sig, a) -> Tuple[np.ndarray, np.ndarray]:
    """Slot-wise Wirtinger derivatives ``(db_j/da_j, db_j/d(conj a_j))`` of :func:`f_map`."""
    sig = _sig(sig)
    a = _check(sig, a)
    nu = sig.nu
    theta = np.angle(_unit_phase(a))
    s = np.sqrt(nu)
    db_da = (nu + 1) / (2 * s) * np.exp(1j * (nu - 1) * theta)
    db_dabar = -(nu - 1) / (2 * s) * np.exp(1j * (nu + 1) * theta)
    return db_da, db_dabar


def f_real_jacobian(sig, a) -> np.ndarray:
    """Real ``2d x 2d`` Jacobian of :func:`f_map` in the ``(x_1, y_1, ...)`` ordering."""
    A, B = f_jacobian(sig, a)
    d = A.size
    J = np.zeros((2 * d, 2 * d))
    P, M = A + B, A - B
    for j in range(d):
        J[2 * j:2 * j + 2, 2 * j:2 * j + 2] = [[P[j].real, -M[j].imag],
                                               [P[j].imag, M[j].real]]
    return J


def r_invariant(sig, a) -> np.ndarray:
    """R(a) = (1/2) sum_j sign(n_j) |a_j|^2 / nu_j."""
    sig = _sig(sig)
    a = _check(sig, a)
    return 0.5 * np.sum(sig.weights * np.abs(a) ** 2 / sig.nu, axis=-1)


def r_gradient_real(sig, a) -> np.ndarray:
    """Real gradient of :func:`r_invariant` (single point)."""
    sig = _sig(sig)
    a = _check(sig, a).reshape(-1)
    c = sig.weights / sig.nu
    g = np.empty(2 * sig.d)
    g[0::2] = c * a.real
    g[1::2] = c * a.imag
    return g


def circle_momentum(sig, a) -> np.ndarray:
    """(1/2) sum_j n_j |a_j|^2, which equals N * R for positive signatures."""
    sig = _sig(sig)
    if sig.mixed:
        raise SignatureError("circle momentum is defined for positive frequencies only")
    a = _check(sig, a)
    J = 0.5 * np.sum(np.asarray(sig.n) * np.abs(a) ** 2, axis=-1)
    NR = sig.N * r_invariant(sig, a)
    assert np.allclose(J, NR, rtol=1e-12, atol=0.0)
    return J


def random_points(sig, count: int, rng: np.random.Generator,
                  modulus: Sequence[float] = (0.3, 2.0)) -> np.ndarray:
    """Sample ``count`` points with ``|a_j|`` uniform in ``modulus`` and uniform phases."""
    d = _sig(sig).d
    r = rng.uniform(modulus[0], modulus[1], size=(count, d))
    phi = rng.uniform(0.0, 2 * np.pi, size=(count, d))
    return r * np.exp(1j * phi)
