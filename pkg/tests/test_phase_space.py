import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kummer.errors import DomainError
from kummer.phase_space import (ScalarField, as_point, canonical_one_form, from_real,
                                hamiltonian_vector_field, poisson_bracket, symplectic_matrix,
                                symplectic_pairing, to_real)
from kummer.reduction import preset_full_hamiltonian

from conftest import random_point


def test_pairing_examples():
    assert symplectic_pairing([1.0], [1j], [1]) == pytest.approx(-1.0, abs=1e-15)
    assert symplectic_pairing([1.0], [1j], [-1]) == pytest.approx(1.0, abs=1e-15)
    u = np.array([0.3 - 1.2j, 2.0 + 0.1j])
    assert symplectic_pairing(u, u, [1, -1]) == pytest.approx(0.0, abs=1e-14)


def test_pairing_matches_matrix(rng):
    k = np.array([1.0, -1.0, 1.0])
    W = symplectic_matrix(k)
    for _ in range(10):
        u, v = random_point(rng, 3), random_point(rng, 3)
        assert to_real(u) @ W @ to_real(v) == pytest.approx(symplectic_pairing(u, v, k), abs=1e-13)


def test_one_form_examples():
    assert canonical_one_form([1.0], [1j], [1]) == pytest.approx(0.5)
    assert canonical_one_form([1.0], [1.0], [1]) == 0.0
    assert canonical_one_form([1, 1], [1j, 1j], [1, -1]) == pytest.approx(0.0, abs=1e-15)


def test_bracket_examples(rng):
    x = ScalarField(lambda a: a[0].real)
    y = ScalarField(lambda a: a[0].imag)
    m1 = ScalarField(lambda a: abs(a[0]) ** 2)
    m2 = ScalarField(lambda a: abs(a[1]) ** 2)
    for _ in range(5):
        a = random_point(rng, 2)
        assert poisson_bracket(x, y, a) == pytest.approx(-1.0, abs=1e-8)
        assert poisson_bracket(x, x, a) == 0.0
        assert poisson_bracket(m1, m2, a) == pytest.approx(0.0, abs=1e-8)


def test_field_examples():
    H = preset_full_hamiltonian("res12")
    np.testing.assert_allclose(hamiltonian_vector_field(H, [1, 1]), [2j, 1j], atol=1e-15)
    # same field through finite differences
    Hfd = ScalarField(H.value)
    np.testing.assert_allclose(hamiltonian_vector_field(Hfd, [1, 1]), [2j, 1j], atol=1e-8)
    osc = ScalarField(lambda a: 0.5 * np.sum(np.abs(a) ** 2))
    np.testing.assert_allclose(hamiltonian_vector_field(osc, [1, 1j]), [1j, -1], atol=1e-8)
    const = ScalarField(lambda a: 3.0)
    np.testing.assert_allclose(hamiltonian_vector_field(const, [1, 1j]), [0, 0], atol=1e-12)


def test_domain_guard():
    with pytest.raises(DomainError):
        as_point([1.0, 0.0])
    with pytest.raises(DomainError):
        as_point([1.0, 1e-13])
    as_point([1.0, 1e-13], eps=1e-14)


def test_real_roundtrip(rng):
    a = random_point(rng, 4)
    x = to_real(a)
    assert x[0] == a[0].real and x[1] == a[0].imag
    np.testing.assert_array_equal(from_real(x), a)


def test_antisymmetry_reality(rng, quad_fields):
    for k in ([1, 1], [1, -1]):
        F, G = quad_fields(2, 2)
        for _ in range(100):
            a = random_point(rng, 2)
            fg = poisson_bracket(F, G, a, k, imag_tol=1e-12)
            gf = poisson_bracket(G, F, a, k, imag_tol=1e-12)
            assert abs(fg + gf) <= 1e-12 * max(1.0, abs(fg))


def _fd_bracket(F, G, k):
    """{F, G} as a scalar field with finite-difference Wirtinger partials."""
    return ScalarField(lambda a: poisson_bracket(F, G, a, k), rel_step=1e-4)


def test_jacobi(rng, quad_fields):
    k = [1, -1, 1]
    F, G, H = quad_fields(3)
    for _ in range(5):
        a = random_point(rng, 3)
        jac = (poisson_bracket(F, _fd_bracket(G, H, k), a, k)
               + poisson_bracket(G, _fd_bracket(H, F, k), a, k)
               + poisson_bracket(H, _fd_bracket(F, G, k), a, k))
        assert abs(jac) <= 1e-6


def test_bracket_equals_form_of_fields(rng, quad_fields):
    for k in ([1, 1], [1, -1]):
        F, G = quad_fields(2, 2)
        for _ in range(20):
            a = random_point(rng, 2)
            XF = hamiltonian_vector_field(F, a, k)
            XG = hamiltonian_vector_field(G, a, k)
            lhs = symplectic_pairing(XF, XG, k)
            assert lhs == pytest.approx(poisson_bracket(F, G, a, k), abs=1e-8)


def test_leibniz(rng, quad_fields):
    F, G, H = quad_fields(2)
    FG = ScalarField(lambda a: F(a) * G(a))
    for _ in range(10):
        a = random_point(rng, 2)
        lhs = poisson_bracket(FG, H, a)
        rhs = F(a) * poisson_bracket(G, H, a) + poisson_bracket(F, H, a) * G(a)
        assert abs(lhs - rhs) <= 1e-6 * max(1.0, abs(rhs))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(0.2, 3.0), min_size=4, max_size=4),
       st.lists(st.floats(-np.pi, np.pi), min_size=2, max_size=2))
def test_quadratic_norm_bracket_vanishes(mods, phases):
    # |a_1|^2 generates a rotation of slot 1 only; it commutes with |a_1|^2 + |a_2|^2
    a = np.array(mods[:2]) * np.exp(1j * np.array(phases))
    m1 = ScalarField(lambda z: abs(z[0]) ** 2, grad=lambda z: (np.array([z[0].conj(), 0]), np.array([z[0], 0])))
    tot = ScalarField(lambda z: float(np.sum(np.abs(z) ** 2)), grad=lambda z: (z.conj(), z))
    assert abs(poisson_bracket(m1, tot, a)) <= 1e-12
