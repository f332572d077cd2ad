from itertools import permutations

import numpy as np
import pytest

from kummer.errors import GroupMembershipError
from kummer.lie_algebra import (ad_star, casimir_c2, casimir_c3, coadjoint_action, exp_element,
                                make_su_1_1, make_su_d, random_group_element, structure_constants,
                                symmetric_d_constants)

R3 = np.sqrt(3.0)

# nonzero d_jkl of su(3), 1-based, one representative per symmetric orbit
D_PUBLISHED = {
    (1, 1, 8): 1 / R3, (2, 2, 8): 1 / R3, (3, 3, 8): 1 / R3, (8, 8, 8): -1 / R3,
    (1, 4, 6): 0.5, (1, 5, 7): 0.5, (2, 4, 7): -0.5, (2, 5, 6): 0.5,
    (3, 4, 4): 0.5, (3, 5, 5): 0.5, (3, 6, 6): -0.5, (3, 7, 7): -0.5,
    (4, 4, 8): -0.5 / R3, (5, 5, 8): -0.5 / R3, (6, 6, 8): -0.5 / R3, (7, 7, 8): -0.5 / R3,
}


def inner(X, Y):
    return 0.5 * np.trace(X.conj().T @ Y).real


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_orthonormal_antihermitian_traceless(d):
    alg = make_su_d(d)
    G = np.array([[inner(a, b) for b in alg.basis] for a in alg.basis])
    np.testing.assert_allclose(G, np.eye(d * d - 1), atol=1e-15)
    for g in alg.basis:
        np.testing.assert_allclose(g.conj().T, -g, atol=0)
        assert abs(np.trace(g)) <= 1e-15


def test_su2_identification():
    alg = make_su_d(2)
    np.testing.assert_array_equal(alg.basis[2], 1j * np.diag([1, -1]))
    x1, x2, x3 = 0.3, -1.1, 0.7
    want = 1j * np.array([[x3, x1 + 1j * x2], [x1 - 1j * x2, -x3]])
    np.testing.assert_allclose(alg.vector_to_matrix([x1, x2, x3]), want, atol=1e-15)


def test_su3_roundtrip(rng):
    alg = make_su_d(3)
    xi = rng.standard_normal(8)
    np.testing.assert_allclose(alg.matrix_to_vector(alg.vector_to_matrix(xi)), xi, atol=1e-14)


def test_su2_structure_constants():
    c = structure_constants(make_su_d(2))
    # [gamma_1, gamma_2] = 2 gamma_3 for this basis, cyclic
    assert c[0, 1, 2] == pytest.approx(2.0)
    assert c[1, 2, 0] == pytest.approx(2.0)
    assert c[2, 0, 1] == pytest.approx(2.0)
    assert c[1, 0, 2] == pytest.approx(-2.0)
    eps = np.zeros((3, 3, 3))
    for (i, j, k), s in {(0, 1, 2): 1, (1, 2, 0): 1, (2, 0, 1): 1, (1, 0, 2): -1, (0, 2, 1): -1, (2, 1, 0): -1}.items():
        eps[i, j, k] = s
    np.testing.assert_allclose(c, 2 * eps, atol=1e-15)


@pytest.mark.parametrize("alg", [make_su_d(2), make_su_d(3), make_su_d(4), make_su_1_1()], ids=repr)
def test_structure_constants_properties(alg):
    c = structure_constants(alg)
    np.testing.assert_allclose(c, -c.transpose(1, 0, 2), atol=1e-15)
    assert np.all(np.einsum("jjl->jl", c) == 0)
    recon = np.einsum("jkl,lab->jkab", c, alg.basis)
    comm = np.einsum("jab,kbc->jkac", alg.basis, alg.basis) - np.einsum("kab,jbc->jkac", alg.basis, alg.basis)
    assert np.max(np.abs(comm - recon)) <= 1e-13
    jac = (np.einsum("jkm,mln->jkln", c, c) + np.einsum("klm,mjn->jkln", c, c)
           + np.einsum("ljm,mkn->jkln", c, c))
    assert np.max(np.abs(jac)) <= 1e-12


def test_su3_d_constants_match_published_list():
    dd = symmetric_d_constants(make_su_d(3))
    want = np.zeros((8, 8, 8))
    for idx, val in D_PUBLISHED.items():
        for p in permutations(idx):
            want[tuple(i - 1 for i in p)] = val
    assert np.max(np.abs(dd - want)) <= 1e-12
    for p in permutations(range(3)):
        np.testing.assert_allclose(dd, dd.transpose(p), atol=1e-15)


def test_d_constants_only_for_su3():
    with pytest.raises(ValueError):
        symmetric_d_constants(make_su_d(2))


def test_casimir_examples():
    alg = make_su_d(3)
    e = np.eye(8)
    assert casimir_c2(alg, e[0]) == pytest.approx(1.0)
    assert casimir_c3(alg, e[7]) == pytest.approx(-1 / R3, abs=1e-15)


def test_casimirs_invariant_under_coadjoint(rng):
    alg = make_su_d(3)
    for _ in range(20):
        U = random_group_element(alg, rng)
        mu = rng.standard_normal(8)
        nu = coadjoint_action(alg, U, mu)
        assert casimir_c2(alg, nu) == pytest.approx(casimir_c2(alg, mu), abs=1e-10)
        assert casimir_c3(alg, nu) == pytest.approx(casimir_c3(alg, mu), abs=1e-10)


def test_su11_casimir_invariant(rng):
    alg = make_su_1_1()
    for _ in range(20):
        U = random_group_element(alg, rng, scale=0.5)
        mu = rng.standard_normal(3)
        nu = coadjoint_action(alg, U, mu)
        assert casimir_c2(alg, nu) == pytest.approx(casimir_c2(alg, mu), rel=1e-10, abs=1e-10)


def test_ad_star(rng):
    alg = make_su_d(2)
    xi, mu = rng.standard_normal(3), rng.standard_normal(3)
    np.testing.assert_allclose(ad_star(alg, xi, mu), 2 * np.cross(mu, xi), atol=1e-14)
    np.testing.assert_allclose(ad_star(alg, xi, 2.5 * xi), 0, atol=1e-14)
    for d in (2, 3):
        alg = make_su_d(d)
        xi, mu = rng.standard_normal(alg.dim), rng.standard_normal(alg.dim)
        assert abs(ad_star(alg, xi, mu) @ mu) <= 1e-12


def test_coadjoint_examples(rng):
    alg = make_su_d(2)
    U = np.diag([np.exp(1j * np.pi / 2), np.exp(-1j * np.pi / 2)])
    np.testing.assert_allclose(coadjoint_action(alg, U, [1, 0, 0]), [-1, 0, 0], atol=1e-15)
    mu = rng.standard_normal(3)
    np.testing.assert_allclose(coadjoint_action(alg, np.eye(2), mu), mu, atol=1e-15)
    for _ in range(20):
        U = random_group_element(alg, rng)
        assert np.linalg.norm(coadjoint_action(alg, U, mu)) == pytest.approx(np.linalg.norm(mu), abs=1e-12)


@pytest.mark.parametrize("alg", [make_su_d(2), make_su_d(3), make_su_1_1()], ids=repr)
def test_coadjoint_is_group_action(alg, rng):
    mu = rng.standard_normal(alg.dim)
    for _ in range(10):
        U, V = random_group_element(alg, rng, 0.5), random_group_element(alg, rng, 0.5)
        lhs = coadjoint_action(alg, U @ V, mu)
        rhs = coadjoint_action(alg, U, coadjoint_action(alg, V, mu))
        assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.abs(lhs).max())


def test_su11_basis_and_exp(rng):
    alg = make_su_1_1()
    assert alg.dim == 3
    for eta in alg.basis:
        np.testing.assert_array_equal(eta.conj().T @ alg.K + alg.K @ eta, 0)
    for _ in range(20):
        U = exp_element(alg, 0.3 * rng.standard_normal(3))
        assert np.max(np.abs(U.conj().T @ alg.K @ U - alg.K)) <= 1e-12
    c = structure_constants(alg)
    assert c[0, 1, 2] == pytest.approx(2.0)
    assert c[1, 2, 0] == pytest.approx(-2.0)
    assert c[2, 0, 1] == pytest.approx(-2.0)


def test_group_membership_rejected():
    alg = make_su_d(2)
    with pytest.raises(GroupMembershipError):
        coadjoint_action(alg, 2 * np.eye(2), [1, 0, 0])
    with pytest.raises(GroupMembershipError):
        make_su_1_1().check_group_element(np.array([[0, 1], [-1, 0]]))
