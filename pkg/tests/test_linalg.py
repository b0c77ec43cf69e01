import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from secure_layered.channel import gram
from secure_layered.linalg import (
    as_hermitian,
    dominant_component,
    frob_inner,
    herm_eig,
    is_psd,
    min_eig,
    numerical_rank,
)

from conftest import random_hermitian


def test_herm_eig_identity():
    e = herm_eig(np.eye(3))
    np.testing.assert_allclose(e.eigenvalues, [1, 1, 1])


def test_herm_eig_diag_descending_standard_basis():
    e = herm_eig(np.diag([2.0, -1.0]))
    np.testing.assert_allclose(e.eigenvalues, [2, -1])
    np.testing.assert_allclose(np.abs(e.eigenvectors), np.eye(2))


def test_herm_eig_outer_product():
    v = np.array([1, 1j]) / np.sqrt(2)
    e = herm_eig(np.outer(v, v.conj()))
    np.testing.assert_allclose(e.eigenvalues, [1, 0], atol=1e-14)
    assert abs(abs(np.vdot(v, e.eigenvectors[:, 0])) - 1) < 1e-12


def test_reconstruction(rng):
    for n in (1, 2, 5, 9):
        a = random_hermitian(rng, n)
        e = herm_eig(a)
        assert np.linalg.norm(e.reconstruct() - a) <= 1e-9 * np.linalg.norm(a)


def test_non_hermitian_rejected():
    with pytest.raises(ValueError):
        as_hermitian(np.array([[1, 2], [0, 1]]))
    with pytest.raises(ValueError):
        herm_eig(np.ones((2, 3)))


@pytest.mark.parametrize("a, expected", [
    (np.eye(4), 4),
    (np.diag([1.0, 1e-9]), 1),
    (np.zeros((3, 3)), 0),
])
def test_numerical_rank(a, expected):
    assert numerical_rank(a, 1e-6) == expected


def test_rank_of_outer_products(rng):
    for _ in range(20):
        w = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        assert numerical_rank(gram(w), 1e-6) == 1


@settings(max_examples=50, deadline=None)
@given(st.floats(1e-6, 1e6), st.integers(0, 2**31))
def test_rank_scale_invariant(c, seed):
    rng = np.random.default_rng(seed)
    a = random_hermitian(rng, 4, psd=True)
    a[:, 0] = a[0, :] = 0
    assert numerical_rank(c * a, 1e-6) == numerical_rank(a, 1e-6)


def test_rank_tolerance_domain():
    with pytest.raises(ValueError):
        numerical_rank(np.eye(2), 0.0)


def test_is_psd():
    assert is_psd(np.eye(2))
    assert not is_psd(np.diag([1.0, -0.5]), 1e-9)
    assert is_psd(np.zeros((2, 2)))
    assert min_eig(np.diag([3.0, -2.0])) == pytest.approx(-2.0)


def test_dominant_component_examples():
    lam, u = dominant_component(gram(np.array([3.0, 4.0])))
    assert lam == pytest.approx(25)
    np.testing.assert_allclose(u, [0.6, 0.8], atol=1e-12)
    lam, u = dominant_component(np.eye(2))
    assert lam == pytest.approx(1)
    np.testing.assert_allclose(u, [1, 0], atol=1e-12)
    lam, u = dominant_component(np.diag([5.0, 2.0]))
    np.testing.assert_allclose(u, [1, 0], atol=1e-12)


def test_dominant_component_phase_and_determinism(rng):
    a = random_hermitian(rng, 5, psd=True)
    l1, u1 = dominant_component(a)
    l2, u2 = dominant_component(a.copy())
    assert l1 == l2 and np.array_equal(u1, u2)
    k = np.flatnonzero(np.abs(u1) > 1e-12)[0]
    assert u1[k].imag == 0 and u1[k].real > 0
    with pytest.raises(ValueError):
        dominant_component(np.zeros((2, 2)))


def test_frob_inner():
    assert frob_inner(np.eye(2), np.eye(2)) == 2
    assert frob_inner(gram([1, 0]), gram([2, 0])) == pytest.approx(4)
    assert frob_inner(gram([1, 1j]), gram([1, -1j])) == pytest.approx(0, abs=1e-15)


def test_frob_inner_symmetric(rng):
    for _ in range(20):
        a, b = random_hermitian(rng, 4), random_hermitian(rng, 4)
        x, y = frob_inner(a, b), frob_inner(b, a)
        assert abs(x - y) <= 1e-12 * max(1, abs(x))
