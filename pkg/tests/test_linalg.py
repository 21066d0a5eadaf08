import numpy as np
import pytest
from hypothesis import given, strategies as st

from bellsteer.linalg import (NotHermitian, fix_phase, hermitian_eig, is_projector, is_unitary,
                              ket_projector, random_hermitian, random_unitary, top_eigvec)

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 9)


@given(dims, seeds)
def test_jacobi_matches_numpy(n, seed):
    m = random_hermitian(n, np.random.default_rng(seed))
    w, v = hermitian_eig(m)
    # numpy is only the oracle here
    assert np.allclose(w, np.linalg.eigvalsh(m), atol=1e-10)
    assert np.allclose(v.conj().T @ v, np.eye(n), atol=1e-10)
    assert np.allclose(m @ v, v * w, atol=1e-10)


@given(st.integers(2, 6), seeds)
def test_degenerate_spectrum(n, seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(n, rng)
    w0 = np.repeat([-1.0, 2.0], [n // 2, n - n // 2])
    m = u @ np.diag(w0) @ u.conj().T
    w, v = hermitian_eig(m)
    assert np.allclose(w, w0, atol=1e-10)
    assert np.allclose(m @ v, v * w, atol=1e-10)


def test_real_symmetric_input():
    m = np.array([[2.0, 1.0], [1.0, 2.0]])
    w, v = hermitian_eig(m)
    assert np.allclose(w, [1, 3])
    lam, vec = top_eigvec(m)
    assert lam == pytest.approx(3)
    assert np.allclose(np.abs(vec), [2 ** -0.5] * 2)


def test_deterministic():
    m = random_hermitian(5, np.random.default_rng(3))
    a, b = hermitian_eig(m), hermitian_eig(m)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_rejects_bad_input():
    with pytest.raises(NotHermitian):
        hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        hermitian_eig(np.zeros((2, 3)))


def test_predicates():
    rng = np.random.default_rng(0)
    assert is_unitary(random_unitary(4, rng))
    assert is_projector(ket_projector([1, 1j]) / 2)
    assert not is_projector(np.eye(2) * 0.5)


def test_fix_phase():
    v = fix_phase(np.array([0, 1j, 1]))
    assert v[1] == pytest.approx(1) and v[2] == pytest.approx(-1j)
