"""Small dense complex linear algebra.

The eigensolver is a cyclic Jacobi sweep for Hermitian matrices, meant for
the handful-of-dimensions operators that show up in steering problems.
"""
from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10
PROJECTOR_TOL = 1e-10
JACOBI_TOL = 1e-12
MAX_DIM = 32


class NotHermitian(ValueError):
    pass


def _inf_norm(m):
    return float(np.abs(m).max(initial=0.0))


def is_hermitian(m, tol=HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    return _inf_norm(m - m.conj().T) <= tol


def is_unitary(m, tol=UNITARY_TOL) -> bool:
    m = np.asarray(m)
    return _inf_norm(m @ m.conj().T - np.eye(len(m))) <= tol


def is_projector(m, tol=PROJECTOR_TOL) -> bool:
    m = np.asarray(m)
    return is_hermitian(m, tol) and _inf_norm(m @ m - m) <= tol


def dagger(m):
    return np.asarray(m).conj().T


def ket_projector(v):
    v = np.asarray(v, dtype=complex)
    return np.outer(v, v.conj())


def kron(*ops):
    out = np.eye(1, dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def hermitian_eig(m, tol=JACOBI_TOL, max_sweeps=100):
    """Eigen-decomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(w, v)`` with eigenvalues ``w`` ascending and orthonormal
    eigenvectors in the columns of ``v``. Sweeps run over pairs ``(p, q)``
    in row order, so the result is deterministic.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("expected a square matrix")
    n = a.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds {MAX_DIM}")
    scale = max(1.0, _inf_norm(a))
    if _inf_norm(a - a.conj().T) > HERMITIAN_TOL * scale:
        raise NotHermitian("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    v = np.eye(n, dtype=complex)
    thresh = tol * scale
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.abs(a - np.diag(np.diag(a))) ** 2))
        if off <= thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                r = abs(apq)
                if r <= 1e-300:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2 * r)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1 / np.sqrt(1 + t * t)
                s = t * c
                # phase on q makes the pivot real, then a real plane rotation zeroes it
                g = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                a[:, idx] = a[:, idx] @ g
                a[idx, :] = g.conj().T @ a[idx, :]
                a[p, q] = a[q, p] = 0.0
                v[:, idx] = v[:, idx] @ g
    else:
        raise RuntimeError("Jacobi iteration did not converge")
    w = np.real(np.diag(a))
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def top_eigvec(m):
    """Largest eigenvalue and a unit eigenvector for it."""
    w, v = hermitian_eig(m)
    return float(w[-1]), v[:, -1]


def fix_phase(v, tol=1e-12):
    """Rotate the global phase so the first non-negligible entry is real positive."""
    v = np.asarray(v, dtype=complex)
    for c in v:
        if abs(c) > tol:
            return v * (abs(c) / c)
    return v


def random_unitary(n, rng):
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_hermitian(n, rng):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (z + z.conj().T) / 2
