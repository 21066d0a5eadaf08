"""Alternating maximization of a bipartite Bell expression over pure-state realizations."""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .linalg import hermitian_eig, random_unitary
from .quantum import Realization
from .scenario import BellExpression

log = logging.getLogger(__name__)

STAGNATION_TOL = 1e-12
MONOTONE_SLACK = 1e-10


class NotMonotone(AssertionError):
    pass


def _positive_projector(k):
    """Projector onto the eigenvectors of ``k`` with nonnegative eigenvalue."""
    w, v = hermitian_eig(k)
    keep = v[:, w >= 0]
    return keep @ keep.conj().T


def _best_measurement(ks, basis=None, inner_iter=200):
    """Projective measurement maximizing ``sum_a Tr[P_a K_a]``.

    Two outcomes are solved exactly. With as many outcomes as dimensions
    the rank-one basis is improved by polar-decomposition steps, which
    never decrease the objective once every ``K_a`` is shifted positive.
    """
    n, d = len(ks), ks[0].shape[0]
    if n == 2:
        p0 = _positive_projector(ks[0] - ks[1])
        return np.array([p0, np.eye(d) - p0]), None
    if n != d:
        raise ValueError("see-saw supports two outcomes or as many outcomes as dimensions")
    shift = max(0.0, -min(hermitian_eig(k)[0][0] for k in ks)) + 1.0
    kp = [k + shift * np.eye(d) for k in ks]
    u = np.eye(d, dtype=complex) if basis is None else basis
    prev = -np.inf
    for _ in range(inner_iter):
        m = np.stack([kp[a] @ u[:, a] for a in range(n)], axis=1)
        left, _, right = np.linalg.svd(m)
        u = left @ right
        val = sum(np.vdot(u[:, a], kp[a] @ u[:, a]).real for a in range(n))
        if val - prev < 1e-14:
            break
        prev = val
    return np.array([np.outer(u[:, a], u[:, a].conj()) for a in range(n)]), u


def _bell_operator(v, pa, pb):
    return np.einsum("abxy,xaij,ybkl->ikjl", v, pa, pb).reshape(
        pa.shape[2] * pb.shape[2], pa.shape[2] * pb.shape[2])


def _value(v, psi, pa, pb):
    return float(np.einsum("ij,xaik,ybjl,kl,abxy->", psi.conj(), pa, pb, psi, v).real)


@dataclass(frozen=True)
class SeesawRun:
    value: float
    realization: Realization
    history: tuple[float, ...]
    seed_index: int


def _random_start(dims, scen, rng):
    meas = []
    for d, m, n in zip(dims, scen.inputs, scen.outputs):
        sets = []
        for _ in range(m):
            u = random_unitary(d, rng)
            if n == 2:
                k = (d + 1) // 2
                p0 = u[:, :k] @ u[:, :k].conj().T
                sets.append([p0, np.eye(d) - p0])
            elif n == d:
                sets.append([np.outer(u[:, a], u[:, a].conj()) for a in range(n)])
            else:
                raise ValueError("see-saw supports two outcomes or as many outcomes as dimensions")
        meas.append(np.array(sets))
    psi = rng.standard_normal(dims) + 1j * rng.standard_normal(dims)
    return psi / np.linalg.norm(psi), meas[0], meas[1]


def seesaw_run(expr: BellExpression, dims, rng, max_iter=2000, seed_index=0, polish=200) -> SeesawRun:
    """One restart: alternate Alice, Bob and state updates until the value stagnates.

    After stagnation below ``STAGNATION_TOL`` up to ``polish`` further
    sweeps run while the value still strictly increases, which pins the
    realization itself much more tightly than the value.
    """
    v = expr.coefficients
    scen = expr.scenario
    psi, pa, pb = _random_start(dims, scen, rng)
    dA, dB = dims
    bases_a = [None] * scen.inputs[0]
    bases_b = [None] * scen.inputs[1]
    history = [_value(v, psi, pa, pb)]
    extra = None
    for _ in range(max_iter):
        # Alice: K[x,a] = M B(x,a)^T M^dagger
        effB = np.einsum("abxy,ybjl->xajl", v, pb)
        ka = np.einsum("ij,xalj,kl->xaik", psi, effB, psi.conj())
        pa = pa.copy()
        for x in range(scen.inputs[0]):
            pa[x], bases_a[x] = _best_measurement(list(ka[x]), bases_a[x])
        step = [_value(v, psi, pa, pb)]
        # Bob: K[y,b] = M^T A(y,b)^T conj(M)
        effA = np.einsum("abxy,xaik->ybik", v, pa)
        kb = np.einsum("ij,ybki,kl->ybjl", psi, effA, psi.conj())
        pb = pb.copy()
        for y in range(scen.inputs[1]):
            pb[y], bases_b[y] = _best_measurement(list(kb[y]), bases_b[y])
        step.append(_value(v, psi, pa, pb))
        w, vec = hermitian_eig(_bell_operator(v, pa, pb))
        psi = vec[:, -1].reshape(dA, dB)
        step.append(_value(v, psi, pa, pb))
        prev = history[-1]
        for val in step:
            if val < prev - MONOTONE_SLACK:
                raise NotMonotone(f"see-saw value decreased from {prev} to {val}")
            prev = val
        history.append(step[-1])
        gain = history[-1] - history[-2]
        if extra is None:
            if gain <= STAGNATION_TOL:
                extra = 0
        else:
            extra += 1
        if extra is not None and (gain <= 0 or extra >= polish):
            break
    r = canonicalize(Realization(psi.ravel(), (pa, pb)))
    return SeesawRun(history[-1], r, tuple(history), seed_index)


def seesaw_maximize(expr: BellExpression, dims=(2, 2), restarts: int = 50, seed: int = 0,
                    max_iter: int = 2000) -> tuple[float, Realization]:
    """Best value and realization over seeded random restarts.

    Not a certificate of the global quantum maximum. Ties go to the
    lowest restart index.
    """
    if expr.scenario.parties != 2:
        raise ValueError("see-saw is bipartite only")
    if max(dims) > 8:
        raise ValueError("dimensions above 8 are not supported")
    runs = seesaw_runs(expr, dims, restarts, seed, max_iter)
    best = max(runs, key=lambda run: (run.value, -run.seed_index))
    return best.value, best.realization


def seesaw_runs(expr, dims=(2, 2), restarts=50, seed=0, max_iter=2000):
    seeds = np.random.SeedSequence(seed).spawn(restarts)
    runs = []
    for i, ss in enumerate(seeds):
        runs.append(seesaw_run(expr, tuple(dims), np.random.default_rng(ss), max_iter, i))
        log.debug("restart %d: %.15g", i, runs[-1].value)
    return runs


def canonicalize(r: Realization) -> Realization:
    """Rotate both parties into the Schmidt basis and fix the leftover phases.

    The state becomes ``sum_k s_k |kk>`` with ``s_k`` descending and
    nonnegative; Bob's first projector gets real nonnegative entries in
    its first row where they are nonzero.
    """
    dA, dB = r.dims
    m = r.tensor()
    u, s, vh = np.linalg.svd(m)
    A = u.conj().T
    B = vh.conj()
    # local unitaries act as M -> A M B^T; the phase gauge must keep the Schmidt form
    A2, B2 = A, B
    if dA == dB:
        p0 = B @ r.projector(1, 0, 0) @ B.conj().T
        phases = np.ones(dB, dtype=complex)
        for k in range(1, dB):
            c = p0[0, k]
            if abs(c) > 1e-12:
                phases[k] = abs(c) / c
        # opposite diagonal phases on the two sides leave sum_k s_k |kk> invariant
        B2 = np.diag(phases.conj()) @ B
        A2 = np.diag(phases) @ A
    psi = (A2 @ m @ B2.T).ravel()
    pa = np.einsum("ij,xajk,lk->xail", A2, r.measurements[0], A2.conj())
    pb = np.einsum("ij,xajk,lk->xail", B2, r.measurements[1], B2.conj())
    return Realization(psi, (pa, pb))
