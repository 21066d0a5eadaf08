"""Quantum realizations: pure states with projective measurements.

Projectors for party ``j`` are stored as an array of shape
``(inputs, outputs, d_j, d_j)``. States are flat vectors on the tensor
product in party order.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .linalg import PROJECTOR_TOL, hermitian_eig, is_hermitian
from .scenario import (INPUT_LETTERS, OUTPUT_LETTERS, PARTY_LETTERS, Behavior,
                       BellExpression, Scenario, ScenarioMismatch)

STATE_TOL = 1e-12
ZERO_WEIGHT = 1e-14


class InvalidRealization(ValueError):
    pass


def _projector_sets(mats, tol):
    m = np.array(mats, dtype=complex)
    if m.ndim != 4 or m.shape[2] != m.shape[3]:
        raise InvalidRealization("measurements must have shape (inputs, outputs, d, d)")
    d = m.shape[2]
    for x in range(m.shape[0]):
        total = m[x].sum(axis=0)
        if np.abs(total - np.eye(d)).max() > tol:
            raise InvalidRealization(f"projectors for input {x} do not sum to the identity")
        for a in range(m.shape[1]):
            p = m[x, a]
            if not is_hermitian(p, tol) or np.abs(p @ p - p).max() > tol:
                raise InvalidRealization(f"element ({x}, {a}) is not a projector")
        for a, b in itertools.combinations(range(m.shape[1]), 2):
            if np.abs(m[x, a] @ m[x, b]).max() > tol:
                raise InvalidRealization(f"projectors ({x}, {a}) and ({x}, {b}) are not orthogonal")
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class Realization:
    state: np.ndarray
    measurements: tuple[np.ndarray, ...]
    tol: float = field(default=PROJECTOR_TOL, repr=False)

    def __post_init__(self):
        meas = tuple(_projector_sets(m, self.tol) for m in self.measurements)
        if len(meas) not in (2, 3):
            raise InvalidRealization("two or three parties expected")
        object.__setattr__(self, "measurements", meas)
        psi = np.array(self.state, dtype=complex).ravel()
        if psi.size != int(np.prod(self.dims)):
            raise InvalidRealization(f"state has {psi.size} amplitudes, dims {self.dims} need {int(np.prod(self.dims))}")
        if abs(np.vdot(psi, psi).real - 1) > STATE_TOL:
            raise InvalidRealization("state is not normalized")
        psi.setflags(write=False)
        object.__setattr__(self, "state", psi)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(m.shape[2] for m in self.measurements)

    @property
    def parties(self) -> int:
        return len(self.measurements)

    @property
    def scenario(self) -> Scenario:
        return Scenario(tuple(m.shape[0] for m in self.measurements),
                        tuple(m.shape[1] for m in self.measurements))

    def tensor(self) -> np.ndarray:
        return self.state.reshape(self.dims)

    def projector(self, party, x, a):
        return self.measurements[party][x, a]

    def swapped(self) -> Realization:
        """Same bipartite realization with Alice and Bob exchanged."""
        if self.parties != 2:
            raise InvalidRealization("party swap is bipartite only")
        return Realization(self.tensor().T.ravel(), self.measurements[::-1])

    def to_dict(self) -> dict:
        def c(arr):
            arr = np.asarray(arr)
            return np.stack([arr.real, arr.imag], axis=-1).tolist()
        return {
            "dims": list(self.dims),
            "state": c(self.state),
            "measurements": [c(m) for m in self.measurements],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> Realization:
        def z(v):
            arr = np.asarray(v, dtype=float)
            return arr[..., 0] + 1j * arr[..., 1]
        r = cls(z(doc["state"]), tuple(z(m) for m in doc["measurements"]))
        if list(r.dims) != list(doc["dims"]):
            raise InvalidRealization("declared dims disagree with measurement shapes")
        return r

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> Realization:
        return cls.from_dict(json.loads(text))


def behavior_of(r: Realization) -> Behavior:
    k = r.parties
    bra = "".join("ijk"[j] for j in range(k))
    ket = "".join("IJK"[j] for j in range(k))
    ops = [f"{INPUT_LETTERS[j]}{OUTPUT_LETTERS[j]}{bra[j]}{ket[j]}" for j in range(k)]
    out = OUTPUT_LETTERS[:k] + INPUT_LETTERS[:k]
    spec = f"{bra}," + ",".join(ops) + f",{ket}->{out}"
    psi = r.tensor()
    p = np.einsum(spec, psi.conj(), *r.measurements, psi, optimize=True).real
    return Behavior(r.scenario, p)


def steering_parties(direction, parties: int) -> tuple[int, ...]:
    """Normalize a steering direction to the tuple of steering parties.

    Accepts ``"A->B"``, ``"B->A"``, the tripartite types ``"i"`` / ``"ii"``,
    or an explicit tuple of party indices.
    """
    if isinstance(direction, str):
        key = direction.replace(" ", "")
        if key in ("i", "ii"):
            if parties != 3:
                raise ValueError("steering types i and ii need three parties")
            return (0,) if key == "i" else (0, 1)
        if "->" in key:
            src, _, dst = key.partition("->")
            if any(c not in PARTY_LETTERS[:parties] for c in src + dst):
                raise ValueError(f"unknown direction {direction!r}")
            idx = tuple(sorted(PARTY_LETTERS.index(c) for c in src))
            rest = tuple(sorted(PARTY_LETTERS.index(c) for c in dst))
            # source and target must split the parties
            if not idx or not rest or len(set(idx + rest)) != parties or len(idx + rest) != parties:
                raise ValueError(f"unknown direction {direction!r}")
            return idx
        raise ValueError(f"unknown direction {direction!r}")
    idx = tuple(sorted(int(j) for j in direction))
    if not idx or len(idx) >= parties or max(idx) >= parties:
        raise ValueError(f"invalid steering parties {direction!r}")
    return idx


def direction_label(steering: tuple[int, ...], parties: int) -> str:
    rest = [j for j in range(parties) if j not in steering]
    return "".join(PARTY_LETTERS[j] for j in steering) + "->" + "".join(PARTY_LETTERS[j] for j in rest)


def _as_tuple(v):
    if isinstance(v, (tuple, list)):
        return tuple(int(i) for i in v)
    return (int(v),)


@dataclass(frozen=True, eq=False)
class SteeredState:
    """Conditional state of the non-steering parties; ``rho`` is None on a zero-weight branch."""

    rho: np.ndarray | None
    weight: float
    steering: tuple[int, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    @property
    def zero_weight(self) -> bool:
        return self.rho is None


def _apply_local(psi, party, op):
    moved = np.moveaxis(psi, party, 0)
    out = np.tensordot(op, moved, axes=([1], [0]))
    return np.moveaxis(out, 0, party)


def steered_state(r: Realization, x, a, party=0) -> SteeredState:
    steering = _as_tuple(party)
    xs, as_ = _as_tuple(x), _as_tuple(a)
    if not (len(steering) == len(xs) == len(as_)):
        raise ValueError("one input and one outcome per steering party")
    psi = r.tensor()
    for j, xj, aj in zip(steering, xs, as_):
        psi = _apply_local(psi, j, r.projector(j, xj, aj))
    rest = [j for j in range(r.parties) if j not in steering]
    phi = np.transpose(psi, list(steering) + rest)
    d_s = int(np.prod([r.dims[j] for j in steering]))
    phi = phi.reshape(d_s, -1)
    w = float(np.vdot(phi, phi).real)
    if w < ZERO_WEIGHT:
        return SteeredState(None, w, steering, xs, as_)
    rho = phi.T @ phi.conj() / w
    return SteeredState(rho, w, steering, xs, as_)


@dataclass(frozen=True, eq=False)
class EffectiveOperator:
    matrix: np.ndarray
    steering: tuple[int, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    eigenvalues: np.ndarray = field(init=False, repr=False)
    eigenvectors: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        w, v = hermitian_eig(m)
        for arr in (m, w, v):
            arr.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "eigenvalues", w)
        object.__setattr__(self, "eigenvectors", v)

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    def expectation(self, rho) -> float:
        return float(np.trace(np.asarray(rho) @ self.matrix).real)


def effective_operator(expr: BellExpression, r: Realization, direction, context) -> EffectiveOperator:
    """Coefficient-weighted sum of the steered parties' projectors.

    ``context`` is ``(inputs, outputs)`` of the steering parties, e.g.
    ``(x, a)`` for ``"A->B"`` or ``((x, y), (a, b))`` for type ``"ii"``.
    """
    if expr.scenario != r.scenario:
        raise ScenarioMismatch("expression and realization live in different scenarios")
    k = r.parties
    steering = steering_parties(direction, k)
    xs, as_ = _as_tuple(context[0]), _as_tuple(context[1])
    s = expr.scenario
    for j, xj, aj in zip(steering, xs, as_):
        if not (0 <= xj < s.inputs[j] and 0 <= aj < s.outputs[j]):
            raise IndexError(f"context {context} out of range")
    rest = [j for j in range(k) if j not in steering]
    dim = int(np.prod([r.dims[j] for j in rest]))
    total = np.zeros((dim, dim), dtype=complex)
    v = expr.coefficients
    fixed_in = dict(zip(steering, xs))
    fixed_out = dict(zip(steering, as_))
    ranges = [itertools.product(range(s.inputs[j]), range(s.outputs[j])) for j in rest]
    for combo in itertools.product(*ranges):
        ins, outs = dict(fixed_in), dict(fixed_out)
        for j, (yj, bj) in zip(rest, combo):
            ins[j], outs[j] = yj, bj
        coeff = v[tuple(outs[j] for j in range(k)) + tuple(ins[j] for j in range(k))]
        if coeff == 0:
            continue
        op = np.eye(1, dtype=complex)
        for j, (yj, bj) in zip(rest, combo):
            op = np.kron(op, r.projector(j, yj, bj))
        total += coeff * op
    return EffectiveOperator(total, steering, xs, as_)


def contexts(scenario: Scenario, steering: tuple[int, ...]):
    """All ``(inputs, outputs)`` contexts of the steering parties, inputs outermost."""
    ins = itertools.product(*(range(scenario.inputs[j]) for j in steering))
    for xs in ins:
        for as_ in itertools.product(*(range(scenario.outputs[j]) for j in steering)):
            yield xs, as_


# --- constructors -----------------------------------------------------------

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def observable_projectors(obs) -> np.ndarray:
    """Projectors onto the +1 and -1 eigenspaces of a +-1-valued observable."""
    obs = np.asarray(obs, dtype=complex)
    eye = np.eye(len(obs))
    return np.array([(eye + obs) / 2, (eye - obs) / 2])


def planar_qubit_observable(angle) -> np.ndarray:
    """``cos(angle) Z + sin(angle) X``."""
    return np.cos(angle) * PAULI_Z + np.sin(angle) * PAULI_X


def qubit_measurements(*observables) -> np.ndarray:
    return np.array([observable_projectors(o) for o in observables])


def phi_plus(d=2) -> np.ndarray:
    return np.eye(d, dtype=complex).ravel() / np.sqrt(d)


def partially_entangled(theta) -> np.ndarray:
    """``cos(theta)|00> + sin(theta)|11>``."""
    return np.array([np.cos(theta), 0, 0, np.sin(theta)], dtype=complex)


def chsh_realization() -> Realization:
    """Maximal CHSH violation: Phi+, Alice Z/X, Bob (Z +- X)/sqrt2."""
    s = 1 / np.sqrt(2)
    alice = qubit_measurements(PAULI_Z, PAULI_X)
    bob = qubit_measurements(s * (PAULI_Z + PAULI_X), s * (PAULI_Z - PAULI_X))
    return Realization(phi_plus(), (alice, bob))


def random_realization(dims, inputs, outputs, rng) -> Realization:
    """Random pure state with random rank-split projective measurements."""
    from .linalg import random_unitary

    psi = rng.standard_normal(int(np.prod(dims))) + 1j * rng.standard_normal(int(np.prod(dims)))
    psi /= np.linalg.norm(psi)
    meas = []
    for d, m, n in zip(dims, inputs, outputs):
        sets = []
        for _ in range(m):
            u = random_unitary(d, rng)
            cut = np.sort(rng.choice(np.arange(1, d), size=n - 1, replace=False)) if n <= d else None
            if cut is None:
                raise ValueError("more outcomes than dimensions")
            bounds = [0, *cut.tolist(), d]
            sets.append([u[:, bounds[i]:bounds[i + 1]] @ u[:, bounds[i]:bounds[i + 1]].conj().T
                         for i in range(n)])
        meas.append(np.array(sets))
    return Realization(psi, tuple(meas))
