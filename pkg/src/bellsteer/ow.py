"""Saturation checks for effective steering operators and searches for saturating games.

A Bell expression passes at a realization when every steered state with
nonzero weight reaches the top eigenvalue of its effective operator.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from .linalg import hermitian_eig
from .nsalgebra import ns_constant_value, generator_tables
from .quantum import (Realization, contexts, direction_label, effective_operator,
                      steered_state, steering_parties)
from .scenario import (CHSH_SCENARIO, INPUT_LETTERS, OUTPUT_LETTERS, BellExpression,
                       ScenarioMismatch, table_from_rows)

OW_TOL = 1e-7
GAMMA_AGREE_TOL = 1e-6
PURE_TOL = 1e-8
IMAG_TOL = 1e-8
SEARCH_SLACK = 1e-9


def default_tol() -> float:
    """OW gap tolerance, overridable through ``BELL_TOL``."""
    env = os.environ.get("BELL_TOL")
    return float(env) if env else OW_TOL


@dataclass(frozen=True)
class ContextReport:
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    weight: float
    expectation: float | None
    lambda_max: float
    steering: tuple[int, ...] = field(default=(0,), repr=False)

    @property
    def zero_weight(self) -> bool:
        return self.expectation is None

    @property
    def gap(self) -> float | None:
        if self.expectation is None:
            return None
        return self.lambda_max - self.expectation

    def to_dict(self) -> dict:
        d = {}
        for j, v in zip(self.steering, self.inputs):
            d[INPUT_LETTERS[j]] = v
        for j, v in zip(self.steering, self.outputs):
            d[OUTPUT_LETTERS[j]] = v
        d.update(weight=self.weight, expectation=self.expectation,
                 lambda_max=self.lambda_max, gap=self.gap)
        if self.zero_weight:
            d["zero_weight"] = True
        return d


@dataclass(frozen=True)
class OWReport:
    direction: str
    tol: float
    contexts: tuple[ContextReport, ...]

    @property
    def active(self):
        return [c for c in self.contexts if not c.zero_weight]

    @property
    def max_gap(self) -> float:
        return max((c.gap for c in self.active), default=0.0)

    @property
    def verdict(self) -> bool:
        return self.max_gap <= self.tol

    def context(self, *key) -> ContextReport:
        """Look up a context by ``inputs + outputs``, e.g. ``report.context(x, a)``."""
        for c in self.contexts:
            if c.inputs + c.outputs == tuple(key):
                return c
        raise KeyError(key)

    def to_dict(self) -> dict:
        return {
            "direction": self.direction,
            "tol": self.tol,
            "contexts": [c.to_dict() for c in self.contexts],
            "max_gap": self.max_gap,
            "verdict": "OW" if self.verdict else "not-OW",
        }


def ow_report(expr: BellExpression, r: Realization, direction="A->B", tol: float | None = None) -> OWReport:
    tol = default_tol() if tol is None else tol
    steering = steering_parties(direction, r.parties)
    rows = []
    for xs, as_ in contexts(expr.scenario, steering):
        op = effective_operator(expr, r, steering, (xs, as_))
        st = steered_state(r, xs, as_, steering)
        exp = None if st.zero_weight else op.expectation(st.rho)
        rows.append(ContextReport(xs, as_, st.weight, exp, op.lambda_max, steering))
    return OWReport(direction_label(steering, r.parties), tol, tuple(rows))


# --- qubit necessary conditions ---------------------------------------------

class NotApplicable(ValueError):
    pass


@dataclass(frozen=True)
class ProjectorParams:
    """Bob's outcome-0 projectors seen from the steered state's eigenbasis.

    ``p[y]`` is the diagonal entry and ``q[y]`` the (real) off-diagonal entry
    of the rotated projector for input ``y``.
    """

    p0: float
    q0: float
    p1: float
    q1: float

    @property
    def ratio(self) -> float | None:
        if abs(self.q1) < 1e-12:
            return None
        return self.q0 / self.q1


def _pure_vector(rho):
    w, v = hermitian_eig(rho)
    if w[-1] < 1 - PURE_TOL:
        raise NotApplicable("steered state is not pure")
    return v[:, -1]


def projector_params(r: Realization, x: int, a: int) -> ProjectorParams:
    if r.scenario != CHSH_SCENARIO or r.dims[1] != 2:
        raise NotApplicable("projector parameters need a (2,2,2,2) realization with a qubit on Bob's side")
    st = steered_state(r, x, a)
    if st.zero_weight:
        raise NotApplicable(f"context ({x}, {a}) has zero weight")
    s = _pure_vector(st.rho)
    perp = np.array([-np.conj(s[1]), np.conj(s[0])])
    diag = [float(np.vdot(s, r.projector(1, y, 0) @ s).real) for y in range(2)]
    off = [complex(np.vdot(s, r.projector(1, y, 0) @ perp)) for y in range(2)]
    # fix the free phase of the second basis vector so the leading off-diagonal is real and >= 0
    pivot = off[0] if abs(off[0]) > 1e-12 else off[1]
    phase = abs(pivot) / pivot if abs(pivot) > 1e-12 else 1.0
    q = [c * phase for c in off]
    if abs(q[0].imag) > IMAG_TOL or abs(q[1].imag) > IMAG_TOL:
        raise NotApplicable("rotated projectors have complex off-diagonals")
    return ProjectorParams(diag[0], q[0].real, diag[1], q[1].real)


def necessary_residual(expr: BellExpression, params: ProjectorParams, x: int, a: int) -> float:
    """Off-diagonal of the effective operator in the steered basis; zero when it can saturate."""
    v = expr.coefficients
    return params.q0 * (v[a, 0, x, 0] - v[a, 1, x, 0]) + params.q1 * (v[a, 0, x, 1] - v[a, 1, x, 1])


def all_projector_params(r: Realization) -> dict:
    out = {}
    for x in range(2):
        for a in range(2):
            try:
                out[x, a] = projector_params(r, x, a)
            except NotApplicable:
                out[x, a] = None
    return out


def ow_form(ratios, free) -> BellExpression:
    """Table whose last column is fixed by the ratios so the necessary condition holds.

    ``ratios[x][a]`` is ``q0/q1`` for context ``(x, a)``; ``free`` holds the
    twelve remaining entries row by row (three per row).
    """
    free = np.asarray(free, dtype=float).reshape(4, 3)
    rows = np.zeros((4, 4))
    for x in range(2):
        for a in range(2):
            ratio = ratios[x][a]
            if ratio is None or not np.isfinite(ratio):
                raise ValueError(f"ratio for context ({x}, {a}) is undefined")
            A, B, C = free[2 * x + a]
            rows[2 * x + a] = [A, B, C, ratio * (A - B) + C]
    return table_from_rows(rows, label="ow-form")


# --- one-parameter families ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class GammaFamily:
    """``base + gamma * direction`` where ``direction`` is a no-signaling constant."""

    base: BellExpression
    direction: BellExpression
    gamma_range: tuple[float, float] = (-10.0, 10.0)
    label: str = ""

    def __post_init__(self):
        if self.base.scenario != self.direction.scenario:
            raise ScenarioMismatch("base and direction live in different scenarios")
        if ns_constant_value(self.direction) is None:
            raise ValueError("direction table is not constant on no-signaling behaviors")

    def at(self, gamma: float) -> BellExpression:
        return (self.base + gamma * self.direction).relabel(f"{self.label}({gamma:g})")


@dataclass(frozen=True)
class GammaResult:
    gamma: float | None
    candidates: dict
    spread: float
    report: OWReport | None = None
    message: str = ""


def solve_gamma(family: GammaFamily, r: Realization, tol: float = GAMMA_AGREE_TOL,
                ow_tol: float | None = None, vacuous_tol: float = 1e-8) -> GammaResult:
    """Find the family member whose effective operators are diagonal in the steered bases.

    Each context gives an affine equation ``c0 + gamma * c1 = 0``. Contexts
    where both coefficients are below ``vacuous_tol`` hold for every gamma
    and are skipped. A common root is accepted only when the saturation
    report at that value passes.
    """
    params = all_projector_params(r)
    cands = {}
    for (x, a), pp in params.items():
        if pp is None:
            continue
        c0 = necessary_residual(family.base, pp, x, a)
        c1 = necessary_residual(family.direction, pp, x, a)
        if abs(c1) < vacuous_tol:
            if abs(c0) > vacuous_tol:
                return GammaResult(None, cands, float("inf"),
                                   message=f"context ({x}, {a}) cannot be satisfied by any gamma")
            continue
        cands[x, a] = -c0 / c1
    if not cands:
        return GammaResult(None, cands, 0.0, message="no context constrains gamma")
    vals = np.array(list(cands.values()))
    spread = float(vals.max() - vals.min())
    if spread > tol:
        return GammaResult(None, cands, spread, message=f"candidate spread {spread:.3g} exceeds {tol:g}")
    gamma = float(vals.mean())
    lo, hi = family.gamma_range
    if not lo <= gamma <= hi:
        return GammaResult(None, cands, spread, message=f"gamma {gamma:g} outside {family.gamma_range}")
    rep = ow_report(family.at(gamma), r, tol=ow_tol)
    if not rep.verdict:
        return GammaResult(None, cands, spread, rep, message="saturation fails at the common root")
    return GammaResult(gamma, cands, spread, rep)


# --- general search in (2,2,2,2) -------------------------------------------------

@dataclass(frozen=True)
class SearchResult:
    game: BellExpression | None
    constant: float | None
    margin: float
    rank: int
    report: OWReport | None = None
    message: str = ""


def _rotated_entries(r, x, a):
    """Diagonal pair and off-diagonal of each Bob projector in the steered basis."""
    st = steered_state(r, x, a)
    s = _pure_vector(st.rho)
    perp = np.array([-np.conj(s[1]), np.conj(s[0])])
    out = {}
    for y in range(2):
        for b in range(2):
            P = r.projector(1, y, b)
            out[y, b] = (np.vdot(s, P @ s).real, np.vdot(perp, P @ perp).real, np.vdot(s, P @ perp))
    return out


def ow_game_search(expr: BellExpression, r: Realization, tol: float | None = None,
                   bound: float = 10.0) -> SearchResult:
    """Look for an expression equal to ``expr`` minus a no-signaling constant that saturates at ``r``.

    Unknowns are the weights of the twelve generator tables. The
    off-diagonals of every effective operator in its steered basis must
    vanish (real and imaginary parts, so undefined ratios need no special
    case); a linear program then maximizes the worst margin between the
    steered diagonal entry and the orthogonal one.
    """
    tol = default_tol() if tol is None else tol
    if expr.scenario != CHSH_SCENARIO or r.dims[1] != 2:
        raise NotApplicable("search is implemented for (2,2,2,2) with a qubit on Bob's side")
    gens = generator_tables(1.0)
    G = np.stack([g.coefficients for g in gens], axis=-1)  # (a, b, x, y, 12)
    V = expr.coefficients
    eq_rows, eq_rhs, ub_rows, ub_rhs = [], [], [], []
    for x in range(2):
        for a in range(2):
            st = steered_state(r, x, a)
            if st.zero_weight:
                continue
            ent = _rotated_entries(r, x, a)
            off_v = sum(V[a, b, x, y] * ent[y, b][2] for y in range(2) for b in range(2))
            off_g = sum(G[a, b, x, y] * ent[y, b][2] for y in range(2) for b in range(2))
            # (V - G c) off-diagonal = 0
            for part in (np.real, np.imag):
                eq_rows.append(np.append(part(off_g), 0.0))
                eq_rhs.append(part(off_v))
            diff_v = sum(V[a, b, x, y] * (ent[y, b][0] - ent[y, b][1]) for y in range(2) for b in range(2))
            diff_g = sum(G[a, b, x, y] * (ent[y, b][0] - ent[y, b][1]) for y in range(2) for b in range(2))
            # t <= (V - G c)_00 - (V - G c)_11
            ub_rows.append(np.append(diff_g, 1.0))
            ub_rhs.append(diff_v)
    A_eq = np.array(eq_rows)
    rank = int(np.linalg.matrix_rank(A_eq[:, :-1], tol=1e-10)) if len(A_eq) else 0
    cost = np.zeros(13)
    cost[-1] = -1.0
    bounds = [(-bound, bound)] * 12 + [(None, 1.0)]
    res = linprog(cost, A_ub=np.array(ub_rows), b_ub=np.array(ub_rhs), A_eq=A_eq, b_eq=np.array(eq_rhs),
                  bounds=bounds, method="highs")
    if res.status == 2:
        return SearchResult(None, None, float("-inf"), rank,
                            message="no equivalent expression is diagonal in every steered basis")
    if res.status != 0:
        return SearchResult(None, None, float("-inf"), rank, message=f"linear program failed: {res.message}")
    c, margin = res.x[:-1], float(res.x[-1])
    if margin < -tol:
        return SearchResult(None, None, margin, rank, message="no rewriting puts every steered state on top")
    # second pass: keep the margin, take the smallest total generator weight
    ub = np.array(ub_rows)[:, :-1]
    A2_ub = np.vstack([np.hstack([ub, np.zeros_like(ub)]),
                       np.hstack([np.eye(12), -np.eye(12)]),
                       np.hstack([-np.eye(12), -np.eye(12)])])
    b2_ub = np.concatenate([np.array(ub_rhs) - (margin - SEARCH_SLACK), np.zeros(24)])
    A2_eq = np.hstack([A_eq[:, :-1], np.zeros((len(A_eq), 12))]) if len(A_eq) else None
    res2 = linprog(np.concatenate([np.zeros(12), np.ones(12)]), A_ub=A2_ub, b_ub=b2_ub, A_eq=A2_eq,
                   b_eq=np.array(eq_rhs) if len(A_eq) else None,
                   bounds=[(-bound, bound)] * 12 + [(0, None)] * 12, method="highs")
    if res2.status == 0:
        c = res2.x[:12]
    shift = BellExpression(CHSH_SCENARIO, (G * c).sum(axis=-1))
    game = (expr - shift).relabel(f"ow({expr.label})" if expr.label else "ow-game")
    k = float(c.sum())
    rep = ow_report(game, r, tol=tol)
    if not rep.verdict:
        return SearchResult(None, None, margin, rank, rep, message="candidate failed verification")
    return SearchResult(game, k, margin, rank, rep)


# --- displayed bound forms ---------------------------------------------------------

@dataclass(frozen=True)
class ReducedBound:
    """Effective operator with the identity part removed and nonnegative projector weights.

    ``lambda_max`` and ``expectation`` refer to the reduced operator;
    adding ``shift`` recovers the full ones.
    """

    shift: float
    weights: dict
    lambda_max: float
    expectation: float | None


def reduced_bound(expr: BellExpression, r: Realization, x: int, a: int) -> ReducedBound:
    """Rewrite ``B(x, a)`` as ``shift * I + sum_y w_y P(b_y | y)`` with ``w_y >= 0`` (two outcomes)."""
    v = expr.coefficients
    n_in = expr.scenario.inputs[1]
    if expr.scenario.outputs[1] != 2:
        raise NotApplicable("reduced form needs two outcomes on the steered side")
    shift, weights = 0.0, {}
    op = np.zeros((r.dims[1], r.dims[1]), dtype=complex)
    for y in range(n_in):
        v0, v1 = v[a, 0, x, y], v[a, 1, x, y]
        shift += min(v0, v1)
        b = 0 if v0 >= v1 else 1
        w = abs(v0 - v1)
        if w:
            weights[y] = (b, w)
            op += w * r.projector(1, y, b)
    lam = float(hermitian_eig(op)[0][-1])
    st = steered_state(r, x, a)
    exp = None if st.zero_weight else float(np.trace(st.rho @ op).real)
    return ReducedBound(float(shift), weights, lam, exp)
