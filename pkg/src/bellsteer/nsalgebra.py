"""Difference tables, the no-signaling shift stencil, and NS-constant certification.

A difference table stores, for every block ``(x, y)`` of a (2,2,2,2)
expression, the four entries::

    top    = V[0,0,x,y] - V[0,1,x,y]
    left   = V[0,0,x,y] - V[1,0,x,y]
    right  = V[0,1,x,y] - V[1,1,x,y]
    bottom = V[1,0,x,y] - V[1,1,x,y]

Adding a no-signaling rewriting of zero only moves a difference table along
the four-parameter stencil built by :func:`delta_stencil`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import (CHSH_SCENARIO, BellExpression, Scenario, ScenarioMismatch,
                       strategy_values, table_from_rows)

CONST_TOL = 1e-9

TOP, LEFT, RIGHT, BOTTOM = range(4)


@dataclass(frozen=True, eq=False)
class DifferenceTable:
    """Entries indexed ``[x, y, slot]`` with slot order top, left, right, bottom."""

    entries: np.ndarray

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.shape != (2, 2, 4):
            raise ValueError("difference table must have shape (2, 2, 4)")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    def consistency_residual(self) -> float:
        e = self.entries
        return float(np.abs((e[..., TOP] - e[..., BOTTOM]) - (e[..., LEFT] - e[..., RIGHT])).max())

    def is_zero(self, tol: float = CONST_TOL) -> bool:
        return bool(np.abs(self.entries).max() <= tol)

    def __add__(self, other):
        return DifferenceTable(self.entries + other.entries)

    def __sub__(self, other):
        return DifferenceTable(self.entries - other.entries)

    def __str__(self):
        lines = []
        for x in range(2):
            top = "   ".join(f"{'':>9}{self.entries[x, y, TOP]:^9.4g}{'':>9}" for y in range(2))
            mid = "   ".join(f"{self.entries[x, y, LEFT]:^9.4g}{'':>9}{self.entries[x, y, RIGHT]:^9.4g}"
                             for y in range(2))
            bot = "   ".join(f"{'':>9}{self.entries[x, y, BOTTOM]:^9.4g}{'':>9}" for y in range(2))
            lines += [top, mid, bot]
            if x == 0:
                lines.append("-" * len(mid))
        return "\n".join(lines)


@dataclass(frozen=True)
class DeltaParams:
    alpha: float = 0.0
    beta: float = 0.0
    gamma: float = 0.0
    delta: float = 0.0

    def __neg__(self):
        return DeltaParams(-self.alpha, -self.beta, -self.gamma, -self.delta)

    def __add__(self, other):
        return DeltaParams(*(self.as_array() + other.as_array()))

    def as_array(self) -> np.ndarray:
        return np.array([self.alpha, self.beta, self.gamma, self.delta])


@dataclass(frozen=True)
class ConstantCertificate:
    """``a - b`` equals the constant ``k`` on every no-signaling behavior.

    ``witness`` is the stencil zeroing the difference table of ``a - b``
    (None outside the (2,2,2,2) scenario) and ``residual`` the size of what
    the stencil failed to cancel.
    """

    k: float
    witness: DeltaParams | None = None
    residual: float = 0.0

    def to_dict(self) -> dict:
        w = self.witness
        return {
            "k": self.k,
            "alpha": None if w is None else w.alpha,
            "beta": None if w is None else w.beta,
            "gamma": None if w is None else w.gamma,
            "delta": None if w is None else w.delta,
            "residual": self.residual,
        }


def _require_2222(s: Scenario):
    if s != CHSH_SCENARIO:
        raise ScenarioMismatch("difference tables are defined for the (2,2,2,2) scenario only")


def difference_table(expr: BellExpression) -> DifferenceTable:
    _require_2222(expr.scenario)
    v = expr.coefficients
    e = np.empty((2, 2, 4))
    e[..., TOP] = v[0, 0] - v[0, 1]
    e[..., LEFT] = v[0, 0] - v[1, 0]
    e[..., RIGHT] = v[0, 1] - v[1, 1]
    e[..., BOTTOM] = v[1, 0] - v[1, 1]
    return DifferenceTable(e)


def delta_stencil(p: DeltaParams) -> DifferenceTable:
    e = np.zeros((2, 2, 4))
    # Bob's differences move with alpha (y=0) and beta (y=1), opposite signs in the two x rows
    for y, val in ((0, p.alpha), (1, p.beta)):
        e[0, y, [TOP, BOTTOM]] += val
        e[1, y, [TOP, BOTTOM]] -= val
    # Alice's differences move with gamma (x=0) and delta (x=1), opposite signs in the two y columns
    for x, val in ((0, p.gamma), (1, p.delta)):
        e[x, 0, [LEFT, RIGHT]] += val
        e[x, 1, [LEFT, RIGHT]] -= val
    return DifferenceTable(e)


def apply_delta(d: DifferenceTable, p: DeltaParams) -> DifferenceTable:
    return d + delta_stencil(p)


def _stencil_matrix():
    cols = [delta_stencil(DeltaParams(*np.eye(4)[i])).entries.ravel() for i in range(4)]
    return np.stack(cols, axis=1)


_STENCIL = _stencil_matrix()


def zeroing_delta(d: DifferenceTable) -> tuple[DeltaParams, float]:
    """Least-squares stencil bringing ``d`` closest to zero, and the leftover max-norm."""
    sol, *_ = np.linalg.lstsq(_STENCIL, -d.entries.ravel(), rcond=None)
    p = DeltaParams(*map(float, sol))
    return p, float(np.abs(apply_delta(d, p).entries).max())


def lift(d: DifferenceTable, block_sums) -> BellExpression:
    """Coefficient table with difference table ``d`` and the given per-block entry sums.

    ``d`` must be internally consistent; the gauge left by the differences
    is fixed by ``block_sums[x, y]``.
    """
    if d.consistency_residual() > CONST_TOL:
        raise ValueError("inconsistent difference table cannot be lifted")
    s = np.asarray(block_sums, dtype=float).reshape(2, 2)
    e = d.entries
    v = np.empty((2, 2, 2, 2))
    v00 = (s + e[..., TOP] + 2 * e[..., LEFT] + e[..., BOTTOM]) / 4
    v[0, 0] = v00
    v[0, 1] = v00 - e[..., TOP]
    v[1, 0] = v00 - e[..., LEFT]
    v[1, 1] = v[1, 0] - e[..., BOTTOM]
    return BellExpression(CHSH_SCENARIO, v)


def block_sums(expr: BellExpression) -> np.ndarray:
    """Per-block entry sums ``[x, y]``."""
    return expr.coefficients.sum(axis=(0, 1))


def ns_constant_value(expr: BellExpression, tol: float = CONST_TOL) -> float | None:
    """The constant ``expr`` takes on every no-signaling behavior, if it is one.

    Deterministic local points affinely span the no-signaling set, so it is
    enough to check them. Integer tables are compared exactly.
    """
    if expr.exact is not None:
        vals = strategy_values(expr, exact=True)
        return float(vals.flat[0]) if vals.min() == vals.max() else None
    vals = strategy_values(expr, exact=False)
    lo, hi = float(vals.min()), float(vals.max())
    scale = max(1.0, float(np.abs(expr.coefficients).max(initial=0)))
    if hi - lo > tol * scale:
        return None
    return float(vals.flat[0])


def generator_tables(k: float = 1.0) -> list[BellExpression]:
    """Generator tables each worth ``k`` on no-signaling behaviors.

    Four normalization tables (one per block), four from Bob's
    no-signaling, four from Alice's.
    """
    g = []
    for x in range(2):
        for y in range(2):
            t = np.zeros((4, 4))
            t[2 * x:2 * x + 2, 2 * y:2 * y + 2] = k
            g.append(t)
    # Bob: column b of block (0, y) plus column 1-b of block (1, y)
    for y in range(2):
        for b in range(2):
            t = np.zeros((4, 4))
            t[0:2, 2 * y + b] = k
            t[2:4, 2 * y + 1 - b] = k
            g.append(t)
    # Alice: row a of block (x, 0) plus row 1-a of block (x, 1)
    for x in range(2):
        for a in range(2):
            t = np.zeros((4, 4))
            t[2 * x + a, 0:2] = k
            t[2 * x + 1 - a, 2:4] = k
            g.append(t)
    return [table_from_rows(t, label=f"ns-constant-{i}") for i, t in enumerate(g)]


def constant_basis(s: Scenario, k: float) -> list[BellExpression]:
    _require_2222(s)
    return generator_tables(k)


def delta_lift(p: DeltaParams) -> BellExpression:
    """NS-constant table whose difference table is the stencil of ``p``.

    Its no-signaling value is ``alpha + beta + gamma + delta``.
    """
    g = generator_tables(1.0)
    # generators 4 and 6 carry +1 on Bob's y=0 / y=1 differences, 8 and 10 on Alice's x=0 / x=1
    return p.alpha * g[4] + p.beta * g[6] + p.gamma * g[8] + p.delta * g[10]


def ns_constant_by_stencil(expr: BellExpression, tol: float = CONST_TOL) -> ConstantCertificate | None:
    """Certify constancy through the stencil route only (no enumeration)."""
    d = difference_table(expr)
    p, resid = zeroing_delta(d)
    scale = max(1.0, float(np.abs(expr.coefficients).max(initial=0)))
    if resid > tol * scale:
        return None
    reduced = expr + delta_lift(p)
    # every block of the reduced table is flat: it is a sum of normalization tables
    flat = reduced.coefficients
    if np.abs(flat - flat[0, 0]).max() > tol * scale:
        return None
    k = float(flat[0, 0].sum()) - float(p.as_array().sum())
    return ConstantCertificate(k, p, resid)


def ns_equivalent(a: BellExpression, b: BellExpression, tol: float = CONST_TOL) -> ConstantCertificate | None:
    """Certificate that ``a - b`` is a no-signaling constant."""
    if a.scenario != b.scenario:
        raise ScenarioMismatch("expressions live in different scenarios")
    diff = a - b
    k = ns_constant_value(diff, tol)
    if k is None:
        return None
    if a.scenario != CHSH_SCENARIO:
        return ConstantCertificate(k)
    p, resid = zeroing_delta(difference_table(diff))
    return ConstantCertificate(k, p, resid)
