"""Bell scenarios, behaviors, coefficient tables and local bounds.

Coefficient and probability tensors are indexed outputs first, then
inputs: ``V[a, b, x, y]`` for two parties and ``V[a, b, c, x, y, z]`` for
three.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

BEHAVIOR_TOL = 1e-12
MAX_STRATEGIES = 10**6

PARTY_LETTERS = "ABC"
INPUT_LETTERS = "xyz"
OUTPUT_LETTERS = "abc"


class ScenarioMismatch(ValueError):
    pass


class EnumerationTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(int(m) for m in self.inputs))
        object.__setattr__(self, "outputs", tuple(int(n) for n in self.outputs))
        if len(self.inputs) != len(self.outputs):
            raise ValueError("inputs and outputs must list the same parties")
        if self.parties not in (2, 3):
            raise ValueError("only bipartite and tripartite scenarios are supported")
        if min(self.inputs + self.outputs) < 1:
            raise ValueError("input and output counts must be >= 1")

    @classmethod
    def bipartite(cls, mA, mB, nA, nB):
        """Build the ``(mA, mB, nA, nB)`` scenario."""
        return cls((mA, mB), (nA, nB))

    @property
    def parties(self) -> int:
        return len(self.inputs)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.outputs + self.inputs

    @property
    def n_strategies(self) -> int:
        return int(np.prod([n**m for m, n in zip(self.inputs, self.outputs)], dtype=object))

    def __str__(self):
        return ",".join(str(v) for v in self.inputs + self.outputs)


CHSH_SCENARIO = Scenario((2, 2), (2, 2))


def _check_marginals(p, scenario, tol):
    k = scenario.parties
    for i in range(k):
        # summing out party i's output must remove any dependence on its input
        marg = p.sum(axis=i, keepdims=True)
        in_axis = k + i
        ref = np.take(marg, [0], axis=in_axis)
        if np.abs(marg - ref).max() > tol:
            return False
    return True


@dataclass(frozen=True, eq=False)
class Behavior:
    """Conditional distribution ``P(outputs | inputs)``."""

    scenario: Scenario
    probabilities: np.ndarray
    tol: float = BEHAVIOR_TOL

    def __post_init__(self):
        p = np.array(self.probabilities, dtype=float)
        if p.shape != self.scenario.shape:
            raise ScenarioMismatch(f"probability tensor has shape {p.shape}, expected {self.scenario.shape}")
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)
        if p.min() < -self.tol or p.max() > 1 + self.tol:
            raise ValueError("probabilities must lie in [0, 1]")
        k = self.scenario.parties
        norms = p.sum(axis=tuple(range(k)))
        if np.abs(norms - 1).max() > self.tol:
            raise ValueError("probabilities are not normalized for every input")
        if not _check_marginals(p, self.scenario, self.tol):
            raise ValueError("behavior is signaling")

    def marginal(self, party: int) -> np.ndarray:
        """``P(o_party | i_party)`` as an ``(n, m)`` array (other inputs set to 0)."""
        k = self.scenario.parties
        others = tuple(j for j in range(k) if j != party)
        m = self.probabilities.sum(axis=others)
        # remaining axes: (o_party, i_0, ..., i_{k-1}); fix the other inputs to 0
        idx = [slice(None)] + [slice(None) if j == party else 0 for j in range(k)]
        return m[tuple(idx)]


@dataclass(frozen=True, eq=False)
class BellExpression:
    scenario: Scenario
    coefficients: np.ndarray
    label: str = ""
    exact: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        v = np.array(self.coefficients, dtype=float)
        if v.shape != self.scenario.shape:
            raise ScenarioMismatch(f"coefficient tensor has shape {v.shape}, expected {self.scenario.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "coefficients", v)
        exact = self.exact
        if exact is None and np.all(np.isfinite(v)) and np.all(v == np.round(v)) and np.abs(v).max(initial=0) < 2**52:
            exact = v.astype(np.int64)
        if exact is not None:
            exact = np.array(exact, dtype=np.int64)
            if exact.shape != v.shape or np.any(exact != v):
                raise ValueError("integer mirror disagrees with coefficients")
            exact.setflags(write=False)
        object.__setattr__(self, "exact", exact)

    @property
    def is_integral(self) -> bool:
        return self.exact is not None

    def _combine(self, other, sign):
        if not isinstance(other, BellExpression):
            return NotImplemented
        if other.scenario != self.scenario:
            raise ScenarioMismatch("expressions live in different scenarios")
        return BellExpression(self.scenario, self.coefficients + sign * other.coefficients)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __mul__(self, k):
        return BellExpression(self.scenario, float(k) * self.coefficients, self.label)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def relabel(self, label: str) -> BellExpression:
        return BellExpression(self.scenario, self.coefficients, label, self.exact)


@dataclass(frozen=True)
class DeterministicStrategy:
    """One output function per party: ``outputs[party][input]``."""

    outputs: tuple[tuple[int, ...], ...]

    def behavior(self, scenario: Scenario) -> Behavior:
        p = np.zeros(scenario.shape)
        k = scenario.parties
        for ins in itertools.product(*(range(m) for m in scenario.inputs)):
            outs = tuple(self.outputs[j][ins[j]] for j in range(k))
            p[outs + ins] = 1.0
        return Behavior(scenario, p)


def evaluate(expr: BellExpression, p: Behavior) -> float:
    if expr.scenario != p.scenario:
        raise ScenarioMismatch("expression and behavior live in different scenarios")
    return float(np.sum(expr.coefficients * p.probabilities))


def _party_strategies(m, n):
    return np.array(list(itertools.product(range(n), repeat=m)), dtype=np.intp).reshape(-1, m)


def _guard(scenario):
    if scenario.n_strategies > MAX_STRATEGIES:
        raise EnumerationTooLarge(
            f"{scenario.n_strategies} deterministic strategies exceed the limit of {MAX_STRATEGIES}")


def strategy_values(expr: BellExpression, exact: bool = True) -> np.ndarray:
    """Value of ``expr`` on every deterministic strategy.

    Returns an array with one axis per party, each running over that
    party's strategies in lexicographic order. Integer tables are summed in
    int64 so ties are exact.
    """
    s = expr.scenario
    _guard(s)
    coeffs = expr.exact if (exact and expr.exact is not None) else expr.coefficients
    strats = [_party_strategies(m, n) for m, n in zip(s.inputs, s.outputs)]
    k = s.parties
    total = np.zeros(tuple(len(st) for st in strats), dtype=coeffs.dtype)
    for ins in itertools.product(*(range(m) for m in s.inputs)):
        block = coeffs[(Ellipsis,) + ins]
        total += block[np.ix_(*(strats[j][:, ins[j]] for j in range(k)))]
    return total


def _strategy_from_index(scenario, idx):
    outs = []
    for j, (m, n) in enumerate(zip(scenario.inputs, scenario.outputs)):
        outs.append(tuple(int(v) for v in _party_strategies(m, n)[idx[j]]))
    return DeterministicStrategy(tuple(outs))


def deterministic_strategies(s: Scenario) -> list[DeterministicStrategy]:
    _guard(s)
    per_party = [[tuple(int(v) for v in row) for row in _party_strategies(m, n)]
                 for m, n in zip(s.inputs, s.outputs)]
    return [DeterministicStrategy(combo) for combo in itertools.product(*per_party)]


def deterministic_behaviors(s: Scenario) -> list[Behavior]:
    return [st.behavior(s) for st in deterministic_strategies(s)]


def local_bound(expr: BellExpression) -> float:
    """Maximum of ``expr`` over local deterministic strategies."""
    return float(strategy_values(expr).max())


def optimal_strategies(expr: BellExpression, tol: float = 1e-12):
    """Local bound together with every strategy attaining it."""
    vals = strategy_values(expr)
    best = vals.max()
    if expr.is_integral:
        hits = np.argwhere(vals == best)
    else:
        hits = np.argwhere(vals >= best - tol)
    return float(best), [_strategy_from_index(expr.scenario, tuple(h)) for h in hits]


# --- table text format -----------------------------------------------------

def parse_table(text: str, scenario: Scenario | None = None, label: str = "") -> BellExpression:
    """Parse the block layout: rows ``(x, a)``, columns ``(y, b)``.

    Blocks of Alice inputs are separated by a line of dashes, Bob's input
    groups by ``|``.
    """
    blocks: list[list[list[list[float]]]] = [[]]
    for raw in text.strip().splitlines():
        line = raw.strip()
        if not line:
            continue
        if set(line) <= set("-+="):
            if blocks[-1]:
                blocks.append([])
            continue
        groups = [g.split() for g in line.strip("|").split("|")]
        try:
            row = [[float(c) for c in g] for g in groups]
        except ValueError as e:
            raise ValueError(f"non-numeric cell in row {line!r}") from e
        blocks[-1].append(row)
    if not blocks[-1]:
        blocks.pop()
    if not blocks:
        raise ValueError("empty table")
    mA, nA = len(blocks), len(blocks[0])
    mB, nB = len(blocks[0][0]), len(blocks[0][0][0])
    for blk in blocks:
        if len(blk) != nA:
            raise ValueError("ragged table: blocks have different row counts")
        for row in blk:
            if len(row) != mB or any(len(g) != nB for g in row):
                raise ValueError("ragged table: rows have different column layouts")
    inferred = Scenario((mA, mB), (nA, nB))
    if scenario is not None and scenario != inferred:
        raise ScenarioMismatch(f"table has layout {inferred}, expected {scenario}")
    v = np.zeros(inferred.shape)
    for x, a, y, b in itertools.product(range(mA), range(nA), range(mB), range(nB)):
        v[a, b, x, y] = blocks[x][a][y][b]
    return BellExpression(inferred, v, label)


def _fmt_number(v):
    if v == 0:
        return "0"
    return format(float(v), ".17g")


def format_table(expr: BellExpression) -> str:
    s = expr.scenario
    if s.parties != 2:
        raise ValueError("table layout is defined for bipartite expressions")
    (mA, mB), (nA, nB) = s.inputs, s.outputs
    v = expr.coefficients
    cells = {(x, a, y, b): _fmt_number(v[a, b, x, y])
             for x, a, y, b in itertools.product(range(mA), range(nA), range(mB), range(nB))}
    width = max(len(c) for c in cells.values())
    rows = []
    for x in range(mA):
        if x:
            rows.append("---")
        for a in range(nA):
            groups = [" ".join(cells[x, a, y, b].rjust(width) for b in range(nB)) for y in range(mB)]
            rows.append(" | ".join(groups))
    return "\n".join(rows) + "\n"


def swap_parties(expr: BellExpression) -> BellExpression:
    """Exchange the roles of the two parties in a bipartite expression."""
    if expr.scenario.parties != 2:
        raise ScenarioMismatch("party swap is bipartite only")
    s = expr.scenario
    return BellExpression(Scenario(s.inputs[::-1], s.outputs[::-1]),
                          expr.coefficients.transpose(1, 0, 3, 2), expr.label)


def table_from_rows(rows, scenario: Scenario = CHSH_SCENARIO, label: str = "") -> BellExpression:
    """Expression from a dense ``(mA*nA, mB*nB)`` array in block layout."""
    (mA, mB), (nA, nB) = scenario.inputs, scenario.outputs
    m = np.asarray(rows, dtype=float)
    if m.shape != (mA * nA, mB * nB):
        raise ScenarioMismatch(f"table has shape {m.shape}, expected {(mA * nA, mB * nB)}")
    v = m.reshape(mA, nA, mB, nB).transpose(1, 3, 0, 2)
    return BellExpression(scenario, v, label)


def table_rows(expr: BellExpression) -> np.ndarray:
    s = expr.scenario
    (mA, mB), (nA, nB) = s.inputs, s.outputs
    return expr.coefficients.transpose(2, 0, 3, 1).reshape(mA * nA, mB * nB)
