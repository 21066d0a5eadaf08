"""Concrete (2,2,2,2) Bell expressions and the realizations that maximize them."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .ow import GammaFamily, all_projector_params, necessary_residual, reduced_bound
from .quantum import (PAULI_X, PAULI_Z, Realization, partially_entangled, phi_plus,
                      planar_qubit_observable, qubit_measurements)
from .scenario import CHSH_SCENARIO, BellExpression, swap_parties, table_from_rows

BOUNDARY_TOL = 1e-10


def chsh_xor() -> BellExpression:
    """Win iff ``a xor b == x*y``."""
    return table_from_rows([[1, 0, 1, 0],
                            [0, 1, 0, 1],
                            [1, 0, 0, 1],
                            [0, 1, 1, 0]], label="chsh-xor")


def cglmp2_zg() -> BellExpression:
    from .cglmp import zohren_gill
    return zohren_gill(2).relabel("cglmp2")


def chsh_correlator() -> BellExpression:
    """``E00 + E01 + E10 - E11`` with ``E_xy = P(a=b) - P(a!=b)``."""
    return tilted_correlator(0.0).relabel("chsh-correlator")


def tilted_correlator(alpha: float) -> BellExpression:
    """``alpha * <A0> + E00 + E01 + E10 - E11``, local bound ``2 + alpha``.

    The single-party term is placed in the ``y = 0`` block.
    """
    v = np.zeros((2, 2, 2, 2))
    for a in range(2):
        for b in range(2):
            for x in range(2):
                for y in range(2):
                    sign = (-1) ** (a ^ b) * (-1 if x == y == 1 else 1)
                    v[a, b, x, y] = sign
                    if x == 0 and y == 0:
                        v[a, b, x, y] += alpha * (-1) ** a
    return BellExpression(CHSH_SCENARIO, v, f"tilted-correlator({alpha:g})")


# --- alleged counterexamples -------------------------------------------------

C1_BASE = [[1, 0, 0, 0],
           [0, 0, 1, 0],
           [0, 1, 0, 1],
           [1, 0, 0, 0]]

C2_BASE = [[1, 0, 0, 1],
           [0, 1, 1, 0],
           [0, 1, 0, 1],
           [1, 0, 0, 0]]


def counterexample_direction(which: str) -> BellExpression:
    """Per-unit-gamma addition table: worth 2 (c1) or 0 (c2) on no-signaling behaviors."""
    if which == "c1":
        # the printed table is affine in gamma: gamma * D + (gamma-independent part)
        return table_from_rows([[1, 0, 1, 0],
                                [1, 0, 1, 0],
                                [0, 1, 0, 1],
                                [0, 1, 0, 1]], label="c1-direction")
    if which == "c2":
        return table_from_rows([[0, 1, -1, 0],
                                [0, 1, -1, 0],
                                [1, 0, 0, -1],
                                [1, 0, 0, -1]], label="c2-direction")
    raise ValueError(f"unknown counterexample {which!r}")


def counterexample_addition(which: str, gamma: float) -> BellExpression:
    """The table added to the base game, exactly as printed for the given gamma."""
    if which == "c1":
        g = gamma
        rows = [[g, 1, g, 1],
                [g, 1, g, 1],
                [0, g - 1, 0, g - 1],
                [0, g - 1, 0, g - 1]]
        return table_from_rows(rows, label=f"c1-addition({gamma:g})")
    return (gamma * counterexample_direction(which)).relabel(f"{which}-addition({gamma:g})")


def counterexample_game(which: str, gamma: float) -> BellExpression:
    base = {"c1": C1_BASE, "c2": C2_BASE}.get(which)
    if base is None:
        raise ValueError(f"unknown counterexample {which!r}")
    return (table_from_rows(base) + counterexample_addition(which, gamma)).relabel(f"{which}({gamma:g})")


def counterexample_family(which: str) -> GammaFamily:
    return GammaFamily(counterexample_game(which, 0.0), counterexample_direction(which), label=which)


def counterexample_displayed_lambdas(which: str, gamma: float, r: Realization) -> dict:
    """Reduced top eigenvalues in the printed normalization.

    Context ``(1, 0)`` has equal weights on both of Bob's projectors
    (``gamma`` for c1, ``1 - gamma`` for c2) and is divided by that weight.
    """
    expr = counterexample_game(which, gamma)
    out = {}
    for x in range(2):
        for a in range(2):
            rb = reduced_bound(expr, r, x, a)
            lam = rb.lambda_max
            if (x, a) == (1, 0):
                lam /= gamma if which == "c1" else 1 - gamma
            out[x, a] = lam
    return out


# --- three-parameter XOR boundary --------------------------------------------

@dataclass(frozen=True)
class BoundaryPoint3Param:
    """Correlators ``E_xy = cos(angles[x, y])`` on the unbiased-marginal boundary.

    The realization is Phi+ with planar measurements at angles ``a_x`` for
    Alice and ``b_y`` for Bob, ``E_xy = cos(a_x - b_y)``.
    """

    angles: tuple[float, float, float, float]
    seed: int | None = field(default=None, compare=False)

    def __post_init__(self):
        a = np.asarray(self.angles, dtype=float)
        if a.shape != (4,):
            raise ValueError("four angles a00, a01, a10, a11 expected")
        if np.any(a <= 0) or np.any(a >= np.pi):
            raise ValueError("angles must lie in (0, pi)")
        if abs(self.boundary_residual()) > BOUNDARY_TOL:
            raise ValueError("point is not on the boundary sum(-1)^(xy) arcsin(E_xy) = pi")
        object.__setattr__(self, "angles", tuple(float(t) for t in a))

    @property
    def correlators(self) -> np.ndarray:
        return np.cos(np.asarray(self.angles)).reshape(2, 2)

    def boundary_residual(self) -> float:
        return boundary_residual(np.cos(np.asarray(self.angles, dtype=float)).reshape(2, 2))

    def measurement_angles(self):
        a00, a01, a10, _ = self.angles
        return (0.0, -a00 - a10), (-a00, a01)

    def realization(self) -> Realization:
        (ax0, ax1), (by0, by1) = self.measurement_angles()
        # E_xy = cos(a_x - b_y) for Phi+ with real planar observables
        alice = qubit_measurements(planar_qubit_observable(ax0), planar_qubit_observable(ax1))
        bob = qubit_measurements(planar_qubit_observable(by0), planar_qubit_observable(by1))
        return Realization(phi_plus(), (alice, bob))


def boundary_residual(E) -> float:
    """``sum_xy (-1)^(xy) arcsin(E_xy) - pi``."""
    E = np.asarray(E, dtype=float).reshape(2, 2)
    s = np.arcsin(np.clip(E, -1, 1))
    return float(s[0, 0] + s[0, 1] + s[1, 0] - s[1, 1] - np.pi)


def boundary_sample(seed) -> BoundaryPoint3Param:
    """Rejection sample ``a00, a01, a10 > 0`` with sum below pi; ``a11`` is their sum."""
    rng = np.random.default_rng(seed)
    while True:
        t = rng.uniform(0, np.pi, size=3)
        if t.sum() < np.pi:
            break
    return BoundaryPoint3Param((t[0], t[1], t[2], float(t.sum())), seed)


def weighted_xor_game(p: BoundaryPoint3Param) -> BellExpression:
    s = np.sin(np.asarray(p.angles))
    if np.any(np.abs(s) < 1e-12):
        raise ValueError("degenerate angle: sin(alpha_xy) = 0")
    w00, w01, w10, w11 = 1 / s
    rows = [[w00, 0, w01, 0],
            [0, w00, 0, w01],
            [w10, 0, -w11, 0],
            [0, w10, 0, -w11]]
    return table_from_rows(rows, label="weighted-xor")


# --- tilted CHSH -----------------------------------------------------------------

@dataclass(frozen=True)
class TiltedPoint:
    theta: float

    def __post_init__(self):
        if not 0 < self.theta <= np.pi / 4 + 1e-15:
            raise ValueError("theta must lie in (0, pi/4]")

    @property
    def alpha(self) -> float:
        return 2 / np.sqrt(1 + 2 * np.tan(2 * self.theta) ** 2) if self.theta < np.pi / 4 else 0.0

    @property
    def mu(self) -> float:
        return float(np.arctan(np.sin(2 * self.theta)))

    def realization(self) -> Realization:
        mu = self.mu
        alice = qubit_measurements(PAULI_Z, PAULI_X)
        bob = qubit_measurements(planar_qubit_observable(mu), planar_qubit_observable(-mu))
        return Realization(partially_entangled(self.theta), (alice, bob))

    def lambdas_prime(self):
        """``(Lambda_plus, Lambda_minus)``."""
        s2 = np.sin(2 * self.theta) ** 2
        root = np.sqrt(1 + s2)
        base = 1 - 2 * np.sin(self.theta) ** 2
        return 2 * s2 / (base + root), 2 * s2 / (base - root)

    def x_params(self):
        lp, lm = self.lambdas_prime()
        if abs(lp - lm) < 1e-14:
            raise ValueError("Lambda_plus and Lambda_minus coincide")
        x1 = (2 - lp - lm) / (lp - lm)
        x2 = (2 * lp * lm - lp - lm) / (lp - lm)
        return x1, x2


def _tilted_base(alpha):
    return [[1 + alpha, alpha, 1, 0],
            [0, 1, 0, 1],
            [1, 0, 0, 1],
            [0, 1, 1, 0]]


def tilted_direction(p: TiltedPoint) -> BellExpression:
    """The table subtracted per unit gamma; worth ``2 sin^2 theta`` on no-signaling behaviors."""
    c2 = np.cos(2 * p.theta)
    s, c = np.sin(p.theta) ** 2, np.cos(p.theta) ** 2
    return table_from_rows([[0, -c2, 0, -c2],
                            [0, -c2, 0, -c2],
                            [s, c, s, c],
                            [s, c, s, c]], label="tilted-direction")


def tilted_chsh(p: TiltedPoint, gamma: float) -> BellExpression:
    base = table_from_rows(_tilted_base(p.alpha))
    return (base - gamma * tilted_direction(p)).relabel(f"tilted({p.theta:g},{gamma:g})")


def tilted_family(p: TiltedPoint) -> GammaFamily:
    return GammaFamily(table_from_rows(_tilted_base(p.alpha)), -1.0 * tilted_direction(p),
                       label=f"tilted({p.theta:g})")


def tilted_prime_direction(p: TiltedPoint, x_params=None) -> BellExpression:
    """Per-unit-gamma table for the primed family; worth ``1 - alpha`` on no-signaling behaviors.

    ``x_params`` defaults to the closed-form ``(X1, X2)``.
    """
    x1, x2 = p.x_params() if x_params is None else x_params
    al = p.alpha
    return table_from_rows([[-al, -al, 0, 0],
                            [x1 - al, x1 - al, -x1, -x1],
                            [0, 0, 1, 1],
                            [x2, x2, 1 - x2, 1 - x2]], label="tilted-prime-direction")


def tilted_chsh_prime(p: TiltedPoint, gamma: float, x_params=None) -> BellExpression:
    base = table_from_rows(_tilted_base(p.alpha))
    return (base + gamma * tilted_prime_direction(p, x_params)).relabel(f"tilted-prime({p.theta:g},{gamma:g})")


def saturating_prime_params(p: TiltedPoint):
    """``(X1, X2)`` that make the primed game at gamma = 1 saturate when Bob steers Alice.

    The off-diagonal conditions are affine in ``(X1, X2)``; they are solved
    in the swapped frame, where Alice's qubit plays the steered role.
    Returns the solution and the least-squares residual.
    """
    r = p.realization().swapped()
    params = all_projector_params(r)
    zero = tilted_chsh_prime(p, 1.0, (0.0, 0.0))
    unit = [tilted_chsh_prime(p, 1.0, e) - zero for e in ((1.0, 0.0), (0.0, 1.0))]
    rows, rhs = [], []
    for (x, a), pp in params.items():
        if pp is None:
            continue
        rows.append([necessary_residual(swap_parties(u), pp, x, a) for u in unit])
        rhs.append(-necessary_residual(swap_parties(zero), pp, x, a))
    sol, *_ = np.linalg.lstsq(np.array(rows), np.array(rhs), rcond=None)
    resid = float(np.abs(np.array(rows) @ sol - np.array(rhs)).max())
    return (float(sol[0]), float(sol[1])), resid


# closed forms for the tilted family at its self-tested realization

def tilted_lambdas(theta: float) -> dict:
    """Top eigenvalues of the normalized bound operators printed for gamma = 1."""
    c4 = np.cos(4 * theta)
    return {
        (0, 0): 1 + np.sqrt(2 / (3 - c4)),
        (0, 1): (1 - c4) / (3 - c4 - np.sqrt(6 - 2 * c4)),
        (1, 0): 0.5 + 1 / np.sqrt(6 - 2 * c4),
        (1, 1): 0.5 + 1 / np.sqrt(6 - 2 * c4),
    }


def tilted_displayed_lambdas(p: TiltedPoint, gamma: float = 1.0) -> dict:
    """Top eigenvalues of the reduced operators, scaled to the printed normalization.

    The reduced operator of context ``(x, a)`` is divided by ``1 - cos 2theta``,
    ``1 + cos 2theta``, 2 and 2 for ``(0, 0), (0, 1), (1, 0), (1, 1)``.
    """
    c2 = np.cos(2 * p.theta)
    scale = {(0, 0): 1 - c2, (0, 1): 1 + c2, (1, 0): 2.0, (1, 1): 2.0}
    expr, r = tilted_chsh(p, gamma), p.realization()
    return {k: reduced_bound(expr, r, *k).lambda_max / f for k, f in scale.items()}


def tilted_untilted_gap(theta: float):
    """Expectation and top eigenvalue of ``B(1, b)`` for gamma = 0."""
    c4 = np.cos(4 * theta)
    expectation = 1 + (1 - c4) / np.sqrt(6 - 2 * c4)
    lam = 1 + abs(np.sin(2 * theta)) * np.sqrt(2 / (3 - c4))
    return expectation, lam
