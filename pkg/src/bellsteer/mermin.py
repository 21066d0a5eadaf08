"""Three-party Mermin expression on the GHZ state and its two kinds of steering."""
from __future__ import annotations

import numpy as np

from .ow import OWReport, ow_report
from .quantum import PAULI_X, PAULI_Y, Realization, qubit_measurements
from .scenario import BellExpression, Scenario

MERMIN_SCENARIO = Scenario((2, 2, 2), (2, 2, 2))
MERMIN_SETTINGS = ((0, 0, 0), (0, 1, 1), (1, 0, 1), (1, 1, 0))


def mermin_expression() -> BellExpression:
    """Win when the settings are one of the four Mermin triples and ``a^b^c = x|y|z``.

    Local bound 3, GHZ value 4; ``2 I - 4`` is the usual correlator form.
    """
    v = np.zeros(MERMIN_SCENARIO.shape)
    for x, y, z in MERMIN_SETTINGS:
        for a in range(2):
            for b in range(2):
                for c in range(2):
                    if a ^ b ^ c == (x | y | z):
                        v[a, b, c, x, y, z] = 1
    return BellExpression(MERMIN_SCENARIO, v, "mermin")


def mermin_correlator(behavior) -> float:
    """``<A0B0C0> - <A0B1C1> - <A1B0C1> - <A1B1C0>``."""
    p = behavior.probabilities
    sign = np.array([1, -1])
    par = sign[:, None, None] * sign[None, :, None] * sign[None, None, :]
    corr = np.einsum("abc,abcxyz->xyz", par, p)
    return float(corr[0, 0, 0] - corr[0, 1, 1] - corr[1, 0, 1] - corr[1, 1, 0])


def ghz_state() -> np.ndarray:
    psi = np.zeros(8, dtype=complex)
    psi[0] = psi[7] = 1 / np.sqrt(2)
    return psi


def ghz_realization() -> Realization:
    """GHZ with sigma_x for input 0 and sigma_y for input 1 on every party."""
    m = qubit_measurements(PAULI_X, PAULI_Y)
    return Realization(ghz_state(), (m, m.copy(), m.copy()))


def tripartite_ow_report(expr: BellExpression, r: Realization, kind="i", tol: float | None = None) -> OWReport:
    """Type ``"i"``: A steers BC. Type ``"ii"``: AB steer C.

    Any explicit direction such as ``"B->AC"`` is passed through.
    """
    if expr.scenario.parties != 3:
        raise ValueError("tripartite expression expected")
    return ow_report(expr, r, kind, tol)
