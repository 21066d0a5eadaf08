"""CGLMP expressions with d outcomes, the weighted XOR game G_d and its optimal realization.

Bob's effective operators for G_d at the Fourier-type measurements are
circulant up to diagonal phases, so they can be written down directly
from two kernels and compared with the projector sums.
"""
from __future__ import annotations

import numpy as np

from .linalg import fix_phase, hermitian_eig, ket_projector
from .ow import OWReport, ow_report
from .quantum import EffectiveOperator, Realization
from .scenario import BellExpression, Scenario

DEGENERACY_TOL = 1e-9
MAX_D = 8


def cglmp_scenario(d: int) -> Scenario:
    if d < 2:
        raise ValueError("CGLMP needs d >= 2 outcomes")
    return Scenario.bipartite(2, 2, d, d)


def zohren_gill(d: int) -> BellExpression:
    """``P(a0 <= b0) + P(a0 >= b1) + P(a1 >= b0) + P(a1 < b1)``; local bound 3."""
    scen = cglmp_scenario(d)
    a = np.arange(d)[:, None]
    b = np.arange(d)[None, :]
    v = np.zeros((d, d, 2, 2))
    v[:, :, 0, 0] = a <= b
    v[:, :, 0, 1] = a >= b
    v[:, :, 1, 0] = a >= b
    v[:, :, 1, 1] = a < b
    return BellExpression(scen, v, f"zohren-gill({d})")


def gd_coefficient(d: int, a: int, b: int, x: int, y: int) -> int:
    """The weight ``Delta`` with ``a - b = (-1)^(x+y) (Delta + 1) - xy`` mod d."""
    if x == y == 1:
        return (a - b) % d
    if x == y:
        return (a - b - 1) % d
    return (b - a - 1) % d


def gd_game(d: int) -> BellExpression:
    """Weighted XOR game with circulant blocks; ``G_d = d I_d - 3`` on no-signaling boxes."""
    scen = cglmp_scenario(d)
    v = np.zeros((d, d, 2, 2))
    for a in range(d):
        for b in range(d):
            for x in range(2):
                for y in range(2):
                    v[a, b, x, y] = gd_coefficient(d, a, b, x, y)
    return BellExpression(scen, v, f"G({d})")


ALICE_PHASES = (0.0, 1.0)      # phi_x in units of pi/d
BOB_PHASES = (-0.5, 0.5)       # theta_y in units of pi/d


def alice_ket(d: int, x: int, a: int) -> np.ndarray:
    k = np.arange(d)
    return np.exp(1j * (2 * np.pi * k * a / d + k * ALICE_PHASES[x] * np.pi / d)) / np.sqrt(d)


def bob_ket(d: int, y: int, b: int) -> np.ndarray:
    k = np.arange(d)
    return np.exp(1j * (-2 * np.pi * k * b / d + k * BOB_PHASES[y] * np.pi / d)) / np.sqrt(d)


def cglmp_measurements(d: int):
    """Rank-one projectors ``(alice, bob)``, each of shape ``(2, d, d, d)``."""
    cglmp_scenario(d)
    alice = np.array([[ket_projector(alice_ket(d, x, a)) for a in range(d)] for x in range(2)])
    bob = np.array([[ket_projector(bob_ket(d, y, b)) for b in range(d)] for y in range(2)])
    return alice, bob


def kernel_f0(d: int) -> np.ndarray:
    """``f0[k, k'] = (2/d) sum_D D cos(pi (k - k') (4D + 3) / 2d)``."""
    diff = np.subtract.outer(np.arange(d), np.arange(d))
    D = np.arange(d)
    return (2 / d) * np.sum(D[:, None, None] * np.cos(np.pi / (2 * d) * diff[None] * (4 * D[:, None, None] + 3)),
                            axis=0)


def kernel_f1(d: int) -> np.ndarray:
    diff = np.subtract.outer(np.arange(d), np.arange(d))
    return kernel_f0(d) * np.exp(-1j * np.pi * diff / d)


def effective_ops_analytic(d: int, x: int, a: int) -> EffectiveOperator:
    """Bob's operator for G_d at context ``(x, a)``, from the kernels alone."""
    diff = np.subtract.outer(np.arange(d), np.arange(d))
    f = kernel_f0(d) if x == 0 else kernel_f1(d)
    m = np.exp(-2j * np.pi * a * diff / d) * f
    return EffectiveOperator(m, (0,), (x,), (a,))


def outcome_shift(d: int, a_to: int, a_from: int) -> np.ndarray:
    """Diagonal unitary taking ``B(x, a_from)`` to ``B(x, a_to)``."""
    k = np.arange(d)
    return np.diag(np.exp(-2j * np.pi * (a_to - a_from) * k / d))


def input_shift(d: int) -> np.ndarray:
    """Diagonal unitary taking ``B(0, a)`` to ``B(1, a)``."""
    return np.diag(np.exp(-1j * np.pi * np.arange(d) / d))


def top_coefficients(d: int) -> np.ndarray:
    """Top eigenvector of ``B(0, 0)``, phase fixed so its first nonzero entry is real positive."""
    w, v = hermitian_eig(effective_ops_analytic(d, 0, 0).matrix)
    mult = int(np.sum(w >= w[-1] - DEGENERACY_TOL * max(1.0, abs(w[-1]))))
    if mult > 1:
        raise ValueError(f"top eigenvalue of B(0,0) has multiplicity {mult}")
    beta = fix_phase(v[:, -1])
    return beta / np.linalg.norm(beta)


def optimal_state(d: int) -> Realization:
    """``sum_k beta_k |kk>`` with the Fourier-type measurements."""
    beta = top_coefficients(d)
    psi = np.zeros((d, d), dtype=complex)
    psi[np.arange(d), np.arange(d)] = beta
    return Realization(psi.ravel(), cglmp_measurements(d))


def qutrit_gamma() -> float:
    return (np.sqrt(11) - np.sqrt(3)) / 2


def cglmp3_realization() -> Realization:
    """``(|00> + gamma |11> + |22>) / sqrt(2 + gamma^2)`` with the d = 3 measurements."""
    g = qutrit_gamma()
    psi = np.zeros((3, 3))
    psi[0, 0], psi[1, 1], psi[2, 2] = 1.0, g, 1.0
    return Realization(psi.ravel() / np.sqrt(2 + g * g), cglmp_measurements(3))


def cglmp3_report(tol: float | None = None) -> OWReport:
    """Saturation report for the Zohren-Gill form with three outcomes; it fails."""
    return ow_report(zohren_gill(3), cglmp3_realization(), "A->B", tol)
