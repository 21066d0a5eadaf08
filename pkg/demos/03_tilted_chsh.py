"""
Tilted CHSH: which member saturates
===================================

For the tilted point at angle theta the game ``I(gamma)`` saturates at
``gamma = 1`` and not at ``gamma = 0``. The top eigenvalues have closed
forms in ``cos 4 theta``. For the primed family the saturation conditions
in the Bob-to-Alice direction can be solved directly for ``X1, X2``.
"""

import numpy as np

from bellsteer import local_bound, ow_report, solve_gamma
from bellsteer.families import (TiltedPoint, saturating_prime_params, tilted_chsh, tilted_chsh_prime,
                                tilted_displayed_lambdas, tilted_family, tilted_lambdas, tilted_untilted_gap)

for theta in (np.pi / 16, np.pi / 8, 3 * np.pi / 16):
    p = TiltedPoint(theta)
    r = p.realization()
    print(f"theta = {theta:.4f}  alpha = {p.alpha:.6f}")

    # the affine conditions single out gamma = 1
    print("  solved gamma:", solve_gamma(tilted_family(p), r).gamma)

    shown, closed = tilted_displayed_lambdas(p), tilted_lambdas(theta)
    print("  lambdas vs closed forms:", max(abs(shown[k] - closed[k]) for k in closed))

    # gamma = 0 misses on Alice's second input by the footnote amount
    expectation, lam = tilted_untilted_gap(theta)
    print(f"  gamma=0 gap {ow_report(tilted_chsh(p, 0.0), r).max_gap:.6f}  formula {lam - expectation:.6f}")

    # probability-form tables sit one unit above the correlator bound
    print(f"  local bound {local_bound(tilted_chsh(p, 1.0)):.6f}  vs 2+alpha-2sin^2 {2 + p.alpha - 2 * np.sin(theta) ** 2:.6f}")

    # primed family: printed X1, X2 against the solved ones
    printed = ow_report(tilted_chsh_prime(p, 1.0), r, "B->A").max_gap
    (x1, x2), resid = saturating_prime_params(p)
    solved = ow_report(tilted_chsh_prime(p, 1.0, (x1, x2)), r, "B->A").max_gap
    print(f"  primed, printed X: gap {printed:.4f}; solved X1 = X2 = {x1:.6f} (alpha/2 = {p.alpha / 2:.6f}): gap {solved:.1e}")
