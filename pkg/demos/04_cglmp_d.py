"""
CGLMP with d outcomes
=====================

The weighted XOR game ``G_d`` equals ``d I_d - 3`` on no-signaling boxes.
At the Fourier-type measurements its effective operators follow from two
kernels, and the state built from the top eigenvector of ``B(0, 0)``
saturates every context. The Zohren-Gill form at the qutrit optimum does
not.
"""

import numpy as np

from bellsteer import ns_equivalent, ow_report
from bellsteer.cglmp import (cglmp3_report, gd_game, optimal_state, qutrit_gamma, top_coefficients,
                             zohren_gill)

for d in range(2, 9):
    rep = ow_report(gd_game(d), optimal_state(d))
    k = ns_equivalent(gd_game(d), d * zohren_gill(d)).k if d <= 6 else None
    print(f"d={d}  max gap {rep.max_gap:.1e}  G_d - d I_d = {k}  beta = {np.round(top_coefficients(d).real, 4)}")

print("\nqutrit optimum, Zohren-Gill form")
beta = top_coefficients(3)
print("Schmidt ratio %.12f  (sqrt11 - sqrt3)/2 = %.12f" % ((beta[1] / beta[0]).real, qutrit_gamma()))
for c in cglmp3_report().contexts:
    print(f"  x={c.inputs[0]} a={c.outputs[0]}  lambda {c.lambda_max:.6f}  <B> {c.expectation:.6f}")
