"""
Mermin at GHZ
=============

With three parties either one party steers the other two (type i) or two
parties steer the third (type ii). At GHZ with X and Y measurements both
kinds saturate.
"""

import numpy as np

from bellsteer import evaluate, local_bound
from bellsteer.mermin import ghz_realization, mermin_expression, tripartite_ow_report
from bellsteer.quantum import Realization, behavior_of

expr, r = mermin_expression(), ghz_realization()
print("local bound", local_bound(expr), " GHZ value", round(evaluate(expr, behavior_of(r)), 12))

for kind in ("i", "ii", "B->AC", "C->AB"):
    rep = tripartite_ow_report(expr, r, kind)
    lams = sorted({round(c.lambda_max, 12) for c in rep.contexts})
    print(f"{rep.direction:6s} contexts {len(rep.contexts):2d}  lambdas {lams}  max gap {rep.max_gap:.1e}")

# the product state |000> with the same measurements wins half the time on each triple
psi = np.zeros(8, dtype=complex)
psi[0] = 1
prod = Realization(psi, r.measurements)
print("product state value", evaluate(expr, behavior_of(prod)),
      " max gap", tripartite_ow_report(expr, prod, "i").max_gap)
