"""
Searching for a saturating rewriting
====================================

Given a table and a qubit realization, a linear program over the twelve
no-signaling generator tables looks for an equivalent table whose
effective operators are diagonal in the steered bases, with the steered
entry on top.
"""

import numpy as np

from bellsteer import ow_report
from bellsteer.catalog import counterexample_realization
from bellsteer.families import cglmp2_zg, counterexample_game
from bellsteer.ow import ow_game_search
from bellsteer.quantum import chsh_realization
from bellsteer.scenario import table_rows

cases = [("cglmp2", cglmp2_zg(), chsh_realization()),
         ("c1", counterexample_game("c1", 0.0), counterexample_realization("c1"))]
for name, expr, r in cases:
    before = ow_report(expr, r).max_gap
    res = ow_game_search(expr, r)
    print(f"{name}: gap before {before:.4f}, margin {res.margin:.4f}, shifted by {res.constant:.6g}")
    print(np.round(table_rows(res.game), 6) + 0.0)
    print("gap after", f"{res.report.max_gap:.1e}\n")
