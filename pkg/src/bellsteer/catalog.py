"""Named (expression, realization) pairs and seeded parameter scans."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import families as fam
from .ow import default_tol, ow_report
from .quantum import Realization, behavior_of, chsh_realization
from .report import ScanRecord
from .scenario import BellExpression, evaluate
from .seesaw import seesaw_maximize

FAMILY_NAMES = ("chsh", "chsh-xor", "cglmp2", "c1", "c2", "three-param", "tilted", "tilted-prime")
SCAN_NAMES = ("three-param", "tilted")
DEFAULT_RESTARTS = 50


@dataclass(frozen=True)
class Case:
    name: str
    expr: BellExpression
    realization: Realization
    direction: str = "A->B"
    params: dict | None = None


def _theta(theta):
    return np.pi / 8 if theta is None else float(theta)


def counterexample_realization(which: str, seed: int = 0, restarts: int = DEFAULT_RESTARTS) -> Realization:
    """The maximizer of the printed base game, recovered by see-saw."""
    _, r = seesaw_maximize(fam.counterexample_game(which, 0.0), (2, 2), restarts, seed)
    return r


def named_case(name: str, gamma: float | None = None, theta: float | None = None, seed: int = 0,
               restarts: int = DEFAULT_RESTARTS) -> Case:
    """Build a family member and the realization it is tested at.

    ``gamma`` defaults to 0 for the counterexamples (the games as first
    written) and to 1 for the tilted families.
    """
    if name in ("chsh", "chsh-xor"):
        return Case(name, fam.chsh_xor(), chsh_realization())
    if name == "cglmp2":
        return Case(name, fam.cglmp2_zg(), chsh_realization())
    if name in ("c1", "c2"):
        g = 0.0 if gamma is None else float(gamma)
        return Case(name, fam.counterexample_game(name, g), counterexample_realization(name, seed, restarts),
                    params={"gamma": g})
    if name == "three-param":
        p = fam.boundary_sample(seed)
        a = dict(zip(("a00", "a01", "a10", "a11"), p.angles))
        return Case(name, fam.weighted_xor_game(p), p.realization(), params=a)
    if name in ("tilted", "tilted-prime"):
        p = fam.TiltedPoint(_theta(theta))
        g = 1.0 if gamma is None else float(gamma)
        if name == "tilted":
            return Case(name, fam.tilted_chsh(p, g), p.realization(),
                        params={"theta": p.theta, "alpha": p.alpha, "gamma": g})
        return Case(name, fam.tilted_chsh_prime(p, g), p.realization(), "B->A",
                    params={"theta": p.theta, "alpha": p.alpha, "gamma": g})
    raise KeyError(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")


def sample_seeds(seed: int, samples: int) -> list[int]:
    """Per-sample integer seeds drawn from one generator, so each record can be replayed alone."""
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2**62, size=samples)]


def scan_three_param(samples: int, seed: int = 0, tol: float | None = None) -> list[ScanRecord]:
    tol = default_tol() if tol is None else tol
    out = []
    for s in sample_seeds(seed, samples):
        t0 = time.perf_counter()
        case = named_case("three-param", seed=s)
        rep = ow_report(case.expr, case.realization, tol=tol)
        value = evaluate(case.expr, behavior_of(case.realization))
        out.append(ScanRecord(s, case.params, value, rep.max_gap, rep.verdict, tol, time.perf_counter() - t0))
    return out


def scan_tilted(samples: int, seed: int = 0, tol: float | None = None, gamma: float = 1.0) -> list[ScanRecord]:
    """Uniform theta in (0, pi/4] for the tilted family at fixed gamma."""
    tol = default_tol() if tol is None else tol
    out = []
    for s in sample_seeds(seed, samples):
        t0 = time.perf_counter()
        theta = float(np.pi / 4 * (1 - np.random.default_rng(s).random()))
        case = named_case("tilted", gamma=gamma, theta=theta)
        rep = ow_report(case.expr, case.realization, tol=tol)
        value = evaluate(case.expr, behavior_of(case.realization))
        out.append(ScanRecord(s, {"theta": theta, "gamma": gamma}, value, rep.max_gap, rep.verdict, tol,
                              time.perf_counter() - t0))
    return out


def run_scan(name: str, samples: int, seed: int = 0, tol: float | None = None, gamma: float | None = None):
    if name == "three-param":
        return scan_three_param(samples, seed, tol)
    if name == "tilted":
        return scan_tilted(samples, seed, tol, 1.0 if gamma is None else gamma)
    raise KeyError(f"unknown scan {name!r}; choose from {', '.join(SCAN_NAMES)}")
