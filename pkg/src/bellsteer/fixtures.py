"""Frozen realizations shipped as JSON next to the package.

Every file can be rebuilt from its constructor with ``write_fixtures``; the
tests check that the stored copies still agree with the code.
"""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

import numpy as np

from .quantum import Realization, chsh_realization

TILTED_GRID = {"pi_16": np.pi / 16, "pi_8": np.pi / 8, "3pi_16": 3 * np.pi / 16, "pi_4": np.pi / 4}
CGLMP_DIMS = tuple(range(2, 9))
VALUES_FILE = "values.json"


def _constructors() -> dict:
    from .cglmp import cglmp3_realization, optimal_state
    from .families import TiltedPoint
    from .mermin import ghz_realization

    out = {"chsh": chsh_realization, "ghz": ghz_realization, "cglmp3_psi_gamma": cglmp3_realization}
    for key, theta in TILTED_GRID.items():
        out[f"tilted_{key}"] = lambda theta=theta: TiltedPoint(theta).realization()
    for d in CGLMP_DIMS:
        out[f"cglmp_d{d}"] = lambda d=d: optimal_state(d)
    return out


def _frozen_values() -> dict:
    """Values computed once by direct Born-rule contraction and kept for regression."""
    from .cglmp import cglmp3_realization, gd_game, optimal_state, zohren_gill
    from .quantum import behavior_of
    from .scenario import evaluate

    vals = {"zohren_gill_3_at_psi_gamma": evaluate(zohren_gill(3), behavior_of(cglmp3_realization()))}
    for d in CGLMP_DIMS:
        vals[f"gd_{d}_at_optimal_state"] = evaluate(gd_game(d), behavior_of(optimal_state(d)))
    return vals


def fixture_names() -> list[str]:
    return sorted(_constructors())


def build_fixture(name: str) -> Realization:
    try:
        return _constructors()[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}") from None


def load_fixture(name: str) -> Realization:
    text = resources.files("bellsteer").joinpath("data", f"{name}.json").read_text()
    return Realization.from_json(text)


def load_values() -> dict:
    return json.loads(resources.files("bellsteer").joinpath("data", VALUES_FILE).read_text())


def write_fixtures(directory) -> list[Path]:
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name, make in sorted(_constructors().items()):
        path = directory / f"{name}.json"
        path.write_text(make().to_json() + "\n")
        written.append(path)
    path = directory / VALUES_FILE
    path.write_text(json.dumps(_frozen_values(), indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written
