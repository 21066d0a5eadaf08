import numpy as np
import pytest

from bellsteer.cglmp import zohren_gill
from bellsteer.fixtures import CGLMP_DIMS, build_fixture, fixture_names, load_fixture, load_values, write_fixtures
from bellsteer.quantum import behavior_of
from bellsteer.scenario import evaluate


@pytest.mark.parametrize("name", fixture_names())
def test_shipped_fixture_matches_constructor(name):
    stored, built = load_fixture(name), build_fixture(name)
    assert stored.dims == built.dims
    assert np.allclose(stored.state, built.state, atol=1e-15)
    for m1, m2 in zip(stored.measurements, built.measurements):
        assert np.allclose(m1, m2, atol=1e-15)


def test_fixture_set():
    names = set(fixture_names())
    assert {"chsh", "ghz", "tilted_pi_16", "tilted_pi_4"} <= names
    assert {f"cglmp_d{d}" for d in CGLMP_DIMS} <= names


def test_unknown_fixture():
    with pytest.raises(KeyError):
        build_fixture("nope")


def test_frozen_values_follow_the_identity():
    vals = load_values()
    for d in CGLMP_DIMS:
        zg = evaluate(zohren_gill(d), behavior_of(load_fixture(f"cglmp_d{d}")))
        # G_d = d I_d - 3 on no-signaling behaviors
        assert vals[f"gd_{d}_at_optimal_state"] == pytest.approx(d * zg - 3, abs=1e-10)
    assert vals["gd_2_at_optimal_state"] == pytest.approx(2 + np.sqrt(2), abs=1e-12)
    assert vals["zohren_gill_3_at_psi_gamma"] == pytest.approx((vals["gd_3_at_optimal_state"] + 3) / 3, abs=1e-12)


def test_chsh_fixture_value():
    from bellsteer.families import chsh_xor
    assert evaluate(chsh_xor(), behavior_of(load_fixture("chsh"))) == pytest.approx(2 + np.sqrt(2), abs=1e-9)


def test_rewrite_is_reproducible(tmp_path):
    paths = write_fixtures(tmp_path)
    from importlib import resources
    shipped = resources.files("bellsteer").joinpath("data")
    for p in paths:
        assert p.read_text() == shipped.joinpath(p.name).read_text()
