import numpy as np
import pytest

from bellsteer.catalog import counterexample_realization
from bellsteer.families import (BoundaryPoint3Param, TiltedPoint, boundary_residual, boundary_sample,
                                cglmp2_zg, chsh_correlator, chsh_xor, counterexample_displayed_lambdas,
                                counterexample_family, counterexample_game, saturating_prime_params,
                                tilted_chsh, tilted_chsh_prime, tilted_correlator, tilted_direction,
                                tilted_displayed_lambdas, tilted_lambdas, tilted_prime_direction,
                                tilted_untilted_gap, weighted_xor_game)
from bellsteer.fixtures import TILTED_GRID
from bellsteer.nsalgebra import ns_constant_value, ns_equivalent
from bellsteer.ow import ow_report, solve_gamma
from bellsteer.quantum import behavior_of, chsh_realization
from bellsteer.scenario import evaluate, local_bound, table_rows

THETAS = list(TILTED_GRID.values())
OPEN_THETAS = [t for t in THETAS if t < np.pi / 4]


@pytest.fixture(scope="module")
def counterexamples():
    out = {}
    for which in ("c1", "c2"):
        r = counterexample_realization(which)
        out[which] = (r, solve_gamma(counterexample_family(which), r))
    return out


def test_chsh_and_cglmp2():
    assert local_bound(cglmp2_zg()) == 3
    assert ns_equivalent(chsh_xor(), 2 * cglmp2_zg()).k == pytest.approx(-3)
    rep = ow_report(cglmp2_zg(), chsh_realization())
    assert rep.context(0, 0).gap == pytest.approx(0.1464466, abs=1e-7)


def test_correlator_forms():
    b = behavior_of(chsh_realization())
    assert evaluate(chsh_correlator(), b) == pytest.approx(2 * np.sqrt(2), abs=1e-12)
    assert local_bound(chsh_correlator()) == pytest.approx(2)
    assert local_bound(tilted_correlator(0.5)) == pytest.approx(2.5)


def test_tilted_correlator_maximum():
    # the tilted quantum maximum sqrt(8 + 2 alpha^2) is reached at the self-testing point
    p = TiltedPoint(np.pi / 6)
    v = evaluate(tilted_correlator(p.alpha), behavior_of(p.realization()))
    assert v == pytest.approx(np.sqrt(8 + 2 * p.alpha ** 2), abs=1e-12)
    assert v > 2 + p.alpha


@pytest.mark.parametrize("which", ["c1", "c2"])
def test_counterexample_gamma(counterexamples, which):
    r, res = counterexamples[which]
    expected = {"c1": 0.4648162, "c2": 0.5601320}[which]
    assert res.gamma == pytest.approx(expected, abs=1e-5)
    assert res.report.verdict
    assert not ow_report(counterexample_game(which, 0.0), r).verdict


def test_counterexample_lambdas(counterexamples):
    r, res = counterexamples["c1"]
    lam = counterexample_displayed_lambdas("c1", res.gamma, r)
    assert [lam[0, 0], lam[0, 1], lam[1, 0], lam[1, 1]] == pytest.approx(
        [0.821605, 0.821605, 1.76759, 1.89197], abs=1e-4)
    r, res = counterexamples["c2"]
    lam = counterexample_displayed_lambdas("c2", res.gamma, r)
    assert [lam[0, 0], lam[0, 1], lam[1, 0], lam[1, 1]] == pytest.approx(
        [1.84450, 1.84450, 1.64649, 1.84450], abs=1e-4)


@pytest.mark.parametrize("which", ["c1", "c2"])
def test_counterexamples_violate_local_bound(counterexamples, which):
    r, res = counterexamples[which]
    e = counterexample_game(which, res.gamma)
    assert evaluate(e, behavior_of(r)) > local_bound(e) + 1e-3


def test_c1_printed_constant_part_is_ns_zero():
    # the printed c1 addition carries a gamma-independent table worth zero on no-signaling boxes
    from bellsteer.families import C1_BASE, counterexample_addition
    from bellsteer.scenario import table_from_rows
    assert ns_constant_value(counterexample_addition("c1", 0.0)) == pytest.approx(0)
    assert ns_equivalent(counterexample_game("c1", 0.0), table_from_rows(C1_BASE)).k == pytest.approx(0)


def test_chsh_boundary_point():
    q = np.pi / 4
    p = BoundaryPoint3Param((q, q, q, 3 * q))
    rows = table_rows(weighted_xor_game(p))
    w = np.sqrt(2)
    assert [rows[0, 0], rows[0, 2], rows[2, 0], rows[2, 2]] == pytest.approx([w, w, w, -w])
    assert ow_report(weighted_xor_game(p), p.realization()).verdict


def test_boundary_invariant_enforced():
    h = np.pi / 2
    with pytest.raises(ValueError):
        BoundaryPoint3Param((h, h, h, 1.0))
    with pytest.raises(ValueError):
        BoundaryPoint3Param((0.0, 1.0, 1.0, 2.0))


@pytest.mark.parametrize("seed", range(20))
def test_boundary_samples(seed):
    p = boundary_sample(seed)
    b = behavior_of(p.realization())
    prob = b.probabilities
    corr = prob[0, 0] + prob[1, 1] - prob[0, 1] - prob[1, 0]
    assert np.allclose(corr, p.correlators, atol=1e-12)
    assert abs(boundary_residual(corr)) <= 1e-9
    assert np.allclose(prob.sum(axis=1), 0.5, atol=1e-12)
    assert np.allclose(prob.sum(axis=0), 0.5, atol=1e-12)
    assert p.angles == boundary_sample(seed).angles
    game = weighted_xor_game(p)
    assert ow_report(game, p.realization()).verdict
    assert evaluate(game, b) > local_bound(game)


@pytest.mark.parametrize("theta", THETAS)
def test_tilted_point(theta):
    p = TiltedPoint(theta)
    assert 0 <= p.alpha < 2
    assert 0 < p.mu <= np.pi / 4 + 1e-15
    assert np.tan(p.mu) == pytest.approx(np.sin(2 * theta))
    assert ns_constant_value(tilted_direction(p)) == pytest.approx(2 * np.sin(theta) ** 2, abs=1e-12)
    assert ns_constant_value(tilted_prime_direction(p)) == pytest.approx(1 - p.alpha, abs=1e-12)


def test_tilted_point_range():
    for bad in (0.0, -0.1, 1.0):
        with pytest.raises(ValueError):
            TiltedPoint(bad)


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("gamma", [-0.5, 0.3, 1.0, 2.0])
def test_tilted_gamma_shift(theta, gamma):
    p = TiltedPoint(theta)
    cert = ns_equivalent(tilted_chsh(p, gamma), tilted_chsh(p, 0.0))
    assert cert.k == pytest.approx(-2 * gamma * np.sin(theta) ** 2, abs=1e-9)


@pytest.mark.parametrize("theta", THETAS)
@pytest.mark.parametrize("gamma", [0.0, 1.0])
def test_tilted_local_bound_by_enumeration(theta, gamma):
    # probability-form table: one unit above the correlator-form bound
    p = TiltedPoint(theta)
    lb = local_bound(tilted_chsh(p, gamma))
    assert lb == pytest.approx(3 + p.alpha - 2 * gamma * np.sin(theta) ** 2, abs=1e-9)


@pytest.mark.parametrize("theta", THETAS)
def test_tilted_gamma_one_is_ow(theta):
    p = TiltedPoint(theta)
    assert ow_report(tilted_chsh(p, 1.0), p.realization()).max_gap <= 1e-9
    shown, closed = tilted_displayed_lambdas(p), tilted_lambdas(theta)
    for k in closed:
        assert shown[k] == pytest.approx(closed[k], abs=1e-9)


@pytest.mark.parametrize("theta", THETAS)
def test_tilted_gamma_zero_gap(theta):
    p = TiltedPoint(theta)
    rep = ow_report(tilted_chsh(p, 0.0), p.realization())
    expectation, lam = tilted_untilted_gap(theta)
    for b in range(2):
        c = rep.context(1, b)
        assert c.expectation == pytest.approx(expectation, abs=1e-9)
        assert c.lambda_max == pytest.approx(lam, abs=1e-9)
    assert rep.max_gap == pytest.approx(lam - expectation, abs=1e-9)
    assert rep.verdict == (theta == np.pi / 4)


@pytest.mark.parametrize("theta", OPEN_THETAS)
def test_tilted_gamma_zero_not_ow(theta):
    p = TiltedPoint(theta)
    assert not ow_report(tilted_chsh(p, 0.0), p.realization()).verdict


@pytest.mark.parametrize("theta", THETAS)
def test_tilted_prime_saturating_parameters(theta):
    p = TiltedPoint(theta)
    (x1, x2), resid = saturating_prime_params(p)
    assert resid <= 1e-12
    assert x1 == pytest.approx(p.alpha / 2, abs=1e-12) and x2 == pytest.approx(p.alpha / 2, abs=1e-12)
    e = tilted_chsh_prime(p, 1.0, (x1, x2))
    assert ow_report(e, p.realization(), "B->A").max_gap <= 1e-9
    # the other direction is computed for the record; it carries the untilted gap
    other = ow_report(e, p.realization(), "A->B")
    assert other.max_gap == pytest.approx(ow_report(tilted_chsh(p, 0.0), p.realization()).max_gap, abs=1e-9)


def test_printed_prime_parameters_cannot_saturate():
    # saturation needs X1 = X2, i.e. Lambda_plus * Lambda_minus = 1; the printed forms give -2 sin^2 2theta
    for theta in THETAS:
        p = TiltedPoint(theta)
        lp, lm = p.lambdas_prime()
        assert lp * lm == pytest.approx(-2 * np.sin(2 * theta) ** 2, abs=1e-12)
        x1, x2 = p.x_params()
        assert abs(x1 - x2) > 0.1


def test_quarter_pi_limit():
    p = TiltedPoint(np.pi / 4)
    assert p.alpha == 0
    x1, x2 = p.x_params()
    assert x1 == pytest.approx(1 / np.sqrt(2), abs=1e-12) and x2 == pytest.approx(-np.sqrt(2), abs=1e-12)
    near = TiltedPoint(np.pi / 4 - 1e-7)
    assert np.allclose(table_rows(tilted_chsh(near, 0.0)), table_rows(tilted_chsh(p, 0.0)), atol=1e-6)
    assert np.array_equal(table_rows(tilted_chsh(p, 0.0)), table_rows(chsh_xor()))


@pytest.mark.parametrize("theta", THETAS)
def test_tilted_fixture_is_nonlocal(theta):
    p = TiltedPoint(theta)
    e = tilted_chsh(p, 1.0)
    assert evaluate(e, behavior_of(p.realization())) > local_bound(e) + 1e-3
