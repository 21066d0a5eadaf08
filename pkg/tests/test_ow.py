import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bellsteer.families import (TiltedPoint, cglmp2_zg, chsh_xor, counterexample_family, tilted_family)
from bellsteer.nsalgebra import generator_tables, ns_constant_value
from bellsteer.ow import (GammaFamily, NotApplicable, all_projector_params, necessary_residual, ow_form,
                          ow_game_search, ow_report, projector_params, reduced_bound, solve_gamma)
from bellsteer.quantum import (PAULI_Z, Realization, chsh_realization, observable_projectors,
                               random_realization, steered_state)
from bellsteer.scenario import table_from_rows

seeds = st.integers(0, 2**32 - 1)


def test_chsh_xor_is_ow():
    rep = ow_report(chsh_xor(), chsh_realization())
    assert rep.verdict and rep.max_gap <= 1e-10
    assert rep.direction == "A->B" and len(rep.contexts) == 4


def test_cglmp2_is_not_ow():
    rep = ow_report(cglmp2_zg(), chsh_realization())
    for a in range(2):
        c = rep.context(0, a)
        assert c.expectation == pytest.approx(1.5 + 0.5 / np.sqrt(2), abs=1e-12)
        assert c.lambda_max == pytest.approx(2, abs=1e-12)
    assert not rep.verdict
    assert rep.max_gap == pytest.approx(0.5 - 0.5 / np.sqrt(2), abs=1e-12)


def test_tolerance_moves_the_verdict():
    r = chsh_realization()
    assert ow_report(cglmp2_zg(), r, tol=0.2).verdict
    assert not ow_report(cglmp2_zg(), r, tol=0.1).verdict


def test_env_tolerance(monkeypatch):
    monkeypatch.setenv("BELL_TOL", "0.5")
    assert ow_report(cglmp2_zg(), chsh_realization()).tol == 0.5
    monkeypatch.delenv("BELL_TOL")
    assert ow_report(cglmp2_zg(), chsh_realization()).tol == 1e-7


def test_zero_weight_contexts_are_skipped():
    z = observable_projectors(PAULI_Z)
    r = Realization([1, 0, 0, 0], (np.array([z, z]), np.array([z, z])))
    rep = ow_report(chsh_xor(), r)
    zero = [c for c in rep.contexts if c.zero_weight]
    assert len(zero) == 2 and all(c.gap is None for c in zero)
    d = rep.to_dict()
    assert sum(1 for c in d["contexts"] if c.get("zero_weight")) == 2


def test_tilted_steered_state():
    th = np.pi / 8
    s = steered_state(TiltedPoint(th).realization(), 0, 1)
    assert s.weight == pytest.approx(np.sin(th) ** 2, abs=1e-15)
    assert np.allclose(s.rho, [[0, 0], [0, 1]], atol=1e-12)


def test_tilted_projector_symmetry():
    pp = projector_params(TiltedPoint(np.pi / 8).realization(), 0, 0)
    assert pp.q0 == pytest.approx(-pp.q1, abs=1e-12)
    assert pp.ratio == pytest.approx(-1, abs=1e-12)


def test_projector_params_need_qubits():
    from bellsteer.cglmp import cglmp3_realization
    with pytest.raises(NotApplicable):
        projector_params(cglmp3_realization(), 0, 0)


@given(seeds)
def test_gaps_are_nonnegative(seed):
    rng = np.random.default_rng(seed)
    r = random_realization((2, 2), (2, 2), (2, 2), rng)
    e = table_from_rows(rng.normal(size=(4, 4)))
    for direction in ("A->B", "B->A"):
        assert ow_report(e, r, direction).max_gap >= -1e-12


@given(seeds, st.floats(-5, 5))
def test_flat_shift_leaves_gaps(seed, k):
    # adding k to every entry shifts each effective operator by a multiple of the identity
    rng = np.random.default_rng(seed)
    r = random_realization((2, 2), (2, 2), (2, 2), rng)
    e = table_from_rows(rng.normal(size=(4, 4)))
    shifted = e + table_from_rows(np.full((4, 4), k))
    g0 = [c.gap for c in ow_report(e, r).contexts]
    g1 = [c.gap for c in ow_report(shifted, r).contexts]
    assert np.allclose(g0, g1, atol=1e-10)


def test_ow_form_meets_necessary_condition(rng):
    r = chsh_realization()
    params = all_projector_params(r)
    ratios = [[params[x, a].ratio for a in range(2)] for x in range(2)]
    e = ow_form(ratios, rng.normal(size=12))
    for (x, a), pp in params.items():
        assert necessary_residual(e, pp, x, a) == pytest.approx(0, abs=1e-12)


def test_search_rewrites_cglmp2():
    res = ow_game_search(cglmp2_zg(), chsh_realization())
    assert res.game is not None and res.report.verdict
    diff = cglmp2_zg() - res.game
    assert ns_constant_value(diff) == pytest.approx(res.constant, abs=1e-9)


def test_search_keeps_an_ow_game():
    res = ow_game_search(chsh_xor(), chsh_realization())
    assert res.constant == pytest.approx(0, abs=1e-9)
    assert np.allclose(res.game.coefficients, chsh_xor().coefficients, atol=1e-9)


@settings(max_examples=30)
@given(seeds)
def test_search_results_are_verified(seed):
    rng = np.random.default_rng(seed)
    r = random_realization((2, 2), (2, 2), (2, 2), rng)
    e = table_from_rows(rng.normal(size=(4, 4)))
    res = ow_game_search(e, r)
    if res.game is None:
        assert res.message
    else:
        assert res.report.verdict
        assert ns_constant_value(e - res.game) == pytest.approx(res.constant, abs=1e-8)


@settings(max_examples=30)
@given(seeds)
def test_search_sees_through_ns_constants(seed):
    rng = np.random.default_rng(seed)
    w = rng.normal(size=12)
    shift = sum((wi * g for wi, g in zip(w, generator_tables(1.0))), 0 * generator_tables()[0])
    res = ow_game_search(chsh_xor() + shift, chsh_realization())
    assert res.game is not None and res.report.verdict
    assert ns_constant_value(chsh_xor() + shift - res.game) == pytest.approx(res.constant, abs=1e-8)


def test_solve_gamma_tilted_is_one():
    for th in (np.pi / 16, np.pi / 8):
        p = TiltedPoint(th)
        g = solve_gamma(tilted_family(p), p.realization())
        assert g.gamma == pytest.approx(1, abs=1e-9)


def test_solve_gamma_reports_failure():
    # at the CHSH realization every c1 context asks for a different gamma
    g = solve_gamma(counterexample_family("c1"), chsh_realization())
    assert g.gamma is None and g.message


def test_gamma_family_rejects_signaling_direction():
    with pytest.raises(ValueError):
        GammaFamily(chsh_xor(), chsh_xor())


def test_reduced_bound_recombines():
    r = chsh_realization()
    e = cglmp2_zg()
    rep = ow_report(e, r)
    for x in range(2):
        for a in range(2):
            rb = reduced_bound(e, r, x, a)
            assert rb.shift + rb.lambda_max == pytest.approx(rep.context(x, a).lambda_max, abs=1e-12)
            assert all(w >= 0 for _, w in rb.weights.values())
