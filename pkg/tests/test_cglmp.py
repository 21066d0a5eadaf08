import numpy as np
import pytest

from bellsteer.cglmp import (MAX_D, alice_ket, bob_ket, cglmp3_report, cglmp3_realization, cglmp_measurements,
                             effective_ops_analytic, gd_coefficient, gd_game, input_shift, optimal_state,
                             outcome_shift, qutrit_gamma, top_coefficients, zohren_gill)
from bellsteer.families import cglmp2_zg
from bellsteer.linalg import is_unitary
from bellsteer.nsalgebra import ns_equivalent
from bellsteer.ow import ow_report
from bellsteer.quantum import behavior_of, effective_operator
from bellsteer.scenario import evaluate, local_bound

DIMS = range(2, MAX_D + 1)
TABLE_LAMBDA = (2, 2, 2, 1.745356, 1.745356, 1)
TABLE_EXPECT = (1.808341, 1.840744, 1.808341, 1.728714, 1.728714, 1)


def test_two_outcome_case_matches_chsh_module():
    assert np.array_equal(zohren_gill(2).coefficients, cglmp2_zg().coefficients)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_zohren_gill_local_bound(d):
    assert local_bound(zohren_gill(d)) == 3


@pytest.mark.parametrize("d", [2, 3, 5])
def test_gd_weight_definition(d):
    for a in range(d):
        for b in range(d):
            for x in range(2):
                for y in range(2):
                    w = gd_coefficient(d, a, b, x, y)
                    assert 0 <= w < d
                    assert (a - b) % d == ((-1) ** (x + y) * (w + 1) - x * y) % d


@pytest.mark.parametrize("d", range(2, 7))
def test_gd_is_scaled_cglmp(d):
    cert = ns_equivalent(gd_game(d), d * zohren_gill(d))
    assert cert is not None and cert.k == pytest.approx(-3, abs=1e-9)


@pytest.mark.parametrize("d", [3, 4])
def test_measurement_bases_are_orthonormal(d):
    for ket in (alice_ket, bob_ket):
        for x in range(2):
            m = np.array([ket(d, x, a) for a in range(d)])
            assert np.allclose(m @ m.conj().T, np.eye(d), atol=1e-12)
    alice, bob = cglmp_measurements(d)
    assert alice.shape == bob.shape == (2, d, d, d)


@pytest.mark.parametrize("d", DIMS)
def test_analytic_operators_match_projector_sums(d):
    r, g = optimal_state(d), gd_game(d)
    for x in range(2):
        for a in range(d):
            numeric = effective_operator(g, r, "A->B", (x, a)).matrix
            assert np.abs(effective_ops_analytic(d, x, a).matrix - numeric).max() <= 1e-9


@pytest.mark.parametrize("d", DIMS)
def test_covariance(d):
    ops = {(x, a): effective_ops_analytic(d, x, a).matrix for x in range(2) for a in range(d)}
    v = input_shift(d)
    assert is_unitary(v)
    for a in range(d):
        u = outcome_shift(d, a, 0)
        assert is_unitary(u)
        assert np.abs(u @ ops[0, 0] @ u.conj().T - ops[0, a]).max() <= 1e-10
        assert np.abs(v @ ops[0, a] @ v.conj().T - ops[1, a]).max() <= 1e-10


@pytest.mark.parametrize("d", DIMS)
def test_gd_is_ow(d):
    rep = ow_report(gd_game(d), optimal_state(d))
    assert rep.max_gap <= 1e-8
    for c in rep.contexts:
        assert c.weight == pytest.approx(1 / d, abs=1e-12)


def test_top_coefficients_are_real_and_unit():
    for d in DIMS:
        beta = top_coefficients(d)
        assert np.linalg.norm(beta) == pytest.approx(1)
        assert np.allclose(beta.imag, 0, atol=1e-12) and np.all(beta.real > 0)
        assert np.allclose(beta, beta[::-1], atol=1e-10)


def test_qutrit_ratio():
    beta = top_coefficients(3)
    assert (beta[1] / beta[0]).real == pytest.approx(qutrit_gamma(), abs=1e-9)
    assert qutrit_gamma() == pytest.approx((np.sqrt(11) - np.sqrt(3)) / 2)


def test_qutrit_table():
    rep = cglmp3_report()
    assert [c.lambda_max for c in rep.contexts] == pytest.approx(TABLE_LAMBDA, abs=1e-3)
    assert [c.expectation for c in rep.contexts] == pytest.approx(TABLE_EXPECT, abs=1e-3)
    assert not rep.verdict


def test_qutrit_value_beats_local_bound():
    v = evaluate(zohren_gill(3), behavior_of(cglmp3_realization()))
    assert v == pytest.approx(3.3049514051708933, abs=1e-12)
    assert v > local_bound(zohren_gill(3))


def test_small_d_rejected():
    with pytest.raises(ValueError):
        zohren_gill(1)
