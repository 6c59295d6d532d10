import json
import math

import numpy as np
import pytest

import oracles
from ptheta import bounds, core, zeros
from ptheta.bounds import (
    SUITE_NAMES,
    certify_disk_rouche,
    check_dominant_term,
    run_suite,
    verify_G_bound,
    verify_disk_separation,
    verify_half_q_case,
    verify_kappa_lower,
    verify_lemma_L_bounds,
    verify_prop_steps,
)
from ptheta.core import DomainError, QParameter, mu


# --------------------------------------------------------------------------
# individual checks
# --------------------------------------------------------------------------

def test_dominant_term_pass_and_tau():
    r = check_dominant_term(0.2, 3)
    assert r.passed
    assert r.context["tau"] == pytest.approx(oracles.TAU_02, abs=1e-12)
    assert r.context["tau_majorant_margin"] > 0.0
    r0 = check_dominant_term(0.05, 0)
    assert r0.passed and r0.margin > 0.5


def test_dominant_term_boundary_at_c0():
    r = check_dominant_term(0.2078750206, 1)
    # threshold margin 1 - tau(|q|) sits at the root of tau = 1
    assert abs(r.context["tau_threshold_margin"]) < 1e-7
    assert r.passed  # the actual dominance still holds at k = 1
    # above c0 the threshold check reports a negative margin, no raise
    r2 = check_dominant_term(0.25, 1)
    assert r2.context["tau_threshold_margin"] < 0.0


def test_disk_separation_examples():
    assert verify_disk_separation(QParameter(0.65), 3, 2, 1).passed
    assert verify_disk_separation(QParameter(1 - 1 / 4), 4, 10, 9).passed
    with pytest.raises(DomainError):
        verify_disk_separation(QParameter(0.3), 3, 2, 1)
    with pytest.raises(DomainError):
        verify_disk_separation(QParameter(0.65), 3, 1, 1)


def test_disk_separation_direct_value():
    # centers at -1/q^2 and -1/q for real q = 0.65
    r = verify_disk_separation(QParameter(0.65), 3, 2, 1)
    want = abs(-0.65 ** -2.0 + 0.65 ** -1.0)
    assert r.lhs == pytest.approx(math.log(want), abs=1e-12)


def test_g_bound_examples():
    assert verify_G_bound(0.9, 2.0).passed
    r = verify_G_bound(0.5, 8.0 ** 11)
    assert r.passed
    assert r.lhs == pytest.approx(1.0 / (8.0 ** 11 - 1.0), rel=1e-12)
    assert verify_G_bound(0.1, -1.5).passed
    with pytest.raises(DomainError):
        verify_G_bound(0.5, 0.5)


def test_lemma_L_examples():
    reps = verify_lemma_L_bounds(0.5, 10.0, 2.0)
    assert all(r.passed for r in reps)
    lq = next(r for r in reps if r.name == "lemma-L:Q")
    assert math.exp(lq.lhs) == pytest.approx(oracles.S_HALF, abs=1e-9)
    assert math.exp(lq.rhs) == pytest.approx(math.exp(-core.PI_SQUARED_OVER_6), rel=1e-12)
    # q -> 0, b barely above 1: everything trivially passes with |Q| -> 1
    reps2 = verify_lemma_L_bounds(1e-6, 7.0, 1.0001)
    assert all(r.passed for r in reps2)
    # large x in the band of b = 5
    reps3 = verify_lemma_L_bounds(QParameter(1 - 1 / 5), 8.0 ** 11, 5.0)
    assert all(r.passed for r in reps3)


def test_lemma_L_T_below_pi2_over_6():
    reps = verify_lemma_L_bounds(0.9, 50.0, 10.0)
    t = next(r for r in reps if r.name == "lemma-L:T-upper")
    assert 0.0 < t.context["T"] < core.PI_SQUARED_OVER_6
    assert t.passed


def test_kappa_lower_examples():
    r = verify_kappa_lower(QParameter(0.9), 8.0 ** 11 * 1.01, 10)
    assert r.passed and r.context["kappa"] == 218 and r.rhs == 110.0
    r2 = verify_kappa_lower(QParameter(2 / 3), 8.0 ** 11 * 2.0, 3)
    assert r2.passed and r2.lhs > 33
    # the n = 3 chain includes the exact equalities (1/2)^2 = 1/4 etc.
    assert r2.context["chain_ok"] and r2.context["partA_ok"]
    with pytest.raises(DomainError):
        verify_kappa_lower(QParameter(0.9), 100.0, 10)


def test_prop_steps_spec_point():
    qp = QParameter(2 / 3)
    x = mu(qp, 60) + (1 / 6) * complex(math.cos(math.pi / 3), math.sin(math.pi / 3))
    reps = verify_prop_steps(qp, 60, 3, x)
    names = {r.name for r in reps}
    assert {"prop:star", "prop:star2-actual", "prop:star2-display",
            "prop:star3", "prop:partE-scalar"} <= names
    assert all(r.passed for r in reps)
    scalar = next(r for r in reps if r.name == "prop:partE-scalar")
    # 8^(pi^2/6) = 30.5... < e^3.5 = 33.1...
    assert math.exp(scalar.rhs) == pytest.approx(30.58, abs=0.01)
    assert math.exp(scalar.lhs) == pytest.approx(33.12, abs=0.01)


def test_prop_steps_preconditions():
    qp = QParameter(2 / 3)
    with pytest.raises(DomainError):
        verify_prop_steps(qp, 10, 3, mu(qp, 10) + 1 / 6)  # circle not in X
    with pytest.raises(DomainError):
        verify_prop_steps(QParameter(0.3), 60, 3, -100.0)  # band violated
    with pytest.raises(DomainError):
        verify_prop_steps(qp, 60, 3, mu(qp, 60) + 0.5)  # off the circle


def test_half_q_chain():
    qp = QParameter(0.3)
    s = bounds._min_s_in_X(0.3, 0.25)
    x = mu(qp, s) + 0.25
    reps = verify_half_q_case(qp, x)
    assert all(r.passed for r in reps)
    chain = next(r for r in reps if r.name == "half-q:chain-gt-1")
    assert chain.margin > 50.0  # the displayed constant chain is ~ e^72
    floor13 = next(r for r in reps if r.name == "half-q:factor-floor-13")
    assert floor13.rhs == pytest.approx(10.63, abs=0.02)
    kap = next(r for r in reps if r.name == "half-q:kappa-ge-15")
    assert kap.lhs >= 15.0


def test_half_q_c1_c2_gap():
    c1 = core.euler_product_S(0.5, 1e-14)
    assert 0.0 < c1 - bounds.C2_CONSTANT < 2e-10
    qp = QParameter(0.3)
    s = bounds._min_s_in_X(0.3, 0.25)
    reps = verify_half_q_case(qp, mu(qp, s) + 0.25)
    ri = next(r for r in reps if r.name == "half-q:R-intermediate")
    assert 0.0 < ri.margin < 1e-8


def test_half_q_preconditions():
    with pytest.raises(DomainError):
        verify_half_q_case(QParameter(0.15), -(8.0 ** 11) * 2)  # |q| below c0
    qp = QParameter(0.3)
    with pytest.raises(DomainError):
        verify_half_q_case(qp, -(8.0 ** 11) * 0.5)  # |x| too small
    s = bounds._min_s_in_X(0.3, 0.25)
    with pytest.raises(DomainError):
        verify_half_q_case(qp, mu(qp, s) + 0.1)  # inside a quarter disk


def test_report_serialization():
    r = verify_G_bound(0.9, 2.0)
    d = r.to_json_dict()
    assert set(d) == {"name", "lhs", "rhs", "margin", "pass", "context"}
    json.dumps(d)


# --------------------------------------------------------------------------
# certificates
# --------------------------------------------------------------------------

def test_certificate_nband_spec_example():
    cert = certify_disk_rouche(2 / 3, 60, regime="n-band", n=3, samples=2048)
    assert cert.in_X and cert.passed and cert.winding_theta == 1
    assert cert.min_abs_thetastar_log > 0.0
    assert cert.max_abs_G <= 1.0 / (8.0 ** 11 - 1.0)


def test_certificate_half_q_spec_example():
    cert = certify_disk_rouche(0.4, 30, regime="half-q", samples=2048)
    assert cert.passed and cert.winding_theta == 1
    assert abs(mu(0.4, 30)) == pytest.approx(0.4 ** -30, rel=1e-12)


def test_certificate_not_in_X():
    cert = certify_disk_rouche(2 / 3, 10, regime="n-band", n=3)
    assert not cert.in_X and not cert.passed
    assert cert.winding_theta == 0


def test_certificate_monotone_inclusion():
    """in_X at modulus alpha stays true for smaller |q| in the same band.

    s is chosen so the circle is barely inside X at the largest modulus and
    stays representable (|mu_s| well under ulp-collapse) at the smallest.
    """
    s, alpha = 42, 0.58
    assert 0.58 ** -s - 1 / 6 > 8.0 ** 11
    flags = []
    for aq in (alpha, 0.55, 0.52, 0.5):
        cert = certify_disk_rouche(aq, s, regime="n-band", n=3, samples=512)
        flags.append(cert.in_X)
        assert cert.passed
    assert all(flags)


def test_certificate_implies_refinable_simple_zero():
    cert = certify_disk_rouche(0.35, 23, regime="half-q", samples=1024)
    assert cert.passed
    rec = zeros.refine_zero_newton(0.35, mu(0.35, 23), tol=1e-10)
    assert abs(rec.location - mu(0.35, 23)) < cert.radius
    assert rec.multiplicity == 1
    assert rec.scaled_residual <= 1e-9


def test_certificate_serialization_schema():
    cert = certify_disk_rouche(0.35, 23, regime="half-q", samples=512)
    d = cert.to_json_dict()
    assert d["schema"] == "cert/1"
    assert {"q_re", "q_im", "s", "n_or_regime", "radius", "samples",
            "min_thetastar", "max_G", "winding", "in_X", "pass"} <= set(d)
    json.dumps(d)
    assert d["n_or_regime"] == "half-q"


def test_certificate_validation():
    with pytest.raises(DomainError):
        certify_disk_rouche(0.35, 0, regime="half-q")
    with pytest.raises(DomainError):
        certify_disk_rouche(0.35, 23, regime="bogus")
    with pytest.raises(DomainError):
        certify_disk_rouche(0.1, 23, regime="auto")  # below c0


# --------------------------------------------------------------------------
# suites
# --------------------------------------------------------------------------

@pytest.mark.parametrize("name", SUITE_NAMES)
def test_suite_small_run_all_pass(name):
    reports = run_suite(name, trials=60, seed=7)
    assert reports
    bad = [r for r in reports if not r.passed]
    assert not bad, bad[:3]


def test_suite_deterministic_for_fixed_seed():
    a = run_suite("g-bound", trials=25, seed=123)
    b = run_suite("g-bound", trials=25, seed=123)
    assert [(r.name, r.lhs, r.rhs, r.margin, r.passed) for r in a] \
        == [(r.name, r.lhs, r.rhs, r.margin, r.passed) for r in b]
    c = run_suite("g-bound", trials=25, seed=124)
    assert [(r.lhs) for r in a] != [(r.lhs) for r in c]


def test_suite_unknown_name():
    with pytest.raises(DomainError):
        run_suite("bogus", trials=1)
