import math

import numpy as np
import pytest

from maxface.core import INF, Polynomial, RationalMap, is_inf, poly_roots
from maxface.errors import PeriodConditionFailed, ValidationError
from maxface.gallery import gallery
from maxface.global_analysis import (analyze_end, classify_completeness, compute_periods, gauss_degree,
                                     global_report, lopez_ros_excluded, osserman_report, total_curvature_numeric)
from maxface.weierstrass import WeierstrassData, evaluate_immersion_many, lopez_ros

from oracles import gallery_data, ids

CAT = gallery("catenoid")
ENN = gallery("enneper")


def rat(num, den=(1,)):
    return RationalMap(Polynomial(num), Polynomial(den))


def modified_catenoid(a=1.0):
    return WeierstrassData(RationalMap.z(), rat([1j * a], [0, 0, 1]), (0, INF), 1)


# -- periods --------------------------------------------------------------------

@pytest.mark.parametrize("a", [1.0, 2.5, -0.4])
def test_catenoid_periods(a):
    rep = compute_periods(gallery("catenoid", a=a))
    assert rep.passes and rep.max_re_violation < 1e-10
    p0 = [r for r in rep.per_puncture if r.puncture == 0][0]
    assert np.allclose(p0.periods, [2j * math.pi * (-2 * a), 0, 0], atol=1e-12)


@pytest.mark.parametrize("a", [1.0, 2.5, -0.4])
def test_modified_catenoid_fails(a):
    rep = compute_periods(modified_catenoid(a))
    assert not rep.passes
    assert abs(rep.max_re_violation - 4 * math.pi * abs(a)) < 1e-8
    assert rep.max_disagreement < 1e-9
    with pytest.raises(PeriodConditionFailed):
        classify_completeness(modified_catenoid(a))


def test_enneper_periods_trivial():
    rep = compute_periods(ENN)
    assert rep.passes and rep.max_re_violation == 0


@pytest.mark.parametrize("data", gallery_data(), ids=ids())
def test_gallery_periods_agree_and_pass(data):
    rep = compute_periods(data)
    assert rep.passes
    assert rep.max_disagreement < 1e-9


# -- degree ----------------------------------------------------------------------

def test_degree_examples():
    assert gauss_degree(CAT) == 1
    assert gauss_degree(gallery("jorge-meeks-companion", n=4)) == 3
    g = rat([1, 0, 1], [-1, 0, 1])
    assert g.degree == 2
    # preimages of a generic value
    c = 0.37 + 0.21j
    pre = poly_roots(g.num - c * g.den)
    assert sum(m for _, m in pre) == 2
    assert gauss_degree(gallery("plane")) == 0


# -- ends ------------------------------------------------------------------------

def end_asymptotics(data, p, rho=3e-3):
    """``(|a|, c)`` read off the immersion: ``x0 ~ c log rho`` and horizontal size ``|a| / rho``.

    Antipodal differences cancel the constant of integration.
    """
    th = np.linspace(0.1, 3.0, 7)
    w = rho * np.exp(1j * th)

    def pts(w):
        return 1 / w if is_inf(p) else p + w

    f1 = evaluate_immersion_many(data, pts(w))
    f2 = evaluate_immersion_many(data, pts(0.5 * w))
    f3 = evaluate_immersion_many(data, pts(-w))
    c = float(np.mean((f1[:, 0] - f2[:, 0]) / (math.log(rho) - math.log(0.5 * rho))))
    a = float(np.mean(0.5 * rho * np.hypot(f1[:, 1] - f3[:, 1], f1[:, 2] - f3[:, 2])))
    return a, c


def test_catenoid_ends():
    for a_scale in (1.0, 1.7):
        d = gallery("catenoid", a=a_scale)
        for p in (0j, INF):
            e = analyze_end(d, p)
            assert e.end_complete and e.phi_pole_order == 2 and e.embedded and e.df_order_ok
            assert e.end_type == "Catenoidal"
            a_num, c_num = end_asymptotics(d, p)
            assert abs(abs(e.coefficients[0]) - a_num) < 1e-4 * a_num
            assert abs(e.coefficients[1] - c_num) < 1e-4 * abs(c_num)
    assert analyze_end(CAT, 0).g_modulus == 0
    assert math.isinf(analyze_end(CAT, INF).g_modulus)


def test_lopez_ros_catenoid_end_matches_asymptotics():
    d = lopez_ros(CAT, 2.0)
    for p in (0j, INF):
        e = analyze_end(d, p)
        a_num, c_num = end_asymptotics(d, p)
        assert abs(abs(e.coefficients[0]) - a_num) < 1e-4 * a_num
        assert abs(e.coefficients[1] - c_num) < 1e-4 * abs(c_num)


def test_enneper_end():
    e = analyze_end(ENN, INF)
    assert e.phi_pole_order == 4 and not e.embedded and e.end_type == "HigherOrder" and e.end_complete


@pytest.mark.parametrize("n", [2, 3, 4])
def test_jorge_meeks_ends(n):
    d = gallery("jorge-meeks-companion", n=n)
    for p in d.punctures:
        e = analyze_end(d, p)
        assert not e.end_complete and e.end_type == "Simple-candidate"
        assert abs(e.g_modulus - 1) < 1e-10


def test_not_a_puncture():
    with pytest.raises(ValidationError):
        analyze_end(CAT, 1)


def test_order_one_end_is_never_silently_complete():
    # g = z, omega_hat = 1/z: simple pole of the forms at 0
    d = WeierstrassData(RationalMap.z(), rat([1], [0, 1]), (0, INF), 1)
    for p in d.punctures:
        e = analyze_end(d, p)
        assert not (e.end_complete and e.phi_pole_order < 2) or e.prop48_violation


def test_lopez_ros_minus_one_congruent_ends():
    for base in (CAT, ENN):
        for p in base.punctures:
            e1, e2 = analyze_end(base, p), analyze_end(lopez_ros(base, -1.0), p)
            assert (e1.phi_pole_order, e1.end_type, e1.embedded) == (e2.phi_pole_order, e2.end_type, e2.embedded)
            if e1.coefficients:
                assert np.allclose(np.abs(e1.coefficients), np.abs(e2.coefficients))


# -- completeness / Osserman ------------------------------------------------------------

def test_completeness_examples():
    assert classify_completeness(CAT).kind == "Complete"
    c = classify_completeness(gallery("jorge-meeks-companion", n=3))
    assert c.kind == "WeaklyCompleteOnly" and len(c.violating) == 3
    assert classify_completeness(lopez_ros(CAT, 3)).kind == "Complete"


def test_osserman_examples():
    r = osserman_report(CAT)
    assert (r.osserman_lhs, r.osserman_rhs, r.equality, r.all_ends_embedded) == (2, 2, True, True)
    r = osserman_report(ENN)
    assert (r.osserman_lhs, r.osserman_rhs, r.equality) == (2, 0, False)
    assert r.euler_punctured == 1
    r = osserman_report(lopez_ros(CAT, 2))
    assert (r.osserman_lhs, r.osserman_rhs, r.equality) == (2, 2, True)
    with pytest.raises(ValidationError):
        osserman_report(gallery("jorge-meeks-companion", n=3))


@pytest.mark.parametrize("data", gallery_data(), ids=ids())
def test_osserman_consistency(data):
    r = global_report(data, with_curvature=False)
    if r.completeness is not None and r.completeness.kind == "Complete":
        assert r.osserman_lhs >= r.osserman_rhs
        assert r.equality == all(e.phi_pole_order == 2 for e in r.ends)
        assert all(e.phi_pole_order >= 2 for e in r.ends)


# -- total curvature -----------------------------------------------------------------

@pytest.mark.parametrize("data", gallery_data(), ids=ids())
def test_total_curvature_matches_degree(data):
    tc = total_curvature_numeric(data)
    assert round(tc / (4 * math.pi)) == gauss_degree(data)
    assert abs(tc - 4 * math.pi * gauss_degree(data)) < 0.01 * 4 * math.pi * max(1, gauss_degree(data))


def test_lopez_ros_excluded_set():
    assert lopez_ros_excluded(CAT) == []
    jm = gallery("jorge-meeks-companion", n=3)
    assert np.allclose(lopez_ros_excluded(jm), [1.0])


def test_report_serialises():
    d = global_report(CAT).to_dict()
    assert d["completeness"] == "Complete"
    assert d["osserman"] == {"lhs": 2, "rhs": 2, "equality": True, "all_ends_embedded": True}
