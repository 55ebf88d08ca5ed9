import random

import pytest

from diosolve.polyring import (
    BinomialFactor,
    ExponentVector,
    GeneralRational,
    LaurentPolynomial,
    NiceRational,
    expand_truncated,
    parse_rational,
    rf_equal,
)
from diosolve.xin import (
    FactorClass,
    UnclassifiableFactor,
    ZPolyP,
    classify_factor,
    coprime_basis,
    partial_fraction_z,
    recombine,
    to_zfraction,
    xin_constant,
    xin_nonneg,
    zp_gcd,
)

EV = ExponentVector
LP = LaurentPolynomial


def zp(text):
    """Build a ZPolyP from a rendered Laurent polynomial in z and t-vars."""
    lp = parse_rational(text).numerator
    return ZPolyP(lp.split_by_var("z"))


# ---------------------------------------------------------------------------
# to_zfraction


def test_to_zfraction_clears_negative_power():
    f = parse_rational("1 / ((1-t*z^-1))")
    zf = to_zfraction(f, "z")
    assert zf.numerator == zp("z")
    assert [(p.render(), m) for p, m in zf.factors] == [("-t + z", 1)]


def test_to_zfraction_example():
    f = parse_rational("1 / ((1-t1)*(1-t2*z^2)*(1-t3*z^-1)*(1-t4*z^-1))")
    zf = to_zfraction(f, "z")
    assert zf.numerator == zp("z^2")
    renders = sorted(p.render() for p, _ in zf.factors)
    assert renders == ["-t3 + z", "-t4 + z", "1 - t2*z^2"]
    assert [x.render() for x in zf.zfree] == ["(1-t1)"]


def test_to_zfraction_z_free_identity():
    f = parse_rational("x / ((1-x*y))")
    zf = to_zfraction(f, "z")
    assert zf.factors == []
    assert zf.numerator == ZPolyP({0: f.numerator})


# ---------------------------------------------------------------------------
# coprime basis and classification


def test_coprime_basis_merges_equal():
    f1 = ZPolyP.from_binomial(EV({"t": 1, "z": 1}), "z")
    basis = coprime_basis([(f1, 1), (f1, 1)])
    assert len(basis) == 1
    assert basis[0][1] == 2
    assert basis[0][0].render() == "1 - t*z"


def test_coprime_basis_refines_common_factor():
    sq = ZPolyP.from_binomial(EV({"t": 2, "z": 2}), "z")  # 1 - t^2 z^2
    lin = ZPolyP.from_binomial(EV({"t": 1, "z": 1}), "z")  # 1 - t z
    basis = coprime_basis([(sq, 1), (lin, 1)])
    got = {p.render(): m for p, m in basis}
    assert got == {"1 - t*z": 2, "1 + t*z": 1}


def test_coprime_basis_distinct_linear_factors():
    a = ZPolyP.from_binomial(EV({"t3": 1, "z": -1}), "z")
    b = ZPolyP.from_binomial(EV({"t4": 1, "z": -1}), "z")
    basis = coprime_basis([(a, 1), (b, 1)])
    assert sorted(p.render() for p, _ in basis) == ["-t3 + z", "-t4 + z"]


def test_zp_gcd():
    a = zp("1 - t^2*z^2")
    b = zp("1 - t*z")
    assert zp_gcd(a, b).render() == "1 - t*z"
    c = zp("-t3 + z")
    d = zp("-t4 + z")
    assert zp_gcd(c, d).degree() == 0


def test_classify_factor():
    assert classify_factor(zp("1 - t2*z^2")) is FactorClass.CONTRIBUTING
    assert classify_factor(zp("-t3 + z")) is FactorClass.NONCONTRIBUTING
    assert classify_factor(ZPolyP.z()) is FactorClass.PUREZ
    with pytest.raises(UnclassifiableFactor):
        classify_factor(zp("z^2 - t*z"))


# ---------------------------------------------------------------------------
# partial fractions


def paper_fraction():
    return parse_rational("1 / ((1-t1*z)*(1-t2*z^2)*(1-t3*z^-1)*(1-t4*z^-1))")


def test_partial_fraction_paper_example():
    zf = to_zfraction(paper_fraction(), "z")
    poly_part, parts = partial_fraction_z(zf)
    assert poly_part.is_zero()
    dens = sorted("(%s)^%d" % (p.render(), power) for _, p, power in parts)
    assert dens == ["(-t3 + z)^1", "(-t4 + z)^1", "(1 - t1*z)^1", "(1 - t2*z^2)^1"]
    # each printed part of the paper, verified exactly
    t1, t2, t3, t4, z = (LP.variable(v) for v in ("t1", "t2", "t3", "t4", "z"))
    one = LP.one()

    def binprod(text):
        return parse_rational(text).den_poly()

    expected = {
        "-t3 + z": GeneralRational(
            t3 * t3, (t3 - t4) * binprod("1 / ((1-t1*t3)*(1-t2*t3^2))")
        ),
        "-t4 + z": GeneralRational(
            -(t4 * t4), (t3 - t4) * binprod("1 / ((1-t1*t4)*(1-t2*t4^2))")
        ),
        "1 - t1*z": GeneralRational(
            -(t1 * t1), (t2 - t1 * t1) * binprod("1 / ((1-t1*t3)*(1-t1*t4))")
        ),
        "1 - t2*z^2": GeneralRational(
            (one + t1 * t3 + t1 * t4 + t2 * t3 * t4
             + (t1 + t2 * t3 + t2 * t4 + t1 * t2 * t3 * t4) * z) * t2,
            (t2 - t1 * t1) * binprod("1 / ((1-t2*t3^2)*(1-t2*t4^2))"),
        ),
    }
    for num, p, power in parts:
        assert power == 1
        assert rf_equal(num.to_general("z"), expected[p.render()])


def test_partial_fraction_single_factor():
    f = parse_rational("t / ((1-t*z))")
    zf = to_zfraction(f, "z")
    poly_part, parts = partial_fraction_z(zf)
    assert poly_part.is_zero()
    assert len(parts) == 1
    num, p, power = parts[0]
    assert p.render() == "1 - t*z"
    assert power == 1
    assert rf_equal(num.to_general("z"), GeneralRational(LP.variable("t")))


def test_partial_fraction_reconstruction_random():
    rng = random.Random(11)
    checked = 0
    while checked < 12:
        facs = []
        for _ in range(rng.randint(1, 2)):
            m = {v: rng.randint(0, 2) for v in ("a", "b")}
            if not any(m.values()):
                m["a"] = 1
            m["z"] = rng.choice([-2, -1, 1, 2])
            facs.append(BinomialFactor(EV(m), rng.randint(1, 2)))
        num = LP.monomial(EV({"a": rng.randint(0, 2), "z": rng.randint(-2, 2)}))
        f = NiceRational(num, facs)
        zf = to_zfraction(f, "z")
        poly_part, parts = partial_fraction_z(zf)
        rec = recombine(poly_part, parts, "z")
        want = GeneralRational(zf.numerator.to_lp("z"), zf.den_zpoly().to_lp("z"))
        assert rf_equal(rec, want)
        checked += 1


# ---------------------------------------------------------------------------
# nonneg / constant parts


def test_xin_nonneg_paper_h():
    h = xin_nonneg(paper_fraction(), "z")
    t1, t2, t3, t4, z = (LP.variable(v) for v in ("t1", "t2", "t3", "t4", "z"))
    one = LP.one()
    num1 = (one + t1 * t3 + t1 * t4 + t2 * t3 * t4
            + (t1 + t2 * t3 + t2 * t4 + t1 * t2 * t3 * t4) * z) * t2
    den1 = (t2 - t1 * t1) * parse_rational(
        "1 / ((1-t2*t3^2)*(1-t2*t4^2)*(1-t2*z^2))"
    ).den_poly()
    num2 = t1 * t1
    den2 = (t2 - t1 * t1) * parse_rational(
        "1 / ((1-t1*t3)*(1-t1*t4)*(1-t1*z))"
    ).den_poly()
    paper_h = GeneralRational(num1, den1) - GeneralRational(num2, den2)
    assert rf_equal(h, paper_h)


def test_xin_nonneg_no_negative_powers_is_identity():
    f = parse_rational("t*z / ((1-t*z)*(1-u))")
    assert xin_nonneg(f, "z") == f


def test_xin_nonneg_transport_first_constraint():
    f = parse_rational("1 / ((1-x3*z^-4)*(1-x6*z^-5)*(1-y*z)*(1-t*z^-3))")
    h = xin_nonneg(f, "z")
    assert rf_equal(h, parse_rational("1 / ((1-x3*y^4)*(1-x6*y^5)*(1-y^3*t)*(1-y*z))"))


def test_xin_constant_paper_f0():
    f0 = xin_constant(paper_fraction(), "z")
    want = parse_rational(
        "(1 + t2*t3*t4 - t1*t2*t3^2*t4 - t1*t2*t3*t4^2)"
        " / ((1-t1*t3)*(1-t1*t4)*(1-t2*t3^2)*(1-t2*t4^2))"
    )
    assert rf_equal(f0, want)


def test_xin_constant_z_free_identity():
    f = parse_rational("x / ((1-x*y))")
    assert xin_constant(f, "z") == f


def test_split_series_properties():
    # f - h has only negative z powers; h has only nonnegative ones
    f = paper_fraction()
    h = xin_nonneg(f, "z")
    tracked = {"t1", "t2", "t3", "t4"}
    fe = expand_truncated(f, tracked, 8)
    he = expand_truncated(h, tracked, 8)
    diff = fe - he
    assert all(ev.get("z") < 0 for ev in diff.terms)
    assert all(ev.get("z") >= 0 for ev in he.terms)


def test_purez_parts_are_dropped():
    # z^-2 * x: nothing survives the nonnegative part
    f = NiceRational(LP.monomial(EV({"x": 1, "z": -2})), ())
    assert xin_nonneg(f, "z").is_zero()
    # mixed numerator keeps the nonnegative slice
    g = NiceRational(
        LP.monomial(EV({"x": 1, "z": -2})) + LP.monomial(EV({"y": 1, "z": 1})), ()
    )
    got = xin_nonneg(g, "z")
    assert got == NiceRational(LP.monomial(EV({"y": 1, "z": 1})), ())
