import pytest

from diosolve.elliott import (
    ImpureInput,
    NotMixed,
    Signature,
    ZTerm,
    constant_term_z,
    elliott_decompose,
    elliott_split,
    nonneg_part_z,
    signed_sum,
)
from diosolve.polyring import (
    BinomialFactor,
    ExponentVector,
    LaurentPolynomial,
    NiceRational,
    StepBudget,
    StepCeilingExceeded,
    expand_truncated,
    parse_rational,
    rf_equal,
)

EV = ExponentVector
LP = LaurentPolynomial


def zterm(text):
    return ZTerm.from_nice(parse_rational(text), "z")


def pick_pair(term):
    i = next(i for i, f in enumerate(term.factors) if f.monomial.get("z") > 0)
    m = next(i for i, f in enumerate(term.factors) if f.monomial.get("z") < 0)
    return i, m


def test_split_basic_identity():
    t = zterm("1 / ((1-t1*z)*(1-t2*z^-1))")
    parts = elliott_split(t, *pick_pair(t))
    assert [p.sign for p in parts] == [1, 1, -1]
    rendered = {p.body().render() for p in parts}
    assert "1 / ((1-t1*t2)*(1-t1*z))" in rendered
    assert "1 / ((1-t2*z^-1)*(1-t1*t2))" in rendered
    assert "1 / ((1-t1*t2))" in rendered
    assert rf_equal(signed_sum(parts), parse_rational("1 / ((1-t1*z)*(1-t2*z^-1))"))


def test_split_uneven_exponents():
    t = zterm("1 / ((1-t1*z^2)*(1-t2*z^-1))")
    parts = elliott_split(t, *pick_pair(t))
    # the combined factor is 1 - t1*t2*z
    assert any(
        any(f.monomial == EV({"t1": 1, "t2": 1, "z": 1}) for f in p.factors)
        for p in parts
    )
    assert rf_equal(signed_sum(parts), parse_rational("1 / ((1-t1*z^2)*(1-t2*z^-1))"))


def test_split_requires_mixed_pair():
    t = zterm("1 / ((1-t1*z)*(1-t2*z))")
    with pytest.raises(NotMixed):
        elliott_split(t, 0, 1)


def test_decompose_pure_input_unchanged():
    t = zterm("1 / ((1-t1*z)*(1-t2))")
    out = elliott_decompose(t)
    assert len(out) == 1
    assert out[0].factors == t.factors


def test_decompose_three_terms():
    t = zterm("1 / ((1-t1*z)*(1-t2*z^-1))")
    out = elliott_decompose(t)
    assert len(out) == 3
    assert all(not p.is_mixed() for p in out)
    assert rf_equal(signed_sum(out), t.body())


def test_decompose_conservation_and_purity():
    t = zterm("1 / ((1-t1*z)*(1-t2*z^2)*(1-t3*z^-1)*(1-t4*z^-1))")
    out = elliott_decompose(t)
    assert all(not p.is_mixed() for p in out)
    assert rf_equal(signed_sum(out), t.body())


def test_decompose_first_equation_constant_term():
    t = zterm("1 / ((1-t1*z)*(1-t2*z^2)*(1-t3*z^-1)*(1-t4*z^-1))")
    f0 = constant_term_z(elliott_decompose(t), "z")
    want = parse_rational(
        "(1 + t2*t3*t4 - t1*t2*t3^2*t4 - t1*t2*t3*t4^2)"
        " / ((1-t1*t3)*(1-t1*t4)*(1-t2*t3^2)*(1-t2*t4^2))"
    )
    assert rf_equal(f0, want)


def test_constant_term_diagonal():
    t = zterm("1 / ((1-t1*z)*(1-t2*z^-1))")
    got = constant_term_z(elliott_decompose(t), "z")
    assert rf_equal(got, parse_rational("1 / ((1-t1*t2))"))
    # brute-force check to degree 10: diagonal of the double geometric series
    exp = expand_truncated(got, {"t1", "t2"}, 10)
    want = {EV({"t1": j, "t2": j}) for j in range(6)}
    assert set(exp.terms) == want


def test_constant_term_z_free_input():
    t = zterm("x / ((1-x*y))")
    assert constant_term_z([t], "z") == parse_rational("x / ((1-x*y))")


def test_constant_term_rejects_mixed():
    t = zterm("1 / ((1-t1*z)*(1-t2*z^-1))")
    with pytest.raises(ImpureInput):
        constant_term_z([t], "z")


def test_nonneg_case1_whole_term():
    t = zterm("1 / ((1-t*z)*(1-u))")
    got = nonneg_part_z([t], "z")
    assert rf_equal(got, parse_rational("1 / ((1-t)*(1-u))"))


def test_nonneg_case2_negative_shift_vanishes():
    t = zterm("z^-1 / ((1-t*z^-1))")
    assert nonneg_part_z([t], "z").is_zero()


def test_nonneg_case2_zero_shift():
    t = zterm("x / ((1-t*z^-1))")
    assert rf_equal(nonneg_part_z([t], "z"), parse_rational("x"))


def test_nonneg_case3_taylor_prefix():
    # z^-1/(1-tz): series sum_{j>=1} t^j z^(j-1), nonneg part at z=1 is t/(1-t)
    t = zterm("z^-1 / ((1-t*z))")
    assert rf_equal(nonneg_part_z([t], "z"), parse_rational("t / ((1-t))"))


def test_nonneg_case4_finite_prefix():
    # z/(1-t z^-1): powers 1-j, kept for j <= 1, at z=1 gives 1 + t
    t = zterm("z / ((1-t*z^-1))")
    assert rf_equal(nonneg_part_z([t], "z"), parse_rational("1 + t"))


def test_nonneg_transport_first_constraint():
    # the engine-level analogue of the first transport inequality
    f = parse_rational("1 / ((1-x3*z^-4)*(1-x6*z^-5)*(1-y*z)*(1-t*z^-3))")
    terms = elliott_decompose(ZTerm.from_nice(f, "z"))
    got = nonneg_part_z(terms, "z")
    want = parse_rational("1 / ((1-x3*y^4)*(1-x6*y^5)*(1-y^3*t)*(1-y))")
    assert rf_equal(got, want)


def test_signature_order():
    a = Signature((2, 1), (1,))
    b = Signature((2, 2), ())
    c = Signature((2, 1), (2,))
    assert a < b
    assert a < c
    assert not b < a
    descending = Signature.of(zterm("1 / ((1-t1*z)*(1-t2*z^3)*(1-t3*z^-2))"))
    assert descending.positives == (3, 1)
    assert descending.negatives == (2,)


def test_signature_never_revisited_along_path():
    # walk the recursion tree explicitly, tracking signatures per path
    def walk(term, seen):
        sig = Signature.of(term)
        key = sig.key()
        assert key not in seen, "signature revisited along one path"
        if not term.is_mixed():
            return
        i = m = -1
        best_a = best_c = 0
        for idx, f in enumerate(term.factors):
            e = f.monomial.get("z")
            if e > best_a:
                best_a, i = e, idx
            elif e < 0 and -e > best_c:
                best_c, m = -e, idx
        for child in elliott_split(term, i, m):
            walk(child, seen | {key})

    for text in (
        "1 / ((1-t1*z)*(1-t2*z^-1))",
        "1 / ((1-t1*z)*(1-t2*z^2)*(1-t3*z^-1)*(1-t4*z^-1))",
        "1 / ((1-a*z^3)*(1-b*z^-2)*(1-c*z^-3))",
    ):
        walk(zterm(text), frozenset())


def test_step_ceiling():
    t = zterm("1 / ((1-a*z^3)*(1-b*z^-2)*(1-c*z^-3)*(1-d*z^2))")
    with pytest.raises(StepCeilingExceeded):
        elliott_decompose(t, StepBudget(3))


def test_conservation_at_every_step():
    # spot-check: after each split, the signed sum of live terms is unchanged
    start = zterm("1 / ((1-t1*z^2)*(1-t2*z^-1)*(1-t3*z^-1))")
    reference = start.body()
    live = [start]
    for _ in range(40):
        idx = next((k for k, t in enumerate(live) if t.is_mixed()), None)
        if idx is None:
            break
        term = live.pop(idx)
        i = m = -1
        best_a = best_c = 0
        for j, f in enumerate(term.factors):
            e = f.monomial.get("z")
            if e > best_a:
                best_a, i = e, j
            elif e < 0 and -e > best_c:
                best_c, m = -e, j
        live[idx:idx] = elliott_split(term, i, m)
        assert rf_equal(signed_sum(live), reference)
    assert all(not t.is_mixed() for t in live)
