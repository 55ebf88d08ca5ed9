"""Partial-fraction back-end: treat the auxiliary variable z as the
distinguished one, decompose over a gcd-free basis of the denominator in
Q(t)[z], classify each basis factor by its behavior at z = 0, and keep the
parts whose expansions carry only nonnegative powers of z.

All internal arithmetic is fraction-free: polynomials in z carry
LaurentPolynomial coefficients, and divisions track one z-free scalar
denominator instead of per-coefficient fractions.
"""
from __future__ import annotations

import enum
from fractions import Fraction
from math import gcd, lcm

from .polyring import (
    BinomialFactor,
    EMPTY_EV,
    ExponentVector,
    GeneralRational,
    LaurentPolynomial,
    NiceRational,
    PolyError,
    eval_at,
    lp_div_exact,
    nice_from_general,
    normalize,
)


class UnclassifiableFactor(PolyError):
    """A basis factor fit none of the three classes; the gcd-free refinement
    broke the constant-term dichotomy and the computation must not proceed."""


class FactorClass(enum.Enum):
    CONTRIBUTING = "contributing"
    NONCONTRIBUTING = "noncontributing"
    PUREZ = "purez"


# ---------------------------------------------------------------------------
# Polynomials in z with LaurentPolynomial coefficients (fraction-free)


class ZPolyP:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {d: c for d, c in (coeffs or {}).items() if not c.is_zero()}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: LaurentPolynomial.one()})

    @classmethod
    def z(cls):
        return cls({1: LaurentPolynomial.one()})

    @classmethod
    def from_binomial(cls, monomial, zvar):
        """(1 - M z^b) as a genuine polynomial in z: for b > 0 it is
        1 - Mtilde z^b, for b < 0 it is cleared to z^c - Mtilde."""
        b = monomial.get(zvar)
        base = monomial.without(zvar)
        if b == 0:
            raise ValueError("z-free factor does not belong in a ZPolyP")
        if b > 0:
            return cls(
                {0: LaurentPolynomial.one(), b: LaurentPolynomial.monomial(base, -1)}
            )
        return cls({-b: LaurentPolynomial.one(), 0: LaurentPolynomial.monomial(base, -1)})

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    def lead_coeff(self):
        return self.coeffs[self.degree()]

    def constant_coeff(self):
        return self.coeffs.get(0, LaurentPolynomial.zero())

    def __add__(self, other):
        acc = dict(self.coeffs)
        for d, c in other.coeffs.items():
            nc = acc.get(d)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                acc.pop(d, None)
            else:
                acc[d] = nc
        return ZPolyP(acc)

    def __sub__(self, other):
        return self + other.neg()

    def neg(self):
        return ZPolyP({d: -c for d, c in self.coeffs.items()})

    def __mul__(self, other):
        acc = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                prod = c1 * c2
                if d in acc:
                    acc[d] = acc[d] + prod
                else:
                    acc[d] = prod
        return ZPolyP(acc)

    def scale(self, lp):
        return ZPolyP({d: c * lp for d, c in self.coeffs.items()})

    def shift_scale(self, dz, lp):
        return ZPolyP({d + dz: c * lp for d, c in self.coeffs.items()})

    def pow(self, n):
        out = ZPolyP.one()
        for _ in range(n):
            out = out * self
        return out

    def content(self):
        """Common (positive rational, monomial) content of every coefficient
        term."""
        rat = None
        monos = None
        for c in self.coeffs.values():
            r, m = c.content()
            rat = r if rat is None else _gcd_frac(rat, r)
            if monos is None:
                monos = dict(m.items)
                for v in c.variables():
                    monos.setdefault(v, 0)
                    monos[v] = min(monos[v], c.min_exponent(v))
            else:
                for v in list(monos):
                    monos[v] = min(monos[v], c.min_exponent(v))
                for v in c.variables():
                    if v not in monos:
                        monos[v] = min(0, c.min_exponent(v))
        if rat is None:
            return (Fraction(1), EMPTY_EV)
        return (rat, ExponentVector({v: e for v, e in (monos or {}).items() if e}))

    def content_strip(self):
        if not self.coeffs:
            return self
        rat, mono = self.content()
        if rat == 1 and mono.is_empty():
            return self
        inv = 1 / rat
        anti = mono.pow(-1)
        return ZPolyP(
            {d: c.mul_monomial(anti).scale(inv) for d, c in self.coeffs.items()}
        )

    def canonical(self):
        """Content-stripped with a deterministic sign: a rational constant
        term is made positive, otherwise the leading z-coefficient's
        canonically-leading term is made positive."""
        p = self.content_strip()
        if p.is_zero():
            return p
        if p.degree() == 0:
            return ZPolyP.one()
        const = p.constant_coeff()
        if not const.is_zero() and const.is_constant():
            flip = Fraction(const.constant_value()) < 0
        else:
            _, lc = p.lead_coeff().leading_term()
            flip = Fraction(lc) < 0
        return p.neg() if flip else p

    def to_lp(self, zvar):
        out = LaurentPolynomial.zero()
        for d, c in self.coeffs.items():
            out = out + c.mul_monomial(ExponentVector.from_var(zvar, d))
        return out

    def render(self, zvar="z"):
        return self.to_lp(zvar).render()

    def __eq__(self, other):
        return isinstance(other, ZPolyP) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return "ZPolyP(%s)" % self.render()


def _gcd_frac(a, b):
    a, b = abs(Fraction(a)), abs(Fraction(b))
    return Fraction(gcd(a.numerator, b.numerator), lcm(a.denominator, b.denominator))


def zp_pseudo_divmod(a, b):
    """(q, r, s) with s * a = q * b + r, deg r < deg b, and s a power of
    b's leading coefficient.  Entirely fraction-free."""
    db = b.degree()
    if db < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    lcb = b.lead_coeff()
    q = ZPolyP.zero()
    r = a
    s = LaurentPolynomial.one()
    while not r.is_zero() and r.degree() >= db:
        dr = r.degree()
        lcr = r.lead_coeff()
        q = q.scale(lcb) + ZPolyP({dr - db: lcr})
        r = r.scale(lcb) - b.shift_scale(dr - db, lcr)
        s = s * lcb
    return q, r, s


def zp_prem(a, b):
    return zp_pseudo_divmod(a, b)[1]


def zp_gcd(a, b, budget=None):
    """Gcd in Q(t)[z] up to a unit of Q(t), by a primitive pseudo-remainder
    sequence; the result is canonical."""
    a = a.content_strip()
    b = b.content_strip()
    if a.degree() < b.degree():
        a, b = b, a
    while not b.is_zero():
        if budget is not None:
            budget.tick()
        r = zp_prem(a, b).content_strip()
        a, b = b, r
    if a.degree() <= 0:
        return ZPolyP.one()
    return a.canonical()


def zp_div_exact(p, g):
    """Exact quotient p/g in Q(t)[z], fraction-free up to content."""
    q, r, s = zp_pseudo_divmod(p, g)
    if not r.is_zero():
        raise UnclassifiableFactor("expected exact division in Q(t)[z]")
    # p = (q/s) g; drop the scalar s and normalize by content
    return q.content_strip()


def zp_xgcd_ff(a, b, budget=None):
    """Fraction-free Bezout identity u*a + v*b = r with r free of z.

    Raises UnclassifiableFactor when a and b are not coprime in Q(t)[z].
    Returns (u, v, r) with u, v ZPolyP and r a nonzero LaurentPolynomial.
    """
    r0, u0, v0 = a, ZPolyP.one(), ZPolyP.zero()
    r1, u1, v1 = b, ZPolyP.zero(), ZPolyP.one()
    if r0.degree() < r1.degree():
        r0, u0, v0, r1, u1, v1 = r1, u1, v1, r0, u0, v0
    while not r1.is_zero() and r1.degree() > 0:
        if budget is not None:
            budget.tick()
        q, r, s = zp_pseudo_divmod(r0, r1)
        nu = u0.scale(s) - q * u1
        nv = v0.scale(s) - q * v1
        r, nu, nv = _strip_row(r, nu, nv)
        r0, u0, v0 = r1, u1, v1
        r1, u1, v1 = r, nu, nv
    if r1.is_zero():
        raise UnclassifiableFactor("polynomials are not coprime in Q(t)[z]")
    return u1, v1, r1.constant_coeff()


def _strip_row(*polys):
    """Divide a Bezout row by the common cheap content of all its entries."""
    rat = None
    monos = None
    for p in polys:
        if p.is_zero():
            continue
        r, m = p.content()
        rat = r if rat is None else _gcd_frac(rat, r)
        items = dict(m.items)
        if monos is None:
            monos = items
        else:
            monos = {v: min(e, items.get(v, 0)) for v, e in monos.items() if v in items}
    if rat in (None, 1) and not monos:
        return polys
    inv = 1 / rat if rat not in (None, 1) else 1
    anti = ExponentVector({v: -e for v, e in (monos or {}).items() if e})
    out = []
    for p in polys:
        q = p
        if not anti.is_empty():
            q = ZPolyP({d: c.mul_monomial(anti) for d, c in q.coeffs.items()})
        if inv != 1:
            q = q.scale(LaurentPolynomial.constant(inv))
        out.append(q)
    return tuple(out)


# ---------------------------------------------------------------------------
# Polynomials in z with GeneralRational coefficients (spec-facing results)


class ZPolyF:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs = {d: c for d, c in (coeffs or {}).items() if not c.is_zero()}

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def from_p(cls, zp, den=None):
        den = den or LaurentPolynomial.one()
        return cls({d: GeneralRational(c, den) for d, c in zp.coeffs.items()})

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return max(self.coeffs) if self.coeffs else -1

    def __add__(self, other):
        acc = dict(self.coeffs)
        for d, c in other.coeffs.items():
            nc = acc.get(d)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                acc.pop(d, None)
            else:
                acc[d] = nc
        return ZPolyF(acc)

    def __mul__(self, other):
        acc = {}
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                prod = c1 * c2
                if d in acc:
                    acc[d] = acc[d] + prod
                else:
                    acc[d] = prod
        return ZPolyF(acc)

    def to_general(self, zvar):
        acc = GeneralRational.zero()
        for d, c in sorted(self.coeffs.items()):
            acc = acc + c * GeneralRational(
                LaurentPolynomial.variable(zvar, d) if d else LaurentPolynomial.one()
            )
        return acc

    def render(self, zvar="z"):
        if not self.coeffs:
            return "0"
        parts = []
        for d in sorted(self.coeffs):
            c = self.coeffs[d].render()
            parts.append("(%s)" % c if d == 0 else "(%s)*%s^%d" % (c, zvar, d))
        return " + ".join(parts)

    def __eq__(self, other):
        return isinstance(other, ZPolyF) and self.coeffs == other.coeffs

    def __repr__(self):
        return "ZPolyF(%s)" % self.render()


# ---------------------------------------------------------------------------
# The fraction data model


class ZFraction:
    """A NiceRational with auxiliary variable restated for partial fractions:
    numerator with negative z powers cleared, z-carrying denominator factors
    as genuine z-polynomials with multiplicities (a cleared z power shows up
    as the factor z), z-free factors carried aside, and the original
    positive-exponent binomials kept for re-expression."""

    __slots__ = ("numerator", "factors", "zfree", "pos_binomials", "zvar")

    def __init__(self, numerator, factors, zfree, pos_binomials, zvar):
        self.numerator = numerator
        self.factors = factors
        self.zfree = tuple(zfree)
        self.pos_binomials = tuple(pos_binomials)
        self.zvar = zvar

    def den_zpoly(self):
        out = ZPolyP.one()
        for p, m in self.factors:
            out = out * p.pow(m)
        return out


def to_zfraction(f, zvar):
    num = f.numerator
    factors = []
    zfree = []
    pos = []
    shift = 0
    for fac in f.factors:
        b = fac.monomial.get(zvar)
        if b == 0:
            zfree.append(fac)
            continue
        factors.append((ZPolyP.from_binomial(fac.monomial, zvar), fac.multiplicity))
        if b > 0:
            pos.append(fac)
        else:
            shift += (-b) * fac.multiplicity
    if shift:
        num = num.mul_monomial(ExponentVector.from_var(zvar, shift))
    smin = num.min_exponent(zvar)
    if smin < 0:
        num = num.mul_monomial(ExponentVector.from_var(zvar, -smin))
        factors.append((ZPolyP.z(), -smin))
    numerator = ZPolyP(num.split_by_var(zvar))
    return ZFraction(numerator, factors, zfree, pos, zvar)


def coprime_basis(factors, budget=None):
    """Refine (z-polynomial, multiplicity) pairs into pairwise coprime
    canonical factors whose power product equals the input product up to a
    unit of Q(t)."""
    queue = [(p.canonical(), m) for p, m in factors if p.degree() > 0]
    basis = []
    while queue:
        p, m = queue.pop()
        if budget is not None:
            budget.tick()
        if p.degree() == 0:
            continue
        merged = False
        for i, (q, n) in enumerate(basis):
            if p == q:
                basis[i] = (q, n + m)
                merged = True
                break
            g = zp_gcd(p, q, budget)
            if g.degree() > 0:
                basis.pop(i)
                queue.append((g, m + n))
                pq = zp_div_exact(p, g)
                qq = zp_div_exact(q, g)
                if pq.degree() > 0:
                    queue.append((pq.canonical(), m))
                if qq.degree() > 0:
                    queue.append((qq.canonical(), n))
                merged = True
                break
        if not merged:
            basis.append((p, m))
    return sorted(basis, key=lambda t: (t[0].degree(), t[0].render()))


def classify_factor(p):
    """Contributing / NonContributing / PureZ by the constant term in z."""
    const = p.constant_coeff()
    if const.is_zero():
        if p.degree() == 1 and len(p.coeffs) == 1 and p.lead_coeff().is_constant():
            return FactorClass.PUREZ
        raise UnclassifiableFactor(
            "factor %s is divisible by z but is not z" % p.render()
        )
    if const.is_constant():
        return FactorClass.CONTRIBUTING
    if not const.has_negative() and const.degree() > 0:
        return FactorClass.NONCONTRIBUTING
    raise UnclassifiableFactor(
        "constant term %s is neither a rational nor a positive-degree polynomial"
        % const.render()
    )


def _partial_fractions_raw(zf, budget=None, keep=None):
    """Shared fraction-free core: the polynomial part and one raw component
    per basis factor power, everything scaled rather than divided.

    Returns (basis, (q1, poly_scale), raw) where raw maps a basis index to
    (numerator ZPolyP, scalar LaurentPolynomial) such that the component over
    basis[i] = (p, m) is numerator / (scalar * p^m).  `keep` filters which
    basis indices get a component (None keeps all).
    """
    basis = coprime_basis(zf.factors, budget)
    dbasis = ZPolyP.one()
    for p, m in basis:
        dbasis = dbasis * p.pow(m)
    dorig = zf.den_zpoly()
    if dorig.degree() != dbasis.degree():
        raise UnclassifiableFactor("basis degree mismatch")
    # dorig = (nu/du) * dbasis for a unit nu/du of Q(t)
    nu, du = dorig.lead_coeff(), dbasis.lead_coeff()
    if not (dbasis.scale(nu) == dorig.scale(du)):
        raise UnclassifiableFactor("basis product does not reconstruct denominator")
    numer = zf.numerator.scale(du)
    scale0 = nu
    q1, r1, s1 = zp_pseudo_divmod(numer, dbasis)
    raw = {}
    for i, (p, m) in enumerate(basis):
        if keep is not None and not keep(p):
            continue
        pm = p.pow(m)
        qc, rc, sc = zp_pseudo_divmod(dbasis, pm)
        if not rc.is_zero():
            raise UnclassifiableFactor("basis power does not divide the denominator")
        # cofactor dbasis/pm = qc/sc, so its inverse mod pm is sc*u/rconst
        u, _, rconst = zp_xgcd_ff(qc.content_strip(), pm, budget)
        # component of r1/(s1 scale0 dbasis) over pm:
        # (r1 * cof^-1 mod pm) / (s1 scale0) with the stripped content of qc
        # folded back into the scalar
        qrat, qmono = qc.content()
        _, rem3, s3 = zp_pseudo_divmod(r1 * u, pm)
        rem3 = rem3.scale(sc)
        scalar = (s3 * s1 * rconst).scale(qrat) * LaurentPolynomial.monomial(qmono)
        scalar = scalar * scale0
        raw[i] = (rem3, scalar)
    return basis, (q1, s1 * scale0), raw


def partial_fraction_z(zf, budget=None):
    """Exact partial-fraction decomposition over the gcd-free basis.

    Returns (polynomial part, parts): the polynomial part is a ZPolyF and
    each part is (numerator ZPolyF, basis factor ZPolyP, power) with
    deg_z(numerator) < deg_z(factor).  Polynomial part plus parts recombine
    exactly to numerator/denominator (z-free factors aside).
    """
    basis, (q1, poly_scale), raw = _partial_fractions_raw(zf, budget)
    poly_part = ZPolyF.from_p(q1, poly_scale)
    parts = []
    for i, (p, m) in enumerate(basis):
        rem3, scalar = raw[i]
        # p-adic digits: rem3 = sum digit_j p^j, deg digit_j < deg p
        cur = rem3
        cur_scale = scalar
        for j in range(m):
            qd, rd, sd = zp_pseudo_divmod(cur, p)
            if not rd.is_zero():
                parts.append((ZPolyF.from_p(rd, cur_scale * sd), p, m - j))
            cur = qd
            cur_scale = cur_scale * sd
            if cur.is_zero():
                break
    return poly_part, parts


def recombine(poly_part, parts, zvar):
    """Polynomial part plus all fraction parts as one GeneralRational in all
    variables (verification helper)."""
    acc = poly_part.to_general(zvar)
    for num, p, power in parts:
        acc = acc + num.to_general(zvar) / GeneralRational(p.pow(power).to_lp(zvar))
    return acc


def xin_nonneg(f, zvar, budget=None):
    """h(t, z) = sum of the nonnegative-z-power slices of f, as a
    NiceRational whose denominator is again a product of binomials.

    h is the polynomial part plus the components over the contributing basis
    factors; the components are computed per factor (small Bezout identities)
    and recombined fraction-free over their common denominator before the
    factored form is recovered.
    """
    if f.is_zero():
        return f
    if (
        all(fac.monomial.get(zvar) >= 0 for fac in f.factors)
        and f.numerator.min_exponent(zvar) >= 0
    ):
        return f
    zf = to_zfraction(f, zvar)
    basis, (q1, poly_scale), raw = _partial_fractions_raw(
        zf, budget, keep=lambda p: classify_factor(p) is FactorClass.CONTRIBUTING
    )
    kept = sorted(raw)
    # common denominator: poly_scale * prod(scalar_i) * prod(p_i^m_i)
    dplus = ZPolyP.one()
    for i in kept:
        p, m = basis[i]
        dplus = dplus * p.pow(m)
    num = q1
    for i in kept:
        _, scalar = raw[i]
        num = num.scale(scalar)
    num = num * dplus
    for i in kept:
        p, m = basis[i]
        rem, _ = raw[i]
        piece = rem.scale(poly_scale)
        for j in kept:
            if j == i:
                continue
            pj, mj = basis[j]
            piece = piece * pj.pow(mj)
            piece = piece.scale(raw[j][1])
        num = num + piece
    den = poly_scale
    for i in kept:
        den = den * raw[i][1]
    num_lp = num.to_lp(zvar)
    den_lp = den * dplus.to_lp(zvar)
    candidates = _combined_candidates(zf, basis, zvar)
    nice = nice_from_general(GeneralRational(num_lp, den_lp), candidates)
    return normalize(NiceRational(nice.numerator, nice.factors + zf.zfree))


def _binomial_shape(p, zvar):
    """(base monomial, z-exponent) when p is 1 - M z^b or z^c - M, else None."""
    if len(p.coeffs) != 2 or 0 not in p.coeffs:
        return None
    const = p.coeffs[0]
    b = p.degree()
    lead = p.coeffs[b]
    if const.is_one() and lead.term_count() == 1:
        (ev, c), = lead.terms.items()
        if c == -1:
            return (ev, b)
    if lead.is_one() and const.term_count() == 1:
        (ev, c), = const.terms.items()
        if c == -1:
            return (ev, -b)
    return None


def _combined_candidates(zf, basis, zvar):
    """Likely binomial monomials of h's denominator: the kept positive
    binomials themselves plus, for every (positive, negative) binomial pair
    with z-exponents a and -c, the cyclic-resultant combinations
    (base_pos^(c/g) * base_neg^(a/g))^d for divisors d of g = gcd(a, c)."""
    pos = []
    neg = []
    for p, _ in zf.factors:
        shape = _binomial_shape(p, zvar)
        if shape is None:
            continue
        base, b = shape
        (pos if b > 0 else neg).append((base, abs(b)))
    for p, _ in basis:
        shape = _binomial_shape(p, zvar)
        if shape is None:
            continue
        base, b = shape
        entry = (base, abs(b))
        target = pos if b > 0 else neg
        if entry not in target:
            target.append(entry)
    out = []
    for fac in zf.pos_binomials:
        out.append(fac.monomial)
    for mpos, a in pos:
        for mneg, c in neg:
            g = gcd(a, c)
            combined = mpos.pow(c // g).mul(mneg.pow(a // g))
            if combined.is_empty():
                continue
            for d in range(1, g + 1):
                if g % d == 0:
                    out.append(combined.pow(d))
    seen = []
    for m in sorted(out, key=lambda e: e.sort_key()):
        if m not in seen:
            seen.append(m)
    return seen


def xin_constant(f, zvar, budget=None):
    """f_0(t) = h(t, 0): the z-constant slice of f."""
    h = xin_nonneg(f, zvar, budget)
    if h.is_zero():
        return h
    return normalize(eval_at(h, zvar, 0))
