"""The rewriting engine that splits mixed-sign auxiliary-variable factors
with the three-term identity

    1/((1-A z^a)(1-C z^-c)) = 1/(1-AC z^(a-c)) * (1/(1-A z^a) + 1/(1-C z^-c) - 1)

until every term is pure in the auxiliary variable, then reads off the
constant part (for an equation) or the nonnegative part evaluated at 1
(for an inequality).
"""
from __future__ import annotations

from math import comb

from .polyring import (
    BinomialFactor,
    DegenerateFactor,
    EMPTY_EV,
    ExponentVector,
    LaurentPolynomial,
    NiceRational,
    PoleAtOne,
    PolyError,
    StepBudget,
    _canonical_factors,
    normalize,
)


class NotMixed(PolyError):
    """elliott_split asked to split a pair that is not (positive, negative)."""


class ImpureInput(PolyError):
    """Constant/nonnegative extraction received a term that is still mixed."""


class ZTerm:
    """One signed summand sign * z^zshift * numerator / prod(factors).

    Factor monomials may carry any integer exponent of the auxiliary
    variable; the numerator may too.  A term is pure positive when every
    factor's z-exponent is >= 0, pure negative when every one is <= 0.
    """

    __slots__ = ("sign", "zshift", "numerator", "factors", "zvar")

    def __init__(self, sign, zshift, numerator, factors, zvar):
        self.sign = 1 if sign >= 0 else -1
        self.zshift = zshift
        self.numerator = numerator
        self.factors = _canonical_factors(factors)
        self.zvar = zvar

    @classmethod
    def from_nice(cls, f, zvar, sign=1, zshift=0):
        return cls(sign, zshift, f.numerator, f.factors, zvar)

    def body(self):
        return NiceRational(self.numerator, self.factors)

    def value(self):
        """The term as a signed NiceRational with the z shift folded in."""
        num = self.numerator.mul_monomial(
            ExponentVector.from_var(self.zvar, self.zshift) if self.zshift else EMPTY_EV,
            self.sign,
        )
        return NiceRational(num, self.factors)

    def z_exponents(self):
        return tuple(f.monomial.get(self.zvar) for f in self.factors)

    def is_pure_positive(self):
        return all(e >= 0 for e in self.z_exponents())

    def is_pure_negative(self):
        return all(e <= 0 for e in self.z_exponents())

    def is_mixed(self):
        exps = self.z_exponents()
        return any(e > 0 for e in exps) and any(e < 0 for e in exps)

    def render(self):
        lead = "-" if self.sign < 0 else "+"
        shift = "" if not self.zshift else "%s^%d*" % (self.zvar, self.zshift)
        return "%s %s%s" % (lead, shift, self.body().render())

    def __repr__(self):
        return "ZTerm(%s)" % self.render()


class Signature:
    """Multisets of positive z-exponents and of negative-exponent magnitudes,
    both sorted descending; ordered lexicographically on the positive
    partition with the negative one as tie-break."""

    __slots__ = ("positives", "negatives")

    def __init__(self, positives, negatives):
        self.positives = tuple(sorted(positives, reverse=True))
        self.negatives = tuple(sorted(negatives, reverse=True))

    @classmethod
    def of(cls, term):
        pos, neg = [], []
        for f in term.factors:
            e = f.monomial.get(term.zvar)
            if e > 0:
                pos.extend([e] * f.multiplicity)
            elif e < 0:
                neg.extend([-e] * f.multiplicity)
        return cls(pos, neg)

    def key(self):
        return (self.positives, self.negatives)

    def __eq__(self, other):
        return isinstance(other, Signature) and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return "Signature(%s, %s)" % (self.positives, self.negatives)


def elliott_split(term, i, m):
    """Split the pair of factors (index i with z-exponent a > 0, index m with
    z-exponent -c < 0) into the identity's three terms.  The signed sum of
    the result equals the input exactly."""
    z = term.zvar
    if not (0 <= i < len(term.factors)) or not (0 <= m < len(term.factors)):
        raise NotMixed("factor index out of range")
    fi, fm = term.factors[i], term.factors[m]
    a = fi.monomial.get(z)
    c = -fm.monomial.get(z)
    if a <= 0 or c <= 0:
        raise NotMixed(
            "need a positive-exponent and a negative-exponent factor, got %d and %d"
            % (a, -c)
        )
    rest = []
    for idx, f in enumerate(term.factors):
        mult = f.multiplicity
        if idx == i:
            mult -= 1
        if idx == m:
            mult -= 1
        if mult > 0:
            rest.append((f.monomial, mult))
    combined = fi.monomial.mul(fm.monomial)
    if combined.is_empty():
        raise DegenerateFactor("combined factor monomial is 1")
    new = (combined, 1)
    first = ZTerm(term.sign, term.zshift, term.numerator, rest + [new, (fi.monomial, 1)], z)
    second = ZTerm(term.sign, term.zshift, term.numerator, rest + [new, (fm.monomial, 1)], z)
    third = ZTerm(-term.sign, term.zshift, term.numerator, rest + [new], z)
    return [first, second, third]


def _select_pair(term):
    """The factor pair to split: largest positive exponent and largest
    negative magnitude, ties broken by factor position."""
    z = term.zvar
    best_i = best_m = -1
    best_a = 0
    best_c = 0
    for idx, f in enumerate(term.factors):
        e = f.monomial.get(z)
        if e > best_a:
            best_a, best_i = e, idx
        elif e < 0 and -e > best_c:
            best_c, best_m = -e, idx
    return best_i, best_m


def elliott_decompose(term, budget=None):
    """Rewrite until no term is mixed; returns the list of pure terms whose
    signed sum equals the input.  Terms appear in depth-first order so the
    output is deterministic."""
    if budget is None:
        budget = StepBudget()
    out = []
    stack = [term]
    while stack:
        t = stack.pop()
        if not t.is_mixed():
            out.append(t)
            continue
        budget.tick()
        i, m = _select_pair(t)
        children = elliott_split(t, i, m)
        stack.extend(reversed(children))
    assert all(not t.is_mixed() for t in out)
    return out


def signed_sum(terms):
    """Exact sum of a list of ZTerms as a NiceRational."""
    acc = NiceRational.zero()
    for t in terms:
        acc = acc.add(t.value())
    return normalize(acc)


def _z_taylor(factors, zvar, rmax):
    """Taylor coefficients in z of prod 1/(1 - M z^e)^mult for factors with
    e > 0: a dict r -> polynomial coefficient, exact, for 0 <= r <= rmax."""
    coeffs = {0: LaurentPolynomial.one()}
    if rmax < 0:
        return {}
    for fac in factors:
        e = fac.monomial.get(zvar)
        base = fac.monomial.without(zvar)
        series = {}
        j = 0
        while j * e <= rmax:
            series[j * e] = LaurentPolynomial.monomial(
                base.pow(j), comb(j + fac.multiplicity - 1, fac.multiplicity - 1)
            )
            j += 1
        nxt = {}
        for d1, p1 in coeffs.items():
            for d2, p2 in series.items():
                if d1 + d2 > rmax:
                    continue
                prod = p1 * p2
                if d1 + d2 in nxt:
                    nxt[d1 + d2] = nxt[d1 + d2] + prod
                else:
                    nxt[d1 + d2] = prod
        coeffs = nxt
    return coeffs


def _flip_z(factors, zvar):
    """Replace z^-c by z^c in each factor monomial (mirror for the pure
    negative case)."""
    return [
        BinomialFactor(f.monomial.with_exp(zvar, -f.monomial.get(zvar)), f.multiplicity)
        for f in factors
    ]


def _split_term(term):
    z = term.zvar
    free, pos, neg = [], [], []
    for f in term.factors:
        e = f.monomial.get(z)
        if e == 0:
            free.append(f)
        elif e > 0:
            pos.append(f)
        else:
            neg.append(f)
    return free, pos, neg


class _Buckets:
    """Accumulate signed numerator contributions per denominator multiset,
    then combine with a balanced merge so numerators stay small."""

    def __init__(self):
        self.by_den = {}

    def put(self, numerator, factors, sign):
        if numerator.is_zero():
            return
        key = _canonical_factors(factors)
        if sign < 0:
            numerator = -numerator
        cur = self.by_den.get(key)
        self.by_den[key] = numerator if cur is None else cur + numerator

    def total(self):
        pending = [
            normalize(NiceRational(num, key))
            for key, num in sorted(
                self.by_den.items(), key=lambda kv: tuple(f.render() for f in kv[0])
            )
            if not num.is_zero()
        ]
        if not pending:
            return NiceRational.zero()
        while len(pending) > 1:
            nxt = []
            for i in range(0, len(pending) - 1, 2):
                nxt.append(normalize(pending[i].add(pending[i + 1])))
            if len(pending) % 2:
                nxt.append(pending[-1])
            pending = nxt
        return normalize(pending[0])


def constant_term_z(terms, zvar):
    """Sum of the z^0 slices of a list of pure terms, as a NiceRational."""
    buckets = _Buckets()
    for term in terms:
        if term.is_mixed():
            raise ImpureInput("term %r is mixed" % term)
        free, pos, neg = _split_term(term)
        carriers = pos if pos else neg
        flipped = bool(neg)
        slices = term.numerator.split_by_var(zvar)
        needed = []
        for dnum in slices:
            d = term.zshift + dnum
            r = -d if not flipped else d
            if carriers:
                if r >= 0:
                    needed.append(r)
            # with no z-carrying factors only d == 0 survives
        taylor = {}
        if carriers and needed:
            taylor = _z_taylor(
                _flip_z(carriers, zvar) if flipped else carriers, zvar, max(needed)
            )
        for dnum, num in slices.items():
            d = term.zshift + dnum
            if not carriers:
                if d == 0:
                    buckets.put(num, free, term.sign)
                continue
            r = -d if not flipped else d
            if r < 0 or r not in taylor:
                continue
            buckets.put(num * taylor[r], free, term.sign)
    return buckets.total()


def nonneg_part_z(terms, zvar):
    """Sum over terms of (sum of the z^n slices, n >= 0) evaluated at z = 1."""
    buckets = _Buckets()
    for term in terms:
        if term.is_mixed():
            raise ImpureInput("term %r is mixed" % term)
        free, pos, neg = _split_term(term)
        slices = term.numerator.split_by_var(zvar)
        if not neg:
            # pure positive (or z-free): cases 1 and 3
            pos_free = []
            for f in pos:
                base = f.monomial.without(zvar)
                if base.is_empty():
                    raise PoleAtOne("factor %s is a pure power of %s" % (f.render(), zvar))
                pos_free.append(BinomialFactor(base, f.multiplicity))
            den = free + pos_free
            prefix_max = 0
            for dnum in slices:
                d = term.zshift + dnum
                if d < 0:
                    prefix_max = max(prefix_max, -d - 1)
            taylor = _z_taylor(pos, zvar, prefix_max) if pos else {0: LaurentPolynomial.one()}
            pos_expanded = None
            for dnum, num in slices.items():
                d = term.zshift + dnum
                if d >= 0:
                    buckets.put(num, den, term.sign)
                    continue
                # case 3: subtract the Taylor prefix K_0 .. K_(|d|-1), then z -> 1
                if pos_expanded is None:
                    pos_expanded = _expand_factors(pos)
                prefix = LaurentPolynomial.zero()
                for j in range(-d):
                    kj = taylor.get(j)
                    if kj is not None:
                        prefix = prefix + kj.mul_monomial(
                            ExponentVector.from_var(zvar, j)
                        )
                residual = LaurentPolynomial.one() - pos_expanded * prefix
                numer = (num * residual).eval_var(zvar, 1)
                buckets.put(numer, den, term.sign)
        else:
            # pure negative: cases 2 and 4
            taylor = None
            for dnum, num in slices.items():
                d = term.zshift + dnum
                if d < 0:
                    continue
                if d == 0:
                    buckets.put(num, free, term.sign)
                    continue
                # case 4: keep the finite prefix K_0 .. K_d at z = 1
                if taylor is None:
                    maxd = max(term.zshift + dn for dn in slices)
                    taylor = _z_taylor(_flip_z(neg, zvar), zvar, maxd)
                total = LaurentPolynomial.zero()
                for j in range(d + 1):
                    kj = taylor.get(j)
                    if kj is not None:
                        total = total + kj
                buckets.put(num * total, free, term.sign)
    return buckets.total()


def _signed(f, sign):
    if sign >= 0:
        return f
    return NiceRational(-f.numerator, f.factors)


def _expand_factors(factors):
    out = LaurentPolynomial.one()
    for f in factors:
        fp = f.as_poly()
        for _ in range(f.multiplicity):
            out = out * fp
    return out
