"""Exact arithmetic for sparse multivariate Laurent polynomials and for
rational functions whose denominators are products of binomials (1 - monomial).

Everything here is immutable and exact: coefficients are arbitrary-precision
rationals (`fractions.Fraction`, with plain ints accepted wherever they are
exact), and no operation ever rounds.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb


class PolyError(Exception):
    """Base class for arithmetic-domain errors in this module."""


class DegenerateFactor(PolyError):
    """A substitution turned a denominator binomial into 1 - 1 = 0."""


class NonExpandable(PolyError):
    """A denominator monomial has total degree 0 in the expansion variables."""


class PoleAtZero(PolyError):
    """Evaluation or Taylor extraction at 0 hit a pole."""


class PoleAtOne(PolyError):
    """Evaluation at 1 hit a factor (1 - v^k)."""


class ParseError(PolyError):
    def __init__(self, message, position):
        super().__init__("%s (at offset %d)" % (message, position))
        self.position = position


class StepCeilingExceeded(PolyError):
    """An engine exceeded its configured rewriting-step ceiling."""


class StepBudget:
    """Mutable step counter shared across one solve; raises when exhausted."""

    __slots__ = ("limit", "used")

    def __init__(self, limit=10**6):
        self.limit = limit
        self.used = 0

    def tick(self, n=1):
        self.used += n
        if self.used > self.limit:
            raise StepCeilingExceeded(
                "step ceiling of %d exceeded" % self.limit
            )


# ---------------------------------------------------------------------------
# Exponent vectors


class ExponentVector:
    """A sparse map from variable name to integer exponent.

    Zero exponents are never stored, so two vectors are equal iff their item
    tuples are equal.  Negative exponents are allowed (Laurent monomials);
    callers that track solution variables enforce nonnegativity themselves.
    """

    __slots__ = ("_items", "_hash", "_degree", "_skey")

    def __init__(self, items=()):
        if isinstance(items, dict):
            pairs = items.items()
        else:
            pairs = items
        acc = {}
        for v, e in pairs:
            e = int(e)
            if e:
                ne = acc.get(v, 0) + e
                if ne:
                    acc[v] = ne
                elif v in acc:
                    del acc[v]
        self._items = tuple(sorted(acc.items()))
        self._hash = hash(self._items)
        self._degree = sum(e for _, e in self._items)
        self._skey = None

    @classmethod
    def _from_sorted(cls, items):
        """Trusted constructor: items already sorted, merged, zero-free."""
        ev = cls.__new__(cls)
        ev._items = items
        ev._hash = hash(items)
        ev._degree = sum(e for _, e in items)
        ev._skey = None
        return ev

    @classmethod
    def from_var(cls, name, exp=1):
        if exp == 0:
            return EMPTY_EV
        return cls._from_sorted(((name, int(exp)),))

    @property
    def items(self):
        return self._items

    def is_empty(self):
        return not self._items

    def get(self, var):
        for v, e in self._items:
            if v == var:
                return e
        return 0

    def variables(self):
        return tuple(v for v, _ in self._items)

    def degree(self, vars=None):
        """Total degree, optionally restricted to a set of variables."""
        if vars is None:
            return self._degree
        return sum(e for v, e in self._items if v in vars)

    def mul(self, other):
        if not other._items:
            return self
        if not self._items:
            return other
        merged = dict(self._items)
        for v, e in other._items:
            ne = merged.get(v, 0) + e
            if ne:
                merged[v] = ne
            elif v in merged:
                del merged[v]
        return ExponentVector._from_sorted(tuple(sorted(merged.items())))

    def pow(self, n):
        n = int(n)
        if n == 0 or not self._items:
            return EMPTY_EV
        if n == 1:
            return self
        return ExponentVector._from_sorted(tuple((v, e * n) for v, e in self._items))

    def without(self, var):
        if self.get(var) == 0:
            return self
        return ExponentVector._from_sorted(tuple((v, e) for v, e in self._items if v != var))

    def with_exp(self, var, exp):
        return self.without(var).mul(ExponentVector.from_var(var, exp))

    def restrict(self, vars):
        return ExponentVector._from_sorted(tuple((v, e) for v, e in self._items if v in vars))

    def has_negative(self, vars=None):
        return any(e < 0 for v, e in self._items if vars is None or v in vars)

    def subs(self, mapping):
        """Monomial substitution: each variable in `mapping` is replaced by
        the given ExponentVector raised to this vector's exponent."""
        out = EMPTY_EV
        for v, e in self._items:
            repl = mapping.get(v)
            if repl is None:
                out = out.mul(ExponentVector.from_var(v, e))
            else:
                out = out.mul(repl.pow(e))
        return out

    def dominates(self, other):
        """Componentwise >= (the Dickson partial order)."""
        for v, e in other._items:
            if self.get(v) < e:
                return False
        for v, e in self._items:
            if e < 0 and other.get(v) > e:
                return False
        return True

    def as_tuple(self, variables):
        return tuple(self.get(v) for v in variables)

    def render(self):
        if not self._items:
            return "1"
        parts = []
        for v, e in self._items:
            parts.append(v if e == 1 else "%s^%d" % (v, e))
        return "*".join(parts)

    def sort_key(self):
        """Canonical total order: total degree, then rendered string."""
        if self._skey is None:
            self._skey = (self._degree, self.render())
        return self._skey

    def __eq__(self, other):
        return isinstance(other, ExponentVector) and self._items == other._items

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __repr__(self):
        return "ExponentVector(%s)" % self.render()


EMPTY_EV = ExponentVector()


def _lex_key(ev, varorder):
    return tuple(ev.get(v) for v in varorder)


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPolynomial:
    """Finite sum of monomials with exact rational coefficients.

    Stored as a map ExponentVector -> coefficient with no zero coefficients.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            self._terms = {}
        else:
            self._terms = {ev: c for ev, c in terms.items() if c != 0}

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p._terms = terms
        return p

    @classmethod
    def zero(cls):
        return cls._raw({})

    @classmethod
    def one(cls):
        return cls._raw({EMPTY_EV: 1})

    @classmethod
    def constant(cls, c):
        c = Fraction(c) if not isinstance(c, (int, Fraction)) else c
        return cls._raw({EMPTY_EV: c} if c != 0 else {})

    @classmethod
    def monomial(cls, ev, coeff=1):
        if coeff == 0:
            return cls.zero()
        return cls._raw({ev: coeff})

    @classmethod
    def variable(cls, name, exp=1):
        return cls.monomial(ExponentVector.from_var(name, exp))

    @property
    def terms(self):
        return self._terms

    def is_zero(self):
        return not self._terms

    def is_one(self):
        return self._terms == {EMPTY_EV: 1}

    def is_constant(self):
        return not self._terms or (len(self._terms) == 1 and EMPTY_EV in self._terms)

    def constant_value(self):
        return self._terms.get(EMPTY_EV, 0)

    def term_count(self):
        return len(self._terms)

    def __add__(self, other):
        if not other._terms:
            return self
        if not self._terms:
            return other
        acc = dict(self._terms)
        for ev, c in other._terms.items():
            nc = acc.get(ev, 0) + c
            if nc:
                acc[ev] = nc
            elif ev in acc:
                del acc[ev]
        return LaurentPolynomial._raw(acc)

    def __neg__(self):
        return LaurentPolynomial._raw({ev: -c for ev, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self._terms or not other._terms:
            return LaurentPolynomial.zero()
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        acc = {}
        for ev1, c1 in a.items():
            for ev2, c2 in b.items():
                ev = ev1.mul(ev2)
                nc = acc.get(ev, 0) + c1 * c2
                if nc:
                    acc[ev] = nc
                elif ev in acc:
                    del acc[ev]
        return LaurentPolynomial._raw(acc)

    def scale(self, c):
        if c == 0:
            return LaurentPolynomial.zero()
        if c == 1:
            return self
        return LaurentPolynomial._raw({ev: co * c for ev, co in self._terms.items()})

    def mul_monomial(self, ev, coeff=1):
        if coeff == 0:
            return LaurentPolynomial.zero()
        return LaurentPolynomial._raw({e.mul(ev): c * coeff for e, c in self._terms.items()})

    def mul_truncated(self, other, vars, bound):
        """Product with all result monomials of degree > bound in `vars` dropped.

        Both operands must already be truncated the same way for the result to
        agree with the truncated true product.
        """
        a, b = self._terms, other._terms
        if len(a) > len(b):
            a, b = b, a
        bdegs = [(ev, c, ev.degree(vars)) for ev, c in b.items()]
        acc = {}
        for ev1, c1 in a.items():
            d1 = ev1.degree(vars)
            for ev2, c2, d2 in bdegs:
                if d1 + d2 > bound:
                    continue
                ev = ev1.mul(ev2)
                nc = acc.get(ev, 0) + c1 * c2
                if nc:
                    acc[ev] = nc
                elif ev in acc:
                    del acc[ev]
        return LaurentPolynomial._raw(acc)

    def truncate(self, vars, bound):
        return LaurentPolynomial._raw(
            {ev: c for ev, c in self._terms.items() if ev.degree(vars) <= bound}
        )

    def substitute_monomials(self, mapping):
        acc = {}
        for ev, c in self._terms.items():
            nev = ev.subs(mapping)
            nc = acc.get(nev, 0) + c
            if nc:
                acc[nev] = nc
            elif nev in acc:
                del acc[nev]
        return LaurentPolynomial._raw(acc)

    def eval_var(self, var, value):
        """Substitute var := 0 or var := 1.  value 0 requires no negative
        exponent of var (a pole otherwise)."""
        if value == 1:
            acc = {}
            for ev, c in self._terms.items():
                nev = ev.without(var)
                nc = acc.get(nev, 0) + c
                if nc:
                    acc[nev] = nc
                elif nev in acc:
                    del acc[nev]
            return LaurentPolynomial._raw(acc)
        if value == 0:
            acc = {}
            for ev, c in self._terms.items():
                e = ev.get(var)
                if e < 0:
                    raise PoleAtZero("negative exponent of %s at 0" % var)
                if e == 0:
                    acc[ev] = c
            return LaurentPolynomial._raw(acc)
        raise ValueError("only evaluation at 0 or 1 is supported")

    def coefficient_slice(self, var, deg):
        """The coefficient of var^deg, with var removed from the result."""
        acc = {}
        for ev, c in self._terms.items():
            if ev.get(var) == deg:
                acc[ev.without(var)] = c
        return LaurentPolynomial._raw(acc)

    def split_by_var(self, var):
        """Map var-degree -> coefficient polynomial (var removed)."""
        out = {}
        for ev, c in self._terms.items():
            d = ev.get(var)
            out.setdefault(d, {})[ev.without(var)] = c
        return {d: LaurentPolynomial._raw(t) for d, t in out.items()}

    def min_exponent(self, var):
        if not self._terms:
            return 0
        return min(ev.get(var) for ev in self._terms)

    def max_exponent(self, var):
        if not self._terms:
            return 0
        return max(ev.get(var) for ev in self._terms)

    def degree(self, vars=None):
        if not self._terms:
            return 0
        return max(ev.degree(vars) for ev in self._terms)

    def variables(self):
        out = set()
        for ev in self._terms:
            out.update(ev.variables())
        return out

    def has_negative(self, vars=None):
        return any(ev.has_negative(vars) for ev in self._terms)

    def leading_term(self):
        """Term maximal in the canonical order; (EMPTY_EV, 0) for zero."""
        if not self._terms:
            return (EMPTY_EV, 0)
        ev = max(self._terms, key=lambda e: e.sort_key())
        return (ev, self._terms[ev])

    def content(self):
        """(rational content, monomial content): the largest c * x^m dividing
        every term, with c > 0.  Zero polynomial gives (1, empty)."""
        if not self._terms:
            return (Fraction(1), EMPTY_EV)
        nums = 0
        dens = 1
        for c in self._terms.values():
            f = Fraction(c)
            nums = _gcd(nums, f.numerator)
            dens = _lcm(dens, f.denominator)
        mono = {}
        for v in self.variables():
            m = min(ev.get(v) for ev in self._terms)
            if m != 0:
                mono[v] = m
        return (Fraction(nums, dens), ExponentVector(mono))

    def render(self):
        if not self._terms:
            return "0"
        items = sorted(self._terms.items(), key=lambda t: t[0].sort_key())
        out = []
        for ev, c in items:
            c = Fraction(c)
            sign = "-" if c < 0 else "+"
            mag = -c if c < 0 else c
            if ev.is_empty():
                body = _render_coeff(mag)
            elif mag == 1:
                body = ev.render()
            else:
                body = "%s*%s" % (_render_coeff(mag), ev.render())
            out.append((sign, body))
        first_sign, first_body = out[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in out[1:]:
            text += " %s %s" % (sign, body)
        return text

    def __eq__(self, other):
        return isinstance(other, LaurentPolynomial) and self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        return "LaurentPolynomial(%s)" % self.render()


def _render_coeff(c):
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return "(%d/%d)" % (c.numerator, c.denominator)


def _gcd(a, b):
    a, b = abs(a), abs(b)
    while b:
        a, b = b, a % b
    return a


def _lcm(a, b):
    if a == 0 or b == 0:
        return 0
    return a // _gcd(a, b) * b


def lp_add(p, q):
    return p + q


def lp_mul(p, q):
    return p * q


def lp_neg(p):
    return -p


def lp_div_exact(f, g):
    """Exact division of Laurent polynomials: f/g if it is a Laurent
    polynomial, else None.  g must be nonzero."""
    if g.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if f.is_zero():
        return LaurentPolynomial.zero()
    # shift both to proper polynomials (per-variable minimum exponent 0)
    fvars = sorted(f.variables() | g.variables())
    fshift = ExponentVector({v: -f.min_exponent(v) for v in fvars})
    gshift = ExponentVector({v: -g.min_exponent(v) for v in fvars})
    f0 = f.mul_monomial(fshift)
    g0 = g.mul_monomial(gshift)
    q0 = _poly_div_exact(f0, g0, fvars)
    if q0 is None:
        return None
    # f = f0 x^-fshift, g = g0 x^-gshift, so f/g = q0 x^(gshift-fshift)
    return q0.mul_monomial(gshift.mul(fshift.pow(-1)))


_PROBE_WEIGHTS = ((2, 3, 5, 7, 11, 13, 17, 19, 23, 29), (5, 17, 2, 13, 29, 3, 23, 7, 19, 11))


def _univariate_probe(f, g, varorder):
    """Cheap necessary condition for g | f: specialize every variable to a
    power of one parameter and test univariate divisibility.  Returns False
    only when divisibility is impossible."""
    for weights in _PROBE_WEIGHTS:
        if len(varorder) > len(weights):
            return True
        wmap = {v: weights[i] for i, v in enumerate(varorder)}

        def collapse(p):
            out = {}
            for ev, c in p.terms.items():
                d = sum(wmap[v] * e for v, e in ev.items)
                out[d] = out.get(d, 0) + c
            return {d: c for d, c in out.items() if c}

        gd = collapse(g)
        if not gd:
            continue
        fd = collapse(f)
        dg = max(gd)
        glc = gd[dg]
        # univariate long division, early exit on nonzero remainder
        while fd:
            df = max(fd)
            if df < dg:
                return False
            q = Fraction(fd[df]) / Fraction(glc)
            for d, c in gd.items():
                t = df - dg + d
                nc = fd.get(t, 0) - q * c
                if nc:
                    fd[t] = nc
                else:
                    fd.pop(t, None)
    return True


def _poly_div_exact(f, g, varorder):
    """Single-divisor exact division for proper (nonnegative-exponent)
    polynomials under the pure lexicographic order; None if not exact.

    A univariate specialization refutes most non-divisible inputs cheaply;
    the running maximum of the remainder is kept in a lazy max-heap so each
    reduction step costs O(|g| log n) instead of a full scan.
    """
    import heapq

    if len(f.terms) > 8 and not _univariate_probe(f, g, varorder):
        return None

    keycache = {}

    def key(ev):
        k = keycache.get(ev)
        if k is None:
            k = tuple(-e for e in _lex_key(ev, varorder))
            keycache[ev] = k
        return k

    gl = max(g.terms, key=lambda ev: _lex_key(ev, varorder))
    glc = g.terms[gl]
    glk = _lex_key(gl, varorder)
    glinv = gl.pow(-1)
    rem = dict(f.terms)
    heap = [(key(ev), ev) for ev in rem]
    heapq.heapify(heap)
    quo = {}
    while rem:
        while heap:
            _, ft = heap[0]
            if ft in rem:
                break
            heapq.heappop(heap)
        fk = _lex_key(ft, varorder)
        if any(a < b for a, b in zip(fk, glk)):
            return None
        qev = ft.mul(glinv)
        qc = Fraction(rem[ft]) / Fraction(glc)
        if qc.denominator == 1:
            qc = qc.numerator
        quo[qev] = qc
        for ev, c in g.terms.items():
            t = ev.mul(qev)
            old = rem.get(t)
            nc = (old or 0) - qc * c
            if nc:
                rem[t] = nc
                if old is None:
                    heapq.heappush(heap, (key(t), t))
            elif t in rem:
                del rem[t]
    return LaurentPolynomial._raw(quo)


# ---------------------------------------------------------------------------
# Factored rational functions


class BinomialFactor:
    """One denominator factor (1 - monomial)^multiplicity."""

    __slots__ = ("monomial", "multiplicity")

    def __init__(self, monomial, multiplicity=1):
        if monomial.is_empty():
            raise DegenerateFactor("factor 1 - 1 is zero")
        if multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        self.monomial = monomial
        self.multiplicity = multiplicity

    def as_poly(self):
        return LaurentPolynomial({EMPTY_EV: 1, self.monomial: -1})

    def render(self):
        base = "(1-%s)" % self.monomial.render()
        if self.multiplicity == 1:
            return base
        return "%s^%d" % (base, self.multiplicity)

    def __eq__(self, other):
        return (
            isinstance(other, BinomialFactor)
            and self.monomial == other.monomial
            and self.multiplicity == other.multiplicity
        )

    def __hash__(self):
        return hash((self.monomial, self.multiplicity))

    def __repr__(self):
        return "BinomialFactor(%s)" % self.render()


def _canonical_factors(factors):
    acc = {}
    for f in factors:
        if isinstance(f, BinomialFactor):
            acc[f.monomial] = acc.get(f.monomial, 0) + f.multiplicity
        else:
            m, mult = f
            acc[m] = acc.get(m, 0) + mult
    return tuple(
        BinomialFactor(m, acc[m]) for m in sorted(acc, key=lambda ev: ev.sort_key())
    )


class NiceRational:
    """numerator / product of (1 - monomial) factors, kept in canonical form
    (factors sorted and merged; the zero function has an empty denominator)."""

    __slots__ = ("numerator", "factors")

    def __init__(self, numerator, factors=()):
        if numerator.is_zero():
            self.numerator = LaurentPolynomial.zero()
            self.factors = ()
        else:
            self.numerator = numerator
            self.factors = _canonical_factors(factors)

    @classmethod
    def zero(cls):
        return cls(LaurentPolynomial.zero())

    @classmethod
    def one(cls):
        return cls(LaurentPolynomial.one())

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def geometric(cls, variables):
        """prod over v of 1/(1 - v): the series of all of N^k."""
        return cls(
            LaurentPolynomial.one(),
            [BinomialFactor(ExponentVector.from_var(v)) for v in variables],
        )

    def is_zero(self):
        return self.numerator.is_zero()

    def den_poly(self):
        out = LaurentPolynomial.one()
        for f in self.factors:
            fp = f.as_poly()
            for _ in range(f.multiplicity):
                out = out * fp
        return out

    def mul(self, other):
        if isinstance(other, LaurentPolynomial):
            return NiceRational(self.numerator * other, self.factors)
        return NiceRational(
            self.numerator * other.numerator, self.factors + other.factors
        )

    def add(self, other):
        """Exact sum over the least common multiple of the factor multisets."""
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        mine = {f.monomial: f.multiplicity for f in self.factors}
        theirs = {f.monomial: f.multiplicity for f in other.factors}
        lcm = {m: max(mine.get(m, 0), theirs.get(m, 0)) for m in set(mine) | set(theirs)}
        num = self.numerator * _factor_product(lcm, mine)
        num = num + other.numerator * _factor_product(lcm, theirs)
        return NiceRational(num, [(m, k) for m, k in lcm.items()])

    def substitute(self, mapping):
        num = self.numerator.substitute_monomials(mapping)
        facs = []
        for f in self.factors:
            m = f.monomial.subs(mapping)
            if m.is_empty():
                raise DegenerateFactor(
                    "substitution maps factor monomial %s to 1" % f.monomial.render()
                )
            facs.append((m, f.multiplicity))
        return NiceRational(num, facs)

    def eval_var(self, var, value):
        if value == 1:
            facs = []
            for f in self.factors:
                m = f.monomial.without(var)
                if m.is_empty():
                    raise PoleAtOne("factor %s vanishes at %s=1" % (f.render(), var))
                facs.append((m, f.multiplicity))
            return NiceRational(self.numerator.eval_var(var, 1), facs)
        if value == 0:
            facs = []
            for f in self.factors:
                e = f.monomial.get(var)
                if e < 0:
                    raise PoleAtZero(
                        "factor %s has a pole at %s=0" % (f.render(), var)
                    )
                if e == 0:
                    facs.append(f)
            return NiceRational(self.numerator.eval_var(var, 0), facs)
        raise ValueError("only evaluation at 0 or 1 is supported")

    def variables(self):
        out = self.numerator.variables()
        for f in self.factors:
            out.update(f.monomial.variables())
        return out

    def to_general(self):
        return GeneralRational(self.numerator, self.den_poly())

    def render(self):
        num = self.numerator.render()
        if not self.factors:
            return num
        den = "*".join(f.render() for f in self.factors)
        if self.numerator.term_count() > 1:
            num = "(%s)" % num
        return "%s / (%s)" % (num, den)

    def __eq__(self, other):
        return (
            isinstance(other, NiceRational)
            and self.numerator == other.numerator
            and self.factors == other.factors
        )

    def __hash__(self):
        return hash((self.numerator, self.factors))

    def __repr__(self):
        return "NiceRational(%s)" % self.render()


def _factor_product(lcm, present):
    out = LaurentPolynomial.one()
    for m, k in lcm.items():
        extra = k - present.get(m, 0)
        if extra > 0:
            fp = BinomialFactor(m).as_poly()
            for _ in range(extra):
                out = out * fp
    return out


class GeneralRational:
    """A quotient of Laurent polynomials with a canonical normalization:
    common monomial content removed and the denominator made monic in its
    canonically-leading term."""

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator, denominator=None, _normalized=False):
        if denominator is None:
            denominator = LaurentPolynomial.one()
        if denominator.is_zero():
            raise ZeroDivisionError("zero denominator")
        if _normalized:
            self.numerator = numerator
            self.denominator = denominator
            return
        if numerator.is_zero():
            self.numerator = LaurentPolynomial.zero()
            self.denominator = LaurentPolynomial.one()
            return
        # opportunistic exact cancellation first (size-gated: divisibility
        # attempts on huge operands cost more than the tidier form is worth)
        if (
            not denominator.is_one()
            and numerator.term_count() * denominator.term_count() <= 20000
        ):
            q = lp_div_exact(numerator, denominator)
            if q is not None:
                numerator, denominator = q, LaurentPolynomial.one()
            else:
                q = lp_div_exact(denominator, numerator)
                if q is not None:
                    numerator, denominator = LaurentPolynomial.one(), q
        # shift so both parts are proper with per-variable minimum 0
        allvars = sorted(numerator.variables() | denominator.variables())
        shift = {}
        for v in allvars:
            m = min(numerator.min_exponent(v), denominator.min_exponent(v))
            if m:
                shift[v] = -m
        if shift:
            ev = ExponentVector(shift)
            numerator = numerator.mul_monomial(ev)
            denominator = denominator.mul_monomial(ev)
        # monic denominator under the canonical term order
        _, lc = denominator.leading_term()
        if lc != 1:
            inv = 1 / Fraction(lc)
            numerator = numerator.scale(inv)
            denominator = denominator.scale(inv)
        self.numerator = numerator
        self.denominator = denominator

    @classmethod
    def zero(cls):
        return cls(LaurentPolynomial.zero())

    @classmethod
    def one(cls):
        return cls(LaurentPolynomial.one())

    @classmethod
    def from_poly(cls, p):
        return cls(p)

    @classmethod
    def constant(cls, c):
        return cls(LaurentPolynomial.constant(c))

    def is_zero(self):
        return self.numerator.is_zero()

    def __add__(self, other):
        other = _as_general(other)
        if self.denominator == other.denominator:
            return GeneralRational(self.numerator + other.numerator, self.denominator)
        return GeneralRational(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __sub__(self, other):
        return self + (-_as_general(other))

    def __neg__(self):
        return GeneralRational(-self.numerator, self.denominator, _normalized=True)

    def __mul__(self, other):
        other = _as_general(other)
        return GeneralRational(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    def __truediv__(self, other):
        other = _as_general(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return GeneralRational(
            self.numerator * other.denominator, self.denominator * other.numerator
        )

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return GeneralRational(self.denominator, self.numerator)

    def is_polynomial(self):
        return self.denominator.is_one()

    def render(self):
        if self.denominator.is_one():
            return self.numerator.render()
        num = self.numerator.render()
        if self.numerator.term_count() > 1:
            num = "(%s)" % num
        den = self.denominator.render()
        if self.denominator.term_count() > 1:
            den = "(%s)" % den
        return "%s / %s" % (num, den)

    def __eq__(self, other):
        return (
            isinstance(other, GeneralRational)
            and self.numerator == other.numerator
            and self.denominator == other.denominator
        )

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __repr__(self):
        return "GeneralRational(%s)" % self.render()


def _as_general(f):
    if isinstance(f, GeneralRational):
        return f
    if isinstance(f, NiceRational):
        return f.to_general()
    if isinstance(f, LaurentPolynomial):
        return GeneralRational(f)
    if isinstance(f, (int, Fraction)):
        return GeneralRational.constant(f)
    raise TypeError("cannot coerce %r to a rational function" % (f,))


# ---------------------------------------------------------------------------
# Spec operations


def substitute_monomial(f, mapping):
    """Replace variables by single monomials throughout a NiceRational."""
    return f.substitute(mapping)


def eval_at(f, var, value):
    """Evaluate a NiceRational at var = 0 or var = 1."""
    return f.eval_var(var, value)


def rf_equal(f, g):
    """Exact equality of rational functions by cross-multiplication."""
    if isinstance(f, NiceRational) and isinstance(g, NiceRational):
        if f.numerator == g.numerator and f.factors == g.factors:
            return True
        mine = {x.monomial: x.multiplicity for x in f.factors}
        theirs = {x.monomial: x.multiplicity for x in g.factors}
        # cancel shared factors before expanding
        f_extra = {}
        g_extra = {}
        for m in set(mine) | set(theirs):
            d = mine.get(m, 0) - theirs.get(m, 0)
            if d > 0:
                f_extra[m] = d
            elif d < 0:
                g_extra[m] = -d
        lhs = f.numerator * _expand_factor_dict(g_extra)
        rhs = g.numerator * _expand_factor_dict(f_extra)
        return lhs == rhs
    fg = _as_general(f)
    gg = _as_general(g)
    return fg.numerator * gg.denominator == gg.numerator * fg.denominator


def _expand_factor_dict(d):
    out = LaurentPolynomial.one()
    for m, k in d.items():
        fp = BinomialFactor(m).as_poly()
        for _ in range(k):
            out = out * fp
    return out


def normalize(f):
    """Canonical form: sorted merged factors, exactly-divisible denominator
    binomials cancelled against the numerator, and perfect-power binomials
    (1 - N^k) lowered to (1 - N) whenever the cyclotomic-like cofactor
    1 + N + ... + N^(k-1) divides the numerator."""
    if f.is_zero():
        return NiceRational.zero()
    num = f.numerator
    factors = {fac.monomial: fac.multiplicity for fac in f.factors}
    changed = True
    while changed:
        changed = False
        # cancel whole binomials
        for mono in list(factors):
            poly = BinomialFactor(mono).as_poly()
            while factors.get(mono, 0) > 0:
                q = lp_div_exact(num, poly)
                if q is None:
                    break
                num = q
                factors[mono] -= 1
                if factors[mono] == 0:
                    del factors[mono]
                changed = True
        # lower perfect powers: (1 - N^k) = (1 - N)(1 + N + ... + N^(k-1))
        for mono in list(factors):
            if factors.get(mono, 0) <= 0:
                continue
            exps = [e for _, e in mono.items]
            g = 0
            for e in exps:
                g = _gcd(g, e)
            if g < 2:
                continue
            done = False
            for k in _divisors(g):
                if k < 2:
                    continue
                base = ExponentVector(tuple((v, e // k) for v, e in mono.items))
                cof = LaurentPolynomial(
                    {base.pow(j): 1 for j in range(k)}
                )
                q = lp_div_exact(num, cof)
                if q is not None:
                    num = q
                    factors[mono] -= 1
                    if factors[mono] == 0:
                        del factors[mono]
                    factors[base] = factors.get(base, 0) + 1
                    changed = True
                    done = True
                    break
            if done:
                break
    return NiceRational(num, list(factors.items()))


def _divisors(n):
    out = [d for d in range(2, n + 1) if n % d == 0]
    return out


def expand_truncated(f, vars, bound):
    """Power-series expansion of a NiceRational truncated to total degree
    <= bound in `vars` (other variables ride along untouched)."""
    vars = set(vars)
    if f.is_zero():
        return LaurentPolynomial.zero()
    if f.numerator.has_negative(vars):
        raise NonExpandable("numerator has negative exponents in expansion variables")
    out = f.numerator.truncate(vars, bound)
    for fac in f.factors:
        g = fac.monomial.degree(vars)
        if g <= 0:
            raise NonExpandable(
                "denominator monomial %s has nonpositive degree in expansion variables"
                % fac.monomial.render()
            )
        series = {}
        j = 0
        while j * g <= bound:
            series[fac.monomial.pow(j)] = comb(j + fac.multiplicity - 1, fac.multiplicity - 1)
            j += 1
        out = out.mul_truncated(LaurentPolynomial._raw(series), vars, bound)
    return out


def coefficient_of(f, var, deg):
    """The deg-th Taylor coefficient of f at var = 0.

    NiceRational input with nonnegative var-exponents in the denominator uses
    a product expansion and stays NiceRational; anything else goes through the
    exact series-division recurrence on a GeneralRational and returns one.
    """
    if deg < 0:
        raise ValueError("coefficient degree must be nonnegative")
    if isinstance(f, NiceRational):
        if all(fac.monomial.get(var) >= 0 for fac in f.factors):
            return _nice_coefficient(f, var, deg)
        f = f.to_general()
    return _general_coefficient(_as_general(f), var, deg)


def _nice_coefficient(f, var, deg):
    if f.is_zero():
        return NiceRational.zero()
    free = [fac for fac in f.factors if fac.monomial.get(var) == 0]
    carriers = [fac for fac in f.factors if fac.monomial.get(var) > 0]
    num_slices = f.numerator.split_by_var(var)
    if not num_slices:
        return NiceRational.zero()
    max_need = deg - min(num_slices)
    # C[r] = coefficient of var^r in prod over carriers of 1/(1 - Mtilde var^e)^mult
    C = {0: LaurentPolynomial.one()}
    for fac in carriers:
        e = fac.monomial.get(var)
        mt = fac.monomial.without(var)
        series = {}
        j = 0
        while j * e <= max_need:
            series[j * e] = LaurentPolynomial.monomial(
                mt.pow(j), comb(j + fac.multiplicity - 1, fac.multiplicity - 1)
            )
            j += 1
        nxt = {}
        for d1, p1 in C.items():
            for d2, p2 in series.items():
                if d1 + d2 > max_need:
                    continue
                prod = p1 * p2
                if d1 + d2 in nxt:
                    nxt[d1 + d2] = nxt[d1 + d2] + prod
                else:
                    nxt[d1 + d2] = prod
        C = nxt
    num = LaurentPolynomial.zero()
    for j, slice_ in num_slices.items():
        r = deg - j
        if r >= 0 and r in C:
            num = num + slice_ * C[r]
    return normalize(NiceRational(num, free))


def _general_coefficient(f, var, deg):
    num, den = f.numerator, f.denominator
    # make the denominator proper in var with a nonzero constant slice
    mu = den.min_exponent(var)
    if mu != 0:
        shift = ExponentVector.from_var(var, -mu)
        num = num.mul_monomial(shift)
        den = den.mul_monomial(shift)
    if num.min_exponent(var) < 0:
        raise PoleAtZero("pole of order %d at %s=0" % (-num.min_exponent(var), var))
    nsl = num.split_by_var(var)
    dsl = den.split_by_var(var)
    d0 = dsl.get(0)
    if d0 is None:
        raise PoleAtZero("denominator vanishes at %s=0" % var)
    # chat_j = c_j * d0^(j+1) via chat_j = n_j d0^j - sum_i d_i chat_(j-i) d0^(i-1)
    d0pow = [LaurentPolynomial.one()]
    while len(d0pow) <= deg + 1:
        d0pow.append(d0pow[-1] * d0)
    chat = []
    for j in range(deg + 1):
        acc = nsl.get(j, LaurentPolynomial.zero()) * d0pow[j]
        for i in range(1, j + 1):
            di = dsl.get(i)
            if di is None:
                continue
            acc = acc - di * chat[j - i] * d0pow[i - 1]
        chat.append(acc)
    return GeneralRational(chat[deg], d0pow[deg + 1])


def nice_from_general(f, candidates=()):
    """Recover the factored-binomial form of a GeneralRational that is known
    to be a nice rational function.

    The denominator is factored greedily: the lexicographically smallest
    nonconstant support monomial of a product of (1 - M_i) factors is always
    one of the M_i, so repeated exact division recovers the factors.  When
    the denominator additionally carries a cancelling non-binomial cofactor,
    support cancellation can hide a factor monomial from that argument, so
    callers that know likely factor monomials pass them as `candidates`;
    those are tried first.  Any unfactorable leftover must cancel against
    the numerator exactly; if it does not, the input was not nice and a
    PolyError is raised.
    """
    if f.is_zero():
        return NiceRational.zero()
    num, den = f.numerator, f.denominator
    rat, mono = den.content()
    if not mono.is_empty() or rat != 1:
        inv = 1 / rat
        num = num.mul_monomial(mono.pow(-1)).scale(inv)
        den = den.mul_monomial(mono.pow(-1)).scale(inv)
    extras = [m for m in candidates if not m.is_empty() and not m.has_negative()]
    factors = []
    while not den.is_constant():
        varorder = sorted(den.variables())
        # for a pure product of binomials the lex-minimal support monomial is
        # always a factor, so one support candidate per round suffices; the
        # caller-provided extras cover factors hidden by junk cancellation
        lexmin = min(
            (ev for ev in den.terms if not ev.is_empty()),
            key=lambda ev: _lex_key(ev, varorder),
            default=None,
        )
        trial = extras + ([lexmin] if lexmin is not None else [])
        progressed = False
        for m in trial:
            if m.has_negative():
                continue
            q = lp_div_exact(den, BinomialFactor(m).as_poly())
            if q is not None:
                den = q
                factors.append(m)
                progressed = True
                break
        if not progressed:
            break
    if den.is_constant():
        c = Fraction(den.constant_value())
        num = num.scale(1 / c)
    else:
        q = lp_div_exact(num, den)
        if q is None:
            raise PolyError(
                "denominator part %s is neither a binomial product nor a "
                "numerator divisor" % den.render()
            )
        num = q
    return normalize(NiceRational(num, [(m, 1) for m in factors]))


# ---------------------------------------------------------------------------
# Canonical text form: parse and render


def render_rational(f):
    if isinstance(f, (NiceRational, GeneralRational)):
        return f.render()
    if isinstance(f, LaurentPolynomial):
        return f.render()
    raise TypeError("cannot render %r" % (f,))


_TOKEN_CHARS = set("+-*/^() \t")


def _tokenize(text):
    tokens = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch in " \t\r\n":
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", int(text[i:j]), i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError("unexpected character %r" % ch, i)
    tokens.append(("end", None, n))
    return tokens


class _Parser:
    """Recursive-descent parser for the canonical rational-function form:

        rational := poly [ '/' '(' factor ('*' factor)* ')' ]
        factor   := '(' '1' '-' monomial ')' [ '^' int ]
        poly     := ['-'] term ( ('+'|'-') term )*
        term     := coeff [ '*' monomial ] | monomial
        coeff    := int | '(' int '/' int ')'
        monomial := name ['^' ['-'] int] ( '*' name ['^' ['-'] int] )*

    A multi-term poly numerator may be wrapped in parentheses.
    """

    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self, ahead=0):
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind):
        tok = self.next()
        if tok[0] != kind:
            raise ParseError("expected %r, found %r" % (kind, tok[1]), tok[2])
        return tok

    def parse_rational(self):
        num = self.parse_poly_maybe_paren()
        factors = []
        if self.peek()[0] == "/":
            self.next()
            factors = self.parse_denominator()
        self.expect("end")
        return NiceRational(num, factors)

    def parse_poly_maybe_paren(self):
        if self.peek()[0] == "(" and not self._paren_is_coeff():
            self.next()
            p = self.parse_poly()
            self.expect(")")
            return p
        return self.parse_poly()

    def _paren_is_coeff(self):
        # '(' int '/' int ')' is a fraction coefficient belonging to a term;
        # any other parenthesis here wraps the whole numerator polynomial.
        return (
            self.peek(1)[0] == "int"
            and self.peek(2)[0] == "/"
            and self.peek(3)[0] == "int"
            and self.peek(4)[0] == ")"
        )

    def parse_denominator(self):
        self.expect("(")
        factors = [self.parse_factor()]
        while self.peek()[0] == "*":
            self.next()
            factors.append(self.parse_factor())
        self.expect(")")
        return factors

    def parse_factor(self):
        self.expect("(")
        one = self.expect("int")
        if one[1] != 1:
            raise ParseError("denominator factor must start with 1", one[2])
        self.expect("-")
        mono = self.parse_monomial()
        self.expect(")")
        mult = 1
        if self.peek()[0] == "^":
            self.next()
            mult = self.expect("int")[1]
        return BinomialFactor(mono, mult)

    def parse_poly(self):
        acc = LaurentPolynomial.zero()
        sign = 1
        if self.peek()[0] in ("+", "-"):
            if self.next()[0] == "-":
                sign = -1
        acc = acc + self.parse_term(sign)
        while self.peek()[0] in ("+", "-"):
            sign = 1 if self.next()[0] == "+" else -1
            acc = acc + self.parse_term(sign)
        return acc

    def parse_term(self, sign):
        tok = self.peek()
        coeff = Fraction(sign)
        have_coeff = False
        if tok[0] == "int":
            self.next()
            coeff *= tok[1]
            have_coeff = True
        elif tok[0] == "(":
            # parenthesized fraction coefficient
            self.next()
            p = self.expect("int")[1]
            self.expect("/")
            q = self.expect("int")[1]
            self.expect(")")
            coeff *= Fraction(p, q)
            have_coeff = True
        if have_coeff:
            if self.peek()[0] == "*":
                self.next()
                mono = self.parse_monomial()
                return LaurentPolynomial.monomial(mono, _intify(coeff))
            return LaurentPolynomial.constant(_intify(coeff))
        mono = self.parse_monomial()
        return LaurentPolynomial.monomial(mono, _intify(coeff))

    def parse_monomial(self):
        pairs = [self.parse_varpow()]
        while self.peek()[0] == "*" and self.peek(1)[0] == "name":
            self.next()
            pairs.append(self.parse_varpow())
        return ExponentVector(pairs)

    def parse_varpow(self):
        name = self.expect("name")[1]
        exp = 1
        if self.peek()[0] == "^":
            self.next()
            neg = False
            if self.peek()[0] == "-":
                self.next()
                neg = True
            exp = self.expect("int")[1]
            if neg:
                exp = -exp
        return (name, exp)


def _intify(c):
    c = Fraction(c)
    return c.numerator if c.denominator == 1 else c


def parse_rational(text):
    """Parse the canonical text rendering back into a NiceRational."""
    return _Parser(text).parse_rational()


def parse_polynomial(text):
    p = _Parser(text)
    out = p.parse_poly()
    p.expect("end")
    return out
