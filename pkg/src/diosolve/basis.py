"""Minimal solutions and solution-set structure: Gordan's successive
elimination for homogeneous equation systems, Euler-style candidate
generation, minimal-element extraction under the componentwise order, and
parametric (offset + cone) families read from a characteristic series."""
from __future__ import annotations

from itertools import product

from .polyring import (
    BinomialFactor,
    ExponentVector,
    LaurentPolynomial,
    NiceRational,
    PolyError,
)
from .dioph import Constraint, ConstraintSystem, Relation, fresh_name


class TooManyParameters(PolyError):
    """A Gordan elimination round would introduce more parameter variables
    than the configured limit."""


def dickson_leq(a, b):
    """Componentwise <= on integer tuples."""
    return all(x <= y for x, y in zip(a, b))


def minimal_elements(points):
    """The antichain of componentwise-minimal elements, in canonical order.

    Accepts ExponentVectors or plain tuples; returns the same kind.
    """
    pts = list(points)
    if not pts:
        return []
    as_ev = isinstance(pts[0], ExponentVector)
    if as_ev:
        variables = sorted({v for p in pts for v in p.variables()})
        tuples = [p.as_tuple(variables) for p in pts]
    else:
        tuples = [tuple(p) for p in pts]
    tuples = sorted(set(tuples), key=lambda t: (sum(t), t))
    out = []
    for t in tuples:
        if not any(dickson_leq(m, t) for m in out):
            out.append(t)
    if as_ev:
        return [
            ExponentVector({v: e for v, e in zip(variables, t) if e}) for t in out
        ]
    return out


def _solutions_single(coeffs, bound_pos, bound_neg):
    """All nonzero solutions of sum(a_j x_j) = 0 with positive-coefficient
    variables bounded by bound_pos and negative ones by bound_neg.

    coeffs is a list of integers (zeros excluded by the caller); returns
    tuples aligned with it.
    """
    n = len(coeffs)
    sols = []

    def rec(idx, acc, total):
        if idx == n:
            if total == 0 and any(acc):
                sols.append(tuple(acc))
            return
        a = coeffs[idx]
        bound = bound_pos if a > 0 else bound_neg
        rest_pos = sum(
            (bound_pos if c > 0 else bound_neg) * c
            for c in coeffs[idx + 1 :]
            if c > 0
        )
        rest_neg = sum(
            (bound_pos if c > 0 else bound_neg) * c
            for c in coeffs[idx + 1 :]
            if c < 0
        )
        for x in range(bound + 1):
            t = total + a * x
            # prune: remaining rows can shift the total by [rest_neg, rest_pos]
            if t + rest_neg > 0 or t + rest_pos < 0:
                continue
            acc.append(x)
            rec(idx + 1, acc, t)
            acc.pop()

    rec(0, [], 0)
    return sols


def gordan_minimal_single(constraint, variables):
    """All componentwise-minimal nonzero solutions of one homogeneous
    equation over the given variable list.

    By the bounding argument, positive-coefficient values never exceed the
    sum of the negative magnitudes and vice versa; uninvolved variables give
    unit-vector solutions.
    """
    if constraint.relation is not Relation.EQ or constraint.constant != 0:
        raise ValueError("gordan_minimal_single needs a homogeneous equation")
    involved = [v for v in variables if constraint.coeffs.get(v, 0) != 0]
    coeffs = [constraint.coeffs[v] for v in involved]
    sum_pos = sum(c for c in coeffs if c > 0)
    sum_neg = sum(-c for c in coeffs if c < 0)
    sols = []
    if sum_pos and sum_neg:
        idx = {v: i for i, v in enumerate(involved)}
        for s in _solutions_single(coeffs, sum_neg, sum_pos):
            full = tuple(s[idx[v]] if v in idx else 0 for v in variables)
            sols.append(full)
        sols = minimal_elements(sols)
    for v in variables:
        if constraint.coeffs.get(v, 0) == 0:
            sols.append(tuple(1 if w == v else 0 for w in variables))
    sols = sorted(set(sols), key=lambda t: (sum(t), t))
    return [_to_ev(t, variables) for t in sols]


def _to_ev(tup, variables):
    return ExponentVector({v: e for v, e in zip(variables, tup) if e})


def euler_candidates(constraint, variables, bound=None):
    """Candidate minimal solutions of one homogeneous equation by pairing
    monomials of the positive-side and negative-side power series at equal
    matched degree k, for 1 <= k <= bound."""
    if constraint.relation is not Relation.EQ or constraint.constant != 0:
        raise ValueError("euler_candidates needs a homogeneous equation")
    pos = [(v, c) for v in variables if (c := constraint.coeffs.get(v, 0)) > 0]
    neg = [(v, -c) for v in variables if (c := constraint.coeffs.get(v, 0)) < 0]
    if bound is None:
        bound = sum(c for _, c in pos) * sum(c for _, c in neg)
    if bound <= 0 or not pos or not neg:
        return []
    tpoly = _degree_slices([c for _, c in pos], bound)
    upoly = _degree_slices([c for _, c in neg], bound)
    out = []
    for k in range(1, bound + 1):
        for xs in tpoly.get(k, ()):
            for ys in upoly.get(k, ()):
                full = {v: e for (v, _), e in zip(pos, xs) if e}
                full.update({v: e for (v, _), e in zip(neg, ys) if e})
                out.append(ExponentVector(full))
    return sorted(set(out), key=lambda e: e.sort_key())


def _degree_slices(weights, bound):
    """Exponent tuples of prod 1/(1 - u_i z^(w_i)) by z-degree <= bound."""
    slices = {0: [tuple()]}
    for w in weights:
        nxt = {}
        for d, tuples in slices.items():
            j = 0
            while d + j * w <= bound:
                for t in tuples:
                    nxt.setdefault(d + j * w, []).append(t + (j,))
                j += 1
        slices = nxt
    return slices


def gordan_minimal_system(sys, max_parameters=64):
    """Minimal nonzero solutions of a homogeneous all-equation system by
    successive elimination: solve the first equation, substitute the general
    solution into the next one, solve the induced equation in the parameter
    variables, map back, and keep the minimal elements."""
    for c in sys.constraints:
        if c.relation is not Relation.EQ or c.constant != 0:
            raise ValueError("gordan_minimal_system needs homogeneous equations")
    variables = sys.variables
    if not sys.constraints:
        return [
            _to_ev(tuple(1 if w == v else 0 for w in variables), variables)
            for v in variables
        ]
    gens = None
    for constraint in sys.constraints:
        if gens is None:
            gens = [g.as_tuple(variables) for g in gordan_minimal_single(constraint, variables)]
            continue
        if len(gens) > max_parameters:
            raise TooManyParameters(
                "%d parameter variables exceed the limit of %d"
                % (len(gens), max_parameters)
            )
        params = ["p%d" % (i + 1) for i in range(len(gens))]
        induced = Constraint(
            {
                p: sum(constraint.coeffs.get(v, 0) * g[j] for j, v in enumerate(variables))
                for p, g in zip(params, gens)
            },
            0,
            Relation.EQ,
        )
        candidates = set()
        for tau in gordan_minimal_single(induced, params):
            tt = tau.as_tuple(params)
            point = tuple(
                sum(tt[i] * gens[i][j] for i in range(len(gens)))
                for j in range(len(variables))
            )
            if any(point):
                candidates.add(point)
        gens = minimal_elements(candidates)
    return [_to_ev(t, variables) for t in sorted(gens, key=lambda t: (sum(t), t))]


def hilbert_basis(sys, max_parameters=64):
    """Generators of the solution monoid of a homogeneous system (equations
    and inequalities): inequalities take explicit slack variables, Gordan
    elimination runs on the equation system, slacks are projected away, and
    redundant (decomposable) generators are removed.

    For pure equation systems the result is the componentwise-minimal
    antichain; with inequalities the projection can produce comparable
    generators that are still irreducible in the monoid, so redundancy is
    decided by monoid decomposability rather than the componentwise order.
    """
    if not sys.is_homogeneous():
        raise ValueError("hilbert_basis needs a homogeneous system")
    variables = list(sys.variables)
    slacked = []
    slack_names = []
    taken = set(variables)
    for i, c in enumerate(sys.constraints):
        if c.relation is Relation.EQ:
            slacked.append(c)
            continue
        s = fresh_name("s%d" % (i + 1), taken)
        taken.add(s)
        slack_names.append(s)
        coeffs = dict(c.coeffs)
        coeffs[s] = -1
        slacked.append(Constraint(coeffs, 0, Relation.EQ))
    esys = ConstraintSystem(variables + slack_names, slacked)
    raw = gordan_minimal_system(esys, max_parameters)
    projected = {g.restrict(set(variables)) for g in raw}
    projected = sorted(
        (g for g in projected if not g.is_empty()),
        key=lambda e: e.sort_key(),
    )
    tuples = sorted({g.as_tuple(variables) for g in projected}, key=lambda t: (sum(t), t))
    kept = []
    for i, t in enumerate(tuples):
        others = [o for o in tuples if o != t]
        if not _decomposable(t, others):
            kept.append(t)
    minimal = [_to_ev(t, variables) for t in kept]
    return SolutionBasis(minimal, None, variables)


def _decomposable(point, gens, _memo=None):
    """True when point is a nonnegative integer combination of gens."""
    if _memo is None:
        _memo = {}
    if all(x == 0 for x in point):
        return True
    if point in _memo:
        return _memo[point]
    _memo[point] = False
    for g in gens:
        if dickson_leq(g, point):
            rest = tuple(x - y for x, y in zip(point, g))
            if _decomposable(rest, gens, _memo):
                _memo[point] = True
                break
    return _memo[point]


class SolutionBasis:
    """Minimal solutions plus, when available, parametric families."""

    __slots__ = ("minimal", "families", "variables")

    def __init__(self, minimal, families, variables):
        self.minimal = list(minimal)
        self.families = families
        self.variables = list(variables)

    def tuples(self):
        return [m.as_tuple(self.variables) for m in self.minimal]

    def __repr__(self):
        return "SolutionBasis(%r)" % (self.tuples(),)


def parametric_form(series, variables=None):
    """Read (offset, generators) families off a characteristic series whose
    numerator has all coefficients +1: one family per numerator monomial,
    generated by the denominator monomials.  Returns None when the numerator
    has any other coefficient (an inclusion-exclusion form is not a valid
    parametric claim)."""
    if series.is_zero():
        return []
    for coeff in series.numerator.terms.values():
        if coeff != 1:
            return None
    gens = sorted(
        {f.monomial for f in series.factors}, key=lambda e: e.sort_key()
    )
    families = []
    for offset in sorted(series.numerator.terms, key=lambda e: e.sort_key()):
        families.append((offset, list(gens)))
    return families
