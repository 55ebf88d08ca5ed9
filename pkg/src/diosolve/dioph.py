"""Constraint-system model and the end-to-end solve: normalization,
homogenization of constants onto a fresh variable, per-constraint engine
application, extraction of the homogenizing coefficient, Euler counting,
and weighted series."""
from __future__ import annotations

import enum
import json
import logging

from . import elliott as _elliott
from . import xin as _xin
from .polyring import (
    BinomialFactor,
    ExponentVector,
    LaurentPolynomial,
    NiceRational,
    ParseError,
    PolyError,
    StepBudget,
    StepCeilingExceeded,
    coefficient_of,
    eval_at,
    expand_truncated,
    normalize,
    substitute_monomial,
)

log = logging.getLogger("diosolve")


class HypothesisViolated(PolyError):
    """Euler counting requires nonnegative coefficients covering every
    variable."""


class UnknownVariable(PolyError):
    pass


class Relation(enum.Enum):
    EQ = "eq"
    GE = "ge"
    GT = "gt"

    def symbol(self):
        return {"eq": "=", "ge": ">=", "gt": ">"}[self.value]


class Constraint:
    """One row: sum of coeff*var plus constant, related to 0."""

    __slots__ = ("coeffs", "constant", "relation")

    def __init__(self, coeffs, constant=0, relation=Relation.EQ):
        self.coeffs = {v: int(c) for v, c in coeffs.items() if c}
        self.constant = int(constant)
        self.relation = relation

    def value_at(self, point):
        """Evaluate the left side at a {var: value} mapping."""
        return sum(c * point.get(v, 0) for v, c in self.coeffs.items()) + self.constant

    def satisfied_by(self, point):
        v = self.value_at(point)
        if self.relation is Relation.EQ:
            return v == 0
        if self.relation is Relation.GE:
            return v >= 0
        return v > 0

    def is_homogeneous(self):
        return self.constant == 0

    def render(self):
        parts = []
        for i, (v, c) in enumerate(sorted(self.coeffs.items())):
            if i == 0:
                parts.append("%d*%s" % (c, v))
            else:
                parts.append("%s %d*%s" % ("+" if c >= 0 else "-", abs(c), v))
        if not parts:
            parts.append("0")
        return "%s %s %d" % (" ".join(parts), self.relation.symbol(), -self.constant)

    def __eq__(self, other):
        return (
            isinstance(other, Constraint)
            and self.coeffs == other.coeffs
            and self.constant == other.constant
            and self.relation == other.relation
        )

    def __repr__(self):
        return "Constraint(%s)" % self.render()


class ConstraintSystem:
    __slots__ = ("variables", "constraints", "infeasible")

    def __init__(self, variables, constraints, infeasible=False):
        self.variables = list(variables)
        if len(set(self.variables)) != len(self.variables):
            raise ValueError("duplicate variable names")
        for c in constraints:
            for v in c.coeffs:
                if v not in self.variables:
                    raise UnknownVariable("constraint uses undeclared variable %r" % v)
        self.constraints = list(constraints)
        self.infeasible = infeasible

    def is_homogeneous(self):
        return all(c.is_homogeneous() for c in self.constraints)

    def satisfied_by(self, point):
        return all(c.satisfied_by(point) for c in self.constraints)

    def render(self):
        return "\n".join(c.render() for c in self.constraints) + "\n"

    def to_machine(self):
        return {
            "variables": list(self.variables),
            "constraints": [
                {"coeffs": dict(c.coeffs), "constant": c.constant, "rel": c.relation.value}
                for c in self.constraints
            ],
        }

    @classmethod
    def from_machine(cls, doc):
        variables = list(doc["variables"])
        constraints = []
        for row in doc.get("constraints", []):
            rel = Relation(row.get("rel", "eq"))
            constraints.append(Constraint(row.get("coeffs", {}), row.get("constant", 0), rel))
        return cls(variables, constraints)

    def __eq__(self, other):
        return (
            isinstance(other, ConstraintSystem)
            and self.variables == other.variables
            and self.constraints == other.constraints
            and self.infeasible == other.infeasible
        )

    def __repr__(self):
        return "ConstraintSystem(%r, %d constraints)" % (self.variables, len(self.constraints))


class SolveOptions:
    __slots__ = ("engine", "step_ceiling", "trace")

    def __init__(self, engine="xin", step_ceiling=10**6, trace=0):
        if engine not in ("xin", "elliott"):
            raise ValueError("engine must be 'xin' or 'elliott'")
        self.engine = engine
        self.step_ceiling = step_ceiling
        self.trace = trace


# ---------------------------------------------------------------------------
# Text and machine formats

def parse_system(text):
    """Parse either the line format (`-4*x3 - 5*x6 + 1*y >= 3`, one
    constraint per line) or the JSON machine format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError("invalid JSON: %s" % exc.msg, exc.pos)
        return ConstraintSystem.from_machine(doc)
    variables = []
    constraints = []
    offset = 0
    for line in text.splitlines():
        raw = line
        line = line.split("#", 1)[0].strip()
        if line:
            constraints.append(_parse_constraint_line(line, offset, variables))
        offset += len(raw) + 1
    return ConstraintSystem(variables, constraints)


def _parse_constraint_line(line, offset, variables):
    rel = None
    for sym, r in ((">=", Relation.GE), (">", Relation.GT), ("=", Relation.EQ)):
        if sym in line:
            rel = r
            lhs, rhs = line.split(sym, 1)
            break
    if rel is None:
        raise ParseError("missing relation (=, >= or >)", offset + len(line))
    if "=" in rhs or ">" in rhs:
        raise ParseError("multiple relations in one constraint", offset + line.index(rhs))
    coeffs = {}
    constant = 0
    for sign, coeff, var, pos in _scan_terms(lhs, offset):
        if var is not None:
            coeffs[var] = coeffs.get(var, 0) + sign * coeff
            if var not in variables:
                variables.append(var)
        else:
            constant += sign * coeff
    for sign, coeff, var, pos in _scan_terms(rhs, offset + len(lhs)):
        if var is not None:
            raise ParseError("variables are not allowed on the right-hand side", pos)
        constant -= sign * coeff
    return Constraint(coeffs, constant, rel)


def _scan_terms(side, offset):
    """Parse a signed sum of terms into (sign, coefficient, var-or-None,
    position) tuples.  Terms are `int`, `var`, or `int*var`."""
    i, n = 0, len(side)
    out = []
    first = True
    while True:
        while i < n and side[i].isspace():
            i += 1
        if i >= n:
            break
        sign = 1
        saw_sign = False
        while i < n and side[i] in "+-":
            if side[i] == "-":
                sign = -sign
            saw_sign = True
            i += 1
            while i < n and side[i].isspace():
                i += 1
        if i >= n:
            raise ParseError("dangling sign", offset + i)
        if not first and not saw_sign:
            raise ParseError("expected + or - between terms", offset + i)
        ch = side[i]
        if ch.isdigit():
            j = i
            while j < n and side[j].isdigit():
                j += 1
            coeff = int(side[i:j])
            pos = i
            i = j
            k = i
            while k < n and side[k].isspace():
                k += 1
            if k < n and side[k] == "*":
                k += 1
                while k < n and side[k].isspace():
                    k += 1
                if k >= n or not (side[k].isalpha() or side[k] == "_"):
                    raise ParseError("expected variable after *", offset + k)
                j = k
                while j < n and (side[j].isalnum() or side[j] == "_"):
                    j += 1
                out.append((sign, coeff, side[k:j], offset + pos))
                i = j
            else:
                out.append((sign, coeff, None, offset + pos))
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (side[j].isalnum() or side[j] == "_"):
                j += 1
            out.append((sign, 1, side[i:j], offset + i))
            i = j
        else:
            raise ParseError("unexpected character %r" % ch, offset + i)
        first = False
    return out


# ---------------------------------------------------------------------------
# Pipeline


def normalize_system(sys):
    """Rewrite strict inequalities over integers (`> 0` becomes `>= 0` with
    the constant lowered by one) and resolve constant-only rows."""
    constraints = []
    infeasible = sys.infeasible
    for c in sys.constraints:
        if c.relation is Relation.GT:
            c = Constraint(c.coeffs, c.constant - 1, Relation.GE)
        if not c.coeffs:
            if c.relation is Relation.EQ:
                ok = c.constant == 0
            else:
                ok = c.constant >= 0
            if not ok:
                infeasible = True
            continue
        constraints.append(c)
    return ConstraintSystem(sys.variables, constraints, infeasible)


def fresh_name(base, taken):
    if base not in taken:
        return base
    i = 1
    while "%s%d" % (base, i) in taken:
        i += 1
    return "%s%d" % (base, i)


def homogenize(sys):
    """Carry every constant onto one fresh variable u; returns (system, u)
    with u None when the input is already homogeneous."""
    if sys.is_homogeneous():
        return sys, None
    u = fresh_name("u", set(sys.variables))
    constraints = []
    for c in sys.constraints:
        if c.constant:
            coeffs = dict(c.coeffs)
            coeffs[u] = c.constant
            constraints.append(Constraint(coeffs, 0, c.relation))
        else:
            constraints.append(c)
    return ConstraintSystem(sys.variables + [u], constraints, sys.infeasible), u


def characteristic_series(sys, opts=None):
    """The generating series over all nonnegative-integer solutions of the
    system as a NiceRational in the system's variables."""
    opts = opts or SolveOptions()
    nsys = normalize_system(sys)
    if nsys.infeasible:
        return NiceRational.zero()
    hsys, u = homogenize(nsys)
    budget = StepBudget(opts.step_ceiling)
    zvar = fresh_name("z", set(hsys.variables))
    series = NiceRational.geometric(hsys.variables)
    for index, constraint in enumerate(hsys.constraints):
        try:
            series = _apply_constraint(series, constraint, zvar, opts, budget)
        except StepCeilingExceeded as exc:
            raise StepCeilingExceeded(
                "%s (constraint %d: %s)" % (exc, index, constraint.render())
            ) from None
        if opts.trace:
            log.debug("after constraint %d: %s", index, series.render())
        if series.is_zero():
            return NiceRational.zero()
    if u is not None:
        series = coefficient_of(series, u, 1)
    return normalize(series)


def _apply_constraint(series, constraint, zvar, opts, budget):
    mapping = {
        v: ExponentVector(((v, 1), (zvar, a)))
        for v, a in constraint.coeffs.items()
    }
    xi = substitute_monomial(series, mapping)
    if opts.engine == "elliott":
        terms = _elliott.elliott_decompose(_elliott.ZTerm.from_nice(xi, zvar), budget)
        if constraint.relation is Relation.EQ:
            return _elliott.constant_term_z(terms, zvar)
        return _elliott.nonneg_part_z(terms, zvar)
    if constraint.relation is Relation.EQ:
        return _xin.xin_constant(xi, zvar, budget)
    h = _xin.xin_nonneg(xi, zvar, budget)
    return normalize(eval_at(h, zvar, 1))


# ---------------------------------------------------------------------------
# Euler counting and enumeration


def _check_euler_hypothesis(sys):
    for c in sys.constraints:
        if c.relation is not Relation.EQ:
            raise HypothesisViolated("Euler counting requires equations only")
        if any(a < 0 for a in c.coeffs.values()):
            raise HypothesisViolated("Euler counting requires nonnegative coefficients")
    for v in sys.variables:
        if not any(c.coeffs.get(v, 0) > 0 for c in sys.constraints):
            raise HypothesisViolated(
                "variable %s has no positive coefficient in any row" % v
            )


def euler_count(sys, rhs):
    """Number of nonnegative solutions of the all-equation system with the
    given right-hand sides, read off a truncated product expansion."""
    poly = _euler_tag_polynomial(sys, rhs, tags=False)
    return int(poly.constant_value())


def euler_solutions(sys, rhs):
    """The solutions themselves, as the exponents of the tag-variable
    polynomial sitting at the target coefficient."""
    poly = _euler_tag_polynomial(sys, rhs, tags=True)
    out = []
    for ev, coeff in poly.terms.items():
        if coeff != 1:
            raise HypothesisViolated("tag polynomial has a non-unit coefficient")
        out.append(ev)
    return sorted(out, key=lambda e: e.sort_key())


def _euler_tag_polynomial(sys, rhs, tags):
    _check_euler_hypothesis(sys)
    if len(rhs) != len(sys.constraints):
        raise ValueError("need one right-hand side per equation")
    if any(b < 0 for b in rhs):
        raise ValueError("right-hand sides must be nonnegative")
    rowvars = [fresh_name("b%d" % (i + 1), set(sys.variables)) for i in range(len(rhs))]
    factors = []
    for j, v in enumerate(sys.variables):
        mono = {rowvars[i]: c.coeffs.get(v, 0) for i, c in enumerate(sys.constraints)}
        if tags:
            mono[v] = 1
        factors.append(BinomialFactor(ExponentVector(mono)))
    series = NiceRational(LaurentPolynomial.one(), factors)
    bound = sum(rhs)
    expansion = expand_truncated(series, set(rowvars), bound)
    target = {rowvars[i]: rhs[i] for i in range(len(rhs))}
    acc = {}
    for ev, coeff in expansion.terms.items():
        if all(ev.get(rv) == target[rv] for rv in rowvars):
            rest = ev.restrict(set(sys.variables))
            acc[rest] = acc.get(rest, 0) + coeff
    return LaurentPolynomial(acc)


def weight_substitution(series, weights, tracker):
    """Attach tracker^weight to each variable so the tracker degree grades
    solutions by total weight."""
    if tracker in series.variables():
        raise ValueError("tracker variable %r already occurs in the series" % tracker)
    mapping = {
        v: ExponentVector(((v, 1), (tracker, w))) for v, w in weights.items() if w
    }
    if not mapping:
        return series
    return substitute_monomial(series, mapping)
