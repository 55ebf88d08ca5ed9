"""Independent ground truth: direct enumeration of solutions over a box and
cross-validation of series and bases.  Deliberately engine-free - nothing
here touches the rewriting or partial-fraction machinery, only constraint
evaluation and series expansion."""
from __future__ import annotations

from itertools import product

from .polyring import expand_truncated


class EnumerationReport:
    """Result of a cross-check: the enumerated solutions, the bound used,
    and any disagreements as (point, expected_in, actually_in) triples."""

    __slots__ = ("solutions", "bound", "mismatches")

    def __init__(self, solutions, bound, mismatches):
        self.solutions = solutions
        self.bound = bound
        self.mismatches = mismatches

    def clean(self):
        return not self.mismatches

    def render(self):
        lines = ["solutions: %d (bound %d)" % (len(self.solutions), self.bound)]
        if not self.mismatches:
            lines.append("mismatches: none")
        else:
            lines.append("mismatches: %d" % len(self.mismatches))
            for point, expected, actual in self.mismatches:
                lines.append(
                    "  %s expected_in=%s actually_in=%s" % (point, expected, actual)
                )
        return "\n".join(lines)

    def to_machine(self):
        return {
            "solutions": [list(s) for s in self.solutions],
            "bound": self.bound,
            "mismatches": [
                {"point": list(p), "expected_in": e, "actually_in": a}
                for p, e, a in self.mismatches
            ],
        }


def brute_solutions(sys, bound):
    """All points of [0, bound]^k satisfying every constraint, in canonical
    (degree, tuple) order."""
    if bound < 0:
        raise ValueError("bound must be nonnegative")
    out = []
    variables = sys.variables
    if sys.infeasible:
        return out
    for point in product(range(bound + 1), repeat=len(variables)):
        assignment = dict(zip(variables, point))
        if sys.satisfied_by(assignment):
            out.append(point)
    return sorted(out, key=lambda t: (sum(t), t))


def check_series(series, sys, degree_bound):
    """Compare the truncated expansion of a characteristic series with brute
    force over the same total-degree ball; coefficients other than one are
    mismatches too."""
    brute = {
        p for p in brute_solutions(sys, degree_bound) if sum(p) <= degree_bound
    }
    variables = sys.variables
    if series.is_zero():
        support = {}
    else:
        expansion = expand_truncated(series, set(variables), degree_bound)
        support = {
            ev.as_tuple(variables): coeff for ev, coeff in expansion.terms.items()
        }
    mismatches = []
    for point, coeff in sorted(support.items(), key=lambda t: (sum(t[0]), t[0])):
        if coeff != 1:
            mismatches.append((point, point in brute, "coefficient %s" % coeff))
        elif point not in brute:
            mismatches.append((point, False, True))
    for point in sorted(brute, key=lambda t: (sum(t), t)):
        if point not in support:
            mismatches.append((point, True, False))
    return EnumerationReport(sorted(brute, key=lambda t: (sum(t), t)), degree_bound, mismatches)


def check_basis(basis, sys, bound, max_depth=None):
    """Verify a claimed generating set of a homogeneous system: membership of
    every generator, decomposability of every brute-force solution in the
    box, and (for all-equation systems) the antichain property.

    max_depth caps the subtraction search; None means the natural bound (the
    coordinate sum, since every generator removes at least one)."""
    if not sys.is_homogeneous():
        raise ValueError("check_basis needs a homogeneous system")
    variables = sys.variables
    gens = [m.as_tuple(variables) for m in basis.minimal]
    mismatches = []
    for g in gens:
        if not sys.satisfied_by(dict(zip(variables, g))):
            mismatches.append((g, False, True))
    all_equations = all(c.relation.value == "eq" for c in sys.constraints)
    if all_equations:
        for i, g in enumerate(gens):
            for h in gens[i + 1 :]:
                if _leq(g, h) or _leq(h, g):
                    mismatches.append((h, "antichain", "comparable to %s" % (g,)))
    solutions = brute_solutions(sys, bound)
    memo = {}
    for point in solutions:
        if not any(point):
            continue
        depth = max_depth if max_depth is not None else sum(point)
        if not _decomposes(point, gens, memo, depth):
            mismatches.append((point, True, False))
    return EnumerationReport(solutions, bound, mismatches)


def _leq(a, b):
    return all(x <= y for x, y in zip(a, b))


def _decomposes(point, gens, memo, depth):
    if all(x == 0 for x in point):
        return True
    if depth <= 0:
        return False
    if point in memo:
        return memo[point]
    memo[point] = False
    for g in gens:
        if any(g) and _leq(g, point):
            rest = tuple(x - y for x, y in zip(point, g))
            if _decomposes(rest, gens, memo, depth - 1):
                memo[point] = True
                break
    return memo[point]
