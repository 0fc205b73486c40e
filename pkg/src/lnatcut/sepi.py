"""Shifted extremal polymatroid inequalities (SEPIs) for epigraphs of
midpoint-convex integer functions: construction, exact greedy separation,
validity and facet certificates, full hull assembly on a finite working
box, and a cutting-plane minimizer built on top of the separation routine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Optional, Sequence

from .core import (
    DiscreteBox,
    IntVector,
    LinearInequality,
    Permutation,
    RatVector,
    ZERO,
    affine_rank,
    canonicalize,
    descending_order,
    enumerate_lattice,
    unit_hypercube,
)
from .errors import (
    BoxTooLargeError,
    DomainMismatchError,
    InfeasibleExtrasError,
    LnatcutError,
    PointNotInInnerBoxError,
    PointOutsideBoxError,
    UnboundedBoxError,
    UnboundedObjectiveError,
)
from .fnzoo import FunctionOracle
from .lp import INFEASIBLE, UNBOUNDED, minimize_rows


@dataclass(frozen=True)
class SepiCertificate:
    """A separation outcome: the anchored inequality plus its violation at
    the queried point (nonpositive means no inequality of the family cuts
    the point off)."""

    p: IntVector
    delta: Permutation
    inequality: LinearInequality
    violation: Fraction


@dataclass(frozen=True)
class FacetCertificate:
    """Tightness and affine-independence evidence for one inequality.

    ``points`` are the epigraph points on the chain from the anchor; the
    lifted point sits strictly above the face and completes the affine
    rank computation.
    """

    points: tuple[tuple, ...]
    lifted: tuple
    tight: bool
    rank: int
    rank_check: bool


@dataclass(frozen=True)
class ValidityResult:
    valid: bool
    witness: Optional[IntVector] = None

    def __bool__(self) -> bool:
        return self.valid


@dataclass(frozen=True)
class MinimizeResult:
    optimum: Fraction
    argmin: RatVector  # (x..., w)
    cut_count: int
    iterations: int


def _require_anchor(box: DiscreteBox, p: IntVector) -> None:
    if not (box.contains(p) and box.contains(tuple(v + 1 for v in p))):
        raise PointNotInInnerBoxError(f"{p} and {tuple(v + 1 for v in p)} must lie in the box")


def chain_points(p: IntVector, delta: Permutation) -> list[IntVector]:
    """The n+1 lattice points p = p^0, p^1, ..., p^n = p + 1 climbing one
    coordinate at a time in the order given by ``delta``."""
    points = [tuple(p)]
    current = list(p)
    for i in range(len(p)):
        current[delta(i)] += 1
        points.append(tuple(current))
    return points


def build_sepi(
    f: FunctionOracle, p: Sequence[int], delta: Permutation
) -> LinearInequality:
    """The greedy supporting inequality anchored at the unit cube of ``p``.

    Coefficients are the function increments along the chain ordered by
    ``delta``; the inequality reads ``w >= f(p) + sum_i s_i (x_i - p_i)``.
    """
    pt = tuple(int(v) for v in p)
    _require_anchor(f.box, pt)
    n = f.n
    chain = chain_points(pt, delta)
    values = [f(z) for z in chain]
    s = [ZERO] * n
    for i in range(n):
        s[delta(i)] = values[i + 1] - values[i]
    const = values[0] - sum((s[j] * pt[j] for j in range(n)), ZERO)
    return LinearInequality(Fraction(1), (), tuple(s), const)


def greedy_anchor(
    box: DiscreteBox, x_hat: Sequence[Fraction]
) -> tuple[IntVector, Permutation]:
    """Anchor point and ordering for a fractional query point.

    Each coordinate takes its floor, except exactly-at-upper-bound
    coordinates which step down one so the unit cube still fits; the
    ordering sorts the residuals descending with ascending-index ties.
    """
    xv = tuple(Fraction(v) for v in x_hat)
    if not box.contains_relaxed(xv):
        raise PointOutsideBoxError(f"{xv} outside the relaxed box")
    p = []
    for v, up in zip(xv, box.upper):
        if up is not None and v == up:
            p.append(int(v) - 1)
        else:
            p.append(math.floor(v))
    anchor = tuple(p)
    residual = tuple(v - a for v, a in zip(xv, anchor))
    return anchor, descending_order(residual)


def convex_weights(
    p: IntVector, delta: Permutation, x_hat: Sequence[Fraction]
) -> RatVector:
    """Convex-combination weights writing ``x_hat`` over the chain points.

    lambda_0 pairs with p itself, lambda_n with p + 1; all weights are
    nonnegative and sum to one whenever (p, delta) came from
    :func:`greedy_anchor`.
    """
    n = len(p)
    r = [Fraction(x_hat[delta(i)]) - p[delta(i)] for i in range(n)]
    lambdas = [Fraction(1) - r[0]]
    lambdas += [r[i] - r[i + 1] for i in range(n - 1)]
    lambdas.append(r[n - 1])
    return tuple(lambdas)


def separate_fractional_greedy(
    f: FunctionOracle,
    x_hat: Sequence[Fraction],
    w_hat: Fraction,
    box: Optional[DiscreteBox] = None,
) -> SepiCertificate:
    """Most violated inequality of the family at ``(x_hat, w_hat)``.

    A nonpositive violation certifies that no inequality of the family
    separates the point.  ``box`` overrides the oracle's own domain when
    separating over a working box.
    """
    domain = box if box is not None else f.box
    anchor, delta = greedy_anchor(domain, x_hat)
    ineq = build_sepi(f, anchor, delta)
    violation = ineq.rhs_at(x_hat) - Fraction(w_hat)
    return SepiCertificate(anchor, delta, ineq, violation)


def verify_validity(
    f: FunctionOracle, ineq: LinearInequality, box: DiscreteBox
) -> ValidityResult:
    """Does the inequality hold at (x, f(x)) for every lattice x in the box?"""
    if not box.is_finite:
        raise UnboundedBoxError("validity check needs a finite box")
    for x in enumerate_lattice(box):
        if ineq.slack(f(x), x) < 0:
            return ValidityResult(False, x)
    return ValidityResult(True)


def facet_certificate(
    f: FunctionOracle, p: Sequence[int], delta: Permutation
) -> FacetCertificate:
    """Chain points plus one lifted point: all chain points must be tight
    on the inequality and the n+2 points affinely independent (affine rank
    n+1), which is exactly the facet condition for the full-dimensional
    epigraph."""
    pt = tuple(int(v) for v in p)
    _require_anchor(f.box, pt)
    ineq = build_sepi(f, pt, delta)
    n = f.n
    chain = chain_points(pt, delta)
    points = tuple((*z, f(z)) for z in chain)
    lifted = (*pt, f(pt) + 1)
    tight = all(ineq.slack(f(z), z) == 0 for z in chain)
    strict = ineq.slack(f(pt) + 1, pt) > 0
    rank = affine_rank([tuple(map(Fraction, q)) for q in (*points, lifted)])
    return FacetCertificate(points, lifted, tight and strict, rank, rank == n + 1)


def assemble_hull_lp(
    f: FunctionOracle,
    workbox: DiscreteBox,
    budget: int = 250_000,
) -> list[LinearInequality]:
    """All distinct inequalities anchored in the working box, plus bounds.

    Duplicates (the same halfspace reached from different anchors or
    orderings) are removed via canonical forms.  The guard trips when
    |anchors| * n! exceeds ``budget``.
    """
    if not workbox.is_finite:
        raise UnboundedBoxError("hull assembly needs a finite working box")
    _check_domain(f, workbox)
    inner = workbox.inner()
    n = workbox.n
    combos = inner.point_count() * math.factorial(n)
    if combos > budget:
        raise BoxTooLargeError(
            f"{combos} anchor/order pairs exceed the budget {budget}"
        )
    seen: set[tuple[int, ...]] = set()
    cuts: list[LinearInequality] = []
    for p in enumerate_lattice(inner):
        for order in permutations(range(n)):
            ineq = build_sepi(f, p, Permutation(order))
            key = ineq.canonical_key()
            if key not in seen:
                seen.add(key)
                cuts.append(ineq)
    cuts.extend(box_bound_inequalities(workbox))
    return cuts


def box_bound_inequalities(box: DiscreteBox) -> list[LinearInequality]:
    """``x_i >= lo`` and ``x_i <= up`` encoded in the shared container."""
    out = []
    n = box.n
    for i, (lo, up) in enumerate(zip(box.lower, box.upper)):
        if lo is not None:
            # x_i >= lo  <=>  0 >= -x_i + lo
            rhs = [ZERO] * n
            rhs[i] = Fraction(-1)
            out.append(LinearInequality(ZERO, (), tuple(rhs), Fraction(lo)))
        if up is not None:
            # x_i <= up  <=>  0 >= x_i - up
            rhs = [ZERO] * n
            rhs[i] = Fraction(1)
            out.append(LinearInequality(ZERO, (), tuple(rhs), Fraction(-up)))
    return out


def _check_domain(f: FunctionOracle, workbox: DiscreteBox) -> None:
    for lo, up, flo, fup in zip(
        workbox.lower, workbox.upper, f.box.lower, f.box.upper
    ):
        if flo is not None and (lo is None or lo < flo):
            raise DomainMismatchError("workbox extends below the oracle domain")
        if fup is not None and (up is None or up > fup):
            raise DomainMismatchError("workbox extends above the oracle domain")


def _ineq_to_row(
    ineq: LinearInequality, n: int
) -> tuple[tuple[Fraction, ...], Fraction]:
    """Row over variables (x_1..x_n, w): lhs - rhs_x >= rhs_const."""
    if ineq.lhs_y:
        raise DomainMismatchError("pure-integer row cannot carry y terms")
    return ((*(-c for c in ineq.rhs_x), ineq.lhs_w), ineq.rhs_const)


def minimize_cutting_plane(
    f: FunctionOracle,
    workbox: DiscreteBox,
    objective: Sequence[Fraction],
    extras: Sequence[LinearInequality] = (),
) -> MinimizeResult:
    """Cutting-plane minimization of ``objective . (x, w)`` over the
    epigraph restricted to the working box.

    Starts from two anchored cuts that bound w below, then alternates LP
    solves with exact greedy separation until the LP point violates
    nothing.  With empty extras and objective (0,..,0,1) this computes the
    exact minimum of f over the box; side constraints relax the answer to
    the LP bound over the cut polyhedron (integrality of x is not branched
    on).
    """
    if not workbox.is_finite:
        raise UnboundedBoxError("minimization needs a finite working box")
    _check_domain(f, workbox)
    n = workbox.n
    obj = tuple(Fraction(v) for v in objective)
    if len(obj) != n + 1:
        raise DomainMismatchError("objective must cover (x_1..x_n, w)")
    if obj[-1] < 0:
        raise UnboundedObjectiveError(
            "negative w coefficient is unbounded along the vertical ray"
        )

    inner = workbox.inner()
    lower_anchor = tuple(inner.lower)  # type: ignore[arg-type]
    upper_anchor = tuple(inner.upper)  # type: ignore[arg-type]
    seen: set[tuple[int, ...]] = set()
    pool: list[LinearInequality] = []
    anchors = [lower_anchor] + ([upper_anchor] if upper_anchor != lower_anchor else [])
    for anchor in anchors:
        ineq = build_sepi(f, anchor, Permutation.identity(n))
        key = ineq.canonical_key()
        if key not in seen:
            seen.add(key)
            pool.append(ineq)

    static_rows = [
        _ineq_to_row(b, n) for b in box_bound_inequalities(workbox)
    ] + [_ineq_to_row(e, n) for e in extras]

    iterations = 0
    while True:
        iterations += 1
        rows = [_ineq_to_row(c, n) for c in pool] + static_rows
        result = minimize_rows(obj, rows)
        if result.status == INFEASIBLE:
            raise InfeasibleExtrasError("side constraints empty the relaxation")
        if result.status == UNBOUNDED:
            raise UnboundedObjectiveError("objective unbounded over the relaxation")
        assert result.point is not None
        x_hat, w_hat = result.point[:n], result.point[n]
        cert = separate_fractional_greedy(f, x_hat, w_hat, box=workbox)
        if cert.violation <= 0:
            return MinimizeResult(
                result.value, result.point, len(pool), iterations
            )
        key = cert.inequality.canonical_key()
        if key in seen:
            raise LnatcutError("separator returned an already-pooled cut")
        seen.add(key)
        pool.append(cert.inequality)
