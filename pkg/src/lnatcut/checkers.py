"""Finite-box verifiers for discrete midpoint convexity, lattice and
translation submodularity, L-convexity and integral convexity, plus the two
continuous extensions used to cross-check them.

Every check enumerates all pairs exhaustively (no sampling), so a failing
report always carries a witness that re-evaluates to a strict violation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

from .core import (
    DiscreteBox,
    IntVector,
    Permutation,
    RatVector,
    ZERO,
    descending_order,
    enumerate_lattice,
)
from .errors import (
    BoxTooLargeError,
    DomainMismatchError,
    NoInteriorPairError,
    PointOutsideBoxError,
    UnboundedBoxError,
)
from .fnzoo import FunctionOracle
from .lp import EQ, OPTIMAL, LpProblem

MIDPOINT_CONVEX = "midpoint_convex"
LATTICE_SUBMODULAR = "lattice_submodular"
TRANSLATION_SUBMODULAR = "translation_submodular"
L_CONVEX = "l_convex"
INTEGRALLY_CONVEX = "integrally_convex"

_INTEGRAL_CONVEXITY_GUARD = 5**4


@dataclass(frozen=True)
class Witness:
    """A violating configuration; ``lhs < rhs`` certifies the failure.

    ``kind`` distinguishes pair inequalities from the constant-increment
    test of L-convexity, where the two stored base points have different
    unit-shift increments.
    """

    kind: str
    x: tuple
    y: tuple
    lhs: Fraction
    rhs: Fraction
    alpha: Optional[int] = None


@dataclass(frozen=True)
class CheckReport:
    property: str
    passed: bool
    witness: Optional[Witness] = None
    increment: Optional[Fraction] = None  # the constant r when L-convex


def _require_finite(box: DiscreteBox) -> None:
    if not box.is_finite:
        raise UnboundedBoxError("check requires a finite box")


def is_lnat_convex(f: FunctionOracle, box: DiscreteBox) -> CheckReport:
    """Discrete midpoint convexity over all pairs of the finite box."""
    _require_finite(box)
    points = list(enumerate_lattice(box))
    for x, y in combinations(points, 2):
        up = tuple((a + b + 1) // 2 for a, b in zip(x, y))
        down = tuple((a + b) // 2 for a, b in zip(x, y))
        lhs = f(x) + f(y)
        rhs = f(up) + f(down)
        if lhs < rhs:
            return CheckReport(
                MIDPOINT_CONVEX, False, Witness("midpoint", x, y, lhs, rhs)
            )
    return CheckReport(MIDPOINT_CONVEX, True)


def is_lattice_submodular(f: FunctionOracle, box: DiscreteBox) -> CheckReport:
    _require_finite(box)
    points = list(enumerate_lattice(box))
    for x, y in combinations(points, 2):
        join = tuple(max(a, b) for a, b in zip(x, y))
        meet = tuple(min(a, b) for a, b in zip(x, y))
        lhs = f(x) + f(y)
        rhs = f(join) + f(meet)
        if lhs < rhs:
            return CheckReport(
                LATTICE_SUBMODULAR, False, Witness("lattice", x, y, lhs, rhs)
            )
    return CheckReport(LATTICE_SUBMODULAR, True)


def is_translation_submodular(f: FunctionOracle, box: DiscreteBox) -> CheckReport:
    """Shifted join/meet inequality for every pair and every shift size.

    Shifts beyond the box diameter change nothing (the shifted join/meet
    saturate at y and x), so the enumeration stops there.
    """
    _require_finite(box)
    points = list(enumerate_lattice(box))
    diam = box.diameter()
    for x in points:
        for y in points:
            fx_fy = f(x) + f(y)
            for alpha in range(diam + 1):
                join = tuple(max(a - alpha, b) for a, b in zip(x, y))
                meet = tuple(min(a, b + alpha) for a, b in zip(x, y))
                if not (box.contains(join) and box.contains(meet)):
                    continue
                rhs = f(join) + f(meet)
                if fx_fy < rhs:
                    return CheckReport(
                        TRANSLATION_SUBMODULAR,
                        False,
                        Witness("translation", x, y, fx_fy, rhs, alpha=alpha),
                    )
    return CheckReport(TRANSLATION_SUBMODULAR, True)


def is_l_convex(f: FunctionOracle, box: DiscreteBox) -> CheckReport:
    """Lattice submodular plus a constant increment along the ones vector."""
    _require_finite(box)
    sub = is_lattice_submodular(f, box)
    if not sub.passed:
        return CheckReport(L_CONVEX, False, sub.witness)
    increment: Optional[Fraction] = None
    first_base: Optional[IntVector] = None
    found_pair = False
    for x in enumerate_lattice(box):
        shifted = tuple(v + 1 for v in x)
        if not box.contains(shifted):
            continue
        found_pair = True
        r = f(shifted) - f(x)
        if increment is None:
            increment = r
            first_base = x
        elif r != increment:
            return CheckReport(
                L_CONVEX,
                False,
                Witness("increment", first_base, x, increment, r),
            )
    if not found_pair:
        raise NoInteriorPairError("no x with x+1 inside the box")
    return CheckReport(L_CONVEX, True, increment=increment)


def continuous_extension(
    f: FunctionOracle, box: DiscreteBox, y: Sequence[Fraction]
) -> Fraction:
    """Value of the local convex extension at ``y``.

    Minimizes the convex-combination value over the integer neighbors that
    differ from y by strictly less than one in every coordinate, solved as
    an exact LP.
    """
    _require_finite(box)
    yv: RatVector = tuple(Fraction(v) for v in y)
    if not box.contains_relaxed(yv):
        raise PointOutsideBoxError(f"{yv} outside the relaxed box")
    axes = []
    for v in yv:
        if v.denominator == 1:
            axes.append((int(v),))
        else:
            axes.append((math.floor(v), math.ceil(v)))
    neighbors = list(product(*axes))
    prob = LpProblem(
        objective=[f(z) for z in neighbors],
        sense="min",
        bounds=[(0, None)] * len(neighbors),
    )
    for k in range(box.n):
        prob.add_row([Fraction(z[k]) for z in neighbors], EQ, yv[k])
    prob.add_row([Fraction(1)] * len(neighbors), EQ, Fraction(1))
    sol = prob.solve()
    if sol.status != OPTIMAL:
        raise PointOutsideBoxError("no convex combination of neighbors reaches y")
    return sol.objective  # type: ignore[return-value]


def lovasz_extension(f: FunctionOracle, y: Sequence[Fraction]) -> Fraction:
    """Greedy piecewise-linear extension on a (possibly shifted) unit cube.

    Sorts the fractional parts descending (ties by ascending index) and
    telescopes the function increments along the resulting chain.
    """
    box = f.box
    if not box.is_finite or any(
        up - lo != 1 for lo, up in zip(box.lower, box.upper)  # type: ignore[operator]
    ):
        raise DomainMismatchError("oracle domain must be a unit hypercube")
    yv: RatVector = tuple(Fraction(v) for v in y)
    if not box.contains_relaxed(yv):
        raise DomainMismatchError(f"{yv} outside the cube")
    base: IntVector = tuple(box.lower)  # type: ignore[arg-type]
    residual = tuple(v - b for v, b in zip(yv, base))
    order: Permutation = descending_order(residual)
    value = f(base)
    current = list(base)
    for i in range(box.n):
        coord = order(i)
        prev_val = f(tuple(current))
        current[coord] += 1
        value += (f(tuple(current)) - prev_val) * residual[coord]
    return value


def is_integrally_convex(f: FunctionOracle, box: DiscreteBox) -> CheckReport:
    """Midpoint convexity of the continuous extension on all lattice pairs.

    This samples the extension only at half-integer midpoints, so it is a
    sound-on-this-grid proxy: a reported witness is a genuine violation of
    convexity, while a pass certifies convexity on the sampled grid only.
    """
    _require_finite(box)
    if box.point_count() > _INTEGRAL_CONVEXITY_GUARD:
        raise BoxTooLargeError(
            f"box has more than {_INTEGRAL_CONVEXITY_GUARD} points"
        )
    points = list(enumerate_lattice(box))
    cache: dict[RatVector, Fraction] = {}
    for a, b in combinations(points, 2):
        mid = tuple(Fraction(p + q, 2) for p, q in zip(a, b))
        val = cache.get(mid)
        if val is None:
            val = continuous_extension(f, box, mid)
            cache[mid] = val
        avg = Fraction(f(a) + f(b), 2)
        if val > avg:
            return CheckReport(
                INTEGRALLY_CONVEX, False, Witness("midpoint", a, b, avg, val)
            )
    return CheckReport(INTEGRALLY_CONVEX, True)
