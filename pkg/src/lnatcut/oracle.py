"""Brute-force ground truth.

Enumerated hull models, LP-based separation optima and closed-form
mixed-integer minimization; deliberately naive, budget-guarded, and
sharing no code with the fast paths they validate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import DiscreteBox, RatVector, ZERO, enumerate_lattice
from .errors import (
    InfeasibleExtrasError,
    LnatcutError,
    UnboundedBoxError,
    UnboundedObjectiveError,
    ValidationError,
)
from .fnzoo import FunctionOracle
from .lp import OPTIMAL, minimize_rows
from .misepi import MixedInstance, generators_D, mixed_rays


@dataclass(frozen=True)
class HullModel:
    """Explicit convex-plus-conic generator description of a hull."""

    generators: tuple[RatVector, ...]
    rays: tuple[RatVector, ...]
    box: DiscreteBox


def epigraph_model(f: FunctionOracle, workbox: DiscreteBox) -> HullModel:
    """Generators (x, f(x)) over the box plus the vertical ray."""
    if not workbox.is_finite:
        raise UnboundedBoxError("hull model needs a finite box")
    gens = tuple(
        (*map(Fraction, x), f(x)) for x in enumerate_lattice(workbox)
    )
    ray = (*(ZERO for _ in range(workbox.n)), Fraction(1))
    return HullModel(gens, (ray,), workbox)


def mixed_epigraph_model(inst: MixedInstance, workbox: DiscreteBox) -> HullModel:
    """Generators (w_j, y_j, x) for every lattice x and component j, plus
    the three recession ray families of the mixed epigraph."""
    if not workbox.is_finite:
        raise UnboundedBoxError("hull model needs a finite box")
    gens = []
    for x in enumerate_lattice(workbox):
        for w_j, y_j in generators_D(inst, x):
            gens.append((w_j, *y_j, *map(Fraction, x)))
    rays = tuple(
        (*ray, *(ZERO for _ in range(workbox.n))) for ray in mixed_rays(inst.n)
    )
    return HullModel(tuple(gens), rays, workbox)


def separation_lp_optimum(
    f: FunctionOracle,
    x_hat: Sequence[Fraction],
    w_hat: Fraction,
    workbox: DiscreteBox,
) -> Fraction:
    """Exact violation of the most violated valid inequality at
    ``(x_hat, w_hat)``: the full separation LP with one constraint per
    lattice point of the box.  Ground truth for the greedy separator."""
    if not workbox.is_finite:
        raise UnboundedBoxError("separation LP needs a finite box")
    n = workbox.n
    xv = tuple(Fraction(v) for v in x_hat)
    # max pi0 + x_hat.pi  s.t.  pi0 + x.pi <= f(x), posed as a row-form min.
    objective = [Fraction(-1)] + [-v for v in xv]
    rows = []
    for x in enumerate_lattice(workbox):
        rows.append(
            ((Fraction(-1), *(-Fraction(v) for v in x)), -f(x))
        )
    result = minimize_rows(objective, rows)
    if result.status != OPTIMAL:
        raise LnatcutError("separation LP must be bounded over the relaxed box")
    return -result.value - Fraction(w_hat)  # type: ignore[operator]


def hull_min(objective: Sequence[Fraction], model: HullModel) -> Fraction:
    """Exact LP minimum over conv(generators) + cone(rays).

    With all ray rates nonnegative the optimum sits on a generator, so the
    LP collapses to an exact minimum over the generator list.
    """
    obj = tuple(Fraction(v) for v in objective)
    for ray in model.rays:
        rate = sum((c * r for c, r in zip(obj, ray)), ZERO)
        if rate < 0:
            raise UnboundedObjectiveError(
                f"objective decreases along recession ray {ray}"
            )
    if not model.generators:
        raise ValidationError("hull model has no generators")
    return min(
        sum((c * g for c, g in zip(obj, gen)), ZERO) for gen in model.generators
    )


def mixed_integer_min(
    inst: MixedInstance,
    objective: tuple[Fraction, RatVector, RatVector],
    workbox: DiscreteBox,
) -> Fraction:
    """Exact minimum of ``c_w w + c_y . y + c_x . x`` over the mixed
    epigraph restricted to lattice x in the box.

    For each x the optimal (w, y) lies on one of the n component
    generators (the uniform-shift ray has nonnegative rate after the
    recession check), so the answer is a finite closed-form scan.
    """
    c_w, c_y, c_x = objective
    c_w = Fraction(c_w)
    c_yv = tuple(Fraction(v) for v in c_y)
    c_xv = tuple(Fraction(v) for v in c_x)
    if not workbox.is_finite:
        raise UnboundedBoxError("mixed-integer minimum needs a finite box")
    if c_w <= 0:
        raise ValidationError("w coefficient must be positive")
    if any(v < 0 for v in c_yv):
        raise ValidationError("y coefficients must be nonnegative")
    if sum(c_yv, ZERO) < c_w:
        raise UnboundedObjectiveError(
            "objective decreases along the (-1, 1, 0) recession ray"
        )
    best = None
    for x in enumerate_lattice(workbox):
        if not inst.box.contains(x):
            raise InfeasibleExtrasError("workbox leaves the instance domain")
        base = sum((c * v for c, v in zip(c_xv, x)), ZERO)
        for w_j, y_j in generators_D(inst, x):
            val = base + c_w * w_j + sum(
                (cy * yv for cy, yv in zip(c_yv, y_j)), ZERO
            )
            if best is None or val < best:
                best = val
    assert best is not None
    return best
