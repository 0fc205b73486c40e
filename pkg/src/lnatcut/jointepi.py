"""Joint epigraphs of several midpoint-convex functions on common integer
variables, and the linked variant where all upper-bound pairs must keep a
common difference.

The structural fact exploited throughout: one greedy anchor works for all
functions at once, because the anchor depends only on the queried integer
point.  Membership in the joint hull therefore factors into per-function
epigraph membership (plus the link equalities).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .core import DiscreteBox, IntVector, RatVector, ZERO, enumerate_lattice
from .errors import (
    PointOutsideBoxError,
    UnboundedBoxError,
    ValidationError,
)
from .fnzoo import FunctionOracle
from .lp import membership
from .sepi import SepiCertificate, build_sepi, greedy_anchor


@dataclass(frozen=True)
class JointInstance:
    """k functions (optionally paired with k more for the linked variant)
    on one common box."""

    fs: tuple[FunctionOracle, ...]
    gs: Optional[tuple[FunctionOracle, ...]] = None

    def __post_init__(self) -> None:
        if not self.fs:
            raise ValidationError("need at least one function")
        box = self.fs[0].box
        if any(f.box != box for f in self.fs):
            raise ValidationError("functions must share one box")
        if self.gs is not None:
            if len(self.gs) != len(self.fs):
                raise ValidationError("paired lists must have equal length")
            if any(g.box != box for g in self.gs):
                raise ValidationError("paired functions must share the box")

    @property
    def k(self) -> int:
        return len(self.fs)

    @property
    def box(self) -> DiscreteBox:
        return self.fs[0].box

    @property
    def linked(self) -> bool:
        return self.gs is not None


@dataclass(frozen=True)
class LinkReport:
    linked: bool
    witness: Optional[IntVector] = None

    def __bool__(self) -> bool:
        return self.linked


def verify_linked(
    inst: JointInstance, box: Optional[DiscreteBox] = None
) -> LinkReport:
    """Is g_i - f_i the same function of x for every i?  Pointwise over
    the finite box; the witness is the first point where two pairs have
    different differences."""
    if inst.gs is None:
        raise ValidationError("instance has no paired functions")
    domain = box if box is not None else inst.box
    if not domain.is_finite:
        raise UnboundedBoxError("link check needs a finite box")
    for x in enumerate_lattice(domain):
        base = inst.gs[0](x) - inst.fs[0](x)
        for f, g in zip(inst.fs[1:], inst.gs[1:]):
            if g(x) - f(x) != base:
                return LinkReport(False, x)
    return LinkReport(True)


def separate_joint(
    inst: JointInstance,
    w: Sequence[Fraction],
    x_hat: Sequence[Fraction],
    box: Optional[DiscreteBox] = None,
) -> list[SepiCertificate]:
    """One anchoring pass, one inequality per function; returns those with
    positive violation against the matching epigraph variable."""
    if len(w) != inst.k:
        raise ValidationError("w must have one entry per function")
    domain = box if box is not None else inst.box
    xv = tuple(Fraction(v) for v in x_hat)
    if not domain.contains_relaxed(xv):
        raise PointOutsideBoxError(f"{xv} outside the relaxed box")
    anchor, delta = greedy_anchor(domain, xv)
    cuts = []
    for f, wi in zip(inst.fs, w):
        ineq = build_sepi(f, anchor, delta)
        violation = ineq.rhs_at(xv) - Fraction(wi)
        if violation > 0:
            cuts.append(SepiCertificate(anchor, delta, ineq, violation))
    return cuts


def _epigraph_membership(
    f: FunctionOracle, w: Fraction, x_hat: RatVector, workbox: DiscreteBox
) -> bool:
    gens = [(f(x), *map(Fraction, x)) for x in enumerate_lattice(workbox)]
    ray = (Fraction(1), *(ZERO,) * workbox.n)
    return membership((Fraction(w), *x_hat), gens, [ray])


def joint_hull_membership(
    inst: JointInstance,
    point: tuple,
    workbox: DiscreteBox,
) -> bool:
    """Membership in the intersection of per-function epigraph hulls.

    ``point`` is (w, x) for the plain variant and (eta, w, x) for the
    linked one, where the link equalities are checked directly.
    """
    if not workbox.is_finite:
        raise UnboundedBoxError("membership needs a finite working box")
    if inst.linked:
        eta, w, x_hat = point
        eta = tuple(Fraction(v) for v in eta)
        w = tuple(Fraction(v) for v in w)
        xv = tuple(Fraction(v) for v in x_hat)
        if len(eta) != inst.k or len(w) != inst.k:
            raise ValidationError("eta and w must have one entry per function")
        diffs = {e - v for e, v in zip(eta, w)}
        if len(diffs) != 1:
            return False
        assert inst.gs is not None
        for g, e in zip(inst.gs, eta):
            if not _epigraph_membership(g, e, xv, workbox):
                return False
        for f, v in zip(inst.fs, w):
            if not _epigraph_membership(f, v, xv, workbox):
                return False
        return True
    w, x_hat = point
    w = tuple(Fraction(v) for v in w)
    xv = tuple(Fraction(v) for v in x_hat)
    if len(w) != inst.k:
        raise ValidationError("w must have one entry per function")
    return all(
        _epigraph_membership(f, v, xv, workbox) for f, v in zip(inst.fs, w)
    )


def joint_generators(
    inst: JointInstance, workbox: DiscreteBox
) -> tuple[list[RatVector], list[RatVector]]:
    """Explicit generator/ray description of the joint hull over the box,
    used as the independent membership oracle.

    Plain variant: points ([f_i(x)]_i, x) with one upward ray per epigraph
    variable.  Linked variant: points ([g_i(x)]_i, [f_i(x)]_i, x); the
    recession cone preserving the link equalities is generated by the
    paired unit rays (e_i, e_i, 0) together with the two uniform rays
    (1, 0, 0) and (0, 1, 0).
    """
    if not workbox.is_finite:
        raise UnboundedBoxError("generator enumeration needs a finite box")
    k, n = inst.k, workbox.n
    gens: list[RatVector] = []
    rays: list[RatVector] = []
    if not inst.linked:
        for x in enumerate_lattice(workbox):
            gens.append(
                (*(f(x) for f in inst.fs), *map(Fraction, x))
            )
        for i in range(k):
            ray = [ZERO] * (k + n)
            ray[i] = Fraction(1)
            rays.append(tuple(ray))
        return gens, rays
    assert inst.gs is not None
    for x in enumerate_lattice(workbox):
        gens.append(
            (
                *(g(x) for g in inst.gs),
                *(f(x) for f in inst.fs),
                *map(Fraction, x),
            )
        )
    for i in range(k):
        ray = [ZERO] * (2 * k + n)
        ray[i] = Fraction(1)
        ray[k + i] = Fraction(1)
        rays.append(tuple(ray))
    rays.append((*(Fraction(1),) * k, *(ZERO,) * (k + n)))
    rays.append((*(ZERO,) * k, *(Fraction(1),) * k, *(ZERO,) * n))
    return gens, rays
