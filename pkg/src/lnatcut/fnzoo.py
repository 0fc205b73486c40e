"""Constructors for function oracles with known discrete-convexity status.

These are the test fixtures of the whole package and the instance
vocabulary of the CLI: generalized integer mixing residual functions,
max-component, convex functions of a coordinate difference, M-matrix
quadratics, a two-piece affine max, and the closure combinators (positive
scaling, integer dilation, sums).

Structural preconditions are verified eagerly at construction; a fixture
that silently failed its claimed class would poison every downstream
property test.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Optional, Sequence

from .core import (
    DiscreteBox,
    IntVector,
    RationalLike,
    RatVector,
    ZERO,
    enumerate_lattice,
)
from .errors import (
    BadStructureError,
    DomainMismatchError,
    NotDiscretelyConvexError,
    NotMMatrixError,
    ValidationError,
)


@dataclass(frozen=True, eq=False)
class FunctionOracle:
    """An evaluable map from lattice points of ``box`` to exact rationals.

    ``tag`` names the structural family; ``params`` holds the construction
    data so instances can be serialized.  Evaluation is pure and memoized,
    hence safe to share between workers.
    """

    box: DiscreteBox
    fn: Callable[[IntVector], Fraction]
    tag: str
    params: dict = field(default_factory=dict)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, x: Sequence[int]) -> Fraction:
        key = tuple(x)
        hit = self._cache.get(key)
        if hit is None:
            hit = Fraction(self.fn(key))
            self._cache[key] = hit
        return hit

    @property
    def n(self) -> int:
        return self.box.n


def _unbounded_box(n: int) -> DiscreteBox:
    return DiscreteBox((None,) * n, (None,) * n)


def make_tabulated(
    box: DiscreteBox, values: Mapping[IntVector, RationalLike]
) -> FunctionOracle:
    """Oracle backed by an explicit table over a finite box."""
    table = {tuple(k): Fraction(v) for k, v in values.items()}
    for point in enumerate_lattice(box):
        if point not in table:
            raise ValidationError(f"table missing value at {point}")
    return FunctionOracle(box, lambda x: table[x], "tabulated", {"values": table})


def make_gen_int_mixing(q: Sequence[RationalLike]) -> FunctionOracle:
    """``max(0, max_i(q_i - x_i))`` on the whole integer lattice."""
    qv: RatVector = tuple(Fraction(v) for v in q)
    if not qv:
        raise ValidationError("q must be nonempty")

    def fn(x: IntVector) -> Fraction:
        return max(max(qi - xi for qi, xi in zip(qv, x)), ZERO)

    return FunctionOracle(_unbounded_box(len(qv)), fn, "gen_int_mixing", {"q": qv})


def make_max_component(n: int, box: Optional[DiscreteBox] = None) -> FunctionOracle:
    """``max_i x_i``; constant increment 1 along the all-ones direction."""
    if box is None:
        box = _unbounded_box(n)
    if box.n != n:
        raise DomainMismatchError("box dimension mismatch")
    return FunctionOracle(box, lambda x: Fraction(max(x)), "max_component", {})


def make_bivariate_diff(
    table: Mapping[int, RationalLike], box: DiscreteBox
) -> FunctionOracle:
    """``g(x) = f(x1 - x2)`` for a discretely convex univariate table.

    The table must cover a contiguous integer range containing every
    difference ``x1 - x2`` attainable inside ``box``, and must satisfy
    ``f(t-1) + f(t+1) >= 2 f(t)`` on its interior.
    """
    vals = {int(t): Fraction(v) for t, v in table.items()}
    ts = sorted(vals)
    if ts != list(range(ts[0], ts[-1] + 1)):
        raise ValidationError("table domain must be a contiguous integer range")
    for t in ts[1:-1]:
        if vals[t - 1] + vals[t + 1] < 2 * vals[t]:
            raise NotDiscretelyConvexError(f"table not convex at t={t}")
    if box.n != 2:
        raise DomainMismatchError("difference oracle needs a 2-dimensional box")
    if not box.is_finite:
        raise DomainMismatchError("difference oracle needs a finite box")
    lo = box.lower[0] - box.upper[1]  # type: ignore[operator]
    hi = box.upper[0] - box.lower[1]  # type: ignore[operator]
    if lo < ts[0] or hi > ts[-1]:
        raise ValidationError(
            f"box differences span [{lo},{hi}] outside table range [{ts[0]},{ts[-1]}]"
        )
    return FunctionOracle(
        box, lambda x: vals[x[0] - x[1]], "bivariate_convex_diff", {"table": vals}
    )


def make_quadratic(
    Q: Sequence[Sequence[RationalLike]],
    b: Sequence[RationalLike],
    box: DiscreteBox,
) -> FunctionOracle:
    """``x^T Q x + b^T x`` for a symmetric diagonally dominant M-matrix Q."""
    qm = [tuple(Fraction(v) for v in row) for row in Q]
    bv = tuple(Fraction(v) for v in b)
    n = len(qm)
    if n != box.n or len(bv) != n or any(len(row) != n for row in qm):
        raise DomainMismatchError("Q/b/box dimensions disagree")
    for i in range(n):
        for j in range(n):
            if qm[i][j] != qm[j][i]:
                raise NotMMatrixError("Q is not symmetric")
            if i != j and qm[i][j] > 0:
                raise NotMMatrixError("positive off-diagonal entry")
        if qm[i][i] < sum(abs(qm[i][j]) for j in range(n) if j != i):
            raise NotMMatrixError(f"row {i} not diagonally dominant")

    def fn(x: IntVector) -> Fraction:
        quad = sum(
            qm[i][j] * x[i] * x[j] for i in range(n) for j in range(n)
        )
        return quad + sum((bv[i] * x[i] for i in range(n)), ZERO)

    return FunctionOracle(box, fn, "quadratic_mmatrix", {"Q": qm, "b": bv})


def make_nonconvex_demo() -> FunctionOracle:
    """``10 x1^2 - x2^2`` on [0,2] x [0,1]: nonconvex over the reals yet
    midpoint-convex on this box."""
    box = DiscreteBox((0, 0), (2, 1))
    return FunctionOracle(
        box, lambda x: Fraction(10 * x[0] * x[0] - x[1] * x[1]), "nonconvex_demo", {}
    )


def make_max_affine_pair(
    a: Sequence[RationalLike],
    a0: RationalLike,
    b: Sequence[RationalLike],
    b0: RationalLike,
    box: DiscreteBox,
) -> FunctionOracle:
    """``max(a.x + a0, b.x + b0)`` where a - b has at most one positive and
    one negative entry (the pattern that makes the max lattice submodular)."""
    av = tuple(Fraction(v) for v in a)
    bv = tuple(Fraction(v) for v in b)
    if len(av) != box.n or len(bv) != box.n:
        raise DomainMismatchError("slope dimension mismatch")
    diff = [ai - bi for ai, bi in zip(av, bv)]
    if sum(1 for d in diff if d > 0) > 1 or sum(1 for d in diff if d < 0) > 1:
        raise BadStructureError(
            "a - b must be alpha*e_i - beta*e_j with alpha, beta >= 0"
        )
    a0f, b0f = Fraction(a0), Fraction(b0)

    def fn(x: IntVector) -> Fraction:
        va = sum((ai * xi for ai, xi in zip(av, x)), a0f)
        vb = sum((bi * xi for bi, xi in zip(bv, x)), b0f)
        return max(va, vb)

    return FunctionOracle(
        box, fn, "affine_max_pair", {"a": av, "a0": a0f, "b": bv, "b0": b0f}
    )


# ---------------------------------------------------------------------------
# Combinators
# ---------------------------------------------------------------------------


def scale(alpha: RationalLike, f: FunctionOracle) -> FunctionOracle:
    """Positive scaling preserves the convexity class."""
    a = Fraction(alpha)
    if a <= 0:
        raise ValidationError("scale factor must be positive")
    return FunctionOracle(f.box, lambda x: a * f(x), "composite", {"op": "scale"})


def dilate(
    a: Sequence[int], beta: int, f: FunctionOracle
) -> FunctionOracle:
    """``x -> f(a + beta x)`` for integer shift a and nonzero integer beta.

    The new domain is the largest box mapped into ``f.box``.
    """
    if beta == 0:
        raise ValidationError("dilation factor must be nonzero")
    av = tuple(int(v) for v in a)
    if len(av) != f.n:
        raise DomainMismatchError("shift dimension mismatch")

    def bound_pair(lo, up, ai):
        # solve lo <= ai + beta*t <= up over integers t
        if beta > 0:
            new_lo = None if lo is None else -((lo - ai) // -beta)  # ceil
            new_up = None if up is None else (up - ai) // beta  # floor
        else:
            new_lo = None if up is None else -((up - ai) // -beta)
            new_up = None if lo is None else (lo - ai) // beta
        return new_lo, new_up

    lowers, uppers = [], []
    for lo, up, ai in zip(f.box.lower, f.box.upper, av):
        new_lo, new_up = bound_pair(lo, up, ai)
        lowers.append(new_lo)
        uppers.append(new_up)
    box = DiscreteBox(tuple(lowers), tuple(uppers))
    return FunctionOracle(
        box,
        lambda x: f(tuple(ai + beta * xi for ai, xi in zip(av, x))),
        "composite",
        {"op": "dilate"},
    )


def add(f: FunctionOracle, g: FunctionOracle) -> FunctionOracle:
    """Pointwise sum; the two oracles must share the same box."""
    if f.box != g.box:
        raise DomainMismatchError("summands must share an identical box")
    return FunctionOracle(f.box, lambda x: f(x) + g(x), "composite", {"op": "sum"})
