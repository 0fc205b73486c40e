"""Foundational value types: exact rationals, integer boxes, lattice points,
permutations and linear inequalities, plus the lattice utilities shared by
every other module.

All numeric data is `fractions.Fraction`; nothing in this package touches
floating point.  Infinite bounds are an explicit ``None`` tag, never a
sentinel integer, so that "infinity minus one is still infinity" holds
literally when shrinking a box.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Optional, Sequence, Union

from .errors import (
    EmptyInnerBoxError,
    UnboundedBoxError,
    ValidationError,
    ZeroInequalityError,
)

Rational = Fraction
RationalLike = Union[Fraction, int]
IntVector = tuple[int, ...]
RatVector = tuple[Fraction, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def rat(value: Union[str, int, Fraction]) -> Fraction:
    """Parse an exact rational from "num/den" / integer strings or numbers.

    Decimal notation is rejected on purpose: every serialized scalar must be
    reconstructible bit-for-bit.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." in text or "e" in text.lower():
            raise ValidationError(f"decimal notation not allowed: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValidationError(f"bad rational literal {value!r}: {exc}") from exc
    raise ValidationError(f"cannot interpret {value!r} as a rational")


def rat_str(value: Fraction) -> str:
    """Serialize a rational as "num/den" (or "num" when integral)."""
    return str(Fraction(value))



def descending_order(values: Sequence[Fraction]) -> "Permutation":
    """Permutation sorting ``values`` descending, ties by ascending index.

    Python's sort is stable and ``reverse=True`` preserves the relative
    order of equal keys, which is exactly the ascending-index tie rule.
    """
    order = sorted(range(len(values)), key=lambda i: values[i], reverse=True)
    return Permutation(tuple(order))


# ---------------------------------------------------------------------------
# Boxes and points
# ---------------------------------------------------------------------------

Bound = Optional[int]  # None encodes the corresponding infinity


@dataclass(frozen=True)
class DiscreteBox:
    """Per-coordinate integer bounds ``lower_i <= x_i <= upper_i``.

    ``None`` in ``lower`` means minus infinity, in ``upper`` plus infinity.
    """

    lower: tuple[Bound, ...]
    upper: tuple[Bound, ...]

    def __post_init__(self) -> None:
        if len(self.lower) != len(self.upper):
            raise ValidationError("lower/upper dimension mismatch")
        if not self.lower:
            raise ValidationError("box must have dimension >= 1")
        for lo, up in zip(self.lower, self.upper):
            if lo is not None and not isinstance(lo, int):
                raise ValidationError("bounds must be int or None")
            if up is not None and not isinstance(up, int):
                raise ValidationError("bounds must be int or None")
            if lo is not None and up is not None and lo > up:
                raise ValidationError(f"empty box: lower {lo} > upper {up}")

    @property
    def n(self) -> int:
        return len(self.lower)

    @property
    def is_finite(self) -> bool:
        return all(lo is not None for lo in self.lower) and all(
            up is not None for up in self.upper
        )

    def contains(self, point: Sequence[int]) -> bool:
        if len(point) != self.n:
            return False
        for x, lo, up in zip(point, self.lower, self.upper):
            if lo is not None and x < lo:
                return False
            if up is not None and x > up:
                return False
        return True

    def contains_relaxed(self, point: Sequence[RationalLike]) -> bool:
        """Membership in the closed continuous relaxation of the box."""
        if len(point) != self.n:
            return False
        for x, lo, up in zip(point, self.lower, self.upper):
            if lo is not None and x < lo:
                return False
            if up is not None and x > up:
                return False
        return True

    def inner(self) -> "DiscreteBox":
        """The box with every finite upper bound lowered by one.

        This is the set of anchors p with both p and p+1 inside; infinite
        upper bounds stay infinite.
        """
        new_upper = []
        for lo, up in zip(self.lower, self.upper):
            if up is None:
                new_upper.append(None)
            else:
                if lo is not None and lo > up - 1:
                    raise EmptyInnerBoxError(
                        "box has a zero-length side; no unit cube fits"
                    )
                new_upper.append(up - 1)
        return DiscreteBox(self.lower, tuple(new_upper))

    def point_count(self) -> int:
        if not self.is_finite:
            raise UnboundedBoxError("cannot count points of an unbounded box")
        count = 1
        for lo, up in zip(self.lower, self.upper):
            count *= up - lo + 1  # type: ignore[operator]
        return count

    def diameter(self) -> int:
        if not self.is_finite:
            raise UnboundedBoxError("diameter of an unbounded box")
        return max(up - lo for lo, up in zip(self.lower, self.upper))  # type: ignore[operator]


def unit_hypercube(p: Sequence[int]) -> DiscreteBox:
    """The unit box with origin shifted to ``p``: lower = p, upper = p + 1."""
    pt = tuple(int(v) for v in p)
    return DiscreteBox(pt, tuple(v + 1 for v in pt))


def enumerate_lattice(box: DiscreteBox) -> Iterator[IntVector]:
    """Yield every integer point of a finite box in lexicographic order."""
    if not box.is_finite:
        raise UnboundedBoxError("cannot enumerate an unbounded box")
    ranges = [range(lo, up + 1) for lo, up in zip(box.lower, box.upper)]  # type: ignore[arg-type]
    return product(*ranges)


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Bijection of {0..n-1}; ``order[i]`` is the element placed at rank i."""

    order: tuple[int, ...]
    _inverse: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ValidationError(f"not a permutation of 0..{n - 1}: {self.order}")
        inverse = [0] * n
        for rank, element in enumerate(self.order):
            inverse[element] = rank
        object.__setattr__(self, "_inverse", tuple(inverse))

    @property
    def n(self) -> int:
        return len(self.order)

    def __call__(self, rank: int) -> int:
        return self.order[rank]

    def rank_of(self, element: int) -> int:
        """Position of ``element`` within the ordering (the inverse map)."""
        return self._inverse[element]

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def from_one_based(order: Sequence[int]) -> "Permutation":
        return Permutation(tuple(v - 1 for v in order))

    def to_one_based(self) -> tuple[int, ...]:
        return tuple(v + 1 for v in self.order)


# ---------------------------------------------------------------------------
# Linear inequalities
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LinearInequality:
    """``lhs_w * w + lhs_y . y >= rhs_x . x + rhs_const``.

    ``lhs_y`` is empty in the pure-integer setting.  The same container
    houses epigraph cuts, mixing and cycle inequalities, and plain linear
    side constraints (with ``lhs_w == 0``).
    """

    lhs_w: Fraction
    lhs_y: RatVector
    rhs_x: RatVector
    rhs_const: Fraction

    @staticmethod
    def make(
        lhs_w: RationalLike,
        rhs_x: Sequence[RationalLike],
        rhs_const: RationalLike,
        lhs_y: Sequence[RationalLike] = (),
    ) -> "LinearInequality":
        return LinearInequality(
            Fraction(lhs_w),
            tuple(Fraction(v) for v in lhs_y),
            tuple(Fraction(v) for v in rhs_x),
            Fraction(rhs_const),
        )

    @property
    def n(self) -> int:
        return len(self.rhs_x)

    def rhs_at(self, x: Sequence[RationalLike]) -> Fraction:
        return sum((a * Fraction(v) for a, v in zip(self.rhs_x, x)), self.rhs_const)

    def slack(
        self,
        w: RationalLike,
        x: Sequence[RationalLike],
        y: Sequence[RationalLike] = (),
    ) -> Fraction:
        """lhs minus rhs; nonnegative iff the point satisfies the inequality."""
        lhs = self.lhs_w * Fraction(w)
        lhs += sum((u * Fraction(v) for u, v in zip(self.lhs_y, y)), ZERO)
        return lhs - self.rhs_at(x)

    def satisfied_by(
        self,
        w: RationalLike,
        x: Sequence[RationalLike],
        y: Sequence[RationalLike] = (),
    ) -> bool:
        return self.slack(w, x, y) >= 0

    def coefficients(self) -> tuple[Fraction, ...]:
        return (self.lhs_w, *self.lhs_y, *self.rhs_x, self.rhs_const)

    def canonical_key(self) -> tuple[int, ...]:
        """Hashable key identifying the halfspace; see :func:`canonicalize`."""
        c = canonicalize(self)
        return tuple(int(v) for v in c.coefficients())

    def __str__(self) -> str:
        def term(coef: Fraction, name: str) -> str:
            return f"{rat_str(coef)}*{name}"

        lhs_parts = []
        if self.lhs_w != 0 or not self.lhs_y:
            lhs_parts.append(term(self.lhs_w, "w"))
        lhs_parts += [
            term(c, f"y{i + 1}") for i, c in enumerate(self.lhs_y) if c != 0
        ]
        rhs_parts = [rat_str(self.rhs_const)]
        rhs_parts += [
            term(c, f"x{i + 1}") for i, c in enumerate(self.rhs_x) if c != 0
        ]
        return " + ".join(lhs_parts or ["0"]) + " >= " + " + ".join(rhs_parts)


def canonicalize(ineq: LinearInequality) -> LinearInequality:
    """Scale by a positive rational so all coefficients become coprime ints.

    Two inequalities describe the same halfspace exactly when their
    canonical forms are identical; only positive scalings are applied, so
    the inequality's direction is preserved.
    """
    coeffs = ineq.coefficients()
    if all(c == 0 for c in coeffs):
        raise ZeroInequalityError("cannot canonicalize the zero inequality")
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // math.gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    content = 0
    for v in ints:
        content = math.gcd(content, abs(v))
    ints = [v // content for v in ints]
    k = len(ineq.lhs_y)
    n = ineq.n
    return LinearInequality(
        Fraction(ints[0]),
        tuple(Fraction(v) for v in ints[1 : 1 + k]),
        tuple(Fraction(v) for v in ints[1 + k : 1 + k + n]),
        Fraction(ints[-1]),
    )


def affine_rank(points: Sequence[Sequence[Fraction]]) -> int:
    """Exact affine rank of a point set (dimension of its affine hull)."""
    if not points:
        return -1
    base = [Fraction(v) for v in points[0]]
    rows = [
        [Fraction(v) - b for v, b in zip(pt, base)] for pt in points[1:]
    ]
    return matrix_rank(rows)


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Exact rank via fraction Gaussian elimination."""
    m = [list(map(Fraction, row)) for row in rows]
    if not m:
        return 0
    n_cols = len(m[0])
    rank = 0
    col = 0
    for col in range(n_cols):
        pivot_row = None
        for r in range(rank, len(m)):
            if m[r][col] != 0:
                pivot_row = r
                break
        if pivot_row is None:
            continue
        m[rank], m[pivot_row] = m[pivot_row], m[rank]
        pivot = m[rank][col]
        for r in range(len(m)):
            if r != rank and m[r][col] != 0:
                factor = m[r][col] / pivot
                m[r] = [a - factor * b for a, b in zip(m[r], m[rank])]
        rank += 1
        if rank == len(m):
            break
    return rank


def solve_linear_system(
    rows: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]
) -> Optional[list[Fraction]]:
    """Solve a square exact linear system; ``None`` if singular."""
    n = len(rows)
    aug = [list(map(Fraction, rows[i])) + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            return None
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        pivot = aug[col][col]
        aug[col] = [v / pivot for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return [aug[i][n] for i in range(n)]
