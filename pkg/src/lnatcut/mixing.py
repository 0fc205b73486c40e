"""The general integer mixing set specialization.

For residuals ``1 > q_1 >= ... >= q_n >= 0`` the epigraph of
``max(0, max_i(q_i - x_i))`` over the whole lattice is the mixing set,
and its two classical inequality forms correspond exactly to anchored
greedy inequalities.  This module builds both directions of that
correspondence: subset-to-anchor, and anchor-to-subset via the maximizer
tracking procedure ``build_k``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    LinearInequality,
    Permutation,
    RationalLike,
    RatVector,
    ZERO,
    canonicalize,
)
from .errors import ValidationError
from .fnzoo import FunctionOracle, make_gen_int_mixing
from .sepi import build_sepi

FORM_EMPTY = "empty"
FORM_A = "A"
FORM_B = "B"


@dataclass(frozen=True)
class MixingInstance:
    """Sorted residual vector; the library works in the normalized order
    and the CLI keeps the map back to user order."""

    q: RatVector

    def __post_init__(self) -> None:
        q = tuple(Fraction(v) for v in self.q)
        object.__setattr__(self, "q", q)
        if not q:
            raise ValidationError("q must be nonempty")
        if q[0] >= 1:
            raise ValidationError("requires 1 > q_1")
        if q[-1] < 0:
            raise ValidationError("requires q_n >= 0")
        for a, b in zip(q, q[1:]):
            if a < b:
                raise ValidationError("q must be sorted descending")

    @property
    def n(self) -> int:
        return len(self.q)

    def oracle(self) -> FunctionOracle:
        return make_gen_int_mixing(self.q)


@dataclass(frozen=True)
class MixingInequality:
    K: tuple[int, ...]  # ascending indices == descending residuals
    sigma: tuple[int, ...]
    form: str
    inequality: LinearInequality


def mixing_inequality(
    inst: MixingInstance, K: Sequence[int], form: str
) -> MixingInequality:
    """The subset inequality in form A (anchored at zero) or B (anchored
    one lower, with the extra last-index term).  Empty K gives w >= 0."""
    ks = tuple(sorted(set(int(i) for i in K)))
    n = inst.n
    if any(i < 0 or i >= n for i in ks):
        raise ValidationError("K contains out-of-range indices")
    if not ks:
        ineq = LinearInequality(Fraction(1), (), (ZERO,) * n, ZERO)
        return MixingInequality((), (), FORM_EMPTY, ineq)
    if form not in (FORM_A, FORM_B):
        raise ValidationError(f"unknown form {form!r}")
    sigma = ks  # ascending index == descending q (ties keep index order)
    q = inst.q
    coeff = [ZERO] * n
    const = ZERO
    for rank, idx in enumerate(sigma):
        nxt = q[sigma[rank + 1]] if rank + 1 < len(sigma) else ZERO
        diff = q[idx] - nxt
        coeff[idx] -= diff
        const += diff
    if form == FORM_B:
        coeff[sigma[-1]] -= 1 - q[sigma[0]]
    ineq = LinearInequality(Fraction(1), (), tuple(coeff), const)
    return MixingInequality(ks, sigma, form, ineq)


def sepi_from_mixing(
    inst: MixingInstance, K: Sequence[int], form: str
) -> tuple[tuple[int, ...], Permutation]:
    """Anchor and ordering whose greedy inequality equals the subset
    inequality: zeros (form A) or minus ones (form B) on K, ones off K,
    natural ordering."""
    ks = set(int(i) for i in K)
    if not ks:
        raise ValidationError("K must be nonempty")
    if form not in (FORM_A, FORM_B):
        raise ValidationError(f"unknown form {form!r}")
    base = 0 if form == FORM_A else -1
    p = tuple(base if i in ks else 1 for i in range(inst.n))
    return p, Permutation.identity(inst.n)


@dataclass(frozen=True)
class BuildKResult:
    K: tuple[int, ...]
    form: str


def build_k(
    inst: MixingInstance, p: Sequence[int], delta: Permutation
) -> BuildKResult:
    """Recover the subset whose mixing inequality equals the greedy
    inequality anchored at ``(p, delta)``.

    Walks the maximizer of ``q_i - p_i`` along the chain: first through
    the coordinates at the minimum level of p (in ordering position),
    then, when that level is exhausted and the minimum was negative,
    through the next level restricted to larger residuals.
    """
    pv = tuple(int(v) for v in p)
    if len(pv) != inst.n or delta.n != inst.n:
        raise ValidationError("dimension mismatch")
    p_min = min(pv)
    if p_min >= 1:
        return BuildKResult((), FORM_EMPTY)

    level_min = [i for i in range(inst.n) if pv[i] == p_min]
    k_cur = min(level_min)
    ks = [k_cur]
    while True:
        later = [i for i in level_min if delta.rank_of(i) > delta.rank_of(k_cur)]
        if not later:
            break
        k_cur = min(later)
        ks.append(k_cur)
    k_last = ks[-1]
    k_first = ks[0]

    extra: list[int] = []
    if p_min <= -1:
        level_next = [i for i in range(inst.n) if pv[i] == p_min + 1]
        candidates = [
            i
            for i in level_next
            if delta.rank_of(i) > delta.rank_of(k_last) and i < k_first
        ]
        if candidates:
            k_cur = min(candidates)
            extra.append(k_cur)
            while True:
                later = [
                    i
                    for i in level_next
                    if delta.rank_of(i) > delta.rank_of(k_cur) and i < k_first
                ]
                if not later:
                    break
                k_cur = min(later)
                extra.append(k_cur)

    K = tuple(sorted(ks + extra))
    return BuildKResult(K, FORM_A if p_min == 0 else FORM_B)


def mixing_from_sepi_roundtrip(
    inst: MixingInstance, p: Sequence[int], delta: Permutation
) -> bool:
    """Anchored greedy inequality == mixing inequality of the recovered
    subset, compared canonically."""
    result = build_k(inst, p, delta)
    mix = mixing_inequality(inst, result.K, result.form or FORM_A)
    sepi = build_sepi(inst.oracle(), p, delta)
    return canonicalize(sepi) == canonicalize(mix.inequality)
