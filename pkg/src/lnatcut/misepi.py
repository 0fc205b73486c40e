"""Mixed-integer extension: epigraphs of ``H(x, y) = max_i(h^i(x) - y_i)``
with integer x and nonnegative continuous slacks y.

Aggregating the components with a weight vector ``(u0, u)`` in the cone
``u0 <= sum(u)`` turns the mixed epigraph into the epigraph of the
pure-integer function ``F`` (a weighted best-threshold aggregate), whose
anchored greedy inequalities lift to mixed-integer inequalities (MISEPIs)
``u0 w + u.y >= s.x + s0``.  This module provides exact evaluation of F,
MISEPI construction, two-stage exact separation, the finite weight family
generated by inverses of binary matrices, facet and full-dimension
certificates, the cycle-inequality specialization of the continuous
mixing set, and a cutting-plane minimizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from typing import Optional, Sequence

from .core import (
    DiscreteBox,
    IntVector,
    LinearInequality,
    Permutation,
    RationalLike,
    RatVector,
    ZERO,
    affine_rank,
    descending_order,
    solve_linear_system,
)
from .errors import (
    DistinctnessViolatedError,
    DomainViolationError,
    InfeasibleExtrasError,
    InvalidArcError,
    LnatcutError,
    NoBoundaryLevelsError,
    NotElementaryError,
    NotInUError,
    PointNotInInnerBoxError,
    TooLargeError,
    UnboundedBoxError,
    UnboundedObjectiveError,
    ValidationError,
)
from .fnzoo import FunctionOracle
from .lp import EQ, INFEASIBLE, LE, OPTIMAL, UNBOUNDED, LpProblem, minimize_rows
from .sepi import (
    box_bound_inequalities,
    build_sepi,
    chain_points,
    convex_weights,
    greedy_anchor,
)

CMIX = "cmix"
MCMIX = "mcmix"
GENERAL = "general"


# ---------------------------------------------------------------------------
# Instances and weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixedInstance:
    """n component functions over a common integer box."""

    h: tuple[FunctionOracle, ...]
    box: DiscreteBox
    family: str
    params: dict

    @property
    def n(self) -> int:
        return len(self.h)

    def h_values(self, x: IntVector) -> RatVector:
        return tuple(hi(x) for hi in self.h)


def cmix_instance(q: Sequence[RationalLike]) -> MixedInstance:
    """Continuous mixing components ``h^i(x) = q_i - x_i`` on the whole
    lattice, residuals sorted ``1 > q_1 >= ... >= q_n >= 0``."""
    qv = tuple(Fraction(v) for v in q)
    if not qv:
        raise ValidationError("q must be nonempty")
    if qv[0] >= 1 or qv[-1] < 0:
        raise ValidationError("requires 1 > q_1 and q_n >= 0")
    for a, b in zip(qv, qv[1:]):
        if a < b:
            raise ValidationError("q must be sorted descending")
    n = len(qv)
    box = DiscreteBox((None,) * n, (None,) * n)
    hs = tuple(
        FunctionOracle(box, (lambda i: lambda x: qv[i] - x[i])(i), "component", {})
        for i in range(n)
    )
    return MixedInstance(hs, box, CMIX, {"q": qv})


def mcmix_instance(
    q: Sequence[RationalLike], c: Sequence[RationalLike]
) -> MixedInstance:
    """Capacitated binary components ``h^i(x) = q_i - c_i x_i`` on the unit
    cube, with nonnegative capacities."""
    qv = tuple(Fraction(v) for v in q)
    cv = tuple(Fraction(v) for v in c)
    if len(qv) != len(cv) or not qv:
        raise ValidationError("q and c must be nonempty and equally long")
    if any(v < 0 for v in cv):
        raise ValidationError("capacities must be nonnegative")
    n = len(qv)
    box = DiscreteBox((0,) * n, (1,) * n)
    hs = tuple(
        FunctionOracle(
            box, (lambda i: lambda x: qv[i] - cv[i] * x[i])(i), "component", {}
        )
        for i in range(n)
    )
    return MixedInstance(hs, box, MCMIX, {"q": qv, "c": cv})


def general_instance(
    h_list: Sequence[FunctionOracle], check: bool = True
) -> MixedInstance:
    """Arbitrary component oracles on a shared box.

    When the box is finite and ``check`` is set, the structural
    requirement (each component and each clipped pairwise difference is
    midpoint convex) is verified up front.
    """
    hs = tuple(h_list)
    if not hs:
        raise ValidationError("need at least one component")
    box = hs[0].box
    if any(h.box != box for h in hs):
        raise ValidationError("components must share one box")
    inst = MixedInstance(hs, box, GENERAL, {})
    if check and box.is_finite:
        report = verify_assumption(inst)
        if not report.passed:
            raise ValidationError(
                f"component structure check failed: {report.detail}"
            )
    return inst


@dataclass(frozen=True)
class AssumptionReport:
    passed: bool
    detail: str = ""


def verify_assumption(
    inst: MixedInstance, box: Optional[DiscreteBox] = None
) -> AssumptionReport:
    """Midpoint convexity of every h^j and of every clipped difference
    ``max(0, h^i - h^j)`` over a finite box."""
    from .checkers import is_lnat_convex

    domain = box if box is not None else inst.box
    if not domain.is_finite:
        raise UnboundedBoxError("structure check needs a finite box")
    for j, hj in enumerate(inst.h):
        if not is_lnat_convex(hj, domain).passed:
            return AssumptionReport(False, f"component {j} not midpoint convex")
        for i, hi in enumerate(inst.h):
            gij = FunctionOracle(
                inst.box,
                (lambda a, b: lambda x: max(ZERO, a(x) - b(x)))(hi, hj),
                "clipped_difference",
                {},
            )
            if not is_lnat_convex(gij, domain).passed:
                return AssumptionReport(
                    False, f"clipped difference ({i},{j}) not midpoint convex"
                )
    return AssumptionReport(True)


def verify_F_lnat(
    inst: MixedInstance, weights: "WeightVector", box: DiscreteBox
) -> bool:
    """Midpoint convexity of the aggregate F over a finite box; the two
    structured families satisfy this by construction and skip the check."""
    if inst.family in (CMIX, MCMIX):
        return True
    from .checkers import is_lnat_convex

    oracle = FunctionOracle(
        inst.box,
        lambda x: eval_F(weights, inst.h_values(x))[0],
        "aggregate",
        {},
    )
    return is_lnat_convex(oracle, box).passed


@dataclass(frozen=True)
class WeightVector:
    """Aggregation weights in the cone ``0 <= u0 <= sum(u), u >= 0``."""

    u0: Fraction
    u: RatVector

    def __post_init__(self) -> None:
        object.__setattr__(self, "u0", Fraction(self.u0))
        object.__setattr__(self, "u", tuple(Fraction(v) for v in self.u))
        if self.u0 < 0 or any(v < 0 for v in self.u):
            raise NotInUError("weights must be nonnegative")
        if self.u0 > sum(self.u, ZERO):
            raise NotInUError("requires u0 <= sum(u)")

    @property
    def n(self) -> int:
        return len(self.u)


# ---------------------------------------------------------------------------
# H, its generators, and the aggregate F
# ---------------------------------------------------------------------------


def eval_H(
    inst: MixedInstance, x: Sequence[int], y: Sequence[RationalLike]
) -> Fraction:
    xt = tuple(int(v) for v in x)
    yv = tuple(Fraction(v) for v in y)
    if not inst.box.contains(xt):
        raise DomainViolationError(f"{xt} outside the instance box")
    if len(yv) != inst.n or any(v < 0 for v in yv):
        raise DomainViolationError("y must be a nonnegative vector of length n")
    return max(hv - yi for hv, yi in zip(inst.h_values(xt), yv))


def generators_D(
    inst: MixedInstance, x: Sequence[int]
) -> list[tuple[Fraction, RatVector]]:
    """The n extreme points of the slice at x: for each component j the
    pair ``w = h^j(x)`` and ``y_i = max(0, h^i(x) - h^j(x))``."""
    xt = tuple(int(v) for v in x)
    if not inst.box.contains(xt):
        raise DomainViolationError(f"{xt} outside the instance box")
    hv = inst.h_values(xt)
    out = []
    for j in range(inst.n):
        yj = tuple(max(ZERO, hv[i] - hv[j]) for i in range(inst.n))
        out.append((hv[j], yj))
    return out


def mixed_rays(n: int) -> list[RatVector]:
    """Recession directions of every slice, in (w, y) coordinates:
    raise w, trade w down against a uniform y increase, raise one y."""
    rays: list[RatVector] = [
        (Fraction(1), *(ZERO,) * n),
        (Fraction(-1), *(Fraction(1),) * n),
    ]
    for i in range(n):
        y = [ZERO] * n
        y[i] = Fraction(1)
        rays.append((ZERO, *y))
    return rays


def eval_F(
    weights: WeightVector, h_values: Sequence[RationalLike]
) -> tuple[Fraction, Optional[int]]:
    """Greedy evaluation of the weighted aggregate.

    Sorts the component values descending (ties by ascending index) and
    finds the pivot position j_star, the first 1-based position where the
    accumulated weight reaches u0; the value charges u0 at the pivot and
    the surplus weights above it.  Zero u0 gives zero with no pivot.
    """
    hv = tuple(Fraction(v) for v in h_values)
    if len(hv) != weights.n:
        raise NotInUError("weight/value dimension mismatch")
    if weights.u0 == 0:
        return ZERO, None
    order = descending_order(hv)
    cum = ZERO
    j_star = None
    for t in range(weights.n):
        cum += weights.u[order(t)]
        if cum >= weights.u0:
            j_star = t + 1
            break
    if j_star is None:
        raise NotInUError("weights do not reach u0")
    pivot = hv[order(j_star - 1)]
    value = weights.u0 * pivot
    for t in range(j_star - 1):
        value += weights.u[order(t)] * (hv[order(t)] - pivot)
    return value, j_star


def eval_F_brute(
    weights: WeightVector, h_values: Sequence[RationalLike]
) -> Fraction:
    """Direct minimum over all component thresholds; the independent
    oracle for :func:`eval_F`."""
    hv = tuple(Fraction(v) for v in h_values)
    if len(hv) != weights.n:
        raise NotInUError("weight/value dimension mismatch")
    best = None
    for j in range(weights.n):
        val = weights.u0 * hv[j] + sum(
            (weights.u[i] * max(ZERO, hv[i] - hv[j]) for i in range(weights.n)),
            ZERO,
        )
        if best is None or val < best:
            best = val
    assert best is not None
    return best


# ---------------------------------------------------------------------------
# MISEPIs
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Misepi:
    weights: WeightVector
    p: IntVector
    delta: Permutation
    inequality: LinearInequality
    violation: Optional[Fraction] = None


def build_misepi(
    inst: MixedInstance,
    weights: WeightVector,
    p: Sequence[int],
    delta: Permutation,
) -> Misepi:
    """Anchored greedy inequality of the aggregate F, with left-hand side
    ``u0 w + u . y``."""
    pt = tuple(int(v) for v in p)
    if not (
        inst.box.contains(pt)
        and inst.box.contains(tuple(v + 1 for v in pt))
    ):
        raise PointNotInInnerBoxError(f"{pt} has no unit cube inside the box")
    chain = chain_points(pt, delta)
    values = [eval_F(weights, inst.h_values(z))[0] for z in chain]
    n = inst.n
    s = [ZERO] * n
    for i in range(n):
        s[delta(i)] = values[i + 1] - values[i]
    const = values[0] - sum((s[j] * pt[j] for j in range(n)), ZERO)
    ineq = LinearInequality(weights.u0, weights.u, tuple(s), const)
    return Misepi(weights, pt, delta, ineq)


def separate_misepi(
    inst: MixedInstance,
    point: tuple[RationalLike, Sequence[RationalLike], Sequence[RationalLike]],
    box: Optional[DiscreteBox] = None,
) -> Optional[Misepi]:
    """Two-stage exact separation.

    Stage 1 anchors (p, delta) from the integer part alone; stage 2 solves
    an exact LP over the weight cone (normalized to u0 = 1) for the most
    violated aggregate inequality at that anchor.  Returns ``None`` when
    the best violation is nonpositive, i.e. the point satisfies every
    inequality of the family with positive epigraph weight (the u0 = 0
    members reduce to y >= 0, kept in relaxations explicitly).
    """
    w_hat, y_hat, x_hat = point
    w_hat = Fraction(w_hat)
    yv = tuple(Fraction(v) for v in y_hat)
    xv = tuple(Fraction(v) for v in x_hat)
    domain = box if box is not None else inst.box
    if len(yv) != inst.n or any(v < 0 for v in yv):
        raise DomainViolationError("y must be nonnegative of length n")
    if not domain.contains_relaxed(xv):
        raise DomainViolationError(f"{xv} outside the relaxed box")
    n = inst.n
    anchor, delta = greedy_anchor(domain, xv)
    lambdas = convex_weights(anchor, delta, xv)
    chain = chain_points(anchor, delta)
    a = [
        [lambdas[k] * hv for hv in inst.h_values(chain[k])]
        for k in range(n + 1)
    ]

    # Variables: nu[k][i] for k in 0..n, then u[i]; maximize
    #   sum a[k][i] nu[k][i] - y_hat . u   (then subtract w_hat outside).
    n_nu = (n + 1) * n
    objective = [a[k][i] for k in range(n + 1) for i in range(n)] + [
        -v for v in yv
    ]
    prob = LpProblem(
        objective=objective,
        sense="max",
        bounds=[(0, None)] * (n_nu + n),
    )
    for k in range(n + 1):
        row = [ZERO] * (n_nu + n)
        for i in range(n):
            row[k * n + i] = Fraction(1)
        prob.add_row(row, EQ, Fraction(1))
    for k in range(n + 1):
        for i in range(n):
            row = [ZERO] * (n_nu + n)
            row[k * n + i] = Fraction(1)
            row[n_nu + i] = Fraction(-1)
            prob.add_row(row, LE, ZERO)
    sol = prob.solve()
    if sol.status != OPTIMAL:
        raise LnatcutError("separation LP must have an optimum")
    violation = sol.objective - w_hat  # type: ignore[operator]
    if violation <= 0:
        return None
    u_star = sol.values[n_nu:]  # type: ignore[index]
    weights = WeightVector(Fraction(1), tuple(u_star))
    cut = build_misepi(inst, weights, anchor, delta)
    return Misepi(weights, anchor, delta, cut.inequality, violation)


@lru_cache(maxsize=None)
def _u_prime_cached(
    n: int, equal_row_sums: bool
) -> tuple[RatVector, ...]:
    found: set[RatVector] = set()
    for m in range(1, n + 1):
        for M in combinations(range(n), m):
            for bits in product((0, 1), repeat=m * m):
                B = [list(bits[r * m : (r + 1) * m]) for r in range(m)]
                if equal_row_sums:
                    sums = {sum(row) for row in B}
                    if len(sums) != 1:
                        continue
                det = _int_det(B)
                if det == 0:
                    continue
                sub = solve_linear_system(
                    [[Fraction(v) for v in row] for row in B],
                    [Fraction(1)] * m,
                )
                assert sub is not None
                if any(v < 0 for v in sub):
                    continue
                u = [ZERO] * n
                for pos, idx in enumerate(M):
                    u[idx] = sub[pos]
                found.add(tuple(u))
    return tuple(sorted(found))


def _int_det(B: list[list[int]]) -> int:
    m = len(B)
    if m == 1:
        return B[0][0]
    if m == 2:
        return B[0][0] * B[1][1] - B[0][1] * B[1][0]
    det = 0
    for j in range(m):
        if B[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in B[1:]]
        det += (-1) ** j * B[0][j] * _int_det(minor)
    return det


def enumerate_U_prime(
    n: int, guard: int = 4, equal_row_sums: bool = False
) -> list[WeightVector]:
    """All weight vectors ``u = B^{-1} 1 >= 0`` for nonsingular binary
    matrices over index subsets, deduplicated, each paired with u0 = 1.

    Growth is 2^(m^2) per subset, hence the dimension guard.  The optional
    filter keeps only equal-row-sum matrices (a refinement valid for the
    continuous mixing family; not applied by default).
    """
    if n > guard:
        raise TooLargeError(f"dimension {n} above the enumeration guard {guard}")
    return [
        WeightVector(Fraction(1), u) for u in _u_prime_cached(n, equal_row_sums)
    ]


# ---------------------------------------------------------------------------
# Facet machinery
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MixedFacetCertificate:
    points: tuple[RatVector, ...]
    tight: bool
    rank: int
    rank_check: bool
    boundary_levels: tuple[int, ...]
    zero_weight_indices: tuple[int, ...]


def facet_certificate_misepi(
    inst: MixedInstance,
    weights: WeightVector,
    p: Sequence[int],
    delta: Permutation,
) -> MixedFacetCertificate:
    """Collects the tight points of one aggregate inequality and checks
    their affine rank against 2n (one less than the full dimension).

    Three families of tight points: the pivot generators along the chain;
    the pivot generator of the anchor shifted by a unit slack in every
    zero-weight coordinate; and the next-threshold generators at levels
    where the accumulated weight hits u0 exactly.  Component values must
    be pairwise distinct at every level so the pivots are unambiguous.
    """
    pt = tuple(int(v) for v in p)
    if weights.u0 <= 0:
        raise NotInUError("facet certificates need a positive epigraph weight")
    n = inst.n
    cut = build_misepi(inst, weights, pt, delta)
    chain = chain_points(pt, delta)
    h_levels = [inst.h_values(z) for z in chain]
    for k, hv in enumerate(h_levels):
        if len(set(hv)) != n:
            raise DistinctnessViolatedError(
                f"tied component values at level {k}: {hv}"
            )

    points: list[RatVector] = []
    boundary: list[int] = []
    base_point: Optional[RatVector] = None
    for k, hv in enumerate(h_levels):
        order = descending_order(hv)
        cum = ZERO
        j_star = None
        for t in range(n):
            cum += weights.u[order(t)]
            if cum >= weights.u0:
                j_star = t + 1
                break
        assert j_star is not None
        pivot = hv[order(j_star - 1)]
        w_k = pivot
        y_k = tuple(max(ZERO, hv[i] - pivot) for i in range(n))
        pointk = (w_k, *y_k, *map(Fraction, chain[k]))
        points.append(pointk)
        if k == 0:
            base_point = pointk
        prefix = sum((weights.u[order(t)] for t in range(j_star)), ZERO)
        if prefix == weights.u0 and j_star < n:
            boundary.append(k)
            next_pivot = hv[order(j_star)]
            y_t = tuple(max(ZERO, hv[i] - next_pivot) for i in range(n))
            points.append((next_pivot, *y_t, *map(Fraction, chain[k])))

    zero_idx = tuple(i for i in range(n) if weights.u[i] == 0)
    assert base_point is not None
    for i in zero_idx:
        bumped = list(base_point)
        bumped[1 + i] += 1
        points.append(tuple(bumped))

    m = n - len(zero_idx)
    if not boundary and m > 0:
        raise NoBoundaryLevelsError(
            "no level reaches the weight budget exactly; the certificate "
            "cannot span the face"
        )

    tight = all(
        cut.inequality.slack(pointk[0], pointk[1 + n :], pointk[1 : 1 + n]) == 0
        for pointk in points
    )
    feasible = all(
        max(
            hv - yi
            for hv, yi in zip(
                inst.h_values(tuple(int(v) for v in pointk[1 + n :])),
                pointk[1 : 1 + n],
            )
        )
        <= pointk[0]
        for pointk in points
    )
    rank = affine_rank(points)
    return MixedFacetCertificate(
        tuple(points),
        tight and feasible,
        rank,
        rank == 2 * n,
        tuple(boundary),
        zero_idx,
    )


@dataclass(frozen=True)
class FullDimCertificate:
    points: tuple[RatVector, ...]
    rank: int
    rank_check: bool


def full_dim_certificate(
    inst: MixedInstance, p: Sequence[int], delta: Permutation
) -> FullDimCertificate:
    """2n+2 epigraph points whose affine rank 2n+1 certifies that the
    mixed epigraph is full dimensional."""
    pt = tuple(int(v) for v in p)
    n = inst.n
    chain = chain_points(pt, delta)
    tops = [max(inst.h_values(z)) for z in chain]
    points: list[RatVector] = [
        (tops[k], *(ZERO,) * n, *map(Fraction, chain[k])) for k in range(n + 1)
    ]
    points.append((tops[0] + 1, *(ZERO,) * n, *map(Fraction, pt)))
    for j in range(n):
        y = [ZERO] * n
        y[j] = Fraction(1)
        points.append((tops[0], *y, *map(Fraction, pt)))
    rank = affine_rank(points)
    return FullDimCertificate(tuple(points), rank, rank == 2 * n + 1)


# ---------------------------------------------------------------------------
# Cycle inequalities of the continuous mixing family
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CycleSpec:
    """An elementary cycle over component indices: every involved node has
    in-degree and out-degree one and the arcs form a single closed walk
    (a lone self-loop is allowed)."""

    arcs: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        arcs = tuple((int(a), int(b)) for a, b in self.arcs)
        object.__setattr__(self, "arcs", arcs)
        if not arcs:
            raise NotElementaryError("cycle needs at least one arc")
        loops = [a for a in arcs if a[0] == a[1]]
        if loops and len(arcs) > 1:
            raise NotElementaryError("self-loop must be the entire cycle")
        if loops:
            return
        tails = [a for a, _ in arcs]
        heads = [b for _, b in arcs]
        if len(set(tails)) != len(arcs) or len(set(heads)) != len(arcs):
            raise NotElementaryError("repeated tail or head")
        if set(tails) != set(heads):
            raise NotElementaryError("arcs do not close up")
        succ = dict(arcs)
        start = min(tails)
        node, seen = start, 0
        while True:
            node = succ[node]
            seen += 1
            if node == start:
                break
            if seen > len(arcs):
                raise NotElementaryError("arcs split into several cycles")
        if seen != len(arcs):
            raise NotElementaryError("arcs split into several cycles")

    @property
    def nodes(self) -> tuple[int, ...]:
        return tuple(sorted({a for a, _ in self.arcs}))

    @property
    def is_self_loop(self) -> bool:
        return len(self.arcs) == 1 and self.arcs[0][0] == self.arcs[0][1]

    def successor(self) -> dict[int, int]:
        return dict(self.arcs)

    def predecessor(self) -> dict[int, int]:
        return {b: a for a, b in self.arcs}


def _require_cmix(inst: MixedInstance) -> RatVector:
    if inst.family != CMIX:
        raise ValidationError("cycle inequalities apply to the continuous mixing family")
    return inst.params["q"]


def backward_tails(q: RatVector, cycle: CycleSpec) -> tuple[int, ...]:
    """Tails of arcs pointing to a strictly larger residual."""
    out = []
    for j, k in cycle.arcs:
        if j != k and q[j] == q[k]:
            raise InvalidArcError(f"arc ({j},{k}) joins equal residuals")
        if j != k and q[j] < q[k]:
            out.append(j)
    return tuple(sorted(out))


def cycle_inequality(inst: MixedInstance, cycle: CycleSpec) -> LinearInequality:
    """Sum of the per-arc expressions, rearranged to the shared >= form.

    Self-loops contribute ``w + y_j >= q_j - x_j``; backward arcs carry
    the epigraph variable, forward arcs only their slack.
    """
    q = _require_cmix(inst)
    n = inst.n
    if any(j < 0 or j >= n for j, _ in cycle.arcs) or any(
        k < 0 or k >= n for _, k in cycle.arcs
    ):
        raise ValidationError("cycle indices out of range")
    backward_tails(q, cycle)  # arc validation
    lhs_w = ZERO
    lhs_y = [ZERO] * n
    rhs_x = [ZERO] * n
    const = ZERO
    for j, k in cycle.arcs:
        if j == k:
            lhs_w += 1
            lhs_y[j] += 1
            rhs_x[j] -= 1
            const += q[j]
        elif q[j] < q[k]:
            lhs_w += 1
            lhs_y[j] += 1
            rhs_x[j] += q[k] - q[j] - 1
            const += q[k]
        else:
            lhs_y[j] += 1
            rhs_x[j] += q[k] - q[j]
    return LinearInequality(lhs_w, tuple(lhs_y), tuple(rhs_x), const)


def misepi_from_cycle(
    inst: MixedInstance, cycle: CycleSpec
) -> tuple[WeightVector, IntVector, Permutation]:
    """Weights, anchor and ordering whose aggregate inequality equals the
    cycle inequality.

    The weight budget counts the backward arcs; the anchor sits one below
    zero on backward tails, at zero on other cycle nodes and out of reach
    elsewhere; the ordering visits the in-neighbors of the cycle nodes in
    decreasing residual order, then the rest ascending.
    """
    q = _require_cmix(inst)
    n = inst.n
    if cycle.is_self_loop:
        j = cycle.arcs[0][0]
        u = [ZERO] * n
        u[j] = Fraction(1)
        return (
            WeightVector(Fraction(1), tuple(u)),
            (0,) * n,
            Permutation.identity(n),
        )
    back = set(backward_tails(q, cycle))
    nodes = cycle.nodes
    u = tuple(Fraction(1) if i in nodes else ZERO for i in range(n))
    weights = WeightVector(Fraction(len(back)), u)
    p = tuple(
        -1 if i in back else (0 if i in nodes else 2) for i in range(n)
    )
    pred = cycle.predecessor()
    by_residual = sorted(nodes, key=lambda i: (-q[i], i))
    order = [pred[i] for i in by_residual]
    order += sorted(set(range(n)) - set(order))
    return weights, p, Permutation(tuple(order))


# ---------------------------------------------------------------------------
# Cutting-plane minimization over the mixed epigraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MinimizeHResult:
    optimum: Fraction
    argmin: RatVector  # (w, y..., x...)
    cut_count: int
    iterations: int


def _misepi_row(
    ineq: LinearInequality, n: int
) -> tuple[tuple[Fraction, ...], Fraction]:
    """Row over variables (w, y_1..y_n, x_1..x_n)."""
    return (
        (ineq.lhs_w, *ineq.lhs_y, *(-c for c in ineq.rhs_x)),
        ineq.rhs_const,
    )


def minimize_H(
    inst: MixedInstance,
    workbox: DiscreteBox,
    objective: tuple[RationalLike, Sequence[RationalLike], Sequence[RationalLike]],
    extras: Sequence[LinearInequality] = (),
) -> MinimizeHResult:
    """Cutting-plane minimization of ``c_w w + c_y . y + c_x . x`` over
    the mixed epigraph restricted to lattice x in the working box.

    The starting relaxation carries the n single-component inequalities
    ``w + y_i >= (component i bound)`` so its recession cone already equals
    the true one; separation then adds most-violated aggregate cuts until
    none exists.  Requires a positive w coefficient, nonnegative y
    coefficients, and total y weight at least the w weight (otherwise the
    objective dives along the trade-down ray).
    """
    c_w, c_y, c_x = objective
    c_w = Fraction(c_w)
    c_yv = tuple(Fraction(v) for v in c_y)
    c_xv = tuple(Fraction(v) for v in c_x)
    n = inst.n
    if not workbox.is_finite:
        raise UnboundedBoxError("minimization needs a finite working box")
    if len(c_yv) != n or len(c_xv) != n:
        raise ValidationError("objective blocks must have length n")
    if c_w <= 0:
        raise UnboundedObjectiveError("w coefficient must be positive")
    if any(v < 0 for v in c_yv):
        raise UnboundedObjectiveError("y coefficients must be nonnegative")
    if sum(c_yv, ZERO) < c_w:
        raise UnboundedObjectiveError(
            "objective decreases along the (-1, 1, 0) recession ray"
        )
    for lo, up, blo, bup in zip(
        workbox.lower, workbox.upper, inst.box.lower, inst.box.upper
    ):
        if blo is not None and (lo is None or lo < blo):
            raise ValidationError("workbox extends below the instance box")
        if bup is not None and (up is None or up > bup):
            raise ValidationError("workbox extends above the instance box")
    if inst.family == GENERAL:
        for i in range(n):
            e_i = [ZERO] * n
            e_i[i] = Fraction(1)
            if not verify_F_lnat(
                inst, WeightVector(Fraction(1), tuple(e_i)), workbox
            ):
                raise ValidationError("aggregate convexity check failed")

    obj = (c_w, *c_yv, *c_xv)
    d = 2 * n + 1
    seen: set[tuple[int, ...]] = set()
    pool: list[LinearInequality] = []
    anchor0 = tuple(workbox.inner().lower)  # type: ignore[arg-type]
    for i in range(n):
        e_i = [ZERO] * n
        e_i[i] = Fraction(1)
        cut = build_misepi(
            inst, WeightVector(Fraction(1), tuple(e_i)), anchor0,
            Permutation.identity(n),
        ).inequality
        key = cut.canonical_key()
        if key not in seen:
            seen.add(key)
            pool.append(cut)

    static_rows: list[tuple[tuple[Fraction, ...], Fraction]] = []
    for i in range(n):
        row = [ZERO] * d
        row[1 + i] = Fraction(1)
        static_rows.append((tuple(row), ZERO))  # y_i >= 0
    for bound in box_bound_inequalities(workbox):
        row = [ZERO] * d
        for j, c in enumerate(bound.rhs_x):
            row[1 + n + j] = -c
        static_rows.append((tuple(row), bound.rhs_const))
    for extra in extras:
        if len(extra.lhs_y) != n or extra.n != n:
            raise ValidationError("extra constraints must cover (w, y, x)")
        static_rows.append(_misepi_row(extra, n))

    iterations = 0
    while True:
        iterations += 1
        rows = [_misepi_row(c, n) for c in pool] + static_rows
        result = minimize_rows(obj, rows)
        if result.status == INFEASIBLE:
            raise InfeasibleExtrasError("side constraints empty the relaxation")
        if result.status == UNBOUNDED:
            raise UnboundedObjectiveError("objective unbounded over the relaxation")
        assert result.point is not None
        w_hat = result.point[0]
        y_hat = result.point[1 : 1 + n]
        x_hat = result.point[1 + n :]
        cut = separate_misepi(inst, (w_hat, y_hat, x_hat), box=workbox)
        if cut is None:
            return MinimizeHResult(
                result.value, result.point, len(pool), iterations
            )
        if inst.family == GENERAL and not verify_F_lnat(
            inst, cut.weights, workbox
        ):
            raise ValidationError(
                "aggregate convexity check failed for the separated weights"
            )
        key = cut.inequality.canonical_key()
        if key in seen:
            raise LnatcutError("separator returned an already-pooled cut")
        seen.add(key)
        pool.append(cut.inequality)
