"""Exact rational LP kernel.

Dense two-phase primal simplex over `fractions.Fraction`, with a Dantzig
pivot rule that falls back to Bland's rule permanently once degeneracy is
detected, so termination is guaranteed.  Every optimal solve re-verifies
primal feasibility and strong duality against the original (un-pivoted)
data before returning; infeasibility comes with a Farkas certificate and
unboundedness with an explicit ray.

Problems here are desk scale (at most a few hundred rows); no presolve,
no sparsity.  :func:`minimize_rows` solves ``min c.v  s.t.  A v >= b`` with
free variables through its dual so that inequality-heavy hull problems land
in a standard form whose row count equals the (small) variable count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .core import RationalLike, ZERO
from .errors import (
    LnatcutError,
    MalformedProblemError,
    PivotBudgetExceededError,
)

LE, GE, EQ = "<=", ">=", "="

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_DEGENERATE_LIMIT = 40  # consecutive stalls before switching to Bland


@dataclass
class LpSolution:
    status: str
    values: Optional[tuple[Fraction, ...]] = None
    objective: Optional[Fraction] = None
    duals: Optional[tuple[Fraction, ...]] = None
    farkas: Optional[tuple[Fraction, ...]] = None
    ray: Optional[tuple[Fraction, ...]] = None
    pivots: int = 0


@dataclass
class LpProblem:
    """``min/max objective . v`` subject to rows and per-variable bounds.

    Bounds are pairs ``(lo, up)`` with ``None`` for the infinities; the
    default variable is free.  Rows are added with :meth:`add_row`.
    """

    objective: Sequence[RationalLike]
    sense: str = "min"
    bounds: Optional[Sequence[tuple[Optional[RationalLike], Optional[RationalLike]]]] = None
    rows: list[tuple[tuple[Fraction, ...], str, Fraction]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.objective = tuple(Fraction(c) for c in self.objective)
        if not self.objective:
            raise MalformedProblemError("problem needs at least one variable")
        if self.sense not in ("min", "max"):
            raise MalformedProblemError(f"bad sense {self.sense!r}")
        n = len(self.objective)
        if self.bounds is None:
            self.bounds = tuple((None, None) for _ in range(n))
        else:
            if len(self.bounds) != n:
                raise MalformedProblemError("bounds dimension mismatch")
            self.bounds = tuple(
                (
                    None if lo is None else Fraction(lo),
                    None if up is None else Fraction(up),
                )
                for lo, up in self.bounds
            )
        for lo, up in self.bounds:
            if lo is not None and up is not None and lo > up:
                raise MalformedProblemError("variable bounds cross")

    @property
    def n(self) -> int:
        return len(self.objective)

    def add_row(
        self, coeffs: Sequence[RationalLike], rel: str, rhs: RationalLike
    ) -> None:
        if len(coeffs) != self.n:
            raise MalformedProblemError("row dimension mismatch")
        if rel not in (LE, GE, EQ):
            raise MalformedProblemError(f"bad relation {rel!r}")
        self.rows.append(
            (tuple(Fraction(c) for c in coeffs), rel, Fraction(rhs))
        )

    def solve(self, pivot_budget: int = 200_000) -> LpSolution:
        return _solve(self, pivot_budget)

    def dump(self) -> str:
        """Plain-text rendering for external cross-checking.

        Grammar (one item per line)::

            min|max c1 v1 + c2 v2 + ...
            s.t.
            r<k>: a1 v1 + ... <=|>=|= b
            bounds
            lo <= v<j> <= hi        # -inf / inf for missing bounds

        All scalars are exact "num/den" strings.
        """

        def terms(coeffs):
            return " + ".join(
                f"{coeff} v{j + 1}" for j, coeff in enumerate(coeffs)
            )

        lines = [f"{self.sense} {terms(self.objective)}", "s.t."]
        for k, (coeffs, rel, rhs) in enumerate(self.rows):
            lines.append(f"r{k + 1}: {terms(coeffs)} {rel} {rhs}")
        lines.append("bounds")
        for j, (lo, up) in enumerate(self.bounds):  # type: ignore[arg-type]
            lo_s = "-inf" if lo is None else str(lo)
            up_s = "inf" if up is None else str(up)
            lines.append(f"{lo_s} <= v{j + 1} <= {up_s}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Standardization: min c.z, A z = b, z >= 0
# ---------------------------------------------------------------------------


class _Standard:
    """Standard-form image of an LpProblem plus the maps back."""

    def __init__(self, prob: LpProblem) -> None:
        n = prob.n
        minimize = prob.sense == "min"
        c_user = [c if minimize else -c for c in prob.objective]

        # Variable substitutions onto nonnegative standard columns.
        self.col_of: list[tuple] = []  # per user var: ("shift",col,lo) | ("negshift",col,up) | ("split",cp,cn)
        self.obj_const = ZERO
        cols: list[Fraction] = []  # structural objective coefficients
        extra_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        for j in range(n):
            lo, up = prob.bounds[j]  # type: ignore[index]
            cj = c_user[j]
            if lo is not None:
                col = len(cols)
                cols.append(cj)
                self.col_of.append(("shift", col, lo))
                self.obj_const += cj * lo
                if up is not None:
                    extra_rows.append(({col: Fraction(1)}, LE, up - lo))
            elif up is not None:
                col = len(cols)
                cols.append(-cj)
                self.col_of.append(("negshift", col, up))
                self.obj_const += cj * up
            else:
                cp = len(cols)
                cols.append(cj)
                cn = len(cols)
                cols.append(-cj)
                self.col_of.append(("split", cp, cn))

        # Rows: substitute variables, then normalize rhs >= 0.
        self.row_flip: list[Fraction] = []  # +1 kept, -1 flipped (user rows only)
        std_rows: list[tuple[dict[int, Fraction], str, Fraction]] = []
        for coeffs, rel, rhs in prob.rows:
            entry: dict[int, Fraction] = {}
            shift = ZERO
            for j, a in enumerate(coeffs):
                if a == 0:
                    continue
                kind = self.col_of[j]
                if kind[0] == "shift":
                    entry[kind[1]] = entry.get(kind[1], ZERO) + a
                    shift += a * kind[2]
                elif kind[0] == "negshift":
                    entry[kind[1]] = entry.get(kind[1], ZERO) - a
                    shift += a * kind[2]
                else:
                    entry[kind[1]] = entry.get(kind[1], ZERO) + a
                    entry[kind[2]] = entry.get(kind[2], ZERO) - a
            std_rows.append((entry, rel, rhs - shift))
        self.n_user_rows = len(std_rows)
        std_rows.extend(extra_rows)

        n_struct = len(cols)
        slack_of_row: list[Optional[int]] = []
        n_slack = 0
        for _, rel, _ in std_rows:
            if rel in (LE, GE):
                slack_of_row.append(n_struct + n_slack)
                n_slack += 1
            else:
                slack_of_row.append(None)

        m = len(std_rows)
        width = n_struct + n_slack
        A = [[ZERO] * width for _ in range(m)]
        b = [ZERO] * m
        flips = []
        for i, (entry, rel, rhs) in enumerate(std_rows):
            flip = rhs < 0
            sign = Fraction(-1) if flip else Fraction(1)
            flips.append(sign)
            for col, a in entry.items():
                A[i][col] = sign * a
            b[i] = sign * rhs
            if rel == EQ:
                continue
            slack_sign = Fraction(1) if rel == LE else Fraction(-1)
            A[i][slack_of_row[i]] = sign * slack_sign  # type: ignore[index]
        self.row_flip = flips[: self.n_user_rows]

        self.A = A
        self.b = b
        self.c = cols + [ZERO] * n_slack
        self.minimize = minimize
        self.n_struct = n_struct
        self.width = width

    def user_values(self, z: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = []
        for kind in self.col_of:
            if kind[0] == "shift":
                out.append(z[kind[1]] + kind[2])
            elif kind[0] == "negshift":
                out.append(kind[2] - z[kind[1]])
            else:
                out.append(z[kind[1]] - z[kind[2]])
        return tuple(out)

    def user_direction(self, z: Sequence[Fraction]) -> tuple[Fraction, ...]:
        out = []
        for kind in self.col_of:
            if kind[0] == "shift":
                out.append(z[kind[1]])
            elif kind[0] == "negshift":
                out.append(-z[kind[1]])
            else:
                out.append(z[kind[1]] - z[kind[2]])
        return tuple(out)


# ---------------------------------------------------------------------------
# Simplex core
# ---------------------------------------------------------------------------


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction], basis: list[int]):
        self.rows = rows  # m x width
        self.rhs = rhs
        self.basis = basis
        self.obj: list[Fraction] = []
        self.obj_rhs = ZERO  # equals -(current objective value)
        self.pivots = 0
        self.bland = False
        self.stall = 0

    def set_objective(self, cost: Sequence[Fraction]) -> None:
        width = len(cost)
        obj = list(cost)
        obj_rhs = ZERO
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb != 0:
                row = self.rows[i]
                for j in range(width):
                    if row[j] != 0:
                        obj[j] -= cb * row[j]
                obj_rhs -= cb * self.rhs[i]
        self.obj = obj
        self.obj_rhs = obj_rhs

    def value(self) -> Fraction:
        return -self.obj_rhs

    def pivot(self, r: int, c: int) -> None:
        rows, rhs = self.rows, self.rhs
        prow = rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            rows[r] = prow = [v * inv for v in prow]
            rhs[r] = rhs[r] * inv
        for i in range(len(rows)):
            if i == r:
                continue
            factor = rows[i][c]
            if factor != 0:
                rows[i] = [a - factor * b for a, b in zip(rows[i], prow)]
                rhs[i] -= factor * rhs[r]
        factor = self.obj[c]
        if factor != 0:
            self.obj = [a - factor * b for a, b in zip(self.obj, prow)]
            self.obj_rhs -= factor * rhs[r]
        self.basis[r] = c
        self.pivots += 1

    def run(self, barred: set[int], budget: int) -> Optional[int]:
        """Pivot to optimality.  Returns an entering column on unboundedness,
        ``None`` at optimality.  Raises on budget exhaustion."""
        m = len(self.rows)
        while True:
            if self.pivots > budget:
                raise PivotBudgetExceededError(
                    f"simplex exceeded {budget} pivots"
                )
            enter = -1
            if self.bland:
                for j, rc in enumerate(self.obj):
                    if j not in barred and rc < 0:
                        enter = j
                        break
            else:
                best = ZERO
                for j, rc in enumerate(self.obj):
                    if j not in barred and rc < best:
                        best = rc
                        enter = j
            if enter < 0:
                return None
            leave = -1
            best_ratio: Optional[Fraction] = None
            for i in range(m):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio
                            and self.basis[i] < self.basis[leave])
                    ):
                        best_ratio = ratio
                        leave = i
            if leave < 0:
                return enter  # unbounded along this column
            if best_ratio == 0:
                self.stall += 1
                if self.stall > _DEGENERATE_LIMIT:
                    self.bland = True
            else:
                self.stall = 0
            self.pivot(leave, enter)


def _solve(prob: LpProblem, budget: int) -> LpSolution:
    std = _Standard(prob)
    m = len(std.A)
    width = std.width

    # Initial basis: slack columns for <= rows (coefficient +1 after the
    # sign normalization only when the row was not flipped); artificials
    # everywhere else.
    art_cols: dict[int, int] = {}
    init_col: list[int] = []
    rows = [list(r) for r in std.A]
    for i in range(m):
        slack_col = next(
            (j for j in range(std.n_struct, width) if rows[i][j] == 1), None
        )
        if slack_col is not None and all(
            rows[k][slack_col] == 0 for k in range(m) if k != i
        ):
            init_col.append(slack_col)
        else:
            art_cols[i] = width + len(art_cols)
            init_col.append(art_cols[i])
    n_art = len(art_cols)
    full_width = width + n_art
    for i in range(m):
        rows[i] = rows[i] + [ZERO] * n_art
        if i in art_cols:
            rows[i][art_cols[i]] = Fraction(1)
    tab = _Tableau(rows, list(std.b), list(init_col))

    alive = list(range(m))
    if n_art:
        phase1_cost = [ZERO] * width + [Fraction(1)] * n_art
        tab.set_objective(phase1_cost)
        unb = tab.run(barred=set(), budget=budget)
        if unb is not None:
            raise LnatcutError("phase-1 LP cannot be unbounded")
        if tab.value() > 0:
            farkas = _extract_duals(tab, phase1_cost, init_col)
            _verify_farkas(std, farkas)
            return LpSolution(
                status=INFEASIBLE,
                farkas=tuple(
                    std.row_flip[i] * farkas[i] for i in range(std.n_user_rows)
                ),
                pivots=tab.pivots,
            )
        _drive_out_artificials(tab, set(art_cols.values()), width, alive, init_col)

    barred = set(art_cols.values())
    phase2_cost = list(std.c) + [ZERO] * n_art
    tab.set_objective(phase2_cost)
    unb_col = tab.run(barred=barred, budget=budget)
    if unb_col is not None:
        z_ray = [ZERO] * full_width
        z_ray[unb_col] = Fraction(1)
        for i, bi in enumerate(tab.basis):
            z_ray[bi] = -tab.rows[i][unb_col]
        direction = std.user_direction(z_ray[:width])
        return LpSolution(status=UNBOUNDED, ray=direction, pivots=tab.pivots)

    z = [ZERO] * full_width
    for i, bi in enumerate(tab.basis):
        z[bi] = tab.rhs[i]
    values = std.user_values(z[:width])
    objective = sum(
        (c * v for c, v in zip(prob.objective, values)), ZERO
    )
    y = _extract_duals(tab, phase2_cost, init_col)
    _verify_optimal(prob, std, z[:width], y, alive)
    duals_user = tuple(
        std.row_flip[i] * y[alive.index(i)] if i in alive else ZERO
        for i in range(std.n_user_rows)
    )
    return LpSolution(
        status=OPTIMAL,
        values=values,
        objective=objective,
        duals=duals_user,
        pivots=tab.pivots,
    )


def _extract_duals(
    tab: _Tableau, cost: Sequence[Fraction], init_col: list[int]
) -> list[Fraction]:
    """y_i = cost(init identity column of row i) - its reduced cost."""
    y = []
    for i in range(len(tab.rows)):
        col = init_col[i]
        y.append(cost[col] - tab.obj[col])
    return y


def _drive_out_artificials(
    tab: _Tableau,
    art_cols: set[int],
    width: int,
    alive: list[int],
    init_col: list[int],
) -> None:
    """Pivot zero-valued basic artificials out; drop redundant rows."""
    drop: list[int] = []
    for i in range(len(tab.rows)):
        if tab.basis[i] not in art_cols:
            continue
        pivot_col = next(
            (j for j in range(width) if tab.rows[i][j] != 0), None
        )
        if pivot_col is None:
            drop.append(i)
        else:
            tab.pivot(i, pivot_col)
    for i in sorted(drop, reverse=True):
        del tab.rows[i]
        del tab.rhs[i]
        del tab.basis[i]
        del alive[i]
        del init_col[i]


def _verify_farkas(std: _Standard, y: Sequence[Fraction]) -> None:
    for j in range(std.width):
        combo = sum((y[i] * std.A[i][j] for i in range(len(std.A))), ZERO)
        if combo > 0:
            raise LnatcutError("Farkas certificate failed verification")
    if sum((y[i] * std.b[i] for i in range(len(std.b))), ZERO) <= 0:
        raise LnatcutError("Farkas certificate failed verification")


def _verify_optimal(
    prob: LpProblem,
    std: _Standard,
    z: Sequence[Fraction],
    y: Sequence[Fraction],
    alive: list[int],
) -> None:
    """Independent recheck against the original standard-form data:
    primal feasibility, dual feasibility and a zero duality gap."""
    if any(v < 0 for v in z):
        raise LnatcutError("negative standard variable in optimal solution")
    for pos, i in enumerate(alive):
        lhs = sum((std.A[i][j] * z[j] for j in range(std.width) if z[j] != 0), ZERO)
        if lhs != std.b[i]:
            raise LnatcutError("optimal solution violates a constraint row")
    dual_obj = sum((y[pos] * std.b[i] for pos, i in enumerate(alive)), ZERO)
    primal_obj = sum((std.c[j] * z[j] for j in range(std.width) if z[j] != 0), ZERO)
    if dual_obj != primal_obj:
        raise LnatcutError("strong duality gap is nonzero")
    for j in range(std.width):
        reduced = std.c[j] - sum(
            (y[pos] * std.A[i][j] for pos, i in enumerate(alive)), ZERO
        )
        if reduced < 0:
            raise LnatcutError("dual infeasible at claimed optimum")


# ---------------------------------------------------------------------------
# Helpers built on the kernel
# ---------------------------------------------------------------------------


@dataclass
class RowsResult:
    status: str
    value: Optional[Fraction] = None
    point: Optional[tuple[Fraction, ...]] = None


def minimize_rows(
    objective: Sequence[RationalLike],
    rows: Sequence[tuple[Sequence[RationalLike], RationalLike]],
    pivot_budget: int = 200_000,
) -> RowsResult:
    """``min objective . v  s.t.  a . v >= b`` for each row, v free.

    Solved through the LP dual (``max b.y : A^T y = objective, y >= 0``)
    so the simplex row count equals ``len(objective)``; the primal point is
    read off the dual solve's multipliers.
    """
    c = tuple(Fraction(v) for v in objective)
    d = len(c)
    mat = [tuple(Fraction(a) for a in row) for row, _ in rows]
    rhs = [Fraction(b) for _, b in rows]
    for row in mat:
        if len(row) != d:
            raise MalformedProblemError("row dimension mismatch")

    def build_dual(obj_vec: Sequence[Fraction]) -> LpProblem:
        dual = LpProblem(
            objective=obj_vec if mat else [ZERO],
            sense="max",
            bounds=[(0, None)] * max(len(mat), 1),
        )
        for j in range(d):
            dual.add_row([row[j] for row in mat] or [ZERO], EQ, c[j])
        return dual

    if not mat:
        # No constraints: bounded only if the objective is identically zero.
        if all(v == 0 for v in c):
            return RowsResult(OPTIMAL, ZERO, tuple(ZERO for _ in range(d)))
        return RowsResult(UNBOUNDED)

    sol = build_dual(rhs).solve(pivot_budget)
    if sol.status == OPTIMAL:
        assert sol.duals is not None
        point = tuple(-u for u in sol.duals)
        value = sum((ci * vi for ci, vi in zip(c, point)), ZERO)
        if value != sol.objective:
            raise LnatcutError("primal/dual objective mismatch")
        return RowsResult(OPTIMAL, value, point)
    if sol.status == UNBOUNDED:
        return RowsResult(INFEASIBLE)
    # Dual infeasible: primal is unbounded if feasible at all.  Probe
    # feasibility via the homogeneous Farkas alternative.
    probe = LpProblem(
        objective=rhs,
        sense="max",
        bounds=[(0, None)] * len(mat),
    )
    for j in range(d):
        probe.add_row([row[j] for row in mat], EQ, ZERO)
    psol = probe.solve(pivot_budget)
    if psol.status == UNBOUNDED or (
        psol.status == OPTIMAL and psol.objective > 0  # type: ignore[operator]
    ):
        return RowsResult(INFEASIBLE)
    return RowsResult(UNBOUNDED)


def membership(
    point: Sequence[RationalLike],
    generators: Sequence[Sequence[RationalLike]],
    rays: Sequence[Sequence[RationalLike]] = (),
) -> bool:
    """Is ``point`` in conv(generators) + cone(rays)?  Exact LP feasibility."""
    pt = tuple(Fraction(v) for v in point)
    gens = [tuple(Fraction(v) for v in g) for g in generators]
    rs = [tuple(Fraction(v) for v in r) for r in rays]
    if not gens:
        raise MalformedProblemError("need at least one generator")
    d = len(pt)
    for g in gens:
        if len(g) != d:
            raise MalformedProblemError("generator dimension mismatch")
    for r in rs:
        if len(r) != d:
            raise MalformedProblemError("ray dimension mismatch")
    n_vars = len(gens) + len(rs)
    prob = LpProblem(
        objective=[ZERO] * n_vars,
        sense="min",
        bounds=[(0, None)] * n_vars,
    )
    for k in range(d):
        prob.add_row(
            [g[k] for g in gens] + [r[k] for r in rs], EQ, pt[k]
        )
    prob.add_row([Fraction(1)] * len(gens) + [ZERO] * len(rs), EQ, Fraction(1))
    return prob.solve().status == OPTIMAL
