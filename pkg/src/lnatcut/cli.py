"""Command-line front end: instance parsing, command dispatch, reports.

Instance files are JSON with every scalar an exact "num/den" string and
"inf"/"-inf" for infinite bounds.  All indices are 1-based at this
boundary (permutations, subsets, cycle arcs) and converted to the
library's 0-based convention on entry.

Exit codes: 0 for success or a passing property, 1 for a failing property
(a witness is printed), 2 for usage, parse or validation errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional, Sequence

from . import checkers, jointepi, misepi, mixing, oracle, sepi
from .core import (
    DiscreteBox,
    LinearInequality,
    Permutation,
    rat,
    rat_str,
)
from .errors import LnatcutError, ParseError, ValidationError
from .fnzoo import (
    FunctionOracle,
    add,
    dilate,
    make_bivariate_diff,
    make_gen_int_mixing,
    make_max_affine_pair,
    make_max_component,
    make_nonconvex_demo,
    make_quadratic,
    make_tabulated,
    scale,
)

FORMAT_VERSION = 1


# ---------------------------------------------------------------------------
# Instance files
# ---------------------------------------------------------------------------


@dataclass
class InstanceFile:
    """Parsed and validated instance: exactly one oracle-style function
    (or list, for joint commands) or one mixed instance, plus optional
    working box, side constraints and cycle specs."""

    version: int
    spec: dict
    function: Optional[FunctionOracle] = None
    functions: tuple[FunctionOracle, ...] = ()
    paired: tuple[FunctionOracle, ...] = ()
    mixed: Optional[misepi.MixedInstance] = None
    mixing_instance: Optional[mixing.MixingInstance] = None
    index_map: Optional[tuple[int, ...]] = None  # sorted pos -> 1-based user index
    workbox: Optional[DiscreteBox] = None
    constraints: tuple[LinearInequality, ...] = ()
    cycles: tuple[misepi.CycleSpec, ...] = ()


def _bound_from(text: Any, *, field_name: str) -> Optional[int]:
    if text in ("inf", "-inf"):
        return None
    if isinstance(text, int):
        return text
    if isinstance(text, str):
        try:
            return int(text)
        except ValueError as exc:
            raise ParseError(f"{field_name}: bad bound {text!r}") from exc
    raise ParseError(f"{field_name}: bad bound {text!r}")


def _box_from(obj: Any, *, field_name: str) -> DiscreteBox:
    if not isinstance(obj, dict) or "lower" not in obj or "upper" not in obj:
        raise ParseError(f"{field_name}: box needs 'lower' and 'upper'")
    lower = tuple(
        _bound_from(v, field_name=f"{field_name}.lower") for v in obj["lower"]
    )
    upper = tuple(
        _bound_from(v, field_name=f"{field_name}.upper") for v in obj["upper"]
    )
    try:
        return DiscreteBox(lower, upper)
    except ValidationError as exc:
        raise ParseError(f"{field_name}: {exc}") from exc


def _rats(values: Any, *, field_name: str) -> tuple[Fraction, ...]:
    if not isinstance(values, (list, tuple)):
        raise ParseError(f"{field_name}: expected a list of rationals")
    try:
        return tuple(rat(v) for v in values)
    except ValidationError as exc:
        raise ParseError(f"{field_name}: {exc}") from exc


def _build_function(spec: Any, *, field_name: str) -> FunctionOracle:
    if not isinstance(spec, dict) or "type" not in spec:
        raise ParseError(f"{field_name}: function spec needs a 'type'")
    kind = spec["type"]
    try:
        if kind == "gen_int_mixing":
            return make_gen_int_mixing(_rats(spec["q"], field_name=f"{field_name}.q"))
        if kind == "max_component":
            box = (
                _box_from(spec["box"], field_name=f"{field_name}.box")
                if "box" in spec
                else None
            )
            return make_max_component(int(spec["n"]), box)
        if kind == "tabulated":
            box = _box_from(spec["box"], field_name=f"{field_name}.box")
            values = {
                tuple(int(v) for v in entry[0]): rat(entry[1])
                for entry in spec["values"]
            }
            return make_tabulated(box, values)
        if kind == "bivariate_convex_diff":
            box = _box_from(spec["box"], field_name=f"{field_name}.box")
            table = {int(t): rat(v) for t, v in spec["table"]}
            return make_bivariate_diff(table, box)
        if kind == "quadratic_mmatrix":
            box = _box_from(spec["box"], field_name=f"{field_name}.box")
            Q = [
                _rats(row, field_name=f"{field_name}.Q") for row in spec["Q"]
            ]
            return make_quadratic(Q, _rats(spec["b"], field_name=f"{field_name}.b"), box)
        if kind == "affine_max_pair":
            box = _box_from(spec["box"], field_name=f"{field_name}.box")
            return make_max_affine_pair(
                _rats(spec["a"], field_name=f"{field_name}.a"),
                rat(spec["a0"]),
                _rats(spec["b"], field_name=f"{field_name}.b"),
                rat(spec["b0"]),
                box,
            )
        if kind == "nonconvex_demo":
            return make_nonconvex_demo()
        if kind == "scale":
            return scale(
                rat(spec["alpha"]),
                _build_function(spec["inner"], field_name=f"{field_name}.inner"),
            )
        if kind == "dilate":
            return dilate(
                [int(v) for v in spec["a"]],
                int(spec["beta"]),
                _build_function(spec["inner"], field_name=f"{field_name}.inner"),
            )
        if kind == "sum":
            inners = [
                _build_function(s, field_name=f"{field_name}.inner[{i}]")
                for i, s in enumerate(spec["inner"])
            ]
            out = inners[0]
            for nxt in inners[1:]:
                out = add(out, nxt)
            return out
    except KeyError as exc:
        raise ParseError(f"{field_name}: missing field {exc}") from exc
    raise ParseError(f"{field_name}: unknown function type {kind!r}")


def _constraint_from(obj: Any, *, field_name: str) -> LinearInequality:
    if not isinstance(obj, dict):
        raise ParseError(f"{field_name}: expected an object")
    try:
        return LinearInequality(
            rat(obj.get("lhs_w", "0")),
            _rats(obj.get("lhs_y", []), field_name=f"{field_name}.lhs_y"),
            _rats(obj["rhs_x"], field_name=f"{field_name}.rhs_x"),
            rat(obj.get("rhs_const", "0")),
        )
    except KeyError as exc:
        raise ParseError(f"{field_name}: missing field {exc}") from exc


def parse_instance(path: str) -> InstanceFile:
    """Load, validate and build an instance file."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    version = data.get("version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise ParseError(f"{path}: unsupported version {version}")
    inst = InstanceFile(version=version, spec=data)

    fn_spec = data.get("function")
    if fn_spec is not None:
        kind = fn_spec.get("type") if isinstance(fn_spec, dict) else None
        if kind == "cmix":
            q = _rats(fn_spec["q"], field_name="function.q")
            inst.mixed = misepi.cmix_instance(q)
        elif kind == "mcmix":
            inst.mixed = misepi.mcmix_instance(
                _rats(fn_spec["q"], field_name="function.q"),
                _rats(fn_spec["c"], field_name="function.c"),
            )
        elif kind == "general_mixed":
            box = _box_from(fn_spec["box"], field_name="function.box")
            components = [
                make_tabulated(
                    box,
                    {
                        tuple(int(v) for v in entry[0]): rat(entry[1])
                        for entry in comp["values"]
                    },
                )
                for comp in fn_spec["components"]
            ]
            inst.mixed = misepi.general_instance(components)
        else:
            inst.function = _build_function(fn_spec, field_name="function")
            if kind == "gen_int_mixing":
                q_user = _rats(fn_spec["q"], field_name="function.q")
                order = sorted(
                    range(len(q_user)), key=lambda i: q_user[i], reverse=True
                )
                q_sorted = tuple(q_user[i] for i in order)
                try:
                    inst.mixing_instance = mixing.MixingInstance(q_sorted)
                except ValidationError as exc:
                    raise ParseError(f"function.q: {exc}") from exc
                inst.index_map = tuple(i + 1 for i in order)
                if q_sorted != q_user:
                    inst.function = make_gen_int_mixing(q_sorted)

    fns_spec = data.get("functions")
    if fns_spec is not None:
        inst.functions = tuple(
            _build_function(s, field_name=f"functions[{i}]")
            for i, s in enumerate(fns_spec)
        )
    paired_spec = data.get("paired")
    if paired_spec is not None:
        inst.paired = tuple(
            _build_function(s, field_name=f"paired[{i}]")
            for i, s in enumerate(paired_spec)
        )

    if inst.function is None and not inst.functions and inst.mixed is None:
        raise ParseError(f"{path}: no 'function' or 'functions' given")

    if "workbox" in data:
        inst.workbox = _box_from(data["workbox"], field_name="workbox")
    if "constraints" in data:
        inst.constraints = tuple(
            _constraint_from(c, field_name=f"constraints[{i}]")
            for i, c in enumerate(data["constraints"])
        )
    if "cycles" in data:
        cycles = []
        for i, arcs in enumerate(data["cycles"]):
            try:
                cycles.append(
                    misepi.CycleSpec(
                        tuple((int(a) - 1, int(b) - 1) for a, b in arcs)
                    )
                )
            except (TypeError, ValueError) as exc:
                raise ParseError(f"cycles[{i}]: {exc}") from exc
        inst.cycles = tuple(cycles)
    return inst


def serialize_instance(inst: InstanceFile) -> str:
    """Canonical byte-stable rendering of a parsed instance file."""
    return json.dumps(inst.spec, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Report plumbing
# ---------------------------------------------------------------------------


@dataclass
class Report:
    command: str
    ok: bool
    payload: dict = field(default_factory=dict)
    lines: list[str] = field(default_factory=list)

    def emit(self, fmt: str, decimal: bool) -> str:
        if fmt == "json":
            body = dict(self.payload)
            body["command"] = self.command
            body["ok"] = self.ok
            return json.dumps(body, indent=2, sort_keys=True, default=str)
        out = list(self.lines)
        if decimal:
            out = [_decorate_decimals(line) for line in out]
        out.append("PASS" if self.ok else "FAIL")
        return "\n".join(out)


def _decorate_decimals(line: str) -> str:
    tokens = []
    for token in line.split(" "):
        core = token.rstrip(",;")
        if "/" in core:
            try:
                value = Fraction(core)
            except (ValueError, ZeroDivisionError):
                tokens.append(token)
                continue
            approx = f"{float(value):.6g}"
            tokens.append(token + f"(~{approx})")
        else:
            tokens.append(token)
    return " ".join(tokens)


def _fmt_point(values: Sequence) -> str:
    return "(" + ", ".join(rat_str(Fraction(v)) for v in values) + ")"


def _parse_rat_list(text: str, *, what: str) -> tuple[Fraction, ...]:
    try:
        return tuple(rat(part) for part in text.split(",") if part != "")
    except ValidationError as exc:
        raise ParseError(f"{what}: {exc}") from exc


def _parse_int_list(text: str, *, what: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part != "")
    except ValueError as exc:
        raise ParseError(f"{what}: {exc}") from exc


def _parse_box_arg(text: str, *, what: str) -> DiscreteBox:
    lower, upper = [], []
    for part in text.split(","):
        if ".." not in part:
            raise ParseError(f"{what}: each side must be 'lo..hi'")
        lo, hi = part.split("..", 1)
        lower.append(None if lo.strip() == "-inf" else int(lo))
        upper.append(None if hi.strip() == "inf" else int(hi))
    try:
        return DiscreteBox(tuple(lower), tuple(upper))
    except ValidationError as exc:
        raise ParseError(f"{what}: {exc}") from exc


def _witness_payload(witness) -> dict:
    if witness is None:
        return {}
    return {
        "witness": {
            "kind": witness.kind,
            "x": list(witness.x),
            "y": list(witness.y),
            "lhs": rat_str(witness.lhs),
            "rhs": rat_str(witness.rhs),
            "alpha": witness.alpha,
        }
    }


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

_CHECK_PROPS = {
    "lnat": checkers.is_lnat_convex,
    "lattice-sub": checkers.is_lattice_submodular,
    "translation-sub": checkers.is_translation_submodular,
    "l": checkers.is_l_convex,
    "integrally-convex": checkers.is_integrally_convex,
}


def _cmd_check(args, inst: InstanceFile) -> Report:
    f = inst.function
    if f is None:
        raise ParseError("check needs a single pure-integer function")
    box = (
        _parse_box_arg(args.box, what="--box")
        if args.box
        else (inst.workbox or f.box)
    )
    report = _CHECK_PROPS[args.property](f, box)
    lines = [f"property {report.property}: {'passed' if report.passed else 'failed'}"]
    payload: dict = {"property": report.property, "passed": report.passed}
    if report.witness is not None:
        w = report.witness
        lines.append(
            f"witness {w.kind}: x={w.x} y={w.y}"
            + (f" alpha={w.alpha}" if w.alpha is not None else "")
            + f" lhs={rat_str(w.lhs)} rhs={rat_str(w.rhs)}"
        )
        payload.update(_witness_payload(w))
    if report.increment is not None:
        lines.append(f"increment r = {rat_str(report.increment)}")
        payload["increment"] = rat_str(report.increment)
    return Report("check", report.passed, payload, lines)


def _cmd_sepi_separate(args, inst: InstanceFile) -> Report:
    f = inst.function
    if f is None:
        raise ParseError("sepi separate needs a pure-integer function")
    x_hat = _parse_rat_list(args.point, what="--point")
    w_hat = rat(args.w)
    box = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else (inst.workbox or f.box)
    )
    cert = sepi.separate_fractional_greedy(f, x_hat, w_hat, box=box)
    lines = [
        f"anchor p = {cert.p}",
        f"order delta = {cert.delta.to_one_based()}",
        f"cut: {cert.inequality}",
        f"violation = {rat_str(cert.violation)}",
    ]
    payload = {
        "p": list(cert.p),
        "delta": list(cert.delta.to_one_based()),
        "inequality": str(cert.inequality),
        "violation": rat_str(cert.violation),
        "violated": cert.violation > 0,
    }
    return Report("sepi separate", True, payload, lines)


def _cmd_sepi_hull(args, inst: InstanceFile) -> Report:
    f = inst.function
    if f is None:
        raise ParseError("sepi hull needs a pure-integer function")
    workbox = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else inst.workbox
    )
    if workbox is None:
        raise ParseError("sepi hull needs a finite --workbox")
    from .core import canonicalize

    cuts = [canonicalize(c) for c in sepi.assemble_hull_lp(f, workbox)]
    lines = [f"{len(cuts)} inequalities (cuts then bounds)"]
    lines += [str(c) for c in cuts]
    payload = {"count": len(cuts), "inequalities": [str(c) for c in cuts]}
    return Report("sepi hull", True, payload, lines)


def _cmd_minimize(args, inst: InstanceFile) -> Report:
    f = inst.function
    if f is None:
        raise ParseError("minimize needs a pure-integer function")
    workbox = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else inst.workbox
    )
    if workbox is None:
        raise ParseError("minimize needs a finite --workbox")
    objective = (
        _parse_rat_list(args.objective, what="--objective")
        if args.objective
        else tuple([Fraction(0)] * workbox.n + [Fraction(1)])
    )
    result = sepi.minimize_cutting_plane(f, workbox, objective, inst.constraints)
    lines = [
        f"optimum = {rat_str(result.optimum)}",
        f"argmin (x, w) = {_fmt_point(result.argmin)}",
        f"cuts used = {result.cut_count}",
    ]
    payload = {
        "optimum": rat_str(result.optimum),
        "argmin": [rat_str(v) for v in result.argmin],
        "cuts": result.cut_count,
    }
    return Report("minimize", True, payload, lines)


def _cmd_mixing_buildk(args, inst: InstanceFile) -> Report:
    mi = inst.mixing_instance
    if mi is None:
        raise ParseError("mixing buildk needs a gen_int_mixing instance")
    p = _parse_int_list(args.p, what="--p")
    delta = Permutation.from_one_based(
        _parse_int_list(args.delta, what="--delta")
    )
    result = mixing.build_k(mi, p, delta)
    k_one_based = tuple(i + 1 for i in result.K)
    cut = mixing.mixing_inequality(mi, result.K, result.form or mixing.FORM_A)
    lines = [
        f"K = {{{', '.join(map(str, k_one_based))}}}",
        f"form = {result.form}",
        f"inequality: {cut.inequality}",
    ]
    payload = {
        "K": list(k_one_based),
        "form": result.form,
        "inequality": str(cut.inequality),
    }
    if inst.index_map is not None and tuple(inst.index_map) != tuple(
        range(1, mi.n + 1)
    ):
        lines.append(f"(sorted index -> user index map: {inst.index_map})")
        payload["index_map"] = list(inst.index_map)
    return Report("mixing buildk", True, payload, lines)


def _cmd_mixing_roundtrip(args, inst: InstanceFile) -> Report:
    mi = inst.mixing_instance
    if mi is None:
        raise ParseError("mixing roundtrip needs a gen_int_mixing instance")
    import random

    if args.p and args.delta:
        cases = [
            (
                _parse_int_list(args.p, what="--p"),
                Permutation.from_one_based(_parse_int_list(args.delta, what="--delta")),
            )
        ]
    else:
        rng = random.Random(args.seed)
        cases = []
        for _ in range(args.samples):
            p = tuple(rng.randint(-4, 4) for _ in range(mi.n))
            order = list(range(mi.n))
            rng.shuffle(order)
            cases.append((p, Permutation(tuple(order))))
    failures = []
    for p, delta in cases:
        if not mixing.mixing_from_sepi_roundtrip(mi, p, delta):
            failures.append((p, delta.to_one_based()))
    ok = not failures
    lines = [f"{len(cases)} round-trips, {len(failures)} failures"]
    lines += [f"failed at p={p} delta={d}" for p, d in failures[:5]]
    payload = {
        "cases": len(cases),
        "failures": [
            {"p": list(p), "delta": list(d)} for p, d in failures
        ],
    }
    return Report("mixing roundtrip", ok, payload, lines)


def _cmd_joint_separate(args, inst: InstanceFile) -> Report:
    if not inst.functions:
        raise ParseError("joint separate needs a 'functions' list")
    joint = jointepi.JointInstance(inst.functions)
    x_hat = _parse_rat_list(args.point, what="--point")
    w = _parse_rat_list(args.w, what="--w")
    cuts = jointepi.separate_joint(joint, w, x_hat)
    lines = [f"{len(cuts)} violated cuts"]
    for i, cert in enumerate(cuts):
        lines.append(
            f"[{i}] p={cert.p} delta={cert.delta.to_one_based()} "
            f"violation={rat_str(cert.violation)}: {cert.inequality}"
        )
    payload = {
        "cuts": [
            {
                "p": list(c.p),
                "delta": list(c.delta.to_one_based()),
                "violation": rat_str(c.violation),
                "inequality": str(c.inequality),
            }
            for c in cuts
        ]
    }
    return Report("joint separate", True, payload, lines)


def _cmd_joint_member(args, inst: InstanceFile) -> Report:
    if not inst.functions:
        raise ParseError("joint member needs a 'functions' list")
    joint = jointepi.JointInstance(
        inst.functions, inst.paired if inst.paired else None
    )
    workbox = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else inst.workbox
    )
    if workbox is None:
        raise ParseError("joint member needs a finite --workbox")
    x_hat = _parse_rat_list(args.point, what="--point")
    w = _parse_rat_list(args.w, what="--w")
    if joint.linked:
        if not args.eta:
            raise ParseError("linked instances need --eta")
        eta = _parse_rat_list(args.eta, what="--eta")
        inside = jointepi.joint_hull_membership(joint, (eta, w, x_hat), workbox)
    else:
        inside = jointepi.joint_hull_membership(joint, (w, x_hat), workbox)
    lines = [f"member: {inside}"]
    return Report("joint member", True, {"member": inside}, lines)


def _cmd_misepi_separate(args, inst: InstanceFile) -> Report:
    mixed = inst.mixed
    if mixed is None:
        raise ParseError("misepi separate needs a mixed instance")
    w_hat = rat(args.w)
    y_hat = _parse_rat_list(args.y, what="--y")
    x_hat = _parse_rat_list(args.x, what="--x")
    box = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else inst.workbox
    )
    cut = misepi.separate_misepi(mixed, (w_hat, y_hat, x_hat), box=box)
    if cut is None:
        return Report(
            "misepi separate",
            True,
            {"violated": False},
            ["no violated inequality (point is inside)"],
        )
    lines = [
        f"anchor p = {cut.p}",
        f"order delta = {cut.delta.to_one_based()}",
        f"weights u0 = {rat_str(cut.weights.u0)}, u = {_fmt_point(cut.weights.u)}",
        f"cut: {cut.inequality}",
        f"violation = {rat_str(cut.violation)}",
    ]
    payload = {
        "violated": True,
        "p": list(cut.p),
        "delta": list(cut.delta.to_one_based()),
        "u0": rat_str(cut.weights.u0),
        "u": [rat_str(v) for v in cut.weights.u],
        "inequality": str(cut.inequality),
        "violation": rat_str(cut.violation),
    }
    return Report("misepi separate", True, payload, lines)


def _cmd_misepi_hull(args, inst: InstanceFile) -> Report:
    mixed = inst.mixed
    if mixed is None:
        raise ParseError("misepi hull needs a mixed instance")
    workbox = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else inst.workbox
    )
    if workbox is None:
        raise ParseError("misepi hull needs a finite --workbox")
    from itertools import permutations

    from .core import canonicalize, enumerate_lattice

    seen: set[tuple[int, ...]] = set()
    cuts = []
    inner = workbox.inner()
    for weights in misepi.enumerate_U_prime(mixed.n, guard=args.guard):
        if mixed.family == misepi.GENERAL and not misepi.verify_F_lnat(
            mixed, weights, workbox
        ):
            raise ValidationError(
                "aggregate convexity check failed; the finite description "
                "is not a hull for this instance"
            )
        for p in enumerate_lattice(inner):
            for order in permutations(range(mixed.n)):
                cut = misepi.build_misepi(
                    mixed, weights, p, Permutation(order)
                ).inequality
                key = cut.canonical_key()
                if key not in seen:
                    seen.add(key)
                    cuts.append(canonicalize(cut))
    lines = [f"{len(cuts)} distinct inequalities (plus y >= 0 and bounds)"]
    lines += [str(c) for c in cuts]
    payload = {"count": len(cuts), "inequalities": [str(c) for c in cuts]}
    return Report("misepi hull", True, payload, lines)


def _cmd_misepi_facet(args, inst: InstanceFile) -> Report:
    mixed = inst.mixed
    if mixed is None:
        raise ParseError("misepi facet needs a mixed instance")
    u0 = rat(args.u0)
    u = _parse_rat_list(args.u, what="--u")
    p = _parse_int_list(args.p, what="--p")
    delta = Permutation.from_one_based(_parse_int_list(args.delta, what="--delta"))
    cert = misepi.facet_certificate_misepi(
        mixed, misepi.WeightVector(u0, u), p, delta
    )
    ok = cert.tight and cert.rank_check
    lines = [
        f"tight points: {len(cert.points)}",
        f"boundary levels: {cert.boundary_levels}",
        f"affine rank = {cert.rank} (need {2 * mixed.n})",
        f"tight = {cert.tight}, rank check = {cert.rank_check}",
    ]
    payload = {
        "points": len(cert.points),
        "rank": cert.rank,
        "rank_check": cert.rank_check,
        "tight": cert.tight,
    }
    return Report("misepi facet", ok, payload, lines)


def _cmd_misepi_cycle(args, inst: InstanceFile) -> Report:
    mixed = inst.mixed
    if mixed is None:
        raise ParseError("misepi cycle needs a cmix instance")
    if args.cycle:
        arcs = []
        for arc in args.cycle.split(","):
            a, b = arc.split("-")
            arcs.append((int(a) - 1, int(b) - 1))
        cycles = [misepi.CycleSpec(tuple(arcs))]
    elif inst.cycles:
        cycles = list(inst.cycles)
    else:
        raise ParseError("misepi cycle needs --cycle or instance cycles")
    lines = []
    payload_cycles = []
    ok = True
    for cyc in cycles:
        ineq = misepi.cycle_inequality(mixed, cyc)
        weights, p, delta = misepi.misepi_from_cycle(mixed, cyc)
        built = misepi.build_misepi(mixed, weights, p, delta)
        from .core import canonicalize

        match = canonicalize(ineq) == canonicalize(built.inequality)
        ok = ok and match
        arcs_1 = [(a + 1, b + 1) for a, b in cyc.arcs]
        lines.append(f"cycle {arcs_1}: {ineq}")
        lines.append(
            f"  weights u0={rat_str(weights.u0)} u={_fmt_point(weights.u)} "
            f"p={p} delta={delta.to_one_based()} match={match}"
        )
        payload_cycles.append(
            {
                "arcs": arcs_1,
                "inequality": str(ineq),
                "u0": rat_str(weights.u0),
                "u": [rat_str(v) for v in weights.u],
                "p": list(p),
                "delta": list(delta.to_one_based()),
                "match": match,
            }
        )
    return Report("misepi cycle", ok, {"cycles": payload_cycles}, lines)


def _cmd_misepi_minimize(args, inst: InstanceFile) -> Report:
    mixed = inst.mixed
    if mixed is None:
        raise ParseError("misepi minimize needs a mixed instance")
    workbox = (
        _parse_box_arg(args.workbox, what="--workbox")
        if args.workbox
        else inst.workbox
    )
    if workbox is None:
        raise ParseError("misepi minimize needs a finite --workbox")
    n = mixed.n
    if args.objective:
        coeffs = _parse_rat_list(args.objective, what="--objective")
        if len(coeffs) != 2 * n + 1:
            raise ParseError("--objective must list c_w, c_y (n), c_x (n)")
        objective = (coeffs[0], coeffs[1 : 1 + n], coeffs[1 + n :])
    else:
        objective = (Fraction(1), (Fraction(1),) * n, (Fraction(0),) * n)
    result = misepi.minimize_H(mixed, workbox, objective, inst.constraints)
    lines = [
        f"optimum = {rat_str(result.optimum)}",
        f"argmin (w, y, x) = {_fmt_point(result.argmin)}",
        f"cuts used = {result.cut_count}",
    ]
    payload = {
        "optimum": rat_str(result.optimum),
        "argmin": [rat_str(v) for v in result.argmin],
        "cuts": result.cut_count,
    }
    return Report("misepi minimize", True, payload, lines)


# ---------------------------------------------------------------------------
# oracle compare suites (top-level functions so worker processes can
# import them by name)
# ---------------------------------------------------------------------------


def _suite_separation(seed: int) -> dict:
    import random

    from .fnzoo import make_gen_int_mixing

    rng = random.Random(seed)
    f = make_gen_int_mixing((Fraction(4, 5), Fraction(1, 2), Fraction(1, 5)))
    box = DiscreteBox((-2, -2, -2), (2, 2, 2))
    mismatches = 0
    for _ in range(20):
        x = tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(3))
        w = Fraction(rng.randint(-4, 8), 4)
        cert = sepi.separate_fractional_greedy(f, x, w, box=box)
        brute = oracle.separation_lp_optimum(f, x, w, box)
        if cert.violation != brute:
            mismatches += 1
    return {"suite": "separation", "passed": mismatches == 0, "cases": 20}


def _suite_f_eval(seed: int) -> dict:
    import random

    rng = random.Random(seed)
    bad = 0
    for _ in range(200):
        n = rng.randint(1, 6)
        u = tuple(Fraction(rng.randint(0, 8), 4) for _ in range(n))
        total = sum(u, Fraction(0))
        if total == 0:
            u0 = Fraction(0)
        else:
            u0 = Fraction(rng.randint(0, int(total * 4)), 4)
        weights = misepi.WeightVector(u0, u)
        h = tuple(Fraction(rng.randint(-12, 12), 4) for _ in range(n))
        if misepi.eval_F(weights, h)[0] != misepi.eval_F_brute(weights, h):
            bad += 1
    return {"suite": "f_eval", "passed": bad == 0, "cases": 200}


def _suite_hull(seed: int) -> dict:
    import random

    from .fnzoo import make_gen_int_mixing
    from .lp import minimize_rows

    rng = random.Random(seed)
    f = make_gen_int_mixing((Fraction(4, 5), Fraction(1, 2)))
    workbox = DiscreteBox((-1, -1), (2, 2))
    cuts = sepi.assemble_hull_lp(f, workbox)
    rows = [sepi._ineq_to_row(c, 2) for c in cuts]
    model = oracle.epigraph_model(f, workbox)
    bad = 0
    for _ in range(10):
        c = (
            Fraction(rng.randint(-4, 4)),
            Fraction(rng.randint(-4, 4)),
            Fraction(rng.randint(1, 4)),
        )
        lp_val = minimize_rows(c, rows).value
        if lp_val != oracle.hull_min(c, model):
            bad += 1
    return {"suite": "hull", "passed": bad == 0, "cases": 10}


def _suite_mixed_min(seed: int) -> dict:
    import random

    rng = random.Random(seed)
    inst = misepi.cmix_instance((Fraction(4, 5), Fraction(2, 5)))
    workbox = DiscreteBox((-1, -1), (1, 1))
    bad = 0
    for _ in range(6):
        c_w = Fraction(rng.randint(1, 3))
        c_y = tuple(Fraction(rng.randint(0, 3)) for _ in range(2))
        while sum(c_y, Fraction(0)) < c_w:
            c_y = tuple(Fraction(rng.randint(0, 3)) for _ in range(2))
        c_x = tuple(Fraction(rng.randint(-2, 2)) for _ in range(2))
        fast = misepi.minimize_H(inst, workbox, (c_w, c_y, c_x)).optimum
        brute = oracle.mixed_integer_min(inst, (c_w, c_y, c_x), workbox)
        if fast != brute:
            bad += 1
    return {"suite": "mixed_min", "passed": bad == 0, "cases": 6}


_SUITES = {
    "separation": _suite_separation,
    "f_eval": _suite_f_eval,
    "hull": _suite_hull,
    "mixed_min": _suite_mixed_min,
}


def _run_suite(item: tuple[str, int]) -> dict:
    name, seed = item
    return _SUITES[name](seed)


def _cmd_oracle_compare(args, inst: Optional[InstanceFile]) -> Report:
    names = sorted(_SUITES) if args.suite == "all" else [args.suite]
    jobs = [(name, args.seed) for name in names]
    if args.jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(args.jobs) as pool:
            results = pool.map(_run_suite, jobs)
    else:
        results = [_run_suite(job) for job in jobs]
    ok = all(r["passed"] for r in results)
    lines = [
        f"{r['suite']}: {'pass' if r['passed'] else 'FAIL'} ({r['cases']} cases)"
        for r in results
    ]
    return Report("oracle compare", ok, {"suites": results}, lines)


# ---------------------------------------------------------------------------
# Argument parsing and dispatch
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lnatcut",
        description="Exact cutting-plane convexification of midpoint-convex "
        "integer functions and their mixed-integer extension.",
    )
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument(
        "--decimal",
        action="store_true",
        help="append decimal approximations to rational output (display only)",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--jobs", type=int, default=1)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="verify a convexity property on a box")
    p.add_argument("--property", choices=sorted(_CHECK_PROPS), required=True)
    p.add_argument("--box")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_check, needs_instance=True)

    p_sepi = sub.add_parser("sepi", help="epigraph inequalities")
    sepi_sub = p_sepi.add_subparsers(dest="subcommand", required=True)
    p = sepi_sub.add_parser("separate")
    p.add_argument("--point", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--workbox")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_sepi_separate, needs_instance=True)
    p = sepi_sub.add_parser("hull")
    p.add_argument("--workbox")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_sepi_hull, needs_instance=True)

    p = sub.add_parser("minimize", help="cutting-plane minimization")
    p.add_argument("--objective", help="c_x1,..,c_xn,c_w (default: min f)")
    p.add_argument("--workbox")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_minimize, needs_instance=True)

    p_mix = sub.add_parser("mixing", help="mixing-set correspondence")
    mix_sub = p_mix.add_subparsers(dest="subcommand", required=True)
    p = mix_sub.add_parser("buildk")
    p.add_argument("--p", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_mixing_buildk, needs_instance=True)
    p = mix_sub.add_parser("roundtrip")
    p.add_argument("--p")
    p.add_argument("--delta")
    p.add_argument("--samples", type=int, default=100)
    # also accepted after the subcommand; SUPPRESS keeps the global value
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_mixing_roundtrip, needs_instance=True)

    p_joint = sub.add_parser("joint", help="joint epigraphs")
    joint_sub = p_joint.add_subparsers(dest="subcommand", required=True)
    p = joint_sub.add_parser("separate")
    p.add_argument("--point", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_joint_separate, needs_instance=True)
    p = joint_sub.add_parser("member")
    p.add_argument("--point", required=True)
    p.add_argument("--w", required=True)
    p.add_argument("--eta")
    p.add_argument("--workbox")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_joint_member, needs_instance=True)

    p_mis = sub.add_parser("misepi", help="mixed-integer extension")
    mis_sub = p_mis.add_subparsers(dest="subcommand", required=True)
    p = mis_sub.add_parser("separate")
    p.add_argument("--w", required=True)
    p.add_argument("--y", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--workbox")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_misepi_separate, needs_instance=True)
    p = mis_sub.add_parser("hull")
    p.add_argument("--workbox")
    p.add_argument("--guard", type=int, default=4)
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_misepi_hull, needs_instance=True)
    p = mis_sub.add_parser("facet")
    p.add_argument("--u0", required=True)
    p.add_argument("--u", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--delta", required=True)
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_misepi_facet, needs_instance=True)
    p = mis_sub.add_parser("cycle")
    p.add_argument("--cycle", help="arcs like '1-4,4-3,3-1' (1-based)")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_misepi_cycle, needs_instance=True)
    p = mis_sub.add_parser("minimize")
    p.add_argument("--objective", help="c_w,c_y1..n,c_x1..n")
    p.add_argument("--workbox")
    p.add_argument("instance")
    p.set_defaults(handler=_cmd_misepi_minimize, needs_instance=True)

    p = sub.add_parser("oracle", help="fast paths vs brute force")
    oracle_sub = p.add_subparsers(dest="subcommand", required=True)
    p = oracle_sub.add_parser("compare")
    p.add_argument("--suite", choices=("all", *sorted(_SUITES)), default="all")
    p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    p.add_argument("--jobs", type=int, default=argparse.SUPPRESS)
    p.set_defaults(handler=_cmd_oracle_compare, needs_instance=False)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        inst = (
            parse_instance(args.instance) if args.needs_instance else None
        )
        report = args.handler(args, inst)
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except LnatcutError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(report.emit(args.format, args.decimal))
    return 0 if report.ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
