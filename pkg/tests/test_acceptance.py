"""Acceptance suite: one test per criterion, every comparison exact, each
printing a pass/fail line with its runtime (run with ``pytest -s`` to see
them live).  Budgets are wall-clock upper bounds from the requirements."""

import random
import time
from dataclasses import dataclass
from fractions import Fraction as F
from itertools import permutations

import pytest

from lnatcut.checkers import (
    is_integrally_convex,
    is_lattice_submodular,
    is_lnat_convex,
)
from lnatcut.core import (
    DiscreteBox,
    LinearInequality,
    Permutation,
    canonicalize,
    enumerate_lattice,
)
from lnatcut.fnzoo import make_gen_int_mixing
from lnatcut.jointepi import (
    JointInstance,
    joint_generators,
    joint_hull_membership,
    verify_linked,
)
from lnatcut.lp import membership, minimize_rows
from lnatcut.misepi import (
    CycleSpec,
    WeightVector,
    build_misepi,
    cmix_instance,
    cycle_inequality,
    enumerate_U_prime,
    eval_F,
    eval_F_brute,
    facet_certificate_misepi,
    full_dim_certificate,
    mcmix_instance,
    misepi_from_cycle,
)
from lnatcut.mixing import FORM_B, MixingInstance, build_k
from lnatcut.oracle import mixed_integer_min, separation_lp_optimum
from lnatcut.sepi import (
    _ineq_to_row,
    assemble_hull_lp,
    build_sepi,
    facet_certificate,
    separate_fractional_greedy,
)

from conftest import lnat_fixtures, non_lnat_fixtures


@dataclass
class Budget:
    name: str
    seconds: float
    started: float = 0.0

    def __enter__(self):
        self.started = time.monotonic()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.monotonic() - self.started
        status = "PASS" if exc_type is None and elapsed < self.seconds else "FAIL"
        print(f"criterion {self.name}: {status} ({elapsed:.2f}s / {self.seconds:.0f}s)")
        if exc_type is None:
            assert elapsed < self.seconds, f"{self.name} exceeded {self.seconds}s"


Q3 = (F(8, 10), F(5, 10), F(2, 10))


def test_criterion_1_mixing_example_reproduction():
    with Budget("1 mixing example", 1.0):
        f = make_gen_int_mixing(Q3)
        ident = Permutation.identity(3)
        a = build_sepi(f, (0, 0, 1), ident)
        assert a == LinearInequality.make(1, (F(-3, 10), F(-1, 2), 0), F(8, 10))
        b = build_sepi(f, (-1, -1, 1), ident)
        assert b == LinearInequality.make(1, (F(-3, 10), F(-7, 10), 0), F(8, 10))
        c = build_sepi(f, (-2, -3, -1), Permutation.from_one_based((3, 2, 1)))
        assert canonicalize(c) == canonicalize(b)


def test_criterion_2_build_k_reproduction():
    with Budget("2 build_k example", 1.0):
        q = tuple(F(k, 10) for k in range(9, 0, -1))
        inst = MixingInstance(q)
        p = (1, 1, 0, 0, 1, -1, 0, 0, -1)
        delta = Permutation.from_one_based((1, 7, 6, 2, 9, 3, 8, 5, 4))
        result = build_k(inst, p, delta)
        assert result.K == (2, 3, 5, 8) and result.form == FORM_B
        sepi = build_sepi(inst.oracle(), p, delta)
        coeffs = [F(0)] * 9
        coeffs[2], coeffs[3], coeffs[5], coeffs[8] = (
            F(-1, 10),
            F(-2, 10),
            F(-3, 10),
            F(-4, 10),
        )
        assert sepi == LinearInequality.make(1, coeffs, F(7, 10))


def test_criterion_3_separation_exactness():
    with Budget("3 separation exactness", 60.0):
        rng = random.Random(103)
        fixtures = [
            fx
            for fx in lnat_fixtures()
            if fx.name
            in (
                "mixing3",
                "mixing2",
                "quadratic2",
                "nonconvex_demo",
                "max_component2",
                "abs1d",
            )
        ]
        assert len(fixtures) >= 5
        for fx in fixtures:
            box = fx.box
            for _ in range(50):
                x_hat = tuple(
                    F(rng.randint(4 * lo, 4 * up), 4)
                    for lo, up in zip(box.lower, box.upper)
                )
                w_hat = F(rng.randint(-20, 20), 4)
                cert = separate_fractional_greedy(fx.oracle, x_hat, w_hat, box=box)
                brute = separation_lp_optimum(fx.oracle, x_hat, w_hat, box)
                assert cert.violation == brute, fx.name


def _clamped_box(box: DiscreteBox, side: int) -> DiscreteBox:
    lower, upper = [], []
    for lo, up in zip(box.lower, box.upper):
        lower.append(lo)
        upper.append(min(up, lo + side))
    return DiscreteBox(tuple(lower), tuple(upper))


def test_criterion_4_hull_completeness():
    with Budget("4 hull completeness", 300.0):
        rng = random.Random(104)
        for fx in lnat_fixtures():
            n = fx.box.n
            if n > 3:
                continue
            box = _clamped_box(fx.box, 3)
            cuts = assemble_hull_lp(fx.oracle, box)
            rows = [_ineq_to_row(c, n) for c in cuts]
            lattice = list(enumerate_lattice(box))
            for _ in range(25):
                c_w = F(rng.randint(1, 16), 4)
                c_x = tuple(F(rng.randint(-16, 16), 4) for _ in range(n))
                objective = (*c_x, c_w)
                lp = minimize_rows(objective, rows)
                brute = min(
                    sum(ci * xi for ci, xi in zip(c_x, x)) + c_w * fx.oracle(x)
                    for x in lattice
                )
                assert lp.status == "optimal" and lp.value == brute, fx.name


def test_criterion_5_equivalence_of_characterizations():
    with Budget("5 equivalence of characterizations", 60.0):
        fixtures = [
            fx
            for fx in lnat_fixtures() + non_lnat_fixtures()
            if fx.box.point_count() <= 100
        ]
        names = {fx.name for fx in fixtures}
        assert "nonconvex_demo" in names and "supermodular" in names
        for fx in fixtures:
            lnat = is_lnat_convex(fx.oracle, fx.box).passed
            both = (
                is_integrally_convex(fx.oracle, fx.box).passed
                and is_lattice_submodular(fx.oracle, fx.box).passed
            )
            assert lnat == both, fx.name
            if fx.name == "nonconvex_demo":
                assert lnat
            if fx.name == "supermodular":
                assert not lnat


def test_criterion_6_f_evaluation():
    with Budget("6 aggregate evaluation", 10.0):
        rng = random.Random(106)
        for _ in range(1000):
            n = rng.randint(1, 6)
            u = tuple(F(rng.randint(0, 8), 4) for _ in range(n))
            total = sum(u, F(0))
            u0 = (
                F(0)
                if total == 0
                else F(rng.randint(0, int(total * 4)), 4)
            )
            weights = WeightVector(u0, u)
            h = tuple(F(rng.randint(-12, 12), 4) for _ in range(n))
            assert eval_F(weights, h)[0] == eval_F_brute(weights, h)
        inst = cmix_instance((F(8, 10), F(5, 10), F(2, 10), F(1, 10)))
        weights = WeightVector(F(2), (F(1), F(0), F(1), F(1)))
        chain = [
            (0, 2, -1, -1),
            (0, 2, 0, -1),
            (0, 2, 0, 0),
            (1, 2, 0, 0),
            (1, 3, 0, 0),
        ]
        expected = [F(23, 10), F(19, 10), F(1), F(3, 10), F(3, 10)]
        for point, value in zip(chain, expected):
            assert eval_F(weights, inst.h_values(point))[0] == value


def test_criterion_7_cycle_correspondence():
    with Budget("7 cycle correspondence", 60.0):
        inst = cmix_instance((F(8, 10), F(5, 10), F(2, 10), F(1, 10)))
        cyc = CycleSpec(((0, 3), (3, 2), (2, 0)))
        weights, p, delta = misepi_from_cycle(inst, cyc)
        assert weights.u0 == 2
        assert weights.u == (F(1), F(0), F(1), F(1))
        assert p == (0, 2, -1, -1)
        assert delta.to_one_based() == (3, 4, 1, 2)
        built = build_misepi(inst, weights, p, delta)
        expected = LinearInequality(
            F(2),
            (F(1), F(0), F(1), F(1)),
            (F(-7, 10), F(0), F(-2, 5), F(-9, 10)),
            F(1),
        )
        assert canonicalize(built.inequality) == canonicalize(expected)
        assert canonicalize(cycle_inequality(inst, cyc)) == canonicalize(expected)

        rng = random.Random(107)
        for _ in range(200):
            n = rng.randint(2, 5)
            qs = sorted(
                rng.sample([F(k, 50) for k in range(50)], n), reverse=True
            )
            rinst = cmix_instance(tuple(qs))
            size = rng.randint(1, n)
            nodes = rng.sample(range(n), size)
            if size == 1:
                rcyc = CycleSpec(((nodes[0], nodes[0]),))
            else:
                rng.shuffle(nodes)
                rcyc = CycleSpec(
                    tuple(
                        (nodes[i], nodes[(i + 1) % size]) for i in range(size)
                    )
                )
            ineq = cycle_inequality(rinst, rcyc)
            w, pp, dd = misepi_from_cycle(rinst, rcyc)
            b = build_misepi(rinst, w, pp, dd)
            assert canonicalize(b.inequality) == canonicalize(ineq)


def _misepi_hull_rows(inst, workbox):
    n = inst.n
    seen, pool = set(), []
    inner = workbox.inner()
    for weights in enumerate_U_prime(n):
        for p in enumerate_lattice(inner):
            for order in permutations(range(n)):
                cut = build_misepi(inst, weights, p, Permutation(order)).inequality
                key = cut.canonical_key()
                if key not in seen:
                    seen.add(key)
                    pool.append(cut)
    rows = []
    d = 2 * n + 1
    for cut in pool:
        rows.append(
            (
                (cut.lhs_w, *cut.lhs_y, *(-c for c in cut.rhs_x)),
                cut.rhs_const,
            )
        )
    for i in range(n):
        row = [F(0)] * d
        row[1 + i] = F(1)
        rows.append((tuple(row), F(0)))  # y_i >= 0
    for i, (lo, up) in enumerate(zip(workbox.lower, workbox.upper)):
        row = [F(0)] * d
        row[1 + n + i] = F(1)
        rows.append((tuple(row), F(lo)))
        row2 = [F(0)] * d
        row2[1 + n + i] = F(-1)
        rows.append((tuple(row2), F(-up)))
    return rows


def test_criterion_8_misepi_hull():
    with Budget("8 mixed hull over finite weights", 600.0):
        rng = random.Random(108)
        cases = [
            (cmix_instance((F(7, 10), F(3, 10))), DiscreteBox((-1, -1), (2, 2))),
            (
                cmix_instance((F(8, 10), F(5, 10), F(2, 10))),
                DiscreteBox((-1, -1, -1), (1, 1, 1)),
            ),
            (
                mcmix_instance((F(3, 2), F(1, 2)), (F(2), F(1))),
                DiscreteBox((0, 0), (1, 1)),
            ),
            (
                mcmix_instance(
                    (F(3, 2), F(1, 2), F(5, 2)), (F(2), F(1), F(3))
                ),
                DiscreteBox((0, 0, 0), (1, 1, 1)),
            ),
        ]
        for inst, workbox in cases:
            n = inst.n
            rows = _misepi_hull_rows(inst, workbox)
            for _ in range(25):
                c_w = F(rng.randint(1, 12), 4)
                c_y = tuple(F(rng.randint(0, 12), 4) for _ in range(n))
                while sum(c_y, F(0)) < c_w:
                    c_y = tuple(F(rng.randint(0, 12), 4) for _ in range(n))
                c_x = tuple(F(rng.randint(-12, 12), 4) for _ in range(n))
                lp = minimize_rows((c_w, *c_y, *c_x), rows)
                brute = mixed_integer_min(inst, (c_w, c_y, c_x), workbox)
                assert lp.status == "optimal" and lp.value == brute


def test_criterion_9_mcmix_facet_reproduction():
    with Budget("9 capacitated facet example", 5.0):
        inst = mcmix_instance(
            (F(2), F(1, 2), F(4), F(11, 4)), (F(3), F(1), F(4), F(5, 2))
        )
        weights = WeightVector(F(1), (F(2, 3), F(1, 3), F(1, 3), F(1, 3)))
        delta = Permutation.from_one_based((4, 3, 2, 1))
        cut = build_misepi(inst, weights, (0, 0, 0, 0), delta)
        expected = LinearInequality(
            F(1),
            (F(2, 3), F(1, 3), F(1, 3), F(1, 3)),
            (F(-3, 2), F(-1, 12), F(-7, 6), F(-1, 4)),
            F(35, 12),
        )
        assert canonicalize(cut.inequality) == canonicalize(expected)
        cert = facet_certificate_misepi(inst, weights, (0, 0, 0, 0), delta)
        assert cert.tight and cert.rank == 8 and cert.rank_check


def test_criterion_10_facet_certificates():
    with Budget("10 facet and dimension certificates", 60.0):
        for fx in lnat_fixtures():
            try:
                inner = fx.box.inner()
            except Exception:
                continue
            n = fx.box.n
            for p in enumerate_lattice(inner):
                for order in permutations(range(n)):
                    cert = facet_certificate(fx.oracle, p, Permutation(order))
                    assert cert.tight, fx.name
                    assert cert.rank == n + 1 and cert.rank_check, fx.name
        mixed_cases = [
            (cmix_instance((F(8, 10), F(5, 10))), (0, 0)),
            (
                cmix_instance((F(8, 10), F(5, 10), F(2, 10), F(1, 10))),
                (0, -1, 1, 0),
            ),
            (
                mcmix_instance(
                    (F(2), F(1, 2), F(4), F(11, 4)), (F(3), F(1), F(4), F(5, 2))
                ),
                (0, 0, 0, 0),
            ),
        ]
        for inst, p in mixed_cases:
            for order in (
                Permutation.identity(inst.n),
                Permutation(tuple(reversed(range(inst.n)))),
            ):
                cert = full_dim_certificate(inst, p, order)
                assert cert.rank == 2 * inst.n + 1 and cert.rank_check


def test_criterion_11_joint_epigraph_identity():
    with Budget("11 joint epigraph identity", 120.0):
        from lnatcut.fnzoo import add, make_max_component, make_tabulated

        rng = random.Random(111)
        box = DiscreteBox((0, 0), (2, 2))

        def restrict(f):
            return make_tabulated(box, {x: f(x) for x in enumerate_lattice(box)})

        f1 = restrict(make_gen_int_mixing((F(4, 5), F(1, 2))))
        f2 = restrict(make_max_component(2))
        f3 = restrict(make_gen_int_mixing((F(3, 5), F(1, 5))))
        plain = JointInstance((f1, f2, f3))
        gens, rays = joint_generators(plain, box)
        for _ in range(50):
            w = tuple(F(rng.randint(-8, 14), 4) for _ in range(3))
            x = tuple(F(rng.randint(0, 8), 4) for _ in range(2))
            assert joint_hull_membership(plain, (w, x), box) == membership(
                (*w, *x), gens, rays
            )

        h = restrict(make_max_component(2))
        linked = JointInstance((f1, f3), (add(f1, h), add(f3, h)))
        assert verify_linked(linked)
        lgens, lrays = joint_generators(linked, box)
        for _ in range(50):
            w = tuple(F(rng.randint(-8, 14), 4) for _ in range(2))
            eta = tuple(F(rng.randint(-8, 14), 4) for _ in range(2))
            x = tuple(F(rng.randint(0, 8), 4) for _ in range(2))
            assert joint_hull_membership(
                linked, (eta, w, x), box
            ) == membership((*eta, *w, *x), lgens, lrays)
