"""Shared fixture zoo: named functions with known convexity status on
small boxes, used across the module tests and the acceptance suite."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as F

import pytest

from lnatcut.core import DiscreteBox
from lnatcut.fnzoo import (
    FunctionOracle,
    add,
    make_bivariate_diff,
    make_gen_int_mixing,
    make_max_affine_pair,
    make_max_component,
    make_nonconvex_demo,
    make_quadratic,
    make_tabulated,
    scale,
)


@dataclass(frozen=True)
class Fixture:
    name: str
    oracle: FunctionOracle
    box: DiscreteBox


def _abs_table(lo: int, hi: int) -> FunctionOracle:
    box = DiscreteBox((lo,), (hi,))
    return make_tabulated(box, {(t,): F(abs(t)) for t in range(lo, hi + 1)})


def lnat_fixtures() -> list[Fixture]:
    """Functions known to be midpoint convex on the paired box."""
    mix3 = make_gen_int_mixing((F(4, 5), F(1, 2), F(1, 5)))
    mix2 = make_gen_int_mixing((F(4, 5), F(1, 2)))
    quad2 = make_quadratic([[2, -1], [-1, 2]], [0, 0], DiscreteBox((0, 0), (2, 2)))
    demo = make_nonconvex_demo()
    biv = make_bivariate_diff(
        {t: F(t * t) for t in range(-3, 4)}, DiscreteBox((0, 0), (2, 2))
    )
    pair = make_max_affine_pair(
        (1, 0, 0), 0, (0, 1, 0), 0, DiscreteBox((0, 0, 0), (2, 2, 2))
    )
    maxc2 = make_max_component(2, DiscreteBox((0, 0), (2, 2)))
    scaled = scale(F(3, 2), make_gen_int_mixing((F(4, 5), F(1, 2))))
    summed = add(
        make_max_component(2, DiscreteBox((0, 0), (2, 2))),
        make_quadratic([[1, 0], [0, 1]], [0, 0], DiscreteBox((0, 0), (2, 2))),
    )
    return [
        Fixture("mixing3", mix3, DiscreteBox((-1, -1, -1), (2, 2, 2))),
        Fixture("mixing2", mix2, DiscreteBox((-2, -2), (2, 2))),
        Fixture("quadratic2", quad2, DiscreteBox((0, 0), (2, 2))),
        Fixture("nonconvex_demo", demo, demo.box),
        Fixture("bivariate_sq", biv, biv.box),
        Fixture("affine_pair", pair, DiscreteBox((0, 0, 0), (2, 2, 2))),
        Fixture("max_component2", maxc2, DiscreteBox((0, 0), (2, 2))),
        Fixture("scaled_mixing", scaled, DiscreteBox((-1, -1), (2, 2))),
        Fixture("sum_composite", summed, DiscreteBox((0, 0), (2, 2))),
        Fixture("abs1d", _abs_table(-2, 2), DiscreteBox((-2,), (2,))),
    ]


def non_lnat_fixtures() -> list[Fixture]:
    box = DiscreteBox((0, 0), (1, 1))
    supermod = make_tabulated(
        box, {(a, b): F(a * b) for a in (0, 1) for b in (0, 1)}
    )
    supermod3 = make_tabulated(
        DiscreteBox((0, 0), (2, 2)),
        {(a, b): F(a * b) for a in range(3) for b in range(3)},
    )
    dip = make_tabulated(
        DiscreteBox((0,), (2,)), {(0,): F(0), (1,): F(2), (2,): F(1)}
    )
    return [
        Fixture("supermodular", supermod, box),
        Fixture("supermodular3", supermod3, DiscreteBox((0, 0), (2, 2))),
        Fixture("isolated_dip", dip, dip.box),
    ]


@pytest.fixture(scope="session")
def lnat_zoo() -> list[Fixture]:
    return lnat_fixtures()


@pytest.fixture(scope="session")
def non_lnat_zoo() -> list[Fixture]:
    return non_lnat_fixtures()
