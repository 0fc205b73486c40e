import random
from fractions import Fraction as F

import pytest

from lnatcut.core import DiscreteBox
from lnatcut.errors import (
    BadStructureError,
    DomainMismatchError,
    NotDiscretelyConvexError,
    NotMMatrixError,
    ValidationError,
)
from lnatcut.fnzoo import (
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


class TestGenIntMixing:
    def test_values(self):
        f = make_gen_int_mixing((F(8, 10), F(5, 10), F(2, 10)))
        assert f((0, 0, 1)) == F(8, 10)
        assert f((1, 1, 1)) == 0
        assert f((1, 1, 2)) == 0  # all residuals nonpositive
        assert f((-1, -1, 1)) == F(18, 10)

    def test_clamps_at_zero(self):
        f = make_gen_int_mixing((F(3, 4),))
        assert f((5,)) == 0


class TestBivariateDiff:
    def test_square_values(self):
        box = DiscreteBox((0, 0), (3, 1))
        f = make_bivariate_diff({t: F(t * t) for t in range(-2, 4)}, box)
        assert f((3, 1)) == 4

    def test_abs_values(self):
        box = DiscreteBox((0, 0), (0, 5))
        f = make_bivariate_diff({t: F(abs(t)) for t in range(-6, 1)}, box)
        assert f((0, 5)) == 5

    def test_cubic_on_nonneg_range(self):
        box = DiscreteBox((0, 0), (3, 0))
        f = make_bivariate_diff({t: F(t**3) for t in range(0, 4)}, box)
        assert f((2, 0)) == 8

    def test_nonconvex_table_rejected(self):
        with pytest.raises(NotDiscretelyConvexError):
            make_bivariate_diff(
                {0: F(0), 1: F(2), 2: F(1)}, DiscreteBox((0, 0), (2, 0))
            )

    def test_box_must_fit_table(self):
        with pytest.raises(ValidationError):
            make_bivariate_diff(
                {0: F(0), 1: F(1)}, DiscreteBox((0, 0), (3, 0))
            )


class TestQuadratic:
    def test_values(self):
        box = DiscreteBox((0, 0), (2, 2))
        f = make_quadratic([[1, 0], [0, 1]], [0, 0], box)
        assert f((1, 2)) == 5
        g = make_quadratic([[2, -1], [-1, 2]], [0, 0], box)
        assert g((1, 1)) == 2

    def test_positive_offdiagonal_rejected(self):
        with pytest.raises(NotMMatrixError):
            make_quadratic([[2, 1], [1, 2]], [0, 0], DiscreteBox((0, 0), (1, 1)))

    def test_dominance_required(self):
        with pytest.raises(NotMMatrixError):
            make_quadratic([[1, -2], [-2, 1]], [0, 0], DiscreteBox((0, 0), (1, 1)))

    def test_asymmetry_rejected(self):
        with pytest.raises(NotMMatrixError):
            make_quadratic([[2, -1], [0, 2]], [0, 0], DiscreteBox((0, 0), (1, 1)))


class TestDemo:
    def test_values(self):
        f = make_nonconvex_demo()
        assert f((2, 1)) == 39
        assert f((0, 0)) == 0


class TestCombinators:
    def test_scale(self):
        f = make_max_component(2, DiscreteBox((0, 0), (3, 3)))
        g = scale(2, f)
        assert g((1, 3)) == 6
        with pytest.raises(ValidationError):
            scale(0, f)

    def test_dilate_identity(self):
        f = make_gen_int_mixing((F(4, 5), F(1, 2)))
        g = dilate((0, 0), 1, f)
        rng = random.Random(4)
        for _ in range(50):
            x = tuple(rng.randint(-5, 5) for _ in range(2))
            assert g(x) == f(x)

    def test_dilate_box_transform(self):
        f = make_max_component(1, DiscreteBox((0,), (6,)))
        g = dilate((1,), 2, f)  # 0 <= 1 + 2t <= 6  ->  t in [0, 2]
        assert g.box == DiscreteBox((0,), (2,))
        assert g((2,)) == 5
        h = dilate((0,), -1, f)  # 0 <= -t <= 6 -> t in [-6, 0]
        assert h.box == DiscreteBox((-6,), (0,))

    def test_dilate_rejects_zero(self):
        f = make_max_component(1, DiscreteBox((0,), (6,)))
        with pytest.raises(ValidationError):
            dilate((0,), 0, f)

    def test_add_requires_same_box(self):
        f = make_max_component(2, DiscreteBox((0, 0), (2, 2)))
        g = make_max_component(2, DiscreteBox((0, 0), (3, 3)))
        with pytest.raises(DomainMismatchError):
            add(f, g)
        s = add(f, make_quadratic([[1, 0], [0, 1]], [0, 0], f.box))
        assert s((1, 2)) == 2 + 5

    def test_max_affine_pair_structure(self):
        box = DiscreteBox((0, 0, 0), (2, 2, 2))
        f = make_max_affine_pair((1, 0, 0), 0, (0, 1, 0), 0, box)
        assert f((2, 1, 0)) == 2
        with pytest.raises(BadStructureError):
            make_max_affine_pair((1, 1, 0), 0, (0, 0, 0), 0, box)
        with pytest.raises(BadStructureError):
            make_max_affine_pair((0, 0, 0), 0, (1, 1, 0), 0, box)


class TestTabulated:
    def test_missing_entry_rejected(self):
        with pytest.raises(ValidationError):
            make_tabulated(DiscreteBox((0,), (1,)), {(0,): F(1)})

    def test_values_are_exact(self):
        f = make_tabulated(
            DiscreteBox((0,), (1,)), {(0,): F(1, 3), (1,): F(2, 3)}
        )
        assert f((0,)) == F(1, 3)


class TestClaimedClasses:
    """Every constructor's output passes the checker matching its class."""

    def test_all_lnat_fixtures_pass(self, lnat_zoo):
        from lnatcut.checkers import is_lnat_convex

        for fx in lnat_zoo:
            assert fx.box.point_count() <= 4**4
            report = is_lnat_convex(fx.oracle, fx.box)
            assert report.passed, fx.name

    def test_affine_pair_lattice_submodular(self):
        from lnatcut.checkers import is_lattice_submodular

        box = DiscreteBox((0, 0, 0), (2, 2, 2))
        # alpha != beta: only lattice submodular is claimed
        f = make_max_affine_pair((2, 0, 0), 0, (0, 3, 0), 1, box)
        assert is_lattice_submodular(f, box).passed

    def test_affine_pair_equal_steps_is_l_convex(self):
        from lnatcut.checkers import is_l_convex, is_lnat_convex

        box = DiscreteBox((0, 0, 0), (2, 2, 2))
        f = make_max_affine_pair((1, 0, 0), 0, (0, 1, 0), 0, box)
        assert is_l_convex(f, box).passed
        assert is_lnat_convex(f, box).passed
