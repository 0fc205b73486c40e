import random
from fractions import Fraction as F

import pytest

from lnatcut.core import (
    DiscreteBox,
    LinearInequality,
    Permutation,
    affine_rank,
    canonicalize,
    descending_order,
    enumerate_lattice,
    matrix_rank,
    rat,
    rat_str,
    solve_linear_system,
    unit_hypercube,
)
from lnatcut.errors import (
    EmptyInnerBoxError,
    UnboundedBoxError,
    ValidationError,
    ZeroInequalityError,
)


class TestRational:
    def test_parse_and_format(self):
        assert rat("3/10") == F(3, 10)
        assert rat("-2") == F(-2)
        assert rat(5) == F(5)
        assert rat_str(F(3, 10)) == "3/10"
        assert rat_str(F(4)) == "4"

    def test_decimal_rejected(self):
        with pytest.raises(ValidationError):
            rat("0.3")
        with pytest.raises(ValidationError):
            rat("1e-3")
        with pytest.raises(ValidationError):
            rat("1/0")

    def test_field_axioms_randomized(self):
        rng = random.Random(0)
        for _ in range(200):
            a, b, c = (
                F(rng.randint(-50, 50), rng.randint(1, 50)) for _ in range(3)
            )
            assert (a + b) + c == a + (b + c)
            assert a * b == b * a
            assert a * (b + c) == a * b + a * c


class TestBox:
    def test_unit_hypercube_examples(self):
        assert unit_hypercube((0, 0)) == DiscreteBox((0, 0), (1, 1))
        assert unit_hypercube((-1, 2)) == DiscreteBox((-1, 2), (0, 3))
        assert unit_hypercube((5,)) == DiscreteBox((5,), (6,))

    def test_enumeration_lex_order_and_counts(self):
        box = DiscreteBox((0, 0), (1, 1))
        assert list(enumerate_lattice(box)) == [(0, 0), (0, 1), (1, 0), (1, 1)]
        assert list(enumerate_lattice(DiscreteBox((2, 0), (2, 0)))) == [(2, 0)]
        assert len(list(enumerate_lattice(DiscreteBox((0, 0), (2, 1))))) == 6

    def test_count_matches_product(self):
        rng = random.Random(1)
        for _ in range(20):
            n = rng.randint(1, 3)
            lower = tuple(rng.randint(-3, 0) for _ in range(n))
            upper = tuple(lo + rng.randint(0, 3) for lo in lower)
            box = DiscreteBox(lower, upper)
            assert box.point_count() == len(list(enumerate_lattice(box)))

    def test_unbounded_refused(self):
        box = DiscreteBox((0, None), (1, None))
        with pytest.raises(UnboundedBoxError):
            list(enumerate_lattice(box))
        assert not box.is_finite

    def test_inner_keeps_infinity(self):
        box = DiscreteBox((0, None), (5, None))
        inner = box.inner()
        assert inner.upper == (4, None)
        with pytest.raises(EmptyInnerBoxError):
            DiscreteBox((0,), (0,)).inner()

    def test_invalid_bounds(self):
        with pytest.raises(ValidationError):
            DiscreteBox((1,), (0,))
        with pytest.raises(ValidationError):
            DiscreteBox((), ())


class TestPermutation:
    def test_inverse(self):
        perm = Permutation((2, 0, 1))
        assert [perm.rank_of(perm(i)) for i in range(3)] == [0, 1, 2]
        assert perm.to_one_based() == (3, 1, 2)
        assert Permutation.from_one_based((3, 1, 2)) == perm

    def test_rejects_non_bijection(self):
        with pytest.raises(ValidationError):
            Permutation((0, 0, 1))

    def test_descending_order_breaks_ties_by_index(self):
        order = descending_order((F(1), F(2), F(2), F(0)))
        assert order.order == (1, 2, 0, 3)


class TestCanonicalize:
    def test_scaling_equality(self):
        a = LinearInequality.make(1, (F(-3, 10), F(-5, 10)), F(8, 10))
        b = LinearInequality.make(10, (-3, -5), 8)
        assert canonicalize(a) == canonicalize(b)

    def test_zero_inequality(self):
        with pytest.raises(ZeroInequalityError):
            canonicalize(LinearInequality.make(0, (0, 0), 0))

    def test_idempotent(self):
        a = LinearInequality.make(F(2, 3), (F(4, 9), F(-2, 3)), F(8, 3))
        assert canonicalize(canonicalize(a)) == canonicalize(a)

    def test_canonical_equality_iff_same_halfspace(self):
        rng = random.Random(2)
        for _ in range(40):
            coeffs = [F(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(4)]
            if all(v == 0 for v in coeffs):
                continue
            a = LinearInequality.make(coeffs[0], coeffs[1:3], coeffs[3])
            scale = F(rng.randint(1, 9), rng.randint(1, 9))
            b = LinearInequality.make(
                coeffs[0] * scale,
                [c * scale for c in coeffs[1:3]],
                coeffs[3] * scale,
            )
            assert canonicalize(a) == canonicalize(b)
            # a perturbed inequality is a different halfspace and must differ
            perturbed = LinearInequality.make(
                coeffs[0], [coeffs[1] + 1, coeffs[2]], coeffs[3]
            )
            assert canonicalize(a) != canonicalize(perturbed)

    def test_same_canonical_form_same_evaluations(self):
        rng = random.Random(3)
        a = LinearInequality.make(F(3, 4), (F(1, 2), F(-5, 6)), F(7, 12))
        b = canonicalize(a)
        for _ in range(100):
            w = F(rng.randint(-20, 20), rng.randint(1, 5))
            x = tuple(F(rng.randint(-20, 20), rng.randint(1, 5)) for _ in range(2))
            assert a.satisfied_by(w, x) == b.satisfied_by(w, x)


class TestLinearAlgebra:
    def test_matrix_rank(self):
        assert matrix_rank([[F(1), F(2)], [F(2), F(4)]]) == 1
        assert matrix_rank([[F(1), F(0)], [F(0), F(1)]]) == 2
        assert matrix_rank([]) == 0

    def test_affine_rank(self):
        pts = [(F(0), F(0)), (F(1), F(0)), (F(0), F(1)), (F(1), F(1))]
        assert affine_rank(pts) == 2
        assert affine_rank([(F(0),), (F(5),)]) == 1

    def test_solve_linear_system(self):
        sol = solve_linear_system(
            [[F(1), F(1)], [F(1), F(-1)]], [F(3), F(1)]
        )
        assert sol == [F(2), F(1)]
        assert solve_linear_system([[F(1), F(1)], [F(2), F(2)]], [F(1), F(2)]) is None
