"""Spaces, maps, composition and metric-axiom validation."""

import numpy as np
import pytest
from conftest import embedded_space, random_table_map

from ratfix import (AffineMap, ConstantMap, FiniteMetricSpace, IteratedMap,
                    MetricAxiomError, RationalMap, RealBoxSpace, TableMap,
                    apply, compose, distance, validate_space)


def three_cycle():
    space = FiniteMetricSpace([0, 1, 2], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    return space, TableMap(space, [1, 2, 0])


class TestValidation:
    def test_valid_two_point_matrix(self):
        assert validate_space([[0, 1], [1, 0]]) == []

    def test_symmetry_violation(self):
        found = validate_space([[0, 1], [2, 0]])
        assert any(v.axiom == "symmetry" and v.indices == (0, 1) for v in found)

    def test_triangle_violation(self):
        found = validate_space([[0, 1, 5], [1, 0, 1], [5, 1, 0]])
        assert any(v.axiom == "triangle" and v.indices == (0, 1, 2) for v in found)

    def test_identity_violations(self):
        found = validate_space([[1.0, 1], [1, 0]])
        assert any(v.axiom == "identity" and v.indices == (0, 0) for v in found)
        found = validate_space([[0, 0.0], [0.0, 0]])
        assert any(v.axiom == "identity" for v in found)

    def test_non_square_raises(self):
        with pytest.raises(ValueError, match="square"):
            validate_space([[0, 1]])

    def test_constructor_rejects_bad_matrix(self):
        with pytest.raises(MetricAxiomError) as err:
            FiniteMetricSpace([0, 1], [[0, 1], [2, 0]])
        assert err.value.violations[0].axiom == "symmetry"

    def test_constructed_spaces_validate_clean(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            space, _ = embedded_space(rng)
            assert validate_space(space) == []


class TestDistance:
    def test_matrix_lookup(self):
        space = FiniteMetricSpace(["p0", "p1", "p2"],
                                  [[0, 2, 1], [2, 0, 1.5], [1, 1.5, 0]])
        assert distance(space, "p0", "p1") == 2.0
        assert distance(space, "p0", "p0") == 0.0

    def test_unknown_point(self):
        space = FiniteMetricSpace([0, 1], [[0, 1], [1, 0]])
        with pytest.raises(ValueError, match="unknown point"):
            space.distance(0, 7)

    def test_box_absolute_difference(self):
        space = RealBoxSpace([0.0], [1.0])
        assert distance(space, [0.0], [1.0]) == 1.0

    def test_box_metric_axioms_sampled(self):
        space = RealBoxSpace([-1.0, 0.0], [2.0, 3.0])
        rng = np.random.default_rng(3)
        for _ in range(50):
            x = rng.uniform([-1, 0], [2, 3])
            y = rng.uniform([-1, 0], [2, 3])
            assert space.distance(x, y) == space.distance(y, x)
            assert space.distance(x, x) == 0.0
            assert space.distance(x, y) >= 0.0

    def test_membership_enforced(self):
        space = RealBoxSpace([0.0], [1.0])
        with pytest.raises(ValueError, match="outside"):
            space.distance([2.0], [0.0])


class TestMaps:
    def test_affine_evaluation(self):
        space = RealBoxSpace([0.0], [4.0])
        m = AffineMap(space, [[0.5]], [1.0])
        assert apply(m, [0.0]) == pytest.approx([1.0])

    def test_affine_must_stay_inside(self):
        space = RealBoxSpace([0.0], [1.0])
        with pytest.raises(ValueError, match="into itself"):
            AffineMap(space, [[2.0]], [0.0])

    def test_constant_map(self):
        space = RealBoxSpace([0.0, 0.0], [1.0, 1.0])
        m = ConstantMap(space, [0.25, 0.75])
        assert np.allclose(m.apply([0.9, 0.1]), [0.25, 0.75])

    def test_constant_value_in_box(self):
        space = RealBoxSpace([0.0], [1.0])
        with pytest.raises(ValueError, match="outside"):
            ConstantMap(space, [2.0])

    def test_rational_map_needs_zero_lower(self):
        space = RealBoxSpace([0.0], [5.0])
        m = RationalMap(space)
        assert m.apply([1.0]) == pytest.approx([0.5])
        with pytest.raises(ValueError):
            RationalMap(RealBoxSpace([0.5], [5.0]))

    def test_table_lookup(self):
        space, cyc = three_cycle()
        assert apply(cyc, 2) == 0

    def test_table_must_cover_space(self):
        space = FiniteMetricSpace([0, 1], [[0, 1], [1, 0]])
        with pytest.raises(ValueError, match="missing"):
            TableMap(space, {0: 1})
        with pytest.raises(ValueError, match="unknown point"):
            TableMap(space, [0, 5])


class TestCompose:
    def test_affine_three_fold(self):
        space = RealBoxSpace([0.0], [8.0])
        m = AffineMap(space, [[0.5]], [0.0])
        m3 = compose(m, 3)
        # oracle: iterate apply three times
        x = np.array([8.0])
        for _ in range(3):
            x = m.apply(x)
        assert m3.apply([8.0]) == pytest.approx(x)
        assert m3.apply([8.0]) == pytest.approx([1.0])

    def test_power_one_is_same_behavior(self):
        space, cyc = three_cycle()
        assert compose(cyc, 1) is cyc

    def test_cycle_order(self):
        space, cyc = three_cycle()
        ident = compose(cyc, 3)
        for p in space.points:
            assert ident.apply(p) == p

    def test_matches_repeated_apply(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            space, _ = embedded_space(rng)
            mapping = random_table_map(space, rng)
            for n in range(1, 9):
                comp = compose(mapping, n)
                for p in space.points:
                    q = p
                    for _ in range(n):
                        q = mapping.apply(q)
                    assert comp.apply(p) == q

    def test_iterated_wrapper_flattens(self):
        space = RealBoxSpace([0.0], [1.0])
        m = RationalMap(space)
        m2 = compose(m, 2)
        m6 = compose(m2, 3)
        assert isinstance(m6, IteratedMap)
        assert m6.times == 6
        # x/(1+x) iterated n times is x/(1+n x)
        assert m6.apply([1.0]) == pytest.approx([1.0 / 7.0])

    def test_zero_power_rejected(self):
        space, cyc = three_cycle()
        with pytest.raises(ValueError, match=">= 1"):
            compose(cyc, 0)
