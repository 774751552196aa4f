"""Inequality evaluation, certification and the feasible polygon."""

import numpy as np
import pytest
from conftest import brute_force_ratio_sup, embedded_space, mixed_map

from ratfix import (AffineMap, AlteringFunction, ConstantMap,
                    ContractionCondition, FiniteMetricSpace, RealBoxSpace,
                    TableMap, certify, certify_exhaustive, check_inequality,
                    feasible_region_vertices, rational_term, sample_box_pairs)

IDENTITY = AlteringFunction.identity()


def halving_setup():
    space = RealBoxSpace([0.0], [1.0])
    return space, AffineMap(space, [[0.5]], [0.0])


class TestRationalTerm:
    def test_zero_when_target_is_fixed(self):
        space = RealBoxSpace([0.0], [4.0])
        m = AffineMap(space, [[0.5]], [1.0])  # fixed point 2
        assert rational_term(space, m, [0.5], [2.0]) == 0.0

    def test_equal_arguments(self):
        space, m = halving_setup()
        # substituting x = y gives delta * (1 + delta)
        delta = space.distance([0.8], m.apply([0.8]))
        assert rational_term(space, m, [0.8], [0.8]) == pytest.approx(delta * (1 + delta))

    def test_direct_evaluation(self):
        space, m = halving_setup()
        # 0.5 * (1 + 0) / (1 + 1)
        assert rational_term(space, m, [0.0], [1.0]) == pytest.approx(0.25)

    def test_zero_exactly_when_target_fixed(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            space, pts = embedded_space(rng)
            mapping = mixed_map(space, pts, rng, style=2)
            for x in space.points:
                for y in space.points:
                    term = rational_term(space, mapping, x, y)
                    assert (term == 0.0) == (mapping.apply(y) == y)
                    assert term >= 0.0


class TestCondition:
    def test_constant_range_validation(self):
        with pytest.raises(ValueError, match="a > 0"):
            ContractionCondition("generalized", IDENTITY, 0.0, 0.1)
        with pytest.raises(ValueError, match="a \\+ b < 1"):
            ContractionCondition("generalized", IDENTITY, 0.7, 0.3)
        with pytest.raises(ValueError, match="b >= 0"):
            ContractionCondition("generalized", IDENTITY, 0.5, -0.1)

    def test_kind_constraints(self):
        with pytest.raises(ValueError, match="b = 0"):
            ContractionCondition("banach_khan", IDENTITY, 0.5, 0.1)
        with pytest.raises(ValueError, match="identity control"):
            ContractionCondition("das_gupta", AlteringFunction.power_law(2.0), 0.5, 0.1)
        with pytest.raises(ValueError, match="integral-kind"):
            ContractionCondition("integral", IDENTITY, 0.5, 0.1)

    def test_basis_labels(self):
        assert ContractionCondition("banach_khan", IDENTITY, 0.5).basis == "altering_contraction"
        assert ContractionCondition("das_gupta", IDENTITY, 0.5, 0.2).basis == "rational_contraction"
        assert ContractionCondition(
            "generalized", AlteringFunction.power_law(2.0), 0.5, 0.2
        ).basis == "generalized_rational"


class TestCheckInequality:
    def test_halving_example(self):
        space, m = halving_setup()
        cond = ContractionCondition("generalized", IDENTITY, 0.6, 0.1)
        result = check_inequality(cond, space, m, [0.0], [1.0])
        assert result.lhs == pytest.approx(0.5)
        assert result.rhs == pytest.approx(0.625)  # 0.6 * 1 + 0.1 * 0.25
        assert result.satisfied
        assert result.slack == pytest.approx(0.125)

    def test_equal_points_always_satisfied(self):
        space, m = halving_setup()
        cond = ContractionCondition("generalized", IDENTITY, 0.1, 0.05)
        result = check_inequality(cond, space, m, [0.3], [0.3])
        assert result.lhs == 0.0
        assert result.satisfied

    def test_identity_map_violates(self):
        space = FiniteMetricSpace([0, 1], [[0, 1], [1, 0]])
        ident = TableMap(space, [0, 1])
        cond = ContractionCondition("generalized", IDENTITY, 0.6, 0.3)
        result = check_inequality(cond, space, ident, 0, 1)
        assert not result.satisfied
        assert result.lhs == 1.0
        assert result.rhs == pytest.approx(0.6)  # mixing term vanishes


class TestCertify:
    def test_halving_grid_reaches_half(self):
        space, m = halving_setup()
        pairs = sample_box_pairs(space, 201, 0, seed=None)
        cert = certify(space, m, IDENTITY, "generalized", pairs, margin=1e-6)
        assert cert.feasible
        # oracle: brute-force sup of lhs / d over all grid pairs
        xs = np.linspace(0.0, 1.0, 201)
        best = 0.0
        for x in xs:
            for y in xs:
                if x != y:
                    best = max(best, abs(0.5 * x - 0.5 * y) / abs(x - y))
        assert best == pytest.approx(0.5, abs=1e-12)
        assert cert.a == pytest.approx(0.5, abs=1e-12)
        assert cert.b == 0.0
        assert cert.min_slack >= -1e-12

    def test_identity_map_infeasible(self):
        space = FiniteMetricSpace([0, 1], [[0, 1], [1, 0]])
        cert = certify_exhaustive(space, TableMap(space, [0, 1]), IDENTITY,
                                  "generalized")
        assert not cert.feasible
        assert len(cert.violations) == 2  # both ordered pairs

    def test_constant_map_needs_only_margin(self):
        space = RealBoxSpace([0.0], [1.0])
        m = ConstantMap(space, [0.5])
        pairs = sample_box_pairs(space, 21, 0, seed=None)
        cert = certify(space, m, IDENTITY, "generalized", pairs, margin=1e-6)
        assert cert.feasible
        assert cert.a == pytest.approx(1e-6)
        assert cert.b == 0.0

    def test_banach_khan_keeps_b_exactly_zero(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            space, pts = embedded_space(rng)
            mapping = mixed_map(space, pts, rng, style=1)
            cert = certify_exhaustive(space, mapping, IDENTITY, "banach_khan")
            if cert.feasible:
                assert cert.b == 0.0

    def test_exhaustive_oracle_equivalence(self):
        rng = np.random.default_rng(4)
        margin = 1e-6
        feasible_seen = 0
        for trial in range(20):
            space, pts = embedded_space(rng)
            mapping = mixed_map(space, pts, rng, style=trial % 3)
            cert = certify_exhaustive(space, mapping, IDENTITY, "banach_khan",
                                      margin=margin)
            sup = brute_force_ratio_sup(space, mapping)
            if sup <= 1 - margin:
                assert cert.feasible
                assert cert.a == pytest.approx(max(sup, margin), abs=1e-12)
                feasible_seen += 1
            else:
                assert not cert.feasible
        assert feasible_seen >= 5

    def test_result_independent_of_pair_order(self):
        rng = np.random.default_rng(9)
        space, pts = embedded_space(rng, n_min=6)
        mapping = mixed_map(space, pts, rng, style=1)
        pairs = [(x, y) for x in space.points for y in space.points if x != y]
        cert1 = certify(space, mapping, IDENTITY, "generalized", pairs)
        shuffled = list(pairs)
        rng.shuffle(shuffled)
        cert2 = certify(space, mapping, IDENTITY, "generalized", shuffled)
        assert cert1.feasible == cert2.feasible
        assert cert1.a == cert2.a and cert1.b == cert2.b
        assert cert1.vertices == cert2.vertices
        assert sorted(cert1.slacks) == pytest.approx(sorted(cert2.slacks))

    def test_rechecking_slacks_at_chosen_constants(self):
        rng = np.random.default_rng(14)
        checked = 0
        for trial in range(12):
            space, pts = embedded_space(rng)
            mapping = mixed_map(space, pts, rng, style=trial % 2)
            cert = certify_exhaustive(space, mapping, IDENTITY, "generalized")
            if not cert.feasible:
                continue
            cond = ContractionCondition("generalized", IDENTITY, cert.a, cert.b)
            pairs = [(x, y) for x in space.points for y in space.points if x != y]
            for pair, slack in zip(pairs, cert.slacks):
                result = check_inequality(cond, space, mapping, *pair)
                assert result.slack >= -1e-12
                assert result.slack == pytest.approx(slack, abs=1e-12)
            checked += 1
        assert checked >= 4

    def test_empty_sample_rejected(self):
        space, m = halving_setup()
        with pytest.raises(ValueError, match="nonempty"):
            certify(space, m, IDENTITY, "generalized", [])

    def test_bad_margin_rejected(self):
        space, m = halving_setup()
        pairs = sample_box_pairs(space, 5, 0, seed=None)
        with pytest.raises(ValueError, match="margin"):
            certify(space, m, IDENTITY, "generalized", pairs, margin=0.7)


class TestFeasibleRegion:
    def test_constant_map_box_triangle(self):
        space = RealBoxSpace([0.0], [1.0])
        m = ConstantMap(space, [0.5])
        pairs = sample_box_pairs(space, 11, 0, seed=None)
        verts = feasible_region_vertices(space, m, IDENTITY, "generalized",
                                         pairs, margin=0.01)
        expect = [(0.01, 0.0), (0.99, 0.0), (0.01, 0.98)]
        assert len(verts) == 3
        for got, want in zip(verts, expect):
            assert got == pytest.approx(want, abs=1e-12)

    def test_identity_map_empty(self):
        space = FiniteMetricSpace([0, 1], [[0, 1], [1, 0]])
        verts = feasible_region_vertices(space, TableMap(space, [0, 1]),
                                         IDENTITY, "generalized",
                                         [(0, 1), (1, 0)])
        assert verts == []

    def test_halving_polygon_touches_half(self):
        space, m = halving_setup()
        pairs = sample_box_pairs(space, 201, 0, seed=None)
        verts = feasible_region_vertices(space, m, IDENTITY, "generalized", pairs)
        best = min(verts, key=lambda p: (p[0] + p[1], p[0]))
        assert best[0] == pytest.approx(0.5, abs=1e-12)
        assert best[1] == pytest.approx(0.0, abs=1e-12)

    def test_adding_pairs_never_enlarges_region(self):
        # adding constraints can only shrink the polygon: every vertex of
        # the larger system must satisfy the smaller system's constraints
        rng = np.random.default_rng(21)
        space, pts = embedded_space(rng, n_min=6)
        mapping = mixed_map(space, pts, rng, style=1)
        all_pairs = [(x, y) for x in space.points for y in space.points if x != y]
        small = all_pairs[: len(all_pairs) // 2]
        verts_small = feasible_region_vertices(space, mapping, IDENTITY,
                                               "generalized", small)
        verts_full = feasible_region_vertices(space, mapping, IDENTITY,
                                              "generalized", all_pairs)
        if not verts_full:
            return
        for a, b in verts_full:
            for x, y in small:
                d = space.distance(x, y)
                lhs = space.distance(mapping.apply(x), mapping.apply(y))
                mix = rational_term(space, mapping, x, y)
                assert a * d + b * mix >= lhs - 1e-9
        assert verts_small  # the smaller system is feasible too
