"""Fixed sets of map powers, property P and the periodic-point chain."""

import numpy as np
import pytest
from conftest import embedded_space, mixed_map, random_table_map

from ratfix import (AffineMap, AlteringFunction, FiniteMetricSpace,
                    RealBoxSpace, TableMap, check_property_p, compose,
                    fixed_points, refute_periodic_chain)

IDENTITY = AlteringFunction.identity()


def three_cycle():
    space = FiniteMetricSpace([0, 1, 2], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
    return space, TableMap(space, [1, 2, 0])


class TestFixedPoints:
    def test_identity_table_fixes_everything(self):
        space = FiniteMetricSpace([0, 1, 2], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert fixed_points(space, TableMap(space, [0, 1, 2])) == [0, 1, 2]

    def test_constant_table(self):
        space = FiniteMetricSpace([0, 1, 2], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        assert fixed_points(space, TableMap(space, [2, 2, 2])) == [2]

    def test_cycle_has_none(self):
        space, cyc = three_cycle()
        assert fixed_points(space, cyc) == []

    def test_box_search_finds_unique_fixed_point(self):
        # default fix_tol localizes candidates well inside the dedup radius
        space = RealBoxSpace([0.0], [4.0])
        m = AffineMap(space, [[0.5]], [1.0])
        found = fixed_points(space, m)
        assert len(found) == 1
        assert found[0][0] == pytest.approx(2.0, abs=1e-8)

    def test_subset_of_power_fixed_points(self):
        rng = np.random.default_rng(17)
        for _ in range(25):
            space, _ = embedded_space(rng)
            mapping = random_table_map(space, rng)
            base = set(fixed_points(space, mapping))
            for n in range(2, 9):
                assert base <= set(fixed_points(space, compose(mapping, n)))


class TestPropertyP:
    def test_three_cycle_fails_with_three_witnesses(self):
        space, cyc = three_cycle()
        report = check_property_p(space, cyc, n_max=3)
        assert report.verdict == "fails"
        assert not report.holds
        assert report.fixed_set == ()
        assert report.rows[-1].fixed_set == (0, 1, 2)
        assert len(report.witnesses) == 3
        assert all(n == 3 for _, n in report.witnesses)

    def test_constant_map_holds(self):
        space = FiniteMetricSpace([0, 1, 2], [[0, 1, 1], [1, 0, 1], [1, 1, 0]])
        report = check_property_p(space, TableMap(space, [1, 1, 1]), n_max=8)
        assert report.holds
        assert report.fixed_set == (1,)
        assert all(row.fixed_set == (1,) and row.equal for row in report.rows)
        assert report.witnesses == ()

    def test_swap_map_fails_at_even_powers(self):
        space = FiniteMetricSpace([0, 1], [[0, 1], [1, 0]])
        report = check_property_p(space, TableMap(space, [1, 0]), n_max=4)
        assert report.verdict == "fails"
        powers = {n for _, n in report.witnesses}
        assert powers == {2, 4}

    def test_undefined_when_no_fixed_points_anywhere(self):
        # 4-cycle inspected only at powers 2 and 3: no fixed set at all
        space = FiniteMetricSpace(
            [0, 1, 2, 3],
            [[0, 1, 1.5, 1], [1, 0, 1, 1.5], [1.5, 1, 0, 1], [1, 1.5, 1, 0]])
        report = check_property_p(space, TableMap(space, [1, 2, 3, 0]), n_max=3)
        assert report.verdict == "undefined"
        assert not report.holds

    def test_witnesses_verify_exactly(self):
        rng = np.random.default_rng(23)
        seen = 0
        for _ in range(100):
            space, _ = embedded_space(rng)
            mapping = random_table_map(space, rng)
            report = check_property_p(space, mapping, n_max=8)
            for z, n in report.witnesses:
                assert compose(mapping, n).apply(z) == z
                assert mapping.apply(z) != z
                seen += 1
        assert seen > 0

    def test_n_max_validated(self):
        space, cyc = three_cycle()
        with pytest.raises(ValueError, match="n_max"):
            check_property_p(space, cyc, n_max=1)


class TestCertifiedPopulation:
    def test_certified_maps_obey_the_theorems(self):
        # random maps that obtain an exhaustive certificate must have a
        # single fixed point and satisfy property P at desk scale
        from ratfix import certify_exhaustive, iterate
        rng = np.random.default_rng(31)
        certified = 0
        for trial in range(40):
            space, pts = embedded_space(rng)
            mapping = mixed_map(space, pts, rng, style=trial % 2)
            cert = certify_exhaustive(space, mapping, IDENTITY, "generalized")
            if not cert.feasible:
                continue
            certified += 1
            fs = fixed_points(space, mapping)
            assert len(fs) == 1
            for start in space.points:
                trace = iterate(space, mapping, start, fix_tol=1e-12,
                                max_iters=len(space) + 2)
                assert trace.status == "converged"
                assert trace.fixed_point == fs[0]
            assert check_property_p(space, mapping, n_max=8).holds
        assert certified >= 15


class TestPeriodicChain:
    def test_fixed_point_chain_holds_trivially(self):
        space = RealBoxSpace([0.0], [1.0])
        m = AffineMap(space, [[0.5]], [0.0])
        report = refute_periodic_chain(space, m, [0.0], 2, 0.5, 0.0, IDENTITY)
        assert report.holds
        assert report.lhs == 0.0 and report.rhs == 0.0

    def test_cycle_point_violates_chain(self):
        space, cyc = three_cycle()
        report = refute_periodic_chain(space, cyc, 0, 3, 0.5, 0.2, IDENTITY)
        assert not report.holds
        assert report.lhs == 1.0
        # direct evaluation: (0.5 / 0.8)^3 = 0.244140625
        assert report.rhs == pytest.approx(0.244140625)
        assert report.ratio == pytest.approx(0.625)

    def test_requires_point_fixed_by_power(self):
        space, cyc = three_cycle()
        with pytest.raises(ValueError, match="not fixed"):
            refute_periodic_chain(space, cyc, 0, 2, 0.5, 0.2, IDENTITY)

    def test_constants_validated(self):
        space, cyc = three_cycle()
        with pytest.raises(ValueError):
            refute_periodic_chain(space, cyc, 0, 3, 0.8, 0.4, IDENTITY)
