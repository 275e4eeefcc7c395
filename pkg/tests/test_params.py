import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pancyc.errors import FormulaDegenerate, Infeasible
from pancyc.params import (
    ParamSet,
    consumed_vertices,
    derive_params,
    edge_budget,
    validate_coverage,
    vertex_margin,
)


class TestPaperMode:
    def test_degenerate_at_desk_scale(self):
        # the closed-form depth/round formulas only make sense for
        # astronomically large n; small n must refuse, not clamp
        with pytest.raises(FormulaDegenerate):
            derive_params(1000, mode="paper")

    def test_degenerate_at_million(self):
        with pytest.raises(FormulaDegenerate):
            derive_params(10**6, mode="paper")


class TestPracticalMode:
    @pytest.mark.parametrize("n", [64, 200, 500, 1000, 2000, 10**4])
    def test_derivation_succeeds(self, n):
        ps = derive_params(n)
        assert ps.n == n and ps.mode == "practical"
        assert ps.K0 >= 1 and ps.K > ps.K0
        assert ps.b >= 2 and ps.t >= 1 and ps.d >= 1

    def test_known_values_n200(self):
        ps = derive_params(200)
        assert (ps.K, ps.d, ps.b, ps.t) == (5, 3, 4, 2)
        assert ps.ell_star == (ps.K0 + 1) * (ps.d + 3)

    def test_known_values_n1000(self):
        ps = derive_params(1000)
        assert (ps.K, ps.b, ps.t) == (8, 5, 2)

    def test_derived_quantities(self):
        ps = derive_params(500)
        assert ps.L == 2 ** (ps.K + 1) - 1
        assert ps.m == ps.n // 2**ps.K
        assert ps.ell(4) == 17
        assert ps.gadget_base == (ps.d + ps.b + 1) * ps.t
        assert ps.gadget_size == ps.b**ps.t

    def test_vertex_budget_respected(self):
        for n in (64, 128, 200, 500, 1000):
            ps = derive_params(n)
            assert consumed_vertices(ps) <= n - vertex_margin(n)

    def test_overrides(self):
        ps = derive_params(1000, overrides={"d": 7})
        assert ps.d == 7
        assert ps.ell_star == (ps.K0 + 1) * 10  # dependent field recomputed

    def test_greedy_override_rejected(self):
        # inflating the gadget at fixed n must trip the vertex budget
        with pytest.raises(Infeasible):
            derive_params(500, overrides={"t": 3})

    def test_bad_override_rejected(self):
        with pytest.raises(Infeasible):
            derive_params(200, overrides={"K": 30})

    def test_too_small(self):
        with pytest.raises((Infeasible, ValueError)):
            derive_params(20)

    def test_roundtrip_dict(self):
        ps = derive_params(300)
        assert ParamSet.from_dict(ps.to_dict()) == ps


class TestLongTargets:
    def test_strictly_increasing(self):
        for n in (64, 200, 1000):
            targets = [ell for _, ell in derive_params(n).long_targets()]
            assert all(a < b for a, b in zip(targets, targets[1:]))

    def test_floor_and_cap(self):
        ps = derive_params(64)
        targets = ps.long_targets()
        assert targets[0][1] >= ps.ell_star + ps.L - 1
        assert targets[-1][1] <= ps.n - 3

    def test_gap_never_exceeds_window(self):
        # consecutive long targets must stay within one doubling window,
        # otherwise some length between them is unreachable
        for n in (64, 200, 500, 2000):
            ps = derive_params(n)
            targets = [ell for _, ell in ps.long_targets()]
            first = ps.ell_star + ps.L
            assert targets[0] + 2 - ps.L <= first + 1
            for a, b in zip(targets, targets[1:]):
                assert b - a <= ps.L


class TestCoverage:
    @pytest.mark.parametrize(
        "n", [64, 100, 128, 200, 300, 500, 777, 1000, 2000, 4096, 10**4]
    )
    def test_no_holes(self, n):
        report = validate_coverage(derive_params(n))
        assert report.ok, report.holes

    def test_mutation_produces_holes(self):
        ps = derive_params(200)
        report = validate_coverage(ps)
        # dropping any interval that is not swallowed by the others must
        # open a hole (some intervals are redundant at desk scale)
        essential = 0
        for name, lo, hi in report.intervals:
            rest = validate_coverage(ps, skip={name})
            others = [
                (lo2, hi2)
                for name2, lo2, hi2 in report.intervals
                if name2 != name
            ]
            covered = set()
            for lo2, hi2 in others:
                covered.update(range(max(3, lo2), min(ps.n, hi2) + 1))
            window = set(range(max(3, lo), min(ps.n, hi) + 1))
            if window - covered:
                assert not rest.ok, name
                essential += 1
            else:
                assert rest.ok, name
        assert essential >= 3  # the validator is not vacuous

    def test_binary_interval_essential(self):
        ps = derive_params(1000)
        assert not validate_coverage(ps, skip={"binary"}).ok

    def test_top_interval_essential(self):
        ps = derive_params(1000)
        assert not validate_coverage(ps, skip={"top"}).ok


class TestEdgeBudget:
    @given(st.sampled_from([64, 128, 200, 500, 1000, 2000, 5000]))
    @settings(deadline=None)
    def test_budget_is_logarithmic(self, n):
        ps = derive_params(n)
        assert edge_budget(ps) == ps.K + ps.b * ps.t + ps.m + ps.gadget_base + 3
        assert edge_budget(ps) <= 40 * math.log2(n)
