import math
import random

import pytest

from pancyc.bounds import (
    check_shi,
    pex_exact_tiny,
    pex_lower_bound,
    shi_cycle_bound,
)
from pancyc.errors import HostNotPancyclic
from pancyc.graph import Graph

# exact values from the exhaustive oracle, frozen as regression constants
PEX_COMPLETE = {4: 1, 5: 1, 6: 2, 7: 2, 8: 2, 9: 3}


def cycle_graph(n):
    g = Graph(n)
    for v in range(n):
        g.add_edge(v, (v + 1) % n)
    return g


class TestShiBound:
    def test_formula(self):
        assert shi_cycle_bound(0) == 1
        assert shi_cycle_bound(1) == 3
        assert shi_cycle_bound(2) == 7

    def test_negative(self):
        with pytest.raises(ValueError):
            shi_cycle_bound(-1)

    def test_k4_tight(self):
        count, bound, ok = check_shi(Graph.complete(4))
        assert (count, bound, ok) == (7, 7, True)

    def test_unicyclic(self):
        count, bound, ok = check_shi(cycle_graph(9))
        assert (count, bound, ok) == (1, 1, True)

    def test_one_chord(self):
        g = cycle_graph(10)
        g.add_edge(0, 5)
        count, _, ok = check_shi(g)
        assert count == 3 and ok

    def test_monte_carlo(self):
        # the bound is a theorem; across random Hamiltonian-ish graphs a
        # violation would mean the enumerator is broken
        rng = random.Random(2024)
        checked = 0
        while checked < 120:
            n = rng.randint(4, 12)
            g = cycle_graph(n)
            extra = rng.randint(0, min(5, n * (n - 3) // 2))
            while g.m < n + extra:
                u, v = rng.sample(range(n), 2)
                if not g.has_edge(u, v):
                    g.add_edge(u, v)
            _, _, ok = check_shi(g)
            assert ok
            checked += 1


class TestPexLowerBound:
    def test_values(self):
        assert pex_lower_bound(17) == pytest.approx(3.0)
        assert pex_lower_bound(5) == pytest.approx(1.0)
        assert pex_lower_bound(3) == pytest.approx(0.0)

    def test_minimum_n(self):
        with pytest.raises(ValueError):
            pex_lower_bound(2)


class TestPexExact:
    def test_triangle(self):
        r = pex_exact_tiny(Graph.complete(3))
        assert r.exact_pex == 0 and r.method == "oracle"

    def test_c5_not_pancyclic(self):
        with pytest.raises(HostNotPancyclic):
            pex_exact_tiny(cycle_graph(5))

    @pytest.mark.parametrize("n,expected", sorted(PEX_COMPLETE.items()))
    def test_complete_hosts(self, n, expected):
        r = pex_exact_tiny(Graph.complete(n))
        assert r.exact_pex == expected

    @pytest.mark.parametrize("n", range(4, 10))
    def test_respects_lower_bound(self, n):
        r = pex_exact_tiny(Graph.complete(n))
        assert r.exact_pex >= math.ceil(pex_lower_bound(n) - 1e-9)

    def test_size_guard(self):
        with pytest.raises(ValueError):
            pex_exact_tiny(Graph.complete(10))

    def test_sparse_host(self):
        # a wheel is pancyclic with excess n-1-n... use it as a host whose
        # own edge set constrains the search
        n = 6
        g = cycle_graph(n - 1)
        h = Graph(n)
        for u, v in g.edges():
            h.add_edge(u, v)
        for v in range(n - 1):
            h.add_edge(v, n - 1)  # hub
        r = pex_exact_tiny(h)
        assert r.exact_pex is not None
        assert r.exact_pex >= math.ceil(pex_lower_bound(n) - 1e-9)
