"""Counting bounds and exact small-case values for chord-minimal pancyclicity.

``pex(n)`` here means: the minimum number of chords that must be added to
a Hamilton cycle on n vertices so that the resulting graph contains a
cycle of every length in [3, n].
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .errors import HostNotPancyclic
from .graph import (
    Graph,
    count_simple_cycles,
    enumerate_simple_cycles,
    is_pancyclic_bruteforce,
)


def shi_cycle_bound(k: int) -> int:
    """Maximum number of cycles in a Hamiltonian graph with n + k edges.

    A Hamilton cycle plus k chords has at most 2^(k+1) - 1 cycles: every
    cycle is determined by the subset of chords it uses, each nonempty
    subset yields at most one cycle, and the empty subset yields one.
    K_4 (k = 2) attains the bound with 7 cycles.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 2 ** (k + 1) - 1


def check_shi(g: Graph, cap: int = 10**6) -> tuple[int, int, bool]:
    """(cycle count, bound, count <= bound) for a Hamiltonian graph."""
    k = g.m - g.n
    if k < 0:
        raise ValueError("graph has fewer edges than vertices")
    count = count_simple_cycles(g, cap=cap)
    bound = shi_cycle_bound(k)
    return count, bound, count <= bound


def pex_lower_bound(n: int) -> float:
    """log2(n - 1) - 1.

    A pancyclic graph has n - 2 distinct cycle lengths, hence at least
    n - 2 cycles; with k chords there are at most 2^(k+1) - 1 cycles, so
    2^(k+1) - 1 >= n - 2, i.e. k >= log2(n - 1) - 1.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    return math.log2(n - 1) - 1


@dataclass(frozen=True)
class PexResult:
    n: int
    exact_pex: int | None
    lower_bound: float
    method: str  # "oracle" | "bound-only"


def pex_exact_tiny(host: Graph) -> PexResult:
    """Exact minimum chord count over subgraphs of ``host`` (n <= 9).

    A minimum pancyclic subgraph contains a Hamilton cycle, so the search
    runs per Hamilton cycle of the host over chord subsets of increasing
    size, starting at the counting lower bound.  For a complete host the
    cycle can be fixed (any relabelling maps it to any other), which
    collapses the outer loop to a single branch.
    """
    n = host.n
    if not 3 <= n <= 9:
        raise ValueError("exhaustive search supported for 3 <= n <= 9")
    if not is_pancyclic_bruteforce(host):
        raise HostNotPancyclic(f"host on {n} vertices has no pancyclic subgraph")
    lb = pex_lower_bound(n)
    hams = [
        c.vertices
        for c in enumerate_simple_cycles(host)
        if len(c.vertices) == n
    ]
    if host.m == n * (n - 1) // 2:
        hams = hams[:1]  # vertex-transitive host: one branch suffices
    k0 = max(0, math.ceil(lb - 1e-9))
    for k in itertools.count(k0):
        for ham in hams:
            base = Graph(n)
            for q in range(n):
                base.add_edge(ham[q], ham[(q + 1) % n])
            pool = [e for e in host.edges() if not base.has_edge(*e)]
            if k > len(pool):
                continue
            for subset in itertools.combinations(pool, k):
                g = base.copy()
                g.add_edges(subset)
                if is_pancyclic_bruteforce(g):
                    return PexResult(n, k, lb, "oracle")
        if k > host.m:
            raise AssertionError("host is pancyclic; unreachable")
