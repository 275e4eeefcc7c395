"""Classical n + log2(n)-edge pancyclic subgraph of the complete graph.

Take the Hamilton cycle 0, 1, ..., n-1 and add binary-doubling chords
e_i = (a_i, a_{i+1}) with a_0 = 0 and a_{i+1} = a_i + 2^i + 1.  Nested
subsets of the chords give cycle lengths spaced by powers of two; the
short gaps are filled by a closing chord and a few residual chords.
Everything here runs on vertex ids directly, with no search.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import Infeasible
from .graph import Graph


def doubling_anchor_count(n: int) -> int:
    """Largest K with 2^(K+1) + K <= n - 1."""
    if n < 5:
        raise Infeasible(f"need n >= 5, got {n}")
    k = 0
    while 2 ** (k + 2) + (k + 1) <= n - 1:
        k += 1
    return k


@dataclass(frozen=True)
class BondyCertificate:
    """Chord layout witnessing pancyclicity of the Hamilton-plus-chords graph."""

    n: int
    K: int
    anchors: tuple[int, ...]          # a_0 .. a_{K+1}
    chords: tuple[tuple[int, int], ...]

    def cycle_of_length(self, ell: int) -> tuple[int, ...]:
        n, K = self.n, self.K
        if not 3 <= ell <= n:
            raise ValueError(f"length {ell} out of range [3, {n}]")
        a = self.anchors
        top = a[K + 1]  # = 2^(K+1) + K
        if ell >= n - (2 ** (K + 1) - 1):
            # skip a prefix of the doubling chords: walking chord e_i in
            # place of its arc saves 2^i vertices
            save = n - ell
            verts: list[int] = []
            i = 0
            cur = 0
            while i <= K:
                if save & (1 << i):
                    verts.extend((a[i], a[i + 1]))
                    cur = a[i + 1]
                else:
                    verts.extend(range(cur, a[i + 1] + 1) if not verts else range(cur + 1, a[i + 1] + 1))
                    cur = a[i + 1]
                i += 1
            verts.extend(range(cur + 1, n))
            out = _dedup_runs(verts)
            if len(out) != ell:
                raise AssertionError(f"doubling decode gave {len(out)} != {ell}")
            return tuple(out)
        if K + 2 <= ell <= top + 1:
            # closing chord (a_0, a_{K+1}) plus a suffix of the doubling
            # chords: shortest route uses every chord, longest none
            save = top + 1 - ell
            verts = []
            cur = 0
            for i in range(K + 1):
                if save & (1 << i):
                    verts.extend((a[i], a[i + 1]))
                    cur = a[i + 1]
                else:
                    verts.extend(range(cur, a[i + 1] + 1) if not verts else range(cur + 1, a[i + 1] + 1))
                    cur = a[i + 1]
            out = _dedup_runs(verts)
            if len(out) != ell:
                raise AssertionError(f"closing decode gave {len(out)} != {ell}")
            return tuple(out)
        # residual chord (n - ell, n - 1) for 3 <= ell <= K + 1
        return tuple(range(n - ell, n))

    def to_graph(self) -> Graph:
        g = Graph(self.n)
        for v in range(self.n):
            g.add_edge(v, (v + 1) % self.n)
        for u, v in self.chords:
            g.add_edge(u, v)
        return g


def _dedup_runs(verts: list[int]) -> list[int]:
    out = [verts[0]]
    for v in verts[1:]:
        if v != out[-1]:
            out.append(v)
    return out


def bondy_construction(n: int) -> BondyCertificate:
    """Pancyclic subgraph of K_n with n + O(log n) edges."""
    K = doubling_anchor_count(n)
    anchors = [0]
    for i in range(K + 1):
        anchors.append(anchors[-1] + 2**i + 1)
    chords = [(anchors[i], anchors[i + 1]) for i in range(K + 1)]
    chords.append((anchors[0], anchors[K + 1]))
    # residual chords for the shortest lengths, anchored at the far end of
    # the cycle where they cannot collide with the doubling chords
    for ell in range(3, K + 2):
        chords.append((n - ell, n - 1))
    seen: set[frozenset[int]] = set()
    kept = []
    for u, v in chords:
        fs = frozenset((u, v))
        if (v - u) % n in (1, n - 1):
            continue  # the closing chord degenerates to a cycle edge when
            #           the anchors span the whole cycle; the decode still
            #           works because that edge exists in the Hamilton cycle
        if fs not in seen:
            seen.add(fs)
            kept.append((u, v))
    return BondyCertificate(n=n, K=K, anchors=tuple(anchors), chords=tuple(kept))


def excess_edges(n: int) -> int:
    """Chord count of the construction (edges beyond the Hamilton cycle)."""
    cert = bondy_construction(n)
    return len(cert.chords)
