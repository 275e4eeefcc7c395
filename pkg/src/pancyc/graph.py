"""Simple undirected graph with the operations the construction needs.

Vertices are integers 0..n-1.  Adjacency is a list of sets, which keeps
edge queries O(1) and neighbor iteration cheap; the search code touches
these sets millions of times, so ``neighbors`` returns the live set and
callers must not mutate it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded


class Graph:
    """Undirected simple graph on a fixed vertex set {0, ..., n-1}."""

    __slots__ = ("n", "_adj", "m")

    def __init__(self, n: int):
        if n < 0:
            raise ValueError("n must be non-negative")
        self.n = n
        self._adj: list[set[int]] = [set() for _ in range(n)]
        self.m = 0

    def _check(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"vertex {v} out of range [0, {self.n})")

    def add_edge(self, u: int, v: int) -> bool:
        """Add edge {u, v}; returns False if it was already present."""
        self._check(u)
        self._check(v)
        if u == v:
            raise ValueError("self-loops not allowed")
        if v in self._adj[u]:
            return False
        self._adj[u].add(v)
        self._adj[v].add(u)
        self.m += 1
        return True

    def remove_edge(self, u: int, v: int) -> None:
        if v not in self._adj[u]:
            raise KeyError(f"edge ({u}, {v}) not present")
        self._adj[u].discard(v)
        self._adj[v].discard(u)
        self.m -= 1

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and v in self._adj[u]

    def neighbors(self, v: int) -> set[int]:
        """Live adjacency set of v.  Treat as read-only."""
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def edges(self) -> list[tuple[int, int]]:
        """Every edge once as (u, v) with u < v, in sorted order."""
        return list(self._iter_edges())

    def _iter_edges(self) -> Iterator[tuple[int, int]]:
        for u in range(self.n):
            for v in sorted(self._adj[u]):
                if u < v:
                    yield (u, v)

    def copy(self) -> "Graph":
        g = Graph(self.n)
        g._adj = [set(a) for a in self._adj]
        g.m = self.m
        return g

    def add_edges(self, pairs: Iterable[tuple[int, int]]) -> None:
        for u, v in pairs:
            self.add_edge(u, v)

    @classmethod
    def complete(cls, n: int) -> "Graph":
        g = cls(n)
        for u in range(n):
            for v in range(u + 1, n):
                g.add_edge(u, v)
        return g

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[tuple[int, int]]) -> "Graph":
        g = cls(n)
        g.add_edges(pairs)
        return g

    # --- edge-list text format: "n m" header then one "u v" line per edge ---

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in self.edges())
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Graph":
        rows = [r for r in (line.strip() for line in text.splitlines()) if r and not r.startswith("#")]
        if not rows:
            raise ValueError("empty edge list")
        n, m = (int(x) for x in rows[0].split())
        g = cls(n)
        for row in rows[1:]:
            u, v = (int(x) for x in row.split())
            g.add_edge(u, v)
        if g.m != m:
            raise ValueError(f"header claims {m} edges, found {g.m}")
        return g

    def __repr__(self) -> str:  # pragma: no cover
        return f"Graph(n={self.n}, m={self.m})"


def external_neighborhood(g: Graph, vertices: Iterable[int]) -> set[int]:
    """All vertices outside `vertices` adjacent to at least one of them."""
    inside = set(vertices)
    out: set[int] = set()
    for v in inside:
        out |= g.neighbors(v)
    return out - inside


def check_path(g: Graph, seq: Sequence[int]) -> bool:
    """True iff seq is a simple path in g (distinct vertices, consecutive edges)."""
    if len(seq) < 1 or len(set(seq)) != len(seq):
        return False
    return all(g.has_edge(seq[i], seq[i + 1]) for i in range(len(seq) - 1))


def check_cycle(g: Graph, seq: Sequence[int]) -> bool:
    """True iff seq (without repeated closing vertex) is a simple cycle in g."""
    if len(seq) < 3:
        return False
    return check_path(g, seq) and g.has_edge(seq[-1], seq[0])


def canonical_cycle(seq: Sequence[int]) -> tuple[int, ...]:
    """Canonical rotation/reflection: smallest vertex first, smaller neighbor second."""
    k = len(seq)
    if k < 3:
        raise ValueError("cycle needs at least 3 vertices")
    i = min(range(k), key=lambda j: seq[j])
    fwd = tuple(seq[(i + j) % k] for j in range(k))
    rev = tuple(seq[(i - j) % k] for j in range(k))
    return fwd if fwd[1] < rev[1] else rev


@dataclass(frozen=True)
class VertexPath:
    """A simple path given by its vertex sequence."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("path vertices must be distinct")

    @property
    def length(self) -> int:
        """Number of edges."""
        return len(self.vertices) - 1

    def reversed(self) -> "VertexPath":
        return VertexPath(tuple(reversed(self.vertices)))


@dataclass(frozen=True)
class VertexCycle:
    """A simple cycle in canonical form (no repeated closing vertex)."""

    vertices: tuple[int, ...]

    def __post_init__(self):
        if len(self.vertices) < 3:
            raise ValueError("cycle needs at least 3 vertices")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("cycle vertices must be distinct")
        object.__setattr__(self, "vertices", canonical_cycle(self.vertices))

    @property
    def length(self) -> int:
        return len(self.vertices)


def _iter_cycles(g: Graph, cap: int) -> Iterator[tuple[int, ...]]:
    """Backtracking enumeration of all simple cycles, each exactly once.

    Roots cycles at their smallest vertex and only explores larger
    vertices; each cycle is emitted once by requiring second < last.
    """
    adj_sorted = [sorted(g._adj[v]) for v in range(g.n)]
    found = 0
    for r in range(g.n):
        adj_r = g._adj[r]
        start = [w for w in adj_sorted[r] if w > r]
        if len(start) < 2:
            continue
        path = [r]
        on_path = {r}
        stack: list[Iterator[int]] = [iter(start)]
        while stack:
            descended = False
            for w in stack[-1]:
                if w <= r or w in on_path:
                    continue
                path.append(w)
                on_path.add(w)
                if len(path) >= 3 and w in adj_r and path[1] < path[-1]:
                    found += 1
                    if found > cap:
                        raise CapExceeded(cap, found)
                    yield tuple(path)
                stack.append(iter(adj_sorted[w]))
                descended = True
                break
            if not descended:
                stack.pop()
                on_path.discard(path.pop())


def enumerate_simple_cycles(g: Graph, cap: int = 10**6) -> list[VertexCycle]:
    """Every simple cycle of g, canonicalized.  Raises CapExceeded past `cap`."""
    return [VertexCycle(seq) for seq in _iter_cycles(g, cap)]


def count_simple_cycles(g: Graph, cap: int = 10**6) -> int:
    """Number of simple cycles of g without materializing them."""
    return sum(1 for _ in _iter_cycles(g, cap))


def _root_cycle_lengths(g: Graph, r: int, adj_sorted: list[list[int]]) -> Iterator[int]:
    """Lengths of the cycles whose smallest vertex is r, one per cycle."""
    adj_r = g._adj[r]
    start = [w for w in adj_sorted[r] if w > r]
    if len(start) < 2:
        return
    path = [r]
    on_path = {r}
    stack: list[Iterator[int]] = [iter(start)]
    while stack:
        descended = False
        for w in stack[-1]:
            if w <= r or w in on_path:
                continue
            path.append(w)
            on_path.add(w)
            if len(path) >= 3 and w in adj_r and path[1] < path[-1]:
                yield len(path)
            stack.append(iter(adj_sorted[w]))
            descended = True
            break
        if not descended:
            stack.pop()
            on_path.discard(path.pop())


def cycle_spectrum_bruteforce(g: Graph, cap: int = 10**6) -> set[int]:
    """Set of cycle lengths present in g, by exhaustive enumeration.

    Two exactness-preserving optimizations over naive enumeration:
    per-root generators are interleaved round-robin so every region of
    the graph contributes early, and enumeration stops as soon as every
    length in [3, n] has been seen (the spectrum is then maximal and
    cannot change).  Raises CapExceeded only if the cap is hit before
    either saturation or exhaustion.
    """
    adj_sorted = [sorted(g._adj[v]) for v in range(g.n)]
    gens = [_root_cycle_lengths(g, r, adj_sorted) for r in range(g.n)]
    target = set(range(3, g.n + 1))
    seen: set[int] = set()
    emitted = 0
    live = gens
    while live:
        nxt = []
        for gen in live:
            try:
                length = next(gen)
            except StopIteration:
                continue
            emitted += 1
            if emitted > cap:
                raise CapExceeded(cap, emitted)
            seen.add(length)
            if seen == target:
                return seen
            nxt.append(gen)
        live = nxt
    return seen


def is_pancyclic_bruteforce(g: Graph, cap: int = 10**6) -> bool:
    """True iff g contains a cycle of every length in [3, n]."""
    return cycle_spectrum_bruteforce(g, cap) >= set(range(3, g.n + 1))
