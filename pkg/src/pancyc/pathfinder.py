"""Bounded-budget combinatorial searches used by the construction.

The probabilistic existence arguments are replaced by explicit searches:

* :func:`extract_core` peels low-degree vertices and returns a dense core;
* :func:`embed_leafy_tree` greedily embeds a stem plus a complete
  arity-ary tree inside such a core;
* :func:`find_exact_path` finds an s-t path of an exact edge length,
  trying a two-tree embedding first and falling back to randomized DFS
  with breadth-first distance pruning;
* :func:`find_exact_cycle` reduces to an exact path across a chosen edge;
* :func:`hamilton_path_between` runs rotation-extension inside an induced
  vertex set and then rotates endpoints onto prescribed attachment sets.

All searches are deterministic given the budget's RNG seed.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Iterable

from .errors import CoreTooSmall, EmbedFailed, ImpossibleLength, NotFound
from .graph import Graph, VertexPath


@dataclass
class SearchBudget:
    """Restart and step limits for one search invocation."""

    max_restarts: int = 50
    max_steps: int | None = None  # default: 20 * n, chosen at call time
    rng_seed: int = 0

    def steps_for(self, n: int) -> int:
        return self.max_steps if self.max_steps is not None else 20 * n


@dataclass(frozen=True)
class ExpanderCore:
    """Result of iterative peeling: a dense core plus the peeling log."""

    vertices: frozenset[int]
    beta: float
    threshold: int
    peel_log: tuple[tuple[int, ...], ...]

    @property
    def vertex_list(self) -> list[int]:
        return sorted(self.vertices)


def extract_core(g: Graph, vertices: Iterable[int] | None = None, beta: float | None = None) -> ExpanderCore:
    """Peel vertices of in-set degree below a threshold until stable.

    With `beta` given, the threshold is ceil(1/(3*beta)); otherwise it is
    half the average in-set degree (at least 2) and the effective beta is
    back-computed from it.  Raises CoreTooSmall if fewer than
    (1 - beta) * |U| vertices survive.
    """
    U = set(vertices) if vertices is not None else set(range(g.n))
    if not U:
        raise CoreTooSmall("empty vertex set")
    deg = {v: len(g.neighbors(v) & U) for v in U}
    if beta is not None:
        if beta <= 0:
            raise ValueError("beta must be positive")
        threshold = max(1, math.ceil(1.0 / (3.0 * beta)))
        beta_eff = beta
    else:
        avg = sum(deg.values()) / len(U)
        threshold = max(2, int(avg / 2.0))
        beta_eff = 1.0 / (3.0 * threshold)
    core = set(U)
    peel_log: list[tuple[int, ...]] = []
    frontier = sorted(v for v in core if deg[v] < threshold)
    while frontier:
        peel_log.append(tuple(frontier))
        for v in frontier:
            core.discard(v)
        touched = set()
        for v in frontier:
            for w in g.neighbors(v):
                if w in core:
                    deg[w] -= 1
                    touched.add(w)
        frontier = sorted(w for w in touched if deg[w] < threshold)
    if len(core) < (1.0 - beta_eff) * len(U):
        raise CoreTooSmall(
            f"core kept {len(core)}/{len(U)} vertices, below (1-beta)|U| with beta={beta_eff:.4f}"
        )
    return ExpanderCore(
        vertices=frozenset(core), beta=beta_eff, threshold=threshold, peel_log=tuple(peel_log)
    )


@dataclass(frozen=True)
class TreeEmbedding:
    """A stem path plus a complete arity-ary tree embedded in a graph."""

    root: int
    stem_path: tuple[int, ...]
    parent: dict[int, int]
    leaves: frozenset[int]
    vertices: frozenset[int]

    def root_path(self, leaf: int) -> list[int]:
        """Vertex sequence from the overall root to `leaf`."""
        if leaf not in self.vertices:
            raise ValueError("not an embedded vertex")
        up = [leaf]
        cur = leaf
        while cur in self.parent:
            cur = self.parent[cur]
            up.append(cur)
        if cur != self.stem_path[-1]:
            raise ValueError("leaf does not hang off the stem end")
        return list(self.stem_path[:-1]) + up[::-1]


def embed_leafy_tree(
    core: ExpanderCore,
    g: Graph,
    root: int,
    arity: int,
    depth: int,
    stem: int,
    rng: random.Random | None = None,
    used: Iterable[int] | None = None,
) -> TreeEmbedding:
    """Greedily embed stem + complete tree inside the core, avoiding `used`."""
    if root not in core.vertices:
        raise ValueError("root must lie in the core")
    if arity < 1 or depth < 0 or stem < 0:
        raise ValueError("arity >= 1, depth >= 0, stem >= 0 required")
    rng = rng or random.Random(0)
    inside = core.vertices
    taken = set(used or ())
    taken.add(root)
    stem_path = [root]
    while len(stem_path) < stem + 1:
        cur = stem_path[-1]
        cands = sorted(w for w in g.neighbors(cur) if w in inside and w not in taken)
        if not cands:
            raise EmbedFailed(f"stem stuck after {len(stem_path) - 1} of {stem} edges")
        w = rng.choice(cands)
        taken.add(w)
        stem_path.append(w)
    parent: dict[int, int] = {}
    level = [stem_path[-1]]
    for _ in range(depth):
        nxt: list[int] = []
        for v in level:
            cands = sorted(w for w in g.neighbors(v) if w in inside and w not in taken)
            if len(cands) < arity:
                raise EmbedFailed(f"vertex {v} has {len(cands)} fresh neighbors, needs {arity}")
            picks = rng.sample(cands, arity)
            for w in picks:
                taken.add(w)
                parent[w] = v
                nxt.append(w)
        level = nxt
    verts = frozenset(set(stem_path) | set(parent))
    return TreeEmbedding(
        root=root,
        stem_path=tuple(stem_path),
        parent=parent,
        leaves=frozenset(level),
        vertices=verts,
    )


def _bfs_dist(g: Graph, src: int, blocked: set[int]) -> dict[int, int]:
    dist = {src: 0}
    frontier = [src]
    d = 0
    while frontier:
        d += 1
        nxt = []
        for v in frontier:
            for w in g.neighbors(v):
                if w not in dist and w not in blocked:
                    dist[w] = d
                    nxt.append(w)
        frontier = nxt
    return dist


def _dfs_exact(
    g: Graph,
    s: int,
    t: int,
    length: int,
    blocked: set[int],
    dist: dict[int, int],
    rng: random.Random,
    max_steps: int,
) -> list[int] | None:
    """Randomized DFS for an exact-length s-t path; None on budget exhaustion."""

    def options(v: int) -> list[int]:
        opts = sorted(w for w in g.neighbors(v) if w not in blocked and w in dist)
        rng.shuffle(opts)
        return opts

    path = [s]
    on = {s}
    frames = [options(s)]
    steps = 0
    while frames:
        steps += 1
        if steps > max_steps:
            return None
        fr = frames[-1]
        descended = False
        while fr:
            w = fr.pop()
            if w in on:
                continue
            rem = length - len(path)  # edges left after stepping onto w
            if w == t:
                if rem == 0:
                    return path + [t]
                continue
            if rem < 1 or dist[w] > rem:
                continue
            path.append(w)
            on.add(w)
            frames.append(options(w))
            descended = True
            break
        if not descended:
            frames.pop()
            if frames:
                on.discard(path.pop())
    return None


def _tree_attempt(
    g: Graph,
    s: int,
    t: int,
    length: int,
    blocked: set[int],
    rng: random.Random,
) -> list[int] | None:
    """Two-tree strategy: trees joined by a stem, endpoints attach to leaves."""
    if length < 8:
        return None
    avoid = blocked | {s, t}
    pool = [v for v in range(g.n) if v not in avoid]
    if len(pool) < length + 4:
        return None
    try:
        core = extract_core(g, pool)
    except CoreTooSmall:
        return None
    cv = [v for v in core.vertex_list]
    if len(cv) < length + 2:
        return None
    depth = 1
    arity = 3
    stem = length - 2 * depth - 2
    if stem < 1:
        return None
    for _ in range(3):
        root = rng.choice(cv)
        try:
            t1 = embed_leafy_tree(core, g, root, arity, depth, 0, rng=rng)
            t2 = embed_leafy_tree(
                core, g, root, arity, depth, stem, rng=rng, used=t1.vertices - {root}
            )
        except EmbedFailed:
            continue
        l1s = sorted(t1.leaves & g.neighbors(s))
        l2s = sorted((t2.leaves - t1.vertices) & g.neighbors(t))
        if not l1s or not l2s:
            continue
        l1 = rng.choice(l1s)
        l2 = rng.choice(l2s)
        p1 = t1.root_path(l1)  # root .. l1
        p2 = t2.root_path(l2)  # root .. stem .. l2
        candidate = [s] + p1[::-1] + p2[1:] + [t]
        if len(set(candidate)) == len(candidate) == length + 1:
            return candidate
    return None


def find_exact_path(
    g: Graph,
    s: int,
    t: int,
    length: int,
    forbidden: Iterable[int] = (),
    budget: SearchBudget | None = None,
) -> VertexPath:
    """Simple s-t path with exactly `length` edges avoiding `forbidden`."""
    budget = budget or SearchBudget()
    blocked = set(forbidden)
    if s == t:
        raise ValueError("endpoints must differ")
    if s in blocked or t in blocked:
        raise ValueError("endpoints may not be forbidden")
    if length < 1 or length >= g.n or length + 1 > g.n - len(blocked - {s, t}):
        raise ImpossibleLength(f"length {length} unattainable with {g.n} vertices")
    if length == 1:
        if g.has_edge(s, t):
            return VertexPath((s, t))
        raise ImpossibleLength(f"no edge ({s}, {t})")
    dist = _bfs_dist(g, t, blocked)
    if s not in dist or dist[s] > length:
        raise ImpossibleLength(f"t at distance {dist.get(s, 'inf')} > {length} from s")
    rng = random.Random(budget.rng_seed)
    max_steps = budget.steps_for(g.n)
    for attempt in range(budget.max_restarts):
        arng = random.Random(rng.getrandbits(64))
        res = None
        if attempt % 4 == 0 and length >= 8:
            res = _tree_attempt(g, s, t, length, blocked, arng)
        if res is None:
            res = _dfs_exact(g, s, t, length, blocked, dist, arng, max_steps)
        if res is not None:
            return VertexPath(tuple(res))
    raise NotFound(f"no ({s}, {t})-path of length {length} within budget")


def find_exact_cycle(
    g: Graph,
    length: int,
    forbidden: Iterable[int] = (),
    budget: SearchBudget | None = None,
) -> tuple[int, ...]:
    """Simple cycle of exactly `length` vertices avoiding `forbidden`."""
    budget = budget or SearchBudget()
    blocked = set(forbidden)
    if length < 3 or length > g.n - len(blocked):
        raise ImpossibleLength(f"cycle length {length} unattainable")
    rng = random.Random(budget.rng_seed)
    cand = [e for e in g.edges() if e[0] not in blocked and e[1] not in blocked]
    rng.shuffle(cand)
    # scan every candidate closing edge cheaply first, then retry the most
    # promising ones with the full budget
    for restarts, steps in ((2, 60 * length), (6, budget.steps_for(g.n))):
        for u, v in cand:
            try:
                p = find_exact_path(
                    g, u, v, length - 1, blocked,
                    SearchBudget(restarts, steps, rng.getrandbits(64)),
                )
            except (ImpossibleLength, NotFound):
                continue
            return p.vertices
        if len(cand) * budget.steps_for(g.n) > 4_000_000:
            break  # second sweep too expensive; accept failure
    raise NotFound(f"no cycle of length {length} within budget")


# --- Hamilton path via rotation-extension ---


def _posa_spanning(
    adj: dict[int, list[int]], rng: random.Random, max_steps: int
) -> list[int] | None:
    verts = sorted(adj)
    start = rng.choice(verts)
    path = [start]
    pos = {start: 0}
    steps = 0
    target = len(verts)
    while len(path) < target:
        steps += 1
        if steps > max_steps:
            return None
        head = path[-1]
        fresh = [w for w in adj[head] if w not in pos]
        if fresh:
            w = rng.choice(fresh)
            pos[w] = len(path)
            path.append(w)
            continue
        tail = path[0]
        if any(w not in pos for w in adj[tail]):
            path.reverse()
            for i, v in enumerate(path):
                pos[v] = i
            continue
        pivots = [w for w in adj[head] if w in pos and pos[w] < len(path) - 2]
        if not pivots:
            return None
        u = rng.choice(pivots)
        i = pos[u]
        path[i + 1 :] = path[i + 1 :][::-1]
        for j in range(i + 1, len(path)):
            pos[path[j]] = j
    return path


def _rotation_endpoints(path: list[int], adj: dict[int, list[int]]) -> dict[int, list[int]]:
    """Endpoints reachable by rotations that keep path[0] fixed."""
    out = {path[-1]: path}
    queue = [path]
    while queue:
        p = queue.pop()
        pos = {v: i for i, v in enumerate(p)}
        head = p[-1]
        for u in adj[head]:
            i = pos.get(u)
            if i is None or i >= len(p) - 2:
                continue
            nh = p[i + 1]
            if nh in out:
                continue
            np_ = p[: i + 1] + p[i + 1 :][::-1]
            out[nh] = np_
            queue.append(np_)
    return out


def hamilton_path_between(
    g: Graph,
    inner: Iterable[int],
    s_outer: int,
    t_outer: int,
    budget: SearchBudget | None = None,
) -> VertexPath:
    """Path s_outer -> ... -> t_outer whose interior is exactly `inner`.

    The interior path is found by rotation-extension inside g[inner]; the
    two endpoints are then rotated onto neighbors of s_outer and t_outer.
    """
    budget = budget or SearchBudget()
    X = set(inner)
    if not X:
        raise ValueError("inner vertex set must be non-empty")
    if s_outer in X or t_outer in X or s_outer == t_outer:
        raise ValueError("attachment vertices must be distinct and outside the set")
    s_cand = g.neighbors(s_outer) & X
    t_cand = g.neighbors(t_outer) & X
    if not s_cand or not t_cand:
        raise NotFound("attachment vertices have no neighbors inside the set")
    if len(X) == 1:
        v = next(iter(X))
        if v in s_cand and v in t_cand:
            return VertexPath((s_outer, v, t_outer))
        raise NotFound("single interior vertex not adjacent to both attachments")
    adj = {v: sorted(g.neighbors(v) & X) for v in sorted(X)}
    if any(not lst for lst in adj.values()):
        raise NotFound("isolated vertex inside the set")
    rng = random.Random(budget.rng_seed)
    max_steps = budget.max_steps if budget.max_steps is not None else max(400, 30 * len(X))
    for _ in range(budget.max_restarts):
        arng = random.Random(rng.getrandbits(64))
        sp = _posa_spanning(adj, arng, max_steps)
        if sp is None:
            continue
        for orient in (sp, sp[::-1]):
            ends = _rotation_endpoints(orient, adj)
            hits = [h for h in sorted(ends) if h in s_cand]
            for h in hits[:5]:
                q = ends[h][::-1]  # fix h as the tail, rotate the other end
                ends2 = _rotation_endpoints(q, adj)
                for h2 in sorted(ends2):
                    if h2 in t_cand:
                        r = ends2[h2]  # r[0] = h in s_cand, r[-1] = h2 in t_cand
                        return VertexPath((s_outer, *r, t_outer))
    raise NotFound("no spanning path with the required attachments within budget")
