"""Five-step construction of a sparse pancyclic subgraph.

Each step consumes exactly one sampled layer:

1. vertex-disjoint seed cycles (the doubling cycles C_0..C_K0 and the
   short gadget cycle) in layer 1;
2. linking paths that join the C_i into the backbone cycle C* in layer 2;
3. in layer 3: the remaining doubling detours Q_i hanging off spare
   backbone edges, the gadget detour paths, and the path P* that ties the
   gadget to the backbone;
4. a Hamilton path through all unused vertices in layer 4, closing the
   Hamilton cycle C_H;
5. long shortcuts and per-length shortcuts in layer 5.

The output is the subgraph H_5 plus a :class:`Certificate` that decodes
every cycle length in [3, n].
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .certificate import (
    BinaryCycle,
    Certificate,
    Gadget,
    GadgetPath,
    LongShortcut,
    Star,
    build_h5,
    decodable_lengths,
)
from .errors import ImpossibleLength, NotFound, StepFailed
from .graph import Graph
from .params import ParamSet, edge_budget
from .pathfinder import SearchBudget, find_exact_cycle, find_exact_path, hamilton_path_between
from .sampler import LayerSample


@dataclass
class StepRecord:
    step: int
    ok: bool
    detail: str
    ms: float


@dataclass
class PipelineResult:
    ok: bool
    h5: Graph | None
    certificate: Certificate | None
    step_log: list[StepRecord]
    failure: StepFailed | None = None


@dataclass
class _State:
    ps: ParamSet
    layers: list[Graph]
    rng: random.Random
    budget: SearchBudget
    used: set[int] = field(default_factory=set)
    binary: dict[int, BinaryCycle] = field(default_factory=dict)
    c_short: tuple[int, ...] = ()
    gadget_paths: dict[tuple[int, int], GadgetPath] = field(default_factory=dict)
    c_star: tuple[int, ...] = ()
    e_star: tuple[int, int] = (-1, -1)
    a_star: int = -1
    s_h: int = -1
    p_star: tuple[int, ...] = ()
    ham_path: tuple[int, ...] = ()
    c_h: tuple[int, ...] = ()
    longs: dict[int, LongShortcut] = field(default_factory=dict)
    singles: dict[int, tuple[int, ...]] = field(default_factory=dict)
    provenance: dict[frozenset[int], int] = field(default_factory=dict)

    def sub_budget(self, restarts: int | None = None) -> SearchBudget:
        return SearchBudget(
            max_restarts=restarts if restarts is not None else self.budget.max_restarts,
            max_steps=self.budget.max_steps,
            rng_seed=self.rng.getrandbits(63),
        )

    def record_edges(self, seq, step: int, cyclic: bool = False) -> None:
        pairs = [(seq[q], seq[q + 1]) for q in range(len(seq) - 1)]
        if cyclic:
            pairs.append((seq[-1], seq[0]))
        for u, v in pairs:
            self.provenance.setdefault(frozenset((u, v)), step)


def _orient_cycle_at_min_edge(seq: tuple[int, ...]) -> list[int]:
    """Rotate/reflect so the lexicographically smallest edge closes the cycle.

    Returns vs with (vs[0], vs[-1]) that edge and vs[0] < vs[-1].
    """
    k = len(seq)
    edges = [(tuple(sorted((seq[q], seq[(q + 1) % k]))), q) for q in range(k)]
    _, q = min(edges)
    a, b = seq[q], seq[(q + 1) % k]
    # walk from b around to a (dropping edge (a, b))
    vs = [seq[(q + 1 + r) % k] for r in range(k)]
    if vs[0] > vs[-1]:
        vs.reverse()
    return vs


def _step1(st: _State) -> None:
    ps = st.ps
    g1 = st.layers[0]
    try:
        short_len = ps.b * ps.t + 1
        cyc = find_exact_cycle(g1, short_len, st.used, st.sub_budget())
        st.c_short = tuple(_orient_cycle_at_min_edge(cyc))
        st.used.update(st.c_short)
        st.record_edges(st.c_short, 1, cyclic=True)
        for i in range(ps.K0, -1, -1):
            cyc = find_exact_cycle(g1, ps.ell(i) + 1, st.used, st.sub_budget())
            vs = _orient_cycle_at_min_edge(cyc)
            # arc runs s_i .. t_i; chord e_i = (s_i, t_i) is the smallest edge
            st.binary[i] = BinaryCycle(i, (vs[0], vs[-1]), tuple(vs))
            st.used.update(vs)
            st.record_edges(vs, 1, cyclic=True)
    except (NotFound, ImpossibleLength) as exc:
        raise StepFailed(1, str(exc)) from exc


def _step2(st: _State) -> None:
    ps = st.ps
    g2 = st.layers[1]
    k0 = ps.K0
    backbone: list[int] = []
    try:
        for i in range(k0 + 1):
            s_i, t_i = st.binary[i].edge
            s_next = st.binary[(i + 1) % (k0 + 1)].edge[0]
            forb = st.used - {t_i, s_next}
            q = find_exact_path(g2, t_i, s_next, ps.d + 2, forb, st.sub_budget())
            st.used.update(q.vertices)
            st.record_edges(q.vertices, 2)
            backbone.extend([s_i, t_i])
            backbone.extend(q.vertices[1:-1])
    except (NotFound, ImpossibleLength) as exc:
        raise StepFailed(2, str(exc)) from exc
    st.c_star = tuple(backbone)
    if len(st.c_star) != ps.ell_star:
        raise StepFailed(2, f"backbone length {len(st.c_star)} != {ps.ell_star}")


def _cyclic_dist(a: int, b: int, n: int) -> int:
    return min((a - b) % n, (b - a) % n)


def choose_spare_edges(ps: ParamSet) -> tuple[list[int], int]:
    """Spare backbone edge positions for e_{K0+1}..e_K plus e*.

    Positions index edges of the backbone cycle (edge q joins backbone
    vertices q and q+1).  Returns (positions sorted, e_star position).
    Spare edges are pairwise vertex-disjoint, avoid the K0+1 shortcut
    edges, and are spread as evenly as the backbone permits; e* must
    additionally not touch any shortcut edge.
    """
    ls = ps.ell_star
    shortcut_pos = {i * (ps.d + 3) for i in range(ps.K0 + 1)}
    need = ps.K - ps.K0  # spares; e* is chosen first, separately
    star_cands = [
        q for q in range(ls)
        if q not in shortcut_pos
        and all(_cyclic_dist(q, s, ls) >= 2 for s in shortcut_pos)
    ]
    if not star_cands:
        raise StepFailed(3, "no backbone edge clear of the shortcut junctions")
    e_star_pos = max(
        star_cands,
        key=lambda q: (min(_cyclic_dist(q, s, ls) for s in shortcut_pos), -q),
    )
    chosen: list[int] = [e_star_pos]
    stride = ls / max(need, 1)
    for r in range(need):
        target = int((r + 0.5) * stride) % ls
        placed = False
        for delta in range(ls):
            for q in ((target + delta) % ls, (target - delta) % ls):
                if q in shortcut_pos or q in chosen:
                    continue
                if any(_cyclic_dist(q, c, ls) < 2 for c in chosen):
                    continue
                chosen.append(q)
                placed = True
                break
            if placed:
                break
        if not placed:
            raise StepFailed(3, "backbone too short for spare edges")
    spares = sorted(q for q in chosen if q != e_star_pos)
    return spares, e_star_pos


def _step3(st: _State) -> None:
    ps = st.ps
    g3 = st.layers[2]
    cs = st.c_star
    ls = len(cs)
    spares, e_star_pos = choose_spare_edges(ps)
    st.e_star = (cs[e_star_pos], cs[(e_star_pos + 1) % ls])
    for idx, q in enumerate(spares):
        i = ps.K0 + 1 + idx
        s_i, t_i = cs[q], cs[(q + 1) % ls]
        st.binary[i] = BinaryCycle(i, (s_i, t_i), ())  # arc filled below
    try:
        # doubling detours, longest first while space is plentiful
        for i in range(ps.K, ps.K0, -1):
            s_i, t_i = st.binary[i].edge
            forb = st.used - {s_i, t_i}
            q = find_exact_path(g3, s_i, t_i, ps.ell(i), forb, st.sub_budget())
            st.binary[i] = BinaryCycle(i, (s_i, t_i), q.vertices)
            st.used.update(q.vertices)
            st.record_edges(q.vertices, 3)
        # gadget detours, longest first
        order = sorted(
            ((i, j) for i in range(ps.t) for j in range(ps.b)),
            key=lambda ij: -(ps.d + 2 + ij[1] * ps.b ** ij[0]),
        )
        for i, j in order:
            q0 = i * ps.b + j
            va, vb = st.c_short[q0], st.c_short[q0 + 1]
            length = ps.d + 2 + j * ps.b**i
            forb = st.used - {va, vb}
            p = find_exact_path(g3, va, vb, length, forb, st.sub_budget())
            st.gadget_paths[(i, j)] = GadgetPath(i, j, p.vertices)
            st.used.update(p.vertices)
            st.record_edges(p.vertices, 3)
        # linking path P*: gadget end to one endpoint of e*
        v_last = st.c_short[-1]
        p_star = None
        for a_star, s_h in (st.e_star, st.e_star[::-1]):
            forb = st.used - {a_star, v_last}
            try:
                p = find_exact_path(g3, a_star, v_last, ps.d + 2, forb, st.sub_budget())
            except (NotFound, ImpossibleLength):
                continue
            p_star = p.vertices
            st.a_star, st.s_h = a_star, s_h
            break
        if p_star is None:
            raise StepFailed(3, "no linking path from e* to the gadget")
        st.p_star = p_star
        st.used.update(p_star)
        st.record_edges(p_star, 3)
    except (NotFound, ImpossibleLength) as exc:
        raise StepFailed(3, str(exc)) from exc


def _step4(st: _State) -> None:
    ps = st.ps
    g4 = st.layers[3]
    free = sorted(set(range(g4.n)) - st.used)
    if not free:
        raise StepFailed(4, "no vertices left for the Hamilton path")
    t_h = st.c_short[0]
    try:
        p = hamilton_path_between(g4, free, st.s_h, t_h, st.sub_budget())
    except (NotFound, ValueError) as exc:
        raise StepFailed(4, str(exc)) from exc
    st.ham_path = p.vertices  # (s_h, interior .., t_h)
    st.used.update(p.vertices)
    st.record_edges(p.vertices, 4)
    st.c_h = tuple(assemble_hamilton_cycle(st))
    n = g4.n
    if len(st.c_h) != n or len(set(st.c_h)) != n:
        raise StepFailed(4, "assembled Hamilton cycle does not span the graph")


def assemble_hamilton_cycle(st: _State) -> list[int]:
    """Walk the construction into a single Hamilton cycle vertex order."""
    ps = st.ps
    cs = st.c_star
    ls = len(cs)
    pos = {v: q for q, v in enumerate(cs)}
    shortcut_of = {frozenset(bc.edge): i for i, bc in st.binary.items()}
    out = [st.s_h]
    qs = pos[st.s_h]
    # walk direction away from a_star (e* is never traversed)
    step = 1 if cs[(qs + 1) % ls] != st.a_star else -1
    cur = qs
    for _ in range(ls - 1):
        nxt = (cur + step) % ls
        u, w = cs[cur], cs[nxt]
        i = shortcut_of.get(frozenset((u, w)))
        if i is not None:
            arc = st.binary[i].arc
            interior = arc[1:-1]
            out.extend(interior if u == arc[0] else interior[::-1])
        out.append(w)
        cur = nxt
    assert out[-1] == st.a_star
    out.extend(st.p_star[1:])  # lands on c_short[-1]
    b = ps.b
    for q0 in range(len(st.c_short) - 2, -1, -1):
        i, j = divmod(q0, b)
        gp = st.gadget_paths.get((i, j))
        if gp is not None:
            out.extend(gp.path[-2:0:-1])
        out.append(st.c_short[q0])
    out.extend(st.ham_path[-2:0:-1])  # back toward s_h
    return out


def _step5(st: _State) -> None:
    ps = st.ps
    g5 = st.layers[4]
    n = g5.n
    ch = st.c_h
    pos = {v: q for q, v in enumerate(ch)}
    s_size = ps.ell_star + ps.L  # backbone region occupies positions [0, s_size)
    taken = {frozenset(bc.edge) for bc in st.binary.values()}
    taken.add(frozenset(st.e_star))
    taken.add(frozenset((st.c_short[0], st.c_short[-1])))
    for q0 in range(len(st.c_short) - 1):
        taken.add(frozenset((st.c_short[q0], st.c_short[q0 + 1])))
    tol = round(n**0.9)
    edges5 = sorted(g5.edges())
    for i, target in ps.long_targets():
        best: tuple[int, int, int, int] | None = None
        for u, v in edges5:
            fs = frozenset((u, v))
            if fs in taken:
                continue
            pu, pv = pos[u], pos[v]
            for a, bv in ((pu, pv), (pv, pu)):
                alen = (bv - a) % n
                if alen < 2 or alen > n - 2:
                    continue
                if (n - a) % n + s_size - 1 > alen:
                    continue  # arc must contain the backbone region
                ell_i = alen - 1
                if abs(ell_i - target) > tol:
                    continue
                key = (abs(ell_i - target), u, v, ell_i)
                if best is None or key < best:
                    best = key
        if best is None:
            raise StepFailed(5, f"no long shortcut for index {i}")
        _, u, v, ell_i = best
        st.longs[i] = LongShortcut(i, (u, v), ell_i)
        taken.add(frozenset((u, v)))
        st.provenance.setdefault(frozenset((u, v)), 5)
    # per-length shortcuts for lengths no other case decodes
    probe = Certificate(
        n=n, params=ps, c_h=ch, c_star=st.c_star, binary=st.binary,
        gadget=Gadget(st.c_short, st.gadget_paths),
        star=Star((st.a_star, st.s_h), st.p_star),
        longs=st.longs, singles={},
    )
    covered = decodable_lengths(probe)
    needed = [ell for ell in range(3, n + 1) if ell not in covered]
    gb = ps.gadget_base
    if any(ell > gb for ell in needed):
        raise StepFailed(5, f"coverage hole beyond shortcut range: {needed[:5]}")
    one_edge: dict[int, tuple[int, ...]] = {}
    for ell in range(3, gb + 1):
        span = ell - 1
        for q in range(n):
            u, v = ch[q], ch[(q + span) % n]
            if g5.has_edge(u, v) and frozenset((u, v)) not in taken:
                one_edge[ell] = (u, v)
                break
    for ell in needed:
        if ell in one_edge:
            st.singles[ell] = one_edge[ell]
            taken.add(frozenset(one_edge[ell]))
            st.provenance.setdefault(frozenset(one_edge[ell]), 5)
            continue
        span = ell - 2
        hit = None
        for q in range(n):
            u, v = ch[q], ch[(q + span) % n]
            commons = g5.neighbors(u) & g5.neighbors(v)
            for w in sorted(commons):
                off = (pos[w] - q) % n
                if off <= span:
                    continue  # middle vertex must avoid the arc
                hit = (u, w, v)
                break
            if hit:
                break
        if hit is None:
            raise StepFailed(5, f"no shortcut of any kind for length {ell}")
        st.singles[ell] = hit
        for pair in ((hit[0], hit[1]), (hit[1], hit[2])):
            st.provenance.setdefault(frozenset(pair), 5)
    single_edges = sum(len(p) - 1 for p in st.singles.values())
    if single_edges > gb + 2:
        raise StepFailed(5, f"shortcut edges {single_edges} exceed budget {gb + 2}")


def run_pipeline(
    sample: LayerSample, ps: ParamSet, budget: SearchBudget | None = None
) -> PipelineResult:
    """Run the five construction steps; never raises on search failure."""
    budget = budget or SearchBudget()
    if sample.n != ps.n:
        raise ValueError("sample and parameter set disagree on n")
    steps = (_step1, _step2, _step3, _step4, _step5)
    retries = 5  # each retry re-randomizes which vertices steps 1-3 consume
    log: list[StepRecord] = []
    st = None
    for attempt in range(retries):
        st = _State(
            ps=ps,
            layers=sample.layers,
            rng=random.Random(f"{budget.rng_seed}:{attempt}"),
            budget=budget,
        )
        log = []
        failure: StepFailed | None = None
        for k, fn in enumerate(steps, start=1):
            t0 = time.perf_counter()
            try:
                fn(st)
            except StepFailed as exc:
                log.append(StepRecord(k, False, exc.detail, (time.perf_counter() - t0) * 1e3))
                for rest in range(k + 1, 6):
                    log.append(StepRecord(rest, False, "skipped", 0.0))
                failure = exc
                break
            log.append(StepRecord(k, True, "", (time.perf_counter() - t0) * 1e3))
        if failure is None:
            break
        if attempt == retries - 1:
            return PipelineResult(False, None, None, log, failure)
    cert = Certificate(
        n=ps.n, params=ps, c_h=st.c_h, c_star=st.c_star, binary=st.binary,
        gadget=Gadget(st.c_short, st.gadget_paths),
        star=Star((st.a_star, st.s_h), st.p_star),
        longs=st.longs, singles=st.singles,
    )
    h5 = build_h5(cert)
    if h5.m > ps.n + edge_budget(ps):
        exc = StepFailed(5, f"excess {h5.m - ps.n} over budget {edge_budget(ps)}")
        log[-1] = StepRecord(5, False, exc.detail, log[-1].ms)
        return PipelineResult(False, None, None, log, exc)
    return PipelineResult(True, h5, cert, log)


def audit_layer_discipline(st_or_result, sample: LayerSample) -> list[str]:
    """Check that every recorded edge belongs to its step's layer."""
    if isinstance(st_or_result, PipelineResult):
        raise TypeError("pass the provenance mapping")
    problems = []
    for fs, step in st_or_result.items():
        u, v = sorted(fs)
        if not sample.layers[step - 1].has_edge(u, v):
            problems.append(f"edge ({u}, {v}) attributed to step {step} not in layer {step}")
    return problems
