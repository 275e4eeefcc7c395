"""Search-free construction of a certified pancyclic graph.

Builds the same layered structure as :mod:`pancyc.pipeline` but on fresh
vertex ids, placing every path and detour by arithmetic instead of by
search.  The output graph is exactly the certified subgraph, which makes
it cheap to exercise the decoder and verifier across a large grid of
parameter sets without sampling or pathfinding.
"""
from __future__ import annotations

import itertools
import random

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
from .errors import Infeasible
from .graph import Graph
from .params import ParamSet
from .pipeline import _State, assemble_hamilton_cycle, choose_spare_edges


def synthesize(
    ps: ParamSet, two_edge_for: tuple[int, ...] = ()
) -> tuple[Graph, Certificate]:
    """Deterministically build (H, certificate) for a parameter set.

    ``two_edge_for`` lists lengths whose per-length shortcut should be a
    two-edge detour instead of a single chord (both forms are legal).
    """
    ids = itertools.count()

    def fresh(k: int) -> list[int]:
        return [next(ids) for _ in range(k)]

    st = _State(ps=ps, layers=[], rng=random.Random(0), budget=None)  # type: ignore[arg-type]
    # seed cycles
    st.c_short = tuple(fresh(ps.b * ps.t + 1))
    for i in range(ps.K0 + 1):
        arc = tuple(fresh(ps.ell(i) + 1))
        st.binary[i] = BinaryCycle(i, (arc[0], arc[-1]), arc)
    # backbone
    backbone: list[int] = []
    for i in range(ps.K0 + 1):
        s_i, t_i = st.binary[i].edge
        backbone.extend([s_i, t_i])
        backbone.extend(fresh(ps.d + 1))
    st.c_star = tuple(backbone)
    # spare edges, remaining detours, gadget paths, linking path
    spares, e_star_pos = choose_spare_edges(ps)
    ls = len(st.c_star)
    st.a_star = st.c_star[e_star_pos]
    st.s_h = st.c_star[(e_star_pos + 1) % ls]
    st.e_star = (st.a_star, st.s_h)
    for idx, q in enumerate(spares):
        i = ps.K0 + 1 + idx
        s_i, t_i = st.c_star[q], st.c_star[(q + 1) % ls]
        st.binary[i] = BinaryCycle(i, (s_i, t_i), (s_i, *fresh(ps.ell(i) - 1), t_i))
    for i in range(ps.t):
        for j in range(ps.b):
            q0 = i * ps.b + j
            va, vb = st.c_short[q0], st.c_short[q0 + 1]
            inner = fresh(ps.d + 1 + j * ps.b**i)
            st.gadget_paths[(i, j)] = GadgetPath(i, j, (va, *inner, vb))
    st.p_star = (st.a_star, *fresh(ps.d + 1), st.c_short[-1])
    # Hamilton path through whatever ids remain up to n
    consumed = next(ids)
    if consumed > ps.n - 1:
        raise Infeasible(f"construction needs {consumed} vertices, have {ps.n}")
    st.ham_path = (st.s_h, *range(consumed, ps.n), st.c_short[0])
    ch = tuple(assemble_hamilton_cycle(st))
    assert len(ch) == ps.n and len(set(ch)) == ps.n
    st.c_h = ch
    pos = {v: q for q, v in enumerate(ch)}
    taken = {frozenset(bc.edge) for bc in st.binary.values()}
    taken.add(frozenset(st.e_star))
    for q0 in range(len(st.c_short)):
        taken.add(frozenset((st.c_short[q0], st.c_short[(q0 + 1) % len(st.c_short)])))
    for q in range(ps.n):
        taken.add(frozenset((ch[q], ch[(q + 1) % ps.n])))
    s_size = ps.ell_star + ps.L
    # long shortcuts: arcs anchored so they contain the backbone region
    for i, ell_i in ps.long_targets():
        placed = False
        for a in (0, *range(ps.n - 1, ps.n - 6, -1)):
            alen = ell_i + 1
            if (ps.n - a) % ps.n + s_size - 1 > alen:
                continue
            u, v = ch[a], ch[(a + alen) % ps.n]
            if frozenset((u, v)) in taken:
                continue
            st.longs[i] = LongShortcut(i, (u, v), ell_i)
            taken.add(frozenset((u, v)))
            placed = True
            break
        if not placed:
            raise Infeasible(f"could not anchor long shortcut {i}")
    # per-length shortcuts for uncovered small lengths
    probe = Certificate(
        n=ps.n, params=ps, c_h=ch, c_star=st.c_star, binary=st.binary,
        gadget=Gadget(st.c_short, st.gadget_paths),
        star=Star(st.e_star, st.p_star), longs=st.longs, singles={},
    )
    needed = [ell for ell in range(3, ps.n + 1) if ell not in decodable_lengths(probe)]
    bad = [ell for ell in needed if ell > ps.gadget_base]
    if bad:
        raise Infeasible(f"coverage hole beyond shortcut range: {bad}")
    for idx, ell in enumerate(needed):
        q0 = (s_size + idx) % ps.n  # distinct anchor per length
        if ell in two_edge_for:
            span = ell - 2
            u, v = ch[q0], ch[(q0 + span) % ps.n]
            w = ch[(q0 + ell + 1) % ps.n]  # off the arc
            if frozenset((u, w)) in taken or frozenset((w, v)) in taken:
                raise Infeasible(f"shortcut collision at length {ell}")
            st.singles[ell] = (u, w, v)
            taken.add(frozenset((u, w)))
            taken.add(frozenset((w, v)))
        else:
            u, v = ch[q0], ch[(q0 + ell - 1) % ps.n]
            if frozenset((u, v)) in taken:
                raise Infeasible(f"shortcut collision at length {ell}")
            st.singles[ell] = (u, v)
            taken.add(frozenset((u, v)))
    cert = Certificate(
        n=ps.n, params=ps, c_h=ch, c_star=st.c_star, binary=st.binary,
        gadget=Gadget(st.c_short, st.gadget_paths),
        star=Star(st.e_star, st.p_star), longs=st.longs, singles=st.singles,
    )
    return build_h5(cert), cert
