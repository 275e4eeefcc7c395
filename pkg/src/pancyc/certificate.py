"""Pancyclicity certificates: compact witnesses plus a length decoder.

A certificate records the Hamilton cycle of the constructed subgraph and
every named chord/detour, enough to materialize a cycle of any length
``3 <= ell <= n`` in O(n) time.  Decoding tries the cases in a fixed
order; a case is skipped when the certificate lacks its witness object:

a. a recorded shortcut path for ell (one chord, or two edges through a
   middle vertex) plus the matching arc of the Hamilton cycle;
b. the digit gadget: the short cycle with one detour substituted per
   digit position of ell - (d+b+1)t - 1 in base b;
c. the backbone cycle with doubling-cycle detours substituted per binary
   digit of ell - ell_star;
d. a long chord plus its spanning arc, shortened by binary detour
   removal (ell_i* + 2 - ell);
e. the Hamilton cycle shortened by binary detour removal (n - ell);
f. structural fallback: a recorded doubling cycle or the short cycle
   whose length happens to equal ell.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .errors import MalformedCertificate, NoCaseApplies, NotAChord
from .graph import Graph, check_cycle
from .params import ParamSet, edge_budget

CERT_VERSION = 1


@dataclass(frozen=True)
class BinaryCycle:
    """Doubling cycle C_i: chord `edge` = (s, t) plus its detour arc s..t."""

    i: int
    edge: tuple[int, int]
    arc: tuple[int, ...]


@dataclass(frozen=True)
class GadgetPath:
    """Detour path replacing one edge of the short cycle."""

    i: int
    j: int
    path: tuple[int, ...]


@dataclass(frozen=True)
class Gadget:
    c_short: tuple[int, ...]
    paths: dict[tuple[int, int], GadgetPath]

    @property
    def e_short(self) -> tuple[int, int]:
        return (self.c_short[0], self.c_short[-1])


@dataclass(frozen=True)
class Star:
    """Chord e* = (attach, free) and the linking path from attach."""

    e_star: tuple[int, int]
    p_star: tuple[int, ...]


@dataclass(frozen=True)
class LongShortcut:
    i: int
    edge: tuple[int, int]
    ell: int


@dataclass
class Certificate:
    n: int
    params: ParamSet
    c_h: tuple[int, ...]
    c_star: tuple[int, ...]
    binary: dict[int, BinaryCycle]
    gadget: Gadget
    star: Star
    longs: dict[int, LongShortcut]
    singles: dict[int, tuple[int, ...]]
    version: int = CERT_VERSION
    _index: "_Index | None" = field(default=None, repr=False, compare=False)

    # --- serialization ---

    def to_json(self) -> str:
        doc = {
            "version": self.version,
            "n": self.n,
            "params": self.params.to_dict(),
            "c_h": list(self.c_h),
            "c_star": list(self.c_star),
            "binary": [
                {"i": bc.i, "edge": list(bc.edge), "arc": list(bc.arc)}
                for _, bc in sorted(self.binary.items())
            ],
            "gadget": {
                "c_short": list(self.gadget.c_short),
                "paths": [
                    {"i": gp.i, "j": gp.j, "path": list(gp.path)}
                    for _, gp in sorted(self.gadget.paths.items())
                ],
            },
            "star": {"e_star": list(self.star.e_star), "p_star": list(self.star.p_star)},
            "longs": [
                {"i": ls.i, "edge": list(ls.edge), "ell": ls.ell}
                for _, ls in sorted(self.longs.items())
            ],
            "singles": [
                {"ell": ell, "path": list(p)} for ell, p in sorted(self.singles.items())
            ],
        }
        return json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Certificate":
        try:
            doc = json.loads(text)
            cert = cls(
                n=int(doc["n"]),
                params=ParamSet.from_dict(doc["params"]),
                c_h=tuple(doc["c_h"]),
                c_star=tuple(doc["c_star"]),
                binary={
                    int(b["i"]): BinaryCycle(int(b["i"]), tuple(b["edge"]), tuple(b["arc"]))
                    for b in doc["binary"]
                },
                gadget=Gadget(
                    c_short=tuple(doc["gadget"]["c_short"]),
                    paths={
                        (int(p["i"]), int(p["j"])): GadgetPath(
                            int(p["i"]), int(p["j"]), tuple(p["path"])
                        )
                        for p in doc["gadget"]["paths"]
                    },
                ),
                star=Star(
                    e_star=tuple(doc["star"]["e_star"]),
                    p_star=tuple(doc["star"]["p_star"]),
                ),
                longs={
                    int(l["i"]): LongShortcut(int(l["i"]), tuple(l["edge"]), int(l["ell"]))
                    for l in doc["longs"]
                },
                singles={int(s["ell"]): tuple(s["path"]) for s in doc["singles"]},
                version=int(doc.get("version", CERT_VERSION)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedCertificate(f"cannot parse certificate: {exc}") from exc
        return cert

    def index(self) -> "_Index":
        if self._index is None:
            self._index = _Index(self)
        return self._index

    def chords(self) -> set[frozenset[int]]:
        """All recorded non-Hamilton edges (chords of c_h)."""
        out: set[frozenset[int]] = set()
        for bc in self.binary.values():
            out.add(frozenset(bc.edge))
        cs = self.gadget.c_short
        for q in range(len(cs) - 1):
            out.add(frozenset((cs[q], cs[q + 1])))
        out.add(frozenset(self.gadget.e_short))
        out.add(frozenset(self.star.e_star))
        for ls in self.longs.values():
            out.add(frozenset(ls.edge))
        for p in self.singles.values():
            for q in range(len(p) - 1):
                out.add(frozenset((p[q], p[q + 1])))
        return out


def build_h5(cert: Certificate) -> Graph:
    """Reconstruct the certified subgraph: Hamilton cycle plus all chords."""
    g = Graph(cert.n)
    ch = cert.c_h
    for q in range(len(ch)):
        g.add_edge(ch[q], ch[(q + 1) % len(ch)])
    for e in cert.chords():
        u, v = sorted(e)
        g.add_edge(u, v)
    return g


class _Index:
    """Derived lookup structures; construction validates the certificate."""

    def __init__(self, cert: Certificate):
        self.cert = cert
        ps = cert.params
        n = cert.n
        ch = cert.c_h
        if len(ch) != n or len(set(ch)) != n:
            raise MalformedCertificate("c_h is not a permutation of the vertex set")
        self.pos = {v: q for q, v in enumerate(ch)}
        if len(cert.c_star) != ps.ell_star:
            raise MalformedCertificate(
                f"backbone has {len(cert.c_star)} vertices, expected {ps.ell_star}"
            )
        # detours: interior of each binary arc must sit contiguously on c_h
        self.detour_interior: dict[int, tuple[int, ...]] = {}
        self.detour_span: dict[int, tuple[int, int]] = {}  # (start_pos, length) inclusive
        for i, bc in sorted(cert.binary.items()):
            arc = bc.arc
            if len(arc) != ps.ell(i) + 1:
                raise MalformedCertificate(
                    f"arc {i} has {len(arc)} vertices, expected {ps.ell(i) + 1}"
                )
            if (arc[0], arc[-1]) != tuple(bc.edge):
                raise MalformedCertificate(f"arc {i} endpoints disagree with its chord")
            p0 = self.pos[arc[0]]
            step = self._step(p0, arc[1])
            for k in range(1, len(arc)):
                if ch[(p0 + step * k) % n] != arc[k]:
                    raise MalformedCertificate(f"arc {i} is not contiguous on c_h")
            interior = arc[1:-1]
            self.detour_interior[i] = tuple(interior)
            start = (p0 + step) % n if step == 1 else (p0 + step * (len(arc) - 2)) % n
            self.detour_span[i] = (start, len(interior))
        # backbone edge -> shortcut index
        self.shortcut_of: dict[frozenset[int], int] = {
            frozenset(bc.edge): i for i, bc in cert.binary.items()
        }
        # the arc of c_h holding the backbone and every detour
        s_positions = {self.pos[v] for v in cert.c_star}
        for interior in self.detour_interior.values():
            s_positions |= {self.pos[v] for v in interior}
        self.s_arc = self._contiguous(s_positions, n)
        # gadget path sanity
        gd = cert.gadget
        if len(gd.c_short) != ps.b * ps.t + 1:
            raise MalformedCertificate("short cycle has the wrong length")
        for (i, j), gp in gd.paths.items():
            want = ps.d + 2 + j * ps.b**i
            if len(gp.path) != want + 1:
                raise MalformedCertificate(
                    f"gadget path ({i},{j}) has {len(gp.path) - 1} edges, expected {want}"
                )
            q = i * ps.b + j  # edge q+1 of the short cycle
            if (gp.path[0], gp.path[-1]) != (gd.c_short[q], gd.c_short[q + 1]):
                raise MalformedCertificate(f"gadget path ({i},{j}) endpoints misplaced")
        if len(cert.star.p_star) != ps.d + 3:
            raise MalformedCertificate("linking path has the wrong length")

    def _step(self, p0: int, second: int) -> int:
        n = self.cert.n
        ch = self.cert.c_h
        if ch[(p0 + 1) % n] == second:
            return 1
        if ch[(p0 - 1) % n] == second:
            return -1
        raise MalformedCertificate("arc does not follow c_h")

    @staticmethod
    def _contiguous(positions: set[int], n: int) -> tuple[int, int]:
        """(start, length) of the cyclic arc formed by `positions`."""
        if len(positions) == n:
            return (0, n)
        starts = [p for p in positions if (p - 1) % n not in positions]
        if len(starts) != 1:
            raise MalformedCertificate("backbone region is not contiguous on c_h")
        start = starts[0]
        return (start, len(positions))

    def arc_vertices(self, p_from: int, length: int, step: int = 1) -> list[int]:
        ch = self.cert.c_h
        n = self.cert.n
        return [ch[(p_from + step * q) % n] for q in range(length + 1)]

    def arc_contains(self, p_from: int, length: int, region: tuple[int, int]) -> bool:
        """Does the forward arc [p_from, p_from+length] contain the region?"""
        r_start, r_len = region
        off = (r_start - p_from) % self.cert.n
        return off + r_len - 1 <= length


def shortcut_arc(cert: Certificate, u: int, v: int, containing: int | None = None) -> tuple[int, ...]:
    """Arc of c_h between chord endpoints u, v.

    Default: the shorter arc.  With `containing`, the arc that passes
    through that vertex.  Raises NotAChord for c_h edges or non-edges.
    """
    idx = cert.index()
    n = cert.n
    pu, pv = idx.pos[u], idx.pos[v]
    fwd = (pv - pu) % n
    if fwd in (0, 1, n - 1):
        raise NotAChord(f"({u}, {v}) is not a chord of the Hamilton cycle")
    if containing is not None:
        pc = idx.pos[containing]
        if (pc - pu) % n <= fwd:
            return tuple(idx.arc_vertices(pu, fwd))
        return tuple(idx.arc_vertices(pv, n - fwd))
    if fwd <= n - fwd:
        return tuple(idx.arc_vertices(pu, fwd))
    return tuple(idx.arc_vertices(pv, n - fwd))


def _digits(k: int, base: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        out.append(k % base)
        k //= base
    return out


def _decode_a(cert: Certificate, ell: int) -> list[int]:
    idx = cert.index()
    n = cert.n
    p = cert.singles[ell]
    j = len(p) - 1
    u, v = p[0], p[-1]
    pu, pv = idx.pos[u], idx.pos[v]
    need = ell - j
    if (pv - pu) % n == need:
        arc = idx.arc_vertices(pu, need)
    elif (pu - pv) % n == need:
        arc = idx.arc_vertices(pv, need)
        arc.reverse()
    else:
        raise MalformedCertificate(f"shortcut for length {ell} subtends no {need}-arc")
    middle = list(p[1:-1])
    arc_set = set(arc)
    if any(w in arc_set for w in middle):
        raise MalformedCertificate(f"shortcut middle vertex lies on its own arc (length {ell})")
    return arc + middle[::-1]


def _decode_b(cert: Certificate, ell: int) -> list[int]:
    ps = cert.params
    k = ell - ps.gadget_base - 1
    digits = _digits(k, ps.b, ps.t)
    gd = cert.gadget
    cs = gd.c_short
    out = [cs[0]]
    for q in range(len(cs) - 1):
        i, j = divmod(q, ps.b)
        if digits[i] == j:
            gp = gd.paths.get((i, j))
            if gp is None:
                raise MalformedCertificate(f"gadget path ({i},{j}) missing")
            out.extend(gp.path[1:-1])
        out.append(cs[q + 1])
    return out


def _decode_c(cert: Certificate, ell: int) -> list[int]:
    ps = cert.params
    idx = cert.index()
    k = ell - ps.ell_star
    cs = cert.c_star
    out: list[int] = []
    for q, u in enumerate(cs):
        out.append(u)
        w = cs[(q + 1) % len(cs)]
        i = idx.shortcut_of.get(frozenset((u, w)))
        if i is not None and (k >> i) & 1:
            bc = cert.binary[i]
            interior = bc.arc[1:-1]
            out.extend(interior if u == bc.edge[0] else interior[::-1])
    return out


def _shorten(cert: Certificate, base: list[int], k: int) -> list[int]:
    """Remove detour interiors selected by the binary digits of k."""
    idx = cert.index()
    remove: set[int] = set()
    for i in cert.binary:
        if (k >> i) & 1:
            remove.update(idx.detour_interior[i])
    if not remove:
        return base
    return [v for v in base if v not in remove]


def _decode_d(cert: Certificate, ell: int, i: int) -> list[int]:
    idx = cert.index()
    ls = cert.longs[i]
    n = cert.n
    x, y = ls.edge
    px, py = idx.pos[x], idx.pos[y]
    if idx.arc_contains(px, (py - px) % n, idx.s_arc):
        arc = idx.arc_vertices(px, (py - px) % n)
    elif idx.arc_contains(py, (px - py) % n, idx.s_arc):
        arc = idx.arc_vertices(py, (px - py) % n)
    else:
        raise MalformedCertificate(f"long chord {i} subtends no arc containing the backbone")
    if len(arc) != ls.ell + 2:
        raise MalformedCertificate(
            f"long chord {i} arc has {len(arc) - 1} edges, recorded {ls.ell + 1}"
        )
    return _shorten(cert, arc, ls.ell + 2 - ell)


def _decode_e(cert: Certificate, ell: int) -> list[int]:
    return _shorten(cert, list(cert.c_h), cert.n - ell)


def _structural(cert: Certificate, ell: int) -> list[int] | None:
    for i, bc in sorted(cert.binary.items()):
        if len(bc.arc) == ell:
            return list(bc.arc)
    if len(cert.gadget.c_short) == ell:
        return list(cert.gadget.c_short)
    return None


def resolve_case(cert: Certificate, ell: int) -> tuple[str, int | None]:
    """Which decoding case handles this length; raises NoCaseApplies."""
    ps = cert.params
    if ell < 3 or ell > cert.n:
        raise NoCaseApplies(ell)
    if ell in cert.singles:
        return ("a", None)
    gb = ps.gadget_base
    if gb + 1 <= ell <= gb + ps.gadget_size and cert.gadget.paths:
        return ("b", None)
    if ps.ell_star <= ell <= ps.ell_star + ps.L:
        return ("c", None)
    for i in sorted(cert.longs):
        ls = cert.longs[i]
        if ls.ell + 2 - ps.L <= ell <= ls.ell + 2:
            return ("d", i)
    if cert.n - ps.L <= ell <= cert.n:
        return ("e", None)
    if _structural(cert, ell) is not None:
        return ("f", None)
    raise NoCaseApplies(ell)


def decode_cycle(cert: Certificate, ell: int, case: str | None = None, long_i: int | None = None) -> list[int]:
    """Materialize a cycle of exactly `ell` vertices from the certificate."""
    if case is None:
        case, long_i = resolve_case(cert, ell)
    if case == "a":
        return _decode_a(cert, ell)
    if case == "b":
        return _decode_b(cert, ell)
    if case == "c":
        return _decode_c(cert, ell)
    if case == "d":
        if long_i is None:
            _, long_i = resolve_case(cert, ell)
        if long_i is None:
            raise NoCaseApplies(ell)
        return _decode_d(cert, ell, long_i)
    if case == "e":
        return _decode_e(cert, ell)
    if case == "f":
        out = _structural(cert, ell)
        if out is None:
            raise NoCaseApplies(ell)
        return out
    raise ValueError(f"unknown case {case!r}")


def decodable_lengths(cert: Certificate) -> set[int]:
    """Lengths for which some decoding case applies (no materialization)."""
    ps = cert.params
    out: set[int] = set(cert.singles)
    gb = ps.gadget_base
    if cert.gadget.paths:
        out.update(range(gb + 1, gb + ps.gadget_size + 1))
    out.update(range(ps.ell_star, ps.ell_star + ps.L + 1))
    for ls in cert.longs.values():
        out.update(range(max(3, ls.ell + 2 - ps.L), ls.ell + 3))
    out.update(range(max(3, cert.n - ps.L), cert.n + 1))
    for bc in cert.binary.values():
        out.add(len(bc.arc))
    out.add(len(cert.gadget.c_short))
    return {x for x in out if 3 <= x <= cert.n}


@dataclass
class VerifyReport:
    ok: bool
    pancyclic: bool
    n: int
    edges: int
    excess: int
    budget: int
    failures: list[tuple[int, str]]
    case_counts: dict[str, int]
    problems: list[str]

    def to_json(self) -> str:
        return json.dumps(
            {
                "ok": self.ok,
                "pancyclic": self.pancyclic,
                "n": self.n,
                "edges": self.edges,
                "excess": self.excess,
                "budget": self.budget,
                "failures": self.failures,
                "case_counts": self.case_counts,
                "problems": self.problems,
            },
            sort_keys=True,
        ) + "\n"


def verify(g: Graph, cert: Certificate) -> VerifyReport:
    """Check the certificate against the graph, length by length."""
    problems: list[str] = []
    failures: list[tuple[int, str]] = []
    case_counts: dict[str, int] = {}
    n = cert.n
    if g.n != n:
        problems.append(f"graph has {g.n} vertices, certificate says {n}")
    try:
        cert.index()
    except MalformedCertificate as exc:
        problems.append(str(exc))
        return VerifyReport(False, False, n, g.m, g.m - n, 0, [], {}, problems)
    ch = cert.c_h
    for q in range(n):
        if not g.has_edge(ch[q], ch[(q + 1) % n]):
            problems.append(f"Hamilton edge ({ch[q]}, {ch[(q + 1) % n]}) missing from graph")
            break
    ch_edges = {frozenset((ch[q], ch[(q + 1) % n])) for q in range(n)}
    registry = cert.chords() | ch_edges
    for u, v in g.edges():
        if frozenset((u, v)) not in registry:
            problems.append(f"graph edge ({u}, {v}) not in the certificate registry")
            break
    for e in cert.chords():
        u, v = sorted(e)
        if not g.has_edge(u, v):
            problems.append(f"registered chord ({u}, {v}) missing from graph")
            break
    budget = edge_budget(cert.params)
    if g.m > n + budget:
        problems.append(f"edge excess {g.m - n} exceeds budget {budget}")
    for ell in range(3, n + 1):
        try:
            case, long_i = resolve_case(cert, ell)
            cyc = decode_cycle(cert, ell, case, long_i)
        except (NoCaseApplies, MalformedCertificate) as exc:
            failures.append((ell, f"decode: {exc}"))
            continue
        case_counts[case] = case_counts.get(case, 0) + 1
        if len(cyc) != ell:
            failures.append((ell, f"case {case} produced length {len(cyc)}"))
        elif not check_cycle(g, cyc):
            failures.append((ell, f"case {case} produced a non-cycle"))
    pancyclic = not failures
    ok = pancyclic and not problems
    return VerifyReport(
        ok=ok,
        pancyclic=pancyclic,
        n=n,
        edges=g.m,
        excess=g.m - n,
        budget=budget,
        failures=failures,
        case_counts=case_counts,
        problems=problems,
    )
