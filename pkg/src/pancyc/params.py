"""Construction parameters and the length-coverage check.

Two derivation modes:

* ``paper`` evaluates the closed-form expressions verbatim and raises
  :class:`FormulaDegenerate` whenever one of them is undefined or
  non-positive at this n (which happens for every n reachable on a desk).
* ``practical`` clamps the degenerate formulas, enlarges d until the
  backbone cycle has enough spare edges, picks (b, t) by a small cost
  search, and shrinks K while the construction would not fit inside n
  vertices.  The resulting parameter set must cover every cycle length
  in [3, n] or :class:`Infeasible` is raised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, asdict, replace

from .errors import FormulaDegenerate, Infeasible
from .sampler import layer_probs

MODES = ("paper", "practical")


@dataclass(frozen=True)
class ParamSet:
    mode: str
    n: int
    K0: int
    b: int
    t: int
    d: int
    beta: float
    K: int
    L: int
    m: int
    ell_star: int

    def ell(self, i: int) -> int:
        """Target length parameter for the i-th doubling cycle."""
        return 2**i + 1

    @property
    def gadget_base(self) -> int:
        """(d+b+1)*t: one less than the smallest gadget-decodable length."""
        return (self.d + self.b + 1) * self.t

    @property
    def gadget_size(self) -> int:
        """Number of lengths the digit gadget can realize (b**t)."""
        return self.b**self.t

    def nominal_long_targets(self) -> list[int]:
        return [i * 2**self.K for i in range(3, self.m + 1)]

    def long_targets(self) -> list[tuple[int, int]]:
        """(index, target arc length) for the long shortcuts, clamped.

        A long-shortcut arc must contain the whole backbone-plus-detours
        region (ell_star + L vertices), so targets below that floor are
        raised to it; the list is kept strictly increasing and capped at
        n - 3, dropping indices the cap makes redundant.
        """
        # one past the region end: an arc ending exactly at the region
        # boundary would reuse the spare backbone edge as its chord
        floor_len = self.ell_star + self.L - 1
        out: list[tuple[int, int]] = []
        prev: int | None = None
        for i in range(3, self.m + 1):
            ell = max(i * 2**self.K, floor_len)
            if prev is not None:
                ell = max(ell, prev + 1)
            if ell > self.n - 3:
                if prev == self.n - 3:
                    break
                ell = self.n - 3
            out.append((i, ell))
            prev = ell
        return out

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ParamSet":
        return cls(**{k: data[k] for k in cls.__dataclass_fields__})


def _paper_values(n: int) -> dict:
    ln = math.log(n)
    lnln = math.log(ln)
    if lnln <= 0:
        raise FormulaDegenerate("K0", "ln ln n <= 0")
    lnlnln = math.log(lnln)
    beta = 2.0 * lnln * lnln / ln
    out: dict = {"beta": beta}
    if lnlnln <= 0:
        raise FormulaDegenerate("K0", "ln ln ln n <= 0")
    K0 = math.floor(math.log2(ln / (6.0 * lnlnln)))
    if K0 < 1:
        raise FormulaDegenerate("K0", f"value {K0} < 1")
    out["K0"] = K0
    b = math.ceil(lnln)
    if b < 2:
        raise FormulaDegenerate("b", f"value {b} < 2")
    out["b"] = b
    out["t"] = math.ceil(math.log(ln) / math.log(b))
    base = 1.0 / (5.0 * beta)
    if base <= 1.0:
        raise FormulaDegenerate("d", f"log base 1/(5*beta) = {base:.4f} <= 1")
    d = math.floor(math.log(n / 200.0) / math.log(base))
    if d < 1:
        raise FormulaDegenerate("d", f"value {d} < 1")
    out["d"] = d
    out["K"] = math.floor(math.log2(n / math.sqrt(ln)))
    out["L"] = 2 ** (out["K"] + 1) - 1
    out["m"] = n // 2 ** out["K"]
    out["ell_star"] = (K0 + 1) * (d + 3)
    return out


def consumed_vertices(ps: ParamSet) -> int:
    """Vertices the construction occupies before the final Hamilton path."""
    bt = ps.b * ps.t
    gadget_interiors = bt * (ps.d + 1) + ps.b * (ps.b**ps.t - 1) // 2
    # backbone + all doubling-cycle interiors + short cycle + gadget paths + linking path
    return ps.ell_star + ps.L + (bt + 1) + gadget_interiors + (ps.d + 1)


def vertex_margin(n: int) -> int:
    """Minimum number of vertices left free for the final Hamilton path."""
    return max(16, n // 8)


def _choose_bt(n: int, ell_star: int, d: int) -> tuple[int, int]:
    """Smallest-cost (b, t) with b**t >= max(ln n, ell_star)."""
    target = max(math.log(n), float(ell_star))
    b_hi = max(2, math.ceil(math.log(math.log(n)))) + 3
    best: tuple[int, int, int] | None = None
    for b in range(2, b_hi + 1):
        t = 1
        while b**t < target:
            t += 1
        cost = (d + b + 1) * t + b * t
        if best is None or (cost, b, t) < best:
            best = (cost, b, t)
    assert best is not None
    return best[1], best[2]


def _practical(n: int) -> ParamSet:
    if n < 32:
        raise Infeasible(f"n={n} too small for the practical construction")
    ln = math.log(n)
    lnln = math.log(ln)
    beta = 2.0 * lnln * lnln / ln
    # K0: paper value clamped below at 1
    try:
        k0_paper = math.floor(math.log2(ln / (6.0 * math.log(lnln))))
    except ValueError:
        k0_paper = 0
    K0 = max(1, k0_paper)
    # tree depth from layer-2 density
    p2 = layer_probs(max(n, 16)).probs[1]
    arity = max(2, int(n * p2 / 20.0))
    d_tree = 1
    while arity**d_tree < n / 40.0:
        d_tree += 1
    K = math.floor(math.log2(n / math.sqrt(ln)))
    while K >= K0 + 1:
        # enlarge d until the backbone has >= 2*(K - K0) + 4 edges
        d = d_tree
        while (K0 + 1) * (d + 3) < 2 * (K - K0) + 4:
            d += 1
        ell_star = (K0 + 1) * (d + 3)
        b, t = _choose_bt(n, ell_star, d)
        ps = ParamSet(
            mode="practical", n=n, K0=K0, b=b, t=t, d=d, beta=beta,
            K=K, L=2 ** (K + 1) - 1, m=n // 2**K, ell_star=ell_star,
        )
        if consumed_vertices(ps) <= n - vertex_margin(n):
            report = validate_coverage(ps)
            if not report.ok:
                raise Infeasible(f"coverage holes at n={n}: {report.holes[:5]}")
            return ps
        K -= 1
    raise Infeasible(f"no K leaves room for the construction at n={n}")


def derive_params(n: int, mode: str = "practical", overrides: dict | None = None) -> ParamSet:
    """Derive the parameter set for this n in the requested mode."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    if mode == "paper":
        vals = _paper_values(n)
        ps = ParamSet(mode="paper", n=n, **vals)
    else:
        ps = _practical(n)
    if overrides:
        unknown = set(overrides) - set(ps.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown parameter overrides: {sorted(unknown)}")
        ps = replace(ps, **overrides)
        # recompute dependent fields unless explicitly pinned, then put the
        # result through the same feasibility gates as the derivation
        derived = {
            "L": 2 ** (ps.K + 1) - 1,
            "m": ps.n // 2**ps.K,
            "ell_star": (ps.K0 + 1) * (ps.d + 3),
        }
        ps = replace(ps, **{k: overrides.get(k, v) for k, v in derived.items()})
        if not (0 <= ps.K0 < ps.K and ps.b >= 2 and ps.t >= 1 and ps.d >= 1):
            raise Infeasible("overridden parameters violate basic constraints")
        if consumed_vertices(ps) > n - vertex_margin(n):
            raise Infeasible(
                f"overridden parameters consume {consumed_vertices(ps)} of {n} vertices"
            )
        report = validate_coverage(ps)
        if not report.ok:
            raise Infeasible(f"overridden parameters leave holes: {report.holes[:5]}")
    return ps


@dataclass(frozen=True)
class CoverageReport:
    ok: bool
    intervals: tuple[tuple[str, int, int], ...]
    holes: tuple[int, ...]


def coverage_intervals(ps: ParamSet, ell_star_list: list[int] | None = None) -> list[tuple[str, int, int]]:
    """The decoding windows claimed by the five cases, in decode order."""
    gb = ps.gadget_base
    out = [
        ("singles", 3, gb),
        ("gadget", gb + 1, gb + ps.gadget_size),
        ("binary", ps.ell_star, ps.ell_star + ps.L),
    ]
    if ell_star_list is not None:
        longs = list(zip(range(3, ps.m + 1), ell_star_list))
    else:
        longs = ps.long_targets()
    for i, ell in longs:
        out.append((f"long-{i}", ell + 2 - ps.L, ell + 2))
    out.append(("top", ps.n - ps.L, ps.n))
    return out


def validate_coverage(
    ps: ParamSet,
    ell_star_list: list[int] | None = None,
    skip: set[str] | None = None,
) -> CoverageReport:
    """Check that the decoding windows jointly cover [3, n].

    `skip` drops named intervals (used by mutation tests).
    """
    n = ps.n
    ivals = [iv for iv in coverage_intervals(ps, ell_star_list) if not (skip and iv[0] in skip)]
    clipped = sorted(
        (max(3, lo), min(n, hi)) for _, lo, hi in ivals if hi >= 3 and lo <= n and lo <= hi
    )
    holes: list[int] = []
    cursor = 3
    for lo, hi in clipped:
        if lo > cursor:
            holes.extend(range(cursor, min(lo, n + 1)))
        cursor = max(cursor, hi + 1)
        if cursor > n:
            break
    if cursor <= n:
        holes.extend(range(cursor, n + 1))
    return CoverageReport(ok=not holes, intervals=tuple(ivals), holes=tuple(holes))


def edge_budget(ps: ParamSet) -> int:
    """Maximum excess edges over n that the certificate may carry."""
    return ps.K + ps.b * ps.t + ps.m + ps.gadget_base + 3
