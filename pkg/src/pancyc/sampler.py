"""Seeded G(n, p) sampling and the five-layer decomposition.

Each layer gets its own counter-based Philox stream whose 128-bit key is
derived from ``SeedSequence([seed, layer_index])``, so any single layer
can be regenerated without touching the others.  Edge presence is decided
by geometric skipping over the C(n, 2) pair indices, which costs O(p n^2)
instead of O(n^2).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .graph import Graph

#: union probability target: five independent layers
NUM_LAYERS = 5


def _layer_key(seed: int, layer: int) -> np.ndarray:
    """128-bit Philox key for (seed, layer)."""
    ss = np.random.SeedSequence([int(seed) & (2**63 - 1), int(layer)])
    return ss.generate_state(2, np.uint64)


def _pair_to_edge(n: int, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert the row-major linear index over pairs (u, v), u < v."""
    # q = u*n - u*(u+1)/2 + (v - u - 1); solve the quadratic for u, fix rounding.
    qf = q.astype(np.float64)
    u = np.floor(n - 0.5 - np.sqrt((n - 0.5) ** 2 - 2.0 * qf)).astype(np.int64)
    u = np.clip(u, 0, n - 2)
    # base(u) = number of pairs with first coordinate < u
    base = u * (n - 1) - (u * (u - 1)) // 2
    # fix-up for float error
    too_big = base > q
    while np.any(too_big):
        u = np.where(too_big, u - 1, u)
        base = u * (n - 1) - (u * (u - 1)) // 2
        too_big = base > q
    nxt = (u + 1) * (n - 1) - ((u + 1) * u) // 2
    too_small = nxt <= q
    while np.any(too_small):
        u = np.where(too_small, u + 1, u)
        base = u * (n - 1) - (u * (u - 1)) // 2
        nxt = (u + 1) * (n - 1) - ((u + 1) * u) // 2
        too_small = nxt <= q
    v = q - base + u + 1
    return u.astype(np.int64), v.astype(np.int64)


def sample_gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p), reproducible from (n, p, seed)."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    g = Graph(n)
    total = n * (n - 1) // 2
    if total == 0 or p == 0.0:
        return g
    if p == 1.0:
        for u in range(n):
            for v in range(u + 1, n):
                g.add_edge(u, v)
        return g
    if total * p < 2.0**-53:
        return g  # P(any edge) below double precision; also avoids int64
        #           overflow in the geometric sampler for minuscule p
    rng = np.random.Generator(np.random.Philox(key=_layer_key(seed, 0)))
    hits: list[np.ndarray] = []
    pos = -1
    chunk = max(1024, int(total * p * 1.1) + 16)
    while pos < total:
        gaps = rng.geometric(p, size=chunk)
        idx = pos + np.cumsum(gaps, dtype=np.int64)
        take = idx[(idx > pos) & (idx < total)]
        hits.append(take)
        if len(take) < len(idx):
            break
        pos = int(idx[-1])
    q = np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)
    if q.size:
        us, vs = _pair_to_edge(n, q)
        for u, v in zip(us.tolist(), vs.tolist()):
            g.add_edge(u, v)
    return g


@dataclass(frozen=True)
class LayerProbs:
    """Per-layer edge probabilities and their union."""

    n: int
    probs: tuple[float, ...]

    @property
    def p_star(self) -> float:
        out = 1.0
        for p in self.probs:
            out *= 1.0 - p
        return 1.0 - out


def layer_probs(n: int) -> LayerProbs:
    """The five layer probabilities at this n (natural logs, clamped to <= 1)."""
    if n < 16:
        raise ValueError("n must be at least 16")
    ln = math.log(n)
    lnln = math.log(ln)
    p1 = 2.0 * lnln / n
    p2 = 50.0 * ln / (n * lnln)
    p3 = p2
    p4 = (ln + 10.0 * math.sqrt(ln)) / n
    p5 = p1
    probs = tuple(min(1.0, p) for p in (p1, p2, p3, p4, p5))
    return LayerProbs(n=n, probs=probs)


@dataclass
class LayerSample:
    """Five independent layer graphs plus their union."""

    n: int
    seed: int
    probs: tuple[float, ...]
    layers: list[Graph] = field(repr=False)

    @property
    def union(self) -> Graph:
        g = Graph(self.n)
        for layer in self.layers:
            for u, v in layer.edges():
                g.add_edge(u, v)
        return g


def _layer_seed(seed: int, layer: int) -> int:
    """Stable 63-bit sub-seed for one layer."""
    ss = np.random.SeedSequence([int(seed) & (2**63 - 1), int(layer)])
    return int(ss.generate_state(1, np.uint64)[0] & (2**63 - 1))


def sample_layers(n: int, seed: int, probs: LayerProbs | None = None) -> LayerSample:
    """Sample the five-layer decomposition with disjoint RNG streams."""
    lp = probs if probs is not None else layer_probs(n)
    layers = [sample_gnp(n, lp.probs[i], _layer_seed(seed, i + 1)) for i in range(NUM_LAYERS)]
    return LayerSample(n=n, seed=seed, probs=lp.probs, layers=layers)


# --- layered serialization: JSON header line, then one block per layer ---

def layers_to_text(sample: LayerSample) -> str:
    import json

    head = json.dumps({"n": sample.n, "seed": sample.seed, "probs": list(sample.probs)})
    parts = [head]
    for i, layer in enumerate(sample.layers):
        parts.append(f"layer {i} {layer.m}")
        parts.extend(f"{u} {v}" for u, v in layer.edges())
    return "\n".join(parts) + "\n"


def layers_from_text(text: str) -> LayerSample:
    import json

    lines = [r for r in (line.strip() for line in text.splitlines()) if r]
    head = json.loads(lines[0])
    n = int(head["n"])
    layers: list[Graph] = []
    i = 1
    while i < len(lines):
        tag, _idx, m = lines[i].split()
        if tag != "layer":
            raise ValueError(f"expected layer header, got {lines[i]!r}")
        m = int(m)
        g = Graph(n)
        for row in lines[i + 1 : i + 1 + m]:
            u, v = (int(x) for x in row.split())
            g.add_edge(u, v)
        layers.append(g)
        i += 1 + m
    return LayerSample(n=n, seed=int(head["seed"]), probs=tuple(head["probs"]), layers=layers)
