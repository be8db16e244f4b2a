"""Synthetic two-layer instances with a known ground-truth mapping.

A base graph (Erdos-Renyi or preferential attachment) is copied into both
layers, each layer independently loses edges with a noise probability, and
an identity mapping over a random overlap subset becomes the inter-link
pool.  Everything is driven by one seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .graphs import MultiplexInstance, SocialNetwork

FAMILIES = ("er", "pa")


@dataclass(frozen=True)
class SyntheticSpec:
    family: str = "pa"
    nodes: int = 500
    overlap: float = 0.8
    edge_noise: float = 0.1
    avg_degree: float = 8.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.nodes < 4:
            raise ValueError(f"need at least 4 nodes, got {self.nodes}")
        if not 0.0 < self.overlap <= 1.0:
            raise ValueError(f"overlap must be in (0, 1], got {self.overlap}")
        if not 0.0 <= self.edge_noise < 1.0:
            raise ValueError(f"edge_noise must be in [0, 1), got {self.edge_noise}")
        if self.avg_degree <= 0:
            raise ValueError(f"avg_degree must be positive, got {self.avg_degree}")


def _er_edges(n: int, avg_degree: float, rng: random.Random) -> list[tuple[int, int]]:
    p = min(1.0, avg_degree / max(n - 1, 1))
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def _pa_edges(n: int, m: int, rng: random.Random) -> list[tuple[int, int]]:
    """Preferential attachment: each new node links to m existing nodes
    sampled proportionally to their current degree."""
    m = max(1, min(m, n - 1))
    edges: list[tuple[int, int]] = []
    repeated: list[int] = []
    targets = list(range(m))
    for source in range(m, n):
        for t in sorted(set(targets)):
            edges.append((t, source))
        repeated.extend(sorted(set(targets)))
        repeated.extend([source] * m)
        chosen: set[int] = set()
        while len(chosen) < m:
            chosen.add(repeated[rng.randrange(len(repeated))])
        targets = sorted(chosen)
    return edges


def generate_synthetic_multiplex(spec: SyntheticSpec,
                                 seed: int | None = None) -> MultiplexInstance:
    """Build an instance whose ``phi`` holds the full ground-truth pool
    (split it into train/test afterwards).  Deterministic per seed."""
    rng = random.Random(spec.seed if seed is None else seed)
    n = spec.nodes
    if spec.family == "er":
        base = _er_edges(n, spec.avg_degree, rng)
    else:
        base = _pa_edges(n, round(spec.avg_degree / 2), rng)
    layers = []
    for _ in range(2):
        net = SocialNetwork.from_edges((), nodes=(str(i) for i in range(n)))
        for i, j in base:
            if rng.random() >= spec.edge_noise:
                net.add_edge(i, j)
        layers.append(net)
    k = round(spec.overlap * n)
    if k < 4:
        raise ValueError(f"overlap * nodes = {k} < 4: cannot split the pool")
    overlap_nodes = sorted(rng.sample(range(n), k))
    pool = [(i, i) for i in overlap_nodes]
    return MultiplexInstance(layers[0], layers[1], pool, ())
