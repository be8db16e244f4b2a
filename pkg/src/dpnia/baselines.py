"""Heuristic node-injection baselines under the same budget contract.

Every strategy injects ``count`` nodes into one layer with a per-node link
target of ``degree``; total charged links never exceed count * degree and
pre-existing adjacency is never touched.  All strategies are deterministic
for a fixed seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

from .graphs import InjectionLedger, MultiplexInstance, SocialNetwork, inject_node

STRATEGY_TAGS = ("random", "uniform", "aldn", "asdn", "amn", "aumn",
                 "lps_like", "gps_like")


@dataclass(frozen=True)
class BaselineConfig:
    """Injection shape shared by every baseline.

    ``degree`` 0 is allowed and yields isolated injected nodes.
    """

    strategy: str
    count: int
    degree: int
    seed: int
    layer: int = 2

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ValueError(f"count must be >= 1, got {self.count}")
        if self.degree < 0:
            raise ValueError(f"degree must be >= 0, got {self.degree}")
        if self.layer not in (1, 2):
            raise ValueError(f"layer must be 1 or 2, got {self.layer}")

    @property
    def budget(self) -> int:
        return self.count * self.degree


def _matched_count(instance: MultiplexInstance, layer: int, node: int) -> int:
    partner = instance.matched(layer)
    net = instance.network(layer)
    return sum(1 for v in net.neighbors(node) if v in partner)


def _run_injection(instance: MultiplexInstance, config: BaselineConfig,
                   anchor_sets: Iterator[list[int]]) -> MultiplexInstance:
    g1c, g2c = instance.g1.copy(), instance.g2.copy()
    net = g1c if config.layer == 1 else g2c
    budgets = (config.budget, 0) if config.layer == 1 else (0, config.budget)
    ledger = InjectionLedger(*budgets)
    spent = 0
    for _ in range(config.count):
        anchors = next(anchor_sets, [])
        if spent + len(anchors) > config.budget:
            anchors = anchors[:config.budget - spent]
        inject_node(net, ledger, config.layer, anchors)
        spent += len(anchors)
    return instance.with_layers(g1c, g2c)


def _cycled_chunks(order: Sequence[int], degree: int) -> Iterator[list[int]]:
    """Consume an anchor ordering in chunks of ``degree`` distinct nodes,
    wrapping around when exhausted."""
    if degree == 0 or not order:
        while True:
            yield []
    pos = 0
    while True:
        chunk: list[int] = []
        seen: set[int] = set()
        while len(chunk) < min(degree, len(order)):
            cand = order[pos % len(order)]
            pos += 1
            if cand not in seen:
                seen.add(cand)
                chunk.append(cand)
        yield chunk


def attack_random(instance: MultiplexInstance, config: BaselineConfig,
                  ) -> MultiplexInstance:
    """Per injected node, walk existing nodes in index order and link each
    with probability degree/n; the total budget is a hard stop."""
    n = instance.network(config.layer).n
    p = min(1.0, config.degree / n) if n else 0.0
    rng = random.Random(config.seed)

    def stream() -> Iterator[list[int]]:
        while True:
            yield [i for i in range(n) if rng.random() < p]

    return _run_injection(instance, config, stream())


def attack_uniform(instance: MultiplexInstance, config: BaselineConfig,
                   ) -> MultiplexInstance:
    """Round-robin over existing nodes in index order, ``degree`` links per
    injected node, until the budget is spent."""
    n = instance.network(config.layer).n
    return _run_injection(instance, config,
                          _cycled_chunks(list(range(n)), config.degree))


def attack_aldn(instance: MultiplexInstance, config: BaselineConfig,
                ) -> MultiplexInstance:
    """Anchor the largest-degree existing nodes first."""
    net = instance.network(config.layer)
    order = sorted(range(net.n), key=lambda u: (-net.degree(u), u))
    return _run_injection(instance, config, _cycled_chunks(order, config.degree))


def attack_asdn(instance: MultiplexInstance, config: BaselineConfig,
                ) -> MultiplexInstance:
    """Anchor the smallest-degree existing nodes first."""
    net = instance.network(config.layer)
    order = sorted(range(net.n), key=lambda u: (net.degree(u), u))
    return _run_injection(instance, config, _cycled_chunks(order, config.degree))


def _sampled_pool(instance: MultiplexInstance, config: BaselineConfig,
                  pool: list[int]) -> MultiplexInstance:
    rng = random.Random(config.seed)

    def stream() -> Iterator[list[int]]:
        while True:
            if not pool:
                yield []
            else:
                yield sorted(rng.sample(pool, min(config.degree, len(pool))))

    return _run_injection(instance, config, stream())


def attack_amn(instance: MultiplexInstance, config: BaselineConfig,
               ) -> MultiplexInstance:
    """Anchor only nodes that already have an observed correspondent."""
    pool = sorted(instance.matched(config.layer))
    return _sampled_pool(instance, config, pool)


def attack_aumn(instance: MultiplexInstance, config: BaselineConfig,
                ) -> MultiplexInstance:
    """Anchor only nodes without an observed correspondent."""
    pool = instance.unmatched(config.layer)
    return _sampled_pool(instance, config, pool)


def _endpoint_stream(selected: Iterator[tuple[int, int]], degree: int,
                     max_distinct: int) -> Iterator[list[int]]:
    """Turn a stream of selected links into per-node anchor sets built from
    their endpoints.  ``max_distinct`` bounds how many distinct endpoints the
    stream can ever produce, so a chunk stops once it holds them all."""
    if degree == 0 or max_distinct == 0:
        while True:
            yield []
    target = min(degree, max_distinct)
    buffer: list[int] = []
    while True:
        chunk: list[int] = []
        seen: set[int] = set()
        while len(chunk) < target:
            if not buffer:
                try:
                    u, v = next(selected)
                except StopIteration:
                    break
                buffer.extend((u, v))
            cand = buffer.pop(0)
            if cand not in seen:
                seen.add(cand)
                chunk.append(cand)
        yield chunk


def attack_lps_like(instance: MultiplexInstance, config: BaselineConfig,
                    ) -> MultiplexInstance:
    """Select links by a seeded weighted random walk (restarting each step)
    whose step weights are the endpoints' matched-neighbor counts, then
    anchor the selected links' endpoints.

    This is a documented approximation of the link-perturbation strategy it
    stands in for, not a faithful port.
    """
    net = instance.network(config.layer)
    rng = random.Random(config.seed)
    eligible = [u for u in range(net.n) if net.degree(u) > 0]
    m_counts = {u: _matched_count(instance, config.layer, u) for u in range(net.n)}

    def selected() -> Iterator[tuple[int, int]]:
        if not eligible:
            return
        max_picks = max(1, config.budget) * 50
        for _ in range(max_picks):
            u = eligible[rng.randrange(len(eligible))]
            nbrs = sorted(net.neighbors(u))
            weights = [m_counts[v] * max(m_counts[u], 1) for v in nbrs]
            if sum(weights) == 0:
                v = nbrs[rng.randrange(len(nbrs))]
            else:
                v = rng.choices(nbrs, weights=weights, k=1)[0]
            yield (u, v)

    return _run_injection(instance, config,
                          _endpoint_stream(selected(), config.degree,
                                           max_distinct=len(eligible)))


def attack_gps_like(instance: MultiplexInstance, config: BaselineConfig,
                    ) -> MultiplexInstance:
    """Rank every existing link by the product of its endpoint degrees and
    anchor the heaviest links' endpoints first.

    Documented approximation; see :func:`attack_lps_like`.
    """
    net = instance.network(config.layer)
    links = sorted(net.iter_edges(),
                   key=lambda e: (-net.degree(e[0]) * net.degree(e[1]), e))
    distinct = len({v for e in links for v in e})

    def selected() -> Iterator[tuple[int, int]]:
        while links:
            for e in links:
                yield e

    return _run_injection(instance, config,
                          _endpoint_stream(selected(), config.degree,
                                           max_distinct=distinct))


BASELINES: dict[str, Callable[[MultiplexInstance, BaselineConfig], MultiplexInstance]] = {
    "random": attack_random,
    "uniform": attack_uniform,
    "aldn": attack_aldn,
    "asdn": attack_asdn,
    "amn": attack_amn,
    "aumn": attack_aumn,
    "lps_like": attack_lps_like,
    "gps_like": attack_gps_like,
}


def run_baseline(instance: MultiplexInstance, config: BaselineConfig,
                 ) -> MultiplexInstance:
    try:
        fn = BASELINES[config.strategy.lower()]
    except KeyError:
        raise ValueError(f"unknown baseline strategy {config.strategy!r}; "
                         f"expected one of {STRATEGY_TAGS}") from None
    return fn(instance, config)
