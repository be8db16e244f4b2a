"""Multiplex social-network data model: layers, inter-links, and node injection.

A layer is an undirected graph over dense integer indices with a stable
external label per node.  Two layers plus a training set of observed
correspondent pairs (``phi``) and a held-out test set (``psi``) form a
:class:`MultiplexInstance`.  Attacks never touch existing adjacency; they
append fresh nodes whose links to pre-existing nodes are charged against a
per-layer budget tracked by :class:`InjectionLedger`.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence


class EdgeListParseError(ValueError):
    """A line of an edge-list file could not be parsed."""


class InterlinkError(ValueError):
    """An inter-link file violates the one-to-one matching contract."""


class BudgetExceededError(ValueError):
    """An injection would charge more links than the remaining budget."""

    def __init__(self, message: str, remaining: int):
        super().__init__(message)
        self.remaining = remaining


class SocialNetwork:
    """One undirected layer: dense indices 0..n-1, label table, adjacency sets.

    Self-loops and duplicate edges are rejected at the edge level (``add_edge``
    returns False instead of mutating).  Instances handed to scorers or
    attacks are treated as immutable; attacks mutate private copies obtained
    via :meth:`copy`.
    """

    __slots__ = ("_labels", "_index", "_adj", "_m")

    def __init__(self) -> None:
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._adj: list[set[int]] = []
        self._m = 0

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str, str]],
                   nodes: Iterable[str] = ()) -> "SocialNetwork":
        """Build a network from labelled edges, registering ``nodes`` first
        so isolated nodes can exist.  Duplicates and self-loops are dropped.
        """
        net = cls()
        for label in nodes:
            if label not in net._index:
                net.add_node(label)
        for a, b in edges:
            for label in (a, b):
                if label not in net._index:
                    net.add_node(label)
            net.add_edge(net._index[a], net._index[b])
        return net

    @property
    def n(self) -> int:
        return len(self._labels)

    @property
    def m(self) -> int:
        return self._m

    def add_node(self, label: str | None = None) -> int:
        if label is None:
            label = f"v{self.n}"
            while label in self._index:
                label = label + "_"
        elif label in self._index:
            raise ValueError(f"duplicate node label {label!r}")
        idx = self.n
        self._labels.append(label)
        self._index[label] = idx
        self._adj.append(set())
        return idx

    def add_edge(self, i: int, j: int) -> bool:
        """Add an undirected edge; returns False for self-loops/duplicates."""
        if i == j:
            return False
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise ValueError(f"edge ({i}, {j}) references an unknown node")
        if j in self._adj[i]:
            return False
        self._adj[i].add(j)
        self._adj[j].add(i)
        self._m += 1
        return True

    def has_edge(self, i: int, j: int) -> bool:
        return j in self._adj[i]

    def neighbors(self, i: int) -> set[int]:
        """Neighbor set of node ``i`` (do not mutate)."""
        return self._adj[i]

    def degree(self, i: int) -> int:
        return len(self._adj[i])

    def label(self, i: int) -> str:
        return self._labels[i]

    def index_of(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown node label {label!r}") from None

    def has_label(self, label: str) -> bool:
        return label in self._index

    def iter_edges(self) -> Iterable[tuple[int, int]]:
        """Edges as (i, j) with i < j, in sorted order."""
        for i in range(self.n):
            for j in sorted(self._adj[i]):
                if i < j:
                    yield (i, j)

    def copy(self) -> "SocialNetwork":
        dup = SocialNetwork()
        dup._labels = list(self._labels)
        dup._index = dict(self._index)
        dup._adj = [set(s) for s in self._adj]
        dup._m = self._m
        return dup

    def __repr__(self) -> str:  # pragma: no cover
        return f"SocialNetwork(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class LoadStats:
    """Ingestion counters for one edge-list file."""
    lines: int
    self_loops: int
    duplicates: int


def load_edge_list(path: str | Path,
                   label_map: Mapping[str, int] | None = None,
                   ) -> tuple[SocialNetwork, LoadStats]:
    """Parse a whitespace-separated edge list into a network.

    Format: one edge per line, two labels; blank lines and lines starting
    with ``#`` are ignored.  Labels map to dense indices in first-appearance
    order unless ``label_map`` pre-assigns them (must be dense from 0).
    Self-loops and duplicate edges are dropped but counted in the returned
    :class:`LoadStats`.
    """
    net = SocialNetwork()
    if label_map is not None:
        for label, idx in sorted(label_map.items(), key=lambda kv: kv[1]):
            got = net.add_node(label)
            if got != idx:
                raise ValueError(f"label_map is not dense: {label!r} -> {idx}")
    lines = self_loops = duplicates = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(
                    f"{path}: line {lineno}: expected two labels, got {len(parts)}")
            lines += 1
            a, b = parts
            for label in (a, b):
                if not net.has_label(label):
                    net.add_node(label)
            i, j = net.index_of(a), net.index_of(b)
            if i == j:
                self_loops += 1
            elif not net.add_edge(i, j):
                duplicates += 1
    return net, LoadStats(lines=lines, self_loops=self_loops, duplicates=duplicates)


def write_edge_list(net: SocialNetwork, path: str | Path) -> None:
    """Serialize edges (sorted by index pair) in the loadable text format.

    Isolated nodes are not representable in this format.
    """
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in net.iter_edges():
            fh.write(f"{net.label(i)} {net.label(j)}\n")


def load_interlinks(path: str | Path, g1: SocialNetwork,
                    g2: SocialNetwork) -> list[tuple[int, int]]:
    """Parse an inter-link file: one pair per line, left label in layer 1.

    Enforces the partial-matching contract: any repeated left or right
    endpoint is an error, as is a label unknown to its layer.
    """
    pairs: list[tuple[int, int]] = []
    seen_left: set[int] = set()
    seen_right: set[int] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise EdgeListParseError(
                    f"{path}: line {lineno}: expected two labels, got {len(parts)}")
            a, b = parts
            if not g1.has_label(a):
                raise InterlinkError(f"{path}: line {lineno}: unknown layer-1 label {a!r}")
            if not g2.has_label(b):
                raise InterlinkError(f"{path}: line {lineno}: unknown layer-2 label {b!r}")
            i, j = g1.index_of(a), g2.index_of(b)
            if i in seen_left:
                raise InterlinkError(f"{path}: line {lineno}: duplicate left endpoint {a!r}")
            if j in seen_right:
                raise InterlinkError(f"{path}: line {lineno}: duplicate right endpoint {b!r}")
            seen_left.add(i)
            seen_right.add(j)
            pairs.append((i, j))
    return pairs


def write_interlinks(pairs: Iterable[tuple[int, int]], path: str | Path,
                     g1: SocialNetwork, g2: SocialNetwork) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in sorted(pairs):
            fh.write(f"{g1.label(i)} {g2.label(j)}\n")


def split_interlinks(pairs: Iterable[tuple[int, int]], train_fraction: float,
                     seed: int) -> tuple[tuple[tuple[int, int], ...],
                                         tuple[tuple[int, int], ...]]:
    """Deterministically split pairs into (phi, psi).

    ``|phi| = round(train_fraction * |pairs|)`` with .5 rounding toward phi.
    The split depends only on the pair set and the seed.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    ordered = sorted(set((int(a), int(b)) for a, b in pairs))
    if len(ordered) < 2:
        raise ValueError("need at least 2 pairs to split into phi and psi")
    rng = random.Random(seed)
    shuffled = rng.sample(ordered, len(ordered))
    k = int(math.floor(train_fraction * len(ordered) + 0.5))
    phi = tuple(sorted(shuffled[:k]))
    psi = tuple(sorted(shuffled[k:]))
    return phi, psi


class MultiplexInstance:
    """Two layers plus observed (phi) and held-out (psi) correspondent pairs.

    phi and psi are normalized to sorted tuples; together they must form a
    one-to-one partial matching with no endpoint reuse.  Scorers see only
    phi; psi is the evaluation ground truth.
    """

    __slots__ = ("g1", "g2", "phi", "psi", "partner1", "partner2")

    def __init__(self, g1: SocialNetwork, g2: SocialNetwork,
                 phi: Iterable[tuple[int, int]],
                 psi: Iterable[tuple[int, int]] = ()) -> None:
        phi_t = tuple(sorted({(int(a), int(b)) for a, b in phi}))
        psi_t = tuple(sorted({(int(a), int(b)) for a, b in psi}))
        left: set[int] = set()
        right: set[int] = set()
        for name, group in (("phi", phi_t), ("psi", psi_t)):
            for a, b in group:
                if not 0 <= a < g1.n:
                    raise ValueError(f"{name} pair ({a}, {b}): no such layer-1 node")
                if not 0 <= b < g2.n:
                    raise ValueError(f"{name} pair ({a}, {b}): no such layer-2 node")
                if a in left:
                    raise ValueError(f"layer-1 node {a} appears in more than one pair")
                if b in right:
                    raise ValueError(f"layer-2 node {b} appears in more than one pair")
                left.add(a)
                right.add(b)
        self.g1 = g1
        self.g2 = g2
        self.phi = phi_t
        self.psi = psi_t
        self.partner1 = {a: b for a, b in phi_t}
        self.partner2 = {b: a for a, b in phi_t}

    def network(self, side: int) -> SocialNetwork:
        if side == 1:
            return self.g1
        if side == 2:
            return self.g2
        raise ValueError(f"side must be 1 or 2, got {side}")

    def matched(self, side: int) -> dict[int, int]:
        """Observed-correspondent map for one side (node -> partner)."""
        return self.partner1 if side == 1 else self.partner2

    def unmatched(self, side: int) -> list[int]:
        """All nodes on ``side`` without an observed correspondent, ascending."""
        net = self.network(side)
        partner = self.matched(side)
        return [u for u in range(net.n) if u not in partner]

    def with_layers(self, g1: SocialNetwork, g2: SocialNetwork) -> "MultiplexInstance":
        """Same pair sets over (typically perturbed) layer copies."""
        return MultiplexInstance(g1, g2, self.phi, self.psi)

    def __repr__(self) -> str:  # pragma: no cover
        return (f"MultiplexInstance(n1={self.g1.n}, n2={self.g2.n}, "
                f"|phi|={len(self.phi)}, |psi|={len(self.psi)})")


@dataclass
class InjectionLedger:
    """Budget accounting for node injection.

    Links from an injected node to a pre-existing node are charged; links
    between two injected nodes are tracked separately and cost nothing.
    """

    budget1: int
    budget2: int
    theta1: set[int] = field(default_factory=set)
    theta2: set[int] = field(default_factory=set)
    atk_links1: set[tuple[int, int]] = field(default_factory=set)
    atk_links2: set[tuple[int, int]] = field(default_factory=set)
    peer_links1: set[tuple[int, int]] = field(default_factory=set)
    peer_links2: set[tuple[int, int]] = field(default_factory=set)

    def __post_init__(self) -> None:
        if self.budget1 < 0 or self.budget2 < 0:
            raise ValueError("budgets must be non-negative")

    def theta(self, layer: int) -> set[int]:
        return self.theta1 if layer == 1 else self.theta2

    def atk_links(self, layer: int) -> set[tuple[int, int]]:
        return self.atk_links1 if layer == 1 else self.atk_links2

    def peer_links(self, layer: int) -> set[tuple[int, int]]:
        return self.peer_links1 if layer == 1 else self.peer_links2

    def budget(self, layer: int) -> int:
        return self.budget1 if layer == 1 else self.budget2

    def spent(self, layer: int) -> int:
        return len(self.atk_links(layer))

    def remaining(self, layer: int) -> int:
        return self.budget(layer) - self.spent(layer)


def inject_node(net: SocialNetwork, ledger: InjectionLedger, layer: int,
                anchors: Iterable[int]) -> int:
    """Append a fresh node to ``net`` linked to ``anchors``, charging the ledger.

    Anchors that are themselves injected nodes are linked but not charged.
    Raises :class:`BudgetExceededError` (before any mutation) if the charged
    anchor count exceeds the remaining layer budget.  Returns the new index.
    """
    if layer not in (1, 2):
        raise ValueError(f"layer must be 1 or 2, got {layer}")
    anchor_list = sorted(set(int(a) for a in anchors))
    for a in anchor_list:
        if not 0 <= a < net.n:
            raise ValueError(f"anchor {a} does not exist")
    theta = ledger.theta(layer)
    charged = [a for a in anchor_list if a not in theta]
    if len(charged) > ledger.remaining(layer):
        raise BudgetExceededError(
            f"injection needs {len(charged)} links but only "
            f"{ledger.remaining(layer)} remain in layer {layer}",
            remaining=ledger.remaining(layer))
    seq = len(theta)
    label = f"inj{layer}.{seq}"
    while net.has_label(label):
        label += "'"
    new_id = net.add_node(label)
    for a in anchor_list:
        net.add_edge(new_id, a)
        if a in theta:
            ledger.peer_links(layer).add((new_id, a))
        else:
            ledger.atk_links(layer).add((new_id, a))
    theta.add(new_id)
    return new_id
