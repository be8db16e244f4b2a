"""Budget-minimal node-injection attack against neighborhood alignment scorers.

The pipeline, per injection layer:

1.  Encode every unmatched node of the *target* side (the opposite layer) as
    a bit vector over the observed pair list: bit ``a`` is set when the
    node is adjacent to the same-side endpoint of observed pair ``a``.
2.  Count common matched neighbors for all cross-layer pairs as one integer
    matrix product of the two bit matrices.
3.  Score each target node's vulnerability and the minimum number of anchor
    links an injected node needs to beat (or tie) its best existing
    candidate.
4.  Search for groups of target nodes that share enough common matched
    neighbors to be attacked together by a single injected node, largest
    group first, until the layer budget runs out.  Group bit vectors are
    intersections of member vectors, memoized so overlapping subsets are
    never recomputed.
5.  Inject one node per selected group, linked to the correspondents of the
    group's common matched neighbors.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .graphs import InjectionLedger, MultiplexInstance, SocialNetwork, inject_node

DEFAULT_DELTA = 0.5
DEFAULT_MEMO_LIMIT = 100_000
DEFAULT_EXPLORE_LIMIT = 250_000


@dataclass(frozen=True)
class LayerVectors:
    """Per-node matched-neighbor bit vectors for the unmatched nodes of one side.

    ``masks[k]`` is an integer bitmask for ``nodes[k]``; ``matrix`` is the
    equivalent 0/1 array of shape (len(nodes), len(pair_list)).
    """

    side: int
    pairs: tuple[tuple[int, int], ...]
    nodes: tuple[int, ...]
    masks: tuple[int, ...]
    matrix: np.ndarray

    def mask_of(self, node: int) -> int:
        return self.masks[self.nodes.index(node)]

    def m_count(self, node: int) -> int:
        return self.mask_of(node).bit_count()


def build_vectors(instance: MultiplexInstance) -> tuple[LayerVectors, LayerVectors]:
    """Bit vectors for both sides, sharing the instance's pair ordering."""
    if not instance.phi:
        raise ValueError("instance has no observed pairs")
    out = []
    for side in (1, 2):
        net = instance.network(side)
        pos = {pair[side - 1]: a for a, pair in enumerate(instance.phi)}
        nodes = tuple(instance.unmatched(side))
        width = len(instance.phi)
        matrix = np.zeros((len(nodes), width), dtype=np.uint8)
        masks = []
        for k, u in enumerate(nodes):
            mask = 0
            for v in net.neighbors(u):
                a = pos.get(v)
                if a is not None:
                    mask |= 1 << a
                    matrix[k, a] = 1
            masks.append(mask)
        out.append(LayerVectors(side=side, pairs=instance.phi, nodes=nodes,
                                masks=tuple(masks), matrix=matrix))
    return out[0], out[1]


@dataclass(frozen=True)
class CmnMatrix:
    """Common-matched-neighbor counts between all unmatched cross-layer pairs."""

    rows: tuple[int, ...]
    cols: tuple[int, ...]
    counts: np.ndarray

    def entry(self, u1: int, u2: int) -> int:
        return int(self.counts[self.rows.index(u1), self.cols.index(u2)])

    def row_max(self) -> np.ndarray:
        if self.counts.size == 0:
            return np.zeros(len(self.rows), dtype=np.int64)
        return self.counts.max(axis=1)

    def col_max(self) -> np.ndarray:
        if self.counts.size == 0:
            return np.zeros(len(self.cols), dtype=np.int64)
        return self.counts.max(axis=0)


def cmn_matrix(vectors1: LayerVectors, vectors2: LayerVectors) -> CmnMatrix:
    """Pairwise shared-bit counts as an integer matrix product."""
    if vectors1.pairs != vectors2.pairs:
        raise ValueError("vector collections do not share a pair ordering")
    counts = vectors1.matrix.astype(np.int64) @ vectors2.matrix.astype(np.int64).T
    return CmnMatrix(rows=vectors1.nodes, cols=vectors2.nodes, counts=counts)


def vulnerability(m_count: int, max_c: int, delta: float = DEFAULT_DELTA) -> float:
    """How cheaply a node's alignment can be disrupted, in [0, 1].

    High when the node has many matched neighbors but its best existing
    candidate shares few of them.
    """
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must be in [0, 1], got {delta}")
    if max_c > m_count:
        raise ValueError(f"max_c={max_c} exceeds matched-neighbor count {m_count}")
    return (delta * (m_count - max_c) / (m_count + 1)
            + (1.0 - delta) / (max_c + 1))


def per_node_budget(m_count: int, max_c: int) -> int:
    """Minimum anchors an injected node needs to beat the node's best
    existing candidate (tie when no headroom exists; 0 means unattackable)."""
    if max_c > m_count:
        raise ValueError(f"max_c={max_c} exceeds matched-neighbor count {m_count}")
    return max_c + (1 if m_count > max_c else 0)


@dataclass(frozen=True)
class TargetSet:
    """A group of same-side unmatched nodes attackable by one injected node.

    ``bits`` is the intersection of the members' bit vectors, ``nc`` its
    popcount, and ``required`` the largest per-member anchor budget.  The
    group is feasible when it has at least ``required`` shared common
    matched neighbors to anchor on.
    """

    members: tuple[int, ...]
    bits: int
    nc: int
    required: int

    @property
    def feasible(self) -> bool:
        return self.nc >= self.required


def singleton_set(node: int, masks: Mapping[int, int],
                  budgets: Mapping[int, int]) -> TargetSet:
    bits = masks[node]
    return TargetSet(members=(node,), bits=bits, nc=bits.bit_count(),
                     required=budgets[node])


def set_cmn(base: TargetSet | int, extend: int, masks: Mapping[int, int],
            budgets: Mapping[int, int]) -> TargetSet:
    """Grow a target set by one node via bitwise intersection."""
    if not isinstance(base, TargetSet):
        base = singleton_set(int(base), masks, budgets)
    if extend in base.members:
        raise ValueError(f"node {extend} is already a member")
    bits = base.bits & masks[extend]
    members = tuple(sorted(base.members + (extend,)))
    return TargetSet(members=members, bits=bits, nc=bits.bit_count(),
                     required=max(base.required, budgets[extend]))


class _LruMemo:
    """Bounded cache of computed target sets, keyed by sorted member tuple."""

    def __init__(self, limit: int):
        self.limit = limit
        self._data: OrderedDict[tuple[int, ...], TargetSet] = OrderedDict()

    def get(self, key: tuple[int, ...]) -> TargetSet | None:
        ts = self._data.get(key)
        if ts is not None:
            self._data.move_to_end(key)
        return ts

    def put(self, key: tuple[int, ...], value: TargetSet) -> None:
        self._data[key] = value
        self._data.move_to_end(key)
        if len(self._data) > self.limit:
            self._data.popitem(last=False)

    def __len__(self) -> int:
        return len(self._data)


class TargetSearch:
    """Depth-first search for the largest feasible target set.

    Candidates are explored in descending-vulnerability order (ties by node
    index).  Feasibility is anti-monotone under set growth (intersections
    shrink, required budgets grow), so infeasible branches are pruned
    exactly; a bound on the best reachable cardinality prunes the rest.
    ``explore_limit`` caps extension attempts, making large searches
    anytime rather than exhaustive.
    """

    def __init__(self, masks: Mapping[int, int], budgets: Mapping[int, int],
                 lambdas: Mapping[int, float],
                 memo_limit: int = DEFAULT_MEMO_LIMIT,
                 explore_limit: int = DEFAULT_EXPLORE_LIMIT):
        self.masks = dict(masks)
        self.budgets = dict(budgets)
        attackable = [u for u, b in self.budgets.items() if b > 0]
        self.order = sorted(attackable, key=lambda u: (-lambdas[u], u))
        self.rank = {u: i for i, u in enumerate(self.order)}
        self.memo = _LruMemo(memo_limit)
        self.explore_limit = explore_limit
        self.explored = 0

    def extend(self, base: TargetSet, node: int) -> TargetSet:
        key = tuple(sorted(base.members + (node,)))
        cached = self.memo.get(key)
        if cached is not None:
            return cached
        ts = set_cmn(base, node, self.masks, self.budgets)
        self.memo.put(key, ts)
        return ts

    def _selection_key(self, ts: TargetSet) -> tuple:
        first = min(self.rank[u] for u in ts.members)
        return (-len(ts.members), first, ts.required, ts.members)

    def find_best(self, limit: int, exclude: frozenset[int] | set[int]) -> TargetSet | None:
        """Largest feasible set with required budget <= limit, avoiding
        excluded nodes.  Ties prefer the set seeded by the most vulnerable
        node, then the cheaper set."""
        candidates = [u for u in self.order
                      if u not in exclude and self.budgets[u] <= limit]
        if not candidates:
            return None
        best: TargetSet | None = None
        best_key: tuple | None = None
        total = len(candidates)
        # Stack of (target set, index of next candidate to try).
        stack: list[tuple[TargetSet, int]] = []
        for i in range(total):
            ts = singleton_set(candidates[i], self.masks, self.budgets)
            if not ts.feasible:
                continue
            key = self._selection_key(ts)
            if best_key is None or key < best_key:
                best, best_key = ts, key
            stack.append((ts, i + 1))
        while stack:
            ts, nxt = stack.pop()
            if self.explored >= self.explore_limit:
                break
            for i in range(nxt, total):
                # Even taking every remaining candidate cannot beat the best.
                if len(ts.members) + (total - i) < len(best.members):
                    break
                self.explored += 1
                grown = self.extend(ts, candidates[i])
                if grown.nc < grown.required or grown.required > limit:
                    continue
                key = self._selection_key(grown)
                if key < best_key:
                    best, best_key = grown, key
                stack.append((grown, i + 1))
        return best

    def schedule(self, budget: int, cap: int | None = None) -> list[TargetSet]:
        """Disjoint feasible sets, largest first, until the budget runs out."""
        residual = budget
        covered: set[int] = set()
        selected: list[TargetSet] = []
        while True:
            limit = residual if cap is None else min(residual, cap)
            if limit <= 0:
                break
            ts = self.find_best(limit, covered)
            if ts is None:
                break
            selected.append(ts)
            covered.update(ts.members)
            residual -= ts.required
        return selected


def _target_stats(instance: MultiplexInstance, target_side: int,
                  delta: float) -> tuple[LayerVectors, dict[int, int],
                                         dict[int, int], dict[int, float]]:
    v1, v2 = build_vectors(instance)
    target = v1 if target_side == 1 else v2
    matrix = cmn_matrix(v1, v2)
    max_c_arr = matrix.row_max() if target_side == 1 else matrix.col_max()
    masks: dict[int, int] = {}
    budgets: dict[int, int] = {}
    lambdas: dict[int, float] = {}
    for k, u in enumerate(target.nodes):
        m = target.masks[k].bit_count()
        c = int(max_c_arr[k])
        masks[u] = target.masks[k]
        budgets[u] = per_node_budget(m, c)
        lambdas[u] = vulnerability(m, c, delta)
    return target, masks, budgets, lambdas


def dp_search(instance: MultiplexInstance, layer: int, budget: int, *,
              delta: float = DEFAULT_DELTA,
              max_links_per_node: int | None = None,
              memo_limit: int = DEFAULT_MEMO_LIMIT,
              explore_limit: int = DEFAULT_EXPLORE_LIMIT) -> list[TargetSet]:
    """Plan target sets for injections into ``layer`` within ``budget`` links.

    Targets live on the opposite side; each returned set costs its required
    budget and the sets cover disjoint targets.
    """
    if budget <= 0:
        return []
    target_side = 2 if layer == 1 else 1
    if not instance.unmatched(target_side) or not instance.unmatched(layer):
        return []
    _, masks, budgets, lambdas = _target_stats(instance, target_side, delta)
    search = TargetSearch(masks, budgets, lambdas,
                          memo_limit=memo_limit, explore_limit=explore_limit)
    return search.schedule(budget, cap=max_links_per_node)


@dataclass(frozen=True)
class PlanStep:
    """One injection: the layer it lands in, its anchors there, and the
    opposite-side nodes it is meant to disrupt."""

    layer: int
    injected_label: str
    anchors: tuple[int, ...]
    covered: tuple[int, ...]


@dataclass(frozen=True)
class AttackPlan:
    steps: tuple[PlanStep, ...]

    @property
    def total_cost(self) -> int:
        return sum(len(s.anchors) for s in self.steps)

    def cost(self, layer: int) -> int:
        return sum(len(s.anchors) for s in self.steps if s.layer == layer)


@dataclass(frozen=True)
class DpniaOutcome:
    instance: MultiplexInstance
    ledger: InjectionLedger
    plan: AttackPlan
    flags: tuple[str, ...]


def _pick_anchors(instance: MultiplexInstance, layer: int,
                  ts: TargetSet) -> tuple[int, ...]:
    """Anchor nodes in the injection layer: correspondents of the set's
    common matched neighbors, highest degree first, ``required`` of them."""
    net = instance.network(layer)
    anchors = []
    for a in range(len(instance.phi)):
        if (ts.bits >> a) & 1:
            anchors.append(instance.phi[a][layer - 1])
    anchors.sort(key=lambda v: (-net.degree(v), v))
    return tuple(anchors[:ts.required])


def execute_dpnia(instance: MultiplexInstance, budget1: int, budget2: int,
                  delta: float = DEFAULT_DELTA,
                  max_links_per_node: int | None = None, *,
                  memo_limit: int = DEFAULT_MEMO_LIMIT,
                  explore_limit: int = DEFAULT_EXPLORE_LIMIT) -> DpniaOutcome:
    """Run the full attack for both layers and return the perturbed instance.

    ``budget1``/``budget2`` bound the links added inside layer 1 / layer 2
    respectively (injections into a layer disrupt the other side's
    alignment).  A layer whose budget cannot afford any target is reported
    in ``flags`` as ``budget-insufficient:layer{k}``.
    """
    if budget1 < 0 or budget2 < 0:
        raise ValueError("budgets must be non-negative")
    schedules: dict[int, list[TargetSet]] = {}
    for layer, budget in ((1, budget1), (2, budget2)):
        if budget > 0:
            schedules[layer] = dp_search(
                instance, layer, budget, delta=delta,
                max_links_per_node=max_links_per_node,
                memo_limit=memo_limit, explore_limit=explore_limit)
    g1c, g2c = instance.g1.copy(), instance.g2.copy()
    ledger = InjectionLedger(budget1, budget2)
    steps: list[PlanStep] = []
    flags: list[str] = []
    for layer in (1, 2):
        sets = schedules.get(layer, [])
        budget = budget1 if layer == 1 else budget2
        if budget > 0 and not sets:
            flags.append(f"budget-insufficient:layer{layer}")
            continue
        net = g1c if layer == 1 else g2c
        for ts in sets:
            anchors = _pick_anchors(instance, layer, ts)
            new_id = inject_node(net, ledger, layer, anchors)
            steps.append(PlanStep(layer=layer, injected_label=net.label(new_id),
                                  anchors=anchors, covered=ts.members))
    perturbed = instance.with_layers(g1c, g2c)
    return DpniaOutcome(instance=perturbed, ledger=ledger,
                        plan=AttackPlan(steps=tuple(steps)), flags=tuple(flags))


def format_plan(plan: AttackPlan, instance: MultiplexInstance) -> str:
    """Tab-separated audit record, one instruction per line:
    layer, injected label, comma-joined anchor labels, comma-joined covered
    labels.  Anchors live in the injection layer, covered nodes opposite."""
    lines = []
    for s in plan.steps:
        inj_net = instance.network(s.layer)
        tgt_net = instance.network(2 if s.layer == 1 else 1)
        anchors = ",".join(inj_net.label(a) for a in s.anchors)
        covered = ",".join(tgt_net.label(c) for c in s.covered)
        lines.append(f"{s.layer}\t{s.injected_label}\t{anchors}\t{covered}")
    return "\n".join(lines) + ("\n" if lines else "")


def parse_plan(text: str) -> list[tuple[int, str, tuple[str, ...], tuple[str, ...]]]:
    records = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"plan line {lineno}: expected 4 tab-separated fields")
        layer = int(parts[0])
        anchors = tuple(p for p in parts[2].split(",") if p)
        covered = tuple(p for p in parts[3].split(",") if p)
        records.append((layer, parts[1], anchors, covered))
    return records


def apply_plan(instance: MultiplexInstance,
               records: Sequence[tuple[int, str, tuple[str, ...], tuple[str, ...]]],
               ) -> tuple[MultiplexInstance, InjectionLedger]:
    """Replay a parsed plan against an unperturbed instance."""
    cost1 = sum(len(r[2]) for r in records if r[0] == 1)
    cost2 = sum(len(r[2]) for r in records if r[0] == 2)
    g1c, g2c = instance.g1.copy(), instance.g2.copy()
    ledger = InjectionLedger(cost1, cost2)
    for layer, _label, anchor_labels, _covered in records:
        net = g1c if layer == 1 else g2c
        anchors = [net.index_of(a) for a in anchor_labels]
        inject_node(net, ledger, layer, anchors)
    return instance.with_layers(g1c, g2c), ledger
