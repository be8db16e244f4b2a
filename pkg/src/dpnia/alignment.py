"""Neighborhood-based alignment scorers and matchers.

Three scorers over a pair of unmatched cross-layer nodes, all driven by the
observed correspondent pairs:

* ``cn``   -- the number of common matched neighbors.
* ``frui`` -- common matched neighbors plus a tie-refining bonus of that
  count divided by the smaller of the two node degrees.
* ``idp``  -- degree-penalized count: each common matched neighbor pair
  contributes the product of 1/ln(degree+1) of its two endpoints.

Two evaluation modes: ``ranked`` scores every unmatched pair against the
frozen observed pairs and records the rank of each held-out node's true
counterpart; ``greedy`` iteratively commits the globally best-scoring pair
and feeds it back as a matched pair before rescoring.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import attack
from .graphs import MultiplexInstance

SCORER_TAGS = ("cn", "frui", "idp")


def _overlay(instance: MultiplexInstance, side: int,
             extra_pairs: Iterable[tuple[int, int]] | None) -> Mapping[int, int]:
    """Observed-correspondent map, optionally extended with committed pairs."""
    base = instance.matched(side)
    if not extra_pairs:
        return base
    merged = dict(base)
    for a, b in extra_pairs:
        if side == 1:
            merged[a] = b
        else:
            merged[b] = a
    return merged


def matched_neighbors(instance: MultiplexInstance, node: int, side: int = 1,
                      extra_pairs: Iterable[tuple[int, int]] | None = None,
                      ) -> set[int]:
    """Neighbors of ``node`` whose correspondent on the other side is known."""
    net = instance.network(side)
    partner = _overlay(instance, side, extra_pairs)
    return {v for v in net.neighbors(node) if v in partner}


def common_matched_neighbors(instance: MultiplexInstance, u1: int, u2: int,
                             extra_pairs: Iterable[tuple[int, int]] | None = None,
                             ) -> set[tuple[int, int]]:
    """Known pairs (v1, v2) with v1 adjacent to u1 and v2 adjacent to u2."""
    partner = _overlay(instance, 1, extra_pairs)
    nbrs2 = instance.g2.neighbors(u2)
    out = set()
    for v1 in instance.g1.neighbors(u1):
        v2 = partner.get(v1)
        if v2 is not None and v2 in nbrs2:
            out.add((v1, v2))
    return out


def score_cn(instance: MultiplexInstance, u1: int, u2: int,
             extra_pairs: Iterable[tuple[int, int]] | None = None) -> float:
    return float(len(common_matched_neighbors(instance, u1, u2, extra_pairs)))


def score_frui(instance: MultiplexInstance, u1: int, u2: int,
               extra_pairs: Iterable[tuple[int, int]] | None = None) -> float:
    c = len(common_matched_neighbors(instance, u1, u2, extra_pairs))
    if c == 0:
        return 0.0
    low = min(instance.g1.degree(u1), instance.g2.degree(u2))
    return c + c / low


def score_idp(instance: MultiplexInstance, u1: int, u2: int,
              extra_pairs: Iterable[tuple[int, int]] | None = None) -> float:
    total = 0.0
    for v1, v2 in common_matched_neighbors(instance, u1, u2, extra_pairs):
        total += 1.0 / (math.log(instance.g1.degree(v1) + 1)
                        * math.log(instance.g2.degree(v2) + 1))
    return total


SCORERS: dict[str, Callable] = {"cn": score_cn, "frui": score_frui, "idp": score_idp}


def get_scorer(tag: str) -> Callable:
    try:
        return SCORERS[tag.lower()]
    except KeyError:
        raise ValueError(f"unknown scorer {tag!r}; expected one of {SCORER_TAGS}") from None


@dataclass(frozen=True)
class RankedCandidates:
    """Descending-score candidate list for one query node; ties break by
    ascending candidate index, so the ordering is total and reproducible."""

    query: int
    query_side: int
    items: tuple[tuple[int, float], ...]


def rank_candidates(instance: MultiplexInstance, scorer: str | Callable,
                    query: int, query_side: int = 1,
                    extra_pairs: Iterable[tuple[int, int]] | None = None,
                    ) -> RankedCandidates:
    """Score ``query`` against every unmatched node of the other side."""
    fn = get_scorer(scorer) if isinstance(scorer, str) else scorer
    other = 2 if query_side == 1 else 1
    scored = []
    for cand in instance.unmatched(other):
        if query_side == 1:
            s = fn(instance, query, cand, extra_pairs)
        else:
            s = fn(instance, cand, query, extra_pairs)
        scored.append((cand, float(s)))
    scored.sort(key=lambda cs: (-cs[1], cs[0]))
    return RankedCandidates(query=query, query_side=query_side, items=tuple(scored))


def score_matrix(instance: MultiplexInstance, method: str,
                 ) -> tuple[tuple[int, ...], tuple[int, ...], np.ndarray]:
    """All-pairs score matrix (rows = layer-1 unmatched, cols = layer-2
    unmatched) computed from the bit-vector machinery in one shot."""
    method = method.lower()
    if method not in SCORERS:
        raise ValueError(f"unknown scorer {method!r}")
    v1, v2 = attack.build_vectors(instance)
    rows, cols = v1.nodes, v2.nodes
    if method == "cn":
        counts = attack.cmn_matrix(v1, v2).counts
        return rows, cols, counts.astype(np.float64)
    if method == "frui":
        counts = attack.cmn_matrix(v1, v2).counts.astype(np.float64)
        deg1 = np.array([instance.g1.degree(u) for u in rows], dtype=np.float64)
        deg2 = np.array([instance.g2.degree(u) for u in cols], dtype=np.float64)
        low = np.minimum.outer(deg1, deg2)
        safe = np.where(low > 0, low, 1.0)
        return rows, cols, np.where(counts > 0, counts + counts / safe, 0.0)
    # idp: weight each observed-pair slot by the degree penalty of its two
    # endpoints, then take the weighted inner product of the bit matrices.
    w1 = np.zeros(len(instance.phi))
    w2 = np.zeros(len(instance.phi))
    for a, (p1, p2) in enumerate(instance.phi):
        d1, d2 = instance.g1.degree(p1), instance.g2.degree(p2)
        w1[a] = 1.0 / math.log(d1 + 1) if d1 > 0 else 0.0
        w2[a] = 1.0 / math.log(d2 + 1) if d2 > 0 else 0.0
    left = v1.matrix.astype(np.float64) * w1
    right = v2.matrix.astype(np.float64) * w2
    return rows, cols, left @ right.T


@dataclass(frozen=True)
class MatchResult:
    """Outcome of one alignment run.

    ``ranks1[k]`` is the rank of held-out pair k's true layer-2 counterpart
    among layer-2 candidates (queries from layer 1); ``ranks2`` mirrors the
    other direction.  ``m_n1``/``m_n2`` count the negative candidates per
    query.  ``predicted`` holds committed pairs from greedy mode.
    """

    mode: str
    predicted: tuple[tuple[int, int], ...] = ()
    ranks1: tuple[int, ...] = ()
    ranks2: tuple[int, ...] = ()
    m_n1: int | None = None
    m_n2: int | None = None
    iterations: int = 0


def _rank_in_row(scores: np.ndarray, node_ids: np.ndarray, target_pos: int) -> int:
    s = scores[target_pos]
    greater = int(np.count_nonzero(scores > s))
    ties_before = int(np.count_nonzero(
        (scores == s) & (node_ids < node_ids[target_pos])))
    return 1 + greater + ties_before


def align(instance: MultiplexInstance, scorer: str, mode: str = "ranked",
          query_side: str = "both") -> MatchResult:
    """Run one alignment pass.

    ``ranked`` freezes the observed pairs and reports per-test-node ranks;
    ``greedy`` commits the best pair repeatedly (feeding committed pairs
    back as matched neighbors) until nothing scores above zero.
    """
    if not instance.phi:
        raise ValueError("instance has no observed pairs")
    if mode not in ("ranked", "greedy"):
        raise ValueError(f"mode must be 'ranked' or 'greedy', got {mode!r}")
    rows, cols, scores = score_matrix(instance, scorer)
    if mode == "ranked":
        return _align_ranked(instance, rows, cols, scores, query_side)
    return _align_greedy(instance, scorer, rows, cols, scores)


def _align_ranked(instance, rows, cols, scores, query_side) -> MatchResult:
    if query_side not in ("1", "2", "both", 1, 2):
        raise ValueError(f"query_side must be '1', '2' or 'both', got {query_side!r}")
    want1 = query_side in ("1", 1, "both")
    want2 = query_side in ("2", 2, "both")
    row_pos = {u: i for i, u in enumerate(rows)}
    col_pos = {u: i for i, u in enumerate(cols)}
    row_ids = np.array(rows, dtype=np.int64)
    col_ids = np.array(cols, dtype=np.int64)
    m_n1 = len(cols) - 1
    m_n2 = len(rows) - 1
    ranks1: list[int] = []
    ranks2: list[int] = []
    for a, b in instance.psi:
        if want1:
            if b in col_pos:
                ranks1.append(_rank_in_row(scores[row_pos[a]], col_ids, col_pos[b]))
            else:
                ranks1.append(m_n1 + 1)
        if want2:
            if a in row_pos:
                ranks2.append(_rank_in_row(scores[:, col_pos[b]], row_ids, row_pos[a]))
            else:
                ranks2.append(m_n2 + 1)
    return MatchResult(mode="ranked", ranks1=tuple(ranks1), ranks2=tuple(ranks2),
                       m_n1=m_n1 if want1 else None, m_n2=m_n2 if want2 else None)


def _align_greedy(instance, scorer, rows, cols, base_scores) -> MatchResult:
    scorer = scorer.lower()
    row_pos = {u: i for i, u in enumerate(rows)}
    col_pos = {u: i for i, u in enumerate(cols)}
    if scorer == "idp":
        work = base_scores.copy()
    else:
        # Maintain raw common-matched-neighbor counts; derive scores per pass.
        v1, v2 = attack.build_vectors(instance)
        work = attack.cmn_matrix(v1, v2).counts.astype(np.float64)
    if scorer == "frui":
        deg1 = np.array([instance.g1.degree(u) for u in rows], dtype=np.float64)
        deg2 = np.array([instance.g2.degree(u) for u in cols], dtype=np.float64)
        low = np.minimum.outer(deg1, deg2)
        low_safe = np.where(low > 0, low, 1.0)
    active_r = np.ones(len(rows), dtype=bool)
    active_c = np.ones(len(cols), dtype=bool)
    committed: list[tuple[int, int]] = []
    while active_r.any() and active_c.any():
        if scorer == "frui":
            derived = np.where(work > 0, work + work / low_safe, 0.0)
        else:
            derived = work
        masked = np.where(active_r[:, None] & active_c[None, :], derived, -1.0)
        flat = int(np.argmax(masked))
        i, j = divmod(flat, masked.shape[1])
        if masked[i, j] <= 0.0:
            break
        u1, u2 = rows[i], cols[j]
        committed.append((u1, u2))
        active_r[i] = False
        active_c[j] = False
        # The new pair becomes a matched pair: every still-unmatched
        # neighbor pair (of u1 and u2 respectively) gains it as a common
        # matched neighbor.
        if scorer == "idp":
            gain = (1.0 / (math.log(instance.g1.degree(u1) + 1)
                           * math.log(instance.g2.degree(u2) + 1)))
        else:
            gain = 1.0
        for n1 in instance.g1.neighbors(u1):
            r = row_pos.get(n1)
            if r is None or not active_r[r]:
                continue
            for n2 in instance.g2.neighbors(u2):
                c = col_pos.get(n2)
                if c is not None and active_c[c]:
                    work[r, c] += gain
    return MatchResult(mode="greedy", predicted=tuple(sorted(committed)),
                       iterations=len(committed))
