"""Evaluation metrics over alignment results.

Rank-based metrics take 1-based ranks of each held-out node's true
counterpart; set-based metrics compare greedy predictions with the held-out
pair set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


def _check_ranks(ranks: Sequence[int]) -> Sequence[int]:
    if len(ranks) == 0:
        raise ValueError("metric undefined for an empty rank list")
    for r in ranks:
        if r < 1:
            raise ValueError(f"ranks are 1-based, got {r}")
    return ranks


def precision_at_n(ranks: Sequence[int], n: int) -> float:
    """Fraction of test nodes whose true counterpart ranks within the top n."""
    _check_ranks(ranks)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return sum(1 for r in ranks if r <= n) / len(ranks)


def map_score(ranks: Sequence[int]) -> float:
    """Mean reciprocal rank of the true counterparts."""
    _check_ranks(ranks)
    return sum(1.0 / r for r in ranks) / len(ranks)


def auc_score(ranks: Sequence[int], m_n: int) -> float:
    """Mean normalized placement above the m_n negative candidates."""
    _check_ranks(ranks)
    if m_n < 1:
        raise ValueError(f"m_n must be >= 1, got {m_n}")
    for r in ranks:
        if r > m_n + 1:
            raise ValueError(f"rank {r} exceeds m_n + 1 = {m_n + 1}")
    return sum((m_n + 1 - r) / m_n for r in ranks) / len(ranks)


def precision_recall_f1(predicted: Iterable[tuple[int, int]],
                        psi: Iterable[tuple[int, int]],
                        ) -> tuple[float, float, float]:
    """Set overlap between predicted pairs and the held-out ground truth."""
    pred = set(predicted)
    truth = set(psi)
    tp = len(pred & truth)
    fp = len(pred - truth)
    fn = len(truth - pred)
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall else 0.0)
    return precision, recall, f1


@dataclass
class EvalReport:
    """All metric values for one (instance, scorer) evaluation."""

    p_at_n: dict[int, float]
    map_score: float
    auc: float
    precision: float | None
    recall: float | None
    f1: float | None
    m: int
    m_n: int
    metadata: dict = field(default_factory=dict)
