"""Configuration-driven experiment runner.

One run crosses attacks, injected-node counts, per-node degrees, and attack
sides over a number of independent trials, evaluating every scorer on every
perturbed instance, and aggregates the per-trial metric values into a flat
result table.  Fixing the seed makes the whole table reproducible
bit-for-bit.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import alignment, metrics
from .attack import execute_dpnia
from .baselines import STRATEGY_TAGS, BaselineConfig, run_baseline
from .graphs import (MultiplexInstance, load_edge_list, load_interlinks,
                     split_interlinks)
from .synth import SyntheticSpec, generate_synthetic_multiplex

ATTACK_TAGS = ("none", "dpnia") + STRATEGY_TAGS
SIDE_TAGS = ("1", "2", "both")

CSV_HEADER = ("dataset", "scorer", "attack", "nodes", "degree", "sides",
              "metric", "N", "mean", "trials")


class ConfigError(ValueError):
    """An experiment configuration is invalid."""


def derive_seed(*parts) -> int:
    """Stable sub-seed from arbitrary labelled parts (safe across processes)."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass(frozen=True)
class DatasetPaths:
    edges1: str
    edges2: str
    interlinks: str
    name: str = "dataset"


@dataclass
class ExperimentConfig:
    scorers: tuple[str, ...] = ("cn", "frui", "idp")
    attacks: tuple[str, ...] = ("none", "dpnia")
    node_counts: tuple[int, ...] = (4,)
    degrees: tuple[int, ...] = (50,)
    sides: tuple[str, ...] = ("both",)
    delta: float = 0.5
    train_fraction: float = 0.9
    trials: int = 10
    seed: int = 0
    p_at_n: tuple[int, ...] = (1, 5, 10, 30)
    dataset: DatasetPaths | None = None
    synthetic: SyntheticSpec | None = None
    output: str | None = None

    def validate(self) -> None:
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        for name, values in (("scorers", self.scorers), ("attacks", self.attacks),
                             ("node_counts", self.node_counts),
                             ("degrees", self.degrees), ("sides", self.sides),
                             ("p_at_n", self.p_at_n)):
            if not values:
                raise ConfigError(f"{name} must be non-empty")
        for s in self.scorers:
            if s not in alignment.SCORER_TAGS:
                raise ConfigError(f"unknown scorer {s!r}")
        for a in self.attacks:
            if a not in ATTACK_TAGS:
                raise ConfigError(f"unknown attack {a!r}")
        for s in self.sides:
            if s not in SIDE_TAGS:
                raise ConfigError(f"unknown side {s!r} (use '1', '2' or 'both')")
        for c in self.node_counts:
            if c < 1:
                raise ConfigError(f"node counts must be >= 1, got {c}")
        for d in self.degrees:
            if d < 1:
                raise ConfigError(f"degrees must be >= 1, got {d}")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError(f"train_fraction must be in (0, 1), got {self.train_fraction}")
        if (self.dataset is None) == (self.synthetic is None):
            raise ConfigError("configure exactly one of 'dataset' or 'synthetic'")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        dataset = data.pop("dataset", None)
        synthetic = data.pop("synthetic", None)
        kwargs = {}
        for key in ("scorers", "attacks", "sides"):
            if key in data:
                kwargs[key] = tuple(str(v).lower() for v in data.pop(key))
        for key in ("node_counts", "degrees", "p_at_n"):
            if key in data:
                kwargs[key] = tuple(int(v) for v in data.pop(key))
        for key in ("delta", "train_fraction"):
            if key in data:
                kwargs[key] = float(data.pop(key))
        for key in ("trials", "seed"):
            if key in data:
                kwargs[key] = int(data.pop(key))
        if "output" in data:
            kwargs["output"] = data.pop("output")
        if data:
            raise ConfigError(f"unknown config keys: {sorted(data)}")
        if dataset is not None:
            kwargs["dataset"] = DatasetPaths(**dataset)
        if synthetic is not None:
            kwargs["synthetic"] = SyntheticSpec(**synthetic)
        config = cls(**kwargs)
        config.validate()
        return config

    @classmethod
    def from_file(cls, path: str | Path) -> "ExperimentConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: not valid JSON: {exc}") from None
        return cls.from_dict(data)


@dataclass(frozen=True)
class ResultRow:
    dataset: str
    scorer: str
    attack: str
    nodes: int
    degree: int
    sides: str
    metric: str
    n: int | None
    mean: float
    trials: tuple[float, ...]


@dataclass
class ResultTable:
    rows: list[ResultRow] = field(default_factory=list)

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in self.rows:
            writer.writerow([r.dataset, r.scorer, r.attack, r.nodes, r.degree,
                             r.sides, r.metric, "" if r.n is None else r.n,
                             repr(r.mean),
                             ";".join(repr(v) for v in r.trials)])
        return buf.getvalue()

    @classmethod
    def from_csv_text(cls, text: str) -> "ResultTable":
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if tuple(header) != CSV_HEADER:
            raise ValueError(f"unexpected header: {header}")
        rows = []
        for rec in reader:
            if not rec:
                continue
            rows.append(ResultRow(
                dataset=rec[0], scorer=rec[1], attack=rec[2],
                nodes=int(rec[3]), degree=int(rec[4]), sides=rec[5],
                metric=rec[6], n=None if rec[7] == "" else int(rec[7]),
                mean=float(rec[8]),
                trials=tuple(float(v) for v in rec[9].split(";") if v)))
        return cls(rows=rows)

    def to_records(self) -> list[dict]:
        return [{"dataset": r.dataset, "scorer": r.scorer, "attack": r.attack,
                 "nodes": r.nodes, "degree": r.degree, "sides": r.sides,
                 "metric": r.metric, "N": r.n, "mean": r.mean,
                 "trials": list(r.trials)} for r in self.rows]

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "ResultTable":
        rows = [ResultRow(dataset=d["dataset"], scorer=d["scorer"],
                          attack=d["attack"], nodes=int(d["nodes"]),
                          degree=int(d["degree"]), sides=d["sides"],
                          metric=d["metric"],
                          n=None if d["N"] is None else int(d["N"]),
                          mean=float(d["mean"]),
                          trials=tuple(float(v) for v in d["trials"]))
                for d in records]
        return cls(rows=rows)

    def __eq__(self, other) -> bool:
        return isinstance(other, ResultTable) and self.rows == other.rows


def emit_report(table: ResultTable, path: str | Path,
                fmt: str = "tabular") -> Path:
    """Write the table as delimited text (``tabular``) or nested records
    (``structured``); both round-trip losslessly."""
    path = Path(path)
    if fmt == "tabular":
        path.write_text(table.to_csv_text(), encoding="utf-8")
    elif fmt == "structured":
        path.write_text(json.dumps({"rows": table.to_records()}, indent=2) + "\n",
                        encoding="utf-8")
    else:
        raise ValueError(f"format must be 'tabular' or 'structured', got {fmt!r}")
    return path


def load_report(path: str | Path) -> ResultTable:
    text = Path(path).read_text(encoding="utf-8")
    if text.lstrip().startswith("{"):
        return ResultTable.from_records(json.loads(text)["rows"])
    return ResultTable.from_csv_text(text)


def evaluate_instance(instance: MultiplexInstance, scorer: str,
                      n_values: Sequence[int] = (1, 5, 10, 30),
                      include_prf: bool = True) -> metrics.EvalReport:
    """Evaluate one scorer: rank metrics from frozen-pair rankings pooled
    over both query directions, set metrics from the greedy matcher."""
    if not instance.psi:
        raise ValueError("instance has no held-out pairs to evaluate")
    ranked = alignment.align(instance, scorer, mode="ranked", query_side="both")
    ranks = list(ranked.ranks1) + list(ranked.ranks2)
    p_at_n = {n: metrics.precision_at_n(ranks, n) for n in n_values}
    mp = metrics.map_score(ranks)
    auc1 = metrics.auc_score(ranked.ranks1, ranked.m_n1)
    auc2 = metrics.auc_score(ranked.ranks2, ranked.m_n2)
    m1, m2 = len(ranked.ranks1), len(ranked.ranks2)
    auc = (auc1 * m1 + auc2 * m2) / (m1 + m2)
    precision = recall = f1 = None
    if include_prf:
        greedy = alignment.align(instance, scorer, mode="greedy")
        precision, recall, f1 = metrics.precision_recall_f1(
            greedy.predicted, instance.psi)
    return metrics.EvalReport(p_at_n=p_at_n, map_score=mp, auc=auc,
                              precision=precision, recall=recall, f1=f1,
                              m=len(ranks), m_n=ranked.m_n1)


def split_budgets(total: int, sides: str) -> tuple[int, int]:
    """Per-layer link budgets for one attack cell at equal total cost."""
    if sides == "1":
        return total, 0
    if sides == "2":
        return 0, total
    half = total // 2
    return half, total - half


def apply_attack(instance: MultiplexInstance, attack: str, count: int,
                 degree: int, sides: str, seed: int,
                 delta: float = 0.5) -> MultiplexInstance:
    """Perturb an instance with one named attack at the given budget shape."""
    attack = attack.lower()
    if attack == "none":
        return instance
    total = count * degree
    if attack == "dpnia":
        b1, b2 = split_budgets(total, sides)
        return execute_dpnia(instance, b1, b2, delta=delta,
                             max_links_per_node=degree).instance
    if attack not in STRATEGY_TAGS:
        raise ConfigError(f"unknown attack {attack!r}")
    layers: list[tuple[int, int]]
    if sides == "both":
        c1 = count // 2
        c2 = count - c1
        layers = [(1, c1), (2, c2)]
    elif sides == "1":
        layers = [(1, count)]
    else:
        layers = [(2, count)]
    perturbed = instance
    for layer, layer_count in layers:
        if layer_count < 1:
            continue
        cfg = BaselineConfig(strategy=attack, count=layer_count, degree=degree,
                             seed=derive_seed(seed, attack, layer), layer=layer)
        perturbed = run_baseline(perturbed, cfg)
    return perturbed


def _load_dataset(paths: DatasetPaths):
    g1, _ = load_edge_list(paths.edges1)
    g2, _ = load_edge_list(paths.edges2)
    pool = load_interlinks(paths.interlinks, g1, g2)
    return g1, g2, pool


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Run the full factorial sweep and aggregate the per-trial values."""
    config.validate()
    if config.dataset is not None:
        dataset_name = config.dataset.name
        g1, g2, pool = _load_dataset(config.dataset)
    else:
        dataset_name = (f"synthetic-{config.synthetic.family}"
                        f"-n{config.synthetic.nodes}")
    metric_keys: list[tuple[str, int | None]] = (
        [("p@n", n) for n in config.p_at_n]
        + [("map", None), ("auc", None),
           ("precision", None), ("recall", None), ("f1", None)])
    values: dict[tuple, list[float]] = {}

    def record(scorer, attack, nodes, degree, sides, report):
        for metric, n in metric_keys:
            key = (scorer, attack, nodes, degree, sides, metric, n)
            if metric == "p@n":
                value = report.p_at_n[n]
            elif metric == "map":
                value = report.map_score
            elif metric == "auc":
                value = report.auc
            else:
                value = getattr(report, {"precision": "precision",
                                         "recall": "recall", "f1": "f1"}[metric])
            values.setdefault(key, []).append(value)

    for trial in range(config.trials):
        trial_seed = derive_seed(config.seed, "trial", trial)
        if config.synthetic is not None:
            inst_pool = generate_synthetic_multiplex(config.synthetic,
                                                     seed=config.seed + trial)
            g1t, g2t, pool = inst_pool.g1, inst_pool.g2, inst_pool.phi
        else:
            g1t, g2t = g1, g2
        phi, psi = split_interlinks(pool, config.train_fraction, trial_seed)
        instance = MultiplexInstance(g1t, g2t, phi, psi)
        unattacked = {}
        if "none" in config.attacks:
            unattacked = {s: evaluate_instance(instance, s, config.p_at_n)
                          for s in config.scorers}
        for nodes in config.node_counts:
            for degree in config.degrees:
                for sides in config.sides:
                    for attack_name in config.attacks:
                        if attack_name == "none":
                            for scorer in config.scorers:
                                record(scorer, attack_name, nodes, degree,
                                       sides, unattacked[scorer])
                            continue
                        perturbed = apply_attack(
                            instance, attack_name, nodes, degree, sides,
                            seed=derive_seed(trial_seed, attack_name, nodes,
                                             degree, sides),
                            delta=config.delta)
                        for scorer in config.scorers:
                            record(scorer, attack_name, nodes, degree, sides,
                                   evaluate_instance(perturbed, scorer,
                                                     config.p_at_n))
    rows = []
    for scorer in config.scorers:
        for attack_name in config.attacks:
            for nodes in config.node_counts:
                for degree in config.degrees:
                    for sides in config.sides:
                        for metric, n in metric_keys:
                            key = (scorer, attack_name, nodes, degree, sides,
                                   metric, n)
                            trials = tuple(values[key])
                            rows.append(ResultRow(
                                dataset=dataset_name, scorer=scorer,
                                attack=attack_name, nodes=nodes, degree=degree,
                                sides=sides, metric=metric, n=n,
                                mean=sum(trials) / len(trials), trials=trials))
    return ResultTable(rows=rows)
