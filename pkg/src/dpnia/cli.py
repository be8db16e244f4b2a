"""Command-line entry points.

Subcommands mirror the stages of an experiment:

* ``gen``    -- write a synthetic two-layer dataset to edge-list files.
* ``attack`` -- run a single attack and write the perturbed edge lists plus
  an auditable plan file.
* ``eval``   -- score an unattacked dataset with one or more scorers.
* ``run``    -- full configuration-driven sweep; writes the delimited
  report and, by default, figures next to it.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import alignment
from .attack import execute_dpnia, format_plan
from .baselines import STRATEGY_TAGS, BaselineConfig, run_baseline
from .figures import render_report_figures
from .graphs import (MultiplexInstance, load_edge_list, load_interlinks,
                     split_interlinks, write_edge_list, write_interlinks)
from .harness import (ATTACK_TAGS, ConfigError, ExperimentConfig, derive_seed,
                      emit_report, evaluate_instance, run_experiment,
                      split_budgets)
from .synth import FAMILIES, SyntheticSpec, generate_synthetic_multiplex


def _add_dataset_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--edges1", required=True, help="layer-1 edge list")
    parser.add_argument("--edges2", required=True, help="layer-2 edge list")
    parser.add_argument("--interlinks", required=True,
                        help="observed correspondent pairs (left label = layer 1)")
    parser.add_argument("--train-fraction", type=float, default=0.9)
    parser.add_argument("--seed", type=int, default=0)


def _load_split_instance(args) -> MultiplexInstance:
    g1, s1 = load_edge_list(args.edges1)
    g2, s2 = load_edge_list(args.edges2)
    for name, stats in (("layer 1", s1), ("layer 2", s2)):
        if stats.self_loops or stats.duplicates:
            print(f"note: {name}: dropped {stats.self_loops} self-loops, "
                  f"{stats.duplicates} duplicates", file=sys.stderr)
    pool = load_interlinks(args.interlinks, g1, g2)
    phi, psi = split_interlinks(pool, args.train_fraction, args.seed)
    return MultiplexInstance(g1, g2, phi, psi)


def _cmd_gen(args) -> int:
    spec = SyntheticSpec(family=args.family, nodes=args.nodes,
                         overlap=args.overlap, edge_noise=args.edge_noise,
                         avg_degree=args.avg_degree, seed=args.seed)
    inst = generate_synthetic_multiplex(spec)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(inst.g1, f"{prefix}_layer1.edges")
    write_edge_list(inst.g2, f"{prefix}_layer2.edges")
    # Edge-list files cannot carry isolated nodes, so pairs whose endpoint
    # lost every edge to noise are dropped from the written pool.
    kept = [(a, b) for a, b in inst.phi
            if inst.g1.degree(a) > 0 and inst.g2.degree(b) > 0]
    dropped = len(inst.phi) - len(kept)
    write_interlinks(kept, f"{prefix}.interlinks", inst.g1, inst.g2)
    print(f"wrote {prefix}_layer1.edges ({inst.g1.n} nodes, {inst.g1.m} links)")
    print(f"wrote {prefix}_layer2.edges ({inst.g2.n} nodes, {inst.g2.m} links)")
    print(f"wrote {prefix}.interlinks ({len(kept)} pairs"
          + (f", {dropped} dropped for isolated endpoints)" if dropped else ")"))
    return 0


def _cmd_attack(args) -> int:
    inst = _load_split_instance(args)
    total = args.count * args.degree
    attack = args.attack.lower()
    if attack == "dpnia":
        b1, b2 = split_budgets(total, args.side)
        outcome = execute_dpnia(inst, b1, b2, delta=args.delta,
                                max_links_per_node=args.degree)
        perturbed, plan = outcome.instance, outcome.plan
        for flag in outcome.flags:
            print(f"note: {flag}", file=sys.stderr)
        plan_text = format_plan(plan, perturbed)
        added = plan.total_cost
    else:
        layers = ([(1, args.count)] if args.side == "1"
                  else [(2, args.count)] if args.side == "2"
                  else [(1, args.count // 2), (2, args.count - args.count // 2)])
        perturbed = inst
        for layer, count in layers:
            if count < 1:
                continue
            cfg = BaselineConfig(strategy=attack, count=count,
                                 degree=args.degree,
                                 seed=derive_seed(args.seed, attack, layer),
                                 layer=layer)
            perturbed = run_baseline(perturbed, cfg)
        plan_text = ""
        added = (perturbed.g1.m - inst.g1.m) + (perturbed.g2.m - inst.g2.m)
    prefix = Path(args.out_prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    write_edge_list(perturbed.g1, f"{prefix}_layer1.edges")
    write_edge_list(perturbed.g2, f"{prefix}_layer2.edges")
    if plan_text:
        Path(f"{prefix}.plan").write_text(plan_text, encoding="utf-8")
        print(f"wrote {prefix}.plan ({len(plan_text.splitlines())} injections)")
    print(f"wrote perturbed layers under {prefix}_layer*.edges "
          f"({added} links added)")
    return 0


def _cmd_eval(args) -> int:
    inst = _load_split_instance(args)
    n_values = tuple(int(v) for v in args.p_at_n.split(","))
    for scorer in args.scorers.split(","):
        scorer = scorer.strip().lower()
        report = evaluate_instance(inst, scorer, n_values)
        parts = [f"p@{n}={report.p_at_n[n]:.4f}" for n in n_values]
        parts += [f"map={report.map_score:.4f}", f"auc={report.auc:.4f}",
                  f"precision={report.precision:.4f}",
                  f"recall={report.recall:.4f}", f"f1={report.f1:.4f}"]
        print(f"{scorer}: " + " ".join(parts))
    return 0


def _cmd_run(args) -> int:
    config = ExperimentConfig.from_file(args.config)
    if args.trials is not None:
        config.trials = args.trials
    if args.seed is not None:
        config.seed = args.seed
    if args.output is not None:
        config.output = args.output
    if args.attacks is not None:
        config.attacks = tuple(a.strip().lower() for a in args.attacks.split(","))
    if args.scorers is not None:
        config.scorers = tuple(s.strip().lower() for s in args.scorers.split(","))
    config.validate()
    table = run_experiment(config)
    out = Path(config.output or "results.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    emit_report(table, out, fmt=args.format)
    print(f"wrote {out} ({len(table.rows)} rows)")
    if args.figures:
        figdir = Path(args.figures_dir) if args.figures_dir else out.parent / (out.stem + "_figures")
        paths = render_report_figures(table, figdir)
        print(f"wrote {len(paths)} figures under {figdir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dpnia",
        description="Node-injection attacks on structural network alignment")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate a synthetic two-layer dataset")
    p_gen.add_argument("--family", choices=FAMILIES, default="pa")
    p_gen.add_argument("--nodes", type=int, default=500)
    p_gen.add_argument("--overlap", type=float, default=0.8)
    p_gen.add_argument("--edge-noise", type=float, default=0.1)
    p_gen.add_argument("--avg-degree", type=float, default=8.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out-prefix", required=True)
    p_gen.set_defaults(func=_cmd_gen)

    p_attack = sub.add_parser("attack", help="run one attack, write perturbed layers")
    _add_dataset_args(p_attack)
    p_attack.add_argument("--attack", required=True,
                          choices=[t for t in ATTACK_TAGS if t != "none"])
    p_attack.add_argument("--count", type=int, default=4,
                          help="injected node count (total across sides)")
    p_attack.add_argument("--degree", type=int, default=50,
                          help="links per injected node")
    p_attack.add_argument("--side", choices=("1", "2", "both"), default="2")
    p_attack.add_argument("--delta", type=float, default=0.5)
    p_attack.add_argument("--out-prefix", required=True)
    p_attack.set_defaults(func=_cmd_attack)

    p_eval = sub.add_parser("eval", help="evaluate scorers on a dataset")
    _add_dataset_args(p_eval)
    p_eval.add_argument("--scorers", default="cn,frui,idp")
    p_eval.add_argument("--p-at-n", default="1,5,10,30")
    p_eval.set_defaults(func=_cmd_eval)

    p_run = sub.add_parser("run", help="run a configured experiment sweep")
    p_run.add_argument("--config", required=True, help="JSON config file")
    p_run.add_argument("--trials", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--output")
    p_run.add_argument("--attacks", help="comma-separated override")
    p_run.add_argument("--scorers", help="comma-separated override")
    p_run.add_argument("--format", choices=("tabular", "structured"),
                       default="tabular")
    p_run.add_argument("--figures", dest="figures", action="store_true",
                       default=True)
    p_run.add_argument("--no-figures", dest="figures", action="store_false")
    p_run.add_argument("--figures-dir")
    p_run.set_defaults(func=_cmd_run)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
