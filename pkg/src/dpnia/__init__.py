"""Node-injection attacks and an evaluation harness for structural
social-network alignment."""

from .alignment import (MatchResult, RankedCandidates, align,
                        common_matched_neighbors, matched_neighbors,
                        rank_candidates, score_cn, score_frui, score_idp,
                        score_matrix)
from .attack import (AttackPlan, CmnMatrix, DpniaOutcome, LayerVectors,
                     PlanStep, TargetSet, apply_plan, build_vectors,
                     cmn_matrix, dp_search, execute_dpnia, format_plan,
                     parse_plan, per_node_budget, set_cmn, vulnerability)
from .baselines import BaselineConfig, run_baseline
from .graphs import (BudgetExceededError, EdgeListParseError, InjectionLedger,
                     InterlinkError, LoadStats, MultiplexInstance,
                     SocialNetwork, inject_node, load_edge_list,
                     load_interlinks, split_interlinks, write_edge_list,
                     write_interlinks)
from .harness import (DatasetPaths, ExperimentConfig, ResultRow, ResultTable,
                      emit_report, evaluate_instance, load_report,
                      run_experiment)
from .metrics import (EvalReport, auc_score, map_score, precision_at_n,
                      precision_recall_f1)
from .synth import SyntheticSpec, generate_synthetic_multiplex

__version__ = "0.1.0"
