"""Long-run and short-run efficient frontiers by Data Envelopment Analysis.

Capital inputs are free to adjust in the long run and fixed in the short
run.  The long-run frontier is the additive CRS model; the short-run one is
obtained per unit by excluding the peers that make capital slack appear.
"""

from .dea import (PEER_THRESHOLD, ScaleEfficiency, eval_additive, eval_radial, eval_radial_nd,
                  evaluate, evaluate_all, peers, replay_residual, scale_decomposition,
                  scale_efficiency)
from .ingest import (ColumnRoleConfig, MissingColumnError, ParseError, dataset_to_csv,
                     parse_csv, write_report)
from .model import (RTS, TOL, ComparisonEntry, ComparisonReport, DataError, Dataset, DeaError,
                    EvaluationResult, Form, ModelSpec, ShortRunOutcome, SolverError, Violation,
                    validate)
from .shortrun import (CAPITAL_SLACK_TOL, DegenerateSolutionError, DivergenceError,
                       ShortRunError, UndefinedIndexError, ZeroInputWarning, compare_short_long,
                       short_run_evaluate, short_run_frontier, slack_based_index, worsen_rows)

__version__ = "0.1.0"
