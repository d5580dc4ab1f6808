"""Short-run frontiers with capital held fixed, and short/long-run comparison.

The long-run frontier is the additive CRS model with capital treated like
any other input.  For the short run, a unit that shows slack on a capital
input is being benchmarked against peers that use less capital than it can
dispose of.  Those peers are pushed off the frontier by overwriting their
rows with the worst observed values (largest input, smallest output per
column) and the additive model is re-solved, until the capital slack
vanishes.
"""

from __future__ import annotations

import logging
import warnings
from typing import Iterable

import numpy as np

from .dea import PEER_THRESHOLD, eval_additive, peers
from .model import (ComparisonEntry, ComparisonReport, DeaError, Dataset, EvaluationResult,
                    ShortRunOutcome)

log = logging.getLogger(__name__)

CAPITAL_SLACK_TOL = 1e-6


class DivergenceError(DeaError):
    """The exclusion loop ran for more iterations than there are units."""


class DegenerateSolutionError(DeaError):
    """Capital slack persists but there is no new peer left to exclude."""


class UndefinedIndexError(DeaError):
    """The slack-based index has no input term to average."""


class ShortRunError(DeaError):
    """One or more units failed during a whole-frontier run."""

    def __init__(self, failures: list[tuple[str, Exception]]):
        self.failures = failures
        super().__init__("; ".join(f"unit {name!r}: {exc}" for name, exc in failures))


class ZeroInputWarning(UserWarning):
    pass


def worsen_rows(dataset: Dataset, targets: Iterable[int], baseline: Dataset) -> Dataset:
    """Overwrite each target row with the baseline's column-wise worst values.

    Inputs become the per-column maxima and outputs the per-column minima of
    ``baseline``.  Other rows are copied unchanged.
    """
    targets = sorted(set(targets))
    if not targets:
        raise ValueError("no rows to worsen")
    for t in targets:
        if not 0 <= t < dataset.n:
            raise IndexError(f"unit {t} out of range 0..{dataset.n - 1}")
    return dataset.replace_rows(targets, baseline.inputs.max(axis=0), baseline.outputs.min(axis=0))


def short_run_evaluate(dataset: Dataset, unit: int, *,
                       peer_threshold: float = PEER_THRESHOLD,
                       capital_tol: float = CAPITAL_SLACK_TOL) -> ShortRunOutcome:
    """Run the peer-exclusion loop for one unit.

    The evaluated unit itself is never worsened, so ``lambda_self = 1`` stays
    feasible at every iteration.  Peers already worsened in an earlier
    iteration are not counted as new exclusions.
    """
    capital = dataset.capital_inputs
    if not capital:
        raise ValueError("the dataset designates no capital input")
    if not 0 <= unit < dataset.n:
        raise IndexError(f"unit {unit} out of range 0..{dataset.n - 1}")

    working = dataset
    excluded: list[frozenset[int]] = []
    seen: set[int] = set()
    while True:
        iterations = len(excluded) + 1
        if iterations > dataset.n:
            raise DivergenceError(
                f"unit {dataset.unit_names[unit]!r}: no convergence within {dataset.n} iterations")
        result = eval_additive(working, unit)
        if all(result.input_slacks[k] <= capital_tol for k in capital):
            return ShortRunOutcome(unit, result, tuple(excluded), iterations)
        new = peers(result, peer_threshold) - {unit} - seen
        if not new:
            raise DegenerateSolutionError(
                f"unit {dataset.unit_names[unit]!r}: capital slack "
                f"{result.input_slacks[list(capital)].max():.3g} with no new peer to exclude")
        log.debug("unit %s iteration %d excludes rows %s", dataset.unit_names[unit], iterations,
                  sorted(new))
        excluded.append(frozenset(new))
        seen |= new
        working = worsen_rows(working, new, dataset)


def short_run_frontier(dataset: Dataset, **kwargs) -> list[ShortRunOutcome]:
    """Short-run outcome of every unit, each started from the untouched dataset."""
    outcomes: list[ShortRunOutcome] = []
    failures: list[tuple[str, Exception]] = []
    for j in range(dataset.n):
        try:
            outcomes.append(short_run_evaluate(dataset, j, **kwargs))
        except DeaError as exc:
            failures.append((dataset.unit_names[j], exc))
    if failures:
        raise ShortRunError(failures)
    return outcomes


def slack_based_index(result: EvaluationResult, dataset: Dataset) -> float:
    """Slacks-based efficiency index of ``result`` at its reported slacks.

    ``(1 - mean_i(s-_i / x_i0)) / (1 + mean_r(s+_r / y_r0))``.  Inputs and
    outputs observed at zero are left out of their mean with a
    :class:`ZeroInputWarning`.
    """
    x0 = dataset.inputs[result.unit]
    y0 = dataset.outputs[result.unit]
    pos_x = x0 > 0
    pos_y = y0 > 0
    if not pos_x.any():
        raise UndefinedIndexError(
            f"unit {dataset.unit_names[result.unit]!r} has every input equal to zero")
    if not pos_x.all() or not pos_y.all():
        zero = [dataset.input_names[i] for i in np.flatnonzero(~pos_x)]
        zero += [dataset.output_names[r] for r in np.flatnonzero(~pos_y)]
        warnings.warn(f"unit {dataset.unit_names[result.unit]!r}: zero-valued columns "
                      f"{zero} left out of the slack-based index", ZeroInputWarning, stacklevel=2)
    num = 1.0 - float(np.mean(result.input_slacks[pos_x] / x0[pos_x]))
    den = 1.0 + (float(np.mean(result.output_slacks[pos_y] / y0[pos_y])) if pos_y.any() else 0.0)
    return num / den


def compare_short_long(dataset: Dataset, **kwargs) -> ComparisonReport:
    """Long-run additive vs short-run slack-based index for every unit."""
    shorts = short_run_frontier(dataset, **kwargs)
    entries = []
    for j, short in enumerate(shorts):
        long = eval_additive(dataset, j)
        entries.append(ComparisonEntry(
            unit=j,
            long_run_index=slack_based_index(long, dataset),
            short_run_index=slack_based_index(short.result, dataset),
            long_result=long,
            short_outcome=short,
        ))
    return ComparisonReport(tuple(entries))
