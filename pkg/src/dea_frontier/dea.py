"""Input-oriented envelopment models: radial, radial with fixed inputs, additive.

Every evaluator builds one LP per evaluated unit against the full reference
set (the evaluated unit's own column included).  Variable layout:

* radial:   ``[theta, lambda_1..n, s-_1..m, s+_1..s]``
* additive: ``[lambda_1..n, s-_1..m, s+_1..s]``
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import (RTS, Dataset, EvaluationResult, Form, ModelSpec, SolverError,
                    check_nd_inputs)
from .simplex import LinearProgram, Relation, Sense, Status, solve, solve_second_stage

PEER_THRESHOLD = 1e-6


def _check_unit(dataset: Dataset, unit: int) -> None:
    if not 0 <= unit < dataset.n:
        raise IndexError(f"unit {unit} out of range 0..{dataset.n - 1}")


def _envelopment_rows(dataset: Dataset, unit: int, rts: RTS, offset: int, width: int,
                      theta_rows: Iterable[int] = ()):
    """Constraint rows shared by every model, ``offset`` = index of lambda_1."""
    n, m, s = dataset.n, dataset.m, dataset.s
    x, y = dataset.inputs, dataset.outputs
    theta_rows = set(theta_rows)
    rows = []
    for i in range(m):
        a = np.zeros(width)
        a[offset:offset + n] = x[:, i]
        a[offset + n + i] = 1.0
        if i in theta_rows:
            a[0] = -x[unit, i]
            rows.append((a, Relation.EQ, 0.0))
        else:
            rows.append((a, Relation.EQ, x[unit, i]))
    for r in range(s):
        a = np.zeros(width)
        a[offset:offset + n] = y[:, r]
        a[offset + n + m + r] = -1.0
        rows.append((a, Relation.EQ, y[unit, r]))
    if rts is RTS.VRS:
        a = np.zeros(width)
        a[offset:offset + n] = 1.0
        rows.append((a, Relation.EQ, 1.0))
    return rows


def _radial(dataset: Dataset, unit: int, rts: RTS, nd: tuple[int, ...]) -> EvaluationResult:
    _check_unit(dataset, unit)
    n, m, s = dataset.n, dataset.m, dataset.s
    width = 1 + n + m + s
    discretionary = [i for i in range(m) if i not in nd]
    cons = _envelopment_rows(dataset, unit, rts, 1, width, theta_rows=discretionary)

    c1 = np.zeros(width)
    c1[0] = 1.0
    first = solve(LinearProgram(Sense.MINIMIZE, c1, cons))
    if first.status is not Status.OPTIMAL:
        raise SolverError(
            f"radial model for unit {dataset.unit_names[unit]!r} is {first.status.value}")
    theta = float(first.x[0])

    c2 = np.zeros(width)
    for i in discretionary:
        c2[1 + n + i] = 1.0
    c2[1 + n + m:] = 1.0
    second = solve_second_stage(LinearProgram(Sense.MAXIMIZE, c2, cons), [(0, theta)])
    if second.status is not Status.OPTIMAL:
        raise SolverError(
            f"slack stage for unit {dataset.unit_names[unit]!r} is {second.status.value}")
    z = second.x
    return EvaluationResult(unit, theta, z[1:1 + n], z[1 + n:1 + n + m], z[1 + n + m:], theta)


def eval_radial(dataset: Dataset, unit: int, rts: RTS = RTS.CRS) -> EvaluationResult:
    """Radial input contraction score with a second stage that maximizes slacks.

    Stage 1 minimizes ``theta``; stage 2 pins it and maximizes the sum of all
    input and output slacks.
    """
    return _radial(dataset, unit, RTS(rts), ())


def eval_radial_nd(dataset: Dataset, unit: int, nd_inputs: Iterable[int]) -> EvaluationResult:
    """Radial CRS score contracting only the discretionary inputs.

    Rows of ``nd_inputs`` keep their observed level on the right-hand side and
    their slacks are left out of the stage-2 objective (they are still
    reported).  An empty ``nd_inputs`` reproduces :func:`eval_radial` at CRS.
    """
    nd = tuple(nd_inputs)
    if nd:
        check_nd_inputs(nd, dataset.m)
    return _radial(dataset, unit, RTS.CRS, nd)


def eval_additive(dataset: Dataset, unit: int, rts: RTS = RTS.CRS) -> EvaluationResult:
    """Additive model: maximize the plain sum of input and output slacks."""
    _check_unit(dataset, unit)
    rts = RTS(rts)
    n, m, s = dataset.n, dataset.m, dataset.s
    width = n + m + s
    cons = _envelopment_rows(dataset, unit, rts, 0, width)
    c = np.zeros(width)
    c[n:] = 1.0
    sol = solve(LinearProgram(Sense.MAXIMIZE, c, cons))
    if sol.status is not Status.OPTIMAL:
        raise SolverError(
            f"additive model for unit {dataset.unit_names[unit]!r} is {sol.status.value}")
    z = sol.x
    return EvaluationResult(unit, None, z[:n], z[n:n + m], z[n + m:], sol.objective_value)


def evaluate(dataset: Dataset, unit: int, spec: ModelSpec) -> EvaluationResult:
    spec.check(dataset.m)
    if spec.form is Form.ADDITIVE:
        return eval_additive(dataset, unit, spec.rts)
    if spec.form is Form.RADIAL_ND:
        return eval_radial_nd(dataset, unit, spec.nd_inputs)
    return eval_radial(dataset, unit, spec.rts)


def evaluate_all(dataset: Dataset, spec: ModelSpec) -> list[EvaluationResult]:
    return [evaluate(dataset, j, spec) for j in range(dataset.n)]


def peers(result: EvaluationResult, threshold: float = PEER_THRESHOLD) -> frozenset[int]:
    """Units carrying an intensity weight above ``threshold``.

    When the LP has several optima the peer set is the one of the basic
    solution the solver lands on, which is deterministic but not unique.
    """
    if threshold <= 0:
        raise ValueError("peer threshold must be positive")
    return frozenset(int(j) for j in np.flatnonzero(result.lambdas > threshold))


@dataclass(frozen=True)
class ScaleEfficiency:
    unit: int
    theta_crs: float
    theta_vrs: float

    @property
    def ratio(self) -> float:
        return self.theta_crs / self.theta_vrs


def scale_decomposition(dataset: Dataset, unit: int) -> ScaleEfficiency:
    crs = eval_radial(dataset, unit, RTS.CRS)
    vrs = eval_radial(dataset, unit, RTS.VRS)
    return ScaleEfficiency(unit, crs.theta, vrs.theta)


def scale_efficiency(dataset: Dataset, unit: int) -> float:
    """CRS score over VRS score; 1 means the unit operates at efficient scale."""
    return scale_decomposition(dataset, unit).ratio


def replay_residual(dataset: Dataset, result: EvaluationResult, rts: RTS = RTS.CRS,
                    nd_inputs: Iterable[int] = ()) -> float:
    """Largest violation of the envelopment constraints by ``result``.

    Covers equality residuals, negativity of lambdas and slacks, and the
    convexity row under VRS.  ``theta`` of ``None`` (additive) counts as 1.
    """
    j0 = result.unit
    theta = 1.0 if result.theta is None else result.theta
    nd = set(nd_inputs)
    x, y = dataset.inputs, dataset.outputs
    lam = result.lambdas
    scale_in = np.array([1.0 if i in nd else theta for i in range(dataset.m)])
    worst = [
        np.abs(x.T @ lam + result.input_slacks - scale_in * x[j0]).max(initial=0.0),
        np.abs(y.T @ lam - result.output_slacks - y[j0]).max(initial=0.0),
        max(0.0, -lam.min(initial=0.0)),
        max(0.0, -result.input_slacks.min(initial=0.0)),
        max(0.0, -result.output_slacks.min(initial=0.0)),
    ]
    if RTS(rts) is RTS.VRS:
        worst.append(abs(lam.sum() - 1.0))
    return float(max(worst))

