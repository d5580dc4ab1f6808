"""Domain types shared by the solvers and the I/O layer."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

TOL = 1e-7


class DeaError(Exception):
    """Base class for every error raised by this package."""


class DataError(DeaError):
    """The dataset violates one or more invariants."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        super().__init__("; ".join(v.message for v in self.violations))


class SolverError(DeaError):
    """The LP solver could not produce a trustworthy answer."""


class RTS(str, enum.Enum):
    CRS = "crs"
    VRS = "vrs"


class Form(str, enum.Enum):
    RADIAL = "radial"
    RADIAL_ND = "radial-nd"
    ADDITIVE = "additive"


@dataclass(frozen=True)
class Violation:
    rule: str
    message: str
    unit: int | None = None
    column: str | None = None


def _frozen_matrix(values, ncols: int) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.size == 0:
        arr = arr.reshape(0, ncols)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Dataset:
    """Observed inputs and outputs of ``n`` decision-making units.

    ``inputs`` is ``n x m`` and ``outputs`` is ``n x s``.  ``capital_inputs``
    holds the indices of the input columns that are fixed in the short run.
    The arrays are copied and made read-only on construction.
    """

    unit_names: tuple[str, ...]
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]
    inputs: np.ndarray
    outputs: np.ndarray
    capital_inputs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "unit_names", tuple(self.unit_names))
        object.__setattr__(self, "input_names", tuple(self.input_names))
        object.__setattr__(self, "output_names", tuple(self.output_names))
        object.__setattr__(self, "inputs", _frozen_matrix(self.inputs, len(self.input_names)))
        object.__setattr__(self, "outputs", _frozen_matrix(self.outputs, len(self.output_names)))
        object.__setattr__(self, "capital_inputs", tuple(int(i) for i in self.capital_inputs))

    @property
    def n(self) -> int:
        return len(self.unit_names)

    @property
    def m(self) -> int:
        return len(self.input_names)

    @property
    def s(self) -> int:
        return len(self.output_names)

    @property
    def capital_names(self) -> tuple[str, ...]:
        return tuple(self.input_names[i] for i in self.capital_inputs)

    def unit_index(self, name: str) -> int:
        return self.unit_names.index(name)

    def replace_rows(self, rows: Sequence[int], inputs, outputs) -> "Dataset":
        """Copy with the given rows overwritten by ``inputs`` / ``outputs``."""
        new_x = np.array(self.inputs)
        new_y = np.array(self.outputs)
        for r in rows:
            new_x[r] = inputs
            new_y[r] = outputs
        return Dataset(self.unit_names, self.input_names, self.output_names,
                       new_x, new_y, self.capital_inputs)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (self.unit_names == other.unit_names
                and self.input_names == other.input_names
                and self.output_names == other.output_names
                and self.capital_inputs == other.capital_inputs
                and np.array_equal(self.inputs, other.inputs)
                and np.array_equal(self.outputs, other.outputs))

    __hash__ = None


def validate(dataset: Dataset) -> list[Violation]:
    """Return one :class:`Violation` per broken dataset invariant.

    An empty list means the dataset can be handed to any evaluator.
    """
    out: list[Violation] = []
    n, m, s = dataset.n, dataset.m, dataset.s
    if n < 1:
        out.append(Violation("size", "dataset has no units"))
    if m < 1:
        out.append(Violation("size", "dataset has no input columns"))
    if s < 1:
        out.append(Violation("size", "dataset has no output columns"))
    x, y = dataset.inputs, dataset.outputs
    if x.shape != (n, m):
        out.append(Violation("shape", f"inputs have shape {x.shape}, expected {(n, m)}"))
    if y.shape != (n, s):
        out.append(Violation("shape", f"outputs have shape {y.shape}, expected {(n, s)}"))
    if out:
        return out

    for names, kind in ((dataset.unit_names, "unit"), (dataset.input_names, "input"),
                        (dataset.output_names, "output")):
        dupes = sorted({v for v in names if names.count(v) > 1})
        for d in dupes:
            out.append(Violation("duplicate", f"duplicate {kind} name {d!r}"))

    for matrix, names in ((x, dataset.input_names), (y, dataset.output_names)):
        for j, i in zip(*np.nonzero(~np.isfinite(matrix) | (matrix < 0))):
            unit = dataset.unit_names[j]
            out.append(Violation(
                "nonnegative",
                f"unit {unit!r}, column {names[i]!r}: value {matrix[j, i]!r} is not a finite nonnegative number",
                unit=int(j), column=names[i]))

    with np.errstate(invalid="ignore"):
        no_output = ~np.any(y > 0, axis=1)
    for j in np.flatnonzero(no_output):
        out.append(Violation("positive-output",
                             f"unit {dataset.unit_names[j]!r} has no strictly positive output",
                             unit=int(j)))

    cap = dataset.capital_inputs
    if len(set(cap)) != len(cap):
        out.append(Violation("capital", "capital input indices contain duplicates"))
    for i in cap:
        if not 0 <= i < m:
            out.append(Violation("capital", f"capital input index {i} out of range 0..{m - 1}"))
    return out


@dataclass(frozen=True)
class ModelSpec:
    form: Form = Form.ADDITIVE
    rts: RTS = RTS.CRS
    nd_inputs: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "form", Form(self.form))
        object.__setattr__(self, "rts", RTS(self.rts))
        object.__setattr__(self, "nd_inputs", tuple(self.nd_inputs))
        if self.form is Form.RADIAL_ND:
            if not self.nd_inputs:
                raise ValueError("radial-nd needs at least one non-discretionary input")
            if self.rts is RTS.VRS:
                raise ValueError("radial-nd is only defined under constant returns to scale")

    def check(self, m: int) -> None:
        """Raise ``ValueError`` if this model cannot be applied to ``m`` inputs."""
        if self.form is Form.RADIAL_ND:
            check_nd_inputs(self.nd_inputs, m)


def check_nd_inputs(nd_inputs: Sequence[int], m: int) -> None:
    nd = set(nd_inputs)
    if len(nd) != len(nd_inputs):
        raise ValueError("non-discretionary inputs contain duplicates")
    if any(not 0 <= i < m for i in nd):
        raise ValueError(f"non-discretionary input index out of range 0..{m - 1}")
    if len(nd) >= m:
        raise ValueError("at least one input must remain discretionary")


def _clamped(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr[(arr < 0) & (arr >= -TOL)] = 0.0
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class EvaluationResult:
    """Optimal intensities and slacks of one evaluated unit.

    ``theta`` is the radial score and is ``None`` for the additive model.
    ``objective`` is the form-specific optimum: the radial score for radial
    models, the maximal slack sum for the additive model.
    """

    unit: int
    theta: float | None
    lambdas: np.ndarray
    input_slacks: np.ndarray
    output_slacks: np.ndarray
    objective: float

    def __post_init__(self):
        object.__setattr__(self, "lambdas", _clamped(self.lambdas))
        object.__setattr__(self, "input_slacks", _clamped(self.input_slacks))
        object.__setattr__(self, "output_slacks", _clamped(self.output_slacks))

    @property
    def slack_sum(self) -> float:
        return float(self.input_slacks.sum() + self.output_slacks.sum())

    def __eq__(self, other):
        if not isinstance(other, EvaluationResult):
            return NotImplemented
        return (self.unit == other.unit and self.theta == other.theta
                and self.objective == other.objective
                and np.array_equal(self.lambdas, other.lambdas)
                and np.array_equal(self.input_slacks, other.input_slacks)
                and np.array_equal(self.output_slacks, other.output_slacks))

    __hash__ = None


@dataclass(frozen=True)
class ShortRunOutcome:
    """Result of the short-run peer-exclusion loop for one unit.

    ``excluded`` holds the units worsened in each iteration that did not
    stop the loop, so ``len(excluded) == iterations - 1``.
    """

    unit: int
    result: EvaluationResult
    excluded: tuple[frozenset[int], ...] = ()
    iterations: int = 1

    @property
    def all_excluded(self) -> frozenset[int]:
        return frozenset().union(*self.excluded)


@dataclass(frozen=True)
class ComparisonEntry:
    unit: int
    long_run_index: float
    short_run_index: float
    long_result: EvaluationResult
    short_outcome: ShortRunOutcome

    @property
    def gap(self) -> float:
        return self.long_run_index - self.short_run_index

    @property
    def short_result(self) -> EvaluationResult:
        return self.short_outcome.result


@dataclass(frozen=True)
class ComparisonReport:
    entries: tuple[ComparisonEntry, ...] = field(default_factory=tuple)

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, unit: int) -> ComparisonEntry:
        return self.entries[unit]
