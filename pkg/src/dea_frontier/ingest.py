"""CSV ingestion and JSON / CSV / table report rendering."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from .dea import PEER_THRESHOLD, ScaleEfficiency
from .model import (ComparisonReport, DataError, DeaError, Dataset, EvaluationResult,
                    ShortRunOutcome, validate)
from .shortrun import slack_based_index


class ParseError(DeaError):
    """Malformed CSV content; the message carries row and column."""


class MissingColumnError(ParseError):
    pass


@dataclass(frozen=True)
class ColumnRoleConfig:
    input_columns: tuple[str, ...]
    output_columns: tuple[str, ...]
    capital_columns: tuple[str, ...] = ()
    id_column: str = "id"

    def __post_init__(self):
        for name in ("input_columns", "output_columns", "capital_columns"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.input_columns:
            raise ValueError("at least one input column is required")
        if not self.output_columns:
            raise ValueError("at least one output column is required")
        names = [self.id_column, *self.input_columns, *self.output_columns]
        if len(set(names)) != len(names):
            raise ValueError("id, input and output column names must be distinct")
        if len(set(self.capital_columns)) != len(self.capital_columns):
            raise ValueError("capital columns contain duplicates")
        stray = [c for c in self.capital_columns if c not in self.input_columns]
        if stray:
            raise ValueError(f"capital columns {stray} are not input columns")

    @classmethod
    def for_dataset(cls, dataset: Dataset, id_column: str = "id") -> "ColumnRoleConfig":
        return cls(dataset.input_names, dataset.output_names, dataset.capital_names, id_column)


def parse_csv(source: str | TextIO, config: ColumnRoleConfig) -> Dataset:
    """Read a header-first CSV into a validated :class:`Dataset`.

    Columns are picked by name; extra columns are ignored.  Row numbers in
    error messages count the header as row 1.
    """
    text = source if isinstance(source, str) else source.read()
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file: a header row is required") from None
    header = [h.strip() for h in header]
    if header and header[0].startswith("\ufeff"):
        header[0] = header[0][1:]
    wanted = [config.id_column, *config.input_columns, *config.output_columns]
    missing = [c for c in wanted if c not in header]
    if missing:
        raise MissingColumnError(f"missing column(s): {', '.join(missing)}")
    pos = {name: header.index(name) for name in wanted}

    ids: list[str] = []
    x_rows, y_rows = [], []
    for lineno, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(header):
            raise ParseError(f"row {lineno}: expected {len(header)} fields, found {len(row)}")
        unit = row[pos[config.id_column]].strip()
        if unit in ids:
            raise ParseError(f"row {lineno}: duplicate unit id {unit!r}")
        ids.append(unit)

        def number(col: str) -> float:
            cell = row[pos[col]].strip()
            try:
                return float(cell)
            except ValueError:
                raise ParseError(f"row {lineno}, column {col!r}: {cell!r} is not a number") from None

        x_rows.append([number(c) for c in config.input_columns])
        y_rows.append([number(c) for c in config.output_columns])
    if not ids:
        raise ParseError("file has a header but no data rows")

    dataset = Dataset(ids, config.input_columns, config.output_columns, x_rows, y_rows,
                      [config.input_columns.index(c) for c in config.capital_columns])
    violations = validate(dataset)
    if violations:
        raise DataError(violations)
    return dataset


def dataset_to_csv(dataset: Dataset, id_column: str = "id") -> str:
    """Render ``dataset`` so that :func:`parse_csv` reads it back unchanged."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([id_column, *dataset.input_names, *dataset.output_names])
    for j, name in enumerate(dataset.unit_names):
        w.writerow([name, *map(repr, dataset.inputs[j].tolist()),
                    *map(repr, dataset.outputs[j].tolist())])
    return buf.getvalue()


# --- reports ---------------------------------------------------------------

def _num(v) -> str:
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return "null"
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    text = f"{float(v):.6f}"
    return "0.000000" if text == "-0.000000" else text


def _dump(obj, indent: int = 0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, str) for v in obj):
            return "[" + ", ".join(json.dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    return _num(obj)


def _result_fields(result: EvaluationResult, dataset: Dataset) -> dict:
    return {
        "theta": result.theta,
        "lambdas": {dataset.unit_names[j]: float(result.lambdas[j])
                    for j in np.flatnonzero(result.lambdas > PEER_THRESHOLD)},
        "input_slacks": dict(zip(dataset.input_names, result.input_slacks.tolist())),
        "output_slacks": dict(zip(dataset.output_names, result.output_slacks.tolist())),
    }


def _names(dataset: Dataset, units: Iterable[int]) -> list[str]:
    return [dataset.unit_names[j] for j in sorted(units)]


def report_rows(report, dataset: Dataset) -> list[dict]:
    """One plain dict per unit, shared by every output format.

    ``report`` is a :class:`ComparisonReport` or a list of
    :class:`EvaluationResult`, :class:`ShortRunOutcome` or
    :class:`ScaleEfficiency` objects.
    """
    items = list(report.entries if isinstance(report, ComparisonReport) else report)
    rows = []
    for item in items:
        row = {"unit": dataset.unit_names[item.unit]}
        if isinstance(item, ScaleEfficiency):
            row.update(theta_crs=item.theta_crs, theta_vrs=item.theta_vrs,
                       scale_efficiency=item.ratio)
            rows.append(row)
            continue
        long_rho = short_rho = gap = iterations = excluded = None
        if isinstance(item, EvaluationResult):
            result = item
            if result.theta is None:
                long_rho = slack_based_index(result, dataset)
        elif isinstance(item, ShortRunOutcome):
            result = item.result
            short_rho = slack_based_index(result, dataset)
            iterations = item.iterations
            excluded = [_names(dataset, e) for e in item.excluded]
        else:
            result = item.short_result
            long_rho, short_rho, gap = item.long_run_index, item.short_run_index, item.gap
            iterations = item.short_outcome.iterations
            excluded = [_names(dataset, e) for e in item.short_outcome.excluded]
        row.update(_result_fields(result, dataset))
        row.update(rho_long=long_rho, rho_short=short_rho, gap=gap,
                   iterations=iterations, excluded=excluded)
        if not isinstance(item, (EvaluationResult, ShortRunOutcome)):
            row["long_run"] = _result_fields(item.long_result, dataset)
        rows.append(row)
    return rows


def write_report(report, fmt: str, dataset: Dataset, model: str = "additive",
                 rts: str = "crs") -> str:
    """Render ``report`` as ``json``, ``csv`` or ``table`` text.

    Output depends only on the inputs: keys keep a fixed order and every
    real number is printed with six decimals.
    """
    rows = report_rows(report, dataset)
    if fmt == "json":
        return _dump({"model": model, "rts": rts, "units": rows}) + "\n"
    if fmt == "csv":
        return _to_csv(rows, dataset)
    if fmt == "table":
        return _to_table(rows, dataset)
    raise ValueError(f"unknown report format {fmt!r}")


_SCALARS = ("theta", "rho_long", "rho_short", "gap", "iterations")


def _flat(rows: Sequence[dict], dataset: Dataset) -> tuple[list[str], list[list]]:
    if rows and "scale_efficiency" in rows[0]:
        cols = ["unit", "theta_crs", "theta_vrs", "scale_efficiency"]
        return cols, [[r[c] for c in cols] for r in rows]
    cols = ["unit", *_SCALARS, "excluded"]
    cols += [f"lambda_{u}" for u in dataset.unit_names]
    cols += [f"slack_{c}" for c in (*dataset.input_names, *dataset.output_names)]
    out = []
    for r in rows:
        slacks = {**r["input_slacks"], **r["output_slacks"]}
        excluded = None if r["excluded"] is None else "|".join(";".join(e) for e in r["excluded"])
        out.append([r["unit"], *(r[c] for c in _SCALARS), excluded,
                    *(r["lambdas"].get(u, 0.0) for u in dataset.unit_names),
                    *(slacks[c] for c in (*dataset.input_names, *dataset.output_names))])
    return cols, out


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return _num(v)


def _to_csv(rows, dataset) -> str:
    cols, data = _flat(rows, dataset)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in data:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def _to_table(rows, dataset) -> str:
    cols, data = _flat(rows, dataset)
    # drop columns that are empty for every unit
    keep = [k for k, c in enumerate(cols) if k == 0 or any(r[k] is not None for r in data)]
    cols = [cols[k].replace("lambda_", "L_") for k in keep]
    cells = [[_cell(r[k]) for k in keep] for r in data]
    widths = [max([len(c)] + [len(r[k]) for r in cells]) for k, c in enumerate(cols)]
    lines = ["  ".join(c.ljust(w) if k == 0 else c.rjust(w)
                       for k, (c, w) in enumerate(zip(cols, widths))).rstrip()]
    for r in cells:
        lines.append("  ".join(v.ljust(w) if k == 0 else v.rjust(w)
                               for k, (v, w) in enumerate(zip(r, widths))).rstrip())
    return "\n".join(lines) + "\n"
