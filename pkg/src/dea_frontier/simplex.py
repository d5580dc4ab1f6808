"""Dense two-phase primal simplex with Bland's rule.

Sized for DEA envelopment programs (a few dozen rows and columns).  The
solver works on the standard form ``min c.z  s.t.  A z = b, z >= 0, b >= 0``
obtained from a :class:`LinearProgram` by :func:`standard_form`.  Phase 1
starts from one artificial per row; artificial columns never re-enter the
basis once they leave it.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .model import SolverError

OPT_TOL = 1e-9      # reduced-cost optimality threshold
RATIO_TOL = 1e-9    # column entries at or below this are not ratio-test candidates
PIVOT_TOL = 1e-11   # smaller pivots are a numerical breakdown
FEAS_TOL = 1e-9     # phase-1 residual, relative to 1 + max|b|


class Sense(str, enum.Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"


class Relation(str, enum.Enum):
    LE = "<="
    EQ = "="
    GE = ">="


class Bound(str, enum.Enum):
    NONNEGATIVE = "nonnegative"
    FREE = "free"


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True, eq=False)
class Constraint:
    coefficients: np.ndarray
    relation: Relation
    rhs: float

    def __post_init__(self):
        a = np.array(self.coefficients, dtype=float).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)
        object.__setattr__(self, "relation", Relation(self.relation))
        object.__setattr__(self, "rhs", float(self.rhs))
        if not np.isfinite(self.rhs) or not np.all(np.isfinite(a)):
            raise ValueError("constraint coefficients and rhs must be finite")


@dataclass(frozen=True, eq=False)
class LinearProgram:
    """``sense`` c.x subject to ``constraints`` and per-variable ``bounds``.

    Constraints may be given as :class:`Constraint` objects or as
    ``(coefficients, relation, rhs)`` tuples.  ``bounds`` defaults to all
    variables nonnegative.  Dimension mismatches raise ``ValueError``.
    """

    sense: Sense
    objective: np.ndarray
    constraints: tuple[Constraint, ...] = ()
    bounds: tuple[Bound, ...] | None = None

    def __post_init__(self):
        c = np.array(self.objective, dtype=float).ravel()
        c.setflags(write=False)
        object.__setattr__(self, "sense", Sense(self.sense))
        object.__setattr__(self, "objective", c)
        cons = tuple(k if isinstance(k, Constraint) else Constraint(*k) for k in self.constraints)
        object.__setattr__(self, "constraints", cons)
        bounds = self.bounds
        if bounds is None:
            bounds = (Bound.NONNEGATIVE,) * c.size
        object.__setattr__(self, "bounds", tuple(Bound(b) for b in bounds))
        if c.size == 0:
            raise ValueError("linear program has no variables")
        if not np.all(np.isfinite(c)):
            raise ValueError("objective coefficients must be finite")
        if len(self.bounds) != c.size:
            raise ValueError(f"{len(self.bounds)} bounds given for {c.size} variables")
        for k, con in enumerate(cons):
            if con.coefficients.size != c.size:
                raise ValueError(
                    f"constraint {k} has {con.coefficients.size} coefficients, expected {c.size}")

    @property
    def num_variables(self) -> int:
        return self.objective.size

    def with_constraints(self, extra: Iterable) -> "LinearProgram":
        return LinearProgram(self.sense, self.objective, self.constraints + tuple(extra), self.bounds)


@dataclass(frozen=True, eq=False)
class LpSolution:
    """Solved state of a :class:`LinearProgram`.

    ``x`` is only meaningful when ``status`` is optimal.  ``basis`` and
    ``reduced_costs`` refer to columns of the program's standard form (see
    :func:`standard_form`); redundant equality rows found in phase 1 are
    dropped, so ``basis`` may be shorter than the row count.
    """

    status: Status
    x: np.ndarray | None
    objective_value: float
    basis: tuple[int, ...] = ()
    reduced_costs: np.ndarray | None = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass(frozen=True, eq=False)
class StandardForm:
    A: np.ndarray
    b: np.ndarray
    c: np.ndarray
    plus: tuple[int, ...]
    minus: tuple[int | None, ...]

    def recover(self, z: np.ndarray) -> np.ndarray:
        x = z[list(self.plus)].copy()
        for k, col in enumerate(self.minus):
            if col is not None:
                x[k] -= z[col]
        return x


def standard_form(lp: LinearProgram) -> StandardForm:
    """Translate ``lp`` into ``min c.z, A z = b, z >= 0`` with ``b >= 0``.

    Column order: original variables (a free variable contributes a plus
    column followed immediately by a minus column), then one slack or
    surplus column per inequality row in constraint order.
    """
    plus: list[int] = []
    minus: list[int | None] = []
    col = 0
    for bound in lp.bounds:
        plus.append(col)
        col += 1
        if bound is Bound.FREE:
            minus.append(col)
            col += 1
        else:
            minus.append(None)
    n_struct = col
    n_slack = sum(k.relation is not Relation.EQ for k in lp.constraints)
    rows = len(lp.constraints)
    A = np.zeros((rows, n_struct + n_slack))
    b = np.zeros(rows)
    c = np.zeros(n_struct + n_slack)
    sign = 1.0 if lp.sense is Sense.MINIMIZE else -1.0
    for k in range(lp.num_variables):
        c[plus[k]] = sign * lp.objective[k]
        if minus[k] is not None:
            c[minus[k]] = -sign * lp.objective[k]
    slack = n_struct
    for r, con in enumerate(lp.constraints):
        for k in range(lp.num_variables):
            A[r, plus[k]] = con.coefficients[k]
            if minus[k] is not None:
                A[r, minus[k]] = -con.coefficients[k]
        if con.relation is Relation.LE:
            A[r, slack] = 1.0
            slack += 1
        elif con.relation is Relation.GE:
            A[r, slack] = -1.0
            slack += 1
        b[r] = con.rhs
        if b[r] < 0:
            A[r] = -A[r]
            b[r] = -b[r]
    return StandardForm(A, b, c, tuple(plus), tuple(minus))


class _Tableau:
    """Mutable tableau state for one solve; not shared between solves."""

    def __init__(self, sf: StandardForm, max_pivots: int | None):
        rows, cols = sf.A.shape
        self.sf = sf
        self.cols = cols
        self.T = np.zeros((rows + 1, cols + rows + 1))
        self.T[:rows, :cols] = sf.A
        self.T[:rows, cols:cols + rows] = np.eye(rows)
        self.T[:rows, -1] = sf.b
        self.basis = list(range(cols, cols + rows))
        self.pivots = 0
        self.max_pivots = max_pivots if max_pivots is not None else 50 * (rows + cols) + 100

    def pivot(self, r: int, q: int) -> None:
        T = self.T
        p = T[r, q]
        if abs(p) < PIVOT_TOL:
            raise SolverError(f"pivot magnitude {abs(p):.3g} below {PIVOT_TOL:g}")
        T[r] /= p
        factors = T[:, q].copy()
        factors[r] = 0.0
        T -= np.outer(factors, T[r])
        T[:, q] = 0.0
        T[r, q] = 1.0
        rhs = T[:-1, -1]
        rhs[(rhs < 0) & (rhs > -FEAS_TOL)] = 0.0
        self.basis[r] = q
        self.pivots += 1
        if self.pivots > self.max_pivots:
            raise SolverError(f"pivot limit {self.max_pivots} exceeded")

    def iterate(self, allowed: int) -> Status:
        """Bland's rule: lowest-index improving column, lowest-index leaving variable."""
        T = self.T
        while True:
            improving = np.flatnonzero(T[-1, :allowed] < -OPT_TOL)
            if improving.size == 0:
                return Status.OPTIMAL
            q = int(improving[0])
            column = T[:-1, q]
            cand = np.flatnonzero(column > RATIO_TOL)
            if cand.size == 0:
                return Status.UNBOUNDED
            ratios = T[cand, -1] / column[cand]
            best = ratios.min()
            tied = cand[ratios <= best + 1e-12 * (1.0 + abs(best))]
            r = min(tied, key=lambda i: self.basis[i])
            self.pivot(int(r), q)

    def drive_out_artificials(self) -> None:
        r = 0
        while r < len(self.basis):
            if self.basis[r] < self.cols:
                r += 1
                continue
            row = self.T[r, :self.cols]
            usable = np.flatnonzero(np.abs(row) > RATIO_TOL)
            if usable.size:
                self.pivot(r, int(usable[0]))
                r += 1
            elif np.any(np.abs(row) > PIVOT_TOL):
                raise SolverError("ill-conditioned row while removing artificial variables")
            else:
                # redundant equality row
                self.T = np.delete(self.T, r, axis=0)
                del self.basis[r]

    def solve(self) -> LpSolution:
        sf, cols = self.sf, self.cols
        rows = len(self.basis)
        T = self.T
        T[-1, :cols] = -sf.A.sum(axis=0)
        T[-1, -1] = -sf.b.sum()
        self.iterate(allowed=cols)
        scale = 1.0 + (float(np.abs(sf.b).max()) if rows else 0.0)
        if -self.T[-1, -1] > FEAS_TOL * scale:
            return LpSolution(Status.INFEASIBLE, None, float("nan"), tuple(self.basis),
                              pivots=self.pivots)
        self.drive_out_artificials()
        self.T = np.delete(self.T, np.s_[cols:cols + rows], axis=1)
        T = self.T
        T[-1, :] = 0.0
        T[-1, :cols] = sf.c
        for r, j in enumerate(self.basis):
            T[-1] -= sf.c[j] * T[r]
        status = self.iterate(allowed=cols)
        if status is Status.UNBOUNDED:
            return LpSolution(Status.UNBOUNDED, None, float("-inf"), tuple(self.basis),
                              pivots=self.pivots)
        z = np.zeros(cols)
        for r, j in enumerate(self.basis):
            z[j] = T[r, -1]
        return LpSolution(Status.OPTIMAL, z, 0.0, tuple(self.basis),
                          reduced_costs=T[-1, :cols].copy(), pivots=self.pivots)


def solve(lp: LinearProgram, max_pivots: int | None = None) -> LpSolution:
    """Solve ``lp`` and return an optimal basic solution or the failure status.

    Raises :class:`SolverError` on numerical breakdown or if the pivot limit
    is hit; never returns a silently wrong optimum.
    """
    sf = standard_form(lp)
    raw = _Tableau(sf, max_pivots).solve()
    if raw.status is Status.UNBOUNDED:
        value = float("-inf") if lp.sense is Sense.MINIMIZE else float("inf")
        return LpSolution(raw.status, None, value, raw.basis, pivots=raw.pivots)
    if raw.status is not Status.OPTIMAL:
        return raw
    x = sf.recover(raw.x)
    for k, bound in enumerate(lp.bounds):
        if bound is Bound.NONNEGATIVE and x[k] < 0:
            x[k] = 0.0
    x.setflags(write=False)
    return LpSolution(Status.OPTIMAL, x, float(lp.objective @ x), raw.basis,
                      reduced_costs=raw.reduced_costs, pivots=raw.pivots)


def solve_second_stage(lp: LinearProgram, pinned: Sequence[tuple[int, float]],
                       max_pivots: int | None = None) -> LpSolution:
    """Fix each ``(index, value)`` pair with an equality row, then solve ``lp``.

    Intended for lexicographic objectives: the pinned values come from an
    optimal solve of a program over the same feasible set, so infeasibility
    here means the tolerances are inconsistent and is raised as
    :class:`SolverError`.
    """
    v = lp.num_variables
    extra = []
    for index, value in pinned:
        if not 0 <= index < v:
            raise ValueError(f"pinned variable {index} out of range 0..{v - 1}")
        row = np.zeros(v)
        row[index] = 1.0
        extra.append(Constraint(row, Relation.EQ, value))
    sol = solve(lp.with_constraints(extra), max_pivots=max_pivots)
    if sol.status is Status.INFEASIBLE:
        raise SolverError("second stage infeasible after pinning first-stage optimum")
    return sol
