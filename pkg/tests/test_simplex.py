from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dea_frontier import SolverError
from dea_frontier.simplex import (Bound, Constraint, LinearProgram, Relation, Sense, Status,
                                  solve, solve_second_stage, standard_form)

from .oracles import lp_by_vertices


def random_box_lp(rng, box=10.0):
    v = int(rng.integers(1, 5))
    k = int(rng.integers(1, 6))
    A = rng.integers(-5, 6, (k, v)).astype(float)
    b = rng.integers(-10, 21, k).astype(float)
    rel = [Relation.LE if f else Relation.GE for f in rng.random(k) < 0.5]
    c = rng.integers(-5, 6, v).astype(float)
    sense = Sense.MAXIMIZE if rng.random() < 0.5 else Sense.MINIMIZE
    cons = [(A[r], rel[r], b[r]) for r in range(k)]
    cons += [(np.eye(v)[i], Relation.LE, box) for i in range(v)]
    lp = LinearProgram(sense, c, cons)
    # oracle form: G x <= h including 0 <= x <= box
    G = [A[r] if rel[r] is Relation.LE else -A[r] for r in range(k)]
    h = [b[r] if rel[r] is Relation.LE else -b[r] for r in range(k)]
    G = np.vstack([*G, np.eye(v), -np.eye(v)])
    h = np.r_[h, np.full(v, box), np.zeros(v)]
    return lp, (c, G, h, sense is Sense.MAXIMIZE)


class TestExamples:
    def test_single_binding_bound(self):
        sol = solve(LinearProgram(Sense.MINIMIZE, [1.0], [([1.0], ">=", 5.0)]))
        assert sol.status is Status.OPTIMAL
        assert sol.x[0] == pytest.approx(5.0)
        assert sol.objective_value == pytest.approx(5.0)

    def test_two_variable_max(self):
        lp = LinearProgram(Sense.MAXIMIZE, [3.0, 2.0],
                           [([1, 1], "<=", 4), ([1, 0], "<=", 2)])
        # vertices (0,0) (2,0) (2,2) (0,4)
        expected = max(3 * u + 2 * w for u, w in [(0, 0), (2, 0), (2, 2), (0, 4)])
        sol = solve(lp)
        assert sol.objective_value == pytest.approx(expected) == 10.0
        np.testing.assert_allclose(sol.x, [2.0, 2.0])

    def test_infeasible(self):
        sol = solve(LinearProgram(Sense.MINIMIZE, [0.0], [([1.0], "<=", -1.0)]))
        assert sol.status is Status.INFEASIBLE
        assert sol.x is None

    def test_unbounded(self):
        sol = solve(LinearProgram(Sense.MAXIMIZE, [1.0, 1.0], [([1, -1], "<=", 1)]))
        assert sol.status is Status.UNBOUNDED
        assert sol.objective_value == np.inf

    def test_no_constraints(self):
        assert solve(LinearProgram(Sense.MINIMIZE, [1.0, 2.0])).objective_value == 0.0
        assert solve(LinearProgram(Sense.MINIMIZE, [-1.0])).status is Status.UNBOUNDED

    def test_free_variable(self):
        lp = LinearProgram(Sense.MINIMIZE, [1.0], [([1.0], ">=", -3.0)], bounds=[Bound.FREE])
        sol = solve(lp)
        assert sol.x[0] == pytest.approx(-3.0)

    def test_redundant_equalities(self):
        lp = LinearProgram(Sense.MINIMIZE, [1.0, 1.0],
                           [([1, 1], "=", 2), ([2, 2], "=", 4), ([1, 0], ">=", 0.5)])
        sol = solve(lp)
        assert sol.objective_value == pytest.approx(2.0)
        assert len(sol.basis) == 2

    def test_klee_minty_cube(self):
        c = np.array([100.0, 10.0, 1.0])
        A = np.array([[1, 0, 0], [20, 1, 0], [200, 20, 1]], float)
        b = np.array([1, 100, 10000], float)
        sol = solve(LinearProgram(Sense.MAXIMIZE, c, [(A[r], "<=", b[r]) for r in range(3)]))
        np.testing.assert_allclose(sol.x, [0, 0, 10000], atol=1e-9)

    def test_beale_cycling_example(self):
        # cycles under the largest-coefficient rule without anti-cycling
        c = [-0.75, 150, -0.02, 6]
        A = [[0.25, -60, -0.04, 9], [0.5, -90, -0.02, 3], [0, 0, 1, 0]]
        lp = LinearProgram(Sense.MINIMIZE, c, [(A[0], "<=", 0), (A[1], "<=", 0), (A[2], "<=", 1)])
        sol = solve(lp)
        assert sol.objective_value == pytest.approx(-0.05)


class TestErrors:
    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            LinearProgram(Sense.MINIMIZE, [1.0, 2.0], [([1.0], "<=", 1.0)])
        with pytest.raises(ValueError):
            LinearProgram(Sense.MINIMIZE, [1.0], bounds=[Bound.FREE, Bound.FREE])

    def test_nonfinite(self):
        with pytest.raises(ValueError):
            Constraint([np.nan], "<=", 1.0)

    def test_pivot_limit(self):
        lp = LinearProgram(Sense.MAXIMIZE, [3.0, 2.0], [([1, 1], "<=", 4), ([1, 0], "<=", 2)])
        with pytest.raises(SolverError):
            solve(lp, max_pivots=0)


class TestSecondStage:
    def test_no_free_objective_keeps_pinned_value(self):
        lp = LinearProgram(Sense.MINIMIZE, [0.0], [([1.0], "<=", 4.0)])
        sol = solve_second_stage(lp, [(0, 2.5)])
        assert sol.x[0] == pytest.approx(2.5)

    def test_pin_outside_feasible_set_is_an_error(self):
        lp = LinearProgram(Sense.MINIMIZE, [0.0], [([1.0], "<=", 4.0)])
        with pytest.raises(SolverError):
            solve_second_stage(lp, [(0, 5.0)])

    def test_bad_index(self):
        lp = LinearProgram(Sense.MINIMIZE, [0.0], [([1.0], "<=", 4.0)])
        with pytest.raises(ValueError):
            solve_second_stage(lp, [(3, 1.0)])


def test_standard_form_layout():
    lp = LinearProgram(Sense.MAXIMIZE, [1.0, 2.0],
                       [([1, 1], "<=", 3), ([1, -1], ">=", -1), ([0, 1], "=", 1)],
                       bounds=[Bound.NONNEGATIVE, Bound.FREE])
    sf = standard_form(lp)
    assert sf.A.shape == (3, 5)
    assert sf.plus == (0, 1) and sf.minus == (None, 2)
    np.testing.assert_array_equal(sf.c, [-1, -2, 2, 0, 0])
    # negative rhs row flipped
    np.testing.assert_array_equal(sf.A[1], [-1, 1, -1, 0, 1])
    assert np.all(sf.b >= 0)


@pytest.mark.parametrize("seed", range(5))
def test_vertex_oracle_and_duality(seed):
    rng = np.random.default_rng(1000 + seed)
    for _ in range(40):
        lp, (c, G, h, maximize) = random_box_lp(rng)
        expected = lp_by_vertices(c, G, h, maximize)
        sol = solve(lp)
        if expected is None:
            assert sol.status is Status.INFEASIBLE
            continue
        assert sol.status is Status.OPTIMAL
        assert sol.objective_value == pytest.approx(expected, abs=1e-7)
        for con in lp.constraints:
            lhs = con.coefficients @ sol.x
            tol = 1e-9 * (1 + abs(con.rhs))
            if con.relation is Relation.LE:
                assert lhs <= con.rhs + tol
            else:
                assert lhs >= con.rhs - tol
        assert np.all(sol.x >= -1e-9)
        assert sol.objective_value == pytest.approx(float(c @ sol.x), abs=1e-9)
        # reduced costs recomputed from the reported basis
        sf = standard_form(lp)
        if len(sol.basis) == sf.A.shape[0]:
            B = sf.A[:, list(sol.basis)]
            duals = np.linalg.solve(B.T, sf.c[list(sol.basis)])
            reduced = sf.c - sf.A.T @ duals
            assert reduced.min() >= -1e-9
            np.testing.assert_allclose(reduced, sol.reduced_costs, atol=1e-9)
        assert sol.pivots <= 2 * comb(sf.A.shape[1] + sf.A.shape[0], sf.A.shape[0])


def test_determinism():
    rng = np.random.default_rng(7)
    for _ in range(20):
        lp, _ = random_box_lp(rng)
        a, b = solve(lp), solve(lp)
        assert a.status is b.status
        assert a.basis == b.basis and a.pivots == b.pivots
        if a.optimal:
            assert a.x.tobytes() == b.x.tobytes()


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=2, max_size=4),
       st.lists(st.integers(1, 20), min_size=2, max_size=4))
def test_knapsack_relaxation_matches_greedy(weights, values):
    k = min(len(weights), len(values))
    w, v = np.array(weights[:k], float), np.array(values[:k], float)
    cap = float(w.sum()) / 2
    cons = [(w, "<=", cap)] + [(np.eye(k)[i], "<=", 1.0) for i in range(k)]
    sol = solve(LinearProgram(Sense.MAXIMIZE, v, cons))
    # fractional knapsack: greedy by value density is optimal
    left, total = cap, 0.0
    for i in sorted(range(k), key=lambda i: (-v[i] / w[i], i)):
        take = min(1.0, left / w[i])
        total += take * v[i]
        left -= take * w[i]
        if left <= 0:
            break
    assert sol.objective_value == pytest.approx(total, abs=1e-9)
