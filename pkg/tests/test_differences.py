"""Difference-constraint solver against shortest-path oracles."""

from __future__ import annotations

import random

import pytest

from tclp.rational import Q
from tclp.solvers.base import EntailOrder
from tclp.solvers.differences import INF, DiffSolver
from tclp.solvers.rationals import LE, RationalSolver, entails, make_row
from tclp.terms import Bindings, Num, Struct, Var


class TestAdd:
    def test_negative_cycle(self):
        s = DiffSolver()
        assert s.add_diff(1, 2, 3)
        assert not s.add_diff(2, 1, -5)

    def test_zero_cycle_forces_equality(self):
        s = DiffSolver()
        assert s.add_diff(1, 2, 3)
        assert s.add_diff(2, 1, -3)

    def test_single_edge(self):
        assert DiffSolver().add_diff(1, 2, 3)


class TestProjection:
    def test_index_vector_follows_vars_order(self):
        s = DiffSolver()
        for vid in (10, 11, 12, 13, 14):   # indices 1..5
            s._ensure(vid)
        early = s.early_call_projection([13, 10, 11])
        assert early.index_vector == (4, 1, 2)

    def test_closure_in_submatrix(self):
        s = DiffSolver()
        s.add_diff(1, 2, 2)
        s.add_diff(2, 3, 3)
        proj = s.store_projection([1, 3])
        assert s.render_projected(proj, ["X", "Z"]) == ["X - Z =< 5"]

    def test_full_projection_is_closure(self):
        s = DiffSolver()
        s.add_diff(1, 2, 2)
        s.add_diff(2, 3, 3)
        proj = s.store_projection([1, 2, 3])
        sub = proj.payload.matrix
        # origin slot + three variables, closed
        assert sub[1][3] == 5

    def test_early_has_no_matrix_copy(self):
        s = DiffSolver()
        s.add_diff(1, 2, 2)
        early = s.early_ans_projection([1, 2])
        assert early.matrix is None
        full = s.final_ans_projection([1, 2], early)
        assert full.payload.matrix is not None


class TestEntailment:
    def test_tighter_entails_looser(self):
        a = DiffSolver(); a.add_diff(1, 2, 3)
        b = DiffSolver(); b.add_diff(1, 2, 5)
        pb = b.store_projection([1, 2])
        pa = a.store_projection([1, 2])
        assert a.call_entail(a.early_call_projection([1, 2]), pb)
        assert not b.call_entail(b.early_call_projection([1, 2]), pa)

    def test_equal_matrices_compare_less_eq(self):
        a = DiffSolver(); a.add_diff(1, 2, 3)
        pa = a.store_projection([1, 2])
        assert a.answer_compare(a.early_ans_projection([1, 2]), pa) is EntailOrder.LESS_EQ

    def test_incomparable(self):
        a = DiffSolver(); a.add_diff(1, 2, 1); a.add_diff(2, 1, 9)
        b = DiffSolver(); b.add_diff(1, 2, 2); b.add_diff(2, 1, 8)
        pb = b.store_projection([1, 2])
        assert a.answer_compare(a.early_ans_projection([1, 2]), pb) is None


class TestSurface:
    def test_sugar_forms(self):
        binds = Bindings()
        s = DiffSolver()
        assert s.add_goal(Struct("#=<", (Struct("-", (Var(1), Var(2))), Num(3))), binds)
        assert s.add_goal(Struct("#<", (Var(1), Var(3))), binds)   # X - Z <= -1
        assert s.add_goal(Struct("#=", (Var(4), Num(7))), binds)
        proj = s.store_projection([4])
        assert set(s.render_projected(proj, ["W"])) == {"W >= 7", "W =< 7"}

    def test_bound_variable_weight(self):
        binds = Bindings()
        s = DiffSolver()
        assert s.bind_number(9, 5)   # the weight variable, pinned
        assert s.add_goal(Struct("#>=", (Struct("-", (Var(1), Var(2))), Var(9))), binds)
        # X - Y >= 5, so Y - X <= -5
        proj = s.store_projection([2, 1])
        assert "Y - X =< -5" in [c.replace("V0", "Y").replace("V1", "X")
                                 for c in s.render_projected(proj, ["Y", "X"])]


# -- oracles -------------------------------------------------------------------


def bellman_ford(n: int, edges: list):
    """(consistent, dist matrix) for constraints x_i - x_j <= d."""
    dist = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for i, j, d in edges:
        dist[i][j] = min(dist[i][j], d)
    # n rounds of global relaxation; one more change means a negative cycle
    for _ in range(n):
        changed = False
        for k in range(n):
            for i in range(n):
                if dist[i][k] == INF:
                    continue
                for j in range(n):
                    alt = dist[i][k] + dist[k][j]
                    if alt < dist[i][j]:
                        dist[i][j] = alt
                        changed = True
        if not changed:
            break
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i][k] != INF and dist[i][k] + dist[k][j] < dist[i][j]:
                    return False, dist
    if any(dist[i][i] < 0 for i in range(n)):
        return False, dist
    return True, dist


def random_graph(rng, n):
    edges = []
    for _ in range(rng.randint(n, 2 * n)):
        i, j = rng.sample(range(n), 2)
        edges.append((i, j, rng.randint(-6, 9)))
    return edges


@pytest.mark.parametrize("seed", range(200))
def test_consistency_and_projection_against_bellman_ford(seed):
    rng = random.Random(3000 + seed)
    n = rng.randint(2, 8)
    edges = random_graph(rng, n)
    expect_ok, dist = bellman_ford(n, edges)

    s = DiffSolver()
    vids = [100 + i for i in range(n)]
    ok = True
    for i, j, d in edges:
        ok = s.add_diff(vids[i], vids[j], d)
        if not ok:
            break
    assert ok == expect_ok
    if not ok:
        return
    # full projection equals the oracle's shortest-path closure
    proj = s.store_projection(vids)
    sub = proj.payload.matrix
    for i in range(n):
        for j in range(n):
            assert sub[i + 1][j + 1] == dist[i][j], (i, j)
    # projection onto a subset keeps pairwise shortest paths
    keep = rng.sample(range(n), rng.randint(1, n))
    pk = s.store_projection([vids[i] for i in keep])
    for a, i in enumerate(keep):
        for b, j in enumerate(keep):
            assert pk.payload.matrix[a + 1][b + 1] == dist[i][j]


@pytest.mark.parametrize("seed", range(60))
def test_entailment_agrees_with_rational_encoding(seed):
    rng = random.Random(5000 + seed)
    n = rng.randint(2, 4)
    e1 = random_graph(rng, n)
    e2 = random_graph(rng, n)
    s1, s2 = DiffSolver(), DiffSolver()
    vids = [200 + i for i in range(n)]
    ok1 = all(s1.add_diff(vids[i], vids[j], d) for i, j, d in e1)
    ok2 = all(s2.add_diff(vids[i], vids[j], d) for i, j, d in e2)
    if not (ok1 and ok2):
        return
    p2 = s2.store_projection(vids)
    got = s1.call_entail(s1.early_call_projection(vids), p2)

    rows1 = [make_row({vids[i]: Q(1), vids[j]: Q(-1)}, LE, Q(d))
             for i, j, d in e1 if i != j]
    rows2 = [make_row({vids[i]: Q(1), vids[j]: Q(-1)}, LE, Q(d))
             for i, j, d in e2 if i != j]
    expected = all(entails(rows1, r) for r in rows2)
    assert got == expected


def test_projection_commutes_with_entailment():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(2, 5)
        vids = [300 + i for i in range(n)]
        base = random_graph(rng, n)
        sa, sb = DiffSolver(), DiffSolver()
        oka = all(sa.add_diff(vids[i], vids[j], d) for i, j, d in base)
        okb = all(sb.add_diff(vids[i], vids[j], d + rng.randint(0, 3))
                  for i, j, d in base)
        if not (oka and okb):
            continue
        pb = sb.store_projection(vids)
        if sa.call_entail(sa.early_call_projection(vids), pb):
            keep = [vids[k] for k in rng.sample(range(n), rng.randint(1, n))]
            pkb = sb.store_projection(keep)
            assert sa.call_entail(sa.early_call_projection(keep), pkb)


def test_checkpoint_rollback_roundtrip():
    s = DiffSolver()
    s.add_diff(1, 2, 4)
    before = s.store_projection([1, 2]).payload
    token = s.checkpoint()
    s.add_diff(2, 1, -4)
    s.add_diff(1, 3, 0)
    s.rollback(token)
    after = s.store_projection([1, 2]).payload
    assert before == after
    assert not s.knows(3)
