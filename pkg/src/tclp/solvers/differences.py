"""Difference constraints over the integers: conjunctions of X - Y <= d.

The store is a square matrix of tightest known bounds, closed with
Floyd-Warshall on demand (a dirty flag marks pending closure). The store is
consistent exactly when no diagonal entry is negative after closure.

Row/column 0 is a reserved origin pseudo-variable so absolute bounds
(X <= 7, X >= 3, X = 5 from mirrored numeric bindings) fit the X - Y <= d
shape: X <= 7 becomes X - origin <= 7. Projections carry the origin slot
along with the projected variables, which makes pointwise comparison of
absolute bounds total; missing constraints are +inf.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Sequence

from ..errors import EngineError, LoadError
from ..terms import Bindings, Num, Struct, Term, Var
from .base import ConstraintSolver, EntailOrder, ProjectedStore

INF = float("inf")


@dataclass(frozen=True)
class DiffProjection:
    """index_vector follows the order of the projected variables; matrix is
    the closed sub-matrix over [origin] + those variables, or None while the
    early (index-only) form is in play."""

    index_vector: tuple
    size: int
    matrix: tuple | None


class DiffSolver(ConstraintSolver):
    name = "d"
    mirrors_numbers = True

    def __init__(self) -> None:
        self.matrix: list[list] = [[0]]          # origin only
        self.index: dict[int, int] = {}           # vid -> matrix index
        self.order: list[int] = []                # insertion order of vids
        self.counts: list[int] = [0]              # finite off-diagonal entries
        self.dirty = False
        self.log: list[tuple] = []

    # -- state -----------------------------------------------------------

    def checkpoint(self) -> int:
        return len(self.log)

    def rollback(self, token: int) -> None:
        while len(self.log) > token:
            entry = self.log.pop()
            if entry[0] == "cell":
                _, i, j, old = entry
                if old == INF and self.matrix[i][j] != INF:
                    self.counts[i] -= 1
                    self.counts[j] -= 1
                self.matrix[i][j] = old
            else:  # "var"
                vid = entry[1]
                del self.index[vid]
                self.order.pop()
                self.counts.pop()
                for row in self.matrix:
                    row.pop()
                self.matrix.pop()
        self.dirty = True

    def clone_state(self) -> Any:
        return ([row[:] for row in self.matrix], dict(self.index),
                list(self.order), list(self.counts), self.dirty)

    def install_state(self, state: Any) -> None:
        matrix, index, order, counts, dirty = state
        self.matrix = [row[:] for row in matrix]
        self.index = dict(index)
        self.order = list(order)
        self.counts = list(counts)
        self.dirty = dirty
        self.log = []

    def empty_state(self) -> Any:
        return ([[0]], {}, [], [0], False)

    def save_context(self) -> Any:
        return (self.clone_state(), list(self.log))

    def restore_context(self, ctx: Any) -> None:
        state, log = ctx
        self.install_state(state)
        self.log = list(log)

    def knows(self, vid: int) -> bool:
        """Constrained means a finite entry, not mere matrix registration."""
        i = self.index.get(vid)
        return i is not None and self.counts[i] > 0

    # -- store updates ------------------------------------------------------

    def _ensure(self, vid: int) -> int:
        i = self.index.get(vid)
        if i is not None:
            return i
        n = len(self.matrix)
        for row in self.matrix:
            row.append(INF)
        self.matrix.append([INF] * (n + 1))
        self.matrix[n][n] = 0
        self.index[vid] = n
        self.order.append(vid)
        self.counts.append(0)
        self.log.append(("var", vid))
        return n

    def _set(self, i: int, j: int, d) -> None:
        old = self.matrix[i][j]
        if d < old:
            if old == INF:
                self.counts[i] += 1
                self.counts[j] += 1
            self.log.append(("cell", i, j, old))
            self.matrix[i][j] = d
            self.dirty = True

    def _closure(self) -> None:
        if not self.dirty:
            return
        m = self.matrix
        n = len(m)
        for k in range(n):
            mk = m[k]
            for i in range(n):
                mik = m[i][k]
                if mik == INF:
                    continue
                mi = m[i]
                for j in range(n):
                    alt = mik + mk[j]
                    if alt < mi[j]:
                        if mi[j] == INF:
                            self.counts[i] += 1
                            self.counts[j] += 1
                        self.log.append(("cell", i, j, mi[j]))
                        mi[j] = alt
        self.dirty = False

    def _consistent(self) -> bool:
        self._closure()
        m = self.matrix
        return all(m[i][i] >= 0 for i in range(len(m)))

    def add_diff(self, x: int, y: int, d: int) -> bool:
        """Add X - Y <= d for live variable ids; False iff a negative cycle."""
        i, j = self._ensure(x), self._ensure(y)
        self._set(i, j, d)
        return self._consistent()

    def bind_number(self, vid: int, value) -> bool:
        if not isinstance(value, int):
            raise EngineError("difference constraints are over the integers")
        i = self._ensure(vid)
        self._set(i, 0, value)      # X - origin <= v
        self._set(0, i, -value)     # origin - X <= -v
        return self._consistent()

    def alias(self, vid: int, other: int) -> bool:
        i, j = self._ensure(vid), self._ensure(other)
        self._set(i, j, 0)
        self._set(j, i, 0)
        return self._consistent()

    # -- surface -------------------------------------------------------------
    # X - Y #=< D | X #=< Y (X-Y<=0) | X #< Y (X-Y<=-1) and the mirrored
    # forms with #>= / #>; absolute bounds X #=< 7 go through the origin.

    def is_constraint_functor(self, name: str, arity: int) -> bool:
        return arity == 2 and name in ("#=<", "#<", "#>=", "#>", "#=")

    def validate_goal(self, goal: Struct) -> None:
        self._shape(goal)

    @staticmethod
    def _shape(goal: Struct):
        lhs, rhs = goal.args

        def side(t):
            if isinstance(t, (Var, Num)):
                return True
            return (isinstance(t, Struct) and t.name == "-" and len(t.args) == 2
                    and all(isinstance(a, (Var, Num)) for a in t.args))

        if not (side(lhs) and side(rhs)):
            raise LoadError(f"not a difference constraint: {goal!r}")

    def pinned_value(self, vid: int):
        """The exact integer a variable is forced to, if any."""
        i = self.index.get(vid)
        if i is None:
            return None
        self._closure()
        hi = self.matrix[i][0]
        if hi != INF and self.matrix[0][i] == -hi:
            return hi

    def add_goal(self, goal: Struct, binds: Bindings) -> bool:
        lhs, rhs = goal.args
        name = goal.name
        if name in ("#>=", "#>"):
            lhs, rhs = rhs, lhs
            name = {"#>=": "#=<", "#>": "#<"}[name]
        strict = 1 if name == "#<" else 0

        def flat(t) -> tuple:
            """term -> (pos var id | None, neg var id | None, integer const)"""
            t = binds.walk(t)
            if isinstance(t, Var):
                pinned = self.pinned_value(t.id)
                if pinned is not None:
                    return None, None, pinned
            if isinstance(t, Num):
                if not isinstance(t.value, int):
                    raise EngineError("difference constraints are over the integers")
                return None, None, t.value
            if isinstance(t, Var):
                return t.id, None, 0
            if isinstance(t, Struct) and t.name == "-" and len(t.args) == 2:
                a, b = binds.walk(t.args[0]), binds.walk(t.args[1])
                pos = neg = None
                c = 0
                if isinstance(a, Var):
                    pinned = self.pinned_value(a.id)
                    if pinned is not None:
                        c += pinned
                    else:
                        pos = a.id
                elif isinstance(a, Num) and isinstance(a.value, int):
                    c += a.value
                else:
                    raise EngineError(f"uninstantiated difference constraint: {goal!r}")
                if isinstance(b, Var):
                    pinned = self.pinned_value(b.id)
                    if pinned is not None:
                        c -= pinned
                    else:
                        neg = b.id
                elif isinstance(b, Num) and isinstance(b.value, int):
                    c -= b.value
                else:
                    raise EngineError(f"uninstantiated difference constraint: {goal!r}")
                return pos, neg, c
            raise EngineError(f"uninstantiated difference constraint: {goal!r}")

        lp, ln, lc = flat(lhs)
        rp, rn, rc = flat(rhs)
        # (lp - ln + lc) <= (rp - rn + rc)  =>  (lp + rn) - (ln + rp) <= rc - lc
        pos_vars = [v for v in (lp, rn) if v is not None]
        neg_vars = [v for v in (ln, rp) if v is not None]
        for v in list(pos_vars):
            if v in neg_vars:
                pos_vars.remove(v)
                neg_vars.remove(v)
        if len(pos_vars) > 1 or len(neg_vars) > 1:
            raise EngineError(f"difference constraint too complex: {goal!r}")
        d = rc - lc - strict
        x = self._ensure(pos_vars[0]) if pos_vars else 0
        y = self._ensure(neg_vars[0]) if neg_vars else 0
        token = self.checkpoint()
        self._set(x, y, d)
        if name == "#=":
            self._set(y, x, -d)
        if self._consistent():
            return True
        self.rollback(token)
        return False

    # -- projection / entailment ------------------------------------------------

    def _positions(self, var_ids: Sequence[int]) -> list[int]:
        return [0] + [self._ensure(v) for v in var_ids]

    def store_projection(self, var_ids: Sequence[int]) -> ProjectedStore:
        early = self.early_call_projection(var_ids)
        return self.final_call_projection(var_ids, early)

    def early_call_projection(self, var_ids: Sequence[int]) -> DiffProjection:
        idx = tuple(self._ensure(v) for v in var_ids)
        return DiffProjection(idx, len(idx), None)

    def final_call_projection(self, var_ids: Sequence[int], early: DiffProjection) -> ProjectedStore:
        self._closure()
        pos = [0, *early.index_vector]
        m = self.matrix
        sub = tuple(tuple(m[i][j] for j in pos) for i in pos)
        return ProjectedStore(early.size, DiffProjection(early.index_vector, early.size, sub))

    early_ans_projection = early_call_projection
    final_ans_projection = final_call_projection

    def _pointwise_leq_live(self, pos: list[int], sub: tuple) -> bool:
        """closed live sub-matrix at pos <= given sub-matrix, pointwise."""
        self._closure()
        m = self.matrix
        n = len(pos)
        for i in range(n):
            mi = m[pos[i]]
            si = sub[i]
            for j in range(n):
                if mi[pos[j]] > si[j]:
                    return False
        return True

    def call_entail(self, early: DiffProjection, proj_gen: ProjectedStore) -> bool:
        gen: DiffProjection = proj_gen.payload
        if proj_gen.var_count != early.size:
            raise EngineError("projected stores of different arity")
        return self._pointwise_leq_live([0, *early.index_vector], gen.matrix)

    def answer_compare(self, early: DiffProjection, proj_ans: ProjectedStore) -> EntailOrder | None:
        ans: DiffProjection = proj_ans.payload
        pos = [0, *early.index_vector]
        if self._pointwise_leq_live(pos, ans.matrix):
            return EntailOrder.LESS_EQ
        # stored <= live pointwise means the stored answer is tighter
        self._closure()
        m = self.matrix
        n = len(pos)
        for i in range(n):
            for j in range(n):
                if ans.matrix[i][j] > m[pos[i]][pos[j]]:
                    return None
        return EntailOrder.GREATER

    def entails_projection(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        return self._pointwise_leq_live(self._positions(var_ids), proj.payload.matrix)

    def apply_answer(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        ans: DiffProjection = proj.payload
        token = self.checkpoint()
        pos = self._positions(var_ids)
        n = len(pos)
        for i in range(n):
            for j in range(n):
                d = ans.matrix[i][j]
                if d != INF and i != j:
                    self._set(pos[i], pos[j], d)
        if self._consistent():
            return True
        self.rollback(token)
        return False

    # -- rendering ------------------------------------------------------------

    def render_projected(self, proj: ProjectedStore, names: Sequence[str]) -> list[str]:
        ans: DiffProjection = proj.payload
        label = ["0", *(names[i] if i < len(names) else f"V{i}" for i in range(proj.var_count))]
        out = []
        n = len(ans.matrix)
        for i in range(n):
            for j in range(n):
                d = ans.matrix[i][j]
                if i == j or d == INF:
                    continue
                if j == 0:
                    out.append(f"{label[i]} =< {d}")
                elif i == 0:
                    out.append(f"{label[j]} >= {-d}")
                else:
                    out.append(f"{label[i]} - {label[j]} =< {d}")
        return out
