"""Linear rational arithmetic: conjunctions of strict/non-strict inequalities
and equalities over exact rationals.

Projection and satisfiability use Fourier-Motzkin elimination over a sparse
row system (equalities are removed first by Gaussian substitution, touching
only the rows a pivot occurs in). Everything is exact rational arithmetic;
there is no floating point anywhere. Combining a strict row with any other
row yields a strict row, so open intervals project correctly.

The live store keeps a *witness*: one rational solution of the current
conjunction. Most store operations then cost almost nothing - a new
constraint satisfied by the witness is consistent by construction, and an
entailment check fails as soon as the witness satisfies the negation. Only
when the witness breaks do we fall back to full elimination (which also
produces the next witness by back-substitution).

Rows are kept in a normal form (integer coefficients with gcd 1, sorted
variables, positive leading coefficient for equalities) so that stores are
structurally comparable and render deterministically.
"""

from __future__ import annotations

from dataclasses import dataclass
from ..rational import Q
from math import gcd
from typing import Any, Iterable, Sequence

from ..errors import EngineError, LoadError
from ..terms import Bindings, Num, Struct, Term, Var
from .base import ConstraintSolver, EntailOrder, ProjectedStore

LT, LE, EQ = "<", "=<", "="

ZERO = Q(0)
ONE = Q(1)

#: goal functor -> (relation, swap operands)
SURFACE = {
    "#<": (LT, False),
    "#=<": (LE, False),
    "#=": (EQ, False),
    "#>": (LT, True),
    "#>=": (LE, True),
}


@dataclass(frozen=True, slots=True)
class Row:
    """Normalized linear constraint: sum(coef*var) rel rhs."""

    coeffs: tuple  # ((vid, rational), ...) sorted by vid, no zeros
    rel: str       # LT, LE or EQ
    rhs: object


def make_row(coeffs: dict, rel: str, rhs):
    """Normalize; returns a Row, or a bool for ground (variable-free) rows."""
    items = sorted((v, c) for v, c in coeffs.items() if c != 0)
    if not items:
        if rel == LT:
            return 0 < rhs
        if rel == LE:
            return 0 <= rhs
        return rhs == 0
    denom_lcm = 1
    for _, c in items:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    nums = [int(c * denom_lcm) for _, c in items]
    g = 0
    for n in nums:
        g = gcd(g, n)
    rhs_n = rhs * denom_lcm / g
    nums = [n // g for n in nums]
    if rel == EQ and nums[0] < 0:
        nums = [-n for n in nums]
        rhs_n = -rhs_n
    return Row(tuple((v, Q(n)) for (v, _), n in zip(items, nums)), rel, rhs_n)


def _negations(row: Row) -> list:
    """Rows whose disjunction is the negation of `row`."""
    neg_coeffs = {v: -c for v, c in row.coeffs}
    if row.rel == LE:   # not(x <= b)  =  -x < -b
        return [make_row(neg_coeffs, LT, -row.rhs)]
    if row.rel == LT:   # not(x < b)   =  -x <= -b
        return [make_row(neg_coeffs, LE, -row.rhs)]
    return [make_row(dict(row.coeffs), LT, row.rhs),
            make_row(neg_coeffs, LT, -row.rhs)]


def _rebase(row: Row, mapping) -> Row:
    return Row(tuple(sorted((mapping[v], c) for v, c in row.coeffs)), row.rel, row.rhs)


def eval_row(row: Row, witness: dict) -> bool | None:
    """Evaluate a row under a (possibly partial) valuation."""
    total = ZERO
    for v, c in row.coeffs:
        w = witness.get(v)
        if w is None:
            return None
        total += c * w
    if row.rel == EQ:
        return total == row.rhs
    if row.rel == LE:
        return total <= row.rhs
    return total < row.rhs


# -- sparse elimination kernel -------------------------------------------------


class _System:
    """Mutable sparse row system for Gaussian substitution and FM steps."""

    __slots__ = ("rows", "incident", "next_id", "falsified")

    def __init__(self, rows: Iterable[Row]) -> None:
        self.rows: dict[int, tuple] = {}      # id -> (coeffs dict, rel, rhs)
        self.incident: dict[int, set] = {}    # vid -> row ids
        self.next_id = 0
        self.falsified = False
        for r in rows:
            self.add(dict(r.coeffs), r.rel, r.rhs)

    def add(self, coeffs: dict, rel: str, rhs) -> None:
        coeffs = {v: c for v, c in coeffs.items() if c != 0}
        if not coeffs:
            ok = (0 < rhs) if rel == LT else (0 <= rhs) if rel == LE else (rhs == 0)
            if not ok:
                self.falsified = True
            return
        rid = self.next_id
        self.next_id += 1
        self.rows[rid] = (coeffs, rel, rhs)
        for v in coeffs:
            self.incident.setdefault(v, set()).add(rid)

    def remove(self, rid: int) -> tuple:
        coeffs, rel, rhs = self.rows.pop(rid)
        for v in coeffs:
            self.incident[v].discard(rid)
        return coeffs, rel, rhs

    def substitute(self, pivot: int, expr: dict, const) -> None:
        """Replace pivot by expr+const in every row containing it."""
        for rid in list(self.incident.get(pivot, ())):
            coeffs, rel, rhs = self.remove(rid)
            c = coeffs.pop(pivot)
            for v, k in expr.items():
                coeffs[v] = coeffs.get(v, ZERO) + c * k
            self.add(coeffs, rel, rhs - c * const)
            if self.falsified:
                return

    def eliminate_fm(self, vid: int, record: list | None = None) -> None:
        """Fourier-Motzkin step removing vid from all (inequality) rows."""
        pos, neg = [], []
        for rid in list(self.incident.get(vid, ())):
            coeffs, rel, rhs = self.remove(rid)
            if rel == EQ:
                raise AssertionError("equalities must be substituted before FM")
            if coeffs[vid] > 0:
                pos.append((coeffs, rel, rhs))
            else:
                neg.append((coeffs, rel, rhs))
        if record is not None:
            record.append((vid, pos, neg))
        for pc, prel, prhs in pos:
            cp = pc[vid]
            for nc, nrel, nrhs in neg:
                cn = nc[vid]
                out = {}
                for v, c in pc.items():
                    if v != vid:
                        out[v] = c * -cn
                for v, c in nc.items():
                    if v != vid:
                        out[v] = out.get(v, ZERO) + c * cp
                rel = LT if LT in (prel, nrel) else LE
                self.add(out, rel, prhs * -cn + nrhs * cp)
                if self.falsified:
                    return

    def gaussian(self, keep: set | None, record: list | None = None) -> None:
        """Substitute away equalities on pivots outside `keep`."""
        queue = [rid for rid, (_, rel, _) in self.rows.items() if rel == EQ]
        while queue and not self.falsified:
            rid = queue.pop()
            row = self.rows.get(rid)
            if row is None or row[1] != EQ:
                continue
            coeffs, _, rhs = row
            pivot = None
            for v in coeffs:
                if keep is None or v not in keep:
                    pivot = v
                    break
            if pivot is None:
                continue
            self.remove(rid)
            c = coeffs.pop(pivot)
            expr = {v: -k / c for v, k in coeffs.items()}
            const = rhs / c
            if record is not None:
                record.append((pivot, expr, const))
            before = self.next_id
            self.substitute(pivot, expr, const)
            queue.extend(r for r in range(before, self.next_id)
                         if r in self.rows and self.rows[r][1] == EQ)

    def variables(self) -> list:
        return [v for v, rids in self.incident.items() if rids]

    def to_rows(self) -> list:
        out = []
        for coeffs, rel, rhs in self.rows.values():
            r = make_row(coeffs, rel, rhs)
            if r is False:
                self.falsified = True
            elif r is not True:
                out.append(r)
        return out


def solve_witness(rows: Iterable[Row]) -> dict | None:
    """One exact solution of the conjunction, or None if inconsistent."""
    sys_ = _System(rows)
    if sys_.falsified:
        return None
    solved: list = []
    sys_.gaussian(None, solved)
    if sys_.falsified:
        return None
    order: list = []
    for vid in sorted(sys_.variables(), key=lambda v: len(sys_.incident.get(v, ()))):
        if sys_.incident.get(vid):
            sys_.eliminate_fm(vid, order)
            if sys_.falsified:
                return None
    witness: dict = {}

    def value(coeffs: dict, rhs):
        # a variable can drop out of the system mid-elimination (all its
        # rows consumed without combinations); any fixed value works then
        total = rhs
        for v, c in coeffs.items():
            total -= c * witness.setdefault(v, ZERO)
        return total

    for vid, pos, neg in reversed(order):
        # pos rows: coef*vid <= rhs - rest (upper); neg rows give lowers
        hi = hi_strict = None
        lo = lo_strict = None
        for coeffs, rel, rhs in pos:
            c = coeffs[vid]
            b = value({v: k for v, k in coeffs.items() if v != vid}, rhs) / c
            if hi is None or b < hi or (b == hi and rel == LT):
                hi, hi_strict = b, rel == LT
        for coeffs, rel, rhs in neg:
            c = coeffs[vid]
            b = value({v: k for v, k in coeffs.items() if v != vid}, rhs) / c
            if lo is None or b > lo or (b == lo and rel == LT):
                lo, lo_strict = b, rel == LT
        if lo is None and hi is None:
            witness[vid] = ZERO
        elif lo is None:
            witness[vid] = hi - 1
        elif hi is None:
            witness[vid] = lo + 1
        else:
            witness[vid] = (lo + hi) / 2
    for vid, expr, const in reversed(solved):
        total = const
        for v, c in expr.items():
            total += c * witness.setdefault(v, ZERO)
        witness[vid] = total
    return witness


def feasible(rows: Iterable[Row]) -> bool:
    """Exact satisfiability over the rationals."""
    return solve_witness(rows) is not None


def entails(rows: list, target) -> bool:
    """True iff every solution of rows satisfies target."""
    if isinstance(target, bool):
        return target or not feasible(rows)
    for branch in _negations(target):
        if isinstance(branch, bool):
            if branch and feasible(rows):
                return False
        elif feasible(list(rows) + [branch]):
            return False
    return True


def project(rows: list, keep: Sequence[int]) -> list:
    """Fourier-Motzkin projection onto `keep`; store must be consistent.

    Redundant rows are removed and matching <=-pairs merged into equalities,
    so the result is canonical enough for textual goldens.
    """
    keep_set = set(keep)
    sys_ = _System(rows)
    sys_.gaussian(keep_set)
    if sys_.falsified:
        raise EngineError("projection of an inconsistent store")
    for vid in sorted((v for v in sys_.variables() if v not in keep_set),
                      key=lambda v: len(sys_.incident.get(v, ()))):
        if sys_.incident.get(vid):
            sys_.eliminate_fm(vid)
    if sys_.falsified:
        raise EngineError("projection of an inconsistent store")
    work = list(dict.fromkeys(sys_.to_rows()))
    # merge x <= b and -x <= -b into x = b
    le_rows = {r for r in work if r.rel == LE}
    merged: list = []
    consumed: set = set()
    for r in work:
        if r in consumed:
            continue
        if r.rel == LE:
            mirror = make_row({v: -c for v, c in r.coeffs}, LE, -r.rhs)
            if isinstance(mirror, Row) and mirror != r and mirror in le_rows \
                    and mirror not in consumed:
                consumed.add(mirror)
                merged.append(make_row(dict(r.coeffs), EQ, r.rhs))
                continue
        merged.append(r)
    work = merged
    # remove rows entailed by the others (quadratic pass)
    pruned = list(work)
    i = 0
    while i < len(pruned):
        rest = pruned[:i] + pruned[i + 1:]
        if entails(rest, pruned[i]):
            pruned = rest
        else:
            i += 1
    pruned.sort(key=lambda r: (tuple((v, str(c)) for v, c in r.coeffs), r.rel, str(r.rhs)))
    return pruned


# -- single-variable interval fast path ----------------------------------------

def _interval_of(payload: tuple):
    """(lo, lo_strict, hi, hi_strict) if payload constrains one position."""
    lo, lo_s, hi, hi_s = None, False, None, False
    for r in payload:
        if len(r.coeffs) != 1 or r.coeffs[0][0] != 0:
            return None
        c = r.coeffs[0][1]
        bound = r.rhs / c
        if r.rel == EQ:
            pairs = [(bound, False, "lo"), (bound, False, "hi")]
        elif c > 0:
            pairs = [(bound, r.rel == LT, "hi")]
        else:
            pairs = [(bound, r.rel == LT, "lo")]
        for b, strict, side in pairs:
            if side == "hi":
                if hi is None or b < hi or (b == hi and strict):
                    hi, hi_s = b, strict
            else:
                if lo is None or b > lo or (b == lo and strict):
                    lo, lo_s = b, strict
    return lo, lo_s, hi, hi_s


def _interval_entails(a: tuple, b: tuple) -> bool:
    alo, alo_s, ahi, ahi_s = a
    blo, blo_s, bhi, bhi_s = b
    if blo is not None:
        if alo is None or alo < blo or (alo == blo and blo_s and not alo_s):
            return False
    if bhi is not None:
        if ahi is None or ahi > bhi or (ahi == bhi and bhi_s and not ahi_s):
            return False
    return True


# -- the solver --------------------------------------------------------------------


class _EarlyQ:
    """Two-step handle: the variable list now, the projection on demand."""

    __slots__ = ("var_ids", "_full")

    def __init__(self, var_ids: tuple) -> None:
        self.var_ids = var_ids
        self._full: ProjectedStore | None = None


class RationalSolver(ConstraintSolver):
    name = "q"
    mirrors_numbers = True

    def __init__(self) -> None:
        self.rows: list[Row] = []
        self._incident: dict[int, list] = {}   # vid -> row indices (live)
        self._witness: dict = {}
        self._eps = ONE   # slack used by split repair; shrinks when cramped

    # -- state ---------------------------------------------------------------

    def checkpoint(self) -> int:
        return len(self.rows)

    def rollback(self, token: int) -> None:
        # dropping constraints keeps the witness valid
        incident = self._incident
        while len(self.rows) > token:
            idx = len(self.rows) - 1
            row = self.rows.pop()
            for v, _ in row.coeffs:
                lst = incident[v]
                lst.pop()
                if not lst:
                    del incident[v]

    def clone_state(self) -> Any:
        return (list(self.rows), dict(self._witness), self._eps)

    def install_state(self, state: Any) -> None:
        rows, witness, eps = state
        self.rows = list(rows)
        self._witness = dict(witness)
        self._eps = eps
        self._incident = {}
        for idx, row in enumerate(self.rows):
            for v, _ in row.coeffs:
                self._incident.setdefault(v, []).append(idx)

    def empty_state(self) -> Any:
        return ((), {}, ONE)

    def knows(self, vid: int) -> bool:
        return vid in self._incident

    # -- adding constraints ------------------------------------------------------

    def _witness_extend(self, row: Row) -> bool:
        """Try to keep the witness valid across the new row; True on success."""
        w = self._witness
        unknown = [v for v, _ in row.coeffs if v not in w]
        if unknown:
            # fresh variables: set all but one to 0, solve the last
            for v in unknown[:-1]:
                w[v] = ZERO
            u = unknown[-1]
            cu = dict(row.coeffs)[u]
            rest = row.rhs
            for v, c in row.coeffs:
                if v != u:
                    rest -= c * w[v]
            bound = rest / cu
            if row.rel == EQ:
                w[u] = bound
            elif cu > 0:
                w[u] = bound - 1
            else:
                w[u] = bound + 1
            return True
        if eval_row(row, w):
            return True
        # local repair: re-solve one variable of the row, check its rows
        for u, cu in row.coeffs:
            rest = row.rhs
            for v, c in row.coeffs:
                if v != u:
                    rest -= c * w[v]
            bound = rest / cu
            candidate = bound if row.rel == EQ else \
                (bound - 1 if cu > 0 else bound + 1)
            if self._repair_var(u, candidate, w):
                return True
        # split repair: re-solve a variable while giving a second one a
        # small slack; keeps decreasing chains (x = y + z, y,z > 0) cheap
        if row.rel == EQ and len(row.coeffs) >= 2:
            for u, cu in row.coeffs:
                for v, cv in row.coeffs:
                    if v == u:
                        continue
                    rest = row.rhs
                    for x, c in row.coeffs:
                        if x != u and x != v:
                            rest -= c * w[x]
                    # cu*u + cv*v = rest with v := +-eps
                    for attempt in range(2):
                        for sign in (1, -1):
                            vv = sign * self._eps
                            uu = (rest - cv * vv) / cu
                            old_u, old_v = w[u], w[v]
                            w[v] = vv
                            if self._repair_var(u, uu, w, also=v):
                                return True
                            w[v] = old_v
                        if attempt == 0:
                            # shrink the slack ladder and retry once
                            mag = abs(rest)
                            if mag == 0 or self._eps * 65536 <= mag:
                                break
                            scaled = mag / 65536
                            step = ONE
                            while step > scaled:
                                step /= 65536
                            if step >= self._eps:
                                break
                            self._eps = step
        return False

    def _repair_var(self, u: int, candidate, w: dict, also=None) -> bool:
        old = w[u]
        w[u] = candidate
        for idx in self._incident.get(u, ()):
            if not eval_row(self.rows[idx], w):
                w[u] = old
                return False
        if also is not None:
            for idx in self._incident.get(also, ()):
                if not eval_row(self.rows[idx], w):
                    w[u] = old
                    return False
        return True

    def _push(self, row) -> bool:
        if isinstance(row, bool):
            return row
        idx = len(self.rows)
        self.rows.append(row)
        for v, _ in row.coeffs:
            self._incident.setdefault(v, []).append(idx)
        if self._witness_extend(row):
            return True
        witness = solve_witness(self.rows)
        if witness is not None:
            self._witness = witness
            return True
        self.rollback(idx)
        return False

    def bind_number(self, vid: int, value) -> bool:
        return self._push(make_row({vid: ONE}, EQ, Q(value)))

    def alias(self, vid: int, other: int) -> bool:
        return self._push(make_row({vid: ONE, other: -ONE}, EQ, ZERO))

    # -- surface ---------------------------------------------------------------------

    def is_constraint_functor(self, name: str, arity: int) -> bool:
        return arity == 2 and name in SURFACE

    def validate_goal(self, goal: Struct) -> None:
        for side in goal.args:
            _linear_shape(side)

    def add_goal(self, goal: Struct, binds: Bindings) -> bool:
        rel, swap = SURFACE[goal.name]
        lhs, rhs = goal.args
        if swap:
            lhs, rhs = rhs, lhs
        cl, kl = _linear_form(lhs, binds)
        cr, kr = _linear_form(rhs, binds)
        for v, c in cr.items():
            cl[v] = cl.get(v, ZERO) - c
        return self._push(make_row(cl, rel, kr - kl))

    # -- projection / entailment --------------------------------------------------------

    def store_projection(self, var_ids: Sequence[int]) -> ProjectedStore:
        mapping = {v: i for i, v in enumerate(var_ids)}
        rows = project(self.rows, list(var_ids))
        return ProjectedStore(len(var_ids), tuple(_rebase(r, mapping) for r in rows))

    # Entailment against the live store never needs our own projection,
    # so the early handle is just the variable list.
    def early_call_projection(self, var_ids: Sequence[int]) -> _EarlyQ:
        return _EarlyQ(tuple(var_ids))

    def final_call_projection(self, var_ids: Sequence[int], early: _EarlyQ) -> ProjectedStore:
        if early._full is None:
            early._full = self.store_projection(early.var_ids)
        return early._full

    def call_entail(self, early: _EarlyQ, proj_gen: ProjectedStore) -> bool:
        return self.entails_projection(early.var_ids, proj_gen)

    early_ans_projection = early_call_projection
    final_ans_projection = final_call_projection

    def _entails_live(self, row: Row) -> bool:
        for branch in _negations(row):
            if isinstance(branch, bool):
                if branch:
                    return False
                continue
            if eval_row(branch, self._witness):
                return False   # the witness solves store and the negation
            if solve_witness(self.rows + [branch]) is not None:
                return False
        return True

    def entails_projection(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        mapping = dict(enumerate(var_ids))
        for row in proj.payload:
            if not self._entails_live(_rebase(row, mapping)):
                return False
        return True

    def answer_compare(self, early: _EarlyQ, proj_ans: ProjectedStore):
        mine = self.final_ans_projection(early.var_ids, early)
        a, b = mine.payload, proj_ans.payload
        ia = _interval_of(a)
        ib = _interval_of(b) if ia is not None else None
        if ia is not None and ib is not None:
            if _interval_entails(ia, ib):
                return EntailOrder.LESS_EQ
            if _interval_entails(ib, ia):
                return EntailOrder.GREATER
            return None
        rows_a = list(a)
        if all(entails(rows_a, r) for r in b):
            return EntailOrder.LESS_EQ
        rows_b = list(b)
        if all(entails(rows_b, r) for r in a):
            return EntailOrder.GREATER
        return None

    def apply_answer(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        mapping = dict(enumerate(var_ids))
        token = self.checkpoint()
        for row in proj.payload:
            if not self._push(_rebase(row, mapping)):
                self.rollback(token)
                return False
        return True

    # -- rendering ---------------------------------------------------------------------

    def render_projected(self, proj: ProjectedStore, names: Sequence[str]) -> list:
        return [render_row(row, names) for row in proj.payload]


def render_row(row: Row, names: Sequence[str]) -> str:
    def mono(v, c):
        n = names[v] if v < len(names) else f"V{v}"
        if c == 1:
            return n
        if c == -1:
            return f"-{n}"
        return f"{c}*{n}"

    # single negated variable reads naturally: -D < -125 is D > 125
    if len(row.coeffs) == 1 and row.coeffs[0][1] < 0 and row.rel != EQ:
        v, c = row.coeffs[0]
        op = ">" if row.rel == LT else ">="
        return f"{mono(v, -c)} {op} {row.rhs / c}"
    lhs = " + ".join(mono(v, c) for v, c in row.coeffs).replace("+ -", "- ")
    op = {LT: "<", LE: "=<", EQ: "="}[row.rel]
    return f"{lhs} {op} {row.rhs}"


# -- linear expression parsing ----------------------------------------------------


def _linear_shape(t: Term) -> None:
    """Load-time check that t is a linear rational expression."""
    if isinstance(t, (Var, Num)):
        return
    if isinstance(t, Struct):
        if t.name in ("+", "-") and len(t.args) == 2:
            _linear_shape(t.args[0])
            _linear_shape(t.args[1])
            return
        if t.name == "-" and len(t.args) == 1:
            _linear_shape(t.args[0])
            return
        if t.name == "*" and len(t.args) == 2:
            a, b = t.args
            if isinstance(a, Num) or isinstance(b, Num):
                _linear_shape(a if isinstance(b, Num) else b)
                return
        if t.name == "/" and len(t.args) == 2 and isinstance(t.args[1], Num):
            _linear_shape(t.args[0])
            return
    raise LoadError(f"not a linear rational expression: {t!r}")


def _linear_form(t: Term, binds: Bindings) -> tuple:
    """Evaluate a term to (coefficients, constant) under current bindings."""
    t = binds.walk(t)
    if isinstance(t, Var):
        return {t.id: ONE}, ZERO
    if isinstance(t, Num):
        return {}, Q(t.value)
    if isinstance(t, Struct):
        if t.name == "+" and len(t.args) == 2:
            c1, k1 = _linear_form(t.args[0], binds)
            c2, k2 = _linear_form(t.args[1], binds)
            for v, c in c2.items():
                c1[v] = c1.get(v, ZERO) + c
            return c1, k1 + k2
        if t.name == "-" and len(t.args) == 2:
            c1, k1 = _linear_form(t.args[0], binds)
            c2, k2 = _linear_form(t.args[1], binds)
            for v, c in c2.items():
                c1[v] = c1.get(v, ZERO) - c
            return c1, k1 - k2
        if t.name == "-" and len(t.args) == 1:
            c1, k1 = _linear_form(t.args[0], binds)
            return {v: -c for v, c in c1.items()}, -k1
        if t.name == "*" and len(t.args) == 2:
            a, b = binds.walk(t.args[0]), binds.walk(t.args[1])
            if isinstance(a, Num):
                c1, k1 = _linear_form(b, binds)
                f = Q(a.value)
            elif isinstance(b, Num):
                c1, k1 = _linear_form(a, binds)
                f = Q(b.value)
            else:
                raise EngineError(f"nonlinear product in constraint: {t!r}")
            return {v: c * f for v, c in c1.items()}, k1 * f
        if t.name == "/" and len(t.args) == 2:
            b = binds.walk(t.args[1])
            if isinstance(b, Num) and b.value != 0:
                c1, k1 = _linear_form(t.args[0], binds)
                f = Q(b.value)
                return {v: c / f for v, c in c1.items()}, k1 / f
    raise EngineError(f"not a linear rational expression at runtime: {t!r}")
