"""The tabling engine.

Resolution is depth-first within one *execution unit* (the query, one
generator's clause exploration, or one consumer resumption), backtracking
over a binding trail and solver checkpoints. Suspension is explicit: when a
call inside a generator's tree entails an incomplete generator, its
continuation (resolved goals plus a store snapshot) is parked on that
generator's consumer list and the branch fails locally. Saving an answer
enqueues one resumption job per registered consumer; jobs run in FIFO order
from a global worklist, so a generator's clause exploration finishes before
its answers start feeding anyone.

A call made from the query itself never suspends: the worklist is drained,
every frame is then complete, and the call reads the surviving answers
straight from the table.

Three execution modes share this machinery: SLD performs no tabling at all,
variant tabling suspends on call-pattern variance and deduplicates answers
by store equality, and the full mode uses the solver's entailment both for
suspension and for answer management.

The step budget ticks on clause resolutions, resumptions and solver
consultations (entailment/comparison checks, constraint additions,
projections, answer applications); exceeding it aborts the run with a
distinguished non-termination status.
"""

from __future__ import annotations

import gc
import time
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .errors import BudgetExhausted, EngineError
from .program import (CONSTRAINT_FUNCTORS, NEW_ANSWER, TABLED_CALL,
                      WORKER_PREFIX, Clause, Program, transform)
from .solvers.base import ConstraintSolver, EntailOrder, ProjectedStore
from .terms import (Atom, Bindings, Num, Struct, Term, Var, VarSource,
                    rename_offset, rename_term, term_vars, unify_in)
from .trie import TermTrie

DEFAULT_BUDGET = 1_000_000


class Mode(Enum):
    SLD = "sld"
    VARIANT = "tab"
    TCLP = "tclp"


class Strategy(Enum):
    NONE = "none"            # store every answer
    DISCARD_NEW = "discard"  # drop new answers entailed by an old one
    REMOVE_OLD = "remove"    # tombstone old answers entailed by the new one
    BOTH = "both"            # both directions


class LazySeg:
    """Unmaterialized tail of a resolvent: clause body goals still to be
    renamed by `base`. Saves renaming goals a branch never reaches."""

    __slots__ = ("body", "i", "base", "rest")

    def __init__(self, body, i, base, rest):
        self.body = body
        self.i = i
        self.base = base
        self.rest = rest


def _next_goal(goals):
    """Pop one goal off a resolvent (eager cons cell or lazy segment)."""
    if type(goals) is LazySeg:
        goal = rename_offset(goals.body[goals.i], goals.base)
        ni = goals.i + 1
        rest = goals.rest if ni == len(goals.body) else \
            LazySeg(goals.body, ni, goals.base, goals.rest)
        return goal, rest
    return goals


class AnswerStore:
    __slots__ = ("proj", "removed")

    def __init__(self, proj: ProjectedStore) -> None:
        self.proj = proj
        self.removed = False


class AnswerEntry:
    """All answers sharing one Herbrand skeleton, in order of generation."""

    __slots__ = ("skeleton", "nvars", "stores")

    def __init__(self, skeleton: Term) -> None:
        self.skeleton = skeleton            # canonical: vars are 0..nvars-1
        self.nvars = len(term_vars(skeleton))
        self.stores: list[AnswerStore] = []

    def live_stores(self) -> list[AnswerStore]:
        return [s for s in self.stores if not s.removed]


class Consumer:
    __slots__ = ("call_term", "cont_goals", "store_state", "owner", "template")

    def __init__(self, call_term: Term, cont_goals, store_state, owner,
                 template: Term | None) -> None:
        self.call_term = call_term
        self.cont_goals = cont_goals        # cons-list of resolved goals
        self.store_state = store_state
        self.owner = owner                  # frame whose tree suspended here
        self.template = template            # owner's answer pattern, resolved
                                            # as this derivation sees it


class GeneratorFrame:
    __slots__ = ("id", "pattern", "var_ids", "proj", "answer_trie",
                 "answer_entries", "consumers", "complete")

    def __init__(self, fid: int, pattern: Term, var_ids: tuple,
                 proj: ProjectedStore) -> None:
        self.id = fid
        self.pattern = pattern              # renamed call skeleton; immutable
        self.var_ids = var_ids              # free vars of pattern, in order
        self.proj = proj                    # projected store; immutable
        self.answer_trie = TermTrie()
        self.answer_entries: list[AnswerEntry] = []
        self.consumers: list[Consumer] = []
        self.complete = False

    def live_answers(self) -> Iterable[tuple]:
        for entry in self.answer_entries:
            for astore in entry.stores:
                if not astore.removed:
                    yield entry, astore


@dataclass
class Counters:
    saved: int = 0
    discarded: int = 0
    removed: int = 0
    returned: int = 0
    resolutions: int = 0
    resumptions: int = 0
    entail_checks: int = 0
    compare_checks: int = 0
    constraint_adds: int = 0
    projections: int = 0
    applies: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class QueryAnswer:
    bindings: dict            # var name -> resolved Term (ground part)
    free_vars: tuple          # (name, position) for still-free query vars
    proj: ProjectedStore      # projection onto the free query vars


@dataclass
class RunReport:
    answers: list
    counters: Counters
    steps: int
    status: str               # "complete" | "budget_exhausted"
    mode: str
    strategy: str
    solver: str
    elapsed_ms: float
    trace: list
    n_generators: int = 0


# trace steps follow the execution flowchart numbering
TR_CALL, TR_SAVE_GEN, TR_SUSPEND, TR_SAVE_ANS = 0, 4, 6, 11
TR_DISCARD, TR_REMOVE, TR_COMPLETE, TR_APPLY = 12, 13, 14, 15


class Engine:
    def __init__(self, program: Program, solver: ConstraintSolver,
                 mode: Mode = Mode.TCLP, strategy: Strategy = Strategy.BOTH,
                 budget: int = DEFAULT_BUDGET, newest_first: bool = False,
                 trace: bool = False, debug_checks: bool = False) -> None:
        if mode is not Mode.SLD and not program.transformed:
            program = transform(program)
        self.program = program
        self.clause_index = program.index()
        self.solver = solver
        self.mode = mode
        self.strategy = strategy
        self.budget = budget
        self.newest_first = newest_first
        self.trace_on = trace
        self.debug_checks = debug_checks

        self.vars = VarSource(1_000_000)   # clause/query ids stay below this
        self.binds = Bindings()
        self.counters = Counters()
        self.steps = 0
        self.jobs: deque = deque()
        self.call_trie = TermTrie()
        self.frames: list[GeneratorFrame] = []
        self.ptcp: list[GeneratorFrame] = []
        self.trace: list[tuple] = []
        self.answers: list[QueryAnswer] = []
        self._policy = self._make_policy()
        self._query_names: dict[int, str] = {}
        self._unit_template: Term | None = None

    # -- bookkeeping -------------------------------------------------------

    def _tick(self, counter: str) -> None:
        setattr(self.counters, counter, getattr(self.counters, counter) + 1)
        self.steps += 1
        if self.steps > self.budget:
            raise BudgetExhausted(self.steps)

    def _trace(self, step: int, **info) -> None:
        if self.trace_on:
            self.trace.append((step, info))

    def _make_policy(self):
        solver = self.solver
        binds = None  # bound per call through closure over self

        if solver.mirrors_numbers:
            def policy(vid: int, term: Term):
                t = type(term)
                if t is Num:
                    self._tick("constraint_adds")
                    return True if solver.bind_number(vid, term.value) else False
                if t is Var:
                    if solver.knows(vid):
                        self.binds.bind(vid, term)
                        self._tick("constraint_adds")
                        return True if solver.alias(vid, term.id) else False
                    return None
                if solver.knows(vid):
                    return False        # numeric variable vs atom/compound
                return None
            return policy

        if solver.name == "lat":
            def policy(vid: int, term: Term):
                if type(term) is Var:
                    if solver.knows(vid):
                        self.binds.bind(vid, term)
                        self._tick("constraint_adds")
                        return True if solver.alias(vid, term.id) else False
                    return None
                if solver.knows(vid):
                    return False        # abstract variable vs concrete term
                return None
            return policy

        return None

    # -- public entry ---------------------------------------------------------

    def solve(self, query_goals: Sequence[Term], query_names: dict) -> RunReport:
        """Run a query; returns every answer with constraints projected onto
        the query variables."""
        t0 = time.perf_counter()
        self.solver.install_state(self.solver.empty_state())
        self._query_names = {vid: name for name, vid in query_names.items()}
        goals = None
        for g in reversed(tuple(query_goals)):
            goals = (g, goals)
        status = "complete"
        # resolution allocates heavily but creates no reference cycles;
        # keeping the cyclic collector out of the hot loop matters at
        # budget-exhaustion depths
        gc_was_enabled = gc.isenabled()
        gc.disable()
        try:
            self.binds = Bindings()
            self._run_unit(goals, None)
            if self.jobs:
                self._drain_jobs()
        except BudgetExhausted:
            status = "budget_exhausted"
        finally:
            if gc_was_enabled:
                gc.enable()
        elapsed = (time.perf_counter() - t0) * 1000
        return RunReport(
            answers=self.answers, counters=self.counters, steps=self.steps,
            status=status, mode=self.mode.value, strategy=self.strategy.value,
            solver=self.solver.name, elapsed_ms=elapsed, trace=self.trace,
            n_generators=len(self.frames))

    # -- the worklist -----------------------------------------------------------

    def _drain_jobs(self) -> None:
        while self.jobs:
            job = self.jobs.popleft()
            if job[0] == "explore":
                self._explore_frame(job[1])
            else:
                self._resume(job[1], job[2], job[3])

    def _explore_frame(self, frame: GeneratorFrame) -> None:
        self.binds = Bindings()
        self.solver.install_state(self.solver.empty_state())
        self._tick("applies")
        ok = self.solver.apply_answer(frame.var_ids, frame.proj)
        if not ok:
            raise EngineError("generator projection must be self-consistent")
        self.ptcp.append(frame)
        self._unit_template = frame.pattern
        try:
            self._run_unit((frame.pattern, None), frame)
        finally:
            self.ptcp.pop()

    def _resume(self, consumer: Consumer, entry: AnswerEntry,
                astore: AnswerStore) -> None:
        if astore.removed:
            return
        self._tick("resumptions")
        self.binds = Bindings()
        self.solver.install_state(consumer.store_state)
        if not self._apply_answer_term(consumer.call_term, entry, astore):
            return
        self._trace(TR_APPLY, frame=consumer.owner.id if consumer.owner else None)
        self.ptcp.append(consumer.owner)
        self._unit_template = consumer.template
        try:
            self._run_unit(consumer.cont_goals, consumer.owner)
        finally:
            self.ptcp.pop()

    def _apply_answer_term(self, call_term: Term, entry: AnswerEntry,
                           astore: AnswerStore) -> bool:
        """Herbrand part first (always unifiable for variant patterns), then
        the projected store; False if the store became inconsistent."""
        base = self.vars.fresh_block(entry.nvars)
        skel = rename_offset(entry.skeleton, base)
        if not unify_in(call_term, skel, self.binds, self._policy):
            return False
        targets = []
        for i in range(entry.nvars):
            v = self.binds.walk(Var(base + i))
            if type(v) is not Var:
                # bound to a non-var by unification; only possible for terms
                # the store cannot constrain, use a dummy unconstrained var
                v = self.vars.fresh()
            targets.append(v.id)
        self._tick("applies")
        return self.solver.apply_answer(targets, astore.proj)

    # -- one execution unit -------------------------------------------------------

    def _run_unit(self, goals, owner: GeneratorFrame | None) -> None:
        binds = self.binds
        solver = self.solver
        stack: list[tuple] = [("G", goals, binds.mark(), solver.checkpoint())]
        while stack:
            entry = stack.pop()
            kind = entry[0]
            if kind == "G":
                _, goals, tmark, smark = entry
                binds.undo_to(tmark)
                solver.rollback(smark)
            elif kind == "C":
                _, goal, clause, rest, tmark, smark = entry
                binds.undo_to(tmark)
                solver.rollback(smark)
                self._tick("resolutions")
                base = self._bind_head(goal, clause)
                if clause.body:
                    goals = LazySeg(clause.body, 0, base, rest)
                else:
                    goals = rest
            else:  # "A": apply a stored answer inline (complete table)
                _, call_term, rest, aentry, astore, tmark, smark = entry
                binds.undo_to(tmark)
                solver.rollback(smark)
                if astore.removed:
                    continue
                if not self._apply_answer_term(call_term, aentry, astore):
                    continue
                self._trace(TR_APPLY, frame=None)
                goals = rest
            self._step_goals(goals, stack, owner)

    def _step_goals(self, goals, stack: list, owner: GeneratorFrame | None) -> None:
        """Run the deterministic prefix of a branch; push choice points."""
        binds = self.binds
        while True:
            if goals is None:
                if owner is None:
                    self._record_query_answer()
                    return
                raise EngineError("worker bodies must end in the answer step")
            goal, rest = _next_goal(goals)
            g = binds.walk(goal)
            tg = type(g)
            if tg is Atom:
                name, arity, args = g.name, 0, ()
            elif tg is Struct:
                name, arity, args = g.name, len(g.args), g.args
            else:
                raise EngineError(f"callable goal expected, got {g!r}")

            if name == NEW_ANSWER:
                self._new_answer(owner)
                return
            if name == TABLED_CALL:
                self._tabled_call(args[0], rest, stack, owner)
                return
            if name == "true" and arity == 0:
                goals = rest
                continue
            if arity == 2 and name in ("=", "is", "<", "=<", ">", ">=", "=:="):
                if not self._builtin(name, args):
                    return
                goals = rest
                continue
            if self.solver.is_constraint_functor(name, arity):
                self._tick("constraint_adds")
                if not self.solver.add_goal(g, binds):
                    return
                goals = rest
                continue
            if name in CONSTRAINT_FUNCTORS:
                raise EngineError(
                    f"constraint goal {name}/{arity} has no matching solver "
                    f"(running with solver {self.solver.name!r})")
            clauses = self.clause_index.get((name, arity))
            if not clauses:
                return  # no matching clauses: fail
            tmark = binds.mark()
            smark = self.solver.checkpoint()
            for clause in reversed(clauses):
                stack.append(("C", g, clause, rest, tmark, smark))
            return

    def _bind_head(self, goal: Term, clause: Clause) -> int:
        """Resolve a goal against a linearized clause head.

        Heads are p(V0..Vn-1) after linearization, so head unification is
        just binding each fresh head variable to the corresponding goal
        argument; it cannot fail (argument tests live in the body).
        """
        base = self.vars.fresh_block(clause.nvars)
        if type(goal) is Atom:
            return base
        binds = self.binds
        policy = self._policy
        mapping = binds.map
        trail = binds.trail
        i = base
        for arg in goal.args:
            a = binds.walk(arg)
            if policy is not None and type(a) is not Var:
                handled = policy(i, a)
                if handled is True:
                    i += 1
                    continue
                if handled is False:
                    raise EngineError("binding a fresh variable cannot fail")
            mapping[i] = a
            trail.append(i)
            i += 1
        return base

    # -- builtins ------------------------------------------------------------------

    def _builtin(self, name: str, args: tuple) -> bool:
        binds = self.binds
        if name == "=":
            return unify_in(args[0], args[1], binds, self._policy)
        if name == "is":
            value = self._eval_arith(args[1])
            return unify_in(args[0], Num(value), binds, self._policy)
        a = binds.walk(args[0])
        b = binds.walk(args[1])
        if type(a) is not Num or type(b) is not Num:
            raise EngineError(f"comparison needs ground numbers: {name}")
        if name == "<":
            return a.value < b.value
        if name == "=<":
            return a.value <= b.value
        if name == ">":
            return a.value > b.value
        if name == ">=":
            return a.value >= b.value
        return a.value == b.value  # =:=

    def _eval_arith(self, t: Term):
        t = self.binds.walk(t)
        if type(t) is Num:
            return t.value
        if type(t) is Struct and len(t.args) == 2 and t.name in "+-*/":
            x = self._eval_arith(t.args[0])
            y = self._eval_arith(t.args[1])
            if t.name == "+":
                return x + y
            if t.name == "-":
                return x - y
            if t.name == "*":
                return x * y
            return Fraction(x) / Fraction(y)
        if type(t) is Struct and t.name == "-" and len(t.args) == 1:
            return -self._eval_arith(t.args[0])
        raise EngineError(f"arithmetic needs ground numbers: {t!r}")

    # -- tabled calls -----------------------------------------------------------------

    def _abstract_numbers(self, term: Term) -> Term:
        """Lift numeric arguments of a call/answer into constrained variables
        so entailment sees them (only for solvers that mirror numbers)."""
        if not self.solver.mirrors_numbers or type(term) is not Struct:
            return term
        args = list(term.args)
        changed = False
        for i, a in enumerate(args):
            if type(a) is Num:
                v = self.vars.fresh()
                self._tick("constraint_adds")
                if not self.solver.bind_number(v.id, a.value):
                    raise EngineError("fresh numeric variable cannot clash")
                args[i] = v
                changed = True
        return Struct(term.name, tuple(args)) if changed else term

    def _tabled_call(self, inner: Term, rest, stack: list,
                     owner: GeneratorFrame | None) -> None:
        binds = self.binds
        solver = self.solver
        self._tick("resolutions")
        call_term = self._abstract_numbers(binds.resolve(inner))
        self._trace(TR_CALL, call=str(call_term))
        leaf, fresh = self.call_trie.lookup_or_insert(call_term)
        if leaf.payload is None:
            leaf.payload = []
        frames: list[GeneratorFrame] = leaf.payload
        var_ids = tuple(term_vars(call_term))

        early = None
        frame = None
        if self.mode is Mode.VARIANT:
            frame = frames[0] if frames else None
        else:
            self._tick("projections")
            early = solver.early_call_projection(var_ids)
            scan = reversed(frames) if self.newest_first else frames
            for f in scan:
                self._tick("entail_checks")
                if solver.call_entail(early, f.proj):
                    frame = f
                    break

        if frame is None:
            self._tick("projections")
            if self.mode is Mode.VARIANT or early is None:
                proj = solver.store_projection(var_ids)
            else:
                proj = solver.final_call_projection(var_ids, early)
            base = self.vars.fresh_block(len(var_ids))
            mapping = {vid: Var(base + i) for i, vid in enumerate(var_ids)}
            pattern = rename_term(call_term, mapping)
            frame = GeneratorFrame(len(self.frames), pattern,
                                   tuple(base + i for i in range(len(var_ids))),
                                   proj)
            frames.append(frame)
            self.frames.append(frame)
            self._trace(TR_SAVE_GEN, frame=frame.id, pattern=str(pattern))
            self.jobs.append(("explore", frame))

        if owner is None:
            # query-level call: run the fixpoint, then read the table;
            # the scheduler's units clobber live state, so save ours
            saved_binds = self.binds
            saved_template = self._unit_template
            ctx = solver.save_context()
            self._drain_jobs()
            self._complete_all()
            self.binds = saved_binds
            self._unit_template = saved_template
            solver.restore_context(ctx)
            self._trace(TR_COMPLETE, frame=frame.id)
            self._push_answer_alternatives(frame, call_term, rest, stack)
        elif frame.complete:
            self._trace(TR_COMPLETE, frame=frame.id)
            self._push_answer_alternatives(frame, call_term, rest, stack)
        else:
            cont = self._resolve_cons(rest)
            template = self.binds.resolve(self._unit_template)
            consumer = Consumer(call_term, cont, solver.clone_state(), owner,
                                template)
            frame.consumers.append(consumer)
            self._trace(TR_SUSPEND, frame=frame.id, call=str(call_term),
                        call_proj=getattr(early, "payload", None),
                        gen_proj=frame.proj.payload)
            for aentry, astore in frame.live_answers():
                self.jobs.append(("resume", consumer, aentry, astore))
            # branch fails here; the consumer continues via resumptions

    def _push_answer_alternatives(self, frame: GeneratorFrame, call_term: Term,
                                  rest, stack: list) -> None:
        tmark = self.binds.mark()
        smark = self.solver.checkpoint()
        alts = list(frame.live_answers())
        for aentry, astore in reversed(alts):
            stack.append(("A", call_term, rest, aentry, astore, tmark, smark))

    def _resolve_cons(self, goals) -> Any:
        out = []
        while goals is not None:
            g, goals = _next_goal(goals)
            out.append(self.binds.resolve(g))
        cons = None
        for g in reversed(out):
            cons = (g, cons)
        return cons

    def _complete_all(self) -> None:
        # the worklist is empty, so no frame can receive further answers;
        # mutually dependent frames complete together here
        for frame in self.frames:
            if not frame.complete:
                frame.complete = True
                frame.consumers.clear()

    # -- answers ---------------------------------------------------------------------

    def _new_answer(self, frame: GeneratorFrame | None) -> None:
        if frame is None:
            raise EngineError("answer step outside a generator")
        if not self.ptcp or self.ptcp[-1] is not frame:
            raise EngineError("answer step for a generator that is not executing")
        binds = self.binds
        solver = self.solver
        if self._unit_template is None:
            raise EngineError("answer step outside a generator unit")
        ans_term = binds.resolve(self._unit_template)
        leaf, fresh = frame.answer_trie.lookup_or_insert(ans_term)
        if fresh:
            leaf.payload = AnswerEntry(leaf.key)
            frame.answer_entries.append(leaf.payload)
        entry: AnswerEntry = leaf.payload
        var_ids = tuple(term_vars(ans_term))

        self._tick("projections")
        early = solver.early_ans_projection(var_ids)

        if self.mode is Mode.VARIANT:
            self._tick("projections")
            proj = solver.final_ans_projection(var_ids, early)
            for astore in entry.stores:
                if not astore.removed and astore.proj.payload == proj.payload:
                    self.counters.discarded += 1
                    self._trace(TR_DISCARD, answer=str(ans_term))
                    return
            self._save_answer(frame, entry, proj, ans_term)
            return

        if self.strategy is not Strategy.NONE:
            for astore in entry.stores:
                if astore.removed:
                    continue
                self._tick("compare_checks")
                res = solver.answer_compare(early, astore.proj)
                if res is EntailOrder.LESS_EQ and self.strategy in (
                        Strategy.DISCARD_NEW, Strategy.BOTH):
                    self.counters.discarded += 1
                    if self.trace_on:
                        mine = solver.final_ans_projection(var_ids, early)
                        self._trace(TR_DISCARD, answer=str(ans_term),
                                    store=self._render_store(mine, entry),
                                    against=self._render_store(astore.proj, entry))
                    return
                if res is EntailOrder.GREATER and self.strategy in (
                        Strategy.REMOVE_OLD, Strategy.BOTH):
                    astore.removed = True
                    self.counters.removed += 1
                    self._trace(TR_REMOVE,
                                removed=self._render_store(astore.proj, entry))
        self._tick("projections")
        proj = solver.final_ans_projection(var_ids, early)
        self._save_answer(frame, entry, proj, ans_term)
        if self.debug_checks and self.strategy is Strategy.BOTH:
            self._assert_antichain(entry)

    def _save_answer(self, frame: GeneratorFrame, entry: AnswerEntry,
                     proj: ProjectedStore, ans_term: Term) -> None:
        astore = AnswerStore(proj)
        entry.stores.append(astore)
        self.counters.saved += 1
        self._trace(TR_SAVE_ANS, frame=frame.id, answer=str(ans_term),
                    store=self._render_store(proj, entry))
        for consumer in frame.consumers:
            self.jobs.append(("resume", consumer, entry, astore))

    def _render_store(self, proj: ProjectedStore, entry: AnswerEntry) -> str:
        names = [f"V{i}" for i in range(proj.var_count)]
        return " & ".join(self.solver.render_projected(proj, names)) or "true"

    def _assert_antichain(self, entry: AnswerEntry) -> None:
        live = entry.live_stores()
        for i, a in enumerate(live):
            for b in live[i + 1:]:
                pa, pb = a.proj, b.proj
                sa = _standalone(self.solver, pa)
                if sa.entails_projection(list(range(pa.var_count)), pb):
                    raise EngineError("answer list is not an antichain")
                sb = _standalone(self.solver, pb)
                if sb.entails_projection(list(range(pb.var_count)), pa):
                    raise EngineError("answer list is not an antichain")

    def _record_query_answer(self) -> None:
        binds = self.binds
        self.counters.returned += 1
        bindings = {}
        free = []
        free_ids: list[int] = []
        for vid, name in self._query_names.items():
            t = binds.resolve(Var(vid))
            if type(t) is Var:
                if t.id not in free_ids:
                    free_ids.append(t.id)
                free.append((name, free_ids.index(t.id)))
            else:
                bindings[name] = t
                if type(t) is Struct:
                    for v in term_vars(t):
                        if v not in free_ids:
                            free_ids.append(v)
        self._tick("projections")
        proj = self.solver.store_projection(free_ids)
        self.answers.append(QueryAnswer(bindings, tuple(free), proj))


def _standalone(solver: ConstraintSolver, proj: ProjectedStore):
    """Fresh solver of the same kind holding exactly proj (for set algebra)."""
    fresh = type(solver)() if solver.name != "lat" else type(solver)(solver.lattice)
    fresh.install_state(fresh.empty_state())
    ok = fresh.apply_answer(list(range(proj.var_count)), proj)
    if not ok:
        raise EngineError("stored projection must be self-consistent")
    return fresh
