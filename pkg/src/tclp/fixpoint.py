"""Bottom-up fixpoint evaluation: the verification oracle.

Computes the least fixpoint of the immediate-consequence operator over the
constraint domain: every clause body is evaluated against every combination
of already-derived facts, the body constraints are conjoined, the result is
projected onto the head variables, and a new fact is kept only when no more
general fact for the same skeleton is already present.

This is independent of the tabling engine (no suspension, no answer
management) and is used to cross-check its answers.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .errors import BudgetExhausted, EngineError, LoadError
from .program import CONSTRAINT_FUNCTORS, Program
from .solvers.base import ConstraintSolver, ProjectedStore
from .terms import (Atom, Bindings, Num, Struct, Term, Var, VarSource,
                    rename_offset, term_vars, unify_in)
from .trie import TermTrie


@dataclass(frozen=True)
class Fact:
    skeleton: Term            # canonical: vars are 0..n-1
    proj: ProjectedStore


@dataclass
class FixpointResult:
    facts: tuple
    status: str               # "complete" | "budget_exhausted"
    steps: int
    rounds: int

    def for_predicate(self, name: str, arity: int) -> list:
        out = []
        for f in self.facts:
            key = (f.skeleton.name, len(f.skeleton.args)) \
                if isinstance(f.skeleton, Struct) else (f.skeleton.name, 0)
            if key == (name, arity):
                out.append(f)
        return out


class _Evaluator:
    """One clause-body evaluation against chosen facts."""

    def __init__(self, solver: ConstraintSolver):
        self.solver = solver
        self.vars = VarSource(1_000_000)
        self.policy = self._make_policy()

    def _make_policy(self):
        solver = self.solver
        if solver.mirrors_numbers:
            def policy(vid: int, term):
                t = type(term)
                if t is Num:
                    return True if solver.bind_number(vid, term.value) else False
                if t is Var:
                    if solver.knows(vid):
                        self.binds.bind(vid, term)
                        return True if solver.alias(vid, term.id) else False
                    return None
                if solver.knows(vid):
                    return False
                return None
            return policy
        if solver.name == "lat":
            def policy(vid: int, term):
                if type(term) is Var:
                    if solver.knows(vid):
                        self.binds.bind(vid, term)
                        return True if solver.alias(vid, term.id) else False
                    return None
                if solver.knows(vid):
                    return False
                return None
            return policy
        return None

    def abstract_numbers(self, term: Term) -> Term:
        if not self.solver.mirrors_numbers or type(term) is not Struct:
            return term
        args = list(term.args)
        changed = False
        for i, a in enumerate(args):
            if type(a) is Num:
                v = self.vars.fresh()
                if not self.solver.bind_number(v.id, a.value):
                    raise EngineError("fresh numeric variable cannot clash")
                args[i] = v
                changed = True
        return Struct(term.name, tuple(args)) if changed else term

    def run(self, clause, fact_choice: Sequence[Fact],
            restriction: ProjectedStore | None = None):
        """Evaluate one clause body against one fact per body literal.

        Returns (skeleton, proj) for the derived head or None on failure.
        """
        solver = self.solver
        solver.install_state(solver.empty_state())
        self.binds = Bindings()
        binds = self.binds
        base = self.vars.fresh_block(clause.nvars)
        head = rename_offset(clause.head, base)
        if restriction is not None:
            args = [base + i for i in range(restriction.var_count)]
            if not solver.apply_answer(args, restriction):
                return None
        facts = iter(fact_choice)
        for goal in clause.body:
            g = rename_offset(goal, base)
            if isinstance(g, Struct) and g.name == "=" and len(g.args) == 2:
                if not unify_in(g.args[0], g.args[1], binds, self.policy):
                    return None
                continue
            if isinstance(g, Struct) and solver.is_constraint_functor(g.name, len(g.args)):
                if not solver.add_goal(binds.resolve(g), binds):
                    return None
                continue
            if isinstance(g, (Struct, Atom)) and \
                    (g.name if isinstance(g, Atom) else g.name) in CONSTRAINT_FUNCTORS:
                raise LoadError(f"constraint goal {g!r} has no matching solver")
            # a body literal: resolve against the chosen fact
            fact = next(facts)
            fbase = self.vars.fresh_block(fact.proj.var_count + 8)
            skel = rename_offset(fact.skeleton, fbase)
            if not unify_in(g, skel, binds, self.policy):
                return None
            targets = []
            n = len(term_vars(fact.skeleton))
            for i in range(n):
                v = binds.walk(Var(fbase + i))
                if type(v) is not Var:
                    v = self.vars.fresh()
                targets.append(v.id)
            if not solver.apply_answer(targets, fact.proj):
                return None
        head_term = self.abstract_numbers(binds.resolve(head))
        var_ids = term_vars(head_term)
        proj = solver.store_projection(var_ids)
        return head_term, proj


def _literals(clause) -> list:
    """Body goals that resolve against facts (not '=' or constraints)."""
    out = []
    for g in clause.body:
        if isinstance(g, Struct) and g.name == "=" and len(g.args) == 2:
            continue
        if isinstance(g, Struct) and g.name in CONSTRAINT_FUNCTORS:
            continue
        out.append(g)
    return out


def _standalone_entails(solver: ConstraintSolver, pa: ProjectedStore,
                        pb: ProjectedStore) -> bool:
    """pa entails pb over positionally identified variables."""
    fresh = type(solver)() if solver.name != "lat" else type(solver)(solver.lattice)
    fresh.install_state(fresh.empty_state())
    if not fresh.apply_answer(list(range(pa.var_count)), pa):
        raise EngineError("stored projection must be self-consistent")
    return fresh.entails_projection(list(range(pb.var_count)), pb)


def bottom_up_fixpoint(program: Program, solver: ConstraintSolver,
                       restrict: dict | None = None,
                       budget: int = 100_000) -> FixpointResult:
    """Least fixpoint of the program's immediate consequences.

    `restrict` maps (name, arity) to a ProjectedStore over the head argument
    positions; it is conjoined at the start of every clause of that
    predicate, which is how a query bound is seeded into an otherwise
    diverging fixpoint (clause heads are linearized, so head argument i is
    clause variable i).

    Facts are deduplicated by skeleton variance; a new constraint store is
    dropped when it entails a stored one (the more general fact stays).
    """
    if program.transformed:
        raise LoadError("bottom-up evaluation works on untransformed programs")
    clauses = program.clauses
    restrict = restrict or {}

    tries: dict[tuple, TermTrie] = {}
    by_pred: dict[tuple, list] = {}
    all_facts: list[Fact] = []
    evaluator = _Evaluator(solver)
    steps = 0
    rounds = 0
    status = "complete"

    def key_of(term: Term) -> tuple:
        if isinstance(term, Struct):
            return (term.name, len(term.args))
        return (term.name, 0)

    def insert(head_term: Term, proj: ProjectedStore) -> bool:
        key = key_of(head_term)
        trie = tries.setdefault(key, TermTrie())
        leaf, fresh_leaf = trie.lookup_or_insert(head_term)
        if fresh_leaf:
            leaf.payload = []
        stores: list = leaf.payload
        for old in stores:
            if _standalone_entails(solver, proj, old):
                return False    # a more general fact is already present
        fact = Fact(leaf.key, proj)
        stores.append(proj)
        by_pred.setdefault(key, []).append(fact)
        all_facts.append(fact)
        return True

    changed = True
    try:
        while changed:
            rounds += 1
            changed = False
            for clause in clauses:
                lits = _literals(clause)
                pools = []
                for lit in lits:
                    key = key_of(lit)
                    pools.append(list(by_pred.get(key, ())))
                if lits and any(not p for p in pools):
                    continue
                restriction = restrict.get(clause.key())
                for choice in product(*pools):
                    steps += 1
                    if steps > budget:
                        raise BudgetExhausted(steps)
                    result = evaluator.run(clause, choice, restriction)
                    if result is None:
                        continue
                    head_term, proj = result
                    if insert(head_term, proj):
                        changed = True
    except BudgetExhausted:
        status = "budget_exhausted"
    return FixpointResult(tuple(all_facts), status, steps, rounds)
