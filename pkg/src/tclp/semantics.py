"""Answer-set algebra: entailment between answers and coverage between sets.

An answer is a pair (Herbrand skeleton, projected store). Answer a entails
answer b when a's skeleton is an instance of b's and, under that matching,
a's store entails b's. Set A covers set B when every member of B entails
some member of A; two sets are semantically equal when they cover each
other. This is what the acceptance gates use to compare engine output with
the bottom-up oracle and across answer-management strategies.
"""

from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .engine import QueryAnswer, RunReport
from .errors import EngineError
from .solvers.base import ConstraintSolver, ProjectedStore
from .terms import (Atom, Bindings, Num, Struct, Term, Var, VarSource,
                    rename_offset, term_vars)


def match_general(general: Term, specific: Term) -> dict | None:
    """One-way matching: bind general's variables so it equals specific.

    Specific-side variables are constants: a general non-variable never
    matches a specific variable.
    """
    binding: dict[int, Term] = {}
    stack = [(general, specific)]
    while stack:
        g, s = stack.pop()
        tg = type(g)
        if tg is Var:
            seen = binding.get(g.id)
            if seen is None:
                binding[g.id] = s
            elif seen != s:
                return None
            continue
        if type(s) is Var:
            return None
        if tg is Atom:
            if type(s) is not Atom or g.name != s.name:
                return None
        elif tg is Num:
            if type(s) is not Num or g.value != s.value:
                return None
        else:
            if type(s) is not Struct or g.name != s.name or len(g.args) != len(s.args):
                return None
            stack.extend(zip(g.args, s.args))
    return binding


def fresh_solver(solver: ConstraintSolver) -> ConstraintSolver:
    if solver.name == "lat":
        return type(solver)(solver.lattice)
    return type(solver)()


def install_projection(solver: ConstraintSolver, proj: ProjectedStore,
                       base: int = 0) -> list:
    """Load proj onto fresh variables base..base+n-1 of a fresh store."""
    var_ids = [base + i for i in range(proj.var_count)]
    if not solver.apply_answer(var_ids, proj):
        raise EngineError("stored projection must be self-consistent")
    return var_ids


def answer_entails(solver: ConstraintSolver,
                   a: tuple, b: tuple) -> bool:
    """a = (skeleton, proj) entails b = (skeleton, proj)."""
    skel_a, proj_a = a
    skel_b, proj_b = b
    sigma = match_general(skel_b, skel_a)
    if sigma is None:
        return False
    scratch = fresh_solver(solver)
    scratch.install_state(scratch.empty_state())
    base = 1000
    install_projection(scratch, proj_a, base)
    # map b's canonical variables through the match onto a's variables
    dummy = VarSource(base + proj_a.var_count + 1000)
    a_order = {i: base + i for i in range(proj_a.var_count)}
    targets = []
    for i in range(proj_b.var_count):
        t = sigma.get(i)
        if type(t) is Var:
            targets.append(a_order.get(t.id, dummy.fresh().id))
        elif t is None or type(t) is Struct:
            targets.append(dummy.fresh().id)
        else:  # Atom or Num matched against b's variable position
            if type(t) is Num and scratch.mirrors_numbers:
                v = dummy.fresh()
                if not scratch.bind_number(v.id, t.value):
                    return False
                targets.append(v.id)
            else:
                targets.append(dummy.fresh().id)
    return scratch.entails_projection(targets, proj_b)


def report_answers(report: RunReport) -> list:
    """Engine query answers as (skeleton, proj) pairs over query variables.

    The skeleton is a tuple-term of the query variables' values in name
    order; still-free variables appear as the projection's positional vars.
    """
    out = []
    names = sorted({n for a in report.answers for n in
                    list(a.bindings) + [nm for nm, _ in a.free_vars]})
    for a in report.answers:
        args = []
        for n in names:
            if n in a.bindings:
                args.append(a.bindings[n])
            else:
                pos = dict(a.free_vars)[n]
                args.append(Var(pos))
        out.append((Struct("$ans", tuple(args)) if args else Atom("$ans"), a.proj))
    return out


def goal_answer_pairs(report: RunReport, goal: Term, names: dict) -> list:
    """Answers reshaped as instances of a query goal.

    Each answer instantiates the goal's variables with the answer's bindings;
    still-free variables become the projection's positional variables, so the
    pairs compare directly against bottom-up facts for the same predicate.
    """
    id_to_name = {vid: n for n, vid in names.items()}
    out = []
    for a in report.answers:
        free_pos = dict(a.free_vars)

        def inst(t: Term) -> Term:
            if type(t) is Var:
                name = id_to_name.get(t.id)
                if name is None:
                    return Var(10_000 + t.id)   # unnamed: unconstrained
                if name in a.bindings:
                    return a.bindings[name]
                return Var(free_pos[name])
            if type(t) is Struct:
                return Struct(t.name, tuple(inst(x) for x in t.args))
            return t

        out.append((inst(goal), a.proj))
    return out


def set_covers(solver: ConstraintSolver, covering: Sequence, covered: Sequence) -> bool:
    """Every answer in `covered` entails some answer in `covering`."""
    return all(any(answer_entails(solver, b, a) for a in covering)
               for b in covered)


def sets_equivalent(solver: ConstraintSolver, sa: Sequence, sb: Sequence) -> bool:
    return set_covers(solver, sa, sb) and set_covers(solver, sb, sa)


def is_antichain(solver: ConstraintSolver, answers: Sequence) -> bool:
    """No two distinct answers are entailment-comparable."""
    for i, a in enumerate(answers):
        for b in answers[i + 1:]:
            if answer_entails(solver, a, b) or answer_entails(solver, b, a):
                return False
    return True


def fact_pairs(facts: Iterable) -> list:
    return [(f.skeleton, f.proj) for f in facts]


def oracle_gate(program, query_text: str, solver_name: str,
                strategy=None, budget: int = 1_000_000,
                fixpoint_budget: int = 200_000, lattice=None) -> dict:
    """Run a query top-down and bottom-up; check mutual entailment.

    The query must be constraint goals followed by one call to a tabled
    predicate. The constraint prefix is projected onto the call's argument
    positions and seeded into the fixpoint as a restriction, then the two
    answer sets must cover each other.
    """
    from .engine import Engine, Mode, Strategy
    from .fixpoint import bottom_up_fixpoint
    from .program import parse_program, parse_query
    from .solvers import make_solver

    prog = program if not isinstance(program, str) else parse_program(program)
    goals, names = parse_query(query_text)
    *prefix, call = goals
    if not isinstance(call, Struct):
        raise EngineError("oracle gate needs a compound query goal")

    solver = make_solver(solver_name, lattice)
    engine = Engine(prog, solver, Mode.TCLP,
                    strategy or Strategy.BOTH, budget=budget)
    report = engine.solve(goals, names)
    if report.status != "complete":
        return {"ok": False, "reason": f"engine: {report.status}",
                "report": report}

    # restriction: the prefix store projected onto the call's arguments
    scratch = make_solver(solver_name, lattice)
    scratch.install_state(scratch.empty_state())
    binds = Bindings()
    for g in prefix:
        if not (isinstance(g, Struct) and scratch.is_constraint_functor(g.name, len(g.args))):
            raise EngineError("oracle gate query prefix must be constraints")
        if not scratch.add_goal(g, binds):
            raise EngineError("inconsistent query constraints")
    arg_vars = []
    aliases = VarSource(500_000)
    for arg in call.args:
        if type(arg) is Var:
            arg_vars.append(arg.id)
        else:
            arg_vars.append(aliases.fresh().id)   # non-var arg: unconstrained
    restriction = scratch.store_projection(arg_vars)

    key = (call.name, len(call.args))
    fix = bottom_up_fixpoint(prog, make_solver(solver_name, lattice),
                             restrict={key: restriction},
                             budget=fixpoint_budget)
    if fix.status != "complete":
        return {"ok": False, "reason": f"fixpoint: {fix.status}", "report": report,
                "fixpoint": fix}

    engine_pairs = goal_answer_pairs(report, call, names)
    compare = make_solver(solver_name, lattice)
    fact_list = [(f.skeleton, f.proj) for f in fix.for_predicate(*key)
                 if _unifiable(f.skeleton, call)]
    covers_up = set_covers(compare, engine_pairs, fact_list)
    covers_down = set_covers(compare, fact_list, engine_pairs)
    return {"ok": covers_up and covers_down,
            "engine_answers": len(engine_pairs),
            "oracle_facts": len(fact_list),
            "oracle_covered_by_engine": covers_up,
            "engine_covered_by_oracle": covers_down,
            "report": report, "fixpoint": fix}


def _unifiable(a: Term, b: Term) -> bool:
    from .terms import Bindings, rename_apart, unify_in
    src = VarSource(700_000)
    return unify_in(rename_apart(a, src), rename_apart(b, src), Bindings())
