"""Bottom-up evaluation and the oracle gate."""

from __future__ import annotations

from tclp import corpus
from tclp.fixpoint import bottom_up_fixpoint
from tclp.program import parse_program
from tclp.semantics import answer_entails, oracle_gate
from tclp.solvers import make_solver
from tclp.solvers.rationals import EQ, LT, make_row
from tclp.rational import Q
from tclp.solvers.base import ProjectedStore


def _restriction_lt(bound: int) -> ProjectedStore:
    return ProjectedStore(1, (make_row({0: Q(1)}, LT, Q(bound)),))


class TestNat:
    def test_seeded_bound_gives_three_facts(self):
        prog = parse_program(corpus.NAT)
        out = bottom_up_fixpoint(prog, make_solver("q"),
                                 restrict={("nat", 1): _restriction_lt(3)})
        assert out.status == "complete"
        values = sorted(str(f.proj.payload[0].rhs) for f in out.facts)
        assert values == ["0", "1", "2"]

    def test_unrestricted_exhausts_budget(self):
        prog = parse_program(corpus.NAT)
        out = bottom_up_fixpoint(prog, make_solver("q"), budget=2_000)
        assert out.status == "budget_exhausted"


class TestDist:
    def test_restricted_facts_cover_the_golden_answers(self):
        prog = parse_program(corpus.TABLE_DIST + corpus.DIST_CLP_LEFT +
                             corpus.GRAPH_CYCLIC_CLP)
        out = bottom_up_fixpoint(prog, make_solver("q"),
                                 restrict={("dist", 3): ProjectedStore(
                                     3, (make_row({2: Q(1)}, LT, Q(150)),))})
        assert out.status == "complete"
        dist_facts = out.for_predicate("dist", 3)
        from_a = [f for f in dist_facts
                  if getattr(f.skeleton.args[0], "name", None) == "a"]
        assert len(from_a) == 3

    def test_empty_program(self):
        out = bottom_up_fixpoint(parse_program(""), make_solver("q"))
        assert out.facts == () and out.status == "complete"

    def test_facts_only_program(self):
        out = bottom_up_fixpoint(parse_program("p(a).\np(b).\n"),
                                 make_solver("none"))
        assert len(out.facts) == 2


class TestOracleGate:
    def test_dist(self):
        src = corpus.TABLE_DIST + corpus.DIST_CLP_LEFT + corpus.GRAPH_CYCLIC_CLP
        gate = oracle_gate(src, corpus.QUERY_CLP, "q")
        assert gate["ok"], gate

    def test_nat_bounded(self):
        gate = oracle_gate(corpus.NAT, "?- X #< 10, nat(X).", "q")
        assert gate["ok"], gate
        assert gate["engine_answers"] == 10

    def test_more_general_fact_subsumes(self):
        # the fixpoint keeps only V>=0 once it exists; engine answers all
        # entail it
        src = """
:- solver q.
:- table p/1.
p(X) :- X #>= 0.
p(X) :- X #>= 5.
"""
        gate = oracle_gate(src, "?- p(X).", "q")
        assert gate["ok"], gate
        assert gate["oracle_facts"] == 1
