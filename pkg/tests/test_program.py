"""Loader: parsing, linearized heads, rendering, the tabling transformation."""

from __future__ import annotations

import pytest

from tclp.corpus import DIST_CLP_LEFT, GRAPH_CYCLIC_CLP, TABLE_DIST
from tclp.errors import LoadError
from tclp.program import (NEW_ANSWER, TABLED_CALL, WORKER_PREFIX,
                          parse_program, parse_query, parse_term,
                          render_program, transform)
from tclp.terms import Atom, Num, Struct, Var


DIST = TABLE_DIST + DIST_CLP_LEFT + GRAPH_CYCLIC_CLP


class TestParse:
    def test_dist_program_shape(self):
        prog = parse_program(DIST)
        assert prog.tabled == frozenset({("dist", 3)})
        assert prog.solver_name == "q"
        keys = [c.key() for c in prog.clauses]
        assert keys.count(("dist", 3)) == 2
        assert keys.count(("edge", 3)) == 2

    def test_constraint_goals_parsed(self):
        prog = parse_program("edge(b, a, D) :- D #> 25, D #< 35.\n")
        clause = prog.clauses[0]
        ops = [g.name for g in clause.body if isinstance(g, Struct)]
        assert "#>" in ops and "#<" in ops

    def test_empty_file(self):
        prog = parse_program("")
        assert prog.clauses == () and not prog.tabled

    def test_heads_are_linearized(self):
        prog = parse_program("p(a, X, X).\n")
        clause = prog.clauses[0]
        args = clause.head.args
        assert all(isinstance(x, Var) for x in args)
        assert len({x.id for x in args}) == 3
        eqs = [g for g in clause.body if isinstance(g, Struct) and g.name == "="]
        assert len(eqs) == 2

    def test_decimals_are_exact(self):
        t = parse_term("1.3")
        assert isinstance(t, Num)
        assert t.value * 10 == 13

    def test_negative_numbers(self):
        prog = parse_program("p(-2).\n")
        eq = prog.clauses[0].body[0]
        assert eq.args[1] == Num(-2)

    def test_query(self):
        goals, names = parse_query("?- D #< 150, dist(a, Y, D).")
        assert len(goals) == 2
        assert set(names) == {"D", "Y"}

    def test_quoted_atoms(self):
        t = parse_term("p('Hello world')")
        assert t.args[0] == Atom("Hello world")


class TestErrors:
    def test_syntax_error_has_position(self):
        with pytest.raises(LoadError) as err:
            parse_program("p(X) :- q(X.\n")
        assert err.value.line is not None

    def test_missing_terminator(self):
        with pytest.raises(LoadError):
            parse_program("p(X) :- q(X)")

    def test_unknown_directive(self):
        with pytest.raises(LoadError, match="unknown directive"):
            parse_program(":- tansig foo.\n")

    def test_tabled_predicate_arity_mismatch(self):
        with pytest.raises(LoadError, match="no clauses"):
            parse_program(":- table dist/2.\ndist(a, b, 1).\n")

    def test_malformed_table_directive(self):
        with pytest.raises(LoadError):
            parse_program(":- table dist.\n")


class TestRoundTrip:
    def test_parse_render_parse(self):
        prog = parse_program(DIST)
        again = parse_program(render_program(prog))
        assert again.clauses == prog.clauses
        assert again.tabled == prog.tabled
        assert again.solver_name == prog.solver_name

    def test_roundtrip_survives_quoting_and_rationals(self):
        src = "p('odd atom', X) :- X #>= 1.3, q(X).\nq(2).\n"
        prog = parse_program(src)
        assert parse_program(render_program(prog)).clauses == prog.clauses


class TestTransform:
    def test_split_into_entry_and_workers(self):
        prog = transform(parse_program(DIST))
        keys = [c.key() for c in prog.clauses]
        worker = WORKER_PREFIX + "dist"
        assert keys.count(("dist", 3)) == 1            # the entry clause
        assert keys.count((worker, 3)) == 2            # renamed workers
        entry = next(c for c in prog.clauses if c.key() == ("dist", 3))
        assert entry.body[0].name == TABLED_CALL
        for c in prog.clauses:
            if c.key() == (worker, 3):
                assert c.body[-1] == Atom(NEW_ANSWER)

    def test_non_tabled_unchanged(self):
        prog = parse_program(DIST)
        out = transform(prog)
        edges_in = [c for c in prog.clauses if c.key() == ("edge", 3)]
        edges_out = [c for c in out.clauses if c.key() == ("edge", 3)]
        assert edges_in == edges_out

    def test_tabled_fact_becomes_answer_only_body(self):
        prog = transform(parse_program(":- table p/1.\np(a).\n"))
        worker = next(c for c in prog.clauses
                      if c.key() == (WORKER_PREFIX + "p", 1))
        assert worker.body[-1] == Atom(NEW_ANSWER)
        # linearized head unification plus the answer step
        assert len(worker.body) == 2

    def test_retransform_rejected(self):
        once = transform(parse_program(DIST))
        with pytest.raises(LoadError, match="already transformed"):
            transform(once)

    def test_no_tabled_predicates_is_identity(self):
        prog = parse_program("p(a).\n")
        out = transform(prog)
        assert out.clauses == prog.clauses
        assert out.transformed
