"""Answer-management strategies: coverage equivalence and antichains."""

from __future__ import annotations

import pytest

from tclp.corpus import make_diff_reachability, run_text
from tclp.engine import Strategy
from tclp.semantics import is_antichain, report_answers, sets_equivalent


@pytest.mark.parametrize("seed", range(20))
def test_strategy_answer_sets_cover_each_other(seed):
    """On terminating programs the four strategies agree semantically, and
    the both-directions strategy returns an entailment antichain."""
    source, query = make_diff_reachability(seed)
    results = {}
    for strategy in Strategy:
        engine, report = run_text(source, query, strategy=strategy,
                                  solver_name="d", budget=400_000)
        assert report.status == "complete", (seed, strategy)
        results[strategy] = (engine, report_answers(report))

    solver = results[Strategy.BOTH][0].solver
    reference = results[Strategy.BOTH][1]
    for strategy, (engine, answers) in results.items():
        assert sets_equivalent(solver, answers, reference), (seed, strategy)
    assert is_antichain(solver, reference), seed


def test_discard_never_returns_more_general_sets_than_both():
    source, query = make_diff_reachability(5)
    _, rep_both = run_text(source, query, strategy=Strategy.BOTH,
                           solver_name="d", budget=400_000)
    _, rep_discard = run_text(source, query, strategy=Strategy.DISCARD_NEW,
                              solver_name="d", budget=400_000)
    assert len(rep_both.answers) <= len(rep_discard.answers) or \
        len(rep_both.answers) == len(rep_discard.answers)


def test_none_strategy_keeps_duplicates():
    source, query = make_diff_reachability(2)
    eng_none, rep_none = run_text(source, query, strategy=Strategy.NONE,
                                  solver_name="d", budget=400_000)
    eng_both, rep_both = run_text(source, query, strategy=Strategy.BOTH,
                                  solver_name="d", budget=400_000)
    assert rep_none.counters.saved >= rep_both.counters.saved
    assert rep_none.counters.discarded == 0
    assert rep_none.counters.removed == 0
