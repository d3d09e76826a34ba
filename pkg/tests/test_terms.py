"""Kernel: terms, unification, variants, canonical forms."""

from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from tclp.terms import (Atom, Bindings, Num, Struct, Var, VarSource,
                        apply_subst, canonicalize, rename_apart, term_vars,
                        unify, unify_in, variant)
from tclp.trie import TermTrie


def s(name, *args):
    return Struct(name, tuple(args))


X, Y, Z = Var(0), Var(1), Var(2)
a, b = Atom("a"), Atom("b")


class TestUnify:
    def test_textbook_mgu(self):
        out = unify(s("f", X, b), s("f", a, Y))
        assert apply_subst(X, out) == a
        assert apply_subst(Y, out) == b

    def test_distinct_atoms(self):
        assert unify(a, b) is None

    def test_occurs_check(self):
        assert unify(X, s("f", X)) is None

    def test_extends_given_substitution(self):
        out = unify(X, Y, {0: a})
        assert out is not None
        assert apply_subst(Y, out) == a

    def test_failure_on_conflicting_binding(self):
        assert unify(s("f", X, X), s("f", a, b)) is None

    def test_numbers(self):
        assert unify(Num(3), Num(3)) == {}
        assert unify(Num(3), Num(4)) is None

    def test_idempotent(self):
        out = unify(s("f", X, Y), s("f", Y, a))
        once = {v: apply_subst(t, out) for v, t in out.items()}
        assert once == out


class TestVariant:
    def test_paper_example(self):
        # dist(a,Y,D) is a variant of dist(a,Z,E)
        assert variant(s("dist", a, Y, X), s("dist", a, Z, Var(5)))

    def test_non_bijective(self):
        assert not variant(s("f", X, X), s("f", X, Y))
        assert not variant(s("f", X, Y), s("f", Z, Z))

    def test_ground_identity(self):
        assert variant(s("f", a), s("f", a))
        assert not variant(s("f", a), s("f", b))


class TestCanonicalize:
    def test_left_to_right_numbering(self):
        out = canonicalize(s("f", Y, X, Y))
        assert out == s("f", Var(0), Var(1), Var(0))

    def test_ground_fixpoint(self):
        assert canonicalize(s("f", a)) == s("f", a)

    def test_single_var(self):
        assert canonicalize(s("g", Z)) == s("g", Var(0))

    def test_idempotent(self):
        t = s("f", Y, s("g", X, Y), Z)
        assert canonicalize(canonicalize(t)) == canonicalize(t)


class TestRenameApart:
    def test_fresh_ids(self):
        src = VarSource(100)
        t = s("dist", a, Y, X)
        out = rename_apart(t, src)
        assert variant(t, out)
        assert not set(term_vars(out)) & set(term_vars(t))

    def test_ground(self):
        src = VarSource(100)
        assert rename_apart(s("f", a), src) == s("f", a)

    def test_twice_disjoint(self):
        src = VarSource(100)
        t = s("f", X, Y)
        r1, r2 = rename_apart(t, src), rename_apart(t, src)
        assert variant(r1, r2)
        assert not set(term_vars(r1)) & set(term_vars(r2))


# random term generation for the kernel properties

def random_term(rng, depth=3, nvars=3):
    kind = rng.randrange(4 if depth > 0 else 3)
    if kind == 0:
        return Var(rng.randrange(nvars))
    if kind == 1:
        return Atom(rng.choice("abc"))
    if kind == 2:
        return Num(rng.randrange(-2, 3))
    return Struct(rng.choice("fgh"),
                  tuple(random_term(rng, depth - 1, nvars)
                        for _ in range(rng.randint(1, 3))))


def test_variant_iff_same_trie_leaf():
    rng = random.Random(42)
    terms = [random_term(rng) for _ in range(120)]
    trie = TermTrie()
    leaves = [trie.lookup_or_insert(t)[0] for t in terms]
    for i, t1 in enumerate(terms):
        for j, t2 in enumerate(terms):
            assert variant(t1, t2) == (leaves[i] is leaves[j]), (t1, t2)


def test_unify_symmetric():
    rng = random.Random(7)
    for _ in range(200):
        t1, t2 = random_term(rng), random_term(rng)
        assert (unify(t1, t2) is None) == (unify(t2, t1) is None)


@st.composite
def hypo_terms(draw, depth=2):
    if depth == 0:
        return draw(st.sampled_from(
            [Var(0), Var(1), Var(2), Atom("a"), Atom("b"), Num(0), Num(1)]))
    choice = draw(st.integers(0, 3))
    if choice < 2:
        return draw(hypo_terms(depth=0))
    args = draw(st.lists(hypo_terms(depth=depth - 1), min_size=1, max_size=3))
    return Struct(draw(st.sampled_from("fg")), tuple(args))


@settings(max_examples=200, deadline=None)
@given(hypo_terms(), hypo_terms())
def test_unifier_is_most_general_enough(t1, t2):
    out = unify(t1, t2)
    if out is not None:
        assert apply_subst(t1, out) == apply_subst(t2, out)


@settings(max_examples=150, deadline=None)
@given(hypo_terms())
def test_canonicalize_is_variant(t):
    assert variant(t, canonicalize(t))
