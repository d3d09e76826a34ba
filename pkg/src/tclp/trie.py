"""Term-indexed tables.

A `TermTrie` maps call/answer patterns to leaves. Paths are the preorder
token stream of the canonicalized term (functor/arity, atom, number,
canonical variable index), so two terms reach the same leaf exactly when
they are variants of each other. Leaf payloads belong to the caller.
"""

from __future__ import annotations

from typing import Any, Iterator

from .terms import Atom, Num, Struct, Term, Var, canonicalize


def term_tokens(t: Term) -> Iterator[tuple]:
    """Preorder token stream of a canonicalized term."""
    stack = [t]
    while stack:
        x = stack.pop()
        tx = type(x)
        if tx is Var:
            yield ("v", x.id)
        elif tx is Atom:
            yield ("a", x.name)
        elif tx is Num:
            yield ("n", x.value)
        else:
            yield ("s", x.name, len(x.args))
            stack.extend(reversed(x.args))


class TrieLeaf:
    __slots__ = ("key", "payload")

    def __init__(self, key: Term) -> None:
        self.key = key          # canonical skeleton for this leaf
        self.payload: Any = None

    def __repr__(self) -> str:
        return f"<leaf {self.key!r}>"


class TermTrie:
    __slots__ = ("_root", "_leaves")

    def __init__(self) -> None:
        self._root: dict = {}
        self._leaves: list[TrieLeaf] = []

    def lookup_or_insert(self, t: Term) -> tuple[TrieLeaf, bool]:
        """Return (leaf, fresh). All variants of t share one leaf."""
        canon = canonicalize(t)
        node = self._root
        for tok in term_tokens(canon):
            node = node.setdefault(tok, {})
        leaf = node.get(None)
        if leaf is not None:
            return leaf, False
        leaf = TrieLeaf(canon)
        node[None] = leaf
        self._leaves.append(leaf)
        return leaf, True

    def lookup(self, t: Term) -> TrieLeaf | None:
        node = self._root
        for tok in term_tokens(canonicalize(t)):
            node = node.get(tok)
            if node is None:
                return None
        return node.get(None)

    def leaves(self) -> list[TrieLeaf]:
        return list(self._leaves)

    def __len__(self) -> int:
        return len(self._leaves)
