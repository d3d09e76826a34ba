"""First-order terms, binding environments, unification, and variant utilities.

Terms are immutable. Variables are identified by integer ids drawn from a
`VarSource`; ids are unique within one renaming scope. Mutable state lives in
`Bindings`, a trailed binding environment that supports cheap undo, which is
what the resolution engine backtracks over. The pure `unify`/`Substitution`
interface on top of it is kept for callers that want value semantics.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Union

Number = Union[int, Fraction]


@dataclass(frozen=True, slots=True)
class Var:
    id: int

    def __repr__(self) -> str:
        return f"_{self.id}"


@dataclass(frozen=True, slots=True)
class Atom:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Num:
    """Numeric leaf: arbitrary-precision integer or exact rational."""

    value: Number

    def __repr__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, slots=True)
class Struct:
    name: str
    args: tuple

    def __repr__(self) -> str:
        return f"{self.name}({', '.join(map(repr, self.args))})"


Term = Union[Var, Atom, Num, Struct]

TRUE = Atom("true")


class VarSource:
    """Monotone counter handing out fresh variable ids."""

    __slots__ = ("_next",)

    def __init__(self, start: int = 0) -> None:
        self._next = start

    def fresh(self) -> Var:
        v = Var(self._next)
        self._next += 1
        return v

    def fresh_block(self, n: int) -> int:
        """Reserve n consecutive ids, returning the first."""
        base = self._next
        self._next += n
        return base


class Bindings:
    """Variable bindings with an undo trail.

    `bind` never overwrites; backtracking is `undo_to(mark())`. Terms bound
    into the map may themselves contain bound variables, so readers go
    through `walk` (one leading deref chain) or `resolve` (deep).
    """

    __slots__ = ("map", "trail")

    def __init__(self) -> None:
        self.map: dict[int, Term] = {}
        self.trail: list[int] = []

    def mark(self) -> int:
        return len(self.trail)

    def undo_to(self, mark: int) -> None:
        trail = self.trail
        m = self.map
        while len(trail) > mark:
            del m[trail.pop()]

    def bind(self, vid: int, term: Term) -> None:
        self.map[vid] = term
        self.trail.append(vid)

    def walk(self, t: Term) -> Term:
        m = self.map
        while type(t) is Var:
            nxt = m.get(t.id)
            if nxt is None:
                return t
            t = nxt
        return t

    def resolve(self, t: Term) -> Term:
        t = self.walk(t)
        if type(t) is Struct:
            args = tuple(self.resolve(a) for a in t.args)
            return Struct(t.name, args)
        return t


# A bind policy lets the engine intercept variable bindings (to mirror
# numeric bindings into a constraint store, or to veto type clashes).
# Returning None means "not handled, bind normally"; True means "handled,
# do not bind"; False fails the unification.
BindPolicy = Callable[[int, Term], Optional[bool]]


def _occurs(vid: int, t: Term, binds: Bindings) -> bool:
    stack = [t]
    while stack:
        x = binds.walk(stack.pop())
        if type(x) is Var:
            if x.id == vid:
                return True
        elif type(x) is Struct:
            stack.extend(x.args)
    return False


def unify_in(t1: Term, t2: Term, binds: Bindings,
             policy: BindPolicy | None = None) -> bool:
    """Destructively unify t1 and t2 under `binds`, occurs check always on.

    On failure the caller is expected to undo the trail; partial bindings
    are left in place.
    """
    mapping = binds.map
    mget = mapping.get
    trail = binds.trail
    stack = [(t1, t2)]
    pop = stack.pop
    while stack:
        a, b = pop()
        while type(a) is Var:
            nxt = mget(a.id)
            if nxt is None:
                break
            a = nxt
        while type(b) is Var:
            nxt = mget(b.id)
            if nxt is None:
                break
            b = nxt
        if a is b:
            continue
        ta, tb = type(a), type(b)
        if ta is Var:
            if tb is Var and a.id == b.id:
                continue
            if tb is Struct and _occurs(a.id, b, binds):
                return False
            if policy is not None:
                handled = policy(a.id, b)
                if handled is False:
                    return False
                if handled is True:
                    continue
            mapping[a.id] = b
            trail.append(a.id)
        elif tb is Var:
            if ta is Struct and _occurs(b.id, a, binds):
                return False
            if policy is not None:
                handled = policy(b.id, a)
                if handled is False:
                    return False
                if handled is True:
                    continue
            mapping[b.id] = a
            trail.append(b.id)
        elif ta is Atom:
            if tb is not Atom or a.name != b.name:
                return False
        elif ta is Num:
            if tb is not Num or a.value != b.value:
                return False
        else:  # Struct
            if tb is not Struct or a.name != b.name or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
    return True


# ---------------------------------------------------------------------------
# Pure substitution interface

Substitution = dict[int, Term]


def apply_subst(t: Term, s: Substitution) -> Term:
    if type(t) is Var:
        b = s.get(t.id)
        return t if b is None else apply_subst(b, s)
    if type(t) is Struct:
        return Struct(t.name, tuple(apply_subst(a, s) for a in t.args))
    return t


def unify(t1: Term, t2: Term, s: Substitution | None = None) -> Substitution | None:
    """Most general unifier extending s, or None. Pure: s is not mutated."""
    binds = Bindings()
    if s:
        for vid, term in s.items():
            binds.bind(vid, term)
    if not unify_in(t1, t2, binds):
        return None
    # Flatten chains so the result is idempotent.
    out: Substitution = {}
    for vid in binds.map:
        out[vid] = binds.resolve(Var(vid))
    return out


# ---------------------------------------------------------------------------
# Variants, canonical forms, renaming

def term_vars(t: Term) -> list[int]:
    """Variable ids in first-occurrence (preorder, left-to-right) order."""
    seen: dict[int, None] = {}
    stack = [t]
    while stack:
        x = stack.pop()
        if type(x) is Var:
            seen.setdefault(x.id, None)
        elif type(x) is Struct:
            stack.extend(reversed(x.args))
    return list(seen)


def variant(t1: Term, t2: Term) -> bool:
    """True iff t1 and t2 are equal up to a bijective renaming of variables."""
    fwd: dict[int, int] = {}
    bwd: dict[int, int] = {}
    stack = [(t1, t2)]
    while stack:
        a, b = stack.pop()
        ta, tb = type(a), type(b)
        if ta is not tb:
            return False
        if ta is Var:
            if fwd.setdefault(a.id, b.id) != b.id:
                return False
            if bwd.setdefault(b.id, a.id) != a.id:
                return False
        elif ta is Atom:
            if a.name != b.name:
                return False
        elif ta is Num:
            if a.value != b.value:
                return False
        else:
            if a.name != b.name or len(a.args) != len(b.args):
                return False
            stack.extend(zip(a.args, b.args))
    return True


def canonicalize(t: Term) -> Term:
    """Rename variables to 0,1,... in first-occurrence order.

    Variants canonicalize to structurally equal terms, so canonical forms can
    be used as table keys.
    """
    mapping: dict[int, Var] = {}

    def go(x: Term) -> Term:
        if type(x) is Var:
            v = mapping.get(x.id)
            if v is None:
                v = Var(len(mapping))
                mapping[x.id] = v
            return v
        if type(x) is Struct:
            return Struct(x.name, tuple(go(a) for a in x.args))
        return x

    return go(t)


def rename_term(t: Term, mapping: dict[int, Var]) -> Term:
    """Replace variables via mapping; unmapped variables raise KeyError."""
    tt = type(t)
    if tt is Var:
        return mapping[t.id]
    if tt is Struct:
        return Struct(t.name, tuple([rename_term(a, mapping) for a in t.args]))
    return t


def rename_offset(t: Term, base: int) -> Term:
    """Rename a canonically numbered term (vars 0..n-1) by offset.

    Equivalent to rename_term with {i: Var(base + i)} but without building
    the mapping; used on the clause-resolution hot path.
    """
    tt = type(t)
    if tt is Var:
        return Var(base + t.id)
    if tt is Struct:
        return Struct(t.name, tuple([rename_offset(a, base) for a in t.args]))
    return t


def rename_apart(t: Term, source: VarSource) -> Term:
    """A variant of t whose variables are fresh ids from `source`."""
    mapping = {vid: source.fresh() for vid in term_vars(t)}
    return rename_term(t, mapping)
