"""Constraints over finite lattices.

A lattice is declared by its points and Hasse (covering) edges; the partial
order is the reflexive-transitive closure, and join/meet tables are computed
and validated at construction (unique least upper / greatest lower bounds,
commutativity, associativity, absorption, unique top and bottom). The store
keeps one upper bound per variable (X below d), variable-variable edges
(Y below X), and deferred operation calls; constraint propagation re-runs
to a fixpoint whenever something tightens. A variable whose bound reaches
bottom denotes the empty set of concrete values, so the store is
inconsistent.

The built-in `signs` domain abstracts runtime values by sign and type. Its
arithmetic and comparison tables were generated by a brute-force oracle over
representative concrete values ({-2,-1,0,1,2} plus var/str/atom tokens) and
audited by hand; the unit tests re-derive them from scratch.

Lattice definition files are plain text::

    lattice signs
    points bottom neg zero ...
    cover bottom neg
    cover neg zneg
    ...
    op add neg neg -> neg
    test lt neg zero
    refine num
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Any, Mapping, Sequence

from ..errors import EngineError, LoadError
from ..terms import Atom, Bindings, Struct, Term, Var
from .base import ConstraintSolver, EntailOrder, ProjectedStore


class LatticeError(Exception):
    pass


@dataclass(frozen=True)
class Lattice:
    name: str
    points: tuple
    leq_pairs: frozenset          # (a, b) with a below-or-equal b
    joins: Mapping
    meets: Mapping
    bottom: str
    top: str
    ops: Mapping = field(default_factory=dict)      # opname -> {(a, b): result}
    tests: Mapping = field(default_factory=dict)    # testname -> {(a, b)} possible
    refine_point: str | None = None                 # ops/tests constrain args to this

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self.leq_pairs

    def join(self, a: str, b: str) -> str:
        return self.joins[(a, b)]

    def meet(self, a: str, b: str) -> str:
        return self.meets[(a, b)]


def lattice_from_hasse(name: str, points: Sequence[str],
                       covers: Sequence[tuple],
                       ops: Mapping | None = None,
                       tests: Mapping | None = None,
                       refine_point: str | None = None) -> Lattice:
    pts = list(dict.fromkeys(points))
    up: dict[str, set] = {p: {p} for p in pts}
    for lo, hi in covers:
        if lo not in up or hi not in up:
            raise LatticeError(f"cover edge uses unknown point: {lo} < {hi}")
    # transitive closure, upward
    changed = True
    while changed:
        changed = False
        for lo, hi in covers:
            new = up[hi] - up[lo]
            if new:
                up[lo] |= new
                changed = True
    leq = frozenset((a, b) for a in pts for b in up[a])

    bottoms = [p for p in pts if all((p, q) in leq for q in pts)]
    tops = [p for p in pts if all((q, p) in leq for q in pts)]
    if len(bottoms) != 1 or len(tops) != 1:
        raise LatticeError("lattice needs a unique bottom and a unique top")

    joins, meets = {}, {}
    for a, b in product(pts, pts):
        uppers = [c for c in pts if (a, c) in leq and (b, c) in leq]
        least = [c for c in uppers if all((c, o) in leq for o in uppers)]
        lowers = [c for c in pts if (c, a) in leq and (c, b) in leq]
        greatest = [c for c in lowers if all((o, c) in leq for o in lowers)]
        if len(least) != 1 or len(greatest) != 1:
            raise LatticeError(f"no unique join/meet for {a}, {b}")
        joins[(a, b)] = least[0]
        meets[(a, b)] = greatest[0]

    lat = Lattice(name, tuple(pts), leq, joins, meets, bottoms[0], tops[0],
                  dict(ops or {}), dict(tests or {}), refine_point)
    _check_laws(lat)
    return lat


def _check_laws(lat: Lattice) -> None:
    for a, b in product(lat.points, lat.points):
        if lat.join(a, b) != lat.join(b, a) or lat.meet(a, b) != lat.meet(b, a):
            raise LatticeError("join/meet not commutative")
        if lat.join(a, lat.meet(a, b)) != a or lat.meet(a, lat.join(a, b)) != a:
            raise LatticeError("absorption fails")
    for a, b, c in product(lat.points, lat.points, lat.points):
        if lat.join(a, lat.join(b, c)) != lat.join(lat.join(a, b), c):
            raise LatticeError("join not associative")
        if lat.meet(a, lat.meet(b, c)) != lat.meet(lat.meet(a, b), c):
            raise LatticeError("meet not associative")


# -- the signs abstract domain ------------------------------------------------

SIGNS_POINTS = ("bottom", "neg", "zero", "pos", "var", "str", "atom",
                "zneg", "zpos", "nonzero", "num", "top")

SIGNS_COVERS = (
    ("bottom", "neg"), ("bottom", "zero"), ("bottom", "pos"),
    ("bottom", "var"), ("bottom", "str"), ("bottom", "atom"),
    ("neg", "zneg"), ("zero", "zneg"),
    ("zero", "zpos"), ("pos", "zpos"),
    ("neg", "nonzero"), ("pos", "nonzero"),
    ("zneg", "num"), ("zpos", "num"), ("nonzero", "num"),
    ("num", "top"), ("var", "top"), ("str", "top"), ("atom", "top"),
)

# Brute-forced over representatives {-2,-1,0,1,2}; audited by hand.
SIGNS_OPS = {
    "add": {
        ("neg", "neg"): "neg", ("neg", "zero"): "neg",
        ("neg", "pos"): "num", ("neg", "zneg"): "neg",
        ("neg", "zpos"): "num", ("neg", "nonzero"): "num",
        ("neg", "num"): "num", ("zero", "neg"): "neg",
        ("zero", "zero"): "zero", ("zero", "pos"): "pos",
        ("zero", "zneg"): "zneg", ("zero", "zpos"): "zpos",
        ("zero", "nonzero"): "nonzero", ("zero", "num"): "num",
        ("pos", "neg"): "num", ("pos", "zero"): "pos",
        ("pos", "pos"): "pos", ("pos", "zneg"): "num",
        ("pos", "zpos"): "pos", ("pos", "nonzero"): "num",
        ("pos", "num"): "num", ("zneg", "neg"): "neg",
        ("zneg", "zero"): "zneg", ("zneg", "pos"): "num",
        ("zneg", "zneg"): "zneg", ("zneg", "zpos"): "num",
        ("zneg", "nonzero"): "num", ("zneg", "num"): "num",
        ("zpos", "neg"): "num", ("zpos", "zero"): "zpos",
        ("zpos", "pos"): "pos", ("zpos", "zneg"): "num",
        ("zpos", "zpos"): "zpos", ("zpos", "nonzero"): "num",
        ("zpos", "num"): "num", ("nonzero", "neg"): "num",
        ("nonzero", "zero"): "nonzero", ("nonzero", "pos"): "num",
        ("nonzero", "zneg"): "num", ("nonzero", "zpos"): "num",
        ("nonzero", "nonzero"): "num", ("nonzero", "num"): "num",
        ("num", "neg"): "num", ("num", "zero"): "num",
        ("num", "pos"): "num", ("num", "zneg"): "num",
        ("num", "zpos"): "num", ("num", "nonzero"): "num",
        ("num", "num"): "num",
    },
    "sub": {
        ("neg", "neg"): "num", ("neg", "zero"): "neg",
        ("neg", "pos"): "neg", ("neg", "zneg"): "num",
        ("neg", "zpos"): "neg", ("neg", "nonzero"): "num",
        ("neg", "num"): "num", ("zero", "neg"): "pos",
        ("zero", "zero"): "zero", ("zero", "pos"): "neg",
        ("zero", "zneg"): "zpos", ("zero", "zpos"): "zneg",
        ("zero", "nonzero"): "nonzero", ("zero", "num"): "num",
        ("pos", "neg"): "pos", ("pos", "zero"): "pos",
        ("pos", "pos"): "num", ("pos", "zneg"): "pos",
        ("pos", "zpos"): "num", ("pos", "nonzero"): "num",
        ("pos", "num"): "num", ("zneg", "neg"): "num",
        ("zneg", "zero"): "zneg", ("zneg", "pos"): "neg",
        ("zneg", "zneg"): "num", ("zneg", "zpos"): "zneg",
        ("zneg", "nonzero"): "num", ("zneg", "num"): "num",
        ("zpos", "neg"): "pos", ("zpos", "zero"): "zpos",
        ("zpos", "pos"): "num", ("zpos", "zneg"): "zpos",
        ("zpos", "zpos"): "num", ("zpos", "nonzero"): "num",
        ("zpos", "num"): "num", ("nonzero", "neg"): "num",
        ("nonzero", "zero"): "nonzero", ("nonzero", "pos"): "num",
        ("nonzero", "zneg"): "num", ("nonzero", "zpos"): "num",
        ("nonzero", "nonzero"): "num", ("nonzero", "num"): "num",
        ("num", "neg"): "num", ("num", "zero"): "num",
        ("num", "pos"): "num", ("num", "zneg"): "num",
        ("num", "zpos"): "num", ("num", "nonzero"): "num",
        ("num", "num"): "num",
    },
    "mul": {
        ("neg", "neg"): "pos", ("neg", "zero"): "zero",
        ("neg", "pos"): "neg", ("neg", "zneg"): "zpos",
        ("neg", "zpos"): "zneg", ("neg", "nonzero"): "nonzero",
        ("neg", "num"): "num", ("zero", "neg"): "zero",
        ("zero", "zero"): "zero", ("zero", "pos"): "zero",
        ("zero", "zneg"): "zero", ("zero", "zpos"): "zero",
        ("zero", "nonzero"): "zero", ("zero", "num"): "zero",
        ("pos", "neg"): "neg", ("pos", "zero"): "zero",
        ("pos", "pos"): "pos", ("pos", "zneg"): "zneg",
        ("pos", "zpos"): "zpos", ("pos", "nonzero"): "nonzero",
        ("pos", "num"): "num", ("zneg", "neg"): "zpos",
        ("zneg", "zero"): "zero", ("zneg", "pos"): "zneg",
        ("zneg", "zneg"): "zpos", ("zneg", "zpos"): "zneg",
        ("zneg", "nonzero"): "num", ("zneg", "num"): "num",
        ("zpos", "neg"): "zneg", ("zpos", "zero"): "zero",
        ("zpos", "pos"): "zpos", ("zpos", "zneg"): "zneg",
        ("zpos", "zpos"): "zpos", ("zpos", "nonzero"): "num",
        ("zpos", "num"): "num", ("nonzero", "neg"): "nonzero",
        ("nonzero", "zero"): "zero", ("nonzero", "pos"): "nonzero",
        ("nonzero", "zneg"): "num", ("nonzero", "zpos"): "num",
        ("nonzero", "nonzero"): "nonzero", ("nonzero", "num"): "num",
        ("num", "neg"): "num", ("num", "zero"): "zero",
        ("num", "pos"): "num", ("num", "zneg"): "num",
        ("num", "zpos"): "num", ("num", "nonzero"): "num",
        ("num", "num"): "num",
    },
}

SIGNS_TESTS = {
    "lt": {
        ("neg", "neg"), ("neg", "nonzero"), ("neg", "num"), ("neg", "pos"),
        ("neg", "zero"), ("neg", "zneg"), ("neg", "zpos"), ("nonzero", "neg"),
        ("nonzero", "nonzero"), ("nonzero", "num"), ("nonzero", "pos"), ("nonzero", "zero"),
        ("nonzero", "zneg"), ("nonzero", "zpos"), ("num", "neg"), ("num", "nonzero"),
        ("num", "num"), ("num", "pos"), ("num", "zero"), ("num", "zneg"),
        ("num", "zpos"), ("pos", "nonzero"), ("pos", "num"), ("pos", "pos"),
        ("pos", "zpos"), ("zero", "nonzero"), ("zero", "num"), ("zero", "pos"),
        ("zero", "zpos"), ("zneg", "neg"), ("zneg", "nonzero"), ("zneg", "num"),
        ("zneg", "pos"), ("zneg", "zero"), ("zneg", "zneg"), ("zneg", "zpos"),
        ("zpos", "nonzero"), ("zpos", "num"), ("zpos", "pos"), ("zpos", "zpos"),
    },
    "gt": {
        ("neg", "neg"), ("neg", "nonzero"), ("neg", "num"), ("neg", "zneg"),
        ("nonzero", "neg"), ("nonzero", "nonzero"), ("nonzero", "num"), ("nonzero", "pos"),
        ("nonzero", "zero"), ("nonzero", "zneg"), ("nonzero", "zpos"), ("num", "neg"),
        ("num", "nonzero"), ("num", "num"), ("num", "pos"), ("num", "zero"),
        ("num", "zneg"), ("num", "zpos"), ("pos", "neg"), ("pos", "nonzero"),
        ("pos", "num"), ("pos", "pos"), ("pos", "zero"), ("pos", "zneg"),
        ("pos", "zpos"), ("zero", "neg"), ("zero", "nonzero"), ("zero", "num"),
        ("zero", "zneg"), ("zneg", "neg"), ("zneg", "nonzero"), ("zneg", "num"),
        ("zneg", "zneg"), ("zpos", "neg"), ("zpos", "nonzero"), ("zpos", "num"),
        ("zpos", "pos"), ("zpos", "zero"), ("zpos", "zneg"), ("zpos", "zpos"),
    },
    "eq": {
        ("neg", "neg"), ("neg", "nonzero"), ("neg", "num"), ("neg", "zneg"),
        ("nonzero", "neg"), ("nonzero", "nonzero"), ("nonzero", "num"), ("nonzero", "pos"),
        ("nonzero", "zneg"), ("nonzero", "zpos"), ("num", "neg"), ("num", "nonzero"),
        ("num", "num"), ("num", "pos"), ("num", "zero"), ("num", "zneg"),
        ("num", "zpos"), ("pos", "nonzero"), ("pos", "num"), ("pos", "pos"),
        ("pos", "zpos"), ("zero", "num"), ("zero", "zero"), ("zero", "zneg"),
        ("zero", "zpos"), ("zneg", "neg"), ("zneg", "nonzero"), ("zneg", "num"),
        ("zneg", "zero"), ("zneg", "zneg"), ("zneg", "zpos"), ("zpos", "nonzero"),
        ("zpos", "num"), ("zpos", "pos"), ("zpos", "zero"), ("zpos", "zneg"),
        ("zpos", "zpos"),
    },
}

_SIGNS: Lattice | None = None


def signs_lattice() -> Lattice:
    global _SIGNS
    if _SIGNS is None:
        _SIGNS = lattice_from_hasse("signs", SIGNS_POINTS, SIGNS_COVERS,
                                    SIGNS_OPS, SIGNS_TESTS, refine_point="num")
    return _SIGNS


def parse_lattice_file(text: str) -> Lattice:
    name = "lattice"
    points: list[str] = []
    covers: list[tuple] = []
    ops: dict = {}
    tests: dict = {}
    refine = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("%")[0].strip()
        if not line:
            continue
        parts = line.split()
        kind, rest = parts[0], parts[1:]
        try:
            if kind == "lattice":
                name = rest[0]
            elif kind == "points":
                points.extend(rest)
            elif kind == "cover":
                covers.append((rest[0], rest[1]))
            elif kind == "op":
                opname, a, b, arrow, res = rest
                if arrow != "->":
                    raise ValueError
                ops.setdefault(opname, {})[(a, b)] = res
            elif kind == "test":
                tests.setdefault(rest[0], set()).add((rest[1], rest[2]))
            elif kind == "refine":
                refine = rest[0]
            else:
                raise ValueError
        except (IndexError, ValueError):
            raise LoadError(f"bad lattice line: {raw!r}", lineno, 1)
    try:
        return lattice_from_hasse(name, points, covers, ops, tests, refine)
    except LatticeError as e:
        raise LoadError(f"invalid lattice: {e}")


def render_lattice_file(lat: Lattice) -> str:
    lines = [f"lattice {lat.name}", "points " + " ".join(lat.points)]
    seen = set()
    for a, b in sorted(lat.leq_pairs):
        if a == b:
            continue
        # covering edge: nothing strictly between
        if not any(c not in (a, b) and (a, c) in lat.leq_pairs and (c, b) in lat.leq_pairs
                   for c in lat.points):
            lines.append(f"cover {a} {b}")
    for op, table in lat.ops.items():
        for (a, b), r in sorted(table.items()):
            lines.append(f"op {op} {a} {b} -> {r}")
    for t, pairs in lat.tests.items():
        for a, b in sorted(pairs):
            lines.append(f"test {t} {a} {b}")
    if lat.refine_point:
        lines.append(f"refine {lat.refine_point}")
    return "\n".join(lines) + "\n"


# -- the solver ---------------------------------------------------------------


class LatSolver(ConstraintSolver):
    """Upper-bound store over a finite lattice.

    Surface goals:
      latleq(X, point) and latleq(Y, X)   -- Y below X
      latop(op, R, A, B)                  -- R bound by op's abstract result
      lattest(t, A, B)                    -- comparison outcome possible?
    """

    name = "lat"
    mirrors_numbers = False

    def __init__(self, lattice: Lattice | None = None) -> None:
        self.lattice = lattice or signs_lattice()
        self.bounds: dict[int, str] = {}
        self.edges: list[tuple] = []      # (lower vid, upper vid)
        self.opcalls: list[tuple] = []    # (opname, result vid, arg vids)
        self.log: list[tuple] = []

    # -- state ------------------------------------------------------------

    def checkpoint(self) -> int:
        return len(self.log)

    def rollback(self, token: int) -> None:
        while len(self.log) > token:
            entry = self.log.pop()
            if entry[0] == "bound":
                _, vid, old = entry
                if old is None:
                    del self.bounds[vid]
                else:
                    self.bounds[vid] = old
            elif entry[0] == "edge":
                self.edges.pop()
            else:
                self.opcalls.pop()

    def clone_state(self) -> Any:
        return (dict(self.bounds), list(self.edges), list(self.opcalls))

    def install_state(self, state: Any) -> None:
        bounds, edges, ops = state
        self.bounds = dict(bounds)
        self.edges = list(edges)
        self.opcalls = list(ops)
        self.log = []

    def empty_state(self) -> Any:
        return ({}, (), ())

    def save_context(self) -> Any:
        return (self.clone_state(), list(self.log))

    def restore_context(self, ctx: Any) -> None:
        state, log = ctx
        self.install_state(state)
        self.log = list(log)

    def knows(self, vid: int) -> bool:
        return vid in self.bounds

    def alias(self, vid: int, other: int) -> bool:
        self.log.append(("edge", len(self.edges)))
        self.edges.append((vid, other))
        self.log.append(("edge", len(self.edges)))
        self.edges.append((other, vid))
        return self._propagate()

    # -- store updates -------------------------------------------------------

    def _bound(self, vid: int) -> str:
        return self.bounds.get(vid, self.lattice.top)

    def _tighten(self, vid: int, point: str) -> bool:
        """Meet vid's bound with point; True if it changed."""
        old = self.bounds.get(vid)
        new = self.lattice.meet(old or self.lattice.top, point)
        if new == (old or self.lattice.top):
            return False
        self.log.append(("bound", vid, old))
        self.bounds[vid] = new
        return True

    def _propagate(self) -> bool:
        lat = self.lattice
        changed = True
        while changed:
            changed = False
            for lower, upper in self.edges:
                if self._tighten(lower, self._bound(upper)):
                    changed = True
            for op, res, args in self.opcalls:
                table = lat.ops[op]
                pts = [self._refined(a) for a in args]
                if any(p == lat.bottom for p in pts):
                    return False
                out = table.get(tuple(pts))
                if out is None:
                    return False
                if self._tighten(res, out):
                    changed = True
        return all(b != lat.bottom for b in self.bounds.values())

    def _refined(self, vid: int) -> str:
        lat = self.lattice
        if lat.refine_point is None:
            return self._bound(vid)
        return lat.meet(self._bound(vid), lat.refine_point)

    def add_leq_point(self, vid: int, point: str) -> bool:
        if point not in self.lattice.points:
            raise EngineError(f"unknown lattice point: {point}")
        self._tighten(vid, point)
        return self._propagate()

    def add_leq_vars(self, lower: int, upper: int) -> bool:
        self.log.append(("edge", len(self.edges)))
        self.edges.append((lower, upper))
        return self._propagate()

    def add_op(self, op: str, res: int, args: Sequence[int]) -> bool:
        lat = self.lattice
        if op not in lat.ops:
            raise EngineError(f"unknown lattice operation: {op}")
        if lat.refine_point is not None:
            for a in args:
                self._tighten(a, lat.refine_point)
        self.log.append(("op", len(self.opcalls)))
        self.opcalls.append((op, res, tuple(args)))
        return self._propagate()

    def add_test(self, test: str, args: Sequence[int]) -> bool:
        lat = self.lattice
        if test not in lat.tests:
            raise EngineError(f"unknown lattice test: {test}")
        if lat.refine_point is not None:
            for a in args:
                self._tighten(a, lat.refine_point)
        if not self._propagate():
            return False
        pts = tuple(self._bound(a) for a in args)
        return pts in lat.tests[test]

    # -- surface -----------------------------------------------------------------

    def is_constraint_functor(self, name: str, arity: int) -> bool:
        return (name, arity) in (("latleq", 2), ("latop", 4), ("lattest", 3))

    def validate_goal(self, goal: Struct) -> None:
        lat = self.lattice
        if goal.name == "latleq":
            x, d = goal.args
            if not isinstance(x, Var):
                raise LoadError(f"latleq needs a variable first: {goal!r}")
            if isinstance(d, Atom) and d.name not in lat.points:
                raise LoadError(f"unknown lattice point {d.name!r}")
            if not isinstance(d, (Atom, Var)):
                raise LoadError(f"latleq bound must be a point or variable: {goal!r}")
        elif goal.name == "latop":
            op = goal.args[0]
            if not isinstance(op, Atom) or op.name not in lat.ops:
                raise LoadError(f"unknown lattice operation in {goal!r}")
        else:
            t = goal.args[0]
            if not isinstance(t, Atom) or t.name not in lat.tests:
                raise LoadError(f"unknown lattice test in {goal!r}")

    def add_goal(self, goal: Struct, binds: Bindings) -> bool:
        def as_var(t) -> int:
            t = binds.walk(t)
            if not isinstance(t, Var):
                raise EngineError(f"lattice constraint needs variables: {goal!r}")
            return t.id

        if goal.name == "latleq":
            x, d = goal.args
            d = binds.walk(d)
            if isinstance(d, Atom):
                return self.add_leq_point(as_var(x), d.name)
            return self.add_leq_vars(as_var(x), as_var(d))
        if goal.name == "latop":
            op, res, a, b = goal.args
            return self.add_op(op.name, as_var(res), [as_var(a), as_var(b)])
        test, a, b = goal.args
        return self.add_test(test.name, [as_var(a), as_var(b)])

    # -- projection / entailment -----------------------------------------------

    def store_projection(self, var_ids: Sequence[int]) -> ProjectedStore:
        self._propagate()
        return ProjectedStore(len(var_ids), tuple(self._bound(v) for v in var_ids))

    def call_entail(self, early: ProjectedStore, proj_gen: ProjectedStore) -> bool:
        leq = self.lattice.leq
        return all(leq(a, b) for a, b in zip(early.payload, proj_gen.payload))

    def answer_compare(self, early: ProjectedStore, proj_ans: ProjectedStore) -> EntailOrder | None:
        leq = self.lattice.leq
        mine, other = early.payload, proj_ans.payload
        if all(leq(a, b) for a, b in zip(mine, other)):
            return EntailOrder.LESS_EQ
        if all(leq(b, a) for a, b in zip(mine, other)):
            return EntailOrder.GREATER
        return None

    def entails_projection(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        self._propagate()
        leq = self.lattice.leq
        return all(leq(self._bound(v), p) for v, p in zip(var_ids, proj.payload))

    def apply_answer(self, var_ids: Sequence[int], proj: ProjectedStore) -> bool:
        token = self.checkpoint()
        for vid, point in zip(var_ids, proj.payload):
            if not self.add_leq_point(vid, point):
                self.rollback(token)
                return False
        return True

    # -- rendering ----------------------------------------------------------------

    def render_projected(self, proj: ProjectedStore, names: Sequence[str]) -> list[str]:
        out = []
        for i, point in enumerate(proj.payload):
            if point != self.lattice.top:
                name = names[i] if i < len(names) else f"V{i}"
                out.append(f"{name} in {point}")
        return out
