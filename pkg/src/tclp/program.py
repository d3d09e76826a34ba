"""Program loader: a small Prolog-like surface syntax.

Clauses are `head :- goal, ..., goal.` or facts `head.`; directives are
`:- table name/arity.`, `:- solver q.` and `:- lattice signs.` (or a quoted
file path). Goals may be literals, unifications (`=`), arithmetic
(`is`, `<`, `=<`, `>`, `>=`, `=:=`) or solver constraints (`#<`, `#=<`,
`#=`, `#>`, `#>=`, `latleq`, `latop`, `lattest`).

Heads are linearized at load: every head argument becomes a distinct fresh
variable and the head unifications move to the front of the body, so all
bindings happen in the clause body. Clause variables are numbered 0..n-1 in
first-occurrence order, which lets the engine rename a clause by offset.

The tabling transformation splits each tabled predicate into an entry
clause that hands the call to the engine and internal worker clauses with
an answer-collection step appended to every body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace

from typing import Iterator, Sequence

from .errors import LoadError
from .rational import Q
from .terms import Atom, Num, Struct, Term, Var, rename_term, term_vars

WORKER_PREFIX = "$tab$"
TABLED_CALL = "$tabled_call"
NEW_ANSWER = "$new_answer"

CONSTRAINT_FUNCTORS = {"#<", "#=<", "#=", "#>", "#>=", "latleq", "latop", "lattest"}
BUILTIN_FUNCTORS = {("=", 2), ("is", 2), ("<", 2), ("=<", 2), (">", 2),
                    (">=", 2), ("=:=", 2), ("true", 0)}


@dataclass(frozen=True)
class Clause:
    head: Term                 # Atom or Struct, linearized
    body: tuple                # tuple of goal Terms
    nvars: int                 # clause variables are Var(0) .. Var(nvars-1)

    def key(self) -> tuple:
        if isinstance(self.head, Atom):
            return (self.head.name, 0)
        return (self.head.name, len(self.head.args))


@dataclass(frozen=True)
class Program:
    clauses: tuple
    tabled: frozenset = frozenset()        # {(name, arity)}
    solver_name: str | None = None
    lattice_ref: str | None = None
    transformed: bool = False

    def index(self) -> dict:
        idx: dict[tuple, list] = {}
        for c in self.clauses:
            idx.setdefault(c.key(), []).append(c)
        return idx


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<num>\d+(?:\.\d+)?)
  | (?P<name>[a-z][A-Za-z0-9_]*)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<quoted>'(?:[^'\\]|\\.)*'|"(?:[^"\\]|\\.)*")
  | (?P<punct>:-|\#=<|\#>=|\#=|\#<|\#>|=<|>=|=:=|[()\[\],.|=<>+\-*/])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LoadError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        tok = m.group()
        if kind != "ws":
            out.append(Token(kind, tok, line, col))
        newlines = tok.count("\n")
        if newlines:
            line += newlines
            col = len(tok) - tok.rfind("\n")
        else:
            col += len(tok)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# -- parser ------------------------------------------------------------------

_COMPARE_OPS = {"#<", "#=<", "#=", "#>", "#>=", "<", "=<", ">", ">=", "=:=", "="}


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.toks = tokens
        self.pos = 0
        self.vars: dict[str, int] = {}

    def peek(self) -> Token:
        return self.toks[self.pos]

    def next(self) -> Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            raise LoadError(f"expected {text!r}, found {t.text or 'end of input'!r}",
                            t.line, t.col)
        return t

    def fail(self, msg: str) -> LoadError:
        t = self.peek()
        return LoadError(msg, t.line, t.col)

    # terms and goals

    def var(self, name: str) -> Term:
        if name == "_":
            vid = len(self.vars)
            self.vars[f"_G{vid}#{self.pos}"] = vid
            return Var(vid)
        if name not in self.vars:
            self.vars[name] = len(self.vars)
        return Var(self.vars[name])

    def primary(self) -> Term:
        t = self.next()
        if t.kind == "num":
            return _num_token(t.text)
        if t.kind == "var":
            return self.var(t.text)
        if t.kind == "quoted":
            return Atom(t.text[1:-1].replace("\\'", "'").replace('\\"', '"'))
        if t.kind == "name":
            if self.peek().text == "(":
                self.next()
                args = [self.expr()]
                while self.peek().text == ",":
                    self.next()
                    args.append(self.expr())
                self.expect(")")
                return Struct(t.text, tuple(args))
            return Atom(t.text)
        if t.text == "(":
            inner = self.goal()
            self.expect(")")
            return inner
        if t.text == "-":
            arg = self.primary()
            if isinstance(arg, Num):
                return Num(-arg.value)
            return Struct("-", (arg,))
        raise LoadError(f"unexpected token {t.text!r}", t.line, t.col)

    def factor(self) -> Term:
        lhs = self.primary()
        while self.peek().text in ("*", "/"):
            op = self.next().text
            rhs = self.primary()
            # rational literals print as n/d; fold them back to numbers
            if op == "/" and isinstance(lhs, Num) and isinstance(rhs, Num) \
                    and rhs.value != 0:
                lhs = Num(Q(lhs.value) / Q(rhs.value))
            else:
                lhs = Struct(op, (lhs, rhs))
        return lhs

    def expr(self) -> Term:
        lhs = self.factor()
        while self.peek().text in ("+", "-"):
            op = self.next().text
            lhs = Struct(op, (lhs, self.factor()))
        return lhs

    def goal(self) -> Term:
        lhs = self.expr()
        nxt = self.peek()
        if nxt.text in _COMPARE_OPS:
            self.next()
            return Struct(nxt.text, (lhs, self.expr()))
        if nxt.kind == "name" and nxt.text == "is":
            self.next()
            return Struct("is", (lhs, self.expr()))
        return lhs

    def body(self) -> list[Term]:
        goals = [self.goal()]
        while self.peek().text == ",":
            self.next()
            goals.append(self.goal())
        return goals


def _num_token(text: str) -> Num:
    if "." in text:
        return Num(Q(text))
    return Num(int(text))


def parse_term(text: str) -> Term:
    p = _Parser(tokenize(text))
    t = p.goal()
    if p.peek().kind != "eof":
        raise p.fail(f"trailing input after term: {p.peek().text!r}")
    return t


def parse_query(text: str) -> tuple[tuple, dict]:
    """Parse a query body; returns (goals, variable name -> id)."""
    text = text.strip()
    if text.startswith("?-"):
        text = text[2:]
    text = text.strip()
    if text.endswith("."):
        text = text[:-1]
    p = _Parser(tokenize(text))
    goals = p.body()
    if p.peek().kind != "eof":
        raise p.fail(f"trailing input after query: {p.peek().text!r}")
    names = {n: i for n, i in p.vars.items() if not n.startswith("_G")}
    return tuple(goals), names


def _linearize(head: Term, body: list[Term], nvars: int) -> tuple[Term, list[Term], int]:
    """Fresh head variables; head unifications become leading body goals."""
    if isinstance(head, Atom):
        return head, body, nvars
    if not isinstance(head, Struct):
        raise LoadError(f"clause head must be an atom or compound: {head!r}")
    prefix: list[Term] = []
    args = []
    seen: set[int] = set()
    for a in head.args:
        if isinstance(a, Var) and a.id not in seen:
            seen.add(a.id)
            args.append(a)
        else:
            v = Var(nvars)
            nvars += 1
            prefix.append(Struct("=", (v, a)))
            args.append(v)
    return Struct(head.name, tuple(args)), prefix + body, nvars


def parse_program(text: str) -> Program:
    toks = tokenize(text)
    clauses: list[Clause] = []
    tabled: set[tuple] = set()
    solver_name: str | None = None
    lattice_ref: str | None = None
    pos = 0
    while toks[pos].kind != "eof":
        # find the clause-terminating '.' (a '.' token)
        end = pos
        while toks[end].kind != "eof" and toks[end].text != ".":
            end += 1
        if toks[end].kind == "eof":
            t = toks[pos]
            raise LoadError("clause without terminating '.'", t.line, t.col)
        chunk = toks[pos:end] + [Token("eof", "", toks[end].line, toks[end].col)]
        p = _Parser(chunk)
        if p.peek().text == ":-":
            p.next()
            kw = p.next()
            if kw.text == "table":
                pred = p.next()
                p.expect("/")
                arity = p.next()
                if pred.kind != "name" or arity.kind != "num" or "." in arity.text:
                    raise LoadError("bad table directive (expected name/arity)",
                                    kw.line, kw.col)
                tabled.add((pred.text, int(arity.text)))
            elif kw.text == "solver":
                arg = p.next()
                if arg.kind != "name":
                    raise LoadError("bad solver directive", kw.line, kw.col)
                solver_name = arg.text
            elif kw.text == "lattice":
                arg = p.next()
                if arg.kind == "quoted":
                    lattice_ref = arg.text[1:-1]
                elif arg.kind == "name":
                    lattice_ref = arg.text
                else:
                    raise LoadError("bad lattice directive", kw.line, kw.col)
            else:
                raise LoadError(f"unknown directive {kw.text!r}", kw.line, kw.col)
            if p.peek().kind != "eof":
                raise p.fail("trailing input in directive")
        else:
            head = p.goal()
            body: list[Term] = []
            if p.peek().text == ":-":
                p.next()
                body = p.body()
            if p.peek().kind != "eof":
                raise p.fail(f"trailing input in clause: {p.peek().text!r}")
            head, body, _ = _linearize(head, body, len(p.vars))
            # canonical numbering: first occurrence in head-then-body order
            order = term_vars(Struct("$clause", (head, *body)))
            mapping = {old: Var(i) for i, old in enumerate(order)}
            head = rename_term(head, mapping)
            body = [rename_term(g, mapping) for g in body]
            clauses.append(Clause(head, tuple(body), len(order)))
        pos = end + 1
    prog = Program(tuple(clauses), frozenset(tabled), solver_name, lattice_ref)
    _check_tabled_defined(prog)
    return prog


def _check_tabled_defined(prog: Program) -> None:
    defined = {c.key() for c in prog.clauses}
    for name, arity in prog.tabled:
        if (name, arity) not in defined:
            raise LoadError(
                f"tabled predicate {name}/{arity} has no clauses "
                f"(arity mismatch or missing definition)")


def validate_constraints(prog: Program, solver) -> None:
    """Load-time shape check of every constraint goal against the solver."""
    for clause in prog.clauses:
        for goal in clause.body:
            if isinstance(goal, Struct) and goal.name in CONSTRAINT_FUNCTORS:
                if not solver.is_constraint_functor(goal.name, len(goal.args)):
                    raise LoadError(
                        f"constraint {goal.name}/{len(goal.args)} not supported "
                        f"by solver {solver.name!r}")
                solver.validate_goal(goal)


# -- tabling transformation ------------------------------------------------------


def transform(prog: Program) -> Program:
    """Split each tabled predicate into an entry clause and worker clauses.

    The entry clause hands the renamed call to the engine; worker clause
    bodies get an answer-collection step appended. Re-transforming a
    transformed program is rejected.
    """
    if prog.transformed or any(c.key()[0].startswith(WORKER_PREFIX) for c in prog.clauses):
        raise LoadError("program is already transformed (worker predicates are internal)")
    if not prog.tabled:
        return replace(prog, transformed=True)
    out: list[Clause] = []
    done_entries: set[tuple] = set()
    for clause in prog.clauses:
        key = clause.key()
        if key not in prog.tabled:
            out.append(clause)
            continue
        name, arity = key
        worker = WORKER_PREFIX + name
        if key not in done_entries:
            done_entries.add(key)
            args = tuple(Var(i) for i in range(arity))
            head = Struct(name, args) if arity else Atom(name)
            inner = Struct(worker, args) if arity else Atom(worker)
            out.append(Clause(head, (Struct(TABLED_CALL, (inner,)),), arity))
        whead = (Struct(worker, clause.head.args) if arity
                 else Atom(worker))
        out.append(Clause(whead, clause.body + (Atom(NEW_ANSWER),), clause.nvars))
    return Program(tuple(out), prog.tabled, prog.solver_name, prog.lattice_ref,
                   transformed=True)


# -- rendering -----------------------------------------------------------------


def _var_name(i: int) -> str:
    name = ""
    i += 1
    while i:
        i, r = divmod(i - 1, 26)
        name = chr(ord("A") + r) + name
    return name


_INFIX = _COMPARE_OPS | {"+", "-", "*", "/", "is"}


def render_term(t: Term, names: dict | None = None) -> str:
    names = names or {}

    def go(x: Term) -> str:
        if isinstance(x, Var):
            return names.get(x.id, _var_name(x.id))
        if isinstance(x, Atom):
            if re.fullmatch(r"[a-z][A-Za-z0-9_]*", x.name):
                return x.name
            return f"'{x.name}'"
        if isinstance(x, Num):
            v = x.value
            if not isinstance(v, int) and v.denominator != 1:
                return f"({v.numerator}/{v.denominator})"
            return str(int(v))
        if x.name in _INFIX and len(x.args) == 2:
            return f"({go(x.args[0])} {x.name} {go(x.args[1])})"
        if x.name == "-" and len(x.args) == 1:
            return f"-({go(x.args[0])})"
        return f"{x.name}({', '.join(go(a) for a in x.args)})"

    return go(t)


def render_program(prog: Program) -> str:
    lines = []
    if prog.solver_name:
        lines.append(f":- solver {prog.solver_name}.")
    if prog.lattice_ref:
        lines.append(f":- lattice {prog.lattice_ref}.")
    for name, arity in sorted(prog.tabled):
        lines.append(f":- table {name}/{arity}.")
    for clause in prog.clauses:
        head = render_term(clause.head)
        if clause.body:
            body = ", ".join(render_term(g) for g in clause.body)
            lines.append(f"{head} :- {body}.")
        else:
            lines.append(f"{head}.")
    return "\n".join(lines) + "\n"
