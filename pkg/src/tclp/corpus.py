"""Bundled benchmark programs and batch runners.

The distance-traversal family comes in four source variants (left/right
recursion, plain arithmetic vs. rational constraints) over two graphs
(with and without a cycle); running each across the four execution systems
reproduces the termination comparison. The rest of the corpus: bounded and
unbounded naturals, backward Fibonacci, shortest-distance with answer
management, generated difference-constraint reachability programs, and the
sign-analysis pair (constraint version vs. ground-token tabling version).
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .engine import DEFAULT_BUDGET, Engine, Mode, RunReport, Strategy
from .program import parse_program, parse_query
from .solvers import make_solver
from .solvers.lattice import signs_lattice

# -- distance traversal --------------------------------------------------------

DIST_LP_LEFT = """
dist(X, Y, D) :- dist(X, Z, D1), edge(Z, Y, D2), D is D1 + D2.
dist(X, Y, D) :- edge(X, Y, D).
"""

DIST_LP_RIGHT = """
dist(X, Y, D) :- edge(X, Z, D1), dist(Z, Y, D2), D is D1 + D2.
dist(X, Y, D) :- edge(X, Y, D).
"""

DIST_CLP_LEFT = """
:- solver q.
dist(X, Y, D) :- D1 #> 0, D2 #> 0, D #= D1 + D2, dist(X, Z, D1), edge(Z, Y, D2).
dist(X, Y, D) :- edge(X, Y, D).
"""

DIST_CLP_RIGHT = """
:- solver q.
dist(X, Y, D) :- D1 #> 0, D2 #> 0, D #= D1 + D2, edge(X, Z, D1), dist(Z, Y, D2).
dist(X, Y, D) :- edge(X, Y, D).
"""

TABLE_DIST = ":- table dist/3.\n"

#: two nodes, constrained return edge: the cycle makes path lengths dense
GRAPH_CYCLIC_CLP = """
edge(a, b, 50).
edge(b, a, D) :- D #> 25, D #< 35.
"""
GRAPH_CYCLIC_LP = """
edge(a, b, 50).
edge(b, a, 30).
"""
GRAPH_ACYCLIC_CLP = """
edge(a, b, 50).
edge(b, c, D) :- D #> 25, D #< 35.
"""
GRAPH_ACYCLIC_LP = """
edge(a, b, 50).
edge(b, c, 30).
"""

QUERY_LP = "?- dist(a, Y, D), D < 150."
QUERY_CLP = "?- D #< 150, dist(a, Y, D)."

# -- naturals ------------------------------------------------------------------

NAT = """
:- solver q.
:- table nat/1.
nat(X) :- X #= Y + 1, nat(Y).
nat(0).
"""

NAT_EXTRA = NAT + "nat(X) :- X #> 1000.\n"

# -- backward Fibonacci -----------------------------------------------------------

FIB = """
:- solver q.
:- table fib/2.
fib(0, 0).
fib(1, 1).
fib(N, F) :- N #> 1, N1 #= N - 1, N2 #= N - 2,
             F #= F1 + F2, F1 #>= 0, F2 #>= 0,
             fib(N1, F1), fib(N2, F2).
"""

# -- shortest distance (answer management showcase) --------------------------------

SD = """
:- solver q.
:- table sd/3.
sd(X, Y, D) :- edge(X, Y, D0), D #>= D0.
sd(X, Y, D) :- sd(X, Z, D1), edge(Z, Y, D2), D #>= D1 + D2.
edge(a, b, 3.0).
edge(b, c, 3.0).
edge(a, d, 1.0).
edge(d, c, 2.0).
edge(d, b, 1.0).
edge(b, a, 1.3).
"""

# -- sign analysis ------------------------------------------------------------------
# A ring-rotation program analyzed over the signs domain. The constraint
# version suspends recursive calls by lattice entailment (a call with a
# `num` bound entails the all-`top` generator); the ground-token twin runs
# under variant tabling and must explore each bound pattern separately.

SIGN_RING_TCLP = """
:- solver lat.
:- lattice signs.
:- table ring/6.
ring(A1, A2, A3, B1, B2, B3) :- B1 = A1, B2 = A2, B3 = A3.
ring(A1, A2, A3, B1, B2, B3) :- lattest(gt, A1, A2), ring(A2, A3, A1, B1, B2, B3).
ring(A1, A2, A3, B1, B2, B3) :- ring(A3, A1, A2, B1, B2, B3).
"""

SIGN_RING_TCLP_QUERY = "?- ring(A1, A2, A3, B1, B2, B3)."


def sign_ring_tab_source() -> str:
    """Ground-token twin of the ring analysis for variant tabling.

    The comparison filter is a finite fact table derived from the signs
    lattice (operands refined to numbers, outcome possible), so the program
    carries the same abstract semantics without constraint goals.
    """
    lat = signs_lattice()
    lines = [":- table ring/6.",
             "ring(A1, A2, A3, B1, B2, B3) :- B1 = A1, B2 = A2, B3 = A3.",
             "ring(A1, A2, A3, B1, B2, B3) :- abs_gt(A1, A2, R1, R2), "
             "ring(R2, A3, R1, B1, B2, B3).",
             "ring(A1, A2, A3, B1, B2, B3) :- ring(A3, A1, A2, B1, B2, B3)."]
    refine = lat.refine_point
    for a, b in sorted(lat.tests["gt"]):
        lines.append(f"abs_gt({a}, {b}, {a}, {b}).")
    # top operands refine to num before the test
    top = lat.top
    for a, b in sorted(lat.tests["gt"]):
        if a == lat.meet(top, refine):
            lines.append(f"abs_gt({top}, {b}, {a}, {b}).")
        if b == lat.meet(top, refine):
            lines.append(f"abs_gt({a}, {top}, {a}, {b}).")
    if (lat.meet(top, refine), lat.meet(top, refine)) in lat.tests["gt"]:
        lines.append(f"abs_gt({top}, {top}, {refine}, {refine}).")
    return "\n".join(lines) + "\n"


SIGN_RING_TAB_QUERY = "?- ring(top, top, top, B1, B2, B3)."

# -- random difference-constraint reachability ------------------------------------


def make_diff_reachability(seed: int, nodes: int = 5, extra_edges: int = 3) -> tuple:
    """A random DAG reachability program over difference constraints.

    Edges carry integer weights; reach/2 relates a node to a distance
    variable constrained relative to the start. Acyclicity keeps every
    strategy terminating, including storing all answers.
    """
    rng = random.Random(seed)
    names = [f"n{i}" for i in range(nodes)]
    edges = []
    for i in range(1, nodes):
        j = rng.randrange(i)
        edges.append((names[j], names[i], rng.randint(1, 9)))
    for _ in range(extra_edges):
        i, j = sorted(rng.sample(range(nodes), 2))
        edges.append((names[i], names[j], rng.randint(1, 9)))
    lines = [":- solver d.", ":- table reach/2.",
             "reach(Y, D) :- reach(X, D1), edge(X, Y, W), D - D1 #>= W.",
             f"reach({names[0]}, D) :- D #>= 0."]
    for a, b, w in edges:
        lines.append(f"edge({a}, {b}, {w}).")
    target = names[rng.randrange(1, nodes)]
    return "\n".join(lines) + "\n", f"?- reach({target}, D), D #=< 40."


# -- runners ------------------------------------------------------------------------


def run_text(source: str, query: str, mode: Mode = Mode.TCLP,
             strategy: Strategy = Strategy.BOTH, solver_name: str | None = None,
             budget: int = DEFAULT_BUDGET, **engine_kw) -> tuple:
    prog = parse_program(source)
    goals, names = parse_query(query)
    sname = solver_name or prog.solver_name or "none"
    lattice = signs_lattice() if prog.lattice_ref in (None, "signs") else None
    solver = make_solver(sname, lattice)
    engine = Engine(prog, solver, mode, strategy, budget=budget, **engine_kw)
    report = engine.solve(goals, names)
    return engine, report


@dataclass
class MatrixCell:
    recursion: str      # "left" | "right"
    graph: str          # "acyclic" | "cyclic"
    system: str         # "LP" | "CLP" | "TAB" | "TCLP"
    status: str
    steps: int
    answers: int
    elapsed_ms: float

    @property
    def terminates(self) -> bool:
        return self.status == "complete"


#: expected termination pattern (the comparison table this reproduces)
MATRIX_EXPECTED = {
    ("left", "acyclic"): {"LP": False, "CLP": False, "TAB": True, "TCLP": True},
    ("right", "acyclic"): {"LP": True, "CLP": True, "TAB": True, "TCLP": True},
    ("left", "cyclic"): {"LP": False, "CLP": False, "TAB": False, "TCLP": True},
    ("right", "cyclic"): {"LP": False, "CLP": True, "TAB": False, "TCLP": True},
}

_SYSTEMS = {
    "LP": (Mode.SLD, "none", False, False),
    "CLP": (Mode.SLD, "q", True, False),
    "TAB": (Mode.VARIANT, "none", False, True),
    "TCLP": (Mode.TCLP, "q", True, True),
}


def matrix_sources(recursion: str, graph: str, system: str) -> tuple:
    mode, solver_name, clp, tabled = _SYSTEMS[system]
    if clp:
        body = DIST_CLP_LEFT if recursion == "left" else DIST_CLP_RIGHT
        edges = GRAPH_ACYCLIC_CLP if graph == "acyclic" else GRAPH_CYCLIC_CLP
        query = QUERY_CLP
    else:
        body = DIST_LP_LEFT if recursion == "left" else DIST_LP_RIGHT
        edges = GRAPH_ACYCLIC_LP if graph == "acyclic" else GRAPH_CYCLIC_LP
        query = QUERY_LP
    source = (TABLE_DIST if tabled else "") + body + edges
    return source, query, mode, solver_name


def termination_matrix(budget: int = DEFAULT_BUDGET, systems=None) -> list:
    cells = []
    for (recursion, graph), row in MATRIX_EXPECTED.items():
        for system in (systems or row):
            source, query, mode, solver_name = matrix_sources(recursion, graph, system)
            engine, report = run_text(source, query, mode=mode,
                                      solver_name=solver_name, budget=budget)
            cells.append(MatrixCell(recursion, graph, system, report.status,
                                    report.steps, len(report.answers),
                                    report.elapsed_ms))
    return cells


#: name -> (source, query, solver, mode); the bench runner crosses these
#: with the answer-management strategies
BENCHMARKS = {
    "dist_left": (TABLE_DIST + DIST_CLP_LEFT + GRAPH_CYCLIC_CLP, QUERY_CLP, "q", Mode.TCLP),
    "dist_right": (TABLE_DIST + DIST_CLP_RIGHT + GRAPH_CYCLIC_CLP, QUERY_CLP, "q", Mode.TCLP),
    "nat_bounded": (NAT, "?- X #< 10, nat(X).", "q", Mode.TCLP),
    "fib_89": (FIB, "?- fib(N, 89).", "q", Mode.TCLP),
    "sd": (SD, "?- sd(a, c, Dist).", "q", Mode.TCLP),
    "diff_reach": (*make_diff_reachability(1), "d", Mode.TCLP),
    "sign_ring": (SIGN_RING_TCLP, SIGN_RING_TCLP_QUERY, "lat", Mode.TCLP),
}


def run_bench(strategies=None, budget: int = DEFAULT_BUDGET) -> list:
    """Run the corpus across strategies; rows of per-run counters."""
    rows = []
    for name, (source, query, solver_name, mode) in BENCHMARKS.items():
        for strategy in strategies or list(Strategy):
            engine, report = run_text(source, query, mode=mode,
                                      strategy=strategy,
                                      solver_name=solver_name, budget=budget)
            rows.append({
                "benchmark": name, "mode": mode.value,
                "strategy": strategy.value, "status": report.status,
                "answers": len(report.answers), "steps": report.steps,
                "elapsed_ms": round(report.elapsed_ms, 2),
                **report.counters.as_dict(),
            })
    return rows
