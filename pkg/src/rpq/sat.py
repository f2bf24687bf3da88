"""3-SAT instances as walk-membership instances.

A fixed six-letter automaton reads a database built from the instance; the
simple runs projecting onto one designated walk are in bijection with the
satisfying valuations, provided every clause mentions three distinct
variables.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .automaton import Automaton
from .errors import GuardExceeded, ParseError, ValidationError
from .graph import Database, Edge, Walk

__all__ = [
    "SatInstance",
    "parse_dimacs",
    "format_dimacs",
    "sat_automaton",
    "build_reduction",
    "count_satisfying",
    "ReductionCheck",
    "reduction_check",
    "TOP",
]

TOP = "⊤"
SAT_LETTERS = ("Check", "Eval", "Invert", "Keep", "Reset", "Var")


@dataclass(frozen=True)
class SatInstance:
    """``n`` variables ``1..n``; each clause is three ``(variable, positive)`` literals."""

    n: int
    clauses: tuple

    def __post_init__(self):
        clauses = tuple(tuple((int(v), bool(p)) for v, p in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        if self.n < 1:
            raise ValidationError("an instance has at least one variable")
        if not clauses:
            raise ValidationError("an instance has at least one clause")
        for c in clauses:
            if len(c) != 3:
                raise ValidationError(f"clause {c} does not have exactly 3 literals")
            for v, _ in c:
                if not 1 <= v <= self.n:
                    raise ValidationError(f"variable {v} outside 1..{self.n}")

    @property
    def gamma(self) -> int:
        return len(self.clauses)

    @classmethod
    def from_ints(cls, n: int, clauses) -> "SatInstance":
        """Clauses given DIMACS-style, e.g. ``[(-1, 3, -4), ...]``."""
        return cls(n, tuple(tuple((abs(x), x > 0) for x in c) for c in clauses))

    def satisfied_by(self, valuation) -> bool:
        """``valuation[v]`` is the truth value of variable ``v`` (index 0 unused)."""
        return all(any(valuation[v] == p for v, p in c) for c in self.clauses)


def parse_dimacs(text: str) -> SatInstance:
    header = None
    lits: list[int] = []
    clauses = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        toks = line.split()
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("expected: p cnf <variables> <clauses>", line=lineno)
            try:
                header = (int(toks[2]), int(toks[3]))
            except ValueError:
                raise ParseError("non-integer header field", line=lineno) from None
            continue
        if header is None:
            raise ParseError("clause before the 'p cnf' header", line=lineno)
        for tok in toks:
            try:
                x = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", line=lineno) from None
            if x == 0:
                if len(lits) != 3:
                    raise ParseError(f"clause has {len(lits)} literals, expected 3", line=lineno)
                clauses.append(tuple(lits))
                lits = []
            else:
                if abs(x) > header[0]:
                    raise ParseError(f"literal {x} exceeds the declared {header[0]} variables", line=lineno)
                lits.append(x)
    if header is None:
        raise ParseError("missing 'p cnf' header")
    if lits:
        raise ParseError("last clause is not terminated by 0")
    if len(clauses) != header[1]:
        raise ParseError(f"header announces {header[1]} clauses, found {len(clauses)}")
    try:
        return SatInstance.from_ints(header[0], clauses)
    except ValidationError as exc:
        raise ParseError(str(exc)) from None


def format_dimacs(inst: SatInstance) -> str:
    lines = [f"p cnf {inst.n} {inst.gamma}"]
    for c in inst.clauses:
        lines.append(" ".join(str(v if p else -v) for v, p in c) + " 0")
    return "\n".join(lines) + "\n"


def sat_automaton() -> Automaton:
    """Three states ``0``, ``1``, ``⊤``; ``⊤`` is the only initial and final state."""
    Z, O, T = "0", "1", TOP
    trans = [
        (Z, "Keep", Z), (O, "Keep", O), (T, "Keep", T),
        (Z, "Var", Z), (Z, "Var", O), (O, "Var", Z), (O, "Var", O), (T, "Var", Z), (T, "Var", O),
        (Z, "Invert", O), (O, "Invert", Z),
        (Z, "Reset", T), (O, "Reset", T), (T, "Reset", T),
        (O, "Eval", Z), (O, "Eval", O), (Z, "Eval", T), (T, "Eval", T),
        (Z, "Check", T), (T, "Check", T),
    ]  # fmt: skip
    return Automaton(SAT_LETTERS, [Z, O, T], trans, [T], [T])


def _lit(v: int, positive: bool) -> str:
    return f"x{v}" if positive else f"~x{v}"


def build_reduction(inst: SatInstance) -> tuple[Database, Walk]:
    """The database of the reduction and the walk through every one of its edges.

    Vertex names: ``Start``, ``Mid``, ``End``, ``x<i>_in``, ``x<i>``,
    ``x<i>_out``, ``~x<i>``, ``<lit>@C<j>`` for ``j = 0..γ``, ``C<j>_in``,
    ``C<j>_out``.  Edge ids encode their gadget and step.
    """
    g = inst.gamma
    vertices = ["Start", "Mid", "End"]
    for v in range(1, inst.n + 1):
        vertices += [f"x{v}_in", f"x{v}", f"x{v}_out", f"~x{v}"]
        for pos in (True, False):
            vertices += [f"{_lit(v, pos)}@C{j}" for j in range(g + 1)]
    for j in range(1, g + 1):
        vertices += [f"C{j}_in", f"C{j}_out"]

    edges: list[Edge] = []
    walk_v = ["Start"]
    walk_e: list[str] = []

    def step(eid: str, tgt: str, label: str):
        edges.append(Edge(eid, walk_v[-1], tgt, frozenset([label])))
        walk_v.append(tgt)
        walk_e.append(eid)

    for v in range(1, inst.n + 1):
        x, nx = f"x{v}", f"~x{v}"
        step("reset.Start" if v == 1 else f"reset.x{v - 1}", f"{x}_in", "Reset")
        k = 0

        def gadget(tgt, label):
            nonlocal k
            step(f"{x}.{k}", tgt, label)
            k += 1

        gadget(x, "Var")
        for j in range(g + 1):
            gadget(f"{x}@C{j}", "Keep")
        gadget(nx, "Invert")
        for j in range(g, -1, -1):
            gadget(f"{nx}@C{j}", "Keep")
        gadget(f"{x}_out", "Reset")
    step(f"reset.x{inst.n}", "Mid", "Reset")

    for j, clause in enumerate(inst.clauses, start=1):
        step("reset.Mid" if j == 1 else f"reset.C{j - 1}", f"C{j}_in", "Reset")
        (v1, p1), (v2, p2), (v3, p3) = clause
        step(f"C{j}.0", f"{_lit(v1, p1)}@C{j}", "Var")
        step(f"C{j}.1", f"{_lit(v2, p2)}@C{j}", "Eval")
        step(f"C{j}.2", f"{_lit(v3, p3)}@C{j}", "Eval")
        step(f"C{j}.3", f"C{j}_out", "Check")
    step(f"reset.C{g}", "End", "Reset")

    db = Database(vertices, edges, SAT_LETTERS)
    return db, Walk(tuple(walk_v), tuple(walk_e))


def count_satisfying(inst: SatInstance, max_variables: int = 20) -> int:
    if inst.n > max_variables:
        raise GuardExceeded(f"{inst.n} variables exceed the brute-force bound {max_variables}")
    total = 0
    for bits in itertools.product((False, True), repeat=inst.n):
        if inst.satisfied_by((None,) + bits):
            total += 1
    return total


@dataclass(frozen=True)
class ReductionCheck:
    simple_runs: int
    satisfying: int

    @property
    def ok(self) -> bool:
        return self.simple_runs == self.satisfying


def reduction_check(inst: SatInstance, max_steps: int = 10**7) -> ReductionCheck:
    """Compare the simple-run count over the reduction walk with brute force."""
    from .membership import count_runs
    from .semantics import Semantics

    db, walk = build_reduction(inst)
    runs = count_runs(db, sat_automaton(), walk, Semantics.SIMPLE_RUN, max_steps=max_steps)
    return ReductionCheck(runs, count_satisfying(inst))
