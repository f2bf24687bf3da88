"""The run database: product of a database with an automaton."""

from __future__ import annotations

from functools import cached_property

from .automaton import Automaton
from .errors import InvalidWalkError
from .graph import Database, Edge, Walk, serialize_database

__all__ = ["RunDatabase", "build"]


class RunDatabase:
    """``D x A`` with vertices ``(v, q)`` and edges ``(e, (q, a, q'))``.

    Vertices are ordered vertex-major then by state declaration order; edges
    edge-major then by transition declaration order.
    """

    def __init__(self, base: Database, automaton: Automaton):
        self.base = base
        self.automaton = automaton
        vertices = [(v, q) for v in base.vertices for q in automaton.states]
        edges = []
        for e in base.edges:
            for t in automaton.transitions:
                if t[1] in e.labels:
                    edges.append(Edge((e.id, t), (e.src, t[0]), (e.tgt, t[2]), frozenset([t[1]])))
        alphabet = list(dict.fromkeys(list(base.alphabet) + list(automaton.alphabet)))
        self.product = Database(vertices, edges, alphabet)

    @cached_property
    def initial_layer(self) -> tuple:
        init = self.automaton.initial_set
        return tuple(x for x in self.product.vertices if x[1] in init)

    @cached_property
    def final_layer(self) -> tuple:
        fin = self.automaton.final_set
        return tuple(x for x in self.product.vertices if x[1] in fin)

    def project(self, run: Walk) -> Walk:
        self.product.check_walk(run)
        return Walk(tuple(x[0] for x in run.vertices), tuple(e[0] for e in run.edges))

    def is_run(self, w: Walk) -> bool:
        self.product.check_walk(w)
        return w.src[1] in self.automaton.initial_set and w.tgt[1] in self.automaton.final_set

    def dump(self) -> str:
        """The product in the graph file format."""
        return serialize_database(self.product)

    def __repr__(self):
        return f"RunDatabase(|V'|={len(self.product.vertices)}, |E'|={len(self.product.edges)})"


def build(d: Database, a: Automaton) -> RunDatabase:
    return RunDatabase(d, a)


def project_walk(run: Walk) -> Walk:
    """Projection without validation, for runs produced internally."""
    if not run.vertices or not isinstance(run.vertices[0], tuple):
        raise InvalidWalkError("not a product walk")
    return Walk(tuple(x[0] for x in run.vertices), tuple(e[0] for e in run.edges))
