"""Edge-labelled multigraph databases, walks and their text formats.

Graph file format (UTF-8, one record per line, ``#`` starts a comment)::

    alphabet Road Ferry Gas        # optional; inferred from edges otherwise
    vertex s
    edge e1 s c1 Road
    edge e7 c3 c3 Gas,Road         # several labels are comma separated

Vertices referenced by an edge line are declared implicitly.  Walks are
written ``v0 -e0-> v1 -e1-> ... vk``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import InvalidWalkError, ParseError, UnknownVertexError, ValidationError

__all__ = [
    "Edge",
    "Database",
    "Walk",
    "WalkBag",
    "parse_database",
    "serialize_database",
    "parse_walk",
    "format_walk",
    "format_id",
    "is_trail",
    "is_simple",
    "walk_label_contains",
    "concat",
]


def format_id(x) -> str:
    """Render a (possibly nested tuple) identifier as a single token."""
    if isinstance(x, tuple):
        return "(" + ",".join(format_id(p) for p in x) + ")"
    return str(x)


@dataclass(frozen=True)
class Edge:
    id: Hashable
    src: Hashable
    tgt: Hashable
    labels: frozenset

    def __post_init__(self):
        if not isinstance(self.labels, frozenset):
            object.__setattr__(self, "labels", frozenset(self.labels))


class Database:
    """An immutable directed multigraph whose edges carry non-empty label sets.

    Vertex and edge declaration order is kept: every enumeration in the
    package breaks ties on it, which makes outputs reproducible.
    """

    def __init__(self, vertices: Iterable, edges: Iterable[Edge], alphabet: Iterable | None = None):
        self._vertices = tuple(dict.fromkeys(vertices))
        self._edges = tuple(edges)
        vset = set(self._vertices)

        labels_seen = {}
        by_id = {}
        for e in self._edges:
            if e.id in by_id:
                raise ValidationError(f"duplicate edge id {format_id(e.id)}")
            by_id[e.id] = e
            if e.src not in vset or e.tgt not in vset:
                missing = e.src if e.src not in vset else e.tgt
                raise ValidationError(
                    f"edge {format_id(e.id)} references undeclared vertex {format_id(missing)}"
                )
            if not e.labels:
                raise ValidationError(f"edge {format_id(e.id)} has no label")
            for a in e.labels:
                labels_seen.setdefault(a, None)

        if alphabet is None:
            self._alphabet = tuple(labels_seen)
        else:
            self._alphabet = tuple(dict.fromkeys(alphabet))
            unknown = [a for a in labels_seen if a not in set(self._alphabet)]
            if unknown:
                raise ValidationError(f"label {unknown[0]!r} is not in the alphabet")
        self._edge_by_id = by_id

    @property
    def vertices(self) -> tuple:
        return self._vertices

    @property
    def edges(self) -> tuple[Edge, ...]:
        return self._edges

    @property
    def alphabet(self) -> tuple:
        return self._alphabet

    def edge(self, edge_id) -> Edge:
        try:
            return self._edge_by_id[edge_id]
        except KeyError:
            raise ValidationError(f"unknown edge {format_id(edge_id)}") from None

    def has_vertex(self, v) -> bool:
        return v in self._vertex_index

    def require_vertex(self, v):
        if v not in self._vertex_index:
            raise UnknownVertexError(f"unknown vertex {format_id(v)}")
        return v

    @cached_property
    def _vertex_index(self) -> dict:
        return {v: i for i, v in enumerate(self._vertices)}

    @cached_property
    def edge_index(self) -> dict:
        """Declaration rank of each edge id; the canonical tie-breaker."""
        return {e.id: i for i, e in enumerate(self._edges)}

    @cached_property
    def vertex_index(self) -> dict:
        return dict(self._vertex_index)

    @cached_property
    def out_edges(self) -> dict:
        out = {v: [] for v in self._vertices}
        for e in self._edges:
            out[e.src].append(e)
        return {v: tuple(es) for v, es in out.items()}

    @cached_property
    def in_edges(self) -> dict:
        inc = {v: [] for v in self._vertices}
        for e in self._edges:
            inc[e.tgt].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def walk(self, start, edge_ids: Sequence = ()) -> "Walk":
        """Build the walk leaving ``start`` along ``edge_ids``, checking adjacency."""
        self.require_vertex(start)
        vertices = [start]
        for eid in edge_ids:
            e = self.edge(eid)
            if e.src != vertices[-1]:
                raise InvalidWalkError(
                    f"edge {format_id(eid)} leaves {format_id(e.src)}, not {format_id(vertices[-1])}"
                )
            vertices.append(e.tgt)
        return Walk(tuple(vertices), tuple(edge_ids))

    def check_walk(self, w: "Walk") -> "Walk":
        if len(w.vertices) != len(w.edges) + 1:
            raise InvalidWalkError("a walk alternates k+1 vertices and k edges")
        for v in w.vertices:
            if v not in self._vertex_index:
                raise InvalidWalkError(f"unknown vertex {format_id(v)}")
        for i, eid in enumerate(w.edges):
            if eid not in self._edge_by_id:
                raise InvalidWalkError(f"unknown edge {format_id(eid)}")
            e = self._edge_by_id[eid]
            if e.src != w.vertices[i] or e.tgt != w.vertices[i + 1]:
                raise InvalidWalkError(
                    f"edge {format_id(eid)} does not connect "
                    f"{format_id(w.vertices[i])} to {format_id(w.vertices[i + 1])}"
                )
        return w

    def walk_key(self, w: "Walk") -> tuple:
        """Canonical sort key: length, then edge declaration ranks, then start vertex."""
        idx = self.edge_index
        return (len(w.edges), tuple(idx[e] for e in w.edges), self._vertex_index[w.vertices[0]])

    def __eq__(self, other):
        if not isinstance(other, Database):
            return NotImplemented
        return (
            self._vertices == other._vertices
            and self._edges == other._edges
            and set(self._alphabet) == set(other._alphabet)
        )

    def __hash__(self):
        return hash((self._vertices, self._edges))

    def __repr__(self):
        return f"Database(|V|={len(self._vertices)}, |E|={len(self._edges)}, alphabet={list(self._alphabet)})"


@dataclass(frozen=True)
class Walk:
    """Alternating vertex/edge sequence ``n0 e0 n1 ... e(k-1) nk``.

    Validity depends on a :class:`Database`; build walks with
    :meth:`Database.walk` or check them with :meth:`Database.check_walk`.
    """

    vertices: tuple
    edges: tuple = ()

    def __post_init__(self):
        if not self.vertices:
            raise InvalidWalkError("a walk has at least one vertex")
        if len(self.vertices) != len(self.edges) + 1:
            raise InvalidWalkError("a walk alternates k+1 vertices and k edges")

    @classmethod
    def single(cls, v) -> "Walk":
        return cls((v,), ())

    def __len__(self):
        return len(self.edges)

    @property
    def src(self):
        return self.vertices[0]

    @property
    def tgt(self):
        return self.vertices[-1]

    @property
    def endpoints(self) -> tuple:
        return (self.vertices[0], self.vertices[-1])

    def factor(self, i: int, j: int) -> "Walk":
        """Sub-walk from the i-th to the j-th vertex (inclusive)."""
        return Walk(self.vertices[i : j + 1], self.edges[i:j])

    def __str__(self):
        return format_walk(self)


def is_trail(w: Walk) -> bool:
    return len(set(w.edges)) == len(w.edges)


def is_simple(w: Walk) -> bool:
    return len(set(w.vertices)) == len(w.vertices)


def walk_label_contains(db: Database, w: Walk, u: Sequence) -> bool:
    if len(u) != len(w.edges):
        return False
    return all(letter in db.edge(eid).labels for letter, eid in zip(u, w.edges))


def concat(w: Walk, w2: Walk) -> Walk:
    if w.tgt != w2.src:
        raise InvalidWalkError(
            f"cannot concatenate: walk ends at {format_id(w.tgt)}, next starts at {format_id(w2.src)}"
        )
    return Walk(w.vertices + w2.vertices[1:], w.edges + w2.edges)


class WalkBag:
    """Insertion-ordered multiset of walks."""

    def __init__(self, items: Iterable[tuple[Walk, int]] = ()):
        self._counts: dict[Walk, int] = {}
        for w, m in items:
            self.add(w, m)

    def add(self, w: Walk, multiplicity: int = 1):
        if multiplicity < 1:
            raise ValueError("multiplicities are positive")
        self._counts[w] = self._counts.get(w, 0) + multiplicity

    def __iter__(self) -> Iterator[tuple[Walk, int]]:
        return iter(self._counts.items())

    def __len__(self):
        return len(self._counts)

    def __contains__(self, w):
        return w in self._counts

    def multiplicity(self, w: Walk) -> int:
        return self._counts.get(w, 0)

    def walks(self) -> list[Walk]:
        return list(self._counts)

    def total(self) -> int:
        return sum(self._counts.values())

    def as_counter(self) -> Counter:
        return Counter(self._counts)

    def __eq__(self, other):
        if isinstance(other, WalkBag):
            return self._counts == other._counts
        return NotImplemented

    def __repr__(self):
        return f"WalkBag({[(str(w), m) for w, m in self._counts.items()]})"


# -- text formats -----------------------------------------------------------


def _tokens(line: str) -> list[str]:
    return line.split("#", 1)[0].split()


def parse_database(text: str) -> Database:
    alphabet = None
    vertices: list = []
    edges: list[Edge] = []
    seen_ids = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        kind, args = toks[0], toks[1:]
        if kind == "alphabet":
            if not args:
                raise ParseError("empty alphabet declaration", line=lineno)
            alphabet = (alphabet or []) + args
        elif kind == "vertex":
            if len(args) != 1:
                raise ParseError("expected: vertex <name>", line=lineno)
            vertices.append(args[0])
        elif kind == "edge":
            if len(args) != 4:
                raise ParseError("expected: edge <id> <src> <tgt> <label>[,<label>...]", line=lineno)
            eid, src, tgt, labels = args
            labs = [lab for lab in labels.split(",")]
            if any(not lab for lab in labs):
                raise ParseError(f"empty label in {labels!r}", line=lineno)
            if eid in seen_ids:
                raise ParseError(f"duplicate edge id {eid}", line=lineno)
            if alphabet is not None:
                for lab in labs:
                    if lab not in alphabet:
                        raise ParseError(f"label {lab!r} is not in the declared alphabet", line=lineno)
            seen_ids.add(eid)
            vertices.extend([src, tgt])
            edges.append(Edge(eid, src, tgt, frozenset(labs)))
        else:
            raise ParseError(f"unknown record {kind!r}", line=lineno)
    if alphabet is None:
        # keep first-seen order for determinism
        alphabet = list(dict.fromkeys(lab for e in edges for lab in sorted(e.labels)))
    return Database(vertices, edges, alphabet)


def serialize_database(db: Database) -> str:
    lines = ["alphabet " + " ".join(format_id(a) for a in db.alphabet)] if db.alphabet else []
    lines += [f"vertex {format_id(v)}" for v in db.vertices]
    order = {a: i for i, a in enumerate(db.alphabet)}
    for e in db.edges:
        labels = ",".join(format_id(a) for a in sorted(e.labels, key=lambda a: order.get(a, len(order))))
        lines.append(f"edge {format_id(e.id)} {format_id(e.src)} {format_id(e.tgt)} {labels}")
    return "\n".join(lines) + "\n"


def format_walk(w: Walk) -> str:
    parts = [format_id(w.vertices[0])]
    for eid, v in zip(w.edges, w.vertices[1:]):
        parts.append(f"-{format_id(eid)}->")
        parts.append(format_id(v))
    return " ".join(parts)


def parse_walk(text: str, db: Database | None = None) -> Walk:
    """Parse ``v0 -e0-> v1 ...``; with ``db`` given, ids are checked against it."""
    toks = text.split()
    if not toks or len(toks) % 2 == 0:
        raise ParseError("expected: v0 -e0-> v1 ... vk")
    vertices = toks[0::2]
    edges = []
    for tok in toks[1::2]:
        if not (tok.startswith("-") and tok.endswith("->") and len(tok) > 3):
            raise ParseError(f"bad edge token {tok!r}")
        edges.append(tok[1:-2])
    w = Walk(tuple(vertices), tuple(edges))
    if db is not None:
        db.check_walk(w)
    return w
