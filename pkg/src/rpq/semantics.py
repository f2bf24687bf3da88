"""Query semantics over a database: membership, evaluation and multiplicity.

Six semantics are supported.  ``walk``, ``trail`` and ``simple-walk`` project
every run and then filter on the projected walk; ``simple-run`` and
``trail-run`` filter runs of the product first; ``binding-trail`` keeps runs
of the Glushkov automaton whose (edge, target position) pairs are pairwise
distinct.  Multiplicities count runs, so two runs with the same projection
contribute twice.
"""

from __future__ import annotations

import enum
from collections import Counter, deque
from dataclasses import dataclass
from typing import Iterable, Iterator

from .automaton import Automaton
from .enumeration import IntGraph, OpCounter, simple_paths
from .errors import GuardExceeded, PreconditionError, UnboundedResultError
from .graph import Database, Walk
from .regex import Regex, glushkov, parse_regex

__all__ = [
    "Semantics",
    "Guards",
    "resolve_query",
    "tuple_membership",
    "evaluate",
    "tuple_multiplicity",
    "shortest_witnesses",
]


class Semantics(enum.Enum):
    WALK = "walk"
    TRAIL = "trail"
    SIMPLE_WALK = "simple-walk"
    TRAIL_RUN = "trail-run"
    SIMPLE_RUN = "simple-run"
    BINDING_TRAIL = "binding-trail"

    @classmethod
    def parse(cls, text: str) -> "Semantics":
        try:
            return cls(text.strip().lower().replace("_", "-"))
        except ValueError:
            names = ", ".join(m.value for m in cls)
            raise PreconditionError(f"unknown semantics {text!r} (expected one of {names})") from None


@dataclass(frozen=True)
class Guards:
    """Limits for the exponential procedures.

    ``max_product_vertices`` bounds ``|V| * |Q|`` for the trail and
    simple-walk searches; ``max_steps`` bounds search steps of any counting
    or exhaustive procedure.
    """

    max_product_vertices: int = 12
    max_steps: int = 1_000_000


DEFAULT_GUARDS = Guards()


class _Steps:
    __slots__ = ("left", "limit")

    def __init__(self, limit: int):
        self.left = limit
        self.limit = limit

    def tick(self):
        self.left -= 1
        if self.left < 0:
            raise GuardExceeded(f"search exceeded {self.limit} steps")


def resolve_query(q, mode: Semantics) -> tuple[Automaton, Regex | None]:
    """Automaton for ``q`` (regex text, :class:`Regex` or :class:`Automaton`)."""
    if isinstance(q, str):
        q = parse_regex(q)
    if isinstance(q, Regex):
        return glushkov(q), q
    if isinstance(q, Automaton):
        if mode is Semantics.BINDING_TRAIL:
            raise PreconditionError("binding-trail semantics needs the query as a regular expression")
        return q, None
    raise TypeError(f"unsupported query type {type(q).__name__}")


def _endpoint_sets(d: Database, endpoints):
    if endpoints is None:
        return list(d.vertices), set(d.vertices)
    s, t = endpoints
    d.require_vertex(s)
    d.require_vertex(t)
    return [s], {t}


def _check_brute_guard(d: Database, a: Automaton, guards: Guards):
    size = len(d.vertices) * len(a.states)
    if size > guards.max_product_vertices:
        raise GuardExceeded(
            f"exhaustive search over {size} product vertices exceeds the guard "
            f"({guards.max_product_vertices}); raise max_product_vertices to proceed"
        )


# -- tuple membership --------------------------------------------------------------


def _product_reachable(d: Database, a: Automaton, s, t) -> bool:
    finals = a.final_set
    start = [(s, q) for q in a.initials]
    seen = set(start)
    todo = deque(start)
    out = d.out_edges
    aout = a.out
    while todo:
        v, q = todo.popleft()
        if v == t and q in finals:
            return True
        for e in out[v]:
            for _, x, q2 in aout[q]:
                if x in e.labels and (e.tgt, q2) not in seen:
                    seen.add((e.tgt, q2))
                    todo.append((e.tgt, q2))
    return False


def tuple_membership(d: Database, q, s, t, mode: Semantics, guards: Guards = DEFAULT_GUARDS) -> bool:
    """Is there a walk from ``s`` to ``t`` in the answer under ``mode``?

    For walk, simple-run, trail-run and binding-trail semantics this is
    reachability in the product: a shortest run never repeats a product
    vertex, so it is simple (hence also a trail run and a binding trail).
    """
    d.require_vertex(s)
    d.require_vertex(t)
    a, _ = resolve_query(q, mode)
    if mode in (Semantics.TRAIL, Semantics.SIMPLE_WALK):
        _check_brute_guard(d, a, guards)
        for _ in _brute_runs(d, a, mode, [s], {t}, None, guards):
            return True
        return False
    return _product_reachable(d, a, s, t)


def shortest_witnesses(d: Database, a: Automaton, s, t) -> list[Walk]:
    """All minimal-length walks ``s -> t`` whose label meets ``L(a)``.

    Layered product BFS gives the minimal length; a DFS restricted to product
    states on shortest layers lists every walk of that length.
    """
    d.require_vertex(s)
    d.require_vertex(t)
    out = d.out_edges
    finals = a.final_set
    # backward distances to an accepting (t, f)
    inc = d.in_edges
    dist = {}
    todo = deque()
    for f in a.finals:
        dist[(t, f)] = 0
        todo.append((t, f))
    by_target: dict = {}
    for src, x, tgt in a.transitions:
        by_target.setdefault(tgt, []).append((src, x))
    while todo:
        v, q = todo.popleft()
        for e in inc[v]:
            for q0, x in by_target.get(q, ()):
                if x in e.labels and (e.src, q0) not in dist:
                    dist[(e.src, q0)] = dist[(v, q)] + 1
                    todo.append((e.src, q0))
    starts = [(s, q) for q in a.initials if (s, q) in dist]
    if not starts:
        return []
    best = min(dist[x] for x in starts)
    found = set()

    def dfs(layer: set, verts, edges, remaining):
        if remaining == 0:
            if verts[-1] == t and any(q in finals for (_, q) in layer):
                found.add(Walk(tuple(verts), tuple(edges)))
            return
        v = verts[-1]
        for e in out[v]:
            nxt = set()
            for (_, q) in layer:
                for _, x, q2 in a.out[q]:
                    if x in e.labels and dist.get((e.tgt, q2)) == remaining - 1:
                        nxt.add((e.tgt, q2))
            if nxt:
                verts.append(e.tgt)
                edges.append(e.id)
                dfs(nxt, verts, edges, remaining - 1)
                verts.pop()
                edges.pop()

    dfs({x for x in starts if dist[x] == best}, [s], [], best)
    return sorted(found, key=d.walk_key)


# -- exhaustive search for the projection-filtered semantics ----------------------------


def _brute_runs(d: Database, a: Automaton, mode: Semantics, sources, targets, max_length, guards: Guards):
    """Yield ``(walk, run count)`` for walk / trail / simple-walk semantics (DFS order)."""
    steps = _Steps(guards.max_steps)
    finals = a.final_set
    aout = a.out
    out = d.out_edges

    def advance(vec: dict, e) -> dict:
        nv: dict = {}
        for q, c in vec.items():
            for _, x, q2 in aout[q]:
                if x in e.labels:
                    nv[q2] = nv.get(q2, 0) + c
        return nv

    for s in sources:
        vec0 = {q: 1 for q in a.initials}
        if not vec0:
            continue
        verts = [s]
        edges = []
        used = {s} if mode is Semantics.SIMPLE_WALK else set()
        # explicit stack of (vector, iterator over out-edges)
        mult = sum(c for q, c in vec0.items() if q in finals)
        if mult and s in targets:
            yield Walk((s,), ()), mult
        stack = [(vec0, iter(out[s]))]
        while stack:
            vec, it = stack[-1]
            e = next(it, None)
            if e is None:
                stack.pop()
                if edges:
                    last = edges.pop()
                    verts.pop()
                    if mode is Semantics.SIMPLE_WALK:
                        used.discard(d.edge(last).tgt)
                    elif mode is Semantics.TRAIL:
                        used.discard(last)
                continue
            steps.tick()
            if max_length is not None and len(edges) >= max_length:
                continue
            if mode is Semantics.TRAIL and e.id in used:
                continue
            if mode is Semantics.SIMPLE_WALK and e.tgt in used:
                continue
            nv = advance(vec, e)
            if not nv:
                continue
            edges.append(e.id)
            verts.append(e.tgt)
            if mode is Semantics.TRAIL:
                used.add(e.id)
            elif mode is Semantics.SIMPLE_WALK:
                used.add(e.tgt)
            mult = sum(c for q, c in nv.items() if q in finals)
            if mult and e.tgt in targets:
                yield Walk(tuple(verts), tuple(edges)), mult
            stack.append((nv, iter(out[e.tgt])))


# -- auxiliary graphs for the run-filtered semantics ----------------------------------------


class _Aux:
    """Integer graph plus a decoder from its S->T paths to (run length, base walk)."""

    def __init__(self):
        self.nodes: dict = {}
        self.edges: list[tuple[int, int]] = []
        self.S = self.node(("__S__",))
        self.T = self.node(("__T__",))

    def node(self, key) -> int:
        i = self.nodes.get(key)
        if i is None:
            i = self.nodes[key] = len(self.nodes)
        return i

    def edge(self, u: int, v: int):
        self.edges.append((u, v))

    def graph(self) -> IntGraph:
        return IntGraph(len(self.nodes), self.edges)


def _simple_run_aux(d: Database, a: Automaton, sources, targets):
    aux = _Aux()
    init, fin = a.initial_set, a.final_set
    for v in sources:
        for q in a.states:
            if q in init:
                aux.edge(aux.S, aux.node(("p", v, q)))
    payload = {}
    for e in d.edges:
        for t in a.transitions:
            if t[1] in e.labels:
                payload[len(aux.edges)] = e
                aux.edge(aux.node(("p", e.src, t[0])), aux.node(("p", e.tgt, t[2])))
    for v in d.vertices:
        if v in targets:
            for q in a.states:
                if q in fin:
                    aux.edge(aux.node(("p", v, q)), aux.T)
    keys = {i: k for k, i in aux.nodes.items()}

    def decode(path):
        start = keys[aux.edges[path[0]][1]][1]
        inner = [payload[i] for i in path[1:-1]]
        return Walk((start,) + tuple(e.tgt for e in inner), tuple(e.id for e in inner))

    return aux, decode


def _trail_run_aux(d: Database, a: Automaton, sources, targets):
    aux = _Aux()
    init, fin = a.initial_set, a.final_set
    src_set = set(sources)
    pedges = [(e, t) for e in d.edges for t in a.transitions if t[1] in e.labels]
    node_of = {}
    for e, t in pedges:
        node_of[(e.id, t)] = aux.node(("x", e.id, t))
    # a product edge leaving (v, q) for each (v, q)
    leaving: dict = {}
    for e, t in pedges:
        leaving.setdefault((e.src, t[0]), []).append((e, t))
    direct = {}
    for v in sources:
        if v in targets:
            for q in a.states:
                if q in init and q in fin:
                    direct[len(aux.edges)] = v
                    aux.edge(aux.S, aux.T)
    for e, t in pedges:
        if e.src in src_set and t[0] in init:
            aux.edge(aux.S, node_of[(e.id, t)])
    for e, t in pedges:
        for e2, t2 in leaving.get((e.tgt, t[2]), ()):
            aux.edge(node_of[(e.id, t)], node_of[(e2.id, t2)])
        if e.tgt in targets and t[2] in fin:
            aux.edge(node_of[(e.id, t)], aux.T)
    keys = {i: k for k, i in aux.nodes.items()}

    def decode(path):
        if len(path) == 1:
            return Walk((direct[path[0]],), ())
        inner = [d.edge(keys[aux.edges[i][1]][1]) for i in path[:-1]]
        return Walk((inner[0].src,) + tuple(e.tgt for e in inner), tuple(e.id for e in inner))

    return aux, decode


def _binding_trail_aux(d: Database, a: Automaton, sources, targets):
    aux = _Aux()
    fin = a.final_set
    (init,) = a.initials if a.initials else (None,)
    if init is None:
        return aux, lambda path: None
    seen_edges = set()

    def link(u, v):
        if (u, v) not in seen_edges:
            seen_edges.add((u, v))
            aux.edge(u, v)

    def successors(q, e):
        return [q2 for _, x, q2 in a.out[q] if x in e.labels]

    for v in sources:
        src = aux.node(("s", v))
        link(aux.S, src)
        if v in targets and init in fin:
            link(src, aux.T)
        for e in d.out_edges[v]:
            for q2 in successors(init, e):
                link(src, aux.node(("k", e.id, q2)))
    # keys reachable from the sources, explored breadth first
    todo = deque(k for k in list(aux.nodes) if k[0] == "k")
    done = set()
    while todo:
        key = todo.popleft()
        if key in done:
            continue
        done.add(key)
        _, eid, q = key
        e = d.edge(eid)
        u = aux.node(key)
        for e2 in d.out_edges[e.tgt]:
            for q2 in successors(q, e2):
                nk = ("k", e2.id, q2)
                link(u, aux.node(nk))
                if nk not in done:
                    todo.append(nk)
        if q in fin and e.tgt in targets:
            link(u, aux.T)
    keys = {i: k for k, i in aux.nodes.items()}

    def decode(path):
        start = keys[aux.edges[path[0]][1]][1]
        inner = [d.edge(keys[aux.edges[i][1]][1]) for i in path[1:-1]]
        return Walk((start,) + tuple(e.tgt for e in inner), tuple(e.id for e in inner))

    return aux, decode


_RUN_MODES = frozenset({Semantics.SIMPLE_RUN, Semantics.TRAIL_RUN, Semantics.BINDING_TRAIL})


def _run_filtered(d, a, mode, sources, targets, max_length, ops):
    builder = {
        Semantics.SIMPLE_RUN: _simple_run_aux,
        Semantics.TRAIL_RUN: _trail_run_aux,
        Semantics.BINDING_TRAIL: _binding_trail_aux,
    }[mode]
    aux, decode = builder(d, a, sources, targets)
    g = aux.graph()
    for path in simple_paths(g, aux.S, aux.T, ops):
        w = decode(path)
        if max_length is not None and len(w) > max_length:
            return
        yield w


def _group_by_length(d: Database, walks: Iterable[Walk]) -> Iterator[tuple[Walk, int]]:
    bucket: Counter = Counter()
    current = None
    for w in walks:
        if current is not None and len(w) != current:
            yield from sorted(bucket.items(), key=lambda kv: d.walk_key(kv[0]))
            bucket = Counter()
        current = len(w)
        bucket[w] += 1
    yield from sorted(bucket.items(), key=lambda kv: d.walk_key(kv[0]))


def evaluate(
    d: Database,
    q,
    mode: Semantics,
    endpoints: tuple | None = None,
    *,
    max_length: int | None = None,
    guards: Guards = DEFAULT_GUARDS,
    ops: OpCounter | None = None,
) -> Iterator[tuple[Walk, int]]:
    """Stream ``(walk, multiplicity)`` pairs, shortest walks first.

    Run-filtered semantics are enumerated with polynomial delay; the others
    use a guarded exhaustive search.  Walk semantics needs ``max_length``.
    """
    a, _ = resolve_query(q, mode)
    sources, targets = _endpoint_sets(d, endpoints)
    if mode is Semantics.WALK and max_length is None:
        raise UnboundedResultError("the walk-semantics answer may be infinite; give max_length")
    if mode in _RUN_MODES:
        return _group_by_length(d, _run_filtered(d, a, mode, sources, targets, max_length, ops))
    if mode is not Semantics.WALK:
        _check_brute_guard(d, a, guards)
    found = list(_brute_runs(d, a, mode, sources, targets, max_length, guards))
    found.sort(key=lambda wm: d.walk_key(wm[0]))
    return iter(found)


# -- multiplicity ---------------------------------------------------------------------


def tuple_multiplicity(
    d: Database,
    q,
    s,
    t,
    mode: Semantics,
    *,
    max_length: int | None = None,
    guards: Guards = DEFAULT_GUARDS,
) -> int:
    """Total multiplicity of the answer walks from ``s`` to ``t``.

    Counted by exhaustive search in the product, independently of
    :func:`evaluate`; the step guard applies.
    """
    d.require_vertex(s)
    d.require_vertex(t)
    a, _ = resolve_query(q, mode)
    if mode is Semantics.WALK:
        if max_length is None:
            raise UnboundedResultError("walk semantics may have infinitely many answers; give max_length")
        return _count_walk_runs(d, a, s, t, max_length)
    if mode in (Semantics.TRAIL, Semantics.SIMPLE_WALK):
        _check_brute_guard(d, a, guards)
        return sum(m for _, m in _brute_runs(d, a, mode, [s], {t}, max_length, guards))
    return _count_filtered_runs(d, a, s, t, mode, max_length, guards)


def _count_walk_runs(d, a, s, t, max_length) -> int:
    vec = Counter({(s, q): 1 for q in a.initials})
    fin = a.final_set
    total = sum(c for (v, q), c in vec.items() if v == t and q in fin)
    for _ in range(max_length):
        nxt: Counter = Counter()
        for (v, q), c in vec.items():
            for e in d.out_edges[v]:
                for _, x, q2 in a.out[q]:
                    if x in e.labels:
                        nxt[(e.tgt, q2)] += c
        vec = nxt
        total += sum(c for (v, q), c in vec.items() if v == t and q in fin)
    return total


def _count_filtered_runs(d, a, s, t, mode, max_length, guards) -> int:
    steps = _Steps(guards.max_steps)
    fin = a.final_set
    total = 0

    def key_of(v, e, tr):
        if mode is Semantics.SIMPLE_RUN:
            return (e.tgt, tr[2])
        if mode is Semantics.TRAIL_RUN:
            return (e.id, tr)
        return (e.id, tr[2])

    for q0 in a.initials:
        used = {(s, q0)} if mode is Semantics.SIMPLE_RUN else set()
        if s == t and q0 in fin:
            total += 1

        def moves(v, q):
            for e in d.out_edges[v]:
                for tr in a.out[q]:
                    if tr[1] in e.labels:
                        yield e, tr

        stack = [(s, q0, 0, None, moves(s, q0))]
        while stack:
            v, q, depth, key, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                stack.pop()
                if key is not None:
                    used.discard(key)
                continue
            steps.tick()
            e, tr = nxt
            k = key_of(v, e, tr)
            if k in used or (max_length is not None and depth >= max_length):
                continue
            used.add(k)
            if e.tgt == t and tr[2] in fin:
                total += 1
            stack.append((e.tgt, tr[2], depth + 1, k, moves(e.tgt, tr[2])))
    return total
