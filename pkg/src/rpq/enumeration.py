"""Simple-walk enumeration with polynomial delay, plus an exhaustive oracle.

Walks come out ordered by length, ties broken by the sequence of edge
declaration ranks.  The core works on integer graphs so that the semantic
layer can reuse it on products, line graphs and key graphs.
"""

from __future__ import annotations

import heapq
from collections import deque
from typing import Iterator, Sequence

from .errors import GuardExceeded
from .graph import Database, Walk

__all__ = ["OpCounter", "IntGraph", "simple_paths", "yen_enumerate", "brute_force_enumerate"]


class OpCounter:
    """Counts elementary graph operations (vertex pops and edge scans)."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0

    def tick(self, k: int = 1):
        self.count += k


class IntGraph:
    """Directed multigraph on ``0..n-1``; edge ``i`` is ``edges[i]``."""

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]):
        self.n = n
        self.edges = list(edges)
        self.out: list[list[int]] = [[] for _ in range(n)]
        self.inc: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            self.out[u].append(i)
            self.inc[v].append(i)

    def path_nodes(self, s: int, path: Sequence[int]) -> list[int]:
        nodes = [s]
        for e in path:
            nodes.append(self.edges[e][1])
        return nodes


def _spur(g: IntGraph, start: int, t: int, banned_nodes, banned_edges, ops: OpCounter):
    """Shortest start->t path avoiding the bans, lexicographically least on edge ranks."""
    dist = {t: 0}
    todo = deque([t])
    while todo and start not in dist:
        v = todo.popleft()
        ops.tick()
        for e in g.inc[v]:
            ops.tick()
            u = g.edges[e][0]
            if u in dist or u in banned_nodes or e in banned_edges:
                continue
            dist[u] = dist[v] + 1
            todo.append(u)
    if start not in dist:
        return None
    path = []
    cur = start
    while cur != t:
        want = dist[cur] - 1
        for e in g.out[cur]:
            ops.tick()
            v = g.edges[e][1]
            if e not in banned_edges and v not in banned_nodes and dist.get(v) == want:
                path.append(e)
                cur = v
                break
    return tuple(path)


def simple_paths(g: IntGraph, s: int, t: int, ops: OpCounter | None = None) -> Iterator[tuple[int, ...]]:
    """Yen's deviation scheme over unit weights; yields edge-index tuples.

    Edges already used after a shared prefix are looked up in a trie of the
    emitted paths, so each emission costs at most ``len(path)`` BFS runs.
    """
    ops = ops if ops is not None else OpCounter()
    if s == t:
        yield ()
        return
    first = _spur(g, s, t, frozenset(), frozenset(), ops)
    if first is None:
        return
    heap = [(len(first), first)]
    seen = {first}
    used_after: dict[tuple, set] = {}
    while heap:
        _, path = heapq.heappop(heap)
        ops.tick()
        yield path
        for i in range(len(path)):
            used_after.setdefault(path[:i], set()).add(path[i])
        nodes = g.path_nodes(s, path)
        for i in range(len(path)):
            root = path[:i]
            spur = _spur(g, nodes[i], t, set(nodes[:i]), used_after[root], ops)
            if spur is None:
                continue
            cand = root + spur
            if cand not in seen:
                seen.add(cand)
                heapq.heappush(heap, (len(cand), cand))
                ops.tick()


def _as_int_graph(g: Database) -> IntGraph:
    vi = g.vertex_index
    return IntGraph(len(g.vertices), [(vi[e.src], vi[e.tgt]) for e in g.edges])


def _to_walk(g: Database, s, path: Sequence[int]) -> Walk:
    vertices = [s]
    ids = []
    for i in path:
        e = g.edges[i]
        ids.append(e.id)
        vertices.append(e.tgt)
    return Walk(tuple(vertices), tuple(ids))


def yen_enumerate(g: Database, s, t, ops: OpCounter | None = None) -> Iterator[Walk]:
    """Stream the simple walks from ``s`` to ``t`` in canonical order."""
    g.require_vertex(s)
    g.require_vertex(t)
    ig = _as_int_graph(g)
    vi = g.vertex_index

    def stream():
        for path in simple_paths(ig, vi[s], vi[t], ops):
            yield _to_walk(g, s, path)

    return stream()


def brute_force_enumerate(g: Database, s, t, max_vertices: int = 16) -> list[Walk]:
    """All simple walks ``s -> t`` by exhaustive DFS (test oracle)."""
    g.require_vertex(s)
    g.require_vertex(t)
    if len(g.vertices) > max_vertices:
        raise GuardExceeded(f"{len(g.vertices)} vertices exceed the oracle bound {max_vertices}")
    found = []
    out = g.out_edges

    def dfs(v, visited, path):
        if v == t:
            found.append(_to_walk_ids(s, path))
            return
        for e in out[v]:
            if e.tgt not in visited:
                visited.add(e.tgt)
                path.append(e)
                dfs(e.tgt, visited, path)
                path.pop()
                visited.discard(e.tgt)

    def _to_walk_ids(start, path):
        return Walk((start,) + tuple(e.tgt for e in path), tuple(e.id for e in path))

    dfs(s, {s}, [])
    found.sort(key=g.walk_key)
    return found
