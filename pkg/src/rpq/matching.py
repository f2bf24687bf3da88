"""Maximum matching in bipartite graphs by augmenting paths."""

from __future__ import annotations

from typing import Sequence

from .enumeration import OpCounter

__all__ = ["max_bipartite_matching"]


def max_bipartite_matching(
    adjacency: Sequence[Sequence[int]], n_right: int, ops: OpCounter | None = None
) -> tuple[int, list[int | None]]:
    """Size of a maximum matching and, for each left vertex, its partner.

    ``adjacency[i]`` lists the right vertices adjacent to left vertex ``i``.
    Each left vertex triggers one search for an augmenting path (Kuhn's
    method), so the cost is ``O(V * E)``.
    """
    ops = ops if ops is not None else OpCounter()
    match_right: list[int | None] = [None] * n_right

    def augment(u: int, visited: list[bool]) -> bool:
        for r in adjacency[u]:
            ops.tick()
            if visited[r]:
                continue
            visited[r] = True
            if match_right[r] is None or augment(match_right[r], visited):
                match_right[r] = u
                return True
        return False

    size = 0
    for u in range(len(adjacency)):
        if augment(u, [False] * n_right):
            size += 1
    match_left: list[int | None] = [None] * len(adjacency)
    for r, u in enumerate(match_right):
        if u is not None:
            match_left[u] = r
    return size, match_left
