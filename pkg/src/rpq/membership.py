"""Is a given walk in the answer?  Run counting, coverage decomposition and
the matching-based test for expressions without concatenation under a star."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .automaton import Automaton
from .enumeration import OpCounter
from .errors import GuardExceeded, PreconditionError
from .graph import Database, Walk, concat, is_simple, is_trail
from .matching import max_bipartite_matching
from .regex import Atom, Concat, Epsilon, Regex, Star, Union, atoms, parse_regex, star_normal_simplify, syntax_class
from .semantics import Semantics, resolve_query

__all__ = [
    "walk_membership",
    "iter_runs",
    "count_runs",
    "Decomposition",
    "coverage_decompose",
    "walk_membership_matching",
]


def _feasible(d: Database, a: Automaton, w: Walk) -> list[set]:
    """``can[i]``: states from which the rest of ``w`` can be read into a final state."""
    k = len(w.edges)
    can = [set() for _ in range(k + 1)]
    can[k] = set(a.finals)
    for i in range(k - 1, -1, -1):
        labels = d.edge(w.edges[i]).labels
        nxt = can[i + 1]
        can[i] = {q for q in a.states if any(x in labels and q2 in nxt for _, x, q2 in a.out[q])}
    return can


def iter_runs(d: Database, a: Automaton, w: Walk, mode: Semantics = Semantics.SIMPLE_RUN, max_steps: int = 10**7) -> Iterator[tuple]:
    """Yield the runs projecting onto ``w`` as tuples of transitions, plus the start state.

    Each item is ``(q0, (t1, ..., tk))``.  ``mode`` selects which runs count:
    every run (walk-like modes), simple runs, trail runs or binding-trail runs.
    """
    d.check_walk(w)
    if mode in (Semantics.TRAIL, Semantics.SIMPLE_WALK, Semantics.WALK):
        if mode is Semantics.TRAIL and not is_trail(w):
            return
        if mode is Semantics.SIMPLE_WALK and not is_simple(w):
            return
        kind = None
    else:
        kind = mode
    k = len(w.edges)
    edges = [d.edge(eid) for eid in w.edges]
    can = _feasible(d, a, w)
    steps = 0

    def key(i, tr):
        # key for the step reading edge i with transition tr
        if kind is Semantics.SIMPLE_RUN:
            return (w.vertices[i + 1], tr[2])
        if kind is Semantics.TRAIL_RUN:
            return (w.edges[i], tr)
        if kind is Semantics.BINDING_TRAIL:
            return (w.edges[i], tr[2])
        return None

    def choices(i, q):
        labels = edges[i].labels
        nxt = can[i + 1]
        return iter([tr for tr in a.out[q] if tr[1] in labels and tr[2] in nxt])

    for q0 in a.initials:
        if q0 not in can[0]:
            continue
        if k == 0:
            yield q0, ()
            continue
        used = {(w.vertices[0], q0)} if kind is Semantics.SIMPLE_RUN else set()
        chosen: list = []
        keys: list = []
        stack = [choices(0, q0)]
        while stack:
            tr = next(stack[-1], None)
            if tr is None:
                stack.pop()
                if chosen:
                    chosen.pop()
                    kk = keys.pop()
                    if kk is not None:
                        used.discard(kk)
                continue
            steps += 1
            if steps > max_steps:
                raise GuardExceeded(f"run search exceeded {max_steps} steps")
            i = len(chosen)
            kk = key(i, tr)
            if kk is not None and kk in used:
                continue
            if i + 1 == k:
                yield q0, tuple(chosen) + (tr,)
                continue
            if kk is not None:
                used.add(kk)
            chosen.append(tr)
            keys.append(kk)
            stack.append(choices(i + 1, tr[2]))


def count_runs(d: Database, q, w: Walk, mode: Semantics = Semantics.SIMPLE_RUN, max_steps: int = 10**7) -> int:
    a, _ = resolve_query(q, mode)
    return sum(1 for _ in iter_runs(d, a, w, mode, max_steps))


def walk_membership(d: Database, q, w: Walk, mode: Semantics, max_steps: int = 10**7) -> bool:
    """Is ``w`` in the answer of ``q`` under ``mode``?

    Walk, trail and simple-walk semantics reduce to one pass of NFA
    simulation along ``w``; run-filtered semantics backtrack over state
    annotations with the relevant distinctness pruning.
    """
    a, _ = resolve_query(q, mode)
    d.check_walk(w)
    if mode in (Semantics.WALK, Semantics.TRAIL, Semantics.SIMPLE_WALK):
        if mode is Semantics.TRAIL and not is_trail(w):
            return False
        if mode is Semantics.SIMPLE_WALK and not is_simple(w):
            return False
        return bool(_feasible(d, a, w)[0] & a.initial_set)
    for _ in iter_runs(d, a, w, mode, max_steps):
        return True
    return False


# -- coverage decomposition ---------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """``w = u1 v1 u2 ... vn u(n+1)`` with closed ``u``'s and a simple run over ``v1...vn``."""

    us: tuple
    vs: tuple
    kept: Walk
    run: Walk

    def rebuild(self) -> Walk:
        out = self.us[0]
        for v, u in zip(self.vs, self.us[1:]):
            out = concat(concat(out, v), u)
        return out


def coverage_decompose(d: Database, a: Automaton, w: Walk) -> Decomposition:
    """Cut repeated product vertices out of a run over ``w`` until it is simple."""
    d.check_walk(w)
    can = _feasible(d, a, w)
    starts = [q for q in a.initials if q in can[0]]
    if not starts:
        raise PreconditionError("no run of the automaton projects onto this walk")
    k = len(w.edges)
    states = [starts[0]]
    trans = []
    for i in range(k):
        labels = d.edge(w.edges[i]).labels
        q = states[-1]
        tr = next(t for t in a.out[q] if t[1] in labels and t[2] in can[i + 1])
        trans.append(tr)
        states.append(tr[2])
    points = [(w.vertices[i], states[i]) for i in range(k + 1)]

    # Invariant: for consecutive kept indices (x, y), points[x] == points[y - 1],
    # so the spliced run steps from x along edge y - 1.
    kept = list(range(k + 1))
    while True:
        seen: dict = {}
        cut = None
        for pos, idx in enumerate(kept):
            p = points[idx]
            if p in seen:
                cut = (seen[p], pos)
                break
            seen[p] = pos
        if cut is None:
            break
        i, j = cut
        del kept[i + 1 : j + 1]

    kept_edges = {y - 1 for y in kept[1:]}
    us, vs = [], []
    u_start = 0
    i = 0
    while i < k:
        if i in kept_edges:
            j = i
            while j < k and j in kept_edges:
                j += 1
            us.append(w.factor(u_start, i))
            vs.append(w.factor(i, j))
            u_start = i = j
        else:
            i += 1
    if vs:
        us.append(w.factor(u_start, k))
    else:
        us = [w.factor(0, k), w.factor(k, k)]
        vs = [w.factor(k, k)]

    kept_walk = vs[0]
    for v in vs[1:]:
        kept_walk = concat(kept_walk, v)
    run = Walk(
        tuple(points[x] for x in kept),
        tuple((w.edges[y - 1], trans[y - 1]) for y in kept[1:]),
    )
    return Decomposition(tuple(us), tuple(vs), kept_walk, run)


# -- matching-based membership (no concatenation under star) --------------------------------


def walk_membership_matching(d: Database, r, w: Walk, ops: OpCounter | None = None) -> bool:
    """Simple-run membership of ``w`` for ``Gl(r)`` in polynomial time.

    For every subexpression ``X`` compute the index pairs ``(i, j)`` such
    that the factor of ``w`` between its i-th and j-th vertices has a simple
    run of ``Gl(X)``.  Concatenation and union combine these sets directly.
    For a starred sum of atoms, ``(l, k)`` qualifies iff at every vertex the
    steps entering it in ``l+1..k`` can be assigned pairwise distinct atoms
    carrying the edge label: a saturating bipartite matching per vertex.
    """
    ops = ops if ops is not None else OpCounter()
    if isinstance(r, str):
        r = parse_regex(r)
    if syntax_class(r).concat_under_star:
        raise PreconditionError("expression has a concatenation under a star")
    d.check_walk(w)
    r = star_normal_simplify(r)
    m = len(w.edges)
    labels = [None] + [d.edge(eid).labels for eid in w.edges]  # labels[i] for edge e_i, 1-based
    verts = w.vertices

    def star_pairs(letters: list) -> set:
        res = set()
        for lo in range(m + 1):
            for hi in range(lo, m + 1):
                ops.tick()
                by_vertex: dict = {}
                for i in range(lo + 1, hi + 1):
                    by_vertex.setdefault(verts[i], []).append(i)
                ok = True
                for steps in by_vertex.values():
                    if len(steps) > len(letters):
                        ok = False
                        break
                    adj = [[j for j, x in enumerate(letters) if x in labels[i]] for i in steps]
                    size, _ = max_bipartite_matching(adj, len(letters), ops)
                    if size != len(steps):
                        ok = False
                        break
                if ok:
                    res.add((lo, hi))
                else:
                    # a longer interval contains the same conflict
                    break
        return res

    def go(node: Regex) -> set:
        if isinstance(node, Epsilon):
            return {(i, i) for i in range(m + 1)}
        if isinstance(node, Atom):
            return {(i, i + 1) for i in range(m) if node.symbol in labels[i + 1]}
        if isinstance(node, Union):
            return go(node.left) | go(node.right)
        if isinstance(node, Concat):
            left, right = go(node.left), go(node.right)
            by_start: dict = {}
            for p, j in right:
                by_start.setdefault(p, []).append(j)
            out = set()
            for i, p in left:
                ops.tick()
                for j in by_start.get(p, ()):
                    out.add((i, j))
            return out
        if isinstance(node, Star):
            return star_pairs(atoms(node.inner))
        raise TypeError(f"not a regex node: {node!r}")

    return (0, m) in go(r)
