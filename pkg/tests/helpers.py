"""Random instance generators and independent reference implementations."""

from __future__ import annotations

import itertools
import random
from collections import Counter

from rpq.automaton import Automaton
from rpq.graph import Database, Edge, Walk, is_simple, is_trail
from rpq.regex import Atom, Concat, Epsilon, Regex, Star, Union
from rpq.semantics import Semantics


# -- generators -------------------------------------------------------------------------


def random_database(rng: random.Random, max_vertices=4, max_edges=7, letters=("a", "b"), multi_label=0.3) -> Database:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = []
    for i in range(rng.randint(0, max_edges)):
        if rng.random() < multi_label:
            labels = frozenset(rng.sample(letters, rng.randint(1, len(letters))))
        else:
            labels = frozenset([rng.choice(letters)])
        edges.append(Edge(f"e{i}", rng.choice(vs), rng.choice(vs), labels))
    return Database(vs, edges, letters)


def random_digraph(rng: random.Random, max_vertices=6, max_edges=12) -> Database:
    n = rng.randint(1, max_vertices)
    vs = [f"v{i}" for i in range(n)]
    edges = [Edge(f"e{i}", rng.choice(vs), rng.choice(vs), frozenset(["a"])) for i in range(rng.randint(0, max_edges))]
    return Database(vs, edges, ["a"])


def random_regex(rng: random.Random, depth=3, letters=("a", "b"), concat_under_star=True, _under_star=False) -> Regex:
    if depth == 0 or rng.random() < 0.25:
        return Epsilon() if rng.random() < 0.1 else Atom(rng.choice(letters))
    ops = ["star", "union"]
    if concat_under_star or not _under_star:
        ops += ["concat", "concat"]
    op = rng.choice(ops)
    if op == "star":
        return Star(random_regex(rng, depth - 1, letters, concat_under_star, True))
    left = random_regex(rng, depth - 1, letters, concat_under_star, _under_star)
    right = random_regex(rng, depth - 1, letters, concat_under_star, _under_star)
    return Union(left, right) if op == "union" else Concat(left, right)


def random_automaton(rng: random.Random, max_states=3, max_transitions=5, letters=("a", "b"), trim=False) -> Automaton:
    while True:
        n = rng.randint(1, max_states)
        qs = [f"q{i}" for i in range(n)]
        trans = {(rng.choice(qs), rng.choice(letters), rng.choice(qs)) for _ in range(rng.randint(0, max_transitions))}
        init = rng.sample(qs, rng.randint(1, n))
        fin = rng.sample(qs, rng.randint(1, n))
        a = Automaton(letters, qs, sorted(trans), init, fin)
        if not trim:
            return a
        a = a.trim()
        if a.states:
            return a


# -- reference implementations ---------------------------------------------------------


def _nullable(r: Regex) -> bool:
    if isinstance(r, Epsilon) or isinstance(r, Star):
        return True
    if isinstance(r, Atom):
        return False
    if isinstance(r, Union):
        return _nullable(r.left) or _nullable(r.right)
    return _nullable(r.left) and _nullable(r.right)


_EMPTY = None


def _deriv(r, x):
    if r is _EMPTY or isinstance(r, Epsilon):
        return _EMPTY
    if isinstance(r, Atom):
        return Epsilon() if r.symbol == x else _EMPTY
    if isinstance(r, Union):
        a, b = _deriv(r.left, x), _deriv(r.right, x)
        if a is _EMPTY:
            return b
        return a if b is _EMPTY else Union(a, b)
    if isinstance(r, Star):
        d = _deriv(r.inner, x)
        return _EMPTY if d is _EMPTY else Concat(d, r)
    d = _deriv(r.left, x)
    first = _EMPTY if d is _EMPTY else Concat(d, r.right)
    if not _nullable(r.left):
        return first
    second = _deriv(r.right, x)
    if first is _EMPTY:
        return second
    return first if second is _EMPTY else Union(first, second)


def regex_matches(r: Regex, word) -> bool:
    """Brzozowski-derivative membership."""
    for x in word:
        r = _deriv(r, x)
        if r is _EMPTY:
            return False
    return _nullable(r)


def words(letters, max_len):
    for k in range(max_len + 1):
        yield from itertools.product(letters, repeat=k)


def count_label_runs(d: Database, a: Automaton, w: Walk) -> int:
    """Number of runs of ``a`` along the labels of ``w``."""
    vec = Counter({q: 1 for q in a.initials})
    for eid in w.edges:
        labels = d.edge(eid).labels
        nxt = Counter()
        for q, c in vec.items():
            for s, x, t in a.transitions:
                if s == q and x in labels:
                    nxt[t] += c
        vec = nxt
    return sum(c for q, c in vec.items() if q in a.final_set)


def all_walks(d: Database, s, t, max_len: int, pred=None):
    """Every walk from ``s`` to ``t`` with at most ``max_len`` edges (and ``pred`` holding)."""
    out = []

    def go(vs, es):
        w = Walk(tuple(vs), tuple(es))
        if pred is not None and not pred(w):
            return
        if vs[-1] == t:
            out.append(w)
        if len(es) == max_len:
            return
        for e in d.edges:
            if e.src == vs[-1]:
                go(vs + [e.tgt], es + [e.id])

    go([s], [])
    return out


def reference_answer(d: Database, a: Automaton, mode: Semantics, s, t, max_length=None) -> Counter:
    """Answer bag restricted to ``(s, t)`` by exhaustive search.

    Walk/trail/simple-walk: enumerate walks of ``d`` and count label runs.
    Run modes: enumerate product walks directly, keeping those whose vertices
    (simple run), edges (trail run) or (edge, target state) pairs (binding
    trail) are pairwise distinct.
    """
    bag = Counter()
    if mode in (Semantics.WALK, Semantics.TRAIL, Semantics.SIMPLE_WALK):
        pred = {Semantics.WALK: None, Semantics.TRAIL: is_trail, Semantics.SIMPLE_WALK: is_simple}[mode]
        cap = max_length if max_length is not None else len(d.edges) + 1
        for w in all_walks(d, s, t, cap, pred):
            n = count_label_runs(d, a, w)
            if n:
                bag[w] += n
        return bag

    def ok(vs, es):
        if mode is Semantics.SIMPLE_RUN:
            return len(set(vs)) == len(vs)
        if mode is Semantics.TRAIL_RUN:
            return len(set(es)) == len(es)
        keys = [(eid, tr[2]) for eid, tr in es]
        return len(set(keys)) == len(keys)

    def go(vs, es):
        if not ok(vs, es):
            return
        v, q = vs[-1]
        if v == t and q in a.final_set and (max_length is None or len(es) <= max_length):
            bag[Walk(tuple(x for x, _ in vs), tuple(e for e, _ in es))] += 1
        for e in d.edges:
            if e.src != v:
                continue
            for tr in a.transitions:
                if tr[0] == q and tr[1] in e.labels:
                    go(vs + [(e.tgt, tr[2])], es + [(e.id, tr)])

    for q0 in a.initials:
        go([(s, q0)], [])
    return bag


def simple_walks(d: Database, s, t):
    return all_walks(d, s, t, len(d.vertices), is_simple)
