"""Expressions whose Glushkov automaton simulates a given automaton.

For a trim automaton ``A`` with ``m`` transitions, :func:`coding_expression`
builds a single-star expression ``R`` over ``Σ ⊎ {σ}``.  Each state ``q`` of
``A`` becomes one ``σ`` position of ``R``; each transition ``(q, x, q')``
becomes the path of ``Gl(R)`` reading ``x^(m+1) σ`` from the ``σ`` of ``q``
to the ``σ`` of ``q'``.  :func:`verify_coding` checks that correspondence
exhaustively on small automata.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .automaton import Automaton
from .errors import PreconditionError, ValidationError
from .graph import Database, Edge, Walk
from .regex import (
    INIT,
    Atom,
    Concat,
    Epsilon,
    Regex,
    Star,
    concat_all,
    glushkov,
    glushkov_state,
    power,
    union_all,
)

__all__ = [
    "Computation",
    "CodingWitness",
    "coding_expression",
    "encode_word",
    "CodingReport",
    "verify_coding",
    "coding_expression_no_union",
    "no_union_encode",
    "transfer_instance",
]


@dataclass(frozen=True)
class Computation:
    """States ``s0 .. sk`` and the letters read between them."""

    states: tuple
    letters: tuple = ()

    def transitions(self) -> list[tuple]:
        return list(zip(self.states, self.letters, self.states[1:]))

    def internal(self) -> set:
        return set(self.states[1:-1])


@dataclass
class CodingWitness:
    sigma: str
    m: int
    u_i: tuple
    u_f: tuple
    lam: dict
    nu: dict
    G: dict
    H: dict
    eta_i: dict = field(default_factory=dict)
    eta: dict = field(default_factory=dict)
    eta_f: dict = field(default_factory=dict)


def _fresh_symbol(alphabet) -> str:
    sigma = "σ"
    taken = {str(x) for x in alphabet}
    while sigma in taken:
        sigma += "'"
    return sigma


def _ordered_transitions(a: Automaton) -> list[tuple]:
    """Transitions sorted lexicographically by (source rank, letter rank, target rank)."""
    srank = {q: i for i, q in enumerate(a.states)}
    lrank = {x: i for i, x in enumerate(a.alphabet)}
    return sorted(a.transitions, key=lambda t: (srank[t[0]], lrank[t[1]], srank[t[2]]))


def coding_expression(a: Automaton) -> tuple[Regex, CodingWitness]:
    if not a.states:
        raise PreconditionError("the automaton has no state")
    if not a.is_trim():
        raise PreconditionError("the automaton is not trim")
    sigma = _fresh_symbol(a.alphabet)
    order = _ordered_transitions(a)
    m = len(order)
    G = {e: i + 1 for i, e in enumerate(order)}
    H = {e: m + 1 - G[e] for e in order}
    incoming = {q: [e for e in order if e[2] == q] for q in a.states}
    outgoing = {q: [e for e in order if e[0] == q] for q in a.states}

    pos = 0
    slot: dict = {}  # (transition, i) -> Glushkov state, i in 0..m
    nu = {}
    terms = []
    for q in a.states:
        left = [Epsilon()] if q in a.initial_set else []
        for e in incoming[q]:
            left.append(power(e[1], G[e]))
            for i in range(H[e], m + 1):
                pos += 1
                slot[(e, i)] = glushkov_state(e[1], pos)
        pos += 1
        nu[q] = glushkov_state(sigma, pos)
        right = [Epsilon()] if q in a.final_set else []
        for e in outgoing[q]:
            right.append(power(e[1], H[e]))
            for i in range(0, H[e]):
                pos += 1
                slot[(e, i)] = glushkov_state(e[1], pos)
        terms.append(Concat(Concat(union_all(left), Atom(sigma)), union_all(right)))
    r = Star(union_all(terms))

    lam = {x: (x,) * (m + 1) + (sigma,) for x in a.alphabet}
    w = CodingWitness(sigma, m, (sigma,), (), lam, nu, G, H)
    for q in a.initials:
        w.eta_i[q] = Computation((INIT, nu[q]), (sigma,))
    for e in order:
        states = (nu[e[0]],) + tuple(slot[(e, i)] for i in range(m + 1)) + (nu[e[2]],)
        w.eta[e] = Computation(states, lam[e[1]])
    for q in a.finals:
        w.eta_f[q] = Computation((nu[q],), ())
    return r, w


def encode_word(w: CodingWitness, u: Sequence) -> tuple:
    out = list(w.u_i)
    for x in u:
        if x not in w.lam:
            raise ValidationError(f"letter {x!r} is not in the source alphabet")
        out.extend(w.lam[x])
    out.extend(w.u_f)
    return tuple(out)


# -- verification -------------------------------------------------------------------


@dataclass
class CodingReport:
    failures: list = field(default_factory=list)
    words_checked: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, name: str, detail: str = ""):
        self.failures.append(f"{name}: {detail}" if detail else name)


def _computations(b: Automaton, starts, word: Sequence) -> set:
    """All computations of ``b`` from ``starts`` reading exactly ``word``."""
    partial = {(q,) for q in starts}
    for x in word:
        partial = {p + (t,) for p in partial for t in b.delta.get((p[-1], x), ())}
    return {Computation(p, tuple(word)) for p in partial}


def _is_computation(b: Automaton, c: Computation) -> bool:
    trans = set(b.transitions)
    return (
        len(c.states) == len(c.letters) + 1
        and all(s in set(b.states) for s in c.states)
        and all(t in trans for t in c.transitions())
    )


def verify_coding(a: Automaton, r: Regex, w: CodingWitness, max_word_length: int = 4) -> CodingReport:
    """Check that ``Gl(r)`` is a topological coding of ``a`` through ``w``.

    The final-walk set is restricted to walks ending in a final state of
    ``Gl(r)``; otherwise, with an empty ``u_f``, every ``σ`` state would be a
    final walk whether or not its state is final.
    """
    rep = CodingReport()
    b = glushkov(r, alphabet=list(a.alphabet) + [w.sigma])
    bstates = set(b.states)

    if len(set(w.lam.values())) != len(w.lam) or any(len(v) == 0 for v in w.lam.values()):
        rep.fail("lambda", "not injective into non-empty words")
    if set(w.lam) != set(a.alphabet):
        rep.fail("lambda", "domain differs from the alphabet")
    if len(set(w.nu.values())) != len(w.nu) or set(w.nu) != set(a.states):
        rep.fail("nu", "not an injective map on the states")
    missing = [q for q in w.nu.values() if q not in bstates]
    if missing:
        rep.fail("nu", f"images {missing} are not states of the Glushkov automaton")
        return rep
    nu_img = set(w.nu.values())

    w_init = _computations(b, b.initials, w.u_i)
    w_trans = set()
    for q in a.states:
        for x in a.alphabet:
            w_trans |= _computations(b, [w.nu[q]], w.lam[x])
    w_final = {c for c in _computations(b, nu_img, w.u_f) if c.states[-1] in b.final_set}

    # initial walks
    if set(w.eta_i) != set(a.initials):
        rep.fail("initial", "domain differs from the initial states")
    imgs = list(w.eta_i.values())
    if len(set(imgs)) != len(imgs) or set(imgs) != w_init:
        rep.fail("initial", f"not a bijection onto the {len(w_init)} initial walks")
    for q, c in w.eta_i.items():
        if not _is_computation(b, c) or c.letters != tuple(w.u_i):
            rep.fail("initial", f"walk for {q} is not a computation labelled u_i")
        if c.states[-1] != w.nu.get(q):
            rep.fail("initial", f"walk for {q} does not end at its state image")
        if any(s in nu_img for s in c.states[:-1]):
            rep.fail("initial", f"walk for {q} meets a state image before its end")

    # transition walks
    if set(w.eta) != set(a.transitions):
        rep.fail("transition", "domain differs from the transitions")
    imgs = list(w.eta.values())
    if len(set(imgs)) != len(imgs) or set(imgs) != w_trans:
        rep.fail("transition", f"not a bijection onto the {len(w_trans)} transition walks")
    for e, c in w.eta.items():
        s, x, t = e
        if not _is_computation(b, c):
            rep.fail("transition", f"walk for {e} is not a computation")
        if c.states[0] != w.nu.get(s) or c.states[-1] != w.nu.get(t):
            rep.fail("transition", f"walk for {e} has wrong endpoints")
        if c.letters != w.lam.get(x):
            rep.fail("transition", f"walk for {e} is not labelled lambda({x})")
        if c.internal() & nu_img:
            rep.fail("transition", f"walk for {e} has an internal state image")

    # final walks
    if set(w.eta_f) != set(a.finals):
        rep.fail("final", "domain differs from the final states")
    imgs = list(w.eta_f.values())
    if len(set(imgs)) != len(imgs) or set(imgs) != w_final:
        rep.fail("final", f"not a bijection onto the {len(w_final)} final walks")
    for q, c in w.eta_f.items():
        if not _is_computation(b, c) or c.letters != tuple(w.u_f):
            rep.fail("final", f"walk for {q} is not a computation labelled u_f")
        if c.states[0] != w.nu.get(q):
            rep.fail("final", f"walk for {q} does not start at its state image")
        if c.states[-1] not in b.final_set:
            rep.fail("final", f"walk for {q} does not end in a final state")
        if any(s in nu_img for s in c.states[1:]):
            rep.fail("final", f"walk for {q} meets a state image after its start")

    # distinct walks share neither a transition nor an internal state
    walks = list(dict.fromkeys(list(w.eta_i.values()) + list(w.eta.values()) + list(w.eta_f.values())))
    for c1, c2 in itertools.combinations(walks, 2):
        if set(c1.transitions()) & set(c2.transitions()) or c1.internal() & c2.internal():
            rep.fail("disjointness", f"{c1.states} and {c2.states} overlap")
            break

    # acceptance is preserved
    for k in range(max_word_length + 1):
        for u in itertools.product(a.alphabet, repeat=k):
            rep.words_checked += 1
            if a.accepts(u) != b.accepts(encode_word(w, u)):
                rep.fail("acceptance", f"word {' '.join(map(str, u)) or 'ε'} disagrees")
                return rep
    return rep


# -- variant without union under the star ----------------------------------------------


def coding_expression_no_union(a: Automaton) -> Regex:
    """Expression over ``{a, b, c, σ}`` with no union under any star.

    States and letters are renumbered ``0..n-1`` and ``0..k-1`` in
    declaration order; letter ``x`` is written ``a^(n+1) b^x c^(n+1) σ``.
    Initial and final choices are unions outside the star.
    """
    if not a.states:
        raise PreconditionError("the automaton has no state")
    if not a.is_trim():
        raise PreconditionError("the automaton is not trim")
    n = len(a.states)
    sidx = {q: i for i, q in enumerate(a.states)}
    lidx = {x: i for i, x in enumerate(a.alphabet)}

    def pw(sym, k):
        return [power(sym, k)] if k > 0 else []

    prefix = union_all([power("c", sidx[q] + 1) for q in a.initials])
    state_blocks = [Star(concat_all(pw("c", n - i) + [Atom("σ")] + pw("a", i + 1))) for i in range(n)]
    trans_blocks = [
        Star(concat_all(pw("a", n - sidx[s]) + pw("b", lidx[x]) + pw("c", sidx[t] + 1)))
        for s, x, t in a.transitions
    ]
    inner = Star(concat_all(state_blocks + trans_blocks))
    suffix = union_all([power("a", n - sidx[q]) for q in a.finals])
    return concat_all([prefix, inner, suffix])


def no_union_encode(a: Automaton, u: Sequence) -> tuple:
    """``c^(n+1) σ λ(x1) ... λ(xk) a^(n+1)`` with ``λ(x) = a^(n+1) b^x c^(n+1) σ``."""
    n = len(a.states)
    lidx = {x: i for i, x in enumerate(a.alphabet)}
    out = ["c"] * (n + 1) + ["σ"]
    for x in u:
        if x not in lidx:
            raise ValidationError(f"letter {x!r} is not in the alphabet")
        out += ["a"] * (n + 1) + ["b"] * lidx[x] + ["c"] * (n + 1) + ["σ"]
    out += ["a"] * (n + 1)
    return tuple(out)


# -- walk-membership transfer ------------------------------------------------------------


def transfer_instance(d: Database, w: Walk, witness: CodingWitness) -> tuple[Database, Walk]:
    """Replace each edge by a fresh path spelling ``λ`` of its label.

    A fresh start vertex reaches ``src(w)`` by a path spelling ``u_i`` and
    ``tgt(w)`` reaches a fresh end vertex by a path spelling ``u_f``.  The
    database must be simply labelled.
    """
    d.check_walk(w)
    vertices = list(d.vertices)
    edges: list[Edge] = []
    paths: dict = {}

    def add_path(src, tgt, word, tag) -> Walk:
        vs = [src]
        es = []
        for i, x in enumerate(word):
            nxt = tgt if i == len(word) - 1 else (tag, i + 1)
            if nxt != tgt:
                vertices.append(nxt)
            eid = (tag, "e", i)
            edges.append(Edge(eid, vs[-1], nxt, frozenset([x])))
            vs.append(nxt)
            es.append(eid)
        return Walk(tuple(vs), tuple(es))

    for e in d.edges:
        if len(e.labels) != 1:
            raise PreconditionError(f"edge {e.id} carries {len(e.labels)} labels; need exactly one")
        (x,) = e.labels
        paths[e.id] = add_path(e.src, e.tgt, witness.lam[x], ("edge", e.id))

    start, end = ("start",), ("end",)
    if witness.u_i:
        vertices.append(start)
        w_i = add_path(start, w.src, witness.u_i, ("in",))
    else:
        w_i = Walk((w.src,))
    if witness.u_f:
        vertices.append(end)
        w_f = add_path(w.tgt, end, witness.u_f, ("out",))
    else:
        w_f = Walk((w.tgt,))

    vs = list(w_i.vertices)
    es = list(w_i.edges)
    for eid in w.edges:
        p = paths[eid]
        vs.extend(p.vertices[1:])
        es.extend(p.edges)
    vs.extend(w_f.vertices[1:])
    es.extend(w_f.edges)
    alphabet = list(dict.fromkeys(list(d.alphabet) + [witness.sigma]))
    return Database(vertices, edges, alphabet), Walk(tuple(vs), tuple(es))
