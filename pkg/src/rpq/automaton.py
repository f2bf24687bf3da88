"""Nondeterministic finite automata without epsilon transitions.

Text format::

    alphabet Road Ferry Gas      # optional; inferred from transitions otherwise
    state 0
    initial 0
    final 1
    trans 0 Gas 1

States named by ``initial``/``final``/``trans`` lines are declared implicitly.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Iterable, Sequence

from .errors import ParseError, ValidationError
from .graph import format_id

__all__ = ["Automaton", "parse_automaton", "serialize_automaton"]


class Automaton:
    """Immutable NFA ``(alphabet, states, transitions, initials, finals)``.

    Declaration order of states and transitions is kept and drives every
    deterministic ordering downstream (product construction, codings).
    """

    def __init__(self, alphabet: Iterable, states: Iterable, transitions: Iterable, initials: Iterable, finals: Iterable):
        self._states = tuple(dict.fromkeys(states))
        self._alphabet = tuple(dict.fromkeys(alphabet))
        self._transitions = tuple(dict.fromkeys(tuple(t) for t in transitions))
        sset = set(self._states)
        aset = set(self._alphabet)
        for src, a, tgt in self._transitions:
            if src not in sset or tgt not in sset:
                raise ValidationError(f"transition ({src},{a},{tgt}) uses an undeclared state")
            if a not in aset:
                raise ValidationError(f"transition label {a!r} is not in the alphabet")
        self._initials = tuple(dict.fromkeys(initials))
        self._finals = tuple(dict.fromkeys(finals))
        for q in self._initials + self._finals:
            if q not in sset:
                raise ValidationError(f"undeclared state {q!r}")

    @property
    def alphabet(self) -> tuple:
        return self._alphabet

    @property
    def states(self) -> tuple:
        return self._states

    @property
    def transitions(self) -> tuple:
        return self._transitions

    @property
    def initials(self) -> tuple:
        return self._initials

    @property
    def finals(self) -> tuple:
        return self._finals

    @cached_property
    def initial_set(self) -> frozenset:
        return frozenset(self._initials)

    @cached_property
    def final_set(self) -> frozenset:
        return frozenset(self._finals)

    @cached_property
    def out(self) -> dict:
        """state -> tuple of transitions leaving it, in declaration order."""
        res = {q: [] for q in self._states}
        for t in self._transitions:
            res[t[0]].append(t)
        return {q: tuple(ts) for q, ts in res.items()}

    @cached_property
    def delta(self) -> dict:
        """(state, letter) -> tuple of target states."""
        res: dict = {}
        for src, a, tgt in self._transitions:
            res.setdefault((src, a), []).append(tgt)
        return {k: tuple(v) for k, v in res.items()}

    def step(self, states: Iterable, letter) -> frozenset:
        d = self.delta
        return frozenset(t for q in states for t in d.get((q, letter), ()))

    def accepts(self, word: Sequence) -> bool:
        aset = set(self._alphabet)
        current = frozenset(self._initials)
        for letter in word:
            if letter not in aset:
                raise ValidationError(f"letter {letter!r} is not in the alphabet")
            current = self.step(current, letter)
            if not current:
                return False
        return not current.isdisjoint(self.final_set)

    def _reach(self, sources, forward: bool) -> set:
        adj: dict = {}
        for src, _, tgt in self._transitions:
            a, b = (src, tgt) if forward else (tgt, src)
            adj.setdefault(a, []).append(b)
        seen = set(sources)
        todo = deque(seen)
        while todo:
            q = todo.popleft()
            for r in adj.get(q, ()):
                if r not in seen:
                    seen.add(r)
                    todo.append(r)
        return seen

    def useful_states(self) -> set:
        return self._reach(self._initials, True) & self._reach(self._finals, False)

    def is_trim(self) -> bool:
        return len(self.useful_states()) == len(self._states)

    def trim(self) -> "Automaton":
        keep = self.useful_states()
        return Automaton(
            self._alphabet,
            [q for q in self._states if q in keep],
            [t for t in self._transitions if t[0] in keep and t[2] in keep],
            [q for q in self._initials if q in keep],
            [q for q in self._finals if q in keep],
        )

    def with_alphabet(self, alphabet: Iterable) -> "Automaton":
        letters = list(dict.fromkeys(list(self._alphabet) + list(alphabet)))
        return Automaton(letters, self._states, self._transitions, self._initials, self._finals)

    def canonical(self) -> tuple:
        """Structure with states renamed to their declaration rank."""
        idx = {q: i for i, q in enumerate(self._states)}
        return (
            len(self._states),
            frozenset((idx[s], a, idx[t]) for s, a, t in self._transitions),
            frozenset(idx[q] for q in self._initials),
            frozenset(idx[q] for q in self._finals),
        )

    def same_structure(self, other: "Automaton") -> bool:
        return self.canonical() == other.canonical()

    def __eq__(self, other):
        if not isinstance(other, Automaton):
            return NotImplemented
        return (
            set(self._alphabet) == set(other._alphabet)
            and self._states == other._states
            and set(self._transitions) == set(other._transitions)
            and set(self._initials) == set(other._initials)
            and set(self._finals) == set(other._finals)
        )

    def __hash__(self):
        return hash((self._states, frozenset(self._transitions)))

    def __repr__(self):
        return (
            f"Automaton(|Q|={len(self._states)}, |Δ|={len(self._transitions)}, "
            f"I={list(self._initials)}, F={list(self._finals)})"
        )


def parse_automaton(text: str) -> Automaton:
    alphabet = None
    states: list = []
    transitions: list = []
    initials: list = []
    finals: list = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split("#", 1)[0].split()
        if not toks:
            continue
        kind, args = toks[0], toks[1:]
        if kind == "alphabet":
            if not args:
                raise ParseError("empty alphabet declaration", line=lineno)
            alphabet = (alphabet or []) + args
        elif kind in ("state", "initial", "final"):
            if not args:
                raise ParseError(f"expected: {kind} <state> [<state>...]", line=lineno)
            states.extend(args)
            if kind == "initial":
                initials.extend(args)
            elif kind == "final":
                finals.extend(args)
        elif kind == "trans":
            if len(args) != 3:
                raise ParseError("expected: trans <src> <label> <tgt>", line=lineno)
            src, a, tgt = args
            if alphabet is not None and a not in alphabet:
                raise ParseError(f"label {a!r} is not in the declared alphabet", line=lineno)
            states.extend([src, tgt])
            transitions.append((src, a, tgt))
        else:
            raise ParseError(f"unknown record {kind!r}", line=lineno)
    if alphabet is None:
        alphabet = [t[1] for t in transitions]
    return Automaton(alphabet, states, transitions, initials, finals)


def serialize_automaton(a: Automaton) -> str:
    lines = []
    if a.alphabet:
        lines.append("alphabet " + " ".join(format_id(x) for x in a.alphabet))
    lines += [f"state {format_id(q)}" for q in a.states]
    lines += [f"initial {format_id(q)}" for q in a.initials]
    lines += [f"final {format_id(q)}" for q in a.finals]
    lines += [f"trans {format_id(s)} {format_id(x)} {format_id(t)}" for s, x, t in a.transitions]
    return "\n".join(lines) + "\n"
