"""Regular expressions: AST, parser, linearisation and the Glushkov automaton.

Grammar (loosest binding first)::

    union   := concat ('+' concat)*
    concat  := star ('.'? star)*
    star    := primary '*'*
    primary := IDENT | QUOTED | 'eps' | '(' union ')'

Both binary operators associate to the left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Hashable, Iterator

from .errors import ParseError, PreconditionError

__all__ = [
    "Regex",
    "Epsilon",
    "Atom",
    "Star",
    "Concat",
    "Union",
    "parse_regex",
    "to_text",
    "Linearisation",
    "linearise",
    "positions_info",
    "glushkov",
    "glushkov_state",
    "star_normal_simplify",
    "SyntaxClass",
    "syntax_class",
    "atoms",
    "atom_count",
    "epsilon_count",
    "star_count",
    "concat_all",
    "union_all",
    "power",
]


class Regex:
    """Base class of the AST nodes."""

    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Epsilon(Regex):
    pass


@dataclass(frozen=True)
class Atom(Regex):
    symbol: Hashable


@dataclass(frozen=True)
class Star(Regex):
    inner: Regex


@dataclass(frozen=True)
class Concat(Regex):
    left: Regex
    right: Regex


@dataclass(frozen=True)
class Union(Regex):
    left: Regex
    right: Regex


def concat_all(parts) -> Regex:
    parts = list(parts)
    if not parts:
        return Epsilon()
    out = parts[0]
    for p in parts[1:]:
        out = Concat(out, p)
    return out


def union_all(parts) -> Regex:
    parts = list(parts)
    if not parts:
        raise PreconditionError("the empty sum is not an expression")
    out = parts[0]
    for p in parts[1:]:
        out = Union(out, p)
    return out


def power(symbol, k: int) -> Regex:
    """``symbol`` concatenated ``k`` times (``k >= 1``)."""
    if k < 1:
        raise PreconditionError("power needs k >= 1")
    return concat_all(Atom(symbol) for _ in range(k))


# -- parsing ------------------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_TOKEN = re.compile(
    r"""\s*(?:
        (?P<ident>[A-Za-z][A-Za-z0-9_]*)
      | (?P<quoted>'(?:[^'\\]|\\.)*'|"(?:[^"\\]|\\.)*")
      | (?P<op>[()*+.])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", position=pos)
        start = m.start(m.lastgroup)
        if m.group("ident") is not None:
            word = m.group("ident")
            toks.append(("eps" if word == "eps" else "atom", word, start))
        elif m.group("quoted") is not None:
            body = m.group("quoted")[1:-1]
            body = re.sub(r"\\(.)", r"\1", body)
            if not body:
                raise ParseError("empty quoted atom", position=start)
            toks.append(("atom", body, start))
        else:
            toks.append((m.group("op"), None, start))
        pos = m.end()
    toks.append(("end", None, n))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind):
        tok = self.toks[self.i]
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {self._describe(tok)}", position=tok[2])
        self.i += 1
        return tok

    @staticmethod
    def _describe(tok):
        if tok[0] == "end":
            return "end of input"
        if tok[0] == "atom":
            return f"atom {tok[1]!r}"
        return repr(tok[0])

    def union(self) -> Regex:
        node = self.concat()
        while self.peek()[0] == "+":
            self.i += 1
            node = Union(node, self.concat())
        return node

    def concat(self) -> Regex:
        node = self.star()
        while True:
            kind = self.peek()[0]
            if kind == ".":
                self.i += 1
                node = Concat(node, self.star())
            elif kind in ("atom", "eps", "("):
                node = Concat(node, self.star())
            else:
                return node

    def star(self) -> Regex:
        node = self.primary()
        while self.peek()[0] == "*":
            self.i += 1
            node = Star(node)
        return node

    def primary(self) -> Regex:
        kind, value, pos = self.peek()
        if kind == "atom":
            self.i += 1
            return Atom(value)
        if kind == "eps":
            self.i += 1
            return Epsilon()
        if kind == "(":
            self.i += 1
            node = self.union()
            self.take(")")
            return node
        raise ParseError(f"expected an expression, found {self._describe(self.peek())}", position=pos)


def parse_regex(text: str) -> Regex:
    p = _Parser(text)
    node = p.union()
    tok = p.peek()
    if tok[0] != "end":
        raise ParseError(f"unexpected {p._describe(tok)}", position=tok[2])
    return node


def _atom_text(symbol) -> str:
    s = str(symbol)
    if _IDENT.fullmatch(s) and s != "eps":
        return s
    return "'" + s.replace("\\", "\\\\").replace("'", "\\'") + "'"


def to_text(r: Regex) -> str:
    """Fully parenthesised rendering; ``parse_regex(to_text(r)) == r``."""
    if isinstance(r, Epsilon):
        return "eps"
    if isinstance(r, Atom):
        return _atom_text(r.symbol)
    if isinstance(r, Star):
        return f"({to_text(r.inner)})*"
    if isinstance(r, Concat):
        return f"({to_text(r.left)} . {to_text(r.right)})"
    if isinstance(r, Union):
        return f"({to_text(r.left)} + {to_text(r.right)})"
    raise TypeError(f"not a regex node: {r!r}")


# -- structural helpers -----------------------------------------------------------


def _walk_nodes(r: Regex) -> Iterator[Regex]:
    stack = [r]
    while stack:
        node = stack.pop()
        yield node
        if isinstance(node, Star):
            stack.append(node.inner)
        elif isinstance(node, (Concat, Union)):
            stack.append(node.right)
            stack.append(node.left)


def atoms(r: Regex) -> list:
    """Atom symbols in left-to-right order (with repetitions)."""
    return [n.symbol for n in _walk_nodes(r) if isinstance(n, Atom)]


def atom_count(r: Regex) -> int:
    return sum(1 for n in _walk_nodes(r) if isinstance(n, Atom))


def epsilon_count(r: Regex) -> int:
    return sum(1 for n in _walk_nodes(r) if isinstance(n, Epsilon))


def star_count(r: Regex) -> int:
    return sum(1 for n in _walk_nodes(r) if isinstance(n, Star))


@dataclass(frozen=True)
class SyntaxClass:
    star_height: int
    union_under_star: bool
    concat_under_star: bool


def syntax_class(r: Regex) -> SyntaxClass:
    def go(node, under_star):
        # returns (height, union_under_star, concat_under_star)
        if isinstance(node, (Epsilon, Atom)):
            return 0, False, False
        if isinstance(node, Star):
            h, u, c = go(node.inner, True)
            return h + 1, u, c
        hl, ul, cl = go(node.left, under_star)
        hr, ur, cr = go(node.right, under_star)
        is_union = isinstance(node, Union)
        return (
            max(hl, hr),
            ul or ur or (under_star and is_union),
            cl or cr or (under_star and not is_union),
        )

    return SyntaxClass(*go(r, False))


# -- linearisation ------------------------------------------------------------------


@dataclass(frozen=True)
class Linearisation:
    """Copy of an expression whose i-th atom from the left is renamed ``i``."""

    positions: tuple
    linearised: Regex
    base: dict

    def erase(self) -> Regex:
        """Map every position back to its letter."""

        def go(node):
            if isinstance(node, Atom):
                return Atom(self.base[node.symbol])
            if isinstance(node, Star):
                return Star(go(node.inner))
            if isinstance(node, Concat):
                return Concat(go(node.left), go(node.right))
            if isinstance(node, Union):
                return Union(go(node.left), go(node.right))
            return node

        return go(self.linearised)


def linearise(r: Regex) -> Linearisation:
    counter = [0]
    base = {}

    def go(node):
        if isinstance(node, Atom):
            counter[0] += 1
            base[counter[0]] = node.symbol
            return Atom(counter[0])
        if isinstance(node, Star):
            return Star(go(node.inner))
        if isinstance(node, Concat):
            left = go(node.left)
            return Concat(left, go(node.right))
        if isinstance(node, Union):
            left = go(node.left)
            return Union(left, go(node.right))
        return node

    lin = go(r)
    return Linearisation(tuple(range(1, counter[0] + 1)), lin, base)


@dataclass(frozen=True)
class PositionInfo:
    nullable: bool
    first: frozenset
    last: frozenset
    follow: dict  # position -> frozenset of positions


def positions_info(lin: Linearisation) -> PositionInfo:
    """Nullable/First/Last/Follow of a linearised expression."""
    follow: dict[int, set] = {p: set() for p in lin.positions}

    def go(node):
        if isinstance(node, Epsilon):
            return True, frozenset(), frozenset()
        if isinstance(node, Atom):
            s = frozenset([node.symbol])
            return False, s, s
        if isinstance(node, Star):
            _, first, last = go(node.inner)
            for p in last:
                follow[p] |= first
            return True, first, last
        nl, fl, ll = go(node.left)
        nr, fr, lr = go(node.right)
        if isinstance(node, Union):
            return nl or nr, fl | fr, ll | lr
        for p in ll:
            follow[p] |= fr
        return (
            nl and nr,
            fl | fr if nl else fl,
            ll | lr if nr else lr,
        )

    nullable, first, last = go(lin.linearised)
    return PositionInfo(nullable, first, last, {p: frozenset(s) for p, s in follow.items()})


INIT = "init"


def glushkov_state(letter, position: int) -> str:
    return f"{letter}_{position}"


def glushkov(r: Regex, alphabet=None):
    """Position automaton of ``r`` with states ``init`` and ``<letter>_<position>``."""
    from .automaton import Automaton

    lin = linearise(r)
    info = positions_info(lin)
    name = {p: glushkov_state(lin.base[p], p) for p in lin.positions}
    transitions = [(INIT, lin.base[p], name[p]) for p in sorted(info.first)]
    for p in lin.positions:
        for q in sorted(info.follow[p]):
            transitions.append((name[p], lin.base[q], name[q]))
    finals = [name[p] for p in lin.positions if p in info.last]
    if info.nullable:
        finals.insert(0, INIT)
    letters = list(dict.fromkeys(lin.base[p] for p in lin.positions))
    if alphabet is not None:
        letters = list(dict.fromkeys(list(alphabet) + letters))
    a = Automaton(letters, [INIT] + [name[p] for p in lin.positions], transitions, [INIT], finals)
    return a.trim()


# -- star-normal simplification --------------------------------------------------------


def star_normal_simplify(r: Regex) -> Regex:
    """Drop stars nested under a star and ``eps`` under a star.

    Only defined when no concatenation occurs under a star; the Glushkov
    automaton is unchanged by the rewrite.
    """
    if syntax_class(r).concat_under_star:
        raise PreconditionError("expression has a concatenation under a star")

    def flat(node):
        if isinstance(node, Atom):
            return [node]
        if isinstance(node, Epsilon):
            return []
        if isinstance(node, Star):
            return flat(node.inner)
        return flat(node.left) + flat(node.right)

    def go(node):
        if isinstance(node, Star):
            body = flat(node.inner)
            return Star(union_all(body)) if body else Epsilon()
        if isinstance(node, Concat):
            return Concat(go(node.left), go(node.right))
        if isinstance(node, Union):
            return Union(go(node.left), go(node.right))
        return node

    return go(r)
