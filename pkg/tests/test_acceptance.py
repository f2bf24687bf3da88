"""Acceptance checks, one test per criterion.

Each test records a ``criterion N: PASS|FAIL`` line; the lines are printed
as they are produced and repeated in the terminal summary.  Run directly
with ``python3 tests/test_acceptance.py`` for the lines alone.
"""

from __future__ import annotations

import math
import random
import statistics
import sys
import time
from collections import Counter
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from helpers import random_automaton, random_database, random_digraph, random_regex  # noqa: E402
from rpq import data_path  # noqa: E402
from rpq.automaton import Automaton, parse_automaton  # noqa: E402
from rpq.coding import coding_expression, verify_coding  # noqa: E402
from rpq.enumeration import OpCounter, brute_force_enumerate, yen_enumerate  # noqa: E402
from rpq.graph import Database, Edge, Walk, format_walk, is_simple, is_trail, parse_database, parse_walk  # noqa: E402
from rpq.membership import coverage_decompose, walk_membership, walk_membership_matching  # noqa: E402
from rpq.product import build  # noqa: E402
from rpq.regex import atom_count, glushkov  # noqa: E402
from rpq.sat import SatInstance, count_satisfying, parse_dimacs, reduction_check  # noqa: E402
from rpq.semantics import Semantics, evaluate, shortest_witnesses, tuple_membership  # noqa: E402

RESULTS: list[str] = []

Q1 = "(Road + Ferry)*"
Q2 = "(Road + Ferry)* Gas (Road + Ferry)*"
W1 = "s -e1-> c1 -e2-> c2 -e3-> c3 -e7-> c3 -e4-> c1 -e2-> c2 -e5-> t"
W_LOOP = "s -e1-> c1 -e2-> c2 -e3-> c3 -e4-> c1 -e2-> c2 -e5-> t"


def record(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    RESULTS.append(line)
    print(line)
    return ok


def _roads():
    return parse_database(data_path("roads.graph").read_text())


def _q2_auto():
    return parse_automaton(data_path("q2.auto").read_text())


def _bag(d, q, mode, s, t, **kw):
    return Counter({w: m for w, m in evaluate(d, q, mode, (s, t), **kw)})


def _fit_exponent(xs, ys) -> float:
    slope, _ = statistics.linear_regression([math.log(x) for x in xs], [math.log(y) for y in ys])
    return slope


# -- 1 ----------------------------------------------------------------------------------


def test_criterion_01_roads_simple_run():
    t0 = time.perf_counter()
    d, a = _roads(), _q2_auto()
    w1 = parse_walk(W1, d)
    sr = _bag(d, a, Semantics.SIMPLE_RUN, "s", "t")
    trail = _bag(d, a, Semantics.TRAIL, "s", "t")
    sw = _bag(d, a, Semantics.SIMPLE_WALK, "s", "t")
    elapsed = time.perf_counter() - t0
    ok = sr == {w1: 1} and not trail and not sw and not is_trail(w1) and not is_simple(w1) and elapsed < 1
    detail = f"SR={{{', '.join(f'{format_walk(w)}:{m}' for w, m in sr.items())}}} |T|={len(trail)} |SW|={len(sw)} ({elapsed:.3f}s)"
    assert record(1, ok, detail)


# -- 2 ----------------------------------------------------------------------------------


def test_criterion_02_binding_trail_roads():
    t0 = time.perf_counter()
    d = _roads()
    loop = parse_walk(W_LOOP, d)
    w1 = parse_walk(W1, d)
    rejected = not walk_membership(d, Q1, loop, Semantics.BINDING_TRAIL)
    rejected_enum = loop not in _bag(d, Q1, Semantics.BINDING_TRAIL, "s", "t")
    accepted = walk_membership(d, Q2, w1, Semantics.BINDING_TRAIL)
    accepted_enum = w1 in _bag(d, Q2, Semantics.BINDING_TRAIL, "s", "t")
    elapsed = time.perf_counter() - t0
    ok = rejected and rejected_enum and accepted and accepted_enum and elapsed < 1
    assert record(2, ok, f"Q1 rejects repeated c1->c2: {rejected and rejected_enum}; Q2 accepts w1: {accepted and accepted_enum} ({elapsed:.3f}s)")


# -- 3 ----------------------------------------------------------------------------------


def test_criterion_03_simple_walks_s_to_t():
    d = _roads()
    got = [format_walk(w) for w in yen_enumerate(d, "s", "t")]
    ok = got == ["s -e6-> t", "s -e1-> c1 -e2-> c2 -e5-> t"]
    assert record(3, ok, f"{got}")


# -- 4 ----------------------------------------------------------------------------------


def test_criterion_04_left_to_right_bias():
    d = Database(
        ["S", "T"],
        [Edge("st", "S", "T", {"a", "b"}), Edge("loopS", "S", "S", {"a"}), Edge("loopT", "T", "T", {"b"})],
        ["a", "b"],
    )
    sr = _bag(d, "a* b*", Semantics.SIMPLE_RUN, "S", "T")
    ssT = d.walk("S", ["loopS", "st"])
    sTT = d.walk("S", ["st", "loopT"])
    ok = ssT in sr and sTT not in sr
    listing = ", ".join(f"{format_walk(w)}:{m}" for w, m in sr.items())
    assert record(4, ok, f"S->S->T in: {ssT in sr}; S->T->T out: {sTT not in sr}; answer {{{listing}}}")


# -- 5 ----------------------------------------------------------------------------------


def test_criterion_05_enumeration_oracle():
    t0 = time.perf_counter()
    rng = random.Random(5)
    bad = 0
    for _ in range(200):
        g = random_digraph(rng, max_vertices=6, max_edges=12)
        s, t = rng.choice(g.vertices), rng.choice(g.vertices)
        if Counter(yen_enumerate(g, s, t)) != Counter(brute_force_enumerate(g, s, t)):
            bad += 1
    elapsed = time.perf_counter() - t0
    assert record(5, bad == 0 and elapsed < 60, f"200 digraphs, {bad} discrepancies ({elapsed:.2f}s)")


# -- 6, 7 -------------------------------------------------------------------------------


def _membership_suite(seed: int, n: int):
    rng = random.Random(seed)
    out = []
    while len(out) < n:
        d = random_database(rng, max_vertices=4, max_edges=6)
        use_regex = rng.random() < 0.6
        if use_regex:
            q = random_regex(rng, depth=3)
            a = glushkov(q)
        else:
            q = a = random_automaton(rng, max_states=3, max_transitions=5)
        if len(build(d, a).product.edges) > 14:
            continue  # keep the exhaustive enumerations small
        out.append((d, q, a, use_regex, rng.choice(d.vertices), rng.choice(d.vertices)))
    return out


def test_criterion_06_membership_equivalence():
    bad = 0
    checked_bt = 0
    for d, q, a, is_regex, s, t in _membership_suite(6, 300):
        walk = tuple_membership(d, q, s, t, Semantics.WALK)
        walk_ref = bool(shortest_witnesses(d, a, s, t))
        sr = tuple_membership(d, q, s, t, Semantics.SIMPLE_RUN)
        sr_enum = next(iter(evaluate(d, q, Semantics.SIMPLE_RUN, (s, t))), None) is not None
        results = {walk, walk_ref, sr, sr_enum}
        if is_regex:
            checked_bt += 1
            results.add(tuple_membership(d, q, s, t, Semantics.BINDING_TRAIL))
            results.add(next(iter(evaluate(d, q, Semantics.BINDING_TRAIL, (s, t))), None) is not None)
        bad += len(results) != 1
    assert record(6, bad == 0, f"300 instances ({checked_bt} with binding trail), {bad} discrepancies")


def test_criterion_07_shortest_witness_inclusion():
    violations = 0
    witnesses = 0
    for d, q, a, is_regex, s, t in _membership_suite(6, 300):
        short = shortest_witnesses(d, a, s, t)
        if not short:
            continue
        witnesses += len(short)
        sr = _bag(d, q, Semantics.SIMPLE_RUN, s, t)
        violations += sum(w not in sr for w in short)
        if is_regex:
            bt = _bag(d, q, Semantics.BINDING_TRAIL, s, t)
            violations += sum(w not in bt for w in short)
    assert record(7, violations == 0, f"{witnesses} shortest witnesses, {violations} violations")


# -- 8 ----------------------------------------------------------------------------------


def _random_walk(rng, d, max_len):
    vs, es = [rng.choice(d.vertices)], []
    for _ in range(rng.randint(0, max_len)):
        out = d.out_edges[vs[-1]]
        if not out:
            break
        e = rng.choice(out)
        vs.append(e.tgt)
        es.append(e.id)
    return Walk(tuple(vs), tuple(es))


def test_criterion_08_coverage_decomposition():
    rng = random.Random(8)
    done = violations = 0
    nontrivial = 0
    while done < 100:
        d = random_database(rng, max_vertices=3, max_edges=6)
        a = glushkov(random_regex(rng, depth=3)) if rng.random() < 0.5 else random_automaton(rng, 3, 6)
        w = _random_walk(rng, d, 8)
        if not walk_membership(d, a, w, Semantics.WALK):
            continue
        done += 1
        dec = coverage_decompose(d, a, w)
        p = build(d, a)
        ok = (
            dec.rebuild() == w
            and all(u.src == u.tgt for u in dec.us)
            and p.is_run(dec.run)
            and is_simple(dec.run)
            and p.project(dec.run) == dec.kept
            and walk_membership(d, a, dec.kept, Semantics.SIMPLE_RUN)
        )
        violations += not ok
        nontrivial += len(dec.kept) < len(w)
    assert record(8, violations == 0, f"100 walks ({nontrivial} with cuts), {violations} violations")


# -- 9 ----------------------------------------------------------------------------------


def test_criterion_09_sat_counting():
    t0 = time.perf_counter()
    rng = random.Random(9)
    bad = 0
    for _ in range(100):
        n = rng.randint(3, 4)
        clauses = [
            tuple(v if rng.random() < 0.5 else -v for v in rng.sample(range(1, n + 1), 3))
            for _ in range(rng.randint(1, 4))
        ]
        bad += not reduction_check(SatInstance.from_ints(n, clauses)).ok
    example = reduction_check(parse_dimacs(data_path("sat_example.cnf").read_text()))
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and example.ok and example.satisfying == count_satisfying(parse_dimacs(data_path("sat_example.cnf").read_text())) and elapsed < 120
    assert record(9, ok, f"100 random instances, {bad} mismatches; example instance {example.simple_runs} runs = {example.satisfying} models ({elapsed:.2f}s)")


# -- 10 ---------------------------------------------------------------------------------


def test_criterion_10_topological_coding():
    rng = random.Random(10)
    bad = 0
    words = 0
    for _ in range(50):
        letters = tuple("abc"[: rng.randint(1, 3)])
        a = random_automaton(rng, max_states=4, max_transitions=6, letters=letters, trim=True)
        r, w = coding_expression(a)
        m = len(a.transitions)
        rep = verify_coding(a, r, w, max_word_length=4)
        words += rep.words_checked
        bad += not rep.ok or atom_count(r) != len(a.states) + m * (m + 1)
    assert record(10, bad == 0, f"50 trim automata, {words} words checked, {bad} violations")


# -- 11 ---------------------------------------------------------------------------------


def _matching_ops(k: int) -> tuple[int, int]:
    """Cycle of k vertices walked three times under (a + a + a)*."""
    vs = [f"v{i}" for i in range(k)]
    d = Database(vs, [Edge(f"e{i}", vs[i], vs[(i + 1) % k], {"a"}) for i in range(k)], ["a"])
    w = d.walk("v0", [f"e{i}" for i in range(k)] * 3)
    ops = OpCounter()
    assert walk_membership_matching(d, "(a + a + a)*", w, ops)
    return len(w), ops.count


def test_criterion_11_matching_membership():
    rng = random.Random(11)
    bad = 0
    positives = 0
    for _ in range(300):
        d = random_database(rng, max_vertices=3, max_edges=5)
        r = random_regex(rng, depth=3, concat_under_star=False)
        w = _random_walk(rng, d, 10)
        fast = walk_membership_matching(d, r, w)
        positives += fast
        bad += fast != walk_membership(d, r, w, Semantics.SIMPLE_RUN)
    sizes, counts = zip(*(_matching_ops(k) for k in range(2, 14)))
    exponent = _fit_exponent(sizes, counts)
    assert record(11, bad == 0, f"300 instances ({positives} positive), {bad} discrepancies; ops ~ m^{exponent:.2f} on the cycle family")


# -- 12 ---------------------------------------------------------------------------------

DELAY_CONSTANT = 2


def test_criterion_12_polynomial_delay():
    a = Automaton(["a"], ["q"], [("q", "a", "q")], ["q"], ["q"])
    ns, worst = [], []
    within = True
    for n in range(4, 9):
        vs = [f"v{i}" for i in range(n)]
        d = Database(vs, [Edge(f"e{i}_{j}", vs[i], vs[j], {"a"}) for i in range(n) for j in range(n) if i != j], ["a"])
        p = build(d, a).product
        ops = OpCounter()
        last = 0
        gaps = []
        for _ in yen_enumerate(p, ("v0", "q"), ("v1", "q"), ops):
            gaps.append(ops.count - last)
            last = ops.count
        ns.append(n)
        worst.append(max(gaps))
        within &= max(gaps) <= DELAY_CONSTANT * n**3
    exponent = _fit_exponent(ns, worst)
    detail = f"max gaps {dict(zip(ns, worst))}, bound {DELAY_CONSTANT}*n^3, fitted exponent {exponent:.2f}"
    assert record(12, within and exponent <= 3, detail)


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for fn in tests:
        try:
            fn()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
