from pathlib import Path

import pytest

from conftest import W1
from rpq.automaton import Automaton
from rpq.errors import InvalidWalkError
from rpq.graph import Database, Edge, Walk, parse_walk
from rpq.product import build, project_walk

DATA = Path(__file__).parent / "data"


def test_roads_product_size(roads, q2_auto):
    p = build(roads, q2_auto)
    assert len(p.product.vertices) == 10
    assert len(p.product.edges) == 13
    assert p.initial_layer == tuple((v, "0") for v in roads.vertices)
    assert p.final_layer == tuple((v, "1") for v in roads.vertices)


def test_roads_product_golden(roads, q2_auto):
    assert build(roads, q2_auto).dump() == (DATA / "roads_product.graph").read_text()


def test_no_transitions_no_edges(roads):
    a = Automaton(["Road"], ["q"], [], ["q"], ["q"])
    assert build(roads, a).product.edges == ()


def test_one_by_one_product():
    d = Database(["v"], [Edge("e", "v", "v", {"a"})])
    p = build(d, Automaton("a", ["q"], [("q", "a", "q")], ["q"], ["q"])).product
    assert p.vertices == (("v", "q"),)
    assert [(e.src, e.tgt) for e in p.edges] == [(("v", "q"), ("v", "q"))]


def _run_for_w1(p):
    states = ["0", "0", "0", "0", "1", "1", "1", "1"]
    w = parse_walk(W1)
    vs = tuple(zip(w.vertices, states))
    es = tuple((eid, (q, p.base.edge(eid).labels and sorted(p.base.edge(eid).labels)[0], q2))
               for eid, q, q2 in zip(w.edges, states, states[1:]))
    return Walk(vs, es)


def test_projection_and_run_checks(roads, q2_auto):
    p = build(roads, q2_auto)
    r1 = _run_for_w1(p)
    assert p.is_run(r1)
    assert p.project(r1) == parse_walk(W1)
    assert len(p.project(r1)) == len(r1)
    assert p.project(Walk.single(("s", "0"))) == Walk.single("s")
    not_final = Walk((("s", "0"), ("t", "0")), (("e6", ("0", "Ferry", "0")),))
    assert not p.is_run(not_final)
    with pytest.raises(InvalidWalkError):
        project_walk(Walk.single("s"))


def test_length_zero_run_in_initial_and_final():
    d = Database(["v"], [])
    p = build(d, Automaton("a", ["q"], [], ["q"], ["q"]))
    assert p.is_run(Walk.single(("v", "q")))
