"""Regular path queries over edge-labelled multigraphs."""

from importlib import resources

from .automaton import Automaton, parse_automaton, serialize_automaton
from .coding import coding_expression, coding_expression_no_union, encode_word, verify_coding
from .enumeration import OpCounter, brute_force_enumerate, yen_enumerate
from .errors import (
    GuardExceeded,
    InvalidWalkError,
    ParseError,
    PreconditionError,
    RPQError,
    UnboundedResultError,
    UnknownVertexError,
    ValidationError,
)
from .graph import Database, Edge, Walk, WalkBag, format_walk, parse_database, parse_walk, serialize_database
from .membership import coverage_decompose, count_runs, walk_membership, walk_membership_matching
from .product import RunDatabase, build as build_product
from .regex import Regex, glushkov, parse_regex, to_text
from .sat import SatInstance, build_reduction, parse_dimacs, reduction_check, sat_automaton
from .semantics import Guards, Semantics, evaluate, shortest_witnesses, tuple_membership, tuple_multiplicity

__version__ = "0.1.0"


def data_path(name: str):
    """Path of a bundled example file (``roads.graph``, ``q2.auto``, ``sat_example.cnf``)."""
    return resources.files(__package__).joinpath("data", name)


__all__ = [
    "Automaton", "parse_automaton", "serialize_automaton",
    "coding_expression", "coding_expression_no_union", "encode_word", "verify_coding",
    "OpCounter", "brute_force_enumerate", "yen_enumerate",
    "GuardExceeded", "InvalidWalkError", "ParseError", "PreconditionError", "RPQError",
    "UnboundedResultError", "UnknownVertexError", "ValidationError",
    "Database", "Edge", "Walk", "WalkBag", "format_walk", "parse_database", "parse_walk", "serialize_database",
    "coverage_decompose", "count_runs", "walk_membership", "walk_membership_matching",
    "RunDatabase", "build_product",
    "Regex", "glushkov", "parse_regex", "to_text",
    "SatInstance", "build_reduction", "parse_dimacs", "reduction_check", "sat_automaton",
    "Guards", "Semantics", "evaluate", "shortest_witnesses", "tuple_membership", "tuple_multiplicity",
    "data_path",
]
