from __future__ import annotations

import itertools

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from muparity.formula import (BOTTOM, TOP, And, Box, Diamond, Mu, Nu, Or, Prop, Var)
from muparity.structures import Structure, enumerate_structures

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ALPHABET = ("P", "Q")


@st.composite
def sentences(draw, depth: int = 4, props=ALPHABET, unguarded: bool = False):
    """Guarded sentences with binders named apart (X0, X1, ...).

    With ``unguarded`` variables may also occur outside modalities.
    """
    counter = itertools.count()

    def build(d: int, bound: tuple, guarded: frozenset):
        usable = frozenset(bound) if unguarded else guarded
        leaves = ["tt", "ff", "lit"] + (["var"] if usable else [])
        kinds = leaves if d == 0 else leaves + ["and", "or", "dia", "box", "mu", "nu"] * 2
        kind = draw(st.sampled_from(kinds))
        if kind == "tt":
            return TOP
        if kind == "ff":
            return BOTTOM
        if kind == "lit":
            return Prop(draw(st.sampled_from(props)), draw(st.booleans()))
        if kind == "var":
            return Var(draw(st.sampled_from(sorted(usable))))
        if kind in ("and", "or"):
            left = build(d - 1, bound, guarded)
            right = build(d - 1, bound, guarded)
            return (And if kind == "and" else Or)(left, right)
        if kind in ("dia", "box"):
            body = build(d - 1, bound, frozenset(bound))
            return (Diamond if kind == "dia" else Box)(body)
        name = f"X{next(counter)}"
        body = build(d - 1, bound + (name,), guarded)
        return (Mu if kind == "mu" else Nu)(name, body)

    return build(depth, (), frozenset())


@st.composite
def structures(draw, max_nodes: int = 4, props=ALPHABET):
    n = draw(st.integers(1, max_nodes))
    labels = [draw(st.sets(st.sampled_from(props))) for _ in range(n)]
    edges = {(draw(st.integers(0, i - 1)), i) for i in range(1, n)}
    extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)),
                          max_size=2 * n))
    return Structure.build(labels, sorted(edges | set(extra)))


@pytest.fixture(scope="session")
def small_corpus() -> list:
    """Every structure with at most two nodes over {P, Q}."""
    return list(enumerate_structures(2, ALPHABET))


def pytest_terminal_summary(terminalreporter):
    """Print one line per acceptance criterion that ran."""
    import sys
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
