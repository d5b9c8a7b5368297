from __future__ import annotations

import itertools

import networkx as nx
import pytest
from hypothesis import given

from muparity.formula import Fixpoint, modal_depth, parse, subformulas
from muparity.solver import model_check
from muparity.structures import (Structure, StructureError, canonical_key, enumerate_structures,
                                 height, is_tree, load, sample, store, truncate)

from conftest import sentences, structures


def _networkx_classes(max_nodes: int, alphabet) -> int:
    """Independent count of rooted reachable labelled digraphs up to isomorphism."""
    subsets = [frozenset(c) for r in range(len(alphabet) + 1)
               for c in itertools.combinations(alphabet, r)]
    total = 0
    for n in range(1, max_nodes + 1):
        reps: list = []
        pairs = [(i, j) for i in range(n) for j in range(n)]
        for bits in range(1 << len(pairs)):
            edges = [pairs[k] for k in range(len(pairs)) if bits >> k & 1]
            g = nx.DiGraph()
            g.add_nodes_from(range(n))
            g.add_edges_from(edges)
            if len(nx.descendants(g, 0)) != n - 1:
                continue
            for labels in itertools.product(subsets, repeat=n):
                h = g.copy()
                for i in range(n):
                    h.nodes[i]["tag"] = (labels[i], i == 0)
                match = lambda a, b: a["tag"] == b["tag"]
                if not any(nx.is_isomorphic(h, r, node_match=match) for r in reps):
                    reps.append(h)
        total += len(reps)
    return total


def test_load_store_examples():
    t = load("node n0 [P]\nroot n0\n")
    assert len(t) == 1 and t.labels["n0"] == {"P"}
    loop = load("node a\nedge a a\nroot a\n")
    assert loop.succ == ((0,),)
    with pytest.raises(StructureError):
        load("node a\nedge a a\n")


def test_unreachable_node_rejected():
    with pytest.raises(StructureError):
        load("node a\nnode b\nroot a\n")


@given(structures())
def test_store_load_round_trip(t):
    assert load(store(t)) == t


def test_truncate_examples():
    loop = load("node a [P]\nedge a a\nroot a\n")
    assert len(truncate(loop, 0)) == 1 and truncate(loop, 0).succ == ((),)
    path = truncate(loop, 2)
    assert len(path) == 3 and is_tree(path) and height(path) == 2
    tree = load("node r\nnode c [Q]\nedge r c\nroot r\n")
    assert canonical_key(truncate(tree, 5)) == canonical_key(tree)


@given(structures(), sentences(depth=3))
def test_truncation_preserves_modal_formulas(t, f):
    if any(isinstance(n, Fixpoint) for n in subformulas(f)):
        return
    m = modal_depth(f)
    assert model_check(truncate(t, m), f) == model_check(t, f)


def test_enumeration_counts():
    assert len(list(enumerate_structures(1, ["P"]))) == 4
    assert list(enumerate_structures(0, ["P"])) == []


@pytest.mark.parametrize("max_nodes,alphabet",
                         [(2, ("P",)), (2, ("P", "Q")), (3, ()), (3, ("P",))])
def test_enumeration_matches_isomorphism_oracle(max_nodes, alphabet):
    got = list(enumerate_structures(max_nodes, alphabet))
    assert len(got) == _networkx_classes(max_nodes, alphabet)
    keys = {canonical_key(t) for t in got}
    assert len(keys) == len(got)


def test_canonical_key_ignores_renaming():
    a = load("node x [P]\nnode y\nedge x y\nedge y x\nroot x\n")
    b = load("node q\nnode p [P]\nedge p q\nedge q p\nroot p\n")
    assert canonical_key(a) == canonical_key(b)


def test_sample_is_reproducible():
    first = list(sample(6, "PQ", 7, 3))
    again = list(sample(6, "PQ", 7, 3))
    assert len(first) == 3 and first == again
    assert all(isinstance(t, Structure) and len(t) <= 6 for t in first)
    assert list(sample(6, "PQ", 8, 3)) != first


def test_loop_node_models_infinite_path():
    loop = load("node a\nedge a a\nroot a\n")
    assert model_check(loop, parse("nu X. <>X")) == 0
    assert model_check(loop, parse("mu X. []X")) == 1
