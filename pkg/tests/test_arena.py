from __future__ import annotations

from hypothesis import given

from muparity.alternation import assign_priorities
from muparity.arena import (EVEN, ODD, Arena, arena_eq_winner, encode, load_arena, mc_game,
                            position_labels, store_arena, winner)
from muparity.formula import parse
from muparity.semantics import denotation, holds
from muparity.structures import load

from conftest import sentences, structures

LEAF = load("node s\nroot s\n")
P_NODE = load("node s [P]\nroot s\n")
LOOP = load("node s\nedge s s\nroot s\n")


def test_true_literal_is_terminal_for_odd():
    a = mc_game(P_NODE, parse("P"))
    assert len(a) == 1 and a.successors[0] == () and a.owner[0] == ODD
    assert winner(a) == EVEN


def test_stuck_diamond_loses_for_even():
    a = mc_game(LEAF, parse("<>tt"))
    assert a.owner[0] == EVEN and a.successors[0] == ()
    assert winner(a) == ODD


def test_least_fixpoint_loop_is_won_by_odd():
    a = mc_game(LOOP, parse("mu X. <>X"))
    assert winner(a) == ODD
    var = [v for v in range(len(a)) if a.variable[v] == "X"]
    assert [a.priority[v] for v in var] == [1]


def test_positions_follow_subformula_identity():
    # the two occurrences of P are different subformulas, hence different positions
    a = mc_game(P_NODE, parse("P & P"))
    assert len(a) == 3


@given(structures(), sentences())
def test_game_agrees_with_fixpoint_evaluator(t, f):
    assert (winner(mc_game(t, f)) == EVEN) == holds(t, f)


@given(structures(), sentences())
def test_priorities_within_codomain(t, f):
    omega = assign_priorities(f)
    a = mc_game(t, f, omega)
    if omega.index:
        assert set(a.priority) <= set(omega.index)
    else:
        assert set(a.priority) == {0}


@given(structures(max_nodes=3), sentences(depth=3))
def test_encoding_labels_partition_positions(t, f):
    a = mc_game(t, f)
    enc = encode(a, with_provenance=True)
    assert len(enc) == len(a.reachable())
    for v in a.reachable():
        labels = enc.labels[a.names[v]]
        owner_labels = [x for x in labels if x[:2] in ("E_", "O_") and x[2:].isdigit()]
        assert owner_labels == [f"{'E' if a.owner[v] == EVEN else 'O'}_{a.priority[v]}"]
        assert ("M" in labels) == a.modal[v]
        assert any(x == f"E_{a.variable[v]}" for x in labels) == (a.variable[v] is not None)


def test_encoding_examples():
    a = Arena((EVEN, ODD), (0, 1), ((1,), (0,)), modal=(False, True), low=0, high=1)
    assert position_labels(a, 0) == {"E_0"}
    assert position_labels(a, 1) == {"O_1", "M"}
    b = mc_game(LOOP, parse("nu X. <>X"))
    v = next(v for v in range(len(b)) if b.variable[v] == "X")
    assert "E_X" in position_labels(b, v, True) and "E_X" not in position_labels(b, v)


def test_arena_text_round_trip():
    a = mc_game(LOOP, parse("nu X. mu Y. <>(X | Y)"))
    b = load_arena(store_arena(a))
    assert (b.owner, b.priority, b.successors, b.modal, b.variable) == \
        (a.owner, a.priority, a.successors, a.modal, a.variable)
    assert arena_eq_winner(a, b)
    assert not arena_eq_winner(a, mc_game(LOOP, parse("mu X. <>X")))


def test_evaluator_denotation_on_states():
    t = load("node a\nnode b [P]\nedge a b\nedge b b\nroot a\n")
    f = parse("mu X. (P | <>X)")
    assert denotation(t, f) == 0b11
    assert denotation(t, parse("P")) == 0b10
