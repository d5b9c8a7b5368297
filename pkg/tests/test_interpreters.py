from __future__ import annotations

import pytest
from hypothesis import given

from muparity.alternation import assign_priorities, index_class
from muparity.arena import EVEN, ODD, Arena, encode, mc_game
from muparity.corpus import interprets
from muparity.formula import (BOTTOM, And, Box, Diamond, Fixpoint, Nu, Or, ParseTree, Prop,
                              parse, subformulas, to_text)
from muparity.interpreters import (NO_MODEL, SATISFIABLE, bounded_formula, bounded_game,
                                   gap_bound, parity_formula, pi1_interpreter,
                                   satisfiability_verdicts)
from muparity.solver import model_check, winner
from muparity.structures import enumerate_structures, truncate

from conftest import sentences, structures


def _parity_for(f):
    omega = assign_priorities(f)
    return parity_formula(omega.low, omega.high) if omega.index else parity_formula(0, 0)


def test_parity_formula_texts():
    assert to_text(parity_formula(0, 0)) == "nu X_0. E_0 & <>X_0 | O_0 & []X_0"
    f = parity_formula(0, 1)
    assert f.var == "X_1" and isinstance(f.body, Nu) and f.body.var == "X_0"
    a = assign_priorities(parity_formula(0, 2))
    assert a.index == (0, 1, 2)


@given(structures(max_nodes=3), sentences())
def test_parity_formula_interprets(t, f):
    a = mc_game(t, f)
    assert model_check(encode(a), _parity_for(f)) == winner(a)


def test_bounded_formula_base_cases():
    assert bounded_formula(0, 3) == BOTTOM
    f = bounded_formula(1, 0)
    assert to_text(f) == "E_0 & ~M & <>ff | E_0 & M & ff | O_0 & ~M & []ff | O_0 & M & tt"
    for p in range(5):
        for m in range(5):
            assert str(index_class(bounded_formula(p, m, (0, 1)))) == "ML"


def test_bounded_game_counter_zero_at_marked_start():
    a = Arena((EVEN, ODD), (0, 0), ((1,), (0,)), modal=(True, True))
    b = bounded_game(a, 0)
    assert b.successors[0] == () and winner(b) == ODD


def test_bounded_game_keeps_winner_on_shallow_acyclic_arena():
    a = Arena((EVEN, ODD, EVEN), (0, 1, 0), ((1, 2), (2,), ()), modal=(True, True, False))
    assert winner(bounded_game(a, 5)) == winner(a)


MODAL = [("<>P", 1), ("[](P | <>Q)", 2), ("mu X. <>X", 0), ("(mu X. (P | <>X)) & []ff", 1),
         ("P & ~Q", 0)]


@pytest.mark.parametrize("text,m", MODAL)
def test_bounded_chain_on_small_corpus(text, m):
    f = parse(text)
    tree = ParseTree(f)
    omega = assign_priorities(f)
    p = gap_bound(tree)
    labels = omega.index or (omega.minimum,)
    bf = ParseTree(bounded_formula(p, m, labels), share=True)
    for t in enumerate_structures(2, ("P", "Q")):
        a = mc_game(t, tree, omega)
        w = winner(a)
        assert model_check(truncate(t, m), tree, omega) == w
        assert winner(bounded_game(a, m)) == w
        assert model_check(encode(a), bf) == w


def test_pi1_all_satisfiable_shape():
    f = parse("nu X. (P & []X)")
    w = pi1_interpreter(f, satisfiability_verdicts(f))
    assert to_text(w) == "nu Y. E_0 & <>Y | O_0 & []Y"
    assert str(index_class(w)) == "Π1"


def test_pi1_unsatisfiable_mu_clause_becomes_false():
    f = parse("nu Y. (<>Y | mu X. (<>X & []ff))")
    verdicts = satisfiability_verdicts(f)
    assert verdicts == {"X": NO_MODEL}
    w = pi1_interpreter(f, verdicts, check_shape=False)
    assert any(isinstance(n, And) and n.left == Prop("E_1") and n.right == BOTTOM
               for n in subformulas(w))
    assert assign_priorities(w).index == (0,)
    structures_ = list(enumerate_structures(3, ()))
    assert interprets(w, f, structures_) == (len(structures_), None)


def test_pi1_provenance_variant():
    f = parse("nu Y. (<>Y | mu X. (<>X & []ff))")
    w = pi1_interpreter(f, {"X": NO_MODEL}, provenance=True, check_shape=False)
    assert Prop("E_X", False) in set(subformulas(w))
    structures_ = list(enumerate_structures(3, ()))
    assert interprets(w, f, structures_, provenance=True)[1] is None


def test_pi1_degenerate_case_interprets():
    f = parse("nu X. []X")
    w = pi1_interpreter(f, satisfiability_verdicts(f))
    assert not any(isinstance(n, Fixpoint) and n.var != "Y" for n in subformulas(w))
    assert interprets(w, f, enumerate_structures(2, ("P", "Q")))[1] is None


def test_pi1_satisfiable_mu_treated_like_nu():
    f = parse("nu Y. (P & <>Y | mu X. (Q | <>X))")
    verdicts = satisfiability_verdicts(f)
    assert verdicts == {"X": SATISFIABLE}
    w = pi1_interpreter(f, verdicts, check_shape=False)
    assert isinstance(w, Nu) and isinstance(w.body, Or)
    assert any(isinstance(n, Diamond) for n in subformulas(w))
    assert any(isinstance(n, Box) for n in subformulas(w))
