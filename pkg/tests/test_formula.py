from __future__ import annotations

import pytest
from hypothesis import given

from muparity.formula import (BOTTOM, bound_variables, TOP, And, Diamond, FormulaSyntaxError, Mu, Or, ParseTree,
                              Prop, UnboundVariableError, Var, conj, dag_size, disj,
                              free_variables, is_sentence, modal_depth, parse, parse_sentence,
                              propositions, rename_apart, shared_text, size, subformulas, to_text)

from conftest import sentences


def test_parse_basic_shapes():
    f = parse("mu X. (P | <>X)")
    assert f == Mu("X", Or(Prop("P"), Diamond(Var("X"))))
    assert parse("~P & tt") == And(Prop("P", False), TOP)
    assert parse("[]ff").body == BOTTOM


def test_binder_scope_extends_right():
    assert parse("mu X. P | <>X") == parse("mu X. (P | <>X)")


def test_precedence_and_over_or():
    assert parse("P | Q & P") == Or(Prop("P"), And(Prop("Q"), Prop("P")))


@pytest.mark.parametrize("text", ["mu X. (P |", "P &", "<>", "(P", "mu . P", "P Q"])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse(text)


def test_free_variable_rejected():
    assert parse("<>X") == Diamond(Prop("X"))
    with pytest.raises(UnboundVariableError):
        parse_sentence("<>X", variables=("X",))
    with pytest.raises(UnboundVariableError):
        ParseTree(Diamond(Var("X")))


def test_rename_apart_separates_reused_names():
    f = parse("(mu X. <>X) & (nu X. []X)")
    names = bound_variables(f)
    assert len(set(names)) == len(names) == 2


@given(sentences())
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


@given(sentences())
def test_generated_sentences_are_guarded_sentences(f):
    assert is_sentence(f)
    assert ParseTree(f).guarded


@given(sentences())
def test_rename_apart_is_idempotent_on_named_apart_input(f):
    assert rename_apart(f) == f


def test_guardedness():
    assert ParseTree(parse("mu X. <>X")).guarded
    assert not ParseTree(parse("mu X. (P | X)")).guarded
    assert not ParseTree(parse("mu X. <>(nu Y. (X & Y))")).guarded


def test_parse_tree_back_edges():
    tree = ParseTree(parse("mu X. (P | <>X)"))
    var = next(i for i, k in enumerate(tree.kinds) if k == "var")
    assert tree.children[var] == (tree.binding_formula("X"),)
    assert tree.longest_nonmodal_path() == 3


def test_shared_tree_keeps_objects_once():
    leaf = And(Prop("P"), Diamond(TOP))
    f = Or(Diamond(leaf), Diamond(leaf))
    assert len(ParseTree(f, share=True)) == dag_size(f) < size(f) == len(ParseTree(f))


def test_shared_tree_with_fixpoint():
    body = Diamond(Var("X"))
    f = Mu("X", Or(body, And(Prop("P"), body)))
    tree = ParseTree(f, share=True)
    assert tree.guarded
    assert len(tree) == dag_size(f)


def test_smart_constructors():
    assert conj(TOP, Prop("P")) == Prop("P")
    assert conj(BOTTOM, Prop("P")) == BOTTOM
    assert disj(BOTTOM, Prop("P")) == Prop("P")
    assert disj(Prop("P"), TOP) == TOP


def test_queries():
    f = parse("nu X. (P & [](<>Q | X))")
    assert propositions(f) == {"P", "Q"}
    assert free_variables(f.body) == {"X"}
    assert modal_depth(f) == 2


def test_shared_text_names_repeated_subterms():
    sub = And(Prop("P"), Diamond(TOP))
    lines = shared_text(Or(Diamond(sub), sub))
    assert lines == ["@0 = P & <>tt", "<>@0 | @0"]
