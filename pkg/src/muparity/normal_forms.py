"""Guarded form, negation by duality and the disjunctive-form recognizer."""
from __future__ import annotations

from .formula import (BOTTOM, TOP, And, Bottom, Box, Diamond, Fixpoint, Formula, Modal,
                      Mu, Nu, Or, Prop, Top, Var, conj, disj, free_variables)


def _replace_unguarded(node: Formula, var: str, constant: Formula):
    """Replace occurrences of ``var`` not under a modality; report whether any were."""
    if isinstance(node, Var):
        return (constant, True) if node.name == var else (node, False)
    if isinstance(node, (And, Or)):
        left, lc = _replace_unguarded(node.left, var, constant)
        right, rc = _replace_unguarded(node.right, var, constant)
        if not (lc or rc):
            return node, False
        return (conj if isinstance(node, And) else disj)(left, right), True
    if isinstance(node, Fixpoint):
        body, changed = _replace_unguarded(node.body, var, constant)
        if not changed:
            return node, False
        if node.var not in free_variables(body):
            return body, True
        return type(node)(node.var, body), True
    return node, False


def guard(f: Formula) -> Formula:
    """Equivalent formula in which every variable occurs under a modality in its binding.

    Works innermost binder first. Once inner binders are guarded, a cycle of
    the model-checking game that avoids modalities can only run through
    unguarded occurrences of the current variable X and is dominated by X,
    so those occurrences may be replaced by ff (mu) or tt (nu).
    """
    if isinstance(f, Fixpoint):
        body = guard(f.body)
        body, _ = _replace_unguarded(body, f.var, BOTTOM if isinstance(f, Mu) else TOP)
        if f.var not in free_variables(body):
            return body
        if body is f.body:
            return f
        return type(f)(f.var, body)
    if isinstance(f, (And, Or)):
        left, right = guard(f.left), guard(f.right)
        if left is f.left and right is f.right:
            return f
        return type(f)(left, right)
    if isinstance(f, Modal):
        body = guard(f.body)
        return f if body is f.body else type(f)(body)
    return f


_DUAL = {And: Or, Or: And, Diamond: Box, Box: Diamond, Mu: Nu, Nu: Mu}


def dual(f: Formula) -> Formula:
    """Negation of a sentence pushed down to the propositions."""
    if isinstance(f, Top):
        return BOTTOM
    if isinstance(f, Bottom):
        return TOP
    if isinstance(f, Prop):
        return Prop(f.name, not f.positive)
    if isinstance(f, Var):
        return f
    if isinstance(f, (And, Or)):
        return _DUAL[type(f)](dual(f.left), dual(f.right))
    if isinstance(f, Modal):
        return _DUAL[type(f)](dual(f.body))
    return _DUAL[type(f)](f.var, dual(f.body))


def _flatten(node: Formula, kind) -> list:
    if isinstance(node, kind):
        return _flatten(node.left, kind) + _flatten(node.right, kind)
    return [node]


def is_disjunctive(f: Formula) -> bool:
    """Recognize the disjunctive shape adopted for this package.

    Accepted: tt, ff, literals, variables, disjunctions and fixpoints of
    accepted formulas, a single modality over an accepted formula, and
    conjunctions made of literals plus at most one modal part, where a modal
    part with several modalities must be a cover
    ``<>a1 & ... & <>ak & [](a1 | ... | ak)``.
    """
    if isinstance(f, (Top, Bottom, Prop, Var)):
        return True
    if isinstance(f, Or):
        return is_disjunctive(f.left) and is_disjunctive(f.right)
    if isinstance(f, Fixpoint) or isinstance(f, Modal):
        return is_disjunctive(f.body)
    parts = _flatten(f, And)
    modal = [p for p in parts if isinstance(p, Modal)]
    if len(modal) + sum(isinstance(p, (Prop, Top)) for p in parts) != len(parts):
        return False
    if len(modal) <= 1:
        return all(is_disjunctive(m.body) for m in modal)
    boxes = [m for m in modal if isinstance(m, Box)]
    if len(boxes) != 1:
        return False
    covered = _flatten(boxes[0].body, Or)
    offered = [m.body for m in modal if isinstance(m, Diamond)]
    key = repr
    if sorted(map(key, covered)) != sorted(map(key, offered)):
        return False
    return all(is_disjunctive(b) for b in offered)


def is_codisjunctive(f: Formula) -> bool:
    return is_disjunctive(dual(f))
