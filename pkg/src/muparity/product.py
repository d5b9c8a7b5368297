"""The product of a formula with a formula over its encoded model-checking games.

``product(psi, win)`` is a formula over the propositions of ``psi`` whose
model-checking game on any structure ``t`` is the game of ``win`` on the
encoded game of ``t`` and ``psi``, rule by rule. If ``win`` interprets
``psi``, the product is equivalent to ``psi`` and has the index of ``win``.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field

from .alternation import (PriorityAssignment, assign_priorities, classify_interval,
                          fits_index, format_index, index_class, violations)
from .formula import (BOTTOM, TOP, And, Bottom, Box, Diamond, Fixpoint, Formula, Mu, Nu,
                      Or, ParseTree, Prop, Top, Var, children, conj, dag_nodes, disj,
                      free_variable_map, negate_literal, size, subformulas)


class ProductError(ValueError):
    pass


class BudgetExceeded(ProductError):
    pass


_PRIORITY_LABEL = re.compile(r"^([EO])_(\d+)$")
_PROVENANCE_LABEL = re.compile(r"^E_([A-Za-z_][A-Za-z0-9_]*)$")


@dataclass
class ProductResult:
    formula: Formula
    assignment: PriorityAssignment
    steps: int
    fresh: dict = field(default_factory=dict)   # fresh variable -> (psi node id, win variable)


def _label_holds(tree: ParseTree, omega: PriorityAssignment, i: int, name: str) -> bool:
    """Whether every position ``(s, node i)`` carries the arena label ``name``.

    Only called for non-literal nodes, whose owner, priority and kind do not
    depend on the state.
    """
    kind = tree.kinds[i]
    m = _PRIORITY_LABEL.match(name)
    if m:
        owner_odd = kind in ("and", "box", "tt")
        prio = omega[tree.nodes[i].name] if kind == "var" else omega.minimum
        return (m.group(1) == "O") == owner_odd and int(m.group(2)) == prio
    if name == "M":
        return kind in ("dia", "box")
    m = _PROVENANCE_LABEL.match(name)
    if m:
        return kind == "var" and tree.nodes[i].name == m.group(1)
    raise ProductError(f"proposition {name!r} of the game formula is not an arena label")


def _literal_times(lit: Prop, omega: PriorityAssignment, label: Prop) -> Formula:
    """Product of a literal position of psi with an arena label literal."""
    m = _PRIORITY_LABEL.match(label.name)
    if m:
        if int(m.group(2)) != omega.minimum:
            base = BOTTOM
        elif m.group(1) == "E":
            # the position belongs to Even exactly when the literal is false
            base = negate_literal(lit)
        else:
            base = lit
    elif label.name == "M" or _PROVENANCE_LABEL.match(label.name):
        base = BOTTOM
    else:
        raise ProductError(f"proposition {label.name!r} of the game formula is not an arena label")
    if label.positive:
        return base
    if isinstance(base, Bottom):
        return TOP
    return negate_literal(base)


def product(psi: Formula, win: Formula, omega_psi: PriorityAssignment | None = None,
            omega_win: PriorityAssignment | None = None, budget: int | None = None
            ) -> ProductResult:
    """The product formula with its inherited priority assignment.

    Fresh variables are named ``W_<node>_<var>`` (with a numeric suffix when
    the same pair is bound again deeper). A variable of ``win`` reached at a
    node of ``psi`` refers back to the innermost binder for the same pair
    unless a binder of higher priority was introduced after it; otherwise a
    new binder unfolds the fixpoint.
    """
    tree = ParseTree(psi)
    omega_psi = omega_psi or assign_priorities(psi)
    omega_win = omega_win or assign_priorities(win)
    win_binders = {n.var: n for n in subformulas(win) if isinstance(n, (Mu, Nu))}
    n_vars = len(win_binders)
    if budget is None:
        budget = 64 * len(tree) * size(win) * 2 ** n_vars
    steps = 0
    fresh: dict = {}
    prio: dict = {}
    used: dict = {}

    def new_name(i: int, var: str) -> str:
        base = f"W_{i}_{var}"
        k = used.get(base, 0)
        used[base] = k + 1
        name = base if k == 0 else f"{base}_{k}"
        fresh[name] = (i, var)
        prio[name] = omega_win[var]
        return name

    memo: dict = {}

    def go(i: int, w: Formula, ctx: frozenset) -> Formula:
        # ctx holds the binders (key, name, priority) that may still be referred back to
        key = (i, id(w), ctx)
        if key not in memo:
            memo[key] = step(i, w, ctx)
        return memo[key]

    def step(i: int, w: Formula, ctx: frozenset) -> Formula:
        nonlocal steps
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"product exceeded its step budget of {budget}")
        kind = tree.kinds[i]
        if isinstance(w, Top):
            return TOP
        if isinstance(w, Bottom):
            return BOTTOM
        if isinstance(w, Prop):
            if kind == "prop":
                return _literal_times(tree.nodes[i], omega_psi, w)
            holds = _label_holds(tree, omega_psi, i, w.name)
            return TOP if holds == w.positive else BOTTOM
        if isinstance(w, And):
            left = go(i, w.left, ctx)
            # skip the other side when the label already decides the position
            return BOTTOM if isinstance(left, Bottom) else conj(left, go(i, w.right, ctx))
        if isinstance(w, Or):
            left = go(i, w.left, ctx)
            return TOP if isinstance(left, Top) else disj(left, go(i, w.right, ctx))
        if isinstance(w, (Diamond, Box)):
            if kind in ("dia", "box"):
                body = go(tree.children[i][0], w.body, ctx)
                if isinstance(w, Diamond):
                    return BOTTOM if isinstance(body, Bottom) else Diamond(body)
                return TOP if isinstance(body, Top) else Box(body)
            # a non-modal position moves to its immediate subformulas
            out = BOTTOM if isinstance(w, Diamond) else TOP
            join = disj if isinstance(w, Diamond) else conj
            for c in tree.children[i]:
                out = join(out, go(c, w.body, ctx))
            return out
        if isinstance(w, Var):
            for k, name, _ in ctx:
                if k == (i, w.name):
                    return Var(name)
            return bind(i, w.name, ctx)
        if isinstance(w, (Mu, Nu)):
            return bind(i, w.var, ctx)
        raise TypeError(f"not a formula: {w!r}")

    bound: dict = {}

    def bind(i: int, var: str, ctx: frozenset) -> Formula:
        p = omega_win[var]
        # a binder of priority p hides earlier binders of lower priority and
        # earlier binders for the same pair; equal visible contexts share one binder
        outer = frozenset(e for e in ctx if e[2] >= p and e[0] != (i, var))
        key = (i, var, outer)
        if key not in bound:
            binder = win_binders[var]
            name = new_name(i, var)
            body = go(i, binder.body, outer | {((i, var), name, p)})
            bound[key] = (Mu if isinstance(binder, Mu) else Nu)(name, body)
        return bound[key]

    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        out = go(0, win, frozenset())
    finally:
        sys.setrecursionlimit(limit)
    cleaned = cleanup(out)
    kept = {n.var for n in dag_nodes(cleaned) if isinstance(n, Fixpoint)}
    assignment = PriorityAssignment({k: v for k, v in prio.items() if k in kept},
                                    omega_win.low, omega_win.high)
    problems = violations(cleaned, assignment)
    if problems:
        raise ProductError("inherited priorities are not order preserving: " + "; ".join(problems))
    return ProductResult(cleaned, assignment, steps, {k: fresh[k] for k in kept})


def cleanup(f: Formula) -> Formula:
    """Remove fixpoint binders whose variable does not occur free in their body.

    Shared subterms stay shared.
    """
    free = free_variable_map(f)
    out: dict = {}
    for node in dag_nodes(f):
        kids = [out[id(c)] for c in children(node)]
        if isinstance(node, Fixpoint) and node.var not in free[id(node.body)]:
            new = kids[0]
        elif all(k is c for k, c in zip(kids, children(node))):
            new = node
        elif isinstance(node, (And, Or)):
            new = type(node)(*kids)
        elif isinstance(node, Fixpoint):
            new = type(node)(node.var, kids[0])
        else:
            new = type(node)(kids[0])
        out[id(node)] = new
    return out[id(f)]


@dataclass
class SimplifyReport:
    original: Formula
    result: Formula
    old_index: str
    new_index: str
    within_target: bool
    checked: int
    counterexample: object = None

    @property
    def equivalent(self) -> bool:
        return self.counterexample is None


def simplify(psi: Formula, win: Formula, structures=None) -> tuple:
    """Product of ``psi`` with ``win`` plus a corpus comparison against ``psi``.

    ``structures`` is an iterable of structures used for the comparison; the
    first structure where the two formulas disagree is reported.
    """
    from .corpus import agree_on

    omega_win = assign_priorities(win)
    res = product(psi, win, omega_win=omega_win)
    old = assign_priorities(psi)
    new = assign_priorities(res.formula)
    within = fits_index(res.formula, omega_win.low, omega_win.high)
    checked, witness = 0, None
    if structures is not None:
        checked, witness = agree_on(psi, res.formula, structures, share_g=True)
    report = SimplifyReport(psi, res.formula, _describe(old), _describe(new), within, checked,
                            witness)
    return res.formula, report


def _describe(a: PriorityAssignment) -> str:
    if not a.index:
        return "ML"
    return f"{format_index(a.low, a.high)} {classify_interval(a.low, a.high)}"


__all__ = ["product", "cleanup", "simplify", "ProductResult", "SimplifyReport",
           "ProductError", "BudgetExceeded", "index_class"]
