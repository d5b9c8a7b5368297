"""Formulas over encoded arenas that describe winning regions, and bounded games."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .alternation import assign_priorities
from .arena import Arena, ArenaError
from .formula import (BOTTOM, TOP, And, Box, Diamond, Formula, Mu, Nu, Or, Prop, Var,
                      free_variables, subformulas, substitute)
from .normal_forms import is_disjunctive
from .structures import enumerate_structures, sample


def even_label(i: int) -> Prop:
    return Prop(f"E_{i}")


def odd_label(i: int) -> Prop:
    return Prop(f"O_{i}")


MARK = Prop("M")
NOT_MARK = Prop("M", False)


def _fold_or(parts):
    parts = list(parts)
    if not parts:
        return BOTTOM
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def _fold_and(parts):
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def parity_formula(low: int, high: int) -> Formula:
    """The formula of index ``{low..high}`` whose models are the encoded arenas won by Even.

    ``gamma_high X_high ... gamma_low X_low. OR_i (E_i & <>X_i) | (O_i & []X_i)``
    with ``gamma_i`` = mu for odd ``i`` and nu for even ``i``.
    """
    if low not in (0, 1) or high < low:
        raise ValueError("index must be a non-empty interval starting at 0 or 1")
    body = _fold_or(Or(And(even_label(i), Diamond(Var(f"X_{i}"))),
                       And(odd_label(i), Box(Var(f"X_{i}"))))
                    for i in range(low, high + 1))
    for i in range(low, high + 1):
        body = (Mu if i % 2 else Nu)(f"X_{i}", body)
    return body


def bounded_formula(p: int, m: int, priorities=(0,)) -> Formula:
    """Modal formula for counter games with gap bound ``p`` and counter ``m``.

    One clause per owner and priority label in ``priorities``. The result is
    built with shared subterms: use ``ParseTree(f, share=True)`` to play on it.
    """
    if p < 0 or m < 0:
        raise ValueError("p and m must be non-negative")
    priorities = tuple(priorities)

    @lru_cache(maxsize=None)
    def b(a: int, c: int) -> Formula:
        if a == 0:
            return BOTTOM
        clauses = []
        for i in priorities:
            e, o = even_label(i), odd_label(i)
            if c == 0:
                clauses += [
                    _fold_and([e, NOT_MARK, Diamond(b(a - 1, 0))]),
                    _fold_and([e, MARK, BOTTOM]),
                    _fold_and([o, NOT_MARK, Box(b(a - 1, 0))]),
                    _fold_and([o, MARK, TOP]),
                ]
            else:
                clauses += [
                    _fold_and([e, NOT_MARK, Diamond(b(a - 1, c))]),
                    _fold_and([e, MARK, Diamond(b(p, c - 1))]),
                    _fold_and([o, NOT_MARK, Box(b(a - 1, c))]),
                    _fold_and([o, MARK, Box(b(p, c - 1))]),
                ]
        return _fold_or(clauses)

    return b(p, m)


def gap_bound(tree) -> int:
    """A valid gap bound ``p`` for model-checking games of a guarded formula.

    Between two modal positions a play visits at most ``longest_nonmodal_path``
    non-modal positions, and the formula needs one more step for the modal
    position itself.
    """
    return tree.longest_nonmodal_path() + 1


def _nonmodal_acyclic(a: Arena) -> bool:
    """Whether every cycle of ``a`` contains a marked (modal) position."""
    state = [0] * len(a)
    for start in range(len(a)):
        if state[start] or a.modal[start]:
            continue
        stack = [(start, iter(a.successors[start]))]
        state[start] = 1
        while stack:
            v, it = stack[-1]
            for w in it:
                if a.modal[w]:
                    continue
                if state[w] == 1:
                    return False
                if state[w] == 0:
                    state[w] = 1
                    stack.append((w, iter(a.successors[w])))
                    break
            else:
                state[v] = 2
                stack.pop()
    return True


def bounded_game(a: Arena, n: int) -> Arena:
    """The ``n``-bounded game on ``a`` with the modal positions as the marked set.

    Positions are pairs (position, counter). Entering a marked position at
    counter 0 ends the play and its owner loses; otherwise leaving a marked
    position decrements the counter.
    """
    if n < 0:
        raise ValueError("counter must be non-negative")
    if not _nonmodal_acyclic(a):
        raise ArenaError("some infinite path avoids the marked positions")
    index: dict = {}
    order: list = []

    def visit(key):
        if key not in index:
            index[key] = len(order)
            order.append(key)
        return index[key]

    visit((a.initial, n))
    succ = []
    head = 0
    while head < len(order):
        v, c = order[head]
        head += 1
        if a.modal[v]:
            nxt = () if c == 0 else tuple(visit((w, c - 1)) for w in a.successors[v])
        else:
            nxt = tuple(visit((w, c)) for w in a.successors[v])
        succ.append(nxt)
    return Arena(
        owner=tuple(a.owner[v] for v, _ in order),
        priority=tuple(a.priority[v] for v, _ in order),
        successors=tuple(succ), initial=0,
        names=tuple(f"{a.names[v]}.{c}" for v, c in order),
        descriptions=tuple(f"{a.description(v)} counter {c}" for v, c in order),
        modal=tuple(a.modal[v] for v, _ in order),
        variable=tuple(a.variable[v] for v, _ in order),
        low=a.low, high=a.high,
    )


# -- the greatest-fixpoint template ---------------------------------------------------

SATISFIABLE = "satisfiable"
NO_MODEL = "no model found up to bound"


def mu_subformulas(f: Formula) -> list:
    return [n for n in subformulas(f) if isinstance(n, Mu)]


def closure(f: Formula, sub: Formula) -> Formula:
    """``sub`` with its free variables replaced by their binding fixpoints in ``f``."""
    binders = {n.var: n for n in subformulas(f) if isinstance(n, (Mu, Nu))}
    out = sub
    while True:
        free = free_variables(out)
        if not free:
            return out
        for x in sorted(free):
            out = substitute(out, x, binders[x])


@dataclass(frozen=True)
class SearchBounds:
    max_nodes: int = 3
    samples: int = 200
    sample_nodes: int = 8
    seed: int = 0


def satisfiability_verdicts(f: Formula, bounds: SearchBounds = SearchBounds()) -> dict:
    """Bounded model search for every mu-subformula (closed up in ``f``).

    Maps each mu-variable to ``SATISFIABLE`` or ``NO_MODEL``; the latter is
    not a proof of unsatisfiability.
    """
    from .semantics import denotation

    verdicts = {}
    for node in mu_subformulas(f):
        sentence = closure(f, node)
        alphabet = sorted({n.name for n in subformulas(sentence) if isinstance(n, Prop)})
        found = False
        candidates = [enumerate_structures(bounds.max_nodes, alphabet),
                      sample(bounds.sample_nodes, alphabet, bounds.seed, bounds.samples)]
        for stream in candidates:
            for t in stream:
                if denotation(t, sentence):
                    found = True
                    break
            if found:
                break
        verdicts[node.var] = SATISFIABLE if found else NO_MODEL
    return verdicts


def pi1_interpreter(f: Formula, verdicts: dict, provenance: bool = False,
                    check_shape: bool = True) -> Formula:
    """Greatest-fixpoint formula over encoded arenas of ``f``.

    Every mu-variable judged satisfiable is treated like a nu-variable; the
    clause for Even at positions of the remaining mu-variables becomes
    ``... & ff``. Without provenance those positions are recognized by their
    priority, which must not be shared with satisfiable mu-variables or with
    non-variable positions. With provenance the labels ``E_X`` are used.
    """
    if check_shape and not is_disjunctive(f):
        raise ValueError("formula is not in the disjunctive shape")
    omega = assign_priorities(f)
    mus = [n.var for n in mu_subformulas(f)]
    missing = [x for x in mus if x not in verdicts]
    if missing:
        raise KeyError(f"missing satisfiability verdict for {', '.join(missing)}")
    dead = [x for x in mus if verdicts[x] != SATISFIABLE]
    prios = omega.index or (0,)
    evens = [i for i in prios if i % 2 == 0]
    odds = [i for i in prios if i % 2 == 1]
    y = Var("Y")
    guards = []
    if dead and not provenance:
        dead_prio = {omega[x] for x in dead}
        live_prio = {omega[x] for x in mus if x not in dead}
        clash = dead_prio & (live_prio | {omega.minimum})
        if clash:
            raise ValueError("dead mu-variables share a priority with other positions; "
                             "use the provenance encoding")
        odds = [i for i in odds if i not in dead_prio]
    clauses = []
    if evens:
        clauses.append(And(_fold_or(map(even_label, evens)), Diamond(y)))
    if odds:
        left = _fold_or(map(even_label, odds))
        if dead and provenance:
            guards = [Prop(f"E_{x}", False) for x in dead]
            left = _fold_and([left] + guards)
        clauses.append(And(left, Diamond(y)))
    if evens:
        clauses.append(And(_fold_or(map(odd_label, evens)), Box(y)))
    if odds or (dead and not provenance):
        all_odds = [i for i in prios if i % 2 == 1]
        clauses.append(And(_fold_or(map(odd_label, all_odds)), Box(y)))
    if provenance:
        dead_labels = [Prop(f"E_{x}") for x in dead]
    else:
        dead_labels = [even_label(i) for i in sorted({omega[x] for x in dead})]
    clauses += [And(label, BOTTOM) for label in dead_labels]
    return Nu("Y", _fold_or(clauses))
