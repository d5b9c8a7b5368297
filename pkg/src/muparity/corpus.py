"""Bundled formulas, structure corpora and agreement checks."""
from __future__ import annotations

from dataclasses import dataclass

from .alternation import assign_priorities
from .arena import encode, mc_game
from .formula import Formula, ParseTree, parse, propositions
from .solver import model_check, winner
from .structures import Structure, canonical_key, enumerate_structures, sample

# name -> formula text; fixpoint formulas of index up to {0,1,2} over P and Q
BUNDLED = {
    "diamond_p": "<>P",
    "box_chain": "[](P | <>Q)",
    "always_p": "nu X. (P & []X)",
    "infinite_path": "nu X. <>X",
    "no_infinite_path": "mu X. []X",
    "reach_p": "mu X. (P | <>X)",
    "inevitably_p": "mu X. (P | ([]X & <>tt))",
    "finite_or_q": "mu X. (Q | []X)",
    "infinitely_often_p": "nu X. mu Y. ((P & <>X) | <>Y)",
    "finitely_many_p": "mu X. nu Y. ((P & []X) | (~P & []Y))",
    "collapses_to_box": "mu X. nu Y. ([]Y & mu Z. [](X | Z))",
    "three_levels": "nu Z. mu Y. nu X. ((P & <>Z) | (Q & <>Y) | (~P & ~Q & <>X))",
    "bottom_after_reach": "(mu X. (P | <>X)) & []ff",
    "unreachable": "mu X. <>X",
}

# phi := nu W. (A & []W) instantiates the subformula left open in the example
EXAMPLE_PHI = "nu W. (A & []W)"
EXAMPLE_PSI = ("mu X. nu Y. mu Z. (A & <>Y) | (B & <>(Z & " + EXAMPLE_PHI + ")) | (C & []X)")
INTERPRETOR = ("mu X. ((E_1 & <>X) | (O_1 & []X) | (E_2 & <>X) | (O_2 & []X) | "
               "(E_3 & <>X) | (O_3 & []X) | nu X_2. mu X_1. "
               "((E_2 & <>X_2) | (O_2 & []X_2) | (E_1 & <>X_1) | (O_1 & []X_1)))")
TIDIED = ("mu X. (A & <>X) | (B & <>(X & " + EXAMPLE_PHI + ")) | (C & []X) | "
          "nu Y. mu Z. (A & <>Y) | (B & <>(Z & " + EXAMPLE_PHI.replace("W", "V") + ")) "
          "| (C & []ff)")


def bundled() -> dict:
    return {name: parse(text) for name, text in BUNDLED.items()}


@dataclass(frozen=True)
class CorpusSpec:
    max_nodes: int = 3
    samples: int = 200
    sample_nodes: int = 8
    seed: int = 0


def corpus(alphabet, spec: CorpusSpec = CorpusSpec()) -> list:
    """Every structure up to ``max_nodes`` nodes plus seeded random samples."""
    alphabet = tuple(sorted(alphabet))
    out = list(enumerate_structures(spec.max_nodes, alphabet))
    if spec.samples:
        out += list(sample(spec.sample_nodes, alphabet, spec.seed, spec.samples))
    return out


class _Checker:
    """Winner of ``t x f`` memoised on the structure projected to the propositions of ``f``."""

    def __init__(self, f: Formula, share: bool = False):
        self.tree = ParseTree(f, share=share)
        self.omega = assign_priorities(f)
        self.props = propositions(f)
        self.memo: dict = {}

    def __call__(self, t: Structure) -> int:
        key = canonical_key(t, self.props) if len(t) <= 4 else None
        if key is not None and key in self.memo:
            return self.memo[key]
        w = model_check(t, self.tree, self.omega)
        if key is not None:
            self.memo[key] = w
        return w


def agree_on(f: Formula, g: Formula, structures, share_g: bool = False) -> tuple:
    """``(number checked, first structure where f and g disagree or None)``."""
    check_f, check_g = _Checker(f), _Checker(g, share=share_g)
    checked = 0
    for t in structures:
        checked += 1
        if check_f(t) != check_g(t):
            return checked, t
    return checked, None


def interprets(win: Formula, psi: Formula, structures, provenance: bool = False) -> tuple:
    """Check ``winner(t x psi) == winner(encode(t x psi) x win)`` on every structure.

    Returns ``(number checked, first counterexample or None)``.
    """
    tree = ParseTree(psi)
    omega = assign_priorities(psi)
    win_check = _WinChecker(win)
    checked = 0
    memo: dict = {}
    props = propositions(psi)
    for t in structures:
        checked += 1
        key = canonical_key(t, props) if len(t) <= 4 else None
        if key is not None and key in memo:
            continue
        arena = mc_game(t, tree, omega)
        ok = winner(arena) == win_check(encode(arena, provenance))
        if key is not None:
            memo[key] = ok
        if not ok:
            return checked, t
    return checked, None


class _WinChecker:
    def __init__(self, win: Formula):
        self.tree = ParseTree(win, share=True)
        self.omega = assign_priorities(win)

    def __call__(self, encoded: Structure) -> int:
        return model_check(encoded, self.tree, self.omega)


def product_agrees(psi: Formula, win: Formula, result: Formula, assignment, structures) -> tuple:
    """Check ``winner(t x result) == winner(encode(t x psi) x win) == winner(t x psi)``."""
    tree = ParseTree(psi)
    omega = assign_priorities(psi)
    res_tree = ParseTree(result, share=True)
    win_check = _WinChecker(win)
    provenance = any(p.startswith("E_") and not p[2:].isdigit() for p in propositions(win))
    checked = 0
    seen: set = set()
    props = propositions(psi)
    for t in structures:
        checked += 1
        key = canonical_key(t, props) if len(t) <= 4 else None
        if key is not None:
            if key in seen:
                continue
            seen.add(key)
        arena = mc_game(t, tree, omega)
        direct = winner(arena)
        via_win = win_check(encode(arena, provenance))
        via_product = model_check(t, res_tree, assignment)
        if not direct == via_win == via_product:
            return checked, t
    return checked, None
