"""Acceptance criteria, one test per criterion.

Each test records a ``[PASS]``/``[FAIL]`` line; the lines are printed at the
end of the pytest run (and directly when this file is run as a script).
"""
from __future__ import annotations

import random
import time
from functools import lru_cache

import pytest

from muparity.alternation import assign_priorities, fits_index, format_index
from muparity.arena import encode, mc_game
from muparity.corpus import (BUNDLED, EXAMPLE_PSI, INTERPRETOR, TIDIED, agree_on, bundled,
                             corpus, interprets, product_agrees)
from muparity.formula import ParseTree, parse
from muparity.interpreters import (bounded_formula, gap_bound, parity_formula, pi1_interpreter,
                                   satisfiability_verdicts)
from muparity.oracle import brute_force_winners, compare_all_small, random_arena
from muparity.product import product, simplify
from muparity.semantics import holds
from muparity.solver import model_check, solve, winner
from muparity.structures import truncate

from challenge_cases import GENERAL_CASES, SIGMA2_CASES

RESULTS: dict = {}


def record(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})"
    RESULTS[number] = line
    print(line)


@lru_cache(maxsize=None)
def pq_corpus() -> tuple:
    """Exhaustive <= 3 nodes over {P, Q} plus 200 seeded samples of <= 8 nodes."""
    return tuple(corpus(("P", "Q")))


@lru_cache(maxsize=None)
def abc_corpus() -> tuple:
    return tuple(corpus(("A", "B", "C")))


def parity_for(f):
    omega = assign_priorities(f)
    return parity_formula(omega.low, omega.high) if omega.index else parity_formula(0, 0)


def test_1_semantics_cross_validation():
    start = time.perf_counter()
    formulas = bundled()
    indices = {format_index(a.low, a.high) if a.index else "ML"
               for a in map(assign_priorities, formulas.values())}
    checked = bad = 0
    for f in formulas.values():
        tree, omega = ParseTree(f), assign_priorities(f)
        for t in pq_corpus():
            checked += 1
            bad += (model_check(t, tree, omega) == 0) != holds(t, f)
    elapsed = time.perf_counter() - start
    ok = bad == 0 and elapsed < 300 and len(formulas) >= 10 and "{0,1,2}" in indices
    record(1, "game verdict equals fixpoint evaluator", ok,
           f"{len(formulas)} formulas x {len(pq_corpus())} structures, {bad} disagreements, "
           f"indices {sorted(indices)}, {elapsed:.1f}s")
    assert ok


def test_2_parity_interpretation():
    failures = []
    checked = 0
    for name, f in bundled().items():
        n, witness = interprets(parity_for(f), f, pq_corpus())
        checked += n
        if witness is not None:
            failures.append(name)
    record(2, "parity formula interprets every corpus formula", not failures,
           f"{checked} formula/structure pairs, failures {failures or 'none'}")
    assert not failures


@lru_cache(maxsize=None)
def example_products() -> tuple:
    psi, win = parse(EXAMPLE_PSI), parse(INTERPRETOR)
    res = product(psi, win)
    return psi, win, res


@lru_cache(maxsize=None)
def example_agreement() -> dict:
    """Disagreement counts of the interpretor and product verdicts on the {A,B,C} corpus."""
    psi, win, res = example_products()
    tree, omega = ParseTree(psi), assign_priorities(psi)
    win_tree, win_omega = ParseTree(win, share=True), assign_priorities(win)
    res_tree = ParseTree(res.formula, share=True)
    interp_bad = product_bad = 0
    for t in abc_corpus():
        a = mc_game(t, tree, omega)
        direct = winner(a)
        interp_bad += model_check(encode(a), win_tree, win_omega) != direct
        product_bad += model_check(t, res_tree, res.assignment) != direct
    return {"checked": len(abc_corpus()), "interprets": interp_bad, "product": product_bad}


def interpretor_applies(psi) -> bool:
    """The interpretor reads games over priorities {1,2,3}."""
    omega = assign_priorities(psi)
    return bool(omega.index) and omega.low >= 1 and omega.high <= 3


def product_ok(psi, win, structures) -> tuple:
    res = product(psi, win)
    omega_win = assign_priorities(win)
    within = fits_index(res.formula, omega_win.low, omega_win.high)
    n, witness = product_agrees(psi, win, res.formula, res.assignment, structures)
    return n, witness is None and within


def test_3_product_reproduction():
    failures = []
    pairs = combos = 0
    interpretor = parse(INTERPRETOR)
    for name, psi in bundled().items():
        wins = [("parity", parity_for(psi))]
        if interpretor_applies(psi):
            wins.append(("interpretor", interpretor))
        for label, win in wins:
            n, ok = product_ok(psi, win, pq_corpus())
            pairs += n
            combos += 1
            if not ok:
                failures.append(f"{name} x {label}")
    psi, win, res = example_products()
    stats = example_agreement()
    example_ok = (stats["interprets"] == 0 and stats["product"] == 0
                  and fits_index(res.formula, 1, 3))
    if not example_ok:
        failures.append("example x interpretor")
    ok = not failures
    record(3, "product agrees with the game composition and stays in the index", ok,
           f"{combos} bundled pairs on {pairs} structure checks; example x interpretor "
           f"on {stats['checked']} structures; failures {failures or 'none'}")
    assert ok


def test_4_example_end_to_end():
    psi, win, res = example_products()
    stats = example_agreement()
    a_ok = stats["interprets"] == 0
    checked_b, witness_b = agree_on(psi, parse(TIDIED), abc_corpus())
    b_ok = witness_b is None
    result, report = simplify(psi, win)
    old = assign_priorities(psi)
    c_ok = (report.within_target and fits_index(result, 1, 2)
            and old.index == (1, 2, 3) and assign_priorities(result).index == (1, 2))
    ok = a_ok and b_ok and c_ok
    record(4, "example: interpretor, tidied formula and simplification", ok,
           f"(a) {stats['interprets']} disagreements, (b) {checked_b} checked "
           f"{'no witness' if b_ok else 'witness found'}, (c) {report.old_index} -> "
           f"{report.new_index}; corpus {stats['checked']} structures over A,B,C")
    assert ok


def test_5_alternating_example_equivalence():
    f = parse("mu X. nu Y. ([]Y & mu Z. [](X | Z))")
    checked, witness = agree_on(f, parse("mu X. []X"), pq_corpus())
    ok = witness is None and checked == len(pq_corpus())
    record(5, "alternating example equals mu X. []X", ok,
           f"{checked} structures, {'no witness' if ok else 'witness found'}")
    assert ok


def test_6_truncation_and_bounded_games():
    cases = [("mu X. <>X", 0), ("(mu X. (P | <>X)) & []ff", 1)]
    bad = checked = 0
    for text, m in cases:
        f = parse(text)
        tree, omega = ParseTree(f), assign_priorities(f)
        labels = omega.index or (omega.minimum,)
        bf = bounded_formula(gap_bound(tree), m, labels)
        bf_tree, bf_omega = ParseTree(bf, share=True), assign_priorities(bf)
        for t in pq_corpus():
            checked += 1
            a = mc_game(t, tree, omega)
            w = winner(a)
            truncated = model_check(truncate(t, m), tree, omega)
            bounded = model_check(encode(a), bf_tree, bf_omega)
            bad += not (w == truncated == bounded)
    ok = bad == 0
    record(6, "truncation and bounded formula agree with the game", ok,
           f"{len(cases)} formulas, {checked} pairs, {bad} disagreements")
    assert ok


def test_7_solver_oracle():
    start = time.perf_counter()
    report = compare_all_small(4, 2)
    rng = random.Random(0)
    random_bad = 0
    for _ in range(500):
        a = random_arena(rng, max_positions=8, max_priority=4)
        random_bad += solve(a).winner != brute_force_winners(a)
    elapsed = time.perf_counter() - start
    ok = report["mismatch"] is None and random_bad == 0 and elapsed < 120
    record(7, "Zielonka matches exhaustive strategy enumeration", ok,
           f"{report['arenas']} arenas <= 4 positions, 500 random arenas, "
           f"{random_bad} random mismatches, {elapsed:.1f}s")
    assert ok


def test_8_challenge_scripts():
    from test_challenge import run_case
    from muparity.challenge import GENERAL, SIGMA2
    failures = []
    for variant, cases in ((SIGMA2, SIGMA2_CASES), (GENERAL, GENERAL_CASES)):
        for case in cases:
            try:
                run_case(variant, *case[1:])
            except (AssertionError, pytest.fail.Exception) as exc:
                failures.append(f"{case[0]}: {exc}")
    ok = not failures and len(SIGMA2_CASES) >= 12 and len(GENERAL_CASES) >= 12
    record(8, "scripted challenge plays match hand traces", ok,
           f"{len(SIGMA2_CASES)} sigma2 + {len(GENERAL_CASES)} general scripts, "
           f"failures {failures or 'none'}")
    assert ok


def test_9_pi1_template():
    failures = []
    checked = 0
    for text in ("nu X. []X", "nu X. (P & []X)"):
        f = parse(text)
        w = pi1_interpreter(f, satisfiability_verdicts(f))
        n, witness = interprets(w, f, pq_corpus())
        checked += n
        if witness is not None or assign_priorities(w).index != (0,):
            failures.append(text)
    record(9, "greatest-fixpoint template interprets and has index {0}", not failures,
           f"2 formulas, {checked} pairs, failures {failures or 'none'}")
    assert not failures


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
