from __future__ import annotations

import random

from hypothesis import given
from hypothesis import strategies as st

from muparity.arena import EVEN, ODD, Arena
from muparity.oracle import brute_force_winners, compare_all_small, random_arena
from muparity.solver import (Lasso, check_strategy, dominant, play, play_winner, solve,
                             store_strategy)


@st.composite
def arenas(draw, max_positions: int = 6, max_priority: int = 4):
    n = draw(st.integers(1, max_positions))
    succ = tuple(tuple(sorted(draw(st.sets(st.integers(0, n - 1), max_size=3))))
                 for _ in range(n))
    owner = tuple(draw(st.integers(0, 1)) for _ in range(n))
    prio = tuple(draw(st.integers(0, max_priority)) for _ in range(n))
    return Arena(owner, prio, succ, low=0, high=max_priority)


def test_single_loop_examples():
    assert solve(Arena((EVEN,), (0,), ((0,),))).winner == (EVEN,)
    assert solve(Arena((EVEN,), (1,), ((0,),))).winner == (ODD,)


def test_terminal_loses_for_owner():
    assert solve(Arena((EVEN,), (0,), ((),))).winner == (ODD,)
    assert solve(Arena((ODD,), (1,), ((),))).winner == (EVEN,)


def test_dominant_examples():
    prio = {0: 0, 1: 1, 2: 5, 3: 2}
    assert dominant(Lasso((), (0, 1)), prio) == 1
    assert dominant(Lasso((2,), (0,)), prio) == 0
    assert dominant(Lasso((), (3, 1, 3)), prio) == 2
    assert dominant(Lasso((0,), ()), prio) is None


def test_deterministic_arena_has_unique_lasso():
    a = Arena((EVEN, ODD, EVEN), (0, 1, 2), ((1,), (2,), (1,)))
    l = play(a, {0: 1, 2: 1}, {1: 2})
    assert l == Lasso((0,), (1, 2))
    assert play_winner(a, l) == EVEN


def test_finite_play_lost_by_terminal_owner():
    a = Arena((EVEN, ODD), (0, 0), ((1,), ()))
    l = play(a, {0: 1}, {})
    assert l.finite and play_winner(a, l) == EVEN


def test_exhaustive_small_arenas_up_to_three():
    report = compare_all_small(3, 2)
    assert report["mismatch"] is None and report["arenas"] > 0


@given(arenas())
def test_zielonka_matches_brute_force(a):
    assert solve(a).winner == brute_force_winners(a)


@given(arenas())
def test_regions_partition_and_strategies_win(a):
    sol = solve(a)
    assert sol.region(EVEN) | sol.region(ODD) == frozenset(range(len(a)))
    assert not sol.region(EVEN) & sol.region(ODD)
    for player in (EVEN, ODD):
        assert check_strategy(a, sol, player, trials=20)


def test_strategy_soundness_against_200_counter_strategies():
    rng = random.Random(5)
    for _ in range(10):
        a = random_arena(rng)
        sol = solve(a)
        for player in (EVEN, ODD):
            assert check_strategy(a, sol, player, trials=200, seed=rng.randrange(10**6))


def test_replayed_strategies_reproduce_winner():
    rng = random.Random(11)
    for _ in range(50):
        a = random_arena(rng)
        sol = solve(a)
        even = dict(sol.strategy[EVEN])
        odd = dict(sol.strategy[ODD])
        for v in range(len(a)):
            if a.successors[v]:
                (even if a.owner[v] == EVEN else odd).setdefault(v, a.successors[v][0])
        for v in range(len(a)):
            assert play_winner(a, play(a, even, odd, start=v)) == sol.winner[v]


def test_store_strategy_format():
    a = Arena((EVEN, ODD), (0, 1), ((1,), (0,)), names=("a", "b"))
    assert store_strategy(a, {0: 1}) == "a -> b\n"
