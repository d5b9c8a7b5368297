"""Zielonka's algorithm, positional strategies, plays and lassos."""
from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np
from numba import njit

from .arena import EVEN, ODD, Arena


@njit(cache=True)
def _attractor(alive, target, player, owner, succ_ptr, succ, pred_ptr, pred, strat):
    n = alive.size
    attr = target.copy()
    count = np.zeros(n, np.int64)
    queue = np.empty(n, np.int64)
    tail = 0
    for v in range(n):
        if not alive[v]:
            continue
        if attr[v]:
            queue[tail] = v
            tail += 1
        else:
            c = 0
            for k in range(succ_ptr[v], succ_ptr[v + 1]):
                if alive[succ[k]]:
                    c += 1
            count[v] = c
    head = 0
    while head < tail:
        u = queue[head]
        head += 1
        for k in range(pred_ptr[u], pred_ptr[u + 1]):
            v = pred[k]
            if not alive[v] or attr[v]:
                continue
            if owner[v] == player:
                attr[v] = True
                strat[v] = u
                queue[tail] = v
                tail += 1
            else:
                count[v] -= 1
                if count[v] == 0:
                    attr[v] = True
                    queue[tail] = v
                    tail += 1
    return attr


@njit(cache=True)
def _zielonka(alive, owner, prio, succ_ptr, succ, pred_ptr, pred, win, strat):
    """Fill ``win``/``strat`` on the subgame ``alive`` (every position has a live successor).

    The second recursive call of the textbook algorithm is turned into a loop,
    so the recursion depth is bounded by the number of distinct priorities.
    """
    game = alive.copy()
    while True:
        d = -1
        for v in range(game.size):
            if game[v] and prio[v] > d:
                d = prio[v]
        if d < 0:
            return 0
        p = d & 1
        top = game & (prio == d)
        a = _attractor(game, top, p, owner, succ_ptr, succ, pred_ptr, pred, strat)
        sub = game & ~a
        _zielonka(sub, owner, prio, succ_ptr, succ, pred_ptr, pred, win, strat)
        lost = sub & (win == 1 - p)
        if not lost.any():
            for v in range(game.size):
                if a[v]:
                    win[v] = p
                    if top[v] and owner[v] == p:
                        for k in range(succ_ptr[v], succ_ptr[v + 1]):
                            if game[succ[k]]:
                                strat[v] = succ[k]
                                break
            return 0
        b = _attractor(game, lost, 1 - p, owner, succ_ptr, succ, pred_ptr, pred, strat)
        for v in range(game.size):
            if b[v]:
                win[v] = 1 - p
        game = game & ~b


@njit(cache=True)
def _predecessors(n, succ_ptr, succ):
    count = np.zeros(n + 1, np.int64)
    for k in range(succ.size):
        count[succ[k] + 1] += 1
    pred_ptr = np.cumsum(count)
    fill = pred_ptr[:-1].copy()
    pred = np.empty(succ.size, np.int64)
    for v in range(n):
        for k in range(succ_ptr[v], succ_ptr[v + 1]):
            w = succ[k]
            pred[fill[w]] = v
            fill[w] += 1
    return pred_ptr, pred


@njit(cache=True)
def _close_dead_ends(owner, prio, succ_ptr, succ):
    """Give each terminal position a self-loop whose priority makes its owner lose."""
    n = owner.size
    new_ptr = np.zeros(n + 1, np.int64)
    for v in range(n):
        deg = succ_ptr[v + 1] - succ_ptr[v]
        new_ptr[v + 1] = new_ptr[v] + (deg if deg > 0 else 1)
    new_succ = np.empty(new_ptr[n], np.int64)
    new_prio = prio.copy()
    for v in range(n):
        deg = succ_ptr[v + 1] - succ_ptr[v]
        if deg == 0:
            new_succ[new_ptr[v]] = v
            new_prio[v] = 1 if owner[v] == 0 else 0
        else:
            for k in range(deg):
                new_succ[new_ptr[v] + k] = succ[succ_ptr[v] + k]
    return new_prio, new_ptr, new_succ


@njit(cache=True)
def _solve_arrays(owner, prio, succ_ptr, succ):
    n = owner.size
    prio2, ptr2, succ2 = _close_dead_ends(owner, prio, succ_ptr, succ)
    pred_ptr, pred = _predecessors(n, ptr2, succ2)
    win = np.zeros(n, np.int64)
    strat = np.full(n, -1, np.int64)
    alive = np.ones(n, np.bool_)
    _zielonka(alive, owner, prio2, ptr2, succ2, pred_ptr, pred, win, strat)
    for v in range(n):
        if succ_ptr[v + 1] == succ_ptr[v] or owner[v] != win[v]:
            strat[v] = -1
    return win, strat


@njit(cache=True)
def solve_colourings(succ_ptr, succ, owners, prios):
    """Winners for one game graph under many owner/priority colourings (rows)."""
    m, n = owners.shape
    out = np.empty((m, n), np.int64)
    for r in range(m):
        win, _ = _solve_arrays(owners[r], prios[r], succ_ptr, succ)
        out[r] = win
    return out


@dataclass(frozen=True)
class Solution:
    """Winner of every position and a positional winning strategy per player.

    ``strategy[player]`` maps each non-terminal position of ``player`` inside
    its winning region to the chosen successor.
    """

    winner: tuple
    strategy: tuple

    def region(self, player: int) -> frozenset:
        return frozenset(v for v, w in enumerate(self.winner) if w == player)


def solve(a: Arena) -> Solution:
    owner, prio, ptr, succ = a.arrays
    win, strat = _solve_arrays(owner, prio, ptr, succ)
    win = tuple(int(w) for w in win)
    strategies = ({}, {})
    for v, w in enumerate(strat):
        if w >= 0:
            strategies[a.owner[v]][v] = int(w)
    return Solution(win, strategies)


def winner(a: Arena) -> int:
    return solve(a).winner[a.initial]


# -- plays ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Lasso:
    """An ultimately periodic play ``prefix cycle cycle ...``; finite when ``cycle`` is empty."""

    prefix: tuple
    cycle: tuple

    @property
    def finite(self) -> bool:
        return not self.cycle


NO_DOMINANT = None


def dominant(lasso: Lasso, priority) -> int | None:
    """Highest priority on the cycle, or ``None`` for a finite play."""
    if lasso.finite:
        return NO_DOMINANT
    return max(priority[v] for v in lasso.cycle)


def play(a: Arena, even: dict, odd: dict, start: int | None = None) -> Lasso:
    """The play induced by two positional strategies."""
    v = a.initial if start is None else start
    seen: dict = {}
    path: list = []
    while v not in seen:
        seen[v] = len(path)
        path.append(v)
        if not a.successors[v]:
            return Lasso(tuple(path), ())
        strat = even if a.owner[v] == EVEN else odd
        if v not in strat:
            raise KeyError(f"strategy undefined at position {a.names[v]}")
        w = strat[v]
        if w not in a.successors[v]:
            raise ValueError(f"strategy moves along a non-edge {a.names[v]} -> {a.names[w]}")
        v = w
    k = seen[v]
    return Lasso(tuple(path[:k]), tuple(path[k:]))


def play_winner(a: Arena, lasso: Lasso) -> int:
    if lasso.finite:
        return ODD if a.owner[lasso.prefix[-1]] == EVEN else EVEN
    return dominant(lasso, a.priority) % 2


def random_strategy(a: Arena, player: int, rng: random.Random) -> dict:
    return {v: rng.choice(a.successors[v]) for v in range(len(a))
            if a.owner[v] == player and a.successors[v]}


def check_strategy(a: Arena, solution: Solution, player: int, trials: int = 200,
                   seed: int = 0) -> bool:
    """Play the winning strategy of ``player`` against random positional opponents."""
    rng = random.Random(seed)
    region = solution.region(player)
    mine = solution.strategy[player]
    for v in region:
        if a.owner[v] == player and a.successors[v] and mine.get(v) is None:
            return False
    for trial in range(trials):
        other = random_strategy(a, 1 - player, rng)
        strat = {v: w for v, w in mine.items()}
        # outside the region the strategy owner never moves; fill in arbitrarily
        for v in range(len(a)):
            if a.owner[v] == player and v not in strat and a.successors[v]:
                strat[v] = a.successors[v][0]
        pair = (strat, other) if player == EVEN else (other, strat)
        for v in region:
            if play_winner(a, play(a, *pair, start=v)) != player:
                return False
    return True


def store_strategy(a: Arena, strategy: dict) -> str:
    return "".join(f"{a.names[v]} -> {a.names[w]}\n" for v, w in sorted(strategy.items()))


def model_check(t, tree, omega=None) -> int:
    """Winner of the model-checking game of ``t`` and ``tree`` without building an Arena."""
    from .alternation import assign_priorities
    from .arena import mc_arrays
    from .formula import ParseTree

    tree = tree if isinstance(tree, ParseTree) else ParseTree(tree)
    if not tree.guarded:
        raise ValueError("formula is not guarded")
    omega = omega if omega is not None else assign_priorities(tree.formula)
    owner, prio, ptr, succ, _ = mc_arrays(t, tree, omega)
    win, _ = _solve_arrays(owner, prio, ptr, succ)
    return int(win[0])
