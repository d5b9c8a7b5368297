"""Brute-force parity game solving by enumerating positional strategy pairs.

Even wins from ``v`` iff some positional Even strategy beats every
positional Odd strategy. A pair of positional strategies turns the arena
into a graph where every position has at most one successor, so the play
from ``v`` is a path into a cycle or into a terminal position.
"""
from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np

from .arena import Arena
from .solver import solve_colourings


def _selections(successors) -> np.ndarray:
    """All ways of picking one successor per position (-1 for terminals), shape (S, n)."""
    choices = [s if s else (-1,) for s in successors]
    return np.array(list(itertools.product(*choices)), dtype=np.int64).reshape(-1, len(choices))


def _outcomes(successors):
    """For each selection and start: (cycle bitmask, terminal position or -1)."""
    n = len(successors)
    sel = _selections(successors)
    count = sel.shape[0]
    pos = np.broadcast_to(np.arange(n), (count, n)).copy()
    rows = np.arange(count)[:, None]
    for _ in range(n):
        nxt = sel[rows, pos]
        pos = np.where(nxt < 0, pos, nxt)
    stuck = sel[rows, pos] < 0
    mask = np.zeros((count, n), dtype=np.int64)
    cur = pos.copy()
    for _ in range(n):
        mask |= np.left_shift(1, cur)
        nxt = sel[rows, cur]
        cur = np.where(nxt < 0, cur, nxt)
    terminal = np.where(stuck, pos, -1)
    mask = np.where(stuck, 0, mask)
    return mask, terminal


def _reduce(even_wins: np.ndarray, successors, owner) -> np.ndarray:
    """Exists over Even's choices, for all over Odd's, per start (last axes kept)."""
    shape = tuple(max(len(s), 1) for s in successors)
    table = even_wins.reshape(shape + even_wins.shape[1:])
    odd_axes = tuple(i for i, o in enumerate(owner) if o == 1)
    table = table.all(axis=odd_axes, keepdims=True)
    return table.any(axis=tuple(range(len(shape)))) if shape else table


def brute_force_winners(a: Arena) -> tuple:
    """Winner (0 Even, 1 Odd) of every position of ``a``."""
    n = len(a)
    mask, terminal = _outcomes(a.successors)
    prio = np.array(a.priority)
    owner = np.array(a.owner)
    top = np.zeros(mask.shape, dtype=np.int64) - 1
    for v in range(n):
        on = (mask >> v) & 1 == 1
        top = np.where(on, np.maximum(top, prio[v]), top)
    even = np.where(terminal >= 0, owner[np.maximum(terminal, 0)] == 1, top % 2 == 0)
    result = _reduce(even, a.successors, a.owner)
    return tuple(0 if w else 1 for w in result)


# -- exhaustive comparison over small arenas -------------------------------------------

@lru_cache(maxsize=None)
def digraph_classes(n: int) -> tuple:
    """One representative adjacency bitmask per isomorphism class of n-node digraphs.

    Self-loops allowed; bit ``i*n+j`` is the edge ``i -> j``.
    """
    codes = np.arange(1 << (n * n), dtype=np.int64)
    best = codes.copy()
    for perm in itertools.permutations(range(n)):
        out = np.zeros_like(codes)
        for i in range(n):
            for j in range(n):
                bit = (codes >> (i * n + j)) & 1
                out |= bit << (perm[i] * n + perm[j])
        best = np.minimum(best, out)
    return tuple(int(c) for c in np.unique(best))


def _successors(n: int, code: int) -> tuple:
    return tuple(tuple(j for j in range(n) if code >> (i * n + j) & 1) for i in range(n))


def compare_all_small(max_positions: int = 4, max_priority: int = 2) -> dict:
    """Zielonka against brute force on every arena up to the given size.

    Returns counts of compared arenas and positions plus the first mismatch.
    """
    arenas = positions = 0
    mismatch = None
    for n in range(1, max_positions + 1):
        owners = np.array(list(itertools.product((0, 1), repeat=n)), dtype=np.int64)
        prios = np.array(list(itertools.product(range(max_priority + 1), repeat=n)),
                         dtype=np.int64)
        # maximal priority on each cycle mask, per priority colouring
        masks = np.arange(1 << n)
        cycle_top = np.full((len(prios), 1 << n), -1, dtype=np.int64)
        for v in range(n):
            on = (masks >> v) & 1 == 1
            cycle_top = np.where(on[None, :], np.maximum(cycle_top, prios[:, v:v + 1]),
                                 cycle_top)
        all_owner = np.repeat(owners, len(prios), axis=0)
        all_prio = np.tile(prios, (len(owners), 1))
        for code in digraph_classes(n):
            succ = _successors(n, code)
            mask, terminal = _outcomes(succ)
            ptr = np.zeros(n + 1, dtype=np.int64)
            ptr[1:] = np.cumsum([len(s) for s in succ])
            flat = np.array([w for s in succ for w in s], dtype=np.int64)
            fast = solve_colourings(ptr, flat, all_owner, all_prio)
            cyc_even = cycle_top[:, mask] % 2 == 0          # (P, S, n)
            for oi, owner in enumerate(owners):
                term_even = np.where(terminal >= 0, owner[np.maximum(terminal, 0)] == 1, False)
                even = np.where(terminal[None] >= 0, term_even[None], cyc_even)
                even = np.moveaxis(even, 0, -1)                # (S, n, P)
                brute = _reduce(even, succ, owner)             # (n, P)
                expect = np.where(brute.T, 0, 1)               # (P, n)
                got = fast[oi * len(prios):(oi + 1) * len(prios)]
                if mismatch is None and not np.array_equal(expect, got):
                    row = int(np.nonzero((expect != got).any(axis=1))[0][0])
                    mismatch = {"successors": succ, "owner": tuple(owner.tolist()),
                                "priority": tuple(prios[row].tolist())}
                arenas += len(prios)
                positions += expect.size
    return {"arenas": arenas, "positions": positions, "mismatch": mismatch}


def random_arena(rng: random.Random, max_positions: int = 8, max_priority: int = 4,
                 max_out: int = 3) -> Arena:
    n = rng.randint(1, max_positions)
    succ = tuple(tuple(sorted(rng.sample(range(n), rng.randint(1, min(max_out, n)))))
                 for _ in range(n))
    return Arena(tuple(rng.randint(0, 1) for _ in range(n)),
                 tuple(rng.randint(0, max_priority) for _ in range(n)), succ,
                 initial=0, low=0, high=max_priority)
