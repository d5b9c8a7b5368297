"""Parity game arenas, model-checking games and the encoding of arenas as structures."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from numba import njit

from .alternation import PriorityAssignment, assign_priorities
from .formula import Formula, ParseTree, to_text
from .structures import Structure

EVEN, ODD = 0, 1


class ArenaError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Arena:
    """A finite parity game.

    Positions are ``0..n-1``. A position without successors is terminal and
    its owner loses there. ``modal`` marks positions of modal subformulas and
    ``variable`` names the fixpoint variable of variable positions; both are
    used when the arena is encoded as a structure. Model-checking games keep
    their construction data in ``source`` to answer ``provenance``.
    """

    owner: tuple
    priority: tuple
    successors: tuple
    initial: int = 0
    names: tuple = ()
    descriptions: tuple = ()
    modal: tuple = ()
    variable: tuple = ()
    low: int | None = None
    high: int | None = None
    source: object = field(default=None, repr=False)

    def __post_init__(self):
        n = len(self.owner)
        if len(self.priority) != n or len(self.successors) != n:
            raise ArenaError("owner, priority and successors must have equal length")
        if not 0 <= self.initial < n:
            raise ArenaError("initial position out of range")
        for v, succ in enumerate(self.successors):
            for w in succ:
                if not 0 <= w < n:
                    raise ArenaError(f"edge {v} -> {w} out of range")
        for name, default in (("names", lambda i: str(i)), ("modal", lambda i: False),
                              ("variable", lambda i: None)):
            if not getattr(self, name):
                object.__setattr__(self, name, tuple(default(i) for i in range(n)))
        if self.low is None:
            lo = min(self.priority, default=0)
            object.__setattr__(self, "low", lo if lo <= 1 else lo % 2)
        if self.high is None:
            object.__setattr__(self, "high", max(max(self.priority, default=0), self.low))
        if any(p < self.low or p > self.high for p in self.priority):
            raise ArenaError("priority outside the declared index")

    def __len__(self) -> int:
        return len(self.owner)

    def description(self, v: int) -> str:
        if self.descriptions:
            return self.descriptions[v]
        if self.source is not None:
            tree, states, keys, nf = self.source
            s, i = divmod(keys[v], nf)
            return f"({states[s]}, {_short(tree, i)})"
        return ""

    def provenance(self, v: int) -> tuple | None:
        """``(state, subformula id)`` of a model-checking game position."""
        if self.source is not None:
            _, states, keys, nf = self.source
            s, i = divmod(keys[v], nf)
            return states[s], i
        return None

    @property
    def index(self) -> tuple:
        return tuple(range(self.low, self.high + 1))

    @cached_property
    def arrays(self) -> tuple:
        """``(owner, priority, succ_ptr, succ)`` as int64 arrays (CSR successors)."""
        owner = np.asarray(self.owner, dtype=np.int64)
        prio = np.asarray(self.priority, dtype=np.int64)
        ptr = np.zeros(len(self) + 1, dtype=np.int64)
        ptr[1:] = np.cumsum([len(s) for s in self.successors])
        succ = np.fromiter((w for s in self.successors for w in s), dtype=np.int64,
                           count=int(ptr[-1]))
        return owner, prio, ptr, succ

    def position(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ArenaError(f"unknown position {name!r}") from None

    def reachable(self, start: int | None = None) -> list:
        start = self.initial if start is None else start
        seen = {start}
        order = [start]
        queue = deque(order)
        while queue:
            v = queue.popleft()
            for w in self.successors[v]:
                if w not in seen:
                    seen.add(w)
                    order.append(w)
                    queue.append(w)
        return order


# -- model-checking games -------------------------------------------------------

_KIND_CODE = {"tt": 0, "ff": 1, "prop": 2, "var": 3, "and": 4, "or": 5, "dia": 6, "box": 7,
              "mu": 8, "nu": 9}


def _short(tree: ParseTree, i: int) -> str:
    """Readable name of parse node ``i``: atoms in full, other nodes by kind and id."""
    if tree.kinds[i] in ("tt", "ff", "prop", "var"):
        return to_text(tree.nodes[i])
    node = tree.nodes[i]
    if tree.kinds[i] in ("mu", "nu"):
        return f"{tree.kinds[i]} {node.var}#{i}"
    return f"{tree.kinds[i]}#{i}"


def mc_game(t: Structure, f: Formula | ParseTree,
            omega: PriorityAssignment | None = None) -> Arena:
    """The model-checking game of ``t`` and the guarded sentence ``f``.

    Only positions reachable from ``(root, f)`` are built. Positions are
    numbered in breadth-first order from the initial position.
    """
    tree = f if isinstance(f, ParseTree) else ParseTree(f)
    if not tree.guarded:
        raise ArenaError("formula is not guarded")
    if omega is None:
        omega = assign_priorities(tree.formula)
    owner, prio, ptr, succ, keys = mc_arrays(t, tree, omega)
    nf = len(tree)
    nodes = keys % nf
    kinds = _tree_arrays(tree)[0]
    node_var = [n.name if k == "var" else None for n, k in zip(tree.nodes, tree.kinds)]
    succ_list = succ.tolist()
    bounds = ptr.tolist()
    low, high = (omega.low, omega.high) if omega.index else (0, 0)
    arena = Arena(
        owner=tuple(owner.tolist()), priority=tuple(prio.tolist()),
        successors=tuple(tuple(succ_list[bounds[v]:bounds[v + 1]]) for v in range(len(keys))),
        initial=0,
        names=tuple(f"v{i}" for i in range(len(keys))),
        modal=tuple(((kinds[nodes] == 6) | (kinds[nodes] == 7)).tolist()),
        variable=tuple(node_var[i] for i in nodes.tolist()),
        low=low, high=high, source=(tree, t.nodes, keys.tolist(), nf),
    )
    arena.__dict__["arrays"] = (owner, prio, ptr, succ)
    return arena


@njit(cache=True)
def _mc_kernel(root_key, nf, s_ptr, s_succ, kinds, k_ptr, k_succ, n_states):
    total = n_states * nf
    index = np.full(total, -1, np.int64)
    order = np.empty(total, np.int64)
    ptr = np.zeros(total + 1, np.int64)
    max_deg = 2
    for s in range(n_states):
        max_deg = max(max_deg, s_ptr[s + 1] - s_ptr[s])
    succ = np.empty(total * max_deg, np.int64)
    index[root_key] = 0
    order[0] = root_key
    count = 1
    edges = 0
    head = 0
    while head < count:
        key = order[head]
        s = key // nf
        i = key % nf
        k = kinds[i]
        if k == 6 or k == 7:
            c = k_succ[k_ptr[i]]
            for e in range(s_ptr[s], s_ptr[s + 1]):
                key2 = s_succ[e] * nf + c
                if index[key2] < 0:
                    index[key2] = count
                    order[count] = key2
                    count += 1
                succ[edges] = index[key2]
                edges += 1
        elif k > 2:
            for e in range(k_ptr[i], k_ptr[i + 1]):
                key2 = s * nf + k_succ[e]
                if index[key2] < 0:
                    index[key2] = count
                    order[count] = key2
                    count += 1
                succ[edges] = index[key2]
                edges += 1
        head += 1
        ptr[head] = edges
    return order[:count].copy(), ptr[:count + 1].copy(), succ[:edges].copy()


def _tree_arrays(tree: ParseTree) -> tuple:
    cached = tree.__dict__.get("_mc_arrays")
    if cached is None:
        kinds = np.array([_KIND_CODE[k] for k in tree.kinds], dtype=np.int64)
        k_ptr = np.zeros(len(tree) + 1, dtype=np.int64)
        k_ptr[1:] = np.cumsum([len(c) for c in tree.children])
        k_succ = np.array([c for cs in tree.children for c in cs], dtype=np.int64)
        props = sorted({n.name for n, k in zip(tree.nodes, tree.kinds) if k == "prop"})
        where = {name: j for j, name in enumerate(props)}
        # per node: proposition column (or -1) and polarity of the literal
        lit_col = np.array([where[n.name] if k == "prop" else -1
                            for n, k in zip(tree.nodes, tree.kinds)], dtype=np.int64)
        lit_pos = np.array([k == "prop" and n.positive for n, k in zip(tree.nodes, tree.kinds)],
                           dtype=np.bool_)
        cached = (kinds, k_ptr, k_succ, (tuple(props), lit_col, lit_pos))
        tree.__dict__["_mc_arrays"] = cached
    return cached


def _structure_arrays(t: Structure) -> tuple:
    cached = t.__dict__.get("_mc_arrays")
    if cached is None:
        s_ptr = np.zeros(len(t) + 1, dtype=np.int64)
        s_ptr[1:] = np.cumsum([len(x) for x in t.succ])
        s_succ = np.array([w for x in t.succ for w in x], dtype=np.int64)
        cached = (s_ptr, s_succ)
        t.__dict__["_mc_arrays"] = cached
    return cached


def _truth(t: Structure, props: tuple) -> np.ndarray:
    """Boolean matrix ``[state, j]``: whether ``props[j]`` labels the state."""
    cache = t.__dict__.setdefault("_truth", {})
    if props not in cache:
        cache[props] = np.array([[p in lab for p in props] for lab in t.label_list],
                                dtype=np.bool_).reshape(len(t), len(props))
    return cache[props]


def _node_priorities(tree: ParseTree, omega: PriorityAssignment) -> np.ndarray:
    cache = tree.__dict__.setdefault("_node_prio", {})
    key = id(omega)
    if key not in cache:
        base = omega.minimum
        table = np.array([omega[n.name] if k == "var" else base
                          for n, k in zip(tree.nodes, tree.kinds)], dtype=np.int64)
        cache[key] = (omega, table)   # keep omega alive so its id stays unique
    return cache[key][1]


def mc_arrays(t: Structure, tree: ParseTree, omega: PriorityAssignment) -> tuple:
    """Model-checking game as arrays ``(owner, priority, succ_ptr, succ, keys)``.

    ``keys[v] = state * len(tree) + node`` identifies position ``v``.
    """
    kinds, k_ptr, k_succ, (props, lit_col, lit_pos) = _tree_arrays(tree)
    s_ptr, s_succ = _structure_arrays(t)
    nf = len(tree)
    keys, ptr, succ = _mc_kernel(t.root_index * nf, nf, s_ptr, s_succ, kinds, k_ptr, k_succ,
                                 len(t))
    nodes = keys % nf
    states = keys // nf
    node_kind = kinds[nodes]
    # Odd owns conjunctions, boxes and tt; literals are decided below
    owner = np.where((node_kind == 0) | (node_kind == 4) | (node_kind == 7), ODD, EVEN)
    if props:
        here = node_kind == 2
        truth = _truth(t, props)[states[here], lit_col[nodes[here]]]
        owner[here] = np.where(truth == lit_pos[nodes[here]], ODD, EVEN)
    return owner.astype(np.int64), _node_priorities(tree, omega)[nodes], ptr, succ, keys


# -- encoding ---------------------------------------------------------------------

def position_labels(a: Arena, v: int, with_provenance: bool = False) -> frozenset:
    labels = {f"{'E' if a.owner[v] == EVEN else 'O'}_{a.priority[v]}"}
    if a.modal[v]:
        labels.add("M")
    if with_provenance and a.variable[v] is not None:
        labels.add(f"E_{a.variable[v]}")
    return frozenset(labels)


def encode(a: Arena, with_provenance: bool = False) -> Structure:
    """The arena as a labelled structure rooted at the initial position.

    Positions unreachable from the initial position are dropped.
    """
    keep = a.reachable()
    names = [a.names[v] for v in keep]
    succ = {a.names[v]: tuple(a.names[w] for w in a.successors[v]) for v in keep}
    labels = {a.names[v]: position_labels(a, v, with_provenance) for v in keep}
    return Structure(tuple(names), succ, a.names[a.initial], labels)


def winner(a: Arena) -> int:
    from .solver import solve
    return solve(a).winner[a.initial]


def arena_eq_winner(a: Arena, b: Arena) -> bool:
    """Whether the same player wins both arenas from their initial positions."""
    return winner(a) == winner(b)


# -- text format --------------------------------------------------------------------

def _label(a: Arena, v: int) -> str:
    tags = [a.description(v)]
    if a.modal[v]:
        tags.append("M")
    if a.variable[v] is not None:
        tags.append(f"V={a.variable[v]}")
    return ";".join(tags)


def store_arena(a: Arena) -> str:
    lines = [f"init {a.names[a.initial]}"]
    for v in range(len(a)):
        succ = ",".join(a.names[w] for w in a.successors[v]) or "-"
        label = _label(a, v).replace('"', "'")
        lines.append(f'{a.names[v]} {a.priority[v]} {a.owner[v]} {succ} "{label}"')
    return "\n".join(lines) + "\n"


_ARENA_LINE = re.compile(r'^(\S+)\s+(\d+)\s+([01])\s+(\S+)(?:\s+"([^"]*)")?\s*;?$')


def load_arena(text: str) -> Arena:
    init = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("init "):
            if init is not None:
                raise ArenaError(f"line {lineno}: duplicate init")
            init = line.split(None, 1)[1].strip()
            continue
        m = _ARENA_LINE.match(line)
        if not m:
            raise ArenaError(f"line {lineno}: cannot parse {raw!r}")
        rows.append((lineno,) + m.groups())
    if init is None:
        raise ArenaError("missing init line")
    where = {}
    for k, row in enumerate(rows):
        if row[1] in where:
            raise ArenaError(f"line {row[0]}: duplicate position {row[1]}")
        where[row[1]] = k
    if init not in where:
        raise ArenaError(f"initial position {init!r} not declared")
    owner, prio, succ, desc, modal, var = [], [], [], [], [], []
    for lineno, name, p, o, s, label in rows:
        targets = [] if s == "-" else s.split(",")
        for w in targets:
            if w not in where:
                raise ArenaError(f"line {lineno}: unknown successor {w!r}")
        owner.append(int(o))
        prio.append(int(p))
        succ.append(tuple(where[w] for w in targets))
        parts = (label or "").split(";")
        desc.append(parts[0])
        modal.append("M" in parts[1:])
        v = [x[2:] for x in parts[1:] if x.startswith("V=")]
        var.append(v[0] if v else None)
    return Arena(tuple(owner), tuple(prio), tuple(succ), where[init],
                 names=tuple(r[1] for r in rows), descriptions=tuple(desc),
                 modal=tuple(modal), variable=tuple(var))


__all__ = ["Arena", "ArenaError", "EVEN", "ODD", "mc_game", "encode", "position_labels",
           "winner", "arena_eq_winner", "store_arena", "load_arena"]
