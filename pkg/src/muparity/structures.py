"""Finite pointed labelled graphs standing for regular trees.

A structure is read as the tree obtained by unravelling it from the root.
Text format, one declaration per line::

    # comment
    node n0 [P,Q]
    node n1
    edge n0 n1
    edge n1 n1
    root n0
"""
from __future__ import annotations

import itertools
import random
import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterator, Mapping


class StructureError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Structure:
    nodes: tuple
    successors: Mapping[str, tuple]
    root: str
    labels: Mapping[str, frozenset]

    def __post_init__(self):
        if self.root not in self.successors:
            raise StructureError(f"root {self.root!r} is not a node")
        for src, dsts in self.successors.items():
            for dst in dsts:
                if dst not in self.successors:
                    raise StructureError(f"edge {src} -> {dst} leaves the node set")
        unreachable = set(self.nodes) - self.reachable()
        if unreachable:
            raise StructureError(f"unreachable node(s): {', '.join(sorted(unreachable))}")

    def reachable(self) -> set:
        seen = {self.root}
        queue = deque([self.root])
        while queue:
            u = queue.popleft()
            for v in self.successors[u]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
        return seen

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return (self.nodes == other.nodes and self.root == other.root
                and dict(self.successors) == dict(other.successors)
                and dict(self.labels) == dict(other.labels))

    __hash__ = None

    # integer views used by game construction
    @cached_property
    def position(self) -> dict:
        return {n: i for i, n in enumerate(self.nodes)}

    @cached_property
    def succ(self) -> tuple:
        pos = self.position
        return tuple(tuple(pos[v] for v in self.successors[n]) for n in self.nodes)

    @cached_property
    def label_list(self) -> tuple:
        return tuple(self.labels.get(n, frozenset()) for n in self.nodes)

    @property
    def root_index(self) -> int:
        return self.position[self.root]

    @cached_property
    def alphabet(self) -> frozenset:
        return frozenset().union(*self.labels.values()) if self.labels else frozenset()

    @classmethod
    def build(cls, labels, edges, root=0, names=None) -> "Structure":
        """Build from integer node indices: ``labels[i]`` and ``(i, j)`` edges."""
        n = len(labels)
        names = names or [f"n{i}" for i in range(n)]
        succ = {names[i]: [] for i in range(n)}
        for i, j in edges:
            succ[names[i]].append(names[j])
        return cls(tuple(names), {k: tuple(v) for k, v in succ.items()}, names[root],
                   {names[i]: frozenset(labels[i]) for i in range(n)})


_LINE = re.compile(r"^(node|edge|root)\s+(.*)$")
_ID = re.compile(r"^[A-Za-z0-9_]+$")


def load(text: str) -> Structure:
    nodes: list = []
    labels: dict = {}
    edges: list = []
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE.match(line)
        if not m:
            raise StructureError(f"line {lineno}: cannot parse {raw!r}")
        kind, rest = m.groups()
        if kind == "node":
            parts = rest.split(None, 1)
            ident = parts[0]
            if not _ID.match(ident):
                raise StructureError(f"line {lineno}: bad node id {ident!r}")
            if ident in labels:
                raise StructureError(f"line {lineno}: node {ident} declared twice")
            lab = frozenset()
            if len(parts) > 1:
                spec = parts[1].strip()
                if not (spec.startswith("[") and spec.endswith("]")):
                    raise StructureError(f"line {lineno}: labels must look like [a,b]")
                lab = frozenset(x.strip() for x in spec[1:-1].split(",") if x.strip())
            nodes.append(ident)
            labels[ident] = lab
        elif kind == "edge":
            parts = rest.split()
            if len(parts) != 2:
                raise StructureError(f"line {lineno}: edge needs two ids")
            edges.append((lineno, parts[0], parts[1]))
        else:
            if root is not None:
                raise StructureError(f"line {lineno}: root declared twice")
            root = rest.strip()
    if root is None:
        raise StructureError("missing root declaration")
    if root not in labels:
        raise StructureError(f"root {root!r} is not a declared node")
    succ: dict = {n: [] for n in nodes}
    for lineno, src, dst in edges:
        for end in (src, dst):
            if end not in labels:
                raise StructureError(f"line {lineno}: undeclared node {end!r}")
        if dst not in succ[src]:
            succ[src].append(dst)
    return Structure(tuple(nodes), {k: tuple(v) for k, v in succ.items()}, root, labels)


def store(t: Structure) -> str:
    lines = []
    for n in t.nodes:
        lab = ",".join(sorted(t.labels.get(n, ())))
        lines.append(f"node {n} [{lab}]")
    for n in t.nodes:
        for m in t.successors[n]:
            lines.append(f"edge {n} {m}")
    lines.append(f"root {t.root}")
    return "\n".join(lines) + "\n"


def truncate(t: Structure, depth: int) -> Structure:
    """Unravelling of ``t`` cut below ``depth``: a finite tree of height <= depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    labels = [t.labels.get(t.root, frozenset())]
    edges = []
    queue = deque([(t.root, 0, 0)])
    while queue:
        node, d, me = queue.popleft()
        if d == depth:
            continue
        for child in t.successors[node]:
            labels.append(t.labels.get(child, frozenset()))
            new = len(labels) - 1
            edges.append((me, new))
            queue.append((child, d + 1, new))
    return Structure.build(labels, edges)


def is_tree(t: Structure) -> bool:
    indegree = {n: 0 for n in t.nodes}
    for n in t.nodes:
        for m in t.successors[n]:
            indegree[m] += 1
    return indegree[t.root] == 0 and all(v == 1 for k, v in indegree.items() if k != t.root)


def height(t: Structure) -> int:
    """Height of a finite tree (number of edges on its longest branch)."""
    if not is_tree(t):
        raise StructureError("not a finite tree")
    best = 0
    stack = [(t.root, 0)]
    while stack:
        n, d = stack.pop()
        best = max(best, d)
        stack.extend((m, d + 1) for m in t.successors[n])
    return best


# -- enumeration ---------------------------------------------------------------

def _reachable_mask(n: int, adj: int) -> bool:
    seen = 1
    frontier = 1
    while frontier:
        nxt = 0
        for i in range(n):
            if frontier >> i & 1:
                nxt |= (adj >> (i * n)) & ((1 << n) - 1)
        frontier = nxt & ~seen
        seen |= nxt
    return seen == (1 << n) - 1


@lru_cache(maxsize=None)
def _shapes(n: int) -> tuple:
    """(edge masks reachable from node 0, permutation tables fixing node 0)."""
    perms = [(0,) + p for p in itertools.permutations(range(1, n))]
    masks = [m for m in range(1 << (n * n)) if _reachable_mask(n, m)]
    tables = []
    for p in perms:
        # bit (i, j) of the permuted graph comes from bit (p[i], p[j]) of the original
        src = [p[i] * n + p[j] for i in range(n) for j in range(n)]
        tables.append((p, src))
    return masks, tables


def _permute_mask(mask: int, src: list) -> int:
    out = 0
    for k, s in enumerate(src):
        if mask >> s & 1:
            out |= 1 << k
    return out


@lru_cache(maxsize=None)
def _enumerate(max_nodes: int, alphabet: tuple) -> tuple:
    subsets = [frozenset(c) for r in range(len(alphabet) + 1)
               for c in itertools.combinations(alphabet, r)]
    result = []
    for n in range(1, max_nodes + 1):
        masks, tables = _shapes(n)
        permuted = {m: [_permute_mask(m, src) for _, src in tables] for m in masks}
        seen = set()
        for labeling in itertools.product(range(len(subsets)), repeat=n):
            for m in masks:
                key = min((tuple(labeling[p[i]] for i in range(n)), pm)
                          for (p, _), pm in zip(tables, permuted[m]))
                if key in seen:
                    continue
                seen.add(key)
                lab, em = key
                edges = [(i, j) for i in range(n) for j in range(n) if em >> (i * n + j) & 1]
                result.append(Structure.build([subsets[x] for x in lab], edges))
    return tuple(result)


def enumerate_structures(max_nodes: int, alphabet) -> Iterator[Structure]:
    """All structures with at most ``max_nodes`` nodes over ``alphabet``, up to isomorphism.

    Every node is reachable from the root. Each isomorphism class appears
    once, in its canonical numbering (least labelling/edge code over all
    renumberings fixing the root). Practical up to 3 nodes with two
    propositions or 4 nodes with one.
    """
    if max_nodes <= 0:
        return iter(())
    return iter(_enumerate(max_nodes, tuple(sorted(alphabet))))


def canonical_key(t: Structure, alphabet=None) -> tuple:
    """Isomorphism-invariant key, optionally projecting labels onto ``alphabet``."""
    n = len(t)
    keep = None if alphabet is None else frozenset(alphabet)
    labels = [tuple(sorted(l if keep is None else l & keep)) for l in t.label_list]
    succ = t.succ
    r = t.root_index
    others = [i for i in range(n) if i != r]
    if n > 7:
        raise ValueError("canonical keys are only computed for small structures")
    best = None
    for perm in itertools.permutations(others):
        order = (r,) + perm
        where = {v: k for k, v in enumerate(order)}
        key = (tuple(labels[v] for v in order),
               tuple(tuple(sorted(where[w] for w in succ[v])) for v in order))
        if best is None or key < best:
            best = key
    return best


def sample(max_nodes: int, alphabet, seed: int, count: int) -> Iterator[Structure]:
    """Seeded random structures with 1..max_nodes nodes, all reachable from the root."""
    rng = random.Random(seed)
    alphabet = sorted(alphabet)
    for _ in range(count):
        n = rng.randint(1, max_nodes)
        labels = [{p for p in alphabet if rng.random() < 0.5} for _ in range(n)]
        edges = set()
        for i in range(1, n):
            edges.add((rng.randrange(i), i))
        for i in range(n):
            for j in range(n):
                if rng.random() < 1.2 / n:
                    edges.add((i, j))
        yield Structure.build(labels, sorted(edges))
