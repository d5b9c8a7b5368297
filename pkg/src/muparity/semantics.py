"""Direct fixpoint semantics on finite structures.

Sets of states are Python ints used as bitsets. Fixpoints are computed by
plain Knaster-Tarski iteration from the bottom (mu) or top (nu) element.
This evaluator shares no code with the game construction and is used as an
oracle for it.
"""
from __future__ import annotations

from .formula import And, Bottom, Box, Diamond, Formula, Mu, Nu, Or, Prop, Top, Var
from .structures import Structure


class _Model:
    def __init__(self, t: Structure):
        self.n = len(t)
        self.full = (1 << self.n) - 1
        self.succ = t.succ
        self.labels = t.label_list

    def prop(self, name: str, positive: bool) -> int:
        mask = 0
        for i, lab in enumerate(self.labels):
            if (name in lab) == positive:
                mask |= 1 << i
        return mask

    def diamond(self, target: int) -> int:
        mask = 0
        for i, succ in enumerate(self.succ):
            if any(target >> j & 1 for j in succ):
                mask |= 1 << i
        return mask

    def box(self, target: int) -> int:
        mask = 0
        for i, succ in enumerate(self.succ):
            if all(target >> j & 1 for j in succ):
                mask |= 1 << i
        return mask


def denotation(t: Structure, f: Formula, env: dict | None = None) -> int:
    """Bitset of the states of ``t`` satisfying ``f`` (bit i is ``t.nodes[i]``)."""
    model = _Model(t)

    def ev(node: Formula, env: dict) -> int:
        if isinstance(node, Top):
            return model.full
        if isinstance(node, Bottom):
            return 0
        if isinstance(node, Prop):
            return model.prop(node.name, node.positive)
        if isinstance(node, Var):
            return env[node.name]
        if isinstance(node, And):
            return ev(node.left, env) & ev(node.right, env)
        if isinstance(node, Or):
            return ev(node.left, env) | ev(node.right, env)
        if isinstance(node, Diamond):
            return model.diamond(ev(node.body, env))
        if isinstance(node, Box):
            return model.box(ev(node.body, env))
        if isinstance(node, (Mu, Nu)):
            current = 0 if isinstance(node, Mu) else model.full
            while True:
                inner = dict(env)
                inner[node.var] = current
                nxt = ev(node.body, inner)
                if nxt == current:
                    return current
                current = nxt
        raise TypeError(f"not a formula: {node!r}")

    return ev(f, dict(env or {}))


def holds(t: Structure, f: Formula) -> bool:
    """Whether the root of ``t`` satisfies the sentence ``f``."""
    return bool(denotation(t, f) >> t.root_index & 1)
