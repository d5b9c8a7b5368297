"""Priority assignments, indices and alternation classes."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .formula import Fixpoint, Formula, Mu, dag_nodes, free_variable_map


@dataclass(frozen=True)
class PriorityAssignment:
    """Map from fixpoint variables to priorities with co-domain ``{low..high}``.

    A formula without fixpoints gets the empty assignment (``low > high``).
    """

    priorities: Mapping[str, int] = field(default_factory=dict)
    low: int = 0
    high: int = -1

    def __getitem__(self, var: str) -> int:
        return self.priorities[var]

    @property
    def index(self) -> tuple:
        return tuple(range(self.low, self.high + 1))

    @property
    def minimum(self) -> int:
        """Priority given to non-variable positions in model-checking games."""
        return self.low if self.index else 0

    @classmethod
    def of(cls, priorities: Mapping[str, int]) -> "PriorityAssignment":
        """Assignment whose co-domain is the tightest admissible interval."""
        if not priorities:
            return cls({}, 0, -1)
        lo, hi = min(priorities.values()), max(priorities.values())
        return cls(dict(priorities), lo % 2 if lo > 1 else lo, hi)


def _fixpoints(f: Formula) -> list:
    return [n for n in dag_nodes(f) if isinstance(n, Fixpoint)]


def dependencies(f: Formula) -> dict:
    """For each bound variable Y, the variables X free in the binding formula of Y."""
    deps = {}
    free = free_variable_map(f)
    for node in _fixpoints(f):
        deps[node.var] = free[id(node.body)] - {node.var}
    return deps


def violations(f: Formula, assignment: PriorityAssignment) -> list:
    """Human-readable reasons why ``assignment`` is not order preserving for ``f``."""
    problems = []
    for node in _fixpoints(f):
        p = assignment.priorities.get(node.var)
        if p is None:
            problems.append(f"{node.var} has no priority")
            continue
        if (p % 2 == 1) != isinstance(node, Mu):
            problems.append(f"{node.var} has priority {p} of the wrong parity")
        if not assignment.low <= p <= assignment.high:
            problems.append(f"{node.var} priority {p} outside {{{assignment.low}..{assignment.high}}}")
    for y, xs in dependencies(f).items():
        for x in xs:
            px, py = assignment.priorities.get(x), assignment.priorities.get(y)
            if px is not None and py is not None and px < py:
                problems.append(f"{x} is free in the binding of {y} but {px} < {py}")
    return problems


def is_order_preserving(f: Formula, assignment: PriorityAssignment) -> bool:
    return not violations(f, assignment)


def least_assignment(f: Formula, base: int) -> dict:
    """Pointwise least order-preserving priorities that are all >= ``base``.

    Binders are handled innermost first: the constraints on X only mention
    variables bound inside the scope of X.
    """
    result: dict = {}
    order = _fixpoints(f)   # children before parents, so innermost first
    deps = dependencies(f)
    # constraints: Omega(X) >= Omega(Y) whenever X free in body of Y
    needs: dict = {n.var: [] for n in order}
    for y, xs in deps.items():
        for x in xs:
            if x in needs:
                needs[x].append(y)
    for node in order:
        floor = base
        for y in needs[node.var]:
            floor = max(floor, result[y])
        want = 1 if isinstance(node, Mu) else 0
        if floor % 2 != want:
            floor += 1
        result[node.var] = floor
    return result


def assign_priorities(f: Formula, target_parity: str | None = None) -> PriorityAssignment:
    """Minimal-interval order-preserving priority assignment.

    ``target_parity`` forces the least priority of the co-domain to be
    ``"even"`` (0) or ``"odd"`` (1); by default both are tried and the
    narrower interval wins, ties going to the lower priorities.
    """
    if not _fixpoints(f):
        return PriorityAssignment({}, 0, -1)
    bases = {"even": (0,), "odd": (1,), None: (0, 1)}[target_parity]
    best = None
    for base in bases:
        prio = least_assignment(f, base)
        lo = min(prio.values())
        if target_parity is not None:
            lo = base
        hi = max(prio.values())
        cand = PriorityAssignment(prio, lo, hi)
        if best is None or (hi - lo) < (best.high - best.low):
            best = cand
    return best


def fits_index(f: Formula, low: int, high: int) -> bool:
    """Whether ``f`` has an order-preserving assignment into ``{low..high}``."""
    if not _fixpoints(f):
        return True
    prio = least_assignment(f, low)
    return max(prio.values()) <= high


@dataclass(frozen=True)
class IndexClass:
    """``ML``, ``Sigma_i`` or ``Pi_i`` together with its priority interval."""

    name: str
    level: int
    low: int = 0
    high: int = -1

    @property
    def interval(self) -> tuple:
        return tuple(range(self.low, self.high + 1))

    def __str__(self) -> str:
        if self.name == "ML":
            return "ML"
        return f"{'Σ' if self.name == 'Sigma' else 'Π'}{self.level}"


def classify_interval(low: int, high: int) -> IndexClass:
    if high < low:
        return IndexClass("ML", 0)
    if low not in (0, 1):
        raise ValueError("an index starts at 0 or 1")
    if low == 0:
        level = high + 1
        # {0..i-1}: Sigma_i for even i, Pi_i for odd i
        name = "Sigma" if level % 2 == 0 else "Pi"
    else:
        level = high
        # {1..i}: Pi_i for even i, Sigma_i for odd i
        name = "Pi" if level % 2 == 0 else "Sigma"
    return IndexClass(name, level, low, high)


def index_class(f: Formula) -> IndexClass:
    a = assign_priorities(f)
    return classify_interval(a.low, a.high)


def format_index(low: int, high: int) -> str:
    return "{" + ",".join(str(i) for i in range(low, high + 1)) + "}"
