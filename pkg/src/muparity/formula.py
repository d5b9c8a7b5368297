"""Modal mu-calculus syntax: AST nodes, parsing, printing and parse trees.

Formulas are immutable values built from the node classes below. Negation
only ever applies to propositions, so a negated proposition is a ``Prop``
with ``positive=False``.

Text syntax::

    tt  ff  P  ~P  f & g  f | g  <>f  []f  mu X. f  nu X. f  (f)

``~`` binds tightest, then the modalities, then ``&``, then ``|``. A
fixpoint body extends as far right as possible, so ``mu X. <>X & C | B``
is ``mu X. (((<>X) & C) | B)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Union


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class Prop:
    name: str
    positive: bool = True


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Diamond:
    body: "Formula"


@dataclass(frozen=True)
class Box:
    body: "Formula"


@dataclass(frozen=True)
class Mu:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class Nu:
    var: str
    body: "Formula"


Formula = Union[Top, Bottom, Prop, Var, And, Or, Diamond, Box, Mu, Nu]
Fixpoint = (Mu, Nu)
Modal = (Diamond, Box)

TOP = Top()
BOTTOM = Bottom()


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnboundVariableError(ValueError):
    pass


# -- smart constructors ------------------------------------------------------

def conj(left: Formula, right: Formula) -> Formula:
    """Conjunction with unit/zero laws for tt and ff applied."""
    if isinstance(left, Bottom) or isinstance(right, Bottom):
        return BOTTOM
    if isinstance(left, Top):
        return right
    if isinstance(right, Top):
        return left
    return And(left, right)


def disj(left: Formula, right: Formula) -> Formula:
    if isinstance(left, Top) or isinstance(right, Top):
        return TOP
    if isinstance(left, Bottom):
        return right
    if isinstance(right, Bottom):
        return left
    return Or(left, right)


def big_and(parts) -> Formula:
    result: Formula | None = None
    for part in parts:
        result = part if result is None else And(result, part)
    return TOP if result is None else result


def big_or(parts) -> Formula:
    result: Formula | None = None
    for part in parts:
        result = part if result is None else Or(result, part)
    return BOTTOM if result is None else result


def negate_literal(f: Formula) -> Formula:
    if isinstance(f, Prop):
        return Prop(f.name, not f.positive)
    if isinstance(f, Top):
        return BOTTOM
    if isinstance(f, Bottom):
        return TOP
    raise TypeError(f"not a literal: {f!r}")


# -- traversal helpers -------------------------------------------------------

def children(f: Formula) -> tuple:
    if isinstance(f, (And, Or)):
        return (f.left, f.right)
    if isinstance(f, (Diamond, Box, Mu, Nu)):
        return (f.body,)
    return ()


def subformulas(f: Formula) -> Iterator[Formula]:
    """Yield every node of ``f`` in preorder (repeats included)."""
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def size(f: Formula) -> int:
    """Number of nodes of the syntax tree (shared objects counted per occurrence)."""
    memo: dict = {}
    for node in dag_nodes(f):
        memo[id(node)] = 1 + sum(memo[id(c)] for c in children(node))
    return memo[id(f)]


def propositions(f: Formula) -> frozenset:
    return frozenset(n.name for n in subformulas(f) if isinstance(n, Prop))


def bound_variables(f: Formula) -> list:
    return [n.var for n in subformulas(f) if isinstance(n, Fixpoint)]


def dag_nodes(f: Formula) -> list:
    """Every distinct node object of ``f`` once, children before parents."""
    seen: set = set()
    order: list = []
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            order.append(node)
            continue
        if id(node) in seen:
            continue
        seen.add(id(node))
        stack.append((node, True))
        stack.extend((c, False) for c in reversed(children(node)))
    return order


def dag_size(f: Formula) -> int:
    """Number of distinct node objects; ``size`` counts the unfolded tree."""
    return len(dag_nodes(f))


def free_variable_map(f: Formula) -> dict:
    """``id(node) -> free variables`` for every node object of ``f``."""
    free: dict = {}
    for node in dag_nodes(f):
        if isinstance(node, Var):
            free[id(node)] = frozenset((node.name,))
        elif isinstance(node, Fixpoint):
            free[id(node)] = free[id(node.body)] - {node.var}
        else:
            free[id(node)] = frozenset().union(*(free[id(c)] for c in children(node)))
    return free


def free_variables(f: Formula) -> frozenset:
    return free_variable_map(f)[id(f)]


def is_sentence(f: Formula) -> bool:
    return not free_variables(f)


def modal_depth(f: Formula) -> int:
    if isinstance(f, Modal):
        return 1 + modal_depth(f.body)
    return max((modal_depth(c) for c in children(f)), default=0)


def substitute(f: Formula, name: str, replacement: Formula) -> Formula:
    """Replace free occurrences of variable ``name``; no capture checks."""
    if isinstance(f, Var):
        return replacement if f.name == name else f
    if isinstance(f, Fixpoint):
        if f.var == name:
            return f
        return type(f)(f.var, substitute(f.body, name, replacement))
    if isinstance(f, (And, Or)):
        return type(f)(substitute(f.left, name, replacement),
                       substitute(f.right, name, replacement))
    if isinstance(f, Modal):
        return type(f)(substitute(f.body, name, replacement))
    return f


def rename_apart(f: Formula) -> Formula:
    """Give every binder a distinct name (X, X1, X2, ...).

    Names already used by propositions or by other binders are avoided, so
    printing the result never captures anything.
    """
    taken = set(propositions(f)) | {n.name for n in subformulas(f) if isinstance(n, Var)}
    used: set = set()

    def fresh(base: str) -> str:
        if base not in used:
            used.add(base)
            return base
        root = base.rstrip("0123456789") or base
        k = 1
        while f"{root}{k}" in used or f"{root}{k}" in taken:
            k += 1
        used.add(f"{root}{k}")
        return f"{root}{k}"

    def go(node: Formula, scope: dict) -> Formula:
        if isinstance(node, Var):
            return Var(scope.get(node.name, node.name))
        if isinstance(node, Fixpoint):
            new = fresh(node.var)
            return type(node)(new, go(node.body, {**scope, node.var: new}))
        if isinstance(node, (And, Or)):
            return type(node)(go(node.left, scope), go(node.right, scope))
        if isinstance(node, Modal):
            return type(node)(go(node.body, scope))
        return node

    return go(f, {})


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<>)|(\[\])|([A-Za-z_][A-Za-z0-9_]*)|([()&|~.]))")
KEYWORDS = {"mu", "nu", "tt", "ff"}


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastindex)
        tokens.append((m.group(m.lastindex), start))
        pos = m.end()
    tokens.append(("<end>", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0
        idents = {tok for tok, _ in self.tokens if re.match(r"[A-Za-z_]", tok)}
        self.taken = idents - KEYWORDS
        self.used: set = set()

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self, expected: str | None = None) -> str:
        tok, pos = self.tokens[self.i]
        if expected is not None and tok != expected:
            raise FormulaSyntaxError(f"expected {expected!r}, found {tok!r}", pos)
        self.i += 1
        return tok

    def fresh(self, name: str) -> str:
        if name not in self.used:
            self.used.add(name)
            return name
        root = name.rstrip("0123456789") or name
        k = 1
        while f"{root}{k}" in self.used or f"{root}{k}" in self.taken:
            k += 1
        self.used.add(f"{root}{k}")
        return f"{root}{k}"

    def parse(self) -> Formula:
        f = self.disjunction({})
        if self.peek() != "<end>":
            raise FormulaSyntaxError(f"unexpected {self.peek()!r}", self.pos())
        return f

    def disjunction(self, scope: dict) -> Formula:
        f = self.conjunction(scope)
        while self.peek() == "|":
            self.take()
            f = Or(f, self.conjunction(scope))
        return f

    def conjunction(self, scope: dict) -> Formula:
        f = self.unary(scope)
        while self.peek() == "&":
            self.take()
            f = And(f, self.unary(scope))
        return f

    def unary(self, scope: dict) -> Formula:
        tok = self.peek()
        if tok == "~":
            self.take()
            pos = self.pos()
            name = self.take()
            if not re.match(r"[A-Za-z_]", name) or name in KEYWORDS:
                raise FormulaSyntaxError("negation applies to propositions only", pos)
            if name in scope:
                raise FormulaSyntaxError(f"cannot negate fixpoint variable {name}", pos)
            return Prop(name, False)
        if tok == "<>":
            self.take()
            return Diamond(self.unary(scope))
        if tok == "[]":
            self.take()
            return Box(self.unary(scope))
        if tok in ("mu", "nu"):
            self.take()
            pos = self.pos()
            name = self.take()
            if not re.match(r"[A-Za-z_]", name) or name in KEYWORDS:
                raise FormulaSyntaxError("expected a variable name", pos)
            self.take(".")
            new = self.fresh(name)
            body = self.disjunction({**scope, name: new})
            return Mu(new, body) if tok == "mu" else Nu(new, body)
        return self.atom(scope)

    def atom(self, scope: dict) -> Formula:
        tok, pos = self.tokens[self.i]
        if tok == "(":
            self.take()
            f = self.disjunction(scope)
            self.take(")")
            return f
        if tok == "tt":
            self.take()
            return TOP
        if tok == "ff":
            self.take()
            return BOTTOM
        if re.match(r"[A-Za-z_]", tok) and tok not in KEYWORDS:
            self.take()
            if tok in scope:
                return Var(scope[tok])
            return Prop(tok)
        raise FormulaSyntaxError(f"unexpected {tok!r}", pos)


def parse(text: str) -> Formula:
    """Parse formula text; binders come back renamed apart.

    Identifiers not bound by an enclosing fixpoint are propositions, so any
    parsed formula is a sentence.
    """
    return _Parser(text).parse()


def parse_sentence(text: str, variables=()) -> Formula:
    """Parse, rejecting identifiers listed in ``variables`` that end up free.

    Useful when a caller knows which names are meant as fixpoint variables.
    """
    f = parse(text)
    free = propositions(f) & set(variables)
    if free:
        raise UnboundVariableError(f"free fixpoint variable(s): {', '.join(sorted(free))}")
    return f


# -- printing ----------------------------------------------------------------

_PREC = {Or: 1, And: 2}


def to_text(f: Formula) -> str:
    """Print ``f`` so that ``parse(to_text(f)) == f`` for renamed-apart sentences."""
    out: list = []

    def emit(node: Formula, tail: bool) -> None:
        if isinstance(node, Top):
            out.append("tt")
        elif isinstance(node, Bottom):
            out.append("ff")
        elif isinstance(node, Prop):
            out.append(node.name if node.positive else "~" + node.name)
        elif isinstance(node, Var):
            out.append(node.name)
        elif isinstance(node, Diamond):
            out.append("<>")
            emit_operand(node.body, tail)
        elif isinstance(node, Box):
            out.append("[]")
            emit_operand(node.body, tail)
        elif isinstance(node, Fixpoint):
            if not tail:
                out.append("(")
            out.append(("mu " if isinstance(node, Mu) else "nu ") + node.var + ". ")
            emit(node.body, True)
            if not tail:
                out.append(")")
        else:
            prec = _PREC[type(node)]
            op = " & " if isinstance(node, And) else " | "
            left_paren = _PREC.get(type(node.left), 3) < prec
            right_paren = _PREC.get(type(node.right), 3) <= prec
            wrap(node.left, left_paren, False)
            out.append(op)
            wrap(node.right, right_paren, tail)

    def wrap(node: Formula, paren: bool, tail: bool) -> None:
        if paren:
            out.append("(")
            emit(node, True)
            out.append(")")
        else:
            emit(node, tail)

    def emit_operand(node: Formula, tail: bool) -> None:
        # modal operands: binary connectives need parentheses
        wrap(node, isinstance(node, (And, Or)), tail)

    emit(f, True)
    return "".join(out)


def shared_text(f: Formula) -> list:
    """Lines ``@k = ...`` naming compound subterms used more than once, then the root.

    For display of formulas whose unfolded text would be too large.
    """
    parents: dict = {}
    for node in dag_nodes(f):
        for c in children(node):
            parents[id(c)] = parents.get(id(c), 0) + 1
    names: dict = {}
    short: dict = {}
    lines: list = []
    for node in dag_nodes(f):
        kids = [short[id(c)] for c in children(node)]
        if isinstance(node, (And, Or)):
            new = type(node)(*kids)
        elif isinstance(node, Fixpoint):
            new = type(node)(node.var, kids[0])
        elif isinstance(node, Modal):
            new = type(node)(kids[0])
        else:
            new = node
        if kids and parents.get(id(node), 0) > 1:
            names[id(node)] = f"@{len(names)}"
            lines.append(f"{names[id(node)]} = {to_text(new)}")
            new = Var(names[id(node)])
        short[id(node)] = new
    lines.append(to_text(short[id(f)]))
    return lines


# -- parse trees ---------------------------------------------------------------

KIND = {Top: "tt", Bottom: "ff", Prop: "prop", Var: "var", And: "and", Or: "or",
        Diamond: "dia", Box: "box", Mu: "mu", Nu: "nu"}


def _check_shared_sentence(f: Formula) -> None:
    """Walk ``f`` as a DAG: each variable bound by one object, no free variables."""
    owner: dict = {}
    free: dict = {}
    stack = [(f, False)]
    while stack:
        node, done = stack.pop()
        if done:
            names = frozenset().union(*(free[id(c)] for c in children(node)))
            if isinstance(node, Var):
                names = frozenset((node.name,))
            elif isinstance(node, (Mu, Nu)):
                names = names - {node.var}
            free[id(node)] = names
            continue
        if id(node) in free:
            continue
        if isinstance(node, (Mu, Nu)) and owner.setdefault(node.var, id(node)) != id(node):
            raise ValueError(f"variable {node.var} bound by two different binders")
        free[id(node)] = None
        stack.append((node, True))
        stack.extend((c, False) for c in children(node) if id(c) not in free)
    if free[id(f)]:
        raise UnboundVariableError(
            f"free fixpoint variable(s): {', '.join(sorted(free[id(f)]))}")


class ParseTree:
    """Node table of a sentence; node ids are preorder positions.

    Two syntactically equal subformulas at different places get different
    ids, unless ``share`` is set: then a Python object reached twice becomes
    one node, so formulas built as DAGs stay small. Shared formulas must bind
    each variable with a single object. The children of a variable node are the body of its binder, which
    turns the tree into the parse graph with back edges.
    """

    def __init__(self, formula: Formula, share: bool = False):
        if share:
            _check_shared_sentence(formula)
        elif not is_sentence(formula):
            raise UnboundVariableError(
                f"free fixpoint variable(s): {', '.join(sorted(free_variables(formula)))}")
        self.formula = formula
        self.nodes: list = []
        self.kinds: list = []
        self.parent: list = []
        kids: list = []
        seen: dict = {}
        stack = [(formula, -1)]
        while stack:
            node, parent = stack.pop()
            if share and id(node) in seen:
                kids[parent].append(seen[id(node)])
                continue
            self.nodes.append(node)
            self.kinds.append(KIND[type(node)])
            self.parent.append(parent)
            kids.append([])
            me = len(self.nodes) - 1
            if share:
                seen[id(node)] = me
            if parent >= 0:
                kids[parent].append(me)
            for child in reversed(children(node)):
                stack.append((child, me))
        self.binder: dict = {}
        for i, node in enumerate(self.nodes):
            if isinstance(node, Fixpoint):
                if node.var in self.binder:
                    raise ValueError(f"variable {node.var} bound twice; rename apart first")
                self.binder[node.var] = i
        for i, node in enumerate(self.nodes):
            if isinstance(node, Var):
                kids[i].append(kids[self.binder[node.name]][0])
        self.children = [tuple(k) for k in kids]

    def __len__(self) -> int:
        return len(self.nodes)

    def binding_formula(self, var: str) -> int:
        """Id of the body of the binder of ``var``."""
        return self.children[self.binder[var]][0]

    @cached_property
    def guarded(self) -> bool:
        """Every variable sits under a modality inside its own binding."""
        for var, b in self.binder.items():
            stack = [self.children[b][0]]
            seen = set()
            while stack:
                i = stack.pop()
                if i in seen:
                    continue
                seen.add(i)
                kind = self.kinds[i]
                if kind in ("dia", "box"):
                    continue
                if kind == "var" and self.nodes[i].name == var:
                    return False
                if kind != "var":
                    stack.extend(self.children[i])
        return True

    def longest_nonmodal_path(self) -> int:
        """Number of nodes on the longest parse-graph path avoiding modalities.

        Back edges from variables to binder bodies are followed, so the
        result is finite only for guarded formulas.
        """
        if not self.guarded:
            raise ValueError("formula is not guarded")
        memo: dict = {}

        def longest(i: int) -> int:
            if i in memo:
                return memo[i]
            if self.kinds[i] in ("dia", "box"):
                memo[i] = 0
                return 0
            best = 1 + max((longest(c) for c in self.children[i]), default=0)
            memo[i] = best
            return best

        return max(longest(i) for i in range(len(self.nodes)))
