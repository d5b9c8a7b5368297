"""Challenge games: parity games with challenge/counter configurations.

Two variants are supported.

``sigma2``: one challenge per even priority. Odd opens challenges (highest
first, only with a non-zero counter, decrementing it). Seeing priority ``j``
while the ``j``-challenge is open meets it and resets every lower challenge.
An infinite play with dominant priority ``d`` is won by Odd iff ``d`` is odd
and the ``d+1``-challenge stays open from some point on.

``general``: a matrix of challenges ``(i, j)`` for odd target priorities
``i`` and odd input priorities ``j``. Even may ``k``-reset or open row ``i``
from column ``p`` upwards before each move; the priority ``p`` of the new
position marks columns ``<= p`` met and restores counters of columns ``< p``;
a zero counter in column ``p`` ends the play with a win for Odd unless the
new position is terminal, in which case the parity game decides. An infinite
play with dominant priority ``d`` is won by Even iff ``d`` is even and some
``(i, d+1)`` challenge stays open from some point on.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .arena import EVEN, ODD, Arena

SIGMA2, GENERAL = "sigma2", "general"
MET, OPEN = False, True


class ChallengeError(ValueError):
    pass


@dataclass(frozen=True)
class ChallengeConfig:
    """Open/met flags and counters indexed by ``(row, column)``.

    For the ``sigma2`` variant there is a single row ``0`` and the columns are
    the even priorities.
    """

    rows: tuple
    cols: tuple
    status: tuple
    counter: tuple
    n: int

    @classmethod
    def initial(cls, rows, cols, n: int) -> "ChallengeConfig":
        rows, cols = tuple(rows), tuple(cols)
        return cls(rows, cols, tuple((MET,) * len(cols) for _ in rows),
                   tuple((n,) * len(cols) for _ in rows), n)

    def _at(self, i, j) -> tuple:
        try:
            return self.rows.index(i), self.cols.index(j)
        except ValueError:
            raise ChallengeError(f"no challenge ({i}, {j})") from None

    def is_open(self, i, j) -> bool:
        r, c = self._at(i, j)
        return self.status[r][c]

    def count(self, i, j) -> int:
        r, c = self._at(i, j)
        return self.counter[r][c]

    def updated(self, cells: dict) -> "ChallengeConfig":
        """New configuration with ``{(i, j): (status, counter)}`` applied."""
        status = [list(row) for row in self.status]
        counter = [list(row) for row in self.counter]
        for (i, j), (st, ct) in cells.items():
            r, c = self._at(i, j)
            status[r][c] = st
            counter[r][c] = ct
        return replace(self, status=tuple(map(tuple, status)),
                       counter=tuple(map(tuple, counter)))

    def valid(self) -> bool:
        for r, row in enumerate(self.status):
            for c, st in enumerate(row):
                if st and not all(row[c:]):
                    return False
                if not 0 <= self.counter[r][c] <= self.n:
                    return False
        return True

    @property
    def priority(self):
        """Least column with an open challenge, or None."""
        opened = [j for r in range(len(self.rows)) for c, j in enumerate(self.cols)
                  if self.status[r][c]]
        return min(opened) if opened else None

    @property
    def level(self):
        """Highest row with an open challenge, or None."""
        opened = [i for r, i in enumerate(self.rows) if any(self.status[r])]
        return max(opened) if opened else None

    def render(self) -> str:
        cells = []
        for r, i in enumerate(self.rows):
            for c, j in enumerate(self.cols):
                st = "open" if self.status[r][c] else "met"
                where = f"{j}" if len(self.rows) == 1 and i == 0 else f"{i},{j}"
                cells.append(f"[{where}]={st}/{self.counter[r][c]}")
        return " ".join(cells)


# -- sigma2 variant --------------------------------------------------------------------

def sigma2_priorities(high: int) -> tuple:
    """Even priorities of the index ``{0..high}``, padded to an even top."""
    top = high if high % 2 == 0 else high + 1
    return tuple(range(0, top + 1, 2))


def sigma2_initial(high: int, n: int) -> ChallengeConfig:
    return ChallengeConfig.initial((0,), sigma2_priorities(high), n)


def sigma2_open(cfg: ChallengeConfig, opens) -> ChallengeConfig:
    """Round in which Odd opens the challenges ``opens`` (highest first)."""
    opens = list(opens)
    if opens != sorted(opens, reverse=True) or len(set(opens)) != len(opens):
        raise ChallengeError("challenges must be opened in decreasing order")
    for i in opens:
        if cfg.is_open(0, i):
            raise ChallengeError(f"{i}-challenge is already open")
        if cfg.count(0, i) == 0:
            raise ChallengeError(f"counter of the {i}-challenge is zero")
        higher = [j for j in cfg.cols if j > i]
        if not all(cfg.is_open(0, j) for j in higher):
            raise ChallengeError(f"cannot open the {i}-challenge before all higher ones")
        cfg = cfg.updated({(0, i): (OPEN, cfg.count(0, i) - 1)})
    return cfg


def sigma2_arrive(cfg: ChallengeConfig, p: int) -> ChallengeConfig:
    """Update for a move to a position of priority ``p``."""
    if p in cfg.cols and cfg.is_open(0, p):
        cells = {(0, p): (MET, cfg.count(0, p))}
        cells.update({(0, i): (MET, cfg.n) for i in cfg.cols if i < p})
        return cfg.updated(cells)
    return cfg


def challenge_step_sigma2(cfg: ChallengeConfig, opens, arriving: int) -> ChallengeConfig:
    out = sigma2_arrive(sigma2_open(cfg, opens), arriving)
    assert out.valid()
    return out


# -- general variant ----------------------------------------------------------------------

@dataclass(frozen=True)
class Reset:
    k: int


@dataclass(frozen=True)
class Open:
    level: int
    lowest: int


def general_initial(target, inp, n: int) -> ChallengeConfig:
    """Initial configuration for target index ``target`` and input index ``inp``."""
    rows = tuple(i for i in target if i % 2 == 1)
    cols = tuple(j for j in inp if j % 2 == 1)
    return ChallengeConfig.initial(rows, cols, n)


def general_act(cfg: ChallengeConfig, action) -> ChallengeConfig:
    """Even's round: ``None``, ``Reset(k)`` or ``Open(level, lowest)``."""
    if action is None:
        return cfg
    if isinstance(action, Reset):
        if action.k not in cfg.rows:
            raise ChallengeError(f"{action.k} is not an odd target priority")
        return cfg.updated({(i, j): (MET, cfg.n) for i in cfg.rows if i <= action.k
                            for j in cfg.cols})
    if isinstance(action, Open):
        if action.level not in cfg.rows:
            raise ChallengeError(f"{action.level} is not an odd target priority")
        cells = {}
        for j in cfg.cols:
            if j >= action.lowest and not cfg.is_open(action.level, j):
                c = cfg.count(action.level, j)
                if c == 0:
                    raise ChallengeError(f"counter of challenge ({action.level}, {j}) is zero")
                cells[(action.level, j)] = (OPEN, c - 1)
        return cfg.updated(cells)
    raise ChallengeError(f"unknown action {action!r}")


def general_arrive(cfg: ChallengeConfig, p: int) -> tuple:
    """Update for a move to priority ``p``; returns ``(config, odd_wins_now)``."""
    cells = {}
    for i in cfg.rows:
        for j in cfg.cols:
            if j <= p:
                cells[(i, j)] = (MET, cfg.n if j < p else cfg.count(i, j))
    out = cfg.updated(cells)
    odd_wins = p in cfg.cols and any(out.count(i, p) == 0 for i in cfg.rows)
    return out, odd_wins


def challenge_step_general(cfg: ChallengeConfig, action, arriving: int) -> tuple:
    out, odd_wins = general_arrive(general_act(cfg, action), arriving)
    assert out.valid()
    return out, odd_wins


# -- plays and adjudication ----------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    actions: tuple
    move: str


@dataclass(frozen=True)
class ChallengePlay:
    """Scripted steps; the steps from ``cycle_start`` on repeat forever."""

    steps: tuple
    cycle_start: int | None = None


def parse_script(text: str, variant: str) -> ChallengePlay:
    """Script lines: ``open i`` (sigma2), ``open i p`` / ``reset k`` (general),
    ``move <position>`` ending each step, and a ``cycle`` line before the
    repeating steps."""
    steps: list = []
    pending: list = []
    cycle = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        words = line.split()
        try:
            if words[0] == "cycle" and len(words) == 1:
                if cycle is not None or pending:
                    raise ChallengeError("misplaced cycle marker")
                cycle = len(steps)
            elif words[0] == "move" and len(words) == 2:
                steps.append(Step(tuple(pending), words[1]))
                pending = []
            elif words[0] == "open" and variant == SIGMA2 and len(words) == 2:
                pending.append(int(words[1]))
            elif words[0] == "open" and variant == GENERAL and len(words) == 3:
                pending.append(Open(int(words[1]), int(words[2])))
            elif words[0] == "reset" and variant == GENERAL and len(words) == 2:
                pending.append(Reset(int(words[1])))
            else:
                raise ChallengeError(f"unknown instruction {line!r}")
        except ValueError as exc:
            if isinstance(exc, ChallengeError):
                raise ChallengeError(f"line {lineno}: {exc}") from None
            raise ChallengeError(f"line {lineno}: bad number in {line!r}") from None
    if pending:
        raise ChallengeError("actions after the last move")
    if cycle is not None and cycle == len(steps):
        raise ChallengeError("empty cycle")
    if variant == GENERAL and any(len(s.actions) > 1 for s in steps):
        raise ChallengeError("at most one action per step in the general variant")
    return ChallengePlay(tuple(steps), cycle)


@dataclass
class Verdict:
    winner: int
    dominant: int | None
    reason: str
    trace: list = field(default_factory=list)

    def report(self) -> str:
        lines = [f"winner: {'Even' if self.winner == EVEN else 'Odd'}",
                 f"dominant: {'none' if self.dominant is None else self.dominant}",
                 f"reason: {self.reason}"]
        lines += [f"step {k}: {t}" for k, t in enumerate(self.trace)]
        return "\n".join(lines) + "\n"


def adjudicate_challenge(arena: Arena, play: ChallengePlay, variant: str, n: int,
                         target=None) -> Verdict:
    """Winner of a scripted challenge play on ``arena``.

    ``target`` is the target index for the general variant (an iterable of
    priorities); the input index is the arena's index.
    """
    if variant == SIGMA2:
        cfg = sigma2_initial(arena.high, n)
    elif variant == GENERAL:
        if target is None:
            raise ChallengeError("the general variant needs a target index")
        cfg = general_initial(tuple(target), arena.index, n)
    else:
        raise ChallengeError(f"unknown variant {variant!r}")
    pos = arena.initial
    trace: list = []
    history: list = []     # (position entered, configs of the step)
    seen: dict = {}
    k = 0
    steps = play.steps
    while True:
        if not arena.successors[pos]:
            if k < len(steps) or play.cycle_start is not None:
                raise ChallengeError(f"step {len(trace)}: play already ended at a terminal")
            loser = arena.owner[pos]
            return Verdict(1 - loser, None,
                           f"terminal position {arena.names[pos]} owned by "
                           f"{'Even' if loser == EVEN else 'Odd'}", trace)
        if k == len(steps):
            if play.cycle_start is None:
                raise ChallengeError("script ends at a non-terminal position without a cycle")
            k = play.cycle_start
        if play.cycle_start is not None and k >= play.cycle_start:
            key = (k, pos, cfg)
            if key in seen:
                period = history[seen[key]:]
                return _infinite(arena, cfg, variant, [v for v, _, _ in period],
                                 [c for _, mid, after in period for c in (mid, after)], trace)
            seen[key] = len(history)
        step = steps[k]
        if variant == SIGMA2:
            mid = sigma2_open(cfg, step.actions)
        else:
            mid = general_act(cfg, step.actions[0] if step.actions else None)
        target_pos = arena.position(step.move)
        if target_pos not in arena.successors[pos]:
            raise ChallengeError(f"step {len(trace)}: {arena.names[pos]} -> {step.move} "
                                 "is not a move")
        p = arena.priority[target_pos]
        if variant == SIGMA2:
            cfg = sigma2_arrive(mid, p)
            odd_now = False
        else:
            cfg, odd_now = general_arrive(mid, p)
        if not (mid.valid() and cfg.valid()):
            raise AssertionError("challenge configuration became invalid")
        pos = target_pos
        trace.append(f"{' '.join(_show(a) for a in step.actions) or '-'} ; "
                     f"move {step.move} (priority {p}) ; {cfg.render()}")
        history.append((pos, mid, cfg))
        k += 1
        # reaching a terminal position decides the play before any counter check
        if odd_now and arena.successors[pos]:
            return Verdict(ODD, None, f"counter exhausted at priority {p}", trace)


def _show(action) -> str:
    if isinstance(action, Reset):
        return f"reset {action.k}"
    if isinstance(action, Open):
        return f"open {action.level} {action.lowest}"
    return f"open {action}"


def _infinite(arena: Arena, cfg: ChallengeConfig, variant: str, positions: list,
              configs: list, trace: list) -> Verdict:
    """Verdict for the periodic part: positions entered and configurations seen."""
    d = max(arena.priority[pos] for pos in positions)
    if d % 2 == 1 and variant == SIGMA2:
        j = d + 1
        if all(c.is_open(0, j) for c in configs):
            return Verdict(ODD, d, f"dominant {d} and the {j}-challenge stays open", trace)
        return Verdict(EVEN, d, f"dominant {d} but the {j}-challenge is met or reset "
                                "on the cycle", trace)
    if variant == SIGMA2:
        return Verdict(EVEN, d, f"dominant {d} is even", trace)
    if d % 2 == 1:
        return Verdict(ODD, d, f"dominant {d} is odd", trace)
    j = d + 1
    if j not in cfg.cols:
        return Verdict(ODD, d, f"dominant {d} and there is no column {j}", trace)
    for i in cfg.rows:
        if all(c.is_open(i, j) for c in configs):
            return Verdict(EVEN, d, f"dominant {d} and challenge ({i}, {j}) stays open",
                           trace)
    return Verdict(ODD, d, f"dominant {d} and every challenge in column {j} is met "
                           "infinitely often", trace)


# -- finite product and positional strategy search ---------------------------------------

def _sigma2_actions(cfg: ChallengeConfig) -> list:
    """Every legal set of openings for Odd (a run of consecutive columns)."""
    closed = [j for j in reversed(cfg.cols) if not cfg.is_open(0, j)]
    options = [()]
    for size in range(1, len(closed) + 1):
        opens = tuple(closed[:size])
        try:
            sigma2_open(cfg, opens)
        except ChallengeError:
            break
        options.append(opens)
    return options


def _general_actions(cfg: ChallengeConfig) -> list:
    options = [None] + [Reset(k) for k in cfg.rows]
    for i in cfg.rows:
        for p in cfg.cols:
            try:
                general_act(cfg, Open(i, p))
            except ChallengeError:
                continue
            options.append(Open(i, p))
    return options


@dataclass
class ChallengeProduct:
    """Explicit game graph on (round, position, configuration) nodes."""

    nodes: list
    owner: list
    successors: list
    labels: list        # per edge target: (action or None)
    sink_winner: dict   # node -> winner for nodes ending the play


def expand(arena: Arena, variant: str, n: int, target=None, limit: int = 20000
           ) -> ChallengeProduct:
    if variant == SIGMA2:
        cfg0 = sigma2_initial(arena.high, n)
        challenger = ODD
    else:
        cfg0 = general_initial(tuple(target), arena.index, n)
        challenger = EVEN
    start = ("act", arena.initial, cfg0)
    index = {start: 0}
    nodes = [start]
    owner, succ, labels = [], [], []
    sinks = {}
    head = 0
    while head < len(nodes):
        node = nodes[head]
        head += 1
        kind = node[0]
        out, lab = [], []
        if kind == "end":
            owner.append(EVEN)
            succ.append([])
            labels.append([])
            continue
        _, pos, cfg = node
        if kind == "act":
            if not arena.successors[pos]:
                sinks[head - 1] = 1 - arena.owner[pos]
                owner.append(arena.owner[pos])
                succ.append([])
                labels.append([])
                continue
            owner.append(challenger)
            acts = _sigma2_actions(cfg) if variant == SIGMA2 else _general_actions(cfg)
            for act in acts:
                mid = sigma2_open(cfg, act) if variant == SIGMA2 else general_act(cfg, act)
                out.append(("move", pos, mid))
                lab.append(act)
        else:
            owner.append(arena.owner[pos])
            for w in arena.successors[pos]:
                p = arena.priority[w]
                if variant == SIGMA2:
                    out.append(("act", w, sigma2_arrive(cfg, p)))
                else:
                    nxt, odd_now = general_arrive(cfg, p)
                    exhausted = odd_now and arena.successors[w]
                    out.append(("end", w, nxt) if exhausted else ("act", w, nxt))
                lab.append(w)
        ids = []
        for key in out:
            if key not in index:
                if len(nodes) >= limit:
                    raise ChallengeError("challenge product exceeds the size limit")
                index[key] = len(nodes)
                nodes.append(key)
            ids.append(index[key])
        succ.append(ids)
        labels.append(lab)
    for v, node in enumerate(nodes):
        if node[0] == "end":
            sinks[v] = ODD
    return ChallengeProduct(nodes, owner, succ, labels, sinks)


def _lasso_winner(arena: Arena, prod: ChallengeProduct, variant: str, choice: dict) -> int:
    v = 0
    order: dict = {}
    path: list = []
    while v not in order:
        if v in prod.sink_winner:
            return prod.sink_winner[v]
        order[v] = len(path)
        path.append(v)
        v = choice[v]
    cycle = path[order[v]:]
    positions = [prod.nodes[u][1] for u in cycle if prod.nodes[u][0] == "act"]
    configs = [prod.nodes[u][2] for u in cycle]
    return _infinite(arena, configs[0], variant, positions, configs, []).winner


def positional_search(arena: Arena, variant: str, n: int, target=None,
                      limit: int = 200000) -> dict:
    """Which player has a positional winning strategy on the product, by enumeration.

    Only meant for tiny instances; raises when the number of strategy pairs
    exceeds ``limit``.
    """
    prod = expand(arena, variant, n, target)
    nodes = range(len(prod.nodes))
    even_nodes = [v for v in nodes if prod.owner[v] == EVEN and prod.successors[v]]
    odd_nodes = [v for v in nodes if prod.owner[v] == ODD and prod.successors[v]]
    even_choices = [prod.successors[v] for v in even_nodes]
    odd_choices = [prod.successors[v] for v in odd_nodes]
    total = 1
    for c in even_choices + odd_choices:
        total *= len(c)
        if total > limit:
            raise ChallengeError("too many positional strategy pairs for exhaustive search")
    results = {}
    for player, mine, theirs, my_c, their_c in (
            (EVEN, even_nodes, odd_nodes, even_choices, odd_choices),
            (ODD, odd_nodes, even_nodes, odd_choices, even_choices)):
        found = False
        for sigma in itertools.product(*my_c):
            ok = True
            for tau in itertools.product(*their_c):
                choice = dict(zip(mine, sigma))
                choice.update(zip(theirs, tau))
                if _lasso_winner(arena, prod, variant, choice) != player:
                    ok = False
                    break
            if ok:
                found = True
                break
        results[player] = found
    return {"product_size": len(prod.nodes), "even_positional": results[EVEN],
            "odd_positional": results[ODD]}
