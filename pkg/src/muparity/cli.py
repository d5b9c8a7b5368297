"""Command-line entry point: ``muparity <command> ...``.

Exit codes: 0 success or pass, 1 counterexample found, 2 usage or input error.
Every report starts with a schema header line.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .alternation import assign_priorities, format_index, index_class
from .arena import ArenaError, encode, load_arena, mc_game, store_arena
from .challenge import GENERAL, SIGMA2, ChallengeError, adjudicate_challenge, parse_script
from .corpus import CorpusSpec, corpus
from .formula import (FormulaSyntaxError, ParseTree, UnboundVariableError, dag_size,
                      parse_sentence, propositions, shared_text, size, to_text)
from .interpreters import bounded_formula, parity_formula
from .product import ProductError, product, simplify
from .solver import model_check, solve, store_strategy, winner
from .structures import StructureError, enumerate_structures, load, store

SCHEMA = "# muparity report v1"
PLAYER = ("Even", "Odd")
TEXT_LIMIT = 400


class UsageError(Exception):
    pass


def _text(arg: str) -> str:
    """Contents of the file ``arg`` if it exists, otherwise ``arg`` itself."""
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _formula(arg: str):
    return parse_sentence(_text(arg).strip())


def _structure(path: str):
    return load(_text(path))


def _interval(text: str) -> tuple:
    try:
        lo, hi = (int(x) for x in text.split(".."))
    except ValueError:
        raise UsageError(f"expected an index interval like 0..2, got {text!r}") from None
    return lo, hi


def _spec(args, alphabet) -> tuple:
    if args.max_nodes < 1 or args.samples < 0:
        raise UsageError("corpus bounds must be positive")
    spec = CorpusSpec(max_nodes=args.max_nodes, samples=args.samples,
                      sample_nodes=args.sample_nodes, seed=args.seed)
    return spec, corpus(alphabet, spec)


class Report:
    def __init__(self, command: str):
        self.lines = [SCHEMA, f"command: {command}"]

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def field(self, key: str, value) -> None:
        self.lines.append(f"{key}: {value}")

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


# -- commands ----------------------------------------------------------------------

def cmd_mc(args, rep: Report) -> int:
    t, f = _structure(args.structure), _formula(args.formula)
    arena = mc_game(t, f)
    sol = solve(arena)
    w = sol.winner[arena.initial]
    rep.field("formula", to_text(f))
    rep.field("verdict", "holds" if w == 0 else "fails")
    rep.field("winner", PLAYER[w])
    rep.field("positions", len(arena))
    rep.add("strategy:")
    for v, u in sorted(sol.strategy[w].items()):
        rep.add(f"  {arena.description(v)} -> {arena.description(u)}")
    return 0


def cmd_arena(args, rep: Report) -> int:
    arena = mc_game(_structure(args.structure), _formula(args.formula))
    rep.field("positions", len(arena))
    rep.add(store_arena(arena).rstrip("\n"))
    return 0


def cmd_solve(args, rep: Report) -> int:
    arena = load_arena(_text(args.arena))
    sol = solve(arena)
    rep.field("winner", PLAYER[sol.winner[arena.initial]])
    rep.add("regions:")
    for v in range(len(arena)):
        rep.add(f"  {arena.names[v]} {PLAYER[sol.winner[v]]}")
    for player in (0, 1):
        rep.add(f"strategy {PLAYER[player]}:")
        for line in store_strategy(arena, sol.strategy[player]).splitlines():
            rep.add(f"  {line}")
    return 0


def cmd_encode(args, rep: Report) -> int:
    if args.formula is None:
        arena = load_arena(_text(args.source))
    else:
        arena = mc_game(_structure(args.source), _formula(args.formula))
    t = encode(arena, args.provenance)
    rep.field("nodes", len(t))
    rep.add(store(t).rstrip("\n"))
    return 0


def cmd_index(args, rep: Report) -> int:
    f = _formula(args.formula)
    a = assign_priorities(f)
    cls = index_class(f)
    rep.field("formula", to_text(f))
    rep.field("index", "ML" if not a.index else f"{format_index(a.low, a.high)} {cls}")
    for var in sorted(a.priorities):
        rep.add(f"  {var} {a[var]}")
    return 0


def cmd_parity(args, rep: Report) -> int:
    lo, hi = _interval(args.index)
    rep.add(to_text(parity_formula(lo, hi)))
    return 0


def cmd_bounded(args, rep: Report) -> int:
    prios = tuple(int(x) for x in args.priorities.split(",")) if args.priorities else (0,)
    _formula_lines(rep, bounded_formula(args.p, args.m, prios))
    return 0


def _formula_lines(rep: Report, f, key: str = "formula") -> None:
    """Plain text when small, otherwise one line per shared subterm."""
    rep.field("shared_nodes", dag_size(f))
    rep.field("tree_nodes", size(f))
    if size(f) <= TEXT_LIMIT:
        rep.field(key, to_text(f))
    else:
        rep.add(f"{key} (shared):")
        for line in shared_text(f):
            rep.add(f"  {line}")


def _product_report(rep: Report, res) -> None:
    _formula_lines(rep, res.formula, "result")
    a = res.assignment
    rep.field("inherited_index", format_index(a.low, a.high) if a.index else "ML")
    for name in sorted(res.fresh):
        i, var = res.fresh[name]
        rep.add(f"  {name} = node {i} x {var} priority {a[name]}")


def cmd_product(args, rep: Report) -> int:
    psi, win = _formula(args.psi), _formula(args.win)
    res = product(psi, win)
    rep.field("steps", res.steps)
    _product_report(rep, res)
    return 0


def cmd_simplify(args, rep: Report) -> int:
    psi, win = _formula(args.psi), _formula(args.win)
    spec, structures = _spec(args, propositions(psi))
    result, report = simplify(psi, win, structures)
    rep.field("input", to_text(psi))
    _formula_lines(rep, result, "output")
    rep.field("old_index", report.old_index)
    rep.field("new_index", report.new_index)
    rep.field("within_target", "yes" if report.within_target else "no")
    rep.field("corpus", f"{len(structures)} structures (max_nodes={spec.max_nodes} "
                        f"samples={spec.samples} seed={spec.seed})")
    rep.field("checked", report.checked)
    rep.field("verdict", "no counterexample up to bound" if report.equivalent else "counterexample found")
    if not report.equivalent:
        rep.add("counterexample:")
        rep.add(store(report.counterexample).rstrip("\n"))
        return 1
    return 0


def cmd_interpret_check(args, rep: Report) -> int:
    psi, phi = _formula(args.psi), _formula(args.phi)
    spec, structures = _spec(args, propositions(psi))
    tree = ParseTree(psi)
    omega = assign_priorities(psi)
    phi_tree = ParseTree(phi, share=True)
    phi_omega = assign_priorities(phi)
    rep.field("psi", to_text(psi))
    rep.field("phi", to_text(phi))
    rep.field("corpus", f"{len(structures)} structures (max_nodes={spec.max_nodes} "
                        f"samples={spec.samples} seed={spec.seed})")
    rep.add("table: k nodes psi phi agree")
    witness = None
    failures = 0
    for k, t in enumerate(structures):
        arena = mc_game(t, tree, omega)
        direct = winner(arena)
        via = model_check(encode(arena, args.provenance), phi_tree, phi_omega)
        ok = direct == via
        if not ok:
            failures += 1
            witness = witness or t
        rep.add(f"  {k} {len(t)} {PLAYER[direct]} {PLAYER[via]} {'yes' if ok else 'NO'}")
    rep.field("disagreements", failures)
    rep.field("verdict", "no counterexample up to bound" if witness is None else "counterexample found")
    if witness is not None:
        rep.add("counterexample:")
        rep.add(store(witness).rstrip("\n"))
        return 1
    return 0


def cmd_challenge(args, rep: Report) -> int:
    arena = load_arena(_text(args.arena))
    play = parse_script(_text(args.script), args.variant)
    target = None
    if args.variant == GENERAL:
        if args.target is None:
            raise UsageError("--target is required for the general variant")
        lo, hi = _interval(args.target)
        target = tuple(range(lo, hi + 1))
    verdict = adjudicate_challenge(arena, play, args.variant, args.n, target)
    rep.field("variant", args.variant)
    rep.field("n", args.n)
    rep.add(verdict.report().rstrip("\n"))
    return 0


def cmd_enumerate(args, rep: Report) -> int:
    alphabet = [a for a in args.alphabet.split(",") if a]
    structures = list(enumerate_structures(args.max_nodes, alphabet))
    rep.field("alphabet", ",".join(sorted(alphabet)) or "-")
    rep.field("max_nodes", args.max_nodes)
    rep.field("count", len(structures))
    if not args.count_only:
        for t in structures:
            rep.add("---")
            rep.add(store(t).rstrip("\n"))
    return 0


# -- argument parsing -----------------------------------------------------------------

def _corpus_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-nodes", type=int, default=3, help="exhaustive corpus bound")
    p.add_argument("--samples", type=int, default=200, help="number of random structures")
    p.add_argument("--sample-nodes", type=int, default=8, help="size bound for samples")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="muparity", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--out", help="write the report to this file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mc", help="model check a formula on a structure")
    p.add_argument("structure")
    p.add_argument("formula")
    p.set_defaults(run=cmd_mc)

    p = sub.add_parser("arena", help="write the model-checking game in arena format")
    p.add_argument("structure")
    p.add_argument("formula")
    p.set_defaults(run=cmd_arena)

    p = sub.add_parser("solve", help="solve an arena file")
    p.add_argument("arena")
    p.set_defaults(run=cmd_solve)

    p = sub.add_parser("encode", help="encode a game as a labelled structure")
    p.add_argument("source", help="arena file, or structure file when a formula is given")
    p.add_argument("formula", nargs="?")
    p.add_argument("--provenance", action="store_true", help="add E_X variable labels")
    p.set_defaults(run=cmd_encode)

    p = sub.add_parser("index", help="minimal priority assignment and alternation class")
    p.add_argument("formula")
    p.set_defaults(run=cmd_index)

    p = sub.add_parser("parity-formula", help="formula for an index such as 0..2")
    p.add_argument("index")
    p.set_defaults(run=cmd_parity)

    p = sub.add_parser("bounded-formula", help="counter game formula")
    p.add_argument("p", type=int)
    p.add_argument("m", type=int)
    p.add_argument("--priorities", help="comma-separated priorities (default 0)")
    p.set_defaults(run=cmd_bounded)

    p = sub.add_parser("product", help="product of a formula with a game formula")
    p.add_argument("psi")
    p.add_argument("win")
    p.set_defaults(run=cmd_product)

    p = sub.add_parser("simplify", help="product plus corpus equivalence check")
    p.add_argument("psi")
    p.add_argument("win")
    _corpus_flags(p)
    p.set_defaults(run=cmd_simplify)

    p = sub.add_parser("interpret-check", help="check that phi interprets psi on a corpus")
    p.add_argument("psi")
    p.add_argument("phi")
    p.add_argument("--provenance", action="store_true", help="encode with E_X labels")
    _corpus_flags(p)
    p.set_defaults(run=cmd_interpret_check)

    p = sub.add_parser("challenge", help="adjudicate a scripted challenge play")
    p.add_argument("arena")
    p.add_argument("script")
    p.add_argument("--variant", choices=(SIGMA2, GENERAL), default=SIGMA2)
    p.add_argument("--n", type=int, default=1, help="counter bound")
    p.add_argument("--target", help="target index for the general variant, e.g. 1..2")
    p.set_defaults(run=cmd_challenge)

    p = sub.add_parser("enumerate", help="list structures up to isomorphism")
    p.add_argument("--max-nodes", type=int, default=2)
    p.add_argument("--alphabet", default="P")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(run=cmd_enumerate)
    return parser


INPUT_ERRORS = (UsageError, FormulaSyntaxError, UnboundVariableError, StructureError,
                ArenaError, ChallengeError, ProductError, OSError, ValueError)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    rep = Report(args.command)
    try:
        code = args.run(args, rep)
    except INPUT_ERRORS as exc:
        print(f"muparity {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(rep.text())
    else:
        sys.stdout.write(rep.text())
    return code


if __name__ == "__main__":
    sys.exit(main())
