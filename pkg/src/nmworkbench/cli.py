"""Command line front end.

Exit status: 0 success or property holds, 1 property fails or a
representation is refused (witness printed), 2 input error.
"""

from __future__ import annotations

import argparse
import sys

from . import io
from .blocking import horizon
from .choicefn import ChoiceFunction, check, show_witness
from .errors import PreconditionFailed, WorkbenchError
from .ibrs import AttackPair, GenStructure, higher_mu, represent_attacking_level2, represent_level3_smooth
from .inference import Mode, all_conclusions, conclude, valid_paths
from .netcore import Diagram
from .prefstruct import (
    PrefStructure, RankedPartition, RepresentationError, mu, represent_A_ranked, represent_general,
    represent_ranked, represent_smooth, represent_smooth_transitive, represent_transitive,
)
from .reactive import GateCircuit, compile as compile_reactive, format_table, simulate_circuit
from .search import SearchConfig, search_counterexample
from .sizes import SizeSystem, check_size_rule, search_size_counterexample

DEFAULT_SEED = 0


class InputError(Exception):
    pass


def _load(path: str, *types):
    try:
        obj = io.load(path)
    except FileNotFoundError:
        raise InputError(f"no such file: {path}")
    except ValueError as e:
        raise InputError(str(e))
    if types and not isinstance(obj, types):
        raise InputError(f"{path}: expected {' or '.join(t.__name__ for t in types)}, got {type(obj).__name__}")
    return obj


def _emit(obj, fmt: str, **kw):
    sys.stdout.write(io.export_dot(obj, **kw) if fmt == "dot" else io.serialize(obj))


def cmd_infer(a) -> int:
    d = _load(a.diagram, Diagram)
    if a.x is None:
        for (x, y), v in all_conclusions(d, a.mode).items():
            if x != y:
                print(f"{x} => {y} : {v.value}")
        return 0
    if a.y is None:
        raise InputError("infer needs both x and y, or neither")
    v = conclude(d, a.x, a.y, a.mode)
    if a.format == "dot":
        bold = set()
        if a.mode != "extensions":
            for p in valid_paths(d, a.mode).between(a.x, a.y):
                bold.update(p.arrows)
        sys.stdout.write(io.export_dot(d, bold=bold))
    else:
        print(f"{a.x} => {a.y} : {v.value}")
    return 0


def cmd_check(a) -> int:
    obj = _load(a.object, ChoiceFunction, SizeSystem)
    try:
        r = check(obj, a.property) if isinstance(obj, ChoiceFunction) else check_size_rule(obj, a.property)
    except KeyError as e:
        raise InputError(str(e).strip("'\""))
    print(f"{a.property}: {'holds' if r.holds else 'fails'}")
    if not r.holds:
        print(f"witness: {show_witness(r.witness)}")
    return 0 if r.holds else 1


REPRESENTATIONS = {
    "general": represent_general,
    "transitive": represent_transitive,
    "smooth": represent_smooth,
    "smooth-transitive": represent_smooth_transitive,
    "ranked": represent_ranked,
}


def cmd_represent(a) -> int:
    f = _load(a.function, ChoiceFunction)
    part = None
    try:
        if a.kind == "A-ranked":
            if not a.partition:
                raise InputError("A-ranked needs --partition, e.g. 'a,b<c'")
            part = RankedPartition.of(*(b.split(",") for b in a.partition.split("<")))
            S = represent_A_ranked(f, part, smooth=a.smooth)
        elif a.kind == "level2":
            S = represent_attacking_level2(AttackPair.from_choice(f))
        elif a.kind == "level3":
            S = represent_level3_smooth(f)
        else:
            S = REPRESENTATIONS[a.kind](f)
    except PreconditionFailed as e:
        print(f"refused: {e.prop} fails")
        if e.witness is not None:
            print(f"witness: {show_witness(e.witness)}")
        return 1
    except (RepresentationError, WorkbenchError) as e:
        print(f"refused: {e}")
        return 1
    if a.format == "dot" and part is not None:
        _emit(S, a.format, partition=part)
    else:
        _emit(S, a.format)
    return 0


def cmd_verify(a) -> int:
    S = _load(a.structure, PrefStructure, GenStructure)
    f = _load(a.function, ChoiceFunction)
    for X, fx in f.items():
        got = mu(S, X) if isinstance(S, PrefStructure) else higher_mu(S, X)
        if got != fx:
            print("mismatch")
            print(f"witness: {show_witness((X, got, fx))}")
            return 1
    print("verified")
    return 0


def cmd_reactive(a) -> int:
    d = _load(a.diagram, Diagram)
    r = compile_reactive(d, a.origin)
    _emit(r, a.format)
    return 0


def cmd_horizon(a) -> int:
    d = _load(a.net, Diagram)
    h = horizon(d, a.seeds)
    print(" ".join(sorted(h.visible)))
    return 0


def cmd_export_dot(a) -> int:
    obj = _load(a.object)
    if isinstance(obj, (ChoiceFunction, SizeSystem, GateCircuit)):
        raise InputError(f"no DOT rendering for {type(obj).__name__}")
    sys.stdout.write(io.export_dot(obj))
    return 0


def cmd_simulate(a) -> int:
    c = _load(a.circuit, GateCircuit)
    sys.stdout.write(format_table(c, simulate_circuit(c, a.steps)))
    return 0


def cmd_search(a) -> int:
    print(f"# seed {a.seed}")
    try:
        if a.sizes:
            out = search_size_counterexample(a.hyp, a.concl[0], bound=a.bound, seed=a.seed)
            if out.found:
                print(f"counterexample {out.system!r}; {out.failure.describe()}")
                return 1
            print(f"no counterexample (exhaustive |U| in {out.exhausted}, {out.sampled} samples)")
            return 0
        cfg = SearchConfig(seed=a.seed, closure=tuple(a.closure))
        out = search_counterexample(a.hyp, a.concl, a.bound, cfg)
    except KeyError as e:
        raise InputError(str(e).strip("'\""))
    print(out.describe())
    return 1 if out.found else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nmw", description="Nonmonotonic reasoning workbench")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--bound", type=int, default=3)
    p.add_argument("--format", choices=("text", "dot"), default="text")
    p.add_argument("--mode", choices=[m.value for m in Mode], default="split")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("infer", help="conclusions of an inheritance diagram")
    s.add_argument("diagram")
    s.add_argument("x", nargs="?")
    s.add_argument("y", nargs="?")
    s.set_defaults(run=cmd_infer)

    s = sub.add_parser("check", help="check a property of a choice function or size system")
    s.add_argument("object")
    s.add_argument("property")
    s.set_defaults(run=cmd_check)

    s = sub.add_parser("represent", help="build a structure representing a choice function")
    s.add_argument("function")
    s.add_argument("--kind", default="general",
                   choices=sorted(REPRESENTATIONS) + ["A-ranked", "level2", "level3"])
    s.add_argument("--partition", help="blocks best first, e.g. 'a,b<c'")
    s.add_argument("--smooth", action="store_true", help="smooth A-ranked variant")
    s.set_defaults(run=cmd_represent)

    s = sub.add_parser("verify", help="compare a structure against a choice function")
    s.add_argument("structure")
    s.add_argument("function")
    s.set_defaults(run=cmd_verify)

    s = sub.add_parser("reactive", help="compile a diagram into a reactive one")
    s.add_argument("diagram")
    s.add_argument("origin")
    s.set_defaults(run=cmd_reactive)

    s = sub.add_parser("horizon", help="nodes visible from a seed set")
    s.add_argument("net")
    s.add_argument("seeds", nargs="+")
    s.set_defaults(run=cmd_horizon)

    s = sub.add_parser("export-dot", help="render a diagram or structure as DOT")
    s.add_argument("object")
    s.set_defaults(run=cmd_export_dot)

    s = sub.add_parser("simulate", help="transition table of a gate circuit")
    s.add_argument("circuit")
    s.add_argument("--steps", type=int, default=9)
    s.set_defaults(run=cmd_simulate)

    s = sub.add_parser("search", help="look for a counterexample to hyps => concl")
    s.add_argument("--hyp", action="append", default=[])
    s.add_argument("--concl", action="append", required=True)
    s.add_argument("--closure", action="append", default=[])
    s.add_argument("--sizes", action="store_true", help="search size systems instead")
    s.set_defaults(run=cmd_search)
    return p


def _hoist(argv: list[str]) -> list[str]:
    """Allow global flags after the subcommand."""
    flags = {"--seed", "--bound", "--format", "--mode"}
    front, rest, i = [], [], 0
    while i < len(argv):
        tok = argv[i]
        key = tok.split("=", 1)[0]
        if key in flags:
            front.append(tok)
            if "=" not in tok and i + 1 < len(argv):
                front.append(argv[i + 1])
                i += 1
        else:
            rest.append(tok)
        i += 1
    return front + rest


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_hoist(argv))
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return args.run(args)
    except (InputError, WorkbenchError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
