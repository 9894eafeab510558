"""
Command runner.

``run(command, args)`` executes one subcommand and returns its exit code with a
report document: 0 when the command succeeded or the checked property holds,
1 when a property fails with a witness, 2 on bad input. ``main`` is the
console entry point.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional, Tuple

import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from src.bibundles.colored import ColoredSSet, higher_cograph
from src.bibundles.report import classify_bibundle
from src.cli.corpus import confirm, corpus, corpus_frame
from src.cli.documents import Document, describe, dumps, load_value, report_document, save, to_document
from src.config import config_value
from src.differentiation.jets import discrete_jet
from src.differentiation.pair_nerve import PointedFinSet
from src.errors import BadParams, EngineError, PropertyFailure, SizeOutOfBounds, UnknownCommand
from src.extensions.filtrations import find_filtration, verify_certificate
from src.groupoids.bibundles import Bimodule, compose_bibundles, is_morita, rebase
from src.groupoids.cograph import cograph_bimodule
from src.groupoids.functors import Functor
from src.groupoids.nerve import category_from_nerve
from src.kan.conditions import kan
from src.kan.profile import KanProfile, classify_map, classify_object
from src.simplicial.core import SimplicialMap
from src.two_groupoids.bigons import bigon_groupoid, fundamental_groupoid
from src.two_groupoids.composition import compose_2bibundles

logger = logging.getLogger(__name__)

HOLDS = "holds"
FAILS = "fails"
ERROR = "error"


class RunArgs(BaseModel):
    """Arguments shared by all subcommands; each command reads the ones it needs."""

    inputs: List[str] = Field(default_factory=list)
    max_dim: Optional[int] = Field(default=None, ge=0)
    flavor: Literal['inner', 'left', 'right', 'all', 'boundary'] = 'all'
    seed: int = 0
    budget: Optional[int] = Field(default=None, ge=1)
    output: Optional[str] = None
    horn: Optional[Tuple[int, int]] = None
    points: int = Field(default=2, ge=1)
    max_stage: Optional[int] = Field(default=None, ge=0)
    n: int = Field(default=1, ge=0)
    sizes: Dict[str, int] = Field(default_factory=dict)
    verify: bool = False
    model_config = ConfigDict(extra='ignore')


@dataclass
class Outcome:
    holds: bool = True
    results: Dict[str, Any] = field(default_factory=dict)
    witness: Optional[Dict[str, Any]] = None
    value: Any = None
    table: Optional[pd.DataFrame] = None


def profile_label(profile: KanProfile) -> str:
    """Short name of what a scan shows an object to be."""
    if profile.groupoid_level is not None:
        return f"{profile.groupoid_level}-groupoid"
    if profile.is_kan:
        return "Kan complex"
    if profile.is_inner_kan:
        return "inner Kan complex"
    return "not Kan"


def _inputs(args: RunArgs, count: int, expect: List[str]) -> List[Any]:
    if len(args.inputs) != count:
        raise BadParams(f"expected {count} --input document(s), got {len(args.inputs)}")
    return [load_value(path, expect=expect) for path in args.inputs]


def _records(df: pd.DataFrame) -> List[Dict[str, Any]]:
    return df.astype(object).where(df.notna(), None).to_dict(orient='records')


# Commands

def cmd_validate(args: RunArgs) -> Outcome:
    if not args.inputs:
        raise BadParams("validate needs at least one --input document")
    values = [load_value(path) for path in args.inputs]
    return Outcome(results={'documents': [describe(v) for v in values]})


def cmd_classify(args: RunArgs) -> Outcome:
    X, = _inputs(args, 1, ['sset', 'colored'])
    X = X.total if isinstance(X, ColoredSSet) else X
    profile = classify_object(X, args.max_dim)
    return Outcome(results={'profile': profile_label(profile), 'flags': profile.flags()},
                   table=profile.to_frame())


def cmd_classify_map(args: RunArgs) -> Outcome:
    f, = _inputs(args, 1, ['smap'])
    profile = classify_map(f, args.max_dim)
    return Outcome(results={'flags': profile.flags()}, table=profile.to_frame())


def cmd_fill_horn(args: RunArgs) -> Outcome:
    subject, = _inputs(args, 1, ['sset', 'smap'])
    if args.horn is None:
        raise BadParams("fill-horn needs --horn M K")
    m, k = args.horn
    result = kan(subject, m, k)
    return Outcome(holds=result.holds, witness=result.witness,
                   results={'condition': str(result.spec), 'status': result.status,
                            'horns': result.horns,
                            'histogram': {str(n): c for n, c in result.histogram.items()}})


def cmd_find_filtration(args: RunArgs) -> Outcome:
    i, = _inputs(args, 1, ['smap'])
    cert = find_filtration(i, flavor=args.flavor, budget=args.budget)
    verified, _ = verify_certificate(cert, i)
    return Outcome(holds=verified, value=cert,
                   results={'flavor': cert.flavor, 'steps': len(cert), 'verified': verified})


def cmd_nerve(args: RunArgs) -> Outcome:
    C, = _inputs(args, 1, ['groupoid'])
    X = C.nerve()
    return Outcome(value=X, results=describe(X))


def cmd_from_nerve(args: RunArgs) -> Outcome:
    X, = _inputs(args, 1, ['sset'])
    C = category_from_nerve(X)
    return Outcome(value=C, results=describe(C))


def cmd_cograph(args: RunArgs) -> Outcome:
    value, = _inputs(args, 1, ['functor', 'smap', 'bimodule'])
    if isinstance(value, Functor):
        G = higher_cograph(value.nerve_map())
    elif isinstance(value, SimplicialMap):
        G = higher_cograph(value)
    else:
        G = cograph_bimodule(value)
    return Outcome(value=G, results=describe(G))


def cmd_classify_bibundle(args: RunArgs) -> Outcome:
    G, = _inputs(args, 1, ['colored', 'bimodule'])
    G = cograph_bimodule(G) if isinstance(G, Bimodule) else G
    report = classify_bibundle(G, args.n, args.max_dim)
    table = report.to_frame()
    failing = table[table['group'].isin(['inner', 'colored']) & ~table['ok'].astype(bool)]
    witness = None if failing.empty else _records(failing.head(1))[0]
    return Outcome(holds=report.bibundle, witness=witness, results={'flags': report.flags()},
                   table=table)


def cmd_compose(args: RunArgs) -> Outcome:
    P, Q = _inputs(args, 2, ['bimodule'])
    # decoded documents carry their own copy of the middle groupoid
    R = compose_bibundles(P, rebase(Q, P.right, Q.right))
    return Outcome(value=R, results={'name': R.name, 'size': R.size,
                                     'right_principal': R.right_principal().principal,
                                     'morita': is_morita(R)})


def cmd_compose2(args: RunArgs) -> Outcome:
    G, H = _inputs(args, 2, ['colored'])
    composite = compose_2bibundles(G, H, budget=args.budget)
    square = composite.square
    results = {'flags': composite.report.flags(), 'cells': describe(composite.colored)['cells'],
               'variant_square': None if square is None else square.holds}
    return Outcome(holds=composite.report.right_principal and (square is None or square.holds),
                   value=composite.colored, results=results, table=composite.to_frame())


def cmd_bigons(args: RunArgs) -> Outcome:
    subject, = _inputs(args, 1, ['sset', 'colored'])
    E = bigon_groupoid(subject)
    return Outcome(value=E.groupoid, results=describe(E.groupoid))


def cmd_tau(args: RunArgs) -> Outcome:
    X, = _inputs(args, 1, ['sset'])
    tau = fundamental_groupoid(X)
    return Outcome(value=tau, results=describe(tau))


def cmd_jet(args: RunArgs) -> Outcome:
    X, = _inputs(args, 1, ['sset'])
    cap = int(config_value('jet.max_pointed_set', 4))
    if args.points > cap:
        raise SizeOutOfBounds(f"pointed sets are limited to {cap} elements, got {args.points}")
    result = discrete_jet(X, PointedFinSet.of_size(args.points), max_stage=args.max_stage)
    jet = result.jet
    results = {'stabilized_at': result.stabilized_at, 'elements': None if jet is None else len(jet),
               'oracle_size': result.oracle_size, 'verified': result.verified}
    witness = None
    if not result.verified:
        witness = {'stages': [len(s) for s in result.stages], 'stabilized_at': result.stabilized_at}
    return Outcome(holds=result.verified, witness=witness, results=results, table=result.to_frame())


def cmd_corpus(args: RunArgs) -> Outcome:
    sizes = dict(args.sizes)
    if args.max_dim is not None:
        sizes['max_dimension'] = args.max_dim
    instances = corpus(args.seed, sizes)
    if args.output:
        for inst in instances:
            save(inst.value, Path(args.output) / f"{inst.name}.json")
    table = corpus_frame(instances)
    results = {'seed': args.seed, 'instances': len(instances),
               'families': table['family'].value_counts().sort_index().to_dict()}
    holds, witness = True, None
    if args.verify:
        verdicts = [confirm(inst) for inst in instances]
        table['confirmed'] = [v['confirmed'] for v in verdicts]
        failed = [v for v in verdicts if not v['confirmed']]
        holds = not failed
        witness = failed[0] if failed else None
        results['confirmed'] = len(verdicts) - len(failed)
    return Outcome(holds=holds, witness=witness, results=results, table=table)


COMMANDS: Dict[str, Callable[[RunArgs], Outcome]] = {
    'validate': cmd_validate,
    'classify': cmd_classify,
    'classify-map': cmd_classify_map,
    'fill-horn': cmd_fill_horn,
    'find-filtration': cmd_find_filtration,
    'nerve': cmd_nerve,
    'from-nerve': cmd_from_nerve,
    'cograph': cmd_cograph,
    'classify-bibundle': cmd_classify_bibundle,
    'compose': cmd_compose,
    'compose2': cmd_compose2,
    'bigons': cmd_bigons,
    'tau': cmd_tau,
    'jet': cmd_jet,
    'corpus': cmd_corpus,
}

# Commands whose output is a single value rather than a corpus directory
VALUE_COMMANDS = ('find-filtration', 'nerve', 'from-nerve', 'cograph', 'compose', 'compose2', 'bigons', 'tau')


def run(command: str, args: Optional[Dict[str, Any]] = None) -> Tuple[int, Document]:
    """
    Execute one subcommand.

    Args:
        command: One of COMMANDS
        args: Options (see RunArgs); unknown keys are ignored

    Returns:
        (exit code, report document)

    Raises:
        UnknownCommand: command is not one of COMMANDS
    """
    if command not in COMMANDS:
        raise UnknownCommand(f"unknown command {command!r}; expected one of {', '.join(COMMANDS)}",
                             witness={'command': command})
    try:
        parsed = RunArgs.model_validate(args or {})
    except ValidationError as exc:
        first = exc.errors()[0]
        error = BadParams(f"{'.'.join(str(v) for v in first['loc'])}: {first['msg']}")
        return error.code, report_document(command, ERROR, error.code, witness=error.to_dict())

    try:
        outcome = COMMANDS[command](parsed)
    except PropertyFailure as exc:
        logger.info(f"{command}: {exc.message}")
        return exc.code, report_document(command, FAILS, exc.code, witness=exc.to_dict())
    except EngineError as exc:
        logger.error(f"{command}: {exc.message}")
        return exc.code, report_document(command, ERROR, exc.code, witness=exc.to_dict())

    results = dict(outcome.results)
    if outcome.table is not None:
        results['table'] = _records(outcome.table)
    value_doc = None
    if outcome.value is not None and command in VALUE_COMMANDS:
        if parsed.output:
            save(outcome.value, parsed.output)
            results['output'] = parsed.output
        else:
            value_doc = to_document(outcome.value)
    code = 0 if outcome.holds else PropertyFailure.code
    status = HOLDS if outcome.holds else FAILS
    logger.info(f"{command}: {status}")
    return code, report_document(command, status, code, results, outcome.witness, value_doc)


def format_report(report: Document) -> str:
    """Human-readable rendering of a report."""
    p = report.payload
    lines = [f"{p['command']}: {p['status']} (exit {p['exit_code']})"]
    results = dict(p.get('results') or {})
    table = results.pop('table', None)
    for key, value in results.items():
        lines.append(f"  {key}: {value}")
    if p.get('witness'):
        lines.append(f"  witness: {p['witness']}")
    if table:
        lines.append(pd.DataFrame(table).to_string(index=False))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kan-engine",
        description="Kan conditions, nerves, bibundles and jets of finite simplicial sets.",
    )
    parser.add_argument("command", help=f"One of: {', '.join(COMMANDS)}")
    parser.add_argument("--input", dest="inputs", action="append", default=[],
                        help="Input document (repeatable)")
    parser.add_argument("--max-dim", type=int, help="Highest dimension scanned")
    parser.add_argument("--flavor", default="all", help="inner, left, right, all or boundary")
    parser.add_argument("--seed", type=int, default=0, help="Corpus seed")
    parser.add_argument("--json", action="store_true", help="Print the report document")
    parser.add_argument("--budget", type=int, help="Search node budget")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--output", help="Write the produced value (or corpus documents) here")
    parser.add_argument("--horn", type=int, nargs=2, metavar=("M", "K"), help="Horn for fill-horn")
    parser.add_argument("--points", type=int, default=2, help="Size of the pointed set for jet")
    parser.add_argument("--max-stage", type=int, help="Highest jet stage computed")
    parser.add_argument("-n", type=int, default=1, help="Groupoid level of bibundle ends")
    parser.add_argument("--verify", action="store_true", help="Confirm corpus tags with the classifiers")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if ns.verbose else logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )
    try:
        code, report = run(ns.command, vars(ns))
    except UnknownCommand as exc:
        logger.error(exc.message)
        return exc.code
    print(dumps(report) if ns.json else format_report(report), end="" if ns.json else "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
