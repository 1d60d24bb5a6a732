"""
Construction commands.
Builds and verifies eraser and marker cellular automata.
"""
import argparse
from typing import Tuple

from commands.common import CommandGroup, emit, load_rule, rule_argument, word_argument
from models import CyclicWord
from schemas import DiamondSchema, EraserResult, MarkerResult
from services.eraser import build_eraser, verify_eraser
from services.marker import build_marker, mark, spacing_holds, uncovered_positions
from utils import Word, format_word, validate_word

construction_cmds = CommandGroup('constructions')


def _eraser_arguments(parser: argparse.ArgumentParser):
    rule_argument(parser)
    parser.add_argument('--verify-bound', '--periods', type=int, default=8, dest='periods',
                        help='check every cyclic word up to this length')
    parser.add_argument('--trials', type=int, default=1000, help='number of seeded random words checked')


@construction_cmds.command('eraser', 'build the eraser of a non-surjective rule and verify it', _eraser_arguments)
def eraser(args: argparse.Namespace):
    g = load_rule(args)
    built = build_eraser(g)
    report = verify_eraser(built, g, args.periods, trials=args.trials)
    result = EraserResult(
        rule=str(g),
        u=format_word(built.u),
        u_prime=format_word(built.u_prime),
        radius=built.radius,
        diamond=DiamondSchema.from_diamond(built.diamond) if built.diamond is not None else None,
        cyclic_checked=report.cyclic_checked,
        random_checked=report.random_checked,
        idempotent=report.idempotent,
        preserves_image=report.preserves_image,
        local=report.local,
        witness=[format_word(word) for word in report.witness] if report.witness else None,
        passed=report.passed,
    )
    emit(args, result, [f"rule: {result.rule}", str(built)] + report.lines())


CYCLIC_PREFIX = 'cyclic:'


def marker_input(text: str) -> Tuple[Word, bool]:
    """argparse type for '0011010' or 'cyclic:0011010'"""
    cyclic = text.startswith(CYCLIC_PREFIX)
    return word_argument(text[len(CYCLIC_PREFIX):] if cyclic else text), cyclic


def _marker_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--k', type=int, default=2, help='alphabet size')
    parser.add_argument('--N', type=int, default=2, help='marker gap')
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument('--input', type=marker_input, help="input word, or 'cyclic:<word>' for one period")
    source.add_argument('--word', type=word_argument, help='input word')
    parser.add_argument('--cyclic', action='store_true', help='read the word as one period of a configuration')


@construction_cmds.command('marker', 'marks placed by the marker CA on a word', _marker_arguments)
def marker(args: argparse.Namespace):
    if args.input is not None:
        word, cyclic = args.input
        cyclic = cyclic or args.cyclic
    else:
        word, cyclic = args.word, args.cyclic
    built = build_marker(args.k, args.N)
    validate_word(word, args.k)
    x = CyclicWord(word) if cyclic else word
    marks = mark(built, x)
    bits = marks.period_word if cyclic else marks
    result = MarkerResult(
        k=args.k,
        N=args.N,
        priority_windows=len(built.priority_list),
        radius_bound=built.radius_bound,
        input=format_word(word),
        cyclic=cyclic,
        marks=format_word(bits),
        spacing_ok=spacing_holds(bits, args.N, cyclic=cyclic),
        uncovered=uncovered_positions(built, x, marks),
    )
    lines = [
        f"marker k={result.k} N={result.N}: {result.priority_windows} priority windows",
        f"input: {result.input}{' (cyclic)' if result.cyclic else ''}",
        f"marks: {result.marks}",
        f"spacing >= N: {'yes' if result.spacing_ok else 'no'}",
        f"uncovered aperiodic positions: {' '.join(map(str, result.uncovered)) or 'none'}",
    ]
    emit(args, result, lines)
