"""
Analysis commands.
Handles surjectivity/preinjectivity analysis, period scans and membership verdicts.
"""
import argparse
import logging
from typing import List

from commands.common import CommandGroup, emit, load_rule, rule_argument
from rule_parser import format_rule, load_rule_spec
from schemas import (
    AnalyzeResult, ClassifyResult, ClassifyRow, DiamondSchema, Eq1Result, Eq1Row, MembershipResult, RuleFileResult,
)
from services.ca_core import is_idempotent, minimal_neighborhood
from services.language_analysis import moore_myhill_crosscheck, sft_approximation
from services.membership import decide_membership, explain
from services.periodic_dynamics import eq1_table
from utils import format_word

logger = logging.getLogger(__name__)

analysis_cmds = CommandGroup('analysis')


def _yes(flag: bool) -> str:
    return 'yes' if flag else 'no'


def _analyze_arguments(parser: argparse.ArgumentParser):
    rule_argument(parser)
    parser.add_argument('--image-words', type=int, default=None, metavar='N',
                        help='also list the length-N words of the image')


@analysis_cmds.command('analyze', 'surjectivity, preinjectivity, orphan and diamond of a rule', _analyze_arguments)
def analyze(args: argparse.Namespace):
    ca = load_rule(args)
    if args.image_words is not None and args.image_words < 1:
        raise ValueError(f"--image-words must be positive, got {args.image_words}")
    report = moore_myhill_crosscheck(ca)
    neighborhood = sorted(minimal_neighborhood(ca))
    image_words = None
    if args.image_words is not None:
        image_words = [format_word(word) for word in sft_approximation(ca, args.image_words)]
    result = AnalyzeResult(
        rule=str(ca),
        k=ca.alphabet.k,
        radius=ca.radius,
        surjective=report.surjective,
        preinjective=report.preinjective,
        orphan=format_word(report.orphan) if report.orphan is not None else None,
        diamond=DiamondSchema.from_diamond(report.diamond) if report.diamond is not None else None,
        minimal_neighborhood=neighborhood,
        idempotent=is_idempotent(ca),
        image_words=image_words,
    )
    lines = [
        f"rule: {result.rule}",
        f"k={result.k} r={result.radius}",
        f"surjective: {_yes(result.surjective)}",
        f"preinjective: {_yes(result.preinjective)}",
        f"orphan: {result.orphan or 'none'}",
        f"diamond: {report.diamond if report.diamond is not None else 'none'}",
        f"minimal neighborhood: {' '.join(map(str, neighborhood)) or 'empty'}",
        f"idempotent: {_yes(result.idempotent)}",
    ]
    if result.image_words is not None:
        lines.append(f"image words (n={args.image_words}): {len(result.image_words)}")
        lines.extend(result.image_words)
    emit(args, result, lines)


def _bound_argument(default: int):
    def arguments(parser: argparse.ArgumentParser):
        rule_argument(parser)
        parser.add_argument('--bound', type=int, default=default, help='largest period scanned')
    return arguments


@analysis_cmds.command('eq1', 'per-period check that onto implies identity', _bound_argument(8))
def eq1(args: argparse.Namespace):
    ca = load_rule(args)
    rows = [
        Eq1Row(
            n=report.n,
            size=report.size,
            maps_onto=report.maps_onto,
            identity=report.is_identity_on,
            witness=str(report.violation_witness) if report.violated else None,
        )
        for report in eq1_table(ca, args.bound)
    ]
    first = next((row.n for row in rows if row.witness is not None), None)
    result = Eq1Result(rule=str(ca), bound=args.bound, rows=rows, first_violation=first)
    lines = [f"rule: {result.rule}"]
    for row in rows:
        line = f"n={row.n} |Q_n|={row.size} onto={_yes(row.maps_onto)} identity={_yes(row.identity)}"
        if row.witness is not None:
            line += f" moved={row.witness}"
        lines.append(line)
    lines.append(f"first violation: {first if first is not None else 'none'}")
    emit(args, result, lines)


def _membership_result(rule: str, verdict) -> MembershipResult:
    return MembershipResult(
        rule=rule,
        verdict=verdict.kind.value,
        label=verdict.label,
        certificate=verdict.certificate.value if verdict.certificate else None,
        witness=verdict.witness.value if verdict.witness else None,
        bound=verdict.bound,
        details=verdict.details,
        explanation=explain(verdict),
    )


@analysis_cmds.command('membership', 'bounded verdict on membership in the idempotent-generated monoid',
                       _bound_argument(8))
def membership(args: argparse.Namespace):
    ca = load_rule(args)
    result = _membership_result(str(ca), decide_membership(ca, args.bound))
    emit(args, result, [f"rule: {result.rule}"] + result.explanation)


def _rule_numbers(text: str) -> List[int]:
    """'0-255', '0,128,136' or a mix such as '0-3,204'"""
    numbers = []
    for part in text.split(','):
        part = part.strip()
        if '-' in part:
            low, high = part.split('-', 1)
            numbers.extend(range(int(low), int(high) + 1))
        elif part:
            numbers.append(int(part))
    return numbers


def _classify_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--rules', default='0-255', help="elementary rule numbers, e.g. '0-255' or '0,136,204'")
    parser.add_argument('--bound', type=int, default=6, help='largest period scanned')


@analysis_cmds.command('classify', 'membership verdicts for a list of elementary rules', _classify_arguments)
def classify(args: argparse.Namespace):
    try:
        numbers = _rule_numbers(args.rules)
    except ValueError:
        raise ValueError(f"invalid rule list {args.rules!r}")
    rows = []
    for number in numbers:
        ca = load_rule_spec(f"eca:{number}")
        rows.append(ClassifyRow(rule=str(ca), verdict=decide_membership(ca, args.bound).label))
    logger.info(f"classified {len(rows)} rules up to period {args.bound}")
    result = ClassifyResult(bound=args.bound, rows=rows)
    emit(args, result, [f"{row.rule} {row.verdict}" for row in rows])


@analysis_cmds.command('export-rule', 'print a rule in rule-file form', rule_argument)
def export_rule(args: argparse.Namespace):
    ca = load_rule(args)
    result = RuleFileResult(rule=str(ca), k=ca.alphabet.k, radius=ca.radius, text=format_rule(ca))
    emit(args, result, result.text.splitlines())
