"""
Finite-dynamics commands.
Idempotent factorizations of finite maps and the equivariant closure oracle.
"""
import argparse

from commands.common import CommandGroup, emit
from schemas import FactorizationResult, OracleResult
from services.finite_idempotents import FiniteFunction, decompose_finite, monoid_closure_oracle, verify_factorization

finite_cmds = CommandGroup('finite')


def _parse_map(text: str) -> FiniteFunction:
    try:
        return FiniteFunction(tuple(int(part) for part in text.split(',')))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid map {text!r}: {e}")


def _decompose_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--map', type=_parse_map, required=True, dest='function',
                        help="images of 0..n-1, e.g. '0,0,1'")


@finite_cmds.command('decompose-finite', 'factor a finite map into idempotents', _decompose_arguments)
def decompose(args: argparse.Namespace):
    factorization = decompose_finite(args.function)
    result = FactorizationResult(
        target=str(args.function),
        factors=[str(factor) for factor in factorization.factors],
        verified=verify_factorization(factorization),
    )
    lines = [f"target: {result.target}", f"factors (leftmost applied last): {len(result.factors)}"]
    lines.extend(f"  {factor}" for factor in result.factors)
    lines.append(f"verified: {'yes' if result.verified else 'no'}")
    emit(args, result, lines)


def _oracle_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--k', type=int, default=2, help='alphabet size')
    parser.add_argument('--m', type=int, default=2, help='largest period of the carrier')


@finite_cmds.command('oracle', 'compare the idempotent closure with the period condition on Q_{<=m}',
                     _oracle_arguments)
def oracle(args: argparse.Namespace):
    report = monoid_closure_oracle(args.k, args.m)
    result = OracleResult(
        k=report.k,
        m=report.m,
        map_count=report.map_count,
        idempotent_count=report.idempotent_count,
        closure_size=report.closure_size,
        condition_size=report.condition_size,
        sets_equal=report.sets_equal,
        factorization_failures=len(report.factorization_failures),
    )
    emit(args, result, report.lines())
