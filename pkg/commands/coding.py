"""
Coding commands.
Builds the unbordered-triple kit around a word v and encodes/decodes blocks with it.
"""
import argparse

from commands.common import CommandGroup, emit, word_argument
from schemas import CodeResult, CodingKitResult, CountRow
from services.coding import build_coding_kit, decode_rank, encode_rank
from utils import format_word, validate_word

coding_cmds = CommandGroup('coding')


def _kit_arguments(parser: argparse.ArgumentParser):
    parser.add_argument('--v', type=word_argument, required=True, help='the forbidden word')
    parser.add_argument('--k', type=int, default=2, help='alphabet size')
    parser.add_argument('--span', type=int, default=8, help='exact verification span above m')


def _kit(args: argparse.Namespace):
    validate_word(args.v, args.k)
    return build_coding_kit(args.v, args.k, check_span=args.span)


@coding_cmds.command('coding-kit', 'unbordered triple, capacity threshold and separation length', _kit_arguments)
def coding_kit(args: argparse.Namespace):
    kit = _kit(args)
    low, high = kit.capacity.verified_range
    result = CodingKitResult(
        v=format_word(kit.triple.v),
        k=kit.k,
        w=format_word(kit.triple.w),
        w0=format_word(kit.triple.w0),
        w1=format_word(kit.triple.w1),
        m=kit.m,
        k_sep=kit.k_sep,
        verified_range=[low, high],
        certification=kit.capacity.certification(),
        growth_avoid_v=round(kit.capacity.growth_avoid_v, 9),
        growth_avoid_w=round(kit.capacity.growth_avoid_w, 9),
        counts=[CountRow(n=n, blocks=blocks, words=words) for n, blocks, words in kit.capacity.rows],
    )
    lines = kit.lines()
    lines.extend(f"n={row.n} blocks={row.blocks} words={row.words}" for row in result.counts)
    emit(args, result, lines)


def _encode_arguments(parser: argparse.ArgumentParser):
    _kit_arguments(parser)
    parser.add_argument('--word', type=word_argument, required=True, help='word avoiding v')


@coding_cmds.command('encode', 'map a word avoiding v to its block w s w', _encode_arguments)
def encode(args: argparse.Namespace):
    kit = _kit(args)
    validate_word(args.word, args.k)
    block = encode_rank(kit, args.word)
    result = CodeResult(v=format_word(kit.triple.v), k=kit.k, input=format_word(args.word), output=format_word(block))
    emit(args, result, [result.output])


def _decode_arguments(parser: argparse.ArgumentParser):
    _kit_arguments(parser)
    parser.add_argument('--block', type=word_argument, required=True, help='block of the form w s w')


@coding_cmds.command('decode', 'recover the word avoiding v from its block', _decode_arguments)
def decode(args: argparse.Namespace):
    kit = _kit(args)
    validate_word(args.block, args.k)
    word = decode_rank(kit, args.block)
    result = CodeResult(v=format_word(kit.triple.v), k=kit.k, input=format_word(args.block), output=format_word(word))
    emit(args, result, [result.output])
