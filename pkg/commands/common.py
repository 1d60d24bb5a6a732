"""
Common command utilities and helper functions.
"""
import argparse
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Optional

from pydantic import BaseModel

from models import RuleTableCA
from rule_parser import load_rule_spec
from utils import Word, parse_word

Handler = Callable[[argparse.Namespace], None]
Arguments = Callable[[argparse.ArgumentParser], None]


@dataclass
class Command:
    name: str
    help: str
    handler: Handler
    arguments: Optional[Arguments] = None


@dataclass
class CommandGroup:
    """A named set of subcommands, registered on the parser in one call"""
    name: str
    commands: List[Command] = field(default_factory=list)

    def command(self, name: str, help: str, arguments: Arguments = None):
        def decorator(handler: Handler) -> Handler:
            self.commands.append(Command(name, help, handler, arguments))
            return handler
        return decorator

    def register(self, subparsers, parents: Iterable[argparse.ArgumentParser] = ()):
        for command in self.commands:
            parser = subparsers.add_parser(command.name, help=command.help, description=command.help,
                                           parents=list(parents))
            if command.arguments is not None:
                command.arguments(parser)
            parser.set_defaults(handler=command.handler, command=command.name)


def shared_options() -> argparse.ArgumentParser:
    """Options every subcommand accepts"""
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument('--seed', type=int, default=None, help='seed of every randomized corpus')
    parser.add_argument('--budget', type=int, default=None, help='cap on windows enumerated exhaustively')
    parser.add_argument('--log-level', default=None, help='DEBUG, INFO, WARNING or ERROR')
    parser.add_argument('--json', action='store_true', help='print JSON instead of text')
    return parser


def rule_argument(parser: argparse.ArgumentParser):
    parser.add_argument('--rule', required=True, help='eca:N, map:i0,i1,..., shift:left|right or a rule file')


def load_rule(args: argparse.Namespace) -> RuleTableCA:
    return load_rule_spec(args.rule)


def word_argument(text: str) -> Word:
    """argparse type for words written as digit strings or comma lists"""
    try:
        return parse_word(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e))


def emit(args: argparse.Namespace, result: BaseModel, lines: Iterable[str]):
    """Write a command result to stdout, as JSON when --json was given"""
    if args.json:
        sys.stdout.write(result.model_dump_json(indent=2) + '\n')
    else:
        for line in lines:
            sys.stdout.write(line + '\n')
