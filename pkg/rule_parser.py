#!/usr/bin/env python3
"""
Rule Spec Parser
Reads cellular automaton rules from inline shorthands and line-oriented rule files
"""

import os
import re
from typing import Dict, Optional

from exceptions import RuleSpecError
from models import Alphabet, RuleTableCA
from services.ca_core import eca, shift_ca, symbol_map
from utils import DIGITS, format_word


class RuleSpecParser:
    """Parser for `eca:N`, `map:...`, `shift:...` shorthands and `key=value` rule files"""

    def __init__(self):
        # Keys accepted in rule files, in the order format_rule writes them
        self.keys = ('name', 'k', 'r', 'table')
        self.required = ('k', 'r', 'table')

        # Inline shorthands
        self.shorthand_pattern = re.compile(r'^(eca|map|shift):(.*)$')
        self.line_pattern = re.compile(r'^\s*([A-Za-z_]+)\s*=\s*(.*?)\s*$')

    def is_shorthand(self, source: str) -> bool:
        return bool(self.shorthand_pattern.match(source.strip()))

    def parse_inline(self, source: str) -> RuleTableCA:
        """Expand a one-line shorthand into a rule table"""
        source = source.strip()
        match = self.shorthand_pattern.match(source)
        if not match:
            raise RuleSpecError(f"unknown rule shorthand {source!r}", 1, 1)
        kind, argument = match.groups()
        column = len(kind) + 2
        if kind == 'eca':
            if not argument.isdigit():
                raise RuleSpecError(f"elementary rule number expected, got {argument!r}", 1, column)
            number = int(argument)
            if number > 255:
                raise RuleSpecError(f"elementary rule number must be in 0..255, got {number}", 1, column)
            return eca(number)
        if kind == 'shift':
            # shift:left, shift:right, optionally shift:left:3 for a k=3 shift
            parts = argument.split(':')
            if parts[0] not in ('left', 'right') or len(parts) > 2:
                raise RuleSpecError(f"shift direction must be left or right, got {argument!r}", 1, column)
            k = self._parse_int(parts[1], 1, column + len(parts[0]) + 1, 'k') if len(parts) == 2 else 2
            return shift_ca(self._alphabet(k, 1, column).k, parts[0])
        # map:i0,i1,...  images of the symbols 0..k-1 under a radius-0 rule
        images = []
        position = column
        for part in argument.split(','):
            images.append(self._parse_int(part, 1, position, 'symbol image'))
            position += len(part) + 1
        k = len(images)
        self._alphabet(k, 1, column)
        for index, image in enumerate(images):
            if image >= k:
                raise RuleSpecError(f"image {image} of symbol {index} is outside 0..{k - 1}", 1, column)
        return symbol_map(k, images)

    def parse_text(self, text: str) -> RuleTableCA:
        """Parse the body of a rule file"""
        values: Dict[str, str] = {}
        positions: Dict[str, tuple] = {}

        for line_number, raw in enumerate(text.splitlines(), start=1):
            line = raw.split('#', 1)[0]
            if not line.strip():
                continue
            match = self.line_pattern.match(line)
            if not match:
                column = len(line) - len(line.lstrip()) + 1
                raise RuleSpecError("expected key=value", line_number, column)
            key = match.group(1).lower()
            key_column = match.start(1) + 1
            if key not in self.keys:
                raise RuleSpecError(f"unknown key {key!r}", line_number, key_column)
            if key in values:
                raise RuleSpecError(f"duplicate key {key!r}", line_number, key_column)
            values[key] = match.group(2)
            positions[key] = (line_number, match.start(2) + 1)

        last_line = max(len(text.splitlines()), 1)
        for key in self.required:
            if key not in values:
                raise RuleSpecError(f"missing key {key!r}", last_line, 1)

        k = self._parse_int(values['k'], *positions['k'], 'k')
        alphabet = self._alphabet(k, *positions['k'])
        radius = self._parse_int(values['r'], *positions['r'], 'r')

        line_number, column = positions['table']
        table = []
        for offset, char in enumerate(values['table']):
            symbol = DIGITS.find(char.lower())
            if symbol < 0 or symbol >= k:
                raise RuleSpecError(f"invalid table symbol {char!r} for k={k}", line_number, column + offset)
            table.append(symbol)
        expected = k ** (2 * radius + 1)
        if len(table) != expected:
            raise RuleSpecError(f"table has {len(table)} entries, expected k^(2r+1) = {expected}",
                                line_number, column)
        return RuleTableCA(alphabet, radius, table, name=values.get('name', ''))

    def load(self, source: str) -> RuleTableCA:
        """Inline shorthand, or path to a rule file"""
        if self.is_shorthand(source):
            return self.parse_inline(source)
        if not os.path.isfile(source):
            raise RuleSpecError(f"not a rule shorthand or readable file: {source!r}")
        with open(source, encoding='utf-8') as handle:
            rule = self.parse_text(handle.read())
        if not rule.name:
            rule = RuleTableCA(rule.alphabet, rule.radius, rule.table, name=os.path.basename(source))
        return rule

    def _parse_int(self, text: str, line: int, column: int, what: str) -> int:
        text = text.strip()
        if not text.isdigit():
            raise RuleSpecError(f"{what} must be a non-negative integer, got {text!r}", line, column)
        return int(text)

    def _alphabet(self, k: int, line: int, column: int) -> Alphabet:
        if not 2 <= k <= len(DIGITS):
            raise RuleSpecError(f"k must be in 2..{len(DIGITS)}, got {k}", line, column)
        return Alphabet(k)


def format_rule(ca: RuleTableCA, name: Optional[str] = None) -> str:
    """Rule file text that parse_rule_text reads back into the same table"""
    lines = []
    label = name if name is not None else ca.name
    if label:
        lines.append(f"name={label}")
    lines.append(f"k={ca.alphabet.k}")
    lines.append(f"r={ca.radius}")
    lines.append(f"table={format_word(tuple(int(symbol) for symbol in ca.table))}")
    return '\n'.join(lines) + '\n'


# Create a global instance
rule_parser = RuleSpecParser()


def parse_rule_text(text: str) -> RuleTableCA:
    """Convenience function to parse rule file text"""
    return rule_parser.parse_text(text)


def load_rule_spec(source: str) -> RuleTableCA:
    """Convenience function to load an inline shorthand or rule file"""
    return rule_parser.load(source)
