"""
Domain models for one-dimensional cellular automata on full shifts.
All value types are immutable after construction.
"""
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Optional

import numpy as np

from utils import (
    Word, format_word, least_cyclic_period, least_rotation, rotate, validate_word, word_index,
)

# Symbols are stored in int16 tables, which covers every alphabet parse_word can express
TABLE_DTYPE = np.int16


@dataclass(frozen=True)
class Alphabet:
    """The symbol set {0, ..., k-1}"""
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 2:
            raise ValueError(f"alphabet needs at least two symbols, got k={self.k}")

    @property
    def symbols(self) -> range:
        return range(self.k)


@dataclass(frozen=True, eq=False)
class CyclicWord:
    """
    A spatially periodic configuration x with x_i = period_word[i mod n].

    Equality and hashing are those of the configuration, so the cyclic words
    01 and 0101 are equal. `canonical()` gives the orbit (necklace) representative.
    """
    period_word: Word

    def __post_init__(self):
        word = tuple(self.period_word)
        if not word:
            raise ValueError("a cyclic word needs at least one symbol")
        object.__setattr__(self, 'period_word', word)

    @cached_property
    def least_period(self) -> int:
        return least_cyclic_period(self.period_word)

    @property
    def root(self) -> Word:
        """One least period of the configuration"""
        return self.period_word[:self.least_period]

    def primitive(self) -> 'CyclicWord':
        return CyclicWord(self.root)

    def canonical(self) -> 'CyclicWord':
        return CyclicWord(least_rotation(self.root))

    def rotate(self, steps: int = 1) -> 'CyclicWord':
        return CyclicWord(rotate(self.period_word, steps))

    def window(self, start: int, length: int) -> Word:
        """Cells start .. start+length-1 of the configuration"""
        n = len(self.period_word)
        return tuple(self.period_word[(start + i) % n] for i in range(length))

    def __len__(self) -> int:
        return len(self.period_word)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.root == other.root

    def __hash__(self) -> int:
        return hash(self.root)

    def __lt__(self, other: 'CyclicWord') -> bool:
        return (len(self.root), self.root) < (len(other.root), other.root)

    def __str__(self) -> str:
        return format_word(self.period_word)

    def __repr__(self) -> str:
        return f"CyclicWord({format_word(self.period_word)!r})"


@dataclass(frozen=True, eq=False)
class RuleTableCA:
    """
    Exact finite-radius local rule.

    table[i] is the output on the window whose base-k big-endian value is i,
    so the table has k^(2r+1) entries.
    """
    alphabet: Alphabet
    radius: int
    table: np.ndarray
    name: str = field(default='', compare=False)

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"radius must be non-negative, got {self.radius}")
        table = np.array(self.table, dtype=TABLE_DTYPE).reshape(-1)
        expected = self.alphabet.k ** (2 * self.radius + 1)
        if table.size != expected:
            raise ValueError(f"table has {table.size} entries, expected {expected}")
        if table.min() < 0 or table.max() >= self.alphabet.k:
            raise ValueError(f"table entries must lie in 0..{self.alphabet.k - 1}")
        table.setflags(write=False)
        object.__setattr__(self, 'table', table)

    @property
    def k(self) -> int:
        return self.alphabet.k

    @property
    def window_length(self) -> int:
        return 2 * self.radius + 1

    def local(self, window: Word) -> int:
        if len(window) != self.window_length:
            raise ValueError(f"window of length {len(window)} given to a radius-{self.radius} rule")
        return int(self.table[word_index(window, self.alphabet.k)])

    def __str__(self) -> str:
        return self.name or f"table(k={self.k}, r={self.radius})"


@dataclass(frozen=True, eq=False)
class ProceduralCA:
    """
    A CA given by an evaluation procedure and a declared radius.

    `evaluate` must be a pure function of the window contents. The output
    alphabet defaults to the input alphabet (the marker CA outputs {0, 1}).
    """
    alphabet: Alphabet
    radius: int
    evaluate: Callable[[Word], int]
    name: str = field(default='', compare=False)
    output_k: Optional[int] = None

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError(f"radius must be non-negative, got {self.radius}")

    @property
    def k(self) -> int:
        return self.alphabet.k

    @property
    def window_length(self) -> int:
        return 2 * self.radius + 1

    def local(self, window: Word) -> int:
        if len(window) != self.window_length:
            raise ValueError(f"window of length {len(window)} given to a radius-{self.radius} rule")
        return self.evaluate(tuple(window))

    def __str__(self) -> str:
        return self.name or f"procedural(k={self.k}, r={self.radius})"


def check_word(word: Word, alphabet: Alphabet) -> Word:
    word = tuple(word)
    validate_word(word, alphabet.k)
    return word
