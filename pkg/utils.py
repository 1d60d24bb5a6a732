"""
Utility functions for words over finite alphabets.
Helpers for parsing, formatting, periods, rotations and counting.
"""
import string
from itertools import product
from typing import Iterator, List, Tuple

Word = Tuple[int, ...]

DIGITS = string.digits + string.ascii_lowercase


def parse_word(text: str, k: int = None) -> Word:
    """
    Parse a word written as a digit string ("0110") or a comma list ("0,1,1,0").

    Digits above 9 use lowercase letters, so alphabets up to 36 symbols can be
    written without separators. Returns a tuple of ints or raises ValueError.
    """
    text = (text or '').strip()
    if not text:
        return ()
    if ',' in text:
        parts = [part.strip() for part in text.split(',')]
        if any(not part.isdigit() for part in parts):
            raise ValueError(f"invalid symbol list: {text!r}")
        word = tuple(int(part) for part in parts)
    else:
        word = []
        for char in text.lower():
            if char not in DIGITS:
                raise ValueError(f"invalid symbol {char!r} in word {text!r}")
            word.append(DIGITS.index(char))
        word = tuple(word)
    if k is not None:
        validate_word(word, k)
    return word


def format_word(word: Word) -> str:
    """Inverse of parse_word for single-character symbols"""
    return ''.join(DIGITS[symbol] for symbol in word)


def validate_word(word: Word, k: int):
    for symbol in word:
        if not 0 <= symbol < k:
            raise ValueError(f"symbol {symbol} outside alphabet of size {k}")


def all_words(k: int, length: int) -> Iterator[Word]:
    """All words of the given length in lexicographic (= base-k big-endian) order"""
    return product(range(k), repeat=length)


def word_index(word: Word, k: int) -> int:
    """Base-k big-endian value of a word, leftmost symbol most significant"""
    index = 0
    for symbol in word:
        index = index * k + symbol
    return index


def index_word(index: int, k: int, length: int) -> Word:
    symbols = [0] * length
    for position in range(length - 1, -1, -1):
        index, symbols[position] = divmod(index, k)
    return tuple(symbols)


def has_period(word: Word, p: int) -> bool:
    """True if word[i] == word[i + p] wherever both indices exist"""
    return all(word[i] == word[i + p] for i in range(len(word) - p))


def rotate(word: Word, steps: int = 1) -> Word:
    """Left rotation: the cyclic analogue of the left shift"""
    if not word:
        return word
    steps %= len(word)
    return word[steps:] + word[:steps]


def least_cyclic_period(word: Word) -> int:
    """Least p with rotate(word, p) == word; always divides len(word)"""
    n = len(word)
    for p in divisors(n):
        if word[p:] + word[:p] == word:
            return p
    return n


def least_rotation(word: Word) -> Word:
    """Lexicographically least rotation (necklace representative)"""
    if not word:
        return word
    return min(rotate(word, s) for s in range(len(word)))


def occurrences(word: Word, pattern: Word) -> List[int]:
    """Start positions of every (possibly overlapping) occurrence of pattern"""
    m = len(pattern)
    return [i for i in range(len(word) - m + 1) if word[i:i + m] == pattern]


def contains(word: Word, pattern: Word) -> bool:
    m = len(pattern)
    return any(word[i:i + m] == pattern for i in range(len(word) - m + 1))


def divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def mobius(n: int) -> int:
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def count_primitive(k: int, n: int) -> int:
    """Number of words of least cyclic period exactly n (Moebius inversion)"""
    return sum(mobius(n // d) * k ** d for d in divisors(n))
