"""
Marker CA: sparse 1s at least N apart, such that every stretch left unmarked
around a position certifies a period p < N there.

A position is marked when its window x[i-N .. i+N] has no period p < N and
no position within distance N-1 carries a mark with a higher-priority window.
Priority is lexicographic order on windows.
"""
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Tuple, Union

from exceptions import WordTooShort
from models import Alphabet, CyclicWord, ProceduralCA
from services.ca_core import ensure_feasible
from utils import Word, all_words, has_period

logger = logging.getLogger(__name__)


def is_aperiodic_window(window: Word, gap: int) -> bool:
    """True if the window has no period p with 1 <= p < gap"""
    return not any(has_period(window, p) for p in range(1, gap))


@dataclass(frozen=True)
class MarkerCA:
    alphabet: Alphabet
    N: int
    priority_list: Tuple[Word, ...] = field(repr=False)
    rank: Dict[Word, int] = field(repr=False, compare=False)
    base: Optional[ProceduralCA] = field(default=None, repr=False, compare=False)

    @property
    def window_length(self) -> int:
        return 2 * self.N + 1

    @property
    def radius_bound(self) -> int:
        return self.N + (self.N - 1) * len(self.priority_list)

    def rank_of(self, window: Word) -> Optional[int]:
        return self.rank.get(tuple(window))


def _local_rule(N: int, rank: Dict[Word, int], radius: int):
    """Marking rule evaluated inside one window, by recursion on priority rank"""

    def evaluate(window: Word) -> int:

        @lru_cache(maxsize=None)
        def window_rank(position: int) -> Optional[int]:
            if position - N < 0 or position + N >= len(window):
                return None
            return rank.get(window[position - N:position + N + 1])

        @lru_cache(maxsize=None)
        def marked(position: int) -> bool:
            own = window_rank(position)
            if own is None:
                return False
            for other in range(position - N + 1, position + N):
                if other == position:
                    continue
                other_rank = window_rank(other)
                if other_rank is not None and other_rank < own and marked(other):
                    return False
            return True

        return int(marked(radius))

    return evaluate


def build_marker(k: int, N: int, budget: int = None) -> MarkerCA:
    alphabet = Alphabet(k)
    if N < 1:
        raise ValueError(f"marker gap must be at least 1, got {N}")
    length = 2 * N + 1
    ensure_feasible(k ** length, budget)
    priority_list = tuple(window for window in all_words(k, length) if is_aperiodic_window(window, N))
    rank = {window: position for position, window in enumerate(priority_list)}
    radius = N + (N - 1) * len(priority_list)
    base = ProceduralCA(alphabet, radius, _local_rule(N, rank, radius), name=f"marker:k={k},N={N}", output_k=2)
    logger.debug(f"marker k={k} N={N}: {len(priority_list)} priority windows, radius bound {radius}")
    return MarkerCA(alphabet, N, priority_list, rank, base)


def _greedy(ranks: List[Optional[int]], neighbours) -> List[int]:
    """Place marks in ascending priority, skipping positions near a stronger mark"""
    marks = [0] * len(ranks)
    order = sorted((rank, position) for position, rank in enumerate(ranks) if rank is not None)
    for rank, position in order:
        if not any(marks[other] and ranks[other] < rank for other in neighbours(position)):
            marks[position] = 1
    return marks


def mark(marker: MarkerCA, x: Union[Word, CyclicWord]) -> Union[Word, CyclicWord]:
    """
    Marker output. Cyclic input gives a cyclic output of the same length; a
    plain word gives the marks of its positions with a full window, computed
    among those positions only.
    """
    N = marker.N
    reach = N - 1
    if isinstance(x, CyclicWord):
        n = len(x)
        ranks = [marker.rank_of(x.window(i - N, marker.window_length)) for i in range(n)]

        def cyclic_neighbours(i: int):
            around = {(i + d) % n for d in range(1, reach + 1)} | {(i - d) % n for d in range(1, reach + 1)}
            around.discard(i)
            return around

        return CyclicWord(tuple(_greedy(ranks, cyclic_neighbours)))

    word = tuple(x)
    if len(word) < marker.window_length:
        raise WordTooShort(len(word), marker.window_length)
    ranks = [marker.rank_of(word[i - N:i + N + 1]) for i in range(N, len(word) - N)]

    def neighbours(i: int):
        return [j for j in range(max(0, i - reach), min(len(ranks), i + reach + 1)) if j != i]

    return tuple(_greedy(ranks, neighbours))


def spacing_holds(marks: Word, N: int, cyclic: bool = False) -> bool:
    """Any two 1s are at distance >= N"""
    ones = [position for position, bit in enumerate(marks) if bit]
    n = len(marks)
    for index, i in enumerate(ones):
        for j in ones[index + 1:]:
            d = j - i
            if cyclic:
                d = min(d, n - d)
            if d < N:
                return False
    return True


def uncovered_positions(marker: MarkerCA, x: Union[Word, CyclicWord], marks) -> List[int]:
    """
    Positions whose window has no period p < N but which see no 1 within
    distance N-1. Positions are those of `marks`.
    """
    N = marker.N
    uncovered = []
    if isinstance(x, CyclicWord):
        bits = marks.period_word
        n = len(x)
        for i in range(n):
            if not is_aperiodic_window(x.window(i - N, marker.window_length), N):
                continue
            if not any(bits[(i + d) % n] for d in range(-(N - 1), N)):
                uncovered.append(i)
        return uncovered
    word = tuple(x)
    for i in range(len(marks)):
        if not is_aperiodic_window(word[i:i + marker.window_length], N):
            continue
        if not any(marks[j] for j in range(max(0, i - N + 1), min(len(marks), i + N))):
            uncovered.append(i)
    return uncovered
