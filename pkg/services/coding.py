"""
Coding machinery around a forbidden word v.

Unbordered-word predicates, the search for a mutually unbordered triple
(w, w0, w1) around v, exact word counts for the avoid-v and avoid-w SFTs, the
capacity threshold m from which w·(avoid-w)·w blocks outnumber avoid-v words,
the period-separation length, and the rank/unrank injection of avoid-v words
into those blocks.
"""
import logging
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Iterator, List, Tuple

import numpy as np

import config
from exceptions import LengthBelowThreshold, MalformedBlock, NoThresholdFound, SearchBudgetExceeded
from models import Alphabet
from services.language_analysis import AvoidAutomaton, is_mixing_avoid
from utils import Word, all_words, format_word, has_period, occurrences

logger = logging.getLogger(__name__)

POWER_ITERATIONS = 2000
EIGENVALUE_MARGIN = 1e-6


# ============================================================================
# UNBORDERED WORDS
# ============================================================================

def _compatible_at(x: Word, y: Word, offset: int) -> bool:
    """y placed at offset >= 0 relative to x agrees with x on their overlap"""
    end = min(len(x), offset + len(y))
    return all(x[t] == y[t - offset] for t in range(offset, end))


def _overlaps(x: Word, y: Word) -> bool:
    """Some occurrence of y starting inside an occurrence of x is consistent"""
    for offset in range(len(x)):
        if offset == 0 and x == y:
            continue
        if _compatible_at(x, y, offset):
            return True
    return False


def pair_unbordered(x: Word, y: Word) -> bool:
    return not _overlaps(x, y) and not _overlaps(y, x)


def is_mutually_unbordered(words: Iterable[Word]) -> bool:
    """No two occurrences of members (or of one member) can overlap nontrivially"""
    words = [tuple(word) for word in words]
    if any(not word for word in words):
        raise ValueError("unbordered checks need nonempty words")
    return all(not _overlaps(x, y) for x in words for y in words)


def overlaps_only_at_occurrence(v: Word, c: Word) -> bool:
    """
    True if c contains v exactly once and every consistent placement of v
    overlapping c is that occurrence.
    """
    found = occurrences(c, v)
    if len(found) != 1:
        return False
    for offset in range(-len(v) + 1, len(c)):
        if offset == found[0]:
            continue
        compatible = _compatible_at(c, v, offset) if offset >= 0 else _compatible_at(v, c, -offset)
        if compatible:
            return False
    return True


@dataclass(frozen=True)
class UnborderedTriple:
    """Three mutually unbordered words around single copies of v; avoiding w gives a mixing SFT"""
    v: Word
    w: Word
    w0: Word
    w1: Word
    k: int

    def __post_init__(self):
        problems = self.problems()
        if problems:
            raise ValueError(f"invalid triple: {'; '.join(problems)}")

    @property
    def members(self) -> Tuple[Word, Word, Word]:
        return self.w, self.w0, self.w1

    def problems(self) -> List[str]:
        problems = []
        if len(set(self.members)) != 3:
            problems.append("members are not distinct")
        for name, word in zip(('w', 'w0', 'w1'), self.members):
            if not overlaps_only_at_occurrence(self.v, word):
                problems.append(f"{name}={format_word(word)} does not hold v exactly once in isolation")
        if not is_mutually_unbordered(self.members):
            problems.append("members are not mutually unbordered")
        if not is_mixing_avoid(self.w, self.k):
            problems.append(f"avoiding w={format_word(self.w)} is not mixing")
        return problems

    def __str__(self) -> str:
        return f"w={format_word(self.w)} w0={format_word(self.w0)} w1={format_word(self.w1)}"


def padding_candidates(v: Word, k: int) -> Iterator[Word]:
    """p·v·s by total padding length, then |p|, then lexicographic (p, s)"""
    padding = 0
    while True:
        for left in range(padding + 1):
            for prefix in all_words(k, left):
                for suffix in all_words(k, padding - left):
                    yield prefix + v + suffix
        padding += 1


def build_triple(v: Word, k: int, budget: int = None) -> UnborderedTriple:
    """
    First admissible triple in candidate order. Candidates are admitted when
    they hold v once in isolation and are unbordered; a triple is closed when
    a new candidate is compatible with two compatible earlier ones, and its
    first member with a mixing avoid-shift becomes w.
    """
    v = tuple(v)
    Alphabet(k)
    if not v:
        raise ValueError("v must be nonempty")
    budget = config.settings.search_budget if budget is None else budget
    pool: List[Word] = []
    compatible: List[set] = []
    mixing: dict = {}

    for examined, candidate in enumerate(padding_candidates(v, k), start=1):
        if examined > budget:
            raise SearchBudgetExceeded(examined - 1, budget)
        if not overlaps_only_at_occurrence(v, candidate) or _overlaps(candidate, candidate):
            continue
        partners = {index for index, member in enumerate(pool) if pair_unbordered(member, candidate)}
        ordered = sorted(partners)
        for position, a in enumerate(ordered):
            for b in ordered[position + 1:]:
                if b not in compatible[a]:
                    continue
                members = [pool[a], pool[b], candidate]
                for index, member in enumerate(members):
                    if member not in mixing:
                        mixing[member] = is_mixing_avoid(member, k)
                    if mixing[member]:
                        others = [other for other_index, other in enumerate(members) if other_index != index]
                        triple = UnborderedTriple(v, member, others[0], others[1], k)
                        logger.info(f"triple around v={format_word(v)} after {examined} candidates: {triple}")
                        return triple
        for index in partners:
            compatible[index].add(len(pool))
        pool.append(candidate)
        compatible.append(set(partners))


# ============================================================================
# CAPACITY
# ============================================================================

def dominant_eigenvalue(matrix: np.ndarray, iterations: int = POWER_ITERATIONS) -> float:
    """Perron root estimate by power iteration"""
    if matrix.size == 0:
        return 0.0
    vector = np.ones(matrix.shape[0]) / matrix.shape[0]
    for _ in range(iterations):
        following = matrix @ vector
        total = following.sum()
        if total == 0:
            return 0.0
        vector = following / total
    return float((matrix @ vector).sum())


@dataclass
class CapacityReport:
    """
    Exact block counts on [m, m + check_span] and the eigenvalue evidence
    for every larger n.
    """
    m: int
    check_span: int
    rows: List[Tuple[int, int, int]] = field(repr=False)
    growth_avoid_v: float
    growth_avoid_w: float

    @property
    def margin(self) -> float:
        return self.growth_avoid_w - self.growth_avoid_v

    @property
    def numeric_ok(self) -> bool:
        return self.margin > EIGENVALUE_MARGIN

    @property
    def verified_range(self) -> Tuple[int, int]:
        return self.m, self.m + self.check_span

    def certification(self) -> str:
        low, high = self.verified_range
        evidence = "indicated" if self.numeric_ok else "NOT indicated"
        return (f"exact for n in [{low}, {high}]; growth {self.growth_avoid_w:.6f} > {self.growth_avoid_v:.6f} "
                f"{evidence} numerically for larger n")


def block_counts(avoid_v: AvoidAutomaton, avoid_w: AvoidAutomaton, w: Word, n: int) -> Tuple[int, int]:
    """(number of blocks w·s·w of length n, number of avoid-v words of length n)"""
    inner = n - 2 * len(w)
    blocks = avoid_w.count(inner) if inner >= 0 else 0
    return blocks, avoid_v.count(n)


def capacity_threshold(triple: UnborderedTriple, check_span: int = 8, limit: int = None) -> CapacityReport:
    """Least m such that blocks outnumber avoid-v words for every n in [m, m + check_span]"""
    if triple.w == triple.v:
        raise ValueError("w must differ from v")
    limit = config.settings.threshold_scan_limit if limit is None else limit
    avoid_v = AvoidAutomaton([triple.v], triple.k)
    avoid_w = AvoidAutomaton([triple.w], triple.k)
    run_start = None
    rows: List[Tuple[int, int, int]] = []
    for n in range(2 * len(triple.w), limit + 1):
        blocks, words = block_counts(avoid_v, avoid_w, triple.w, n)
        if blocks > words:
            if run_start is None:
                run_start = n
                rows = []
            rows.append((n, blocks, words))
            if n - run_start == check_span:
                report = CapacityReport(
                    m=run_start,
                    check_span=check_span,
                    rows=rows,
                    growth_avoid_v=dominant_eigenvalue(avoid_v.transfer_matrix()),
                    growth_avoid_w=dominant_eigenvalue(avoid_w.transfer_matrix()),
                )
                if not report.numeric_ok:
                    logger.warning(f"growth margin {report.margin:.3g} does not support n beyond {n}")
                logger.info(f"capacity threshold m={report.m} for {triple}")
                return report
        else:
            run_start = None
    raise NoThresholdFound(limit)


# ============================================================================
# PERIOD SEPARATION
# ============================================================================

def has_single_period_structure(word: Word, m: int) -> bool:
    """Every period <= m of the word (below its length) is a multiple of the least one"""
    periods = [p for p in range(1, min(m, len(word) - 1) + 1) if has_period(word, p)]
    return not periods or all(p % periods[0] == 0 for p in periods)


def separation_length_bound(m: int) -> int:
    """max(m + 1, p + q - gcd(p, q)) over distinct p, q <= m"""
    bound = m + 1
    for p in range(1, m + 1):
        for q in range(p + 1, m + 1):
            bound = max(bound, p + q - gcd(p, q))
    return bound


def separation_length(m: int, k: int = 2, budget: int = None) -> int:
    """
    Least L > m such that no word of length >= L carries two periods <= m
    unless one is a multiple of the other. Verified exhaustively up to 2m
    when feasible; longer words are covered by the Fine-Wilf bound.
    """
    if m < 1:
        raise ValueError(f"m must be positive, got {m}")
    Alphabet(k)
    top = max(2 * m, m + 1)
    if k ** top > config.window_budget(budget):
        logger.debug(f"separation length for m={m}, k={k} taken from the Fine-Wilf bound")
        return separation_length_bound(m)
    answer = top
    for length in range(top, m, -1):
        if all(has_single_period_structure(word, m) for word in all_words(k, length)):
            answer = length
        else:
            break
    return answer


# ============================================================================
# BLOCK CODE
# ============================================================================

@dataclass
class CodingKit:
    triple: UnborderedTriple
    capacity: CapacityReport
    k_sep: int
    avoid_v: AvoidAutomaton = field(repr=False)
    avoid_w: AvoidAutomaton = field(repr=False)

    @property
    def m(self) -> int:
        return self.capacity.m

    @property
    def k(self) -> int:
        return self.triple.k

    def count_table(self, low: int, high: int) -> List[Tuple[int, int, int]]:
        return [(n, *block_counts(self.avoid_v, self.avoid_w, self.triple.w, n)) for n in range(low, high + 1)]

    def lines(self) -> List[str]:
        low, high = self.capacity.verified_range
        return [
            f"v={format_word(self.triple.v)} k={self.k}",
            f"triple: {self.triple}",
            f"m={self.m}",
            f"k_sep={self.k_sep}",
            f"verified range: [{low}, {high}]",
            f"certification: {self.capacity.certification()}",
        ]


def build_coding_kit(v: Word, k: int, check_span: int = 8, budget: int = None,
                     search_budget: int = None) -> CodingKit:
    triple = build_triple(v, k, search_budget)
    capacity = capacity_threshold(triple, check_span)
    return CodingKit(
        triple=triple,
        capacity=capacity,
        k_sep=separation_length(capacity.m, k, budget),
        avoid_v=AvoidAutomaton([triple.v], k),
        avoid_w=AvoidAutomaton([triple.w], k),
    )


def encode_rank(kit: CodingKit, u: Word) -> Word:
    """w·s·w where s is the avoid-w word whose rank equals the rank of u among avoid-v words"""
    u = tuple(u)
    n = len(u)
    if n < kit.m:
        raise LengthBelowThreshold(n, kit.m)
    if not kit.avoid_v.accepts(u):
        raise ValueError(f"{format_word(u)} contains v={format_word(kit.triple.v)}")
    blocks, words = block_counts(kit.avoid_v, kit.avoid_w, kit.triple.w, n)
    if blocks <= words:
        raise LengthBelowThreshold(n, kit.m)
    w = kit.triple.w
    inner = kit.avoid_w.unrank(kit.avoid_v.rank(u), n - 2 * len(w))
    return w + inner + w


def decode_rank(kit: CodingKit, block: Word) -> Word:
    block = tuple(block)
    w = kit.triple.w
    if len(block) < 2 * len(w) or block[:len(w)] != w or block[len(block) - len(w):] != w:
        raise MalformedBlock(f"{format_word(block)} is not framed by w={format_word(w)}")
    inner = block[len(w):len(block) - len(w)]
    if not kit.avoid_w.accepts(inner):
        raise MalformedBlock(f"inner word {format_word(inner)} contains w")
    rank = kit.avoid_w.rank(inner)
    n = len(block)
    if rank >= kit.avoid_v.count(n):
        raise MalformedBlock(f"{format_word(block)} is not the image of any avoid-v word")
    return kit.avoid_v.unrank(rank, n)
