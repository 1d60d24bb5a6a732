"""
Algebra of one-dimensional cellular automata on full shifts.

Application to finite and cyclic words, composition, powers, extensional
equality, neighborhood minimization and the structural predicates used by
the membership certificates. Rule tables are handled as numpy arrays indexed
by the base-k big-endian value of the window.
"""
import logging
import random
from dataclasses import dataclass
from typing import FrozenSet, Optional, Union

import numpy as np

import config
from exceptions import AlphabetMismatch, ExhaustiveCheckInfeasible, WordTooShort
from models import Alphabet, CyclicWord, ProceduralCA, RuleTableCA
from utils import Word, all_words, format_word, index_word

logger = logging.getLogger(__name__)

CA = Union[RuleTableCA, ProceduralCA]


def ensure_feasible(required: int, budget: int = None, what: str = "windows") -> int:
    """Raise ExhaustiveCheckInfeasible when an enumeration exceeds the budget"""
    budget = config.window_budget(budget)
    if required > budget:
        raise ExhaustiveCheckInfeasible(required, budget, what)
    return required


# ============================================================================
# CONSTRUCTORS
# ============================================================================

def identity_ca(alphabet: Alphabet, radius: int = 0) -> RuleTableCA:
    k = alphabet.k
    index = np.arange(k ** (2 * radius + 1), dtype=np.int64)
    return RuleTableCA(alphabet, radius, (index // k ** radius) % k, name='id')


def eca(number: int) -> RuleTableCA:
    """Elementary CA in Wolfram numbering: window abc reads bit 4a+2b+c"""
    if not 0 <= number <= 255:
        raise ValueError(f"elementary rule number must be in 0..255, got {number}")
    table = [(number >> index) & 1 for index in range(8)]
    return RuleTableCA(Alphabet(2), 1, table, name=f'eca:{number}')


def symbol_map(k: int, images) -> RuleTableCA:
    """Radius-0 CA applying a map on symbols cell by cell"""
    images = list(images)
    if len(images) != k:
        raise ValueError(f"symbol map needs {k} images, got {len(images)}")
    return RuleTableCA(Alphabet(k), 0, images, name='map:' + ','.join(map(str, images)))


def shift_ca(k: int, direction: str = 'left') -> RuleTableCA:
    """Left shift outputs the right neighbour, right shift the left neighbour"""
    index = np.arange(k ** 3, dtype=np.int64)
    if direction == 'left':
        table = index % k
    elif direction == 'right':
        table = index // (k * k)
    else:
        raise ValueError(f"unknown shift direction {direction!r}")
    return RuleTableCA(Alphabet(k), 1, table, name=f'shift:{direction}')


def _outputs_at_radius(ca: CA, radius: int, budget: int = None) -> np.ndarray:
    """Outputs of ca on every window of the larger radius, extra margins ignored"""
    k = ca.alphabet.k
    length = 2 * radius + 1
    ensure_feasible(k ** length, budget)
    if isinstance(ca, RuleTableCA):
        index = np.arange(k ** length, dtype=np.int64)
        inner = (index // k ** (radius - ca.radius)) % k ** ca.window_length
        return ca.table[inner]
    margin = radius - ca.radius
    outputs = np.empty(k ** length, dtype=np.int64)
    for position, window in enumerate(all_words(k, length)):
        outputs[position] = ca.local(window[margin:length - margin])
    return outputs


def as_table(ca: CA, budget: int = None) -> RuleTableCA:
    """Materialize a procedural CA as a rule table"""
    if isinstance(ca, RuleTableCA):
        return ca
    return RuleTableCA(ca.alphabet, ca.radius, _outputs_at_radius(ca, ca.radius, budget), name=ca.name)


# ============================================================================
# APPLICATION
# ============================================================================

def apply_to_word(ca: CA, word: Word) -> Word:
    """Apply the local rule at every position with a full window; output is 2r shorter"""
    word = tuple(word)
    length = ca.window_length
    if len(word) < length:
        raise WordTooShort(len(word), length)
    if isinstance(ca, RuleTableCA):
        k = ca.alphabet.k
        modulus = k ** length
        index = 0
        for symbol in word[:length - 1]:
            index = index * k + symbol
        output = []
        table = ca.table
        for symbol in word[length - 1:]:
            index = (index * k + symbol) % modulus
            output.append(int(table[index]))
        return tuple(output)
    return tuple(ca.local(word[j:j + length]) for j in range(len(word) - length + 1))


def apply_to_cyclic(ca: CA, x: CyclicWord) -> CyclicWord:
    """Image of a spatially periodic point, with a period word of the same length"""
    n = len(x.period_word)
    return CyclicWord(apply_to_word(ca, x.window(-ca.radius, n + 2 * ca.radius)))


# ============================================================================
# COMPOSITION AND POWERS
# ============================================================================

def compose(f: CA, g: CA, budget: int = None) -> CA:
    """
    The CA x -> f(g(x)) of radius r_f + r_g.

    Two rule tables compose into a rule table while k^(2(r_f+r_g)+1) stays
    within the budget; otherwise the result is procedural.
    """
    if f.alphabet.k != g.alphabet.k:
        raise AlphabetMismatch(f.alphabet.k, g.alphabet.k)
    k = f.alphabet.k
    radius = f.radius + g.radius
    name = f"({f} o {g})"
    windows = k ** (2 * radius + 1)
    if isinstance(f, RuleTableCA) and isinstance(g, RuleTableCA) and windows <= config.window_budget(budget):
        index = np.arange(windows, dtype=np.int64)
        inner_size = k ** g.window_length
        outer_index = np.zeros(windows, dtype=np.int64)
        for offset in range(f.window_length):
            # g applied to the sub-window starting at this offset
            sub = (index // k ** (2 * f.radius - offset)) % inner_size
            outer_index = outer_index * k + g.table[sub]
        return RuleTableCA(f.alphabet, radius, f.table[outer_index], name=name)

    logger.debug(f"composing {name} procedurally ({windows} windows)")

    def evaluate(window: Word) -> int:
        return f.local(apply_to_word(g, window))

    return ProceduralCA(f.alphabet, radius, evaluate, name=name)


def power(ca: CA, n: int, budget: int = None) -> CA:
    """n-fold composition; power 0 is the radius-0 identity"""
    if n < 0:
        raise ValueError(f"power must be non-negative, got {n}")
    if n == 0:
        return identity_ca(ca.alphabet, 0)
    result = ca
    for _ in range(n - 1):
        result = compose(ca, result, budget)
    return result


# ============================================================================
# EQUALITY
# ============================================================================

def equals(f: CA, g: CA, budget: int = None) -> bool:
    """Extensional equality, decided on all windows of the common radius"""
    if f.alphabet.k != g.alphabet.k:
        raise AlphabetMismatch(f.alphabet.k, g.alphabet.k)
    radius = max(f.radius, g.radius)
    return bool(np.array_equal(_outputs_at_radius(f, radius, budget), _outputs_at_radius(g, radius, budget)))


def first_difference(f: CA, g: CA, budget: int = None) -> Optional[Word]:
    """Least window of the common radius on which f and g differ, if any"""
    if f.alphabet.k != g.alphabet.k:
        raise AlphabetMismatch(f.alphabet.k, g.alphabet.k)
    radius = max(f.radius, g.radius)
    differing = np.flatnonzero(_outputs_at_radius(f, radius, budget) != _outputs_at_radius(g, radius, budget))
    if differing.size == 0:
        return None
    return index_word(int(differing[0]), f.alphabet.k, 2 * radius + 1)


@dataclass
class AgreementReport:
    """Outcome of a sampled comparison of two CA"""
    agree: bool
    cyclic_checked: int
    random_checked: int
    cyclic_witness: Optional[CyclicWord] = None
    word_witness: Optional[Word] = None

    def __str__(self) -> str:
        if self.agree:
            return f"agree on sample ({self.cyclic_checked} cyclic, {self.random_checked} random)"
        if self.cyclic_witness is not None:
            return f"disagree on cyclic word {self.cyclic_witness}"
        return f"disagree on word {format_word(self.word_witness)}"


def sampled_agreement(f: CA, g: CA, periods: int, random_trials: int = 0, seed: int = None,
                      extra_length: int = 8) -> AgreementReport:
    """
    Compare f and g on every cyclic word of length <= periods and on random
    words with full margins. Deterministic for a given seed.
    """
    if f.alphabet.k != g.alphabet.k:
        raise AlphabetMismatch(f.alphabet.k, g.alphabet.k)
    k = f.alphabet.k
    cyclic_checked = 0
    for n in range(1, periods + 1):
        for word in all_words(k, n):
            x = CyclicWord(word)
            cyclic_checked += 1
            if apply_to_cyclic(f, x) != apply_to_cyclic(g, x):
                return AgreementReport(False, cyclic_checked, 0, cyclic_witness=x)

    rng = random.Random(config.settings.seed if seed is None else seed)
    radius = max(f.radius, g.radius)
    for trial in range(random_trials):
        length = 2 * radius + 1 + rng.randint(0, extra_length)
        word = tuple(rng.randrange(k) for _ in range(length))
        out_f = apply_to_word(f, word)
        out_g = apply_to_word(g, word)
        trim_f = radius - f.radius
        trim_g = radius - g.radius
        if out_f[trim_f:len(out_f) - trim_f] != out_g[trim_g:len(out_g) - trim_g]:
            return AgreementReport(False, cyclic_checked, trial + 1, word_witness=word)
    return AgreementReport(True, cyclic_checked, random_trials)


# ============================================================================
# NEIGHBORHOODS AND PREDICATES
# ============================================================================

def minimal_neighborhood(ca: CA, budget: int = None) -> FrozenSet[int]:
    """Offsets in [-r, r] on which the output actually depends"""
    k = ca.alphabet.k
    length = ca.window_length
    outputs = _outputs_at_radius(ca, ca.radius, budget).reshape((k,) * length)
    offsets = set()
    for axis in range(length):
        reference = np.take(outputs, [0], axis=axis)
        if np.any(outputs != reference):
            offsets.add(axis - ca.radius)
    return frozenset(offsets)


def minimize_radius(ca: CA, budget: int = None) -> RuleTableCA:
    """The same CA as a rule table at the radius of its minimal neighborhood"""
    neighborhood = minimal_neighborhood(ca, budget)
    radius = max((abs(offset) for offset in neighborhood), default=0)
    table = as_table(ca, budget)
    if radius == table.radius:
        return table
    k = ca.alphabet.k
    index = np.arange(k ** (2 * radius + 1), dtype=np.int64)
    # embed each small window in the middle of a zero-padded large one
    padded = index * k ** (table.radius - radius)
    return RuleTableCA(ca.alphabet, radius, table.table[padded], name=table.name)


def is_idempotent(ca: CA, budget: int = None) -> bool:
    return equals(compose(ca, ca, budget), ca, budget)


@dataclass
class PowerScan:
    """
    Outcome of comparing ca^(m+1) with ca^m for m = 0, 1, ...

    checked_up_to is the largest m whose comparison was decided; it falls short
    of the bound when a power outgrew the window budget.
    """
    m: Optional[int]
    checked_up_to: int
    stopped_early: bool = False
    stable_power: Optional[RuleTableCA] = None


def eventual_idempotency_scan(ca: CA, bound: int, budget: int = None) -> PowerScan:
    """Powers are minimized as they are built, so radii grow with the true neighborhood"""
    base = minimize_radius(ca, budget)
    current = identity_ca(base.alphabet, 0)
    following = base
    decided = -1
    for m in range(bound + 1):
        try:
            if equals(following, current, budget):
                return PowerScan(m, m, stable_power=current)
            decided = m
            if m == bound:
                break
            current = following
            following = minimize_radius(compose(base, following, budget), budget)
        except ExhaustiveCheckInfeasible as e:
            logger.info(f"eventual idempotency of {ca}: stopped after m={decided}: {e}")
            return PowerScan(None, decided, stopped_early=True)
        logger.debug(f"eventual idempotency of {ca}: power {m + 2} has radius {following.radius}")
    return PowerScan(None, decided)


def is_eventually_idempotent(ca: CA, bound: int, budget: int = None) -> Optional[int]:
    """Least m <= bound with ca^(m+1) = ca^m, or None (also when the powers outgrow the budget)"""
    return eventual_idempotency_scan(ca, bound, budget).m


def is_constant_table(ca: CA, budget: int = None) -> bool:
    outputs = _outputs_at_radius(ca, ca.radius, budget)
    return bool(np.all(outputs == outputs[0]))


def nilpotency_index(ca: CA, bound: int, budget: int = None) -> Optional[int]:
    """
    Least n <= bound such that ca^n is a constant CA, or None. A constant power
    is stable, and powers past the first stable one all coincide, so the index
    is the stable exponent whenever that power is constant.
    """
    scan = eventual_idempotency_scan(ca, bound, budget)
    if scan.m is None or not is_constant_table(scan.stable_power, budget):
        return None
    return scan.m


def spreading_states(ca: CA, budget: int = None) -> FrozenSet[int]:
    """
    Symbols q such that every window holding q somewhere in the minimal
    neighborhood outputs q. Neighborhoods of size < 2 report no spreading state.
    """
    neighborhood = minimal_neighborhood(ca, budget)
    if len(neighborhood) < 2:
        return frozenset()
    k = ca.alphabet.k
    r = ca.radius
    outputs = _outputs_at_radius(ca, r, budget)
    index = np.arange(outputs.size, dtype=np.int64)
    digits = {offset: (index // k ** (r - offset)) % k for offset in neighborhood}
    spreading = set()
    for q in range(k):
        seen = np.zeros(outputs.size, dtype=bool)
        for offset in neighborhood:
            seen |= digits[offset] == q
        if np.all(outputs[seen] == q):
            spreading.add(q)
    return frozenset(spreading)


def is_constant_on_unary(ca: CA) -> bool:
    """True iff every unary point a^Z is mapped to the same unary point"""
    images = {ca.local((a,) * ca.window_length) for a in ca.alphabet.symbols}
    return len(images) == 1
