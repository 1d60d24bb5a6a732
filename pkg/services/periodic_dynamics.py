"""
Spatially periodic points and the period-n onto-implies-identity condition.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from models import Alphabet, CyclicWord
from services.ca_core import CA, apply_to_cyclic, ensure_feasible
from utils import all_words, count_primitive

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PeriodicOrbitSet:
    """
    Q_n: the cyclic words of least period exactly n, in lexicographic order of
    their period words, with the partition into rotation orbits.
    """
    k: int
    n: int
    points: Tuple[CyclicWord, ...]
    necklaces: Tuple[Tuple[CyclicWord, ...], ...] = field(repr=False)

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, x: CyclicWord) -> bool:
        return x.least_period == self.n and x in self.points


def enumerate_Q(k: int, n: int, budget: int = None) -> PeriodicOrbitSet:
    if n < 1:
        raise ValueError(f"period must be positive, got {n}")
    Alphabet(k)
    ensure_feasible(k ** n, budget, "periodic points")
    points = []
    orbits: Dict[Tuple[int, ...], List[CyclicWord]] = {}
    for word in all_words(k, n):
        x = CyclicWord(word)
        if x.least_period != n:
            continue
        points.append(x)
        orbits.setdefault(x.canonical().period_word, []).append(x)
    expected = count_primitive(k, n)
    if len(points) != expected:
        raise AssertionError(f"enumerated {len(points)} points of period {n}, Moebius count is {expected}")
    necklaces = tuple(tuple(orbits[key]) for key in sorted(orbits))
    return PeriodicOrbitSet(k, n, tuple(points), necklaces)


def action_on_Q(ca: CA, n: int, budget: int = None) -> Dict[CyclicWord, CyclicWord]:
    """Image of every point of Q_n, kept at period-word length n"""
    action = {}
    for x in enumerate_Q(ca.alphabet.k, n, budget).points:
        image = apply_to_cyclic(ca, x)
        if n % image.least_period:
            raise AssertionError(f"{ca} maps {x} to {image} whose least period does not divide {n}")
        action[x] = image
    return action


@dataclass
class Eq1Report:
    """Whether the CA maps Q_n onto itself and, if so, whether it fixes Q_n pointwise"""
    n: int
    size: int
    maps_onto: bool
    is_identity_on: bool
    violation_witness: Optional[CyclicWord] = None

    @property
    def violated(self) -> bool:
        return self.violation_witness is not None


def eq1_check(ca: CA, n: int, budget: int = None) -> Eq1Report:
    action = action_on_Q(ca, n, budget)
    images = set(action.values())
    maps_onto = images == set(action)
    witness = None
    identity = False
    if maps_onto:
        witness = next((x for x, image in action.items() if image != x), None)
        identity = witness is None
    logger.debug(f"{ca} on Q_{n}: onto={maps_onto} identity={identity}")
    return Eq1Report(n, len(action), maps_onto, identity, witness)


def eq1_table(ca: CA, bound: int, budget: int = None) -> List[Eq1Report]:
    return [eq1_check(ca, n, budget) for n in range(1, bound + 1)]


def eq1_check_up_to(ca: CA, bound: int, budget: int = None) -> Optional[Eq1Report]:
    """The report of the least violating n <= bound, or None"""
    for n in range(1, bound + 1):
        report = eq1_check(ca, n, budget)
        if report.violated:
            return report
    return None


def temporally_periodic_points(ca: CA, bound: int, budget: int = None) -> List[CyclicWord]:
    """
    Spatially periodic points of least period <= bound lying on a cycle of
    the CA, sorted by least period then period word.
    """
    k = ca.alphabet.k
    recurrent = set()
    for n in range(1, bound + 1):
        ensure_feasible(k ** n, budget, "periodic points")
        # the CA maps words of length n to words of length n; find its cycles
        image: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for word in all_words(k, n):
            image[word] = apply_to_cyclic(ca, CyclicWord(word)).period_word
        for word in image:
            point = CyclicWord(word)
            if point.least_period != n or point in recurrent:
                continue
            seen = set()
            current = word
            while current not in seen:
                seen.add(current)
                current = image[current]
            # current now lies on the cycle reached from word
            cycle_start = current
            while True:
                recurrent.add(CyclicWord(current))
                current = image[current]
                if current == cycle_start:
                    break
    return sorted(recurrent)
