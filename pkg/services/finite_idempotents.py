"""
Idempotent factorizations of maps on finite sets.

Covers arbitrary self-maps of {0, ..., n-1}, shift-equivariant self-maps of
the periodic points of least period <= m, and a brute-force closure oracle
comparing the monoid generated by idempotents with the maps that satisfy the
onto-implies-identity condition period by period.
"""
import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from exceptions import ConditionViolated, NotDecomposable
from models import Alphabet, CyclicWord
from services.ca_core import ensure_feasible
from services.periodic_dynamics import enumerate_Q
from utils import rotate

logger = logging.getLogger(__name__)

Images = Tuple[int, ...]


# ============================================================================
# FINITE FUNCTIONS
# ============================================================================

@dataclass(frozen=True)
class FiniteFunction:
    """A self-map of {0, ..., n-1} given by its image list"""
    images: Images

    def __post_init__(self):
        images = tuple(int(image) for image in self.images)
        for image in images:
            if not 0 <= image < len(images):
                raise ValueError(f"image {image} outside a domain of size {len(images)}")
        object.__setattr__(self, 'images', images)

    @classmethod
    def identity(cls, size: int) -> 'FiniteFunction':
        return cls(tuple(range(size)))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def _like(self, images: Images) -> 'FiniteFunction':
        return FiniteFunction(images)

    def compose(self, other: 'FiniteFunction') -> 'FiniteFunction':
        """self after other"""
        if other.size != self.size:
            raise ValueError(f"cannot compose maps on {self.size} and {other.size} points")
        return self._like(tuple(self.images[y] for y in other.images))

    def is_idempotent(self) -> bool:
        return all(self.images[y] == y for y in self.images)

    def is_identity(self) -> bool:
        return self.images == tuple(range(self.size))

    def is_bijection(self) -> bool:
        return len(set(self.images)) == self.size

    def __str__(self) -> str:
        return ','.join(str(image) for image in self.images)


def _move(size: int, source: int, target: int) -> FiniteFunction:
    """The idempotent sending source to target and fixing every other point"""
    images = list(range(size))
    images[source] = target
    return FiniteFunction(tuple(images))


Map = Union['FiniteFunction', 'EquivariantMap']


@dataclass
class Factorization:
    """
    factors[0] o factors[1] o ... o factors[-1] == target; the last factor
    is applied first.
    """
    target: Map
    factors: List[Map] = field(default_factory=list)

    def product(self) -> Map:
        result = self.target._like(tuple(range(self.target.size)))
        for factor in self.factors:
            result = result.compose(factor)
        return result

    def __len__(self) -> int:
        return len(self.factors)


def decompose_finite(f: FiniteFunction) -> Factorization:
    """
    Factor f into idempotents in three phases: collapse each point onto the
    least preimage representative of its value, move the representatives
    outside f(X) onto the free values of f(X), then sort the values with
    three-step swaps through a point outside f(X).
    """
    if f.is_identity():
        return Factorization(f, [])
    if f.is_bijection():
        raise NotDecomposable(f"the permutation {f} is not a product of idempotents")
    size = f.size
    values = sorted(set(f.images))
    representative = {value: f.images.index(value) for value in values}
    chosen = set(representative.values())
    steps: List[FiniteFunction] = []

    # phase (i): every non-representative joins the representative of its value
    for a in range(size):
        if a not in chosen:
            steps.append(_move(size, a, representative[f(a)]))

    # phase (ii): representatives outside the image move onto unused image values
    current = {rep: rep for rep in chosen}
    leaving = sorted(chosen - set(values))
    arriving = sorted(set(values) - chosen)
    for c, d in zip(leaving, arriving):
        steps.append(_move(size, c, d))
        current[c] = d

    # phase (iii): swap values into place through a spare point
    spare = min(set(range(size)) - set(values))
    holder = {position: rep for rep, position in current.items()}
    for value in values:
        rep = representative[value]
        c = current[rep]
        if c == value:
            continue
        steps.extend([_move(size, c, spare), _move(size, value, c), _move(size, spare, value)])
        other = holder[value]
        current[rep], current[other] = value, c
        holder[value], holder[c] = rep, other

    factorization = Factorization(f, list(reversed(steps)))
    if factorization.product() != f:
        raise AssertionError(f"factorization of {f} does not compose back")
    logger.debug(f"{f} factored into {len(steps)} idempotents")
    return factorization


def all_functions(size: int) -> Iterable[FiniteFunction]:
    for images in product(range(size), repeat=size):
        yield FiniteFunction(images)


def monoid_closure(generators: Iterable[Images], identity: Images) -> Set[Images]:
    """Every product of generators, the empty product included"""
    generators = list(dict.fromkeys(generators))
    closure = {identity}
    queue = deque([identity])
    while queue:
        element = queue.popleft()
        for generator in generators:
            composed = tuple(generator[y] for y in element)
            if composed not in closure:
                closure.add(composed)
                queue.append(composed)
    return closure


def idempotent_closure(size: int, budget: int = None) -> Set[Images]:
    """The monoid generated by all idempotent self-maps of a size-element set"""
    ensure_feasible(size ** size, budget, "functions")
    idempotents = [f.images for f in all_functions(size) if f.is_idempotent()]
    return monoid_closure(idempotents, tuple(range(size)))


# ============================================================================
# EQUIVARIANT MAPS ON PERIODIC POINTS
# ============================================================================

class Carrier:
    """
    The points of least period <= m over k symbols, numbered by period then
    lexicographically. Orbits are listed with their least rotation first, and
    member s of an orbit is that representative rotated left s times.
    """

    def __init__(self, k: int, m: int, budget: int = None):
        Alphabet(k)
        if m < 0:
            raise ValueError(f"period bound must be non-negative, got {m}")
        self.k = k
        self.m = m
        self.points: List[CyclicWord] = []
        self.orbits: List[Tuple[int, ...]] = []
        self.orbit_period: List[int] = []
        periodic = [enumerate_Q(k, period, budget) for period in range(1, m + 1)]
        for q in periodic:
            self.points.extend(q.points)
        self.index: Dict[CyclicWord, int] = {x: position for position, x in enumerate(self.points)}
        self.location: List[Tuple[int, int]] = [(0, 0)] * len(self.points)
        for q in periodic:
            period = q.n
            for necklace in q.necklaces:
                root = necklace[0].canonical().period_word
                members = tuple(self.index[CyclicWord(rotate(root, s))] for s in range(period))
                for s, member in enumerate(members):
                    self.location[member] = (len(self.orbits), s)
                self.orbits.append(members)
                self.orbit_period.append(period)
        self.rotation: Images = tuple(self.index[x.rotate(1)] for x in self.points)

    def __len__(self) -> int:
        return len(self.points)

    def point_at(self, orbit: int, shift: int) -> int:
        members = self.orbits[orbit]
        return members[shift % len(members)]

    def orbits_of_period(self, period: int) -> List[int]:
        return [orbit for orbit, p in enumerate(self.orbit_period) if p == period]

    def identity(self) -> 'EquivariantMap':
        return EquivariantMap(tuple(range(len(self))), self)

    def move(self, source: int, target_orbit: int, shift: int) -> 'EquivariantMap':
        """
        Idempotent sending member s of the source orbit to member s + shift of
        the target orbit and fixing every other point.
        """
        if source == target_orbit:
            raise ValueError("an orbit cannot be moved onto itself")
        if self.orbit_period[source] % self.orbit_period[target_orbit]:
            raise ValueError("the target period must divide the source period")
        images = list(range(len(self)))
        for s, member in enumerate(self.orbits[source]):
            images[member] = self.point_at(target_orbit, s + shift)
        return EquivariantMap(tuple(images), self)

    def orbit_choices(self, orbit: int) -> List[int]:
        """Admissible images of an orbit representative"""
        period = self.orbit_period[orbit]
        return [x for x, point in enumerate(self.points) if period % point.least_period == 0]

    def from_orbit_images(self, representative_images: Sequence[int]) -> 'EquivariantMap':
        images = [0] * len(self)
        for orbit, members in enumerate(self.orbits):
            target_orbit, shift = self.location[representative_images[orbit]]
            for s, member in enumerate(members):
                images[member] = self.point_at(target_orbit, shift + s)
        return EquivariantMap(tuple(images), self)


@dataclass(frozen=True)
class EquivariantMap(FiniteFunction):
    """A self-map of a carrier that commutes with rotation"""
    carrier: Carrier = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        super().__post_init__()
        if self.carrier is None:
            raise ValueError("an equivariant map needs its carrier")
        if self.size != len(self.carrier):
            raise ValueError(f"{self.size} images given for a carrier of {len(self.carrier)} points")
        if not self.is_equivariant():
            raise ValueError("map does not commute with rotation")

    def _like(self, images: Images) -> 'EquivariantMap':
        return EquivariantMap(images, self.carrier)

    def is_equivariant(self) -> bool:
        rotation = self.carrier.rotation
        return all(self.images[rotation[x]] == rotation[self.images[x]] for x in range(self.size))

    def __str__(self) -> str:
        points = self.carrier.points
        return ' '.join(f"{points[x]}->{points[y]}" for x, y in enumerate(self.images))


def condition_violation(f: EquivariantMap) -> Optional[Tuple[int, CyclicWord]]:
    """First period i with f(Q_i) = Q_i but f not the identity there, with a moved point"""
    carrier = f.carrier
    for period in range(1, carrier.m + 1):
        members = [x for orbit in carrier.orbits_of_period(period) for x in carrier.orbits[orbit]]
        if {f(x) for x in members} != set(members):
            continue
        moved = [x for x in sorted(members) if f(x) != x]
        if moved:
            return period, carrier.points[moved[0]]
    return None


def satisfies_condition(f: EquivariantMap) -> bool:
    return condition_violation(f) is None


def decompose_equivariant(f: EquivariantMap) -> Factorization:
    """
    Factor an equivariant map into equivariant idempotents, period by
    period in ascending order. Within one period the orbits play the role of
    points in decompose_finite, and every move carries a rotation offset.
    """
    violation = condition_violation(f)
    if violation is not None:
        raise ConditionViolated(*violation)
    carrier = f.carrier
    steps: List[EquivariantMap] = []

    for period in range(1, carrier.m + 1):
        orbits = carrier.orbits_of_period(period)
        # image of each orbit representative as (orbit, rotation offset)
        target = {orbit: carrier.location[f(carrier.orbits[orbit][0])] for orbit in orbits}
        if all(target[orbit] == (orbit, 0) for orbit in orbits):
            continue
        staying = [orbit for orbit in orbits if carrier.orbit_period[target[orbit][0]] == period]
        values = sorted({target[orbit][0] for orbit in staying})
        representative = {}
        for orbit in staying:
            representative.setdefault(target[orbit][0], orbit)
        chosen = set(representative.values())

        # drops go straight to their final image; other stayers merge into their representative
        for orbit in orbits:
            if orbit in chosen:
                continue
            value, shift = target[orbit]
            if orbit not in staying:
                steps.append(carrier.move(orbit, value, shift))
                continue
            rep = representative[value]
            steps.append(carrier.move(orbit, rep, shift - target[rep][1]))

        current = {rep: rep for rep in chosen}
        leaving = sorted(chosen - set(values))
        arriving = sorted(set(values) - chosen)
        for c, d in zip(leaving, arriving):
            steps.append(carrier.move(c, d, 0))
            current[c] = d

        spare = min(set(orbits) - set(values))
        holder = {position: rep for rep, position in current.items()}
        for value in values:
            rep = representative[value]
            c = current[rep]
            if c == value:
                continue
            steps.extend([carrier.move(c, spare, 0), carrier.move(value, c, 0), carrier.move(spare, value, 0)])
            other = holder[value]
            current[rep], current[other] = value, c
            holder[value], holder[c] = rep, other

        # relocation through the spare orbit fixes the rotation offsets
        for value in values:
            shift = target[representative[value]][1]
            if shift % period:
                steps.extend([carrier.move(value, spare, shift), carrier.move(spare, value, 0)])

    factorization = Factorization(f, list(reversed(steps)))
    if factorization.product() != f:
        raise AssertionError(f"equivariant factorization does not compose back to {f}")
    logger.debug(f"equivariant map on {len(carrier)} points factored into {len(steps)} idempotents")
    return factorization


def verify_factorization(factorization: Factorization) -> bool:
    """Every factor is idempotent (and equivariant, on a carrier) and the product is the target"""
    for factor in factorization.factors:
        if factor.size != factorization.target.size or not factor.is_idempotent():
            return False
        if isinstance(factor, EquivariantMap) and not factor.is_equivariant():
            return False
    return factorization.product().images == factorization.target.images


# ============================================================================
# CLOSURE ORACLE
# ============================================================================

@dataclass
class OracleReport:
    k: int
    m: int
    map_count: int
    idempotent_count: int
    closure_size: int
    condition_size: int
    only_in_closure: List[EquivariantMap] = field(default_factory=list)
    only_in_condition: List[EquivariantMap] = field(default_factory=list)
    factorization_failures: List[EquivariantMap] = field(default_factory=list)

    @property
    def sets_equal(self) -> bool:
        return not self.only_in_closure and not self.only_in_condition

    def lines(self) -> List[str]:
        lines = [
            f"k={self.k} m={self.m}",
            f"equivariant maps: {self.map_count}",
            f"idempotents: {self.idempotent_count}",
            f"closure of idempotents: {self.closure_size}",
            f"maps satisfying the period condition: {self.condition_size}",
            f"sets equal: {'yes' if self.sets_equal else 'no'}",
            f"factorization failures: {len(self.factorization_failures)}",
        ]
        lines.extend(f"only in closure: {f}" for f in self.only_in_closure)
        lines.extend(f"only in condition set: {f}" for f in self.only_in_condition)
        return lines


def all_equivariant_maps(carrier: Carrier, budget: int = None) -> List[EquivariantMap]:
    choices = [carrier.orbit_choices(orbit) for orbit in range(len(carrier.orbits))]
    total = 1
    for options in choices:
        total *= len(options)
    ensure_feasible(total, budget, "equivariant maps")
    return [carrier.from_orbit_images(selection) for selection in product(*choices)]


def monoid_closure_oracle(k: int, m: int, budget: int = None) -> OracleReport:
    carrier = Carrier(k, m, budget)
    maps = all_equivariant_maps(carrier, budget)
    by_images = {f.images: f for f in maps}
    idempotents = [f.images for f in maps if f.is_idempotent()]
    closure = monoid_closure(idempotents, tuple(range(len(carrier))))
    condition = {f.images for f in maps if satisfies_condition(f)}
    logger.info(f"oracle k={k} m={m}: {len(maps)} maps, {len(idempotents)} idempotents, closure {len(closure)}")

    failures = []
    for images in sorted(condition):
        try:
            if not verify_factorization(decompose_equivariant(by_images[images])):
                failures.append(by_images[images])
        except (ConditionViolated, AssertionError) as e:
            logger.error(f"factorization failed for {by_images[images]}: {e}")
            failures.append(by_images[images])

    return OracleReport(
        k=k,
        m=m,
        map_count=len(maps),
        idempotent_count=len(idempotents),
        closure_size=len(closure),
        condition_size=len(condition),
        only_in_closure=[by_images[images] for images in sorted(closure - condition)],
        only_in_condition=[by_images[images] for images in sorted(condition - closure)],
        factorization_failures=failures,
    )
