"""
Eraser CA built from a diamond of a non-surjective CA.

The eraser rewrites isolated occurrences of u into u' when the rewrite does
not create a new occurrence of u nearby. It is idempotent, not surjective,
and leaves the image under the source CA unchanged.
"""
import logging
import random
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import config
from exceptions import CrossCheckFailed, SourceIsSurjective
from models import Alphabet, CyclicWord, ProceduralCA
from services.ca_core import CA, apply_to_cyclic, apply_to_word
from services.language_analysis import Diamond, find_diamond, is_surjective
from utils import Word, all_words, format_word

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EraserCA:
    base: ProceduralCA
    u: Word
    u_prime: Word
    source_radius: int
    enforce_no_new_overlap: bool = True
    diamond: Optional[Diamond] = field(default=None, compare=False)

    @property
    def radius(self) -> int:
        return self.base.radius

    def __str__(self) -> str:
        return f"eraser {format_word(self.u)} -> {format_word(self.u_prime)} (radius {self.radius})"


def _occurs_at(window: Word, start: int, pattern: Word) -> bool:
    return window[start:start + len(pattern)] == pattern


def _eraser_rule(u: Word, u_prime: Word, enforce_no_new_overlap: bool):
    size = len(u)
    centre = 3 * size - 2

    def evaluate(window: Word) -> int:
        for i in range(centre - size + 1, centre + 1):
            if not _occurs_at(window, i, u):
                continue
            # condition 1: u occurs exactly once in window[i-2|u|+1 .. i+3|u|-2]
            if any(_occurs_at(window, j, u) for j in range(i - 2 * size + 1, i + 2 * size) if j != i):
                continue
            if enforce_no_new_overlap:
                # condition 2: the rewrite creates no u overlapping [i, i+|u|-1]
                rewritten = window[:i] + u_prime + window[i + size:]
                if any(_occurs_at(rewritten, j, u) for j in range(i - size + 1, i + size)):
                    continue
            return u_prime[centre - i]
        return window[centre]

    return evaluate


def eraser_from_words(u: Word, u_prime: Word, k: int, source_radius: int = 0,
                      enforce_no_new_overlap: bool = True) -> EraserCA:
    """
    Eraser rewriting u into u'. A one-symbol pair is widened by a 0 on each
    side; switching off the overlap condition gives a broken eraser for tests.
    """
    u, u_prime = tuple(u), tuple(u_prime)
    if len(u) != len(u_prime) or not u:
        raise ValueError("u and u' must be nonempty words of equal length")
    if u == u_prime:
        raise ValueError("u and u' must differ")
    if len(u) == 1:
        u, u_prime = (0,) + u + (0,), (0,) + u_prime + (0,)
    radius = 3 * len(u) - 2
    name = f"eraser:{format_word(u)}->{format_word(u_prime)}"
    base = ProceduralCA(Alphabet(k), radius, _eraser_rule(u, u_prime, enforce_no_new_overlap), name=name)
    return EraserCA(base, u, u_prime, source_radius, enforce_no_new_overlap)


def build_eraser(g: CA, budget: int = None) -> EraserCA:
    if is_surjective(g, budget):
        raise SourceIsSurjective(f"{g} is surjective; it has no diamond to erase")
    diamond = find_diamond(g, budget)
    if diamond is None:
        raise CrossCheckFailed(f"{g} is not surjective but no diamond was found")
    eraser = eraser_from_words(diamond.u, diamond.u_prime, g.alphabet.k, g.radius)
    logger.info(f"built {eraser} for {g}")
    return EraserCA(eraser.base, eraser.u, eraser.u_prime, g.radius, diamond=diamond)


# ============================================================================
# VERIFICATION
# ============================================================================

@dataclass
class EraserReport:
    idempotent: bool = True
    preserves_image: bool = True
    local: bool = True
    witness: Optional[Tuple[Word, Word]] = None
    cyclic_checked: int = 0
    random_checked: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.idempotent and self.preserves_image and self.local and self.witness is not None

    def lines(self) -> List[str]:
        lines = [
            f"cyclic words checked: {self.cyclic_checked}",
            f"random words checked: {self.random_checked}",
            f"idempotent: {'yes' if self.idempotent else 'no'}",
            f"image preserved: {'yes' if self.preserves_image else 'no'}",
            f"local: {'yes' if self.local else 'no'}",
        ]
        if self.witness is None:
            lines.append("non-preinjectivity witness: not found")
        else:
            lines.append(f"non-preinjectivity witness: {format_word(self.witness[0])} / {format_word(self.witness[1])}")
        lines.extend(f"failure: {failure}" for failure in self.failures)
        return lines


def _cyclic_occurrences(x: CyclicWord, u: Word) -> List[int]:
    n = len(x)
    return [p for p in range(n) if x.window(p, len(u)) == u]


def _changes_only_inside_occurrences(x: CyclicWord, image: CyclicWord, u: Word) -> bool:
    n = len(x)
    covered = set()
    for p in _cyclic_occurrences(x, u):
        covered.update((p + offset) % n for offset in range(len(u)))
    return all(x.period_word[c] == image.period_word[c] or c in covered for c in range(n))


def non_preinjectivity_witness(eraser: EraserCA) -> Optional[Tuple[Word, Word]]:
    """
    Two words a^L u b^L and a^L u' b^L with a != u_1 and b != u_|u| whose
    images agree, with L large enough that the images cover every cell the
    swap can influence.
    """
    u, u_prime = eraser.u, eraser.u_prime
    k = eraser.base.alphabet.k
    pad = 2 * eraser.radius + 1
    for a in range(k):
        if a == u[0]:
            continue
        for b in range(k):
            if b == u[-1]:
                continue
            x = (a,) * pad + u + (b,) * pad
            y = (a,) * pad + u_prime + (b,) * pad
            if apply_to_word(eraser.base, x) == apply_to_word(eraser.base, y):
                return x, y
    return None


def verify_eraser(eraser: EraserCA, g: CA, period_bound: int, trials: int = 0, seed: int = None,
                  extra_length: int = 8) -> EraserReport:
    """
    Check idempotency, g o E = g and locality on every cyclic word of length
    <= period_bound and on seeded random words, then look for the
    non-preinjectivity witness. Failures are collected, never raised.
    """
    base = eraser.base
    k = base.alphabet.k
    report = EraserReport()

    for n in range(1, period_bound + 1):
        for word in all_words(k, n):
            x = CyclicWord(word)
            erased = apply_to_cyclic(base, x)
            report.cyclic_checked += 1
            if report.idempotent and apply_to_cyclic(base, erased) != erased:
                report.idempotent = False
                report.failures.append(f"not idempotent on cyclic {x}")
            if report.preserves_image and apply_to_cyclic(g, erased) != apply_to_cyclic(g, x):
                report.preserves_image = False
                report.failures.append(f"image changed on cyclic {x}")
            if report.local and not _changes_only_inside_occurrences(x, erased, eraser.u):
                report.local = False
                report.failures.append(f"cell outside every occurrence of u changed on cyclic {x}")

    rng = random.Random(config.settings.seed if seed is None else seed)
    radius = base.radius
    for _ in range(trials):
        length = 4 * radius + 1 + rng.randint(0, extra_length)
        word = tuple(rng.randrange(k) for _ in range(length))
        erased = apply_to_word(base, word)
        report.random_checked += 1
        twice = apply_to_word(base, erased)
        if report.idempotent and twice != erased[radius:len(erased) - radius]:
            report.idempotent = False
            report.failures.append(f"not idempotent on word {format_word(word)}")
        image_after = apply_to_word(g, erased)
        image_before = apply_to_word(g, word)[radius:radius + len(image_after)]
        if report.preserves_image and image_after != image_before:
            report.preserves_image = False
            report.failures.append(f"image changed on word {format_word(word)}")

    report.witness = non_preinjectivity_witness(eraser)
    if report.witness is None:
        report.failures.append("no non-preinjectivity witness found")
    logger.info(f"verified {eraser}: {report.cyclic_checked} cyclic, {report.random_checked} random, "
                f"passed={report.passed}")
    return report
