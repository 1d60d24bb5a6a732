import pytest

from exceptions import SourceIsSurjective
from models import CyclicWord
from services.ca_core import apply_to_cyclic, eca, symbol_map
from services.eraser import build_eraser, eraser_from_words, non_preinjectivity_witness, verify_eraser
from services.language_analysis import find_diamond, is_surjective
from utils import parse_word


def rules_with_short_diamonds(max_length=8):
    """Non-surjective elementary rules whose least diamond has |u| <= max_length"""
    rules = []
    for number in range(256):
        g = eca(number)
        if not is_surjective(g) and len(find_diamond(g).u) <= max_length:
            rules.append(number)
    return rules


SHORT_DIAMOND_RULES = rules_with_short_diamonds()


def test_short_diamond_rules():
    assert {0, 128, 136} <= set(SHORT_DIAMOND_RULES)
    assert len(SHORT_DIAMOND_RULES) == 226


@pytest.mark.parametrize('rule', SHORT_DIAMOND_RULES)
def test_eraser_of_non_surjective_eca(rule):
    g = eca(rule)
    eraser = build_eraser(g)
    assert eraser.diamond is not None
    assert eraser.u == eraser.diamond.u
    assert eraser.radius == 3 * len(eraser.u) - 2
    report = verify_eraser(eraser, g, period_bound=8, trials=100, seed=rule)
    assert report.passed, report.failures
    assert report.cyclic_checked == 2 ** 9 - 2


def test_eraser_of_constant_rule_words():
    eraser = build_eraser(eca(0))
    assert eraser.u == parse_word('00000')
    assert eraser.u_prime == parse_word('00100')
    assert str(eraser) == 'eraser 00000 -> 00100 (radius 13)'


def test_eraser_rewrites_isolated_occurrence():
    eraser = build_eraser(eca(0))
    x = CyclicWord(parse_word('11000001111111'))
    image = apply_to_cyclic(eraser.base, x)
    assert image == CyclicWord(parse_word('11001001111111'))
    assert apply_to_cyclic(eraser.base, image) == image


def test_eraser_merges_two_words():
    eraser = build_eraser(eca(136))
    x, y = non_preinjectivity_witness(eraser)
    assert x != y and len(x) == len(y)
    assert len(x) > 2 * eraser.radius


def test_eraser_of_radius_zero_source():
    g = symbol_map(3, [0, 0, 1])
    eraser = build_eraser(g)
    assert eraser.u == (0, 0, 0)
    assert eraser.u_prime == (0, 1, 0)
    report = verify_eraser(eraser, g, period_bound=6, trials=100)
    assert report.passed, report.failures


def test_eraser_refuses_surjective_source():
    with pytest.raises(SourceIsSurjective):
        build_eraser(eca(102))


def test_eraser_from_words_validation():
    with pytest.raises(ValueError):
        eraser_from_words((0, 1), (0,), 2)
    with pytest.raises(ValueError):
        eraser_from_words((0, 1), (0, 1), 2)
    widened = eraser_from_words((0,), (1,), 2)
    assert widened.u == (0, 0, 0) and widened.u_prime == (0, 1, 0)


def test_eraser_without_overlap_condition_is_not_idempotent():
    broken = eraser_from_words(parse_word('100'), parse_word('110'), 2, enforce_no_new_overlap=False)
    x = CyclicWord(parse_word('1000000000'))
    once = apply_to_cyclic(broken.base, x)
    assert once == CyclicWord(parse_word('1100000000'))
    assert apply_to_cyclic(broken.base, once) != once
    report = verify_eraser(broken, eca(0), period_bound=10)
    assert not report.idempotent
    assert not report.passed
    assert any(failure.startswith('not idempotent') for failure in report.failures)


def test_report_lines():
    eraser = build_eraser(eca(0))
    lines = verify_eraser(eraser, eca(0), period_bound=4).lines()
    assert lines[0] == 'cyclic words checked: 30'
    assert 'idempotent: yes' in lines


@pytest.mark.slow
@pytest.mark.parametrize('rule', SHORT_DIAMOND_RULES)
def test_eraser_full_corpus(rule):
    g = eca(rule)
    report = verify_eraser(build_eraser(g), g, period_bound=12, trials=10_000, seed=1)
    assert report.passed, report.failures
