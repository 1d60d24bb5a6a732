import random

import numpy as np
import pytest

from exceptions import AlphabetMismatch, ExhaustiveCheckInfeasible, WordTooShort
from models import Alphabet, CyclicWord, ProceduralCA, RuleTableCA
from services.ca_core import (
    apply_to_cyclic, apply_to_word, as_table, compose, eca, equals, eventual_idempotency_scan, first_difference,
    identity_ca, is_constant_on_unary, is_eventually_idempotent, is_idempotent, minimal_neighborhood,
    minimize_radius, nilpotency_index, power, sampled_agreement, shift_ca, spreading_states, symbol_map,
)
from utils import all_words, parse_word

CASCADE = [0, 0, 1]


@pytest.fixture
def identity():
    return identity_ca(Alphabet(2), 1)


@pytest.fixture
def cascade():
    """radius-0 map 2->1, 1->0, 0->0 over three symbols"""
    return symbol_map(3, CASCADE)


def test_apply_to_word_identity_drops_margins(identity):
    assert apply_to_word(identity, parse_word('01101')) == parse_word('110')


def test_apply_to_word_xor_with_right_neighbour():
    assert apply_to_word(eca(102), parse_word('0011')) == parse_word('10')


def test_apply_to_word_constant_rule():
    assert apply_to_word(eca(0), parse_word('10110')) == parse_word('000')


def test_apply_to_word_too_short():
    with pytest.raises(WordTooShort):
        apply_to_word(eca(102), parse_word('01'))


def test_apply_to_cyclic_examples():
    assert apply_to_cyclic(eca(102), CyclicWord(parse_word('001'))).period_word == parse_word('011')
    image = apply_to_cyclic(eca(136), CyclicWord(parse_word('01')))
    assert image.period_word == parse_word('00')
    assert image.least_period == 1
    for rule in (0, 30, 110, 255):
        assert apply_to_cyclic(eca(rule), CyclicWord((1,))).least_period == 1


def test_apply_to_cyclic_keeps_period_length():
    x = CyclicWord(parse_word('0110'))
    image = apply_to_cyclic(eca(30), x)
    assert len(image) == 4
    assert x.least_period % image.least_period == 0


@pytest.mark.parametrize('rule', range(256))
def test_application_commutes_with_rotation(rule):
    ca = eca(rule)
    for n in range(1, 11):
        for word in random.Random(rule * 100 + n).sample(list(all_words(2, n)), min(2 ** n, 16)):
            x = CyclicWord(word)
            assert apply_to_cyclic(ca, x.rotate(1)) == apply_to_cyclic(ca, x).rotate(1)


def test_compose_identity_is_neutral(identity):
    assert equals(compose(identity, eca(102)), eca(102))
    assert minimal_neighborhood(compose(identity, eca(102))) == {0, 1}


def test_compose_constant_is_constant():
    for rule in (30, 102, 136):
        assert equals(compose(eca(0), eca(rule)), eca(0))


def test_compose_radius_and_spot_value():
    twice = compose(eca(102), eca(102))
    assert isinstance(twice, RuleTableCA)
    assert twice.radius == 2
    assert twice.local(parse_word('00110')) == 1


def test_compose_alphabet_mismatch(cascade):
    with pytest.raises(AlphabetMismatch):
        compose(eca(102), cascade)


def test_compose_beyond_budget_is_procedural():
    composed = compose(eca(30), eca(110), budget=16)
    assert isinstance(composed, ProceduralCA)
    assert composed.radius == 2
    word = parse_word('0110100111')
    assert apply_to_word(composed, word) == apply_to_word(eca(30), apply_to_word(eca(110), word))


def test_compose_is_associative():
    rules = [eca(number) for number in (30, 102, 136, 204)]
    for f in rules:
        for g in rules:
            for h in rules:
                assert equals(compose(f, compose(g, h)), compose(compose(f, g), h))


def test_power_examples(cascade):
    assert equals(power(eca(102), 0), identity_ca(Alphabet(2)))
    assert equals(power(identity_ca(Alphabet(2)), 5), identity_ca(Alphabet(2)))
    assert equals(power(cascade, 2), symbol_map(3, [0, 0, 0]))


@pytest.mark.parametrize('rule', [30, 90, 102, 136, 232])
def test_power_splits_as_composition(rule):
    ca = eca(rule)
    for m in range(0, 3):
        for n in range(0, 5 - m):
            assert equals(power(ca, m + n), compose(power(ca, m), power(ca, n)))


def test_equals_examples(identity):
    assert equals(eca(204), identity)
    assert not equals(eca(102), eca(90))
    assert equals(compose(identity, identity), identity)


def test_equals_beyond_budget():
    with pytest.raises(ExhaustiveCheckInfeasible):
        equals(eca(30), eca(90), budget=4)


def test_first_difference_gives_a_disagreeing_cycle():
    window = first_difference(eca(102), eca(90))
    assert window == parse_word('010')
    x = CyclicWord(window)
    assert apply_to_cyclic(eca(102), x) != apply_to_cyclic(eca(90), x)
    assert first_difference(eca(204), identity_ca(Alphabet(2), 1)) is None


def test_sampled_agreement():
    assert sampled_agreement(eca(204), identity_ca(Alphabet(2)), periods=8, random_trials=1000, seed=7).agree
    report = sampled_agreement(eca(102), eca(90), periods=3)
    assert not report.agree
    assert report.cyclic_witness is not None


def test_sampled_agreement_is_deterministic():
    first = sampled_agreement(eca(30), eca(30), periods=4, random_trials=50, seed=3)
    second = sampled_agreement(eca(30), eca(30), periods=4, random_trials=50, seed=3)
    assert str(first) == str(second)


def test_minimal_neighborhood_examples():
    assert minimal_neighborhood(eca(204)) == {0}
    assert minimal_neighborhood(eca(102)) == {0, 1}
    assert minimal_neighborhood(eca(0)) == frozenset()
    assert minimal_neighborhood(eca(30)) == {-1, 0, 1}


def test_minimize_radius_reproduces_rule():
    smaller = minimize_radius(eca(204))
    assert smaller.radius == 0
    assert equals(smaller, eca(204))
    assert minimize_radius(eca(102)).radius == 1


def test_is_idempotent_examples():
    assert is_idempotent(eca(204))
    assert is_idempotent(eca(0))
    assert not is_idempotent(eca(102))


def test_idempotent_ecas_fix_their_images():
    idempotents = [number for number in range(256) if is_idempotent(eca(number))]
    assert 204 in idempotents and 0 in idempotents
    for number in idempotents:
        ca = eca(number)
        for n in range(1, 11):
            for word in all_words(2, n):
                image = apply_to_cyclic(ca, CyclicWord(word))
                assert apply_to_cyclic(ca, image) == image


def test_is_eventually_idempotent_examples(cascade):
    assert is_eventually_idempotent(cascade, 5) == 2
    assert is_eventually_idempotent(eca(204), 3) == 0
    assert is_eventually_idempotent(eca(102), 4) is None


def test_eventual_idempotency_scan_minimizes_powers():
    scan = eventual_idempotency_scan(eca(136), 6)
    assert scan.m is None
    assert (scan.checked_up_to, scan.stopped_early) == (6, False)

    stable = eventual_idempotency_scan(symbol_map(3, CASCADE), 5)
    assert (stable.m, stable.checked_up_to) == (2, 2)
    assert stable.stable_power.radius == 0


def test_eventual_idempotency_scan_stops_at_the_budget():
    scan = eventual_idempotency_scan(eca(136), 10, budget=2 ** 9)
    assert scan.m is None
    assert (scan.checked_up_to, scan.stopped_early) == (3, True)
    assert is_eventually_idempotent(eca(136), 10, budget=2 ** 9) is None


def test_nilpotency_index():
    assert nilpotency_index(eca(0), 3) == 1
    assert nilpotency_index(symbol_map(3, [0, 0, 1]), 4) == 2
    assert nilpotency_index(eca(204), 3) is None


def test_spreading_states_examples():
    assert spreading_states(eca(136)) == {0}
    assert spreading_states(eca(204)) == frozenset()
    assert spreading_states(eca(102)) == frozenset()


def test_is_constant_on_unary_examples():
    assert is_constant_on_unary(eca(0))
    assert not is_constant_on_unary(eca(136))
    windows = np.array(list(all_words(3, 3)))
    unary = (windows == windows[:, :1]).all(axis=1)
    table = np.where((windows == 0).any(axis=1) | unary, 0, windows[:, 1])
    assert is_constant_on_unary(RuleTableCA(Alphabet(3), 1, table))


def test_as_table_of_procedural():
    procedural = ProceduralCA(Alphabet(2), 1, lambda window: window[1] ^ window[2])
    assert equals(as_table(procedural), eca(102))


def test_shift_ca_moves_cyclic_words():
    x = CyclicWord(parse_word('0010'))
    assert apply_to_cyclic(shift_ca(2, 'left'), x) == x.rotate(1)
    assert apply_to_cyclic(shift_ca(2, 'right'), x) == x.rotate(-1)
    with pytest.raises(ValueError):
        shift_ca(2, 'up')


def test_eca_rejects_out_of_range():
    with pytest.raises(ValueError):
        eca(256)
