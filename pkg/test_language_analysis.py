from collections import Counter

import networkx as nx
import numpy as np
import pytest

from exceptions import ExhaustiveCheckInfeasible
from models import Alphabet, RuleTableCA
from services.ca_core import apply_to_word, eca, identity_ca, shift_ca, symbol_map
from services.language_analysis import (
    AvoidAutomaton, DeBruijnGraph, Diamond, avoid_graph, build_image_automaton, count_avoiding, essential_part,
    find_diamond, find_orphan, is_balanced, is_mixing_avoid, is_preinjective, is_surjective, moore_myhill_crosscheck,
    sft_approximation, verify_diamond,
)
from utils import all_words, contains, parse_word

KNOWN_SURJECTIVE = {15, 30, 51, 60, 85, 90, 102, 105, 150, 153, 165, 170, 195, 204, 240}
KNOWN_NOT_SURJECTIVE = {0, 8, 110, 128, 136, 232, 255}


def image_words(ca, n):
    """Brute-force image language of length n"""
    return {apply_to_word(ca, word) for word in all_words(ca.alphabet.k, n + 2 * ca.radius)}


def preimage_counts(ca, n):
    """Number of length-(n+2r) preimages of each length-n word"""
    return Counter(apply_to_word(ca, word) for word in all_words(ca.alphabet.k, n + 2 * ca.radius))


def test_de_bruijn_graph_shape():
    graph = DeBruijnGraph(eca(110)).to_networkx()
    assert graph.number_of_nodes() == 4
    assert graph.number_of_edges() == 8
    assert all(degree == 2 for _, degree in graph.out_degree())


def test_image_automaton_matches_brute_force():
    for rule in (30, 110, 136):
        ca = eca(rule)
        automaton = build_image_automaton(ca)
        image = image_words(ca, 5)
        for word in all_words(2, 5):
            assert automaton.accepts(word) == (word in image)


def test_is_balanced_examples():
    assert is_balanced(eca(102))
    assert is_balanced(eca(30))
    assert not is_balanced(eca(136))


def test_find_orphan_examples():
    assert find_orphan(eca(136)) == parse_word('101')
    assert find_orphan(eca(0)) == parse_word('1')
    assert find_orphan(eca(102)) is None


def test_find_orphan_is_shortest():
    for rule in (8, 110, 136, 232):
        orphan = find_orphan(eca(rule))
        assert orphan is not None
        assert orphan not in image_words(eca(rule), len(orphan))
        for shorter in range(1, len(orphan)):
            assert len(image_words(eca(rule), shorter)) == 2 ** shorter


def test_is_surjective_examples():
    assert is_surjective(eca(102))
    assert is_surjective(eca(204))
    assert not is_surjective(eca(136))
    assert is_surjective(shift_ca(3, 'left'))
    assert not is_surjective(symbol_map(3, [0, 0, 1]))


def test_known_surjective_ecas():
    for rule in KNOWN_SURJECTIVE:
        assert is_surjective(eca(rule)), rule
    for rule in KNOWN_NOT_SURJECTIVE:
        assert not is_surjective(eca(rule)), rule


def test_find_diamond_constant_rule():
    diamond = find_diamond(eca(0))
    assert diamond == Diamond(parse_word('00'), parse_word('0'), parse_word('1'), parse_word('00'))
    assert verify_diamond(eca(0), diamond)


def test_find_diamond_radius_zero():
    diamond = find_diamond(symbol_map(3, [0, 0, 1]))
    assert diamond == Diamond((), (0,), (1,), ())
    assert is_preinjective(identity_ca(Alphabet(3)))


def test_diamond_words():
    diamond = Diamond((0, 0), (0,), (1,), (0, 0))
    assert diamond.u == parse_word('00000')
    assert diamond.u_prime == parse_word('00100')
    assert str(diamond) == '00000 ~ 00100'
    with pytest.raises(ValueError):
        Diamond((), (0,), (0,), ())


def test_verify_diamond_rejects_surjective_pair():
    assert not verify_diamond(eca(102), Diamond((0, 0), (0,), (1,), (0, 0)))


@pytest.mark.parametrize('rule', range(256))
def test_moore_myhill_on_every_eca(rule):
    ca = eca(rule)
    report = moore_myhill_crosscheck(ca)
    assert report.surjective == report.preinjective
    if report.orphan is not None:
        assert report.orphan not in image_words(ca, len(report.orphan))
        if len(report.orphan) <= 6:
            assert preimage_counts(ca, len(report.orphan))[report.orphan] == 0
    else:
        for n in range(1, 7):
            counts = preimage_counts(ca, n)
            assert len(counts) == 2 ** n
            assert set(counts.values()) == {4}, n
    if report.diamond is not None:
        assert report.diamond.mid_a != report.diamond.mid_b
        assert len(report.diamond.u) == len(report.diamond.u_prime)
        assert verify_diamond(ca, report.diamond)


def test_sft_approximation_lists_image_words():
    assert sft_approximation(eca(136), 3) == sorted(image_words(eca(136), 3))
    assert parse_word('101') not in sft_approximation(eca(136), 3)
    assert len(sft_approximation(eca(102), 4)) == 16


def test_image_automaton_beyond_budget():
    with pytest.raises(ExhaustiveCheckInfeasible):
        find_orphan(eca(110), budget=4)


def test_count_avoiding_examples():
    assert count_avoiding([], 4, 2) == 16
    assert count_avoiding([parse_word('11')], 4, 2) == 8
    assert count_avoiding([(0,), (1,)], 1, 2) == 0
    assert count_avoiding([()], 3, 2) == 0


def test_count_avoiding_matches_brute_force():
    forbidden = [parse_word('101'), parse_word('0000')]
    for n in range(0, 10):
        expected = sum(1 for word in all_words(2, n) if not any(contains(word, f) for f in forbidden))
        assert count_avoiding(forbidden, n, 2) == expected


def test_rank_and_unrank_follow_lexicographic_order():
    automaton = AvoidAutomaton([parse_word('11')], 2)
    accepted = [word for word in all_words(2, 6) if not contains(word, parse_word('11'))]
    assert len(accepted) == automaton.count(6)
    for position, word in enumerate(accepted):
        assert automaton.rank(word) == position
        assert automaton.unrank(position, 6) == word


def test_rank_and_unrank_errors():
    automaton = AvoidAutomaton([parse_word('11')], 2)
    with pytest.raises(ValueError):
        automaton.rank(parse_word('0110'))
    with pytest.raises(ValueError):
        automaton.unrank(automaton.count(4), 4)


def test_transfer_matrix_growth():
    matrix = AvoidAutomaton([parse_word('11')], 2).transfer_matrix()
    assert matrix.shape == (2, 2)
    assert max(abs(np.linalg.eigvals(matrix))) == pytest.approx((1 + 5 ** 0.5) / 2)


def test_avoid_graph_and_essential_part():
    graph = avoid_graph(parse_word('11'), 2)
    assert graph.number_of_nodes() == 2
    assert graph.number_of_edges() == 3
    core = essential_part(avoid_graph(parse_word('01'), 2))
    assert not nx.is_strongly_connected(core)
    with pytest.raises(ValueError):
        avoid_graph((), 2)


def test_is_mixing_avoid_examples():
    assert is_mixing_avoid(parse_word('11'), 2)
    assert not is_mixing_avoid(parse_word('0'), 2)
    assert not is_mixing_avoid(parse_word('01'), 2)
    assert is_mixing_avoid(parse_word('0'), 3)
    assert is_mixing_avoid(parse_word('00'), 2)


def test_find_orphan_on_hand_built_table():
    table = np.array([window[1] & window[2] for window in all_words(2, 3)])
    assert find_orphan(RuleTableCA(Alphabet(2), 1, table)) == parse_word('101')
