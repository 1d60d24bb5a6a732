"""
De Bruijn graph machinery for images of full shifts.

Decides surjectivity (subset construction over the image automaton) and
preinjectivity (diamond search in the pair graph), produces orphan words and
diamonds, counts words of avoid-lists and checks mixing of avoid-one-word SFTs.
"""
import logging
import threading
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np

from exceptions import CrossCheckFailed
from models import RuleTableCA
from services.ca_core import CA, apply_to_word, as_table, ensure_feasible
from utils import Word, all_words, format_word, index_word

logger = logging.getLogger(__name__)


# ============================================================================
# DE BRUIJN GRAPH AND IMAGE AUTOMATON
# ============================================================================

class DeBruijnGraph:
    """
    Nodes are the words of length 2r, numbered by their base-k value. Reading
    symbol a from node u follows the window u·a; the edge is labeled by the
    rule's output on that window.
    """

    def __init__(self, ca: RuleTableCA):
        self.ca = ca
        self.k = ca.alphabet.k
        self.order = 2 * ca.radius
        self.node_count = self.k ** self.order

    def window(self, node: int, symbol: int) -> int:
        return node * self.k + symbol

    def successor(self, node: int, symbol: int) -> int:
        return self.window(node, symbol) % self.node_count

    def label(self, node: int, symbol: int) -> int:
        return int(self.ca.table[self.window(node, symbol)])

    def node_word(self, node: int) -> Word:
        return index_word(node, self.k, self.order)

    def to_networkx(self) -> nx.MultiDiGraph:
        """Labeled multigraph export; edge attributes are `symbol` and `label`"""
        graph = nx.MultiDiGraph()
        for node in range(self.node_count):
            graph.add_node(format_word(self.node_word(node)))
        for node in range(self.node_count):
            source = format_word(self.node_word(node))
            for symbol in range(self.k):
                target = format_word(self.node_word(self.successor(node, symbol)))
                graph.add_edge(source, target, symbol=symbol, label=self.label(node, symbol))
        return graph


class ImageAutomaton:
    """
    NFA over the output alphabet whose runs spell the words of the image
    language. Every state is initial and accepting; a word is accepted iff
    some run survives. Subset states are determinized lazily.
    """

    def __init__(self, graph: DeBruijnGraph):
        self.graph = graph
        self.k = graph.k
        # moves[b][u]: nodes reachable from u along an edge labeled b
        self.moves: List[List[Tuple[int, ...]]] = [[() for _ in range(graph.node_count)] for _ in range(self.k)]
        for node in range(graph.node_count):
            for symbol in range(self.k):
                label = graph.label(node, symbol)
                self.moves[label][node] += (graph.successor(node, symbol),)
        self.initial: FrozenSet[int] = frozenset(range(graph.node_count))
        self._subset_cache: Dict[Tuple[FrozenSet[int], int], FrozenSet[int]] = {}
        self._lock = threading.Lock()

    def step(self, subset: FrozenSet[int], symbol: int) -> FrozenSet[int]:
        key = (subset, symbol)
        with self._lock:
            cached = self._subset_cache.get(key)
        if cached is not None:
            return cached
        result = frozenset(target for node in subset for target in self.moves[symbol][node])
        with self._lock:
            self._subset_cache.setdefault(key, result)
        return result

    def run(self, word: Word) -> FrozenSet[int]:
        subset = self.initial
        for symbol in word:
            subset = self.step(subset, symbol)
            if not subset:
                break
        return subset

    def accepts(self, word: Word) -> bool:
        return bool(self.run(word))

    @property
    def cached_transitions(self) -> int:
        with self._lock:
            return len(self._subset_cache)


def build_image_automaton(ca: CA, budget: int = None) -> ImageAutomaton:
    table = as_table(ca, budget)
    ensure_feasible(table.alphabet.k ** table.window_length, budget)
    return ImageAutomaton(DeBruijnGraph(table))


# ============================================================================
# SURJECTIVITY
# ============================================================================

def is_balanced(ca: CA, budget: int = None) -> bool:
    """Every symbol has exactly k^(2r) preimage windows"""
    table = as_table(ca, budget)
    counts = np.bincount(table.table.astype(np.int64), minlength=table.alphabet.k)
    return bool(np.all(counts == table.alphabet.k ** (2 * table.radius)))


def find_orphan(ca: CA, budget: int = None) -> Optional[Word]:
    """Shortest, then lexicographically least, word outside the image language"""
    automaton = build_image_automaton(ca, budget)
    parents: Dict[FrozenSet[int], Optional[Tuple[FrozenSet[int], int]]] = {automaton.initial: None}
    queue = deque([automaton.initial])
    while queue:
        subset = queue.popleft()
        for symbol in range(automaton.k):
            following = automaton.step(subset, symbol)
            if following in parents:
                continue
            parents[following] = (subset, symbol)
            if not following:
                logger.debug(f"orphan of {ca} found after {len(parents)} subset states")
                return _spell_path(parents, following)
            queue.append(following)
    logger.debug(f"{ca} has no orphan ({len(parents)} subset states)")
    return None


def _spell_path(parents, subset) -> Word:
    symbols = []
    while parents[subset] is not None:
        subset, symbol = parents[subset]
        symbols.append(symbol)
    return tuple(reversed(symbols))


def is_surjective(ca: CA, budget: int = None) -> bool:
    if not is_balanced(ca, budget):
        return False
    return find_orphan(ca, budget) is None


def sft_approximation(ca: CA, n: int, budget: int = None) -> List[Word]:
    """The length-n words of the image language in lexicographic order"""
    automaton = build_image_automaton(ca, budget)
    ensure_feasible(automaton.k ** n, budget, "words")
    words: List[Word] = []

    def extend(prefix: Word, subset: FrozenSet[int]):
        if len(prefix) == n:
            words.append(prefix)
            return
        for symbol in range(automaton.k):
            following = automaton.step(subset, symbol)
            if following:
                extend(prefix + (symbol,), following)

    extend((), automaton.initial)
    return words


# ============================================================================
# PREINJECTIVITY
# ============================================================================

@dataclass(frozen=True)
class Diamond:
    """Two equal-length words with shared 2r-margins and identical images in every context"""
    prefix: Word
    mid_a: Word
    mid_b: Word
    suffix: Word

    def __post_init__(self):
        if not self.mid_a or len(self.mid_a) != len(self.mid_b):
            raise ValueError("diamond middles must have equal positive length")
        if self.mid_a == self.mid_b:
            raise ValueError("diamond middles must differ")

    @property
    def u(self) -> Word:
        return self.prefix + self.mid_a + self.suffix

    @property
    def u_prime(self) -> Word:
        return self.prefix + self.mid_b + self.suffix

    def __str__(self) -> str:
        return f"{format_word(self.u)} ~ {format_word(self.u_prime)}"


class _PairGraph:
    """Product of the de Bruijn graph with itself, restricted to equal labels"""

    def __init__(self, ca: RuleTableCA, budget: int = None):
        k = ca.alphabet.k
        nodes = k ** (2 * ca.radius)
        ensure_feasible(nodes * nodes * k * k, budget, "pair-graph edges")
        self.k = k
        self.nodes = nodes
        pair = np.arange(nodes * nodes, dtype=np.int64)
        left, right = pair // nodes, pair % nodes
        symbol_a = np.repeat(np.arange(k), k)
        symbol_b = np.tile(np.arange(k), k)
        window_a = left[:, None] * k + symbol_a[None, :]
        window_b = right[:, None] * k + symbol_b[None, :]
        # column c of valid/target is the symbol pair (c // k, c % k)
        self.valid = ca.table[window_a] == ca.table[window_b]
        self.target = (window_a % nodes) * nodes + window_b % nodes
        self.diagonal = np.zeros(nodes * nodes, dtype=bool)
        self.diagonal[np.arange(nodes) * (nodes + 1)] = True

    def pair(self, left: int, right: int) -> int:
        return left * self.nodes + right

    def move(self, pair: int, a: int, b: int) -> Optional[int]:
        column = a * self.k + b
        if not self.valid[pair, column]:
            return None
        return int(self.target[pair, column])

    def predecessors_of(self, reach: np.ndarray) -> np.ndarray:
        return np.any(self.valid & reach[self.target], axis=1)


def _diamond_length(graph: _PairGraph, reach: List[np.ndarray]) -> Optional[int]:
    """Least path length from a diagonal node, diverging at once, back to the diagonal"""
    diagonal_nodes = np.flatnonzero(graph.diagonal)
    for length in range(1, graph.nodes * graph.nodes + 2):
        if len(reach) < length:
            following = graph.predecessors_of(reach[-1])
            if np.array_equal(following, reach[-1]):
                return None
            reach.append(following)
        viable = reach[length - 1]
        for node in diagonal_nodes:
            for a in range(graph.k):
                for b in range(graph.k):
                    if a != b:
                        target = graph.move(int(node), a, b)
                        if target is not None and viable[target]:
                            return length
    return None


def find_diamond(ca: CA, budget: int = None) -> Optional[Diamond]:
    """
    A diamond of least middle length, lexicographically least on
    (prefix, mid_a, mid_b, suffix), or None if the CA is preinjective.
    """
    table = as_table(ca, budget)
    graph = _PairGraph(table, budget)
    reach = [graph.diagonal]
    length = _diamond_length(graph, reach)
    if length is None:
        logger.debug(f"{ca} is preinjective ({graph.nodes ** 2} pair nodes)")
        return None
    k = graph.k
    margin = 2 * table.radius
    middle = length - margin

    def viable(pair: Optional[int], step: int) -> bool:
        return pair is not None and bool(reach[length - step][pair])

    # prefix: least node with a diverging first move
    start = None
    for node in range(graph.nodes):
        pair = graph.pair(node, node)
        if any(viable(graph.move(pair, a, b), 1) for a in range(k) for b in range(k) if a != b):
            start = pair
            break

    # mid_a: greedy, keeping every compatible right-hand state
    mid_a: List[int] = []
    layers = [{start}]
    for step in range(1, middle + 1):
        for a in range(k):
            following = set()
            for pair in layers[-1]:
                for b in range(k):
                    if step == 1 and b == a:
                        continue
                    target = graph.move(pair, a, b)
                    if viable(target, step):
                        following.add(target)
            if following:
                mid_a.append(a)
                layers.append(following)
                break

    def choices(pair: int, step: int):
        for b in range(k):
            if step == 1 and b == mid_a[0]:
                continue
            target = graph.move(pair, mid_a[step - 1], b)
            if target is not None:
                yield b, target

    # keep only the states from which the fixed mid_a can still be completed
    alive = [set() for _ in layers]
    alive[middle] = layers[middle]
    for step in range(middle - 1, -1, -1):
        alive[step] = {pair for pair in layers[step]
                       if any(target in alive[step + 1] for _, target in choices(pair, step + 1))}

    # mid_b: least symbols against the fixed mid_a
    mid_b: List[int] = []
    pair = start
    for step in range(1, middle + 1):
        b, pair = next((b, target) for b, target in choices(pair, step) if target in alive[step])
        mid_b.append(b)

    suffix: List[int] = []
    for step in range(middle + 1, length + 1):
        for c in range(k):
            target = graph.move(pair, c, c)
            if viable(target, step):
                suffix.append(c)
                pair = target
                break

    diamond = Diamond(
        prefix=index_word(start // graph.nodes, k, margin),
        mid_a=tuple(mid_a),
        mid_b=tuple(mid_b),
        suffix=tuple(suffix),
    )
    logger.debug(f"diamond of {ca}: {diamond}")
    return diamond


def verify_diamond(ca: CA, diamond: Diamond, budget: int = None) -> bool:
    """Exhaustive check over all r-contexts on both sides"""
    r = ca.radius
    k = ca.alphabet.k
    if len(diamond.prefix) != 2 * r or len(diamond.suffix) != 2 * r:
        return False
    ensure_feasible(k ** (2 * r), budget, "contexts")
    for left in all_words(k, r):
        for right in all_words(k, r):
            if apply_to_word(ca, left + diamond.u + right) != apply_to_word(ca, left + diamond.u_prime + right):
                return False
    return True


def is_preinjective(ca: CA, budget: int = None) -> bool:
    return find_diamond(ca, budget) is None


@dataclass
class MooreMyhillReport:
    surjective: bool
    preinjective: bool
    orphan: Optional[Word]
    diamond: Optional[Diamond]


def moore_myhill_crosscheck(ca: CA, budget: int = None) -> MooreMyhillReport:
    orphan = find_orphan(ca, budget)
    surjective = orphan is None and is_balanced(ca, budget)
    if orphan is None and not surjective:
        raise CrossCheckFailed(f"{ca} is unbalanced but the subset construction found no orphan")
    diamond = find_diamond(ca, budget)
    preinjective = diamond is None
    if surjective != preinjective:
        raise CrossCheckFailed(
            f"{ca}: surjective={surjective} but preinjective={preinjective}"
        )
    return MooreMyhillReport(surjective, preinjective, orphan, diamond)


# ============================================================================
# AVOID-LISTS
# ============================================================================

class AvoidAutomaton:
    """
    Aho-Corasick automaton of the words avoiding a finite list.

    Only live states are kept; `completions(n)[s]` is the exact number of
    length-n continuations from state s, which drives counting and
    lexicographic rank/unrank.
    """

    def __init__(self, forbidden: Iterable[Word], k: int):
        self.k = k
        self.forbidden = tuple(sorted({tuple(word) for word in forbidden}))
        self.empty = () in self.forbidden
        goto: List[Dict[int, int]] = [{}]
        terminal = [False]
        for word in self.forbidden:
            state = 0
            for symbol in word:
                if symbol not in goto[state]:
                    goto.append({})
                    terminal.append(False)
                    goto[state][symbol] = len(goto) - 1
                state = goto[state][symbol]
            terminal[state] = True

        delta = [[0] * k for _ in goto]
        fail = [0] * len(goto)
        queue = deque()
        for symbol in range(k):
            target = goto[0].get(symbol)
            if target is None:
                delta[0][symbol] = 0
            else:
                delta[0][symbol] = target
                queue.append(target)
        while queue:
            state = queue.popleft()
            terminal[state] = terminal[state] or terminal[fail[state]]
            for symbol in range(k):
                target = goto[state].get(symbol)
                if target is None:
                    delta[state][symbol] = delta[fail[state]][symbol]
                else:
                    fail[target] = delta[fail[state]][symbol]
                    delta[state][symbol] = target
                    queue.append(target)

        self.delta = delta
        self.dead = terminal
        self._completions: List[List[int]] = [[0 if dead else 1 for dead in terminal]]

    @property
    def state_count(self) -> int:
        return len(self.delta)

    def next_state(self, state: int, symbol: int) -> Optional[int]:
        target = self.delta[state][symbol]
        return None if self.dead[target] else target

    def completions(self, n: int) -> List[int]:
        while len(self._completions) <= n:
            previous = self._completions[-1]
            row = []
            for state in range(self.state_count):
                if self.dead[state]:
                    row.append(0)
                    continue
                row.append(sum(previous[target] for target in self.delta[state] if not self.dead[target]))
            self._completions.append(row)
        return self._completions[n]

    def count(self, n: int) -> int:
        if self.empty:
            return 0
        return self.completions(n)[0]

    def accepts(self, word: Word) -> bool:
        if self.empty:
            return False
        state = 0
        for symbol in word:
            state = self.next_state(state, symbol)
            if state is None:
                return False
        return True

    def rank(self, word: Word) -> int:
        """Lexicographic rank of an accepted word among accepted words of its length"""
        n = len(word)
        if not self.accepts(word):
            raise ValueError(f"{format_word(word)} contains a forbidden word")
        rank = 0
        state = 0
        for position, symbol in enumerate(word):
            remaining = self.completions(n - position - 1)
            for smaller in range(symbol):
                target = self.next_state(state, smaller)
                if target is not None:
                    rank += remaining[target]
            state = self.next_state(state, symbol)
        return rank

    def unrank(self, rank: int, n: int) -> Word:
        if not 0 <= rank < self.count(n):
            raise ValueError(f"rank {rank} out of range for length {n}")
        word = []
        state = 0
        for position in range(n):
            remaining = self.completions(n - position - 1)
            for symbol in range(self.k):
                target = self.next_state(state, symbol)
                if target is None:
                    continue
                if rank < remaining[target]:
                    word.append(symbol)
                    state = target
                    break
                rank -= remaining[target]
        return tuple(word)

    def transfer_matrix(self) -> np.ndarray:
        """Adjacency counts between live states"""
        live = [state for state in range(self.state_count) if not self.dead[state]]
        position = {state: index for index, state in enumerate(live)}
        matrix = np.zeros((len(live), len(live)), dtype=float)
        for state in live:
            for target in self.delta[state]:
                if not self.dead[target]:
                    matrix[position[state], position[target]] += 1
        return matrix


def count_avoiding(wordlist: Iterable[Word], n: int, k: int) -> int:
    """Exact number of length-n words over k symbols containing no listed word"""
    return AvoidAutomaton(wordlist, k).count(n)


def avoid_graph(w: Word, k: int, budget: int = None) -> nx.MultiDiGraph:
    """
    Transition graph of the SFT avoiding w: nodes are the words of length
    |w|-1, edges the words of length |w| other than w.
    """
    w = tuple(w)
    if not w:
        raise ValueError("the avoided word must be nonempty")
    order = len(w) - 1
    ensure_feasible(k ** len(w), budget)
    graph = nx.MultiDiGraph()
    for node in all_words(k, order):
        graph.add_node(node)
    for edge in all_words(k, len(w)):
        if edge != w:
            graph.add_edge(edge[:order], edge[1:], label=edge[-1])
    return graph


def essential_part(graph: nx.MultiDiGraph) -> nx.MultiDiGraph:
    """Drop nodes that no bi-infinite path can visit"""
    graph = graph.copy()
    while True:
        stranded = [node for node in graph if graph.in_degree(node) == 0 or graph.out_degree(node) == 0]
        if not stranded:
            return graph
        graph.remove_nodes_from(stranded)


def is_mixing_avoid(w: Word, k: int, budget: int = None) -> bool:
    """
    Mixing test for the SFT of configurations avoiding w: the essential graph
    is strongly connected, aperiodic and carries at least two points.
    """
    graph = essential_part(avoid_graph(w, k, budget))
    if graph.number_of_nodes() == 0:
        return False
    if not nx.is_strongly_connected(graph) or not nx.is_aperiodic(graph):
        return False
    # a strongly connected graph with as many edges as nodes is a single cycle
    return graph.number_of_edges() > graph.number_of_nodes()
