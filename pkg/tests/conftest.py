"""Shared fixtures: small hand-built graphs with exhaustively known solutions."""

from fractions import Fraction
from itertools import product

import pytest

from treesample import Graph, check_bf_valid


@pytest.fixture
def two_tree_digraph() -> Graph:
    """Directed triangle-ish graph with exactly two depth-first trees.

    Edges 0->1, 0->2, 1->2, 2->1. Ascending restarts force root 0; whichever
    of {1, 2} is entered first adopts the other, so the only trees are
    (0, 0, 1) and (0, 2, 0), each reached by half the tiebreak orders.
    """
    one = Fraction(1)
    return Graph.from_edges(3, [(0, 1, one), (0, 2, one), (1, 2, one), (2, 1, one)], directed=True)


@pytest.fixture
def unit_square() -> Graph:
    """Undirected 4-cycle 0-1-3-2-0 with unit weights, source 0.

    Costs are (0, 1, 1, 2); vertex 3 is reached at cost 2 through either 1 or
    2, so exactly two shortest-path trees exist: (0,0,0,1) and (0,0,0,2).
    """
    one = Fraction(1)
    return Graph.from_edges(4, [(0, 1, one), (0, 2, one), (1, 3, one), (2, 3, one)], directed=False, source=0)


@pytest.fixture
def third_weight_line() -> Graph:
    """Undirected path 0-1-2 with weights 1/3; unique shortest-path tree (0,0,1)."""
    w = Fraction(1, 3)
    return Graph.from_edges(3, [(0, 1, w), (1, 2, w)], directed=False, source=0)


@pytest.fixture
def tiebreak_sensitive_digraph() -> Graph:
    """Digraph whose two tiebreak modes give different tree distributions.

    Edges 0->1, 0->2, 1->2, 1->3, 2->3. Both modes can reach the same three
    trees but weight them differently (per-run ranking vs per-expansion
    uniform choice).
    """
    one = Fraction(1)
    return Graph.from_edges(
        4, [(0, 1, one), (0, 2, one), (1, 2, one), (1, 3, one), (2, 3, one)], directed=True
    )


def brute_force_shortest_path_trees(g: Graph) -> set[tuple[int, ...]]:
    """All length-n arrays the validity check accepts; exponential, tests only."""
    return {pi for pi in product(range(g.n), repeat=g.n) if check_bf_valid(g, pi)}
