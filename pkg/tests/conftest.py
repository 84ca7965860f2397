import itertools
import random

import pytest

from symred.canon import ColoredGraph
from symred.encode import (GLOBAL_VALUES, Cnf, cnf_to_model, load_aux_model)


def example_cnf() -> Cnf:
    """The six-variable three-clause system used throughout:
    (x1 v x2) & (x1 v ~x3 v ~x5) & (x2 v ~x4 v ~x6)."""
    return Cnf.make(6, [[1, 2], [1, -3, -5], [2, -4, -6]])


def example_model(value_mode=GLOBAL_VALUES):
    return cnf_to_model(example_cnf(), value_mode)


def subdivided_complete_aux(n: int):
    """Variable vertex in the middle of each K_n edge; returns
    (graph, num_vars) with edge variables first, row-major."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    nv = len(pairs)
    edges = []
    for idx, (i, j) in enumerate(pairs):
        edges += [(idx, nv + i), (idx, nv + j)]
    return ColoredGraph(nv + n, [0] * nv + [1] * n, edges), nv


def graph_listing_model(n: int, value_mode=GLOBAL_VALUES):
    aux, nv = subdivided_complete_aux(n)
    return load_aux_model(aux, nv, value_mode)


def random_colored_graph(rng: random.Random, n: int, ncolors: int = 3,
                         p: float = 0.35) -> ColoredGraph:
    colors = [rng.randrange(ncolors) for _ in range(n)]
    edges = [(i, j) for i in range(n) for j in range(i + 1, n)
             if rng.random() < p]
    return ColoredGraph(n, colors, edges)


def random_permutation(rng: random.Random, n: int):
    p = list(range(n))
    rng.shuffle(p)
    return tuple(p)


def brute_automorphism_count(g: ColoredGraph) -> int:
    from symred.canon import is_automorphism
    return sum(1 for p in itertools.permutations(range(g.n))
               if is_automorphism(g, p))


@pytest.fixture
def rng():
    return random.Random(20240817)
