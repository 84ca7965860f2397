import random

import pytest

from symred.canon import (ColoredGraph, EncodingError, GraphError,
                          canonical_form, induced_variable_action,
                          is_automorphism, refine, relabel)
from symred.perm import GeneratorSet, group_closure

from conftest import (brute_automorphism_count, example_model,
                      random_colored_graph, random_permutation,
                      subdivided_complete_aux)


def test_graph_validation():
    with pytest.raises(GraphError):
        ColoredGraph(2, [0], [])
    with pytest.raises(GraphError):
        ColoredGraph(2, [0, 0], [(0, 2)])
    with pytest.raises(GraphError):
        ColoredGraph(2, [0, 0], [(1, 1)])
    g = ColoredGraph(3, [0, 0, 0], [(0, 1), (1, 0)])
    assert len(g.edges) == 1  # duplicates collapse


def test_single_vertex():
    g = ColoredGraph(1, [0], [])
    r = canonical_form(g)
    assert r.canonical == g
    assert r.aut_generators.perms == ()
    assert r.aut_order == 1


def test_relabeled_paths_share_canonical_form():
    g1 = ColoredGraph(3, [0, 0, 0], [(0, 1), (1, 2)])
    g2 = ColoredGraph(3, [0, 0, 0], [(1, 0), (0, 2)])
    assert canonical_form(g1).canonical == canonical_form(g2).canonical


def test_empty_graph():
    g = ColoredGraph(0, [], [])
    r = canonical_form(g)
    assert r.canonical == g and r.aut_order == 1


def test_refine_edgeless_unchanged():
    g = ColoredGraph(4, [0, 0, 1, 1], [])
    assert refine(g, [[0, 1], [2, 3]]) == [[0, 1], [2, 3]]


def test_refine_star_separates_center():
    g = ColoredGraph(4, [0] * 4, [(0, 1), (0, 2), (0, 3)])
    cells = refine(g, [[0, 1, 2, 3]])
    assert sorted(map(sorted, cells)) == [[0], [1, 2, 3]]


def test_refine_cycle_stays_coarse():
    g = ColoredGraph(6, [0] * 6, [(i, (i + 1) % 6) for i in range(6)])
    assert refine(g, [[0, 1, 2, 3, 4, 5]]) == [[0, 1, 2, 3, 4, 5]]


def test_refine_rejects_color_mixing():
    g = ColoredGraph(2, [0, 1], [])
    with pytest.raises(GraphError):
        refine(g, [[0, 1]])


def test_refine_idempotent(rng):
    for _ in range(30):
        g = random_colored_graph(rng, rng.randint(1, 10))
        cells = {}
        for v, c in enumerate(g.colors):
            cells.setdefault(c, []).append(v)
        start = [cells[c] for c in sorted(cells)]
        once = refine(g, start)
        assert refine(g, once) == once


def test_canonical_form_invariant_under_relabeling(rng):
    for _ in range(300):
        g = random_colored_graph(rng, rng.randint(1, 12))
        gamma = random_permutation(rng, g.n)
        assert (canonical_form(g).canonical
                == canonical_form(relabel(g, gamma)).canonical)


def test_generators_are_automorphisms_and_labeling_consistent(rng):
    for _ in range(60):
        g = random_colored_graph(rng, rng.randint(1, 12))
        r = canonical_form(g)
        assert relabel(g, r.labeling) == r.canonical
        for p in r.aut_generators.perms:
            assert is_automorphism(g, p)


def test_automorphism_group_complete_small(rng):
    for _ in range(40):
        g = random_colored_graph(rng, rng.randint(1, 6), p=0.4)
        r = canonical_form(g)
        want = brute_automorphism_count(g)
        assert len(group_closure(r.aut_generators)) == want
        assert r.aut_order == want


def test_example_model_projection_order_eight():
    m = example_model()
    r = canonical_form(m.graph)
    proj = induced_variable_action(r, range(6))
    els = set(group_closure(proj))
    assert len(els) == 8
    a = (1, 0, 3, 2, 5, 4)   # (x1 x2)(x3 x4)(x5 x6)
    b = (0, 1, 2, 5, 4, 3)   # (x4 x6)
    assert a in els and b in els


def test_subdivided_k4_projects_to_order_24():
    aux, nv = subdivided_complete_aux(4)
    r = canonical_form(aux)
    proj = induced_variable_action(r, range(nv))
    assert len(group_closure(proj)) == 24


def test_induced_action_trivial():
    g = ColoredGraph(3, [0, 1, 2], [(0, 1)])
    r = canonical_form(g)
    proj = induced_variable_action(r, [0, 1])
    assert proj.degree == 2 and proj.perms == ()


def test_induced_action_rejects_leaky_generator():
    # two same-colored vertices, one inside the "variable" set, one outside
    g = ColoredGraph(2, [0, 0], [])
    r = canonical_form(g)
    if any(p[0] != 0 for p in r.aut_generators.perms):
        with pytest.raises(EncodingError):
            induced_variable_action(r, [0])


def test_sparse_kernel_agrees_with_relabeling(rng):
    # beyond the dense-kernel cutoff
    for _ in range(6):
        n = 210
        colors = [rng.randrange(2) for _ in range(n)]
        edges = [(i, j) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.02]
        g = ColoredGraph(n, colors, edges)
        gamma = random_permutation(rng, n)
        assert (canonical_form(g).canonical
                == canonical_form(relabel(g, gamma)).canonical)
