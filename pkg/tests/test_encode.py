import itertools

import pytest

from symred.canon import ColoredGraph, EncodingError, canonical_form
from symred.encode import (GLOBAL_VALUES, PER_VARIABLE_VALUES, Cnf, CnfError,
                           attach_assignment, attach_set, cnf_to_model,
                           kappa_of_assignment, load_aux_model,
                           stabilizer_symmetry)
from symred.perm import group_closure, orbit

from conftest import example_cnf, example_model, subdivided_complete_aux


def test_cnf_literal_range_checked():
    with pytest.raises(CnfError):
        Cnf.make(2, [[1, 3]])
    with pytest.raises(CnfError):
        Cnf.make(2, [[0]])


def test_empty_cnf_global_model_counts():
    m = cnf_to_model(Cnf.make(2, []), GLOBAL_VALUES)
    # 2 variable + 2 negation + 2 value vertices, 2 variable-negation edges
    assert m.graph.n == 6
    assert len(m.graph.edges) == 2
    assert len(m.value_vertex) == 2


def test_example_cnf_global_model_counts():
    m = example_model()
    # 6 vars + 6 negations + 3 clauses + 2 values; clause sizes 2,3,3
    assert m.graph.n == 17
    assert len(m.graph.edges) == 6 + 8


def test_phase_mode_free_variable_flips():
    m = cnf_to_model(Cnf.make(1, []), PER_VARIABLE_VALUES)
    r = canonical_form(m.graph)
    lit0 = m.literal_vertex[(0, 0)]
    lit1 = m.literal_vertex[(0, 1)]
    images = {(g[lit0], g[lit1]) for g in r.aut_generators.perms}
    # the phase flip swapping the two literal vertices is an automorphism
    assert any(img == (lit1, lit0) for img in images) or \
        len(group_closure(r.aut_generators)) == 2


def test_color_separation_enforced():
    g = ColoredGraph(3, [0, 0, 0], [])
    with pytest.raises(EncodingError):
        load_aux_model(g, 2, GLOBAL_VALUES)


def test_aux_three_isolated_variables_fully_symmetric():
    g = ColoredGraph(3, [0, 0, 0], [])
    m = load_aux_model(g, 3, GLOBAL_VALUES)
    sym = stabilizer_symmetry(m, ())
    assert len(group_closure(sym.aut)) == 6


def test_aux_subdivided_k4_order_24():
    aux, nv = subdivided_complete_aux(4)
    m = load_aux_model(aux, nv, GLOBAL_VALUES)
    sym = stabilizer_symmetry(m, ())
    assert len(group_closure(sym.aut)) == 24


def test_attach_set_empty_is_identity():
    m = example_model()
    assert attach_set(m, ()) == m.graph


def test_attach_set_stabilizer_of_x3():
    m = example_model()
    sym = stabilizer_symmetry(m, [2])     # W = {x3}
    # x6 and x4 stay exchangeable once x3 is pinned
    assert orbit(sym.aut, 5) == {3, 5}


def test_attach_set_stabilizer_keeps_main_generator():
    m = example_model()
    sym = stabilizer_symmetry(m, [0, 1])  # W = {x1, x2}
    els = set(group_closure(sym.aut))
    assert (1, 0, 3, 2, 5, 4) in els


def test_attach_assignment_empty_is_identity():
    m = example_model()
    assert attach_assignment(m, ()) == m.graph


def test_example_assignments_isomorphic_iff_swappable():
    m = example_model()
    k01 = kappa_of_assignment(m, [(0, 0), (1, 1)])
    k10 = kappa_of_assignment(m, [(0, 1), (1, 0)])
    k00 = kappa_of_assignment(m, [(0, 0), (1, 0)])
    assert k01.key == k10.key
    assert k01.key != k00.key


def test_phase_mode_identifies_value_flip():
    m = cnf_to_model(Cnf.make(1, []), PER_VARIABLE_VALUES)
    k0 = kappa_of_assignment(m, [(0, 0)])
    k1 = kappa_of_assignment(m, [(0, 1)])
    assert k0.key == k1.key


def test_rigid_model_trivial_stabilizer():
    # chain of implications with distinct clause sizes: no symmetry
    cnf = Cnf.make(3, [[1], [-1, 2], [-1, -2, 3]])
    m = cnf_to_model(cnf, GLOBAL_VALUES)
    sym = kappa_of_assignment(m, [(0, 1)])
    assert sym.aut.perms == ()


def test_full_assignment_keys_count_graphs():
    aux, nv = subdivided_complete_aux(4)
    m = load_aux_model(aux, nv, GLOBAL_VALUES)
    keys = {kappa_of_assignment(m, list(zip(range(nv), vals))).key
            for vals in itertools.product((0, 1), repeat=nv)}
    assert len(keys) == 11  # isomorphism classes of 4-node graphs


def test_attach_respects_group_action(rng):
    m = example_model()
    sym0 = stabilizer_symmetry(m, ())
    group = group_closure(sym0.aut)
    for _ in range(20):
        k = rng.randint(0, 4)
        vs = rng.sample(range(6), k)
        binds = [(u, rng.randint(0, 1)) for u in vs]
        g = group[rng.randrange(len(group))]
        moved = [(g[u], r) for u, r in binds]
        assert (kappa_of_assignment(m, binds).key
                == kappa_of_assignment(m, moved).key)
        w_moved = {g[u] for u in vs}
        assert (canonical_form(attach_set(m, vs)).canonical
                == canonical_form(attach_set(m, w_moved)).canonical)


def test_setwise_stabilizer_matches_brute_force(rng):
    m = example_model()
    group = group_closure(stabilizer_symmetry(m, ()).aut)
    for _ in range(8):
        w = set(rng.sample(range(6), rng.randint(0, 3)))
        stab = {g for g in group if {g[u] for u in w} == w}
        got = set(group_closure(stabilizer_symmetry(m, sorted(w)).aut))
        assert got == stab


def test_wreath_projection_shape():
    m = cnf_to_model(Cnf.make(2, []), PER_VARIABLE_VALUES)
    sym = stabilizer_symmetry(m, ())
    ws = sym.wreath
    assert ws.degree == 2 and ws.num_values == 2
    # phase flips and the variable swap are all present in the closure
    from symred.perm import pair_orbit
    assert pair_orbit(ws, 0, 0) == {(0, 0), (0, 1), (1, 0), (1, 1)}
