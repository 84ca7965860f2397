import random

import pytest

from symred import perm
from symred.perm import (ClosureOverflow, GeneratorSet, PermError, compose,
                         from_cycles, group_closure, identity, inverse,
                         min_in_orbit, orbit, orbit_partition,
                         orbit_with_transversal, same_orbit)


def example_generators() -> GeneratorSet:
    # (x1 x2)(x3 x4)(x5 x6) and (x4 x6) on 0-based points
    a = from_cycles(6, [[0, 1], [2, 3], [4, 5]])
    b = from_cycles(6, [[3, 5]])
    return GeneratorSet(6, (a, b))


def test_compose_identity():
    p = from_cycles(5, [[0, 2, 4]])
    assert compose(identity(5), p) == p
    assert compose(p, identity(5)) == p


def test_compose_pointwise_on_example_generators():
    a = from_cycles(6, [[0, 1], [2, 3], [4, 5]])
    b = from_cycles(6, [[3, 5]])
    ab = compose(a, b)
    # x3 goes to x4 under a, then x4 to x6 under b
    assert ab[2] == 5


def test_compose_inverse_law(rng):
    for _ in range(100):
        n = rng.randint(1, 12)
        p = list(range(n))
        rng.shuffle(p)
        p = tuple(p)
        assert compose(p, inverse(p)) == identity(n)
        assert compose(inverse(p), p) == identity(n)


def test_compose_associative(rng):
    for _ in range(60):
        n = rng.randint(1, 10)
        ps = []
        for _ in range(3):
            q = list(range(n))
            rng.shuffle(q)
            ps.append(tuple(q))
        p, q, r = ps
        assert compose(compose(p, q), r) == compose(p, compose(q, r))


def test_degree_mismatch_rejected():
    with pytest.raises(PermError):
        compose(identity(3), identity(4))


def test_generator_set_degree_checked():
    with pytest.raises(PermError):
        GeneratorSet(4, (identity(3),))


def test_orbit_trivial_group():
    gens = GeneratorSet.trivial(6)
    t = orbit_with_transversal(gens, 3)
    assert t.members == {3}
    assert t.witness[3] == identity(6)
    assert same_orbit(gens, 2, 2)
    assert not same_orbit(gens, 2, 3)
    assert min_in_orbit(gens, 4) == 4


def test_orbit_of_example_generators():
    gens = example_generators()
    assert orbit(gens, 3) == {2, 3, 4, 5}
    assert orbit(gens, 0) == {0, 1}
    assert same_orbit(gens, 2, 5)
    assert min_in_orbit(gens, 4) == 2


def test_transversal_witnesses_sound(rng):
    for _ in range(40):
        n = rng.randint(2, 10)
        gens = GeneratorSet(n, tuple(
            tuple(random.Random(rng.random()).sample(range(n), n))
            for _ in range(rng.randint(0, 3))))
        point = rng.randrange(n)
        t = orbit_with_transversal(gens, point)
        assert t.representative == point
        assert point in t.members
        for m in t.members:
            assert t.witness[m][point] == m


def test_orbits_partition_domain(rng):
    for _ in range(30):
        n = rng.randint(1, 10)
        gens = GeneratorSet(n, tuple(
            tuple(random.Random(rng.random()).sample(range(n), n))
            for _ in range(rng.randint(0, 3))))
        orbits = {frozenset(orbit(gens, x)) for x in range(n)}
        seen = set()
        for ob in orbits:
            assert not (ob & seen)
            seen |= ob
        assert seen == set(range(n))
        reps = orbit_partition(gens)
        for x in range(n):
            assert reps[x] == min(orbit(gens, x))


def test_closure_trivial_and_single_transposition():
    assert group_closure(GeneratorSet.trivial(4)) == [identity(4)]
    gens = GeneratorSet(2, (from_cycles(2, [[0, 1]]),))
    assert len(group_closure(gens)) == 2


def test_closure_of_example_generators_is_order_eight():
    els = group_closure(example_generators())
    assert len(els) == 8
    # same group generated the other way round: <(x3 x5), (x4 x6)> plus a
    alt = GeneratorSet(6, (from_cycles(6, [[2, 4]]),
                           from_cycles(6, [[3, 5]]),
                           from_cycles(6, [[0, 1], [2, 3], [4, 5]])))
    assert set(group_closure(alt)) == set(els)


def test_closure_is_group(rng):
    for _ in range(10):
        n = rng.randint(2, 6)
        gens = GeneratorSet(n, tuple(
            tuple(random.Random(rng.random()).sample(range(n), n))
            for _ in range(2)))
        els = group_closure(gens, cap=900)
        if len(els) > 200:
            continue
        elset = set(els)
        for p in els:
            assert inverse(p) in elset
            for q in els:
                assert compose(p, q) in elset


def test_closure_cap_is_hard_error():
    gens = GeneratorSet(6, (from_cycles(6, [[0, 1]]),
                            from_cycles(6, [[0, 1, 2, 3, 4, 5]])))
    with pytest.raises(ClosureOverflow):
        group_closure(gens, cap=100)


# --- wreath elements -------------------------------------------------------


def random_wreath(rng, nu, nr):
    pi = list(range(nu))
    rng.shuffle(pi)
    sigmas = []
    for _ in range(nu):
        s = list(range(nr))
        rng.shuffle(s)
        sigmas.append(tuple(s))
    return perm.WreathElement(tuple(pi), tuple(sigmas))


def test_wreath_identity_laws(rng):
    for _ in range(50):
        nu, nr = rng.randint(1, 6), rng.randint(1, 4)
        g = random_wreath(rng, nu, nr)
        e = perm.identity_wreath(nu, nr)
        assert perm.wreath_compose(g, e) == g
        assert perm.wreath_compose(e, g) == g
        assert perm.wreath_compose(g, perm.wreath_inverse(g)) == e
        assert perm.wreath_compose(perm.wreath_inverse(g), g) == e


def test_wreath_action_compatibility(rng):
    for _ in range(200):
        nu, nr = rng.randint(1, 6), rng.randint(1, 4)
        g = random_wreath(rng, nu, nr)
        h = random_wreath(rng, nu, nr)
        gh = perm.wreath_compose(g, h)
        u, r = rng.randrange(nu), rng.randrange(nr)
        step = perm.wreath_act_pair(h, *perm.wreath_act_pair(g, u, r))
        assert step == perm.wreath_act_pair(gh, u, r)


def test_pair_orbit_phase_flip():
    flip = perm.WreathElement((0,), ((1, 0),))
    ws = perm.WreathSet(1, 2, (flip,))
    assert perm.pair_orbit(ws, 0, 0) == {(0, 0), (0, 1)}
