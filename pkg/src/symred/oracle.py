"""Brute-force ground truth, kept independent of the search engine.

Orbit counting enumerates every assignment of the prefix set and
classifies it under the explicit closure of the projected stabilizer
group; the engine is correct when its output hits every orbit exactly
once.  Graph counting applies classical orbit counting over all vertex
permutations.  Caps are hard errors: a truncated oracle proves nothing.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from . import perm
from .core import Assignment, act_vars, act_wreath
from .encode import PER_VARIABLE_VALUES, SymmetryModel, stabilizer_symmetry
from .perm import WreathElement, WreathSet, wreath_compose

ORACLE_CAP = 10 ** 7


class OracleCapExceeded(RuntimeError):
    pass


def _stabilizer_closure(m: SymmetryModel, prefix, cap):
    """All elements of the projected stabilizer of the prefix set."""
    sym = stabilizer_symmetry(m, prefix)
    if m.value_mode == PER_VARIABLE_VALUES:
        ws = sym.wreath
        ident = perm.identity_wreath(ws.degree, ws.num_values)
        seen = {ident}
        elems = [ident]
        for e in elems:
            for g in ws.elements:
                h = wreath_compose(e, g)
                if h not in seen:
                    if len(seen) >= cap:
                        raise OracleCapExceeded(
                            f"stabilizer closure exceeds {cap}")
                    seen.add(h)
                    elems.append(h)
        return elems
    return perm.group_closure(sym.aut, cap=cap)


def orbit_classes(m: SymmetryModel, prefix) -> list[frozenset[Assignment]]:
    """All orbits of full prefix assignments under the projected
    stabilizer closure."""
    prefix = tuple(prefix)
    k = len(prefix)
    nr = m.num_values
    group_cap = max(2, ORACLE_CAP // max(1, nr ** k))
    group = _stabilizer_closure(m, prefix, group_cap)
    if nr ** k * len(group) > ORACLE_CAP:
        raise OracleCapExceeded(
            f"{nr}^{k} assignments x group order {len(group)} "
            f"exceeds {ORACLE_CAP}")
    acting = act_wreath if m.value_mode == PER_VARIABLE_VALUES else act_vars
    classes = []
    seen: set[Assignment] = set()
    for values in itertools.product(range(nr), repeat=k):
        x = Assignment.of(zip(prefix, values))
        if x in seen:
            continue
        orbit = frozenset(acting(g, x) for g in group)
        seen.update(orbit)
        classes.append(orbit)
    return classes


def orbit_count_exhaustive(m: SymmetryModel, prefix) -> int:
    """Number of isomorphism classes of full prefix assignments."""
    return len(orbit_classes(m, prefix))


def burnside_graph_count(n: int) -> int:
    """Number of isomorphism classes of simple graphs on n nodes,
    averaged over all n! permutations: for each permutation, 2 to the
    number of cycles of its induced action on unordered pairs."""
    if n > 10:
        raise OracleCapExceeded("burnside_graph_count capped at n=10")
    pairs = list(itertools.combinations(range(n), 2))
    index = {p: i for i, p in enumerate(pairs)}
    total = 0
    for g in itertools.permutations(range(n)):
        seen = [False] * len(pairs)
        cycles = 0
        for start in range(len(pairs)):
            if seen[start]:
                continue
            cycles += 1
            i = start
            while not seen[i]:
                seen[i] = True
                a, b = pairs[i]
                ga, gb = g[a], g[b]
                i = index[(ga, gb) if ga < gb else (gb, ga)]
        total += 2 ** cycles
    return total // math.factorial(n)


@dataclass
class CoverReport:
    """Outcome of checking engine output against the oracle's orbits."""

    orbit_count: int
    emitted_count: int
    missed_orbits: list[Assignment]       # one witness per unhit orbit
    duplicate_hits: list[Assignment]      # emitted pairs landing in one orbit
    unknown: list[Assignment]             # emitted but in no orbit

    @property
    def ok(self) -> bool:
        return (not self.missed_orbits and not self.duplicate_hits
                and not self.unknown
                and self.orbit_count == self.emitted_count)


def exact_cover_check(emitted, m: SymmetryModel, prefix) -> CoverReport:
    """Verify the engine output is a transversal of the oracle's orbits:
    every orbit hit exactly once, nothing outside."""
    classes = orbit_classes(m, prefix)
    hits = [0] * len(classes)
    where = {}
    for i, cls in enumerate(classes):
        for x in cls:
            where[x] = i
    unknown = []
    duplicates = []
    for x in emitted:
        i = where.get(x)
        if i is None:
            unknown.append(x)
            continue
        hits[i] += 1
        if hits[i] > 1:
            duplicates.append(x)
    missed = [min(cls, key=lambda a: a.items)
              for i, cls in enumerate(classes) if hits[i] == 0]
    return CoverReport(len(classes), len(list(emitted)), missed,
                       duplicates, unknown)
