"""Symmetry models: graphs whose automorphisms, projected to the variable
vertices, realize the symmetry group of a constraint system.

Two value regimes are supported.  In ``global`` mode the model carries one
uniquely colored vertex per value, so only variable permutations arise.
In ``phase`` mode each variable owns a pair of same-colored literal
vertices, so automorphisms may also flip values per variable; projection
then yields variable-and-value (wreath) symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canon import (CanonResult, ColoredGraph, EncodingError, canonical_form,
                    induced_variable_action)
from .perm import GeneratorSet, WreathElement, WreathSet

GLOBAL_VALUES = "global"
PER_VARIABLE_VALUES = "phase"
VALUE_MODES = (GLOBAL_VALUES, PER_VARIABLE_VALUES)


class CnfError(ValueError):
    """Malformed CNF input."""


@dataclass(frozen=True)
class Cnf:
    """Clauses as lists of nonzero signed 1-based variable indices."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for ci, clause in enumerate(self.clauses):
            for lit in clause:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise CnfError(f"literal {lit} out of range in clause "
                                   f"{ci + 1} (num_vars={self.num_vars})")

    @staticmethod
    def make(num_vars: int, clauses) -> "Cnf":
        return Cnf(num_vars, tuple(tuple(c) for c in clauses))


@dataclass
class SymmetryModel:
    """A vertex-colored graph wrapping a constraint system's symmetries.

    Variables are the first ``num_vars`` vertices (dense 0-based ids).
    Attachment vertices (value vertices in global mode, literal vertices
    plus one marker in phase mode) sit at the end of the vertex range.
    """

    graph: ColoredGraph
    num_vars: int
    value_mode: str
    values: tuple[int, ...]                   # dense value ids 0..|R|-1
    value_vertex: dict[int, int] = field(default_factory=dict)
    literal_vertex: dict[tuple[int, int], int] = field(default_factory=dict)
    marker_vertex: int | None = None

    def __post_init__(self):
        if self.value_mode not in VALUE_MODES:
            raise ValueError(f"unknown value mode {self.value_mode!r}")
        check_color_separation(self.graph, self.num_vars)

    @property
    def num_values(self) -> int:
        return len(self.values)

    def variable_vertices(self) -> range:
        return range(self.num_vars)


def check_color_separation(g: ColoredGraph, num_vars: int) -> None:
    """Variable vertices must not share a color with any other vertex."""
    var_colors = {g.colors[v] for v in range(num_vars)}
    offenders = [v for v in range(num_vars, g.n)
                 if g.colors[v] in var_colors]
    if offenders:
        raise EncodingError(
            "variable colors reused by non-variable vertices "
            f"{offenders[:10]}")


def cnf_to_model(f: Cnf, value_mode: str = GLOBAL_VALUES) -> SymmetryModel:
    """Symmetry graph of a CNF formula.

    Global mode: one vertex per variable, one per negative literal (joined
    to its variable), one per clause (joined to its literals), plus two
    uniquely colored value vertices.  Phase mode: positive and negative
    literal vertices share a color and are joined to their variable, so a
    phase flip of a variable is an automorphism; clause vertices attach to
    literal vertices, and a single uniquely colored marker vertex serves
    as the attachment point.
    """
    nv = f.num_vars
    if value_mode == GLOBAL_VALUES:
        neg = {u: nv + u for u in range(nv)}
        vpos = 2 * nv
        edges = [(u, neg[u]) for u in range(nv)]
        colors = [0] * nv + [1] * nv
        for clause in f.clauses:
            cvert = vpos
            vpos += 1
            colors.append(2)
            for lit in clause:
                u = abs(lit) - 1
                edges.append((cvert, u if lit > 0 else neg[u]))
        fvert, tvert = vpos, vpos + 1
        colors += [3, 4]
        g = ColoredGraph(vpos + 2, colors, edges)
        return SymmetryModel(g, nv, value_mode, (0, 1),
                             value_vertex={0: fvert, 1: tvert})

    lit = {(u, r): nv + 2 * u + r for u in range(nv) for r in (0, 1)}
    edges = [(u, lit[(u, r)]) for u in range(nv) for r in (0, 1)]
    colors = [0] * nv + [1] * (2 * nv)
    vpos = 3 * nv
    for clause in f.clauses:
        cvert = vpos
        vpos += 1
        colors.append(2)
        for l in clause:
            u = abs(l) - 1
            edges.append((cvert, lit[(u, 1 if l > 0 else 0)]))
    marker = vpos
    colors.append(3)
    g = ColoredGraph(vpos + 1, colors, edges)
    return SymmetryModel(g, nv, value_mode, (0, 1),
                         literal_vertex=lit, marker_vertex=marker)


def load_aux_model(g: ColoredGraph, num_vars: int,
                   value_mode: str = GLOBAL_VALUES) -> SymmetryModel:
    """Wrap a user-supplied auxiliary graph.

    The first ``num_vars`` vertices are taken to be the variables (in
    variable order); value/marker vertices are appended with fresh colors,
    leaving the user graph otherwise unchanged.
    """
    if num_vars > g.n:
        raise EncodingError(f"{num_vars} variables but {g.n} vertices")
    check_color_separation(g, num_vars)
    fresh = max(g.colors, default=-1) + 1
    n = g.n
    colors = list(g.colors)
    edges = list(g.edges)
    if value_mode == GLOBAL_VALUES:
        colors += [fresh, fresh + 1]
        graph = ColoredGraph(n + 2, colors, edges)
        return SymmetryModel(graph, num_vars, value_mode, (0, 1),
                             value_vertex={0: n, 1: n + 1})
    lit = {(u, r): n + 2 * u + r for u in range(num_vars) for r in (0, 1)}
    edges += [(u, lit[(u, r)]) for u in range(num_vars) for r in (0, 1)]
    colors += [fresh] * (2 * num_vars)
    marker = n + 2 * num_vars
    colors.append(fresh + 1)
    graph = ColoredGraph(marker + 1, colors, edges)
    return SymmetryModel(graph, num_vars, value_mode, (0, 1),
                         literal_vertex=lit, marker_vertex=marker)


def attach_set(m: SymmetryModel, variables) -> ColoredGraph:
    """Graph whose automorphisms, projected to variables, form the setwise
    stabilizer of the given variable set: each member is joined to one
    fixed attachment vertex."""
    if not all(0 <= u < m.num_vars for u in variables):
        raise EncodingError("attach_set: not a variable subset")
    if m.value_mode == GLOBAL_VALUES:
        anchor = m.value_vertex[m.values[0]]
        extra = [(u, anchor) for u in variables]
    else:
        extra = [(u, m.marker_vertex) for u in variables]
    return m.graph.with_extra_edges(extra)


def attach_assignment(m: SymmetryModel, bindings) -> ColoredGraph:
    """Graph whose automorphisms, projected to variables, stabilize the
    partial assignment given as (variable, value) pairs."""
    extra = []
    for u, r in bindings:
        if not 0 <= u < m.num_vars:
            raise EncodingError(f"assignment to non-variable {u}")
        if r not in m.values:
            raise EncodingError(f"value {r} outside the value set")
        if m.value_mode == GLOBAL_VALUES:
            extra.append((u, m.value_vertex[r]))
        else:
            extra.append((m.literal_vertex[(u, r)], m.marker_vertex))
    return m.graph.with_extra_edges(extra)


def project_wreath(m: SymmetryModel, result: CanonResult) -> WreathSet:
    """Project graph automorphisms to wreath elements on (variable, value)
    pairs, reading per-variable value permutations off the literal
    vertices (phase mode only)."""
    if m.value_mode != PER_VARIABLE_VALUES:
        raise EncodingError("wreath projection requires phase mode")
    nv = m.num_vars
    nr = m.num_values
    elems = []
    seen = set()
    for g in result.aut_generators.perms:
        pi = [0] * nv
        sigmas = []
        for u in range(nv):
            img = g[u]
            if img >= nv:
                raise EncodingError(
                    f"automorphism moves variable vertex {u} out of range")
            pi[u] = img
        for u in range(nv):
            v = pi[u]
            sig = [0] * nr
            for r in range(nr):
                lv = g[m.literal_vertex[(u, r)]]
                hit = [rr for rr in range(nr)
                       if m.literal_vertex[(v, rr)] == lv]
                if len(hit) != 1:
                    raise EncodingError(
                        "literal vertex mapped outside its variable pair")
                sig[r] = hit[0]
            sigmas.append(tuple(sig))
        # sigma is indexed by the *target* variable of the pair action
        by_target = [None] * nv
        for u in range(nv):
            by_target[pi[u]] = sigmas[u]
        el = WreathElement(tuple(pi), tuple(by_target))
        if el not in seen:
            seen.add(el)
            elems.append(el)
    return WreathSet(nv, nr, tuple(elems))


@dataclass
class AssignmentSymmetry:
    """Canonical data of one attached assignment graph."""

    key: ColoredGraph                 # canonical form; equal iff isomorphic
    canonical_rank: tuple[int, ...]   # variable -> rank in canonical order
    aut: GeneratorSet                 # variable projection of Aut
    wreath: WreathSet | None          # phase mode only


def _project(m: SymmetryModel, res: CanonResult) -> AssignmentSymmetry:
    positions = [res.labeling[u] for u in range(m.num_vars)]
    order = sorted(range(m.num_vars), key=lambda u: positions[u])
    rank = [0] * m.num_vars
    for i, u in enumerate(order):
        rank[u] = i
    aut = induced_variable_action(res, range(m.num_vars))
    wreath = (project_wreath(m, res)
              if m.value_mode == PER_VARIABLE_VALUES else None)
    return AssignmentSymmetry(res.canonical, tuple(rank), aut, wreath)


def kappa_of_assignment(m: SymmetryModel, bindings) -> AssignmentSymmetry:
    """Canonical key, canonical variable ranks, and projected stabilizer
    generators of a partial assignment."""
    return _project(m, canonical_form(attach_assignment(m, bindings)))


def stabilizer_symmetry(m: SymmetryModel, variables) -> AssignmentSymmetry:
    """Like kappa_of_assignment but for a variable *set* (the setwise
    stabilizer graph)."""
    return _project(m, canonical_form(attach_set(m, variables)))
