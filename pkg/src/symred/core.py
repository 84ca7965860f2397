"""The prefix-assignment search engine.

Values are assigned to a user-chosen prefix of variables one variable at
a time so that exactly one representative of every isomorphism class of
prefix assignments is visited.  Per level the engine precomputes, from
the symmetry model, the stabilizer of the already-assigned prefix set and
the orbit of the next prefix variable; extensions then pass two checks:

* a cheap minimality check against the parent's stabilizer at push time
  (one representative per orbit of candidate (variable, value) pairs);
* a canonical-extension check at pop time, which canonically labels the
  extended assignment and accepts it only if the extension variable is
  equivalent to the canonical choice of removed variable.

Accepted assignments are normalized so their domain is exactly the prefix
set of their level, which is what makes the per-level precomputation
valid throughout the search.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import perm
from .encode import (PER_VARIABLE_VALUES, AssignmentSymmetry, SymmetryModel,
                     kappa_of_assignment, stabilizer_symmetry)
from .perm import (GeneratorSet, Perm, WreathElement, WreathSet, pair_orbit,
                   wreath_compose, wreath_inverse)


class PlanError(ValueError):
    """Invalid prefix plan request."""


class SearchInvariantError(RuntimeError):
    """An internal consistency condition failed; indicates a bug or a
    model/plan mismatch, never a bad user input."""


# ---------------------------------------------------------------------------
# Partial assignments and group actions on them


@dataclass(frozen=True)
class Assignment:
    """A partial assignment: (variable, value) pairs sorted by variable."""

    items: tuple[tuple[int, int], ...]

    @staticmethod
    def empty() -> "Assignment":
        return Assignment(())

    @staticmethod
    def of(pairs) -> "Assignment":
        items = tuple(sorted(pairs))
        vs = [u for u, _ in items]
        if len(set(vs)) != len(vs):
            raise ValueError("duplicate variable in assignment")
        return Assignment(items)

    @property
    def level(self) -> int:
        return len(self.items)

    def domain(self) -> tuple[int, ...]:
        return tuple(u for u, _ in self.items)

    def value(self, u: int) -> int:
        for v, r in self.items:
            if v == u:
                return r
        raise KeyError(u)

    def extend(self, u: int, r: int) -> "Assignment":
        return Assignment.of(self.items + ((u, r),))

    def sort_key(self):
        return self.items


def act_vars(gamma: Perm, x: Assignment) -> Assignment:
    """Relabel the assigned variables along gamma; values ride along."""
    return Assignment.of((gamma[u], r) for u, r in x.items)


def act_wreath(el: WreathElement, x: Assignment) -> Assignment:
    """Relabel variables along el.pi and rewrite each value through the
    value permutation attached to the target variable."""
    out = []
    for u, r in x.items:
        v = el.pi[u]
        out.append((v, el.sigmas[v][r]))
    return Assignment.of(out)


def act(gamma, x: Assignment) -> Assignment:
    if isinstance(gamma, WreathElement):
        return act_wreath(gamma, x)
    return act_vars(gamma, x)


# ---------------------------------------------------------------------------
# Prefix plans


@dataclass
class PrefixLevel:
    """Per-level precomputed data for extending from level j-1 to j."""

    var: int                      # the level's prefix variable u_j
    candidates: tuple[int, ...]   # orbit of var under the level-(j-1) stabilizer
    normalizers: dict            # candidate p -> stabilizer element mapping p to var
    cur_orbit: frozenset[int]     # orbit of var under the level-j stabilizer


@dataclass
class PrefixPlan:
    """Prefix variables plus per-level stabilizer orbits and normalizers."""

    prefix: tuple[int, ...]
    value_mode: str
    num_values: int
    syms: list[AssignmentSymmetry]   # prefix-set stabilizer data, levels 0..k
    levels: list[PrefixLevel]

    @property
    def k(self) -> int:
        return len(self.prefix)

    def level_aut(self, j: int):
        """Stabilizer generators of the level-j prefix set, in the shape
        the minimality check expects for the value mode."""
        sym = self.syms[j]
        if self.value_mode == PER_VARIABLE_VALUES:
            return sym.wreath
        return sym.aut


def build_prefix_plan(m: SymmetryModel, prefix) -> PrefixPlan:
    """Precompute stabilizers, candidate orbits and normalizers for every
    prefix level."""
    prefix = tuple(prefix)
    if len(set(prefix)) != len(prefix):
        raise PlanError("prefix variables must be distinct")
    if not all(0 <= u < m.num_vars for u in prefix):
        raise PlanError("prefix variable out of range")
    if m.num_values == 0:
        raise PlanError("empty value set")
    syms = [stabilizer_symmetry(m, prefix[:j])
            for j in range(len(prefix) + 1)]
    levels = []
    for j in range(1, len(prefix) + 1):
        uj = prefix[j - 1]
        if m.value_mode == PER_VARIABLE_VALUES:
            witness = perm.wreath_variable_orbit(syms[j - 1].wreath, uj)
            normalizers = {p: wreath_inverse(w) for p, w in witness.items()}
        else:
            orb = perm.orbit_with_transversal(syms[j - 1].aut, uj)
            normalizers = {p: perm.inverse(w)
                           for p, w in orb.witness.items()}
        cur = perm.orbit(syms[j].aut, uj)
        levels.append(PrefixLevel(uj, tuple(sorted(normalizers)),
                                  normalizers, cur))
    return PrefixPlan(prefix, m.value_mode, m.num_values, syms, levels)


# ---------------------------------------------------------------------------
# Work items and the two isomorph-rejection checks


@dataclass(frozen=True)
class WorkItem:
    """One search node in transit: the extended (not yet normalized)
    assignment, the extension variable, and the parent's stabilizer
    generators (context for reproducing the minimality check)."""

    assignment: Assignment
    ext_var: int | None                          # None only for the root
    parent_aut: GeneratorSet | WreathSet | None  # None only for the root


def minimal_in_parent_orbit(item: WorkItem) -> bool:
    """Push-time check: accept the extension only if its (variable, value)
    pair is the lexicographic minimum of its orbit under the parent's
    stabilizer.  In global mode values are fixed by the action, so only
    the variable matters."""
    aut = item.parent_aut
    p = item.ext_var
    if isinstance(aut, WreathSet):
        r = item.assignment.value(p)
        return (p, r) == min(pair_orbit(aut, p, r))
    return p == perm.min_in_orbit(aut, p)


def _conjugate_aut(aut, nu):
    """Transport stabilizer generators along nu: Aut(X^nu) = nu^-1 Aut(X) nu."""
    if isinstance(aut, WreathSet):
        w_inv = wreath_inverse(nu)
        els = tuple(wreath_compose(wreath_compose(w_inv, e), nu)
                    for e in aut.elements)
        return WreathSet(aut.degree, aut.num_values, els)
    return GeneratorSet(aut.degree,
                        tuple(perm.conjugate(g, nu) for g in aut.perms))


def accept_extension(item: WorkItem, plan: PrefixPlan, m: SymmetryModel):
    """Pop-time canonical-extension check.

    Canonically labels the extended assignment X and accepts iff the
    extension variable is equivalent, under Aut(X), to the candidate
    whose canonical position is smallest.  On acceptance returns the
    normalized assignment (domain = the level's prefix set) and its
    stabilizer generators, transported along the normalizer.
    """
    x = item.assignment
    j = x.level
    level = plan.levels[j - 1]
    p = item.ext_var
    nu = level.normalizers[p]
    nu_pi = nu.pi if isinstance(nu, WreathElement) else nu
    sym = kappa_of_assignment(m, x.items)
    cands = [v for v in x.domain() if nu_pi[v] in level.cur_orbit]
    if not cands:
        raise SearchInvariantError(
            f"no canonical candidate at level {j} for {x.items}")
    pstar = min(cands, key=lambda v: sym.canonical_rank[v])
    if not perm.same_orbit(sym.aut, p, pstar):
        return False, None, None
    normalized = act(nu, x)
    if plan.value_mode == PER_VARIABLE_VALUES:
        aut_s = _conjugate_aut(sym.wreath, nu)
    else:
        aut_s = _conjugate_aut(sym.aut, nu)
    if set(normalized.domain()) != set(plan.prefix[:j]):
        raise SearchInvariantError(
            f"normalization failed at level {j}: domain "
            f"{normalized.domain()} != prefix {plan.prefix[:j]}")
    return True, normalized, aut_s


# ---------------------------------------------------------------------------
# Expansion and the sequential driver


@dataclass
class SearchStats:
    """Per-level node accounting in the shape of the run reports."""

    pops: list[int]
    accepted: list[int]
    rejected_canonical: list[int]   # pop-time rejections
    rejected_minimal: list[int]     # push-time rejections

    @staticmethod
    def for_depth(k: int) -> "SearchStats":
        return SearchStats([0] * (k + 1), [0] * (k + 1),
                           [0] * (k + 1), [0] * (k + 1))

    def merge(self, other: "SearchStats") -> None:
        for a, b in ((self.pops, other.pops),
                     (self.accepted, other.accepted),
                     (self.rejected_canonical, other.rejected_canonical),
                     (self.rejected_minimal, other.rejected_minimal)):
            for i, x in enumerate(b):
                a[i] += x


def expand(item: WorkItem, plan: PrefixPlan, m: SymmetryModel, sink,
           stats: SearchStats | None = None) -> list[WorkItem]:
    """Process one popped node: run the canonical-extension check, emit at
    full depth, otherwise build the level's candidate extensions filtered
    by the minimality check.  Children come back in (variable, value)
    lexicographic order."""
    x = item.assignment
    j = x.level
    if stats:
        stats.pops[j] += 1
    if j == 0:
        s = x
        aut = plan.level_aut(0)
    else:
        ok, s, aut = accept_extension(item, plan, m)
        if not ok:
            if stats:
                stats.rejected_canonical[j] += 1
            return []
    if stats:
        stats.accepted[j] += 1
    if j == plan.k:
        sink(s)
        return []
    level = plan.levels[j]
    children = []
    for p in level.candidates:
        for r in range(plan.num_values):
            child = WorkItem(s.extend(p, r), p, aut)
            if minimal_in_parent_orbit(child):
                children.append(child)
            elif stats:
                stats.rejected_minimal[j + 1] += 1
    return children


def root_item() -> WorkItem:
    return WorkItem(Assignment.empty(), None, None)


def run_sequential(m: SymmetryModel, plan: PrefixPlan,
                   stats: SearchStats | None = None) -> list[Assignment]:
    """Depth-first traversal with an explicit stack; returns the emitted
    full-prefix assignments in traversal order, one per isomorphism
    class."""
    out: list[Assignment] = []
    stack = [root_item()]
    while stack:
        item = stack.pop()
        children = expand(item, plan, m, out.append, stats)
        stack.extend(reversed(children))
    return out
