"""Permutations on a dense integer domain, plus orbit machinery for
explicitly generated groups.

A permutation is a tuple ``p`` of length ``degree`` with ``p[i]`` the image
of point ``i``.  Groups act from the right: applying ``p`` then ``q`` is
``compose(p, q)``.  Orbit routines are breadth-first with the generator
order fixed by the caller, so repeated runs agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

Perm = tuple[int, ...]


class PermError(ValueError):
    """Invalid permutation input (degree mismatch, not a bijection, ...)."""


def identity(degree: int) -> Perm:
    return tuple(range(degree))


def is_perm(p) -> bool:
    return sorted(p) == list(range(len(p)))


def compose(p: Perm, q: Perm) -> Perm:
    """Product that applies ``p`` first, then ``q``: maps i to q[p[i]]."""
    if len(p) != len(q):
        raise PermError(f"degree mismatch: {len(p)} vs {len(q)}")
    return tuple(q[x] for x in p)


def inverse(p: Perm) -> Perm:
    inv = [0] * len(p)
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def conjugate(p: Perm, g: Perm) -> Perm:
    """g^-1 * p * g, i.e. p transported along g."""
    return compose(compose(inverse(g), p), g)


def from_cycles(degree: int, cycles) -> Perm:
    """Build a permutation from disjoint cycles given as point lists."""
    images = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            if images[a] != a:
                raise PermError(f"point {a} appears in two cycles")
            images[a] = b
    return tuple(images)


def cycle_string(p: Perm) -> str:
    """Readable disjoint-cycle form, identity rendered as '()'."""
    seen = set()
    parts = []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc = [i]
        j = p[i]
        while j != i:
            seen.add(j)
            cyc.append(j)
            j = p[j]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


@dataclass(frozen=True)
class GeneratorSet:
    """Generators of a permutation group on ``degree`` points.

    An empty generator list denotes the trivial group.
    """

    degree: int
    perms: tuple[Perm, ...]

    def __post_init__(self):
        for p in self.perms:
            if len(p) != self.degree:
                raise PermError(
                    f"generator degree {len(p)} != {self.degree}")

    @staticmethod
    def trivial(degree: int) -> "GeneratorSet":
        return GeneratorSet(degree, ())


@dataclass
class OrbitTransversal:
    """An orbit with witnesses: representative^witness[m] = m for every
    member m, and witness[representative] is the identity."""

    representative: int
    members: frozenset[int]
    witness: dict[int, Perm]

    @property
    def ordered_members(self) -> list[int]:
        return sorted(self.members)


def orbit_with_transversal(gens: GeneratorSet, point: int) -> OrbitTransversal:
    if not 0 <= point < gens.degree:
        raise PermError(f"point {point} out of range 0..{gens.degree - 1}")
    ident = identity(gens.degree)
    witness = {point: ident}
    queue = [point]
    for x in queue:
        wx = witness[x]
        for g in gens.perms:
            y = g[x]
            if y not in witness:
                witness[y] = compose(wx, g)
                queue.append(y)
    return OrbitTransversal(point, frozenset(witness), witness)


def orbit(gens: GeneratorSet, point: int) -> frozenset[int]:
    """Orbit members only (no witnesses)."""
    if not 0 <= point < gens.degree:
        raise PermError(f"point {point} out of range 0..{gens.degree - 1}")
    seen = {point}
    queue = [point]
    for x in queue:
        for g in gens.perms:
            y = g[x]
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return frozenset(seen)


def same_orbit(gens: GeneratorSet, u: int, v: int) -> bool:
    return v in orbit(gens, u)


def min_in_orbit(gens: GeneratorSet, point: int) -> int:
    return min(orbit(gens, point))


def orbit_partition(gens: GeneratorSet) -> list[int]:
    """Union-find style map point -> minimum point of its orbit."""
    rep = list(range(gens.degree))

    def find(x):
        while rep[x] != x:
            rep[x] = rep[rep[x]]
            x = rep[x]
        return x

    for g in gens.perms:
        for i, j in enumerate(g):
            a, b = find(i), find(j)
            if a != b:
                if a < b:
                    rep[b] = a
                else:
                    rep[a] = b
    return [find(x) for x in range(gens.degree)]


# ---------------------------------------------------------------------------
# Variable-and-value symmetries (wreath elements)


@dataclass(frozen=True)
class WreathElement:
    """A variable permutation plus one value permutation per variable.

    Acts on a pair (u, r) by moving u along ``pi`` and passing r through
    the value permutation attached to the *target* variable:
    (u, r) -> (pi[u], sigmas[pi[u]][r]).
    """

    pi: Perm
    sigmas: tuple[Perm, ...]

    def __post_init__(self):
        if len(self.sigmas) != len(self.pi):
            raise PermError("one value permutation per variable required")


def identity_wreath(num_vars: int, num_values: int) -> WreathElement:
    sig = identity(num_values)
    return WreathElement(identity(num_vars), (sig,) * num_vars)


def wreath_compose(a: WreathElement, b: WreathElement) -> WreathElement:
    """Product applying ``a`` first, then ``b``."""
    pi = compose(a.pi, b.pi)
    inv_b = inverse(b.pi)
    sigmas = tuple(compose(a.sigmas[inv_b[u]], b.sigmas[u])
                   for u in range(len(pi)))
    return WreathElement(pi, sigmas)


def wreath_inverse(a: WreathElement) -> WreathElement:
    rho = inverse(a.pi)
    taus = tuple(inverse(a.sigmas[a.pi[u]]) for u in range(len(a.pi)))
    return WreathElement(rho, taus)


def wreath_act_pair(a: WreathElement, u: int, r: int) -> tuple[int, int]:
    v = a.pi[u]
    return v, a.sigmas[v][r]


@dataclass(frozen=True)
class WreathSet:
    """Generators of a variable-and-value symmetry group."""

    degree: int
    num_values: int
    elements: tuple[WreathElement, ...]

    @property
    def variable_part(self) -> GeneratorSet:
        return GeneratorSet(self.degree, tuple(e.pi for e in self.elements))

    @staticmethod
    def trivial(degree: int, num_values: int) -> "WreathSet":
        return WreathSet(degree, num_values, ())


def pair_orbit(ws: WreathSet, p: int, r: int) -> set[tuple[int, int]]:
    """Orbit of a (variable, value) pair under the generated group."""
    seen = {(p, r)}
    queue = [(p, r)]
    for u, val in queue:
        for el in ws.elements:
            v = el.pi[u]
            nxt = (v, el.sigmas[v][val])
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return seen


def wreath_variable_orbit(ws: WreathSet, point: int) -> dict[int, WreathElement]:
    """Orbit of a variable with full group-element witnesses:
    point^(witness[m].pi) == m for every member m."""
    if not 0 <= point < ws.degree:
        raise PermError(f"point {point} out of range 0..{ws.degree - 1}")
    witness = {point: identity_wreath(ws.degree, ws.num_values)}
    queue = [point]
    for x in queue:
        wx = witness[x]
        for el in ws.elements:
            y = el.pi[x]
            if y not in witness:
                witness[y] = wreath_compose(wx, el)
                queue.append(y)
    return witness


class ClosureOverflow(RuntimeError):
    """Group closure exceeded the caller-supplied cap."""


def group_closure(gens: GeneratorSet, cap: int = 100000) -> list[Perm]:
    """All elements of the generated group, in breadth-first discovery
    order.  Oracle-grade only: raises ClosureOverflow beyond ``cap``."""
    ident = identity(gens.degree)
    seen = {ident}
    elems = [ident]
    for e in elems:
        for g in gens.perms:
            h = compose(e, g)
            if h not in seen:
                if len(seen) >= cap:
                    raise ClosureOverflow(
                        f"group order exceeds cap {cap}")
                seen.add(h)
                elems.append(h)
    return elems
