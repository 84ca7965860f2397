"""Instance generators for the benchmark families.

Each generator returns a CNF, an optional auxiliary symmetry graph, and a
default prefix.  Everything is deterministic given the parameters (plus
the seed where one applies), so regenerated instances are byte-identical.

Variable numbering conventions are documented per family; prefixes are
0-based variable indices.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .canon import ColoredGraph
from .encode import Cnf


class GenError(ValueError):
    """Invalid generator parameters."""


@dataclass
class Instance:
    """A generated benchmark instance."""

    cnf: Cnf
    aux: ColoredGraph | None
    prefix: tuple[int, ...]     # 0-based variable indices, assignment order
    family: str
    params: dict

    @property
    def name(self) -> str:
        inner = ",".join(f"{k}={v}" for k, v in self.params.items())
        return f"{self.family}({inner})"


def _pairs_row_major(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


# ---------------------------------------------------------------------------
# Modulo-2 tensor decomposition


def gen_tensor(m: int, r: int, ones: int, seed: int = 0) -> Instance:
    """Rank-r decomposition of a random m x m x m 0/1 tensor modulo 2.

    Variables: three m x r matrices A, B, C of Booleans, numbered
    A-block row-major, then B, then C (3mr variables).  The CNF encodes,
    per tensor cell (i,j,k), the parity of the r products
    A[i,l] B[j,l] C[k,l] against the target bit: each product gets a fresh
    variable tied down with 3+1 clauses, and the parity is chained through
    fresh partial-sum variables.  The auxiliary graph encodes the
    polynomial system directly: one product vertex per monomial joined to
    its three matrix variables, one sum vertex per cell adjacent to its
    products, and two uniquely colored constant vertices for the
    right-hand sides.  Default prefix: the first min(3, m) rows of A.
    """
    if m < 1 or r < 1:
        raise GenError("m and r must be positive")
    if not 1 <= ones <= m ** 3:
        raise GenError(f"ones must be in 1..{m ** 3}")
    rng = random.Random(seed)
    cells = [(i, j, k) for i in range(m) for j in range(m) for k in range(m)]
    hot = set(rng.sample(cells, ones))

    nmat = m * r
    def a_var(i, l):
        return i * r + l + 1
    def b_var(j, l):
        return nmat + j * r + l + 1
    def c_var(k, l):
        return 2 * nmat + k * r + l + 1

    clauses = []
    next_var = 3 * nmat + 1
    for (i, j, k) in cells:
        target = 1 if (i, j, k) in hot else 0
        prods = []
        for l in range(r):
            a, b, c = a_var(i, l), b_var(j, l), c_var(k, l)
            w = next_var
            next_var += 1
            prods.append(w)
            clauses += [[-w, a], [-w, b], [-w, c], [w, -a, -b, -c]]
        # XOR chain: acc_l = acc_{l-1} xor prods[l]; final acc equals target.
        acc = prods[0]
        for w in prods[1:]:
            s = next_var
            next_var += 1
            clauses += [[-s, acc, w], [-s, -acc, -w],
                        [s, acc, -w], [s, -acc, w]]
            acc = s
        clauses.append([acc] if target else [-acc])
    cnf = Cnf.make(next_var - 1, clauses)

    # Auxiliary graph over the 3mr matrix variables only.
    nv = 3 * nmat
    verts = nv
    colors = [0] * nv
    edges = []
    sum_vertex = {}
    for (i, j, k) in cells:
        sv = verts
        verts += 1
        colors.append(2)
        sum_vertex[(i, j, k)] = sv
        for l in range(r):
            pv = verts
            verts += 1
            colors.append(1)
            edges += [(pv, a_var(i, l) - 1), (pv, b_var(j, l) - 1),
                      (pv, c_var(k, l) - 1), (pv, sv)]
    const0, const1 = verts, verts + 1
    verts += 2
    colors += [3, 4]
    for cell, sv in sum_vertex.items():
        edges.append((sv, const1 if cell in hot else const0))
    aux = ColoredGraph(verts, colors, edges)

    prefix = tuple(a_var(i, l) - 1 for i in range(min(3, m))
                   for l in range(r))
    return Instance(cnf, aux, prefix, "tensor",
                    {"m": m, "r": r, "ones": ones, "seed": seed})


# ---------------------------------------------------------------------------
# Clique coloring


def gen_ccp(n: int, s: int, t: int) -> Instance:
    """Clique Coloring: does a t-colorable n-node graph contain K_s?

    Variables, in this order: x[i][j] for ordered pairs i != j (edge
    indicators, n(n-1) of them, row-major skipping i == j), then y[p][j]
    (node j occupies clique slot p; p-major), then z[i][k] (node i has
    color k; i-major).  The five clause families follow the standard
    encoding literally.  The auxiliary graph joins each variable vertex to
    auxiliary node/slot/color vertices, using six colors in total.
    Default prefix: y[1][1..n].
    """
    if not (n >= s >= 1 and t >= 1):
        raise GenError("require n >= s >= 1 and t >= 1")
    x_index = {}
    idx = 1
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j:
                x_index[(i, j)] = idx
                idx += 1
    def y_var(p, j):
        return n * (n - 1) + (p - 1) * n + j
    def z_var(i, k):
        return n * (n - 1) + s * n + (i - 1) * t + k
    num_vars = n * (n - 1) + s * n + t * n

    clauses = []
    # (1) every slot is occupied
    for p in range(1, s + 1):
        clauses.append([y_var(p, j) for j in range(1, n + 1)])
    # (2) no node fills two slots
    for p in range(1, s + 1):
        for q in range(1, s + 1):
            if p != q:
                for j in range(1, n + 1):
                    clauses.append([-y_var(p, j), -y_var(q, j)])
    # (3) slot occupants are pairwise adjacent
    for p in range(1, s + 1):
        for q in range(1, s + 1):
            if p != q:
                for i in range(1, n + 1):
                    for j in range(1, n + 1):
                        if i != j:
                            clauses.append([-y_var(p, i), -y_var(q, j),
                                            x_index[(i, j)]])
    # (4) adjacent nodes get different colors
    for k in range(1, t + 1):
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                if i != j:
                    clauses.append([-z_var(i, k), -z_var(j, k),
                                    -x_index[(i, j)]])
    # (5) every node gets a color
    for i in range(1, n + 1):
        clauses.append([z_var(i, k) for k in range(1, t + 1)])
    cnf = Cnf.make(num_vars, clauses)

    # Auxiliary graph: variable vertices first (same numbering), then
    # node, slot and color vertices.
    node_v = {i: num_vars + i - 1 for i in range(1, n + 1)}
    slot_v = {p: num_vars + n + p - 1 for p in range(1, s + 1)}
    col_v = {k: num_vars + n + s + k - 1 for k in range(1, t + 1)}
    colors = ([0] * (n * (n - 1)) + [1] * (s * n) + [2] * (t * n)
              + [3] * n + [4] * s + [5] * t)
    edges = []
    for (i, j), v in x_index.items():
        edges += [(v - 1, node_v[i]), (v - 1, node_v[j])]
    for p in range(1, s + 1):
        for j in range(1, n + 1):
            edges += [(y_var(p, j) - 1, slot_v[p]),
                      (y_var(p, j) - 1, node_v[j])]
    for i in range(1, n + 1):
        for k in range(1, t + 1):
            edges += [(z_var(i, k) - 1, node_v[i]),
                      (z_var(i, k) - 1, col_v[k])]
    aux = ColoredGraph(num_vars + n + s + t, colors, edges)

    prefix = tuple(y_var(1, j) - 1 for j in range(1, n + 1))
    return Instance(cnf, aux, prefix, "ccp", {"n": n, "s": s, "t": t})


# ---------------------------------------------------------------------------
# Ramsey


def gen_ramsey(n: int, k: int = 4) -> Instance:
    """Does some n-node graph avoid K_k in both itself and its complement?

    One variable per edge of K_n, row-major over i < j.  For every
    k-subset, one clause forbids all its edges present and one forbids
    all absent.  No auxiliary graph: symmetry is read off the CNF graph.
    Default prefix: the first min(33, #edges) edge variables.
    """
    if not n >= k >= 2:
        raise GenError("require n >= k >= 2")
    pairs = _pairs_row_major(n)
    index = {p: i + 1 for i, p in enumerate(pairs)}
    clauses = []
    for sub in itertools.combinations(range(n), k):
        evars = [index[p] for p in itertools.combinations(sub, 2)]
        clauses.append([-e for e in evars])
        clauses.append(list(evars))
    cnf = Cnf.make(len(pairs), clauses)
    prefix = tuple(range(min(33, len(pairs))))
    return Instance(cnf, None, prefix, "ramsey", {"n": n, "k": k})


# ---------------------------------------------------------------------------
# Unlabeled graph listing


def gen_a000088(n: int) -> Instance:
    """Listing n-node graphs up to isomorphism: an empty CNF over the
    C(n,2) edge variables plus the subdivided complete graph as the
    auxiliary graph (one variable vertex in the middle of each K_n edge).
    Prefix: all edge variables, row-major."""
    if n < 1:
        raise GenError("n must be positive")
    pairs = _pairs_row_major(n)
    nv = len(pairs)
    cnf = Cnf.make(nv, [])
    edges = []
    for idx, (i, j) in enumerate(pairs):
        edges += [(idx, nv + i), (idx, nv + j)]
    aux = ColoredGraph(nv + n, [0] * nv + [1] * n, edges)
    return Instance(cnf, aux, tuple(range(nv)), "a000088", {"n": n})
