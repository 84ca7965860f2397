"""Vertex-colored graphs and a self-contained canonical labeling engine.

``canonical_form`` runs an individualization-refinement backtracking search
over ordered partitions and returns a canonical labeling, the relabeled
canonical graph, and generators of the automorphism group.  The canonical
form of a graph depends only on its isomorphism class: relabeling the
input yields the identical canonical graph.

The engine targets desk-scale graphs (up to a few thousand vertices).  Two
counting kernels back the refinement step: plain integer bitmasks for
small graphs and scipy sparse adjacency for large ones.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .perm import GeneratorSet, Perm, compose, identity, inverse

# Refinement switches to the sparse counting kernel above this vertex count.
_SPARSE_CUTOFF = 192

# Hard cap: bitmask rows become unwieldy beyond this.
MAX_VERTICES = 8192


class GraphError(ValueError):
    """Malformed graph input."""


class EncodingError(ValueError):
    """A structural assumption about colors/vertex roles is violated."""


class ColoredGraph:
    """Undirected vertex-colored graph on vertices 0..n-1.

    Colors are small dense integers.  Edges are unordered pairs without
    loops or duplicates.  Equality and hashing compare (n, colors, edges)
    exactly, which is how canonical forms are compared.
    """

    __slots__ = ("n", "colors", "edges", "_adj", "_edge_arrays", "_hash")

    def __init__(self, n: int, colors, edges):
        if n > MAX_VERTICES:
            raise GraphError(f"vertex count {n} exceeds cap {MAX_VERTICES}")
        colors = tuple(colors)
        if len(colors) != n:
            raise GraphError(f"{len(colors)} colors for {n} vertices")
        norm = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u},{v}) out of range")
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            norm.add((u, v) if u < v else (v, u))
        self.n = n
        self.colors = colors
        self.edges = frozenset(norm)
        self._adj = None
        self._edge_arrays = None
        self._hash = None

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return (self.n == other.n and self.colors == other.colors
                and self.edges == other.edges)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.colors, self.edges))
        return self._hash

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, edges={len(self.edges)})"

    def adjacency_masks(self) -> list[int]:
        """Row bitmasks: bit v of row u set iff {u,v} is an edge."""
        if self._adj is None:
            adj = [0] * self.n
            for u, v in self.edges:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
            self._adj = adj
        return self._adj

    def edge_arrays(self):
        """Sorted numpy endpoint arrays plus packed edge codes, used for
        certificates and fast automorphism checks."""
        if self._edge_arrays is None:
            es = sorted(self.edges)
            eu = np.fromiter((e[0] for e in es), dtype=np.int64,
                             count=len(es))
            ev = np.fromiter((e[1] for e in es), dtype=np.int64,
                             count=len(es))
            self._edge_arrays = (eu, ev, eu * self.n + ev)
        return self._edge_arrays

    def degree_of(self, v: int) -> int:
        return self.adjacency_masks()[v].bit_count()

    def with_extra_edges(self, extra) -> "ColoredGraph":
        return ColoredGraph(self.n, self.colors, set(self.edges) | set(extra))


def relabel(g: ColoredGraph, gamma: Perm) -> ColoredGraph:
    """The image of g under gamma: vertex i moves to position gamma[i]."""
    if len(gamma) != g.n:
        raise GraphError("labeling degree mismatch")
    colors = [0] * g.n
    for i, c in enumerate(g.colors):
        colors[gamma[i]] = c
    edges = [(gamma[u], gamma[v]) for u, v in g.edges]
    return ColoredGraph(g.n, colors, edges)


def is_automorphism(g: ColoredGraph, gamma: Perm) -> bool:
    if any(g.colors[gamma[i]] != g.colors[i] for i in range(g.n)):
        return False
    if not g.edges:
        return True
    eu, ev, packed = g.edge_arrays()
    arr = np.asarray(gamma, dtype=np.int64)
    a = arr[eu]
    b = arr[ev]
    mapped = np.sort(np.minimum(a, b) * g.n + np.maximum(a, b))
    return bool(np.array_equal(mapped, packed))


# ---------------------------------------------------------------------------
# Equitable refinement


class _Partition:
    """Ordered partition in flat form: ``lab`` lists the vertices, cells
    are contiguous runs.  Cell identity is the (stable) start offset.
    ``multi`` tracks the starts of non-singleton cells.

    Small graphs use plain lists; large ones numpy arrays so refinement
    can split big cells with vectorized operations.
    """

    __slots__ = ("lab", "pos", "cstart", "csize", "multi", "npmode")

    def __init__(self, lab, pos, cstart, csize, multi, npmode):
        self.lab = lab        # position -> vertex
        self.pos = pos        # vertex -> position
        self.cstart = cstart  # vertex -> start offset of its cell
        self.csize = csize    # start offset -> cell size (valid at starts)
        self.multi = multi    # set of starts of cells with two+ members
        self.npmode = npmode

    @staticmethod
    def from_cells(n: int, cells, npmode: bool = False) -> "_Partition":
        lab = [v for cell in cells for v in cell]
        if sorted(lab) != list(range(n)):
            raise GraphError("partition does not cover the vertex set")
        pos = [0] * n
        cstart = [0] * n
        csize = [0] * n
        multi = set()
        s = 0
        for cell in cells:
            for v in cell:
                cstart[v] = s
            csize[s] = len(cell)
            if len(cell) > 1:
                multi.add(s)
            s += len(cell)
        for i, v in enumerate(lab):
            pos[v] = i
        if npmode:
            return _Partition(np.asarray(lab, dtype=np.int64),
                              np.asarray(pos, dtype=np.int64),
                              np.asarray(cstart, dtype=np.int64),
                              np.asarray(csize, dtype=np.int64),
                              multi, True)
        return _Partition(lab, pos, cstart, csize, multi, False)

    def copy(self) -> "_Partition":
        if self.npmode:
            return _Partition(self.lab.copy(), self.pos.copy(),
                              self.cstart.copy(), self.csize.copy(),
                              set(self.multi), True)
        return _Partition(list(self.lab), list(self.pos),
                          list(self.cstart), list(self.csize),
                          set(self.multi), False)

    def cells(self):
        s = 0
        n = len(self.lab)
        while s < n:
            size = int(self.csize[s])
            yield s, size
            s += size

    def cell_list(self, start) -> list[int]:
        end = start + int(self.csize[start])
        sl = self.lab[start:end]
        return sl.tolist() if self.npmode else list(sl)

    def to_cells(self) -> list[list[int]]:
        return [self.cell_list(s) for s, _ in self.cells()]

    def is_discrete(self) -> bool:
        return not self.multi

    def individualize(self, v: int) -> int:
        """Move v to the front of its cell, making it a singleton cell.
        Returns the singleton's start offset."""
        s = int(self.cstart[v])
        size = int(self.csize[s])
        lab, pos = self.lab, self.pos
        i = int(pos[v])
        j = s
        lab[i], lab[j] = lab[j], lab[i]
        pos[lab[i]] = i
        pos[lab[j]] = j
        self.csize[s] = 1
        self.csize[s + 1] = size - 1
        self.multi.discard(s)
        if size - 1 > 1:
            self.multi.add(s + 1)
        if self.npmode:
            self.cstart[lab[s + 1:s + size]] = s + 1
        else:
            for w in lab[s + 1:s + size]:
                self.cstart[w] = s + 1
        return s


class _Refiner:
    """Refines ordered partitions of one fixed graph to equitable ones.

    Splits cells by neighbor counts into splitter cells until every pair
    of same-cell vertices has equal counts into every cell.  Deterministic
    and label-equivariant, which the canonical search relies on.
    """

    def __init__(self, g: ColoredGraph):
        self.n = g.n
        self.sparse = g.n > _SPARSE_CUTOFF
        if self.sparse:
            eu, ev, _ = g.edge_arrays()
            heads = np.concatenate([eu, ev])
            tails = np.concatenate([ev, eu])
            order = np.argsort(heads, kind="stable")
            heads = heads[order]
            tails = tails[order].astype(np.int32)
            self.indptr = np.searchsorted(heads, np.arange(g.n + 1))
            self.indices = tails
            self.arange = np.arange(g.n, dtype=np.int64)
            self.hitbuf = np.zeros(g.n, dtype=bool)
        else:
            self.adj = g.adjacency_masks()

    def refine(self, part: _Partition, active=None) -> int:
        """Refine ``part`` in place to the coarsest equitable refinement.

        ``active`` optionally lists cell start offsets to seed the splitter
        queue (after individualization); default is every cell.  Returns a
        trace invariant: an integer combined from split offsets, count
        values and fragment sizes only, identical for isomorphic inputs.
        """
        if self.sparse:
            trace = self._refine_sparse(part, active)
        else:
            trace = self._refine_small(part, active)
        if part.multi:
            trace = hash((trace, tuple(size for _, size in part.cells())))
        else:
            trace = hash((trace, -1))
        return trace

    @staticmethod
    def _requeue(queue, queued, cs, fstarts, fsizes):
        """Hopcroft rule: requeue all but one largest fragment; a queued
        parent is replaced by all its fragments."""
        if cs in queued:
            for fs in fstarts:
                if fs not in queued:
                    queue.append(fs)
                    queued.add(fs)
        else:
            big = max(range(len(fstarts)), key=lambda j: (fsizes[j], -j))
            for j, fs in enumerate(fstarts):
                if j != big and fs not in queued:
                    queue.append(fs)
                    queued.add(fs)

    def _refine_small(self, part: _Partition, active) -> int:
        queue = (list(active) if active is not None
                 else [s for s, _ in part.cells()])
        queued = set(queue)
        trace = 0
        qi = 0
        while qi < len(queue):
            s = queue[qi]
            qi += 1
            queued.discard(s)
            if not part.multi:
                break
            smask = 0
            for v in part.lab[s:s + part.csize[s]]:
                smask |= 1 << v
            adj = self.adj
            for cs in sorted(part.multi):
                if cs not in part.multi:
                    continue  # split away earlier in this pass
                size = part.csize[cs]
                members = part.lab[cs:cs + size]
                vals = [(adj[v] & smask).bit_count() for v in members]
                if min(vals) == max(vals):
                    continue
                groups: dict[int, list[int]] = {}
                for v, c in zip(members, vals):
                    groups.setdefault(c, []).append(v)
                keys = sorted(groups)
                frags = [groups[c] for c in keys]
                trace = hash((trace, cs, tuple(keys),
                              tuple(len(f) for f in frags)))
                lab, pos, cstart, csize = (part.lab, part.pos,
                                           part.cstart, part.csize)
                part.multi.discard(cs)
                off = cs
                fstarts = []
                fsizes = []
                for frag in frags:
                    fstarts.append(off)
                    fsizes.append(len(frag))
                    csize[off] = len(frag)
                    if len(frag) > 1:
                        part.multi.add(off)
                    start = off
                    for v in frag:
                        lab[off] = v
                        pos[v] = off
                        cstart[v] = start
                        off += 1
                self._requeue(queue, queued, cs, fstarts, fsizes)
        return trace

    def _refine_sparse(self, part: _Partition, active) -> int:
        n = self.n
        lab, pos, cstart, csize = part.lab, part.pos, part.cstart, part.csize
        indptr, indices = self.indptr, self.indices
        queue = (list(active) if active is not None
                 else [s for s, _ in part.cells()])
        queued = set(queue)
        trace = 0
        qi = 0
        while qi < len(queue):
            s = queue[qi]
            qi += 1
            queued.discard(s)
            multi = part.multi
            if not multi:
                break
            ssize = int(csize[s])
            if ssize == 1:
                v = int(lab[s])
                cat = indices[indptr[v]:indptr[v + 1]]
                if cat.size == 0:
                    continue
                # Singleton splitter: counts are 0/1, so a touched cell
                # splits into non-neighbors then neighbors of v.
                sizes_of: dict[int, int] = {}
                for cs in cstart[cat].tolist():
                    if cs in multi:
                        sizes_of[cs] = sizes_of.get(cs, 0) + 1
                hit = self.hitbuf
                hit[cat] = True
                for cs in sorted(sizes_of):
                    size = int(csize[cs])
                    nin = sizes_of[cs]
                    if nin == size:
                        continue
                    members = lab[cs:cs + size]
                    mask = hit[members]
                    sm = np.concatenate([members[~mask], members[mask]])
                    fsizes = [size - nin, nin]
                    trace = hash((trace, cs, (0, 1), tuple(fsizes)))
                    lab[cs:cs + size] = sm
                    pos[sm] = self.arange[cs:cs + size]
                    multi.discard(cs)
                    fstarts = [cs, cs + fsizes[0]]
                    for fs, fsz in zip(fstarts, fsizes):
                        csize[fs] = fsz
                        cstart[sm[fs - cs:fs - cs + fsz]] = fs
                        if fsz > 1:
                            multi.add(fs)
                    self._requeue(queue, queued, cs, fstarts, fsizes)
                hit[cat] = False
                continue
            cat = np.concatenate(
                [indices[indptr[v]:indptr[v + 1]]
                 for v in lab[s:s + ssize].tolist()])
            if cat.size == 0:
                continue
            counts = np.bincount(cat, minlength=n)
            if cat.size <= 2048:
                cand = sorted(set(cstart[cat].tolist()) & multi)
            else:
                touched = np.unique(cstart[cat])
                cand = [cs for cs in touched.tolist() if cs in multi]
            for cs in cand:
                if cs not in multi:
                    continue  # split away earlier in this pass
                size = int(csize[cs])
                members = lab[cs:cs + size]
                vals = counts[members]
                if size <= 128:
                    vl = vals.tolist()
                    if min(vl) == max(vl):
                        continue
                    groups: dict[int, list[int]] = {}
                    for v, c in zip(members.tolist(), vl):
                        groups.setdefault(c, []).append(v)
                    keys = sorted(groups)
                    frags = [groups[c] for c in keys]
                    trace = hash((trace, cs, tuple(keys),
                                  tuple(len(f) for f in frags)))
                    flat = [v for f in frags for v in f]
                    sm = np.asarray(flat, dtype=np.int64)
                    lab[cs:cs + size] = sm
                    pos[sm] = self.arange[cs:cs + size]
                    multi.discard(cs)
                    fstarts = []
                    fsizes = []
                    off = cs
                    for f in frags:
                        fstarts.append(off)
                        fsizes.append(len(f))
                        csize[off] = len(f)
                        cstart[sm[off - cs:off - cs + len(f)]] = off
                        if len(f) > 1:
                            multi.add(off)
                        off += len(f)
                else:
                    if int(np.ptp(vals)) == 0:
                        continue
                    order = np.argsort(vals, kind="stable")
                    sm = members[order]
                    sv = vals[order]
                    bounds = np.flatnonzero(sv[1:] != sv[:-1]) + 1
                    starts_rel = np.concatenate(([0], bounds)).tolist()
                    ends_rel = np.concatenate((bounds, [size])).tolist()
                    keys = tuple(sv[starts_rel].tolist())
                    fsizes = [b - a for a, b in zip(starts_rel, ends_rel)]
                    trace = hash((trace, cs, keys, tuple(fsizes)))
                    lab[cs:cs + size] = sm
                    pos[sm] = self.arange[cs:cs + size]
                    multi.discard(cs)
                    fstarts = []
                    for a, b in zip(starts_rel, ends_rel):
                        fs = cs + a
                        fstarts.append(fs)
                        csize[fs] = b - a
                        cstart[sm[a:b]] = fs
                        if b - a > 1:
                            multi.add(fs)
                self._requeue(queue, queued, cs, fstarts, fsizes)
        return trace


def color_partition(g: ColoredGraph) -> list[list[int]]:
    """Cells grouped by color value, ascending, vertices ascending."""
    cells = {}
    for v, c in enumerate(g.colors):
        cells.setdefault(c, []).append(v)
    return [cells[c] for c in sorted(cells)]


def refine(g: ColoredGraph, partition) -> list[list[int]]:
    """Coarsest equitable refinement of an ordered partition.

    Cells must respect colors (same-cell vertices share a color).
    """
    for cell in partition:
        if len({g.colors[v] for v in cell}) > 1:
            raise GraphError(f"cell {cell} mixes colors")
    ref = _Refiner(g)
    part = _Partition.from_cells(g.n, partition, npmode=ref.sparse)
    ref.refine(part)
    return part.to_cells()


# ---------------------------------------------------------------------------
# Canonical search


@dataclass
class CanonResult:
    """Canonical labeling plus automorphism data for one graph."""

    labeling: Perm              # gamma with canonical == relabel(g, gamma)
    canonical: ColoredGraph
    aut_generators: GeneratorSet
    aut_order: int              # product of transversal sizes on the search path

    @property
    def key(self) -> ColoredGraph:
        return self.canonical


class _CanonSearch:
    def __init__(self, g: ColoredGraph):
        self.g = g
        self.n = g.n
        self.refiner = _Refiner(g)
        self.eu, self.ev, _ = g.edge_arrays()
        self.gens: list[Perm] = []
        self.best_cert = None
        self.best_lab = None
        self.best_inv: list[int] = []
        self.best_nodes: list[tuple[tuple[int, ...], int]] = []
        self.best_gen = 0
        self.path_inv: list[int] = []
        self.path_nodes: list[tuple[tuple[int, ...], int]] = []
        self.path_vertices: list[int] = []

    # -- leaf handling ------------------------------------------------

    def _leaf_cert(self, part: _Partition):
        if part.npmode:
            arr = part.pos
            lab = tuple(arr.tolist())  # vertex -> canonical position
        else:
            lab = tuple(part.pos)
            arr = np.asarray(lab, dtype=np.int64)
        if len(self.eu):
            a = arr[self.eu]
            b = arr[self.ev]
            packed = np.sort(np.minimum(a, b) * self.n + np.maximum(a, b))
            cert = packed.tobytes()
        else:
            cert = b""
        return lab, cert

    def _record_automorphism(self, gamma: Perm):
        if gamma == identity(self.n):
            return
        if not is_automorphism(self.g, gamma):
            raise AssertionError("search produced a non-automorphism")
        self.gens.append(gamma)

    def _take_best(self, lab, cert):
        self.best_cert = cert
        self.best_lab = lab
        self.best_inv = list(self.path_inv)
        self.best_nodes = list(self.path_nodes)
        self.best_gen += 1

    def _leaf(self, part, eq_with_best):
        """Handle a discrete partition.  Returns a backjump depth when a
        collision with the best leaf proves the rest of the current branch
        redundant, else None."""
        lab, cert = self._leaf_cert(part)
        if self.best_cert is None or not eq_with_best:
            self._take_best(lab, cert)
            return None
        if len(self.path_inv) != len(self.best_inv):
            # Same invariants but the best path ran deeper/shallower;
            # fix the order so shorter paths win.
            if len(self.path_inv) < len(self.best_inv):
                self._take_best(lab, cert)
            return None
        if cert == self.best_cert:
            self._record_automorphism(compose(lab, inverse(self.best_lab)))
            # The discovered automorphism maps the best subtree onto the
            # current one below their divergence point, so everything
            # beyond that depth is already covered: jump back.
            bestv = [v for _, v in self.best_nodes]
            for d, v in enumerate(self.path_vertices):
                if bestv[d] != v:
                    return d
            return None
        if cert < self.best_cert:
            self._take_best(lab, cert)
        return None

    # -- tree exploration ----------------------------------------------

    def _target_cell(self, part: _Partition):
        """Start offset of the first largest non-singleton cell, or -1."""
        best = -1
        size = 1
        for s in sorted(part.multi):
            sz = part.csize[s]
            if sz > size:
                best, size = s, sz
        return best

    def _explore(self, part: _Partition, eq_with_best):
        """Explore the subtree rooted at ``part``.  Returns None, or a
        depth to backjump to (strictly above this node)."""
        t = self._target_cell(part)
        if t < 0:
            return self._leaf(part, eq_with_best)
        cell = part.cell_list(t)
        cell.sort()
        depth = len(self.path_vertices)
        self.path_nodes.append((tuple(cell), cell[0]))

        # Orbit pruning: candidates equivalent to an already processed one
        # under known automorphisms fixing the current path are skipped.
        uf = {v: v for v in cell}

        def find(x):
            while uf[x] != x:
                uf[x] = uf[uf[x]]
                x = uf[x]
            return x

        screened = 0
        processed: list[int] = []
        done: set[int] = set()
        for v in cell:
            if screened < len(self.gens):
                merged = False
                path = self.path_vertices
                while screened < len(self.gens):
                    g = self.gens[screened]
                    screened += 1
                    if all(g[u] == u for u in path):
                        for w in cell:
                            a, b = find(w), find(g[w])
                            if a != b:
                                if a < b:
                                    uf[b] = a
                                else:
                                    uf[a] = b
                                merged = True
                if merged:
                    done = {find(u) for u in processed}
            if find(v) in done:
                continue
            processed.append(v)
            done.add(find(v))
            child = part.copy()
            s = child.individualize(v)
            inv = self.refiner.refine(child, active=[s])
            child_eq = eq_with_best
            if self.best_cert is not None and eq_with_best:
                pos = depth + 1
                if pos >= len(self.best_inv):
                    continue  # best path already ended: worse
                if inv > self.best_inv[pos]:
                    continue
                if inv < self.best_inv[pos]:
                    child_eq = False
            gen_before = self.best_gen
            self.path_inv.append(inv)
            self.path_vertices.append(v)
            self.path_nodes[depth] = (tuple(cell), v)
            jump = self._explore(child, child_eq)
            self.path_vertices.pop()
            self.path_inv.pop()
            if self.best_gen != gen_before:
                # The new best leaf lies in the subtree just finished, so
                # this node is on the best path: compare against it.
                eq_with_best = True
            if jump is not None and jump < depth:
                self.path_nodes.pop()
                return jump
        self.path_nodes.pop()
        return None

    def run(self):
        if self.n == 0:
            self.best_lab = ()
            self.best_cert = b""
            return
        part = _Partition.from_cells(self.n, color_partition(self.g),
                                     npmode=self.refiner.sparse)
        inv = self.refiner.refine(part)
        self.path_inv.append(inv)
        self._explore(part, eq_with_best=True)

    # -- group order -----------------------------------------------------

    def aut_order(self) -> int:
        order = 1
        prefix: list[int] = []
        for cell, v in self.best_nodes:
            fixing = [g for g in self.gens
                      if all(g[u] == u for u in prefix)]
            seen = {v}
            queue = [v]
            for x in queue:
                for g in fixing:
                    y = g[x]
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            order *= len(seen)
            prefix.append(v)
        return order


def canonical_form(g: ColoredGraph) -> CanonResult:
    """Canonical labeling, canonical graph, and Aut generators of ``g``."""
    search = _CanonSearch(g)
    search.run()
    lab = search.best_lab
    gens = GeneratorSet(g.n, tuple(search.gens))
    return CanonResult(
        labeling=lab,
        canonical=relabel(g, lab),
        aut_generators=gens,
        aut_order=search.aut_order(),
    )


def induced_variable_action(result: CanonResult, var_vertices) -> GeneratorSet:
    """Automorphism generators restricted to a setwise-fixed vertex subset,
    reindexed densely in ascending vertex order."""
    vs = sorted(var_vertices)
    index = {v: i for i, v in enumerate(vs)}
    out = []
    for g in result.aut_generators.perms:
        proj = [0] * len(vs)
        for v in vs:
            img = g[v]
            if img not in index:
                raise EncodingError(
                    f"automorphism moves vertex {v} outside the variable set")
            proj[index[v]] = index[img]
        out.append(tuple(proj))
    # Drop duplicates (distinct graph generators can project equally).
    seen = set()
    uniq = []
    for p in out:
        if p not in seen:
            seen.add(p)
            uniq.append(p)
    return GeneratorSet(len(vs), tuple(uniq))
