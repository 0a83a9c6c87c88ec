"""Exact r-uniform hypergraphs and the structural operations on them.

Vertices are the integers ``1..n``. Edges are stored as sorted tuples in
lexicographic order, so two structurally equal graphs compare equal.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

Edge = tuple[int, ...]


class HypergraphError(ValueError):
    """Raised for malformed hypergraphs or out-of-range arguments."""


@dataclass(frozen=True)
class RGraph:
    n: int
    r: int
    edges: tuple[Edge, ...] = ()

    def __init__(self, n: int, r: int, edges: Iterable[Iterable[int]] = ()):
        if r < 1:
            raise HypergraphError(f"uniformity must be >= 1, got {r}")
        if n < 0:
            raise HypergraphError(f"vertex count must be >= 0, got {n}")
        canon = set()
        for e in edges:
            t = tuple(sorted(int(v) for v in e))
            if len(t) != r or len(set(t)) != r:
                raise HypergraphError(f"edge {t} is not an {r}-set")
            if t[0] < 1 or t[-1] > n:
                raise HypergraphError(f"edge {t} has a vertex outside 1..{n}")
            canon.add(t)
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    def __len__(self) -> int:
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __contains__(self, e) -> bool:
        return tuple(sorted(e)) in self.edge_set

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def edge_set(self) -> frozenset[Edge]:
        # cached lazily; frozen dataclass so go through object.__setattr__
        try:
            return self.__dict__["_edge_set"]
        except KeyError:
            s = frozenset(self.edges)
            object.__setattr__(self, "_edge_set", s)
            return s

    def degree(self, v: int) -> int:
        _check_vertex(self, v)
        return sum(1 for e in self.edges if v in e)

    def degrees(self) -> list[int]:
        """Degrees indexed by vertex ``1..n`` (position ``v - 1``)."""
        counts = Counter(v for e in self.edges for v in e)
        return [counts.get(v, 0) for v in self.vertices]

    def edge_masks(self) -> np.ndarray:
        """Vertex bitmask per edge (bit ``v - 1`` for vertex ``v``); needs n <= 64."""
        if self.n > 64:
            raise HypergraphError("bitmask form needs n <= 64")
        out = np.zeros(len(self.edges), dtype=np.uint64)
        for k, e in enumerate(self.edges):
            m = 0
            for v in e:
                m |= 1 << (v - 1)
            out[k] = m
        return out

    def edge_array(self) -> np.ndarray:
        """Edges as a 0-based ``(m, r)`` integer array."""
        if not self.edges:
            return np.zeros((0, self.r), dtype=np.int64)
        return np.asarray(self.edges, dtype=np.int64) - 1

    def relabel(self, mapping: dict[int, int] | Sequence[int], n: int | None = None) -> "RGraph":
        """Apply a vertex map. A sequence is read as ``mapping[v - 1]``."""
        if not isinstance(mapping, dict):
            mapping = {v: mapping[v - 1] for v in self.vertices}
        return RGraph(self.n if n is None else n, self.r, (tuple(mapping[v] for v in e) for e in self.edges))

    def compact(self) -> "RGraph":
        """Drop isolated vertices, relabelling the rest in increasing order."""
        used = sorted({v for e in self.edges for v in e})
        new = {v: k + 1 for k, v in enumerate(used)}
        return self.relabel(new, n=len(used))

    def __repr__(self) -> str:
        body = ",".join("".join(map(str, e)) if self.n < 10 else "{" + " ".join(map(str, e)) + "}" for e in self.edges)
        return f"RGraph(n={self.n}, r={self.r}, [{body}])"


@dataclass(frozen=True)
class DegreeProfile:
    min: int
    max: int
    avg: Fraction


@dataclass(frozen=True)
class Partition:
    # empty parts are allowed: an r-partite graph may leave a class unused
    parts: tuple[frozenset[int], ...] = field(default_factory=tuple)

    @property
    def k(self) -> int:
        return len(self.parts)

    def part_of(self) -> dict[int, int]:
        return {v: i for i, p in enumerate(self.parts) for v in p}

    def is_transversal(self, H: RGraph) -> bool:
        """True iff every edge of ``H`` meets every part in exactly one vertex."""
        if self.k != H.r:
            return False
        where = self.part_of()
        if sorted(where) != list(H.vertices):
            return False
        return all(len({where[v] for v in e}) == H.r for e in H.edges)


def _check_vertex(H: RGraph, v: int) -> None:
    if not 1 <= v <= H.n:
        raise HypergraphError(f"vertex {v} outside 1..{H.n}")


def complete_graph(n: int, r: int) -> RGraph:
    return RGraph(n, r, itertools.combinations(range(1, n + 1), r))


def link(H: RGraph, v: int) -> RGraph:
    _check_vertex(H, v)
    if H.r < 2:
        raise HypergraphError("link of a 1-graph is undefined")
    return RGraph(H.n, H.r - 1, (tuple(u for u in e if u != v) for e in H.edges if v in e))


def shadow(H: RGraph, i: int = 1) -> RGraph:
    if not 1 <= i <= H.r - 1:
        raise HypergraphError(f"shadow level {i} outside 1..{H.r - 1}")
    k = H.r - i
    return RGraph(H.n, k, {s for e in H.edges for s in itertools.combinations(e, k)})


def remove_vertex(H: RGraph, v: int) -> RGraph:
    """``H - v`` on ``n - 1`` vertices; labels above ``v`` shift down by one."""
    _check_vertex(H, v)
    shift = {u: u if u < v else u - 1 for u in H.vertices if u != v}
    return RGraph(H.n - 1, H.r, (tuple(shift[u] for u in e) for e in H.edges if v not in e))


def induced(H: RGraph, vertices: Iterable[int]) -> RGraph:
    """Induced subgraph on ``vertices``, relabelled ``1..k`` in increasing order."""
    vs = sorted(set(vertices))
    new = {v: k + 1 for k, v in enumerate(vs)}
    keep = set(vs)
    return RGraph(len(vs), H.r, (tuple(new[u] for u in e) for e in H.edges if keep.issuperset(e)))


def blowup_classes(sizes: Sequence[int]) -> list[range]:
    """Vertex classes used by :func:`blowup`: consecutive label blocks."""
    out, start = [], 1
    for s in sizes:
        out.append(range(start, start + s))
        start += s
    return out


def blowup(G: RGraph, sizes: Sequence[int]) -> RGraph:
    if len(sizes) != G.n:
        raise HypergraphError(f"need {G.n} class sizes, got {len(sizes)}")
    if any(s < 0 for s in sizes):
        raise HypergraphError("class sizes must be nonnegative")
    classes = blowup_classes(sizes)
    edges = (p for e in G.edges for p in itertools.product(*(classes[v - 1] for v in e)))
    return RGraph(sum(sizes), G.r, edges)


def duplicate_vertex(H: RGraph, v: int) -> RGraph:
    """Add vertex ``n + 1`` whose link equals the link of ``v``."""
    _check_vertex(H, v)
    new = H.n + 1
    extra = (tuple(new if u == v else u for u in e) for e in H.edges if v in e)
    return RGraph(new, H.r, itertools.chain(H.edges, extra))


def is_2_covered(H: RGraph) -> bool:
    if H.r < 2:
        return H.n <= 1
    covered = {p for e in H.edges for p in itertools.combinations(e, 2)}
    return len(covered) == H.n * (H.n - 1) // 2


def is_partial_steiner(H: RGraph) -> bool:
    """Every (r-1)-set lies in at most one edge."""
    seen = set()
    for e in H.edges:
        for s in itertools.combinations(e, H.r - 1):
            if s in seen:
                return False
            seen.add(s)
    return True


def degree_profile(H: RGraph) -> DegreeProfile:
    d = H.degrees()
    if not d:
        return DegreeProfile(0, 0, Fraction(0))
    return DegreeProfile(min(d), max(d), Fraction(sum(d), len(d)))


def find_r_partition(H: RGraph) -> Partition | None:
    """Split the vertices into ``H.r`` classes so that every edge is transversal.

    Transversality of an r-edge over r classes is the same as its vertices
    receiving distinct classes, so this is proper r-colouring of the
    2-shadow. Isolated vertices go to class 0 at the end.
    """
    r = H.r
    adj: dict[int, set[int]] = {v: set() for v in H.vertices}
    for e in H.edges:
        for a, b in itertools.combinations(e, 2):
            adj[a].add(b)
            adj[b].add(a)
    active = sorted((v for v in H.vertices if adj[v]), key=lambda v: (-len(adj[v]), v))
    if H.r == 1:
        active = []
    colour: dict[int, int] = {}

    def solve(k: int, used: int) -> bool:
        if k == len(active):
            return True
        v = active[k]
        taken = {colour[u] for u in adj[v] if u in colour}
        # symmetry breaking: a fresh colour only as the next unused index
        for c in range(min(r, used + 1)):
            if c in taken:
                continue
            colour[v] = c
            if solve(k + 1, max(used, c + 1)):
                return True
            del colour[v]
        return False

    if not solve(0, 0):
        return None
    for v in H.vertices:
        colour.setdefault(v, 0)
    parts = [set() for _ in range(r)]
    for v, c in colour.items():
        parts[c].add(v)
    return Partition(tuple(frozenset(p) for p in parts))


def is_r_partite(H: RGraph) -> bool:
    return find_r_partition(H) is not None


def _vertex_invariants(H: RGraph) -> dict[int, tuple]:
    deg = H.degrees()
    inv = {}
    for v in H.vertices:
        nbr = sorted(deg[u - 1] for e in H.edges if v in e for u in e if u != v)
        inv[v] = (deg[v - 1], tuple(nbr))
    return inv


def _search_map(G: RGraph, H: RGraph, injective: bool, candidates: dict[int, list[int]],
                order: list[int], both_ways: bool) -> dict[int, int] | None:
    """Backtracking vertex map from ``G`` to ``H`` sending edges to edges."""
    Hset = H.edge_set
    # edges of G that become fully mapped once order[k] is assigned
    pos = {v: k for k, v in enumerate(order)}
    closing: list[list[Edge]] = [[] for _ in order]
    for e in G.edges:
        closing[max(pos[v] for v in e)].append(e)
    if both_ways:
        Gset = G.edge_set
        Hedges_by_vertex: dict[int, list[Edge]] = {u: [] for u in H.vertices}
        for f in H.edges:
            for u in f:
                Hedges_by_vertex[u].append(f)
    phi: dict[int, int] = {}
    used: set[int] = set()

    def ok(k: int) -> bool:
        for e in closing[k]:
            if tuple(sorted(phi[v] for v in e)) not in Hset:
                return False
        if both_ways:
            # every H edge inside the image must have a preimage edge
            inv = {u: v for v, u in phi.items()}
            for f in Hedges_by_vertex[phi[order[k]]]:
                if all(u in inv for u in f) and tuple(sorted(inv[u] for u in f)) not in Gset:
                    return False
        return True

    def solve(k: int) -> bool:
        if k == len(order):
            return True
        v = order[k]
        for u in candidates[v]:
            if injective and u in used:
                continue
            phi[v] = u
            used.add(u)
            if ok(k) and solve(k + 1):
                return True
            used.discard(u)
            del phi[v]
        return False

    return dict(phi) if solve(0) else None


def _dfs_order(G: RGraph) -> list[int]:
    """Vertices ordered so that each one touches earlier ones where possible."""
    deg = G.degrees()
    adj = {v: set() for v in G.vertices}
    for e in G.edges:
        for a in e:
            adj[a].update(e)
    order, seen = [], set()
    remaining = sorted(G.vertices, key=lambda v: (-deg[v - 1], v))
    while remaining:
        frontier = [v for v in remaining if adj[v] & seen] or remaining[:1]
        v = max(frontier, key=lambda u: (len(adj[u] & seen), deg[u - 1], -u))
        order.append(v)
        seen.add(v)
        remaining.remove(v)
    return order


def is_isomorphic(G: RGraph, H: RGraph) -> dict[int, int] | None:
    """Return a vertex bijection mapping ``G`` onto ``H``, or ``None``."""
    if (G.n, G.r, len(G)) != (H.n, H.r, len(H)):
        return None
    ig, ih = _vertex_invariants(G), _vertex_invariants(H)
    if sorted(ig.values()) != sorted(ih.values()):
        return None
    by_inv: dict[tuple, list[int]] = {}
    for u in H.vertices:
        by_inv.setdefault(ih[u], []).append(u)
    candidates = {v: by_inv[ig[v]] for v in G.vertices}
    return _search_map(G, H, injective=True, candidates=candidates, order=_dfs_order(G), both_ways=True)


def find_homomorphism(G: RGraph, H: RGraph, injective: bool = False) -> dict[int, int] | None:
    """A map ``V(G) -> V(H)`` sending every edge of ``G`` onto an edge of ``H``."""
    if G.r != H.r:
        raise HypergraphError(f"uniformity mismatch: {G.r} vs {H.r}")
    if H.n == 0:
        return {} if G.n == 0 else None
    if injective and G.n > H.n:
        return None
    covered = {v for e in H.edges for v in e}
    active = {v for e in G.edges for v in e}
    candidates = {v: (sorted(covered) if v in active else list(H.vertices)) for v in G.vertices}
    if injective:
        hdeg = H.degrees()
        gdeg = G.degrees()
        candidates = {v: [u for u in c if hdeg[u - 1] >= gdeg[v - 1]] for v, c in candidates.items()}
    return _search_map(G, H, injective=injective, candidates=candidates, order=_dfs_order(G), both_ways=False)


def is_homomorphism(G: RGraph, H: RGraph, phi: dict[int, int]) -> bool:
    return all(tuple(sorted(phi[v] for v in e)) in H.edge_set for e in G.edges)


# --- .hg text format -------------------------------------------------------

def parse_hg(text: str) -> RGraph:
    """Parse the ``.hg`` format: header ``r n`` then one edge per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise HypergraphError("empty .hg input")
    head = lines[0].split()
    if len(head) != 2:
        raise HypergraphError(f"bad header {lines[0]!r}; expected 'r n'")
    try:
        r, n = int(head[0]), int(head[1])
        edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise HypergraphError(f"non-integer token: {exc}") from None
    for e in edges:
        if len(e) != r:
            raise HypergraphError(f"edge {e} has {len(e)} vertices, expected {r}")
    return RGraph(n, r, edges)


def format_hg(H: RGraph) -> str:
    return "".join([f"{H.r} {H.n}\n"] + [" ".join(map(str, e)) + "\n" for e in H.edges])


def read_hg(path: str | Path) -> RGraph:
    return parse_hg(Path(path).read_text())


def write_hg(H: RGraph, path: str | Path) -> None:
    Path(path).write_text(format_hg(H))
