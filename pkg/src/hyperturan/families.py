"""Triangle patterns: generators for the 3-edge triangle r-graphs and freeness tests.

Every pattern predicate takes three distinct r-sets and asks whether they
form a forbidden configuration under *some* assignment of the roles
``A, B, C``; a graph is free of the pattern when no edge triple matches.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Iterable

from . import _kernels
from .hypercore import Edge, HypergraphError, RGraph, find_homomorphism


class PatternKind(enum.IntEnum):
    DELTA = _kernels.DELTA
    C_FAMILY = _kernels.C_FAMILY
    T_FAMILY = _kernels.T_FAMILY
    WEAK = _kernels.WEAK
    SINGLE = _kernels.SINGLE


@dataclass(frozen=True)
class TrianglePattern:
    kind: PatternKind
    r: int
    i: int = 0

    def __post_init__(self):
        if self.r < 2:
            raise HypergraphError("triangle patterns need r >= 2")
        if self.kind is PatternKind.SINGLE and not 1 <= self.i <= math.ceil(self.r / 2):
            raise HypergraphError(f"single-triangle index {self.i} outside 1..{math.ceil(self.r / 2)}")

    @classmethod
    def parse(cls, name: str, r: int | None = None) -> "TrianglePattern":
        """Parse CLI names ``delta``, ``cfam``, ``tfam``, ``weak``, ``t:<r>:<i>``."""
        name = name.strip().lower()
        if name.startswith("t:"):
            try:
                _, rs, is_ = name.split(":")
                pr, pi = int(rs), int(is_)
            except ValueError:
                raise HypergraphError(f"bad pattern {name!r}; expected t:<r>:<i>") from None
            if r is not None and r != pr:
                raise HypergraphError(f"pattern uniformity {pr} != graph uniformity {r}")
            return cls(PatternKind.SINGLE, pr, pi)
        kinds = {"delta": PatternKind.DELTA, "cfam": PatternKind.C_FAMILY,
                 "tfam": PatternKind.T_FAMILY, "weak": PatternKind.WEAK}
        if name not in kinds:
            raise HypergraphError(f"unknown pattern {name!r}")
        if r is None:
            raise HypergraphError(f"pattern {name!r} needs a uniformity")
        return cls(kinds[name], r)

    @property
    def name(self) -> str:
        if self.kind is PatternKind.SINGLE:
            return f"t:{self.r}:{self.i}"
        return {PatternKind.DELTA: "delta", PatternKind.C_FAMILY: "cfam",
                PatternKind.T_FAMILY: "tfam", PatternKind.WEAK: "weak"}[self.kind]


def gen_T(r: int, i: int) -> RGraph:
    """The triangle r-graph with index ``i`` on vertex set ``1..2r+1``."""
    if r < 2 or not 1 <= i <= r - 1:
        raise HypergraphError(f"need 1 <= i <= r-1, got r={r}, i={i}")
    e1 = range(1, r + 1)
    e2 = [*range(1, i + 1), *range(r + 1, 2 * r - i + 1)]
    e3 = [*range(i + 1, r + 1), r + 1, *range(2 * r - i + 1, 2 * r)]
    return RGraph(2 * r + 1, r, [e1, e2, e3])


def delta_family(r: int) -> list[RGraph]:
    return [gen_T(r, i) for i in range(1, math.ceil(r / 2) + 1)]


def _sets(*edges: Iterable[int]) -> list[frozenset[int]]:
    out = [frozenset(e) for e in edges]
    if len({len(e) for e in out}) != 1:
        raise HypergraphError("pattern predicates need sets of equal size")
    return out


def is_C_triple(A, B, C) -> bool:
    """Ordered test: ``A △ B ⊆ C``."""
    A, B, C = _sets(A, B, C)
    return (A ^ B) <= C


def is_T_triple(A, B, C) -> bool:
    """Ordered test: ``A ⊆ B ∪ C`` and ``(B ∩ C) \\ A`` nonempty."""
    A, B, C = _sets(A, B, C)
    return A <= (B | C) and bool((B & C) - A)


def is_weak_triple(A, B, C) -> bool:
    """Ordered test: ``C`` holds strictly more than half of ``A △ B``."""
    A, B, C = _sets(A, B, C)
    d = A ^ B
    return 2 * len(C & d) > len(d)


def _single_ordered(A, B, C, i: int) -> bool:
    ab = A & B
    return (len(ab) == i and not (C & ab) and (A - B) <= C
            and len(C & (B - A)) == 1 and len(C - (A | B)) == i - 1)


def is_single_T_triple(A, B, C, i: int) -> bool:
    """Do the three sets span a copy of ``gen_T(r, i)`` (ignoring isolated vertices)?"""
    A, B, C = _sets(A, B, C)
    return any(_single_ordered(a, b, c, i) for a, b, c in itertools.permutations((A, B, C)))


_ORDERED = {
    PatternKind.C_FAMILY: lambda a, b, c: (a ^ b) <= c,
    PatternKind.T_FAMILY: lambda a, b, c: a <= (b | c) and bool((b & c) - a),
    PatternKind.WEAK: lambda a, b, c: 2 * len(c & (a ^ b)) > len(a ^ b),
}


def triple_matches(A, B, C, p: TrianglePattern) -> bool:
    """Unordered test: some role assignment of the three sets matches ``p``."""
    A, B, C = _sets(A, B, C)
    for a, b, c in itertools.permutations((A, B, C)):
        if p.kind is PatternKind.DELTA:
            if any(_single_ordered(a, b, c, j) for j in range(1, math.ceil(p.r / 2) + 1)):
                return True
        elif p.kind is PatternKind.SINGLE:
            if _single_ordered(a, b, c, p.i):
                return True
        elif _ORDERED[p.kind](a, b, c):
            return True
    return False


@dataclass(frozen=True)
class FreenessResult:
    free: bool
    witness: tuple[Edge, Edge, Edge] | None = None

    def __bool__(self) -> bool:
        return self.free


def find_triangle(H: RGraph, p: TrianglePattern) -> tuple[Edge, Edge, Edge] | None:
    """First edge triple (in lexicographic index order) matching ``p``, if any."""
    if p.r != H.r:
        raise HypergraphError(f"pattern uniformity {p.r} != graph uniformity {H.r}")
    if len(H) < 3:
        return None
    if H.n <= 64:
        a, b, c = _kernels.scan_triples(H.edge_masks(), int(p.kind), p.r, p.i)
        if a < 0:
            return None
        return H.edges[a], H.edges[b], H.edges[c]
    sets = [frozenset(e) for e in H.edges]
    for a, b, c in itertools.combinations(range(len(sets)), 3):
        if triple_matches(sets[a], sets[b], sets[c], p):
            return H.edges[a], H.edges[b], H.edges[c]
    return None


def is_free(H: RGraph, p: TrianglePattern) -> FreenessResult:
    w = find_triangle(H, p)
    return FreenessResult(w is None, w)


def is_T_free_via_hom(H: RGraph) -> bool:
    """𝒯_r-freeness through homomorphisms: no triangle in Δ_r maps into ``H``."""
    if len(H) == 0:
        return True
    return all(find_homomorphism(F, H) is None for F in delta_family(H.r))
