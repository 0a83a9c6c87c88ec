"""Random ordered edges weighted by a simplex vector, and their entropies.

Given weights ``x`` on the vertices of an r-graph ``H``, every ordering
``(i_1, ..., i_r)`` of every edge gets probability
``x_{i_1} ... x_{i_r} / beta`` with ``beta = r! * P_H(x)``. The resulting
r-tuple is exchangeable and always spans an edge. All logarithms are base 2.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hypercore import RGraph, is_partial_steiner
from .lagrangian import ABS_TOL, MaximizeConfig, SimplexVector, _as_array, eval_P, maximize

MAX_ATOMS = 10 ** 6

Tuple = tuple[int, ...]


class EntropyError(ValueError):
    pass


class UncertifiedOptimumError(EntropyError):
    pass


@dataclass(frozen=True)
class OrderedEdgeDistribution:
    graph: RGraph
    weights: np.ndarray
    beta: float
    atoms: dict[Tuple, float]

    @property
    def r(self) -> int:
        return self.graph.r

    def total(self) -> float:
        return math.fsum(self.atoms.values())


def build_distribution(H: RGraph, x) -> OrderedEdgeDistribution:
    w = _as_array(H, x)
    beta = math.factorial(H.r) * eval_P(H, w)
    if not beta > 0:
        raise EntropyError("weights give every edge zero mass; distribution undefined")
    if len(H) * math.factorial(H.r) > MAX_ATOMS:
        raise EntropyError(f"more than {MAX_ATOMS} ordered atoms")
    atoms = {}
    for e in H.edges:
        mono = math.prod(w[v - 1] for v in e)
        if mono > 0:
            p = mono / beta
            for perm in itertools.permutations(e):
                atoms[perm] = p
    return OrderedEdgeDistribution(H, w, beta, atoms)


def marginal(D: OrderedEdgeDistribution, j: int, coords: Sequence[int] | None = None) -> dict[Tuple, float]:
    """Law of the coordinates ``coords`` (default: the first ``j``), by summing atoms."""
    if coords is None:
        if not 1 <= j <= D.r:
            raise EntropyError(f"prefix length {j} outside 1..{D.r}")
        coords = range(j)
    acc: dict[Tuple, list[float]] = defaultdict(list)
    for t, p in D.atoms.items():
        acc[tuple(t[c] for c in coords)].append(p)
    return {k: math.fsum(v) for k, v in acc.items()}


def marginal_formula(D: OrderedEdgeDistribution, j: int) -> dict[Tuple, float]:
    """Prefix law from ordered links: ``x-product / beta`` times the link polynomial.

    Independent of :func:`marginal`; the ordered link of a j-tuple is every
    ordering of the remaining vertices of each edge containing it.
    """
    if not 1 <= j <= D.r:
        raise EntropyError(f"prefix length {j} outside 1..{D.r}")
    x = D.weights
    rest = math.factorial(D.r - j)
    link_poly: dict[frozenset, float] = defaultdict(float)
    for e in D.graph.edges:
        for s in itertools.combinations(e, j):
            link_poly[frozenset(s)] += math.prod(x[v - 1] for v in e if v not in s)
    out = {}
    for s, lp in link_poly.items():
        head = math.prod(x[v - 1] for v in s)
        val = head / D.beta * rest * lp
        if val > 0:
            for perm in itertools.permutations(sorted(s)):
                out[perm] = val
    return out


def entropy(dist) -> float:
    """Shannon entropy in bits of a mapping outcome -> probability."""
    probs = np.fromiter((p for p in (dist.values() if isinstance(dist, dict) else dist) if p > 0), dtype=np.float64)
    return -math.fsum(probs * np.log2(probs))


@dataclass(frozen=True)
class GapReport:
    lhs: float
    rhs: float
    residual: float


def entropy_gap(D: OrderedEdgeDistribution, j: int) -> GapReport:
    """``H(X_1..X_r) - (r/j) H(X_1..X_j)`` computed two ways.

    The left side comes from summing atoms; the right side is
    ``log beta - (r/j) * sum y log(x-product / y)`` over the link formula.
    """
    r = D.r
    lhs = entropy(D.atoms) - r / j * entropy(marginal(D, j))
    x = D.weights
    terms = []
    for t, y in marginal_formula(D, j).items():
        terms.append(y * math.log2(math.prod(x[v - 1] for v in t) / y))
    rhs = math.log2(D.beta) - r / j * math.fsum(terms)
    return GapReport(lhs, rhs, abs(lhs - rhs))


def ordered_shadow_poly(H: RGraph, x, j: int) -> float:
    """Sum over ordered j-tuples whose set lies in some edge of the x-products."""
    w = _as_array(H, x)
    sets = {s for e in H.edges for s in itertools.combinations(e, j)}
    return math.factorial(j) * math.fsum(math.prod(w[v - 1] for v in s) for s in sets)


@dataclass(frozen=True)
class GapBoundReport:
    gap: float
    bound: float
    ok: bool


def entropy_gap_bound(D: OrderedEdgeDistribution, j: int, tol: float = 1e-12) -> GapBoundReport:
    r = D.r
    gap = entropy(D.atoms) - r / j * entropy(marginal(D, j))
    bound = math.log2(D.beta) - r / j * math.log2(ordered_shadow_poly(D.graph, D.weights, j))
    return GapBoundReport(gap, bound, gap >= bound - tol)


@dataclass(frozen=True)
class IdentityReport:
    diff: float
    logbeta: float
    residual: float
    distribution: OrderedEdgeDistribution


def optimal_entropy_identity(H: RGraph, cfg: MaximizeConfig | None = None) -> IdentityReport:
    """At a certified Lagrangian optimum, ``H(X_1..X_r) - r H(X_1) = log beta``."""
    res = maximize(H, cfg or MaximizeConfig())
    if not res.certified or res.maximizer is None:
        raise UncertifiedOptimumError("maximizer is not certified")
    D = build_distribution(H, res.maximizer)
    diff = entropy(D.atoms) - H.r * entropy(marginal(D, 1))
    lb = math.log2(D.beta)
    return IdentityReport(diff, lb, abs(diff - lb), D)


def suffix_entropy(D: OrderedEdgeDistribution, i: int) -> float:
    """``H(X_i, ..., X_r)`` with 1-based ``i``; zero when ``i > r``."""
    if i > D.r:
        return 0.0
    return entropy(marginal(D, 0, coords=range(i - 1, D.r)))


def alphas(D: OrderedEdgeDistribution) -> list[float]:
    """``alpha_i = 2^(H(X_i | X_{i+1..r}) - H(X_i))`` for ``i = 1..r``."""
    out = []
    for i in range(1, D.r + 1):
        cond = suffix_entropy(D, i) - suffix_entropy(D, i + 1)
        own = entropy(marginal(D, 0, coords=(i - 1,)))
        out.append(2.0 ** (cond - own))
    return out


def alpha_superadditivity(al: Sequence[float], tol: float = ABS_TOL) -> bool:
    r = len(al)
    return all(al[i - 1] + al[j - 1] <= al[i + j - 1] + tol
               for i in range(1, r + 1) for j in range(1, r + 1) if i + j <= r)


def chain_rule_residual(D: OrderedEdgeDistribution, j: int) -> float:
    """Telescoped chain rule against ``H(X_j..X_r) - (r-j+1) H(X_1)``."""
    h1 = entropy(marginal(D, 1))
    total = math.fsum(suffix_entropy(D, i) - suffix_entropy(D, i + 1) - h1 for i in range(j, D.r + 1))
    return abs(total - (suffix_entropy(D, j) - (D.r - j + 1) * h1))


def unique_completions(D: OrderedEdgeDistribution) -> bool:
    """In a partial Steiner graph every supported (r-1)-prefix has one completion."""
    if not is_partial_steiner(D.graph):
        return False
    seen: dict[Tuple, int] = {}
    for t in D.atoms:
        head, tail = t[:-1], t[-1]
        if seen.setdefault(head, tail) != tail:
            return False
    # the completion law then reduces to x-product times the weight of the completion
    x = D.weights
    law = marginal_formula(D, D.r - 1)
    for head, tail in seen.items():
        want = math.prod(x[v - 1] for v in head) * x[tail - 1] / D.beta
        if abs(law.get(head, 0.0) - want) > 1e-12:
            return False
    return True


@dataclass(frozen=True)
class LogUniformVerdict:
    applicable: bool
    hypothesis_holds: bool
    conclusion_holds: bool
    entropy_sum: float

    @property
    def ok(self) -> bool:
        return (not self.hypothesis_holds) or self.conclusion_holds


def entropy_log_uniform_check(x, r: int, tol: float = ABS_TOL) -> LogUniformVerdict:
    """If ``max x <= 1/r`` and ``sum x log x = -log r`` then ``x`` is uniform on r points."""
    arr = x.x if isinstance(x, SimplexVector) else np.asarray(x, dtype=np.float64)
    s = math.fsum(v * math.log2(v) for v in arr if v > 0)
    applicable = float(arr.max()) <= 1.0 / r + tol
    hyp = applicable and abs(s + math.log2(r)) <= tol
    on = arr[arr > tol]
    conclusion = len(on) == r and bool(np.all(np.abs(on - 1.0 / r) <= tol))
    return LogUniformVerdict(applicable, hyp, conclusion, s)
