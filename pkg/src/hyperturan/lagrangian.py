"""The Lagrangian polynomial of an r-graph and its maximum over the simplex.

``P_H(x) = sum over edges e of prod_{i in e} x_i``. The Lagrangian is the
maximum of ``P_H`` over the standard simplex. Two maximisation regimes are
offered:

* ``exact``: enumerate candidate supports, solve the stationarity system on
  each face by damped Newton, keep feasible points, and certify the best one
  (small ``n`` only);
* ``heuristic``: projected gradient ascent from random starts, polished by
  Newton on the detected support. Never certified.
"""

from __future__ import annotations

import itertools
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels
from .hypercore import HypergraphError, RGraph, induced, is_2_covered

log = logging.getLogger(__name__)

EXACT_MAX_N = 14
ABS_TOL = 1e-9


class ScaleGuardError(RuntimeError):
    """An operation refused an instance above its desk-scale limit."""


class SimplexVector:
    """Nonnegative weights on vertices ``1..n`` summing to one."""

    __slots__ = ("x", "tol")

    def __init__(self, x: Sequence[float], tol: float = 1e-12):
        arr = np.array(x, dtype=np.float64)
        if arr.ndim != 1:
            raise ValueError("simplex vector must be one-dimensional")
        if np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("simplex vector entries must be finite and nonnegative")
        if abs(math.fsum(arr) - 1.0) > tol:
            raise ValueError(f"entries sum to {math.fsum(arr)!r}, not 1 (tol {tol})")
        arr.flags.writeable = False
        self.x = arr
        self.tol = tol

    @classmethod
    def uniform_on(cls, n: int, support: Sequence[int]) -> "SimplexVector":
        x = np.zeros(n)
        x[[v - 1 for v in support]] = 1.0 / len(support)
        return cls(x)

    @classmethod
    def normalized(cls, w: Sequence[float]) -> "SimplexVector":
        w = np.asarray(w, dtype=np.float64)
        return cls(w / w.sum(), tol=1e-9)

    def support(self, eps: float = 0.0) -> tuple[int, ...]:
        return tuple(int(i) + 1 for i in np.flatnonzero(self.x > eps))

    def __len__(self) -> int:
        return len(self.x)

    def __array__(self, dtype=None, copy=None):
        return self.x if dtype is None else self.x.astype(dtype)

    def __repr__(self) -> str:
        return f"SimplexVector({np.array2string(self.x, precision=6)})"


def _as_array(H: RGraph, x) -> np.ndarray:
    arr = x.x if isinstance(x, SimplexVector) else np.asarray(x, dtype=np.float64)
    if arr.shape != (H.n,):
        raise HypergraphError(f"weight vector has shape {arr.shape}, graph has {H.n} vertices")
    return arr


def eval_P(H: RGraph, x) -> float:
    """Lagrangian polynomial at ``x`` (compensated summation).

    A plain array is accepted too and is not required to lie on the simplex.
    """
    return _kernels.eval_poly(H.edge_array(), _as_array(H, x))


def grad_P(H: RGraph, x) -> np.ndarray:
    """Partial derivatives; entry ``j - 1`` is the link polynomial of vertex ``j``."""
    return _kernels.grad_poly(H.edge_array(), _as_array(H, x))


def hess_P(H: RGraph, x) -> np.ndarray:
    return _kernels.hess_poly(H.edge_array(), _as_array(H, x))


@dataclass(frozen=True)
class KKTReport:
    residual: float
    off_support_slack: float
    passes: bool


def kkt_check(H: RGraph, x, tol: float = ABS_TOL, support_eps: float = 0.0) -> KKTReport:
    """First-order optimality on the simplex.

    On the support every partial must equal ``r * P(x)``; off the support
    no partial may exceed it.
    """
    arr = _as_array(H, x)
    g = grad_P(H, arr)
    target = H.r * eval_P(H, arr)
    on = arr > support_eps
    residual = float(np.max(np.abs(g[on] - target))) if on.any() else 0.0
    slack = float(np.min(target - g[~on])) if (~on).any() else math.inf
    return KKTReport(residual, slack, residual <= tol and slack >= -tol)


@dataclass
class OptResult:
    value: float
    maximizer: SimplexVector | None
    kkt_residual: float
    off_support_slack: float
    certified: bool
    restarts_used: int
    mode: str = "exact"
    exact_value: Fraction | None = None
    # every distinct point reaching ``value`` within tolerance
    maximizers: list[SimplexVector] = field(default_factory=list)
    faces_examined: int = 0

    @property
    def support(self) -> tuple[int, ...]:
        return () if self.maximizer is None else self.maximizer.support(1e-12)


@dataclass(frozen=True)
class MaximizeConfig:
    mode: str = "exact"
    restarts: int = 8
    max_iter: int = 5000
    tol: float = ABS_TOL
    seed: int = 0
    threads: int = 1
    newton_seeds: int = 3


# --- simplex projection and ascent ------------------------------------------

def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the probability simplex (sort-based)."""
    n = len(v)
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, n + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return np.maximum(v - theta, 0.0)


def _ascent(edges: np.ndarray, x: np.ndarray, max_iter: int) -> np.ndarray:
    """Projected gradient ascent with Armijo backtracking."""
    f = _kernels.eval_poly(edges, x)
    step = 1.0
    for _ in range(max_iter):
        g = _kernels.grad_poly(edges, x)
        while True:
            y = project_simplex(x + step * g)
            fy = _kernels.eval_poly(edges, y)
            d = y - x
            if fy >= f + 1e-4 * float(g @ d) or step < 1e-14:
                break
            step *= 0.5
        moved = float(np.max(np.abs(d)))
        x, f = y, fy
        step = min(step * 2.0, 1e3)
        if moved < 1e-14:
            break
    return x


# --- stationary points on a face ---------------------------------------------

def _face_newton(edges: np.ndarray, k: int, x0: np.ndarray, max_iter: int = 200) -> np.ndarray | None:
    """Solve ``grad = c * 1, sum(x) = 1`` on a face with ``k`` local vertices.

    Damped Newton: the full step is halved until the residual drops.
    Returns the solution or ``None`` when it fails to converge.
    """
    def residual(z):
        x, c = z[:k], z[k]
        g = _kernels.grad_poly(edges, x)
        return np.concatenate([g - c, [x.sum() - 1.0]])

    x = x0.copy()
    g0 = _kernels.grad_poly(edges, x)
    z = np.concatenate([x, [float(x @ g0) / max(x.sum(), 1e-300)]])
    F = residual(z)
    nf = float(np.linalg.norm(F))
    J = np.zeros((k + 1, k + 1))
    for _ in range(max_iter):
        if nf < 1e-14:
            return z[:k]
        J[:k, :k] = _kernels.hess_poly(edges, z[:k])
        J[:k, k] = -1.0
        J[k, :k] = 1.0
        J[k, k] = 0.0
        try:
            delta = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            delta = np.linalg.lstsq(J, -F, rcond=None)[0]
        t = 1.0
        while t > 1e-10:
            zn = z + t * delta
            Fn = residual(zn)
            nn = float(np.linalg.norm(Fn))
            if nn < nf:
                break
            t *= 0.5
        else:
            return z[:k] if nf < 1e-11 else None
        z, F, nf = zn, Fn, nn
    return z[:k] if nf < 1e-11 else None


def _face_edges(H: RGraph, support: Sequence[int]) -> np.ndarray:
    return induced(H, support).edge_array()


def candidate_supports(H: RGraph) -> list[tuple[int, ...]]:
    """Vertex sets ``S`` with ``|S| >= r`` whose induced subgraph covers every pair.

    Some maximiser of the Lagrangian always has a support of this kind:
    two support vertices sharing no edge can trade weight linearly until
    one of them drops out. Smallest sets first, lexicographic within a size.
    """
    masks = [sum(1 << (v - 1) for v in e) for e in H.edges]
    active = sorted({v for e in H.edges for v in e})
    out = []
    for k in range(H.r, len(active) + 1):
        for S in itertools.combinations(active, k):
            smask = sum(1 << (v - 1) for v in S)
            cover = {v: 0 for v in S}
            for em in masks:
                if em & ~smask == 0:
                    for v in S:
                        if em >> (v - 1) & 1:
                            cover[v] |= em
            if all(cover[v] == smask for v in S):
                out.append(S)
    return out


def _exact_rational(H: RGraph, x: np.ndarray, tol: float) -> Fraction | None:
    supp = np.flatnonzero(x > tol)
    k = len(supp)
    if k == 0 or np.max(np.abs(x[supp] - 1.0 / k)) > tol:
        return None
    inside = len(induced(H, (supp + 1).tolist()))
    return Fraction(inside, k ** H.r)


def _dedupe(points: list[np.ndarray], tol: float = 1e-7) -> list[np.ndarray]:
    out: list[np.ndarray] = []
    for p in points:
        if not any(np.max(np.abs(p - q)) <= tol for q in out):
            out.append(p)
    return out


def _heuristic_run(H: RGraph, edges: np.ndarray, x0: np.ndarray, max_iter: int) -> np.ndarray:
    x = _ascent(edges, x0, max_iter)
    supp = np.flatnonzero(x > 1e-10)
    if len(supp) == 0:
        return x
    local = _face_edges(H, (supp + 1).tolist())
    pol = _face_newton(local, len(supp), x[supp] / x[supp].sum())
    if pol is not None and np.all(pol > 0):
        y = np.zeros(H.n)
        y[supp] = pol
        y /= y.sum()
        if _kernels.eval_poly(edges, y) >= _kernels.eval_poly(edges, x) - 1e-15:
            return y
    return x


def _random_starts(n: int, count: int, seed: int) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    starts = [np.full(n, 1.0 / n)]
    while len(starts) < count:
        starts.append(rng.dirichlet(np.full(n, 0.5)))
    return starts[:count]


def maximize(H: RGraph, cfg: MaximizeConfig | None = None, **overrides) -> OptResult:
    """Maximise the Lagrangian polynomial of ``H`` over the simplex."""
    cfg = cfg or MaximizeConfig()
    if overrides:
        cfg = MaximizeConfig(**{**cfg.__dict__, **overrides})
    if cfg.mode not in ("exact", "heuristic"):
        raise ValueError(f"unknown mode {cfg.mode!r}")
    if len(H) == 0:
        return OptResult(0.0, None, 0.0, math.inf, True, 0, cfg.mode, Fraction(0))
    edges = H.edge_array()

    # heuristic restarts run in both modes; in exact mode they cross-check
    starts = _random_starts(H.n, max(cfg.restarts, 1), cfg.seed)
    if cfg.threads > 1:
        with ThreadPoolExecutor(cfg.threads) as pool:
            runs = list(pool.map(lambda s: _heuristic_run(H, edges, s, cfg.max_iter), starts))
    else:
        runs = [_heuristic_run(H, edges, s, cfg.max_iter) for s in starts]

    candidates: list[tuple[float, tuple[int, ...], np.ndarray]] = []
    faces = 0
    exact_complete = False
    if cfg.mode == "exact":
        if H.n > EXACT_MAX_N:
            raise ScaleGuardError(f"exact mode supports n <= {EXACT_MAX_N}, got {H.n}")
        for S in candidate_supports(H):
            faces += 1
            local = _face_edges(H, S)
            k = len(S)
            seeds = [np.full(k, 1.0 / k)]
            rng = np.random.default_rng(sum(1 << (v - 1) for v in S))
            seeds += [rng.dirichlet(np.ones(k)) for _ in range(cfg.newton_seeds)]
            for s in seeds:
                sol = _face_newton(local, k, s)
                if sol is None or np.any(sol < -1e-12):
                    continue
                x = np.zeros(H.n)
                x[[v - 1 for v in S]] = np.clip(sol, 0.0, None)
                x /= x.sum()
                candidates.append((_kernels.eval_poly(edges, x), S, x))
        exact_complete = True

    for x in runs:
        candidates.append((_kernels.eval_poly(edges, x), tuple(int(i) + 1 for i in np.flatnonzero(x > 1e-12)), x))

    best_exact = max((c[0] for c in candidates[:len(candidates) - len(runs)]), default=-math.inf)
    best_heur = max(c[0] for c in candidates[len(candidates) - len(runs):])
    value = max(best_exact, best_heur)
    # ties: lexicographically smallest support
    # ties: stationary points first (a half-converged restart can sit within
    # tol of the optimum), then lexicographically smallest support
    winners = [c for c in candidates if c[0] >= value - cfg.tol]
    stationary = {id(c): kkt_check(H, c[2], tol=cfg.tol, support_eps=1e-12).passes for c in winners}
    winners.sort(key=lambda c: (not stationary[id(c)], c[1], -c[0]))
    x_best = winners[0][2]
    value = _kernels.eval_poly(edges, x_best)
    kkt = kkt_check(H, x_best, tol=cfg.tol, support_eps=1e-12)

    certified = cfg.mode == "exact" and exact_complete and kkt.passes
    if certified and best_heur > best_exact + cfg.tol:
        log.warning("heuristic restart beat support enumeration (%.12g > %.12g); result uncertified",
                    best_heur, best_exact)
        certified = False

    keep = [c for c in winners if stationary[id(c)]] or winners
    maximizers = [SimplexVector(p, tol=1e-9) for p in _dedupe([c[2] for c in keep])]
    return OptResult(
        value=value,
        maximizer=SimplexVector(x_best, tol=1e-9),
        kkt_residual=kkt.residual,
        off_support_slack=kkt.off_support_slack,
        certified=certified,
        restarts_used=len(runs),
        mode=cfg.mode,
        exact_value=_exact_rational(H, x_best, 1e-9),
        maximizers=maximizers,
        faces_examined=faces,
    )


def lagrangian(H: RGraph, **kw) -> float:
    return maximize(H, **kw).value


# --- structural checks on optima ------------------------------------------------

PASS, FAIL, NOT_APPLICABLE = "PASS", "FAIL", "NOT_APPLICABLE"


@dataclass(frozen=True)
class StructureVerdict:
    verdict: str
    reason: str = ""


def check_opt_structure(H: RGraph, res: OptResult, tol: float = 1e-7) -> StructureVerdict:
    """Optima of 2-covered 𝒯_r-free graphs are uniform on a single edge."""
    from .families import PatternKind, TrianglePattern, is_free

    if not is_2_covered(H):
        return StructureVerdict(NOT_APPLICABLE, "graph is not 2-covered")
    if not is_free(H, TrianglePattern(PatternKind.T_FAMILY, H.r)):
        return StructureVerdict(NOT_APPLICABLE, "graph contains a 𝒯_r triple")
    points = res.maximizers or ([res.maximizer] if res.maximizer is not None else [])
    if not points:
        return StructureVerdict(FAIL, "no maximizer reported")
    target = 1.0 / H.r ** H.r
    if abs(res.value - target) > tol:
        return StructureVerdict(FAIL, f"value {res.value!r} != 1/r^r")
    for p in points:
        supp = p.support(tol)
        if len(supp) != H.r:
            return StructureVerdict(FAIL, f"support {supp} has size {len(supp)}")
        if supp not in H:
            return StructureVerdict(FAIL, f"support {supp} is not an edge")
        if np.max(np.abs(p.x[[v - 1 for v in supp]] - 1.0 / H.r)) > tol:
            return StructureVerdict(FAIL, f"weights on {supp} are not 1/r")
    return StructureVerdict(PASS)


@dataclass(frozen=True)
class ProductBoundReport:
    hypothesis_holds: bool
    product: Fraction | float
    bound: Fraction
    bound_ok: bool
    equality_case: bool


def superadditive_product_bound(xs: Sequence, tol: float = 0.0) -> ProductBoundReport:
    """Check ``x_1 ... x_r <= r!/r^r`` for nondecreasing superadditive ``x`` with ``x_r = 1``.

    Pass :class:`fractions.Fraction` entries for exact arithmetic; ``tol``
    loosens the hypothesis comparisons for float input.
    """
    r = len(xs)
    xs = list(xs)
    # a float zero would silently turn Fraction comparisons into float ones
    tol = tol or 0
    bound = Fraction(math.factorial(r), r ** r)
    hyp = (r >= 1 and all(xs[k] >= -tol for k in range(r))
           and all(xs[k] <= xs[k + 1] + tol for k in range(r - 1))
           and abs(xs[-1] - 1) <= tol)
    if hyp:
        hyp = all(xs[i - 1] + xs[j - 1] <= xs[i + j - 1] + tol
                  for i in range(1, r + 1) for j in range(i, r + 1) if i + j <= r)
    product = math.prod(xs)
    eq = all(abs(xs[k] - Fraction(k + 1, r)) <= tol for k in range(r))
    return ProductBoundReport(hyp, product, bound, (not hyp) or product <= bound + tol, eq)


@dataclass(frozen=True)
class MaclaurinReport:
    esp_value: float
    bound: float
    ok: bool


def elementary_symmetric(x: Sequence[float], k: int) -> float:
    e = [1.0] + [0.0] * k
    for v in x:
        for j in range(k, 0, -1):
            e[j] += e[j - 1] * v
    return e[k]


def maclaurin_bound(x, k: int, tol: float = 1e-15) -> MaclaurinReport:
    """``e_k(x) <= C(m, k) / m^k`` on the simplex of dimension ``m``."""
    arr = x.x if isinstance(x, SimplexVector) else np.asarray(x, dtype=np.float64)
    m = len(arr)
    if not 0 <= k <= m:
        raise ValueError(f"degree {k} outside 0..{m}")
    val = elementary_symmetric(arr, k)
    bound = math.comb(m, k) / m ** k
    return MaclaurinReport(val, bound, val <= bound * (1 + 1e-12) + tol)
