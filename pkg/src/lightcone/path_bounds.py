"""Commutator bounds built from irreducible factor paths.

Three nested bounds on C_ij(t), in decreasing tightness: the path-sum bound
(sum over irreducible factor paths), the matrix-exponential bound built from
the pairwise weight matrix h, and the classic exponential-lightcone bound
parameterized by a decay rate alpha.  Also: velocity extraction, closed
forms for the chain / star / complete-graph models, and the conversion
interval between the projector norm C and the commutator norm Chat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from .errors import (
    AlphaOutOfRange,
    BadDimension,
    InvalidParams,
    NotRegular,
    SameNode,
    WeightTooLarge,
)
from .factor_graph import (
    Factor,
    FactorGraph,
    WeightedFactorGraph,
    _bfs_distance,
    as_weighted,
    distance,
    regularity_check,
)

__all__ = [
    "IrreduciblePath",
    "HMatrices",
    "enumerate_irreducible_paths",
    "theorem3_bound",
    "h_matrices",
    "corollary6_bound",
    "lieb_robinson_bound",
    "velocities",
    "Velocities",
    "closed_form_bound",
    "tfm_sum_bound",
    "prop1_convert",
    "golden_section_min",
    "bessel_i",
]


@dataclass(frozen=True)
class IrreduciblePath:
    """Factor sequence X_1..X_l with i in X_1 only and j in X_l only.

    Consecutive factors intersect, factors are pairwise distinct, and a
    system of pairwise-distinct connector nodes exists, so the path embeds
    as a simple subtree of the graph.
    """

    source: int
    target: int
    factors: tuple[Factor, ...]

    def __len__(self) -> int:
        return len(self.factors)


def _has_distinct_connectors(factors: Sequence[Factor], i: int, j: int) -> bool:
    """System-of-distinct-representatives check for consecutive overlaps."""
    slots = [
        (a.node_set & b.node_set) - {i, j}
        for a, b in zip(factors, factors[1:])
    ]
    owner: dict[int, int] = {}  # node -> slot currently using it

    def assign(slot: int, taken: set[int]) -> bool:
        for v in slots[slot]:
            if v in taken:
                continue
            taken.add(v)
            if v not in owner or assign(owner[v], taken):
                owner[v] = slot
                return True
        return False

    return all(assign(s, set()) for s in range(len(slots)))


@lru_cache(maxsize=256)
def _enumerate_cached(
    g: WeightedFactorGraph, i: int, j: int, l_max: int
) -> tuple[IrreduciblePath, ...]:
    base = g.graph
    factors = base.factors
    # bipartite distance from j, for a lower bound on remaining path length:
    # a factor at odd distance d from j needs (d+1)/2 more factors inclusive
    dist_from_j = _bfs_distance(base, j)
    needed = {
        f: (dist_from_j[f] + 1) // 2 for f in factors if f in dist_from_j
    }
    found: list[IrreduciblePath] = []
    path: list[Factor] = []
    used: set[Factor] = set()

    factor_neighbors: dict[Factor, list[Factor]] = {
        f: sorted(
            {
                factors[fi]
                for node in f.nodes
                for fi in base.node_adjacency[node]
                if factors[fi] != f
            }
        )
        for f in factors
    }

    def dfs(cur: Factor) -> None:
        if j in cur:
            if _has_distinct_connectors(path, i, j):
                found.append(
                    IrreduciblePath(source=i, target=j, factors=tuple(path))
                )
            return  # j may only sit in the final factor
        if len(path) == l_max:
            return
        for nxt in factor_neighbors[cur]:
            if nxt in used or i in nxt:
                continue
            if len(path) + needed.get(nxt, l_max + 1) > l_max:
                continue
            path.append(nxt)
            used.add(nxt)
            dfs(nxt)
            used.remove(nxt)
            path.pop()

    for first in factors:
        if i not in first:
            continue
        if needed.get(first, l_max + 1) > l_max:
            continue
        path.append(first)
        used.add(first)
        dfs(first)
        used.remove(first)
        path.pop()

    found.sort(key=lambda p: (len(p), p.factors))
    return tuple(found)


def enumerate_irreducible_paths(
    g: FactorGraph | WeightedFactorGraph,
    i: int,
    j: int,
    l_max: int | None = None,
) -> list[IrreduciblePath]:
    """All irreducible factor paths from i to j with length <= l_max.

    Exhaustive backtracking with distance pruning.  Graphs with more than 24
    factors must pass an explicit l_max (results are then a truncation).
    """
    if i == j:
        raise SameNode(f"path endpoints coincide at node {i}")
    wg = as_weighted(g)
    if not 0 <= i < wg.n_nodes or not 0 <= j < wg.n_nodes:
        raise InvalidParams(f"nodes ({i}, {j}) outside 0..{wg.n_nodes - 1}")
    n_factors = len(wg.factors)
    if l_max is None:
        if n_factors > 24:
            raise InvalidParams(
                f"|F| = {n_factors} > 24: pass l_max explicitly (truncated result)"
            )
        l_max = n_factors
    if l_max < 1:
        raise InvalidParams(f"l_max must be >= 1, got {l_max}")
    return list(_enumerate_cached(wg, i, j, min(l_max, n_factors)))


def theorem3_bound(
    g: FactorGraph | WeightedFactorGraph,
    i: int,
    j: int,
    t: float,
    l_max: int | None = None,
) -> float:
    """Path-sum bound: sum over paths of (2|t|)^l / l! times the weights.

    With l_max below the exhaustive length this is a partial sum (a lower
    bound on the bound); callers surfacing such values label them as
    partial.
    """
    wg = as_weighted(g)
    total = 0.0
    at = 2.0 * abs(t)
    for p in enumerate_irreducible_paths(wg, i, j, l_max):
        w = 1.0
        for f in p.factors:
            w *= wg.weight_of(f)
        total += at ** len(p) / math.factorial(len(p)) * w
    return total


@dataclass(frozen=True)
class HMatrices:
    """Pairwise weight matrix h and its diagonal completion h-tilde.

    h_ij sums the weights of factors containing both i and j (zero
    diagonal); h-tilde adds the row sums on the diagonal, making it
    positive semi-definite with top eigenvalue >= 2 * top eigenvalue of h.
    """

    h: np.ndarray
    h_tilde: np.ndarray
    h_max: float
    h_tilde_max: float


@lru_cache(maxsize=256)
def h_matrices(g: FactorGraph | WeightedFactorGraph) -> HMatrices:
    wg = as_weighted(g)
    n = wg.n_nodes
    h = np.zeros((n, n))
    for f, w in zip(wg.factors, wg.weights):
        for a_idx, a in enumerate(f.nodes):
            for b in f.nodes[a_idx + 1:]:
                h[a, b] += w
                h[b, a] += w
    h_tilde = h + np.diag(h.sum(axis=1))
    return HMatrices(
        h=h,
        h_tilde=h_tilde,
        h_max=float(np.linalg.eigvalsh(h)[-1]),
        h_tilde_max=float(np.linalg.eigvalsh(h_tilde)[-1]),
    )


def corollary6_bound(
    g: FactorGraph | WeightedFactorGraph, i: int, j: int, t: float
) -> float:
    """(e^{2|t| h})_ij summed as nonnegative walk terms.

    h has nonnegative entries, so the Taylor series adds without
    cancellation and the entry keeps full relative accuracy even where
    it is exponentially small; an eigendecomposition would bury such
    entries under absolute reconstruction noise.
    """
    hm = h_matrices(as_weighted(g))
    n = hm.h.shape[0]
    x = 2.0 * abs(t)
    row_norm = float(hm.h.sum(axis=1).max()) if n > 1 else 0.0
    u = np.zeros(n)
    u[i] = 1.0
    total = float(u[j])
    length = 0
    while True:
        length += 1
        with np.errstate(over="ignore", invalid="ignore"):
            u = (x / length) * (hm.h @ u)
        total += float(u[j])
        if not math.isfinite(total):
            # all terms are nonnegative, so any overflow means the entry
            # itself overflows (nan can only arise downstream of an inf)
            return math.inf
        if length < n:
            continue  # walks may not have reached j yet
        if total == 0.0:
            return 0.0  # j unreachable from i
        ratio = x * row_norm / (length + 1)
        if ratio < 0.5 and float(u.max()) / (1.0 - ratio) <= 1e-13 * total:
            return total


def golden_section_min(
    f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10
) -> tuple[float, float]:
    """Golden-section search for a unimodal scalar minimum on [lo, hi]."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = f(d)
    x = (a + b) / 2.0
    return x, f(x)


def lieb_robinson_bound(
    g: FactorGraph | WeightedFactorGraph,
    i: int,
    j: int,
    t: float,
    alpha: float | str = "optimize",
) -> float:
    """(e^{2 alpha h_tilde_max |t|} - 1) * alpha^{-d_tilde(i,j)}.

    alpha="optimize" minimizes over alpha > 1 by golden-section search on
    ln(alpha).
    """
    if i == j:
        raise SameNode(f"path endpoints coincide at node {i}")
    wg = as_weighted(g)
    hm = h_matrices(wg)
    d_tilde = distance(wg.graph, i, j) / 2.0
    rate = 2.0 * hm.h_tilde_max * abs(t)

    def value_at(log_alpha: float) -> float:
        x = rate * math.exp(log_alpha)
        if x > 700.0:  # expm1 overflows; exact to double precision anyway
            z = x - d_tilde * log_alpha
            return math.exp(z) if z < 700.0 else math.inf
        return math.expm1(x) * math.exp(-d_tilde * log_alpha)

    if alpha == "optimize":
        # objective is unimodal in ln(alpha)
        _, best = golden_section_min(
            value_at, math.log(1.0 + 1e-6), math.log(1e3), tol=1e-10
        )
        return best
    alpha = float(alpha)
    if not alpha > 1.0:
        raise AlphaOutOfRange(f"need alpha > 1, got {alpha}")
    return value_at(math.log(alpha))


@dataclass(frozen=True)
class Velocities:
    v_lr: float
    v_improved: float


def velocities(g: FactorGraph | WeightedFactorGraph) -> Velocities:
    """Front speeds: 2e * top eigenvalue of h_tilde, and of h.

    The improved figure is at most half the standard one because
    h_tilde_max >= 2 h_max.
    """
    hm = h_matrices(as_weighted(g))
    e = math.e
    return Velocities(v_lr=2.0 * e * hm.h_tilde_max, v_improved=2.0 * e * hm.h_max)


def bessel_i(order: int, x: float, rel_tol: float = 1e-12) -> float:
    """Modified Bessel function I_n(x) by its power series."""
    if order < 0:
        raise InvalidParams(f"order must be >= 0, got {order}")
    x = float(x)
    if x == 0.0:
        return 1.0 if order == 0 else 0.0
    half = x / 2.0
    term = half**order / math.factorial(order)
    total = term
    m = 0
    while True:
        m += 1
        term *= half * half / (m * (m + order))
        total += term
        if term <= rel_tol * abs(total):
            return total


def closed_form_bound(model: str, t: float, **params) -> float:
    """Analytic evaluations for the chain and complete-graph models.

    chain_thm3     (2h|t|)^delta / delta!            params: h, delta
    chain_bessel   I_delta(4h|t|)                    params: h, delta
    chain_lr       (e^{8 h alpha |t|}-1) alpha^-delta  params: h, delta, alpha
    complete_tfm   ((1+2a|t|/(N-1))^{N-1}-1)/(N-1)   params: n_nodes, a
    """
    at = abs(t)
    if model == "chain_thm3":
        h, delta = _chain_params(params)
        return (2.0 * h * at) ** delta / math.factorial(delta)
    if model == "chain_bessel":
        h, delta = _chain_params(params)
        return bessel_i(delta, 4.0 * h * at)
    if model == "chain_lr":
        h, delta = _chain_params(params)
        alpha = float(params.get("alpha", math.e))
        if not alpha > 1.0:
            raise AlphaOutOfRange(f"need alpha > 1, got {alpha}")
        return math.expm1(8.0 * h * alpha * at) * alpha ** (-delta)
    if model == "complete_tfm":
        try:
            n = int(params["n_nodes"])
            a = float(params["a"])
        except KeyError as exc:
            raise InvalidParams(f"complete_tfm needs {exc.args[0]}") from None
        if n < 2 or a < 0:
            raise InvalidParams(f"need N >= 2 and a >= 0, got N={n}, a={a}")
        return ((1.0 + 2.0 * a * at / (n - 1)) ** (n - 1) - 1.0) / (n - 1)
    raise InvalidParams(f"unknown closed-form model {model!r}")


def _chain_params(params: dict) -> tuple[float, int]:
    try:
        h = float(params["h"])
        delta = int(params["delta"])
    except KeyError as exc:
        raise InvalidParams(f"chain model needs {exc.args[0]}") from None
    if h < 0 or delta < 0:
        raise InvalidParams(f"need h >= 0 and delta >= 0, got h={h}, delta={delta}")
    return h, delta


def tfm_sum_bound(g: FactorGraph | WeightedFactorGraph, a: float, t: float) -> float:
    """Whole-graph bound e^{2a|t|}/N for regular graphs with capped weights.

    Admissibility: every factor weight at most N a / (q |F|).
    """
    wg = as_weighted(g)
    report = regularity_check(wg.graph)
    if not report.is_regular:
        raise NotRegular("bound requires a (k, q)-regular graph")
    cap = wg.n_nodes * a / (report.q * len(wg.factors))
    for f, w in zip(wg.factors, wg.weights):
        if w > cap * (1.0 + 1e-12):
            raise WeightTooLarge(
                f"factor {f.nodes} weight {w} exceeds cap {cap:.6g}"
            )
    return math.exp(2.0 * a * abs(t)) / wg.n_nodes


def prop1_convert(value: float, d_j: int, source: str = "hatc") -> tuple[float, float]:
    """Interval for C given Chat (source='hatc') or vice versa (source='c').

    For local dimension d the two norms pin each other to
    [x / sqrt(d^2 - 1), x * sqrt(2 (1 - 1/d^2))], clipped to [0, 1].
    """
    if not isinstance(d_j, int) or d_j < 2:
        raise BadDimension(f"local dimension must be an integer >= 2, got {d_j}")
    if not 0.0 <= value <= 1.0:
        raise InvalidParams(f"norm value must lie in [0, 1], got {value}")
    down = math.sqrt(d_j * d_j - 1.0)
    up = math.sqrt(2.0 * (1.0 - 1.0 / (d_j * d_j)))
    if source == "hatc":
        lo, hi = value / down, value * up
    elif source == "c":
        lo, hi = value / up, value * down
    else:
        raise InvalidParams(f"source must be 'hatc' or 'c', got {source!r}")
    return max(0.0, min(1.0, lo)), max(0.0, min(1.0, hi))
