"""Random-coupling ensembles: sampling, Monte Carlo, and averaged bounds.

A "simple" ensemble carries one independent zero-mean coupling J_X per
factor with known variance, multiplying a fixed unit-norm interaction
string H_X.  Monte-Carlo estimates of E[C_ij(t)^2] from the exact
simulator are compared against three closed forms: the genus series for
complete q-local models with rate lambda_* = 48 J sqrt((q-1)/q), the
genus-0 SYK cosh bound, and the two-term sqrt(log N) scrambling bound.

Monte-Carlo reductions sum in a fixed pairwise tree so results do not
depend on any parallel schedule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from .curves import BoundCurve
from .correlators import c_ij_exact
from .errors import BadQ, GenusOutOfRange, InvalidParams
from .factor_graph import Factor, WeightedFactorGraph, as_weighted, build_graph
from .liouville import (
    HamiltonianTerm,
    majorana_mode,
    single_site_pauli,
    syk_variance,
)
from .pauli import PauliString

__all__ = [
    "EnsembleEntry",
    "EnsembleSpec",
    "ensemble_spec",
    "complete_spin_spec",
    "su2_heisenberg_spec",
    "syk_spec",
    "ensemble_graph",
    "sample_hamiltonian",
    "MCResult",
    "mc_expect_c2",
    "TheoremFSReport",
    "theoremFS_series",
    "syk_genus0_bound",
    "syk_largeq_exact",
    "syk_rate_ratio",
    "sqrtlogn_bound",
    "ScramblingVerdict",
    "scrambling_time",
]

_LAWS = ("gaussian", "rademacher")


def _exp(x: float) -> float:
    return math.inf if x > 709.0 else math.exp(x)


def _cosh(x: float) -> float:
    return math.inf if abs(x) > 709.0 else math.cosh(x)


@dataclass(frozen=True)
class EnsembleEntry:
    """One random interaction: variance jsq multiplying string on factor."""

    factor: Factor
    string: PauliString | tuple[int, ...]
    jsq: float


@dataclass(frozen=True)
class EnsembleSpec:
    kind: str  # "pauli" | "majorana"
    n: int
    entries: tuple[EnsembleEntry, ...]
    law: str = "gaussian"
    seed: int = 0


def ensemble_spec(
    kind: str,
    n: int,
    entries: Sequence[EnsembleEntry],
    law: str = "gaussian",
    seed: int = 0,
) -> EnsembleSpec:
    if kind not in ("pauli", "majorana"):
        raise InvalidParams(f"unknown basis kind {kind!r}")
    if law not in _LAWS:
        raise InvalidParams(f"law must be one of {_LAWS}, got {law!r}")
    if not entries:
        raise InvalidParams("ensemble needs at least one factor")
    for e in entries:
        if e.jsq <= 0:
            raise InvalidParams(f"variance must be positive, got {e.jsq}")
        if kind == "pauli" and not isinstance(e.string, PauliString):
            raise InvalidParams("pauli ensemble needs PauliString content")
        if kind == "majorana" and not isinstance(e.string, tuple):
            raise InvalidParams("majorana ensemble needs index-tuple content")
    return EnsembleSpec(kind=kind, n=n, entries=tuple(entries), law=law, seed=seed)


def _cycle_labels(nodes: Sequence[int], n: int) -> PauliString:
    ls = [0] * n
    for pos, node in enumerate(nodes):
        ls[node] = 1 + pos % 3  # X, Y, Z cycling; adjacent factors clash
    return PauliString(labels=tuple(ls))


def complete_spin_spec(
    n: int,
    q: int,
    jbar: float = 1.0,
    law: str = "gaussian",
    seed: int = 0,
) -> EnsembleSpec:
    """All q-subsets of n qubits at the critical per-factor variance.

    Variance J^2 (q-1)!/(q n^(q-1)) saturates the admissibility condition
    of the genus-series bound.
    """
    if not 2 <= q <= n:
        raise InvalidParams(f"need 2 <= q <= {n}")
    jsq = jbar**2 * math.factorial(q - 1) / (q * n ** (q - 1))
    entries = [
        EnsembleEntry(
            factor=Factor(nodes=nodes),
            string=_cycle_labels(nodes, n),
            jsq=jsq,
        )
        for nodes in combinations(range(n), q)
    ]
    return ensemble_spec("pauli", n, entries, law=law, seed=seed)


def su2_heisenberg_spec(
    n: int, law: str = "gaussian", seed: int = 0
) -> EnsembleSpec:
    """Random Heisenberg couplings: XX, YY, ZZ flavors per pair, E[J^2]=1/n."""
    entries = []
    for i, j in combinations(range(n), 2):
        for flavor, ch in enumerate("XYZ"):
            ls = [0] * n
            ls[i] = ls[j] = 1 + flavor
            entries.append(
                EnsembleEntry(
                    factor=Factor(nodes=(i, j), flavor=flavor),
                    string=PauliString(labels=tuple(ls)),
                    jsq=1.0 / n,
                )
            )
    return ensemble_spec("pauli", n, entries, law=law, seed=seed)


def syk_spec(
    n_majorana: int,
    q: int,
    jbar: float = 1.0,
    law: str = "gaussian",
    seed: int = 0,
) -> EnsembleSpec:
    """SYK ensemble entries; mode k maps to graph node k-1."""
    if q % 2 != 0 or not 2 <= q <= n_majorana:
        raise InvalidParams(f"need even q with 2 <= q <= {n_majorana}")
    jsq = syk_variance(n_majorana, q, jbar)
    entries = [
        EnsembleEntry(
            factor=Factor(nodes=tuple(k - 1 for k in modes)),
            string=modes,
            jsq=jsq,
        )
        for modes in combinations(range(1, n_majorana + 1), q)
    ]
    return ensemble_spec("majorana", n_majorana, entries, law=law, seed=seed)


def ensemble_graph(spec: EnsembleSpec) -> WeightedFactorGraph:
    """Weighted factor graph with weights sqrt(E[J_X^2]) for bound reuse."""
    factors = [e.factor for e in spec.entries]
    weights = {e.factor: math.sqrt(e.jsq) for e in spec.entries}
    return as_weighted(build_graph(spec.n, factors), weights)


def sample_hamiltonian(
    spec: EnsembleSpec, sample_index: int
) -> list[HamiltonianTerm]:
    """Couplings for one sample, from a counter-derived substream."""
    rng = np.random.default_rng([spec.seed, sample_index])
    scale = np.sqrt([e.jsq for e in spec.entries])
    if spec.law == "gaussian":
        j = scale * rng.standard_normal(len(spec.entries))
    else:
        j = scale * (2.0 * rng.integers(0, 2, len(spec.entries)) - 1.0)
    return [
        HamiltonianTerm(factor=e.factor, string=e.string, coupling=float(c))
        for e, c in zip(spec.entries, j)
    ]


def _pairwise_sum(values: Sequence[float], lo: int, hi: int) -> float:
    if hi - lo <= 4:
        return math.fsum(values[lo:hi])
    mid = (lo + hi) // 2
    return _pairwise_sum(values, lo, mid) + _pairwise_sum(values, mid, hi)


def pairwise_sum(values: Sequence[float]) -> float:
    return _pairwise_sum(values, 0, len(values)) if len(values) else 0.0


@dataclass(frozen=True)
class MCResult:
    times: tuple[float, ...]
    mean: tuple[float, ...]
    stderr: tuple[float, ...]
    n_samples: int

    def mean_curve(self, label: str = "mc_mean") -> BoundCurve:
        return BoundCurve(times=self.times, values=self.mean, label=label)


def mc_expect_c2(
    spec: EnsembleSpec,
    i: int,
    j: int,
    times: Sequence[float],
    n_samples: int,
    method: str = "dense",
    a_i=None,
) -> MCResult:
    """Sample mean and standard error of C_ij(t)^2 over the ensemble."""
    if n_samples < 1:
        raise InvalidParams("need at least one sample")
    if a_i is None:
        a_i = (
            single_site_pauli(spec.n, i, "Z")
            if spec.kind == "pauli"
            else majorana_mode(spec.n, i)
        )
    rows = []
    for s in range(n_samples):
        h = sample_hamiltonian(spec, s)
        curve = c_ij_exact(h, i, j, a_i, times, method=method)
        rows.append([v * v for v in curve.values])
    means, errs = [], []
    for k in range(len(times)):
        col = [row[k] for row in rows]
        m = pairwise_sum(col) / n_samples
        if n_samples > 1:
            resid = [(x - m) ** 2 for x in col]
            std = math.sqrt(pairwise_sum(resid) / (n_samples - 1))
            errs.append(std / math.sqrt(n_samples))
        else:
            errs.append(0.0)
        means.append(m)
    return MCResult(
        times=tuple(float(t) for t in times),
        mean=tuple(means),
        stderr=tuple(errs),
        n_samples=n_samples,
    )


# -- closed-form ensemble bounds --------------------------------------------

def _lambda_star(q: int, jbar: float) -> float:
    return 48.0 * jbar * math.sqrt((q - 1) / q)


@dataclass(frozen=True)
class TheoremFSReport:
    value: float
    terms: tuple[float, ...]  # per-genus contributions before the 1/N shell
    lam_star: float
    majorant: float
    majorant_divergence_time: float
    g_max: int


def _majorant_divergence_time(q: int, jbar: float) -> float:
    c = 6144.0 * math.e**4 * (q - 1) ** 2
    lam = _lambda_star(q, jbar)

    def f(t: float) -> float:
        return c * (jbar * t) ** 2 * _exp(lam * t) - 1.0

    hi = 1e-6
    while f(hi) < 0.0:
        hi *= 2.0
    lo = hi / 2.0 if hi > 1e-6 else 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def theoremFS_series(
    n: int, q: int, jbar: float, t: float, g_max: int
) -> TheoremFSReport:
    """Genus series bound on E[C_ij(t)^2] for complete q-local ensembles.

    value = (e^(lam t)/n) sum_g g! x^g with
    x = 6144 e^4 (q-1)^3 / (q n) (J t)^2 e^(lam t); the geometric majorant
    replaces g! x^g by the n-independent ratio 6144 e^4 (q-1)^2 (J t)^2
    e^(lam t) and carries a leading factor q.
    """
    if not 0 <= g_max <= n - 1:
        raise GenusOutOfRange(f"g_max {g_max} outside 0..{n - 1}")
    lam = _lambda_star(q, jbar)
    elam = _exp(lam * t)
    x = 6144.0 * math.e**4 * (q - 1) ** 3 / (q * n) * (jbar * t) ** 2 * elam
    terms = [1.0]
    for g in range(1, g_max + 1):
        terms.append(terms[-1] * g * x)
    value = elam / n * math.fsum(terms)
    ratio = 6144.0 * math.e**4 * (q - 1) ** 2 * (jbar * t) ** 2 * elam
    majorant = q * elam / n / (1.0 - ratio) if ratio < 1.0 else math.inf
    return TheoremFSReport(
        value=value,
        terms=tuple(terms),
        lam_star=lam,
        majorant=majorant,
        majorant_divergence_time=_majorant_divergence_time(q, jbar),
        g_max=g_max,
    )


def syk_genus0_bound(n: int, q: int, jbar: float, t: float) -> float:
    """Leading 1/N bound (1/n) cosh(2 sqrt(2(q-1)/q) J t) for even q > 2."""
    if q <= 2 or q % 2 != 0:
        raise BadQ(f"need even q > 2, got {q}")
    return _cosh(2.0 * math.sqrt(2.0 * (q - 1) / q) * jbar * t) / n


def syk_largeq_exact(n: int, jbar: float, t: float) -> float:
    """Known large-q answer (1/n) cosh(2 J t) for overlay comparison."""
    return _cosh(2.0 * jbar * t) / n


def syk_rate_ratio(q: int) -> float:
    """Bound growth rate over its own q -> infinity asymptote.

    The asymptote 2 sqrt(2) J exceeds the exact large-q rate 2 J by
    sqrt(2); this ratio isolates the finite-q part and tends to 1.
    """
    return math.sqrt((q - 1) / q)


def sqrtlogn_bound(n: int, q: int, jbar: float, t: float) -> float:
    """Two-term scrambling bound whose crossing time grows ~ sqrt(log n)."""
    if q < 2:
        raise InvalidParams(f"need q >= 2, got {q}")
    gamma = (q - 1) / q
    first = (_cosh(4.0 * math.sqrt(gamma) * jbar * t) - 1.0) / n
    u = gamma * (4.0 * jbar * t) ** 2
    eu = _exp(u)
    second = 2.0 * (q - 1) * (math.e - 1.0) / n**2 * (eu - 1.0) * u * eu
    return first + second


# -- scrambling time --------------------------------------------------------

@dataclass(frozen=True)
class ScramblingVerdict:
    t_star: float | None
    verdict: str  # "crossed" | "open"
    delta: float
    scanned: tuple[float, float]


def scrambling_time(
    source,
    delta: float,
    mode: str = "bound_crossing",
    t_max: float = 1e6,
    tol: float = 1e-8,
) -> ScramblingVerdict:
    """First time every pair is delta-scrambled, or a certified lower bound.

    exact_curve: source is one BoundCurve per pair on a shared grid; the
    crossing of min-over-pairs running-max against delta is reported at
    grid resolution.  bound_crossing: source is a callable bound on
    E[C^2]; its crossing of delta^2 is a lower bound on the scrambling
    time (Markov: P[C^2 > delta^2] <= E[C^2]/delta^2), bisected to tol.
    An un-crossed scan returns an open verdict rather than raising.
    """
    if not 0.0 < delta < 1.0:
        raise InvalidParams(f"delta must lie in (0,1), got {delta}")
    if mode == "exact_curve":
        curves = [source] if isinstance(source, BoundCurve) else list(source)
        grid = curves[0].times
        if any(c.times != grid for c in curves):
            raise InvalidParams("per-pair curves must share one time grid")
        running = [0.0] * len(curves)
        for k, t in enumerate(grid):
            for c_idx, curve in enumerate(curves):
                running[c_idx] = max(running[c_idx], curve.values[k])
            if min(running) >= delta:
                return ScramblingVerdict(
                    t_star=t, verdict="crossed", delta=delta,
                    scanned=(grid[0], grid[-1]),
                )
        return ScramblingVerdict(
            t_star=None, verdict="open", delta=delta,
            scanned=(grid[0], grid[-1]),
        )
    if mode != "bound_crossing":
        raise InvalidParams(f"unknown mode {mode!r}")
    target = delta * delta
    if source(0.0) >= target:
        return ScramblingVerdict(
            t_star=0.0, verdict="crossed", delta=delta, scanned=(0.0, 0.0)
        )
    hi = min(1e-6, t_max)
    while source(hi) < target:
        hi *= 2.0
        if hi > t_max:
            return ScramblingVerdict(
                t_star=None, verdict="open", delta=delta,
                scanned=(0.0, t_max),
            )
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if source(mid) < target:
            lo = mid
        else:
            hi = mid
    return ScramblingVerdict(
        t_star=0.5 * (lo + hi), verdict="crossed", delta=delta,
        scanned=(0.0, hi),
    )
