"""Exact commutator-norm correlators from string-space evolution.

C_ij(t) measures how much of the evolved operator A_i(t) has developed
support on site j:

    C_ij(t) = sqrt( (A_i(t)| P_j |A_i(t)) / (A_i|A_i) )

where P_j keeps Pauli strings acting non-trivially at j.  For Majorana
operators the projector keeps basis elements with a nonvanishing
anticommutator {B_S, psi_j}, which selects subsets S with
|S| - [j in S] even.  The qubit variant hatC additionally maximizes the
normalized commutator norm over the choice of single-site probe.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .curves import BoundCurve
from .errors import BadInitialOperator, BasisMismatch, InvalidParams
from .liouville import (
    HamiltonianTerm,
    OperatorVector,
    _terms_kind,
    evolve_operator,
    inner,
    norm,
    pauli_commutator,
    single_site_pauli,
)

__all__ = [
    "projector_apply",
    "projected_weight",
    "c_ij_exact",
    "hatc_ij_exact",
]


def _keeps(kind: str, key, j: int) -> bool:
    if kind == "pauli":
        return key.labels[j] != 0
    return (len(key) - (1 if j in key else 0)) % 2 == 0


def projector_apply(o: OperatorVector, j: int) -> OperatorVector:
    """P_j O: the component of O acting non-trivially on site/mode j."""
    if o.kind == "pauli" and not 0 <= j < o.n:
        raise InvalidParams(f"site {j} outside 0..{o.n - 1}")
    if o.kind == "majorana" and not 1 <= j <= o.n:
        raise InvalidParams(f"mode {j} outside 1..{o.n}")
    kept = {k: c for k, c in o.terms.items() if _keeps(o.kind, k, j)}
    return OperatorVector(
        kind=o.kind, n=o.n, terms=kept, prune_error=o.prune_error
    )


def projected_weight(o: OperatorVector, j: int) -> float:
    """(O| P_j |O) without materializing the projected vector."""
    if o.kind == "pauli" and not 0 <= j < o.n:
        raise InvalidParams(f"site {j} outside 0..{o.n - 1}")
    if o.kind == "majorana" and not 1 <= j <= o.n:
        raise InvalidParams(f"mode {j} outside 1..{o.n}")
    return sum(c * c for k, c in o.terms.items() if _keeps(o.kind, k, j))


def _validate_initial(a: OperatorVector, i: int) -> None:
    if not a.terms:
        raise BadInitialOperator("initial operator is zero")
    if a.kind == "pauli":
        for s in a.terms:
            if s.is_identity:
                raise BadInitialOperator("initial operator must be traceless")
            if s.support != (i,):
                raise BadInitialOperator(
                    f"support {s.support} is not exactly site {i}"
                )
    else:
        for key in a.terms:
            if key != (i,):
                raise BadInitialOperator(
                    f"majorana initial operator must be a multiple of mode {i}"
                )


def c_ij_exact(
    terms: Sequence[HamiltonianTerm],
    i: int,
    j: int,
    a_i: OperatorVector,
    times: Sequence[float],
    method: str = "dense",
    tol: float = 1e-10,
) -> BoundCurve:
    """Exact C_ij(t) on a time grid."""
    _validate_initial(a_i, i)
    denom = inner(a_i, a_i)
    values = []
    for t in times:
        at = evolve_operator(terms, a_i, t, method=method, tol=tol)
        v = math.sqrt(projected_weight(at, j) / denom)
        assert v <= 1.0 + 1e-9, f"C={v} escaped [0,1]"
        values.append(min(v, 1.0))
    return BoundCurve(
        times=tuple(times), values=tuple(values), label="c_exact"
    )


def hatc_ij_exact(
    terms: Sequence[HamiltonianTerm],
    i: int,
    j: int,
    a_i: OperatorVector,
    times: Sequence[float],
    method: str = "dense",
    tol: float = 1e-10,
) -> BoundCurve:
    """Probe-optimized hatC_ij(t): sup_B |[A_i(t), B_j]| / (2|A_i||B_j|).

    The supremum over traceless single-site probes B_j = sum_a u_a T_j^a
    with |u| = 1 is the top eigenvalue of the 3x3 Gram matrix of the
    commutators with the three Pauli probes.
    """
    if a_i.kind != "pauli" or _terms_kind(terms) != "pauli":
        raise BasisMismatch("probe optimization is defined on the qubit basis")
    _validate_initial(a_i, i)
    denom = 4.0 * inner(a_i, a_i)
    probes = [single_site_pauli(a_i.n, j, lab) for lab in "XYZ"]
    values = []
    for t in times:
        at = evolve_operator(terms, a_i, t, method=method, tol=tol)
        comms = [pauli_commutator(at, p) for p in probes]
        gram = np.empty((3, 3))
        for a in range(3):
            for b in range(a, 3):
                gram[a, b] = gram[b, a] = inner(comms[a], comms[b]) / denom
        top = float(np.linalg.eigvalsh(gram)[-1])
        v = math.sqrt(max(top, 0.0))
        assert v <= 1.0 + 1e-9, f"hatC={v} escaped [0,1]"
        values.append(min(v, 1.0))
    return BoundCurve(
        times=tuple(times), values=tuple(values), label="hatc_exact"
    )
