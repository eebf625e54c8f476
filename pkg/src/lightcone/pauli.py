"""Pauli-string algebra over qubit sites.

Strings are stored as per-site labels 0..3 = I, X, Y, Z.  Two strings
either commute or anticommute; products carry a power of i tracked mod 4.
The normalized trace inner product makes the strings an orthonormal basis,
so operators live in a real coefficient space.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "PauliString",
    "string_product",
    "strings_commute",
    "commutator_term",
    "pauli_dense",
    "dense_to_pauli_tensor",
]

LABELS = "IXYZ"

# _MUL[a][b] = (c, p) with sigma_a sigma_b = i^p sigma_c
_MUL = (
    ((0, 0), (1, 0), (2, 0), (3, 0)),
    ((1, 0), (0, 0), (3, 1), (2, 3)),
    ((2, 0), (3, 3), (0, 0), (1, 1)),
    ((3, 0), (2, 1), (1, 3), (0, 0)),
)

_SIGMA = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


@dataclass(frozen=True)
class PauliString:
    """Tensor product of single-site Paulis, one label per site."""

    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "labels", tuple(int(a) for a in self.labels))
        if any(a not in (0, 1, 2, 3) for a in self.labels):
            raise ValueError("labels must be 0..3 (I, X, Y, Z)")

    @classmethod
    def from_str(cls, text: str) -> "PauliString":
        return cls(labels=tuple(LABELS.index(ch) for ch in text))

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(labels=(0,) * n)

    @classmethod
    def single(cls, n: int, site: int, label: str | int) -> "PauliString":
        a = LABELS.index(label) if isinstance(label, str) else int(label)
        labels = [0] * n
        labels[site] = a
        return cls(labels=tuple(labels))

    @property
    def n_sites(self) -> int:
        return len(self.labels)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(k for k, a in enumerate(self.labels) if a != 0)

    @property
    def is_identity(self) -> bool:
        return all(a == 0 for a in self.labels)

    def __str__(self) -> str:
        return "".join(LABELS[a] for a in self.labels)


def string_product(s1: PauliString, s2: PauliString) -> tuple[int, PauliString]:
    """(p, s) with s1*s2 = i^p * s; p taken mod 4."""
    phase = 0
    out = []
    for a, b in zip(s1.labels, s2.labels):
        c, p = _MUL[a][b]
        out.append(c)
        phase += p
    return phase % 4, PauliString(labels=tuple(out))


def strings_commute(s1: PauliString, s2: PauliString) -> bool:
    clashes = sum(
        1 for a, b in zip(s1.labels, s2.labels) if a != 0 and b != 0 and a != b
    )
    return clashes % 2 == 0


def commutator_term(s1: PauliString, s2: PauliString) -> tuple[float, PauliString] | None:
    """i[s1, s2] = coeff * s, or None when the strings commute.

    Anticommuting strings give [s1,s2] = 2 s1 s2 with an odd i-power, so
    the coefficient is always +/-2.
    """
    if strings_commute(s1, s2):
        return None
    p, s = string_product(s1, s2)
    coeff = 2.0 if (p + 1) % 4 == 0 else -2.0
    return coeff, s


def pauli_dense(s: PauliString) -> np.ndarray:
    out = np.array([[1.0 + 0.0j]])
    for a in s.labels:
        out = np.kron(out, _SIGMA[a])
    return out


@lru_cache(maxsize=1)
def _site_transform() -> np.ndarray:
    # W[a, 2*i + j] = sigma_a[j, i]: contracting a (2,2) site block with W
    # over the pair index computes tr(sigma_a . block)
    W = np.empty((4, 4), dtype=complex)
    for a in range(4):
        for i in range(2):
            for j in range(2):
                W[a, 2 * i + j] = _SIGMA[a][j, i]
    return W


def dense_to_pauli_tensor(A: np.ndarray) -> np.ndarray:
    """Coefficients of a 2^n matrix in the Pauli basis, shape (4,)*n.

    c[a_1..a_n] = tr((sigma_a1 x ... x sigma_an) A) / 2^n.  The imaginary
    parts are returned as-is; Hermitian input gives real coefficients.
    """
    dim = A.shape[0]
    n = dim.bit_length() - 1
    if A.shape != (dim, dim) or 2**n != dim:
        raise ValueError("matrix must be square with power-of-two dimension")
    # index layout (i_1..i_n, j_1..j_n) -> (i_1, j_1, i_2, j_2, ...)
    T = A.reshape((2,) * (2 * n))
    order = [x for k in range(n) for x in (k, n + k)]
    T = T.transpose(order).reshape((4,) * n)
    W = _site_transform()
    for k in range(n):
        T = np.moveaxis(np.tensordot(W, T, axes=([1], [k])), 0, k)
    return T / dim
