"""Counting creeping sequences of abstract factors by branch number.

A creeping sequence of l distinct abstract factors is an arrival history:
the k-th factor attaches to the root i or to any earlier factor, so there
are l! histories in total.  Histories are counted up to isomorphism via a
canonical rooted encoding (arrival index plus sorted child encodings); the
branch number b is the count of degree-1 vertices other than i, i.e. the
childless factors.

The same counts fall out of the closed-form generating function

    A(t, x) = (x e^t - x e^{tx}) / (e^{tx} - x e^t)

whose x^b t^l / l! coefficient is the census entry; the series route is
evaluated with exact rationals so the cross-check is integer-exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from itertools import product

from .errors import InvalidParams, TooLarge

__all__ = ["nbl", "branch_census"]

_BRUTE_CAP = 5
_SERIES_CAP = 12


@lru_cache(maxsize=None)
def branch_census(ell: int) -> dict[int, int]:
    """Map b -> number of length-l creeping sequence classes with b branches."""
    if ell < 1:
        raise InvalidParams(f"need l >= 1, got {ell}")
    if ell > _BRUTE_CAP:
        raise TooLarge(f"brute-force census capped at l <= {_BRUTE_CAP}")
    seen: set = set()
    census: dict[int, int] = {}
    # parent[k] = -1 for the root, else an earlier factor's arrival index
    for parents in product(*(range(-1, k) for k in range(ell))):
        children: list[list[int]] = [[] for _ in range(ell)]
        roots: list[int] = []
        for k, p in enumerate(parents):
            (roots if p == -1 else children[p]).append(k)

        def encode(v: int) -> tuple:
            return (v, tuple(sorted(encode(c) for c in children[v])))

        key = tuple(sorted(encode(r) for r in roots))
        if key in seen:
            continue
        seen.add(key)
        b = sum(1 for k in range(ell) if not children[k])
        census[b] = census.get(b, 0) + 1
    assert sum(census.values()) == math.factorial(ell)
    return dict(sorted(census.items()))


@lru_cache(maxsize=None)
def _series_coefficients(order: int) -> tuple[tuple[Fraction, ...], ...]:
    """Taylor table A[l][b] of the branch generating function.

    Bivariate series in (t, x), truncated at degree ``order`` in each;
    the denominator's t^0 part is 1 - x, inverted as a geometric series in
    x, then standard power-series division in t.
    """
    L = order

    def zero() -> list[Fraction]:
        return [Fraction(0)] * (L + 1)

    def xmul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
        out = zero()
        for i, ai in enumerate(a):
            if not ai:
                continue
            for j in range(L + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return out

    num = [zero() for _ in range(L + 1)]
    den = [zero() for _ in range(L + 1)]
    for n in range(L + 1):
        inv = Fraction(1, math.factorial(n))
        # numerator: x e^t - x e^{tx}
        if 1 <= L:
            num[n][1] += inv
        if n + 1 <= L:
            num[n][n + 1] -= inv
        # denominator: e^{tx} - x e^t
        if n <= L:
            den[n][n] += inv
        if 1 <= L:
            den[n][1] -= inv
    inv0 = [Fraction(1)] * (L + 1)  # 1/(1-x) truncated
    coeffs: list[list[Fraction]] = []
    for n in range(L + 1):
        acc = list(num[n])
        for k in range(1, n + 1):
            prod_k = xmul(den[k], coeffs[n - k])
            for b in range(L + 1):
                acc[b] -= prod_k[b]
        coeffs.append(xmul(inv0, acc))
    return tuple(tuple(row) for row in coeffs)


def _nbl_series(b: int, ell: int) -> int:
    table = _series_coefficients(_SERIES_CAP)
    value = table[ell][b] * math.factorial(ell)
    assert value.denominator == 1
    return int(value)


def nbl(b: int, ell: int, method: str = "generating_function") -> int:
    """Census entry: creeping sequence classes of length l with b branches."""
    if ell < 1:
        raise InvalidParams(f"need l >= 1, got {ell}")
    if b < 1 or b > ell:
        return 0
    if method == "bruteforce":
        return branch_census(ell).get(b, 0)
    if method == "generating_function":
        if ell > _SERIES_CAP:
            raise TooLarge(f"series route capped at l <= {_SERIES_CAP}")
        return _nbl_series(b, ell)
    raise InvalidParams(f"unknown method {method!r}")
