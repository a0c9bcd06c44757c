"""Kloosterman sums over GF(2^m).

K(a) = sum over nonzero x of (-1)^Tr(a*x + 1/x), an integer. `kloosterman`
evaluates one point by direct summation in O(q); `spectrum` evaluates all
of F* at once with a Walsh-Hadamard transform in O(q log q) and must agree
with the pointwise sum everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import DomainError, FieldCtx, UNDEFINED_ARGUMENT


def kloosterman(ctx: FieldCtx, a: int) -> int:
    """K(a) by direct summation over the q-1 nonzero x."""
    if a == 0:
        raise DomainError(UNDEFINED_ARGUMENT, "K(0) is undefined; the sum needs a != 0")
    t = ctx.tables
    vals = t.mul_row(a)[1:] ^ t.inv_table[1:]
    ones = int(t.trace_bits[vals].sum())
    return (ctx.q - 1) - 2 * ones


@dataclass(frozen=True)
class Spectrum:
    """K(a) for every a in F*, indexed by element value.

    `values[0]` is filled but meaningless; indexing the spectrum at 0
    raises, matching the pointwise operation.
    """

    m: int
    poly: int
    values: np.ndarray

    def __getitem__(self, a: int) -> int:
        if a == 0:
            raise DomainError(UNDEFINED_ARGUMENT, "K(0) is undefined")
        return int(self.values[a])

    def total(self) -> int:
        """Sum of K(a) over F* (equals 1 by character orthogonality)."""
        return int(self.values[1:].sum())


def spectrum(ctx: FieldCtx) -> Spectrum:
    """All Kloosterman values via one Walsh-Hadamard transform.

    Build h[x] = (-1)^Tr(1/x) with h[0] = +1, transform, and read
    K(a) = H[T*a] - 1 where T is the context's trace pairing matrix
    (so that Tr(a*x) equals the bit dot product of T*a with x).
    """
    t = ctx.tables
    h = 1 - 2 * t.trace_bits[t.inv_table].astype(np.int64)
    _wht_inplace(h)
    return Spectrum(ctx.m, ctx.poly, h[t.dual_index] - 1)


def _wht_inplace(v: np.ndarray) -> None:
    # int64 accumulation: entries stay below 2^m * 1 in magnitude, exact.
    n = v.size
    h = 1
    while h < n:
        w = v.reshape(-1, 2 * h)
        lo = w[:, :h].copy()
        hi = w[:, h:]
        w[:, :h] = lo + hi
        w[:, h:] = lo - hi
        h *= 2


def spectrum_rows(spec: Spectrum):
    """(a_hex, K) rows in ascending element order, for CSV/JSON output."""
    return [(f"{a:#x}", int(spec.values[a])) for a in range(1, spec.values.size)]
