"""Vectorized per-context element tables.

Everything here is derived from the scalar operations in `field` and is
exact integer arithmetic throughout; numpy is used only to batch the same
computation over the whole field. Tables are built lazily and cached on
first use, so cheap contexts stay cheap.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

# Parity of the popcount of every 16-bit value; elements are < 2^24 so two
# lookups cover any value this library produces.
_P16 = np.arange(1 << 16, dtype=np.uint32)
_P16 ^= _P16 >> 8
_P16 ^= _P16 >> 4
_P16 ^= _P16 >> 2
_P16 ^= _P16 >> 1
_P16 = (_P16 & 1).astype(np.uint8)


def parity(values: np.ndarray) -> np.ndarray:
    """Elementwise popcount parity of nonnegative values below 2^32."""
    v = values.astype(np.int64)
    return _P16[v & 0xFFFF] ^ _P16[(v >> 16) & 0xFFFF]


class FieldTables:
    """Whole-field lookup tables and elementwise kernels for one context."""

    def __init__(self, ctx):
        self.ctx = ctx

    def _expand_linear(self, images: list[int], dtype) -> np.ndarray:
        # f additive => the table over all elements is the XOR-expansion of
        # the images of the basis.
        arr = np.zeros(1, dtype=dtype)
        for img in images:
            arr = np.concatenate([arr, arr ^ dtype(img)])
        return arr

    @cached_property
    def elems(self) -> np.ndarray:
        return np.arange(self.ctx.q, dtype=np.int32)

    @cached_property
    def trace_bits(self) -> np.ndarray:
        ctx = self.ctx
        return self._expand_linear([ctx.trace(1 << j) for j in range(ctx.m)], np.uint8)

    @cached_property
    def sqrt_table(self) -> np.ndarray:
        ctx = self.ctx
        return self._expand_linear([ctx.sqrt(1 << j) for j in range(ctx.m)], np.int32)

    @cached_property
    def square_table(self) -> np.ndarray:
        ctx = self.ctx
        return self._expand_linear(
            [ctx.mul(1 << j, 1 << j) for j in range(ctx.m)], np.int32
        )

    @cached_property
    def dual_index(self) -> np.ndarray:
        ctx = self.ctx
        return self._expand_linear(
            [ctx.dual_apply(1 << j) for j in range(ctx.m)], np.int32
        )

    @cached_property
    def cube_table(self) -> np.ndarray:
        return self.vec_mul(self.square_table, self.elems)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """inv[x] = x^(2^m - 2); the x = 0 entry is a 0 sentinel."""
        m = self.ctx.m
        if m == 1:
            return np.array([0, 1], dtype=np.int32)
        y = self.square_table.copy()
        acc = y.copy()
        for _ in range(m - 2):
            y = self.square_table[y]
            acc = self.vec_mul(acc, y)
        acc[0] = 0
        return acc

    # ---- elementwise kernels -------------------------------------------------

    def vec_mul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise field product of two arrays of elements."""
        m, poly = self.ctx.m, self.ctx.poly
        a64 = a.astype(np.int64)
        b64 = b.astype(np.int64)
        r = np.zeros(np.broadcast(a64, b64).shape, dtype=np.int64)
        for i in range(m):
            r ^= ((a64 >> i) & 1) * (b64 << i)
        return self._reduce(r)

    def scalar_mul(self, a: int, b: np.ndarray) -> np.ndarray:
        """Field product of the scalar a with every entry of b."""
        b64 = b.astype(np.int64)
        r = np.zeros(b64.shape, dtype=np.int64)
        i = 0
        while a >> i:
            if (a >> i) & 1:
                r ^= b64 << i
            i += 1
        return self._reduce(r)

    def _reduce(self, r: np.ndarray) -> np.ndarray:
        m, poly = self.ctx.m, self.ctx.poly
        for bit in range(2 * m - 2, m - 1, -1):
            r ^= ((r >> bit) & 1) * (poly << (bit - m))
        return r.astype(np.int32)

    def mul_row(self, a: int) -> np.ndarray:
        """Table of a*x for every x, via the XOR-expansion of a's basis images."""
        ctx = self.ctx
        return self._expand_linear(
            [ctx.mul(a, 1 << j) for j in range(ctx.m)], np.int32
        )
