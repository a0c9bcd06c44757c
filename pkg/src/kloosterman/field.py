"""Arithmetic in GF(2^m) for 1 <= m <= 24.

Field elements are plain ints: bit i is the coefficient of x^i in the
polynomial basis, so values lie in [0, 2^m) and addition is XOR. The
reduction polynomial is encoded the same way with bit m set (the m=3
default x^3+x+1 is 0xB). A FieldCtx is immutable after construction and
all operations are pure functions of (ctx, inputs), so contexts can be
shared freely across threads.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

M_MAX = 24

ZERO_INVERSE = "zero-inverse"
ZERO_TO_NONPOSITIVE = "zero-to-nonpositive"
UNDEFINED_ARGUMENT = "undefined-argument"


class DomainError(ValueError):
    """An operation was applied at a point where it is undefined.

    `reason` is one of the module-level reason constants; `expr` is set by
    the expression evaluator to the offending subexpression, when known.
    """

    def __init__(self, reason: str, message: str, expr=None):
        super().__init__(message)
        self.reason = reason
        self.expr = expr


def poly_degree(poly: int) -> int:
    return poly.bit_length() - 1


def _poly_mod(a: int, b: int) -> int:
    db = poly_degree(b)
    while a and poly_degree(a) >= db:
        a ^= b << (poly_degree(a) - db)
    return a


def is_irreducible(poly: int) -> bool:
    """True iff poly has no nontrivial factor over GF(2).

    Trial division by every polynomial of degree <= deg/2; exhaustive and
    therefore trivially correct for the degrees this library supports.
    """
    deg = poly_degree(poly)
    if deg < 1:
        raise ValueError("degree-0 polynomial has no irreducibility notion")
    if deg == 1:
        return True
    if poly & 1 == 0:  # divisible by x
        return False
    if poly.bit_count() % 2 == 0:  # 1 is a root
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def default_poly(m: int) -> int:
    """Smallest irreducible polynomial of degree m, as an integer."""
    if not 1 <= m <= M_MAX:
        raise ValueError(f"m must be in 1..{M_MAX}, got {m}")
    for cand in range(1 << m, 1 << (m + 1)):
        if is_irreducible(cand):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


class FieldCtx:
    """GF(2^m) with a fixed reduction polynomial.

    Construction precomputes the trace of the basis elements, the trace
    pairing matrix T[i][j] = Tr(x^i * x^j) used to index the spectrum
    transform, and (for even m) a GF(2)-linear solver for w^2 + w = d.
    Cost is O(m^2) field operations.
    """

    def __init__(self, m: int, poly: int | None = None):
        if not 1 <= m <= M_MAX:
            raise ValueError(f"m must be in 1..{M_MAX}, got {m}")
        if poly is None:
            poly = default_poly(m)
        if poly_degree(poly) != m:
            raise ValueError(f"polynomial {poly:#x} does not have degree {m}")
        if not is_irreducible(poly):
            raise ValueError(f"polynomial {poly:#x} is reducible")
        self.m = m
        self.q = 1 << m
        self.poly = poly

        mask = 0
        for i in range(m):
            if self._trace_frobenius(1 << i):
                mask |= 1 << i
        self.trace_mask = mask

        # Trace of x^k for k up to 2m-2 gives the pairing matrix rows.
        tr_pow = []
        p = 1
        for _ in range(2 * m - 1):
            tr_pow.append((p & mask).bit_count() & 1)
            p = self.mul(p, 2)
        rows = []
        for j in range(m):
            row = 0
            for i in range(m):
                row |= tr_pow[i + j] << i
            rows.append(row)
        self.dual_rows = tuple(rows)
        if _gf2_rank(rows) != m:
            raise AssertionError("trace pairing matrix must be invertible")

        self._quad_pivots = self._artin_schreier_pivots() if m % 2 == 0 else None

    def __repr__(self) -> str:
        return f"FieldCtx(m={self.m}, poly={self.poly:#x})"

    # ---- scalar operations -------------------------------------------------

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        poly, top = self.poly, 1 << self.m
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & top:
                a ^= poly
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise DomainError(ZERO_INVERSE, "0 has no multiplicative inverse")
        return self._pow_pos(a, self.q - 2)

    def sqrt(self, a: int) -> int:
        """The unique s with s*s == a (squaring is a bijection)."""
        for _ in range(self.m - 1):
            a = self.mul(a, a)
        return a

    def _pow_pos(self, a: int, e: int) -> int:
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def pow_dyadic(self, a: int, r) -> int:
        """a raised to the dyadic rational r (square roots, then int power)."""
        if a == 0:
            if r.num <= 0:
                raise DomainError(
                    ZERO_TO_NONPOSITIVE, f"0^({r}) is undefined for exponent <= 0"
                )
            return 0
        for _ in range(r.log2_den):
            a = self.sqrt(a)
        n = r.num
        if n < 0:
            a = self.inv(a)
            n = -n
        return self._pow_pos(a, n)

    def trace(self, a: int) -> int:
        return (a & self.trace_mask).bit_count() & 1

    def _trace_frobenius(self, a: int) -> int:
        # Direct Frobenius chain, used once at construction per basis element.
        t = s = a
        for _ in range(self.m - 1):
            s = self.mul(s, s)
            t ^= s
        if t not in (0, 1):
            raise AssertionError("trace left the prime field; polynomial invalid")
        return t

    def dual_apply(self, a: int) -> int:
        """T*a over GF(2), so that Tr(a*x) == parity(popcount(dual_apply(a) & x))."""
        out = 0
        for j, row in enumerate(self.dual_rows):
            out |= ((row & a).bit_count() & 1) << j
        return out

    # ---- quadratic equations -----------------------------------------------

    def solve_quadratic(self, s: int, p: int) -> set[int]:
        """All roots of t^2 + s*t + p = 0; the empty set is a valid answer.

        For s = 0 the equation is t^2 = p with the single root sqrt(p). For
        s != 0 substitute t = s*w to reach w^2 + w = p/s^2, solvable iff the
        trace of the right side vanishes, in which case the two roots differ
        by s.
        """
        if s == 0:
            return {self.sqrt(p)}
        d = self.mul(p, self.inv(self.mul(s, s)))
        if self.trace(d):
            return set()
        w = self._half_trace(d) if self.m % 2 else self._solve_artin_schreier(d)
        r = self.mul(s, w)
        return {r, r ^ s}

    def _half_trace(self, d: int) -> int:
        # Sum of d^(4^i); for odd m this solves w^2 + w = d when Tr(d) = 0.
        acc = t = d
        for _ in range((self.m - 1) // 2):
            t = self.mul(t, t)
            t = self.mul(t, t)
            acc ^= t
        return acc

    def _artin_schreier_pivots(self):
        # Echelonized images of w -> w^2 + w on the basis, with the
        # combination of basis vectors that produced each pivot.
        pivots: dict[int, tuple[int, int]] = {}
        for i in range(self.m):
            e = 1 << i
            v = self.mul(e, e) ^ e
            comb = e
            while v:
                lead = v.bit_length() - 1
                if lead in pivots:
                    pv, pc = pivots[lead]
                    v ^= pv
                    comb ^= pc
                else:
                    pivots[lead] = (v, comb)
                    break
        return pivots

    def _solve_artin_schreier(self, d: int) -> int:
        pivots = self._quad_pivots
        w = 0
        while d:
            lead = d.bit_length() - 1
            if lead not in pivots:
                raise AssertionError("w^2+w=d unsolvable despite Tr(d)=0")
            pv, pc = pivots[lead]
            d ^= pv
            w ^= pc
        return w

    # ---- vectorized companion tables ----------------------------------------

    @cached_property
    def tables(self):
        from .tables import FieldTables

        return FieldTables(self)


def _gf2_rank(rows) -> int:
    rank = 0
    basis: list[int] = []
    for row in rows:
        for b in basis:
            row = min(row, row ^ b)
        if row:
            basis.append(row)
            basis.sort(reverse=True)
            rank += 1
    return rank
