"""Solution counting for the quartic system behind Z4-linear Goethals codes.

mu2(b, c) is the number of ORDERED 4-tuples (x, y, z, u) of pairwise
distinct field elements satisfying

    x + y + z + u                               = 1
    u^2 + xy + xz + xu + yz + yu + zu           = b^2
    x^3 + y^3 + z^3 + u^3                       = c

Three independent evaluation routes are provided: an O(q^3) brute-force
enumeration, an O(q^2) reduction through quadratic root counting, and the
closed form driven by the Kloosterman value K(k1*k2) with
k1 = b^2 + c + 1 and k2 = b^2 + b + c + sqrt(c). The closed form comes in
two variants: the corrected one, whose case split depends on the parity
of m, and a reconstructed parity-blind original that the comparator
exposes as `reconstructed-original`; the two coincide for odd m and the
original is provably wrong for even m.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import DomainError, FieldCtx
from .identities import VerificationReport
from .ksum import Spectrum, spectrum
from .tables import parity

BRUTE_GUARD_M = 10
SWEEP_GUARD_M = 8

STATUS_OK = "ok"
STATUS_NOT_APPLICABLE = "not-applicable"
STATUS_INCONSISTENT = "inconsistent"


class CostGuardError(RuntimeError):
    """Refusing a deliberately expensive run without an explicit override."""


def _check_guard(m: int, guard: int, force: bool, what: str) -> None:
    if m > guard and not force:
        raise CostGuardError(
            f"{what} at m={m} exceeds the m<={guard} cost guard; pass force=True"
        )


@dataclass(frozen=True)
class KPair:
    """The derived parameters k1 = b^2+c+1 and k2 = b^2+b+c+sqrt(c)."""

    k1: int
    k2: int


def k_pair(ctx: FieldCtx, b: int, c: int) -> KPair:
    b2 = ctx.mul(b, b)
    return KPair(k1=b2 ^ c ^ 1, k2=b2 ^ b ^ c ^ ctx.sqrt(c))


# ---- counting routes --------------------------------------------------------------


def mu2_bruteforce(ctx: FieldCtx, b: int, c: int, force: bool = False) -> int:
    """Count solutions by enumerating all (x, y, z) with u forced to 1+x+y+z.

    O(q^3); guarded above m=10 unless forced.
    """
    _check_guard(ctx.m, BRUTE_GUARD_M, force, "brute-force enumeration")
    t = ctx.tables
    q = ctx.q
    y = np.repeat(t.elems, q)
    z = np.tile(t.elems, q)
    y_xor_z = y ^ z
    yz = t.vec_mul(y, z)
    cube_yz = t.cube_table[y] ^ t.cube_table[z]
    b2 = ctx.mul(b, b)
    total = 0
    for x in range(q):
        u = (1 ^ x) ^ y_xor_z
        distinct = (
            (y != z)
            & (x != y)
            & (x != z)
            & (u != x)
            & (u != y)
            & (u != z)
        )
        # xy + xz + xu = x(y+z+u) = x(1+x) is constant along this slice.
        eq2 = t.square_table[u] ^ ctx.mul(x, 1 ^ x) ^ yz ^ t.vec_mul(u, y_xor_z)
        eq3 = t.cube_table[x] ^ cube_yz ^ t.cube_table[u]
        total += int((distinct & (eq2 == b2) & (eq3 == c)).sum())
    return total


def mu2_fast(ctx: FieldCtx, b: int, c: int) -> int:
    """Count solutions in O(q^2) by reducing (y, z) to a quadratic.

    For each ordered (x, u): s = 1+x+u is y+z (s = 0 would force y = z, so
    skip), equation 2 pins p = yz = b^2 + u^2 + (x+u)s + xu, and equation 3
    becomes c + x^3 + u^3 = s^3 + p*s via y^3+z^3 = s^3 + p*s. When
    consistent, the ordered (y, z) are the roots of t^2 + s*t + p, kept
    only if both roots avoid {x, u}.
    """
    t = ctx.tables
    q = ctx.q
    b2 = ctx.mul(b, b)
    u_all = t.elems
    sq = t.square_table
    cube = t.cube_table
    total = 0
    for x in range(q):
        s = (1 ^ x) ^ u_all
        live = (u_all != x) & (s != 0)
        p = b2 ^ sq[u_all] ^ t.vec_mul(np.int32(x) ^ u_all, s) ^ t.scalar_mul(x, u_all)
        consistent = live & (
            (np.int32(c) ^ cube[x] ^ cube[u_all]) == (cube[s] ^ t.vec_mul(p, s))
        )
        for u in np.nonzero(consistent)[0]:
            roots = ctx.solve_quadratic(int(s[u]), int(p[u]))
            if len(roots) == 2 and x not in roots and int(u) not in roots:
                total += 2
    return total


def mu2_brute_table(ctx: FieldCtx, force: bool = False) -> np.ndarray:
    """mu2 for every (b, c) at once, by one pass over all (x, y, z) triples."""
    _check_guard(ctx.m, SWEEP_GUARD_M, force, "brute-force sweep over all (b, c)")
    t = ctx.tables
    m, q = ctx.m, ctx.q
    y = np.repeat(t.elems, q)
    z = np.tile(t.elems, q)
    y_xor_z = y ^ z
    yz = t.vec_mul(y, z)
    cube_yz = t.cube_table[y] ^ t.cube_table[z]
    counts = np.zeros(q * q, dtype=np.int64)
    for x in range(q):
        u = (1 ^ x) ^ y_xor_z
        distinct = (
            (y != z)
            & (x != y)
            & (x != z)
            & (u != x)
            & (u != y)
            & (u != z)
        )
        eq2 = t.square_table[u] ^ ctx.mul(x, 1 ^ x) ^ yz ^ t.vec_mul(u, y_xor_z)
        b = t.sqrt_table[eq2]  # b is recovered uniquely from b^2
        cval = t.cube_table[x] ^ cube_yz ^ t.cube_table[u]
        idx = (b[distinct].astype(np.int64) << m) | cval[distinct]
        counts += np.bincount(idx, minlength=q * q)
    return counts.reshape(q, q)


def mu2_fast_table(ctx: FieldCtx, force: bool = False) -> np.ndarray:
    """mu2 for every (b, c) via the quadratic reduction, one pass per b.

    For fixed (x, u) the consistent c is determined once p is known, so a
    single sweep over (x, u) bins contributions by c; root existence is the
    trace condition Tr(p/s^2) = 0 and the roots {y, z} must avoid {x, u}.
    """
    _check_guard(ctx.m, SWEEP_GUARD_M, force, "fast sweep over all (b, c)")
    t = ctx.tables
    q = ctx.q
    x = np.repeat(t.elems, q)
    u = np.tile(t.elems, q)
    s = 1 ^ x ^ u
    live = (x != u) & (s != 0)
    sq = t.square_table
    base_p = sq[u] ^ t.vec_mul(x ^ u, s) ^ t.vec_mul(x, u)
    inv_s2 = t.inv_table[sq[s]]
    tr_base = t.trace_bits[t.vec_mul(base_p, inv_s2)]
    c_base = t.cube_table[s] ^ t.cube_table[x] ^ t.cube_table[u] ^ t.vec_mul(base_p, s)
    # t0 is a root of t^2+st+p iff p == t0^2 + s*t0, i.e. b^2 == base_p ^ that.
    root_x = base_p ^ sq[x] ^ t.vec_mul(s, x)
    root_u = base_p ^ sq[u] ^ t.vec_mul(s, u)

    counts = np.zeros((q, q), dtype=np.int64)
    for b in range(q):
        b2 = ctx.mul(b, b)
        w = ctx.dual_apply(b2)
        tr_p = tr_base ^ parity(inv_s2 & w)  # Tr(p/s^2) with p = b2 ^ base_p
        ok = live & (tr_p == 0) & (root_x != b2) & (root_u != b2)
        cvals = c_base ^ t.scalar_mul(b2, s)
        counts[b] = 2 * np.bincount(cvals[ok], minlength=q)
    return counts


# ---- closed forms -----------------------------------------------------------------


@dataclass(frozen=True)
class ClosedCount:
    """Result of a closed-form evaluation.

    status is "ok" (value set), "not-applicable" (k1*k2 = 0, so the
    Kloosterman argument is outside F*), or "inconsistent" (the formula
    produced something other than a nonnegative integer; raw holds the
    exact rational, never rounded).
    """

    status: str
    value: int | None = None
    raw: str | None = None

    @property
    def applicable(self) -> bool:
        return self.status != STATUS_NOT_APPLICABLE


def _closed_value(ctx: FieldCtx, b: int, case_one: bool, k_value: int) -> int:
    sign = -1 if ctx.trace(b) else 1
    if case_one:
        return ctx.q - 8 + sign * (k_value - 3)
    return ctx.q - 2 - sign * (k_value + 3)


def _case_one_corrected(ctx: FieldCtx, c: int) -> bool:
    tr_c = ctx.trace(c)
    return tr_c == 1 if ctx.m % 2 else tr_c == 0


def mu2_closed_corrected(
    ctx: FieldCtx, b: int, c: int, spec: Spectrum | None = None
) -> ClosedCount:
    """The parity-aware closed form; exact division by 6 is a hard invariant."""
    kp = k_pair(ctx, b, c)
    prod = ctx.mul(kp.k1, kp.k2)
    if prod == 0:
        return ClosedCount(STATUS_NOT_APPLICABLE)
    k_value = spec[prod] if spec is not None else _k_point(ctx, prod)
    val = _closed_value(ctx, b, _case_one_corrected(ctx, c), k_value)
    if val % 6 or val < 0:
        raise RuntimeError(
            f"corrected closed form produced {Fraction(val, 6)} at b={b:#x}, c={c:#x}"
        )
    return ClosedCount(STATUS_OK, value=val // 6)


def mu2_closed_original(
    ctx: FieldCtx, b: int, c: int, spec: Spectrum | None = None
) -> ClosedCount:
    """The reconstructed parity-blind form: case selection by Tr(c) alone.

    Coincides with the corrected form for odd m. A result that is not a
    nonnegative integer is returned tagged inconsistent, never rounded.
    """
    kp = k_pair(ctx, b, c)
    prod = ctx.mul(kp.k1, kp.k2)
    if prod == 0:
        return ClosedCount(STATUS_NOT_APPLICABLE)
    k_value = spec[prod] if spec is not None else _k_point(ctx, prod)
    val = _closed_value(ctx, b, ctx.trace(c) == 1, k_value)
    if val % 6 or val < 0:
        return ClosedCount(STATUS_INCONSISTENT, raw=str(Fraction(val, 6)))
    return ClosedCount(STATUS_OK, value=val // 6)


def _k_point(ctx: FieldCtx, a: int) -> int:
    from .ksum import kloosterman

    return kloosterman(ctx, a)


def closed_form_tables(ctx: FieldCtx, spec: Spectrum | None = None, original: bool = False):
    """Vectorized closed form over all (b, c).

    Returns (values, applicable, inconsistent): integer counts where the
    formula yields a nonnegative multiple of 6, the k1*k2 != 0 mask, and
    the points where the (original) formula fails integrality. For the
    corrected form an inconsistency is a hard error.
    """
    if spec is None:
        spec = spectrum(ctx)
    t = ctx.tables
    q = ctx.q
    sq = t.square_table.astype(np.int32)
    k1 = (sq ^ 1)[:, None] ^ t.elems[None, :]
    k2 = (sq ^ t.elems)[:, None] ^ (t.elems ^ t.sqrt_table)[None, :]
    prod = t.vec_mul(k1.ravel(), k2.ravel()).reshape(q, q)
    applicable = prod != 0
    k_values = spec.values[prod]
    tr_b = t.trace_bits[t.elems].astype(np.int64)[:, None]
    tr_c = t.trace_bits[t.elems].astype(np.int64)[None, :]
    sign = 1 - 2 * tr_b
    if original:
        case_one = tr_c == 1
    else:
        case_one = (tr_c == 1) if ctx.m % 2 else (tr_c == 0)
    val = np.where(
        case_one, q - 8 + sign * (k_values - 3), q - 2 - sign * (k_values + 3)
    )
    inconsistent = applicable & ((val % 6 != 0) | (val < 0))
    if not original and inconsistent.any():
        b, c = np.argwhere(inconsistent)[0]
        raise RuntimeError(
            f"corrected closed form not a count at b={b:#x}, c={c:#x}: {val[b, c]}/6"
        )
    values = np.where(applicable & ~inconsistent, val // 6, 0)
    return values, applicable, inconsistent


# ---- sweeps -----------------------------------------------------------------------


def symmetry_check(
    ctx: FieldCtx,
    force: bool = False,
    counterexample_cap: int = 10,
) -> VerificationReport:
    """Exhaustively verify the parity-specific shift symmetries of mu2.

    Even m: mu2(b,c) = mu2(b+1,c) and mu2(b,c) = mu2(b,c+1) for all pairs.
    Odd m: mu2(b,c) + mu2(b+1,c) is (q-2)/3 when Tr(c)=0 and (q-8)/3 when
    Tr(c)=1; mu2(b,c) + mu2(b,c+1) is (q-2)/3 when Tr(b)=1 and (q-8)/3
    when Tr(b)=0. (The second relation is conditioned on Tr(b): shifting c
    by 1 flips Tr(c) when m is odd, so a condition on Tr(c) alone would
    assign two different constants to the same sum.)
    """
    _check_guard(ctx.m, SWEEP_GUARD_M, force, "symmetry sweep")
    table = mu2_fast_table(ctx, force=force)
    t = ctx.tables
    q = ctx.q
    flip = t.elems ^ 1
    counterexamples: list[dict] = []
    total_bad = 0

    def record(mask: np.ndarray, relation: str, got: np.ndarray, want: np.ndarray):
        nonlocal total_bad
        bad = np.argwhere(mask)
        total_bad += len(bad)
        for b, c in bad[: max(0, counterexample_cap - len(counterexamples))]:
            counterexamples.append(
                {
                    "relation": relation,
                    "b": int(b),
                    "c": int(c),
                    "got": int(got[b, c]),
                    "want": int(want[b, c]),
                }
            )

    if ctx.m % 2 == 0:
        shifted_b = table[flip]
        record(table != shifted_b, "mu2(b,c) == mu2(b+1,c)", table, shifted_b)
        shifted_c = table[:, flip]
        record(table != shifted_c, "mu2(b,c) == mu2(b,c+1)", table, shifted_c)
    else:
        tr = t.trace_bits[t.elems].astype(np.int64)
        sum_b = table + table[flip]
        want_b = np.where(tr[None, :] == 0, (q - 2) // 3, (q - 8) // 3)
        want_b = np.broadcast_to(want_b, (q, q))
        record(sum_b != want_b, "mu2(b,c) + mu2(b+1,c)", sum_b, want_b)
        sum_c = table + table[:, flip]
        want_c = np.where(tr[:, None] == 1, (q - 2) // 3, (q - 8) // 3)
        want_c = np.broadcast_to(want_c, (q, q))
        record(sum_c != want_c, "mu2(b,c) + mu2(b,c+1)", sum_c, want_c)

    return VerificationReport(
        name="mu2-symmetry",
        m=ctx.m,
        poly=ctx.poly,
        checked=2 * q * q,
        skipped={},
        counterexamples=counterexamples,
        total_counterexamples=total_bad,
    )


def bug_exhibit(
    ctx: FieldCtx,
    force: bool = False,
    counterexample_cap: int = 10,
    spec: Spectrum | None = None,
) -> VerificationReport:
    """Compare the reconstructed-original closed form against brute force.

    Counterexamples are the pairs with k1*k2 != 0 where the parity-blind
    formula disagrees with the true count or is not a nonnegative integer;
    they exist for every even m >= 4 and never for odd m.
    """
    _check_guard(ctx.m, SWEEP_GUARD_M, force, "original-vs-brute sweep")
    if spec is None:
        spec = spectrum(ctx)
    brute = mu2_brute_table(ctx, force=force)
    values, applicable, inconsistent = closed_form_tables(ctx, spec, original=True)
    mismatch = applicable & (inconsistent | (values != brute))
    bad = np.argwhere(mismatch)
    counterexamples = []
    for b, c in bad[:counterexample_cap]:
        b, c = int(b), int(c)
        original = mu2_closed_original(ctx, b, c, spec)
        counterexamples.append(
            {
                "label": "reconstructed-original",
                "b": b,
                "c": c,
                "brute": int(brute[b, c]),
                "original_status": original.status,
                "original_value": original.value,
                "original_raw": original.raw,
            }
        )
    return VerificationReport(
        name="reconstructed-original-vs-brute",
        m=ctx.m,
        poly=ctx.poly,
        checked=int(applicable.sum()),
        skipped={"not-applicable": int((~applicable).sum())},
        counterexamples=counterexamples,
        total_counterexamples=len(bad),
    )


# ---- single-point report -----------------------------------------------------------


@dataclass
class Mu2Report:
    """All counting routes evaluated at one (b, c), with agreement flags."""

    m: int
    poly: int
    b: int
    c: int
    k1: int
    k2: int
    brute: int | None
    fast: int | None
    closed_corrected: ClosedCount
    closed_original: ClosedCount

    @property
    def applicable(self) -> bool:
        return self.closed_corrected.applicable

    @property
    def agree(self) -> bool:
        counts = [v for v in (self.brute, self.fast, self.closed_corrected.value) if v is not None]
        return all(v == counts[0] for v in counts)

    @property
    def original_matches(self) -> bool | None:
        if not self.applicable:
            return None
        reference = self.fast if self.fast is not None else self.brute
        if reference is None:
            return None
        return self.closed_original.status == STATUS_OK and self.closed_original.value == reference

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "poly_hex": f"{self.poly:#x}",
            "b_hex": f"{self.b:#x}",
            "c_hex": f"{self.c:#x}",
            "k1_hex": f"{self.k1:#x}",
            "k2_hex": f"{self.k2:#x}",
            "brute": self.brute,
            "fast": self.fast,
            "closed_corrected": self.closed_corrected.value,
            "closed_original": self.closed_original.value,
            "closed_original_status": self.closed_original.status,
            "closed_original_raw": self.closed_original.raw,
            "applicable": self.applicable,
            "agree": self.agree,
            "original_matches": self.original_matches,
        }


def mu2_report(
    ctx: FieldCtx,
    b: int,
    c: int,
    with_brute: bool | None = None,
    force: bool = False,
    spec: Spectrum | None = None,
) -> Mu2Report:
    """Evaluate every route at one point; brute force only when affordable."""
    if with_brute is None:
        with_brute = ctx.m <= BRUTE_GUARD_M or force
    kp = k_pair(ctx, b, c)
    return Mu2Report(
        m=ctx.m,
        poly=ctx.poly,
        b=b,
        c=c,
        k1=kp.k1,
        k2=kp.k2,
        brute=mu2_bruteforce(ctx, b, c, force=force) if with_brute else None,
        fast=mu2_fast(ctx, b, c),
        closed_corrected=mu2_closed_corrected(ctx, b, c, spec),
        closed_original=mu2_closed_original(ctx, b, c, spec),
    )
