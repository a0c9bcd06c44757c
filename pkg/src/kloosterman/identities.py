"""Kloosterman-sum identities: catalog, parameterized families, verification.

An Identity asserts K(lhs(v)) = K(rhs(v)) for every admissible point v of
the field. Verification is exhaustive: every point is visited, points
where an exclusion expression vanishes, where either side evaluates to 0
(K is undefined there), or where evaluation itself is undefined are
skipped and accounted for, and disagreements are reported as
counterexamples. Equality of K values is checked against a precomputed
spectrum, so one verification pass costs O(q * |expression|).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .dyadic import DyadicRational, as_dyadic
from .expr import (
    Add,
    Const,
    Div,
    Expr,
    Mul,
    ONE,
    Pow,
    Var,
    evaluate_all,
    free_variable,
    parse,
    to_text,
)
from .expr import ParseError
from .field import FieldCtx
from .ksum import Spectrum, spectrum

SKIP_EXCLUSION_ZERO = "exclusion-zero"
SKIP_K_ARG_ZERO = "k-arg-zero"
SKIP_DOMAIN_ERROR = "domain-error"

DEFAULT_COUNTEREXAMPLE_CAP = 10


@dataclass(frozen=True)
class Identity:
    """A named pair of expressions in one variable plus its domain.

    `exclusions` are expressions that must evaluate nonzero for a point to
    be admissible; `exclude_values` removes 0 and/or 1 from the domain
    outright (F* vs F**).
    """

    name: str
    var: str
    lhs: Expr
    rhs: Expr
    exclusions: tuple[Expr, ...] = ()
    exclude_values: frozenset[int] = frozenset()

    def text(self) -> str:
        parts = [f"{self.name} : {self.var} : {to_text(self.lhs)} == {to_text(self.rhs)}"]
        if self.exclusions:
            parts.append("EXCLUDE " + ", ".join(to_text(e) for e in self.exclusions))
        if self.exclude_values:
            parts.append("NOTVALUES " + ",".join(str(v) for v in sorted(self.exclude_values)))
        return " ; ".join(parts)


@dataclass
class VerificationReport:
    """Outcome of one exhaustive verification run."""

    name: str
    m: int
    poly: int
    checked: int
    skipped: dict[str, int]
    counterexamples: list[dict]
    total_counterexamples: int = 0
    excluded_values: int = 0

    def __post_init__(self):
        if not self.total_counterexamples:
            self.total_counterexamples = len(self.counterexamples)

    @property
    def passed(self) -> bool:
        return self.total_counterexamples == 0

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "m": self.m,
            "poly_hex": f"{self.poly:#x}",
            "checked": self.checked,
            "skipped": dict(self.skipped),
            "counterexamples": self.counterexamples,
            "total_counterexamples": self.total_counterexamples,
            "passed": self.passed,
        }


# ---- the builtin catalog --------------------------------------------------------

_CATALOG_SPECS = [
    # (name, var, lhs, rhs, exclusions, removed values)
    ("HZ-I", "a", "a^3*(a+1)", "a*(a+1)^3", (), (0, 1)),
    ("HZ-II", "a", "a^5*(a+1)", "a*(a+1)^5", (), (0, 1)),
    ("HX", "a", "a^8*(a^4+a)", "(a+1)^8*(a^4+a)", (), (0, 1)),
    ("SKH", "a", "a/(a+1)^4", "a^3/(a+1)^4", (), (0, 1)),
    ("Cor1-1", "c", "c^6*(c^2+c+1)/(c+1)^4", "c^2*(c^2+c+1)^3/(c+1)^4", ("(c+1)^4",), ()),
    ("Cor1-2", "c", "c^9*(c+1)^3/(c^8+c^4+1)", "c^3*(c+1)^9/(c^8+c^4+1)", ("c^8+c^4+1",), ()),
    ("Cor1-3", "c", "(c+1)^8*(c^4+c)", "c^3*(c^3+1)^3", (), ()),
    ("Cor1-4", "c", "(c^11+c^3)*(c^5+1)", "c*(c^5+1)^3", (), ()),
    ("Cor1-5", "c", "(c+1)^20*(c^8+c)", "(c+1)^4*(c^8+c)^3", (), ()),
    ("Cor2", "b", "b^3*(b^3+b+1)^3/(1+b)^4", "b^9*(b^3+b+1)/(1+b)^4", ("(1+b)^4",), ()),
    (
        "Cor3",
        "b",
        "(b^3+b^2+1)*(b^3+b^2+b)^3/(1+b)^4",
        "(b^3+b^2+1)^3*(b^3+b^2+b)/(1+b)^4",
        ("(1+b)^4",),
        (),
    ),
    (
        "Cor5",
        "b",
        "(b^3+b^2)*(b^3+b+1)^3/(b^8+b^4+1)",
        "(b^3+b^2)^3*(b^3+b+1)/(b^8+b^4+1)",
        ("b^8+b^4+1",),
        (),
    ),
]


def builtin_catalog() -> list[Identity]:
    """Every identity shipped with the library, in a fixed order."""
    out = []
    for name, var, lhs, rhs, excl, removed in _CATALOG_SPECS:
        out.append(
            Identity(
                name=name,
                var=var,
                lhs=parse(lhs),
                rhs=parse(rhs),
                exclusions=tuple(parse(e) for e in excl),
                exclude_values=frozenset(removed),
            )
        )
    return out


def catalog_entry(name: str) -> Identity:
    for ident in builtin_catalog():
        if ident.name == name:
            return ident
    raise KeyError(f"no catalog identity named {name!r}")


# ---- parameterized families ------------------------------------------------------


def _pow(var: Var, exp) -> Expr:
    return Pow(var, as_dyadic(exp))


def family_note_thm4(n) -> Identity:
    """One-parameter family in c with sides built from c^(n+1), c^n and c^(4n)."""
    n = as_dyadic(n)
    c = Var("c")
    first = Add(_pow(c, n + 1), _pow(c, n))
    second = Add(_pow(c, n + 1), ONE)
    den = Add(_pow(c, 4 * n), ONE)
    return Identity(
        name=f"thm4(n={n})",
        var="c",
        lhs=Div(Mul(Pow(first, DyadicRational(3)), second), den),
        rhs=Div(Mul(first, Pow(second, DyadicRational(3))), den),
        exclusions=(den,),
    )


def family_thm5(n, k) -> Identity:
    """Two-parameter family in b built from b^(n+2), b^n, b^k and b^(4n)."""
    n, k = as_dyadic(n), as_dyadic(k)
    b = Var("b")
    first = Add(Add(_pow(b, n + 2), _pow(b, k)), ONE)
    second = Add(Add(_pow(b, n + 2), _pow(b, n)), _pow(b, k))
    den = Add(_pow(b, 4 * n), ONE)
    return Identity(
        name=f"thm5(n={n},k={k})",
        var="b",
        lhs=Div(Mul(first, Pow(second, DyadicRational(3))), den),
        rhs=Div(Mul(Pow(first, DyadicRational(3)), second), den),
        exclusions=(den,),
    )


def family_thm6(n) -> Identity:
    """One-parameter family in b built from b^(n+1), b^n, b^2 and b^(4n)."""
    n = as_dyadic(n)
    b = Var("b")
    first = Add(_pow(b, n + 1), _pow(b, 2))
    second = Add(Add(Add(_pow(b, n + 1), _pow(b, n)), _pow(b, 2)), ONE)
    den = Add(_pow(b, 4 * n), ONE)
    return Identity(
        name=f"thm6(n={n})",
        var="b",
        lhs=Div(Mul(first, Pow(second, DyadicRational(3))), den),
        rhs=Div(Mul(Pow(first, DyadicRational(3)), second), den),
        exclusions=(den,),
    )


# ---- verification ----------------------------------------------------------------


def verify(
    ctx: FieldCtx,
    ident: Identity,
    counterexample_cap: int = DEFAULT_COUNTEREXAMPLE_CAP,
    spec: Spectrum | None = None,
) -> VerificationReport:
    """Exhaustively check K(lhs(v)) == K(rhs(v)) over the identity's domain.

    Every point of F minus `exclude_values` is visited; no orbit or
    sampling shortcuts. Skip reasons, in precedence order per point:
    domain-error from an exclusion, exclusion-zero, domain-error from a
    side, k-arg-zero.
    """
    if spec is None:
        spec = spectrum(ctx)
    q = ctx.q

    admissible = np.ones(q, dtype=bool)
    for v in ident.exclude_values:
        if v < q:
            admissible[v] = False
    n_removed = int((~admissible).sum())

    excl_err = np.zeros(q, dtype=bool)
    excl_zero = np.zeros(q, dtype=bool)
    for ex in ident.exclusions:
        ev, ee = evaluate_all(ctx, ex)
        excl_err |= ee
        excl_zero |= ~ee & (ev == 0)

    lv, le = evaluate_all(ctx, ident.lhs)
    rv, re_ = evaluate_all(ctx, ident.rhs)

    live = admissible & ~excl_err
    skip_excl_zero = live & excl_zero
    live &= ~excl_zero
    side_err = le | re_
    skip_domain = (admissible & excl_err) | (live & side_err)
    live &= ~side_err
    skip_k_zero = live & ((lv == 0) | (rv == 0))
    checked = live & ~skip_k_zero

    kl = spec.values[lv[checked]]
    kr = spec.values[rv[checked]]
    bad = np.nonzero(kl != kr)[0]
    points = np.nonzero(checked)[0][bad]

    counterexamples = [
        {
            "v": int(v),
            "lhs": int(lv[v]),
            "rhs": int(rv[v]),
            "K_lhs": int(spec.values[lv[v]]),
            "K_rhs": int(spec.values[rv[v]]),
        }
        for v in points[:counterexample_cap]
    ]

    skipped = {
        SKIP_EXCLUSION_ZERO: int(skip_excl_zero.sum()),
        SKIP_DOMAIN_ERROR: int(skip_domain.sum()),
        SKIP_K_ARG_ZERO: int(skip_k_zero.sum()),
    }
    n_checked = int(checked.sum())
    assert n_checked + sum(skipped.values()) + n_removed == q

    return VerificationReport(
        name=ident.name,
        m=ctx.m,
        poly=ctx.poly,
        checked=n_checked,
        skipped=skipped,
        counterexamples=counterexamples,
        total_counterexamples=len(points),
        excluded_values=n_removed,
    )


def verify_theorem2(
    ctx: FieldCtx,
    counterexample_cap: int = DEFAULT_COUNTEREXAMPLE_CAP,
    spec: Spectrum | None = None,
) -> VerificationReport:
    """Check K(k1*k2) == K(k1*k2 + k2) over all q^2 pairs (b, c).

    k1 = b^2 + c + 1 and k2 = b^2 + b + c + sqrt(c); pairs with
    k1*k2 = 0 are skipped (K is undefined at 0).
    """
    if spec is None:
        spec = spectrum(ctx)
    t = ctx.tables
    q = ctx.q

    checked = 0
    skipped = 0
    counterexamples: list[dict] = []
    total_bad = 0
    c_vec = t.elems
    sqrt_c = t.sqrt_table
    for b in range(q):
        b2 = ctx.mul(b, b)
        k1 = (b2 ^ 1) ^ c_vec
        k2 = (b2 ^ b) ^ c_vec ^ sqrt_c
        prod = t.vec_mul(k1, k2)
        mask = prod != 0
        shifted = prod ^ k2
        # k1*k2 != 0 forces k1+1 != 0, hence the shifted argument is nonzero.
        assert (shifted[mask] != 0).all()
        kl = spec.values[prod]
        kr = spec.values[shifted]
        bad = mask & (kl != kr)
        checked += int(mask.sum())
        skipped += int(q - mask.sum())
        nbad = int(bad.sum())
        total_bad += nbad
        if nbad and len(counterexamples) < counterexample_cap:
            for c in np.nonzero(bad)[0]:
                if len(counterexamples) >= counterexample_cap:
                    break
                counterexamples.append(
                    {
                        "b": int(b),
                        "c": int(c),
                        "k1k2": int(prod[c]),
                        "k1k2_plus_k2": int(shifted[c]),
                        "K_lhs": int(kl[c]),
                        "K_rhs": int(kr[c]),
                    }
                )

    return VerificationReport(
        name="theorem2",
        m=ctx.m,
        poly=ctx.poly,
        checked=checked,
        skipped={SKIP_K_ARG_ZERO: skipped},
        counterexamples=counterexamples,
        total_counterexamples=total_bad,
    )


# ---- the one-per-line identity text format ---------------------------------------


def parse_identity(line: str) -> Identity:
    """Parse `NAME : VAR : LHS == RHS [; EXCLUDE e, e...] [; NOTVALUES 0,1]`."""
    segments = [s.strip() for s in line.split(";")]
    head = segments[0].split(":")
    if len(head) != 3:
        raise ParseError("expected NAME : VAR : LHS == RHS", 0)
    name, var = head[0].strip(), head[1].strip()
    if len(var) != 1 or not var.isalpha():
        raise ParseError(f"variable must be a single letter, got {var!r}", 0)
    sides = head[2].split("==")
    if len(sides) != 2:
        raise ParseError("expected exactly one '==' between the sides", 0)
    lhs, rhs = parse(sides[0]), parse(sides[1])
    exclusions: tuple[Expr, ...] = ()
    exclude_values: frozenset[int] = frozenset()
    for seg in segments[1:]:
        if seg.upper().startswith("EXCLUDE"):
            exclusions = tuple(parse(p) for p in seg[len("EXCLUDE") :].split(","))
        elif seg.upper().startswith("NOTVALUES"):
            vals = set()
            for p in seg[len("NOTVALUES") :].split(","):
                v = int(p.strip())
                if v not in (0, 1):
                    raise ParseError(f"NOTVALUES entries must be 0 or 1, got {v}", 0)
                vals.add(v)
            exclude_values = frozenset(vals)
        elif seg:
            raise ParseError(f"unknown clause {seg!r}", 0)
    for e in (lhs, rhs, *exclusions):
        fv = free_variable(e)
        if fv is not None and fv != var:
            raise ParseError(f"expression uses {fv!r} but the variable is {var!r}", 0)
    return Identity(
        name=name,
        var=var,
        lhs=lhs,
        rhs=rhs,
        exclusions=exclusions,
        exclude_values=exclude_values,
    )
