"""Formal group laws over the truncated coefficient rings.

Three kinds are supported:

* ``additive``: F(x, y) = x + y over plain Q,
* ``multiplicative``: F(x, y) = x + y - b*x*y over Q[b]
  (flipping the sign of b is a ring automorphism, so nothing downstream
  may depend on the sign choice),
* ``universal-rational``: the law with logarithm
  log(x) = x + m1*x^2 + m2*x^3 + ... over Q[m1, m2, ...]; here
  exp is the compositional inverse of log, computed order by order, and
  F(x, y) = exp(log(x) + log(y)).

Construction machine-checks the unit, commutativity and associativity
axioms inside the truncation window and refuses to return an invalid
law.  The formal inverse chi (with F(x, chi(x)) = 0) is precomputed so
that `fgl_inverse` is a single substitution.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .series import (
    ContextMismatch,
    RingContext,
    SubstitutionError,
    TruncatedSeries,
    substitute,
)

FGL_KINDS = ("additive", "multiplicative", "universal-rational")

COEFF_KIND_FOR = {
    "additive": "rational",
    "multiplicative": "multiplicative-beta",
    "universal-rational": "universal-rational",
}

KIND_ALIASES = {
    "additive": "additive",
    "add": "additive",
    "multiplicative": "multiplicative",
    "mult": "multiplicative",
    "universal": "universal-rational",
    "universal-rational": "universal-rational",
}


class FglConstructionError(RuntimeError):
    """An axiom residual came out nonzero: a construction bug, surfaced loudly."""


def normalize_kind(kind: str) -> str:
    try:
        return KIND_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown formal group law kind {kind!r}") from None


@dataclass(frozen=True)
class FormalGroupLaw:
    """A validated formal group law.

    ``series`` is F(x, y) in a two-variable context (x = t1, y = t2);
    ``log``/``exp`` are only present for the universal-rational kind;
    ``inverse_series`` is chi(x) in a one-variable context.
    """

    kind: str
    series: TruncatedSeries
    inverse_series: TruncatedSeries
    log: Optional[TruncatedSeries] = None
    exp: Optional[TruncatedSeries] = None

    @property
    def coeff_kind(self) -> str:
        return COEFF_KIND_FOR[self.kind]

    @property
    def max_t_order(self) -> int:
        return self.series.ctx.max_t_order

    @property
    def max_weight(self) -> int:
        return self.series.ctx.max_weight

    def context(self, n_vars: int) -> RingContext:
        """A compatible series context with the given number of variables."""
        return RingContext(n_vars, self.coeff_kind, self.max_t_order, self.max_weight)


@dataclass(frozen=True)
class AxiomReport:
    """Residual series for the group law axioms; all must be exactly zero."""

    unit_ok: bool
    comm_ok: bool
    assoc_ok: bool
    residuals: tuple

    @property
    def ok(self) -> bool:
        return self.unit_ok and self.comm_ok and self.assoc_ok


def build_fgl(kind: str, ctx: RingContext) -> FormalGroupLaw:
    """Construct and validate a formal group law at the caps of ``ctx``."""
    kind = normalize_kind(kind)
    if ctx.coeff_kind != COEFF_KIND_FOR[kind]:
        raise ContextMismatch(
            f"{kind} law needs coefficient kind {COEFF_KIND_FOR[kind]!r}, "
            f"context has {ctx.coeff_kind!r}"
        )
    if ctx.max_t_order < 2:
        raise ValueError("caps must admit degree 2 in x, y")
    ctx2 = RingContext(2, ctx.coeff_kind, ctx.max_t_order, ctx.max_weight)
    ctx1 = RingContext(1, ctx.coeff_kind, ctx.max_t_order, ctx.max_weight)
    x, y = ctx2.var(0), ctx2.var(1)
    log = exp = None
    if kind == "additive":
        F = x + y
    elif kind == "multiplicative":
        F = x + y - ctx2.lazard(1) * x * y
    else:
        log = _universal_log(ctx1)
        exp = compositional_inverse(log)
        lx = substitute(log, {0: x}, target=ctx2)
        ly = substitute(log, {0: y}, target=ctx2)
        F = substitute(exp, {0: lx + ly}, target=ctx2)
    chi = _formal_inverse(F, ctx1)
    law = FormalGroupLaw(kind=kind, series=F, inverse_series=chi, log=log, exp=exp)
    report = verify_fgl_axioms(law)
    if not report.ok:
        bad = [name for name, r in report.residuals if not r.is_zero()]
        raise FglConstructionError(f"axiom residuals nonzero for {kind}: {bad}")
    return law


def _universal_log(ctx1: RingContext) -> TruncatedSeries:
    x = ctx1.var(0)
    log = x
    for i in range(1, min(ctx1.max_t_order - 1, ctx1.max_weight) + 1):
        log = log + ctx1.lazard(i) * x ** (i + 1)
    return log


def compositional_inverse(f: TruncatedSeries) -> TruncatedSeries:
    """g with f(g(x)) = x inside the window, for f = x + higher order.

    Solved order by order: each pass removes the lowest t-order slice of
    the residual f(g) - x, which strictly raises the residual valuation.
    """
    ctx = f.ctx
    if ctx.n_vars != 1:
        raise ValueError("compositional inverse needs a one-variable series")
    x = ctx.var(0)
    if f.t_slice(1) != x or f.has_t_constant_term():
        raise ValueError("series must start with x")
    g = x
    while True:
        residual = substitute(f, {0: g}) - x
        if residual.is_zero():
            return g
        v = residual.min_t_order()
        g = g - residual.t_slice(v)


def _formal_inverse(F: TruncatedSeries, ctx1: RingContext) -> TruncatedSeries:
    """chi(x) with F(x, chi(x)) = 0 inside the window, order by order."""
    x = ctx1.var(0)
    chi = -x
    while True:
        residual = substitute(F, {0: x, 1: chi}, target=ctx1)
        if residual.is_zero():
            return chi
        v = residual.min_t_order()
        chi = chi - residual.t_slice(v)


def verify_fgl_axioms(law: FormalGroupLaw) -> AxiomReport:
    """Residuals for unit, commutativity and associativity inside the caps."""
    F = law.series
    ctx2 = F.ctx
    x, y = ctx2.var(0), ctx2.var(1)
    unit_x = substitute(F, {1: ctx2.zero()}, target=ctx2) - x
    unit_y = substitute(F, {0: ctx2.zero()}, target=ctx2) - y
    comm = F - substitute(F, {0: y, 1: x}, target=ctx2)
    ctx3 = RingContext(3, ctx2.coeff_kind, ctx2.max_t_order, ctx2.max_weight)
    x3, y3, z3 = ctx3.var(0), ctx3.var(1), ctx3.var(2)
    f_xy = substitute(F, {0: x3, 1: y3}, target=ctx3)
    f_yz = substitute(F, {0: y3, 1: z3}, target=ctx3)
    assoc = substitute(F, {0: f_xy, 1: z3}, target=ctx3) - substitute(
        F, {0: x3, 1: f_yz}, target=ctx3
    )
    return AxiomReport(
        unit_ok=unit_x.is_zero() and unit_y.is_zero(),
        comm_ok=comm.is_zero(),
        assoc_ok=assoc.is_zero(),
        residuals=(
            ("unit_x", unit_x),
            ("unit_y", unit_y),
            ("comm", comm),
            ("assoc", assoc),
        ),
    )


def _require_augmentation(s: TruncatedSeries) -> None:
    if s.has_t_constant_term():
        raise SubstitutionError("argument must have zero constant term")


def fgl_sum(law: FormalGroupLaw, a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """F(a, b), the group-law sum of two augmentation-ideal elements."""
    if a.ctx != b.ctx:
        raise ContextMismatch("fgl_sum arguments live in different contexts")
    _require_augmentation(a)
    _require_augmentation(b)
    return substitute(law.series, {0: a, 1: b}, target=a.ctx)


def fgl_inverse(law: FormalGroupLaw, a: TruncatedSeries) -> TruncatedSeries:
    """chi(a): the inverse for the group-law sum, fgl_sum(a, chi(a)) = 0."""
    _require_augmentation(a)
    return substitute(law.inverse_series, {0: a}, target=a.ctx)


def n_series(law: FormalGroupLaw, n: int, a: TruncatedSeries) -> TruncatedSeries:
    """[n](a): iterated group-law sum, with [-n](a) = chi([n](a))."""
    _require_augmentation(a)
    if n < 0:
        return fgl_inverse(law, n_series(law, -n, a))
    result = a.ctx.zero()
    for _ in range(n):
        result = fgl_sum(law, result, a)
    return result


def additive_shadow(s: TruncatedSeries) -> TruncatedSeries:
    """Specialize every coefficient generator to 0 (image in the rational kind)."""
    ctx = RingContext(s.ctx.n_vars, "rational", s.ctx.max_t_order, 0)
    return ctx.from_terms({m: c for m, c in s._terms.items() if not m.laz})
