"""Chern/Thom/Gysin calculus on projective-bundle quotient rings.

A vector bundle enters as a split bundle: the list of its Chern roots
(splitting principle).  The ring of a rank-n projective bundle is the
free module on 1, xi, ..., xi^(n-1) over the base, with xi the first
Chern class of the tautological line bundle O(-1) and the reduction

    xi^n = c1*xi^(n-1) - c2*xi^(n-2) + ... + (-1)^(n-1)*cn.

The zero-section calculus happens in the projective completion
P(1 (+) E), whose last Chern class vanishes, so setting xi = 0 is a ring
map there.  With eta = chi(xi) the class of O(1), the Thom class is

    th(E) = prod_j F(x_j, eta),

whose xi^0 coordinate is c_n(E) = prod_j x_j on the nose; push-forward
along the zero section is multiplication by th(E) after pull-back, which
makes the self-intersection identity

    restrict(pushforward(a)) = a * c_n(E)

exact inside the truncation window.  ``eta`` is the truncated formal
inverse evaluated at xi: it inverts xi exactly modulo terms whose
xi-degree exceeds the t-order cap, which is the window semantics used
everywhere here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .equivariant import WeylGroupSpec, weyl_apply
from .fgl import FormalGroupLaw, fgl_sum
from .series import (
    ContextMismatch,
    Monomial,
    RingContext,
    TruncatedSeries,
    series_mul,
    substitute,
)


@dataclass(frozen=True)
class SplitBundle:
    """A bundle presented by its Chern roots (all in one base context)."""

    roots: tuple

    def __post_init__(self):
        roots = tuple(self.roots)
        object.__setattr__(self, "roots", roots)
        if not roots:
            raise ValueError("a split bundle needs at least one root")
        ctx = roots[0].ctx
        for r in roots:
            if r.ctx != ctx:
                raise ContextMismatch("all roots must share one context")
            if r.has_t_constant_term():
                raise ValueError("Chern roots must have zero constant term")

    @property
    def rank(self) -> int:
        return len(self.roots)

    @property
    def base(self) -> RingContext:
        return self.roots[0].ctx


def chern_classes(bundle: SplitBundle) -> list:
    """c1..cr as elementary symmetric polynomials of the roots (c0 = 1 implicit)."""
    ctx = bundle.base
    elem = [ctx.one()] + [ctx.zero()] * bundle.rank
    for root in bundle.roots:
        for i in range(bundle.rank, 0, -1):
            elem[i] = elem[i] + elem[i - 1] * root
    return elem[1:]


def top_chern_class(bundle: SplitBundle) -> TruncatedSeries:
    prod = bundle.base.one()
    for root in bundle.roots:
        prod = prod * root
    return prod


def twist_by_line(bundle: SplitBundle, y: TruncatedSeries, law: FormalGroupLaw) -> SplitBundle:
    """Tensor with a line bundle of class y: each root moves by the group law."""
    if y.has_t_constant_term():
        raise ValueError("twisting class must have zero constant term")
    return SplitBundle(tuple(fgl_sum(law, x, y) for x in bundle.roots))


def direct_sum(*bundles: SplitBundle) -> SplitBundle:
    roots = tuple(r for b in bundles for r in b.roots)
    return SplitBundle(roots)


@dataclass(frozen=True)
class ProjBundleRing:
    """Free module on 1, xi, ..., xi^(n-1) with the Chern reduction attached."""

    base: RingContext
    chern: tuple

    def __post_init__(self):
        chern = tuple(self.chern)
        object.__setattr__(self, "chern", chern)
        if not chern:
            raise ValueError("need at least one Chern class (rank >= 1)")
        for c in chern:
            if c.ctx != self.base:
                raise ContextMismatch("Chern classes must live over the base context")

    @property
    def rank(self) -> int:
        return len(self.chern)

    def zero(self) -> "ProjBundleElement":
        z = self.base.zero()
        return ProjBundleElement(self, (z,) * self.rank)

    def one(self) -> "ProjBundleElement":
        return self.from_base(self.base.one())

    def xi(self) -> "ProjBundleElement":
        if self.rank == 1:
            # P(L) = base: xi reduces immediately to c1
            return self.from_base(self.chern[0])
        coords = [self.base.zero()] * self.rank
        coords[1] = self.base.one()
        return ProjBundleElement(self, tuple(coords))

    def from_base(self, s: TruncatedSeries) -> "ProjBundleElement":
        if s.ctx != self.base:
            raise ContextMismatch("series does not live over the base context")
        coords = [s] + [self.base.zero()] * (self.rank - 1)
        return ProjBundleElement(self, tuple(coords))

    def from_coords(self, coords: Sequence[TruncatedSeries]) -> "ProjBundleElement":
        coords = list(coords)
        if len(coords) > self.rank:
            coords = reduce_coords(self, coords)
        coords += [self.base.zero()] * (self.rank - len(coords))
        return ProjBundleElement(self, tuple(coords))


@dataclass(frozen=True)
class ProjBundleElement:
    """Coordinate vector (a0..a_{n-1}) in the xi-power basis."""

    ring: ProjBundleRing
    coords: tuple

    def __post_init__(self):
        if len(self.coords) != self.ring.rank:
            raise ValueError("coordinate vector length must equal the rank")

    def __add__(self, other):
        other = _coerce_pb(self.ring, other)
        return ProjBundleElement(
            self.ring, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other):
        other = _coerce_pb(self.ring, other)
        return ProjBundleElement(
            self.ring, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def __neg__(self):
        return ProjBundleElement(self.ring, tuple(-a for a in self.coords))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return ProjBundleElement(self.ring, tuple(a * other for a in self.coords))
        if isinstance(other, TruncatedSeries):
            return ProjBundleElement(self.ring, tuple(a * other for a in self.coords))
        return pb_mul(self.ring, self, _coerce_pb(self.ring, other))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coords)

    def to_text(self) -> str:
        return " | ".join(c.to_text() for c in self.coords)


def _coerce_pb(ring: ProjBundleRing, value) -> ProjBundleElement:
    if isinstance(value, ProjBundleElement):
        if value.ring != ring:
            raise ContextMismatch("elements live in different projective bundle rings")
        return value
    if isinstance(value, TruncatedSeries):
        return ring.from_base(value)
    if isinstance(value, (int, Fraction)):
        return ring.from_base(ring.base.constant(value))
    raise TypeError(f"cannot coerce {value!r} into the projective bundle ring")


def pb_ring(base: RingContext, chern: Sequence[TruncatedSeries]) -> ProjBundleRing:
    return ProjBundleRing(base=base, chern=tuple(chern))


def projective_completion_ring(bundle: SplitBundle) -> ProjBundleRing:
    """The ring of P(1 (+) E): rank + 1 basis, last Chern class zero."""
    chern = chern_classes(bundle) + [bundle.base.zero()]
    return pb_ring(bundle.base, chern)


def trivial_bundle_ring(base: RingContext, rank: int) -> ProjBundleRing:
    """P^(rank-1) over the base: all Chern classes vanish, so xi^rank = 0."""
    return pb_ring(base, [base.zero()] * rank)


def reduce_coords(ring: ProjBundleRing, coords: Sequence[TruncatedSeries]) -> list:
    """Stepwise reduction of a xi-polynomial to the basis, top power first."""
    n = ring.rank
    coords = list(coords)
    for p in range(len(coords) - 1, n - 1, -1):
        c = coords[p]
        if c.is_zero():
            continue
        coords[p] = ring.base.zero()
        sign = 1
        for i, ci in enumerate(ring.chern, start=1):
            coords[p - i] = coords[p - i] + (ci * c if sign > 0 else -(ci * c))
            sign = -sign
    return coords[:n]


def reduce_by_division(ring: ProjBundleRing, coords: Sequence[TruncatedSeries]) -> tuple:
    """Long division by the monic reduction polynomial.

    Returns (quotient, remainder) coefficient lists with
    input = quotient * relation + remainder; the relation is
    xi^n - c1*xi^(n-1) + ... + (-1)^n*cn.
    """
    n = ring.rank
    rel = _relation_coeffs(ring)
    rem = list(coords)
    if len(rem) < n + 1:
        rem += [ring.base.zero()] * (n + 1 - len(rem))
    quot = [ring.base.zero()] * max(1, len(rem) - n)
    for p in range(len(rem) - 1, n - 1, -1):
        q = rem[p]
        if q.is_zero():
            continue
        quot[p - n] = quot[p - n] + q
        for i, r in enumerate(rel):
            rem[p - n + i] = rem[p - n + i] - r * q
    return quot, rem[:n]


def _relation_coeffs(ring: ProjBundleRing) -> list:
    """Coefficients of xi^0..xi^n in the relation xi^n - c1*xi^(n-1) + ... + (-1)^n*cn."""
    n = ring.rank
    rel = [ring.base.zero()] * (n + 1)
    rel[n] = ring.base.one()
    for i, ci in enumerate(ring.chern, start=1):
        rel[n - i] = -ci if i % 2 else ci
    return rel


@lru_cache(maxsize=None)
def xi_power(ring: ProjBundleRing, k: int) -> ProjBundleElement:
    """Reduced form of xi^k via the cached power table."""
    if k == 0:
        return ring.one()
    prev = xi_power(ring, k - 1)
    shifted = [ring.base.zero()] + list(prev.coords)
    return ring.from_coords(reduce_coords(ring, shifted))


def pb_mul(ring: ProjBundleRing, u, v) -> ProjBundleElement:
    """Product in the reduced ring: convolution in xi, then stepwise reduction."""
    u = _coerce_pb(ring, u)
    v = _coerce_pb(ring, v)
    n = ring.rank
    conv = [ring.base.zero()] * (2 * n - 1)
    for i, a in enumerate(u.coords):
        if a.is_zero():
            continue
        for j, b in enumerate(v.coords):
            if b.is_zero():
                continue
            conv[i + j] = conv[i + j] + a * b
    return ring.from_coords(reduce_coords(ring, conv))


def pb_substitute(
    ring: ProjBundleRing,
    s: TruncatedSeries,
    values: dict,
) -> ProjBundleElement:
    """Evaluate a (finite, truncated) series at projective-bundle elements.

    ``values`` maps every variable in the support of ``s`` to an element
    of the ring (or a base series); generator parts of the coefficients
    multiply in as base constants.  This is polynomial evaluation: the
    source term map is finite by truncation.
    """
    if s.ctx.coeff_kind != ring.base.coeff_kind:
        raise ContextMismatch("coefficient kinds differ")
    values = {int(j): _coerce_pb(ring, v) for j, v in values.items()}
    missing = s.support_vars() - set(values)
    if missing:
        raise ValueError(f"no value for variables {sorted(missing)}")

    powers: dict = {}

    def power(j: int, e: int) -> ProjBundleElement:
        key = (j, e)
        cached = powers.get(key)
        if cached is not None:
            return cached
        result = values[j] if e == 1 else pb_mul(ring, power(j, e - 1), values[j])
        powers[key] = result
        return result

    zero_t = (0,) * ring.base.n_vars
    acc = ring.zero()
    for mono, coeff in s._terms.items():
        scalar = TruncatedSeries(ring.base, {Monomial(zero_t, mono.laz): coeff})
        if scalar.is_zero():
            continue
        term = ring.from_base(scalar)
        for j, e in enumerate(mono.t):
            if e:
                term = pb_mul(ring, term, power(j, e))
                if term.is_zero():
                    break
        acc = acc + term
    return acc


def tautological_inverse_class(ring: ProjBundleRing, law: FormalGroupLaw) -> ProjBundleElement:
    """eta = chi(xi), the class of O(1) as the formal inverse of xi."""
    return pb_substitute(ring, law.inverse_series, {0: ring.xi()})


def thom_class(bundle: SplitBundle, ring: ProjBundleRing, law: FormalGroupLaw) -> ProjBundleElement:
    """th(E) = prod_j F(x_j, eta) reduced in the completion ring.

    ``ring`` must be the projective completion of a bundle containing E
    as a summand (for the plain Thom class, of E itself); its rank must
    exceed the rank of E.
    """
    if ring.rank < bundle.rank + 1:
        raise ValueError("ring rank must be at least rank(E) + 1 (completion by 1)")
    return _thom_cached(bundle, ring, law)


@lru_cache(maxsize=None)
def _thom_cached(bundle: SplitBundle, ring: ProjBundleRing, law: FormalGroupLaw) -> ProjBundleElement:
    eta = tautological_inverse_class(ring, law)
    th = ring.one()
    for root in bundle.roots:
        factor = pb_substitute(ring, law.series, {0: ring.from_base(root), 1: eta})
        th = pb_mul(ring, th, factor)
    return th


def thom_class_via_twist(
    bundle: SplitBundle, ring: ProjBundleRing, law: FormalGroupLaw
) -> ProjBundleElement:
    """Independent route: top Chern class of (pulled-back E) tensor O(1).

    The twist happens in an extended base with a fresh degree-1 variable
    standing for the class of O(1); the top Chern class is expanded
    there by the Cartan formula and only then evaluated at eta.  The
    extension carries t-order headroom rank(ring) - 1 so that no term
    surviving the final window is lost in the intermediate ring.
    """
    base = bundle.base
    ext = RingContext(
        base.n_vars + 1,
        base.coeff_kind,
        base.max_t_order + ring.rank - 1,
        base.max_weight,
    )
    u = ext.var(base.n_vars)
    lifts = []
    for root in bundle.roots:
        assignment = {j: ext.var(j) for j in range(base.n_vars)}
        lifts.append(substitute(root, assignment, target=ext))
    twisted = SplitBundle(tuple(fgl_sum(law, x, u) for x in lifts))
    top = top_chern_class(twisted)
    eta = tautological_inverse_class(ring, law)
    values = {j: ring.from_base(base.var(j)) for j in range(base.n_vars)}
    values[base.n_vars] = eta
    return pb_substitute(ring, top, values)


def zero_section_pushforward(
    a: TruncatedSeries,
    bundle: SplitBundle,
    ring: ProjBundleRing,
    law: FormalGroupLaw,
) -> ProjBundleElement:
    """Gysin push-forward along the zero section: p^*(a) * th(E)."""
    return pb_mul(ring, ring.from_base(a), thom_class(bundle, ring, law))


def zero_section_restriction(u: ProjBundleElement) -> TruncatedSeries:
    """The ring map xi -> 0 of the completion ring: the xi^0 coordinate."""
    return u.coords[0]


def flag_restriction(
    a: TruncatedSeries,
    b: TruncatedSeries,
    wspec: WeylGroupSpec,
    law: FormalGroupLaw,
) -> tuple:
    """Image of the pure tensor a (x) b: component at w is a * w(b).

    Components are indexed by the full Weyl enumeration in its
    deterministic order (identity first).
    """
    return tuple(
        series_mul(a, weyl_apply(w, b, law)) for w in wspec.elements()
    )


def flag_restriction_sum(
    pairs: Sequence[tuple],
    wspec: WeylGroupSpec,
    law: FormalGroupLaw,
) -> tuple:
    """Image of a sum of pure tensors, componentwise over the Weyl elements."""
    elements = wspec.elements()
    if not pairs:
        raise ValueError("need at least one pure tensor")
    ctx = pairs[0][0].ctx
    out = [ctx.zero()] * len(elements)
    for a, b in pairs:
        for i, w in enumerate(elements):
            out[i] = out[i] + series_mul(a, weyl_apply(w, b, law))
    return tuple(out)


def restrict_to_diagonal(s: TruncatedSeries, i: int, j: int) -> TruncatedSeries:
    """Substitute t_i -> t_j.  The result vanishes iff s is divisible by
    t_i - t_j, equivalently by the group-law difference class (they agree
    up to a unit), so this is the congruence test at the root e_i - e_j."""
    return substitute(s, {i: s.ctx.var(j)}, target=s.ctx)


def root_difference(
    law: FormalGroupLaw, ctx: RingContext, i: int, j: int
) -> TruncatedSeries:
    """The class t_i -_F t_j = F(t_i, chi(t_j))."""
    from .fgl import fgl_inverse

    return fgl_sum(law, ctx.var(i), fgl_inverse(law, ctx.var(j)))
