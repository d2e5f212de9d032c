"""Exact sparse arithmetic for doubly-truncated graded series over Q.

Two variable families live in one ring:

* degree-1 variables ``t1..tn`` (torus characters, Chern roots, xi),
* coefficient generators of negative degree, selected by ``coeff_kind``:

  ==================== ======================= ==================
  kind                 generators              degree
  ==================== ======================= ==================
  rational             none                    --
  multiplicative-beta  b                       deg b  = -1
  universal-rational   m1, m2, ...             deg mi = -i
  ==================== ======================= ==================

A monomial ``m^alpha * t^beta`` carries the t-order ``|beta|``, the
generator weight ``sum(i * alpha_i)`` and the diagonal degree
``|beta| - weight``.  Every series is truncated to
``t-order <= max_t_order`` and ``weight <= max_weight``; terms produced
beyond either cap are dropped silently, so all ring identities are
asserted only inside the retained window.  Dropping is an ideal
quotient (t-order and weight never decrease under multiplication or
augmentation-ideal substitution), which is what makes the truncated
identities exact.

Coefficients are `fractions.Fraction` throughout; there is no floating
point anywhere in this package.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Optional

COEFF_KINDS = ("rational", "multiplicative-beta", "universal-rational")


class ContextMismatch(ValueError):
    """Operands live over different ring contexts."""


class SubstitutionError(ValueError):
    """An assignment series has a constant term in the degree-1 variables."""


@dataclass(frozen=True)
class RingContext:
    """Shape data shared by all series of one ring.

    ``max_t_order`` caps the total degree in the degree-1 variables,
    ``max_weight`` caps the generator weight.  Both caps must be >= 0
    and are fixed for the lifetime of every series built over the
    context.
    """

    n_vars: int
    coeff_kind: str
    max_t_order: int
    max_weight: int

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("need at least one degree-1 variable")
        if self.coeff_kind not in COEFF_KINDS:
            raise ValueError(f"unknown coefficient kind {self.coeff_kind!r}")
        if self.max_t_order < 0 or self.max_weight < 0:
            raise ValueError("truncation caps must be non-negative")

    # -- series constructors ------------------------------------------------

    def zero(self) -> "TruncatedSeries":
        return TruncatedSeries._raw(self, {})

    def one(self) -> "TruncatedSeries":
        return self.constant(1)

    def constant(self, value) -> "TruncatedSeries":
        c = Fraction(value)
        if c == 0:
            return self.zero()
        return TruncatedSeries._raw(self, {Monomial((0,) * self.n_vars, ()): c})

    def var(self, j: int) -> "TruncatedSeries":
        """The degree-1 variable t_{j+1} as a series (0-based index)."""
        if not 0 <= j < self.n_vars:
            raise ValueError(f"variable index {j} out of range")
        t = tuple(1 if i == j else 0 for i in range(self.n_vars))
        return self.from_terms({Monomial(t, ()): Fraction(1)})

    def lazard(self, i: int) -> "TruncatedSeries":
        """Coefficient generator of weight i (``b`` requires i == 1)."""
        _check_lazard_index(self.coeff_kind, i)
        return self.from_terms(
            {Monomial((0,) * self.n_vars, ((i, 1),)): Fraction(1)}
        )

    def from_terms(self, terms: Mapping["Monomial", Fraction]) -> "TruncatedSeries":
        """Build a series, validating generator indices and applying the caps."""
        out = {}
        for mono, coeff in terms.items():
            for i, e in mono.laz:
                _check_lazard_index(self.coeff_kind, i)
                if e <= 0:
                    raise ValueError("generator exponents must be positive")
            if len(mono.t) != self.n_vars:
                raise ValueError("monomial has wrong number of variables")
            if any(e < 0 for e in mono.t):
                raise ValueError("variable exponents must be non-negative")
            c = Fraction(coeff)
            if c == 0:
                continue
            if mono.t_order() > self.max_t_order or mono.weight() > self.max_weight:
                continue
            out[mono] = out.get(mono, Fraction(0)) + c
        return TruncatedSeries._raw(self, {m: c for m, c in out.items() if c != 0})


def _check_lazard_index(kind: str, i: int) -> None:
    if kind == "rational":
        raise ValueError("rational coefficients admit no generators")
    if kind == "multiplicative-beta" and i != 1:
        raise ValueError("multiplicative coefficients only admit b (weight 1)")
    if i < 1:
        raise ValueError("generator index must be >= 1")


class Monomial(NamedTuple):
    """``m^alpha * t^beta`` with canonical sparse generator part.

    ``t`` is the full exponent vector over the degree-1 variables;
    ``laz`` is a tuple of ``(generator_index, exponent)`` pairs sorted by
    index with positive exponents only.
    """

    t: tuple
    laz: tuple

    def t_order(self) -> int:
        return sum(self.t)

    def weight(self) -> int:
        return sum(i * e for i, e in self.laz)

    def degree(self) -> int:
        return self.t_order() - self.weight()

    def sort_key(self):
        # graded-lex on t-exponents (t1-heavy terms first), then generator part
        return (self.t_order(), tuple(-e for e in self.t), self.weight(), self.laz)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    t = tuple(x + y for x, y in zip(a.t, b.t))
    if not a.laz:
        laz = b.laz
    elif not b.laz:
        laz = a.laz
    else:
        merged = dict(a.laz)
        for i, e in b.laz:
            merged[i] = merged.get(i, 0) + e
        laz = tuple(sorted(merged.items()))
    return Monomial(t, laz)


class TruncatedSeries:
    """Immutable sparse series: a map from monomials to nonzero rationals.

    Two series are equal iff their contexts and canonical term maps are
    equal.  All operations are pure; instances are safe to share across
    workers.

    >>> ctx = RingContext(2, "rational", 4, 0)
    >>> t1, t2 = ctx.var(0), ctx.var(1)
    >>> ((t1 + t2) * (t1 - t2)).to_text()
    '1 * t1^2 + -1 * t2^2'
    """

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Mapping[Monomial, Fraction]):
        validated = ctx.from_terms(terms)
        self.ctx = ctx
        self._terms = validated._terms
        self._hash = None

    @classmethod
    def _raw(cls, ctx: RingContext, terms: dict) -> "TruncatedSeries":
        # internal: terms are already canonical (no zeros, inside caps)
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj._terms = terms
        obj._hash = None
        return obj

    # -- inspection ----------------------------------------------------------

    def items(self) -> list:
        """Term list in the canonical order."""
        return sorted(self._terms.items(), key=lambda kv: kv[0].sort_key())

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(mono, Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def constant_coefficient(self) -> Fraction:
        return self._terms.get(Monomial((0,) * self.ctx.n_vars, ()), Fraction(0))

    def has_t_constant_term(self) -> bool:
        """True if some term has t-order 0 (possibly with a generator part)."""
        return any(m.t_order() == 0 for m in self._terms)

    def min_t_order(self) -> Optional[int]:
        if not self._terms:
            return None
        return min(m.t_order() for m in self._terms)

    def t_slice(self, k: int) -> "TruncatedSeries":
        """The part of the series with t-order exactly k."""
        return TruncatedSeries._raw(
            self.ctx, {m: c for m, c in self._terms.items() if m.t_order() == k}
        )

    def support_vars(self) -> set:
        return {j for m in self._terms for j, e in enumerate(m.t) if e}

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, tuple(sorted(self._terms.items()))))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __repr__(self):
        return f"TruncatedSeries({self.to_text()})"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other):
        return series_add(self, _coerce(self.ctx, other))

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw(self.ctx, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-_coerce(self.ctx, other))

    def __rsub__(self, other):
        return _coerce(self.ctx, other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return series_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "TruncatedSeries":
        c = Fraction(c)
        if c == 0:
            return self.ctx.zero()
        return TruncatedSeries._raw(self.ctx, {m: v * c for m, v in self._terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers are not defined")
        result = self.ctx.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def substitute(self, assignment, target: Optional[RingContext] = None):
        return substitute(self, assignment, target)

    # -- serialization ---------------------------------------------------------

    def to_text(self) -> str:
        """Canonical text form, e.g. ``1/2 * m1^2*t1 + -1 * t2^3``."""
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.items():
            factors = []
            for i, e in mono.laz:
                name = "b" if self.ctx.coeff_kind == "multiplicative-beta" else f"m{i}"
                factors.append(name if e == 1 else f"{name}^{e}")
            for j, e in enumerate(mono.t):
                if e:
                    factors.append(f"t{j + 1}" if e == 1 else f"t{j + 1}^{e}")
            if factors:
                parts.append(f"{coeff} * " + "*".join(factors))
            else:
                parts.append(str(coeff))
        return " + ".join(parts)

    @classmethod
    def from_text(cls, ctx: RingContext, text: str) -> "TruncatedSeries":
        text = text.strip()
        if text == "0":
            return ctx.zero()
        terms = {}
        for chunk in text.split(" + "):
            if " * " in chunk:
                coeff_str, body = chunk.split(" * ", 1)
                factors = body.split("*")
            else:
                coeff_str, factors = chunk, []
            coeff = Fraction(coeff_str)
            t = [0] * ctx.n_vars
            laz = {}
            for factor in factors:
                m = re.fullmatch(r"(b|m(\d+)|t(\d+))(?:\^(\d+))?", factor)
                if m is None:
                    raise ValueError(f"cannot parse factor {factor!r}")
                exp = int(m.group(4)) if m.group(4) else 1
                if m.group(1) == "b":
                    laz[1] = laz.get(1, 0) + exp
                elif m.group(2) is not None:
                    i = int(m.group(2))
                    laz[i] = laz.get(i, 0) + exp
                else:
                    j = int(m.group(3)) - 1
                    if not 0 <= j < ctx.n_vars:
                        raise ValueError(f"variable t{j + 1} out of range")
                    t[j] += exp
            mono = Monomial(tuple(t), tuple(sorted(laz.items())))
            terms[mono] = terms.get(mono, Fraction(0)) + coeff
        return ctx.from_terms(terms)

    def to_json_terms(self) -> list:
        """JSON form: array of ``{coeff, lazard, t}`` objects, canonical order."""
        return [
            {
                "coeff": f"{c.numerator}/{c.denominator}",
                "lazard": [[i, e] for i, e in m.laz],
                "t": list(m.t),
            }
            for m, c in self.items()
        ]

    @classmethod
    def from_json_terms(cls, ctx: RingContext, data: Iterable[dict]) -> "TruncatedSeries":
        terms = {}
        for item in data:
            mono = Monomial(
                tuple(int(x) for x in item["t"]),
                tuple((int(i), int(e)) for i, e in item["lazard"]),
            )
            terms[mono] = terms.get(mono, Fraction(0)) + Fraction(item["coeff"])
        return ctx.from_terms(terms)


def _coerce(ctx: RingContext, value) -> TruncatedSeries:
    if isinstance(value, TruncatedSeries):
        return value
    if isinstance(value, (int, Fraction)):
        return ctx.constant(value)
    raise TypeError(f"cannot coerce {value!r} into a series")


def _require_same_ctx(a: TruncatedSeries, b: TruncatedSeries) -> None:
    if a.ctx != b.ctx:
        raise ContextMismatch(f"contexts differ: {a.ctx} vs {b.ctx}")


# -- ring operations ------------------------------------------------------------


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Termwise sum; zero terms are dropped."""
    _require_same_ctx(a, b)
    if not a._terms:
        return b
    if not b._terms:
        return a
    out = dict(a._terms)
    for m, c in b._terms.items():
        v = out.get(m)
        s = c if v is None else v + c
        if s == 0:
            out.pop(m, None)
        else:
            out[m] = s
    return TruncatedSeries._raw(a.ctx, out)


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Distributive product with post-hoc truncation.

    Any product monomial whose t-order or weight exceeds the caps is
    discarded.  Commutative: the diagonal grading is even, so no sign
    twist applies.
    """
    _require_same_ctx(a, b)
    ctx = a.ctx
    if not a._terms or not b._terms:
        return ctx.zero()
    if len(a._terms) > len(b._terms):
        a, b = b, a
    cap_t, cap_w = ctx.max_t_order, ctx.max_weight
    bterms = sorted(
        ((m.t_order(), m.weight(), m, c) for m, c in b._terms.items()),
        key=lambda e: e[0],
    )
    out = {}
    for ma, ca in a._terms.items():
        t_budget = cap_t - ma.t_order()
        w_budget = cap_w - ma.weight()
        for tb, wb, mb, cb in bterms:
            if tb > t_budget:
                break
            if wb > w_budget:
                continue
            mm = mono_mul(ma, mb)
            v = out.get(mm)
            p = ca * cb
            out[mm] = p if v is None else v + p
    return TruncatedSeries._raw(ctx, {m: c for m, c in out.items() if c != 0})


def substitute(
    s: TruncatedSeries,
    assignment: Mapping[int, TruncatedSeries],
    target: Optional[RingContext] = None,
) -> TruncatedSeries:
    """Simultaneous substitution t_j -> assignment[j], truncated.

    Every assigned series must lie in the augmentation ideal (no term of
    t-order 0), so composition is well defined under truncation.  All
    assigned series must share one context with the same coefficient
    kind as ``s``; when that context differs from ``s.ctx`` (retargeting
    into another ring), every variable occurring in ``s`` must be
    assigned.  Unassigned variables map to themselves.

    >>> ctx = RingContext(2, "rational", 4, 0)
    >>> t1, t2 = ctx.var(0), ctx.var(1)
    >>> substitute(t1 * t1, {0: t1 + t2}).to_text()
    '1 * t1^2 + 2 * t1*t2 + 1 * t2^2'
    """
    assignment = {int(j): v for j, v in assignment.items()}
    for j in assignment:
        if not 0 <= j < s.ctx.n_vars:
            raise ValueError(f"assigned variable index {j} out of range")
    values = list(assignment.values())
    if target is None:
        target = values[0].ctx if values else s.ctx
    if target.coeff_kind != s.ctx.coeff_kind:
        raise ContextMismatch("substitution cannot change the coefficient kind")
    for v in values:
        if v.ctx != target:
            raise ContextMismatch("assigned series live in different contexts")
        if v.has_t_constant_term():
            raise SubstitutionError(
                "assigned series must have zero constant term in the degree-1 variables"
            )
    if target != s.ctx:
        missing = s.support_vars() - set(assignment)
        if missing:
            raise SubstitutionError(
                f"retargeting substitution must assign all variables; missing {sorted(missing)}"
            )

    powers: dict = {}

    def power(j: int, e: int) -> TruncatedSeries:
        key = (j, e)
        cached = powers.get(key)
        if cached is not None:
            return cached
        if e == 1:
            base = assignment.get(j)
            if base is None:
                base = target.var(j)
            powers[key] = base
            return base
        half = power(j, e - 1)
        result = series_mul(half, power(j, 1))
        powers[key] = result
        return result

    acc: dict = {}
    zero_t = (0,) * target.n_vars
    for mono, coeff in s._terms.items():
        if mono.weight() > target.max_weight:
            continue
        term = TruncatedSeries._raw(target, {Monomial(zero_t, mono.laz): coeff})
        for j, e in enumerate(mono.t):
            if e:
                term = series_mul(term, power(j, e))
                if not term._terms:
                    break
        for m, c in term._terms.items():
            v = acc.get(m)
            t = c if v is None else v + c
            if t == 0:
                acc.pop(m, None)
            else:
                acc[m] = t
    return TruncatedSeries._raw(target, acc)


def bidegree_basis(ctx: RingContext, degree: int, t_order: int) -> list:
    """All monomials with the given t-order and diagonal degree.

    The generator weight is forced to ``t_order - degree``; the result is
    empty when that is negative or exceeds the weight cap.  Deterministic
    graded-lex order.
    """
    if not 0 <= t_order <= ctx.max_t_order:
        raise ValueError(f"t-order {t_order} outside [0, {ctx.max_t_order}]")
    w = t_order - degree
    if w < 0 or w > ctx.max_weight:
        return []
    lazs = lazard_monomials(ctx.coeff_kind, w)
    monos = [
        Monomial(t, laz)
        for t in compositions(t_order, ctx.n_vars)
        for laz in lazs
    ]
    monos.sort(key=Monomial.sort_key)
    return monos


def lazard_monomials(kind: str, weight: int) -> list:
    """Generator monomials of the given weight, as canonical ``laz`` tuples."""
    if weight == 0:
        return [()]
    if kind == "rational":
        return []
    if kind == "multiplicative-beta":
        return [((1, weight),)]
    out = []
    for part in partitions(weight):
        counts: dict = {}
        for p in part:
            counts[p] = counts.get(p, 0) + 1
        out.append(tuple(sorted(counts.items())))
    out.sort()
    return out


def partitions(n: int, max_part: Optional[int] = None):
    """Integer partitions of n as descending tuples."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


def compositions(total: int, parts: int):
    """Exponent vectors of length ``parts`` summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest
