"""Torus-equivariant coefficient rings and Weyl-invariant subspaces.

The equivariant ring of a rank-n split torus is the truncated series
ring on t1..tn over the chosen coefficient kind, with tj the first
Chern class of the j-th basis character.  A general character
c = (c1..cn) gets the class

    [c](t) = [c1](t1) +_F [c2](t2) +_F ... +_F [cn](tn),

the group-law sum of the n-series of the basis classes.  A Weyl group
acts through integer matrices on the character lattice; the induced
ring endomorphism sends tj to the class of the j-th column.  Invariant
subspaces are computed per diagonal degree in the filtration quotient
spanned by monomials of t-order <= k_max: the action only preserves the
augmentation filtration for non-additive laws, and truncating to the
window is a ring quotient, so the restricted action is an honest group
representation there.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .fgl import FormalGroupLaw, fgl_sum, n_series
from .series import Monomial, RingContext, TruncatedSeries, bidegree_basis, substitute

Matrix = tuple  # tuple of row tuples with integer entries


class EnumerationCapExceeded(RuntimeError):
    """Weyl group closure did not terminate below the element cap."""


def _as_matrix(rows) -> Matrix:
    m = tuple(tuple(int(x) for x in row) for row in rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("Weyl generators must be square matrices")
    return m


def _check_unimodular(m: Matrix) -> None:
    d = linalg.det([list(r) for r in m])
    if d not in (1, -1):
        raise ValueError(f"matrix is not invertible over Z (det = {d})")


def _mat_mul_int(a: Matrix, b: Matrix) -> Matrix:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _identity_int(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class WeylGroupSpec:
    """A finite group of unimodular integer matrices given by generators."""

    rank: int
    generators: tuple
    max_elements: int = 20000

    def __post_init__(self):
        gens = tuple(_as_matrix(g) for g in self.generators)
        object.__setattr__(self, "generators", gens)
        for g in gens:
            if len(g) != self.rank:
                raise ValueError("generator size does not match the rank")
            _check_unimodular(g)

    def elements(self) -> tuple:
        """Full enumeration: closure of the generators, BFS order from the identity."""
        identity = _identity_int(self.rank)
        seen = {identity}
        order = [identity]
        frontier = [identity]
        while frontier:
            new = []
            for w in frontier:
                for g in self.generators:
                    wg = _mat_mul_int(w, g)
                    if wg not in seen:
                        seen.add(wg)
                        order.append(wg)
                        new.append(wg)
                        if len(seen) > self.max_elements:
                            raise EnumerationCapExceeded(
                                f"closure exceeds the cap of {self.max_elements} elements"
                            )
            frontier = new
        return tuple(order)


@dataclass(frozen=True)
class GroupPreset:
    name: str
    rank: int
    weyl: WeylGroupSpec


def _transposition(n: int, i: int) -> Matrix:
    """Permutation matrix swapping coordinates i and i+1."""
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    rows[i][i] = rows[i + 1][i + 1] = 0
    rows[i][i + 1] = rows[i + 1][i] = 1
    return _as_matrix(rows)


def _sign_flip(n: int, i: int) -> Matrix:
    rows = [[1 if r == c else 0 for c in range(n)] for r in range(n)]
    rows[i][i] = -1
    return _as_matrix(rows)


def symmetric_group(n: int) -> WeylGroupSpec:
    gens = tuple(_transposition(n, i) for i in range(n - 1))
    return WeylGroupSpec(rank=n, generators=gens)


def signed_permutation_group(n: int) -> WeylGroupSpec:
    """Type B/C Weyl group (signed permutations); shipped for rank <= 3."""
    if n > 3:
        raise ValueError("signed permutation presets are shipped for rank <= 3 only")
    gens = tuple(_transposition(n, i) for i in range(n - 1)) + (_sign_flip(n, n - 1),)
    return WeylGroupSpec(rank=n, generators=gens)


def preset(name: str) -> GroupPreset:
    """Group presets: GL(n), SL(2), torus(n), plus B/C signed permutations of rank <= 3."""
    canon = name.replace("(", "").replace(")", "").replace("_", "").upper()
    m = re.fullmatch(r"GL(\d+)", canon)
    if m:
        n = int(m.group(1))
        return GroupPreset(f"GL({n})", n, symmetric_group(n))
    if canon == "SL2":
        return GroupPreset("SL(2)", 1, WeylGroupSpec(rank=1, generators=(((-1,),),)))
    m = re.fullmatch(r"TORUS(\d+)", canon)
    if m:
        n = int(m.group(1))
        return GroupPreset(f"torus({n})", n, WeylGroupSpec(rank=n, generators=()))
    m = re.fullmatch(r"[BC](\d+)", canon)
    if m:
        n = int(m.group(1))
        return GroupPreset(f"{canon[0]}{n}", n, signed_permutation_group(n))
    raise ValueError(f"unknown group preset {name!r}")


def character_class(
    law: FormalGroupLaw, char: Sequence[int], ctx: Optional[RingContext] = None
) -> TruncatedSeries:
    """First Chern class of the character line bundle, [c1](t1) +_F ... +_F [cn](tn)."""
    char = tuple(int(c) for c in char)
    if ctx is None:
        ctx = law.context(len(char))
    if len(char) != ctx.n_vars:
        raise ValueError("character length does not match the context rank")
    acc = ctx.zero()
    for j, cj in enumerate(char):
        if cj == 0:
            continue
        acc = fgl_sum(law, acc, n_series(law, cj, ctx.var(j)))
    return acc


def weyl_apply(w, s: TruncatedSeries, law: FormalGroupLaw) -> TruncatedSeries:
    """Ring endomorphism sending tj to the class of the j-th column of w."""
    m = _as_matrix(w)
    _check_unimodular(m)
    n = s.ctx.n_vars
    if len(m) != n:
        raise ValueError("matrix size does not match the context rank")
    assignment = {
        j: character_class(law, tuple(m[i][j] for i in range(n)), s.ctx)
        for j in range(n)
    }
    return substitute(s, assignment, target=s.ctx)


def window_basis(ctx: RingContext, degree: int, k_max: int) -> list:
    """Monomials of the given diagonal degree with t-order <= k_max."""
    if k_max > ctx.max_t_order:
        raise ValueError(
            f"t-order window {k_max} exceeds the context cap {ctx.max_t_order}"
        )
    monos = []
    for k in range(0, k_max + 1):
        monos.extend(bidegree_basis(ctx, degree, k))
    monos.sort(key=Monomial.sort_key)
    return monos


def action_matrix(
    w, law: FormalGroupLaw, basis: Sequence[Monomial], ctx: RingContext
) -> list:
    """Matrix of the Weyl action on the span of ``basis`` (columns = images)."""
    index = {m: i for i, m in enumerate(basis)}
    basis_set = set(index)
    cols = []
    for mono in basis:
        image = weyl_apply(w, TruncatedSeries(ctx, {mono: Fraction(1)}), law)
        col = [Fraction(0)] * len(basis)
        for m, c in image._terms.items():
            if m in basis_set:
                col[index[m]] = c
            # terms outside the window fall into the filtration ideal: dropped
        cols.append(col)
    return linalg.transpose(cols)


def invariant_basis(
    wspec: WeylGroupSpec,
    law: FormalGroupLaw,
    degree: int,
    k_max: int,
    ctx: Optional[RingContext] = None,
) -> list:
    """Basis of the Weyl-fixed subspace in the degree window, as series.

    The fixed space is the joint kernel of (action - id) over the
    generators only; the basis is canonicalized by reduced echelon form
    over Q.
    """
    if ctx is None:
        ctx = law.context(wspec.rank)
    if ctx.n_vars != wspec.rank:
        raise ValueError("context rank does not match the Weyl rank")
    basis = window_basis(ctx, degree, k_max)
    if not basis:
        return []
    dim = len(basis)
    stacked = []
    for g in wspec.generators:
        rho = action_matrix(g, law, basis, ctx)
        for i in range(dim):
            row = list(rho[i])
            row[i] -= 1
            stacked.append(row)
    vectors = linalg.nullspace(stacked, n_cols=dim)
    canonical = linalg.row_space(vectors) if vectors else ()
    out = []
    for vec in canonical:
        terms = {m: c for m, c in zip(basis, vec) if c != 0}
        out.append(TruncatedSeries(ctx, terms))
    return out


def invariant_dimension(
    wspec: WeylGroupSpec,
    law: FormalGroupLaw,
    degree: int,
    k_max: int,
    ctx: Optional[RingContext] = None,
) -> int:
    return len(invariant_basis(wspec, law, degree, k_max, ctx))


def bg_dimensions(
    group: GroupPreset, law: FormalGroupLaw, degrees: Sequence[int], k_max: int
) -> dict:
    """Per-degree invariant dimensions in the (degree, <= k_max) window."""
    ctx = law.context(group.rank)
    return {
        int(d): invariant_dimension(group.weyl, law, int(d), k_max, ctx)
        for d in degrees
    }
