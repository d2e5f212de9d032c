"""Finite-window inverse-limit diagnostics for towers of Q-vector spaces.

A tower holds, per diagonal degree, a window of finite-dimensional
spaces V_0 <- V_1 <- ... <- V_k with exact rational transition
matrices.  The stabilization index is the smallest uniform offset s
such that, at every level i of the window, the chain of images
im(V_{i+s'} -> V_i) is constant for s' >= s; the engine reports
not-found instead of extrapolating when the window never witnesses the
constancy.  For windows of finite-dimensional spaces the images always
stabilize once the window exceeds the longest strictly-decreasing chain
of subspaces, so the search terminates (find or refuse, never loop).

Because every per-degree space is finite dimensional, the eventual-image
condition holds for the full infinite systems modeled here and the
derived-limit correction term vanishes; only the limit dimension is
computed, from the plateau of the stable images.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional

from . import linalg
from .fgl import FormalGroupLaw
from .series import RingContext, bidegree_basis, lazard_monomials


class WindowNotStabilized(RuntimeError):
    """The window is too short to certify stabilization; refusing to extrapolate."""


@dataclass
class TowerSlice:
    """One degree: dimensions dim V_0..dim V_k and maps[i]: V_{i+1} -> V_i."""

    dims: List[int]
    maps: List[list]

    def __post_init__(self):
        if len(self.dims) < 3:
            raise ValueError("window must contain at least three levels (length >= 2)")
        if len(self.maps) != len(self.dims) - 1:
            raise ValueError("need exactly one transition map per step")
        for i, m in enumerate(self.maps):
            rows, cols = _shape(m, self.dims[i], self.dims[i + 1])
            if rows != self.dims[i] or cols != self.dims[i + 1]:
                raise ValueError(
                    f"map {i} has shape {rows}x{cols}, expected {self.dims[i]}x{self.dims[i + 1]}"
                )

    @property
    def window_end(self) -> int:
        return len(self.dims) - 1


def _shape(m, expect_rows: int, expect_cols: int):
    rows = len(m)
    if rows == 0:
        return expect_rows if expect_rows == 0 else 0, expect_cols
    cols = len(m[0])
    if any(len(r) != cols for r in m):
        raise ValueError("ragged matrix")
    return rows, cols


@dataclass
class Tower:
    """Per-degree tower slices."""

    degrees: Dict[int, TowerSlice] = field(default_factory=dict)

    def slice(self, d: int) -> TowerSlice:
        try:
            return self.degrees[d]
        except KeyError:
            raise KeyError(f"tower has no degree {d}") from None


def _image_chains(sl: TowerSlice):
    """For each level i, canonical forms of im(V_{i+s} -> V_i), s = 0..k-i."""
    k = sl.window_end
    chains = []
    for i in range(k + 1):
        comp = linalg.identity(sl.dims[i])
        chain = [linalg.column_space(comp) if sl.dims[i] else ()]
        for j in range(i, k):
            comp = linalg.mat_mul(comp, linalg.mat(sl.maps[j]), cols=sl.dims[j + 1])
            chain.append(linalg.column_space(comp))
        chains.append(chain)
    return chains


def _local_offsets(chains) -> list:
    """Smallest offset from which each level's image chain is constant to the end."""
    offsets = []
    for chain in chains:
        s = len(chain) - 1
        while s > 0 and chain[s - 1] == chain[s]:
            s -= 1
        offsets.append(s)
    return offsets


def stabilization_index(tower: Tower, d: int) -> Optional[int]:
    """Uniform image-stabilization offset within the window, or None.

    None means the constancy was never witnessed beyond a single point
    at the levels that force the candidate offset: the images may still
    be shrinking at the window end.
    """
    sl = tower.slice(d)
    chains = _image_chains(sl)
    offsets = _local_offsets(chains)
    k = sl.window_end
    candidate = max(offsets)
    witnessed = any(
        offsets[i] == candidate and k - i > candidate for i in range(k + 1)
    )
    return candidate if witnessed else None


def inverse_limit_dims(tower: Tower, d: int) -> int:
    """Dimension of the inverse limit read off the stabilized images.

    Requires a certified stabilization index and a witnessed plateau of
    the stable-image dimensions at the top of the window; otherwise
    raises WindowNotStabilized rather than extrapolating.
    """
    sl = tower.slice(d)
    if stabilization_index(tower, d) is None:
        raise WindowNotStabilized(f"degree {d}: images still shrinking at window end")
    k = sl.window_end
    # stable image at level i is im(V_k -> V_i); level k itself only sees the identity
    stable_dims = []
    comp = linalg.identity(sl.dims[k])
    images = [None] * (k + 1)
    for i in range(k - 1, -1, -1):
        comp = linalg.mat_mul(linalg.mat(sl.maps[i]), comp, cols=sl.dims[k])
        images[i] = comp
    for i in range(k):
        stable_dims.append(linalg.rank(images[i]) if sl.dims[i] else 0)
    if k >= 2 and stable_dims[k - 2] != stable_dims[k - 1]:
        raise WindowNotStabilized(
            f"degree {d}: stable image dimensions still growing at window end"
        )
    return stable_dims[k - 1]


def _level_monomials(ctx: RingContext, degree: int, level: int) -> list:
    """Basis (xi-power, generator part) of the degree slice of K[xi]/(xi^(level+1))."""
    out = []
    for p in range(0, min(level, ctx.max_t_order) + 1):
        w = p - degree
        if w < 0 or w > ctx.max_weight:
            continue
        for laz in lazard_monomials(ctx.coeff_kind, w):
            out.append((p, laz))
    out.sort()
    return out


def projective_space_tower(
    law: FormalGroupLaw, d_max: int, i_max: int
) -> Tower:
    """The tower of finite projective-space approximations of the rank-1
    classifying space: level i is the degree slice of K[xi]/(xi^(i+1)),
    transitions are the canonical surjections killing the top xi-power."""
    ctx = law.context(1)
    if d_max < 0 or i_max < 2:
        raise ValueError("need d_max >= 0 and at least three levels")
    tower = Tower()
    for d in range(0, d_max + 1):
        bases = [_level_monomials(ctx, d, i) for i in range(i_max + 1)]
        dims = [len(b) for b in bases]
        maps = []
        for i in range(i_max):
            lower = {m: r for r, m in enumerate(bases[i])}
            mat = linalg.zeros(dims[i], dims[i + 1])
            for col, m in enumerate(bases[i + 1]):
                row = lower.get(m)
                if row is not None:
                    mat[row][col] = Fraction(1)
            maps.append(mat)
        tower.degrees[d] = TowerSlice(dims=dims, maps=maps)
    return tower


def coefficient_ring_dimension(ctx: RingContext, degree: int) -> int:
    """Dimension of the full degree slice of the rank-1 equivariant ring
    inside the caps (the tower's expected limit)."""
    return sum(
        len(bidegree_basis(ctx, degree, k)) for k in range(0, ctx.max_t_order + 1)
    )


def apply_levelwise_isomorphism(tower: Tower, transforms: Dict[int, list]) -> Tower:
    """Conjugate a tower by invertible matrices, one list per degree.

    ``transforms[d][i]`` acts on level i of degree d; new maps are
    P_i * M_i * P_{i+1}^(-1).  Stabilization data must be unchanged,
    which is the functoriality check used by the test suites.
    """
    out = Tower()
    for d, sl in tower.degrees.items():
        ps = transforms[d]
        if len(ps) != len(sl.dims):
            raise ValueError("need one transform per level")
        inv = [linalg.inverse(p) if p else [] for p in ps]
        maps = []
        for i, m in enumerate(sl.maps):
            maps.append(linalg.mat_mul(linalg.mat_mul(ps[i], linalg.mat(m)), inv[i + 1]))
        out.degrees[d] = TowerSlice(dims=list(sl.dims), maps=maps)
    return out
