import random
from fractions import Fraction

import pytest
import sympy

from cobcalc.fgl import (
    additive_shadow,
    build_fgl,
    fgl_inverse,
    fgl_sum,
    n_series,
    normalize_kind,
    verify_fgl_axioms,
)
from cobcalc.series import ContextMismatch, Monomial, RingContext

from oracles import (
    multiplicative_inverse_sympy,
    series_to_sympy,
    universal_fgl_sympy,
)


def law(kind, max_t=6, max_w=5):
    coeff = {"additive": "rational",
             "multiplicative": "multiplicative-beta",
             "universal-rational": "universal-rational"}[kind]
    return build_fgl(kind, RingContext(2, coeff, max_t, 0 if kind == "additive" else max_w))


def test_kind_aliases():
    assert normalize_kind("universal") == "universal-rational"
    assert normalize_kind("additive") == "additive"
    with pytest.raises(ValueError):
        normalize_kind("elliptic")


def test_additive_is_sum():
    F = law("additive")
    ctx2 = F.series.ctx
    assert F.series == ctx2.var(0) + ctx2.var(1)


def test_multiplicative_shape():
    F = law("multiplicative")
    ctx2 = F.series.ctx
    x, y = ctx2.var(0), ctx2.var(1)
    assert F.series == x + y - ctx2.lazard(1) * x * y


def test_build_rejects_wrong_coefficients():
    with pytest.raises(ContextMismatch):
        build_fgl("additive", RingContext(2, "universal-rational", 6, 5))


def test_build_needs_degree_two():
    with pytest.raises(ValueError):
        build_fgl("additive", RingContext(2, "rational", 1, 0))


def test_universal_low_coefficients_frozen():
    # values computed with the brute-force compositional-inversion oracle
    F = law("universal-rational")
    terms = {m: c for m, c in F.series.items()}
    m1 = ((1, 1),)
    assert terms[Monomial((1, 1), m1)] == Fraction(-2)
    assert terms[Monomial((2, 1), ((1, 2),))] == Fraction(4)
    assert terms[Monomial((2, 1), ((2, 1),))] == Fraction(-3)


def test_universal_matches_sympy_oracle():
    order = 5
    F = law("universal-rational", order, order - 1)
    F_oracle, x, y, ms = universal_fgl_sympy(order)
    got = series_to_sympy(F.series, (x, y), lambda i: ms[i - 1])
    assert sympy.expand(got - F_oracle) == 0


def test_fgl_sum_examples():
    for kind, expected in (
        ("additive", "1 * t1 + 1 * t2"),
        ("multiplicative", "1 * t1 + 1 * t2 + -1 * b*t1*t2"),
    ):
        F = law(kind)
        ctx = F.context(2)
        assert fgl_sum(F, ctx.var(0), ctx.var(1)).to_text() == expected


def test_fgl_sum_universal_degree3_coefficient():
    F = law("universal-rational")
    ctx = F.context(2)
    s = fgl_sum(F, ctx.var(0), ctx.var(1))
    # oracle: expand exp(log t1 + log t2) through degree 3 by brute force
    c = {m: v for m, v in s.items()}
    assert c[Monomial((2, 1), ((1, 2),))] == Fraction(4)
    assert c[Monomial((2, 1), ((2, 1),))] == Fraction(-3)


def test_fgl_inverse_examples():
    add = law("additive")
    ctx = add.context(1)
    assert fgl_inverse(add, ctx.var(0)) == -ctx.var(0)

    mult = law("multiplicative")
    chi_oracle, xs, bs = multiplicative_inverse_sympy(mult.max_t_order)
    got = series_to_sympy(mult.inverse_series, (xs,), lambda i: bs)
    # the weight cap kills b^k x^(k+1) for k > max_w; drop those in the oracle too
    kept = 0
    for k in range(mult.max_t_order + 1):
        coeff = sympy.expand(chi_oracle.coeff(xs, k))
        if coeff != 0 and sympy.degree(coeff, bs) <= mult.max_weight:
            kept += coeff * xs**k
    assert sympy.expand(got - kept) == 0


def test_fgl_inverse_defining_property():
    rng = random.Random(5)
    from cobcalc.selftest import random_series

    for kind in ("additive", "multiplicative", "universal-rational"):
        F = law(kind, 5, 4)
        ctx = F.context(2)
        for _ in range(10):
            a = random_series(rng, ctx, augmentation=True)
            assert fgl_sum(F, a, fgl_inverse(F, a)).is_zero()


def test_n_series_examples():
    add = law("additive")
    ctx1 = add.context(1)
    assert n_series(add, 5, ctx1.var(0)) == ctx1.var(0).scale(5)

    mult = law("multiplicative")
    mctx = mult.context(1)
    x = mctx.var(0)
    assert n_series(mult, 2, x) == 2 * x - mctx.lazard(1) * x * x

    uni = law("universal-rational")
    uctx = uni.context(2)
    a = uctx.var(0) + uctx.var(1) * uctx.var(1)
    assert n_series(uni, 1, a) == a
    assert n_series(uni, 0, a).is_zero()


def test_axiom_reports_all_kinds():
    for kind in ("additive", "multiplicative", "universal-rational"):
        report = verify_fgl_axioms(law(kind))
        assert report.ok
        for _, residual in report.residuals:
            assert residual.is_zero()


def test_log_exp_identities():
    F = law("universal-rational", 7, 6)
    from cobcalc.series import substitute

    x = F.log.ctx.var(0)
    assert substitute(F.log, {0: F.exp}) == x
    assert substitute(F.exp, {0: F.log}) == x


def test_universal_shadow_is_additive():
    F = law("universal-rational")
    shadow = additive_shadow(F.series)
    assert shadow == shadow.ctx.var(0) + shadow.ctx.var(1)
