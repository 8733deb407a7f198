import cmath
import json
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cartan_gkz.cartan import in_mns, valid_s
from cartan_gkz.heegner import (
    CycleSymbol,
    FormalCycle,
    atkin_lehner_W,
    cycle_support,
    embedding_matrix,
    fixed_point,
    hecke_T,
    special_point,
)
from cartan_gkz.qforms import QuadForm, class_reps


def root(D, ctx):
    return int(valid_s(D, ctx)[0])


def test_special_points():
    assert abs(special_point(QuadForm(1, 0, 1)).value - 1j) < 1e-12
    assert abs(special_point(QuadForm(1, 1, 1)).value - cmath.exp(2j * math.pi / 3)) < 1e-12
    z = special_point(QuadForm(2, 1, 3))
    assert z.exact == (-1, 23, 4)
    assert abs(z.value - complex(-0.25, math.sqrt(23) / 4)) < 1e-12
    with pytest.raises(ValueError):
        special_point(QuadForm(1, 3, 1))
    with pytest.raises(ValueError):
        special_point(QuadForm(-1, 0, -1))


@given(st.integers(1, 40), st.integers(-40, 40), st.integers(1, 40))
def test_special_point_upper_half_plane(a, b, c):
    f = QuadForm(a, b, c)
    if f.disc >= 0:
        return
    z = special_point(f)
    assert z.imag > 0
    assert abs(z.imag - math.sqrt(-f.disc) / (2 * a)) < 1e-12
    assert abs(a * z.value**2 + b * z.value + c) < 1e-9 * (a + abs(b) + c)


def test_embedding_matrix(ctx):
    f = QuadForm(12, 0, 1)
    M = embedding_matrix(f, 0, ctx)
    assert M.entries() == (0, -1, 12, 0) and M.trace == 0 and M.det == 12
    assert in_mns(M, ctx)
    assert abs(fixed_point(M) - special_point(f).value) < 1e-10
    with pytest.raises(ValueError):
        embedding_matrix(f, 1)
    with pytest.raises(ValueError):
        embedding_matrix(QuadForm(1, 0, 12), 0, ctx)


def test_embedding_fixes_special_point_exactly(ctx):
    for D in (-3, -23, -48, -199):
        s = root(D, ctx)
        for g in cycle_support(CycleSymbol.make(D, s, ctx), ctx):
            f = g.form
            for t in range(f.b % 2, 12, 2):
                M = embedding_matrix(f, t, ctx)
                a, b, c, d = M.entries()
                assert M.trace == t and M.det == (t * t - f.disc) // 4
                # fixed points solve c z^2 + (d - a) z - b = 0, which is f itself
                assert (c, d - a, -b) == (f.a, f.b, f.c)
                assert in_mns(M, ctx)
                assert abs(fixed_point(M) - special_point(f).value) < 1e-10


def test_cycle_support_sizes(ctx):
    assert len(cycle_support(CycleSymbol.make(-3, root(-3, ctx), ctx), ctx)) == 1
    assert len(cycle_support(CycleSymbol.make(-23, root(-23, ctx), ctx), ctx)) == 3
    for D in (-48, -108, -180):
        sizes = {len(cycle_support(CycleSymbol.make(D, int(s), ctx, canonical=False), ctx)) for s in valid_s(D, ctx)}
        assert sizes == {len(class_reps(D))}


def test_symbol_validation(ctx):
    with pytest.raises(ValueError):
        CycleSymbol.make(-3, 1, ctx)
    with pytest.raises(ValueError):
        CycleSymbol.make(-17 * 3 - 0, 0, ctx)
    with pytest.raises(ValueError):
        CycleSymbol.make(5, 0, ctx)
    a, b = (int(s) for s in valid_s(-3, ctx))
    assert CycleSymbol.make(-3, a, ctx) == CycleSymbol.make(-3, b, ctx) == CycleSymbol(-3, 215)


def test_hecke_examples(ctx):
    s = root(-3, ctx)
    x = FormalCycle.symbol(-3, s, ctx)
    t2 = hecke_T(2, x, ctx)
    assert t2 == FormalCycle.symbol(-12, 2 * s, ctx) - x
    t3 = hecke_T(3, x, ctx)
    assert t3 == FormalCycle.symbol(-27, 3 * s, ctx)
    zero = FormalCycle(ctx)
    assert hecke_T(2, zero, ctx) == zero and not hecke_T(2, zero, ctx)
    with pytest.raises(ValueError):
        hecke_T(17, x, ctx)


def test_hecke_division_term(ctx):
    # T_2 on (-12, s): (-48, 2s) + 0 + 2 (-3, s')
    s = root(-12, ctx)
    out = hecke_T(2, FormalCycle.symbol(-12, s, ctx), ctx)
    assert out.coeff(-48, 2 * s) == 1
    assert out.coeff(-3, root(-3, ctx)) == 2
    assert len(out) == 2


def test_hecke_linear(ctx):
    x = FormalCycle.symbol(-3, root(-3, ctx), ctx)
    y = FormalCycle.symbol(-7, root(-7, ctx), ctx)
    for ell in (2, 3, 5, 7):
        assert hecke_T(ell, Fraction(3, 2) * x - 4 * y, ctx) == Fraction(3, 2) * hecke_T(ell, x, ctx) - 4 * hecke_T(ell, y, ctx)


@pytest.mark.parametrize("l,q", [(2, 3), (2, 5), (3, 5)])
@pytest.mark.parametrize("D", [-3, -7])
def test_hecke_commute(ctx, l, q, D):
    x = FormalCycle.symbol(D, root(D, ctx), ctx)
    assert hecke_T(l, hecke_T(q, x, ctx), ctx) == hecke_T(q, hecke_T(l, x, ctx), ctx)


def test_atkin_lehner_W(ctx):
    s = root(-23, ctx)
    x = FormalCycle.symbol(-23, s, ctx) + 2 * FormalCycle.symbol(-3, root(-3, ctx), ctx)
    assert atkin_lehner_W(x) == x
    assert atkin_lehner_W(atkin_lehner_W(x)) == x
    raw = CycleSymbol.make(-23, s, ctx, canonical=False)
    assert atkin_lehner_W(raw, ctx) == CycleSymbol(-23, 578 - raw.s)
    assert atkin_lehner_W(atkin_lehner_W(raw, ctx), ctx) == raw


def test_json_round_trip(ctx):
    x = Fraction(-7, 3) * FormalCycle.symbol(-23, root(-23, ctx), ctx) + FormalCycle.symbol(-3, root(-3, ctx), ctx)
    text = x.to_json()
    rows = json.loads(text)
    assert {tuple(sorted(r)) for r in rows} == {("D", "coeff_den", "coeff_num", "s")}
    assert FormalCycle.from_json(text, ctx) == x
