"""Randomized congruence invariants of the Cartan actions."""

import random

from hypothesis import given, settings, strategies as st

from cartan_gkz.cartan import (
    CartanContext,
    atkin_lehner_rep,
    in_gamma_ns,
    in_qns,
    random_gamma_ns,
    random_qns_form,
    s_invariant,
)
from cartan_gkz.qforms import act

CTX = CartanContext(17, 5)
N_PAIRS = 600


def _pairs(seed, plus):
    rng = random.Random(seed)
    W = atkin_lehner_rep(CTX)
    for _ in range(N_PAIRS):
        f = random_qns_form(CTX, rng)
        M = random_gamma_ns(CTX, rng)
        yield f, (M @ W if plus else M)


def test_gamma_ns_congruences():
    p, eps = CTX.p, CTX.eps
    count = 0
    for f, M in _pairs(11, plus=False):
        assert in_gamma_ns(M, CTX)
        g = act(f, M)
        assert (g.a - f.a) % p == 0
        assert (g.b - f.b) % (2 * p) == 0
        assert (g.c - f.c) % p == 0
        assert ((f.a - g.a) - eps * (f.c - g.c)) % (p * p) == 0
        assert in_qns(g, CTX)
        count += 1
    assert count >= 500


def test_gamma_ns_plus_congruences():
    # the fourth congruence is checked as A + A' = eps (C + C') (mod p^2),
    # the form equivalent to s -> -s
    p, eps = CTX.p, CTX.eps
    count = 0
    for f, M in _pairs(12, plus=True):
        assert M.det == 1 and not in_gamma_ns(M, CTX)
        g = act(f, M)
        assert (g.a + f.a) % p == 0
        assert (g.b + f.b) % (2 * p) == 0
        assert (g.c + f.c) % p == 0
        assert ((f.a + g.a) - eps * (f.c + g.c)) % (p * p) == 0
        assert in_qns(g, CTX)
        count += 1
    assert count >= 500


def test_s_invariant_gamma_invariance_and_w_antisymmetry():
    W = atkin_lehner_rep(CTX)
    rng = random.Random(13)
    n = 0
    while n < N_PAIRS:
        f = random_qns_form(CTX, rng)
        if f.disc % CTX.p == 0:
            continue
        s = s_invariant(f, CTX)
        assert (int(s) ** 2 - CTX.eps * f.disc) % (4 * CTX.p2) == 0
        M = random_gamma_ns(CTX, rng)
        assert s_invariant(act(f, M), CTX) == s
        assert s_invariant(act(f, W), CTX) == -s
        assert s_invariant(act(f, M @ W), CTX) == -s
        n += 1


@settings(max_examples=300)
@given(st.integers(0, 2**32 - 1))
def test_random_gamma_ns_membership(seed):
    M = random_gamma_ns(CTX, random.Random(seed))
    assert M.det == 1 and in_gamma_ns(M, CTX)
