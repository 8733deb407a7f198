import random

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from cartan_gkz import intmat

small = st.integers(-9, 9)


def mats(m, n):
    return st.lists(st.lists(small, min_size=n, max_size=n), min_size=m, max_size=m)


@given(st.integers(1, 5).flatmap(lambda n: mats(n, n)))
def test_det_matches_sympy(A):
    assert intmat.det(A) == sympy.Matrix(A).det()


def test_det_empty_and_examples():
    assert intmat.det([]) == 1
    assert intmat.det([[0, 0, -17], [0, 2, 0], [-17, 0, -10]]) == -578


@given(st.tuples(st.integers(1, 4), st.integers(1, 4)).flatmap(lambda mn: mats(*mn)))
def test_snf(A):
    U, S, V = intmat.smith_normal_form(A)
    assert intmat.matmul(intmat.matmul(U, A), V) == S
    assert abs(intmat.det(U)) == 1 and abs(intmat.det(V)) == 1
    d = [S[i][i] for i in range(min(len(A), len(A[0])))]
    assert all(S[i][j] == 0 for i in range(len(S)) for j in range(len(S[0])) if i != j)
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (b == 0) if a == 0 else (b % a == 0)


@given(st.tuples(st.integers(1, 3), st.integers(1, 5)).flatmap(lambda mn: mats(*mn)))
def test_integer_kernel(A):
    K = intmat.integer_kernel(A)
    n = len(A[0])
    rank = np.linalg.matrix_rank(np.array(A, dtype=float))
    assert len(K) == n - rank
    for v in K:
        assert intmat.matvec(A, v) == [0] * len(A)
    # saturated: the kernel basis extends to a unimodular matrix (gcd of maximal minors is 1)
    if K:
        _, S, _ = intmat.smith_normal_form(K)
        assert all(S[i][i] == 1 for i in range(len(K)))


@given(st.integers(1, 5).flatmap(lambda n: mats(n, n)))
def test_signature_vs_eigenvalues(A):
    G = [[A[i][j] + A[j][i] for j in range(len(A))] for i in range(len(A))]
    ev = np.linalg.eigvalsh(np.array(G, dtype=float))
    tol = 1e-9
    assert intmat.signature(G) == (int((ev > tol).sum()), int((ev < -tol).sum()))


def test_inverse():
    A = [[2, 1], [7, 4]]
    assert intmat.inverse(A) == [[4, -1], [-7, 2]]
    with pytest.raises(ZeroDivisionError):
        intmat.inverse([[1, 2], [2, 4]])


def test_solve_unit_combination():
    rng = random.Random(3)
    for _ in range(200):
        w = [rng.randint(-50, 50) for _ in range(5)]
        from math import gcd
        from functools import reduce

        if reduce(gcd, w) != 1:
            with pytest.raises(ValueError):
                intmat.solve_unit_combination(w)
            continue
        f = intmat.solve_unit_combination(w)
        assert intmat.dot(w, f) == 1


def test_lll_gram():
    rng = random.Random(5)
    for _ in range(20):
        B = [[rng.randint(-20, 20) for _ in range(4)] for _ in range(4)]
        if intmat.det(B) == 0:
            continue
        G = intmat.matmul(B, intmat.transpose(B))
        T, G2 = intmat.lll_gram(G)
        assert abs(intmat.det(T)) == 1
        assert intmat.matmul(intmat.matmul(T, G), intmat.transpose(T)) == G2
        lam1 = min(intmat.dot(v, intmat.matvec(G, v)) for v in intmat.short_vectors(G, G2[0][0]))
        assert G2[0][0] <= 2 ** 3 * lam1  # LLL bound 2^(n-1) lambda_1 for delta = 3/4


def _e8_bruteforce_roots():
    # roots of E8 in the even coordinate system: all (+-1, +-1, 0^6) and (+-1/2)^8 with even sign count
    roots = 0
    roots += 4 * 28  # choose 2 positions, 4 signs
    roots += 2**7
    return roots


def test_short_vectors_e8():
    from cartan_gkz.lattice import e8_lattice

    G = [list(r) for r in e8_lattice().gram]
    vs = intmat.short_vectors(G, 2)
    assert len(vs) == _e8_bruteforce_roots() == 240
    assert all(intmat.dot(v, intmat.matvec(G, v)) == 2 for v in vs)


def test_short_vectors_zn():
    n = 3
    G = intmat.identity(n)
    vs = intmat.short_vectors(G, 2)
    brute = [
        (a, b, c)
        for a in range(-2, 3)
        for b in range(-2, 3)
        for c in range(-2, 3)
        if 0 < a * a + b * b + c * c <= 2
    ]
    assert sorted(map(tuple, vs)) == sorted(brute)
    with pytest.raises(ValueError):
        intmat.short_vectors([[1, 0], [0, -1]], 2)
