"""Exact integer and rational matrix routines on plain lists of lists.

Smith form with transforms, integer kernels, Bareiss determinants, exact
signatures of symmetric matrices, LLL on Gram matrices and short vector
enumeration.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

from .arith import xgcd

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def to_matrix(rows: Sequence[Sequence]) -> list[list]:
    return [list(r) for r in rows]


def transpose(A):
    return [list(col) for col in zip(*A)] if A else []


def matmul(A, B):
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A, v):
    return [sum(a * x for a, x in zip(row, v)) for row in A]


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def block_diag(*blocks):
    n = sum(len(b) for b in blocks)
    out = [[0] * n for _ in range(n)]
    k = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[k + i][k + j] = x
        k += len(b)
    return out


def det(A) -> int:
    """Bareiss fraction-free determinant; exact for integer input."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def leading_minors(A) -> list[int]:
    return [det([row[:k] for row in A[:k]]) for k in range(1, len(A) + 1)]


def inverse(A) -> list[list[Fraction]]:
    """Exact inverse over Q by Gauss-Jordan."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def smith_normal_form(A) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, S, V) with U A V = S diagonal, d_1 | d_2 | ..., d_i >= 0,
    and U, V unimodular."""
    S = [list(map(int, r)) for r in A]
    m = len(S)
    n = len(S[0]) if m else 0
    U, V = identity(m), identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (S, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        S[dst] = [a + q * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for M in (S, V):
            for row in M:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        nz = [(abs(S[i][j]), i, j) for i in range(t, m) for j in range(t, n) if S[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = S[t][t]
            for i in range(t + 1, m):
                if S[i][t]:
                    add_row(i, t, -(S[i][t] // piv))
            for j in range(t + 1, n):
                if S[t][j]:
                    add_col(j, t, -(S[t][j] // piv))
            rest = [(abs(S[i][t]), i, "r") for i in range(t + 1, m) if S[i][t]]
            rest += [(abs(S[t][j]), j, "c") for j in range(t + 1, n) if S[t][j]]
            if rest:
                _, k, kind = min(rest)
                swap_rows(t, k) if kind == "r" else swap_cols(t, k)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if S[i][j] % piv),
                None,
            )
            if bad is not None:
                add_row(t, bad[0], 1)
                continue
            break
        if S[t][t] < 0:
            S[t] = [-x for x in S[t]]
            U[t] = [-x for x in U[t]]
    return U, S, V


def solve_unit_combination(w: Sequence[int]) -> list[int]:
    """An integer vector f with w . f = 1; requires gcd(w) = 1."""
    coeffs = [0] * len(w)
    g = 0
    for i, x in enumerate(w):
        if x == 0:
            continue
        g2, u, v = xgcd(g, x)
        coeffs = [c * u for c in coeffs]
        coeffs[i] = v
        g = g2
    if g != 1:
        raise ValueError(f"gcd of {list(w)} is {g}, not 1")
    return coeffs


def column_echelon(A) -> tuple[Matrix, Matrix, int]:
    """Unimodular column reduction: returns (H, V, r) with A V = H, where the
    last len(V) - r columns of H vanish."""
    H = [list(map(int, r)) for r in A]
    m = len(H)
    n = len(H[0]) if m else 0
    V = identity(n)
    r = 0
    for i in range(m):
        if r >= n:
            break
        while True:
            nz = [(abs(H[i][j]), j) for j in range(r, n) if H[i][j]]
            if not nz:
                break
            _, j0 = min(nz)
            for M in (H, V):
                for row in M:
                    row[r], row[j0] = row[j0], row[r]
            done = True
            for j in range(r + 1, n):
                if H[i][j]:
                    q = H[i][j] // H[i][r]
                    for M in (H, V):
                        for row in M:
                            row[j] -= q * row[r]
                    if H[i][j]:
                        done = False
            if done:
                r += 1
                break
    return H, V, r


def integer_kernel(A) -> list[list[int]]:
    """A Z-basis (as vectors) of {x in Z^n : A x = 0}."""
    _, V, r = column_echelon(A)
    n = len(V)
    return [[V[i][j] for i in range(n)] for j in range(r, n)]


def signature(G) -> tuple[int, int]:
    """(n_plus, n_minus) of a symmetric rational matrix by exact congruence
    diagonalization."""
    M = [[Fraction(x) for x in row] for row in G]
    n = len(M)
    pos = neg = 0
    for k in range(n):
        if M[k][k] == 0:
            j = next((j for j in range(k + 1, n) if M[j][j] != 0), None)
            if j is not None:
                M[k], M[j] = M[j], M[k]
                for row in M:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if M[k][j] != 0), None)
                if j is None:
                    continue  # null direction
                # e_k -> e_k + e_j makes the diagonal entry 2 M[k][j]
                M[k] = [a + b for a, b in zip(M[k], M[j])]
                for row in M:
                    row[k] += row[j]
        d = M[k][k]
        if d > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            f = M[i][k] / d
            if f:
                M[i] = [a - f * b for a, b in zip(M[i], M[k])]
                for row in M:
                    row[i] -= f * row[k]
    return pos, neg


def lll_gram(G, delta: Fraction = Fraction(3, 4)) -> tuple[Matrix, Matrix]:
    """LLL reduction of a positive definite integral Gram matrix.

    Returns (T, G') with G' = T G T^t and T unimodular (rows are the new basis).
    """
    n = len(G)
    B = identity(n)

    def gram():
        return matmul(matmul(B, G), transpose(B))

    def gso(Gm):
        mu = [[Fraction(0)] * n for _ in range(n)]
        bstar = [Fraction(0)] * n
        for i in range(n):
            for j in range(i):
                t = Fraction(Gm[i][j]) - sum(mu[j][k] * mu[i][k] * bstar[k] for k in range(j))
                mu[i][j] = t / bstar[j]
            bstar[i] = Fraction(Gm[i][i]) - sum(mu[i][k] ** 2 * bstar[k] for k in range(i))
        return mu, bstar

    k = 1
    mu, bstar = gso(gram())
    while k < n:
        for j in range(k - 1, -1, -1):
            q = round(mu[k][j])
            if q:
                B[k] = [a - q * b for a, b in zip(B[k], B[j])]
                mu, bstar = gso(gram())
        if bstar[k] >= (delta - mu[k][k - 1] ** 2) * bstar[k - 1]:
            k += 1
        else:
            B[k], B[k - 1] = B[k - 1], B[k]
            mu, bstar = gso(gram())
            k = max(k - 1, 1)
    return B, gram()


def short_vectors(G, bound: int) -> list[list[int]]:
    """All nonzero x with x^t G x <= bound for positive definite G
    (Fincke-Pohst with floating point pruning and exact final check)."""
    n = len(G)
    # LDL^t over Q, then floats for pruning
    L = [[Fraction(0)] * n for _ in range(n)]
    Dg = [Fraction(0)] * n
    for i in range(n):
        for j in range(i + 1):
            s = Fraction(G[i][j]) - sum(L[i][k] * L[j][k] * Dg[k] for k in range(j))
            if i == j:
                Dg[i] = s
                L[i][i] = Fraction(1)
            else:
                L[i][j] = s / Dg[j]
    if any(d <= 0 for d in Dg):
        raise ValueError("Gram matrix is not positive definite")
    Lf = [[float(x) for x in row] for row in L]
    Df = [float(d) for d in Dg]
    out = []
    x = [0] * n
    slack = 1e-9 * (1 + bound)

    # x^t G x = sum_k D_k (x_k + sum_{i>k} L[i][k] x_i)^2
    def rec(k, remaining):
        if k < 0:
            if any(x):
                v = sum(x[i] * G[i][j] * x[j] for i in range(n) for j in range(n))
                if v <= bound:
                    out.append(list(x))
            return
        c = sum(Lf[i][k] * x[i] for i in range(k + 1, n))
        r = math.sqrt(max(remaining, 0.0) / Df[k])
        lo, hi = math.ceil(-c - r - 1e-9), math.floor(-c + r + 1e-9)
        for t in range(lo, hi + 1):
            x[k] = t
            used = Df[k] * (t + c) ** 2
            if used <= remaining + slack:
                rec(k - 1, remaining - used)
        x[k] = 0

    rec(n - 1, float(bound))
    return out
