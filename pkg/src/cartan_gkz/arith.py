"""Modular arithmetic helpers: Kronecker symbols, square roots mod 4p^2, CRT
and lifting of SL_2(Z/m) to SL_2(Z)."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt

from sympy.ntheory import sqrt_mod

__all__ = [
    "ResidueClass",
    "kronecker",
    "crt",
    "sqrt_mod_4p2",
    "sqrt_mod_4p2_bruteforce",
    "lift_sl2",
    "is_prime",
    "primes_up_to",
    "is_fundamental_discriminant",
]


@dataclass(frozen=True, order=True)
class ResidueClass:
    """An element of Z/modulus, stored as its representative in [0, modulus)."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus <= 0:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "value", self.value % self.modulus)

    def __int__(self) -> int:
        return self.value

    def __index__(self) -> int:
        return self.value

    def __neg__(self) -> ResidueClass:
        return ResidueClass(-self.value, self.modulus)

    def __mul__(self, k: int) -> ResidueClass:
        return ResidueClass(self.value * int(k), self.modulus)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a/n)."""
    if n == 0:
        raise ValueError("kronecker symbol (a/0) is not defined here")
    result = 1
    if n < 0:
        n = -n
        if a < 0:
            result = -result
    # factor out powers of two from n
    v = (n & -n).bit_length() - 1
    n >>= v
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            result = -result
    # Jacobi symbol (a/n) with n odd positive
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def crt(residues: list[int], moduli: list[int]) -> int:
    """Chinese remainder theorem for pairwise coprime moduli."""
    x, m = 0, 1
    for r, n in zip(residues, moduli):
        if gcd(m, n) != 1:
            raise ValueError(f"moduli {m} and {n} are not coprime")
        x += m * ((r - x) * pow(m, -1, n) % n)
        m *= n
    return x % m


def sqrt_mod_4p2(t: int, p: int) -> list[ResidueClass]:
    """All s in Z/2p^2 with s^2 = t (mod 4p^2), sorted by representative.

    Well defined since (s + 2p^2)^2 = s^2 (mod 4p^2).
    """
    p2 = p * p
    t4 = t % 4
    if t4 == 0:
        mod4 = [0, 2]
    elif t4 == 1:
        mod4 = [1, 3]
    else:
        return []
    roots_p2 = sqrt_mod(t % p2, p2, all_roots=True) or []
    out = {crt([r4, rp], [4, p2]) % (2 * p2) for r4 in mod4 for rp in roots_p2}
    return [ResidueClass(s, 2 * p2) for s in sorted(out)]


def sqrt_mod_4p2_bruteforce(t: int, p: int) -> list[ResidueClass]:
    m = 2 * p * p
    return [ResidueClass(s, m) for s in range(m) if (s * s - t) % (2 * m) == 0]


Matrix2 = tuple[tuple[int, int], tuple[int, int]]


def lift_sl2(mbar, m: int) -> Matrix2:
    """Lift a 2x2 matrix with determinant 1 mod m to SL_2(Z).

    The bottom row is shifted by multiples of m until it is coprime; the top
    row is then the particular solution of ad - bc = 1 congruent to the input.
    """
    (a, b), (c, d) = ((int(x) % m for x in row) for row in mbar)
    if (a * d - b * c - 1) % m:
        raise ValueError(f"determinant of {mbar} is not 1 modulo {m}")
    if m == 1:
        return ((1, 0), (0, 1))
    ca, cb, cc, cd = (_centered(x, m) for x in (a, b, c, d))
    if ca * cd - cb * cc == 1:
        return ((ca, cb), (cc, cd))
    if c == 0:
        c = m
    k = 0
    while gcd(c, d + k * m) != 1:
        k += 1
    d += k * m
    # x d - y c = 1
    g, u, v = _xgcd(d, c)
    x, y = u, -v
    assert g == 1 and x * d - y * c == 1
    # shift (x, y) by t (c, d) so that it matches (a, b) mod m
    _, lam, mu = _xgcd(c, d)
    t = lam * (a - x) + mu * (b - y)
    x, y = x + t * c, y + t * d
    M = ((x, y), (c, d))
    assert x * d - y * c == 1
    return M


def _centered(x: int, m: int) -> int:
    x %= m
    return x - m if 2 * x > m else x


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, u, v) with u a + v b = g = gcd(a, b) >= 0."""
    u0, v0, u1, v1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        u0, u1 = u1, u0 - q * u1
        v0, v1 = v1, v0 - q * v1
    if a < 0:
        a, u0, v0 = -a, -u0, -v0
    return a, u0, v0


xgcd = _xgcd


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % q for q in range(3, isqrt(n) + 1, 2))


def primes_up_to(n: int) -> list[int]:
    return [q for q in range(2, n + 1) if is_prime(q)]


def _squarefree(n: int) -> bool:
    n = abs(n)
    q = 2
    while q * q <= n:
        if n % (q * q) == 0:
            return False
        q += 1
    return True


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False
