"""Integral binary quadratic forms [A, B, C] = AX^2 + BXY + CY^2 under the
right action of SL_2(Z)."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterable, Union

__all__ = [
    "QuadForm",
    "Mat2",
    "Sl2Matrix",
    "IDENTITY",
    "as_mat2",
    "act",
    "reduce",
    "is_reduced",
    "class_reps",
    "class_number",
    "is_primitive",
]


@dataclass(frozen=True)
class QuadForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_positive_definite(self) -> bool:
        return self.disc < 0 and self.a > 0

    def __iter__(self):
        yield self.a
        yield self.b
        yield self.c

    def __neg__(self) -> QuadForm:
        return QuadForm(-self.a, -self.b, -self.c)

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def __repr__(self) -> str:
        return f"[{self.a},{self.b},{self.c}]"


@dataclass(frozen=True, eq=False)
class Mat2:
    """A 2x2 integer matrix [[alpha, beta], [gamma, delta]]."""

    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        pass

    def entries(self) -> tuple[int, int, int, int]:
        return (self.alpha, self.beta, self.gamma, self.delta)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.entries() == other.entries()

    def __hash__(self) -> int:
        return hash(self.entries())

    @property
    def det(self) -> int:
        return self.alpha * self.delta - self.beta * self.gamma

    @property
    def trace(self) -> int:
        return self.alpha + self.delta

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.alpha, self.beta), (self.gamma, self.delta))

    def __matmul__(self, other: Mat2) -> Mat2:
        a, b, c, d = self.alpha, self.beta, self.gamma, self.delta
        e, f, g, h = other.alpha, other.beta, other.gamma, other.delta
        cls = Sl2Matrix if isinstance(self, Sl2Matrix) and isinstance(other, Sl2Matrix) else Mat2
        return cls(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def mod(self, m: int) -> tuple[int, int, int, int]:
        return (self.alpha % m, self.beta % m, self.gamma % m, self.delta % m)

    def __repr__(self) -> str:
        return f"[[{self.alpha},{self.beta}],[{self.gamma},{self.delta}]]"


class Sl2Matrix(Mat2):
    """Element of SL_2(Z); the constructor rejects determinants other than 1."""

    def __post_init__(self):
        if self.det != 1:
            raise ValueError(f"{Mat2.__repr__(self)} has determinant {self.det}, not 1")

    def inverse(self) -> Sl2Matrix:
        return Sl2Matrix(self.delta, -self.beta, -self.gamma, self.alpha)


IDENTITY = Sl2Matrix(1, 0, 0, 1)
_S = Sl2Matrix(0, -1, 1, 0)

MatLike = Union[Mat2, Iterable]


def as_mat2(M: MatLike) -> Mat2:
    """Accept a Mat2, a pair of rows, or a flat 4-sequence."""
    if isinstance(M, Mat2):
        return M
    M = list(M)
    if len(M) == 2:
        (a, b), (c, d) = M
    else:
        a, b, c, d = M
    return Mat2(int(a), int(b), int(c), int(d))


def act(f: QuadForm, M: Mat2) -> QuadForm:
    """Right action f . M, i.e. the form (X, Y) -> f(alpha X + beta Y, gamma X + delta Y)."""
    A, B, C = f.a, f.b, f.c
    al, be, ga, de = M.alpha, M.beta, M.gamma, M.delta
    return QuadForm(
        A * al * al + B * al * ga + C * ga * ga,
        2 * A * al * be + B * (al * de + be * ga) + 2 * C * ga * de,
        A * be * be + B * be * de + C * de * de,
    )


def is_reduced(f: QuadForm) -> bool:
    a, b, c = f
    if not (abs(b) <= a <= c):
        return False
    if (abs(b) == a or a == c) and b < 0:
        return False
    return True


def reduce(f: QuadForm) -> tuple[QuadForm, Sl2Matrix]:
    """Gauss reduction of a positive definite form.

    Returns the reduced form g together with M in SL_2(Z) such that act(f, M) == g.
    """
    if not f.is_positive_definite:
        raise ValueError(f"{f} is not positive definite")
    M = IDENTITY
    g = f
    while True:
        # translate b into (-a, a]
        k = (g.a - g.b) // (2 * g.a)
        if k:
            T = Sl2Matrix(1, k, 0, 1)
            g, M = act(g, T), M @ T
        if g.a > g.c:
            g, M = act(g, _S), M @ _S
            continue
        if g.a == g.c and g.b < 0:
            g, M = act(g, _S), M @ _S
        break
    return g, M


def class_reps(D: int) -> list[QuadForm]:
    """Reduced positive definite forms of discriminant D, imprimitive ones included."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    amax = isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            f = QuadForm(a, b, num // (4 * a))
            if is_reduced(f):
                out.append(f)
    return out


def class_number(D: int) -> int:
    return len(class_reps(D))


def is_primitive(f: QuadForm) -> bool:
    return gcd(gcd(f.a, f.b), f.c) == 1
