"""Special points, embedding matrices and formal sums of special cycles.

A cycle symbol (D, s) stands for the sum of the special points of the
Gamma_ns classes in Q_{ns,D,s}.  Formal cycles are stored with s replaced
by min(s, 2p^2 - s), since the plus-quotient cycles do not see the sign.
"""

from __future__ import annotations

import cmath
import json
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Union

from .arith import is_prime, kronecker
from .cartan import CartanContext, CartanForm, cartan_class_reps, in_mns, in_qns, valid_s
from .qforms import Mat2, QuadForm

log = logging.getLogger(__name__)

__all__ = [
    "SpecialPoint",
    "special_point",
    "embedding_matrix",
    "fixed_point",
    "CycleSymbol",
    "FormalCycle",
    "cycle_support",
    "hecke_T",
    "atkin_lehner_W",
]


@dataclass(frozen=True)
class SpecialPoint:
    """The root z = (-B + i sqrt|D|) / 2A of a positive definite form in the upper half plane."""

    form: QuadForm

    @property
    def exact(self) -> tuple[int, int, int]:
        """(u, n, w) with z = (u + i sqrt(n)) / w."""
        f = self.form
        return (-f.b, -f.disc, 2 * f.a)

    @property
    def value(self) -> complex:
        u, n, w = self.exact
        return complex(u / w, math.sqrt(n) / w)

    @property
    def imag(self) -> float:
        return self.value.imag

    def __repr__(self) -> str:
        u, n, w = self.exact
        return f"({u} + i*sqrt({n}))/{w}"


def special_point(f: QuadForm) -> SpecialPoint:
    if not f.is_positive_definite:
        raise ValueError(f"{f} is not positive definite; it has no special point")
    return SpecialPoint(f)


def embedding_matrix(f: QuadForm, tr_omega: int, ctx: CartanContext | None = None) -> Mat2:
    """The matrix [[(t-B)/2, -C], [A, (t+B)/2]] attached to f and a trace t.

    Its characteristic polynomial has discriminant disc(f) and its fixed point on
    the upper half plane is the special point of f.  With a context, membership
    of f in Q_ns and of the output in M_ns are checked.
    """
    t = int(tr_omega)
    a, b, c = f
    if (t - b) % 2:
        raise ValueError(f"trace {t} and B = {b} have different parity (t^2 must equal D mod 4)")
    M = Mat2((t - b) // 2, -c, a, (t + b) // 2)
    if ctx is not None:
        if not in_qns(f, ctx):
            raise ValueError(f"{f} is not in Q_ns")
        if not in_mns(M, ctx):
            raise AssertionError(f"{M} should lie in M_ns")
    return M


def fixed_point(M: Mat2) -> complex:
    """The fixed point in the upper half plane of an elliptic or complex-multiplication matrix."""
    a, b, c, d = M.entries()
    if c == 0:
        raise ValueError(f"{M} has no fixed point in the upper half plane")
    disc = (a + d) ** 2 - 4 * M.det
    if disc >= 0:
        raise ValueError(f"{M} is not elliptic")
    z = ((a - d) + cmath.sqrt(disc)) / (2 * c)
    return z if z.imag > 0 else z.conjugate()


@dataclass(frozen=True, order=True)
class CycleSymbol:
    """A pair (D, s) with s^2 = eps*D (mod 4p^2); s is kept as an integer in [0, 2p^2)."""

    D: int
    s: int

    @classmethod
    def make(cls, D: int, s, ctx: CartanContext, canonical: bool = True) -> CycleSymbol:
        D, s = int(D), int(s) % ctx.s_modulus
        if D >= 0:
            raise ValueError(f"D = {D} must be negative")
        if D % ctx.p == 0:
            raise ValueError(f"p = {ctx.p} divides D = {D}")
        if (s * s - ctx.eps * D) % (4 * ctx.p2):
            raise ValueError(f"s = {s} does not satisfy s^2 = eps*D (mod 4p^2) for D = {D}")
        if canonical:
            s = min(s, ctx.s_modulus - s)
        return cls(D, s)

    def negate(self, ctx: CartanContext) -> CycleSymbol:
        return CycleSymbol(self.D, (-self.s) % ctx.s_modulus)

    def canonical(self, ctx: CartanContext) -> CycleSymbol:
        return CycleSymbol(self.D, min(self.s, (-self.s) % ctx.s_modulus))


class FormalCycle:
    """A finitely supported Q-linear combination of canonical cycle symbols."""

    def __init__(self, ctx: CartanContext, terms: Union[dict, Iterable, None] = None):
        self.ctx = ctx
        self._terms: dict[CycleSymbol, Fraction] = {}
        items = terms.items() if isinstance(terms, dict) else (terms or ())
        for sym, c in items:
            self._add_term(sym, c)

    @classmethod
    def symbol(cls, D: int, s, ctx: CartanContext) -> FormalCycle:
        return cls(ctx, {CycleSymbol.make(D, s, ctx): 1})

    def _add_term(self, sym, c) -> None:
        if not isinstance(sym, CycleSymbol):
            sym = CycleSymbol.make(*sym, self.ctx)
        else:
            sym = CycleSymbol.make(sym.D, sym.s, self.ctx)
        c = Fraction(c)
        v = self._terms.get(sym, Fraction(0)) + c
        if v:
            self._terms[sym] = v
        else:
            self._terms.pop(sym, None)

    def items(self) -> Iterator[tuple[CycleSymbol, Fraction]]:
        return iter(sorted(self._terms.items(), key=lambda kv: (-kv[0].D, kv[0].s)))

    def coeff(self, D: int, s) -> Fraction:
        return self._terms.get(CycleSymbol.make(D, s, self.ctx), Fraction(0))

    def support(self) -> list[CycleSymbol]:
        return [sym for sym, _ in self.items()]

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FormalCycle):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __add__(self, other: FormalCycle) -> FormalCycle:
        self._check_ctx(other)
        out = FormalCycle(self.ctx, self._terms)
        for sym, c in other._terms.items():
            out._add_term(sym, c)
        return out

    def __neg__(self) -> FormalCycle:
        return FormalCycle(self.ctx, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: FormalCycle) -> FormalCycle:
        return self + (-other)

    def __mul__(self, k) -> FormalCycle:
        k = Fraction(k)
        return FormalCycle(self.ctx, {sym: k * c for sym, c in self._terms.items()})

    __rmul__ = __mul__

    def _check_ctx(self, other: FormalCycle) -> None:
        if self.ctx != other.ctx:
            raise ValueError("cycles live over different Cartan contexts")

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(f"{c}*({sym.D},{sym.s})" for sym, c in self.items())

    def to_json(self) -> str:
        rows = [
            {"D": sym.D, "s": sym.s, "coeff_num": c.numerator, "coeff_den": c.denominator}
            for sym, c in self.items()
        ]
        return json.dumps(rows)

    @classmethod
    def from_json(cls, text: str, ctx: CartanContext) -> FormalCycle:
        rows = json.loads(text)
        return cls(
            ctx,
            [((r["D"], r["s"]), Fraction(r["coeff_num"], r["coeff_den"])) for r in rows],
        )


def cycle_support(sym: CycleSymbol, ctx: CartanContext) -> list[CartanForm]:
    """The Gamma_ns classes whose special points make up the cycle (D, s)."""
    sym = CycleSymbol.make(sym.D, sym.s, ctx, canonical=False)
    return cartan_class_reps(sym.D, sym.s, ctx)


def _division_residue(D2: int, s: int, ell: int, ctx: CartanContext) -> int | None:
    n = ctx.s_modulus
    for r in valid_s(D2, ctx):
        if (ell * int(r) - s) % n == 0 or (ell * int(r) + s) % n == 0:
            return int(r)
    return None


def hecke_T(ell: int, x: FormalCycle, ctx: CartanContext) -> FormalCycle:
    """T_ell (D, s) = (D ell^2, s ell) + (D/ell) (D, s) + ell (D/ell^2, s'),
    extended linearly; the last term only when ell^2 | D and a valid s' exists."""
    if ell == ctx.p:
        raise ValueError(f"T_ell is not defined here for ell = p = {ell}")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if x.ctx != ctx:
        raise ValueError("cycle and context disagree")
    out = FormalCycle(ctx)
    for sym, c in x.items():
        D, s = sym.D, sym.s
        out._add_term((D * ell * ell, s * ell), c)
        k = kronecker(D, ell)
        if k:
            out._add_term((D, s), k * c)
        if D % (ell * ell) == 0:
            D2 = D // (ell * ell)
            s2 = _division_residue(D2, s, ell, ctx)
            if s2 is None:
                log.info("T_%d: dropping (%d/%d^2, s/%d) for (%d, %d), no valid residue", ell, D, ell, ell, D, s)
            else:
                out._add_term((D2, s2), ell * c)
    return out


def atkin_lehner_W(x: Union[FormalCycle, CycleSymbol], ctx: CartanContext | None = None):
    """(D, s) -> (D, -s).  On formal cycles, whose symbols are sign-canonical,
    this is the identity; on a raw symbol it returns (D, 2p^2 - s)."""
    if isinstance(x, CycleSymbol):
        if ctx is None:
            raise TypeError("a context is needed to negate a raw symbol")
        return x.negate(ctx)
    return FormalCycle(x.ctx, [((sym.D, -sym.s), c) for sym, c in x.items()])
