"""Coefficient tables for vector-valued forms indexed by Z/2p^2 and for
classical Jacobi forms of index p^2.

The vector-valued coefficient at (m, s) is stored with m = n - beta(s), so
Heegner data for a discriminant D lands at m = -D/4p^2.  Nothing here checks
modularity; the tables are bookkeeping for symmetry, support and Hecke
recurrences.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional, Sequence, Union

from .arith import is_fundamental_discriminant, kronecker
from .cartan import CartanContext, valid_s
from .ellcurve import HeckeReport, HeegnerTable, WeierstrassCurve, a_ell, hecke_identity
from .heegner import _division_residue
from .lattice import beta_abc, dual_class

__all__ = [
    "CoeffTable",
    "ClassicalCoeffTable",
    "beta_rep",
    "reindex_jacobi_to_vv",
    "reindex_vv_to_jacobi",
    "assemble_series",
    "SupportReport",
    "validate_support",
    "verify_coeff_hecke",
    "CompareReport",
    "compare_classical",
    "classical_from_series",
]

Key = tuple[Fraction, int]


def _canon(s: int, n: int) -> int:
    s %= n
    return min(s, n - s)


class CoeffTable:
    """Sparse rational coefficients c(m, s), m rational, s in Z/2p^2.

    Setting a value also sets it at -s.  Raw data that is not symmetric is
    rejected unless check=False, which exists so that validate_support has
    something to report on.
    """

    def __init__(self, ctx: CartanContext, entries: Optional[dict] = None, check: bool = True):
        self.ctx = ctx
        self._c: dict[Key, Fraction] = {}
        n = ctx.s_modulus
        for (m, s), v in (entries or {}).items():
            self._c[(Fraction(m), int(s) % n)] = Fraction(v)
        if check:
            for (m, s), v in self._c.items():
                w = self._c.get((m, (-s) % n))
                if w is not None and w != v:
                    raise ValueError(f"c({m},{s}) = {v} but c({m},{-s % n}) = {w}")
            for (m, s), v in list(self._c.items()):
                self._c.setdefault((m, (-s) % n), v)

    def set(self, m, s, value) -> None:
        n = self.ctx.s_modulus
        m, v = Fraction(m), Fraction(value)
        self._c[(m, int(s) % n)] = v
        self._c[(m, (-int(s)) % n)] = v

    def get(self, m, s, default=None):
        return self._c.get((Fraction(m), int(s) % self.ctx.s_modulus), default)

    def __contains__(self, key) -> bool:
        m, s = key
        return (Fraction(m), int(s) % self.ctx.s_modulus) in self._c

    def items(self) -> Iterator[tuple[Key, Fraction]]:
        return iter(sorted(self._c.items()))

    def __len__(self) -> int:
        return len(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoeffTable):
            return NotImplemented
        return self.ctx == other.ctx and self._c == other._c

    def disc_of(self, m) -> Fraction:
        """D = -4p^2 m; an integer for Heegner data."""
        return -4 * self.ctx.p2 * Fraction(m)

    def to_json(self) -> str:
        rows = []
        for (m, s), v in self.items():
            D = self.disc_of(m)
            if D.denominator != 1:
                raise ValueError(f"m = {m} does not come from an integer D")
            rows.append({"D": int(D), "s": s, "num": v.numerator, "den": v.denominator})
        return json.dumps({"p": self.ctx.p, "eps": self.ctx.eps, "entries": rows})

    @classmethod
    def from_json(cls, text: str, check: bool = True) -> CoeffTable:
        obj = json.loads(text)
        ctx = CartanContext(obj["p"], obj["eps"])
        entries = {
            (Fraction(-r["D"], 4 * ctx.p2), r["s"]): Fraction(r["num"], r["den"]) for r in obj["entries"]
        }
        return cls(ctx, entries, check=check)


class ClassicalCoeffTable:
    """Coefficients c(n, r) of a Jacobi form of index N, with r taken mod 2N and c(n, r) = c(n, -r)."""

    def __init__(self, index: int, entries: Optional[dict] = None):
        if index <= 0:
            raise ValueError("index must be positive")
        self.index = index
        self._c: dict[tuple[int, int], Fraction] = {}
        for (n, r), v in (entries or {}).items():
            self.set(n, r, v)

    @property
    def r_modulus(self) -> int:
        return 2 * self.index

    def set(self, n: int, r: int, value) -> None:
        M = self.r_modulus
        key, mirror = (int(n), int(r) % M), (int(n), (-int(r)) % M)
        v = Fraction(value)
        old = self._c.get(mirror)
        if old is not None and mirror != key and old != v:
            raise ValueError(f"c({n},{r}) = {v} conflicts with c({n},{-r}) = {old}")
        self._c[key] = v
        self._c[mirror] = v

    def get(self, n: int, r: int, default=None):
        return self._c.get((int(n), int(r) % self.r_modulus), default)

    def items(self):
        return iter(sorted(self._c.items()))

    def scaled(self, k) -> ClassicalCoeffTable:
        return ClassicalCoeffTable(self.index, {key: Fraction(k) * v for key, v in self._c.items()})

    def to_json(self) -> str:
        rows = [{"n": n, "r": r, "num": v.numerator, "den": v.denominator} for (n, r), v in self.items()]
        return json.dumps({"index": self.index, "entries": rows})

    @classmethod
    def from_json(cls, text: str) -> ClassicalCoeffTable:
        obj = json.loads(text)
        return cls(
            int(obj["index"]),
            {(r["n"], r["r"]): Fraction(r["num"], r["den"]) for r in obj["entries"]},
        )


def beta_rep(s: Union[int, Sequence[int]], ctx: CartanContext) -> tuple[Fraction, int]:
    """(beta(s), class of s).

    An integer s is a class in Z/2p^2 and gets the representative value of
    s^2 eps^-1 / 4p^2 in [0, 1).  A triple (A, B, C) is a dual vector and gets
    its exact norm."""
    if isinstance(s, (tuple, list)):
        x = tuple(int(v) for v in s)
        return beta_abc(x, x, ctx.p) / 2, dual_class(x, ctx)
    s = int(s) % ctx.s_modulus
    N = 4 * ctx.p2
    return Fraction(s * s * ctx.eps_inv % N, N), s


def reindex_jacobi_to_vv(n: int, s, ctx: CartanContext) -> tuple[Fraction, int]:
    """(n, s) -> (n - beta(s), s mod L)."""
    b, cls = beta_rep(s, ctx)
    if n < b:
        raise ValueError(f"n = {n} is below beta(s) = {b}")
    return Fraction(n) - b, cls


def reindex_vv_to_jacobi(m, s, ctx: CartanContext) -> int:
    b, _ = beta_rep(s, ctx)
    n = Fraction(m) + b
    if n.denominator != 1:
        raise ValueError(f"m = {m} is not congruent to -beta(s) mod 1")
    return int(n)


def assemble_series(tbl: HeegnerTable, ctx: CartanContext) -> CoeffTable:
    """c(-D/4p^2, s) = m(D) for every s with s^2 = eps D (mod 4p^2)."""
    out = CoeffTable(ctx)
    for D in tbl.discriminants():
        if kronecker(D, ctx.p) != -1:
            raise ValueError(f"kronecker({D}, {ctx.p}) != -1")
        for s in valid_s(D, ctx):
            out.set(Fraction(-D, 4 * ctx.p2), int(s), tbl[D])
    return out


@dataclass
class SupportReport:
    symmetric: bool = True
    support_ok: bool = True
    h_perp_supported: bool = True
    cusp_ok: bool = True
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.symmetric and self.support_ok and self.cusp_ok

    def to_dict(self) -> dict:
        return {
            "symmetric": self.symmetric,
            "support_ok": self.support_ok,
            "h_perp_supported": self.h_perp_supported,
            "cusp_ok": self.cusp_ok,
            "violations": self.violations,
        }


def validate_support(tbl: CoeffTable) -> SupportReport:
    """Check +-s symmetry, that nonzero c(m, s) with m > 0 sit at D = -4p^2 m
    with s^2 = eps D, that nonzero entries have m > 0, and whether every
    nonzero entry has s in the multiples of p."""
    ctx = tbl.ctx
    n, N = ctx.s_modulus, 4 * ctx.p2
    rep = SupportReport()
    for (m, s), v in tbl.items():
        if tbl.get(m, -s) != v:
            rep.symmetric = False
            rep.violations.append(f"c({m},{s}) != c({m},{-s % n})")
        if not v:
            continue
        if m <= 0:
            rep.cusp_ok = False
            rep.violations.append(f"nonzero coefficient at m = {m} <= 0")
            continue
        D = tbl.disc_of(m)
        if D.denominator != 1 or (s * s - ctx.eps * int(D)) % N:
            rep.support_ok = False
            rep.violations.append(f"c({m},{s}) nonzero but s^2 != eps*D for D = {D}")
        if s % ctx.p:
            rep.h_perp_supported = False
    return rep


def verify_coeff_hecke(tbl: CoeffTable, E: WeierstrassCurve, ell: int, ctx: CartanContext) -> HeckeReport:
    """The Hecke recurrence on coefficients: a_ell c(m, s) = c(ell^2 m, ell s)
    + (D/ell) c(m, s) + ell c(m/ell^2, s') with D = -4p^2 m, checked at each
    canonical s."""
    if ell == ctx.p:
        raise ValueError(f"ell = p = {ell} is excluded")
    n = ctx.s_modulus
    al = a_ell(E, ell)
    report = HeckeReport()
    seen = set()
    for (m, s), _ in tbl.items():
        if s != _canon(s, n) or m <= 0:
            continue
        D = tbl.disc_of(m)
        if D.denominator != 1 or (D, s) in seen:
            continue
        D = int(D)
        seen.add((D, s))

        def lookup(D2: int, D=D, s=s):
            m2 = Fraction(-D2, 4 * ctx.p2)
            if D2 == D:
                s2 = s
            elif D2 == D * ell * ell:
                s2 = s * ell
            else:
                s2 = _division_residue(D2, s, ell, ctx)
                if s2 is None:
                    return None
            return tbl.get(m2, s2)

        chk = hecke_identity(lookup, D, ell, al)
        if chk is None:
            report.skipped.append((D, ell))
        else:
            report.checks.append(chk)
    report.checks.sort(key=lambda c: -c.D)
    return report


@dataclass
class CompareReport:
    kappa: Optional[Fraction]
    matches: list[tuple[int, int]] = field(default_factory=list)
    mismatches: list[tuple[int, int, Fraction, Fraction]] = field(default_factory=list)
    missing: list[tuple[int, int]] = field(default_factory=list)
    note: str = ""

    @property
    def ok(self) -> bool:
        return self.kappa is not None and not self.mismatches

    def to_dict(self) -> dict:
        return {
            "kappa": None if self.kappa is None else str(self.kappa),
            "matches": len(self.matches),
            "mismatches": [[D, r, str(a), str(b)] for D, r, a, b in self.mismatches],
            "missing": len(self.missing),
            "note": self.note,
        }


def _classical_index(D: int, s: int, ctx: CartanContext) -> tuple[int, int]:
    p2 = ctx.p2
    r = p2 * s % ctx.s_modulus
    num = r * r - D * p2
    if num % (4 * p2):
        raise AssertionError(f"non-integral classical index for D={D}, r={r}")
    return num // (4 * p2), r


def _fundamental_pairs(psi: CoeffTable):
    ctx = psi.ctx
    n = ctx.s_modulus
    out = []
    for (m, s), v in psi.items():
        if m <= 0 or s != _canon(s, n):
            continue
        D = psi.disc_of(m)
        if D.denominator != 1 or not is_fundamental_discriminant(int(D)):
            continue
        D = int(D)
        if (s * s - ctx.eps * D) % (4 * ctx.p2):
            continue
        out.append((D, s, v))
    out.sort(key=lambda t: (-t[0], t[1]))
    return out


def compare_classical(phi: ClassicalCoeffTable, psi: CoeffTable, ctx: CartanContext) -> tuple[Optional[Fraction], CompareReport]:
    """Solve c_phi((r^2 - D p^2)/4p^2, r) = kappa c_psi(-D/4p^2, s) with r = p^2 s,
    over fundamental D, and check every remaining pair against that kappa."""
    if phi.index != ctx.p2:
        raise ValueError(f"classical index {phi.index} differs from p^2 = {ctx.p2}")
    pairs = []
    rep = CompareReport(kappa=None)
    for D, s, v in _fundamental_pairs(psi):
        nn, r = _classical_index(D, s, ctx)
        w = phi.get(nn, r)
        if w is None:
            rep.missing.append((D, s))
            continue
        pairs.append((D, r, w, v))
    kappa = next((w / v for _, _, w, v in pairs if w and v), None)
    rep.kappa = kappa
    if kappa is None:
        rep.note = "kappa undetermined: no pair with both coefficients nonzero"
        return None, rep
    for D, r, w, v in pairs:
        if w == kappa * v:
            rep.matches.append((D, r))
        else:
            rep.mismatches.append((D, r, w, v))
    return kappa, rep


def classical_from_series(psi: CoeffTable, ctx: CartanContext, kappa=1) -> ClassicalCoeffTable:
    """The classical table kappa * psi transported along r = p^2 s (fundamental D only)."""
    out = ClassicalCoeffTable(ctx.p2)
    for D, s, v in _fundamental_pairs(psi):
        nn, r = _classical_index(D, s, ctx)
        out.set(nn, r, Fraction(kappa) * v)
    return out
