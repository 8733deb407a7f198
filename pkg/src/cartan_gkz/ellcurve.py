"""Elliptic curves in long Weierstrass form, traces of Frobenius by point
counting, and the Hecke recurrence check on tables of Heegner multiples."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .arith import is_prime, kronecker, primes_up_to
from .cartan import CartanContext

__all__ = [
    "WeierstrassCurve",
    "count_points",
    "count_points_naive",
    "a_ell",
    "HeegnerTable",
    "TableParseError",
    "HeckeCheck",
    "HeckeReport",
    "verify_hecke_table",
    "hecke_identity",
]

MAX_ELL = 10_000


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    def __post_init__(self):
        if self.discriminant == 0:
            raise ValueError(f"singular model {self.coefficients}")

    @classmethod
    def from_list(cls, a: Iterable[int]) -> WeierstrassCurve:
        a = [int(x) for x in a]
        if len(a) != 5:
            raise ValueError(f"expected 5 coefficients a1,a2,a3,a4,a6, got {len(a)}")
        return cls(*a)

    @classmethod
    def from_json(cls, path) -> WeierstrassCurve:
        return cls.from_list(json.loads(Path(path).read_text())["a"])

    @property
    def coefficients(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    @property
    def b2(self) -> int:
        return self.a1 ** 2 + 4 * self.a2

    @property
    def b4(self) -> int:
        return 2 * self.a4 + self.a1 * self.a3

    @property
    def b6(self) -> int:
        return self.a3 ** 2 + 4 * self.a6

    @property
    def b8(self) -> int:
        a1, a2, a3, a4, a6 = self.coefficients
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b2, self.b4, self.b6, self.b8
        return -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    def has_good_reduction(self, ell: int) -> bool:
        return self.discriminant % ell != 0

    def contains(self, x: int, y: int, ell: int) -> bool:
        a1, a2, a3, a4, a6 = self.coefficients
        return (y * y + a1 * x * y + a3 * y - (x ** 3 + a2 * x * x + a4 * x + a6)) % ell == 0


def count_points_naive(E: WeierstrassCurve, ell: int) -> int:
    """#E(F_ell) by testing every (x, y), plus the point at infinity."""
    return 1 + sum(E.contains(x, y, ell) for x in range(ell) for y in range(ell))


def count_points(E: WeierstrassCurve, ell: int) -> int:
    """#E(F_ell), one quadratic per x.

    For odd ell the equation in y has (a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)
    as discriminant, so each x contributes 1 + (disc / ell) points.
    """
    if ell == 2:
        return count_points_naive(E, ell)
    a1, a2, a3, a4, a6 = E.coefficients
    n = 1
    for x in range(ell):
        d = (a1 * x + a3) ** 2 + 4 * (x ** 3 + a2 * x * x + a4 * x + a6)
        n += 1 + kronecker(d % ell, ell)
    return n


def a_ell(E: WeierstrassCurve, ell: int) -> int:
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if ell > MAX_ELL:
        raise ValueError(f"ell = {ell} exceeds the enumeration limit {MAX_ELL}")
    if not E.has_good_reduction(ell):
        raise ValueError(f"bad reduction at ell = {ell} (discriminant {E.discriminant})")
    return ell + 1 - count_points(E, ell)


class TableParseError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass
class HeegnerTable:
    """Integers m(D) with Q_D = m(D) Q, indexed by negative discriminants D with (D/p) = -1."""

    p: int
    entries: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        for D in self.entries:
            self._validate(D)
        self.entries = {int(D): int(m) for D, m in self.entries.items()}

    def _validate(self, D: int, line: int | None = None) -> None:
        if D >= 0 or D % 4 not in (0, 1):
            raise TableParseError(f"{D} is not a negative discriminant", line)
        if kronecker(D, self.p) != -1:
            raise TableParseError(f"kronecker({D}, {self.p}) = {kronecker(D, self.p)}, expected -1", line)

    def __contains__(self, D: int) -> bool:
        return D in self.entries

    def __getitem__(self, D: int) -> int:
        return self.entries[D]

    def __len__(self) -> int:
        return len(self.entries)

    def discriminants(self) -> list[int]:
        return sorted(self.entries, reverse=True)

    @classmethod
    def from_csv_text(cls, text: str, p: int) -> HeegnerTable:
        tbl = cls(p)
        reader = csv.reader(io.StringIO(text))
        header_seen = False
        for lineno, row in enumerate(reader, start=1):
            if not row or all(not c.strip() for c in row):
                continue
            cells = [c.strip() for c in row]
            if not header_seen:
                if cells != ["D", "m"]:
                    raise TableParseError(f"expected header 'D,m', got {','.join(cells)!r}", lineno)
                header_seen = True
                continue
            if len(cells) != 2:
                raise TableParseError(f"expected 2 fields, got {len(cells)}", lineno)
            try:
                D, m = int(cells[0]), int(cells[1])
            except ValueError:
                raise TableParseError(f"non-integer field in {row!r}", lineno) from None
            tbl._validate(D, lineno)
            if D in tbl.entries:
                raise TableParseError(f"duplicate discriminant {D}", lineno)
            tbl.entries[D] = m
        if not header_seen:
            raise TableParseError("missing header 'D,m'", 1)
        return tbl

    @classmethod
    def from_csv(cls, path, p: int) -> HeegnerTable:
        return cls.from_csv_text(Path(path).read_text(), p)

    def to_csv(self) -> str:
        return "D,m\n" + "".join(f"{D},{self.entries[D]}\n" for D in self.discriminants())


@dataclass(frozen=True)
class HeckeCheck:
    D: int
    ell: int
    a_ell: int
    lhs: int
    up: int  # m(D ell^2)
    middle: int  # (D/ell) m(D)
    down: int  # ell m(D/ell^2), or 0
    ok: bool

    @property
    def rhs(self) -> int:
        return self.up + self.middle + self.down

    def __str__(self) -> str:
        mark = "ok" if self.ok else "FAIL"
        return (
            f"(D,l)=({self.D},{self.ell}): {self.a_ell}*m(D) = {self.lhs}; "
            f"{self.up} + {self.middle} + {self.down} = {self.rhs}  {mark}"
        )


@dataclass
class HeckeReport:
    checks: list[HeckeCheck] = field(default_factory=list)
    skipped: list[tuple[int, int]] = field(default_factory=list)
    skipped_primes: list[int] = field(default_factory=list)

    @property
    def failures(self) -> list[HeckeCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def ok(self) -> bool:
        return not self.failures

    def verdicts(self) -> dict[tuple[int, int], bool]:
        return {(c.D, c.ell): c.ok for c in self.checks}

    def to_dict(self) -> dict:
        return {
            "checked": len(self.checks),
            "failures": [[c.D, c.ell] for c in self.failures],
            "skipped": len(self.skipped),
            "skipped_primes": self.skipped_primes,
            "checks": [
                {"D": c.D, "l": c.ell, "a_l": c.a_ell, "lhs": c.lhs, "rhs": c.rhs, "ok": c.ok}
                for c in self.checks
            ],
        }


def hecke_identity(lookup, D: int, ell: int, al: int) -> HeckeCheck | None:
    """Check a_ell m(D) = m(D ell^2) + (D/ell) m(D) + ell m(D/ell^2) with
    lookup(D) returning m(D) or None when unknown.  None marks a skip.

    D/ell^2 that is not a discriminant contributes zero.
    """
    mD = lookup(D)
    up = lookup(D * ell * ell)
    if mD is None or up is None:
        return None
    down = 0
    if D % (ell * ell) == 0 and (D // (ell * ell)) % 4 in (0, 1):
        m2 = lookup(D // (ell * ell))
        if m2 is None:
            return None
        down = ell * m2
    middle = kronecker(D, ell) * mD
    lhs = al * mD
    return HeckeCheck(D, ell, al, lhs, up, middle, down, lhs == up + middle + down)


def verify_hecke_table(
    tbl: HeegnerTable, E: WeierstrassCurve, ell_max: int, ctx: CartanContext
) -> HeckeReport:
    report = HeckeReport()
    for ell in primes_up_to(ell_max):
        if ell == ctx.p:
            continue
        if not E.has_good_reduction(ell):
            report.skipped_primes.append(ell)
            continue
        al = a_ell(E, ell)
        for D in tbl.discriminants():
            chk = hecke_identity(tbl.entries.get, D, ell, al)
            if chk is None:
                report.skipped.append((D, ell))
            else:
                report.checks.append(chk)
    return report
