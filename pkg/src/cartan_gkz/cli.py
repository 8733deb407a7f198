"""Command line interface.

Exit codes: 0 success, 1 a verification failed, 2 usage or parse error,
3 a bounded search ran out of room.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .arith import kronecker
from .cartan import CartanContext, cartan_class_reps, s_invariant, valid_s
from .ellcurve import HeegnerTable, TableParseError, WeierstrassCurve, verify_hecke_table
from .errors import CapacityError
from .heegner import special_point
from .jacobi import ClassicalCoeffTable, assemble_series, compare_classical, validate_support, verify_coeff_hecke
from .lattice import (
    EvenLattice,
    build_lns,
    direct_sum,
    disc_form,
    disc_form_isomorphic,
    e8_lattice,
    gauss_sum_signature,
    hyperbolic_split,
)
from .qforms import class_reps, is_primitive

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAPACITY = 0, 1, 2, 3

log = logging.getLogger("cartan_gkz")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    p: int = 17
    eps: int = 5
    search_bound: int = 10
    fmt: str = "text"
    table: Optional[str] = None
    curve: Optional[str] = None

    @property
    def ctx(self) -> CartanContext:
        try:
            return CartanContext(self.p, self.eps)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def fixture_path(name: str):
    return resources.files("cartan_gkz").joinpath("fixtures", name)


def _read_text(path: Optional[str], default: str) -> str:
    if path is None:
        return fixture_path(default).read_text()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _curve(cfg: RunConfig) -> WeierstrassCurve:
    try:
        if cfg.curve is None:
            return WeierstrassCurve.from_list(json.loads(fixture_path("curve289.json").read_text())["a"])
        if Path(cfg.curve).suffix == ".json":
            return WeierstrassCurve.from_list(json.loads(Path(cfg.curve).read_text())["a"])
        return WeierstrassCurve.from_list(cfg.curve.split(","))
    except (ValueError, KeyError, OSError) as exc:
        raise UsageError(f"bad curve {cfg.curve!r}: {exc}") from None


def _table(cfg: RunConfig) -> HeegnerTable:
    text = _read_text(cfg.table, "table1.csv")
    return HeegnerTable.from_csv_text(text, cfg.p)


def _emit(cfg: RunConfig, obj, lines: list[str]) -> None:
    if cfg.fmt == "json":
        print(json.dumps(obj, indent=2))
    else:
        print("\n".join(lines))


def _check_disc(D: Optional[int]) -> int:
    if D is None:
        raise UsageError("--disc is required")
    if D >= 0 or D % 4 not in (0, 1):
        raise UsageError(f"--disc {D} is not a negative discriminant (D < 0, D = 0 or 1 mod 4)")
    return D


def cmd_forms(args, cfg: RunConfig) -> int:
    D = _check_disc(args.disc)
    rows, lines = [], [f"reduced forms of discriminant {D}"]
    for f in class_reps(D):
        z = special_point(f)
        rows.append({"form": list(f), "primitive": is_primitive(f), "z": [z.value.real, z.value.imag]})
        lines.append(f"  {f!r:<16} primitive={is_primitive(f)!s:<5}  z = {z.value.real:+.12f} {z.value.imag:+.12f}i")
    _emit(cfg, {"D": D, "forms": rows}, lines)
    return EXIT_OK


def cmd_cartan(args, cfg: RunConfig) -> int:
    D = args.disc
    if D is None or D >= 0:
        raise UsageError(f"--disc must be a negative integer, got {D}")
    ctx = cfg.ctx
    roots = [int(r) for r in valid_s(D, ctx)]
    if args.s is not None:
        s = args.s % ctx.s_modulus
        if s not in roots:
            raise UsageError(
                f"s = {args.s} does not satisfy s^2 = eps*D (mod 4p^2) for D = {D}, eps = {ctx.eps}, p = {ctx.p}"
            )
        roots = [s]
    if not roots:
        raise UsageError(
            f"no valid s for D = {D}: s^2 = eps*D (mod 4p^2) has no solution "
            f"(D mod 4 = {D % 4}, kronecker(D, p) = {kronecker(D, ctx.p)}; need D = 0, 1 mod 4 and -1)"
        )
    out, lines = [], []
    for s in roots:
        for g in cartan_class_reps(D, s, ctx):
            inv = int(s_invariant(g))
            out.append({"s": s, "form": list(g.form), "s_invariant": inv})
            lines.append(f"  s={s:<5} {g!r:<24} s-invariant={inv}")
    _emit(cfg, {"D": D, "p": ctx.p, "eps": ctx.eps, "rows": out}, [f"Cartan classes, D = {D}"] + lines)
    return EXIT_OK


def _gram_lines(G) -> list[str]:
    return ["  " + " ".join(f"{x:5d}" for x in row) for row in G]


def cmd_lattice(args, cfg: RunConfig) -> int:
    ctx = cfg.ctx
    L = build_lns(ctx)
    if args.action == "build":
        _emit(cfg, {"gram": L.to_json(), "det": L.det, "signature": list(L.signature_pair)},
              ["L_ns Gram matrix"] + _gram_lines(L.gram) + [f"det {L.det}, signature {L.signature_pair}"])
        return EXIT_OK
    if args.action == "discform":
        df = disc_form(L)
        obj = {"invariants": list(df.invariants), "q_gens": [str(q) for q in df.q_gens],
               "gauss_signature": gauss_sum_signature(df)}
        _emit(cfg, obj, [f"group Z/{' x Z/'.join(map(str, df.invariants))}",
                         f"q(generator) = {df.q_gens[0] if df.q_gens else 0}",
                         f"Gauss sum signature {obj['gauss_signature']} mod 8"])
        return EXIT_OK
    if args.action == "stabilize":
        split = hyperbolic_split(direct_sum(L, e8_lattice()), cfg.search_bound)
        K = split.complement
        cert = split.certificates()
        sig = gauss_sum_signature(disc_form(K))
        ok = all(cert.values()) and K.is_positive_definite and sig == L.signature % 8
        obj = {"gram": K.to_json(), "rank": K.rank, "det": K.det, "positive_definite": K.is_positive_definite,
               "gauss_signature": sig, "e": list(split.e), "f": list(split.f), "certificates": cert}
        lines = ["positive definite complement of U in L_ns + E8"] + _gram_lines(K.gram)
        lines += [f"rank {K.rank}, det {K.det}, positive definite {K.is_positive_definite}, signature {sig}"]
        lines += [f"  {k}: {v}" for k, v in cert.items()]
        _emit(cfg, obj, lines)
        return EXIT_OK if ok else EXIT_FAIL
    if args.action == "check-gram":
        text = _read_text(args.gram, "gram_p17.json")
        try:
            M = EvenLattice(tuple(tuple(r) for r in json.loads(text)["gram"]))
        except (ValueError, KeyError, TypeError) as exc:
            raise UsageError(f"bad Gram fixture: {exc}") from None
        iso, _ = disc_form_isomorphic(disc_form(M), disc_form(L))
        sig = gauss_sum_signature(disc_form(M))
        pd = M.is_positive_definite
        ok = pd and iso and M.det == -L.det and sig == L.signature % 8
        obj = {"det": M.det, "positive_definite": pd, "disc_form_isomorphic": iso, "gauss_signature": sig}
        _emit(cfg, obj, [f"det {M.det}", f"positive definite {pd}",
                         f"disc form isomorphic to L_ns: {iso}", f"Gauss sum signature {sig}"])
        return EXIT_OK if ok else EXIT_FAIL
    raise UsageError(f"unknown lattice action {args.action}")


def cmd_verify(args, cfg: RunConfig) -> int:
    ctx = cfg.ctx
    tbl = _table(cfg)
    E = _curve(cfg)
    rep = verify_hecke_table(tbl, E, args.lmax, ctx)
    psi = assemble_series(tbl, ctx)
    sup = validate_support(psi)
    coeff_ok = True
    coeff = {}
    for ell in sorted({c.ell for c in rep.checks}):
        r = verify_coeff_hecke(psi, E, ell, ctx)
        agree = r.verdicts() == {k: v for k, v in rep.verdicts().items() if k[1] == ell}
        coeff[ell] = {"checked": len(r.checks), "failures": len(r.failures), "agrees": agree}
        coeff_ok &= agree and not r.failures
    ok = rep.ok and sup.valid and coeff_ok
    lines = [str(c) for c in rep.checks]
    lines.append(f"{len(rep.checks)} identities checked, {len(rep.failures)} failures, {len(rep.skipped)} skipped")
    for c in rep.failures:
        lines.append(f"FAILURE at (D,l)=({c.D},{c.ell})")
    lines.append(f"series support: {sup.to_dict()}")
    lines.append(f"coefficient recurrences: {coeff}")
    if not tbl.entries:
        log.warning("empty table: nothing to check")
        lines.append("warning: empty table, nothing checked")
    obj = {"hecke": rep.to_dict(), "support": sup.to_dict(), "coeff_hecke": coeff, "ok": ok}
    _emit(cfg, obj, lines)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_compare(args, cfg: RunConfig) -> int:
    ctx = cfg.ctx
    if args.phi is None:
        raise UsageError("--phi is required")
    try:
        phi = ClassicalCoeffTable.from_json(_read_text(args.phi, ""))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"bad classical table {args.phi}: {exc}") from None
    psi = assemble_series(_table(cfg), ctx)
    kappa, rep = compare_classical(phi, psi, ctx)
    lines = [f"kappa = {kappa}" if kappa is not None else rep.note,
             f"{len(rep.matches)} matches, {len(rep.mismatches)} mismatches, {len(rep.missing)} missing"]
    lines += [f"  mismatch at D={D}, r={r}: phi={a}, psi={b}" for D, r, a, b in rep.mismatches]
    _emit(cfg, rep.to_dict(), lines)
    return EXIT_OK if rep.ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=17)
    common.add_argument("--eps", type=int, default=5)
    common.add_argument("--search-bound", type=int, default=10)
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--table", help="CSV with header D,m")
    common.add_argument("--curve", help="a1,a2,a3,a4,a6 or a JSON file with key 'a'")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="cartan-gkz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("forms", parents=[common], help="reduced forms and special points")
    p.add_argument("--disc", type=int)
    p.set_defaults(func=cmd_forms)

    p = sub.add_parser("cartan", parents=[common], help="Gamma_ns classes with s-invariants")
    p.add_argument("--disc", type=int)
    p.add_argument("--s", type=int)
    p.set_defaults(func=cmd_cartan)

    p = sub.add_parser("lattice", parents=[common], help="L_ns and its positive definite stabilization")
    p.add_argument("action", choices=["build", "discform", "stabilize", "check-gram"])
    p.add_argument("--gram", help="JSON file with key 'gram' (check-gram)")
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("verify", parents=[common], help="Hecke recurrences on a table of Heegner multiples")
    p.add_argument("--lmax", type=int, default=13)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("compare", parents=[common], help="compare with a classical Jacobi form table")
    p.add_argument("--phi", help="classical coefficient JSON")
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    cfg = RunConfig(args.p, args.eps, args.search_bound, args.format, args.table, args.curve)
    try:
        return args.func(args, cfg)
    except TableParseError as exc:
        print(f"error: parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
