"""Even lattices given by Gram matrices, their discriminant forms, and the
passage from the signature (2, 1) lattice L_ns to a positive definite lattice
of rank 9 with the same discriminant form.

The lattice L_ns lives inside the space of forms [A, B, C] (equivalently the
trace zero matrices [[B, 2C], [-2A, -B]]) with bilinear form

    beta(x1, x2) = (2 B1 B2 - 4 A1 C2 - 4 C1 A2) / 4p^2,

so that beta(x) = beta(x, x) / 2 = (B^2 - 4AC) / 4p^2.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterator, Optional, Sequence

import numpy as np

from . import intmat
from .arith import crt
from .cartan import CartanContext
from .errors import CapacityError, NumericalError

__all__ = [
    "EvenLattice",
    "DiscriminantForm",
    "HyperbolicSplit",
    "IsoWitness",
    "beta_abc",
    "build_lns",
    "dual_lattice",
    "disc_form",
    "dual_class",
    "cyclic_disc_form",
    "lns_model_disc_form",
    "gauss_sum",
    "gauss_sum_signature",
    "disc_form_isomorphic",
    "e8_lattice",
    "hyperbolic_plane",
    "rank_one_lattice",
    "direct_sum",
    "hyperbolic_split",
    "stabilize_to_posdef",
    "MAX_BRUTE_FORCE_ORDER",
]

MAX_BRUTE_FORCE_ORDER = 10**5


def _frac1(x: Fraction) -> Fraction:
    """Reduce a rational modulo 1 into [0, 1)."""
    return x - math.floor(x)


@dataclass(frozen=True)
class EvenLattice:
    """An even lattice with integral Gram matrix.

    ``embedding`` optionally records the basis vectors in some ambient
    coordinates; for L_ns these are the (A, B, C) triples of the forms.
    """

    gram: tuple[tuple[int, ...], ...]
    embedding: Optional[tuple[tuple[int, ...], ...]] = field(default=None, compare=False)

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise ValueError("Gram matrix must be square")
        if any(g[i][j] != g[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        if any(g[i][i] % 2 for i in range(n)):
            raise ValueError("Gram matrix must have even diagonal")
        if intmat.det(g) == 0:
            raise ValueError("Gram matrix is degenerate")
        if self.embedding is not None:
            object.__setattr__(
                self, "embedding", tuple(tuple(int(x) for x in row) for row in self.embedding)
            )

    @property
    def rank(self) -> int:
        return len(self.gram)

    @cached_property
    def det(self) -> int:
        return intmat.det(self.gram)

    @cached_property
    def signature_pair(self) -> tuple[int, int]:
        return intmat.signature(self.gram)

    @property
    def signature(self) -> int:
        pos, neg = self.signature_pair
        return pos - neg

    @cached_property
    def is_positive_definite(self) -> bool:
        return all(m > 0 for m in intmat.leading_minors(self.gram))

    @property
    def is_unimodular(self) -> bool:
        return abs(self.det) == 1

    def pair(self, x: Sequence, y: Sequence):
        """beta(x, y) for coordinate vectors (integers or rationals)."""
        return sum(x[i] * self.gram[i][j] * y[j] for i in range(self.rank) for j in range(self.rank))

    def norm(self, x: Sequence):
        """The quadratic value beta(x) = beta(x, x) / 2."""
        return Fraction(self.pair(x, x)) / 2

    def to_ambient(self, x: Sequence) -> tuple:
        if self.embedding is None:
            raise ValueError("lattice carries no embedding")
        return tuple(sum(x[i] * self.embedding[i][k] for i in range(self.rank)) for k in range(len(self.embedding[0])))

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.gram]


def direct_sum(*lattices: EvenLattice) -> EvenLattice:
    return EvenLattice(tuple(map(tuple, intmat.block_diag(*(L.gram for L in lattices)))))


def beta_abc(x1: Sequence[int], x2: Sequence[int], p: int) -> Fraction:
    A1, B1, C1 = x1
    A2, B2, C2 = x2
    return Fraction(2 * B1 * B2 - 4 * A1 * C2 - 4 * C1 * A2, 4 * p * p)


def lns_basis(ctx: CartanContext) -> tuple[tuple[int, int, int], ...]:
    p = ctx.p
    return ((p * p, 0, 0), (0, 2 * p, 0), (ctx.eps * p, 0, p))


def build_lns(ctx: CartanContext) -> EvenLattice:
    """L_ns: A = B = C = 0 (mod p), B even, A = eps C (mod p^2)."""
    basis = lns_basis(ctx)
    gram = []
    for u in basis:
        row = []
        for v in basis:
            x = beta_abc(u, v, ctx.p)
            assert x.denominator == 1
            row.append(int(x))
        gram.append(tuple(row))
    return EvenLattice(tuple(gram), embedding=basis)


def e8_lattice() -> EvenLattice:
    # Cartan matrix, Bourbaki labelling: chain 1-3-4-5-6-7-8 with 2 attached to 4
    edges = [(0, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (1, 3)]
    g = [[2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in edges:
        g[i][j] = g[j][i] = -1
    return EvenLattice(tuple(map(tuple, g)))


def hyperbolic_plane() -> EvenLattice:
    return EvenLattice(((0, 1), (1, 0)))


def rank_one_lattice(N: int) -> EvenLattice:
    """The lattice Z with Gram matrix [2N]."""
    return EvenLattice(((2 * N,),))


def dual_lattice(L: EvenLattice) -> list[list[Fraction]]:
    """A basis of the dual lattice in L-coordinates (the rows of gram^-1)."""
    return intmat.inverse(L.gram)


@dataclass(frozen=True)
class DiscriminantForm:
    """A finite quadratic module Z/d_1 x ... x Z/d_k with d_1 | ... | d_k, d_1 > 1.

    ``q_gens[i]`` is q of the i-th generator and ``b_gens[i][j]`` the bilinear
    value of generators i and j, both in Q/Z (stored in [0, 1)).
    """

    invariants: tuple[int, ...]
    q_gens: tuple[Fraction, ...]
    b_gens: tuple[tuple[Fraction, ...], ...]
    # dual vectors (lattice coordinates) of the generators, and the matrix
    # sending G x to generator coordinates; present when built from a lattice
    generators: Optional[tuple[tuple[Fraction, ...], ...]] = field(default=None, compare=False)
    coord_map: Optional[tuple[tuple[int, ...], ...]] = field(default=None, compare=False, repr=False)
    lattice_gram: Optional[tuple[tuple[int, ...], ...]] = field(default=None, compare=False, repr=False)

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    @property
    def is_cyclic(self) -> bool:
        return len(self.invariants) <= 1

    def elements(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(*(range(d) for d in self.invariants))

    def normalize(self, x: Sequence[int]) -> tuple[int, ...]:
        return tuple(int(a) % d for a, d in zip(x, self.invariants))

    def add(self, x, y) -> tuple[int, ...]:
        return self.normalize([a + b for a, b in zip(x, y)])

    def scale(self, k: int, x) -> tuple[int, ...]:
        return self.normalize([k * a for a in x])

    def q(self, x: Sequence[int]) -> Fraction:
        k = len(self.invariants)
        val = sum(x[i] * x[i] * self.q_gens[i] for i in range(k))
        val += sum(x[i] * x[j] * self.b_gens[i][j] for i in range(k) for j in range(i + 1, k))
        return _frac1(Fraction(val))

    def b(self, x: Sequence[int], y: Sequence[int]) -> Fraction:
        k = len(self.invariants)
        return _frac1(Fraction(sum(x[i] * y[j] * self.b_gens[i][j] for i in range(k) for j in range(k))))

    def class_of(self, x: Sequence) -> tuple[int, ...]:
        """Group coordinates of a dual vector x given in lattice coordinates."""
        if self.coord_map is None:
            raise ValueError("discriminant form was not built from a lattice")
        n = len(self.coord_map[0])
        gx = [sum(self.lattice_gram[i][j] * Fraction(x[j]) for j in range(n)) for i in range(n)]
        if any(Fraction(v).denominator != 1 for v in gx):
            raise ValueError(f"{x} is not in the dual lattice")
        return self.normalize([sum(r[j] * int(gx[j]) for j in range(n)) for r in self.coord_map])


def disc_form(L: EvenLattice) -> DiscriminantForm:
    """L^dual / L with q induced by beta, via the Smith form U G V = diag(d)."""
    G = [list(r) for r in L.gram]
    U, S, V = intmat.smith_normal_form(G)
    n = L.rank
    Uinv = intmat.inverse(U)
    Ginv = intmat.inverse(G)
    idx = [i for i in range(n) if S[i][i] > 1]
    invariants = tuple(S[i][i] for i in idx)
    gens = []
    for i in idx:
        y = [Uinv[r][i] for r in range(n)]  # U^-1 e_i, an integer vector
        gens.append(tuple(Fraction(v) for v in intmat.matvec(Ginv, y)))
    q_gens = tuple(_frac1(L.norm(g)) for g in gens)
    b_gens = tuple(tuple(_frac1(Fraction(L.pair(g, h))) for h in gens) for g in gens)
    df = DiscriminantForm(
        invariants,
        q_gens,
        b_gens,
        generators=tuple(gens),
        coord_map=tuple(tuple(U[i]) for i in idx),
        lattice_gram=L.gram,
    )
    return df


def cyclic_disc_form(n: int, q1: Fraction) -> DiscriminantForm:
    """Z/n with q(a) = a^2 q1 mod 1."""
    if n == 1:
        return DiscriminantForm((), (), ())
    q1 = _frac1(Fraction(q1))
    return DiscriminantForm((n,), (q1,), ((_frac1(2 * q1),),))


def lns_model_disc_form(ctx: CartanContext) -> DiscriminantForm:
    """(Z/2p^2, s -> s^2 / (4 eps p^2)), with 1/eps read as the inverse mod 4p^2."""
    return cyclic_disc_form(ctx.s_modulus, Fraction(ctx.eps_inv, 4 * ctx.p2))


def dual_class(x: Sequence[int], ctx: CartanContext) -> int:
    """Class in Z/2p^2 of a dual vector of L_ns given as a form (A, B, C)."""
    A, B, C = (int(v) for v in x)
    p = ctx.p
    if B % p or (A + C * ctx.eps) % p:
        raise ValueError(f"{tuple(x)} is not in the dual of L_ns (need B = 0, A = -C eps mod p)")
    return crt([B % 2, (A - C * ctx.eps) % ctx.p2], [2, ctx.p2])


def _q_numerators(df: DiscriminantForm) -> tuple[np.ndarray, int]:
    """All values q(x) * N mod N over the group, N a common denominator."""
    k = len(df.invariants)
    if k == 0:
        return np.zeros(1, dtype=np.int64), 1
    N = reduce(math.lcm, [v.denominator for v in df.q_gens] + [v.denominator for row in df.b_gens for v in row])
    grids = np.meshgrid(*(np.arange(d, dtype=np.int64) for d in df.invariants), indexing="ij")
    xs = [g.ravel() for g in grids]
    total = np.zeros_like(xs[0])
    for i in range(k):
        c = int(df.q_gens[i] * N)
        total = (total + (xs[i] * xs[i] % N) * c) % N
        for j in range(i + 1, k):
            c = int(df.b_gens[i][j] * N)
            total = (total + (xs[i] * xs[j] % N) * c) % N
    return total, N


def gauss_sum(df: DiscriminantForm) -> complex:
    if df.order > MAX_BRUTE_FORCE_ORDER:
        raise CapacityError(f"group of order {df.order} exceeds {MAX_BRUTE_FORCE_ORDER}")
    nums, N = _q_numerators(df)
    counts = np.bincount(nums, minlength=N)
    phases = np.exp(2j * np.pi * np.arange(N) / N)
    return complex(np.dot(counts, phases))


def gauss_sum_signature(df: DiscriminantForm, tol: float = 1e-6) -> int:
    """sigma mod 8 with sum_x e(q(x)) = sqrt|G| e(sigma / 8)."""
    z = gauss_sum(df) / math.sqrt(df.order)
    if abs(abs(z) - 1) > tol:
        raise NumericalError(f"normalized Gauss sum has modulus {abs(z)}, expected 1")
    eighths = cmath.phase(z) * 8 / (2 * math.pi)
    nearest = round(eighths)
    if abs(eighths - nearest) > 0.1:
        raise NumericalError(f"Gauss sum phase {eighths}/8 is not near a multiple of 1/8")
    return nearest % 8


@dataclass(frozen=True)
class IsoWitness:
    """Images of the generators of the first form, in coordinates of the second."""

    images: tuple[tuple[int, ...], ...]


def disc_form_isomorphic(df1: DiscriminantForm, df2: DiscriminantForm) -> tuple[bool, Optional[IsoWitness]]:
    if df1.invariants != df2.invariants:
        return False, None
    if df1.order > MAX_BRUTE_FORCE_ORDER:
        raise CapacityError(f"group of order {df1.order} exceeds brute force limit {MAX_BRUTE_FORCE_ORDER}")
    k = len(df1.invariants)
    if k == 0:
        return True, IsoWitness(())
    if k == 1:
        n = df1.invariants[0]
        q1 = df1.q_gens[0]
        for u in range(1, n):
            if math.gcd(u, n) == 1 and df2.q((u,)) == q1:
                return True, IsoWitness(((u,),))
        return False, None

    elements = list(df2.elements())
    by_q: dict[Fraction, list[tuple[int, ...]]] = {}
    for x in elements:
        by_q.setdefault(df2.q(x), []).append(x)

    def order_divides(x, d):
        return all((d * a) % m == 0 for a, m in zip(x, df2.invariants))

    images: list[tuple[int, ...]] = []

    def search(i: int) -> bool:
        if i == k:
            return True
        for h in by_q.get(df1.q_gens[i], []):
            if not order_divides(h, df1.invariants[i]):
                continue
            if all(df2.b(images[j], h) == df1.b_gens[j][i] for j in range(i)):
                images.append(h)
                if search(i + 1):
                    return True
                images.pop()
        return False

    if not search(0):
        return False, None
    # b is nondegenerate, so a b-preserving map is injective; verify anyway
    seen = set()
    for x in df1.elements():
        img = df2.normalize([sum(x[i] * images[i][t] for i in range(k)) for t in range(k)])
        seen.add(img)
    if len(seen) != df1.order:
        return False, None
    return True, IsoWitness(tuple(images))


@dataclass(frozen=True)
class HyperbolicSplit:
    """M = K + U with U spanned by isotropic e, f with beta(e, f) = 1.

    ``complement_basis`` holds the basis of K as vectors of M.
    """

    ambient: EvenLattice
    e: tuple[int, ...]
    f: tuple[int, ...]
    complement: EvenLattice
    complement_basis: tuple[tuple[int, ...], ...]

    def certificates(self) -> dict[str, bool]:
        M, K = self.ambient, self.complement
        basis = [list(self.e), list(self.f)] + [list(v) for v in self.complement_basis]
        gram_new = intmat.matmul(intmat.matmul(basis, [list(r) for r in M.gram]), intmat.transpose(basis))
        expected = intmat.block_diag([[0, 1], [1, 0]], [list(r) for r in K.gram])
        iso, _ = disc_form_isomorphic(disc_form(K), disc_form(M))
        return {
            "e_isotropic": M.norm(self.e) == 0,
            "f_isotropic": M.norm(self.f) == 0,
            "e_f_pairing_one": M.pair(self.e, self.f) == 1,
            "rank": K.rank == M.rank - 2,
            "det": K.det == -M.det,
            "unimodular_change_of_basis": abs(intmat.det(basis)) == 1,
            "block_gram": gram_new == expected,
            "disc_form_isomorphic": bool(iso),
        }


def _lex_box(n: int, b: int) -> np.ndarray:
    vals = np.arange(-b, b + 1, dtype=np.int64)
    grids = np.meshgrid(*([vals] * n), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def find_isotropic(M: EvenLattice, bound: int, chunk: int = 200_000) -> tuple[int, ...]:
    """First e (increasing sup-norm, then lexicographic) with beta(e) = 0 and
    gcd(G e) = 1, i.e. e pairs onto Z."""
    G = np.array(M.gram, dtype=np.int64)
    n = M.rank
    for b in range(1, bound + 1):
        width = 2 * b + 1
        tail = n
        while tail > 1 and width**tail > chunk:
            tail -= 1
        head = n - tail
        suffix = _lex_box(tail, b)
        Gss = G[head:, head:]
        suf_q2 = np.einsum("ij,jk,ik->i", suffix, Gss, suffix)
        suf_G = suffix @ G[:, head:].T  # contribution to G v
        suf_max = np.abs(suffix).max(axis=1) if tail else np.zeros(1, dtype=np.int64)
        for prefix in itertools.product(range(-b, b + 1), repeat=head):
            pre = np.array(prefix, dtype=np.int64)
            pre_max = int(np.abs(pre).max()) if head else 0
            Gp = G[:, :head] @ pre if head else np.zeros(n, dtype=np.int64)
            q2 = int(pre @ G[:head, :head] @ pre) if head else 0
            cross = 2 * (suffix @ (G[head:, :head] @ pre)) if head else 0
            vq2 = q2 + cross + suf_q2
            shell = np.maximum(suf_max, pre_max) == b
            cand = np.nonzero((vq2 == 0) & shell)[0]
            for idx in cand:
                Gv = Gp + suf_G[idx]
                if math.gcd(*map(int, Gv)) == 1:
                    return tuple(int(a) for a in prefix) + tuple(int(a) for a in suffix[idx])
    raise CapacityError(f"no primitive isotropic vector pairing onto Z within box {bound}; raise --search-bound")


def hyperbolic_split(M: EvenLattice, bound: int = 10, reduce_complement: bool = True) -> HyperbolicSplit:
    """Split off a hyperbolic plane U from an indefinite even lattice."""
    pos, neg = M.signature_pair
    if pos == 0 or neg == 0:
        raise ValueError("lattice must be indefinite")
    e = find_isotropic(M, bound)
    G = [list(r) for r in M.gram]
    Ge = intmat.matvec(G, e)
    f0 = intmat.solve_unit_combination(Ge)
    qf0 = M.norm(f0)
    assert qf0.denominator == 1
    f = [a - int(qf0) * b for a, b in zip(f0, e)]
    Gf = intmat.matvec(G, f)
    basis = intmat.integer_kernel([Ge, Gf])
    if basis and reduce_complement:
        Kgram = intmat.matmul(intmat.matmul(basis, G), intmat.transpose(basis))
        pos_c, neg_c = intmat.signature(Kgram)
        if neg_c == 0:
            T, _ = intmat.lll_gram(Kgram)
            basis = intmat.matmul(T, basis)
    Kgram = intmat.matmul(intmat.matmul(basis, G), intmat.transpose(basis)) if basis else []
    K = EvenLattice(tuple(map(tuple, Kgram)))
    return HyperbolicSplit(M, tuple(e), tuple(f), K, tuple(tuple(v) for v in basis))


def stabilize_to_posdef(ctx: CartanContext, bound: int = 10) -> EvenLattice:
    """A positive definite lattice K with L_ns + E8 = K + U."""
    split = hyperbolic_split(direct_sum(build_lns(ctx), e8_lattice()), bound)
    return split.complement
