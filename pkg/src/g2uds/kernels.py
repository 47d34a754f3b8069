"""Torsion bases, three-generator kernel descriptions and their validation.

A kernel is written in coordinates with respect to a basis B1..B4 of the
N-torsion (N = l^e).  Structure and isotropy are decided by integer linear
algebra over Z/N using the matrix of Weil-pairing discrete logarithms of
the basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .elliptic import ec_weil_pairing
from .errors import (NotMaximalIsotropic, SamplingTimeout, TorsionNotRational,
                     TrivialKernel)
from .jacobian import MumfordDivisor, scalar_mul, weil_pairing
from .surfaces import JacobianSurface, ProductPoint, ProductSurface, Surface


def _mul(P, k: int):
    return scalar_mul(k, P) if isinstance(P, MumfordDivisor) else P * k


def _val(x: int, l: int, e: int) -> int:
    """l-adic valuation of x mod l^e (e for zero)."""
    x %= l**e
    if x == 0:
        return e
    v = 0
    while x % l == 0:
        x //= l
        v += 1
    return v


# -- linear algebra over Z/l^e ------------------------------------------------

def smith_rows(rows, l: int, e: int):
    """Row-equivalent generators in Smith position.

    Returns a list of (row, exponent, coeffs) where ``row`` is the
    combination ``coeffs`` of the input rows, of additive order l^exponent;
    the listed rows form a basis of the row span as a direct sum of cyclic
    groups.
    """
    N = l**e
    R = [[x % N for x in r] for r in rows]   # tracks row operations only
    W = [list(r) for r in R]                  # row and column operations
    C = [[int(i == j) for j in range(len(R))] for i in range(len(R))]
    if not R:
        return []
    ncols = len(R[0])
    out = []
    active_rows = list(range(len(R)))
    active_cols = list(range(ncols))
    while active_rows and active_cols:
        best = None
        for i in active_rows:
            for j in active_cols:
                v = _val(W[i][j], l, e)
                if v < e and (best is None or v < best[0]):
                    best = (v, i, j)
        if best is None:
            break
        v, i, j = best
        piv = W[i][j]
        unit = piv // l**v
        uinv = pow(unit, -1, N)
        for k in active_rows:
            if k == i or W[k][j] % N == 0:
                continue
            # W[k][j] has valuation >= v, so W[k][j]/piv is integral
            factor = (W[k][j] // l**v) * uinv % N
            W[k] = [(a - factor * b) % N for a, b in zip(W[k], W[i])]
            R[k] = [(a - factor * b) % N for a, b in zip(R[k], R[i])]
            C[k] = [(a - factor * b) % N for a, b in zip(C[k], C[i])]
        for c in active_cols:
            if c == j or W[i][c] % N == 0:
                continue
            factor = (W[i][c] // l**v) * uinv % N
            for k in range(len(W)):
                W[k][c] = (W[k][c] - factor * W[k][j]) % N
        out.append((R[i], e - v, C[i]))
        active_rows.remove(i)
        active_cols.remove(j)
    return out


def structure(rows, l: int, e: int) -> list[int]:
    """Exponents of the invariant factors of the subgroup spanned by rows."""
    return sorted((k for _, k, _ in smith_rows(rows, l, e)), reverse=True)


def is_isotropic(rows, omega, N: int) -> bool:
    for a in rows:
        for b in rows:
            s = 0
            for i in range(4):
                if a[i] == 0:
                    continue
                for j in range(4):
                    s += a[i] * omega[i][j] * b[j]
            if s % N:
                return False
    return True


def scalar_rows(scalars):
    s = list(scalars)
    return [s[0:4], s[4:8], s[8:12]]


# -- torsion bases -------------------------------------------------------------

def _root_order(z, N: int) -> int:
    k = 1
    acc = z
    while not acc.is_one():
        acc = acc * z
        k += 1
        if k > N:
            raise ValueError("pairing value is not an N-th root of unity")
    return k


@dataclass
class TorsionBasis:
    """Four points generating A[l^e] with the pairing matrix in log form."""

    surface: Surface
    points: list
    l: int
    e: int
    zeta: object = None
    omega: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return self.l**self.e

    def combine(self, coeffs):
        A = self.surface
        acc = A.identity()
        for c, P in zip(coeffs, self.points):
            c %= self.N
            if c:
                acc = acc + _mul(P, c)
        return acc

    def dlog(self, z) -> int:
        acc = z.F.one
        for k in range(self.N):
            if acc == z:
                return k
            acc = acc * self.zeta
        raise ValueError("value is not a power of the reference root of unity")

    def is_factor_aligned(self) -> bool:
        if not isinstance(self.surface, ProductSurface):
            return False
        P = self.points
        return (P[0].P2.is_zero() and P[1].P2.is_zero()
                and P[2].P1.is_zero() and P[3].P1.is_zero())


def _pairing_matrix(A: Surface, pts, N: int, seed: int = 0):
    vals = [[None] * 4 for _ in range(4)]
    F = A.F
    for i in range(4):
        vals[i][i] = F.one
        for j in range(i + 1, 4):
            z = A.pairing(pts[i], pts[j], N, seed=seed)
            vals[i][j] = z
            vals[j][i] = z.inverse()
    return vals


def _omega_from_values(vals, zeta, N):
    table = {}
    acc = zeta.F.one
    for k in range(N):
        table[acc.key()] = k
        acc = acc * zeta
    return [[table[v.key()] for v in row] for row in vals]


def _det_mod(M, N):
    import sympy

    return int(sympy.Matrix(M).det()) % N


def torsion_basis(A: Surface, l: int, e: int, exponent: int, seed=0, max_rounds: int = 200) -> TorsionBasis:
    """Sample a basis of A[l^e] for a surface with A(F_{p^2}) = A[exponent].

    On products the basis is aligned with the factors:
    (P1, 0), (Q1, 0), (0, P2), (0, Q2).
    """
    N = l**e
    if exponent % N:
        raise TorsionNotRational(f"{l}^{e} does not divide the group exponent {exponent}")
    cof = exponent // N
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)

    def sample(draw):
        for _ in range(max_rounds):
            P = _mul(draw(), cof)
            if not _mul(P, N).is_identity():
                raise TorsionNotRational("cofactor multiple is not N-torsion")
            if not _mul(P, N // l).is_identity():
                return P
        raise SamplingTimeout("no point of full order found")

    if isinstance(A, ProductSurface):
        pts = []
        pairs = []
        for E in (A.E1, A.E2):
            for _ in range(max_rounds):
                P = sample(lambda: E.random_point(rng))
                Q = sample(lambda: E.random_point(rng))
                z = ec_weil_pairing(P, Q, N)
                if _root_order(z, N) == N:
                    pairs.append((P, Q, z))
                    break
            else:
                raise SamplingTimeout("no nondegenerate factor basis found")
        (P1, Q1, z1), (P2, Q2, z2) = pairs
        O1, O2 = A.E1.O, A.E2.O
        pts = [ProductPoint(P1, O2), ProductPoint(Q1, O2), ProductPoint(O1, P2), ProductPoint(O1, Q2)]
        zeta = z1
        vals = _pairing_matrix(A, pts, N)
        omega = _omega_from_values(vals, zeta, N)
        return TorsionBasis(A, pts, l, e, zeta, omega)

    if isinstance(A, JacobianSurface):
        for _ in range(max_rounds):
            pts = [sample(lambda: A.random_point(rng)) for _ in range(4)]
            vals = _pairing_matrix(A, pts, N)
            zeta = None
            for row in vals:
                for z in row:
                    if _root_order(z, N) == N:
                        zeta = z
                        break
                if zeta is not None:
                    break
            if zeta is None:
                continue
            omega = _omega_from_values(vals, zeta, N)
            if _det_mod(omega, l) != 0:
                return TorsionBasis(A, pts, l, e, zeta, omega)
        raise SamplingTimeout("no independent quadruple found")
    raise TypeError("unknown surface type")


# -- kernels -------------------------------------------------------------------

@dataclass
class KernelSpec:
    """Twelve scalars, the basis they refer to and the three generators."""

    scalars: tuple
    basis: TorsionBasis
    generators: list
    rows: list = field(default_factory=list)         # Smith generators (coordinates)
    product_form: bool = False
    factor_rows: tuple = ()                            # coordinates of (P1,0), (0,P2) when product-form

    @property
    def N(self) -> int:
        return self.basis.N

    def reduced_generators(self):
        """Two generators of the kernel (it is isomorphic to (Z/N)^2)."""
        return [self.basis.combine(r) for r in self.rows]

    def factor_generators(self):
        if not self.product_form:
            raise ValueError("kernel is not of product form")
        return [self.basis.combine(r) for r in self.factor_rows]


def analyse_rows(rows, basis: TorsionBasis):
    """Return (smith generators, product-form factor rows or None) or raise."""
    l, e, N = basis.l, basis.e, basis.N
    if all(x % N == 0 for r in rows for x in r):
        raise TrivialKernel("all generators are the identity")
    gens = smith_rows(rows, l, e)
    shape = sorted((k for _, k, _ in gens), reverse=True)
    if shape != [e, e]:
        raise NotMaximalIsotropic(f"kernel has shape {shape}, expected two factors of order {N}")
    main = [r for r, k, _ in gens if k == e]
    if not is_isotropic(main, basis.omega, N):
        raise NotMaximalIsotropic("Weil pairing is not trivial on the kernel")
    factor = None
    if basis.is_factor_aligned():
        g1 = smith_rows([r[:2] for r in rows], l, e)
        g2 = smith_rows([r[2:] for r in rows], l, e)
        if [k for _, k, _ in g1] == [e] and [k for _, k, _ in g2] == [e]:
            # |K| = N^2 = |pi1(K)| |pi2(K)|, so K = pi1(K) x pi2(K)
            r1 = _combine_rows(rows, g1[0][2], N)
            r2 = _combine_rows(rows, g2[0][2], N)
            factor = ([r1[0], r1[1], 0, 0], [0, 0, r2[2], r2[3]])
    return main, factor


def _combine_rows(rows, coeffs, N):
    return [sum(c * r[i] for c, r in zip(coeffs, rows)) % N for i in range(len(rows[0]))]


def kernel_from_scalars(scalars, basis: TorsionBasis, require_product_form: bool = False) -> KernelSpec:
    N = basis.N
    if len(scalars) != 12:
        raise ValueError("a kernel is described by twelve scalars")
    sc = tuple(int(s) % N for s in scalars)
    rows = scalar_rows(sc)
    main, factor = analyse_rows(rows, basis)
    if require_product_form and factor is None:
        raise NotMaximalIsotropic("kernel is not a product of cyclic factor kernels")
    gens = [basis.combine(r) for r in rows]
    return KernelSpec(sc, basis, gens, rows=main, product_form=factor is not None,
                      factor_rows=factor or ())


# -- fast rejection sampling --------------------------------------------------

def _minors_vanish(block: np.ndarray, N: int) -> np.ndarray:
    """For a batch of 3x2 integer blocks, True where all 2x2 minors are 0 mod N."""
    a = block
    m01 = a[:, 0, 0] * a[:, 1, 1] - a[:, 0, 1] * a[:, 1, 0]
    m02 = a[:, 0, 0] * a[:, 2, 1] - a[:, 0, 1] * a[:, 2, 0]
    m12 = a[:, 1, 0] * a[:, 2, 1] - a[:, 1, 1] * a[:, 2, 0]
    return (m01 % N == 0) & (m02 % N == 0) & (m12 % N == 0)


def product_form_prefilter(batch: np.ndarray, N: int) -> np.ndarray:
    """Necessary condition for a product-form kernel on a factor-aligned basis:
    each projection spans a cyclic group."""
    M = batch.reshape(-1, 3, 4)
    return _minors_vanish(M[:, :, :2], N) & _minors_vanish(M[:, :, 2:], N)


def sample_kernel(basis: TorsionBasis, rng, require_product_form: bool | None = None,
                  max_draws: int = 1 << 24, batch: int = 4096) -> KernelSpec:
    """Rejection sampling of uniform 12-tuples mod N until one validates.

    The draws are consumed in order, so the result is the first valid tuple
    of the stream; a vectorised necessary condition skips hopeless draws.
    """
    N = basis.N
    if require_product_form is None:
        require_product_form = basis.is_factor_aligned()
    seed = rng.getrandbits(64) if isinstance(rng, random.Random) else int(rng)
    gen = np.random.default_rng(seed)
    drawn = 0
    while drawn < max_draws:
        block = gen.integers(0, N, size=(batch, 12), dtype=np.int64)
        drawn += batch
        if require_product_form:
            idx = np.nonzero(product_form_prefilter(block, N))[0]
        else:
            idx = range(batch)
        for i in idx:
            try:
                return kernel_from_scalars(tuple(int(x) for x in block[i]), basis,
                                           require_product_form=require_product_form)
            except (NotMaximalIsotropic, TrivialKernel):
                continue
    raise SamplingTimeout("no valid kernel scalars found")


def kernel_from_generators(basis: TorsionBasis, rows) -> list:
    return [basis.combine(r) for r in rows]


def direct_isotropy_check(K: KernelSpec, seed: int = 0) -> bool:
    """Pairwise Weil pairings of the generators, computed on points."""
    A = K.basis.surface
    gens = K.generators
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if not A.pairing(gens[i], gens[j], K.N, seed=seed).is_one():
                return False
    return True


def rows_of(K: KernelSpec):
    return scalar_rows(K.scalars)


__all__ = [
    "TorsionBasis", "KernelSpec", "torsion_basis", "kernel_from_scalars", "sample_kernel",
    "smith_rows", "structure", "is_isotropic", "scalar_rows", "analyse_rows",
    "direct_isotropy_check", "weil_pairing",
]
