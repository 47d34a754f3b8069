"""Schoolbook reimplementations used as test oracles.

Nothing in this module imports the engine.  Field elements of F_{p^2} are
plain tuples ``(c0, c1)`` meaning c0 + c1*w with w^2 the smallest
non-residue mod p; polynomials are coefficient lists, lowest degree first;
elliptic points are ``None`` (infinity) or ``(x, y)``.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache

import numpy as np


class NaiveField:
    """F_{p^2} on tuples."""

    def __init__(self, p: int):
        self.p = p
        self.nr = next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)
        self.zero = (0, 0)
        self.one = (1, 0)

    # basic arithmetic
    def el(self, a, b=0):
        return (a % self.p, b % self.p)

    def add(self, x, y):
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x, y):
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def neg(self, x):
        return ((-x[0]) % self.p, (-x[1]) % self.p)

    def mul(self, x, y):
        p = self.p
        return ((x[0] * y[0] + self.nr * x[1] * y[1]) % p, (x[0] * y[1] + x[1] * y[0]) % p)

    def smul(self, k: int, x):
        return ((k * x[0]) % self.p, (k * x[1]) % self.p)

    def norm(self, x) -> int:
        return (x[0] * x[0] - self.nr * x[1] * x[1]) % self.p

    def inv(self, x):
        n = self.norm(x)
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        ni = pow(n, self.p - 2, self.p)
        return ((x[0] * ni) % self.p, (-x[1] * ni) % self.p)

    def div(self, x, y):
        return self.mul(x, self.inv(y))

    def pow(self, x, e: int):
        out = self.one
        while e:
            if e & 1:
                out = self.mul(out, x)
            x = self.mul(x, x)
            e >>= 1
        return out

    def is_zero(self, x) -> bool:
        return x == (0, 0)

    def is_square(self, x) -> bool:
        # x is a square in F_{p^2} iff its norm is a square in F_p
        n = self.norm(x)
        return n == 0 or pow(n, (self.p - 1) // 2, self.p) == 1

    def elements(self):
        for a in range(self.p):
            for b in range(self.p):
                yield (a, b)

    def random(self, rng):
        return (rng.randrange(self.p), rng.randrange(self.p))

    def sqrt(self, x):
        """Tonelli-Shanks in the cyclic group F_{p^2}^*; None for non-squares."""
        if x == self.zero:
            return self.zero
        if not self.is_square(x):
            return None
        q = self.p * self.p - 1
        s = 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = next(c for c in self.elements() if c != self.zero and not self.is_square(c))
        m, c, t, r = s, self.pow(z, q), self.pow(x, q), self.pow(x, (q + 1) // 2)
        while t != self.one:
            i, t2 = 0, t
            while t2 != self.one:
                t2 = self.mul(t2, t2)
                i += 1
            b = self.pow(c, 1 << (m - i - 1))
            m, c = i, self.mul(b, b)
            t, r = self.mul(t, c), self.mul(r, b)
        return r


# -- polynomials -----------------------------------------------------------------

def p_trim(F, a):
    a = list(a)
    while a and a[-1] == F.zero:
        a.pop()
    return a


def p_add(F, a, b):
    n = max(len(a), len(b))
    return p_trim(F, [F.add(a[i] if i < len(a) else F.zero, b[i] if i < len(b) else F.zero) for i in range(n)])


def p_sub(F, a, b):
    return p_add(F, a, [F.neg(c) for c in b])


def p_mul(F, a, b):
    if not a or not b:
        return []
    out = [F.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == F.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = F.add(out[i + j], F.mul(x, y))
    return p_trim(F, out)


def p_scale(F, a, c):
    return p_trim(F, [F.mul(x, c) for x in a])


def p_divmod(F, a, b):
    a = p_trim(F, a)
    b = p_trim(F, b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = F.inv(b[-1])
    q = [F.zero] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b):
        c = F.mul(r[-1], inv)
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[k + i] = F.sub(r[k + i], F.mul(c, y))
        r = p_trim(F, r)
    return p_trim(F, q), r


def p_mod(F, a, b):
    return p_divmod(F, a, b)[1]


def p_gcd(F, a, b):
    a, b = p_trim(F, a), p_trim(F, b)
    while b:
        a, b = b, p_mod(F, a, b)
    return p_scale(F, a, F.inv(a[-1])) if a else a


def p_powmod(F, a, e, m):
    out = [F.one]
    a = p_mod(F, a, m)
    while e:
        if e & 1:
            out = p_mod(F, p_mul(F, out, a), m)
        a = p_mod(F, p_mul(F, a, a), m)
        e >>= 1
    return out


def p_eval(F, a, x):
    acc = F.zero
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def p_deriv(F, a):
    return p_trim(F, [F.smul(i, a[i]) for i in range(1, len(a))])


def p_roots(F, a, seed=0):
    """Distinct roots in F_{p^2} by Cantor-Zassenhaus equal-degree splitting."""
    a = p_trim(F, a)
    if len(a) <= 1:
        return []
    q = F.p * F.p
    xq = p_powmod(F, [F.zero, F.one], q, a)
    g = p_gcd(F, a, p_sub(F, xq, [F.zero, F.one]))
    rng = random.Random(seed)
    out = []

    def split(h):
        if len(h) == 2:
            out.append(F.neg(F.div(h[0], h[1])))
            return
        if len(h) < 2:
            return
        while True:
            t = [F.random(rng), F.one]
            k = p_sub(F, p_powmod(F, t, (q - 1) // 2, h), [F.one])
            d = p_gcd(F, h, k)
            if 1 < len(d) < len(h):
                split(d)
                split(p_divmod(F, h, d)[0])
                return

    split(g)
    return sorted(out)


# -- elliptic curves ----------------------------------------------------------------

def ec_add(F, a, P, Q):
    if P is None:
        return Q
    if Q is None:
        return P
    if P[0] == Q[0]:
        if F.add(P[1], Q[1]) == F.zero:
            return None
        lam = F.div(F.add(F.smul(3, F.mul(P[0], P[0])), a), F.smul(2, P[1]))
    else:
        lam = F.div(F.sub(Q[1], P[1]), F.sub(Q[0], P[0]))
    x = F.sub(F.sub(F.mul(lam, lam), P[0]), Q[0])
    y = F.sub(F.mul(lam, F.sub(P[0], x)), P[1])
    return (x, y)


def ec_neg(F, P):
    return None if P is None else (P[0], F.neg(P[1]))


def ec_mul(F, a, P, k: int):
    if k < 0:
        return ec_mul(F, a, ec_neg(F, P), -k)
    out = None
    while k:
        if k & 1:
            out = ec_add(F, a, out, P)
        P = ec_add(F, a, P, P)
        k >>= 1
    return out


def ec_on_curve(F, a, b, P) -> bool:
    if P is None:
        return True
    x, y = P
    return F.mul(y, y) == F.add(F.add(F.mul(F.mul(x, x), x), F.mul(a, x)), b)


@lru_cache(maxsize=64)
def ec_points(p: int, a, b):
    """All points of y^2 = x^3 + a x + b over F_{p^2}, by scanning x."""
    F = NaiveField(p)
    roots_of = {}
    for y in F.elements():
        roots_of.setdefault(F.mul(y, y), []).append(y)
    pts = [None]
    for x in F.elements():
        rhs = F.add(F.add(F.mul(F.mul(x, x), x), F.mul(a, x)), b)
        for y in roots_of.get(rhs, ()):
            pts.append((x, y))
    return tuple(pts)


def ec_j(F, a, b):
    a3 = F.smul(4, F.mul(F.mul(a, a), a))
    return F.div(F.smul(1728, a3), F.add(a3, F.smul(27, F.mul(b, b))))


def velu_codomain(F, a, b, kernel):
    """Velu's codomain (A, B) for the finite subgroup ``kernel`` (all points)."""
    two = [P for P in kernel if P is not None and P[1] == F.zero]
    rest = [P for P in kernel if P is not None and P[1] != F.zero]
    reps = []
    seen = set()
    for P in rest:
        if P in seen:
            continue
        reps.append(P)
        seen.add(P)
        seen.add(ec_neg(F, P))
    v = F.zero
    w = F.zero
    for P, doubled in [(Q, False) for Q in two] + [(Q, True) for Q in reps]:
        gx = F.add(F.smul(3, F.mul(P[0], P[0])), a)
        gy = F.smul(-2, P[1])
        vq = F.smul(2, gx) if doubled else gx
        uq = F.mul(gy, gy)
        v = F.add(v, vq)
        w = F.add(w, F.add(uq, F.mul(P[0], vq)))
    return F.sub(a, F.smul(5, v)), F.sub(b, F.smul(7, w))


def cyclic_closure(F, a, P):
    out = [None]
    Q = P
    while Q is not None:
        out.append(Q)
        Q = ec_add(F, a, Q, P)
    return out


def phi2(F, x, y):
    """The classical modular polynomial of level 2 evaluated at (x, y)."""
    def c(n):
        return F.el(n % F.p)

    x2, y2 = F.mul(x, x), F.mul(y, y)
    terms = [
        F.mul(x2, x), F.mul(y2, y), F.neg(F.mul(x2, y2)),
        F.mul(c(1488), F.add(F.mul(x2, y), F.mul(x, y2))),
        F.mul(c(-162000), F.add(x2, y2)),
        F.mul(c(40773375), F.mul(x, y)),
        F.mul(c(8748000000), F.add(x, y)),
        c(-157464000000000),
    ]
    acc = F.zero
    for t in terms:
        acc = F.add(acc, t)
    return acc


# -- genus 2 ---------------------------------------------------------------------

def _sq(F, x):
    return F.mul(x, x)


def igusa_from_roots(F, lead, rts):
    """Igusa invariants (J2, J4, J6, J8, J10) of y^2 = lead * prod(x - r)
    from the root expressions for the Igusa-Clebsch invariants."""
    if len(rts) != 6:
        raise ValueError("need six finite roots")

    def d(i, j):
        return _sq(F, F.sub(rts[i], rts[j]))

    idx = range(6)
    I2 = F.zero
    I4 = F.zero
    I6 = F.zero
    # perfect matchings of six points (15 of them)
    matchings = []
    for rest in itertools.permutations(idx[1:]):
        m = [(0, rest[0]), (rest[1], rest[2]), (rest[3], rest[4])]
        if rest[1] < rest[3] and rest[1] < rest[2] and rest[3] < rest[4]:
            matchings.append(m)
    for m in matchings:
        t = F.one
        for i, j in m:
            t = F.mul(t, d(i, j))
        I2 = F.add(I2, t)
    # partitions into two triangles (10)
    for tri in itertools.combinations(idx[1:], 2):
        A = (0,) + tri
        B = tuple(i for i in idx if i not in A)
        t = F.one
        for X in (A, B):
            for i, j in itertools.combinations(X, 2):
                t = F.mul(t, d(i, j))
        I4 = F.add(I4, t)
    # two triangles plus a perfect matching between them (60)
    for tri in itertools.combinations(idx[1:], 2):
        A = (0,) + tri
        B = tuple(i for i in idx if i not in A)
        base = F.one
        for X in (A, B):
            for i, j in itertools.combinations(X, 2):
                base = F.mul(base, d(i, j))
        for perm in itertools.permutations(B):
            t = base
            for i, j in zip(A, perm):
                t = F.mul(t, d(i, j))
            I6 = F.add(I6, t)
    I10 = F.one
    for i, j in itertools.combinations(idx, 2):
        I10 = F.mul(I10, d(i, j))
    a2 = _sq(F, lead)
    I2 = F.mul(I2, a2)
    I4 = F.mul(I4, _sq(F, a2))
    I6 = F.mul(I6, F.mul(_sq(F, a2), a2))
    I10 = F.mul(I10, F.pow(lead, 10))
    inv = F.inv
    J2 = F.mul(I2, inv(F.el(8)))
    J4 = F.mul(F.sub(F.smul(4, _sq(F, J2)), I4), inv(F.el(96)))
    J6 = F.mul(F.sub(F.sub(F.smul(8, F.mul(_sq(F, J2), J2)), F.smul(160, F.mul(J2, J4))), I6),
               inv(F.el(576)))
    J8 = F.mul(F.sub(F.mul(J2, J6), _sq(F, J4)), inv(F.el(4)))
    J10 = F.mul(I10, inv(F.el(4096)))
    return J2, J4, J6, J8, J10


def g2_from_igusa(F, J):
    J2, J4, J6, _, J10 = J
    i10 = F.inv(J10)
    J2sq = _sq(F, J2)
    return (F.mul(F.mul(_sq(F, J2sq), J2), i10), F.mul(F.mul(F.mul(J2sq, J2), J4), i10),
            F.mul(F.mul(J2sq, J6), i10))


def to_sextic_form(F, coeffs):
    """Move a binary sextic (degree <= 6, given low to high) by x -> t + 1/x
    so that it has six finite roots; returns (lead, roots)."""
    coeffs = list(coeffs) + [F.zero] * (7 - len(coeffs))
    for t0 in range(F.p):
        t = F.el(t0)
        if p_eval(F, coeffs, t) == F.zero:
            continue
        # X^6 f(t + 1/X) = sum_i c_i (tX + 1)^i X^(6-i)
        out = []
        for i, c in enumerate(coeffs):
            if c == F.zero:
                continue
            term = [F.one]
            for _ in range(i):
                term = p_mul(F, term, [F.one, t])
            term = [F.zero] * (6 - i) + term
            out = p_add(F, out, p_scale(F, term, c))
        if len(out) != 7:
            continue
        rts = p_roots(F, out)
        if len(rts) != 6:
            raise ValueError("branch points are not all rational")
        return out[-1], rts
    raise ValueError("no shift found")


def igusa_of_form(F, coeffs):
    lead, rts = to_sextic_form(F, coeffs)
    return igusa_from_roots(F, lead, rts)


def absolute_invariants(F, coeffs):
    """G2-invariants, or on J2 = 0 the extended tuple used as a fingerprint."""
    J = igusa_of_form(F, coeffs)
    g = g2_from_igusa(F, J)
    if J[0] == F.zero:
        J2, J4, J6, _, J10 = J
        inv = F.inv(J10)
        g = g + (F.mul(F.mul(J4, J6), inv), F.mul(F.pow(J4, 5), F.mul(inv, inv)),
                 F.mul(F.pow(J6, 5), F.pow(inv, 3)))
    return g


def bracket(F, G, H):
    """[G, H] = G' H - G H' on quadratics (coefficient lists of length 3)."""
    return p_sub(F, p_mul(F, p_deriv(F, G), H), p_mul(F, G, p_deriv(F, H)))


def richelot_codomain(F, G1, G2, G3):
    """Bracket-formula codomain of the Richelot isogeny of y^2 = G1 G2 G3.

    Returns (delta, coefficients of the codomain form delta^-1 H1 H2 H3)."""
    G = [list(g) + [F.zero] * (3 - len(g)) for g in (G1, G2, G3)]
    # determinant of the coefficient matrix
    m = G
    delta = F.zero
    for (i, j, k), sgn in (((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
                           ((0, 2, 1), -1), ((1, 0, 2), -1), ((2, 1, 0), -1)):
        t = F.mul(F.mul(m[0][i], m[1][j]), m[2][k])
        delta = F.add(delta, t) if sgn == 1 else F.sub(delta, t)
    if delta == F.zero:
        return delta, None
    H1 = bracket(F, G[1], G[2])
    H2 = bracket(F, G[2], G[0])
    H3 = bracket(F, G[0], G[1])
    prod = p_mul(F, p_mul(F, H1, H2), H3)
    return delta, p_scale(F, prod, F.inv(delta))


def two_torsion_kernels(n_points: int = 6):
    """J[2] from subsets of the six Weierstrass points, and its maximal
    isotropic subgroups, by pure combinatorics.

    Elements are even subsets modulo complement; the 2-Weil pairing of two
    elements is (-1)^|S cap T|.  Returns (elements, kernels)."""
    pts = range(n_points)
    elems = set()
    for k in (0, 2, 4, 6):
        for S in itertools.combinations(pts, k):
            S = frozenset(S)
            comp = frozenset(pts) - S
            elems.add(min(S, comp, key=lambda X: (len(X), sorted(X))))
    elems = sorted(elems, key=lambda X: (len(X), sorted(X)))

    def add(S, T):
        U = S ^ T
        comp = frozenset(pts) - U
        return min(U, comp, key=lambda X: (len(X), sorted(X)))

    zero = frozenset()
    kernels = set()
    nonzero = [e for e in elems if e != zero]
    for S, T in itertools.combinations(nonzero, 2):
        if len(S & T) % 2:
            continue
        U = add(S, T)
        kernels.add(frozenset({zero, S, T, U}))
    return elems, sorted(kernels, key=lambda K: sorted(sorted(x) for x in K))


def jacobian_order(p: int, coeffs) -> int:
    """#J(F_{p^2}) for y^2 = f(x) of degree 5 or 6 via the zeta function:
    #J = (N1^2 + N2)/2 - q with N_k = #C(F_{q^k}), q = p^2.

    N2 runs over all of F_{p^4} with numpy, using that an element of
    F_{q^2} is a square iff its norm to F_p is."""
    F = NaiveField(p)
    q = p * p
    coeffs = [tuple(c) for c in coeffs]
    deg = len(coeffs) - 1
    # points at infinity: one for odd degree, 1 + chi(lead) for even
    def at_inf(is_sq_lead):
        if deg % 2:
            return 1
        return 2 if is_sq_lead else 0

    N1 = 0
    for x in F.elements():
        v = p_eval(F, coeffs, x)
        N1 += 1 if v == F.zero else (2 if F.is_square(v) else 0)
    N1 += at_inf(F.is_square(coeffs[-1]))

    # F_{q^2} = F_q[t]/(t^2 - r) with r a non-square of F_q
    r = next(x for x in F.elements() if x != F.zero and not F.is_square(x))
    nr = F.nr
    sq_table = np.zeros(p, dtype=bool)
    sq_table[(np.arange(p) ** 2) % p] = True

    def fq_mul(a0, a1, b0, b1):
        return (a0 * b0 + nr * a1 * b1) % p, (a0 * b1 + a1 * b0) % p

    grid = np.array(list(F.elements()), dtype=np.int64)  # all of F_q
    total = 0
    block = max(1, (1 << 20) // len(grid))
    for lo in range(0, len(grid), block):
        # x = X0 + u t for X0 in F_q and u in this block of F_q
        u = grid[lo:lo + block]
        u0 = np.repeat(u[:, 0], len(grid))
        u1 = np.repeat(u[:, 1], len(grid))
        X0a = np.tile(grid[:, 0], len(u))
        X0b = np.tile(grid[:, 1], len(u))
        # accumulator A + B t, Horner's rule
        A0 = np.full_like(X0a, coeffs[-1][0])
        A1 = np.full_like(X0a, coeffs[-1][1])
        B0 = np.zeros_like(X0a)
        B1 = np.zeros_like(X0a)
        for c in reversed(coeffs[:-1]):
            # (A + B t)(X0 + u t) = A X0 + r B u + (A u + B X0) t
            p0, p1 = fq_mul(A0, A1, X0a, X0b)
            s0, s1 = fq_mul(B0, B1, u0, u1)
            s0, s1 = fq_mul(s0, s1, r[0], r[1])
            t0, t1 = fq_mul(A0, A1, u0, u1)
            v0, v1 = fq_mul(B0, B1, X0a, X0b)
            A0, A1 = (p0 + s0 + c[0]) % p, (p1 + s1 + c[1]) % p
            B0, B1 = (t0 + v0) % p, (t1 + v1) % p
        # norm to F_q: A^2 - r B^2, then to F_p
        a0, a1 = fq_mul(A0, A1, A0, A1)
        b0, b1 = fq_mul(B0, B1, B0, B1)
        b0, b1 = fq_mul(b0, b1, r[0], r[1])
        n0, n1 = (a0 - b0) % p, (a1 - b1) % p
        nn = (n0 * n0 - nr * n1 * n1) % p
        zero = (A0 == 0) & (A1 == 0) & (B0 == 0) & (B1 == 0)
        total += int(np.sum(np.where(zero, 1, np.where(sq_table[nn], 2, 0))))
    # over F_{q^2} every element of F_q is a square
    N2 = total + (1 if deg % 2 else 2)
    return (N1 * N1 + N2) // 2 - q


def subgroup_closure(gens, add, zero):
    elems = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for X in frontier:
            for g in gens:
                Y = add(X, g)
                if Y not in elems:
                    elems.add(Y)
                    nxt.append(Y)
        frontier = nxt
    return elems
