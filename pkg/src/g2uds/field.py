"""Prime field and quadratic extension arithmetic.

Elements of F_{p^2} are stored as ``c0 + c1*w`` with ``w^2 = q`` where ``q`` is
the smallest positive non-square modulo ``p``.  Nothing here is constant time.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from sympy import isprime
from sympy.ntheory import sqrt_mod

from .errors import BadShape, DivisionByZero, NotASquare, NotPrime


@dataclass(frozen=True)
class FieldParams:
    """Prime shape ``p = lA^eA * lM^eM * lC^eC * f + sign``."""

    p: int
    l_A: int
    e_A: int
    l_M: int
    e_M: int
    l_C: int
    e_C: int
    f: int
    sign: int

    @property
    def N_A(self) -> int:
        return self.l_A**self.e_A

    @property
    def N_M(self) -> int:
        return self.l_M**self.e_M

    @property
    def N_C(self) -> int:
        return self.l_C**self.e_C

    @property
    def exponent(self) -> int:
        """Exponent of every superspecial group over F_{p^2}: p + 1 or p - 1."""
        return self.p - self.sign

    @property
    def field(self) -> "QuadField":
        return QuadField.of(self.p)


def make_params(l_A, e_A, l_M, e_M, l_C, e_C, f, sign) -> FieldParams:
    for name, v in (("l_A", l_A), ("e_A", e_A), ("l_M", l_M), ("e_M", e_M),
                    ("l_C", l_C), ("e_C", e_C), ("f", f)):
        if not isinstance(v, int) or v <= 0:
            raise BadShape(f"{name} must be a positive integer, got {v!r}")
    if sign not in (1, -1):
        raise BadShape("sign must be +1 or -1")
    if len({l_A, l_M, l_C}) != 3:
        raise BadShape("l_A, l_M, l_C must be distinct")
    for l in (l_A, l_M, l_C):
        if not isprime(l):
            raise BadShape(f"{l} is not prime")
        if f % l == 0:
            raise BadShape(f"cofactor f={f} is not coprime to {l}")
    p = l_A**e_A * l_M**e_M * l_C**e_C * f + sign
    if not isprime(p):
        raise NotPrime(f"p = {p} is not prime")
    if p <= 5:
        raise BadShape("p must exceed 5")
    return FieldParams(p, l_A, e_A, l_M, e_M, l_C, e_C, f, sign)


class QuadField:
    """The field F_{p^2} = F_p[w]/(w^2 - q)."""

    def __init__(self, p: int):
        if p < 3 or not isprime(p):
            raise NotPrime(f"{p} is not an odd prime")
        self.p = p
        q = 2
        while pow(q, (p - 1) // 2, p) != p - 1:
            q += 1
        self.q = q
        self.width = (p.bit_length() + 7) // 8
        self.zero = Fq(self, 0, 0)
        self.one = Fq(self, 1, 0)
        self.w = Fq(self, 0, 1)

    @staticmethod
    @lru_cache(maxsize=None)
    def of(p: int) -> "QuadField":
        return QuadField(p)

    @property
    def order(self) -> int:
        return self.p * self.p

    def __call__(self, c0, c1=0) -> "Fq":
        if isinstance(c0, Fq):
            return c0
        return Fq(self, c0 % self.p, c1 % self.p)

    def __eq__(self, other):
        return isinstance(other, QuadField) and other.p == self.p

    def __hash__(self):
        return hash(("F_p^2", self.p))

    def __repr__(self):
        return f"QuadField(p={self.p}, q={self.q})"

    def random(self, rng) -> "Fq":
        return Fq(self, rng.randrange(self.p), rng.randrange(self.p))

    def elements(self):
        p = self.p
        for c1 in range(p):
            for c0 in range(p):
                yield Fq(self, c0, c1)

    def decode(self, data: bytes) -> "Fq":
        w = self.width
        if len(data) != 2 * w:
            raise ValueError("wrong encoding width")
        c0 = int.from_bytes(data[:w], "big")
        c1 = int.from_bytes(data[w:], "big")
        if c0 >= self.p or c1 >= self.p:
            raise ValueError("non-canonical field encoding")
        return Fq(self, c0, c1)

    @cached_property
    def primitive_element(self) -> "Fq":
        from sympy import factorint

        n = self.order - 1
        primes = list(factorint(n))
        c0, c1 = 0, 1
        while True:
            g = Fq(self, c0, c1)
            if all(g ** (n // r) != self.one for r in primes):
                return g
            c0 += 1


def sqrt_fp(a: int, p: int) -> int | None:
    """A square root of ``a`` in F_p, or None."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return r if r * r % p == a else None
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    return sqrt_mod(a, p)


class Fq:
    __slots__ = ("F", "a", "b")

    def __init__(self, F: QuadField, a: int, b: int):
        self.F = F
        self.a = a
        self.b = b

    def _coerce(self, other) -> "Fq":
        if isinstance(other, Fq):
            return other
        if isinstance(other, int):
            return Fq(self.F, other % self.F.p, 0)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.F.p
        return Fq(self.F, (self.a + other.a) % p, (self.b + other.b) % p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.F.p
        return Fq(self.F, (self.a - other.a) % p, (self.b - other.b) % p)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        p = self.F.p
        return Fq(self.F, -self.a % p, -self.b % p)

    def __mul__(self, other):
        if isinstance(other, int):
            p = self.F.p
            return Fq(self.F, self.a * other % p, self.b * other % p)
        if not isinstance(other, Fq):
            return NotImplemented
        F = self.F
        p = F.p
        a0, a1, b0, b1 = self.a, self.b, other.a, other.b
        return Fq(F, (a0 * b0 + F.q * a1 * b1) % p, (a0 * b1 + a1 * b0) % p)

    __rmul__ = __mul__

    def norm(self) -> int:
        p = self.F.p
        return (self.a * self.a - self.F.q * self.b * self.b) % p

    def inverse(self) -> "Fq":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero in F_p^2")
        p = self.F.p
        ni = pow(n, -1, p)
        return Fq(self.F, self.a * ni % p, -self.b * ni % p)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = self.F.one
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def frobenius(self) -> "Fq":
        return Fq(self.F, self.a, -self.b % self.F.p)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_one(self) -> bool:
        return self.a == 1 and self.b == 0

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, Fq):
            return self.a == other.a and self.b == other.b and self.F.p == other.F.p
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.F.p
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b))

    def key(self) -> tuple[int, int]:
        """Sort key used for every canonical choice (lexicographic on (c0, c1))."""
        return (self.a, self.b)

    def __lt__(self, other):
        return self.key() < other.key()

    def __repr__(self):
        if self.b == 0:
            return f"{self.a}"
        return f"{self.a}+{self.b}*w"

    def to_bytes(self) -> bytes:
        w = self.F.width
        return self.a.to_bytes(w, "big") + self.b.to_bytes(w, "big")

    def is_square(self) -> bool:
        if self.is_zero():
            return True
        p = self.F.p
        return pow(self.norm(), (p - 1) // 2, p) == 1

    def sqrt(self) -> "Fq":
        return fq_sqrt(self)


def fq_add(a: Fq, b: Fq) -> Fq:
    return a + b


def fq_sub(a: Fq, b: Fq) -> Fq:
    return a - b


def fq_mul(a: Fq, b: Fq) -> Fq:
    return a * b


def fq_inv(a: Fq) -> Fq:
    return a.inverse()


def fq_sqrt(a: Fq) -> Fq:
    """Canonical square root: the lexicographically smaller of {r, -r}."""
    F = a.F
    p, q = F.p, F.q
    if a.is_zero():
        return F.zero
    if a.b == 0:
        r = sqrt_fp(a.a, p)
        if r is not None:
            root = Fq(F, r, 0)
        else:
            # a0 is a non-square in F_p, so a0/q is a square
            s = sqrt_fp(a.a * pow(q, -1, p), p)
            root = Fq(F, 0, s)
    else:
        alpha = sqrt_fp(a.norm(), p)
        if alpha is None:
            raise NotASquare(f"{a} is not a square in F_p^2")
        inv2 = (p + 1) // 2
        delta = (a.a + alpha) * inv2 % p
        x0 = sqrt_fp(delta, p)
        if x0 is None or x0 == 0:
            delta = (a.a - alpha) * inv2 % p
            x0 = sqrt_fp(delta, p)
            if not x0:
                raise NotASquare(f"{a} is not a square in F_p^2")
        x1 = a.b * pow(2 * x0, -1, p) % p
        root = Fq(F, x0, x1)
    if root * root != a:
        raise NotASquare(f"{a} is not a square in F_p^2")
    neg = -root
    return neg if neg.key() < root.key() else root
