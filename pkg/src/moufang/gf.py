"""Small finite fields GF(q) with precomputed tables.

Elements are plain ints.  For a prime field the int is the residue; for
GF(p^e) it is the little-endian base-p encoding of the coefficient vector of
a polynomial reduced modulo a fixed irreducible polynomial, so that
``sum(c_i * p**i)`` encodes ``sum(c_i * x**i)``.

The irreducible polynomials are fixed (coefficients listed constant term
first, monic leading term omitted)::

    GF(4)   x^2 + x + 1
    GF(8)   x^3 + x + 1
    GF(9)   x^2 + 1
    GF(16)  x^4 + x + 1
    GF(25)  x^2 + x + 2
    GF(27)  x^3 + 2x + 1
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DivisionByZero, FieldMismatch, UnsupportedField

PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31)

# q -> (p, lower coefficients of the monic irreducible polynomial)
IRREDUCIBLE = {
    4: (2, (1, 1)),
    8: (2, (1, 1, 0)),
    9: (3, (1, 0)),
    16: (2, (1, 1, 0, 0)),
    25: (5, (2, 1)),
    27: (3, (1, 2, 0)),
}

SUPPORTED = tuple(sorted(PRIMES + tuple(IRREDUCIBLE)))


def _digits(n, p, e):
    out = []
    for _ in range(e):
        out.append(n % p)
        n //= p
    return out


def _undigits(ds, p):
    n = 0
    for d in reversed(ds):
        n = n * p + d
    return n


class GF:
    """The field with ``q`` elements.  Use :func:`field` to get a shared instance."""

    def __init__(self, q: int):
        if q not in SUPPORTED:
            raise UnsupportedField(f"GF({q}) is not supported", q=q)
        self.q = q
        if q in IRREDUCIBLE:
            self.p, self.poly = IRREDUCIBLE[q]
            self.degree = len(self.poly)
        else:
            self.p, self.poly, self.degree = q, (), 1
        p, e = self.p, self.degree
        self.add_table = [[_undigits([(x + y) % p for x, y in zip(_digits(a, p, e), _digits(b, p, e))], p)
                           for b in range(q)] for a in range(q)]
        self.neg_table = [_undigits([(-x) % p for x in _digits(a, p, e)], p) for a in range(q)]
        self.mul_table = [[self._polymul(a, b) for b in range(q)] for a in range(q)]
        self.inv_table = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if self.mul_table[a][b] == 1:
                    self.inv_table[a] = b
                    break
        self.generator = self._find_generator()
        # exp/log tables with respect to the generator
        self.exp = [1] * (q - 1)
        for k in range(1, q - 1):
            self.exp[k] = self.mul_table[self.exp[k - 1]][self.generator]
        self.log = {v: k for k, v in enumerate(self.exp)}
        self.frobenius_table = [self.power(a, p) for a in range(q)]

    def _polymul(self, a, b):
        p, e = self.p, self.degree
        if e == 1:
            return (a * b) % p
        x, y = _digits(a, p, e), _digits(b, p, e)
        prod = [0] * (2 * e - 1)
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    prod[i + j] = (prod[i + j] + xi * yj) % p
        # x^e = -(poly) reduction, highest degree first
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i, ci in enumerate(self.poly):
                    prod[k - e + i] = (prod[k - e + i] - c * ci) % p
        return _undigits(prod[:e], p)

    def _find_generator(self):
        if self.q == 2:
            return 1
        for g in range(2, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul_table[x][g]
                order += 1
            if order == self.q - 1:
                return g
        raise AssertionError("no primitive element")

    def __repr__(self):
        return f"GF({self.q})"

    def __reduce__(self):
        return (field, (self.q,))

    # arithmetic on int encodings
    def add(self, a, b):
        return self.add_table[a][b]

    def sub(self, a, b):
        return self.add_table[a][self.neg_table[b]]

    def neg(self, a):
        return self.neg_table[a]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul_table[a][self.inv(b)]

    def power(self, a, k):
        r = 1
        for _ in range(k):
            r = self.mul_table[r][a]
        return r

    def frobenius(self, a, k=1):
        """``a -> a^(p^k)``."""
        for _ in range(k % self.degree if self.degree > 1 else 0):
            a = self.frobenius_table[a]
        return a

    def elements(self):
        return list(range(self.q))

    def nonzero(self):
        return list(range(1, self.q))

    def automorphisms(self):
        """The Frobenius powers ``x -> x^(p^k)``, ``k = 0..e-1``, as lookup lists."""
        return [[self.frobenius(a, k) for a in range(self.q)] for k in range(self.degree)]

    def elem(self, value) -> "FieldElem":
        return FieldElem(self, value % self.q if self.degree == 1 else value)


@lru_cache(maxsize=None)
def field(q: int) -> GF:
    """Shared GF(q) instance."""
    return GF(q)


def all_elements(spec: GF) -> list[FieldElem]:
    return [FieldElem(spec, a) for a in range(spec.q)]


def automorphisms(spec: GF) -> list:
    """Field automorphisms as callables on :class:`FieldElem`."""
    return [Frobenius(spec, k) for k in range(spec.degree)]


@dataclass(frozen=True)
class Frobenius:
    spec: GF
    power: int

    def __call__(self, x: FieldElem) -> FieldElem:
        return FieldElem(self.spec, self.spec.frobenius(x.value, self.power))


@dataclass(frozen=True)
class FieldElem:
    """An element of a :class:`GF`; a thin wrapper around the int encoding."""

    spec: GF
    value: int

    def __post_init__(self):
        if not 0 <= self.value < self.spec.q:
            raise ValueError(f"{self.value} is not an element of {self.spec}")

    def _other(self, other):
        if isinstance(other, int):
            return self.spec.elem(other).value
        if other.spec is not self.spec:
            raise FieldMismatch(f"{self.spec} vs {other.spec}")
        return other.value

    def __add__(self, other):
        return FieldElem(self.spec, self.spec.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.spec, self.spec.sub(self.value, self._other(other)))

    def __neg__(self):
        return FieldElem(self.spec, self.spec.neg(self.value))

    def __mul__(self, other):
        return FieldElem(self.spec, self.spec.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.spec, self.spec.div(self.value, self._other(other)))

    def inv(self):
        return FieldElem(self.spec, self.spec.inv(self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value}@GF({self.spec.q})"


def add(a: FieldElem, b: FieldElem) -> FieldElem:
    return a + b


def neg(a: FieldElem) -> FieldElem:
    return -a


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    return a * b


def inv(a: FieldElem) -> FieldElem:
    return a.inv()
