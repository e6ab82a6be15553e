"""Coxeter systems with m_st in {2, 3, 4}.

Elements are identified by the vector ``w . rho*`` in the contragredient of
the reflection representation (the "numbers game"); ``rho*`` is the point
with value 1 on every simple root.  Entries live in Z[sqrt2], stored as int
pairs ``(a, b) = a + b*sqrt2``, which suffices because 2cos(pi/m) is 0, 1 or
sqrt2.  The left descents of ``w`` are exactly the coordinates with negative
sign, which gives the ShortLex-least reduced word greedily.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from .errors import (NestedPair, NotPrenilpotent, NotReduced, NotSpherical,
                     UnknownGenerator, UnsupportedOrder)

SUPPORTED_ORDERS = (2, 3, 4)


# -- Z[sqrt2] / Q(sqrt2) ----------------------------------------------------

def _sign(a, b):
    """Sign of a + b*sqrt2."""
    if a >= 0 and b >= 0:
        return 0 if a == 0 and b == 0 else 1
    if a <= 0 and b <= 0:
        return -1
    d = a * a - 2 * b * b
    if a > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


@dataclass(frozen=True)
class QSqrt2:
    """Exact number a + b*sqrt2 with rational a, b."""

    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)

    @staticmethod
    def of(x) -> "QSqrt2":
        if isinstance(x, QSqrt2):
            return x
        if isinstance(x, tuple):
            return QSqrt2(Fraction(x[0]), Fraction(x[1]))
        return QSqrt2(Fraction(x))

    def __add__(self, o):
        o = QSqrt2.of(o)
        return QSqrt2(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt2(-self.a, -self.b)

    def __sub__(self, o):
        return self + (-QSqrt2.of(o))

    def __rsub__(self, o):
        return QSqrt2.of(o) - self

    def __mul__(self, o):
        o = QSqrt2.of(o)
        return QSqrt2(self.a * o.a + 2 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = QSqrt2.of(o)
        n = o.a * o.a - 2 * o.b * o.b
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt2)")
        return self * QSqrt2(o.a / n, -o.b / n)

    def sign(self):
        return _sign(self.a, self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * 2 ** 0.5


# -- Coxeter matrix ---------------------------------------------------------

@dataclass(frozen=True)
class CoxeterMatrix:
    generators: tuple
    m: tuple  # m[i][j]

    def __post_init__(self):
        n = len(self.generators)
        if len(set(self.generators)) != n:
            raise ValueError("duplicate generator names")
        if len(self.m) != n or any(len(row) != n for row in self.m):
            raise ValueError("order table has wrong shape")
        for i in range(n):
            if self.m[i][i] != 1:
                raise ValueError("diagonal of a Coxeter matrix must be 1")
            for j in range(n):
                if self.m[i][j] != self.m[j][i]:
                    raise ValueError("Coxeter matrix must be symmetric")
                if i != j and self.m[i][j] not in SUPPORTED_ORDERS:
                    raise UnsupportedOrder(
                        f"m({self.generators[i]},{self.generators[j]}) = {self.m[i][j]}",
                        order=self.m[i][j])

    @classmethod
    def from_edges(cls, generators: Sequence[str], edges: dict) -> "CoxeterMatrix":
        """``edges`` maps pairs (s, t) to m_st; unlisted pairs default to 2."""
        gens = tuple(generators)
        index = {g: i for i, g in enumerate(gens)}
        m = [[1 if i == j else 2 for j in range(len(gens))] for i in range(len(gens))]
        for (s, t), order in edges.items():
            for g in (s, t):
                if g not in index:
                    raise UnknownGenerator(f"unknown generator {g!r}", generator=g)
            m[index[s]][index[t]] = m[index[t]][index[s]] = order
        return cls(gens, tuple(tuple(r) for r in m))

    @property
    def rank(self):
        return len(self.generators)

    def order(self, s, t):
        i, j = self.generators.index(s), self.generators.index(t)
        return self.m[i][j]


# k_st = 2cos(pi/m_st) as a Z[sqrt2] pair
_TWO_COS = {1: (2, 0), 2: (0, 0), 3: (1, 0), 4: (0, 1)}


def _zmul(x, y):
    return (x[0] * y[0] + 2 * x[1] * y[1], x[0] * y[1] + x[1] * y[0])


class CoxeterGroup:
    """Operations on a Coxeter system; the matrix is the only state."""

    def __init__(self, matrix: CoxeterMatrix):
        self.matrix = matrix
        self.generators = matrix.generators
        self.index = {g: i for i, g in enumerate(self.generators)}
        n = len(self.generators)
        self._k = [[_TWO_COS[matrix.m[i][j]] for j in range(n)] for i in range(n)]
        self._reduce = lru_cache(maxsize=None)(self._reduce_uncached)
        self._rw = {}

    @classmethod
    def from_edges(cls, generators, edges=None):
        return cls(CoxeterMatrix.from_edges(generators, edges or {}))

    def __repr__(self):
        return f"CoxeterGroup({self.generators})"

    @property
    def rank(self):
        return len(self.generators)

    def m(self, s, t) -> int:
        return self.matrix.m[self.index[s]][self.index[t]]

    def _check(self, word):
        for g in word:
            if g not in self.index:
                raise UnknownGenerator(f"unknown generator {g!r}", generator=g)

    # numbers game
    def _apply(self, i, vec):
        """Left action of generator ``i`` on a contragredient vector."""
        ci = vec[i]
        out = list(vec)
        out[i] = (-ci[0], -ci[1])
        row = self._k[i]
        for j in range(len(vec)):
            if j != i and (row[j][0] or row[j][1]):
                p = _zmul(row[j], ci)
                out[j] = (vec[j][0] + p[0], vec[j][1] + p[1])
        return tuple(out)

    def vector(self, word) -> tuple:
        vec = tuple((1, 0) for _ in self.generators)
        for g in reversed(word):
            vec = self._apply(self.index[g], vec)
        return vec

    def _normal_form(self, vec):
        out = []
        while True:
            for i, c in enumerate(vec):
                if _sign(*c) < 0:
                    out.append(self.generators[i])
                    vec = self._apply(i, vec)
                    break
            else:
                return tuple(out)

    def _reduce_uncached(self, word: tuple) -> tuple:
        return self._normal_form(self.vector(word))

    # public element constructors
    def reduce(self, word: Iterable[str]) -> "CoxeterElement":
        word = tuple(word)
        self._check(word)
        return CoxeterElement(self, self._reduce(word))

    element = reduce

    @property
    def identity(self) -> "CoxeterElement":
        return CoxeterElement(self, ())

    def canonical_word(self, word) -> tuple:
        word = tuple(word)
        self._check(word)
        return self._reduce(word)

    def length(self, word) -> int:
        return len(self.canonical_word(word))

    def is_reduced(self, word) -> bool:
        return self.length(word) == len(tuple(word))

    def p_word(self, s, t) -> tuple:
        """The alternating word ``s t s ...`` of length m_st."""
        self._check((s, t))
        if s == t:
            raise ValueError("p_word needs distinct generators")
        return tuple(s if i % 2 == 0 else t for i in range(self.m(s, t)))

    def braid_moves(self, word) -> list:
        """All words reachable by one braid move (p(s,t) -> p(t,s) on a window)."""
        word = tuple(word)
        out = []
        n = len(word)
        for i in range(n - 1):
            s, t = word[i], word[i + 1]
            if s == t:
                continue
            m = self.m(s, t)
            if i + m > n:
                continue
            if word[i:i + m] == self.p_word(s, t):
                out.append((i, s, t, word[:i] + self.p_word(t, s) + word[i + m:]))
        return out

    def reduced_words(self, w) -> list:
        """All reduced expressions of ``w``, in ShortLex order."""
        if not isinstance(w, CoxeterElement):
            w = self.reduce(w)
        key = w.word
        if key not in self._rw:
            if not key:
                self._rw[key] = [()]
            else:
                out = set()
                for s in w.left_descents():
                    rest = self.reduce((s,) + key)
                    for x in self.reduced_words(rest):
                        out.add((s,) + x)
                self._rw[key] = sorted(out, key=self.shortlex_key)
        return list(self._rw[key])

    def shortlex_key(self, word):
        return (len(word), tuple(self.index[g] for g in word))

    def enumerate_elements(self, max_len: int, J=None) -> list["CoxeterElement"]:
        """All elements of length <= max_len (of <J> if given), ShortLex order by canonical word."""
        gens = self.generators if J is None else tuple(g for g in self.generators if g in set(J))
        shell = {()}
        seen = [()]
        for _ in range(max_len):
            nxt = set()
            for word in shell:
                for g in gens:
                    cand = self._reduce(word + (g,))
                    if len(cand) == len(word) + 1:
                        nxt.add(cand)
            if not nxt:
                break
            seen.extend(sorted(nxt, key=self.shortlex_key))
            shell = nxt
        return [CoxeterElement(self, w) for w in seen]

    # spherical subsets
    def gram(self, J=None):
        """Gram matrix B(alpha_s, alpha_t) = -cos(pi/m_st) over Q(sqrt2)."""
        gens = self.generators if J is None else [g for g in self.generators if g in set(J)]
        rows = []
        for s in gens:
            row = []
            for t in gens:
                if s == t:
                    row.append(QSqrt2(Fraction(1)))
                else:
                    k = self._k[self.index[s]][self.index[t]]
                    row.append(QSqrt2(Fraction(-k[0], 2), Fraction(-k[1], 2)))
            rows.append(row)
        return rows

    def is_spherical(self, J=None) -> bool:
        """Positive definiteness of the Gram matrix (Sylvester's criterion)."""
        G = self.gram(J)
        n = len(G)
        A = [list(r) for r in G]
        # Gaussian elimination: leading minors are positive iff all pivots are
        for i in range(n):
            if A[i][i].sign() <= 0:
                return False
            for r in range(i + 1, n):
                f = A[r][i] / A[i][i]
                for c in range(i, n):
                    A[r][c] = A[r][c] - f * A[i][c]
        return True

    def is_k_spherical(self, k: int) -> bool:
        return all(self.is_spherical(J) for r in range(1, k + 1)
                   for J in combinations(self.generators, r))

    def longest_element(self, J=None) -> "CoxeterElement":
        J = self.generators if J is None else tuple(J)
        self._check(J)
        if not self.is_spherical(J):
            raise NotSpherical(f"<{','.join(J)}> is infinite", subset=tuple(J))
        w = ()
        while True:
            for s in self.generators:
                if s in J:
                    cand = self._reduce(w + (s,))
                    if len(cand) > len(w):
                        w = cand
                        break
            else:
                return CoxeterElement(self, w)

    # roots
    def root(self, w, s) -> "Root":
        """The root ``w . alpha_s``."""
        w = w.word if isinstance(w, CoxeterElement) else tuple(w)
        self._check(w + (s,))
        refl = self.reduce(w + (s,) + tuple(reversed(w)))
        vec = self.root_vector(w, s)
        positive = any(_sign(*c) > 0 for c in vec)
        return Root(refl, positive, _vec=vec, _witness=(w, s, False))

    def simple_root(self, s) -> "Root":
        return self.root((), s)

    def root_vector(self, w, s):
        """Coordinates of ``w . alpha_s`` in the basis of simple roots."""
        n = len(self.generators)
        vec = [(0, 0)] * n
        vec[self.index[s]] = (1, 0)
        for g in reversed(tuple(w)):
            i = self.index[g]
            # s_i(v) = v - 2B(alpha_i, v) alpha_i, 2B(alpha_i, alpha_j) = -k_ij for i != j
            acc = (-vec[i][0], -vec[i][1])
            for j in range(n):
                if j != i:
                    p = _zmul(self._k[i][j], vec[j])
                    acc = (acc[0] + p[0], acc[1] + p[1])
            vec[i] = acc
        return tuple(vec)

    def crossed_roots(self, word) -> list["Root"]:
        word = tuple(word)
        if not self.is_reduced(word):
            raise NotReduced(f"{word} is not reduced", word=word)
        return [self.root(word[:j], word[j]) for j in range(len(word))]

    def positive_roots(self, J=None) -> list["Root"]:
        """Positive roots of the spherical parabolic <J>, in crossing order of r_J."""
        r = self.longest_element(J)
        return self.crossed_roots(r.word)

    def bilinear2(self, u, v) -> QSqrt2:
        """2B(u, v) for root coordinate vectors."""
        total = QSqrt2()
        n = len(self.generators)
        for i in range(n):
            if u[i] == (0, 0):
                continue
            for j in range(n):
                if v[j] == (0, 0):
                    continue
                k = (2, 0) if i == j else (-self._k[i][j][0], -self._k[i][j][1])
                total = total + QSqrt2.of(_zmul(_zmul(k, u[i]), v[j]))
        return total

    def _first_element(self, pred, max_len=64):
        """A shortest element satisfying ``pred``, searched shell by shell."""
        shell = [self.identity]
        seen = {self.identity}
        for _ in range(max_len + 1):
            for w in shell:
                if pred(w):
                    return w
            nxt = []
            for w in shell:
                for g in self.generators:
                    x = w * (g,)
                    if x.length > w.length and x not in seen:
                        seen.add(x)
                        nxt.append(x)
            shell = nxt
        raise NotPrenilpotent("no chamber found in the required intersection")

    def interval(self, alpha: "Root", beta: "Root", open_=False) -> list["Root"]:
        """The closed interval [alpha, beta] (or the open one) of a prenilpotent pair."""
        if alpha == -beta:
            raise NotPrenilpotent("alpha and -alpha are never prenilpotent")
        b = self.bilinear2(alpha.vector, beta.vector)
        if (b - 2).sign() >= 0:
            raise NestedPair("nested pair of roots")
        if (b + 2).sign() <= 0:
            raise NotPrenilpotent("pair of roots is not prenilpotent")
        # every root of [alpha, beta] contains a chamber c of alpha and beta and misses a
        # chamber d of -alpha and -beta, so it is a wall crossed by a minimal gallery c -> d
        c = self._first_element(lambda x: x in alpha and x in beta)
        d = self._first_element(lambda x: x not in alpha and x not in beta)
        v = (c.inverse() * d).word
        orbit = {}
        for j in range(len(v)):
            r = self.root(c.word + v[:j], v[j])
            if c not in r:
                r = -r
            orbit[r.vector] = r
        out = []
        for gamma in orbit.values():
            coeffs = _cone_coefficients(alpha.vector, beta.vector, gamma.vector)
            if coeffs is not None and coeffs[0].sign() >= 0 and coeffs[1].sign() >= 0:
                out.append(gamma)
        if open_:
            out = [g for g in out if g != alpha and g != beta]
        out.sort(key=lambda g: (g.reflection.length, self.shortlex_key(g.reflection.word)))
        return out


def _cone_coefficients(u, v, g):
    """Solve g = a*u + b*v over Q(sqrt2); None if g is not in the span."""
    U = [QSqrt2.of(x) for x in u]
    V = [QSqrt2.of(x) for x in v]
    G = [QSqrt2.of(x) for x in g]
    n = len(U)
    for i in range(n):
        for j in range(i + 1, n):
            det = U[i] * V[j] - U[j] * V[i]
            if det.sign() != 0:
                a = (G[i] * V[j] - G[j] * V[i]) / det
                b = (U[i] * G[j] - U[j] * G[i]) / det
                if all((a * U[k] + b * V[k] - G[k]).sign() == 0 for k in range(n)):
                    return a, b
                return None
    return None


@dataclass(frozen=True)
class CoxeterElement:
    group: CoxeterGroup = field(repr=False, compare=False)
    word: tuple

    def __eq__(self, other):
        return isinstance(other, CoxeterElement) and self.group is other.group and self.word == other.word

    def __hash__(self):
        return hash(self.word)

    @property
    def length(self):
        return len(self.word)

    def __mul__(self, other):
        other_word = other.word if isinstance(other, CoxeterElement) else tuple(other)
        return self.group.reduce(self.word + other_word)

    def __rmul__(self, other):
        return self.group.reduce(tuple(other) + self.word)

    def inverse(self):
        return self.group.reduce(tuple(reversed(self.word)))

    def left_descents(self):
        vec = self.group.vector(self.word)
        return [g for g, c in zip(self.group.generators, vec) if _sign(*c) < 0]

    def right_descents(self):
        return self.inverse().left_descents()

    def is_identity(self):
        return not self.word

    def __repr__(self):
        return "<" + ("".join(self.word) if all(len(g) == 1 for g in self.word) else " ".join(self.word)) + ">" if self.word else "<1>"


@dataclass(frozen=True)
class Root:
    """A half-space of W, stored as (reflection r_alpha, sign).

    ``vector`` holds the coordinates in the basis of simple roots; it is
    derived data and takes no part in equality.
    """

    reflection: CoxeterElement
    positive: bool
    _vec: tuple = field(default=None, compare=False, repr=False)
    # (w, s, negated): the root equals (-1)^negated * w.alpha_s
    _witness: tuple = field(default=None, compare=False, repr=False)

    @property
    def group(self):
        return self.reflection.group

    @property
    def vector(self):
        return self._vec

    def __neg__(self):
        w, s, neg = self._witness
        return Root(self.reflection, not self.positive, tuple((-a, -b) for a, b in self._vec), (w, s, not neg))

    def __contains__(self, x) -> bool:
        if not isinstance(x, CoxeterElement):
            x = self.group.reduce(x)
        longer = (self.reflection * x).length > x.length
        return longer if self.positive else not longer

    def wall_contains(self, x, s) -> bool:
        """Whether the panel {x, xs} is crossed by the wall of this root."""
        if not isinstance(x, CoxeterElement):
            x = self.group.reduce(x)
        return (x in self) != ((x * (s,)) in self)

    def reflect(self, other: "Root") -> "Root":
        """``r_alpha . other``."""
        w, s, neg = other._witness
        r = self.group.root(self.reflection.word + tuple(w), s)
        return -r if neg else r

    def __repr__(self):
        return f"{'+' if self.positive else '-'}root{self.reflection!r}"
