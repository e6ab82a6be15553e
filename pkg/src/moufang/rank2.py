"""Rank-2 (and rank-1) Moufang buildings as coset spaces of small matrix groups.

Fixed matrix conventions (indices are 0-based)::

    A1      SL2        x_s(a) = I + a E01
    A1xA1   SL2 x SL2  block diagonal; x_s(a) = I + a E01, x_t(a) = I + a E23
    A2      SL3        x_s(a) = I + a E01, x_t(a) = I + a E12
    B2      Sp4        form antidiag(1, 1, -1, -1) (rows top to bottom);
                       short: x(a) = I + a (E01 - E23), long: x(a) = I + a E12

Negative simple root groups use the transposed matrices.  Every other
structure constant (m(u), n_s, the bar map and b(u), commutators, torus
conjugation, the matrices of non-simple roots) is computed from these.  The
matrix of the root ``w . alpha_g`` is ``n_w X_g n_w^-1``.

Chambers of the building are cosets ``M B`` with B the upper triangular
subgroup; ``flag_form`` gives each coset a canonical fingerprint and the
Bruhat cell of ``M`` is read from the rank profile of ``M``.

All parameters here are *local*: the parametrisation of the edge's own
matrix group.  ``units`` picks the element e_s = x_s(unit) that defines
n_s = m(e_s); it defaults to 1.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import linalg as la
from .coxeter import CoxeterGroup
from .errors import IdentityInput, NotPrenilpotent, UnsupportedSmallField, WrongEdge
from .gf import GF, field

KINDS = {"A1": 1, "A1xA1": 2, "A2": 3, "B2": 4}


@dataclass(frozen=True)
class Rank2Descriptor:
    """Edge type, field size, generator pair; for B2 the generator with the short root."""

    kind: str
    q: int
    pair: tuple
    short: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown rank-2 kind {self.kind!r}")
        if self.kind == "A1":
            if len(self.pair) != 1:
                raise ValueError("A1 takes a single generator")
        elif len(self.pair) != 2 or self.pair[0] == self.pair[1]:
            raise ValueError("rank-2 descriptor needs two distinct generators")
        if self.kind == "B2":
            short = self.short if self.short is not None else self.pair[0]
            if short not in self.pair:
                raise ValueError("short generator must belong to the pair")
            object.__setattr__(self, "short", short)

    @property
    def m(self):
        return KINDS[self.kind]


@dataclass(frozen=True)
class RootGroupElem:
    """``x_root(param)`` of the edge ``edge``; ``root`` indexes ``Rank2Engine.roots``."""

    edge: tuple
    root: int
    param: int

    def is_identity(self):
        return self.param == 0


@dataclass(frozen=True)
class TorusElem:
    """``m(x_gen(u))^-1 m(x_gen(v))``; only the ratio u/v matters."""

    gen: str
    u: int
    v: int

    def is_identity(self):
        return self.u == self.v


class Rank2Engine:
    """Matrix model of one rank-1 or rank-2 Moufang building."""

    def __init__(self, desc: Rank2Descriptor, units=None):
        self.desc = desc
        self.F: GF = field(desc.q)
        self.gens = tuple(desc.pair)
        self.kind = desc.kind
        F = self.F
        neg1 = F.neg(1)
        if self.kind == "A1":
            self.n_dim = 2
            X = {self.gens[0]: {(0, 1): 1}}
        elif self.kind == "A1xA1":
            self.n_dim = 4
            X = {self.gens[0]: {(0, 1): 1}, self.gens[1]: {(2, 3): 1}}
        elif self.kind == "A2":
            self.n_dim = 3
            X = {self.gens[0]: {(0, 1): 1}, self.gens[1]: {(1, 2): 1}}
        else:
            self.n_dim = 4
            long_ = [g for g in self.gens if g != desc.short][0]
            X = {desc.short: {(0, 1): 1, (2, 3): neg1}, long_: {(1, 2): 1}}
        self._Xsimple = X
        self.units = {g: 1 for g in self.gens}
        if units:
            for g, a in units.items():
                if a == 0:
                    raise IdentityInput("unit parameter must be nonzero")
                self.units[g] = a
        if len(self.gens) == 1:
            self.W = CoxeterGroup.from_edges(self.gens)
        else:
            self.W = CoxeterGroup.from_edges(self.gens, {self.gens: desc.m})
        self.I = la.identity(self.n_dim)
        self._n = {}
        self._ninv = {}
        for g in self.gens:
            self._n[g] = self.m_matrix(g, self.units[g])
            self._ninv[g] = la.inverse(F, self._n[g])
        self._build_roots()
        self._build_cells()
        self._torus_table = None
        self._expansion = None
        self._extract_cache = {}

    def __repr__(self):
        return f"Rank2Engine({self.kind}, q={self.desc.q}, {self.gens})"

    # -- elementary matrices ---------------------------------------------
    def x(self, g, a):
        """Simple root element x_g(a)."""
        if g not in self._Xsimple:
            raise WrongEdge(f"{g!r} is not a generator of this edge")
        return la.elementary(self.F, self.n_dim, self._Xsimple[g], a)

    def xneg(self, g, a):
        X = {(j, i): c for (i, j), c in self._Xsimple[g].items()}
        return la.elementary(self.F, self.n_dim, X, a)

    def xroot(self, idx, a):
        return la.elementary(self.F, self.n_dim, self.root_X[idx], a)

    def n(self, g):
        return self._n[g]

    def n_inv(self, g):
        return self._ninv[g]

    def n_word(self, word):
        return la.prod(self.F, [self._n[g] for g in word], self.n_dim)

    def mul(self, *mats):
        return la.prod(self.F, mats, self.n_dim)

    def inv(self, A):
        return la.inverse(self.F, A)

    # -- m(u) ---------------------------------------------------------------
    def m_of(self, g, a):
        """Parameters (c', c'') of the unique u', u'' in U_-g with u' x_g(a) u'' monomial."""
        if a == 0:
            raise IdentityInput("m(u) needs u != 1")
        return self._m_params(g, a)

    @lru_cache(maxsize=None)
    def _m_params(self, g, a):
        u = self.x(g, a)
        found = []
        for c1 in self.F.elements():
            left = la.mul(self.F, self.xneg(g, c1), u)
            for c2 in self.F.elements():
                if la.is_monomial(la.mul(self.F, left, self.xneg(g, c2))):
                    found.append((c1, c2))
        if len(found) != 1:
            raise AssertionError(f"m(u) not unique: {found}")
        return found[0]

    def m_matrix(self, g, a):
        c1, c2 = self.m_of(g, a)
        return self.mul(self.xneg(g, c1), self.x(g, a), self.xneg(g, c2))

    # -- roots ---------------------------------------------------------------
    def _build_roots(self):
        F = self.F
        W = self.W
        w0 = W.longest_element()
        self.roots = W.crossed_roots(w0.word)
        self.root_X = []
        self.root_index = {}
        simple = {W.simple_root(g): g for g in self.gens}
        for idx, r in enumerate(self.roots):
            if r in simple:
                # simple roots keep the defining matrices, whatever the crossing witness
                self.root_X.append(dict(self._Xsimple[simple[r]]))
                self.root_index[r] = idx
                continue
            w, g, _ = r._witness
            nw = self.n_word(w)
            Xg = la.elementary(F, self.n_dim, self._Xsimple[g], 1)
            Xm = [list(row) for row in Xg]
            for i in range(self.n_dim):
                Xm[i][i] = F.sub(Xm[i][i], 1)
            Xc = la.mul(F, la.mul(F, nw, tuple(tuple(r_) for r_ in Xm)), la.inverse(F, nw))
            self.root_X.append({(i, j): Xc[i][j] for i in range(self.n_dim)
                                for j in range(self.n_dim) if Xc[i][j]})
            self.root_index[r] = idx
        self.simple_index = {g: self.root_index[W.simple_root(g)] for g in self.gens}
        pivots = []
        for idx, X in enumerate(self.root_X):
            p = min(X)  # first nonzero entry, row-major
            pivots.append((p[1] - p[0], idx, p))
        pivots.sort()
        self._peel = [(idx, p) for _, idx, p in pivots]

    def root_of(self, idx):
        return self.roots[idx]

    def is_simple(self, idx):
        return idx in self.simple_index.values()

    def simple_gen(self, idx):
        for g, i in self.simple_index.items():
            if i == idx:
                return g
        return None

    # -- Bruhat cells ----------------------------------------------------
    def _build_cells(self):
        self._cell = {}
        self.elements = self.W.enumerate_elements(len(self.W.longest_element().word))
        for w in self.elements:
            perm = la.support(self.n_word(w.word))
            self._cell[perm] = w

    def cell(self, M):
        """The Weyl group element w with M in B n_w B."""
        return self._cell[la.bruhat_permutation(self.F, M)]

    def fingerprint(self, M):
        return la.flag_form(self.F, M)

    def seq_matrix(self, word, labels):
        mats = []
        for g, a in zip(word, labels):
            mats.append(self.x(g, a))
            mats.append(self._n[g])
        return self.mul(*mats) if mats else self.I

    def extract(self, M, word):
        """Labels (a_1..a_k) with M B = x(a_1) n ... x(a_k) n B along the reduced ``word``."""
        word = tuple(word)
        key = (self.fingerprint(M), word)
        hit = self._extract_cache.get(key)
        if hit is not None:
            return hit
        if self.cell(M).length != len(word) or self.cell(M) != self.W.reduce(word):
            raise ValueError("matrix is not in the Bruhat cell of the given word")
        labels = []
        cur = M
        for i, g in enumerate(word):
            target = len(word) - i - 1
            hits = []
            for a in self.F.elements():
                cand = self.mul(self._ninv[g], self.x(g, self.F.neg(a)), cur)
                if self.cell(cand).length == target:
                    hits.append((a, cand))
            if len(hits) != 1:
                raise AssertionError("non-unique label extraction")
            labels.append(hits[0][0])
            cur = hits[0][1]
        out = tuple(labels)
        self._extract_cache[key] = out
        return out

    def bruhat(self, M):
        """(w, labels along the canonical word of w, element b of B) with M = x n ... x n b."""
        w = self.cell(M)
        labels = self.extract(M, w.word)
        b = self.mul(self.inv(self.seq_matrix(w.word, labels)), M)
        assert la.is_upper(b)
        return w, labels, self.decompose_borel(b)

    def relabel(self, first, labels):
        """The equivalent labels of type p(t, s) for labels of type p(s, t), s = ``first``."""
        s = first
        t = [g for g in self.gens if g != s][0]
        M = self.seq_matrix(self.W.p_word(s, t), labels)
        return self.extract(M, self.W.p_word(t, s))

    # -- decompositions --------------------------------------------------
    def decompose_unipotent(self, Z):
        """[(root index, param)] in peel order with Z = prod x_root(param); zeros omitted."""
        F = self.F
        out = []
        cur = Z
        for idx, p in self._peel:
            c = F.div(cur[p[0]][p[1]], self.root_X[idx][p])
            if c:
                out.append((idx, c))
                cur = self.mul(self.xroot(idx, F.neg(c)), cur)
        if cur != self.I:
            raise ValueError("matrix is not in U+")
        return out

    def coroot(self, g, t):
        """m(x_g(t))^-1 m(x_g(1)), i.e. the torus element with ratio t."""
        return self.mul(self.inv(self.m_matrix(g, t)), self.m_matrix(g, 1))

    def torus(self, g, u, v):
        return self.mul(self.inv(self.m_matrix(g, u)), self.m_matrix(g, v))

    def decompose_torus(self, D):
        """{gen: t} with D = prod_gen coroot(gen, t), identity factors omitted."""
        if self._torus_table is None:
            table = {}
            nz = self.F.nonzero()
            for ts in product(nz, repeat=len(self.gens)):
                M = self.mul(*[self.coroot(g, t) for g, t in zip(self.gens, ts)])
                table.setdefault(M, ts)
            self._torus_table = table
        ts = self._torus_table.get(D)
        if ts is None:
            raise ValueError("matrix is not in the torus")
        return {g: t for g, t in zip(self.gens, ts) if t != 1}

    def decompose_borel(self, b):
        """b = (torus part) * (unipotent part) as ({gen: t}, [(root, param)])."""
        D = tuple(tuple(b[i][j] if i == j else 0 for j in range(self.n_dim)) for i in range(self.n_dim))
        U = self.mul(self.inv(D), b)
        return self.decompose_torus(D), self.decompose_unipotent(U)

    # -- generator calculus ----------------------------------------------
    def ns_conj(self, g, a):
        """(abar, (d, t)) with n u n = x(abar) n x(d) h(t), u = x_g(a) != 1."""
        if a == 0:
            raise IdentityInput("bar map needs u != 1")
        return self._ns_conj(g, a)

    @lru_cache(maxsize=None)
    def _ns_conj(self, g, a):
        n = self._n[g]
        lhs = self.mul(n, self.x(g, a), n)
        hits = []
        for c in self.F.elements():
            b = self.mul(self.inv(self.mul(self.x(g, c), n)), lhs)
            if la.is_upper(b):
                hits.append((c, b))
        assert len(hits) == 1
        c, b = hits[0]
        D = tuple(tuple(b[i][j] if i == j else 0 for j in range(self.n_dim)) for i in range(self.n_dim))
        U = self.mul(b, self.inv(D))  # b = U * D
        parts = self.decompose_unipotent(U)
        sidx = self.simple_index[g]
        assert all(i == sidx for i, _ in parts)
        d = parts[0][1] if parts else 0
        tor = self.decompose_torus(D)
        assert set(tor) <= {g}
        return c, (d, tor.get(g, 1))

    def n_square(self, g):
        """t with n_g^2 = coroot(g, t)."""
        tor = self.decompose_torus(self.mul(self._n[g], self._n[g]))
        return tor.get(g, 1)

    def conj_past(self, idx, c, g, a):
        """Letters of (x_g(a)^-1 x_root(c) x_g(a))^{n_g} for a root other than alpha_g."""
        if idx == self.simple_index[g]:
            raise ValueError("root must differ from alpha_g")
        Z = self.mul(self._ninv[g], self.x(g, self.F.neg(a)), self.xroot(idx, c), self.x(g, a), self._n[g])
        return self.decompose_unipotent(Z)

    def torus_conj(self, hmat, g, a):
        """Parameter of h x_g(a) h^-1 (an element of U_g)."""
        Z = self.mul(hmat, self.x(g, a), self.inv(hmat))
        parts = self.decompose_unipotent(Z)
        assert all(i == self.simple_index[g] for i, _ in parts)
        return parts[0][1] if parts else 0

    def torus_past_n(self, hmat, g):
        """{gen: t} for n_g^-1 h n_g."""
        return self.decompose_torus(self.mul(self._ninv[g], hmat, self._n[g]))

    def commutator(self, i, a, j, b):
        """[x_i(a), x_j(b)] = x_i(a)^-1 x_j(b)^-1 x_i(a) x_j(b) as [(root, param)]."""
        F = self.F
        if i == j:
            return []
        Z = self.mul(self.xroot(i, F.neg(a)), self.xroot(j, F.neg(b)), self.xroot(i, a), self.xroot(j, b))
        return self.decompose_unipotent(Z)

    def open_interval(self, i, j):
        alpha, beta = self.roots[i], self.roots[j]
        if alpha == -beta:
            raise NotPrenilpotent("opposite roots")
        return [self.root_index[r] for r in self.W.interval(alpha, beta, open_=True)]

    def _expansion_table(self):
        if self._expansion is None:
            start = self.I
            parent = {start: None}
            queue = deque([start])
            gens = [(g, a, self.x(g, a)) for g in self.gens for a in self.F.nonzero()]
            while queue:
                M = queue.popleft()
                for g, a, X in gens:
                    N = la.mul(self.F, M, X)
                    if N not in parent:
                        parent[N] = (M, g, a)
                        queue.append(N)
            self._expansion = parent
        return self._expansion

    def expand(self, idx, c):
        """A word [(gen, param)] in the simple root groups with product x_root(c)."""
        if c == 0:
            return []
        if self.is_simple(idx):
            return [(self.simple_gen(idx), c)]
        table = self._expansion_table()
        target = self.xroot(idx, c)
        if target not in table:
            raise UnsupportedSmallField(
                f"x_{idx}({c}) is not in <U_s, U_t> for {self.kind}({self.desc.q})",
                edge=self.gens, q=self.desc.q)
        word = []
        while table[target] is not None:
            prev, g, a = table[target]
            word.append((g, a))
            target = prev
        return word[::-1]

    def simple_groups_generate(self):
        """Whether <U_s, U_t> is all of U+ (the span needed for expansions)."""
        return len(self._expansion_table()) == self.desc.q ** len(self.roots)

    # -- global checks ---------------------------------------------------
    def chamber_count(self):
        return sum(self.desc.q ** w.length for w in self.elements)

    def opposition_graph(self):
        """(number of chambers opposite the base chamber, whether they form a connected graph)."""
        w0 = self.W.longest_element()
        word = w0.word
        chambers = {}
        for labels in product(self.F.elements(), repeat=len(word)):
            M = self.seq_matrix(word, labels)
            chambers[self.fingerprint(M)] = M
        adj = {k: set() for k in chambers}
        for k, M in chambers.items():
            for g in self.gens:
                for a in self.F.elements():
                    nb = self.fingerprint(self.mul(M, self.x(g, a), self._n[g]))
                    if nb in chambers and nb != k:
                        adj[k].add(nb)
        start = next(iter(chambers))
        seen = {start}
        stack = [start]
        while stack:
            v = stack.pop()
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(chambers), len(seen) == len(chambers)

    def moufang_set(self, g):
        return MoufangSet.from_engine(self, g)


INF = "inf"


@dataclass
class MoufangSet:
    """Panel points GF(q) and ``inf`` (the base chamber) with the root groups as permutations."""

    points: list
    root_groups: dict  # point -> list of permutations (dicts point -> point)

    @classmethod
    def from_engine(cls, eng: Rank2Engine, g):
        F = eng.F
        # panel of the base chamber: B (label inf) and x_g(a) n_g B (label a)
        reps = {INF: eng.I}
        for a in F.elements():
            reps[a] = eng.mul(eng.x(g, a), eng.n(g))
        fp = {eng.fingerprint(M): p for p, M in reps.items()}

        def perm_of(M):
            return {p: fp[eng.fingerprint(eng.mul(M, R))] for p, R in reps.items()}

        U_inf = [eng.x(g, a) for a in F.elements()]
        groups = {}
        for p, R in reps.items():
            # R maps inf to p, so U_p = R U_inf R^-1
            Rinv = eng.inv(R)
            groups[p] = [perm_of(eng.mul(R, u, Rinv)) for u in U_inf]
        return cls(list(reps), groups)

    def check_ms1(self):
        """U_p fixes p and is simply transitive on the other points."""
        for p, group in self.root_groups.items():
            others = [x for x in self.points if x != p]
            for perm in group:
                if perm[p] != p:
                    return False
            ref = others[0]
            images = sorted((perm[ref] for perm in group), key=str)
            if images != sorted(others, key=str):
                return False
        return True

    def check_ms2(self):
        """Conjugating U_x by an element of U_y gives the root group of the image point."""
        as_sets = {p: {tuple(sorted(perm.items(), key=lambda kv: str(kv[0]))) for perm in group}
                   for p, group in self.root_groups.items()}
        for y, group in self.root_groups.items():
            for g in group:
                ginv = {v: k for k, v in g.items()}
                for x, ux in self.root_groups.items():
                    conj = set()
                    for u in ux:
                        c = {p: g[u[ginv[p]]] for p in self.points}
                        conj.add(tuple(sorted(c.items(), key=lambda kv: str(kv[0]))))
                    if conj != as_sets[g[x]]:
                        return False
        return True


@lru_cache(maxsize=None)
def engine(desc: Rank2Descriptor, units: tuple = ()) -> Rank2Engine:
    """Shared engine per descriptor; ``units`` is a tuple of (gen, unit) pairs."""
    return Rank2Engine(desc, dict(units))


def rank1(q: int, gen: str) -> Rank2Engine:
    return engine(Rank2Descriptor("A1", q, (gen,)))


# module-level operations over a descriptor, mirroring the engine methods

def to_matrix(desc: Rank2Descriptor, item, units=()):
    eng = engine(desc, units)
    if isinstance(item, RootGroupElem):
        if tuple(item.edge) != eng.gens:
            raise WrongEdge(f"element of edge {item.edge} used on {eng.gens}")
        return eng.xroot(item.root, item.param)
    if isinstance(item, TorusElem):
        if item.gen not in eng.gens:
            raise WrongEdge(f"torus of {item.gen!r} used on {eng.gens}")
        return eng.torus(item.gen, item.u, item.v)
    if isinstance(item, tuple) and item and item[0] == "n":
        return eng.n(item[1])
    if isinstance(item, tuple) and len(item) == 2:
        word, labels = item
        return eng.seq_matrix(word, labels)
    raise WrongEdge(f"cannot convert {item!r}")


def bruhat(desc: Rank2Descriptor, M, units=()):
    return engine(desc, units).bruhat(M)


def relabel(desc: Rank2Descriptor, first, labels, units=()):
    return engine(desc, units).relabel(first, tuple(labels))


def opposition_graph(desc: Rank2Descriptor):
    return engine(desc).opposition_graph()


def moufang_set(desc: Rank2Descriptor, gen):
    return engine(desc).moufang_set(gen)


def m_of(desc: Rank2Descriptor, elem: RootGroupElem, units=()):
    eng = engine(desc, units)
    g = eng.simple_gen(elem.root)
    if g is None:
        raise WrongEdge("m(u) needs a simple root element")
    return eng.m_of(g, elem.param)


def ns_conj(desc: Rank2Descriptor, elem: RootGroupElem, units=()):
    """(ubar, b) with n_s u n_s = ubar n_s b; b is a word [x_s(d), h_s]."""
    eng = engine(desc, units)
    g = eng.simple_gen(elem.root)
    if g is None:
        raise WrongEdge("ns_conj needs a simple root element")
    ubar, (d, t) = eng.ns_conj(g, elem.param)
    b = [RootGroupElem(eng.gens, elem.root, d), TorusElem(g, t, 1)]
    return RootGroupElem(eng.gens, elem.root, ubar), b


def commutator(desc: Rank2Descriptor, a: RootGroupElem, b: RootGroupElem, units=()):
    eng = engine(desc, units)
    eng.open_interval(a.root, b.root)  # rejects opposite roots
    return [RootGroupElem(eng.gens, i, c) for i, c in eng.commutator(a.root, a.param, b.root, b.param)]


def expand_nonsimple(desc: Rank2Descriptor, x: RootGroupElem, units=()):
    eng = engine(desc, units)
    return [RootGroupElem(eng.gens, eng.simple_index[g], c) for g, c in eng.expand(x.root, x.param)]


def torus_act(desc: Rank2Descriptor, h: TorusElem, x: RootGroupElem, units=()):
    """h x h^-1; on commuting generator pairs this is x itself."""
    eng = engine(desc, units)
    if h.is_identity() or (desc.kind == "A1xA1" and eng.simple_gen(x.root) != h.gen):
        return x
    hm = eng.torus(h.gen, h.u, h.v)
    Z = eng.mul(hm, eng.xroot(x.root, x.param), eng.inv(hm))
    parts = eng.decompose_unipotent(Z)
    assert all(i == x.root for i, _ in parts)
    return RootGroupElem(eng.gens, x.root, parts[0][1] if parts else 0)
