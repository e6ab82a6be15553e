import random
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

from conftest import system
from moufang.action import (EdgeRootLetter, NLetter, RootLetter, TorusLetter, action, format_word, inverse_word,
                            omega, omega_B, parse_word)
from moufang.chambers import Chamber
from moufang.errors import OutOfRange, UnsupportedLetter, UnsupportedSmallField


class SLFlags:
    """SL_n(p) with x_g = I + E_{i,i+1}, n_g = m(x_g(1)), and chambers as complete flags."""

    def __init__(self, gens, p):
        self.p, self.n = p, len(gens) + 1
        self.pos = {g: i for i, g in enumerate(gens)}
        self.I = tuple(tuple(int(i == j) for j in range(self.n)) for i in range(self.n))
        self.N = {g: self.m(g, 1) for g in gens}
        self.Ninv = {g: self.inv(M) for g, M in self.N.items()}

    def mul(self, A, B):
        n, p = self.n, self.p
        return tuple(tuple(sum(A[i][k] * B[k][j] for k in range(n)) % p for j in range(n)) for i in range(n))

    def elem(self, i, j, a):
        M = [list(r) for r in self.I]
        M[i][j] = a % self.p
        return tuple(map(tuple, M))

    def x(self, g, a):
        i = self.pos[g]
        return self.elem(i, i + 1, a)

    def m(self, g, a):
        i = self.pos[g]
        hits = []
        for c1 in range(self.p):
            for c2 in range(self.p):
                M = self.mul(self.mul(self.elem(i + 1, i, c1), self.x(g, a)), self.elem(i + 1, i, c2))
                if all(sum(1 for v in r if v) == 1 for r in M):
                    hits.append(M)
        assert len(hits) == 1
        return hits[0]

    def inv(self, M):
        n, p = self.n, self.p
        A = [list(M[i]) + [int(i == j) for j in range(n)] for i in range(n)]
        for c in range(n):
            r = next(r for r in range(c, n) if A[r][c])
            A[c], A[r] = A[r], A[c]
            iv = pow(A[c][c], p - 2, p)
            A[c] = [iv * v % p for v in A[c]]
            for r in range(n):
                if r != c and A[r][c]:
                    f = A[r][c]
                    A[r] = [(a - f * b) % p for a, b in zip(A[r], A[c])]
        return tuple(tuple(r[n:]) for r in A)

    def _rref(self, vecs):
        p = self.p
        rows = [list(v) for v in vecs]
        k = 0
        for c in range(self.n):
            r = next((i for i in range(k, len(rows)) if rows[i][c]), None)
            if r is None:
                continue
            rows[k], rows[r] = rows[r], rows[k]
            iv = pow(rows[k][c], p - 2, p)
            rows[k] = [iv * v % p for v in rows[k]]
            for i in range(len(rows)):
                if i != k and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[k])]
            k += 1
        return tuple(map(tuple, rows[:k]))

    def flag(self, M):
        cols = [tuple(M[i][j] for i in range(self.n)) for j in range(self.n)]
        return tuple(self._rref(cols[:k]) for k in range(1, self.n))

    def chamber_matrix(self, c):
        M = self.I
        for g, a in zip(c.type, c.labels):
            M = self.mul(self.mul(M, self.x(g, a)), self.N[g])
        return M

    def letter(self, L):
        if isinstance(L, RootLetter):
            return self.x(L.gen, L.param)
        if isinstance(L, NLetter):
            return self.Ninv[L.gen] if L.inverse else self.N[L.gen]
        return self.mul(self.inv(self.m(L.gen, L.u)), self.m(L.gen, L.v))


@lru_cache(maxsize=None)
def flag_oracle(name):
    cs = system(name)
    G = SLFlags(cs.W.generators, next(iter(cs.q.values())))
    chambers = cs.enumerate(cs.W.longest_element().length)
    by_flag = {G.flag(G.chamber_matrix(c)): c for c in chambers}
    assert len(by_flag) == len(chambers)
    return cs, G, chambers, by_flag


def letters(cs):
    out = []
    for g in cs.W.generators:
        q = cs.q[g]
        out += [RootLetter(g, a) for a in range(q)] + [NLetter(g), NLetter(g, True)]
        out += [TorusLetter(g, u, v) for u in range(1, q) for v in range(1, q)]
    return out


@pytest.mark.parametrize("name", ["A2:3", "a3_f2", "a3_f3"])
@given(data=st.data())
def test_action_matches_flag_oracle(name, data):
    cs, G, chambers, by_flag = flag_oracle(name)
    c = data.draw(st.sampled_from(chambers))
    word = data.draw(st.lists(st.sampled_from(letters(cs)), min_size=1, max_size=6))
    M = G.chamber_matrix(c)
    for L in reversed(word):
        M = G.mul(G.letter(L), M)
    assert omega(cs, word, c) == by_flag[G.flag(M)]


def test_flag_oracle_every_letter_every_chamber_a3_f2():
    cs, G, chambers, by_flag = flag_oracle("a3_f2")
    for L in letters(cs):
        A = G.letter(L)
        for c in chambers:
            assert omega(cs, [L], c) == by_flag[G.flag(G.mul(A, G.chamber_matrix(c)))]


# -- the recursion's documented cases --------------------------------------------

def test_b_words_fix_base():
    cs = system("a3_f3")
    base = cs.base()
    for L in letters(cs):
        if not isinstance(L, NLetter):
            assert omega_B(cs, [L], base) == base


def test_root_letter_on_leading_generator():
    cs = system("a3_f3")
    c = cs.chamber(("s", "t"), (2, 1))
    assert omega_B(cs, [RootLetter("s", 2)], c) == Chamber(("s", "t"), (1, 1))


def test_commuting_root_letter_passes_the_first_label():
    cs = system("a3_f3")
    c = cs.chamber(("t",), (2,))
    assert omega_B(cs, [RootLetter("r", 1)], c) == c
    c = cs.chamber(("r", "t"), (1, 2))
    assert omega_B(cs, [RootLetter("t", 1)], c) == Chamber(("r", "t"), (1, 0))


def test_n_letter_cases():
    cs = system("A2:3")
    act = action(cs)
    c = cs.chamber(("s",), (2,))
    assert omega(cs, [NLetter("t")], c) == cs.chamber(("t", "s"), (0, 2))
    assert omega(cs, [NLetter("s")], cs.chamber(("s",), (0,))) == cs.base()
    ubar, _ = cs.spec.rank1("s").ns_conj("s", 1)
    assert omega(cs, [NLetter("s")], cs.chamber(("s",), (1,))) == cs.chamber(("s",), (ubar,))
    assert act.omega([], c) == c


@pytest.mark.parametrize("name", ["A2:2", "B2:3", "a3_f2", "b3_f2"])
def test_n_inverse_undoes_n(name):
    cs = system(name)
    unsupported = 0
    for c in cs.enumerate(cs.W.longest_element().length):
        for s in cs.W.generators:
            try:
                assert omega(cs, [NLetter(s, True), NLetter(s)], c) == c
                assert omega(cs, [NLetter(s), NLetter(s, True)], c) == c
            except UnsupportedSmallField:
                unsupported += 1
    # only a B2(2) edge can fail to expand its non-simple root elements
    assert unsupported == 0 or name == "b3_f2"


@given(st.data())
def test_action_law_and_inverses(data):
    cs = system("a3_f3")
    chambers = cs.enumerate(6)
    c = data.draw(st.sampled_from(chambers))
    v = data.draw(st.lists(st.sampled_from(letters(cs)), max_size=4))
    w = data.draw(st.lists(st.sampled_from(letters(cs)), max_size=4))
    assert omega(cs, v + w, c) == omega(cs, v, omega(cs, w, c))
    assert omega(cs, inverse_word(cs, v + w), omega(cs, v + w, c)) == c


def test_n_round_trips_on_samples_a3_f3():
    cs = system("a3_f3")
    rng = random.Random(3)
    for c in rng.sample(cs.enumerate(6), 80):
        for s in cs.W.generators:
            assert omega(cs, [NLetter(s, True)], omega(cs, [NLetter(s)], c)) == c


def test_edge_root_letters():
    cs = system("a3_f3")
    eng = cs.spec.engine("r", "s")
    idx = next(i for i in range(len(eng.roots)) if not eng.is_simple(i))
    x = EdgeRootLetter(("r", "s"), idx, 1)
    base = cs.base()
    assert omega(cs, [x], base) == base
    # x equals its expansion into simple root letters
    word = [RootLetter(g, a) for g, a in eng.expand(idx, 1)]
    for c in cs.enumerate(3):
        assert omega(cs, [x], c) == omega(cs, word, c)


def test_parse_and_format():
    text = "u:s:3 n:s ninv:t h:s:1:2 x:r,s:1:2"
    word = parse_word(text)
    assert format_word(word) == text
    assert word[1] == NLetter("s") and word[2] == NLetter("t", True)
    for bad in ("q:s", "u:s", "h:s:1", "u:s:x"):
        with pytest.raises(UnsupportedLetter):
            parse_word(bad)


def test_invalid_letters():
    cs = system("A2:3")
    with pytest.raises(UnsupportedLetter):
        omega(cs, [RootLetter("z", 1)], cs.base())
    with pytest.raises(UnsupportedLetter):
        omega(cs, [RootLetter("s", 3)], cs.base())
    with pytest.raises(UnsupportedLetter):
        omega(cs, [TorusLetter("s", 0, 1)], cs.base())
    with pytest.raises(UnsupportedLetter):
        omega_B(cs, [NLetter("s")], cs.base())


def test_limit():
    cs = system("d4tilde_f2")
    with pytest.raises(OutOfRange):
        omega(cs, [NLetter("a"), NLetter("c")], cs.base(), limit=1)
    assert omega(cs, [NLetter("a"), NLetter("c")], cs.base(), limit=2).type == ("a", "c")
