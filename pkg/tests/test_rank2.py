from itertools import product

import pytest
from hypothesis import given, strategies as st

from moufang import rank2
from moufang.errors import IdentityInput, NotPrenilpotent, UnsupportedSmallField
from moufang.gf import field
from moufang.rank2 import Rank2Descriptor, RootGroupElem, TorusElem, engine

EDGES = [("A1xA1", q) for q in (2, 3, 4, 5)] + [("A2", q) for q in (2, 3, 4, 5)] + [("B2", q) for q in (2, 3, 5)]


def desc(kind, q):
    return Rank2Descriptor(kind, q, ("s", "t"), "s" if kind == "B2" else None)


# -- a tiny independent matrix toolkit over GF(q) ------------------------------

def mmul(F, A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = 0
            for k in range(n):
                acc = F.add(acc, F.mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def mprod(F, *ms):
    out = ms[0]
    for m in ms[1:]:
        out = mmul(F, out, m)
    return out


def upper(A):
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(i))


def minv(F, A):
    # brute force is too slow; use adjugate-free Gauss-Jordan written out here
    n = len(A)
    M = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c])
        M[c], M[p] = M[p], M[c]
        iv = F.inv(M[c][c])
        M[c] = [F.mul(iv, x) for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def same_coset(F, A, B):
    return upper(mmul(F, minv(F, A), B))


def ident(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


# -- matrices --------------------------------------------------------------------

def test_to_matrix_examples():
    d = desc("A2", 2)
    eng = engine(d)
    assert rank2.to_matrix(d, RootGroupElem(("s", "t"), eng.simple_index["s"], 0)) == ident(3)
    X = rank2.to_matrix(d, RootGroupElem(("s", "t"), eng.simple_index["s"], 1))
    off = [(i, j) for i in range(3) for j in range(3) if i != j and X[i][j]]
    assert off == [(0, 1)] and all(X[i][i] == 1 for i in range(3))
    n = rank2.to_matrix(d, ("n", "s"))
    assert mmul(field(2), n, n) == ident(3)
    assert rank2.to_matrix(d, TorusElem("s", 1, 1)) == ident(3)


@pytest.mark.parametrize("kind,q", EDGES)
def test_n_is_monomial_and_m_of_unique(kind, q):
    eng = engine(desc(kind, q))
    F = eng.F
    for g in eng.gens:
        for a in F.nonzero():
            c1, c2 = eng.m_of(g, a)
            M = mprod(F, eng.xneg(g, c1), eng.x(g, a), eng.xneg(g, c2))
            assert all(sum(1 for x in row if x) == 1 for row in M)
    with pytest.raises(IdentityInput):
        eng.m_of("s", 0)


def test_m_of_sl2():
    eng = rank2.rank1(5, "s")
    c1, c2 = eng.m_of("s", 1)
    assert c1 == c2 == field(5).neg(1)


@pytest.mark.parametrize("kind,q", EDGES)
def test_ns_conj_identity(kind, q):
    # n u n = x(ubar) n x(d) h(t), checked with independent matrix products
    eng = engine(desc(kind, q))
    F = eng.F
    for g in eng.gens:
        n = eng.n(g)
        for a in F.nonzero():
            ubar, (d, t) = eng.ns_conj(g, a)
            lhs = mprod(F, n, eng.x(g, a), n)
            rhs = mprod(F, eng.x(g, ubar), n, eng.x(g, d), eng.coroot(g, t))
            assert lhs == rhs
            assert ubar != 0


def test_ns_conj_module_level():
    d = Rank2Descriptor("A1", 3, ("s",))
    eng = engine(d)
    ubar, b = rank2.ns_conj(d, RootGroupElem(("s",), 0, 1))
    F = eng.F
    lhs = mprod(F, eng.n("s"), eng.x("s", 1), eng.n("s"))
    rhs = mprod(F, eng.x("s", ubar.param), eng.n("s"), eng.x("s", b[0].param), eng.torus("s", b[1].u, b[1].v))
    assert lhs == rhs


# -- Bruhat extraction -------------------------------------------------------------

@pytest.mark.parametrize("kind,q", [("A2", 3), ("B2", 2), ("A1xA1", 3)])
def test_bruhat_round_trip(kind, q):
    eng = engine(desc(kind, q))
    for w in eng.elements:
        for labels in product(range(q), repeat=w.length):
            M = eng.seq_matrix(w.word, labels)
            got_w, got, (tor, uni) = eng.bruhat(M)
            assert got_w == w and got == labels and not tor and not uni


def test_bruhat_examples():
    d = desc("A2", 3)
    eng = engine(d)
    w, labels, rest = rank2.bruhat(d, ident(3))
    assert w.is_identity() and labels == () and rest == ({}, [])
    w, labels, _ = rank2.bruhat(d, mmul(eng.F, eng.x("s", 1), eng.n("s")))
    assert w.word == ("s",) and labels == (1,)
    M = rank2.to_matrix(d, (("s", "t", "s"), (1, 2, 1)))
    assert rank2.bruhat(d, M)[1] == (1, 2, 1)


def test_bruhat_with_borel_part():
    eng = engine(desc("A2", 3))
    F = eng.F
    b = mprod(F, eng.coroot("s", 2), eng.x("t", 1))
    M = mmul(F, eng.seq_matrix(("s", "t"), (2, 1)), b)
    w, labels, (tor, uni) = eng.bruhat(M)
    assert labels == (2, 1) and tor == {"s": 2} and uni == [(eng.simple_index["t"], 1)]


def test_relabel_examples():
    d = desc("A1xA1", 3)
    assert rank2.relabel(d, "s", (1, 2)) == (2, 1)
    d = desc("A2", 2)
    assert rank2.relabel(d, "s", (0, 0, 0)) == (0, 0, 0)


@pytest.mark.parametrize("kind,q", [("A2", 2), ("A2", 3), ("B2", 2), ("B2", 3), ("A1xA1", 2), ("A2", 4)])
def test_relabel_matches_coset_oracle(kind, q):
    # search all labels of type p(t,s) for the one giving the same coset
    eng = engine(desc(kind, q))
    F = eng.F
    ps, pt = eng.W.p_word("s", "t"), eng.W.p_word("t", "s")
    cands = {lab: eng.seq_matrix(pt, lab) for lab in product(range(q), repeat=len(pt))}
    for labels in product(range(q), repeat=len(ps)):
        M = eng.seq_matrix(ps, labels)
        hits = [lab for lab, N in cands.items() if same_coset(F, M, N)]
        assert hits == [eng.relabel("s", labels)]


@given(st.sampled_from([("A2", 3), ("B2", 3), ("A2", 5)]), st.data())
def test_relabel_is_involutive(edge, data):
    eng = engine(desc(*edge))
    m = eng.desc.m
    labels = tuple(data.draw(st.lists(st.integers(0, edge[1] - 1), min_size=m, max_size=m)))
    assert eng.relabel("t", eng.relabel("s", labels)) == labels


# -- commutators and expansions ---------------------------------------------------

def test_commutator_commuting_edge():
    d = desc("A1xA1", 3)
    eng = engine(d)
    a = RootGroupElem(("s", "t"), eng.simple_index["s"], 1)
    b = RootGroupElem(("s", "t"), eng.simple_index["t"], 2)
    assert rank2.commutator(d, a, b) == []


@pytest.mark.parametrize("kind,q", [("A2", 2), ("A2", 3), ("A2", 4), ("B2", 2), ("B2", 3)])
def test_commutator_matches_matrices(kind, q):
    d = desc(kind, q)
    eng = engine(d)
    F = eng.F
    n = len(eng.roots)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            for a in F.nonzero():
                for b in F.nonzero():
                    word = eng.commutator(i, a, j, b)
                    rhs = mprod(F, ident(eng.n_dim), *[eng.xroot(k, c) for k, c in word])
                    lhs = mprod(F, eng.xroot(i, F.neg(a)), eng.xroot(j, F.neg(b)), eng.xroot(i, a), eng.xroot(j, b))
                    assert lhs == rhs
                    inner = set(eng.open_interval(i, j))
                    assert {k for k, _ in word} <= inner


def test_commutator_a2_shape():
    d = desc("A2", 3)
    eng = engine(d)
    s, t = eng.simple_index["s"], eng.simple_index["t"]
    for a in (1, 2):
        for b in (1, 2):
            word = rank2.commutator(d, RootGroupElem(("s", "t"), s, a), RootGroupElem(("s", "t"), t, b))
            assert len(word) == 1
            assert word[0].param in (eng.F.mul(a, b), eng.F.neg(eng.F.mul(a, b)))


def test_commutator_rejects_opposite():
    eng = engine(desc("A2", 2))
    with pytest.raises(NotPrenilpotent):
        eng.W.interval(eng.roots[0], -eng.roots[0])


@pytest.mark.parametrize("kind,q", [("A2", 2), ("A2", 3), ("B2", 3), ("B2", 4)])
def test_expand_nonsimple(kind, q):
    d = desc(kind, q)
    eng = engine(d)
    F = eng.F
    for idx in range(len(eng.roots)):
        for c in F.nonzero():
            word = rank2.expand_nonsimple(d, RootGroupElem(("s", "t"), idx, c))
            if eng.is_simple(idx):
                assert [(w.root, w.param) for w in word] == [(idx, c)]
            M = mprod(F, ident(eng.n_dim), *[eng.xroot(w.root, w.param) for w in word])
            assert M == eng.xroot(idx, c)
        assert rank2.expand_nonsimple(d, RootGroupElem(("s", "t"), idx, 0)) == []


def test_b2_over_f2_is_not_generated_by_simple_root_groups():
    eng = engine(desc("B2", 2))
    assert not eng.simple_groups_generate()
    nonsimple = [i for i in range(4) if not eng.is_simple(i)]
    with pytest.raises(UnsupportedSmallField):
        for i in nonsimple:
            eng.expand(i, 1)
    assert engine(desc("B2", 3)).simple_groups_generate()


def test_torus_act():
    d = desc("A2", 3)
    eng = engine(d)
    F = eng.F
    x = RootGroupElem(("s", "t"), eng.simple_index["t"], 1)
    assert rank2.torus_act(d, TorusElem("s", 2, 2), x) == x
    h = TorusElem("s", 1, 2)
    y = rank2.torus_act(d, h, x)
    H = eng.torus("s", 1, 2)
    assert mprod(F, H, eng.x("t", 1), minv(F, H)) == eng.x("t", y.param)
    dd = desc("A1xA1", 3)
    assert rank2.torus_act(dd, h, x) == x


# -- global structure ----------------------------------------------------------------

@pytest.mark.parametrize("kind,q", EDGES)
def test_chamber_count(kind, q):
    eng = engine(desc(kind, q))
    # cosets of B: count distinct flag fingerprints of all x n products
    cosets = {eng.fingerprint(eng.seq_matrix(w.word, lab))
              for w in eng.elements for lab in product(range(q), repeat=w.length)}
    assert len(cosets) == eng.chamber_count()


@pytest.mark.parametrize("kind,q,count", [("A1xA1", 2, 4), ("A1xA1", 3, 9), ("A1xA1", 4, 16),
                                          ("A1xA1", 5, 25), ("A2", 5, 125), ("A2", 2, 8), ("B2", 3, 81)])
def test_opposition_graph(kind, q, count):
    n, connected = rank2.opposition_graph(desc(kind, q))
    assert n == count
    if kind == "A1xA1" or q >= 5:
        assert connected


def _grid_connected(q):
    # opposite chambers of a q x q generalized digon: pairs (a, b), adjacent when one coordinate agrees
    verts = list(product(range(q), repeat=2))
    seen, stack = {verts[0]}, [verts[0]]
    while stack:
        a, b = stack.pop()
        for v in verts:
            if v not in seen and (v[0] == a or v[1] == b):
                seen.add(v)
                stack.append(v)
    return len(seen) == len(verts)


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_opposition_graph_grid_oracle(q):
    assert rank2.opposition_graph(desc("A1xA1", q)) == (q * q, _grid_connected(q))


@pytest.mark.parametrize("kind,q", EDGES)
def test_moufang_sets(kind, q):
    d = desc(kind, q)
    for g in ("s", "t"):
        ms = rank2.moufang_set(d, g)
        assert len(ms.points) == q + 1
        assert ms.check_ms1() and ms.check_ms2()
        # U_inf fixes inf and is simply transitive on GF(q)
        U = ms.root_groups[rank2.INF]
        assert all(p[rank2.INF] == rank2.INF for p in U)
        assert sorted(p[0] for p in U) == list(range(q))


def _group_closure(F, gens, n):
    I = ident(n)
    seen = {I}
    frontier = [I]
    while frontier:
        nxt = []
        for A in frontier:
            for G in gens:
                B = mmul(F, A, G)
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
        frontier = nxt
    return seen


@pytest.mark.parametrize("kind,q", [("A2", 2), ("A2", 3), ("B2", 2), ("B2", 3), ("A1xA1", 3)])
def test_unipotent_group_is_nilpotent(kind, q):
    eng = engine(desc(kind, q))
    F = eng.F
    gens = [eng.xroot(i, c) for i in range(len(eng.roots)) for c in F.nonzero()]
    U = _group_closure(F, gens, eng.n_dim)
    assert len(U) == q ** len(eng.roots)
    G = U
    for _ in range(len(eng.roots) + 1):
        comms = {mprod(F, minv(F, a), minv(F, b), a, b) for a in U for b in G}
        G = _group_closure(F, list(comms), eng.n_dim)
        if G == {ident(eng.n_dim)}:
            break
    assert G == {ident(eng.n_dim)}


@pytest.mark.parametrize("kind,q", [("A2", 2), ("B2", 3)])
def test_units_rescale_n(kind, q):
    d = desc(kind, q)
    eng = engine(d, (("s", q - 1),))
    c1, c2 = eng.m_of("s", q - 1)
    assert eng.n("s") == mprod(eng.F, eng.xneg("s", c1), eng.x("s", q - 1), eng.xneg("s", c2))
