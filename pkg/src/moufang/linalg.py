"""Dense square matrices over a :class:`~moufang.gf.GF`, stored as tuples of row tuples."""

from __future__ import annotations

from .gf import GF


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def mul(F: GF, A, B):
    n, m, k = len(A), len(B), len(B[0])
    M, ad = F.mul_table, F.add_table
    Bt = list(zip(*B))
    out = []
    for i in range(n):
        row = A[i]
        out_row = []
        for j in range(k):
            col = Bt[j]
            acc = 0
            for t in range(m):
                a = row[t]
                if a:
                    b = col[t]
                    if b:
                        acc = ad[acc][M[a][b]]
            out_row.append(acc)
        out.append(tuple(out_row))
    return tuple(out)


def prod(F: GF, mats, n):
    out = identity(n)
    for A in mats:
        out = mul(F, out, A)
    return out


def transpose(A):
    return tuple(zip(*A))


def elementary(F: GF, n, entries, a):
    """``I + a * X`` where X has the given ``{(i, j): coeff}`` entries."""
    rows = [list(r) for r in identity(n)]
    for (i, j), c in entries.items():
        rows[i][j] = F.add(rows[i][j], F.mul(c, a))
    return tuple(tuple(r) for r in rows)


def inverse(F: GF, A):
    n = len(A)
    M = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = F.inv(M[c][c])
        M[c] = [F.mul(inv, x) for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[c])]
    return tuple(tuple(r[n:]) for r in M)


def det(F: GF, A):
    n = len(A)
    M = [list(r) for r in A]
    d = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for r in range(c + 1, n):
            if M[r][c]:
                f = F.mul(M[r][c], inv)
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[c])]
    return d


def is_upper(A):
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(i))


def is_diagonal(A):
    return all(A[i][j] == 0 for i in range(len(A)) for j in range(len(A)) if i != j)


def is_monomial(A):
    return all(sum(1 for x in row if x) == 1 for row in A) and \
        all(sum(1 for x in col if x) == 1 for col in zip(*A))


def support(A):
    """The permutation underlying a monomial matrix: row i -> column."""
    return tuple(next(j for j, x in enumerate(row) if x) for row in A)


def _rank(F: GF, rows):
    M = [list(r) for r in rows]
    rank, ncols = 0, len(M[0]) if M else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(M)) if M[r][c]), None)
        if piv is None:
            continue
        M[rank], M[piv] = M[piv], M[rank]
        inv = F.inv(M[rank][c])
        for r in range(rank + 1, len(M)):
            if M[r][c]:
                f = F.mul(M[r][c], inv)
                M[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[r], M[rank])]
        rank += 1
    return rank


def bruhat_permutation(F: GF, A):
    """The permutation pi with A in B pi B (B upper triangular), row i -> column.

    Read off from the ranks of the lower-left submatrices, which are
    invariant under left and right multiplication by B.
    """
    n = len(A)
    r = [[0] * (n + 1) for _ in range(n + 1)]
    for i in range(n - 1, -1, -1):
        for j in range(1, n + 1):
            r[i][j] = _rank(F, [row[:j] for row in A[i:]])
    perm = [None] * n
    for i in range(n):
        for j in range(1, n + 1):
            below = r[i + 1][j] if i + 1 < n else 0
            below_left = r[i + 1][j - 1] if i + 1 < n else 0
            if r[i][j] - below - r[i][j - 1] + below_left == 1:
                perm[i] = j - 1
    return tuple(perm)


def flag_form(F: GF, A):
    """Canonical representative of the coset A*B (B the upper triangular matrices).

    Columns are processed left to right; each is cleared at the pivot rows of
    the previous columns and scaled so that its lowest nonzero entry is 1.
    """
    n = len(A)
    cols = [list(c) for c in zip(*A)]
    pivots = []
    done = []
    for col in cols:
        v = list(col)
        for p, c in zip(pivots, done):
            if v[p]:
                f = v[p]
                v = [F.sub(x, F.mul(f, y)) for x, y in zip(v, c)]
        p = max(i for i in range(n) if v[i])
        inv = F.inv(v[p])
        v = [F.mul(inv, x) for x in v]
        pivots.append(p)
        done.append(v)
    return tuple(tuple(c) for c in done)
