"""The chamber system of a blueprint: labelled reduced sequences modulo elementary equivalence.

A chamber is stored as its canonical representative: the ShortLex-least
reduced word of its W-element together with the labels along that word.
Two sequences are elementarily equivalent when one is obtained from the
other by rewriting a window of type p(s, t) into the equivalent labels of
type p(t, s) in the edge building of {s, t}.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations, product

from .coxeter import CoxeterElement
from .errors import Not3Spherical, NotReduced, NotRealisable, OutOfRange
from .foundation import Blueprint, FoundationSpec, blueprint


@dataclass(frozen=True, order=True)
class LabeledSequence:
    type: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "type", tuple(self.type))
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(self.type) != len(self.labels):
            raise ValueError("type and labels differ in length")

    def __len__(self):
        return len(self.type)

    def to_dict(self):
        return {"type": list(self.type), "labels": list(self.labels)}


class Chamber(LabeledSequence):
    """A canonical :class:`LabeledSequence`; build these with :meth:`ChamberSystem.canonicalize`."""

    def __repr__(self):
        return f"[{','.join(map(str, self.labels))}]_{''.join(self.type) or '()'}"


@dataclass
class RealisabilityReport:
    realisable: bool
    subsets: list  # (J, verdict, witness or None)
    states: int = 0

    def to_dict(self):
        return {
            "realisable": self.realisable,
            "subsets": [{"J": list(J), "verdict": v, "witness": w} for J, v, w in self.subsets],
            "states": self.states,
        }


class ChamberSystem:
    """Chambers of the building conforming to the blueprint of a foundation."""

    def __init__(self, spec: FoundationSpec, check: bool = True, max_len: int | None = None):
        self.spec = spec
        self.blueprint: Blueprint = blueprint(spec)
        self.W = spec.group
        self.q = self.blueprint.q
        self.max_len = max_len
        self._paths = {}
        self._canon = {}
        self.report = None
        if check:
            self.report = check_realisable(spec, self.blueprint)
            if not self.report.realisable:
                raise NotRealisable("blueprint is not realisable", report=self.report.to_dict())
        self.realisable = check

    # -- moves --------------------------------------------------------------
    def _move(self, seq_type, labels, i, s, t):
        m = self.W.m(s, t)
        window = labels[i:i + m]
        new = self.blueprint.relabel(s, t, tuple(window))
        return labels[:i] + new + labels[i + m:]

    def elementary_moves(self, seq: LabeledSequence) -> list:
        out = []
        for i, s, t, word in self.W.braid_moves(seq.type):
            out.append(LabeledSequence(word, self._move(seq.type, seq.labels, i, s, t)))
        return out

    def _path(self, src, dst):
        """Braid moves turning the reduced word ``src`` into ``dst`` (memoized BFS)."""
        key = (src, dst)
        hit = self._paths.get(key)
        if hit is not None:
            return hit
        prev = {src: None}
        queue = deque([src])
        while queue:
            word = queue.popleft()
            if word == dst:
                break
            for i, s, t, nw in self.W.braid_moves(word):
                if nw not in prev:
                    prev[nw] = (word, i, s, t)
                    queue.append(nw)
        if dst not in prev:
            raise NotReduced(f"{src} and {dst} are not reduced words of one element")
        moves = []
        w = dst
        while prev[w] is not None:
            pw, i, s, t = prev[w]
            moves.append((i, s, t))
            w = pw
        moves.reverse()
        self._paths[key] = moves
        return moves

    def convert(self, seq: LabeledSequence, target) -> LabeledSequence:
        """The equivalent sequence of the reduced type ``target``."""
        target = tuple(target)
        labels = seq.labels
        for i, s, t in self._path(seq.type, target):
            labels = self._move(None, labels, i, s, t)
        return LabeledSequence(target, labels)

    def canonical_type(self, word):
        return self.W.canonical_word(word)

    def canonicalize(self, seq) -> Chamber:
        if not self.realisable:
            raise NotRealisable("canonical forms need a realisability check")
        if not isinstance(seq, LabeledSequence):
            seq = LabeledSequence(*seq)
        self._check_labels(seq)
        if not self.W.is_reduced(seq.type):
            raise NotReduced(f"type {seq.type} is not reduced")
        key = (seq.type, seq.labels)
        hit = self._canon.get(key)
        if hit is not None:
            return hit
        target = self.canonical_type(seq.type)
        out = self.convert(seq, target)
        ch = Chamber(out.type, out.labels)
        self._canon[key] = ch
        return ch

    def _check_labels(self, seq):
        for g, u in zip(seq.type, seq.labels):
            if not 0 <= u < self.q[g]:
                raise ValueError(f"label {u} is not in GF({self.q[g]}) at {g!r}")

    def base(self) -> Chamber:
        return Chamber((), ())

    def element(self, c) -> CoxeterElement:
        return self.W.reduce(c.type)

    def chamber(self, type_, labels) -> Chamber:
        return self.canonicalize(LabeledSequence(type_, labels))

    # -- enumeration --------------------------------------------------------
    def sphere(self, w) -> list:
        """All chambers at distance ``w`` from the base chamber."""
        if not isinstance(w, CoxeterElement):
            w = self.W.reduce(w)
        word = w.word
        return [Chamber(word, labels) for labels in product(*[range(self.q[g]) for g in word])]

    def enumerate(self, max_len: int) -> list:
        elems = self.W.enumerate_elements(max_len)
        elems.sort(key=lambda w: self.W.shortlex_key(w.word))
        out = []
        for w in elems:
            out.extend(self.sphere(w))
        return out

    def count(self, max_len: int) -> int:
        total = 0
        for w in self.W.enumerate_elements(max_len):
            n = 1
            for g in w.word:
                n *= self.q[g]
            total += n
        return total

    # -- local structure ----------------------------------------------------
    def panel(self, c: Chamber, s) -> list:
        """The chambers of the s-panel of ``c``, the one nearest the base chamber first."""
        w = self.W.reduce(c.type)
        if (w * self.W.reduce((s,))).length > w.length:
            stem = LabeledSequence(c.type, c.labels)
        else:
            target = self._ending_in(w, s)
            rep = self.convert(c, target)
            stem = LabeledSequence(rep.type[:-1], rep.labels[:-1])
        out = [self.canonicalize(stem)]
        for a in range(self.q[s]):
            out.append(self.canonicalize(LabeledSequence(stem.type + (s,), stem.labels + (a,))))
        return out

    def _ending_in(self, w, s):
        ws = w * self.W.reduce((s,))
        return ws.word + (s,)

    def _starting_with(self, w, s):
        sw = self.W.reduce((s,)) * w
        return (s,) + sw.word

    def neighbours(self, c: Chamber) -> list:
        out = []
        for s in self.W.generators:
            out.extend(x for x in self.panel(c, s) if x != c)
        return out

    def delta(self, c: Chamber, d: Chamber) -> CoxeterElement:
        """W-distance: the type of g_c^-1 d where g_c maps the base chamber to c."""
        from .action import NLetter, RootLetter, omega

        self._in_range(c)
        self._in_range(d)
        word = []
        for g, a in zip(c.type, c.labels):
            word.append(RootLetter(g, a))
            word.append(NLetter(g))
        inv = []
        for letter in reversed(word):
            if isinstance(letter, NLetter):
                inv.append(NLetter(letter.gen, True))
            else:
                inv.append(RootLetter(letter.gen, self.blueprint_neg(letter.gen, letter.param)))
        return self.W.reduce(omega(self, inv, d).type)

    def blueprint_neg(self, s, a):
        from .gf import field

        return field(self.q[s]).neg(a)

    def _in_range(self, c):
        if self.max_len is not None and len(c.type) > self.max_len:
            raise OutOfRange(f"{c} is beyond max_len {self.max_len}")

    def residue(self, c: Chamber, J) -> list:
        """All chambers of the J-residue of ``c`` (J spherical)."""
        J = tuple(J)
        if not self.W.is_spherical(J):
            raise OutOfRange(f"residue of type {J} is infinite")
        seen = {c}
        queue = deque([c])
        while queue:
            x = queue.popleft()
            for s in J:
                for y in self.panel(x, s):
                    if y not in seen:
                        self._in_range(y)
                        seen.add(y)
                        queue.append(y)
        return sorted(seen, key=lambda x: (len(x.type), self.W.shortlex_key(x.type), x.labels))

    def proj(self, R, c: Chamber) -> Chamber:
        """Projection of ``c`` onto the residue ``R`` = (J, chamber of R)."""
        J, d = R
        chambers = self.residue(d, J)
        if c in chambers:
            return c
        dist = {x: self.delta(c, x).length for x in chambers}
        best = min(dist.values())
        gates = [x for x, v in dist.items() if v == best]
        assert len(gates) == 1
        return gates[0]

    # -- serialization ------------------------------------------------------
    def dump_jsonl(self, chambers, fh):
        for c in sorted(chambers, key=lambda x: (len(x.type), self.W.shortlex_key(x.type), x.labels)):
            fh.write(json.dumps(c.to_dict(), separators=(", ", ": ")) + "\n")

    def parse_chamber(self, obj) -> Chamber:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return self.canonicalize(LabeledSequence(tuple(obj["type"]), tuple(obj["labels"])))


def check_realisable(spec: FoundationSpec, bp: Blueprint | None = None) -> RealisabilityReport:
    """Confluence of elementary moves on every spherical subset of rank at most 3."""
    bp = bp or blueprint(spec)
    W = spec.group
    gens = spec.generators
    subsets = []
    states = 0
    ok = True
    for k in (1, 2, 3):
        for J in combinations(gens, k):
            if not W.is_spherical(J):
                raise Not3Spherical(f"{J} is not spherical", subset=J)
    for J in combinations(gens, min(3, len(gens))):
        verdict, witness, n = _check_subset(W, bp, J)
        states += n
        subsets.append((J, verdict, witness))
        ok = ok and verdict == "realisable"
    return RealisabilityReport(ok, subsets, states)


def _check_subset(W, bp, J):
    """Explore every class of sequences in <J>; fail if a type gets two label tuples."""
    q = bp.q
    n = 0
    w0 = W.longest_element(J)
    for w in W.enumerate_elements(w0.length, J=J):
        words = W.reduced_words(w)
        start = words[0]
        seen = set()
        for labels in product(*[range(q[g]) for g in start]):
            if (start, labels) in seen:
                continue
            cls = {start: labels}
            queue = deque([(start, labels)])
            seen.add((start, labels))
            while queue:
                word, lab = queue.popleft()
                n += 1
                for i, s, t, nw in W.braid_moves(word):
                    m = W.m(s, t)
                    nl = lab[:i] + bp.relabel(s, t, lab[i:i + m]) + lab[i + m:]
                    if nw in cls:
                        if cls[nw] != nl:
                            witness = {"type": list(nw), "labels": [list(cls[nw]), list(nl)]}
                            return "not realisable", witness, n
                        continue
                    cls[nw] = nl
                    seen.add((nw, nl))
                    queue.append((nw, nl))
            if len(cls) != len(words):
                return "not realisable", {"type": list(start), "labels": list(labels)}, n
    return "realisable", None, n


def build(spec: FoundationSpec, max_len=None) -> ChamberSystem:
    return ChamberSystem(spec, check=True, max_len=max_len)


# operations in functional form

def elementary_moves(cs: ChamberSystem, seq):
    return cs.elementary_moves(seq)


def canonicalize(cs: ChamberSystem, seq):
    return cs.canonicalize(seq)


def enumerate_chambers(cs: ChamberSystem, max_len):
    return cs.enumerate(max_len)


def delta(cs: ChamberSystem, c, d):
    return cs.delta(c, d)


def proj(cs: ChamberSystem, R, c):
    return cs.proj(R, c)


# -- conditions (co) and (sco) ----------------------------------------------------------

def opposite_in_residue(cs: ChamberSystem, J, base: Chamber | None = None):
    """Chambers of the J-residue of ``base`` at distance r_J from it, with their J-adjacency."""
    base = base or cs.base()
    J = tuple(g for g in cs.W.generators if g in set(J))
    rJ = cs.W.longest_element(J)
    R = cs.residue(base, J)
    if base == cs.base():
        opp = [x for x in R if cs.W.reduce(x.type) == rJ]
    else:
        opp = [x for x in R if cs.delta(base, x) == rJ]
    vs = set(opp)
    adj = {x: {} for x in opp}
    for x in opp:
        for s in J:
            for y in cs.panel(x, s):
                if y != x and y in vs:
                    adj[x][y] = s
    return opp, adj


def _components(vertices, adj):
    seen, comps = set(), 0
    for v in vertices:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return comps


def co_check(cs: ChamberSystem, edge, base: Chamber | None = None) -> dict:
    """Condition (co) in the rank-2 residue of type ``edge``: the opposite chambers form a connected graph."""
    opp, adj = opposite_in_residue(cs, edge, base)
    comps = _components(opp, adj)
    return {"edge": list(edge), "vertices": len(opp), "components": comps, "connected": comps == 1}


SIMPLY_CONNECTED, NOT_SIMPLY_CONNECTED, INCONCLUSIVE = "SIMPLY_CONNECTED", "NOT", "INCONCLUSIVE"


def _free_reduce(word):
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    while len(out) > 1 and out[0] == -out[-1]:
        out = out[1:-1]
    return out


def _tree(vertices, adj):
    """BFS parent pointers of a spanning forest."""
    parent = {}
    for root in vertices:
        if root in parent:
            continue
        parent[root] = None
        queue = deque([root])
        while queue:
            x = queue.popleft()
            for y in sorted(adj[x], key=lambda c: (c.type, c.labels)):
                if y not in parent:
                    parent[y] = x
                    queue.append(y)
    return parent


def _to_root(parent, x):
    path = [x]
    while parent[x] is not None:
        x = parent[x]
        path.append(x)
    return path


def sco_check(cs: ChamberSystem, J, base: Chamber | None = None, bound: int = 10 ** 6) -> dict:
    """Best-effort (sco): is the chamber system opposite ``base`` in its J-residue simply connected?

    Generators are the edges outside a spanning tree; relators are the cycles
    of every rank-2 and rank-1 residue inside the opposite set.  A nontrivial
    abelianization proves non-simple-connectedness; otherwise generators are
    eliminated by Tietze moves within ``bound`` steps.
    """
    opp, adj = opposite_in_residue(cs, J, base)
    J = tuple(g for g in cs.W.generators if g in set(J))
    key = lambda c: (len(c.type), cs.W.shortlex_key(c.type), c.labels)
    opp.sort(key=key)
    verdict = {"J": list(J), "vertices": len(opp)}
    if _components(opp, adj) != 1:
        return dict(verdict, verdict=NOT_SIMPLY_CONNECTED, reason="not connected")
    parent = _tree(opp, adj)
    gens = {}
    for x in opp:
        for y in adj[x]:
            if key(x) < key(y) and parent.get(y) != x and parent.get(x) != y:
                gens[(x, y)] = len(gens) + 1

    def letter(x, y):
        if (x, y) in gens:
            return [gens[(x, y)]]
        if (y, x) in gens:
            return [-gens[(y, x)]]
        return []

    def path_word(path):
        out = []
        for a, b in zip(path, path[1:]):
            out += letter(a, b)
        return out

    relators = []
    residues = set()
    for K in combinations(J, 2):
        for x in opp:
            res = frozenset(y for y in cs.residue(x, K) if y in adj)
            residues.add((K, res))
    for s in J:
        for x in opp:
            res = frozenset(y for y in cs.panel(x, s) if y in adj)
            residues.add(((s,), res))
    for K, res in residues:
        sub = {x: {y: 0 for y in adj[x] if y in res and set(cs.W.reduce((adj[x][y],)).word) <= set(K)}
               for x in res}
        verts = sorted(res, key=key)
        ptree = _tree(verts, sub)
        for x in verts:
            for y in sub[x]:
                if key(x) < key(y) and ptree.get(y) != x and ptree.get(x) != y:
                    # cycle: root -> x -> y -> root inside the residue, written in global generators
                    px = list(reversed(_to_root(ptree, x)))
                    py = _to_root(ptree, y)
                    if px[0] != py[-1]:
                        continue
                    w = _free_reduce(path_word(px) + letter(x, y) + path_word(py))
                    if w:
                        relators.append(w)
    # tree paths also contribute: a tree edge equals the identity, already encoded by omission
    n = len(gens)
    verdict.update(generators=n, relators=len(relators))
    if n == 0:
        return dict(verdict, verdict=SIMPLY_CONNECTED)
    alive = set(range(1, n + 1))
    rels = {tuple(r) for r in relators}
    steps = 0
    while alive and steps < bound:
        # eliminate via the shortest relator in which some generator occurs exactly once
        best = None
        for r in rels:
            if best is not None and len(r) >= len(best[0]):
                continue
            counts = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            single = [g for g, k in counts.items() if k == 1]
            if single:
                best = (r, min(single))
        if best is None:
            break
        r, g = best
        i = next(k for k, x in enumerate(r) if abs(x) == g)
        # r = A g^e B = 1, so g^e = A^-1 B^-1
        A, B = r[:i], r[i + 1:]
        sub = [-x for x in reversed(A)] + [-x for x in reversed(B)]
        if r[i] < 0:
            sub = [-x for x in reversed(sub)]
        inv_sub = [-x for x in reversed(sub)]
        new = set()
        for other in rels:
            if other == r:
                continue
            w = []
            for x in other:
                if x == g:
                    w += sub
                elif x == -g:
                    w += inv_sub
                else:
                    w.append(x)
            steps += len(w)
            if steps >= bound:
                return dict(verdict, verdict=INCONCLUSIVE, steps=steps, remaining=len(alive))
            w = _free_reduce(w)
            if w:
                new.add(tuple(w))
        rels = new
        alive.discard(g)
    if not alive:
        return dict(verdict, verdict=SIMPLY_CONNECTED, steps=steps)
    # abelianization of what is left (Tietze moves preserve the group)
    order = sorted(alive)
    col = {g: i for i, g in enumerate(order)}
    rows = []
    for r in rels:
        row = [0] * len(order)
        for x in r:
            row[col[abs(x)]] += 1 if x > 0 else -1
        rows.append(row)
    free, torsion = _abelian_invariants(rows, len(order))
    if free or torsion:
        return dict(verdict, verdict=NOT_SIMPLY_CONNECTED, reason="nontrivial abelianization",
                    free_rank=free, torsion=torsion, steps=steps)
    return dict(verdict, verdict=INCONCLUSIVE, steps=steps, remaining=len(alive))


def _abelian_invariants(rows, n):
    """(free rank, torsion coefficients) of Z^n modulo the row span."""
    if n == 0:
        return 0, []
    if not rows:
        return n, []
    from sympy import Matrix
    from sympy.matrices.normalforms import smith_normal_form

    snf = smith_normal_form(Matrix(rows))
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    rank = sum(1 for d in diag if d)
    return n - rank, [d for d in diag if d > 1]
