"""Left multiplication of generator words on chambers.

Letters act right to left: a word ``[g1, g2, g3]`` acts as ``g1 g2 g3``, so
``g3`` is applied first.  ``omega_B`` handles root-group and torus letters
and keeps the type of a sequence; ``omega`` adds the ``n_s`` letters.

Parameters of :class:`RootLetter` and :class:`TorusLetter` are global
labels; :class:`EdgeRootLetter` carries a non-simple root of one edge with a
parameter in that edge's local matrix parametrization.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import OutOfRange, UnsupportedLetter
from .gf import field


@dataclass(frozen=True)
class RootLetter:
    """u_s(param) in the simple root group of ``gen``."""

    gen: str
    param: int

    def __str__(self):
        return f"u:{self.gen}:{self.param}"


@dataclass(frozen=True)
class EdgeRootLetter:
    """x_root(param) for a positive root of the edge ``edge``, local parameter."""

    edge: tuple
    root: int
    param: int

    def __str__(self):
        return f"x:{','.join(self.edge)}:{self.root}:{self.param}"


@dataclass(frozen=True)
class TorusLetter:
    """h_s(u, v) = m(u_s(u))^-1 m(u_s(v))."""

    gen: str
    u: int
    v: int

    def ratio(self, q):
        return field(q).div(self.u, self.v)

    def __str__(self):
        return f"h:{self.gen}:{self.u}:{self.v}"


@dataclass(frozen=True)
class NLetter:
    gen: str
    inverse: bool = False

    def __str__(self):
        return f"{'ninv' if self.inverse else 'n'}:{self.gen}"


B_LETTERS = (RootLetter, EdgeRootLetter, TorusLetter)


def parse_word(text: str) -> list:
    """Parse ``"u:s:3 n:s ninv:t h:s:1:2 x:s,t:1:2"`` into letters."""
    out = []
    for tok in text.split():
        parts = tok.split(":")
        kind = parts[0]
        try:
            if kind == "u" and len(parts) == 3:
                out.append(RootLetter(parts[1], int(parts[2])))
            elif kind == "n" and len(parts) == 2:
                out.append(NLetter(parts[1]))
            elif kind == "ninv" and len(parts) == 2:
                out.append(NLetter(parts[1], True))
            elif kind == "h" and len(parts) == 4:
                out.append(TorusLetter(parts[1], int(parts[2]), int(parts[3])))
            elif kind == "x" and len(parts) == 4:
                out.append(EdgeRootLetter(tuple(parts[1].split(",")), int(parts[2]), int(parts[3])))
            else:
                raise ValueError
        except ValueError:
            raise UnsupportedLetter(f"cannot parse letter {tok!r}") from None
    return out


def format_word(word) -> str:
    return " ".join(str(x) for x in word)


class Action:
    """The action of generator words on the chambers of a :class:`ChamberSystem`."""

    def __init__(self, cs):
        self.cs = cs
        self.spec = cs.spec
        self.W = cs.W
        self.q = cs.q
        self._memo = {}

    # -- letter helpers -----------------------------------------------------
    def _check(self, letter):
        gens = self.W.generators
        if isinstance(letter, (RootLetter, TorusLetter, NLetter)):
            if letter.gen not in gens:
                raise UnsupportedLetter(f"unknown generator in {letter}")
            q = self.q[letter.gen]
            if isinstance(letter, RootLetter) and not 0 <= letter.param < q:
                raise UnsupportedLetter(f"parameter out of GF({q}) in {letter}")
            if isinstance(letter, TorusLetter) and not (0 < letter.u < q and 0 < letter.v < q):
                raise UnsupportedLetter(f"torus parameters must be nonzero in {letter}")
        elif isinstance(letter, EdgeRootLetter):
            try:
                eng = self.spec.engine(*letter.edge)
            except Exception:
                raise UnsupportedLetter(f"no edge {letter.edge}") from None
            if tuple(letter.edge) != eng.gens or not 0 <= letter.root < len(eng.roots):
                raise UnsupportedLetter(f"bad edge root in {letter}")
        else:
            raise UnsupportedLetter(f"not a letter: {letter!r}")

    def edge_letter(self, pair, idx, c):
        """Letter for x_idx(c) (local parameter) on the edge ``pair``."""
        eng = self.spec.engine(*pair)
        g = eng.simple_gen(idx)
        if g is not None:
            return RootLetter(g, self.spec.tau(eng.gens, g).inverse()(c))
        return EdgeRootLetter(eng.gens, idx, c)

    def _sigma(self, pair, g):
        return self.spec.tau(pair, g).frobenius

    def n_square(self, s) -> TorusLetter:
        return TorusLetter(s, self.spec.rank1(s).n_square(s), 1)

    def n_inverse_square(self, s) -> TorusLetter:
        return TorusLetter(s, 1, self.spec.rank1(s).n_square(s))

    def conj_by_n(self, letter, s) -> list:
        """Letters of n_s^-1 g n_s for a positive root letter other than u_s, or a torus letter."""
        if isinstance(letter, TorusLetter):
            return self._torus_past_n(letter, s)[1:]
        if isinstance(letter, RootLetter):
            if letter.gen == s:
                raise UnsupportedLetter("u_s is not conjugated into U+ by n_s")
            if self.W.m(letter.gen, s) == 2:
                return [letter]
            eng = self.spec.engine(letter.gen, s)
            pair = eng.gens
            idx = eng.simple_index[letter.gen]
            c = self.spec.tau(pair, letter.gen)(letter.param)
        else:
            pair = tuple(letter.edge)
            if s not in pair:
                if all(self.W.m(s, g) == 2 for g in pair):
                    return [letter]
                raise UnsupportedLetter("edge root conjugated by a foreign n_s")
            eng = self.spec.engine(*pair)
            idx, c = letter.root, letter.param
        return [self.edge_letter(pair, i, p) for i, p in eng.conj_past(idx, c, s, 0)]

    def _torus_past_n(self, letter: TorusLetter, s1, u1=None):
        """(new first label, letters of n_s1^-1 h n_s1); the label is h u1 h^-1."""
        t = letter.gen
        c = letter.ratio(self.q[t])
        if c == 1:
            return [u1]
        if t == s1:
            R = self.spec.rank1(t)
            hm = R.coroot(t, c)
            new_u1 = None if u1 is None else R.torus_conj(hm, t, u1)
            tor = R.torus_past_n(hm, t)
            return [new_u1] + [TorusLetter(g, v, 1) for g, v in tor.items()]
        if self.W.m(t, s1) == 2:
            return [u1, letter]
        eng = self.spec.engine(t, s1)
        pair = eng.gens
        Ft = field(self.q[t])
        hm = eng.coroot(t, Ft.frobenius(c, self._sigma(pair, t)))
        new_u1 = None
        if u1 is not None:
            tau1 = self.spec.tau(pair, s1)
            new_u1 = tau1.inverse()(eng.torus_conj(hm, s1, tau1(u1)))
        out = [new_u1]
        for g, v in eng.torus_past_n(hm, s1).items():
            k = self._sigma(pair, g)
            Fg = field(self.q[g])
            out.append(TorusLetter(g, Fg.frobenius(v, -k % Fg.degree), 1))
        return out

    # -- omega_B ------------------------------------------------------------
    def omega_B_seq(self, letter, type_, labels) -> tuple:
        """Labels of ``letter . (type_, labels)``, same type."""
        if not type_:
            return ()
        key = (letter, type_, labels)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        out = self._omega_B(letter, type_, labels)
        self._memo[key] = out
        return out

    def _act_letters(self, letters, type_, labels):
        for x in reversed(letters):
            labels = self.omega_B_seq(x, type_, labels)
        return labels

    def _omega_B(self, letter, type_, labels):
        s1, u1 = type_[0], labels[0]
        rest_t, rest_l = type_[1:], labels[1:]
        W = self.W
        if isinstance(letter, RootLetter):
            r, a = letter.gen, letter.param
            if a == 0:
                return labels
            if r == s1:
                return (field(self.q[s1]).add(a, u1),) + rest_l
            if W.m(r, s1) == 2:
                return (u1,) + self.omega_B_seq(letter, rest_t, rest_l)
            eng = self.spec.engine(r, s1)
            pair = eng.gens
            idx = eng.simple_index[r]
            c = self.spec.tau(pair, r)(a)
            return (u1,) + self._conj_rest(eng, pair, idx, c, s1, u1, rest_t, rest_l)
        if isinstance(letter, EdgeRootLetter):
            if letter.param == 0:
                return labels
            pair = tuple(letter.edge)
            eng = self.spec.engine(*pair)
            if s1 in pair:
                return (u1,) + self._conj_rest(eng, pair, letter.root, letter.param, s1, u1, rest_t, rest_l)
            if all(W.m(s1, g) == 2 for g in pair):
                return (u1,) + self.omega_B_seq(letter, rest_t, rest_l)
            word = [RootLetter(g, self.spec.tau(pair, g).inverse()(p)) for g, p in eng.expand(letter.root, letter.param)]
            return self._act_letters(word, type_, labels)
        if isinstance(letter, TorusLetter):
            res = self._torus_past_n(letter, s1, u1)
            return (res[0],) + self._act_letters(res[1:], rest_t, rest_l)
        raise UnsupportedLetter(f"{letter!r} is not a root-group or torus letter")

    def _conj_rest(self, eng, pair, idx, c, s1, u1, rest_t, rest_l):
        """Act on the tail with n^-1 u1^-1 x_idx(c) u1 n (all in the edge ``pair``)."""
        u1l = self.spec.tau(pair, s1)(u1)
        letters = [self.edge_letter(pair, i, p) for i, p in eng.conj_past(idx, c, s1, u1l)]
        return self._act_letters(letters, rest_t, rest_l)

    def omega_B(self, word, c):
        """Action of a word of root-group and torus letters on a chamber (type preserved)."""
        if isinstance(word, B_LETTERS):
            word = [word]
        labels = c.labels
        for x in reversed(list(word)):
            self._check(x)
            if not isinstance(x, B_LETTERS):
                raise UnsupportedLetter(f"{x} is not allowed in omega_B")
            labels = self.omega_B_seq(x, c.type, labels)
        return type(c)(c.type, labels)

    # -- omega -----------------------------------------------------------------
    def act(self, letter, c, limit=None):
        self._check(letter)
        if isinstance(letter, B_LETTERS):
            return type(c)(c.type, self.omega_B_seq(letter, c.type, c.labels))
        if letter.inverse:
            c = type(c)(c.type, self.omega_B_seq(self.n_inverse_square(letter.gen), c.type, c.labels))
            return self._act_n(letter.gen, c, limit)
        return self._act_n(letter.gen, c, limit)

    def _act_n(self, s, c, limit):
        cs = self.cs
        W = self.W
        w = W.reduce(c.type)
        sw = W.reduce((s,)) * w
        if sw.length > w.length:
            if limit is not None and sw.length > limit:
                raise OutOfRange(f"n_{s} leaves the range {limit}")
            return cs.chamber((s,) + c.type, (0,) + c.labels)
        rep = cs.convert(c, (s,) + sw.word)
        u1 = rep.labels[0]
        rest_t, rest_l = rep.type[1:], rep.labels[1:]
        if u1 == 0:
            new = self.omega_B_seq(self.n_square(s), rest_t, rest_l)
            return cs.chamber(rest_t, new)
        ubar, (d, t) = self.spec.rank1(s).ns_conj(s, u1)
        new = self._act_letters([RootLetter(s, d), TorusLetter(s, t, 1)], rest_t, rest_l)
        return cs.chamber((s,) + rest_t, (ubar,) + new)

    def omega(self, word, c, limit=None):
        if not isinstance(word, (list, tuple)):
            word = [word]
        for x in reversed(list(word)):
            c = self.act(x, c, limit)
            if limit is not None and len(c.type) > limit:
                raise OutOfRange(f"word leaves the range {limit}")
        return c


def action(cs) -> Action:
    act = getattr(cs, "_action", None)
    if act is None:
        act = Action(cs)
        cs._action = act
    return act


def omega_B(cs, word, c):
    return action(cs).omega_B(word, c)


def omega(cs, word, c, limit=None):
    return action(cs).omega(word, c, limit)


def inverse_word(cs, word) -> list:
    """A word acting as the inverse of ``word``."""
    out = []
    for x in reversed(list(word)):
        if isinstance(x, NLetter):
            out.append(NLetter(x.gen, not x.inverse))
        elif isinstance(x, RootLetter):
            out.append(RootLetter(x.gen, field(cs.q[x.gen]).neg(x.param)))
        elif isinstance(x, EdgeRootLetter):
            eng = cs.spec.engine(*x.edge)
            out.append(EdgeRootLetter(x.edge, x.root, eng.F.neg(x.param)))
        elif isinstance(x, TorusLetter):
            out.append(TorusLetter(x.gen, x.v, x.u))
        else:
            raise UnsupportedLetter(f"not a letter: {x!r}")
    return out
