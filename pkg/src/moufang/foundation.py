"""Moufang foundations: rank-2 edge buildings glued along panels, and the blueprint they define.

Labels are global per generator: a label ``u`` at ``s`` means the same panel
point in every edge containing ``s``.  Each vertex has a reference edge (its
first neighbour in the diagram, in generator order) where global and local
labels agree; on any other edge J the local label is ``tau_{J,s}(u)`` with
``tau_{J,s} = phi_{r0 s t}``.  The edge engine of J then uses
``e_s = x_s(tau_{J,s}(1))`` so that ``n_s`` is the image of the reference
``n_s``.
"""

from __future__ import annotations

import json
from itertools import product
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from pathlib import Path

import jsonschema

from .coxeter import CoxeterGroup, CoxeterMatrix
from .errors import CocycleViolation, PanelMismatch, SchemaError, UnsupportedOrder, WrongEdge
from .gf import SUPPORTED, field
from .rank2 import KINDS, Rank2Descriptor, engine, rank1

ORDER_OF = {"A1xA1": 2, "A2": 3, "B2": 4}

SCHEMA = {
    "type": "object",
    "required": ["generators", "edges"],
    "additionalProperties": False,
    "properties": {
        "generators": {"type": "array", "items": {"type": "string"}, "minItems": 1, "uniqueItems": True},
        "edges": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pair", "type", "q"],
                "additionalProperties": False,
                "properties": {
                    "pair": {"type": "array", "items": {"type": "string"}, "minItems": 2, "maxItems": 2},
                    "type": {"type": "string"},
                    "q": {"type": "integer"},
                    "short": {"type": "string"},
                },
            },
        },
        "glueings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["triple"],
                "additionalProperties": False,
                "properties": {
                    "triple": {"type": "array", "items": {"type": "string"}, "minItems": 3, "maxItems": 3},
                    "scale": {"type": "integer"},
                    "frobenius": {"type": "integer"},
                },
            },
        },
        "options": {"type": "object"},
    },
}


@dataclass(frozen=True)
class GlueMap:
    """``u -> scale * sigma^frobenius(u)`` on GF(q), fixing 0 and the base point."""

    q: int
    scale: int = 1
    frobenius: int = 0

    def __post_init__(self):
        F = field(self.q)
        if not 0 < self.scale < self.q:
            raise SchemaError(f"glueing scale must be a nonzero element of GF({self.q})")
        object.__setattr__(self, "frobenius", self.frobenius % F.degree)

    @classmethod
    def identity(cls, q):
        return cls(q)

    def is_identity(self):
        return self.scale == 1 and self.frobenius == 0

    def __call__(self, u):
        if u is None:  # the base point
            return None
        F = field(self.q)
        return F.mul(self.scale, F.frobenius(u, self.frobenius))

    def compose(self, other: "GlueMap") -> "GlueMap":
        """``self o other``."""
        F = field(self.q)
        return GlueMap(self.q, F.mul(self.scale, F.frobenius(other.scale, self.frobenius)),
                       self.frobenius + other.frobenius)

    def inverse(self) -> "GlueMap":
        F = field(self.q)
        k = -self.frobenius % F.degree
        return GlueMap(self.q, F.frobenius(F.inv(self.scale), k), k)

    def table(self):
        return [self(u) for u in range(self.q)]


def _pair(group_order, a, b):
    return (a, b) if group_order[a] < group_order[b] else (b, a)


@dataclass
class FoundationSpec:
    """Diagram, per-edge rank-2 descriptors, and glueings ``phi_rst`` stored for r < t."""

    generators: tuple
    edges: dict  # sorted pair -> Rank2Descriptor (m > 2, plus any listed A1xA1)
    glueings: dict = dc_field(default_factory=dict)  # (r, s, t), r < t -> GlueMap
    options: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        self._pos = {g: i for i, g in enumerate(self.generators)}
        norm = {}
        for pair, desc in self.edges.items():
            a, b = pair
            if a not in self._pos or b not in self._pos or a == b:
                raise SchemaError(f"edge {pair} is not a pair of distinct generators")
            norm[_pair(self._pos, a, b)] = desc
        self.edges = norm

    def __eq__(self, other):
        return (isinstance(other, FoundationSpec) and self.generators == other.generators
                and self.edges == other.edges and self.glueings == other.glueings
                and self.options == other.options)

    # -- diagram ----------------------------------------------------------
    @cached_property
    def matrix(self) -> CoxeterMatrix:
        return CoxeterMatrix.from_edges(self.generators, {p: d.m for p, d in self.edges.items()})

    @cached_property
    def group(self) -> CoxeterGroup:
        return CoxeterGroup(self.matrix)

    def m(self, s, t):
        return self.matrix.order(s, t)

    def diagram_edges(self):
        """E(S): the pairs with m > 2, in generator order."""
        return sorted((p for p, d in self.edges.items() if d.m > 2),
                      key=lambda p: (self._pos[p[0]], self._pos[p[1]]))

    def neighbours(self, s):
        out = [t for p in self.diagram_edges() for t in p if s in p and t != s]
        return sorted(out, key=self._pos.get)

    def edge(self, s, t) -> Rank2Descriptor:
        key = _pair(self._pos, s, t)
        if key not in self.edges:
            raise WrongEdge(f"no edge {key}")
        return self.edges[key]

    def q_of(self, s):
        for p, d in self.edges.items():
            if s in p:
                return d.q
        if "q" in self.options:
            return self.options["q"]
        raise SchemaError(f"no field size for generator {s!r}")

    # -- glueings ---------------------------------------------------------
    def phi(self, r, s, t) -> GlueMap:
        """phi_rst, derived from the stored data for r >= t."""
        q = self.q_of(s)
        if r == t:
            return GlueMap.identity(q)
        if self._pos[r] < self._pos[t]:
            return self.glueings.get((r, s, t), GlueMap.identity(q))
        return self.phi(t, s, r).inverse()

    def tau(self, pair, s) -> GlueMap:
        """Global-to-local label map at ``s`` on the edge ``pair``."""
        q = self.q_of(s)
        nb = self.neighbours(s)
        t = [g for g in pair if g != s][0]
        if self.m(s, t) <= 2 or not nb:
            return GlueMap.identity(q)
        return self.phi(nb[0], s, t)

    def units(self, pair):
        return tuple((g, self.tau(pair, g)(1)) for g in pair)

    def engine(self, s, t):
        desc = self.edge(s, t)
        return engine(desc, self.units(desc.pair))

    def rank1(self, s):
        return rank1(self.q_of(s), s)


# -- validation -------------------------------------------------------------

@dataclass
class ValidationReport:
    ok: bool
    checks: list

    def to_dict(self):
        return {"valid": self.ok, "checks": self.checks}


def validate(spec: FoundationSpec) -> ValidationReport:
    """Check F1-F3 and MF1-MF2; raises on the first violation."""
    checks = []
    for pair, desc in spec.edges.items():
        if desc.kind not in ORDER_OF:
            raise UnsupportedOrder(f"edge {pair} has unsupported type {desc.kind}")
        if desc.q not in SUPPORTED:
            raise SchemaError(f"GF({desc.q}) is not supported")
        if desc.kind == "B2" and desc.short not in pair:
            raise SchemaError(f"short generator of {pair} must be in the pair")
    checks.append("edge types")
    # panels at a common vertex must carry the same field
    for s in spec.generators:
        qs = {d.q for p, d in spec.edges.items() if s in p}
        if len(qs) > 1:
            raise PanelMismatch(f"panels at {s!r} have sizes {sorted(q + 1 for q in qs)}", vertex=s)
    checks.append("panel sizes")
    # glueings only on diagram edges
    dedges = set(spec.diagram_edges())
    for (r, s, t), g in spec.glueings.items():
        if _pair(spec._pos, r, s) not in dedges or _pair(spec._pos, s, t) not in dedges or r == t:
            raise SchemaError(f"glueing {(r, s, t)} is not on two diagram edges at {s!r}")
        if g.q != spec.q_of(s):
            raise PanelMismatch(f"glueing {(r, s, t)} is over GF({g.q})")
    for s in spec.generators:
        nb = spec.neighbours(s)
        for r in nb:
            if not spec.phi(r, s, r).is_identity():
                raise CocycleViolation(f"phi_{r}{s}{r} is not the identity")
            for t in nb:
                if spec.phi(r, s, t).compose(spec.phi(t, s, r)) != GlueMap.identity(spec.q_of(s)):
                    raise CocycleViolation(f"phi_{r}{s}{t} is not inverse to phi_{t}{s}{r}")
                for u in nb:
                    if spec.phi(t, s, u).compose(spec.phi(r, s, t)) != spec.phi(r, s, u):
                        raise CocycleViolation(f"cocycle fails on {(r, s, t, u)}", triple=(r, s, t, u))
    checks.append("cocycle")
    for s in spec.generators:
        nb = spec.neighbours(s)
        for r in nb:
            for t in nb:
                if r != t and not moufang_isomorphic(spec, r, s, t):
                    raise PanelMismatch(f"phi_{r}{s}{t} is not a Moufang set isomorphism")
    checks.append("moufang sets")
    return ValidationReport(True, checks)


def moufang_isomorphic(spec: FoundationSpec, r, s, t) -> bool:
    """MF2: phi_rst conjugates the root groups of the s-panel in {r,s} onto those in {s,t}."""
    from .rank2 import INF

    phi = spec.phi(r, s, t)
    ms1 = spec.engine(r, s).moufang_set(s)
    ms2 = spec.engine(s, t).moufang_set(s)

    def f(p):
        return INF if p == INF else phi(p)

    def key(perm):
        return tuple(sorted(((str(a), str(b)) for a, b in perm.items())))

    for p, group in ms1.root_groups.items():
        image = {key({f(a): f(b) for a, b in perm.items()}) for perm in group}
        if image != {key(perm) for perm in ms2.root_groups[f(p)]}:
            return False
    return True


# -- derived structures -----------------------------------------------------

def residue(spec: FoundationSpec, J) -> FoundationSpec:
    """The J-residue: restriction of diagram, edges and glueings to J."""
    J = set(J)
    gens = tuple(g for g in spec.generators if g in J)
    edges = {p: d for p, d in spec.edges.items() if set(p) <= J}
    glue = {k: v for k, v in spec.glueings.items() if set(k) <= J}
    opts = dict(spec.options)
    bare = [g for g in gens if not any(g in p for p in edges)]
    if "q" not in opts and bare:
        for g in gens:
            try:
                opts["q"] = spec.q_of(g)
                break
            except SchemaError:
                pass
    return FoundationSpec(gens, edges, glue, opts)


@dataclass
class Blueprint:
    """Global label sets per generator and the labelled edge buildings."""

    spec: FoundationSpec

    def __post_init__(self):
        self.group = self.spec.group
        self.q = {s: self.spec.q_of(s) for s in self.spec.generators}
        self._cache = {}

    def relabel(self, s, t, labels):
        """Global labels of type p(t, s) equivalent to ``labels`` of type p(s, t)."""
        key = (s, t, labels)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        if self.group.m(s, t) == 2:
            out = (labels[1], labels[0])
        else:
            spec = self.spec
            pair = spec.edge(s, t).pair
            eng = spec.engine(s, t)
            tau = {g: spec.tau(pair, g) for g in pair}
            local = tuple(tau[g](u) for g, u in zip(self.group.p_word(s, t), labels))
            res = eng.relabel(s, local)
            inv = {g: tau[g].inverse() for g in pair}
            out = tuple(inv[g](v) for g, v in zip(self.group.p_word(t, s), res))
        self._cache[key] = out
        return out

    def edge_chambers(self, s, t):
        """All (type, labels) of the labelled edge building, canonical types only."""
        W = self.group
        out = []
        for w in W.enumerate_elements(W.m(s, t), J=(s, t)):
            word = w.word
            for labels in product(*[range(self.q[g]) for g in word]):
                out.append((word, labels))
        return out


def blueprint(spec: FoundationSpec) -> Blueprint:
    validate(spec)
    return Blueprint(spec)


@dataclass
class FoundationApartment:
    chambers: dict  # edge -> list of (type, zero labels)

    def check_fa2(self, spec: FoundationSpec) -> bool:
        """Glueings fix 0 and the base point, so shared panels of the apartments match."""
        for s in spec.generators:
            for r in spec.neighbours(s):
                for t in spec.neighbours(s):
                    phi = spec.phi(r, s, t)
                    if phi(0) != 0 or phi(None) is not None:
                        return False
        return True


def apartment(spec: FoundationSpec) -> FoundationApartment:
    W = spec.group
    out = {}
    for pair in spec.edges:
        elems = W.enumerate_elements(W.m(*pair), J=pair)
        out[pair] = [(w.word, (0,) * w.length) for w in elems]
    apt = FoundationApartment(out)
    assert apt.check_fa2(spec)
    return apt


# -- serialization ----------------------------------------------------------

def from_dict(doc: dict) -> FoundationSpec:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {e.message}", path=where) from None
    gens = tuple(doc["generators"])
    pos = {g: i for i, g in enumerate(gens)}
    edges = {}
    for e in doc["edges"]:
        a, b = e["pair"]
        if a not in pos or b not in pos:
            raise SchemaError(f"edge {e['pair']} uses an unknown generator")
        if e["type"] not in KINDS or e["type"] == "A1":
            raise UnsupportedOrder(f"edge type {e['type']!r} is not one of A1xA1, A2, B2")
        pair = _pair(pos, a, b)
        if pair in edges:
            raise SchemaError(f"edge {pair} listed twice")
        short = e.get("short")
        if e["type"] == "B2" and short is None:
            short = pair[0]
        edges[pair] = Rank2Descriptor(e["type"], e["q"], pair, short if e["type"] == "B2" else None)
    options = dict(doc.get("options", {}))
    spec0 = FoundationSpec(gens, edges, {}, options)
    glue = {}
    for g in doc.get("glueings", []):
        r, s, t = g["triple"]
        for x in (r, s, t):
            if x not in pos:
                raise SchemaError(f"glueing {g['triple']} uses an unknown generator")
        if r == t:
            raise SchemaError(f"glueing {g['triple']}: phi_tst is always the identity")
        gm = GlueMap(spec0.q_of(s), g.get("scale", 1), g.get("frobenius", 0))
        if pos[r] > pos[t]:
            r, t, gm = t, r, gm.inverse()
        if (r, s, t) in glue and glue[(r, s, t)] != gm:
            raise CocycleViolation(f"glueing {(r, s, t)} given twice inconsistently")
        glue[(r, s, t)] = gm
    return FoundationSpec(gens, edges, glue, options)


def to_dict(spec: FoundationSpec) -> dict:
    edges = []
    for pair, d in sorted(spec.edges.items(), key=lambda kv: (spec._pos[kv[0][0]], spec._pos[kv[0][1]])):
        e = {"pair": list(pair), "type": d.kind, "q": d.q}
        if d.kind == "B2":
            e["short"] = d.short
        edges.append(e)
    glue = [{"triple": list(k), "scale": v.scale, "frobenius": v.frobenius}
            for k, v in sorted(spec.glueings.items(), key=lambda kv: [spec._pos[x] for x in kv[0]])]
    doc = {"generators": list(spec.generators), "edges": edges, "glueings": glue}
    if spec.options:
        doc["options"] = dict(spec.options)
    return doc


def loads(text: str) -> FoundationSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}: {e.msg}", line=e.lineno, column=e.colno) from None
    return from_dict(doc)


def load(path) -> FoundationSpec:
    return loads(Path(path).read_text())


def dumps(spec: FoundationSpec) -> str:
    return json.dumps(to_dict(spec), indent=2) + "\n"


DATA = Path(__file__).parent / "data"


def bundled(name: str) -> FoundationSpec:
    """One of the bundled example foundations, e.g. ``bundled("a3_f2")``."""
    return load(DATA / (name if name.endswith(".json") else name + ".json"))


def single_edge(kind: str, q: int, pair=("s", "t"), short=None) -> FoundationSpec:
    pair = tuple(pair)
    desc = Rank2Descriptor(kind, q, pair, short if kind == "B2" else None)
    return FoundationSpec(pair, {pair: desc}, {}, {"q": q})
