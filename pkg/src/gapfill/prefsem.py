"""Preference-semantic scoring of interlingua expressions.

Role fillers are scored against an ontology's basic and relaxable-to
constraints on a five-step scale (1.0 / 0.8 / 0.25 / 0.05 / 0.01) and
the per-relation scores multiply into an expression score, so no
expression ever scores zero.  Expressions are concept instances joined
by named roles, written `(id / CONCEPT :ROLE filler ...)` with
reentrancy through bare instance ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

__all__ = [
    "OntologyError",
    "InterlinguaError",
    "Ontology",
    "load_ontology",
    "InterlinguaExpr",
    "parse_interlingua",
    "parse_interlingua_file",
    "format_interlingua",
    "RelationTriple",
    "extract_relations",
    "tier",
    "PreferenceScore",
    "score",
    "rank",
    "TIERS",
]

TIERS = (1.0, 0.8, 0.25, 0.05, 0.01)
UNIVERSAL = "*"


class OntologyError(Exception):
    pass


class InterlinguaError(Exception):
    pass


@dataclass(frozen=True)
class RelationConstraint:
    basic: tuple  # concept names, or ("*",) for universal
    relaxed: tuple
    domain_basic: tuple = ()
    domain_relaxed: tuple = ()


class Ontology:
    """Concept taxonomy with per-relation range/domain constraints."""

    def __init__(self, concepts, isa_edges, disjoint_pairs, relations):
        self.concepts = frozenset(concepts)
        self.parents = {}
        for child, parent in isa_edges:
            self.parents.setdefault(child, set()).add(parent)
        self.relations = dict(relations)
        self._ancestors = {}
        order = self._toposort()
        for c in order:
            anc = {c}
            for p in self.parents.get(c, ()):
                anc |= self._ancestors[p]
            self._ancestors[c] = frozenset(anc)
        self._disjoint_declared = frozenset(frozenset(p) for p in disjoint_pairs)

    def _toposort(self):
        state = {}
        order = []

        def visit(c, trail):
            mark = state.get(c)
            if mark == "done":
                return
            if mark == "busy":
                cycle = trail[trail.index(c):] + [c]
                raise OntologyError("isa cycle: %s" % " -> ".join(cycle))
            state[c] = "busy"
            for p in sorted(self.parents.get(c, ())):
                visit(p, trail + [c])
            state[c] = "done"
            order.append(c)

        for c in sorted(self.concepts):
            visit(c, [])
        return order

    def subsumes(self, a, b) -> bool:
        """True when a is b or an ancestor of b (reflexive-transitive isa)."""
        if a == UNIVERSAL:
            return True
        return a in self._ancestors.get(b, frozenset((b,)))

    def disjoint(self, a, b) -> bool:
        """Declared disjointness, propagated down both subtrees."""
        if a == UNIVERSAL or b == UNIVERSAL:
            return False
        for x in self._ancestors.get(a, frozenset((a,))):
            for y in self._ancestors.get(b, frozenset((b,))):
                if frozenset((x, y)) in self._disjoint_declared:
                    return True
        return False


def _parse_concept_list(text, declared, lineno):
    names = [c for c in text.split(",") if c]
    if not names:
        raise OntologyError("line %d: empty concept list" % lineno)
    for c in names:
        if c != UNIVERSAL and c not in declared:
            raise OntologyError("line %d: undeclared concept %r" % (lineno, c))
    return tuple(names)


def load_ontology(fp) -> Ontology:
    """Line-oriented ontology text.

    Directives: `concept NAME`, `isa CHILD PARENT`, `disjoint A B`, and
    `relation NAME basic c1,c2 relaxable-to c3 [domain c4 [domain-relaxable-to c5]]`.
    `*` as a constraint set means any concept satisfies it.
    """
    lines = []
    for lineno, raw in enumerate(fp, start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    concepts = set()
    for lineno, parts in lines:
        if parts[0] == "concept":
            if len(parts) != 2:
                raise OntologyError("line %d: concept takes one name" % lineno)
            concepts.add(parts[1])
    isa_edges = []
    disjoint_pairs = []
    relations = {}
    for lineno, parts in lines:
        kind = parts[0]
        if kind == "concept":
            continue
        if kind == "isa":
            if len(parts) != 3:
                raise OntologyError("line %d: isa takes child and parent" % lineno)
            for c in parts[1:]:
                if c not in concepts:
                    raise OntologyError("line %d: undeclared concept %r" % (lineno, c))
            isa_edges.append((parts[1], parts[2]))
        elif kind == "disjoint":
            if len(parts) != 3:
                raise OntologyError("line %d: disjoint takes two concepts" % lineno)
            for c in parts[1:]:
                if c not in concepts:
                    raise OntologyError("line %d: undeclared concept %r" % (lineno, c))
            disjoint_pairs.append((parts[1], parts[2]))
        elif kind == "relation":
            if len(parts) < 2:
                raise OntologyError("line %d: relation needs a name" % lineno)
            name = parts[1]
            sets = {"basic": (), "relaxable-to": (), "domain": (), "domain-relaxable-to": ()}
            i = 2
            while i < len(parts):
                key = parts[i]
                if key not in sets or i + 1 >= len(parts):
                    raise OntologyError("line %d: bad relation clause %r" % (lineno, key))
                sets[key] = _parse_concept_list(parts[i + 1], concepts, lineno)
                i += 2
            if not sets["basic"]:
                raise OntologyError("line %d: relation %s needs a basic set" % (lineno, name))
            relations[name] = RelationConstraint(
                sets["basic"], sets["relaxable-to"], sets["domain"], sets["domain-relaxable-to"])
        else:
            raise OntologyError("line %d: unknown directive %r" % (lineno, kind))
    return Ontology(concepts, isa_edges, disjoint_pairs, relations)


# ---------------------------------------------------------------------------
# Interlingua expressions

@dataclass
class InterlinguaExpr:
    instances: dict  # id -> concept name
    roles: list  # (holder id, relation name, filler) with filler: ("id", x) | ("literal", x)
    root: str

    def concept(self, instance_id):
        return self.instances[instance_id]


class _ILReader:
    def __init__(self, text):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == ";":
                nl = self.text.find("\n", self.pos)
                self.pos = len(self.text) if nl < 0 else nl + 1
            elif c.isspace():
                self.pos += 1
            else:
                break

    def at_end(self):
        self._skip()
        return self.pos >= len(self.text)

    def peek(self):
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, c):
        self._skip()
        if self.peek() != c:
            raise InterlinguaError("expected %r at offset %d" % (c, self.pos))
        self.pos += 1

    def symbol(self):
        self._skip()
        start = self.pos
        while self.pos < len(self.text) and not self.text[self.pos].isspace() \
                and self.text[self.pos] not in '();"':
            self.pos += 1
        if start == self.pos:
            raise InterlinguaError("expected a symbol at offset %d" % start)
        return self.text[start:self.pos]

    def string(self):
        self.expect('"')
        end = self.text.find('"', self.pos)
        if end < 0:
            raise InterlinguaError("unterminated string")
        s = self.text[self.pos:end]
        self.pos = end + 1
        return s


def _read_instance(r: _ILReader, expr: InterlinguaExpr) -> str:
    r.expect("(")
    inst = r.symbol()
    if inst in expr.instances:
        raise InterlinguaError("duplicate definition of instance %s" % inst)
    slash = r.symbol()
    if slash != "/":
        raise InterlinguaError("expected '/' after instance id %s" % inst)
    expr.instances[inst] = r.symbol()
    while True:
        c = r.peek()
        if c == ")":
            r.pos += 1
            return inst
        role = r.symbol()
        if not role.startswith(":"):
            raise InterlinguaError("expected a :ROLE, got %r" % role)
        slot = len(expr.roles)
        expr.roles.append(None)  # keep document order despite nested reads
        expr.roles[slot] = (inst, role[1:], _read_filler(r, expr))


def _read_filler(r: _ILReader, expr: InterlinguaExpr):
    c = r.peek()
    if c == "(":
        return ("id", _read_instance(r, expr))
    if c == '"':
        return ("literal", r.string())
    sym = r.symbol()
    try:
        return ("literal", int(sym))
    except ValueError:
        pass
    try:
        return ("literal", float(sym))
    except ValueError:
        pass
    if sym not in expr.instances:
        raise InterlinguaError("reference to undefined instance %s" % sym)
    return ("id", sym)


def parse_interlingua(text: str) -> InterlinguaExpr:
    """Read one `(id / CONCEPT :ROLE filler ...)` expression.

    Bare ids are references to previously defined instances.
    """
    r = _ILReader(text)
    expr = InterlinguaExpr({}, [], "")
    expr.root = _read_instance(r, expr)
    if not r.at_end():
        raise InterlinguaError("trailing text after expression")
    return expr


def parse_interlingua_file(fp):
    text = fp.read()
    r = _ILReader(text)
    out = []
    while not r.at_end():
        expr = InterlinguaExpr({}, [], "")
        expr.root = _read_instance(r, expr)
        out.append(expr)
    return out


def format_interlingua(expr: InterlinguaExpr) -> str:
    """Canonical text form; later mentions of a shared instance print bare."""
    printed = set()

    def fmt(inst, indent):
        printed.add(inst)
        parts = ["(%s / %s" % (inst, expr.instances[inst])]
        pad = " " * (indent + 3)
        for holder, role, filler in expr.roles:
            if holder != inst:
                continue
            kind, val = filler
            if kind == "literal":
                rendered = '"%s"' % val if isinstance(val, str) else repr(val)
            elif val in printed:
                rendered = val
            else:
                rendered = fmt(val, indent + 3)
            parts.append("\n%s:%s %s" % (pad, role, rendered))
        return "".join(parts) + ")"

    return fmt(expr.root, 0)


# ---------------------------------------------------------------------------
# relation extraction and scoring

@dataclass(frozen=True)
class RelationTriple:
    head: str  # concept of the holding instance
    relation: str
    filler: object  # concept name, or a literal value
    filler_is_literal: bool = False


def extract_relations(expr: InterlinguaExpr):
    """One triple per role edge, in source order."""
    out = []
    for holder, role, (kind, val) in expr.roles:
        if kind == "id":
            out.append(RelationTriple(expr.instances[holder], role, expr.instances[val]))
        else:
            out.append(RelationTriple(expr.instances[holder], role, val, True))
    return out


def _satisfies(onto, constraint_set, concept):
    return any(onto.subsumes(c, concept) for c in constraint_set)


def _disjoint_from_all(onto, constraint_set, concept):
    if not constraint_set or UNIVERSAL in constraint_set:
        return False
    return all(onto.disjoint(concept, c) for c in constraint_set)


def _five_way(onto, basic, relaxed, concept) -> float:
    effective_relaxed = tuple(relaxed) + tuple(basic)
    if _satisfies(onto, basic, concept):
        return 1.0
    if _satisfies(onto, effective_relaxed, concept):
        return 0.25 if _disjoint_from_all(onto, basic, concept) else 0.8
    if _disjoint_from_all(onto, basic, concept) or _disjoint_from_all(onto, effective_relaxed, concept):
        return 0.01
    return 0.05


def tier(onto: Ontology, triple: RelationTriple) -> float:
    """Range-constraint suitability of the filler: one of the five scores.

    Literal fillers score 1.0; an undeclared relation scores 0.05 (an
    unconstrained unknown), never a hard failure.
    """
    if triple.filler_is_literal:
        return 1.0
    rel = onto.relations.get(triple.relation)
    if rel is None:
        return 0.05
    return _five_way(onto, rel.basic, rel.relaxed, triple.filler)


@dataclass
class PreferenceScore:
    value: float
    factors: list = field(default_factory=list)  # (triple, "range"|"domain", tier)

    def tiers(self):
        return [t for (_tr, _kind, t) in self.factors]


def score(expr: InterlinguaExpr, onto: Ontology) -> PreferenceScore:
    """Product of per-relation tier scores (range, plus domain when the
    relation declares head constraints).  Always strictly positive.
    Undeclared relations are diagnosed in the factor record, not fatal."""
    result = PreferenceScore(1.0)
    for triple in extract_relations(expr):
        t = tier(onto, triple)
        rel = onto.relations.get(triple.relation)
        declared = rel is not None or triple.filler_is_literal
        result.factors.append((triple, "range" if declared else "range-undeclared", t))
        result.value *= t
        if rel is not None and rel.domain_basic:
            d = _five_way(onto, rel.domain_basic, rel.domain_relaxed, triple.head)
            result.factors.append((triple, "domain", d))
            result.value *= d
    return result


def rank(candidates, onto: Ontology):
    """Candidates with their scores, best first; stable under ties."""
    scored = [(expr, score(expr, onto)) for expr in candidates]
    scored.sort(key=lambda pair: -pair[1].value)
    return scored
