"""Finite models: universe, sorts, relations, lexicon, and the model file format.

File format (line oriented, UTF-8)::

    universe: a b c d
    sort girl: a b
    rel likes/2 girl boy : (a,c) (b,d)
    lex every det every
    # comment

Serialization is canonical: universe in declared order, then sorts,
relations and lexicon entries each sorted by name, sort members in universe
order and relation tuples sorted lexicographically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from contscope.quant import Determiner, parse_determiner
from contscope.spaces import MAX_REL_DOMAIN, CapExceeded, Pred, Product, Sort

MAX_UNIVERSE = 8
CATEGORIES = ("noun", "v", "vt", "vdt", "det")
VERB_ARITY = {"v": 1, "vt": 2, "vdt": 3}

_NAME = re.compile(r"[^\s,():#/]+\Z")
_TUPLE = re.compile(r"\(([^()]*)\)")


class ModelError(ValueError):
    """Invalid model text or an inconsistent model."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass(frozen=True)
class Rel:
    name: str
    arity: int
    columns: tuple[Sort, ...]
    tuples: frozenset[tuple[str, ...]] = field(default_factory=frozenset)

    @property
    def domain(self):
        """The space a relation's predicate lives on: a Sort when unary."""
        return self.columns[0] if self.arity == 1 else Product(self.columns)

    def to_pred(self) -> Pred:
        dom = self.domain
        if self.arity == 1:
            return Pred.from_elements(dom, (t[0] for t in self.tuples))
        return Pred.from_elements(dom, self.tuples)

    @classmethod
    def from_pred(cls, name: str, columns: Sequence[Sort], p: Pred) -> Rel:
        if len(columns) == 1:
            tuples = frozenset((x,) for x in p.members())
        else:
            tuples = frozenset(p.members())
        return cls(name, len(columns), tuple(columns), tuples)


@dataclass(frozen=True)
class LexEntry:
    category: str
    target: str


@dataclass(frozen=True)
class Model:
    """A finite world.  The mappings are never mutated after construction."""

    universe: tuple[str, ...]
    sorts: dict[str, Sort] = field(default_factory=dict)
    relations: dict[str, Rel] = field(default_factory=dict)
    lexicon: dict[str, LexEntry] = field(default_factory=dict)

    def determiner(self, word: str) -> Determiner:
        return parse_determiner(self.lexicon[word].target)


def restrict_relation(r: Rel, columns: Sequence[Sort]) -> Rel:
    """Keep only the tuples that lie inside the product of ``columns``."""
    if len(columns) != r.arity:
        raise ValueError(f"relation {r.name} has arity {r.arity}, got {len(columns)} columns")
    kept = frozenset(t for t in r.tuples if all(s.contains(x) for s, x in zip(columns, t)))
    return Rel(r.name, r.arity, tuple(columns), kept)


def enumerate_relations(columns: Sequence[Sort], cap: int | None = None, name: str = "r") -> list[Rel]:
    """All relations over the product of ``columns`` in increasing bit order."""
    columns = tuple(columns)
    dom = columns[0] if len(columns) == 1 else Product(columns)
    if dom.size > MAX_REL_DOMAIN:
        raise CapExceeded(f"relation domain of {dom.size} tuples exceeds cap {MAX_REL_DOMAIN}")
    total = 1 << dom.size
    if cap is not None:
        total = min(total, cap)
    return [Rel.from_pred(name, columns, Pred(dom, b)) for b in range(total)]


# --- parsing ---------------------------------------------------------------


def _name(tok: str, what: str, line: int) -> str:
    if not _NAME.match(tok):
        raise ModelError(f"invalid {what} name {tok!r}", line)
    return tok


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.strip()
        if s and not s.startswith("#"):
            yield no, s


def parse_model(text: str) -> Model:
    universe: tuple[str, ...] | None = None
    sort_lines: list[tuple[int, str, list[str]]] = []
    rel_lines: list[tuple[int, str]] = []
    lex_lines: list[tuple[int, list[str]]] = []

    for no, s in _lines(text):
        head, _, rest = s.partition(" ")
        if s.startswith("universe:"):
            if universe is not None:
                raise ModelError("duplicate universe line", no)
            elems = s[len("universe:"):].split()
            for e in elems:
                _name(e, "element", no)
            if len(set(elems)) != len(elems):
                raise ModelError("duplicate element in universe", no)
            if len(elems) > MAX_UNIVERSE:
                raise ModelError(f"universe has {len(elems)} elements, cap is {MAX_UNIVERSE}", no)
            universe = tuple(elems)
        elif head == "sort":
            name, colon, members = rest.partition(":")
            if not colon:
                raise ModelError("sort line needs ':'", no)
            sort_lines.append((no, _name(name.strip(), "sort", no), members.split()))
        elif head == "rel":
            rel_lines.append((no, rest))
        elif head == "lex":
            lex_lines.append((no, rest.split()))
        else:
            raise ModelError(f"unrecognized line {s!r}", no)

    if universe is None:
        raise ModelError("missing universe line")
    known = set(universe)

    sorts: dict[str, Sort] = {}
    for no, name, members in sort_lines:
        if name in sorts:
            raise ModelError(f"duplicate sort {name}", no)
        for e in members:
            if e not in known:
                raise ModelError(f"unknown element {e} in sort {name}", no)
        if len(set(members)) != len(members):
            raise ModelError(f"duplicate element in sort {name}", no)
        chosen = set(members)
        sorts[name] = Sort(name, tuple(e for e in universe if e in chosen))

    relations: dict[str, Rel] = {}
    for no, rest in rel_lines:
        rel = _parse_rel(rest, sorts, known, no)
        if rel.name in relations:
            raise ModelError(f"duplicate relation {rel.name}", no)
        relations[rel.name] = rel

    lexicon: dict[str, LexEntry] = {}
    for no, parts in lex_lines:
        if len(parts) != 3:
            raise ModelError("lex line needs WORD CATEGORY TARGET", no)
        word, cat, target = parts
        word = _name(word.lower(), "word", no)
        if word in lexicon:
            raise ModelError(f"duplicate lexicon word {word}", no)
        _check_lex(cat, target, sorts, relations, known, no)
        lexicon[word] = LexEntry(cat, target)

    return Model(universe, sorts, relations, lexicon)


def _parse_rel(rest: str, sorts: dict[str, Sort], known: set[str], no: int) -> Rel:
    header, colon, body = rest.partition(":")
    if not colon:
        raise ModelError("rel line needs ':'", no)
    parts = header.split()
    if not parts or "/" not in parts[0]:
        raise ModelError("rel header must be NAME/ARITY COL...", no)
    name, _, ar = parts[0].partition("/")
    _name(name, "relation", no)
    if not ar.isdigit() or int(ar) not in (1, 2, 3):
        raise ModelError(f"arity must be 1, 2 or 3, got {ar!r}", no)
    arity = int(ar)
    cols = parts[1:]
    if len(cols) != arity:
        raise ModelError(f"relation {name}/{arity} lists {len(cols)} columns", no)
    for c in cols:
        if c not in sorts:
            raise ModelError(f"unknown sort {c} in relation {name}", no)
    tuples = set()
    for m in _TUPLE.finditer(body):
        t = tuple(x.strip() for x in m.group(1).split(","))
        if len(t) != arity:
            raise ModelError(f"tuple {m.group(0)} has arity {len(t)}, expected {arity}", no)
        for x in t:
            if x not in known:
                raise ModelError(f"tuple element {x} outside universe", no)
        tuples.add(t)
    if _TUPLE.sub("", body).strip():
        raise ModelError(f"malformed tuple list in relation {name}", no)
    return Rel(name, arity, tuple(sorts[c] for c in cols), frozenset(tuples))


def _check_lex(cat: str, target: str, sorts, relations, known, no: int) -> None:
    if cat not in CATEGORIES:
        raise ModelError(f"unknown category {cat}", no)
    if cat == "noun":
        if target not in sorts:
            raise ModelError(f"noun target {target} is not a sort", no)
    elif cat == "det":
        try:
            d = parse_determiner(target)
        except ValueError as exc:
            raise ModelError(str(exc), no) from None
        if d.tag == "name" and d.element not in known:
            raise ModelError(f"name target {d.element} outside universe", no)
    else:
        rel = relations.get(target)
        if rel is None:
            raise ModelError(f"verb target {target} is not a relation", no)
        if rel.arity != VERB_ARITY[cat]:
            raise ModelError(f"{cat} needs arity {VERB_ARITY[cat]}, {target} has {rel.arity}", no)


# --- serialization ---------------------------------------------------------


def serialize_model(m: Model) -> str:
    out = ["universe:" + "".join(" " + e for e in m.universe)]
    for name in sorted(m.sorts):
        out.append(f"sort {name}:" + "".join(" " + e for e in m.sorts[name].members))
    for name in sorted(m.relations):
        r = m.relations[name]
        cols = " ".join(c.name for c in r.columns)
        tuples = "".join(" (" + ",".join(t) + ")" for t in sorted(r.tuples))
        out.append(f"rel {name}/{r.arity} {cols} :{tuples}")
    for word in sorted(m.lexicon):
        e = m.lexicon[word]
        out.append(f"lex {word} {e.category} {e.target}")
    return "\n".join(out) + "\n"
