"""Generalized quantifier denotations over sorts."""

from __future__ import annotations

import re
from dataclasses import dataclass

from contscope.cont import Cont, eta
from contscope.spaces import Sort

_COUNTED = re.compile(r"(at-least|exactly)-(\d+)\Z")
PLAIN = ("every", "some", "no", "most")


@dataclass(frozen=True)
class Determiner:
    tag: str
    k: int | None = None
    element: str | None = None

    @property
    def label(self) -> str:
        if self.tag == "at_least":
            return f"at-least-{self.k}"
        if self.tag == "exactly":
            return f"exactly-{self.k}"
        if self.tag == "name":
            return f"name:{self.element}"
        return self.tag


def parse_determiner(text: str) -> Determiner:
    """Parse a surface form: every, some, a, no, most, at-least-K, exactly-K, name:E."""
    if text in PLAIN:
        return Determiner(text)
    if text == "a":
        return Determiner("some")
    if text.startswith("name:") and len(text) > 5:
        return Determiner("name", element=text[5:])
    m = _COUNTED.match(text)
    if m:
        k = int(m.group(2))
        if k < 1:
            raise ValueError(f"determiner count must be at least 1: {text!r}")
        return Determiner(m.group(1).replace("-", "_"), k=k)
    raise ValueError(f"unknown determiner {text!r}")


def _counting(sort: Sort, accept) -> Cont:
    xs = sort.members
    n = len(xs)
    def run(h):
        c = 0
        for x in xs:
            if h(x):
                c += 1
        return accept(c, n)

    return Cont(sort, run)


def denote(d: Determiner, sort: Sort) -> Cont:
    xs = sort.members
    if d.tag == "every":
        def every(h):
            for x in xs:
                if not h(x):
                    return False
            return True
        return Cont(sort, every)
    if d.tag == "some":
        def some(h):
            for x in xs:
                if h(x):
                    return True
            return False
        return Cont(sort, some)
    if d.tag == "no":
        def no(h):
            for x in xs:
                if h(x):
                    return False
            return True
        return Cont(sort, no)
    if d.tag == "most":
        # strict majority
        return _counting(sort, lambda c, n: 2 * c > n)
    if d.tag == "at_least":
        k = d.k
        return _counting(sort, lambda c, n: c >= k)
    if d.tag == "exactly":
        k = d.k
        return _counting(sort, lambda c, n: c == k)
    if d.tag == "name":
        if not sort.contains(d.element):
            raise ValueError(f"name {d.element} is not in sort {sort.name}")
        return eta(d.element, sort)
    raise ValueError(f"unknown determiner tag {d.tag!r}")


CATALOG_DETERMINERS = (
    Determiner("every"),
    Determiner("some"),
    Determiner("no"),
    Determiner("most"),
    Determiner("at_least", k=2),
    Determiner("exactly", k=1),
)


def catalog_determiners(sort: Sort) -> list[Determiner]:
    dets = list(CATALOG_DETERMINERS)
    if sort.members:
        dets.append(Determiner("name", element=sort.members[0]))
    return dets


def catalog(sort: Sort) -> list[tuple[str, Cont]]:
    """The fixed quantifier pool used by exhaustive sweeps."""
    return [(d.label, denote(d, sort)) for d in catalog_determiners(sort)]
