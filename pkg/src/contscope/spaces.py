"""Finite sets, products, predicate spaces and bit-set predicates.

Every space exposes ``contains``.  Finite spaces additionally expose
``size``, ``elements()`` and ``index()``; the index map fixes the bit
position of each element inside a :class:`Pred`.  Products use row-major
order: the first coordinate varies slowest, exactly like
:func:`itertools.product`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Callable, Iterable, Iterator

MAX_PRED_DOMAIN = 16  # enumerate_predicates yields at most 2**16 predicates
MAX_REL_DOMAIN = 12
_INDEX_TABLE_CAP = 1 << 12


class SpaceMismatch(TypeError):
    """Raised when a value lives on a different space than required."""


class CapExceeded(ValueError):
    """Raised when an enumeration would exceed a hard size cap."""


_INTERNED: dict[Any, Any] = {}


def intern_space(space: Any) -> Any:
    """The canonical instance among equal spaces, so that hot paths can
    compare spaces by identity."""
    return _INTERNED.setdefault(space, space)


def check_space(actual: Any, expected: Any, what: str = "value") -> None:
    if actual is not expected and actual != expected:
        raise SpaceMismatch(f"{what}: expected space {expected!r}, got {actual!r}")


@dataclass(frozen=True)
class Sort:
    """A named finite set of universe elements (a noun extension)."""

    name: str
    members: tuple[str, ...]

    finite = True

    @cached_property
    def _positions(self) -> dict[str, int]:
        return {e: i for i, e in enumerate(self.members)}

    @property
    def size(self) -> int:
        return len(self.members)

    def elements(self) -> Iterator[str]:
        return iter(self.members)

    def index(self, x: str) -> int:
        try:
            return self._positions[x]
        except KeyError:
            raise ValueError(f"{x!r} is not an element of sort {self.name}") from None

    def contains(self, x: Any) -> bool:
        return isinstance(x, str) and x in self._positions

    def __repr__(self) -> str:
        return f"{self.name}{{{','.join(self.members)}}}"

    @cached_property
    def _hash(self) -> int:
        return hash((Sort, self.name, self.members))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if type(other) is not Sort:
            return NotImplemented
        return self._hash == other._hash and self.name == other.name and self.members == other.members


@dataclass(frozen=True)
class Product:
    """Cartesian product of spaces; elements are tuples, one entry per factor.

    Factors may themselves be products, so ``Product((Product((a, b)), c))``
    has elements ``((x, y), z)``.  Regrouping between such shapes is always
    explicit (see :mod:`contscope.cont`).
    """

    factors: tuple[Any, ...]

    @cached_property
    def finite(self) -> bool:
        return all(getattr(f, "finite", False) for f in self.factors)

    @cached_property
    def size(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.size
        return n

    @cached_property
    def _sizes(self) -> tuple[int, ...]:
        return tuple(f.size for f in self.factors)

    def elements(self) -> Iterator[tuple]:
        return itertools.product(*(tuple(f.elements()) for f in self.factors))

    @cached_property
    def _positions(self) -> dict[tuple, int] | None:
        if not self.finite or self.size > _INDEX_TABLE_CAP:
            return None
        return {t: i for i, t in enumerate(self.elements())}

    def index(self, t: tuple) -> int:
        table = self._positions
        if table is not None:
            try:
                return table[t]
            except (KeyError, TypeError):
                raise ValueError(f"{t!r} is not an element of {self!r}") from None
        i = 0
        for f, n, x in zip(self.factors, self._sizes, t):
            i = i * n + f.index(x)
        return i

    def decode(self, i: int) -> tuple:
        if not 0 <= i < self.size:
            raise ValueError(f"index {i} out of range for {self!r}")
        out = []
        for f, n in zip(reversed(self.factors), reversed(self._sizes)):
            i, r = divmod(i, n)
            out.append(_nth(f, r))
        return tuple(reversed(out))

    def contains(self, t: Any) -> bool:
        return (
            isinstance(t, tuple)
            and len(t) == len(self.factors)
            and all(f.contains(x) for f, x in zip(self.factors, t))
        )

    def __repr__(self) -> str:
        return "(" + " x ".join(repr(f) for f in self.factors) + ")"

    @cached_property
    def _hash(self) -> int:
        return hash((Product, self.factors))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if type(other) is not Product:
            return NotImplemented
        return self._hash == other._hash and self.factors == other.factors


def _nth(space: Any, i: int) -> Any:
    if isinstance(space, Product):
        return space.decode(i)
    if isinstance(space, Sort):
        return space.members[i]
    return next(itertools.islice(space.elements(), i, None))


class _Truth:
    """The two-element set of truth values."""

    finite = True
    size = 2

    def elements(self) -> Iterator[bool]:
        return iter((False, True))

    def index(self, b: bool) -> int:
        return int(b)

    def contains(self, b: Any) -> bool:
        return isinstance(b, bool)

    def __repr__(self) -> str:
        return "t"

    def __reduce__(self) -> str:
        return "TRUTH"


TRUTH = _Truth()


@dataclass(frozen=True)
class PredSpace:
    """P(X): all predicates on ``domain``.

    Finite when the domain is finite; its elements are then :class:`Pred`
    values indexed by their bit pattern.  Over an infinite domain (a
    continuation space) predicates are plain callables.
    """

    domain: Any

    @property
    def finite(self) -> bool:
        return getattr(self.domain, "finite", False)

    @property
    def size(self) -> int:
        return 1 << self.domain.size

    def elements(self) -> Iterator[Pred]:
        return (Pred(self.domain, b) for b in range(self.size))

    def index(self, p: Pred) -> int:
        return p.bits

    def contains(self, p: Any) -> bool:
        if isinstance(p, Pred):
            return p.space == self.domain
        return not self.finite and callable(p)

    def __repr__(self) -> str:
        return f"P{self.domain!r}"

    @cached_property
    def _hash(self) -> int:
        return hash((PredSpace, self.domain))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: Any) -> bool:
        if self is other:
            return True
        if type(other) is not PredSpace:
            return NotImplemented
        return self._hash == other._hash and self.domain == other.domain


@dataclass(frozen=True)
class ContSpace:
    """C(X) = P(P(X)); never enumerated."""

    base: Any

    finite = False

    def contains(self, q: Any) -> bool:
        from contscope.cont import Cont

        return isinstance(q, Cont) and q.base == self.base

    def __repr__(self) -> str:
        return f"C{self.base!r}"


class Pred:
    """A subset of a finite space, stored as a bit set.

    Bit ``i`` is set iff the element with ``space.index(x) == i`` belongs to
    the predicate.  Calling a predicate tests membership.  Immutable.
    """

    __slots__ = ("space", "bits", "_index")

    def __init__(self, space: Any, bits: int):
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "bits", bits)
        object.__setattr__(self, "_index", space.index)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError("Pred is immutable")

    def __eq__(self, other: Any) -> bool:
        if not isinstance(other, Pred):
            return NotImplemented
        return self.bits == other.bits and (self.space is other.space or self.space == other.space)

    def __hash__(self) -> int:
        return hash((self.space, self.bits))

    def __call__(self, x: Any) -> bool:
        return self.bits >> self._index(x) & 1 == 1

    def members(self) -> list:
        return [x for i, x in enumerate(self.space.elements()) if self.bits >> i & 1]

    def count(self) -> int:
        return bin(self.bits).count("1")

    @classmethod
    def from_function(cls, space: Any, fn: Callable[[Any], bool]) -> Pred:
        bits = 0
        for i, x in enumerate(space.elements()):
            if fn(x):
                bits |= 1 << i
        return cls(space, bits)

    @classmethod
    def from_elements(cls, space: Any, xs: Iterable[Any]) -> Pred:
        bits = 0
        for x in xs:
            bits |= 1 << space.index(x)
        return cls(space, bits)

    def __repr__(self) -> str:
        return "{" + ",".join(map(_fmt, self.members())) + "}"


def _fmt(x: Any) -> str:
    if isinstance(x, tuple):
        return "(" + ",".join(map(_fmt, x)) + ")"
    return str(x)


def enumerate_predicates(space: Any) -> list[Pred]:
    """All ``2**|space|`` predicates in increasing bit-pattern order."""
    if not getattr(space, "finite", False):
        raise CapExceeded(f"cannot enumerate predicates on infinite space {space!r}")
    if space.size > MAX_PRED_DOMAIN:
        raise CapExceeded(f"predicate space over {space.size} elements exceeds cap {MAX_PRED_DOMAIN}")
    return [Pred(space, b) for b in range(1 << space.size)]
