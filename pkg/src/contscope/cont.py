"""The continuation monad C(X) = P(P(X)) and its derived operations.

A :class:`Cont` is an evaluation procedure: it takes a predicate on its base
(any callable returning a truth value) and answers true or false.  Two
continuations are equal when they agree on every predicate of the base,
which :func:`cont_eq` checks by enumeration.

Elements of a product ``Product((X, Y))`` are pairs ``(x, y)``, so a
predicate ``c`` on ``X x Y`` is applied as ``c((x, y))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from contscope.spaces import (
    TRUTH,
    ContSpace,
    Pred,
    PredSpace,
    Product,
    SpaceMismatch,
    check_space,
    enumerate_predicates,
    intern_space,
)


class Cont:
    """An element of C(base)."""

    __slots__ = ("base", "_run")

    def __init__(self, base: Any, run: Callable[[Callable[[Any], bool]], bool]):
        self.base = base
        self._run = run

    def __call__(self, h: Callable[[Any], bool]) -> bool:
        return bool(self._run(h))

    def __repr__(self) -> str:
        return f"<Cont on {self.base!r}>"


@dataclass(frozen=True)
class Morphism:
    """A function between spaces, with its typing kept for checks."""

    fn: Callable[..., Any]
    dom: tuple[Any, ...]
    cod: Any
    name: str = "f"

    def __call__(self, *args: Any) -> Any:
        return self.fn(*args)


def identity(space: Any) -> Morphism:
    return Morphism(lambda x: x, (space,), space, "id")


ID_T = identity(TRUTH)


def run_truth(q: Cont) -> bool:
    """Extract a truth value from C(t) by applying it to the identity on t."""
    check_space(q.base, TRUTH, "run_truth")
    return q(ID_T.fn)


# --- monad structure -------------------------------------------------------


def eta(x: Any, base: Any) -> Cont:
    if not base.contains(x):
        raise SpaceMismatch(f"{x!r} is not an element of {base!r}")
    return Cont(base, lambda h: h(x))


def cmap(f: Morphism, q: Cont) -> Cont:
    if len(f.dom) != 1:
        raise SpaceMismatch(f"cmap needs a unary morphism, got domain {f.dom!r}")
    check_space(q.base, f.dom[0], "cmap")
    fn = f.fn
    return Cont(f.cod, lambda h: q(lambda x: h(fn(x))))


def mu(F: Cont) -> Cont:
    if not isinstance(F.base, ContSpace):
        raise SpaceMismatch(f"mu needs a continuation over C(X), got base {F.base!r}")
    return Cont(F.base.base, lambda h: F(lambda D: D(h)))


def st_l(n: Cont, y: Any, y_space: Any) -> Cont:
    """Left strength C(X) x Y -> C(X x Y)."""
    if not y_space.contains(y):
        raise SpaceMismatch(f"{y!r} is not an element of {y_space!r}")
    return Cont(Product((n.base, y_space)), lambda c: n(lambda x: c((x, y))))


def st_r(x: Any, x_space: Any, m: Cont) -> Cont:
    """Right strength X x C(Y) -> C(X x Y)."""
    if not x_space.contains(x):
        raise SpaceMismatch(f"{x!r} is not an element of {x_space!r}")
    return Cont(Product((x_space, m.base)), lambda c: m(lambda y: c((x, y))))


# --- derived operations ----------------------------------------------------


def pu_l(m: Cont, n: Cont) -> Cont:
    """Pair two quantifiers with ``m`` taking scope over ``n``."""
    return Cont(Product((m.base, n.base)), lambda c: m(lambda x: n(lambda y: c((x, y)))))


def pu_r(m: Cont, n: Cont) -> Cont:
    """Pair two quantifiers with ``n`` taking scope over ``m``."""
    return Cont(Product((m.base, n.base)), lambda c: n(lambda y: m(lambda x: c((x, y)))))


def _check_binary(f: Morphism, m: Cont, n: Cont) -> None:
    if len(f.dom) != 2:
        raise SpaceMismatch(f"cps needs a binary morphism, got domain {f.dom!r}")
    check_space(m.base, f.dom[0], f"left argument of cps({f.name})")
    check_space(n.base, f.dom[1], f"right argument of cps({f.name})")


def cps_l(f: Morphism) -> Callable[[Cont, Cont], Cont]:
    fn, cod = f.fn, f.cod
    d0, d1 = f.dom if len(f.dom) == 2 else (None, None)

    def op(m: Cont, n: Cont) -> Cont:
        if m.base is not d0 or n.base is not d1:
            _check_binary(f, m, n)
        mr, nr = m._run, n._run
        return Cont(cod, lambda h: mr(lambda x: nr(lambda y: h(fn(x, y)))))

    return op


def cps_r(f: Morphism) -> Callable[[Cont, Cont], Cont]:
    fn, cod = f.fn, f.cod
    d0, d1 = f.dom if len(f.dom) == 2 else (None, None)

    def op(m: Cont, n: Cont) -> Cont:
        if m.base is not d0 or n.base is not d1:
            _check_binary(f, m, n)
        mr, nr = m._run, n._run
        return Cont(cod, lambda h: nr(lambda y: mr(lambda x: h(fn(x, y)))))

    return op


def cps(side: str, f: Morphism) -> Callable[[Cont, Cont], Cont]:
    if side == "l":
        return cps_l(f)
    if side == "r":
        return cps_r(f)
    raise ValueError(f"cps side must be 'l' or 'r', got {side!r}")


# --- evaluations and mos ---------------------------------------------------


def _indexed_product(space: Any, index: Any, index_first: bool) -> Product:
    return intern_space(Product((index, space)) if index_first else Product((space, index)))


def _pspace(space: Any) -> PredSpace:
    return intern_space(PredSpace(intern_space(space)))


def _slicer(space: Any, index: Any, index_first: bool) -> Callable[[Any, Any], Pred]:
    """(c, y) |-> the predicate x |-> c(x, y) on ``space``.

    With ``index_first`` the pair is read as ``(y, x)``; this is the
    transposition needed when the index coordinate comes first in the
    product, as in the shift operations over P(X1 x X3).
    """
    xs = tuple(space.elements())
    prod = _indexed_product(space, index, index_first)
    if index_first:
        pairs = {y: [(y, x) for x in xs] for y in index.elements()}
    else:
        pairs = {y: [(x, y) for x in xs] for y in index.elements()}
    # bit positions of each slice inside a concrete predicate on ``prod``
    positions = {y: [prod.index(t) for t in ts] for y, ts in pairs.items()}
    memo: dict[tuple[int, Any], Pred] = {}

    def slice_(c, y):
        bits = 0
        if type(c) is Pred and (c.space is prod or c.space == prod):
            key = (c.bits, y)
            hit = memo.get(key)
            if hit is not None:
                return hit
            cb = c.bits
            for i, pos in enumerate(positions[y]):
                if cb >> pos & 1:
                    bits |= 1 << i
            memo[key] = out = Pred(space, bits)
            return out
        else:
            for i, t in enumerate(pairs[y]):
                if c(t):
                    bits |= 1 << i
        return Pred(space, bits)

    return slice_


def eps_l(kind: str, space: Any, index: Any = None, *, index_first: bool = False) -> Morphism:
    """Left evaluation.

    ``scalar``:  P(X) x X -> t,  (h, x) |-> h(x).
    ``indexed``: P(X x Y) x Y -> P(X),  (c, y) |-> {x | c(x, y)}.
    """
    if kind == "scalar":
        return Morphism(lambda h, x: bool(h(x)), (_pspace(space), space), TRUTH, "eps_l")
    if kind == "indexed":
        sl = _slicer(space, index, index_first)
        dom = (_pspace(_indexed_product(space, index, index_first)), index)
        return Morphism(sl, dom, _pspace(space), "eps_l")
    raise ValueError(f"unknown evaluation kind {kind!r}")


def eps_r(kind: str, space: Any, index: Any = None, *, index_first: bool = False) -> Morphism:
    """Right evaluation: :func:`eps_l` with its arguments swapped."""
    if kind == "scalar":
        return Morphism(lambda x, h: bool(h(x)), (space, _pspace(space)), TRUTH, "eps_r")
    if kind == "indexed":
        sl = _slicer(space, index, index_first)
        dom = (index, _pspace(_indexed_product(space, index, index_first)))
        return Morphism(lambda y, c: sl(c, y), dom, _pspace(space), "eps_r")
    raise ValueError(f"unknown evaluation kind {kind!r}")


def mos_l(kind: str, space: Any = None) -> Callable[[Cont, Any], Any]:
    """Mostowski application of a quantifier to a predicate.

    ``scalar``:  (Q, c) |-> Q(c).
    ``indexed``: (Q on Y, c on X x Y) |-> {x | Q(y |-> c(x, y))}, where
    ``space`` is X.
    """
    if kind == "scalar":
        return lambda q, c: q(c)
    if kind == "indexed":
        if space is None:
            raise ValueError("indexed mos needs the remaining space X")
        xs = tuple(space.elements())

        def apply(q: Cont, c: Any) -> Pred:
            bits = 0
            for i, x in enumerate(xs):
                if q(lambda y: c((x, y))):
                    bits |= 1 << i
            return Pred(space, bits)

        return apply
    raise ValueError(f"unknown mos kind {kind!r}")


def mos_r(kind: str, space: Any = None) -> Callable[[Any, Cont], Any]:
    left = mos_l(kind, space)
    return lambda c, q: left(q, c)


# --- regrouping ------------------------------------------------------------


def flatten(space: Product) -> Morphism:
    """Nested product -> flat product of its leaf factors, e.g.
    ((x1, x3), x2) |-> (x1, x3, x2)."""
    leaves = tuple(_leaves(space))

    def go(sp, t):
        if isinstance(sp, Product):
            out = []
            for f, x in zip(sp.factors, t):
                out.extend(go(f, x))
            return out
        return [t]

    return Morphism(lambda t: tuple(go(space, t)), (space,), Product(leaves), "flatten")


def _leaves(space: Any):
    if isinstance(space, Product):
        for f in space.factors:
            yield from _leaves(f)
    else:
        yield space


def permute(space: Product, order: tuple[int, ...]) -> Morphism:
    """Flat product coordinate permutation: t |-> (t[order[0]], t[order[1]], ...)."""
    target = Product(tuple(space.factors[i] for i in order))
    return Morphism(lambda t: tuple(t[i] for i in order), (space,), target, "permute")


def pred_pullback(f: Morphism, p: Pred) -> Pred:
    """P(f): the inverse image of ``p`` along ``f``, as a predicate on f's domain."""
    return Pred.from_function(f.dom[0], lambda x: p(f.fn(x)))


# --- equality --------------------------------------------------------------


def find_witness(a: Cont, b: Cont) -> Pred | None:
    """A predicate on which ``a`` and ``b`` disagree, or None."""
    check_space(a.base, b.base, "cont_eq")
    for h in enumerate_predicates(a.base):
        if a(h) != b(h):
            return h
    return None


def cont_eq(a: Cont, b: Cont) -> bool:
    return find_witness(a, b) is None


def tabulate(base: Any, table: int) -> Cont:
    """The continuation whose truth table over predicate bit patterns is
    ``table`` (bit ``k`` set iff the predicate with bits ``k`` is accepted)."""
    xs = tuple(base.elements())

    def run(h):
        k = 0
        for i, x in enumerate(xs):
            if h(x):
                k |= 1 << i
        return table >> k & 1

    return Cont(base, run)


def all_conts(base: Any) -> list[Cont]:
    """Every element of C(base) for a tiny finite base (2**(2**n) of them)."""
    if base.size > 2:
        raise ValueError(f"C({base!r}) is too large to enumerate")
    return [tabulate(base, t) for t in range(1 << (1 << base.size))]
