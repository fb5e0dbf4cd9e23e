"""In-situ computation trees for one-, two- and three-QP sentences.

Three strategies are implemented:

* ``C``: every inner node is a cps transform; the free choice of left or
  right cps at the top one (two QPs) or two (three QPs) nodes selects the
  reading.
* ``D``: the C trees plus two shift trees for three QPs, whose root is
  a plain right evaluation of Q1 against ``sh_r`` or ``sh_l``.
* ``E``: one shift operation per permutation of the QPs.

Core evaluators work on already-denoted quantifiers (surface order) and the
verb relation as a predicate on the flat product ``X1 x ... x Xn``.  Before
lifting, a ditransitive relation is regrouped onto ``(X1 x X3) x X2`` so
that its direct-object coordinate comes last.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Callable, Sequence

from contscope.cont import (
    Cont,
    cps,
    cps_l,
    eps_l,
    eps_r,
    eta,
    run_truth,
)
from contscope.model import Rel, restrict_relation
from contscope.quant import Determiner, denote
from contscope.spaces import ContSpace, Pred, PredSpace, Product, Sort, SpaceMismatch, intern_space

SHAPES = {"S1": 1, "S2": 2, "S3": 3}
STRATEGIES = ("C", "D", "E")

Reading = tuple[int, ...]
Evaluator = Callable[[Sequence[Cont], Pred], bool]


class ReadingError(RuntimeError):
    """A strategy variant does not correspond to exactly one reading."""


@dataclass(frozen=True)
class SurfaceTree:
    qps: tuple[tuple[Determiner, Sort], ...]
    verb: Rel

    def __post_init__(self):
        if not 1 <= len(self.qps) <= 3:
            raise ValueError(f"a surface tree has 1 to 3 QPs, got {len(self.qps)}")
        if self.verb.arity != len(self.qps):
            raise ValueError(f"verb {self.verb.name} has arity {self.verb.arity}, sentence has {len(self.qps)} QPs")

    @property
    def shape(self) -> str:
        return f"S{len(self.qps)}"

    @property
    def sorts(self) -> tuple[Sort, ...]:
        return tuple(s for _, s in self.qps)

    def quantifiers(self) -> tuple[Cont, ...]:
        return tuple(denote(d, s) for d, s in self.qps)

    def relation(self) -> Pred:
        return restrict_relation(self.verb, self.sorts).to_pred()


@dataclass(frozen=True)
class StrategyVariant:
    """One computation tree: ``kind`` is C, D_base, D_shl, D_shr or E."""

    kind: str
    eps: tuple[str, ...] = ()
    sigma: Reading = ()

    @property
    def strategy(self) -> str:
        return self.kind[0]

    @property
    def label(self) -> str:
        if self.kind == "C":
            return ",".join(self.eps) or "-"
        if self.kind == "D_base":
            return "base:" + (",".join(self.eps) or "-")
        if self.kind == "D_shl":
            return "shl"
        if self.kind == "D_shr":
            return "shr"
        return ",".join(map(str, self.sigma))

    def check_shape(self, n: int) -> None:
        if self.kind in ("C", "D_base") and len(self.eps) != n - 1:
            raise ValueError(f"variant {self.label} needs {n - 1} cps choices for {n} QPs")
        if self.kind in ("D_shl", "D_shr") and n != 3:
            raise ValueError(f"variant {self.label} exists only for three QPs")
        if self.kind == "E" and sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError(f"variant {self.label} is not a permutation of 1..{n}")


def reading_label(sigma: Reading) -> str:
    return ">".join(map(str, sigma))


def parse_reading(text: str) -> Reading:
    try:
        sigma = tuple(int(p) for p in text.replace(">", ",").split(","))
    except ValueError:
        raise ValueError(f"bad permutation {text!r}") from None
    if sorted(sigma) != list(range(1, len(sigma) + 1)) or not 1 <= len(sigma) <= 3:
        raise ValueError(f"bad permutation {text!r}")
    return sigma


def variants(strategy: str, shape: str) -> list[StrategyVariant]:
    n = SHAPES[shape]
    eps_vectors = [tuple(v) for v in itertools.product("lr", repeat=n - 1)]
    if strategy == "C":
        return [StrategyVariant("C", e) for e in eps_vectors]
    if strategy == "D":
        out = [StrategyVariant("D_base", e) for e in eps_vectors]
        if n == 3:
            out += [StrategyVariant("D_shl"), StrategyVariant("D_shr")]
        return out
    if strategy == "E":
        return [StrategyVariant("E", sigma=p) for p in itertools.permutations(range(1, n + 1))]
    raise ValueError(f"unknown strategy {strategy!r}")


def parse_variant(strategy: str, text: str, shape: str) -> StrategyVariant:
    n = SHAPES[shape]
    text = text.strip()
    if strategy == "C":
        v = StrategyVariant("C", _eps_vector(text))
    elif strategy == "D":
        if text in ("shl", "shr"):
            v = StrategyVariant("D_" + text)
        elif text.startswith("base:"):
            v = StrategyVariant("D_base", _eps_vector(text[5:]))
        else:
            raise ValueError(f"D variant must be base:EPS, shl or shr, got {text!r}")
    elif strategy == "E":
        v = StrategyVariant("E", sigma=parse_reading(text))
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    v.check_shape(n)
    return v


def _eps_vector(text: str) -> tuple[str, ...]:
    if text in ("", "-"):
        return ()
    parts = tuple(p.strip() for p in text.split(","))
    if any(p not in ("l", "r") for p in parts):
        raise ValueError(f"cps choices must be l or r, got {text!r}")
    return parts


# --- lifting ---------------------------------------------------------------

S2_GROUPING = (0, 1)
S3_GROUPING = ((0, 2), 1)


def _grouped_space(sorts: Sequence[Sort], grouping) -> Any:
    if isinstance(grouping, int):
        return sorts[grouping]
    return Product(tuple(_grouped_space(sorts, g) for g in grouping))


def _flat_positions(grouping) -> list[int]:
    if isinstance(grouping, int):
        return [grouping]
    return [i for g in grouping for i in _flat_positions(g)]


@lru_cache(maxsize=4096)
def grouped_pred(rel: Pred, grouping) -> Pred:
    """Regroup a predicate on the flat product X1 x ... x Xn.

    ``grouping`` is a nested tuple of coordinate positions; ``((0, 2), 1)``
    gives the space ``(X1 x X3) x X2`` with elements ``((x1, x3), x2)``.
    """
    flat = rel.space
    sorts = flat.factors if isinstance(flat, Product) else (flat,)
    order = _flat_positions(grouping)
    if sorted(order) != list(range(len(sorts))):
        raise ValueError(f"grouping {grouping!r} does not cover {len(sorts)} coordinates")
    target = intern_space(_grouped_space(sorts, grouping))
    if isinstance(grouping, int):
        return Pred(target, rel.bits)

    def leaves(g, x, out):
        if isinstance(g, int):
            out[g] = x
        else:
            for gi, xi in zip(g, x):
                leaves(gi, xi, out)

    bits = 0
    for i, t in enumerate(target.elements()):
        out = [None] * len(sorts)
        leaves(grouping, t, out)
        if rel(tuple(out)):
            bits |= 1 << i
    return Pred(target, bits)


def _default_grouping(n: int):
    return {1: 0, 2: S2_GROUPING, 3: S3_GROUPING}[n]


def lift_pred(rel: Pred, n: int) -> Cont:
    p = grouped_pred(rel, _default_grouping(n))
    return eta(p, intern_space(PredSpace(p.space)))


def lift_rel(r: Rel, grouping=None) -> Cont:
    """Lift a relation to a continuation at predicate type, eta(P)."""
    if grouping is None:
        grouping = _default_grouping(r.arity)
    if sorted(_flat_positions(grouping)) != list(range(r.arity)):
        raise ValueError(f"grouping {grouping!r} does not match arity {r.arity}")
    p = grouped_pred(r.to_pred(), grouping)
    return eta(p, PredSpace(p.space))


# --- typed operations per tuple of sorts -----------------------------------


class _Ops:
    """Evaluation morphisms at the typings used by the C trees."""

    def __init__(self, sorts: tuple[Sort, ...]):
        n = len(sorts)
        x1 = sorts[0]
        self.ev_r_x1 = eps_r("scalar", x1)
        self.root_r = eps_r("scalar", ContSpace(x1))
        if n == 2:
            # P(X1 x X2) x X2 -> P(X1)
            self.inner_l = eps_l("indexed", x1, sorts[1])
        elif n == 3:
            x2, x3 = sorts[1], sorts[2]
            # P((X1 x X3) x X2) x X2 -> P(X1 x X3)
            self.inner_l = eps_l("indexed", Product((x1, x3)), x2)
            # P(X1 x X3) x X3 -> P(X1)
            self.mid_l = eps_l("indexed", x1, x3)


class _ShiftOps:
    """Morphisms used by the shift operations over P(X1 x Xk) and C(Xk)."""

    def __init__(self, x1: Sort, xk: Sort):
        self.ev_r_x1 = eps_r("scalar", x1)
        self.ev_l_x1 = eps_l("scalar", x1)
        self.ev_r_xk = eps_r("scalar", xk)
        self.ev_l_xk = eps_l("scalar", xk)
        # P(X1 x Xk) x Xk -> P(X1) and its mirror
        self.slice_l = eps_l("indexed", x1, xk)
        self.slice_r = eps_r("indexed", x1, xk)
        # slices at a fixed X1 coordinate, landing in P(Xk)
        self.by_x1_l = eps_l("indexed", xk, x1, index_first=True)
        self.by_x1_r = eps_r("indexed", xk, x1, index_first=True)


@lru_cache(maxsize=256)
def _ops(sorts: tuple[Sort, ...]) -> _Ops:
    return _Ops(sorts)


@lru_cache(maxsize=256)
def _shift_ops(x1: Sort, xk: Sort) -> _ShiftOps:
    return _ShiftOps(x1, xk)


def _sorts_of(quants: Sequence[Cont]) -> tuple[Sort, ...]:
    return tuple(q.base for q in quants)


# --- strategy C ------------------------------------------------------------


def inner_node(lifted: Cont, q2: Cont, ops: _Ops, qmark: str = "l") -> Cont:
    """cps?(eps_l at X2)(Lift P, Q2), the V' node shared by every tree."""
    return cps(qmark, ops.inner_l)(lifted, q2)


def c_tree(quants: Sequence[Cont], rel: Pred, eps: Sequence[str], qmark: str = "l") -> bool:
    n = len(quants)
    if len(eps) != n - 1:
        raise ValueError(f"{n} QPs need {n - 1} cps choices, got {len(eps)}")
    ops = _ops(_sorts_of(quants))
    lifted = lift_pred(rel, n)
    if n == 1:
        return run_truth(cps(qmark, ops.ev_r_x1)(quants[0], lifted))
    inner = inner_node(lifted, quants[1], ops, qmark)
    if n == 3:
        inner = cps(eps[1], ops.mid_l)(inner, quants[2])
    return run_truth(cps(eps[0], ops.ev_r_x1)(quants[0], inner))


# --- shift operations ------------------------------------------------------
#
# Each takes S2 on P(X1 x X3) (or S on P(X1 x X2)) and S3 on X3, and returns
# a predicate on C(X1).  They are written out one by one, all with cps_l.


def _ops_for_shift(s2: Cont) -> _ShiftOps:
    space = s2.base
    if not (
        isinstance(space, PredSpace)
        and isinstance(space.domain, Product)
        and len(space.domain.factors) == 2
    ):
        raise SpaceMismatch(f"shift expects a continuation on P(X1 x Xk), got {space!r}")
    return _shift_ops(*space.domain.factors)


def sh_r(s2: Cont, s3: Cont) -> Callable[[Cont], bool]:
    """Reading QP3 > QP1 > QP2."""
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_r_xk)(s3, cps_l(o.by_x1_r)(s1, s2)))


def sh_l(s2: Cont, s3: Cont) -> Callable[[Cont], bool]:
    """Reading QP2 > QP1 > QP3."""
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_l_xk)(cps_l(o.by_x1_l)(s2, s1), s3))


def _sh12(s, s2):
    o = _ops_for_shift(s)
    return lambda s1: run_truth(cps_l(o.ev_r_x1)(s1, cps_l(o.slice_l)(s, s2)))


def _sh21(s, s2):
    o = _ops_for_shift(s)
    return lambda s1: run_truth(cps_l(o.ev_l_x1)(cps_l(o.slice_l)(s, s2), s1))


def _sh123(s2, s3):
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_r_x1)(s1, cps_l(o.slice_l)(s2, s3)))


def _sh321(s2, s3):
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_l_x1)(cps_l(o.slice_r)(s3, s2), s1))


def _sh132(s2, s3):
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_r_x1)(s1, cps_l(o.slice_r)(s3, s2)))


def _sh231(s2, s3):
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_l_x1)(cps_l(o.slice_l)(s2, s3), s1))


def _sh312(s2, s3):
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_r_xk)(s3, cps_l(o.by_x1_r)(s1, s2)))


def _sh213(s2, s3):
    o = _ops_for_shift(s2)
    return lambda s1: run_truth(cps_l(o.ev_l_xk)(cps_l(o.by_x1_l)(s2, s1), s3))


_SHIFTS = {
    (1, 2): _sh12,
    (2, 1): _sh21,
    (1, 2, 3): _sh123,
    (3, 2, 1): _sh321,
    (1, 3, 2): _sh132,
    (2, 3, 1): _sh231,
    (3, 1, 2): _sh312,
    (2, 1, 3): _sh213,
}


def sh_sigma(sigma: Reading, s: Cont, s_last: Cont) -> Callable[[Cont], bool]:
    try:
        op = _SHIFTS[tuple(sigma)]
    except KeyError:
        raise ValueError(f"no shift operation for permutation {sigma!r}") from None
    return op(s, s_last)


def _sh_single(lifted: Cont, ops: _Ops) -> Callable[[Cont], bool]:
    # one QP: the lifted predicate becomes a predicate on C(X)
    return lambda s1: run_truth(cps_l(ops.ev_r_x1)(s1, lifted))


# --- strategies D and E ----------------------------------------------------


def shift_tree(quants: Sequence[Cont], rel: Pred, shift, qmark: str = "l") -> bool:
    """Root eps_r at C(X1) applied to Q1 and shift(V' node, Q3)."""
    n = len(quants)
    ops = _ops(_sorts_of(quants))
    lifted = lift_pred(rel, n)
    if n == 3:
        k = shift(inner_node(lifted, quants[1], ops, qmark), quants[2])
    else:
        k = shift(lifted, quants[-1])
    return ops.root_r(quants[0], k)


def e_tree(quants: Sequence[Cont], rel: Pred, sigma: Reading, qmark: str = "l") -> bool:
    n = len(quants)
    if len(sigma) != n:
        raise ValueError(f"permutation {sigma!r} does not fit {n} QPs")
    if n == 1:
        ops = _ops(_sorts_of(quants))
        return ops.root_r(quants[0], _sh_single(lift_pred(rel, 1), ops))
    return shift_tree(quants, rel, lambda a, b: sh_sigma(sigma, a, b), qmark)


def evaluator(variant: StrategyVariant, qmark: str = "l") -> Evaluator:
    """The core evaluator (quantifiers, relation predicate) -> truth of a variant."""
    if variant.kind in ("C", "D_base"):
        eps = variant.eps
        return lambda quants, rel: c_tree(quants, rel, eps, qmark)
    if variant.kind == "D_shr":
        return lambda quants, rel: _need3(quants) and shift_tree(quants, rel, sh_r, qmark)
    if variant.kind == "D_shl":
        return lambda quants, rel: _need3(quants) and shift_tree(quants, rel, sh_l, qmark)
    if variant.kind == "E":
        sigma = variant.sigma
        return lambda quants, rel: e_tree(quants, rel, sigma, qmark)
    raise ValueError(f"unknown variant kind {variant.kind!r}")


def _need3(quants) -> bool:
    if len(quants) != 3:
        raise ValueError("shift trees of strategy D need three QPs")
    return True


def evaluate(tree: SurfaceTree, variant: StrategyVariant) -> bool:
    variant.check_shape(len(tree.qps))
    return evaluator(variant)(tree.quantifiers(), tree.relation())


def eval_C(tree: SurfaceTree, eps: Sequence[str]) -> bool:
    return evaluate(tree, StrategyVariant("C", tuple(eps)))


def eval_D(tree: SurfaceTree, variant: StrategyVariant) -> bool:
    if variant.strategy != "D":
        raise ValueError(f"{variant.label} is not a strategy D variant")
    return evaluate(tree, variant)


def eval_E(tree: SurfaceTree, sigma: Reading) -> bool:
    return evaluate(tree, StrategyVariant("E", sigma=tuple(sigma)))


# --- readings --------------------------------------------------------------

# Frozen result of readings_of at the default bounds; reproduced by the
# acceptance suite.
GOLDEN_READINGS: dict[str, dict[str, dict[str, Reading]]] = {
    "C": {
        "S1": {"-": (1,)},
        "S2": {"l": (1, 2), "r": (2, 1)},
        "S3": {"l,l": (1, 2, 3), "l,r": (1, 3, 2), "r,l": (2, 3, 1), "r,r": (3, 2, 1)},
    },
    "D": {
        "S1": {"base:-": (1,)},
        "S2": {"base:l": (1, 2), "base:r": (2, 1)},
        "S3": {
            "base:l,l": (1, 2, 3),
            "base:l,r": (1, 3, 2),
            "base:r,l": (2, 3, 1),
            "base:r,r": (3, 2, 1),
            "shl": (2, 1, 3),
            "shr": (3, 1, 2),
        },
    },
    "E": {
        shape: {",".join(map(str, p)): p for p in itertools.permutations(range(1, n + 1))}
        for shape, n in SHAPES.items()
    },
}


@lru_cache(maxsize=128)
def _variant_vector(kind: str, eps: tuple, sigma: Reading, shape: str, bounds, qmark: str) -> int:
    from contscope.oracle import truth_vector

    return truth_vector(evaluator(StrategyVariant(kind, eps, sigma), qmark), shape, bounds)


def variant_vector(variant: StrategyVariant, shape: str, bounds=None, qmark: str = "l") -> int:
    """The sweep truth vector of a variant (memoised; D_base shares the C trees)."""
    from contscope.oracle import Bounds

    kind = "C" if variant.kind == "D_base" else variant.kind
    return _variant_vector(kind, variant.eps, variant.sigma, shape, bounds or Bounds(), qmark)


def readings_of(strategy: str, shape: str, bounds=None, qmark: str = "l") -> dict[StrategyVariant, Reading]:
    """Match every variant to the unique reading it computes within bounds."""
    from contscope.oracle import Bounds, oracle_vectors

    bounds = bounds or Bounds()
    oracles = oracle_vectors(shape, bounds)
    out = {}
    for v in variants(strategy, shape):
        vec = variant_vector(v, shape, bounds, qmark)
        hits = [sigma for sigma, o in oracles.items() if o == vec]
        if not hits:
            raise ReadingError(f"variant {v.label} of strategy {strategy} matches no reading")
        if len(hits) > 1:
            labels = ", ".join(map(reading_label, hits))
            raise ReadingError(f"variant {v.label} of strategy {strategy} is ambiguous between {labels}")
        out[v] = hits[0]
    return out
