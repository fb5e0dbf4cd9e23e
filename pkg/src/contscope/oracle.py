"""Ground-truth scope readings and bounded-model sweeps.

``scope_eval`` evaluates a reading the classical way: the quantifier named
first by the permutation takes widest scope, and the relation is consumed
by repeated indexed Mostowski applications from the innermost quantifier
outwards.  It shares no code with the cps trees.

Sweeps range over all relations on ``x1 x ... xn`` (sorts of a fixed size)
and all tuples of catalog quantifiers.  Instances are ordered canonically:
by relation cardinality, then by the sorted list of tuple indices, then by
the quantifier tuple in catalog order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

from contscope.cont import Cont, mos_l
from contscope.model import LexEntry, Model, Rel, VERB_ARITY, serialize_model
from contscope.quant import catalog_determiners, denote
from contscope.spaces import MAX_REL_DOMAIN, CapExceeded, Pred, Product, Sort, intern_space

Reading = tuple[int, ...]
Evaluator = Callable[[Sequence[Cont], Pred], bool]

SORT_NAMES = ("x1", "x2", "x3")
ELEMENT_PREFIXES = ("a", "b", "c")
VERB_CATEGORY = {1: "v", 2: "vt", 3: "vdt"}


@dataclass(frozen=True)
class ScopedQuery:
    sigma: Reading
    quants: tuple[Cont, ...]
    rel: Pred

    def __post_init__(self):
        n = len(self.quants)
        if sorted(self.sigma) != list(range(1, n + 1)):
            raise ValueError(f"{self.sigma!r} is not a permutation of the {n} QPs")


def scope_eval(q: ScopedQuery) -> bool:
    return nested_scope(q.sigma, q.quants, q.rel)


def nested_scope(sigma: Reading, quants: Sequence[Cont], rel: Pred) -> bool:
    """Q_s1(x_s1. Q_s2(x_s2. ... rel(x_1, ..., x_n)))."""
    n = len(quants)
    order = [i - 1 for i in sigma]
    spaces = [quants[i].base for i in order]

    def scoped(t: tuple) -> bool:
        # t lists the bound elements in scope order
        flat = [None] * n
        for i, x in zip(order, t):
            flat[i] = x
        return rel(tuple(flat) if n > 1 else flat[0])

    p: Callable[[tuple], bool] = scoped
    for k in range(n, 1, -1):
        single = k - 1 == 1
        rest = spaces[0] if single else intern_space(Product(tuple(spaces[: k - 1])))
        if single:
            c = lambda pair, p=p: p((pair[0], pair[1]))
        else:
            c = lambda pair, p=p: p(pair[0] + (pair[1],))
        sliced = mos_l("indexed", rest)(quants[order[k - 1]], c)
        p = (lambda t, s=sliced: s(t[0])) if single else sliced
    return mos_l("scalar")(quants[order[0]], lambda x: p((x,)))


def oracle_evaluator(sigma: Reading) -> Evaluator:
    sigma = tuple(sigma)
    return lambda quants, rel: nested_scope(sigma, quants, rel)


# --- sweeps ----------------------------------------------------------------


@dataclass(frozen=True)
class Bounds:
    """Sort size per QP; relations are enumerated fully unless ``samples``
    is set, in which case that many seeded random relations are drawn."""

    size: int = 2
    samples: int | None = None
    seed: int = 0


def sweep_sorts(n: int, size: int) -> tuple[Sort, ...]:
    return tuple(
        Sort(SORT_NAMES[i], tuple(f"{ELEMENT_PREFIXES[i]}{j + 1}" for j in range(size)))
        for i in range(n)
    )


def _domain(sorts: tuple[Sort, ...]):
    return sorts[0] if len(sorts) == 1 else Product(sorts)


def _canonical_key(bits: int) -> tuple[int, list[int]]:
    ones = [i for i in range(bits.bit_length()) if bits >> i & 1]
    return (len(ones), ones)


@dataclass(frozen=True)
class Space:
    """Everything a sweep ranges over for one shape and bounds."""

    sorts: tuple[Sort, ...]
    relations: tuple[Pred, ...]
    labels: tuple[tuple[str, ...], ...]
    quants: tuple[tuple[Cont, ...], ...]

    def __len__(self) -> int:
        return len(self.relations) * len(self.quants)

    def instance(self, k: int) -> "Instance":
        r, q = divmod(k, len(self.quants))
        return Instance(self.sorts, self.relations[r], self.labels[q], self.quants[q])


@lru_cache(maxsize=32)
def sweep_space(shape: str, bounds: Bounds = Bounds()) -> Space:
    n = int(shape[1:])
    if bounds.size < 1:
        raise ValueError("sweep sorts need at least one element")
    sorts = sweep_sorts(n, bounds.size)
    dom = intern_space(_domain(sorts))
    if bounds.samples is None:
        if dom.size > MAX_REL_DOMAIN:
            raise CapExceeded(
                f"{dom.size} tuples exceed the full-enumeration cap {MAX_REL_DOMAIN}; pass samples"
            )
        patterns = range(1 << dom.size)
    else:
        rng = random.Random(bounds.seed)
        patterns = {rng.getrandbits(dom.size) for _ in range(bounds.samples)}
    rels = tuple(Pred(dom, b) for b in sorted(patterns, key=_canonical_key))
    pools = [[(d.label, denote(d, s)) for d in catalog_determiners(s)] for s in sorts]
    combos = list(itertools.product(*pools))
    labels = tuple(tuple(lab for lab, _ in c) for c in combos)
    quants = tuple(tuple(q for _, q in c) for c in combos)
    return Space(sorts, rels, labels, quants)


def truth_vector(ev: Evaluator, shape: str, bounds: Bounds = Bounds()) -> int:
    """Bit k is the evaluator's verdict on instance k of the sweep."""
    sp = sweep_space(shape, bounds)
    vec = 0
    k = 0
    for rel in sp.relations:
        for qs in sp.quants:
            if ev(qs, rel):
                vec |= 1 << k
            k += 1
    return vec


@lru_cache(maxsize=64)
def _oracle_vector(shape: str, bounds: Bounds, sigma: Reading) -> int:
    return truth_vector(oracle_evaluator(sigma), shape, bounds)


def oracle_vectors(shape: str, bounds: Bounds = Bounds()) -> dict[Reading, int]:
    n = int(shape[1:])
    return {p: _oracle_vector(shape, bounds, p) for p in itertools.permutations(range(1, n + 1))}


@dataclass(frozen=True)
class Instance:
    sorts: tuple[Sort, ...]
    rel: Pred
    labels: tuple[str, ...]
    quants: tuple[Cont, ...]

    def to_model(self) -> Model:
        n = len(self.sorts)
        universe = tuple(e for s in self.sorts for e in s.members)
        rel = Rel.from_pred("r", self.sorts, self.rel)
        lexicon = {s.name: LexEntry("noun", s.name) for s in self.sorts}
        lexicon["r"] = LexEntry(VERB_CATEGORY[n], "r")
        for lab in self.labels:
            lexicon[_det_word(lab)] = LexEntry("det", lab)
        return Model(universe, {s.name: s for s in self.sorts}, {"r": rel}, lexicon)

    def sentence(self) -> str:
        words = []
        for i, (lab, s) in enumerate(zip(self.labels, self.sorts)):
            words.append(_det_word(lab) if lab.startswith("name:") else f"{lab} {s.name}")
            if i == 0:
                words.append("r")
        return " ".join(words)

    def describe(self) -> str:
        return f"# sentence: {self.sentence()}\n" + serialize_model(self.to_model())


def _det_word(label: str) -> str:
    return label[5:] if label.startswith("name:") else label


@dataclass(frozen=True)
class Verdict:
    equal: bool
    counterexample: Instance | None = None
    checked: int = 0


def equivalence_sweep(eval_a: Evaluator, eval_b: Evaluator, shape: str, bounds: Bounds = Bounds()) -> Verdict:
    """EQUAL, or the canonically first instance where the evaluators differ."""
    sp = sweep_space(shape, bounds)
    diff = truth_vector(eval_a, shape, bounds) ^ truth_vector(eval_b, shape, bounds)
    if not diff:
        return Verdict(True, None, len(sp))
    first = (diff & -diff).bit_length() - 1
    return Verdict(False, sp.instance(first), len(sp))


def find_instance(shape: str, bounds: Bounds, test: Callable[[Instance], bool]) -> Instance | None:
    """The canonically first instance satisfying ``test``."""
    sp = sweep_space(shape, bounds)
    for rel in sp.relations:
        for labels, qs in zip(sp.labels, sp.quants):
            inst = Instance(sp.sorts, rel, labels, qs)
            if test(inst):
                return inst
    return None


def separating_model_search(
    sigma_a: Reading,
    sigma_b: Reading,
    bounds: Bounds = Bounds(),
    labels: Sequence[str] | None = None,
) -> Instance | None:
    """Smallest instance on which readings ``sigma_a`` and ``sigma_b`` differ.

    ``labels`` optionally fixes the quantifier tuple (catalog labels, with
    ``name`` standing for the first element of the QP's sort).
    """
    if len(sigma_a) != len(sigma_b):
        raise ValueError("readings must have the same number of QPs")
    shape = f"S{len(sigma_a)}"
    a, b = tuple(sigma_a), tuple(sigma_b)
    if a == b:
        return None
    want = None if labels is None else tuple(labels)

    def test(inst: Instance) -> bool:
        if want is not None and tuple(_generic(l) for l in inst.labels) != want:
            return False
        return nested_scope(a, inst.quants, inst.rel) != nested_scope(b, inst.quants, inst.rel)

    return find_instance(shape, bounds, test)


def _generic(label: str) -> str:
    return "name" if label.startswith("name:") else label
