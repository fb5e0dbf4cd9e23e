"""Shared test utilities: fixture loading and a seeded random model generator."""

from __future__ import annotations

import itertools
import random
from pathlib import Path

from contscope.model import MAX_UNIVERSE, LexEntry, Model, Rel, parse_model
from contscope.spaces import MAX_REL_DOMAIN, Sort

FIXTURES = Path(__file__).parent / "fixtures"

DETS = ("every", "some", "no", "most", "at-least-2", "exactly-1", "exactly-3")


def load(name: str) -> Model:
    return parse_model((FIXTURES / f"{name}.model").read_text())


def random_model(rng: random.Random) -> Model:
    """A valid model within the caps; relation tuples may fall outside the
    column sorts, as the file format allows."""
    n = rng.randint(0, MAX_UNIVERSE)
    universe = tuple(f"e{i}" for i in range(n))
    sorts = {}
    for k in range(rng.randint(0, 3) if n else 0):
        chosen = {e for e in universe if rng.random() < 0.5}
        sorts[f"s{k}"] = Sort(f"s{k}", tuple(e for e in universe if e in chosen))
    relations = {}
    if sorts:
        for k in range(rng.randint(0, 3)):
            arity = rng.randint(1, 3)
            cols = tuple(rng.choice(list(sorts.values())) for _ in range(arity))
            size = 1
            for c in cols:
                size *= c.size
            if size > MAX_REL_DOMAIN:
                continue
            tuples = frozenset(t for t in itertools.product(universe, repeat=arity) if rng.random() < 0.1)
            relations[f"r{k}"] = Rel(f"r{k}", arity, cols, tuples)
    lexicon = {}
    for name in sorts:
        if rng.random() < 0.7:
            lexicon[f"w{name}"] = LexEntry("noun", name)
    for name, r in relations.items():
        cat = {1: "v", 2: "vt", 3: "vdt"}[r.arity]
        lexicon[f"w{name}"] = LexEntry(cat, name)
    for d in rng.sample(DETS, rng.randint(0, len(DETS))):
        lexicon[d] = LexEntry("det", d)
    if universe and rng.random() < 0.5:
        lexicon["nm"] = LexEntry("det", "name:" + rng.choice(universe))
    return Model(universe, sorts, relations, lexicon)
