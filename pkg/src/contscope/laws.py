"""Pointwise checks of the monad and strength coherence laws for C.

Each law is checked extensionally at the outermost codomain: both sides
are continuations on some finite set, compared on all of its predicates.
Continuations on a 1- or 2-element set are enumerated exhaustively;
higher-order inhabitants (elements of C(C(X)) and C(C(C(X)))) are seeded
random decision procedures that probe their argument at a few random
points.

The operations under test are passed in as :class:`MonadOps`, so a
corrupted operation can be injected and must be caught.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, replace
from typing import Any, Callable, Iterable, Iterator

from contscope import cont as C
from contscope.cont import Cont, Morphism, all_conts, find_witness, flatten, tabulate
from contscope.spaces import ContSpace, Product, Sort


@dataclass(frozen=True)
class MonadOps:
    eta: Callable[[Any, Any], Cont] = C.eta
    mu: Callable[[Cont], Cont] = C.mu
    cmap: Callable[[Morphism, Cont], Cont] = C.cmap
    st_l: Callable[[Cont, Any, Any], Cont] = C.st_l
    st_r: Callable[[Any, Any, Cont], Cont] = C.st_r


DEFAULT_OPS = MonadOps()


@dataclass(frozen=True)
class LawReport:
    law: str
    sizes: str
    instances: int
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.counterexample is None

    @property
    def status(self) -> str:
        return "pass" if self.passed else "fail"


def _set(name: str, n: int) -> Sort:
    return Sort(name, tuple(f"{name.lower()}{i + 1}" for i in range(n)))


class _Check:
    """Accumulates instances of one law and stops at the first failure."""

    def __init__(self, law: str):
        self.law = law
        self.count = 0
        self.sizes: set[int] = set()
        self.failure: str | None = None

    def compare(self, lhs: Callable[[], Cont], rhs: Callable[[], Cont], where: str, size: int) -> None:
        if self.failure is not None:
            return
        self.count += 1
        self.sizes.add(size)
        try:
            a, b = lhs(), rhs()
            w = find_witness(a, b)
        except Exception as exc:  # a corrupted operation may break typing
            self.failure = f"{where}: {type(exc).__name__}: {exc}"
            return
        if w is not None:
            self.failure = f"{where}: sides differ on predicate {w!r} ({a(w)} vs {b(w)})"

    def report(self) -> LawReport:
        sizes = ",".join(map(str, sorted(self.sizes))) or "-"
        return LawReport(self.law, sizes, self.count, self.failure)


# --- samplers --------------------------------------------------------------


def random_cont(base: Any, rng: random.Random, probes: int = 3) -> Cont:
    """A seeded pseudo-random element of C(base)."""
    if getattr(base, "finite", False):
        return tabulate(base, rng.getrandbits(1 << base.size))
    if isinstance(base, ContSpace):
        points = [random_cont(base.base, rng, probes) for _ in range(probes)]
        table = rng.getrandbits(1 << probes)

        def run(p):
            k = 0
            for i, pt in enumerate(points):
                if p(pt):
                    k |= 1 << i
            return table >> k & 1

        return Cont(base, run)
    raise ValueError(f"cannot sample continuations on {base!r}")


def _conts(space: Sort, rng: random.Random, samples: int) -> list[Cont]:
    if space.size <= 2:
        return all_conts(space)
    return [random_cont(space, rng) for _ in range(samples)]


def _sizes(max_size: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(1, max_size + 1), repeat=k)


# --- monad laws ------------------------------------------------------------


def check_monad_laws(max_size: int = 2, samples: int = 200, seed: int = 0, ops: MonadOps = DEFAULT_OPS) -> list[LawReport]:
    rng = random.Random(seed)
    left = _Check("monad.unit.left")
    right = _Check("monad.unit.right")
    assoc = _Check("monad.associativity")

    for n in range(1, min(max_size, 3) + 1):
        X = _set("X", n)
        CX = ContSpace(X)
        eta_x = Morphism(lambda x, X=X: ops.eta(x, X), (X,), CX, "eta")
        for i, q in enumerate(_conts(X, rng, samples)):
            where = f"|X|={n}, continuation #{i}"
            # mu . eta_C = id
            left.compare(lambda: ops.mu(ops.eta(q, CX)), lambda: q, where, n)
            # mu . C(eta) = id
            right.compare(lambda: ops.mu(ops.cmap(eta_x, q)), lambda: q, where, n)

    for n in range(1, min(max_size, 2) + 1):
        X = _set("X", n)
        CX, C2X = ContSpace(X), ContSpace(ContSpace(X))
        mu_x = Morphism(ops.mu, (C2X,), CX, "mu")
        for i in range(samples):
            F3 = random_cont(C2X, rng)
            where = f"|X|={n}, sample #{i}"
            assoc.compare(
                lambda: ops.mu(ops.mu(F3)),
                lambda: ops.mu(ops.cmap(mu_x, F3)),
                where,
                n,
            )
    return [left.report(), right.report(), assoc.report()]


# --- strength laws ---------------------------------------------------------


def _flat(q: Cont, ops: MonadOps) -> Cont:
    return ops.cmap(flatten(q.base), q)


def check_strength_laws(max_size: int = 2, samples: int = 200, seed: int = 0, ops: MonadOps = DEFAULT_OPS) -> list[LawReport]:
    rng = random.Random(seed)
    max_size = min(max_size, 2)
    checks = {
        name: _Check(name)
        for name in (
            "strength.left.triangle",
            "strength.left.unit",
            "strength.left.mult",
            "strength.right.triangle",
            "strength.right.unit",
            "strength.right.mult",
            "strength.bistrong",
        )
    }

    for nx, ny, nz in _sizes(max_size, 3):
        X, Y, Z = _set("X", nx), _set("Y", ny), _set("Z", nz)
        YZ, XY = Product((Y, Z)), Product((X, Y))
        size = max(nx, ny, nz)
        tag = f"|X|={nx},|Y|={ny},|Z|={nz}"
        for i, s in enumerate(all_conts(X)):
            for y, z in itertools.product(Y.members, Z.members):
                where = f"{tag}, continuation #{i}, y={y}, z={z}"
                checks["strength.left.triangle"].compare(
                    lambda: _flat(ops.st_l(s, (y, z), YZ), ops),
                    lambda: _flat(ops.st_l(ops.st_l(s, y, Y), z, Z), ops),
                    where,
                    size,
                )
        for i, t in enumerate(all_conts(Z)):
            for x, y in itertools.product(X.members, Y.members):
                where = f"{tag}, continuation #{i}, x={x}, y={y}"
                checks["strength.right.triangle"].compare(
                    lambda: _flat(ops.st_r((x, y), XY, t), ops),
                    lambda: _flat(ops.st_r(x, X, ops.st_r(y, Y, t)), ops),
                    where,
                    size,
                )
        for i, t in enumerate(all_conts(Y)):
            for x, z in itertools.product(X.members, Z.members):
                where = f"{tag}, continuation #{i}, x={x}, z={z}"
                checks["strength.bistrong"].compare(
                    lambda: _flat(ops.st_r(x, X, ops.st_l(t, z, Z)), ops),
                    lambda: _flat(ops.st_l(ops.st_r(x, X, t), z, Z), ops),
                    where,
                    size,
                )

    for nx, ny in _sizes(max_size, 2):
        X, Y = _set("X", nx), _set("Y", ny)
        XY = Product((X, Y))
        size = max(nx, ny)
        tag = f"|X|={nx},|Y|={ny}"
        for x, y in itertools.product(X.members, Y.members):
            where = f"{tag}, x={x}, y={y}"
            checks["strength.left.unit"].compare(
                lambda: ops.st_l(ops.eta(x, X), y, Y), lambda: ops.eta((x, y), XY), where, size
            )
            checks["strength.right.unit"].compare(
                lambda: ops.st_r(x, X, ops.eta(y, Y)), lambda: ops.eta((x, y), XY), where, size
            )
        lift_l = Morphism(
            lambda pair: ops.st_l(pair[0], pair[1], Y),
            (Product((ContSpace(X), Y)),),
            ContSpace(XY),
            "st_l",
        )
        lift_r = Morphism(
            lambda pair: ops.st_r(pair[0], X, pair[1]),
            (Product((X, ContSpace(Y))),),
            ContSpace(XY),
            "st_r",
        )
        for i in range(samples):
            F = random_cont(ContSpace(X), rng)
            G = random_cont(ContSpace(Y), rng)
            for y in Y.members:
                checks["strength.left.mult"].compare(
                    lambda: ops.st_l(ops.mu(F), y, Y),
                    lambda: ops.mu(ops.cmap(lift_l, ops.st_l(F, y, Y))),
                    f"{tag}, sample #{i}, y={y}",
                    size,
                )
            for x in X.members:
                checks["strength.right.mult"].compare(
                    lambda: ops.st_r(x, X, ops.mu(G)),
                    lambda: ops.mu(ops.cmap(lift_r, ops.st_r(x, X, G))),
                    f"{tag}, sample #{i}, x={x}",
                    size,
                )
    return [c.report() for c in checks.values()]


def check_generic_strength(max_size: int = 2, ops: MonadOps = DEFAULT_OPS) -> LawReport:
    """The concrete strengths agree with C(l_y) and C(r_x), where
    l_y(x) = (x, y) and r_x(y) = (x, y)."""
    check = _Check("strength.generic")
    for nx, ny in _sizes(min(max_size, 2), 2):
        X, Y = _set("X", nx), _set("Y", ny)
        XY = Product((X, Y))
        size = max(nx, ny)
        for y in Y.members:
            l_y = Morphism(lambda x, y=y: (x, y), (X,), XY, "l_y")
            for i, q in enumerate(all_conts(X)):
                check.compare(
                    lambda: ops.st_l(q, y, Y), lambda: ops.cmap(l_y, q),
                    f"|X|={nx},|Y|={ny}, left, continuation #{i}, y={y}", size,
                )
        for x in X.members:
            r_x = Morphism(lambda y, x=x: (x, y), (Y,), XY, "r_x")
            for i, q in enumerate(all_conts(Y)):
                check.compare(
                    lambda: ops.st_r(x, X, q), lambda: ops.cmap(r_x, q),
                    f"|X|={nx},|Y|={ny}, right, continuation #{i}, x={x}", size,
                )
    return check.report()


def check_all(max_size: int = 2, samples: int = 200, seed: int = 0, ops: MonadOps = DEFAULT_OPS) -> list[LawReport]:
    return [
        *check_monad_laws(max_size, samples, seed, ops),
        *check_strength_laws(max_size, samples, seed, ops),
        check_generic_strength(max_size, ops),
    ]


def format_reports(reports: Iterable[LawReport]) -> str:
    rows = [("law", "sizes", "instances", "status")]
    for r in reports:
        rows.append((r.law, r.sizes, str(r.instances), r.status))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in rows]
    for r in reports:
        if not r.passed:
            lines.append(f"counterexample {r.law}: {r.counterexample}")
    return "\n".join(lines) + "\n"


# --- fault injection -------------------------------------------------------


def _bad_eta(x, base):
    return Cont(base, lambda h: not h(x))


def _bad_mu(F):
    inner = F.base.base
    return Cont(inner, lambda h: F(lambda D: D(lambda x: not h(x))))


def _bad_st_l(n, y, y_space):
    # ignores y in favour of the first element of Y
    y0 = next(iter(y_space.elements()))
    return Cont(Product((n.base, y_space)), lambda c: n(lambda x: c((x, y0))))


def _bad_st_r(x, x_space, m):
    x0 = next(iter(x_space.elements()))
    return Cont(Product((x_space, m.base)), lambda c: m(lambda y: c((x0, y))))


def _swapped_st_r(x, x_space, m):
    # the left strength's procedure under the right strength's typing
    return Cont(Product((x_space, m.base)), C.st_l(m, x, x_space)._run)


MUTANTS: dict[str, MonadOps] = {
    "eta": replace(DEFAULT_OPS, eta=_bad_eta),
    "mu": replace(DEFAULT_OPS, mu=_bad_mu),
    "st_l": replace(DEFAULT_OPS, st_l=_bad_st_l),
    "st_r": replace(DEFAULT_OPS, st_r=_bad_st_r),
    "st_r_swapped": replace(DEFAULT_OPS, st_r=_swapped_st_r),
}
