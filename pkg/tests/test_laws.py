import pytest

from contscope.laws import (
    DEFAULT_OPS,
    MUTANTS,
    check_all,
    check_monad_laws,
    check_strength_laws,
    format_reports,
)

LAW_NAMES = [
    "monad.unit.left",
    "monad.unit.right",
    "monad.associativity",
    "strength.left.triangle",
    "strength.left.unit",
    "strength.left.mult",
    "strength.right.triangle",
    "strength.right.unit",
    "strength.right.mult",
    "strength.bistrong",
    "strength.generic",
]


@pytest.fixture(scope="module")
def reports():
    return check_all(max_size=2, samples=50, seed=3)


def test_every_law_passes(reports):
    assert [r.law for r in reports] == LAW_NAMES
    failed = [(r.law, r.counterexample) for r in reports if not r.passed]
    assert failed == []
    assert all(r.instances > 0 for r in reports)


def test_report_table(reports):
    table = format_reports(reports)
    lines = table.splitlines()
    assert lines[0].split() == ["law", "sizes", "instances", "status"]
    assert len(lines) == 1 + len(LAW_NAMES)
    assert all(line.endswith("pass") for line in lines[1:])


def test_exhaustive_at_size_two():
    monad = {r.law: r for r in check_monad_laws(2, samples=10, seed=0)}
    # all 16 continuations on each of the 1- and 2-element sets
    assert monad["monad.unit.left"].instances == 4 + 16
    assert monad["monad.associativity"].sizes == "1,2"


@pytest.mark.parametrize("name", sorted(MUTANTS))
def test_mutant_is_caught(name):
    reports = check_all(max_size=2, samples=30, seed=3, ops=MUTANTS[name])
    failed = [r for r in reports if not r.passed]
    assert failed, f"mutant {name} survived"
    assert all(r.counterexample for r in failed)


def test_same_seed_same_report():
    a = format_reports(check_strength_laws(2, 20, 9, DEFAULT_OPS))
    b = format_reports(check_strength_laws(2, 20, 9, DEFAULT_OPS))
    assert a == b
