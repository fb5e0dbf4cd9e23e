import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from contscope.cont import all_conts, eta
from contscope.laws import random_cont
from contscope.model import Rel
from contscope.oracle import nested_scope, sweep_sorts
from contscope.quant import Determiner, catalog, denote
from contscope.spaces import Pred, PredSpace, Product, SpaceMismatch, Sort
from contscope.strategies import (
    GOLDEN_READINGS,
    S3_GROUPING,
    StrategyVariant,
    SurfaceTree,
    c_tree,
    e_tree,
    eval_C,
    eval_D,
    eval_E,
    evaluator,
    grouped_pred,
    lift_rel,
    parse_reading,
    parse_variant,
    reading_label,
    sh_l,
    sh_r,
    sh_sigma,
    shift_tree,
    variants,
)
from helpers import load

S2_SORTS = sweep_sorts(2, 2)
S3_SORTS = sweep_sorts(3, 2)
POOLS2 = [[q for _, q in catalog(s)] for s in S2_SORTS]
POOLS3 = [[q for _, q in catalog(s)] for s in S3_SORTS]
DOM2 = Product(S2_SORTS)
DOM3 = Product(S3_SORTS)


def _golden(strategy, shape):
    return {parse_variant(strategy, lab, shape): sigma for lab, sigma in GOLDEN_READINGS[strategy][shape].items()}


@st.composite
def s2_instances(draw):
    quants = tuple(draw(st.sampled_from(pool)) for pool in POOLS2)
    return quants, Pred(DOM2, draw(st.integers(0, (1 << DOM2.size) - 1)))


@st.composite
def s3_instances(draw):
    quants = tuple(draw(st.sampled_from(pool)) for pool in POOLS3)
    return quants, Pred(DOM3, draw(st.integers(0, (1 << DOM3.size) - 1)))


@given(s2_instances())
def test_every_s2_variant_follows_its_reading(inst):
    quants, rel = inst
    for strategy in "CDE":
        for v, sigma in _golden(strategy, "S2").items():
            assert evaluator(v)(quants, rel) == nested_scope(sigma, quants, rel)


@settings(max_examples=60)
@given(s3_instances())
def test_every_s3_variant_follows_its_reading(inst):
    quants, rel = inst
    for strategy in "CDE":
        for v, sigma in _golden(strategy, "S3").items():
            assert evaluator(v)(quants, rel) == nested_scope(sigma, quants, rel), v.label


@settings(max_examples=40)
@given(s3_instances())
def test_qmark_swap_is_sound(inst):
    quants, rel = inst
    for v in variants("D", "S3") + variants("E", "S3"):
        assert evaluator(v, "l")(quants, rel) == evaluator(v, "r")(quants, rel)


def test_girls_boys_by_hand():
    m = load("girls_boys")
    tree = SurfaceTree(
        ((Determiner("every"), m.sorts["girl"]), (Determiner("some"), m.sorts["boy"])),
        m.relations["likes"],
    )
    assert eval_C(tree, "l") is True
    assert eval_C(tree, "r") is False
    assert eval_E(tree, (1, 2)) is True
    assert eval_E(tree, (2, 1)) is False


def test_single_qp():
    kid = Sort("kid", ("k1", "k2"))
    entered = Rel("entered", 1, (kid,), frozenset({("k1",)}))
    for det, want in [("every", False), ("some", True), ("no", False)]:
        tree = SurfaceTree(((Determiner(det), kid),), entered)
        assert eval_C(tree, ()) is want
        assert eval_D(tree, StrategyVariant("D_base")) is want
        assert eval_E(tree, (1,)) is want


def _random_s2(rng, x1, x3):
    return random_cont(PredSpace(Product((x1, x3))), rng)


@pytest.mark.parametrize("named, general", [((3, 1, 2), sh_r), ((2, 1, 3), sh_l)])
def test_named_shifts_equal_general_ones_extensionally(named, general):
    x1, x3 = Sort("x1", ("a1", "a2")), Sort("x3", ("c1", "c2"))
    rng = random.Random(7)
    s1s, s3s = all_conts(x1), all_conts(x3)
    for _ in range(25):
        s2 = _random_s2(rng, x1, x3)
        for s3 in s3s:
            a, b = sh_sigma(named, s2, s3), general(s2, s3)
            assert all(a(s1) == b(s1) for s1 in s1s)


def test_shift_rejects_wrong_space():
    x = Sort("x", ("a",))
    with pytest.raises(SpaceMismatch):
        sh_r(eta("a", x), eta("a", x))
    with pytest.raises(ValueError):
        sh_sigma((1, 1, 2), None, None)


def test_grouping_puts_x2_last():
    rel = Pred.from_elements(DOM3, [("a1", "b2", "c1")])
    g = grouped_pred(rel, S3_GROUPING)
    assert g.members() == [(("a1", "c1"), "b2")]
    assert lift_rel(Rel.from_pred("r", S3_SORTS, rel)).base == PredSpace(g.space)


def test_variant_labels_and_parsing():
    assert [v.label for v in variants("C", "S3")] == ["l,l", "l,r", "r,l", "r,r"]
    assert [v.label for v in variants("D", "S3")][-2:] == ["shl", "shr"]
    assert len(variants("E", "S3")) == 6
    assert parse_variant("D", "base:l,r", "S3") == StrategyVariant("D_base", ("l", "r"))
    assert parse_variant("C", "-", "S1") == StrategyVariant("C", ())
    for strategy, text, shape in [("C", "l", "S3"), ("D", "shl", "S2"), ("E", "1,2", "S3"), ("C", "x", "S2")]:
        with pytest.raises(ValueError):
            parse_variant(strategy, text, shape)


def test_reading_labels():
    assert reading_label((3, 1, 2)) == "3>1>2"
    assert parse_reading("3>1>2") == parse_reading("3,1,2") == (3, 1, 2)
    with pytest.raises(ValueError):
        parse_reading("1,1")


def test_surface_tree_arity_check():
    s = Sort("s", ("a",))
    with pytest.raises(ValueError):
        SurfaceTree(((Determiner("every"), s),), Rel("r", 2, (s, s)))


def test_c_and_e_trees_agree_on_teachers_fixture():
    m = load("teachers")
    quants = (
        denote(Determiner("some"), m.sorts["teacher"]),
        denote(Determiner("every"), m.sorts["student"]),
        denote(Determiner("most"), m.sorts["book"]),
    )
    rel = m.relations["gave"].to_pred()
    for eps, sigma in GOLDEN_READINGS["C"]["S3"].items():
        assert c_tree(quants, rel, eps.split(",")) == e_tree(quants, rel, sigma)
    assert shift_tree(quants, rel, sh_r) == nested_scope((3, 1, 2), quants, rel)
    assert shift_tree(quants, rel, sh_l) == nested_scope((2, 1, 3), quants, rel)
