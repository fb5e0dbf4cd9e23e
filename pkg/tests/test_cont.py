import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from contscope.cont import (
    Cont,
    Morphism,
    all_conts,
    cmap,
    cont_eq,
    cps_l,
    cps_r,
    eps_l,
    eps_r,
    eta,
    find_witness,
    flatten,
    mos_l,
    mos_r,
    mu,
    permute,
    pred_pullback,
    pu_l,
    pu_r,
    run_truth,
    st_l,
    st_r,
    tabulate,
)
from contscope.quant import Determiner, denote
from contscope.spaces import TRUTH, ContSpace, Pred, PredSpace, Product, Sort, SpaceMismatch

GIRL = Sort("girl", ("a", "b"))
BOY = Sort("boy", ("c", "d"))
GB = Product((GIRL, BOY))
LIKES = Pred.from_elements(GB, [("a", "c"), ("b", "d")])
EVERY_GIRL = denote(Determiner("every"), GIRL)
SOME_BOY = denote(Determiner("some"), BOY)

conts_on_2 = st.integers(0, 15).map(lambda t: tabulate(GIRL, t))


def test_all_conts_count_and_distinct():
    cs = all_conts(GIRL)
    assert len(cs) == 16
    assert all(not cont_eq(p, q) for p, q in itertools.combinations(cs, 2))


def test_eta_applies_predicate_to_point():
    q = eta("a", GIRL)
    assert q(Pred.from_elements(GIRL, ["a"]))
    assert not q(Pred.from_elements(GIRL, ["b"]))
    with pytest.raises(SpaceMismatch):
        eta("c", GIRL)


def test_pu_fixes_scope():
    # every girl likes some boy: true; some boy is liked by every girl: false
    assert pu_l(EVERY_GIRL, SOME_BOY)(LIKES)
    assert not pu_r(EVERY_GIRL, SOME_BOY)(LIKES)


def test_cps_matches_pu_through_cmap():
    pair = Morphism(lambda x, y: (x, y), (GIRL, BOY), GB, "pair")
    assert cont_eq(cps_l(pair)(EVERY_GIRL, SOME_BOY), pu_l(EVERY_GIRL, SOME_BOY))
    assert cont_eq(cps_r(pair)(EVERY_GIRL, SOME_BOY), pu_r(EVERY_GIRL, SOME_BOY))


def test_cps_checks_argument_spaces():
    pair = Morphism(lambda x, y: (x, y), (GIRL, BOY), GB, "pair")
    with pytest.raises(SpaceMismatch):
        cps_l(pair)(SOME_BOY, EVERY_GIRL)


def test_eps_scalar():
    p = Pred.from_elements(GIRL, ["b"])
    assert eps_l("scalar", GIRL)(p, "b") is True
    assert eps_r("scalar", GIRL)("a", p) is False
    assert eps_l("scalar", GIRL).cod is TRUTH


def test_eps_indexed_slices():
    sl = eps_l("indexed", GIRL, BOY)
    assert sl(LIKES, "c") == Pred.from_elements(GIRL, ["a"])
    assert sl(LIKES, "d") == Pred.from_elements(GIRL, ["b"])
    assert sl.dom == (PredSpace(GB), BOY)
    # a plain callable is sliced the same way as a bit set
    assert sl(lambda t: t[0] == "b", "c") == Pred.from_elements(GIRL, ["b"])


def test_eps_indexed_transposed():
    bg = Product((BOY, GIRL))
    r = Pred.from_elements(bg, [("c", "b")])
    sl = eps_r("indexed", GIRL, BOY, index_first=True)
    assert sl("c", r) == Pred.from_elements(GIRL, ["b"])
    assert sl("d", r) == Pred(GIRL, 0)


def test_mos():
    assert mos_l("scalar")(EVERY_GIRL, Pred(GIRL, 3))
    # girls x such that some boy y has likes(x, y)
    assert mos_l("indexed", GIRL)(SOME_BOY, LIKES) == Pred(GIRL, 3)
    # girls x such that every boy y has likes(x, y)
    every_boy = denote(Determiner("every"), BOY)
    assert mos_r("indexed", GIRL)(LIKES, every_boy) == Pred(GIRL, 0)


def test_run_truth():
    assert run_truth(eta(True, TRUTH))
    assert not run_truth(eta(False, TRUTH))
    with pytest.raises(SpaceMismatch):
        run_truth(EVERY_GIRL)


def test_mu_flattens():
    F = eta(SOME_BOY, ContSpace(BOY))
    assert cont_eq(mu(F), SOME_BOY)
    with pytest.raises(SpaceMismatch):
        mu(SOME_BOY)


@given(conts_on_2)
def test_monad_unit_laws(q):
    eta_g = Morphism(lambda x: eta(x, GIRL), (GIRL,), ContSpace(GIRL), "eta")
    assert cont_eq(mu(eta(q, ContSpace(GIRL))), q)
    assert cont_eq(mu(cmap(eta_g, q)), q)


@given(conts_on_2, st.sampled_from(BOY.members))
def test_strengths_agree_with_pu(q, y):
    # st_l(q, y) = pu_l(q, eta y) and st_r(y, q) = pu_r(eta y, q)
    assert cont_eq(st_l(q, y, BOY), pu_l(q, eta(y, BOY)))
    bg = st_r(y, BOY, q)
    assert cont_eq(bg, pu_r(eta(y, BOY), q))


@given(conts_on_2, conts_on_2)
def test_pu_l_and_pu_r_agree_on_principal_filters(p, q):
    # when either side is a point, scope order cannot matter
    x = eta("a", GIRL)
    assert cont_eq(pu_l(x, q), pu_r(x, q))
    assert cont_eq(pu_l(p, x), pu_r(p, x))


def test_flatten_permute_pullback():
    nested = Product((Product((GIRL, BOY)), GIRL))
    f = flatten(nested)
    assert f((("a", "c"), "b")) == ("a", "c", "b")
    assert f.cod == Product((GIRL, BOY, GIRL))
    swap = permute(GB, (1, 0))
    assert swap(("a", "c")) == ("c", "a")
    back = pred_pullback(swap, Pred.from_elements(Product((BOY, GIRL)), [("c", "a")]))
    assert back == Pred.from_elements(GB, [("a", "c")])


def test_find_witness_reports_disagreement():
    w = find_witness(EVERY_GIRL, denote(Determiner("some"), GIRL))
    assert w is not None
    assert EVERY_GIRL(w) != denote(Determiner("some"), GIRL)(w)
    with pytest.raises(SpaceMismatch):
        find_witness(EVERY_GIRL, SOME_BOY)


def test_tabulate_reads_table_by_bit_pattern():
    q = tabulate(GIRL, 0b1000)  # accepts only the full predicate
    assert cont_eq(q, EVERY_GIRL)
    assert isinstance(q, Cont)
