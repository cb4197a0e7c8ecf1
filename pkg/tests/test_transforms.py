import itertools

import pytest

from contours import setalg as sa
from contours.cascade import (
    LEAF, Ramp, Repeat, Seq, collapse, complete, decrease, destroy, format_schema, is_monotone,
)
from contours.generators import random_sets
from contours.oracle import FiniteModel, eval_point
from contours.ordinals import OMEGA, ordinal
from contours.transforms import (
    CollapseMap, RatRamp, RuleMap, Thm31Map, TransformError, block_map, collapse_map, const,
    decrease_rank, destroy_rank1, interpolate, iterate_image, parse_map_prefix, rel_black1,
    rel_decrease, same_leaves, subst, thm31_f, thm31_image_level, thm31_m, thm36_glued_map,
    validate_glue,
)

T2, T3 = complete(2), complete(3)
RAMP = Seq((), Ramp(0, 1))
LABELS = list(itertools.product(range(3), repeat=3))


def test_rule_map_longest_prefix():
    f = RuleMap([subst((0,), (5,)), const((0, 1), (9, 9)), subst((), (2,))])
    assert f((0, 3, 4)) == (5, 3, 4)
    assert f((0, 1, 7)) == (9, 9)
    assert f((1, 1)) == (2, 1, 1)
    assert block_map(3)((1, 2)) == (3, 1, 2)
    with pytest.raises(TransformError):
        RuleMap([subst((0,), (1,)), const((0,), (2,))])


def test_rule_map_pullback_pointwise():
    f = RuleMap([subst((0,), (1, 1)), const((2,), (0, 0)), subst((1, 2), (0,))])
    for e in random_sets(4, 80):
        pb = f.pullback(e)
        for x in LABELS:
            assert eval_point(pb, x) == eval_point(e, f(x))


def test_rule_map_push_pointwise():
    f = RuleMap([subst((0,), (1, 2)), subst((2,), (0,))])
    for e in random_sets(9, 60):
        image = f.push(e)
        for x in LABELS:
            if eval_point(e, x):
                assert eval_point(image, f(x))
    with pytest.raises(TransformError):
        RuleMap([const((0,), (1,))]).push(sa.ALL)


def test_map_text_round_trip():
    for f in [RuleMap([subst((0,), (1, 2)), const((3,), ())]), CollapseMap(T3), block_map(2)]:
        g, used = parse_map_prefix(f.text() + " tail")
        assert g == f and f.text() == g.text()


def test_collapse_map_values():
    f = collapse_map(T3)
    assert f((2, 3, 4)) == (2, 3, 0)
    g = collapse_map(Seq((T2,), Repeat(LEAF)))
    assert g((0, 1, 5)) == (0, 1, 0)
    assert g((4,)) == (4,)
    with pytest.raises(TransformError):
        collapse_map(complete(1))
    with pytest.raises(TransformError):
        collapse_map(T3, choice="last")


@pytest.mark.parametrize("c", [T2, T3, destroy(complete(3)), Seq((), Repeat(T2))],
                         ids=format_schema)
def test_collapse_pullback_and_push_against_model(c):
    f = CollapseMap(c)
    m = FiniteModel(c, 4)
    for e in random_sets(21, 40):
        pb = m.extension(f.pullback(e))
        assert m.labels(pb) == [x for x in m.leaves if eval_point(e, f(x))]
        image = {f(x) for x in m.labels(m.extension(e))}
        pushed = f.push(e)
        for p in set(m.leaves):
            if p in image:
                assert not sa.is_empty(sa.inter(pushed, sa.point(p)), c)


def test_thm31_map_examples():
    assert thm31_m((3, 1, 1)) == 1
    assert thm31_m((1, 2, 1)) == 2
    assert thm31_m((3, 4, 2)) == 3
    f = thm31_f(3)
    assert f((5, 1, 1)) == (1, 1, 1)
    assert f((1, 2, 1)) == (2, 1, 1)
    assert f((3, 4, 2)) == (3, 5, 1)
    assert f((7, 1, 1)) == (1, 1, 1)
    assert f((2, 3, 1)) == (3, 1, 1)
    assert f((4, 1, 2)) == (4, 2, 1)
    assert Thm31Map(3, zero_based=True)((2, 3, 1)) == (2, 4, 0)
    with pytest.raises(TransformError):
        thm31_f(1)
    with pytest.raises(TransformError):
        f((0, 1, 1))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_level_law_strict_vs_weak(n):
    from contours.suites import level_law_mismatches
    assert all(not level_law_mismatches(n, i, literal=False, width=5) for i in range(n))
    assert any(level_law_mismatches(n, i, literal=True, width=5) for i in range(n))
    assert sa.is_empty(thm31_image_level(n, n - 1, literal=True), complete(n))
    with pytest.raises(TransformError):
        thm31_image_level(n, n)


def test_iterate_image_shrinks():
    sizes = [len(iterate_image(3, i, 4)) for i in range(3)]
    assert sizes == sorted(sizes, reverse=True)


def test_glued_map_validation():
    ok = Seq((), Ramp(0, 1))
    assert validate_glue(ok, RatRamp(1, 2)) is None
    assert validate_glue(ok, RatRamp(0, 1)) is not None          # bounded a_n
    assert validate_glue(ok, RatRamp(1, 1)) is not None          # r(v_n) - a_n bounded
    assert validate_glue(ok, RatRamp(1, 2, 3)) is not None       # a_n above r(v_n)
    with pytest.raises(TransformError):
        thm36_glued_map(ok, RatRamp(1, 1))


def test_glued_map_acts_blockwise():
    c = Seq((), Ramp(0, 1))
    g = thm36_glued_map(c, RatRamp(1, 2))
    for n in range(2, 7):
        an = n // 2
        if an < 2:
            continue
        local = Thm31Map(an, zero_based=True)
        for tail in itertools.product(range(3), repeat=an):
            head = (0,) * (n - an)
            assert g((n,) + head + tail) == (n,) + head + local(tail)


def test_destroy_and_decrease_rank():
    assert destroy_rank1(complete(4)).rank() == 3
    with pytest.raises(TransformError):
        destroy_rank1(complete(1))
    src = Seq((), Repeat(RAMP))
    d = decrease_rank(src, OMEGA, beta_choice=(1, 1))
    assert d.rank() == OMEGA and is_monotone(d)[0]
    assert same_leaves(d, src) and rel_decrease(d, src)
    with pytest.raises(TransformError):
        decrease_rank(T2, 3)
    with pytest.raises(TransformError):
        decrease_rank(src, OMEGA, beta_choice=(0, 0))


def test_rel_decrease_examples():
    t4 = complete(4)
    assert rel_decrease(decrease(t4, 2), t4)
    assert rel_decrease(destroy(t4), t4)
    assert not rel_decrease(t4, decrease(t4, 2))
    assert not rel_decrease(T2, T3)
    assert rel_decrease(decrease(RAMP, 3), RAMP)
    assert rel_black1(t4, t4)


def test_interpolate():
    t = interpolate(complete(5), decrease(complete(5), 1), 3)
    assert t.rank() == 3
    w = decrease(Seq((), Repeat(RAMP)), 2)
    t = interpolate(Seq((), Repeat(RAMP)), w, 4)
    assert t.rank() == ordinal(4)
    assert rel_decrease(w, t) and rel_decrease(t, Seq((), Repeat(RAMP)))
    with pytest.raises(TransformError):
        interpolate(complete(3), decrease(complete(3), 1), 3)
