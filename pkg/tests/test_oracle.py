import pytest

from contours import setalg as sa
from contours.cascade import Bundle, Ramp, Repeat, Seq, collapse, complete
from contours.oracle import (
    FiniteModel, OracleError, TwoWidth, eval_point, oracle_contour_contains, oracle_residual,
    oracle_rk_search,
)
from contours.transforms import CollapseMap

T2 = complete(2)


def test_model_leaves():
    m = FiniteModel(T2, 3)
    assert len(m.leaves) == 9 and m.all_mask() == (1 << 9) - 1
    b = FiniteModel(Bundle(complete(1), sa.thresh({}, 1)), 4)
    assert b.leaves == [(1,), (2,), (3,)]
    with pytest.raises(OracleError):
        FiniteModel(complete(4), 10, cap=100)


def test_extension_boolean():
    m = FiniteModel(T2, 3)
    a, c = sa.cone((0,)), sa.thresh({}, 1)
    assert m.extension(sa.union(a, c)) == m.extension(a) | m.extension(c)
    assert m.extension(sa.compl(a)) == m.all_mask() ^ m.extension(a)


def test_push_extension_maps_points():
    t3 = complete(3)
    f = CollapseMap(t3)
    m = FiniteModel(t3, 3)
    got = m.labels(m.extension(sa.Push(f, sa.cone((1,)))))
    assert got == [(1, 0, 0), (1, 1, 0), (1, 2, 0)]


def test_two_width_oracle():
    assert oracle_contour_contains(T2, sa.thresh({}, 1))
    assert not oracle_contour_contains(T2, sa.cone((0,)))
    assert oracle_residual(T2, sa.cone((0,)))
    assert TwoWidth(Seq((), Repeat(complete(1))), 4).contour_contains(sa.ALL)
    # a threshold of 3 needs slack 3: unstable at width 5, stable at width 7
    assert TwoWidth(complete(1), 5).contour_contains(sa.thresh({}, 3)) is None
    assert TwoWidth(complete(1), 7).contour_contains(sa.thresh({}, 3))


def test_eval_point():
    assert eval_point(sa.cone((1,)), (1, 4))
    assert not eval_point(sa.thresh({(1,): 3}, 0), (1, 2))
    assert eval_point(sa.base_set(Seq((), Repeat(T2)), sa.Thresholds({}, 2)), (2, 2, 2))


def test_rk_search():
    u = ([0, 1, 2], [{0, 1}])
    v = (["a", "b"], [{"a"}])
    f = oracle_rk_search(u, v)
    assert f[0] == "a" and f[1] == "a"
    assert oracle_rk_search(([0], [{0}]), (["a", "b"], [{"a"}, {"b"}])) is None
    with pytest.raises(OracleError):
        oracle_rk_search((list(range(13)), []), ([0], []))
