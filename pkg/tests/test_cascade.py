import pytest

from contours import setalg as sa
from contours.cascade import (
    LEAF, BundleView, CascadeError, Leaf, Ramp, Repeat, Seq, collapse, complete, confluence,
    decrease, destroy, first_leaf, format_schema, is_monotone, is_sequential, iter_leaves,
    parse_schema, rank, strip, subcascade_down, subcascade_up, truncate,
)
from contours.ordinals import OMEGA, ordinal, sup_plus_one

RAMP = Seq((), Ramp(0, 1))


def test_rank_examples():
    assert rank(LEAF) == 0
    for n in range(5):
        assert rank(complete(n)) == n
    assert rank(RAMP) == OMEGA
    assert rank(complete(3), (0,)) == 2


def test_monotone():
    assert is_monotone(complete(3)) == (True, None)
    ok, witness = is_monotone(Seq((complete(1),), Repeat(LEAF)))
    assert not ok and witness == ()
    assert is_monotone(decrease(Seq((), Repeat(RAMP)), 4))[0]
    assert is_sequential(complete(2))


def test_confluence_rank():
    t1, t2 = complete(1), complete(2)
    c = confluence(t1, t2)
    assert rank(c) == 3
    kids = [rank(t2)] * 3
    assert rank(c) == sup_plus_one(kids)
    mixed = confluence(t2, {(0, 0): complete(3)}, t1)
    assert rank(mixed) == 5


def test_subcascade_up():
    t3 = complete(3)
    assert subcascade_up(t3, ()) == t3
    assert rank(subcascade_up(t3, (4,))) == 2
    assert rank(subcascade_up(t3, (0, 1, 2))) == 0


def test_subcascade_down():
    t2 = complete(2)
    assert sa.equivalent(sa.leaves_of(subcascade_down(t2, sa.ALL)), sa.leaves_of(t2), t2)
    u = sa.thresh({}, 2)
    s = subcascade_down(t2, u)
    assert sa.contains(u, sa.leaves_of(s), t2)
    with pytest.raises(CascadeError):
        subcascade_down(t2, sa.fin([(0, 0), (1, 1)]))


def test_truncate_counts():
    assert len(truncate(complete(2), 3)) == 13
    assert truncate(complete(3), 1).depth() == 3
    assert len(truncate(LEAF, 4)) == 1


def test_destroy_and_decrease():
    t4 = complete(4)
    assert rank(destroy(t4)) == 3
    assert rank(decrease(t4, 2)) == 2
    assert decrease(t4, 4) == t4
    assert rank(destroy(RAMP)) == OMEGA
    assert rank(decrease(RAMP, 3)) == 3
    assert rank(decrease(Seq((), Repeat(RAMP)), OMEGA)) == OMEGA
    assert isinstance(decrease(t4, 1).view(), BundleView)
    with pytest.raises(CascadeError):
        decrease(complete(2), 3).view()


def test_destroy_keeps_leaves():
    t3 = complete(3)
    d = destroy(t3)
    assert sa.equivalent(sa.leaves_of(d), sa.leaves_of(t3), t3)
    assert strip(d) == t3


def test_collapse():
    t3 = complete(3)
    c = collapse(t3)
    assert rank(c) == 2
    assert first_leaf(c) == (0, 0, 0)
    assert list(iter_leaves(c, 2)) == [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)]


@pytest.mark.parametrize("text", [
    "(leaf)",
    "(leaf 0 1)",
    "(complete rank 3)",
    "(seq ((leaf) (complete rank 1)) (repeat (complete rank 2)))",
    "(seq () (ranks affine base 1 step 2 (leaf)))",
    "(seq ((leaf)) (end))",
    "(graft (complete rank 1) (complete rank 2) (at /0 (leaf)))",
    "(bundle (complete rank 2) [V(g){*>=1}])",
    "(sub (complete rank 2) [CONE(1)])",
    "(destroy (complete rank 3))",
    "(decrease (seq () (ranks affine base 0 step 1 (leaf))) 3)",
    "(decrease (seq () (ranks affine base 1 step 2 (leaf))) w by 0 1)",
    "(collapse (complete rank 3))",
    "(completed (seq () (ranks affine base 0 step 1 (leaf))))",
    "(interp (complete rank 4) (decrease (complete rank 4) 2) 3)",
])
def test_schema_round_trip(text):
    c = parse_schema(text)
    assert format_schema(c) == text
    assert parse_schema(format_schema(c)) == c


def test_parse_error_has_column():
    with pytest.raises(CascadeError, match="column"):
        parse_schema("(seq ((leaf)) (rep (leaf)))")


def test_leaf_suffix():
    assert rank(Leaf((1, 2))) == 0
    assert ordinal(0) == rank(Leaf(()))
