import itertools
import random

import pytest

from contours import setalg as sa
from contours.cascade import Bundle, Seq, Ramp, collapse, complete
from contours.generators import random_sets, random_thresholds, schema_family
from contours.oracle import FiniteModel, eval_point

T2, T3 = complete(2), complete(3)


def extension(c, s, width=4):
    m = FiniteModel(c, width)
    return set(m.labels(m.extension(s)))


def test_v_of_examples():
    g0 = sa.Thresholds()
    assert sa.v_of(T2, g0) is sa.ALL
    root1 = sa.v_of(T2, sa.Thresholds({(): 1}, 0))
    assert extension(T2, root1) == {(i, j) for i in range(1, 4) for j in range(4)}
    k = 2
    all_k = sa.v_of(T2, sa.Thresholds({}, k))
    got = extension(T2, all_k, k + 3)
    assert got == {(i, j) for i in range(k, k + 3) for j in range(k, k + 3)}


def test_boolean_examples():
    a = sa.thresh({(): 1}, 2)
    b = sa.thresh({(0,): 3}, 1)
    both = sa.inter(a, b)
    merged = sa.v_of(T3, sa.Thresholds({(): 1}, 2).pointwise_max(sa.Thresholds({(0,): 3}, 1)))
    assert sa.equivalent(both, merged, T3)
    mx = sa.leaves_of(T3)
    assert sa.is_empty(sa.compl(mx), T3)
    assert sa.equivalent(sa.union(a, sa.compl(a)), mx, T3)


def test_decisions_examples():
    g = sa.thresh({(1,): 2}, 1)
    assert sa.is_empty(sa.inter(g, sa.compl(g)), T2)
    assert sa.is_finite(sa.fin([(0, 0), (3, 1)]), T2)
    assert not sa.is_finite(g, T2)
    assert sa.contains(sa.cone((1,)), sa.point((1, 5)), T2)


def test_contains_monotone_thresholds_against_oracle():
    rng = random.Random(5)
    for _ in range(20):
        g = random_thresholds(rng)
        h = g.pointwise_max(random_thresholds(rng))
        assert g.le(h)
        small, big = sa.v_of(T3, h), sa.v_of(T3, g)
        assert sa.contains(big, small, T3)
        assert extension(T3, small) <= extension(T3, big)


def test_boolean_laws_on_random_triples():
    sets = list(random_sets(17, 600, depth=2))
    triples = [sets[i:i + 3] for i in range(0, 600, 3)]
    assert len(triples) >= 200
    for a, b, c in triples:
        # De Morgan, absorption, idempotence, distributivity, up to equivalence on T3
        assert sa.equivalent(sa.compl(sa.union(a, b)), sa.inter(sa.compl(a), sa.compl(b)), T3)
        assert sa.equivalent(sa.union(a, sa.inter(a, b)), a, T3)
        assert sa.equivalent(sa.inter(a, a), a, T3)
        assert sa.equivalent(sa.inter(a, sa.union(b, c)),
                             sa.union(sa.inter(a, b), sa.inter(a, c)), T3)
        n = sa.normalize(sa.union(a, sa.inter(b, c)))
        assert sa.equivalent(n, sa.union(a, sa.inter(b, c)), T3)


def test_normal_form_is_syntactic_dnf():
    s = sa.inter(sa.union(sa.cone((0,)), sa.cone((1,))), sa.thresh({}, 1), sa.thresh({(): 2}, 0))
    n = sa.normalize(s)
    assert isinstance(n, sa.Union)
    for region in n.parts:
        lits = region.parts if isinstance(region, sa.Inter) else (region,)
        assert sum(isinstance(x, sa.Thresh) for x in lits) <= 1


@pytest.mark.parametrize("c", schema_family(3)[:12], ids=lambda c: str(c)[:40])
def test_emptiness_against_oracle(c):
    m = FiniteModel(c, 5)
    m2 = FiniteModel(c, 10)
    for s in random_sets(3, 60):
        small, large = m.extension(s), m2.extension(s)
        if sa.is_empty(s, c):
            assert small == 0 and large == 0
        if small:
            assert not sa.is_empty(s, c)


def test_pointwise_extension_matches_symbolic_restriction():
    for s in random_sets(11, 100):
        for label in itertools.product(range(3), repeat=3):
            assert eval_point(s, label) == sa.contains_path(s, label)


def test_base_sets_are_contour_members():
    rng = random.Random(2)
    for c in [T3, Bundle(T2), collapse(T3), Seq((), Ramp(0, 1))]:
        for _ in range(10):
            b = sa.base_set(c, random_thresholds(rng))
            assert sa.contour_member(b, c)


@pytest.mark.parametrize("text", [
    "ALL", "EMPTY", "CONE(0,1)", "FIN{(0,1), (2,3)}", "V(g){root>=2, (0)>=5}",
    "V(g){*>=1, @0>=2}", "(CONE(1) | ~V(g){*>=2})", "MAX[(complete rank 2)]",
    "AT(1)[V(g){*>=1}]", "BASE[(complete rank 2)]V(g){*>=1, (0)>=3}",
    "PULL[collapse (complete rank 2)][CONE(0)]",
])
def test_text_round_trip(text):
    s = sa.parse_set(text)
    assert sa.parse_set(sa.format_set(s)) == s


def test_parse_errors_report_column():
    with pytest.raises(sa.SetAlgebraError, match="column"):
        sa.parse_set("CONE(1) & & ALL")
