from contours import setalg as sa
from contours.cascade import Repeat, Seq, collapse, complete, decrease, destroy
from contours.contour import Contour, Frechet, Generated, Image, Meet, Principal
from contours.hierarchy import (
    LevelPartition, certificate_holds, rank_sum_bounded, max_contour_rank,
    structural_certificate, thm31_condition3, thm41_partition_test,
)
from contours.suites import rank_sum_candidates, rank_sum_families
from contours.transforms import block_map, collapse_map, thm31_f

T2, T3, T4 = complete(2), complete(3), complete(4)


def test_contour_rank_of_contour():
    ans = max_contour_rank(Contour(T3), bound=4)
    assert ans.rank == 3 and ans.certificate == T3


def test_collapse_image_drops_rank():
    for c in [T2, T3, destroy(T4)]:
        k = int(c.rank())
        ans = max_contour_rank(Image(collapse_map(c), Contour(c)), bound=k, candidates=[c])
        assert ans.rank == k - 1
        assert ans.refuted and "within budget" in ans.note


def test_structural_certificates():
    assert structural_certificate(Image(collapse_map(T3), Contour(T3))) == collapse(T3)
    assert structural_certificate(Generated(Contour(T2), [sa.thresh({}, 1)])) == T2
    assert structural_certificate(Generated(Contour(T2), [sa.cone((0,))])) is None
    assert structural_certificate(Frechet(T2)) is None
    m = Meet([Contour(T2), Contour(T2)])
    assert structural_certificate(m) == T2 and certificate_holds(m, T2)


def test_no_certificate_for_principal():
    ans = max_contour_rank(Principal(sa.point((0, 0)), T2), bound=2, candidates=[T2])
    assert ans.rank == 0 and ans.certificate is None


def test_condition3_on_level_maps():
    maps = [thm31_f(2, zero_based=True)] * 2
    res = thm31_condition3(Contour(T2), maps, width=3, budget=4)
    assert res.found and res.branch == "constant"
    res = thm31_condition3(Contour(T2), [block_map(0)], width=3, budget=4)
    assert res.found and res.branch == ("finite-to-one", 1)
    # one level map alone has infinite fibres on every base set
    res = thm31_condition3(Contour(T2), [thm31_f(2, zero_based=True)], width=3, budget=4)
    assert not res.found and res.bound == 4


def test_partition_test():
    ans = thm41_partition_test(Contour(T2), LevelPartition(T2, 1), budget=6)
    assert ans.kind == "neither"
    ans = thm41_partition_test(Principal(sa.cone((0,)), T2), LevelPartition(T2, 1))
    assert ans.kind == "block"
    sel = Principal(sa.compl(sa.thresh({}, 0, [0, 1])), T2)
    ans = thm41_partition_test(sel, LevelPartition(T2, 1))
    assert ans.kind == "selector"
    blocks = [sa.cone((0,)), sa.cone((1,))]
    assert thm41_partition_test(Principal(sa.point((0, 0)), T2), blocks).kind == "block"
    two = Principal(sa.fin([(0, 0), (1, 3)]), T2)
    assert thm41_partition_test(two, blocks).kind == "selector"


def test_rank_sum_bounded():
    env, members = next(iter(rank_sum_families(0, 1)))
    rep = rank_sum_bounded(members, env, rank_sum_candidates(), budget=10)
    assert rep.passed and "within budget" in rep.text()
    assert len(rep.refuted) == len(rank_sum_candidates())
    bad = rank_sum_bounded([Contour(T4)], env, [], budget=5)
    assert not bad.inside_envelope and not bad.passed
    assert rep.fip_bound == 10 and decrease(T4, 2) == env
    assert Seq((), Repeat(T3)) in rank_sum_candidates()
