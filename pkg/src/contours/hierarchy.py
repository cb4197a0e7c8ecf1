"""Desk-scale classifiers for the rank hierarchy of filters.

Positive answers come with certificates that are checked; negative answers
are always relative to a stated search budget.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

from . import setalg as sa
from .cascade import Cascade, collapse, decrease, format_schema
from .contour import (
    Contour, Filter, FilterError, Generated, Image, Meet, Principal, has_fip,
)
from .oracle import FiniteModel
from .setalg import SymbolicSet
from .transforms import CollapseMap, LeafMap, rel_decrease, same_leaves

CERT_SAMPLES = 25


@dataclass
class RankAnswer:
    rank: int
    certificate: Optional[Cascade]
    note: str
    refuted: list = field(default_factory=list)


def certificate_holds(subject: Filter, cert: Cascade, samples: int = CERT_SAMPLES, seed: int = 0) -> bool:
    """The contour of ``cert`` lies in ``subject`` on ``samples`` base sets."""
    rng = random.Random(seed)
    return all(subject.contains(b) for b in Contour(cert).sample_base(rng, samples))


def structural_certificate(subject: Filter) -> Optional[Cascade]:
    """A contour inside ``subject`` predicted by the rank rules, or None."""
    if isinstance(subject, Contour):
        return subject.schema
    if isinstance(subject, Image) and isinstance(subject.fmap, CollapseMap) \
            and isinstance(subject.base, Contour) and subject.fmap.schema == subject.base.schema:
        return collapse(subject.base.schema)
    if isinstance(subject, Generated):
        base = structural_certificate(subject.base)
        if base is not None and sa.contour_member(subject.meet, base):
            return base
        return None
    if isinstance(subject, Meet):
        best = None
        for part in subject.parts:
            c = structural_certificate(part)
            if c is not None and certificate_holds(subject, c) and (best is None or c.rank() > best.rank()):
                best = c
        return best
    return None


def max_contour_rank(subject: Filter, bound: int = 4, candidates: Sequence[Cascade] = (),
                     budget: int = CERT_SAMPLES, seed: int = 0) -> RankAnswer:
    """Largest n <= bound with a checked rank-n contour inside ``subject``.

    The structural certificate is lowered by rank decrease until it passes
    the sampled check.  Extra ``candidates`` of higher rank are tried and
    either accepted (checked) or refuted by a base set outside the subject.
    """
    found, cert = 0, None
    base = structural_certificate(subject)
    if base is not None:
        r = base.rank()
        top = bound if not r.is_finite() else min(int(r), bound)
        for k in range(top, 0, -1):
            c = decrease(base, k)
            if certificate_holds(subject, c, budget, seed):
                found, cert = k, c
                break
    refuted = []
    rng = random.Random(seed)
    for cand in candidates:
        r = cand.rank()
        if not r.is_finite() or int(r) <= found or int(r) > bound:
            continue
        witness = next((b for b in Contour(cand).sample_base(rng, budget) if not subject.contains(b)), None)
        if witness is None:
            found, cert = int(r), cand
        else:
            refuted.append((format_schema(cand), sa.format_set(witness)))
    if cert is None:
        note = f"no certificate found (structural rule and {len(candidates)} candidates, budget {budget})"
    else:
        note = (f"certificate of rank {found} checked on {budget} base sets; higher ranks: "
                f"{len(refuted)} candidates refuted within budget")
    return RankAnswer(found, cert, note, refuted)


# -- condition (3) of the finite-level theorem -------------------------------------------

@dataclass
class Condition3Result:
    witness: Optional[SymbolicSet]
    branch: Optional[Union[str, tuple]]
    bound: int

    @property
    def found(self) -> bool:
        return self.witness is not None


def _points(ambient: Cascade, u: SymbolicSet, width: int) -> list[tuple]:
    m = FiniteModel(ambient, width)
    return m.labels(m.extension(u))


def _max_fiber(f: LeafMap, pts) -> int:
    seen: dict = {}
    for p in pts:
        y = f(p)
        seen[y] = seen.get(y, 0) + 1
    return max(seen.values(), default=0)


def _classify(maps: Sequence[LeafMap], pts_by_width: list) -> Optional[Union[str, tuple]]:
    def compose_from(i, pts):
        for f in reversed(maps[i:]):
            pts = {f(p) for p in pts}
        return pts

    if all(len(compose_from(0, pts)) == 1 for pts in pts_by_width):
        return "constant"
    for i in range(len(maps)):
        sizes = [_max_fiber(maps[i], compose_from(i + 1, pts)) for pts in pts_by_width]
        if sizes[0] == sizes[1]:
            return ("finite-to-one", i + 1)
    return None


def thm31_condition3(subject: Filter, maps: Sequence[LeafMap], width: int = 3,
                     budget: int = 8, seed: int = 0) -> Condition3Result:
    """Search base sets U of ``subject`` for: the composition is constant on U,
    or some f_i is finite-to-one on the image of U under the later maps.

    Finiteness of fibers is judged on truncations at widths w and 2w (a
    fiber that grows with the width counts as infinite).
    """
    rng = random.Random(seed)
    cands = [subject.support()] + subject.sample_base(rng, budget - 1)
    for u in cands[:budget]:
        pts = [_points(subject.ambient, u, w) for w in (width, 2 * width)]
        if not pts[0]:
            continue
        branch = _classify(maps, pts)
        if branch is not None:
            return Condition3Result(u, branch, budget)
    return Condition3Result(None, None, budget)


# -- partition test -----------------------------------------------------------------------

@dataclass(frozen=True)
class LevelPartition:
    """Blocks: the leaves below each node at ``depth`` of ``schema``."""

    schema: Cascade
    depth: int


@dataclass
class PartitionAnswer:
    kind: str                      # "selector" | "block" | "neither"
    witness: Optional[object]
    bound: int


def _level_nodes(c: Cascade, depth: int, width: int, path=()):
    if depth == 0:
        yield path
        return
    v = c.view()
    if not hasattr(v, "first"):
        return
    for n, ch in v.first(width):
        yield from _level_nodes(ch, depth - 1, width, path + (n,))


def _zeros_from(depth: int, maxlen: int) -> SymbolicSet:
    return sa.inter(*(sa.compl(sa.thresh({}, 0, [0] * j + [1])) for j in range(depth, maxlen)))


def _at_most_one(ambient: Cascade, u: SymbolicSet, depth: int, width: int) -> bool:
    counts: dict = {}
    for p in _points(ambient, u, width):
        counts[p[:depth]] = counts.get(p[:depth], 0) + 1
    return max(counts.values(), default=0) <= 1


def thm41_partition_test(subject: Filter, partition, budget: int = 8) -> PartitionAnswer:
    """A selector in ``subject`` meeting each block at most once, or a block in ``subject``."""
    if isinstance(partition, LevelPartition):
        blocks = [sa.cone(p) for p in _level_nodes(partition.schema, partition.depth, budget)]
    else:
        blocks = list(partition)
    for b in blocks[:budget]:
        if subject.contains(b):
            return PartitionAnswer("block", b, budget)
    if isinstance(partition, LevelPartition):
        r = partition.schema.rank()
        maxlen = int(r) if r.is_finite() else partition.depth + budget
        sel = sa.inter(sa.leaves_of(partition.schema), _zeros_from(partition.depth, maxlen))
        if all(_at_most_one(partition.schema, sel, partition.depth, w) for w in (4, 8)) \
                and subject.contains(sel):
            return PartitionAnswer("selector", sel, budget)
    elif isinstance(subject, Principal):
        g = subject.gen
        if sa.is_finite(g, subject.ambient) and all(
                sa.is_finite(sa.inter(g, b), subject.ambient) and
                _count_le1(subject.ambient, sa.inter(g, b)) for b in blocks):
            return PartitionAnswer("selector", g, budget)
    return PartitionAnswer("neither", None, budget)


def _count_le1(ambient: Cascade, s: SymbolicSet) -> bool:
    return len(_points(ambient, s, 6)) <= 1


# -- bounded check of the rank-sum bound for families with FIP --------------------------------

@dataclass
class RankSumReport:
    fip: bool
    fip_bound: int
    inside_envelope: bool
    refuted: list
    unrefuted: list

    @property
    def passed(self) -> bool:
        return self.fip and self.inside_envelope and not self.unrefuted

    def text(self) -> str:
        if not self.passed:
            return "check failed"
        return (f"no certificate among {len(self.refuted)} candidates within budget "
                f"(FIP checked to bound {self.fip_bound})")


def rank_sum_bounded(family: Sequence, envelope: Cascade, candidates: Sequence[Cascade],
                    budget: int = 20, seed: int = 0) -> RankSumReport:
    """No candidate contour lies in the filter generated by ``family``, within budget.

    Every member of the family is shown to lie in the contour of
    ``envelope`` (contours by the decreasing relation, sets by membership),
    so a base set of a candidate outside that contour is outside the
    generated filter as well.
    """
    fip = has_fip(family, envelope, bound=budget, seed=seed)
    inside = True
    for m in family:
        if isinstance(m, Contour):
            inside &= m.schema == envelope or rel_decrease(m.schema, envelope)
        elif isinstance(m, Filter):
            raise FilterError("family members must be contours or set lists")
        else:
            inside &= all(sa.contour_member(s, envelope) for s in m)
    rng = random.Random(seed)
    refuted, unrefuted = [], []
    for cand in candidates:
        if not same_leaves(cand, envelope):
            raise FilterError("candidate lives on a different leaf set")
        w = next((b for b in Contour(cand).sample_base(rng, budget)
                  if not sa.contour_member(b, envelope)), None)
        (unrefuted if w is None else refuted).append(
            (format_schema(cand), None if w is None else sa.format_set(w)))
    return RankSumReport(bool(fip), fip.bound, inside, refuted, unrefuted)
