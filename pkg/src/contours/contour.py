"""Contour filters, filters along filters, meshing and images.

Filters are never materialized.  A symbolic filter answers ``contains(U)``
for symbolic sets ``U`` over the leaves of its ``ambient`` cascade and can
hand out sample base elements.  Filters on small finite grounds live in
:class:`FiniteFilter`, where everything is explicit and exact.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

from . import setalg as sa
from .cascade import (
    LEAF, BundleView, Cascade, LeafView, Repeat, Seq, SeqView, format_schema,
)
from .setalg import ALL, EMPTY, SymbolicSet, Thresholds
from .transforms import LeafMap, RuleMap, block_map, subst

Path = tuple[int, ...]


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""


class FilterError(ValueError):
    pass


# -- contour membership and residuality ------------------------------------------------

def contour_contains(schema: Cascade, u: SymbolicSet) -> bool:
    """U in the contour of ``schema``."""
    return sa.contour_member(u, schema)


def is_residual(schema: Cascade, u: SymbolicSet) -> bool:
    """Complement of U in the contour; cross-checked against the inductive definition."""
    via_contour = sa.contour_member(sa.compl(u), schema)
    inductive = sa.residual_inductive(u, schema)
    if via_contour != inductive:
        raise ConsistencyError(f"residuality disagrees for {sa.format_set(u)} on {format_schema(schema)}")
    return via_contour


def random_base_thresholds(rng: random.Random, max_val: int = 3, depth: int = 3) -> Thresholds:
    exc = {}
    for _ in range(rng.randint(0, 3)):
        p = tuple(rng.randrange(3) for _ in range(rng.randint(0, depth - 1)))
        exc[p] = rng.randint(0, max_val)
    return Thresholds(exc, rng.randint(0, max_val))


# -- symbolic filters ---------------------------------------------------------------------

class Filter:
    """A filter on the leaves of ``ambient``."""

    ambient: Cascade

    def contains(self, u: SymbolicSet) -> bool:
        raise NotImplementedError

    def support(self) -> SymbolicSet:
        """A known member of the filter (as small as cheaply available)."""
        return sa.leaves_of(self.ambient)

    def sample_base(self, rng: random.Random, k: int) -> list[SymbolicSet]:
        return [self.support()] * min(k, 1)

    def text(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"<{self.text()}>"


class Contour(Filter):
    def __init__(self, schema: Cascade):
        self.schema = self.ambient = schema

    def contains(self, u):
        return sa.contour_member(u, self.schema)

    def sample_base(self, rng, k):
        mx = sa.leaves_of(self.schema)
        return [sa.inter(mx, sa.base_set(self.schema, random_base_thresholds(rng))) for _ in range(k)]

    def text(self):
        return f"contour {format_schema(self.schema)}"


class Principal(Filter):
    """All supersets of the generator ``gen`` (which must be nonempty)."""

    def __init__(self, gen: SymbolicSet, ambient: Cascade):
        self.gen, self.ambient = sa.inter(gen, sa.leaves_of(ambient)), ambient
        if sa.is_empty(self.gen, ambient):
            raise FilterError("principal filter at the empty set")

    def contains(self, u):
        return sa.contains(u, self.gen, self.ambient)

    def support(self):
        return self.gen

    def text(self):
        return f"principal {sa.format_set(self.gen)}"


class Frechet(Filter):
    """Cofinite subsets of the ambient leaves."""

    def __init__(self, ambient: Cascade):
        self.ambient = ambient

    def contains(self, u):
        return sa.is_finite(sa.compl(u), self.ambient)

    def sample_base(self, rng, k):
        mx = sa.leaves_of(self.ambient)
        out = []
        for _ in range(k):
            pts = [sa.point(_random_leaf(self.ambient, rng)) for _ in range(rng.randint(0, 3))]
            out.append(sa.inter(mx, sa.compl(sa.union(*pts))))
        return out

    def text(self):
        return f"frechet {format_schema(self.ambient)}"


def _random_leaf(c: Cascade, rng: random.Random, width: int = 4) -> Path:
    path: Path = ()
    while True:
        v = c.view()
        if isinstance(v, LeafView):
            return path + v.suffix
        if isinstance(v, BundleView):
            c = v.inner
            continue
        kids = v.first(width)
        n, c = kids[rng.randrange(len(kids))]
        path += (n,)


class Generated(Filter):
    """The filter generated by ``base`` together with the sets ``extra``."""

    def __init__(self, base: Filter, extra: Iterable[SymbolicSet]):
        self.base, self.extra, self.ambient = base, tuple(extra), base.ambient
        self.meet = sa.inter(*self.extra)

    def contains(self, u):
        return self.base.contains(sa.union(u, sa.compl(self.meet)))

    def support(self):
        return sa.inter(self.base.support(), self.meet)

    def sample_base(self, rng, k):
        return [sa.inter(b, self.meet) for b in self.base.sample_base(rng, k)]

    def text(self):
        return f"generated {self.base.text()} + {len(self.extra)} sets"


class Image(Filter):
    """f(u) = {B : f^-1(B) in u}, living on ``ambient``."""

    def __init__(self, fmap: LeafMap, base: Filter, ambient: Optional[Cascade] = None):
        self.fmap, self.base = fmap, base
        self.ambient = base.ambient if ambient is None else ambient

    def contains(self, u):
        return self.base.contains(self.fmap.pullback(u))

    def support(self):
        return self.fmap.push(self.base.support(), self.base.ambient)

    def sample_base(self, rng, k):
        return [self.fmap.push(b, self.base.ambient) for b in self.base.sample_base(rng, k)]

    def text(self):
        return f"image {self.fmap.text()} of {self.base.text()}"


class Meet(Filter):
    """Intersection of filters on one ambient."""

    def __init__(self, parts: Sequence[Filter]):
        if not parts:
            raise FilterError("empty meet")
        self.parts, self.ambient = tuple(parts), parts[0].ambient

    def contains(self, u):
        return all(p.contains(u) for p in self.parts)

    def support(self):
        return sa.union(*(p.support() for p in self.parts))

    def sample_base(self, rng, k):
        per = [p.sample_base(rng, k) for p in self.parts]
        return [sa.union(*xs) for xs in zip(*per)]

    def text(self):
        return "meet(" + ", ".join(p.text() for p in self.parts) + ")"


# -- contour along a filter -------------------------------------------------------------------

def block_sum(ambients: Sequence[Cascade], tail: Optional[Cascade] = None) -> Cascade:
    """The cascade with the given blocks as root successors (labels (i,)+x)."""
    return Seq(tuple(ambients), None if tail is None else Repeat(tail))


def contour_along(q, family: Sequence[Filter], tail: Optional[Filter] = None) -> Filter:
    """The contour of ``family`` along ``q``, on the block sum of their ambients.

    ``q`` is ``"frechet"`` (then members must be contours and ``tail`` the
    contour repeated beyond the listed ones) or a finite set of indices
    (the principal filter at that set).
    """
    if q == "frechet":
        if tail is None or not all(isinstance(p, Contour) for p in list(family) + [tail]):
            raise FilterError("Frechet along needs contours with a repeating tail")
        return Contour(Seq(tuple(p.schema for p in family), Repeat(tail.schema)))
    idx = sorted(set(q))
    if not idx:
        raise FilterError("principal filter at the empty index set")
    if tail is not None:
        raise FilterError("principal along a finite family only")
    amb = block_sum([p.ambient for p in family])
    if max(idx) >= len(family):
        raise FilterError("index outside the family")
    parts = [Image(block_map(i), family[i], amb) for i in idx]
    return parts[0] if len(parts) == 1 else Meet(parts)


def disjointify(family: Sequence[Filter]) -> list[Filter]:
    """Copies of the filters transported onto pairwise disjoint blocks."""
    amb = block_sum([p.ambient for p in family])
    return [Image(block_map(i), p, amb) for i, p in enumerate(family)]


# -- the h-contour -----------------------------------------------------------------------------

@dataclass(frozen=True)
class IndexFilter:
    """A filter on successor labels: ``frechet`` or principal at ``core``."""

    kind: str = "frechet"
    core: tuple = ()

    def __post_init__(self):
        if self.kind not in ("frechet", "principal") or (self.kind == "principal" and not self.core):
            raise FilterError("ill-typed index filter")


FRECHET_INDEX = IndexFilter()


def principal_index(*core: int) -> IndexFilter:
    return IndexFilter("principal", tuple(sorted(core)))


class HContour(Filter):
    """The contour of ``schema`` along the node filters ``h`` (default Frechet),
    transported by the leaf relabeling ``leafmap``."""

    def __init__(self, schema: Cascade, h: Mapping[Path, IndexFilter] | None = None,
                 leafmap: Optional[LeafMap] = None, ambient: Optional[Cascade] = None):
        self.schema, self.h = schema, dict(h or {})
        if any(not isinstance(x, IndexFilter) for x in self.h.values()):
            raise FilterError("h must assign index filters to nodes")
        self.leafmap = leafmap
        self.ambient = ambient if ambient is not None else schema

    def contains(self, u):
        e = u if self.leafmap is None else self.leafmap.pullback(u)
        return self._member(self.schema, e, ())

    def _member(self, c: Cascade, e: SymbolicSet, path: Path) -> bool:
        below = [p for p in self.h if p[: len(path)] == path]
        if not below:
            return sa.contour_member(e, c)
        v = c.view()
        if isinstance(v, LeafView):
            return sa.contains_path(e, v.suffix)
        if isinstance(v, BundleView):
            raise FilterError("node filters inside a bundle are not supported")
        phi = self.h.get(path, FRECHET_INDEX)
        if phi.kind == "principal":
            kids = [(n, v.child(n)) for n in phi.core]
            return all(ch is not None and self._member(ch, sa.restrict(e, n), path + (n,))
                       for n, ch in kids)
        deeper = [p[len(path)] for p in below if len(p) > len(path)]
        rep = max([v.generic_from(), sa.horizon(e)] + [d + 1 for d in deeper])
        a = self._member(v.tail(rep), sa.restrict(e, rep), path + (rep,))
        b = self._member(v.tail(rep + 1), sa.restrict(e, rep + 1), path + (rep + 1,))
        if a != b:
            raise sa.StabilizationError("h-contour not stable past the horizon")
        return a

    def text(self):
        return f"h-contour {format_schema(self.schema)}"


def contour_h(schema: Cascade, h: Mapping[Path, IndexFilter] | None = None,
              leafmap: Optional[LeafMap] = None) -> Filter:
    return HContour(schema, h, leafmap)


# -- mesh, finite intersection property, images -------------------------------------------------

def mesh(u: Filter, o: Filter, budget: int = 25, seed: int = 0) -> bool:
    """u # o: every member of u meets every member of o.

    Exact when either side is principal; otherwise refuted by searching
    sample members of one filter whose complement lies in the other.
    """
    for a, b in ((u, o), (o, u)):
        if isinstance(a, Principal):
            return not b.contains(sa.compl(a.gen))
    rng = random.Random(seed)
    for a, b in ((u, o), (o, u)):
        for s in [a.support()] + a.sample_base(rng, budget):
            if b.contains(sa.compl(s)):
                return False
    return True


@dataclass
class FipReport:
    holds: bool
    bound: int
    exact: bool
    witness: Optional[list] = None

    def __bool__(self):
        return self.holds


def has_fip(bases: Sequence, ambient: Cascade, bound: int = 20, seed: int = 0) -> FipReport:
    """Finite intersection property of a family of bases.

    Each entry is a finite list of sets (exact) or a :class:`Filter`
    (enumerated lazily, ``bound`` sample members each).  A positive answer
    for filters holds up to the bound recorded in the report.
    """
    rng = random.Random(seed)
    finite: list[SymbolicSet] = []
    lazy: list[Filter] = []
    for b in bases:
        if isinstance(b, Filter):
            lazy.append(b)
        else:
            finite.extend(b)
    core = sa.inter(sa.leaves_of(ambient), *finite)
    if sa.is_empty(core, ambient):
        return FipReport(False, 0, True, [sa.format_set(x) for x in finite])
    if not lazy:
        return FipReport(True, 0, True)
    samples = [[f.support()] + f.sample_base(rng, bound - 1) for f in lazy]
    for combo in zip(*samples):
        if sa.is_empty(sa.inter(core, *combo), ambient):
            return FipReport(False, bound, False, [sa.format_set(x) for x in combo])
    return FipReport(True, bound, False)


def image(fmap: LeafMap, u: Filter, ambient: Optional[Cascade] = None) -> Filter:
    if isinstance(fmap, RuleMap) and not fmap.rules:
        return u
    if isinstance(u, Principal) and ambient is not None:
        return Principal(fmap.push(u.gen, u.ambient), ambient)
    return Image(fmap, u, ambient)


# -- finite world --------------------------------------------------------------------------------

MAX_GROUND = 7


class FiniteFilter:
    """An up-closed family of subsets of {0..n-1}, as a set of bitmasks."""

    __slots__ = ("n", "sets")

    def __init__(self, n: int, sets: Iterable[int]):
        if n > MAX_GROUND:
            raise FilterError(f"ground of size {n} exceeds {MAX_GROUND}")
        self.n, self.sets = n, frozenset(sets)

    def __eq__(self, other):
        return isinstance(other, FiniteFilter) and (self.n, self.sets) == (other.n, other.sets)

    def __hash__(self):
        return hash((self.n, self.sets))

    def __contains__(self, mask: int) -> bool:
        return mask in self.sets

    def core(self) -> int:
        out = (1 << self.n) - 1
        for s in self.sets:
            out &= s
        return out

    def is_proper(self) -> bool:
        return bool(self.sets) and 0 not in self.sets

    def __repr__(self):
        return f"FiniteFilter({self.n}, core={bin(self.core())})"


def finite_principal(n: int, core: Iterable[int]) -> FiniteFilter:
    c = 0
    for x in core:
        c |= 1 << x
    return FiniteFilter(n, (m for m in range(1 << n) if m & c == c))


def finite_image(f: Sequence[int], u: FiniteFilter, m: int) -> FiniteFilter:
    """{B subset of {0..m-1} : f^-1(B) in u}."""
    out = []
    for b in range(1 << m):
        pre = 0
        for x in range(u.n):
            if b >> f[x] & 1:
                pre |= 1 << x
        if pre in u:
            out.append(b)
    return FiniteFilter(m, out)


def finite_along(q: FiniteFilter, family: Sequence[FiniteFilter]) -> FiniteFilter:
    """Union over Q in q of the intersection of the p_s, s in Q."""
    n = family[0].n
    out: set[int] = set()
    for qmask in q.sets:
        members = [family[s].sets for s in range(q.n) if qmask >> s & 1]
        inter = frozenset.intersection(*members) if members else frozenset(range(1 << n))
        out |= inter
    return FiniteFilter(n, out)


def dedup_images(f: Sequence[int], family: Sequence[FiniteFilter], m: int):
    """(o, F): distinct images in first-occurrence order and the index map."""
    o: list[FiniteFilter] = []
    big_f = []
    for p in family:
        img = finite_image(f, p, m)
        if img not in o:
            o.append(img)
        big_f.append(o.index(img))
    return o, tuple(big_f)


def image_formula_holds(f: Sequence[int], q: FiniteFilter, family: Sequence[FiniteFilter], m: int) -> bool:
    """f(contour of p_n along q) == contour of o_i along F(q)."""
    o, big_f = dedup_images(f, family, m)
    lhs = finite_image(f, finite_along(q, family), m)
    rhs = finite_along(finite_image(big_f, q, len(o)), o)
    return lhs == rhs


def finite_iso(u: FiniteFilter, v: FiniteFilter) -> bool:
    """Filters on finite grounds are principal; isomorphic iff cores have equal size."""
    return bin(u.core()).count("1") == bin(v.core()).count("1")


def check_discrete_hypothesis(o: Sequence[FiniteFilter], p_set: Iterable[int], h_set: Iterable[int],
                              big_f: Sequence[int], family: Optional[Sequence[FiniteFilter]] = None):
    """The two hypotheses on (o_i), P, H and F.  Returns (ok, witness)."""
    p_set, h_set = sorted(set(p_set)), sorted(set(h_set))
    for i, j in itertools.combinations(p_set, 2):
        if o[i].core() & o[j].core():
            return False, ("not discrete", i, j)
    for a, b in itertools.combinations(h_set, 2):
        if big_f[a] == big_f[b]:
            return False, ("F not one-to-one", a, b)
    if family is not None:
        for n in h_set:
            if not finite_iso(family[n], o[big_f[n]]):
                return False, ("not isomorphic", n, big_f[n])
    return True, None


# -- base refinement ----------------------------------------------------------------------------

def f_dn(d: Thresholds, n: int) -> Thresholds:
    """d everywhere except the root, which gets n."""
    table = d.table()
    table[()] = n
    return Thresholds(table, d.default)


def refinement_n0(g: Thresholds, d: Thresholds) -> int:
    """n0 with V(f_{d,n0}) inside V(g), for g <=* d.

    A = {v : g(v) > d(v)} is finite; n0 is one more than the largest root
    successor label with a node of A in its subtree, and at least g(root)
    so that the root threshold is respected too.
    """
    if g.default > d.default:
        raise FilterError("g is not eventually below d")
    keys = set(g.table()) | set(d.table())
    bad = [p for p in keys if g(p) > d(p)]
    n0 = max((p[0] + 1 for p in bad if p), default=0)
    return max(n0, g(()))
