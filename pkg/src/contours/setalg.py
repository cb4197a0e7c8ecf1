"""Symbolic subsets of a cascade's leaf space and their decision procedures.

Leaves are labelled by finite tuples of naturals (paths).  A
:class:`SymbolicSet` is a boolean combination of four kinds of atoms:

* ``Cone(p)``     -- every label extending ``p``;
* ``Thresh(g)``   -- the threshold set V(g): a label ``x`` belongs iff
  ``x[i] >= g(x[:i])`` for every ``i``, where ``g`` is a finite table of
  exceptions over a constant default;
* ``LeavesOf(C)`` -- the maximal elements of a cascade ``C``;
* ``ALL`` / ``EMPTY``.

Membership questions are always asked relative to an ambient cascade and
are decided by structural recursion over it.  At each node only finitely
many child labels are mentioned by the set, so above a computable
*horizon* every child sees the same restricted set; the recursion then
inspects the finitely many special children individually and one
representative of the generic tail (cross-checked against a second
representative).
"""

from __future__ import annotations

import re
from functools import lru_cache, total_ordering
from typing import Iterable, Mapping, Optional

Path = tuple[int, ...]


class SetAlgebraError(ValueError):
    pass


class StabilizationError(AssertionError):
    """Two generic tail representatives disagreed; the horizon was wrong."""


class _Node:
    """Structural equality and cached hashing for immutable terms."""

    _fields: tuple[str, ...] = ()

    def _key(self):
        return tuple(getattr(self, f) for f in self._fields)

    def __eq__(self, other):
        if self is other:
            return True
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__, self._key()))
            self.__dict__["_h"] = h
        return h

    def __setattr__(self, name, value):
        if name in self.__dict__ or name in self._fields and hasattr(self, name):
            raise AttributeError(f"{type(self).__name__} is immutable")
        object.__setattr__(self, name, value)


@total_ordering
class SymbolicSet(_Node):
    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return inter(self, other)

    def __sub__(self, other):
        return inter(self, compl(other))

    def __invert__(self):
        return compl(self)

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self) -> str:
        k = self.__dict__.get("_sk")
        if k is None:
            k = format_set(self)
            self.__dict__["_sk"] = k
        return k

    def __repr__(self):
        return f"SymbolicSet({format_set(self)!r})"

    __str__ = lambda self: format_set(self)


class _All(SymbolicSet):
    pass


class _Empty(SymbolicSet):
    pass


ALL = _All()
EMPTY = _Empty()


class Cone(SymbolicSet):
    _fields = ("path",)

    def __init__(self, path: Iterable[int]):
        self.path = tuple(int(i) for i in path)
        if any(i < 0 for i in self.path):
            raise SetAlgebraError("negative index in path")


class Thresh(SymbolicSet):
    """V(g): ``g`` is given by sorted ``exceptions``, then per-depth values
    ``depth[k]`` for nodes of length k, then ``default``."""

    _fields = ("exceptions", "default", "depth")

    def __init__(self, exceptions: Iterable[tuple[Path, int]], default: int,
                 depth: Iterable[int] = ()):
        self.exceptions = tuple(sorted((tuple(p), int(v)) for p, v in exceptions))
        self.default = int(default)
        self.depth = tuple(int(v) for v in depth)

    def at(self, node: Path) -> int:
        for p, v in self.exceptions:
            if p == node:
                return v
        return self.depth[len(node)] if len(node) < len(self.depth) else self.default


class LeavesOf(SymbolicSet):
    _fields = ("cascade",)

    def __init__(self, cascade):
        self.cascade = cascade


class Base(SymbolicSet):
    """The base set V(g) of the contour of ``schema`` (the subtree at ``at``).

    Only genuine successor choices are constrained: at a sequential node the
    successor label must be >= g(node); at a bundle the successors inside
    the box (labels of length <= g(node) with all components < g(node)) are
    removed; leaf suffixes are free.
    """

    _fields = ("schema", "g", "at")

    def __init__(self, schema, g: "Thresholds", at: Path = ()):
        self.schema, self.g, self.at = schema, g, tuple(at)


class Prefixed(SymbolicSet):
    _fields = ("path", "inner")

    def __init__(self, path: Path, inner: SymbolicSet):
        self.path, self.inner = tuple(path), inner


class Pullback(SymbolicSet):
    """f^-1(inner) for a structural leaf map ``fmap`` (see transforms)."""

    _fields = ("fmap", "inner")

    def __init__(self, fmap, inner: SymbolicSet):
        self.fmap, self.inner = fmap, inner


class Push(SymbolicSet):
    """f(inner) for a structural leaf map ``fmap``."""

    _fields = ("fmap", "inner")

    def __init__(self, fmap, inner: SymbolicSet):
        self.fmap, self.inner = fmap, inner


class Union(SymbolicSet):
    _fields = ("parts",)

    def __init__(self, parts: tuple[SymbolicSet, ...]):
        self.parts = parts


class Inter(SymbolicSet):
    _fields = ("parts",)

    def __init__(self, parts: tuple[SymbolicSet, ...]):
        self.parts = parts


class Compl(SymbolicSet):
    _fields = ("inner",)

    def __init__(self, inner: SymbolicSet):
        self.inner = inner


# -- smart constructors ---------------------------------------------------

def cone(path: Iterable[int] = ()) -> SymbolicSet:
    path = tuple(path)
    return ALL if not path else Cone(path)


def point(path: Iterable[int]) -> SymbolicSet:
    """The single label ``path`` (meaningful relative to a leaf space)."""
    return Cone(tuple(path)) if tuple(path) else ALL


def fin(paths: Iterable[Iterable[int]]) -> SymbolicSet:
    return union(*(point(p) for p in paths))


def thresh(exceptions: Mapping[Path, int] | Iterable[tuple[Path, int]] = (), default: int = 0,
           depth: Iterable[int] = ()) -> SymbolicSet:
    items = exceptions.items() if isinstance(exceptions, Mapping) else exceptions
    depth = list(depth)
    if any(v < 0 for v in depth) or default < 0:
        raise SetAlgebraError("thresholds are natural numbers")
    while depth and depth[-1] == default:
        depth.pop()
    table = {}
    for p, v in items:
        if v < 0:
            raise SetAlgebraError("thresholds are natural numbers")
        table[tuple(p)] = int(v)

    def base(p):
        return depth[len(p)] if len(p) < len(depth) else default

    table = {p: v for p, v in table.items() if v != base(p)}
    if not table and not depth and default == 0:
        return ALL
    return Thresh(table.items(), default, depth)


def prefixed(path: Iterable[int], inner: "SymbolicSet") -> "SymbolicSet":
    """{path + x : x in inner}."""
    path = tuple(path)
    if not path or inner is EMPTY:
        return inner
    if inner is ALL:
        return Cone(path)
    if isinstance(inner, Prefixed):
        return Prefixed(path + inner.path, inner.inner)
    return Prefixed(path, inner)


def restrict_path(s: "SymbolicSet", path: Iterable[int]) -> "SymbolicSet":
    """{x : path + x in s}."""
    for n in path:
        s = _restrict(s, n)
    return s


def leaves_of(cascade) -> SymbolicSet:
    from .cascade import BundleView

    v = cascade.view()
    if isinstance(v, BundleView):
        return inter(leaves_of(v.inner), v.within)
    return LeavesOf(cascade)


def base_set(schema, g: "Thresholds", at: Path = ()) -> SymbolicSet:
    from .cascade import BundleView, LeafView

    v = schema.view()
    if isinstance(v, LeafView):
        return ALL
    if isinstance(v, BundleView):
        k = g(at)
        return compl(fin(_box(v.inner, k))) if k else ALL
    return Base(schema, g, at)


def _box(c, k: int, rel: Path = ()) -> list[Path]:
    """Leaves of ``c`` with label length <= k and all components < k."""
    from .cascade import BundleView, LeafView

    v = c.view()
    if isinstance(v, LeafView):
        lab = rel + v.suffix
        return [lab] if len(lab) <= k and all(x < k for x in lab) else []
    if isinstance(v, BundleView):
        return [p for p in _box(v.inner, k, rel) if contains_path(v.within, p[len(rel):])]
    if len(rel) >= k:
        return []
    out = []
    for n, ch in v.first(k):
        if n < k:
            out += _box(ch, k, rel + (n,))
    return out


def union(*xs: SymbolicSet) -> SymbolicSet:
    parts = set()
    for x in xs:
        if x is ALL:
            return ALL
        if x is EMPTY:
            continue
        if isinstance(x, Union):
            parts.update(x.parts)
        else:
            parts.add(x)
    if not parts:
        return EMPTY
    for x in parts:
        if isinstance(x, Compl) and x.inner in parts:
            return ALL
    if len(parts) == 1:
        return next(iter(parts))
    return Union(tuple(sorted(parts)))


def inter(*xs: SymbolicSet) -> SymbolicSet:
    parts = set()
    for x in xs:
        if x is EMPTY:
            return EMPTY
        if x is ALL:
            continue
        if isinstance(x, Inter):
            parts.update(x.parts)
        else:
            parts.add(x)
    if not parts:
        return ALL
    for x in parts:
        if isinstance(x, Compl) and x.inner in parts:
            return EMPTY
    if len(parts) == 1:
        return next(iter(parts))
    return Inter(tuple(sorted(parts)))


def compl(x: SymbolicSet) -> SymbolicSet:
    if x is ALL:
        return EMPTY
    if x is EMPTY:
        return ALL
    if isinstance(x, Compl):
        return x.inner
    return Compl(x)


def pullback(fmap, inner: SymbolicSet) -> SymbolicSet:
    return fmap.pullback(inner)


def push(fmap, inner: SymbolicSet) -> SymbolicSet:
    return fmap.push(inner)


# -- threshold functions ----------------------------------------------------

class Thresholds(_Node):
    """A function from internal nodes to naturals: finite exceptions over a default."""

    _fields = ("exceptions", "default")

    def __init__(self, exceptions: Mapping[Path, int] | None = None, default: int = 0):
        self.default = int(default)
        self.exceptions = tuple(sorted((tuple(p), int(v)) for p, v in (exceptions or {}).items()
                                       if int(v) != self.default))

    def __call__(self, node: Path) -> int:
        return dict(self.exceptions).get(tuple(node), self.default)

    def table(self) -> dict[Path, int]:
        return dict(self.exceptions)

    def pointwise_max(self, other: "Thresholds") -> "Thresholds":
        keys = set(self.table()) | set(other.table())
        return Thresholds({k: max(self(k), other(k)) for k in keys},
                          max(self.default, other.default))

    def le(self, other: "Thresholds") -> bool:
        """Pointwise self <= other."""
        if self.default > other.default:
            return False
        keys = set(self.table()) | set(other.table())
        return all(self(k) <= other(k) for k in keys)

    def __repr__(self):
        return f"Thresholds({self.table()!r}, default={self.default})"


def v_of(schema, g: Thresholds) -> SymbolicSet:
    """The base set V(g) of the contour of ``schema``."""
    return thresh(g.table(), g.default)


# -- restriction to a child ---------------------------------------------------

def restrict(s: SymbolicSet, n: int) -> SymbolicSet:
    """The set {rest : (n,) + rest in s}."""
    return _restrict(s, n)


@lru_cache(maxsize=None)
def _restrict(s: SymbolicSet, n: int) -> SymbolicSet:
    if s is ALL or s is EMPTY:
        return s
    if isinstance(s, Cone):
        return cone(s.path[1:]) if s.path[0] == n else EMPTY
    if isinstance(s, Thresh):
        if n < s.at(()):
            return EMPTY
        sub = [(p[1:], v) for p, v in s.exceptions if p and p[0] == n]
        return thresh(sub, s.default, s.depth[1:])
    if isinstance(s, LeavesOf):
        return _restrict_leaves(s.cascade, n)
    if isinstance(s, Base):
        child = s.schema.view().child(n)
        if child is None or n < s.g(s.at):
            return EMPTY
        return base_set(child, s.g, s.at + (n,))
    if isinstance(s, Prefixed):
        return prefixed(s.path[1:], s.inner) if s.path[0] == n else EMPTY
    if isinstance(s, Pullback):
        return s.fmap.restrict_pullback(s.inner, n)
    if isinstance(s, Push):
        return s.fmap.restrict_push(s.inner, n)
    if isinstance(s, Union):
        return union(*(_restrict(x, n) for x in s.parts))
    if isinstance(s, Inter):
        return inter(*(_restrict(x, n) for x in s.parts))
    if isinstance(s, Compl):
        return compl(_restrict(s.inner, n))
    raise SetAlgebraError(f"unknown set term {s!r}")


def _restrict_leaves(c, n: int) -> SymbolicSet:
    from .cascade import LeafView

    v = c.view()
    if isinstance(v, LeafView):
        if v.suffix and v.suffix[0] == n:
            return cone(v.suffix[1:])
        return EMPTY
    child = v.child(n)
    return EMPTY if child is None else leaves_of(child)


def at_root(s: SymbolicSet) -> bool:
    """Whether the empty label () belongs to ``s``."""
    return _at_root(s)


@lru_cache(maxsize=None)
def _at_root(s: SymbolicSet) -> bool:
    if s is ALL:
        return True
    if s is EMPTY or isinstance(s, (Cone, Prefixed, Base)):
        return False
    if isinstance(s, Pullback):
        return s.fmap.pullback_at_root(s.inner)
    if isinstance(s, Push):
        return s.fmap.push_at_root(s.inner)
    if isinstance(s, Thresh):
        return True
    if isinstance(s, LeavesOf):
        from .cascade import LeafView

        v = s.cascade.view()
        return isinstance(v, LeafView) and not v.suffix
    if isinstance(s, Union):
        return any(_at_root(x) for x in s.parts)
    if isinstance(s, Inter):
        return all(_at_root(x) for x in s.parts)
    return not _at_root(s.inner)


def contains_path(s: SymbolicSet, path: Iterable[int]) -> bool:
    for n in path:
        s = _restrict(s, n)
        if s is ALL or s is EMPTY:
            break
    return _at_root(s)


def horizon(s: SymbolicSet) -> int:
    """Least N such that ``restrict(s, n)`` is generic for all n >= N.

    For sets without ``LeavesOf`` atoms the restriction is literally the
    same term for every n >= N.  ``LeavesOf`` atoms contribute the start of
    their cascade's uniform tail.
    """
    return _horizon(s)


@lru_cache(maxsize=None)
def _horizon(s: SymbolicSet) -> int:
    if s is ALL or s is EMPTY:
        return 0
    if isinstance(s, Cone):
        return s.path[0] + 1
    if isinstance(s, Thresh):
        h = s.at(())
        for p, _ in s.exceptions:
            if p:
                h = max(h, p[0] + 1)
        return h
    if isinstance(s, LeavesOf):
        from .cascade import LeafView

        v = s.cascade.view()
        if isinstance(v, LeafView):
            return v.suffix[0] + 1 if v.suffix else 0
        return v.generic_from()
    if isinstance(s, Prefixed):
        return s.path[0] + 1
    if isinstance(s, Base):
        d = len(s.at)
        h = max(s.schema.view().generic_from(), s.g(s.at))
        for p, _ in s.g.exceptions:
            if len(p) > d and p[:d] == s.at:
                h = max(h, p[d] + 1)
        return h
    if isinstance(s, (Pullback, Push)):
        return s.fmap.horizon(s.inner)
    if isinstance(s, (Union, Inter)):
        return max(_horizon(x) for x in s.parts)
    return _horizon(s.inner)


# -- normal forms -------------------------------------------------------------

def nnf(s: SymbolicSet) -> SymbolicSet:
    """Push complements down to atoms."""
    if isinstance(s, Compl):
        t = s.inner
        if isinstance(t, Union):
            return inter(*(nnf(compl(x)) for x in t.parts))
        if isinstance(t, Inter):
            return union(*(nnf(compl(x)) for x in t.parts))
        if isinstance(t, Compl):
            return nnf(t.inner)
        return s
    if isinstance(s, Union):
        return union(*(nnf(x) for x in s.parts))
    if isinstance(s, Inter):
        return inter(*(nnf(x) for x in s.parts))
    return s


def merge_thresh(ts: list[Thresh]) -> SymbolicSet:
    """V(g1) & V(g2) & ... = V(pointwise max)."""
    keys = {p for t in ts for p, _ in t.exceptions}
    d = max(len(t.depth) for t in ts)
    depth = [max(t.depth[k] if k < len(t.depth) else t.default for t in ts) for k in range(d)]
    return thresh({p: max(t.at(p) for t in ts) for p in keys},
                  max(t.default for t in ts), depth)


def _merge_thresholds(parts: list[SymbolicSet]) -> list[SymbolicSet]:
    ts = [p for p in parts if isinstance(p, Thresh)]
    if len(ts) < 2:
        return parts
    rest = [p for p in parts if not isinstance(p, Thresh)]
    return rest + [merge_thresh(ts)]


def normalize(s: SymbolicSet, max_regions: int = 4096) -> SymbolicSet:
    """Syntactic disjunctive normal form: a sorted union of regions.

    Each region is an intersection of literals (atoms or complemented
    atoms) with all positive thresholds merged into one.  Regions that are
    syntactically contradictory are dropped.
    """
    s = nnf(s)
    regions: list[list[SymbolicSet]]
    regions = _dnf(s, max_regions)
    out = []
    for lits in regions:
        lits = _merge_thresholds(lits)
        r = inter(*lits)
        if r is not EMPTY:
            out.append(r)
    return union(*out)


def _dnf(s: SymbolicSet, cap: int) -> list[list[SymbolicSet]]:
    if s is EMPTY:
        return []
    if s is ALL:
        return [[]]
    if isinstance(s, Union):
        out = []
        for x in s.parts:
            out.extend(_dnf(x, cap))
        return out
    if isinstance(s, Inter):
        acc: list[list[SymbolicSet]] = [[]]
        for x in s.parts:
            acc = [a + b for a in acc for b in _dnf(x, cap)]
            if len(acc) > cap:
                raise SetAlgebraError("normal form exceeds region cap")
        return acc
    return [[s]]


# -- decision procedures ------------------------------------------------------
#
# Every procedure takes the set and the ambient cascade.  A cascade view is
# one of LeafView / SeqView / BundleView (see cascade.py).

CHECK_STABILITY = True


def _split(view, s: SymbolicSet):
    """Special children (label, child, restricted set) and the generic label."""
    rep = max(view.generic_from(), _horizon(s))
    special = [(n, c) for n, c in view.explicit]
    special += [(n, view.tail(n)) for n in range(view.start, rep)]
    return special, rep


def _generic(fn, view, s: SymbolicSet, rep: int):
    a = fn(_restrict(s, rep), view.tail(rep))
    if CHECK_STABILITY:
        b = fn(_restrict(s, rep + 1), view.tail(rep + 1))
        if a != b:
            raise StabilizationError(f"{fn.__name__} disagrees at labels {rep}, {rep + 1} for {s}")
    return a


def _leaf_member(s: SymbolicSet, view) -> bool:
    return contains_path(s, view.suffix)


@lru_cache(maxsize=None)
def is_empty(s: SymbolicSet, c) -> bool:
    """No leaf of ``c`` lies in ``s``."""
    from .cascade import BundleView, LeafView

    if s is EMPTY:
        return True
    v = c.view()
    if isinstance(v, LeafView):
        return not _leaf_member(s, v)
    if isinstance(v, BundleView):
        return is_empty(inter(s, v.within), v.inner)
    if v.tail is None:
        return all(is_empty(_restrict(s, n), ch) for n, ch in v.explicit)
    special, rep = _split(v, s)
    if not all(is_empty(_restrict(s, n), ch) for n, ch in special):
        return False
    return _generic(is_empty, v, s, rep)


@lru_cache(maxsize=None)
def is_finite(s: SymbolicSet, c) -> bool:
    """Only finitely many leaves of ``c`` lie in ``s``."""
    from .cascade import BundleView, LeafView

    if s is EMPTY:
        return True
    v = c.view()
    if isinstance(v, LeafView):
        return True
    if isinstance(v, BundleView):
        return is_finite(inter(s, v.within), v.inner)
    if v.tail is None:
        return all(is_finite(_restrict(s, n), ch) for n, ch in v.explicit)
    special, rep = _split(v, s)
    if not all(is_finite(_restrict(s, n), ch) for n, ch in special):
        return False
    return _generic(is_empty, v, s, rep)


def contains(a: SymbolicSet, b: SymbolicSet, c) -> bool:
    """b is a subset of a, relative to the leaves of ``c``."""
    return is_empty(inter(b, compl(a)), c)


def equivalent(a: SymbolicSet, b: SymbolicSet, c) -> bool:
    return contains(a, b, c) and contains(b, a, c)


@lru_cache(maxsize=None)
def contour_member(s: SymbolicSet, c) -> bool:
    """``s`` belongs to the contour of ``c``.

    Leaf: the principal filter.  Bundle: the cofinite filter on its leaf
    successors.  Sequence: cofinitely many children n have s|n in their
    contour, i.e. the generic child does.
    """
    from .cascade import BundleView, LeafView

    v = c.view()
    if isinstance(v, LeafView):
        return _leaf_member(s, v)
    if isinstance(v, BundleView):
        return is_finite(inter(v.within, compl(s)), v.inner)
    if v.tail is None:
        raise SetAlgebraError("contour of a finitely branching node is undefined")
    _, rep = _split(v, s)
    return _generic(contour_member, v, s, rep)


@lru_cache(maxsize=None)
def kept(s: SymbolicSet, c) -> bool:
    """``c`` survives in the largest sequential subcascade with leaves in ``s``."""
    from .cascade import BundleView, LeafView

    v = c.view()
    if isinstance(v, LeafView):
        return _leaf_member(s, v)
    if isinstance(v, BundleView):
        return not is_finite(inter(s, v.within), v.inner)
    if v.tail is None:
        return False
    _, rep = _split(v, s)
    return _generic(kept, v, s, rep)


@lru_cache(maxsize=None)
def residual_inductive(s: SymbolicSet, c) -> bool:
    """Residuality by induction on the partition of ``c``.

    Rank 1: the set meets the leaves in a finite set.  Higher rank: all but
    finitely many children see a residual set.  A single leaf (rank 0) is
    residual iff it is not in the set.
    """
    from .cascade import BundleView, LeafView

    v = c.view()
    if isinstance(v, LeafView):
        return not _leaf_member(s, v)
    if isinstance(v, BundleView) or c.rank() == 1:
        return is_finite(s, c)
    if v.tail is None:
        raise SetAlgebraError("residuality needs a sequential node")
    _, rep = _split(v, s)
    return _generic(residual_inductive, v, s, rep)


def clear_caches() -> None:
    for f in (_restrict, _at_root, _horizon, is_empty, is_finite, contour_member,
              kept, residual_inductive):
        f.cache_clear()


# -- text syntax --------------------------------------------------------------
#
#   set    := union
#   union  := inter ('|' inter)*
#   inter  := unary ('&' unary)*
#   unary  := '~' unary | atom
#   atom   := 'ALL' | 'EMPTY' | 'CONE' path | 'FIN{' path (',' path)* '}'
#           | 'V(g){' entry (',' entry)* '}' | 'MAX[' schema ']' | '(' set ')'
#   entry  := ('*' | 'root' | path) '>=' int
#   path   := '(' int (',' int)* ')' | '()'

def _fmt_path(p: Path) -> str:
    return "(" + ",".join(map(str, p)) + ")"


def format_set(s: SymbolicSet) -> str:
    if s is ALL:
        return "ALL"
    if s is EMPTY:
        return "EMPTY"
    if isinstance(s, Cone):
        return "CONE" + _fmt_path(s.path)
    if isinstance(s, Thresh):
        entries = [f"*>={s.default}"] if s.default else []
        entries += [f"@{k}>={v}" for k, v in enumerate(s.depth)]
        for p, v in s.exceptions:
            entries.append(("root" if not p else _fmt_path(p)) + f">={v}")
        return "V(g){" + ", ".join(entries) + "}"
    if isinstance(s, LeavesOf):
        from .cascade import format_schema

        return "MAX[" + format_schema(s.cascade) + "]"
    if isinstance(s, Prefixed):
        return "AT" + _fmt_path(s.path) + "[" + format_set(s.inner) + "]"
    if isinstance(s, Base):
        from .cascade import format_schema

        g = format_set(Thresh(s.g.exceptions, s.g.default))
        at = _fmt_path(s.at) if s.at else ""
        return "BASE[" + format_schema(s.schema) + "]" + at + g
    if isinstance(s, (Pullback, Push)):
        head = "PULL" if isinstance(s, Pullback) else "PUSH"
        return f"{head}[{s.fmap.text()}][{format_set(s.inner)}]"
    if isinstance(s, Union):
        return "(" + " | ".join(format_set(x) for x in s.parts) + ")"
    if isinstance(s, Inter):
        return "(" + " & ".join(format_set(x) for x in s.parts) + ")"
    inner = format_set(s.inner)
    return "~" + inner


_SET_TOKEN = re.compile(r"\s*(ALL|EMPTY|CONE|AT|FIN\{|V\(g\)\{|MAX\[|BASE\[|PULL\[|PUSH\[|root|@\d+|>=|\d+|[()|&~,}*\[\]])")


def parse_set(text: str) -> SymbolicSet:
    pos = 0
    n = len(text)

    def err(msg):
        raise SetAlgebraError(f"{msg} at column {pos + 1}: {text!r}")

    def peek():
        m = _SET_TOKEN.match(text, pos)
        return m.group(1) if m else None

    def take(expect=None):
        nonlocal pos
        m = _SET_TOKEN.match(text, pos)
        if not m:
            err("unexpected character")
        tok = m.group(1)
        if expect is not None and tok != expect:
            err(f"expected {expect!r} got {tok!r}")
        pos = m.end()
        return tok

    def path():
        take("(")
        items = []
        if peek() == ")":
            take()
            return ()
        while True:
            tok = take()
            if not tok.isdigit():
                err("expected index")
            items.append(int(tok))
            if peek() == ",":
                take()
                continue
            take(")")
            return tuple(items)

    def union_():
        parts = [inter_()]
        while peek() == "|":
            take()
            parts.append(inter_())
        return union(*parts)

    def inter_():
        parts = [unary()]
        while peek() == "&":
            take()
            parts.append(unary())
        return inter(*parts)

    def unary():
        if peek() == "~":
            take()
            return compl(unary())
        return atom()

    def atom():
        nonlocal pos
        tok = peek()
        if tok == "ALL":
            take()
            return ALL
        if tok == "EMPTY":
            take()
            return EMPTY
        if tok == "CONE":
            take()
            return cone(path())
        if tok == "FIN{":
            take()
            pts = []
            if peek() != "}":
                pts.append(path())
                while peek() == ",":
                    take()
                    pts.append(path())
            take("}")
            return fin(pts)
        if tok == "V(g){":
            take()
            default = 0
            table = {}
            depth_table = {}
            while peek() != "}":
                key = peek()
                if key.startswith("@"):
                    take()
                    take(">=")
                    depth_table[int(key[1:])] = int(take())
                elif key == "*":
                    take()
                    take(">=")
                    default = int(take())
                elif key == "root":
                    take()
                    take(">=")
                    table[()] = int(take())
                else:
                    p = path()
                    take(">=")
                    table[p] = int(take())
                if peek() == ",":
                    take()
            take("}")
            depth = [depth_table.get(k, default)
                     for k in range(max(depth_table, default=-1) + 1)]
            return thresh(table, default, depth)
        if tok == "MAX[":
            take()
            from .cascade import parse_schema_prefix

            c, used = parse_schema_prefix(text[pos:])
            pos += used
            take("]")
            return leaves_of(c)
        if tok == "BASE[":
            take()
            from .cascade import parse_schema_prefix

            c, used = parse_schema_prefix(text[pos:])
            pos += used
            take("]")
            at = path() if peek() == "(" else ()
            t = atom()
            if t is ALL:
                return Base(c, Thresholds(), at)
            if not isinstance(t, Thresh) or t.depth:
                err("BASE needs a plain threshold")
            return Base(c, Thresholds(dict(t.exceptions), t.default), at)
        if tok == "AT":
            take()
            p = path()
            take("[")
            inner = union_()
            take("]")
            return prefixed(p, inner)
        if tok in ("PULL[", "PUSH["):
            take()
            from .transforms import parse_map_prefix

            f, used = parse_map_prefix(text[pos:])
            pos += used
            take("]")
            take("[")
            inner = union_()
            take("]")
            return pullback(f, inner) if tok == "PULL[" else push(f, inner)
        if tok == "(":
            take()
            v = union_()
            take(")")
            return v
        err(f"unexpected token {tok!r}")

    value = union_()
    if text[pos:].strip():
        err("trailing input")
    return value
