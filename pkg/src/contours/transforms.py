"""Leaf maps and rank-changing rewrites of cascades.

Leaf maps act on labels (paths).  Two families are symbolic:

* :class:`RuleMap` -- finitely many prefix rules (relabel a subtree, or send
  it to one label), identity elsewhere; pullbacks and images are built from
  :func:`setalg.prefixed` and :func:`setalg.restrict_path`;
* :class:`CollapseMap` -- every rank-1 block goes to one chosen successor;
  pullbacks and images are lazy set atoms resolved by recursion over the
  schema.

The maps of the finite-level construction (:class:`Thm31Map`) and the
glued map (:class:`GluedMap`) are pointwise only.
"""

from __future__ import annotations

import re
from typing import Iterable, Optional, Sequence

from . import setalg as sa
from .cascade import (
    BundleView, Cascade, CascadeError, Decrease, Destroy, Interp, LeafView, SeqView,
    DecreaseBy, completed, decrease, first_leaf, format_schema, parse_schema_prefix, sub,
)
from .ordinals import OMEGA, Ordinal, ordinal
from .setalg import ALL, EMPTY, SymbolicSet

Path = tuple[int, ...]


class TransformError(ValueError):
    pass


# -- symbolic leaf maps ------------------------------------------------------------

class LeafMap:
    def __call__(self, label: Path) -> Path:
        raise NotImplementedError

    def pullback(self, e: SymbolicSet) -> SymbolicSet:
        raise NotImplementedError

    def push(self, e: SymbolicSet, ambient: Optional[Cascade] = None) -> SymbolicSet:
        raise NotImplementedError

    def text(self) -> str:
        raise NotImplementedError

    def __repr__(self):
        return f"{type(self).__name__}({self.text()!r})"


class Rule(sa._Node):
    """``subst``: src+x -> dst+x.  ``const``: src+x -> dst."""

    _fields = ("kind", "src", "dst")

    def __init__(self, kind: str, src: Iterable[int], dst: Iterable[int]):
        if kind not in ("subst", "const"):
            raise TransformError(f"unknown rule kind {kind!r}")
        self.kind, self.src, self.dst = kind, tuple(src), tuple(dst)


def subst(src, dst) -> Rule:
    return Rule("subst", src, dst)


def const(src, dst) -> Rule:
    return Rule("const", src, dst)


class RuleMap(LeafMap, sa._Node):
    """Prefix rules; the longest matching source prefix wins; identity otherwise."""

    _fields = ("rules",)

    def __init__(self, rules: Iterable[Rule]):
        rules = tuple(sorted(rules, key=lambda r: (len(r.src), r.src)))
        if len({r.src for r in rules}) != len(rules):
            raise TransformError("two rules share a source prefix")
        self.rules = rules

    def _match(self, label: Path) -> Optional[Rule]:
        best = None
        for r in self.rules:
            if label[: len(r.src)] == r.src:
                best = r
        return best

    def __call__(self, label: Path) -> Path:
        label = tuple(label)
        r = self._match(label)
        if r is None:
            return label
        return r.dst + label[len(r.src):] if r.kind == "subst" else r.dst

    def _domain(self, r: Rule) -> SymbolicSet:
        longer = [sa.cone(q.src) for q in self.rules
                  if len(q.src) > len(r.src) and q.src[: len(r.src)] == r.src]
        return sa.inter(sa.cone(r.src), sa.compl(sa.union(*longer)))

    def _rest(self) -> SymbolicSet:
        return sa.compl(sa.union(*(sa.cone(r.src) for r in self.rules)))

    def pullback(self, e: SymbolicSet) -> SymbolicSet:
        parts = [sa.inter(self._rest(), e)]
        for r in self.rules:
            if r.kind == "subst":
                moved = sa.prefixed(r.src, sa.restrict_path(e, r.dst))
                parts.append(sa.inter(self._domain(r), moved))
            elif sa.contains_path(e, r.dst):
                parts.append(self._domain(r))
        return sa.union(*parts)

    def push(self, e: SymbolicSet, ambient: Optional[Cascade] = None) -> SymbolicSet:
        parts = [sa.inter(self._rest(), e)]
        for r in self.rules:
            piece = sa.inter(self._domain(r), e)
            if r.kind == "subst":
                parts.append(sa.prefixed(r.dst, sa.restrict_path(piece, r.src)))
            else:
                if ambient is None:
                    raise TransformError("image under a constant rule needs an ambient cascade")
                if not sa.is_empty(piece, ambient):
                    parts.append(sa.point(r.dst))
        return sa.union(*parts)

    def text(self) -> str:
        def fp(p):
            return "(" + ",".join(map(str, p)) + ")"
        return "rules " + " ".join(f"{r.kind}{fp(r.src)}->{fp(r.dst)}" for r in self.rules)


IDENTITY = RuleMap(())


def block_map(i: int) -> RuleMap:
    """x -> (i,)+x: transport onto block i."""
    return RuleMap([subst((), (i,))])


class CollapseMap(LeafMap, sa._Node):
    """Every leaf below a rank-1 node goes to that node's first leaf.

    Leaves hanging directly from nodes of rank >= 2 are fixed.
    """

    _fields = ("schema",)

    def __init__(self, schema: Cascade):
        self.schema = schema

    def __call__(self, label: Path) -> Path:
        label = tuple(label)
        c, i = self.schema, 0
        while True:
            r = c.rank()
            if r == 0:
                return label
            if r == 1:
                return label[:i] + first_leaf(c)
            nxt = c.view().child(label[i])
            if nxt is None:
                raise TransformError(f"{label} is not a leaf")
            c, i = nxt, i + 1

    def _child(self, n: int) -> Optional["CollapseMap"]:
        c = self.schema.view().child(n)
        return None if c is None else CollapseMap(c)

    def pullback(self, e: SymbolicSet) -> SymbolicSet:
        r = self.schema.rank()
        if r == 0:
            return e
        if r == 1:
            return ALL if sa.contains_path(e, first_leaf(self.schema)) else EMPTY
        return sa.Pullback(self, e)

    def push(self, e: SymbolicSet, ambient: Optional[Cascade] = None) -> SymbolicSet:
        r = self.schema.rank()
        if r == 0:
            s = self.schema.view().suffix
            return sa.point(s) if sa.contains_path(e, s) else EMPTY
        if r == 1:
            return EMPTY if sa.is_empty(e, self.schema) else sa.point(first_leaf(self.schema))
        return sa.Push(self, e)

    # protocol used by the Pullback / Push atoms
    def restrict_pullback(self, e: SymbolicSet, n: int) -> SymbolicSet:
        f = self._child(n)
        return EMPTY if f is None else f.pullback(sa.restrict(e, n))

    def restrict_push(self, e: SymbolicSet, n: int) -> SymbolicSet:
        f = self._child(n)
        return EMPTY if f is None else f.push(sa.restrict(e, n))

    def pullback_at_root(self, e: SymbolicSet) -> bool:
        return False

    def push_at_root(self, e: SymbolicSet) -> bool:
        return False

    def horizon(self, e: SymbolicSet) -> int:
        return max(self.schema.view().generic_from(), sa.horizon(e))

    def text(self) -> str:
        return "collapse " + format_schema(self.schema)


def collapse_map(schema: Cascade, choice: Optional[str] = None) -> CollapseMap:
    """The collapse map of a schema of rank >= 2 (successor choice: the first)."""
    if choice not in (None, "first"):
        raise TransformError("only the first-successor choice is supported")
    if schema.rank() < 2:
        raise TransformError("collapse needs rank >= 2")
    return CollapseMap(schema)


def parse_map_prefix(text: str) -> tuple[LeafMap, int]:
    m = re.match(r"\s*collapse\s+", text)
    if m:
        c, used = parse_schema_prefix(text[m.end():])
        return CollapseMap(c), m.end() + used
    m = re.match(r"\s*rules((?:\s+(?:subst|const)\([\d,]*\)->\([\d,]*\))*)", text)
    if m:
        rules = []
        for kind, a, b in re.findall(r"(subst|const)\(([\d,]*)\)->\(([\d,]*)\)", m.group(1)):
            rules.append(Rule(kind, [int(x) for x in a.split(",") if x],
                              [int(x) for x in b.split(",") if x]))
        return RuleMap(rules), m.end()
    raise TransformError(f"cannot parse map from {text!r}")


# -- the finite-level map ------------------------------------------------------------

def thm31_m(v: Sequence[int]) -> int:
    """m(v): least t in 1..n such that every component after position t is 1."""
    n = len(v)
    t = n
    while t > 1 and v[t - 1] == 1:
        t -= 1
    return t


class Thm31Map(LeafMap):
    """The map on n-sequences of positive integers (1-based labels).

    (i,1,...,1) -> (1,...,1); otherwise v -> (k_1..k_{m-2}, k_{m-1}+1, 1..1).
    With ``zero_based`` the map acts on paths of the complete cascade,
    i.e. on labels shifted down by one.
    """

    def __init__(self, n: int, zero_based: bool = False):
        if n < 1:
            raise TransformError("n must be positive")
        self.n, self.zero_based = n, zero_based

    def one_based(self, v: Sequence[int]) -> tuple[int, ...]:
        v = tuple(v)
        if len(v) != self.n or min(v) < 1:
            raise TransformError(f"{v} is not an {self.n}-sequence of positive integers")
        if all(k == 1 for k in v[1:]):
            return (1,) * self.n
        m = thm31_m(v)
        return v[: m - 2] + (v[m - 2] + 1,) + (1,) * (self.n - m + 1)

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        if self.zero_based:
            return tuple(k - 1 for k in self.one_based(tuple(k + 1 for k in v)))
        return self.one_based(v)

    def text(self) -> str:
        return f"thm31 {self.n}"


def thm31_f(n: int, zero_based: bool = False) -> Thm31Map:
    if n < 2:
        raise TransformError("n >= 2 required")
    return Thm31Map(n, zero_based)


def _zero_from_depth(n: int, t: int) -> SymbolicSet:
    """Paths of max T_n whose components at 0-based positions >= t are all 0."""
    parts = [sa.compl(sa.thresh({}, 0, [0] * j + [1])) for j in range(max(t, 0), n)]
    return sa.inter(*parts)


def thm31_image_level(n: int, i: int, literal: bool = True) -> SymbolicSet:
    """The level set {v : m(v) < n - i} on paths of max T_n.

    ``literal=False`` gives {v : m(v) <= n - i} instead.
    """
    if not 0 <= i <= n - 1:
        raise TransformError("need 0 <= i <= n-1")
    t = n - i - 1 if literal else n - i
    if t < 1:
        return EMPTY
    return _zero_from_depth(n, t)


def iterate_image(n: int, i: int, width: int, zero_based: bool = True) -> set:
    """f^i of the width-box of max T_n, intersected with the box."""
    import itertools

    f = Thm31Map(n, zero_based)
    lo = 0 if zero_based else 1
    box = set(itertools.product(range(lo, lo + width), repeat=n))
    cur = set(box)
    for _ in range(i):
        cur = {f(v) for v in cur}
    return cur & box


# -- the glued map -------------------------------------------------------------------

class RatRamp(sa._Node):
    """a_n = (num * n) // den + off."""

    _fields = ("num", "den", "off")

    def __init__(self, num: int, den: int = 1, off: int = 0):
        if den < 1 or num < 0 or off < 0:
            raise TransformError("invalid ramp")
        self.num, self.den, self.off = num, den, off

    def __call__(self, n: int) -> int:
        return self.num * n // self.den + self.off


def _omega_nodes(c: Cascade, path: Path = (), samples: int = 3):
    """Nodes of rank exactly w reachable through infinite-rank nodes (tail sampled)."""
    r = c.rank()
    if r.is_finite():
        return
    if r == OMEGA:
        yield path, c
        return
    v = c.view()
    kids = list(v.explicit)
    if v.tail is not None:
        kids += [(n, v.tail(n)) for n in range(v.start, v.start + samples)]
    for n, ch in kids:
        yield from _omega_nodes(ch, path + (n,), samples)


def validate_glue(schema: Cascade, a: RatRamp) -> Optional[str]:
    """None when ``a`` is admissible at every rank-w node, else the reason."""
    if a.num == 0:
        return "a_n does not tend to infinity"
    for path, v in _omega_nodes(schema):
        view = v.view()
        if view.tail is None:
            return f"node {path} is not sequential"
        if view.tail_step * a.den <= a.num:
            return f"r(v_n) - a_n does not tend to infinity at {path}"
        for n in range(0, view.start + 4 * a.den + 8):
            c = view.child(n)
            if c is not None and a(n) > int(c.rank()):
                return f"a_{n} = {a(n)} exceeds r(v_{n}) at {path}"
    return None


class GluedMap(LeafMap):
    """Finite-level maps applied inside every block T_{v,n} and glued."""

    def __init__(self, schema: Cascade, a: RatRamp):
        reason = validate_glue(schema, a)
        if reason:
            raise TransformError(reason)
        self.schema, self.a = completed(schema), a

    def __call__(self, label: Path) -> Path:
        label = tuple(label)
        c, i = self.schema, 0
        while True:
            r = c.rank()
            if r.is_finite():
                return label
            if r == OMEGA:
                n = label[i]
                rn = int(c.view().child(n).rank())
                an = self.a(n)
                cut = i + 1 + rn - an
                tail = label[cut:]
                if an == 0:
                    return label
                if an == 1:
                    return label[:cut] + (0,)
                return label[:cut] + Thm31Map(an, zero_based=True)(tail)
            c, i = c.view().child(label[i]), i + 1

    def text(self) -> str:
        return f"glued {self.a.num}/{self.a.den}+{self.a.off}"


def thm36_glued_map(schema: Cascade, a: RatRamp) -> GluedMap:
    return GluedMap(schema, a)


# -- destruction and rank decrease ---------------------------------------------------

def destroy_rank1(schema: Cascade) -> Cascade:
    if schema.rank() < 2:
        raise TransformError("destruction needs rank >= 2")
    return Destroy(schema)


def decrease_rank(schema: Cascade, target, beta_choice: Optional[tuple] = None) -> Cascade:
    """Decrease the rank of ``schema`` to ``target``.

    ``beta_choice`` = (base, step) caps the root sequence (infinite rank
    only): beta_n = min(r_n, base + step*n) for non-leaf children.  The
    result is checked to have rank ``target``.
    """
    target = ordinal(target)
    r = schema.rank()
    if not 1 <= target <= r:
        raise TransformError(f"cannot decrease rank {r} to {target}")
    if beta_choice is None or r.is_finite():
        return decrease(schema, target)
    base, step = beta_choice
    out = DecreaseBy(schema, target, base, step)
    try:
        got = out.rank()
    except CascadeError as e:
        raise TransformError(str(e)) from e
    if got != target:
        raise TransformError(f"sequence choice gives rank {got}")
    return out


# -- decreasing relation and its variants -------------------------------------------------

def same_leaves(a: Cascade, b: Cascade) -> bool:
    la, lb = sa.leaves_of(a), sa.leaves_of(b)
    return sa.is_empty(sa.inter(la, sa.compl(lb)), a) and sa.is_empty(sa.inter(lb, sa.compl(la)), b)


def _aligned(va: SeqView, vb: SeqView) -> Optional[tuple[SeqView, SeqView, int]]:
    k = max(va.start, vb.start, va.generic_from(), vb.generic_from())
    va, vb = va.extend_to(k), vb.extend_to(k)
    if [n for n, _ in va.explicit] != [n for n, _ in vb.explicit]:
        return None
    if (va.tail is None) != (vb.tail is None):
        return None
    return va, vb, k


def same_shape(a: Cascade, b: Cascade, samples: int = 3) -> bool:
    """Equal trees; uniform tails compared on ``samples`` representatives and rank data."""
    if a == b:
        return True
    va, vb = a.view(), b.view()
    if isinstance(va, LeafView) or isinstance(vb, LeafView):
        return isinstance(va, LeafView) and isinstance(vb, LeafView) and va.suffix == vb.suffix
    if isinstance(va, BundleView) or isinstance(vb, BundleView):
        return (isinstance(va, BundleView) and isinstance(vb, BundleView)
                and same_leaves(a, b))
    al = _aligned(va, vb)
    if al is None:
        return False
    va, vb, k = al
    if any(not same_shape(x, y, samples) for (_, x), (_, y) in zip(va.explicit, vb.explicit)):
        return False
    if va.tail is None:
        return True
    if (va.tail_base, va.tail_step) != (vb.tail_base, vb.tail_step):
        return False
    return all(same_shape(va.tail(n), vb.tail(n), samples) for n in range(k, k + samples))


def _nondecreasing(view: SeqView) -> bool:
    ranks = [c.rank() for _, c in view.explicit]
    if view.tail is not None:
        ranks.append(view.tail_base)
    return all(x <= y for x, y in zip(ranks, ranks[1:]))


def rel_decrease(v: Cascade, w: Cascade, samples: int = 3) -> bool:
    """v <| w: v is obtained from w by decreasing the rank."""
    if v == w:
        return True
    if v.rank() > w.rank() or not same_leaves(v, w):
        return False
    return _rd(v, w, samples)


def _rd(v: Cascade, w: Cascade, samples: int) -> bool:
    rv, rw = v.rank(), w.rank()
    if rv > rw:
        return False
    if rv == 0 or rw == 0:
        return rv == rw
    if rv == rw and same_shape(v, w, samples):
        return True
    if rv == 1:
        return isinstance(v.view(), BundleView)
    if rw.is_finite() and same_shape(v, Decrease(w, rv), samples):
        return True
    # node-wise rule (also covers finite ranks reached from infinite ones)
    va, vw = v.view(), w.view()
    if not (isinstance(va, SeqView) and isinstance(vw, SeqView)):
        return False
    al = _aligned(va, vw)
    if al is None or va.tail is None:
        return False
    va, vw, k = al
    if not _nondecreasing(va):
        return False
    pairs = list(zip((c for _, c in va.explicit), (c for _, c in vw.explicit)))
    pairs += [(va.tail(n), vw.tail(n)) for n in range(k, k + samples)]
    return all(_rd(x, y, samples) for x, y in pairs)


def rel_black1(v: Cascade, w: Cascade) -> bool:
    """max W in the contour of V and V restricted to max W <| W."""
    mw = sa.leaves_of(w)
    if not sa.contour_member(mw, v):
        return False
    return rel_decrease(sub(v, mw), w)


def rel_black2(v: Cascade, w: Cascade) -> bool:
    """max V in the contour of W and V <| W restricted to max V."""
    mv = sa.leaves_of(v)
    if not sa.contour_member(mv, w):
        return False
    return rel_decrease(v, sub(w, mv))


def interpolate(v: Cascade, w: Cascade, gamma) -> Cascade:
    """T of rank ``gamma`` with w <| T <| v, for w <| v."""
    gamma = ordinal(gamma)
    if not (w.rank() < gamma < v.rank()):
        raise TransformError("need r(w) < gamma < r(v)")
    if not rel_decrease(w, v):
        raise TransformError("w is not obtained from v by decreasing")
    t = Interp(v, w, gamma)
    if t.rank() != gamma:
        raise TransformError(f"interpolant has rank {t.rank()}")
    return t
