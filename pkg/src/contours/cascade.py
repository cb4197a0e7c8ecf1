"""Lazy, finitely presented cascades (well-founded ranked trees).

Every node class is an immutable term.  Its shape is exposed through
:meth:`Cascade.view`, which returns one of

* :class:`LeafView`   -- a maximal element (with an optional label suffix);
* :class:`SeqView`    -- finitely many explicitly listed children followed,
  from label ``start`` on, by a uniform family ``tail(n)`` whose ranks
  follow ``tail_base + tail_step*(n - start)``;
* :class:`BundleView` -- a rank-1 node whose successors are the maximal
  elements of another cascade (optionally cut down by a set).

Labels are global: the leaf reached by the child indices ``p`` has label
``p``; a bundle's successors keep the labels they had in the bundled tree.
"""

from __future__ import annotations

import re
from typing import Callable, Iterable, Mapping, Optional

from .ordinals import (
    ONE, OMEGA, ZERO, Ordinal, OrdinalError, ordinal, parse_ordinal, sup_plus_one,
    AffineRanks, format_ordinal,
)
from . import setalg as sa
from .setalg import ALL, SymbolicSet, _Node

Path = tuple[int, ...]


class CascadeError(ValueError):
    pass


# -- views ------------------------------------------------------------------------

class LeafView:
    __slots__ = ("suffix",)

    def __init__(self, suffix: Path = ()):
        self.suffix = tuple(suffix)


class BundleView:
    __slots__ = ("inner", "within")

    def __init__(self, inner: "Cascade", within: SymbolicSet = ALL):
        self.inner = inner
        self.within = within


class SeqView:
    __slots__ = ("explicit", "start", "tail", "tail_base", "tail_step", "_index")

    def __init__(self, explicit, start: int, tail: Optional[Callable[[int], "Cascade"]] = None,
                 tail_base=ZERO, tail_step: int = 0):
        self.explicit = tuple(explicit)
        self.start = start
        self.tail = tail
        self.tail_base = ordinal(tail_base)
        self.tail_step = tail_step
        self._index = dict(self.explicit)
        if any(n >= start for n, _ in self.explicit):
            raise CascadeError("explicit labels must precede the tail")

    def child(self, n: int) -> Optional["Cascade"]:
        c = self._index.get(n)
        if c is None and self.tail is not None and n >= self.start:
            c = self.tail(n)
        return c

    def tail_rank(self, n: int) -> Ordinal:
        return self.tail_base + self.tail_step * (n - self.start)

    def generic_from(self) -> int:
        """First tail label from which children are non-leaves (or all are leaves)."""
        if self.tail is None or self.tail_base >= 1 or self.tail_step == 0:
            return self.start
        return self.start + 1

    def extend_to(self, k: int) -> "SeqView":
        """Same node with tail children below ``k`` listed explicitly."""
        if k <= self.start or self.tail is None:
            return self
        extra = tuple((n, self.tail(n)) for n in range(self.start, k))
        return SeqView(self.explicit + extra, k, self.tail, self.tail_rank(k), self.tail_step)

    def items(self, upto: int):
        """(label, child) pairs with label < upto, in order."""
        out = [(n, c) for n, c in self.explicit if n < upto]
        if self.tail is not None:
            out += [(n, self.tail(n)) for n in range(self.start, upto)]
        return out

    def first(self, k: int):
        """The first ``k`` children in order."""
        out = list(self.explicit[:k])
        n = self.start
        while len(out) < k and self.tail is not None:
            out.append((n, self.tail(n)))
            n += 1
        return out


# -- base class -----------------------------------------------------------------------

class Cascade(_Node):
    def view(self):
        v = self.__dict__.get("_view")
        if v is None:
            v = self._make_view()
            self.__dict__["_view"] = v
        return v

    def _make_view(self):
        raise NotImplementedError

    def rank(self) -> Ordinal:
        r = self.__dict__.get("_rank")
        if r is None:
            r = _rank_of_view(self.view())
            self.__dict__["_rank"] = r
        return r

    def __repr__(self):
        return f"Cascade({format_schema(self)!r})"

    def __str__(self):
        return format_schema(self)


def _rank_of_view(v) -> Ordinal:
    if isinstance(v, LeafView):
        return ZERO
    if isinstance(v, BundleView):
        return ONE
    prefix = [c.rank() for _, c in v.explicit]
    if v.tail is None:
        if not prefix:
            raise CascadeError("internal node without children")
        return sup_plus_one(prefix)
    return sup_plus_one(AffineRanks(tuple(prefix), v.tail_base, v.tail_step))


class Leaf(Cascade):
    _fields = ("suffix",)

    def __init__(self, suffix: Iterable[int] = ()):
        self.suffix = tuple(suffix)

    def _make_view(self):
        return LeafView(self.suffix)


LEAF = Leaf()


class Complete(Cascade):
    """T_k: every internal node has children 0, 1, 2, ... and depth is k."""

    _fields = ("k",)

    def __init__(self, k: int):
        if k < 0:
            raise CascadeError("negative rank")
        self.k = int(k)

    def _make_view(self):
        if self.k == 0:
            return LeafView()
        child = LEAF if self.k == 1 else Complete(self.k - 1)
        return SeqView((), 0, lambda n: child, self.k - 1, 0)


def complete(k: int) -> Cascade:
    return LEAF if k == 0 else Complete(k)


class Repeat(_Node):
    _fields = ("child",)

    def __init__(self, child: Cascade):
        self.child = child


class Ramp(_Node):
    """Tail child j is T_{base + step*j} with ``top`` grafted on every leaf."""

    _fields = ("base", "step", "top")

    def __init__(self, base: int, step: int, top: Cascade = LEAF):
        if base < 0 or step < 0:
            raise CascadeError("ramp parameters are natural numbers")
        self.base, self.step, self.top = int(base), int(step), top

    def child(self, j: int) -> Cascade:
        return graft(complete(self.base + self.step * j), self.top)


class Seq(Cascade):
    """(n) <- children: explicit ``children`` at labels 0..k-1, then ``tail``.

    ``tail`` is a :class:`Repeat`, a :class:`Ramp` or ``None`` (finitely
    branching node).
    """

    _fields = ("children", "tail")

    def __init__(self, children: Iterable[Cascade] = (), tail=None):
        self.children = tuple(children)
        self.tail = tail
        if tail is None and not self.children:
            raise CascadeError("a node needs children")

    def _make_view(self):
        k = len(self.children)
        explicit = tuple(enumerate(self.children))
        t = self.tail
        if t is None:
            return SeqView(explicit, k)
        if isinstance(t, Repeat):
            return SeqView(explicit, k, lambda n: t.child, t.child.rank(), 0)
        return SeqView(explicit, k, lambda n: t.child(n - k), t.top.rank() + t.base, t.step)


class Graft(Cascade):
    """Confluence: ``top`` attached to every leaf of ``base`` except where overridden."""

    _fields = ("base", "top", "overrides")

    def __init__(self, base: Cascade, top: Cascade, overrides=()):
        self.base, self.top = base, top
        items = overrides.items() if isinstance(overrides, Mapping) else overrides
        self.overrides = tuple(sorted((tuple(p), c) for p, c in items))

    def _make_view(self):
        bv = self.base.view()
        ov = dict(self.overrides)
        if isinstance(bv, LeafView):
            if bv.suffix:
                raise CascadeError("cannot graft onto a relabelled leaf")
            return ov.get((), self.top).view()
        if isinstance(bv, BundleView):
            raise CascadeError("cannot graft onto a bundled node")
        firsts = {p[0] for p in ov if p}
        if bv.tail is not None and firsts:
            bv = bv.extend_to(max(firsts) + 1)

        def sub(n, c):
            return graft(c, self.top, {p[1:]: x for p, x in ov.items() if p and p[0] == n})

        explicit = tuple((n, sub(n, c)) for n, c in bv.explicit)
        if bv.tail is None:
            return SeqView(explicit, bv.start)
        tail, top = bv.tail, self.top
        return SeqView(explicit, bv.start, lambda n: graft(tail(n), top),
                       top.rank() + bv.tail_base, bv.tail_step)


def graft(base: Cascade, top: Cascade, overrides: Mapping[Path, Cascade] | None = None) -> Cascade:
    overrides = dict(overrides or {})
    if () in overrides:
        return overrides[()]
    if base == LEAF and not overrides:
        return top
    if top == LEAF and not overrides:
        return base
    return Graft(base, top, overrides)


def confluence(w: Cascade, leaves_to: Mapping[Path, Cascade] | Cascade,
               default: Cascade | None = None) -> Cascade:
    """W <- V_w.  ``leaves_to`` maps leaf paths of ``w`` (relative) to cascades.

    A single cascade is attached to every leaf.  Leaves missing from the map
    receive ``default`` (a plain leaf if not given).
    """
    if isinstance(leaves_to, Cascade):
        return graft(w, leaves_to)
    return graft(w, default or LEAF, leaves_to)


def sequence(children: Iterable[Cascade] = (), tail=None) -> Cascade:
    """(n) <- V_n with explicit children then a Repeat/Ramp tail."""
    return Seq(children, tail)


class Bundle(Cascade):
    """Rank-1 node whose successors are the leaves of ``inner`` lying in ``within``."""

    _fields = ("inner", "within")

    def __init__(self, inner: Cascade, within: SymbolicSet = ALL):
        self.inner, self.within = inner, within

    def _make_view(self):
        return BundleView(self.inner, self.within)


class Sub(Cascade):
    """U-down: the largest sequential subcascade with leaves in ``keep``.

    Only meaningful when the node is kept (see :func:`setalg.kept`).
    """

    _fields = ("inner", "keep")

    def __init__(self, inner: Cascade, keep: SymbolicSet):
        self.inner, self.keep = inner, keep

    def _make_view(self):
        iv = self.inner.view()
        if isinstance(iv, LeafView):
            return iv
        if isinstance(iv, BundleView):
            return BundleView(iv.inner, sa.inter(iv.within, self.keep))
        s = self.keep
        if iv.tail is None:
            explicit = [(n, sub(c, sa.restrict(s, n))) for n, c in iv.explicit
                        if sa.kept(sa.restrict(s, n), c)]
            return SeqView(explicit, iv.start)
        special, rep = sa._split(iv, s)
        explicit = [(n, sub(c, sa.restrict(s, n))) for n, c in special
                    if sa.kept(sa.restrict(s, n), c)]
        if not sa.kept(sa.restrict(s, rep), iv.tail(rep)):
            raise CascadeError("set is not in the contour of this node")
        tail = iv.tail
        return SeqView(explicit, rep, lambda n: sub(tail(n), sa.restrict(s, n)),
                       iv.tail_rank(rep), iv.tail_step)


def sub(c: Cascade, keep: SymbolicSet) -> Cascade:
    if keep is ALL:
        return c
    if isinstance(c.view(), LeafView):
        return c
    return Sub(c, keep)


def strip(c: Cascade) -> Cascade:
    """Undo bundling and destruction: the tree whose leaves ``c`` keeps."""
    while True:
        if isinstance(c, (Destroy, Decrease)):
            c = c.inner
        elif isinstance(c, Bundle) and c.within is ALL:
            c = c.inner
        else:
            return c


def _map_tail_from(view: SeqView, min_rank: int):
    """Extend ``view`` so every tail child has rank >= min_rank, if that happens."""
    if view.tail is None:
        return view, False
    if view.tail_base >= min_rank:
        return view, True
    if view.tail_step == 0:
        return view, False
    j = 0
    while view.tail_rank(view.start + j) < min_rank:
        j += 1
    return view.extend_to(view.start + j), True


class Destroy(Cascade):
    """Removal of rank-1 nodes sitting directly below rank-2 nodes."""

    _fields = ("inner",)

    def __init__(self, inner: Cascade):
        self.inner = inner

    def _make_view(self):
        r = self.inner.rank()
        if r < 2:
            raise CascadeError("destruction needs rank >= 2")
        if r == 2:
            return BundleView(strip(self.inner))
        iv, mapped = _map_tail_from(self.inner.view(), 2)
        explicit = tuple((n, destroy(c)) for n, c in iv.explicit)
        if iv.tail is None:
            return SeqView(explicit, iv.start)
        if not mapped:
            return SeqView(explicit, iv.start, iv.tail, iv.tail_base, iv.tail_step)
        tail = iv.tail
        base = iv.tail_base.sub_finite(1) if iv.tail_base.is_finite() else iv.tail_base
        return SeqView(explicit, iv.start, lambda n: destroy(tail(n)), base, iv.tail_step)


def destroy(c: Cascade) -> Cascade:
    """Destroy when rank >= 2, identity below."""
    return Destroy(c) if c.rank() >= 2 else c


# -- rank-decrease machinery ------------------------------------------------------------

class Affine:
    """The ordinal sequence n -> base + step*(n - origin), for n >= origin."""

    __slots__ = ("base", "step", "origin")

    def __init__(self, base, step: int, origin: int):
        self.base, self.step, self.origin = ordinal(base), step, origin

    def at(self, n: int) -> Ordinal:
        return self.base + self.step * (n - self.origin)


def eventual_order(a: Affine, b: Affine) -> tuple[int, int]:
    """(sign, N): for all n >= N, compare(a_n, b_n) == sign."""
    n = max(a.origin, b.origin)
    la, lb = a.at(n).limit_part(), b.at(n).limit_part()
    if la != lb:
        return (1 if la > lb else -1), n
    if a.step == b.step:
        x, y = a.at(n), b.at(n)
        return (x > y) - (x < y), n
    sign = 1 if a.step > b.step else -1
    while True:
        x, y = a.at(n), b.at(n)
        if (x > y) - (x < y) == sign:
            return sign, n
        n += 1


def ceiling_rule(delta: Ordinal) -> Affine:
    """Default caps G_n with lim(min(r_n, G_n) + 1) = delta.

    Successor delta: constant delta - 1.  delta = L + w: the ramp L + n (+1
    when L = 0 so that G_0 >= 1).  Other limits are not supported.
    """
    delta = ordinal(delta)
    if delta.is_successor():
        return Affine(delta.sub_finite(1), 0, 0)
    e, c = delta.terms[-1]
    if e != ONE:
        raise CascadeError(f"decrease to {delta} is not supported (needs successor or L+w)")
    lead = Ordinal(delta.terms[:-1] + (((ONE, c - 1),) if c > 1 else ()))
    return Affine(lead + (1 if lead.is_zero() else 0), 1, 0)


def _seq_ranks(view: SeqView) -> Affine:
    return Affine(view.tail_base, view.tail_step, view.start)


class Decrease(Cascade):
    """Decreasing the rank of ``inner`` to ``target`` (default sequence choice)."""

    _fields = ("inner", "target")

    def __init__(self, inner: Cascade, target):
        self.inner, self.target = inner, ordinal(target)

    def _make_view(self):
        r, t = self.inner.rank(), self.target
        if t > r or t < 1:
            raise CascadeError(f"cannot decrease rank {r} to {t}")
        if t == r:
            return self.inner.view()
        if t == 1:
            return BundleView(strip(self.inner))
        if r.is_finite():
            c = self.inner
            for _ in range(int(r) - int(t)):
                c = Destroy(c)
            return c.view()
        cap = self._cap()
        iv = self.inner.view()
        if not isinstance(iv, SeqView) or iv.tail is None:
            raise CascadeError("infinite rank needs a sequential node")
        sign, n = eventual_order(_seq_ranks(iv), cap)
        iv = iv.extend_to(max(n, iv.generic_from()))

        def child(m, c):
            rc = c.rank()
            if rc == 0:
                return c
            b = min(rc, cap.at(m))
            return c if b == rc else decrease(c, b)

        explicit = tuple((m, child(m, c)) for m, c in iv.explicit)
        tail = iv.tail
        if sign <= 0:
            v = SeqView(explicit, iv.start, tail, iv.tail_base, iv.tail_step)
        else:
            v = SeqView(explicit, iv.start, lambda m: decrease(tail(m), cap.at(m)),
                        cap.at(iv.start), cap.step)
        got = _rank_of_view(v)
        if got != t:
            raise CascadeError(f"no admissible sequence reaches rank {t} (got {got})")
        return v


    def _cap(self) -> Affine:
        return ceiling_rule(self.target)


class DecreaseBy(Decrease):
    """Decrease with a chosen root cap: beta_n = min(r_n, base + step*n)."""

    _fields = ("inner", "target", "base", "step")

    def __init__(self, inner: Cascade, target, base, step: int):
        super().__init__(inner, target)
        self.base, self.step = ordinal(base), int(step)

    def _cap(self) -> Affine:
        return Affine(self.base, self.step, 0)


def decrease(c: Cascade, target) -> Cascade:
    target = ordinal(target)
    return c if c.rank() == target else Decrease(c, target)


class Interp(Cascade):
    """A cascade T of rank ``gamma`` with w <| T <| v, where w <| v."""

    _fields = ("v", "w", "gamma")

    def __init__(self, v: Cascade, w: Cascade, gamma):
        self.v, self.w, self.gamma = v, w, ordinal(gamma)

    def _make_view(self):
        v, w, g = self.v, self.w, self.gamma
        if not (w.rank() <= g <= v.rank()):
            raise CascadeError("interpolation rank out of range")
        if g == v.rank():
            return v.view()
        if g == w.rank():
            return w.view()
        if w.rank() == 1 or v.rank().is_finite():
            return Decrease(v, g).view()
        vv, wv = v.view(), w.view()
        if not (isinstance(vv, SeqView) and isinstance(wv, SeqView)):
            raise CascadeError("interpolation needs sequential nodes")
        cap = ceiling_rule(g)
        rv, rw = _seq_ranks(vv), _seq_ranks(wv)
        s1, n1 = eventual_order(rv, cap)
        low = rv if s1 <= 0 else cap
        s2, n2 = eventual_order(rw, low)
        k = max(n1, n2, vv.generic_from(), wv.generic_from(), vv.start, wv.start)
        vv, wv = vv.extend_to(k), wv.extend_to(k)
        if [n for n, _ in vv.explicit] != [n for n, _ in wv.explicit]:
            raise CascadeError("interpolation needs equal label sets")

        def child(m, a, b):
            ra, rb = a.rank(), b.rank()
            gm = max(rb, min(ra, cap.at(m)))
            if gm == rb:
                return b
            if gm == ra:
                return a
            return Interp(a, b, gm)

        explicit = tuple((m, child(m, a, wv.child(m))) for m, a in vv.explicit)
        vt, wt = vv.tail, wv.tail
        if s2 >= 0:
            v_ = SeqView(explicit, k, wt, wv.tail_base, wv.tail_step)
        elif s1 <= 0:
            v_ = SeqView(explicit, k, vt, vv.tail_base, vv.tail_step)
        else:
            v_ = SeqView(explicit, k, lambda m: Interp(vt(m), wt(m), cap.at(m)),
                         cap.at(k), cap.step)
        got = _rank_of_view(v_)
        if got != g:
            raise CascadeError(f"interpolation reached rank {got}, wanted {g}")
        return v_


def first_leaf(c: Cascade) -> Path:
    """Relative label of the first leaf along first children."""
    out: list[int] = []
    while True:
        v = c.view()
        if isinstance(v, LeafView):
            return tuple(out) + v.suffix
        if isinstance(v, BundleView):
            c = v.inner if v.within is ALL else _first_in(v)
            if isinstance(c, tuple):
                return tuple(out) + c
            continue
        n, c = v.first(1)[0]
        out.append(n)


def _first_in(v: BundleView) -> Path:
    for p in iter_leaves(v.inner, 64, limit=1, within=v.within):
        return p
    raise CascadeError("empty bundle")


class Collapse(Cascade):
    """Image under the collapse map: each rank-1 node becomes its first successor."""

    _fields = ("inner",)

    def __init__(self, inner: Cascade):
        self.inner = inner

    def _make_view(self):
        r = self.inner.rank()
        if r == 0:
            return self.inner.view()
        if r == 1:
            return LeafView(first_leaf(self.inner))
        iv, mapped = _map_tail_from(self.inner.view(), 1)
        explicit = tuple((n, collapse(c)) for n, c in iv.explicit)
        if iv.tail is None:
            return SeqView(explicit, iv.start)
        tail = iv.tail
        base = iv.tail_base.sub_finite(1) if iv.tail_base.is_finite() else iv.tail_base
        return SeqView(explicit, iv.start, lambda n: collapse(tail(n)), base, iv.tail_step)


def collapse(c: Cascade) -> Cascade:
    return c if c.rank() == 0 else Collapse(c)


class Completed(Cascade):
    """Every finite-rank subtree replaced by the complete cascade of its rank."""

    _fields = ("inner",)

    def __init__(self, inner: Cascade):
        self.inner = inner

    def _make_view(self):
        r = self.inner.rank()
        if r.is_finite():
            return complete(int(r)).view()
        iv = self.inner.view()
        explicit = tuple((n, completed(c)) for n, c in iv.explicit)
        if iv.tail is None:
            return SeqView(explicit, iv.start)
        tail = iv.tail
        return SeqView(explicit, iv.start, lambda n: completed(tail(n)), iv.tail_base, iv.tail_step)


def completed(c: Cascade) -> Cascade:
    r = c.rank()
    if r.is_finite():
        return complete(int(r))
    return c if isinstance(c, Completed) else Completed(c)


# -- queries ---------------------------------------------------------------------------

def rank(c: Cascade, at: Path = ()) -> Ordinal:
    return subcascade_up(c, at).rank()


def subcascade_up(c: Cascade, path: Iterable[int]) -> Cascade:
    """v-up: the subtree at ``path`` (a node path, or a leaf label inside a bundle)."""
    path = tuple(path)
    i = 0
    while i < len(path):
        v = c.view()
        if isinstance(v, LeafView):
            if v.suffix == path[i:]:
                return LEAF
            raise CascadeError(f"no node at {path}")
        if isinstance(v, BundleView):
            if sa.contains_path(sa.inter(sa.leaves_of(v.inner), v.within), path[i:]):
                return LEAF
            raise CascadeError(f"no node at {path}")
        nxt = v.child(path[i])
        if nxt is None:
            raise CascadeError(f"no node at {path}")
        c = nxt
        i += 1
    return c


def subcascade_down(c: Cascade, keep: SymbolicSet) -> Cascade:
    """U-down for a set ``keep`` in the contour of ``c``."""
    if not sa.contour_member(keep, c):
        raise CascadeError(f"{keep} is not in the contour")
    return sub(c, keep)


def is_monotone(c: Cascade, samples: int = 3) -> tuple[bool, Optional[Path]]:
    """Non-decreasing child ranks at every node.

    Tails are uniform families; they are inspected at ``samples``
    representative labels.  Returns (ok, witness path of a violating node).
    """
    seen: set = set()

    def walk(c, path):
        if c in seen:
            return None
        seen.add(c)
        v = c.view()
        if not isinstance(v, SeqView):
            return None
        ranks = [ch.rank() for _, ch in v.explicit]
        if v.tail is not None:
            ranks.append(v.tail_base)
        if any(a > b for a, b in zip(ranks, ranks[1:])):
            return path
        kids = list(v.explicit)
        if v.tail is not None:
            kids += [(n, v.tail(n)) for n in range(v.start, v.start + samples)]
        for n, ch in kids:
            w = walk(ch, path + (n,))
            if w is not None:
                return w
        return None

    w = walk(c, ())
    return w is None, w


def is_sequential(c: Cascade, samples: int = 3) -> bool:
    def walk(c):
        v = c.view()
        if isinstance(v, LeafView):
            return True
        if isinstance(v, BundleView):
            return not sa.is_finite(v.within, v.inner)
        if v.tail is None:
            return False
        kids = [ch for _, ch in v.explicit] + [v.tail(n) for n in range(v.start, v.start + samples)]
        return all(walk(k) for k in kids)

    return walk(c)


# -- finite truncation -------------------------------------------------------------------

class FiniteTruncation:
    """Explicit finite tree: the first ``width`` children at every node.

    Nodes are identified by paths; leaves by their labels.  A bundle's
    successors are the leaves of the width-truncated bundled tree.
    """

    def __init__(self, schema: Cascade, width: int):
        if width < 1:
            raise CascadeError("width must be positive")
        self.schema, self.width = schema, width
        self.children: dict[Path, list[Path]] = {}
        self.leaves: list[Path] = []
        self._build(schema, ())

    def _build(self, c: Cascade, path: Path):
        v = c.view()
        if isinstance(v, LeafView):
            label = path + v.suffix
            self.leaves.append(label)
            self.children.setdefault(label, [])
            return
        if isinstance(v, BundleView):
            kids = [path + p for p in iter_leaves(v.inner, self.width, within=v.within)]
            self.children[path] = kids
            for k in kids:
                self.children.setdefault(k, [])
            self.leaves.extend(kids)
            return
        self.children[path] = []
        for n, ch in v.first(self.width):
            cv = ch.view()
            node = path + (n,)
            if isinstance(cv, LeafView):
                node = node + cv.suffix
            self.children[path].append(node)
            self._build(ch, path + (n,))

    @property
    def nodes(self) -> list[Path]:
        return list(self.children)

    def depth(self) -> int:
        def d(p):
            ks = self.children.get(p, [])
            return 0 if not ks else 1 + max(d(k) for k in ks)
        return d(())

    def __len__(self):
        return len(self.children)


def truncate(c: Cascade, width: int) -> FiniteTruncation:
    return FiniteTruncation(c, width)


def iter_leaves(c: Cascade, width: int, limit: Optional[int] = None,
                within: SymbolicSet = ALL):
    """Leaf labels (relative) of the width-truncation, in tree order."""
    count = 0

    def walk(c, path, s):
        nonlocal count
        v = c.view()
        if isinstance(v, LeafView):
            if sa.contains_path(s, v.suffix):
                count += 1
                yield path + v.suffix
            return
        if isinstance(v, BundleView):
            yield from walk(v.inner, path, sa.inter(s, v.within))
            return
        for n, ch in v.first(width):
            if limit is not None and count >= limit:
                return
            r = sa.restrict(s, n)
            if r is not sa.EMPTY:
                yield from walk(ch, path + (n,), r)

    for p in walk(c, (), within):
        yield p
        if limit is not None and count >= limit:
            return


# -- text format -------------------------------------------------------------------------
#
#   schema := (leaf INT*) | (complete rank INT) | (seq (schema*) TAIL)
#           | (graft schema schema (at PATH schema)*)
#           | (bundle schema [SET]?) | (sub schema [SET])
#           | (destroy schema) | (decrease schema ORD) | (collapse schema)
#           | (interp schema schema ORD)
#   TAIL   := (repeat schema) | (ranks affine base INT step INT schema) | (end)
#   PATH   := / | /INT(/INT)*        ORD := ordinal text, in <...> if it has parens
#   SET    := set text (see setalg), in square brackets

def _fmt_ord(o: Ordinal) -> str:
    s = format_ordinal(o)
    return f"<{s}>" if "(" in s else s


def _fmt_path(p: Path) -> str:
    return "/" + "/".join(map(str, p))


def format_schema(c: Cascade) -> str:
    if isinstance(c, Leaf):
        return "(leaf" + "".join(f" {i}" for i in c.suffix) + ")"
    if isinstance(c, Complete):
        return f"(complete rank {c.k})"
    if isinstance(c, Seq):
        kids = " ".join(format_schema(x) for x in c.children)
        t = c.tail
        if t is None:
            tail = "(end)"
        elif isinstance(t, Repeat):
            tail = f"(repeat {format_schema(t.child)})"
        else:
            tail = f"(ranks affine base {t.base} step {t.step} {format_schema(t.top)})"
        return f"(seq ({kids}) {tail})"
    if isinstance(c, Graft):
        ov = "".join(f" (at {_fmt_path(p)} {format_schema(x)})" for p, x in c.overrides)
        return f"(graft {format_schema(c.base)} {format_schema(c.top)}{ov})"
    if isinstance(c, Bundle):
        extra = "" if c.within is ALL else f" [{sa.format_set(c.within)}]"
        return f"(bundle {format_schema(c.inner)}{extra})"
    if isinstance(c, Sub):
        return f"(sub {format_schema(c.inner)} [{sa.format_set(c.keep)}])"
    if isinstance(c, Destroy):
        return f"(destroy {format_schema(c.inner)})"
    if isinstance(c, DecreaseBy):
        return (f"(decrease {format_schema(c.inner)} {_fmt_ord(c.target)}"
                f" by {_fmt_ord(c.base)} {c.step})")
    if isinstance(c, Decrease):
        return f"(decrease {format_schema(c.inner)} {_fmt_ord(c.target)})"
    if isinstance(c, Collapse):
        return f"(collapse {format_schema(c.inner)})"
    if isinstance(c, Completed):
        return f"(completed {format_schema(c.inner)})"
    if isinstance(c, Interp):
        return f"(interp {format_schema(c.v)} {format_schema(c.w)} {_fmt_ord(c.gamma)})"
    raise CascadeError(f"cannot format {type(c).__name__}")


_TOK = re.compile(r"\s*(\(|\)|<[^>]*>|/(?:\d+(?:/\d+)*)?|\[|[A-Za-z0-9_^*+]+)")


def parse_schema_prefix(text: str) -> tuple[Cascade, int]:
    """Parse one schema at the start of ``text``; return it and characters used."""
    pos = 0

    def err(msg):
        raise CascadeError(f"{msg} at column {pos + 1}: {text!r}")

    def peek():
        m = _TOK.match(text, pos)
        return m.group(1) if m else None

    def take(expect=None):
        nonlocal pos
        m = _TOK.match(text, pos)
        if not m:
            err("unexpected character")
        tok = m.group(1)
        if expect is not None and tok != expect:
            err(f"expected {expect!r}, got {tok!r}")
        pos = m.end()
        return tok

    def integer():
        t = take()
        if not t.isdigit():
            err("expected integer")
        return int(t)

    def ord_():
        t = take()
        try:
            return parse_ordinal(t[1:-1] if t.startswith("<") else t)
        except OrdinalError as e:
            err(str(e))

    def bracket_set():
        nonlocal pos
        take("[")
        depth, i = 1, pos
        while i < len(text) and depth:
            depth += {"[": 1, "]": -1}.get(text[i], 0)
            i += 1
        if depth:
            err("unbalanced [")
        body = text[pos:i - 1]
        pos = i
        return sa.parse_set(body)

    def path():
        t = take()
        if not t.startswith("/"):
            err("expected path")
        return tuple(int(x) for x in t[1:].split("/") if x)

    def schema():
        take("(")
        head = take()
        if head == "leaf":
            suffix = []
            while peek() != ")":
                suffix.append(integer())
            take(")")
            return Leaf(suffix)
        if head == "complete":
            if peek() == "rank":
                take()
            k = integer()
            take(")")
            return Complete(k)
        if head == "seq":
            take("(")
            kids = []
            while peek() != ")":
                kids.append(schema())
            take(")")
            take("(")
            kind = take()
            if kind == "end":
                tail = None
            elif kind == "repeat":
                tail = Repeat(schema())
            elif kind == "ranks":
                take("affine")
                take("base")
                b = integer()
                take("step")
                s = integer()
                tail = Ramp(b, s, schema())
            else:
                err(f"unknown tail {kind!r}")
            take(")")
            take(")")
            return Seq(kids, tail)
        if head == "graft":
            base, top = schema(), schema()
            ov = {}
            while peek() == "(":
                take("(")
                take("at")
                p = path()
                ov[p] = schema()
                take(")")
            take(")")
            return Graft(base, top, ov)
        if head == "bundle":
            inner = schema()
            within = bracket_set() if peek() == "[" else ALL
            take(")")
            return Bundle(inner, within)
        if head == "sub":
            inner = schema()
            keep = bracket_set()
            take(")")
            return Sub(inner, keep)
        if head in ("destroy", "collapse", "completed"):
            inner = schema()
            take(")")
            return {"destroy": Destroy, "collapse": Collapse, "completed": Completed}[head](inner)
        if head == "decrease":
            inner = schema()
            t = ord_()
            if peek() == "by":
                take()
                b = ord_()
                st = integer()
                take(")")
                return DecreaseBy(inner, t, b, st)
            take(")")
            return Decrease(inner, t)
        if head == "interp":
            a, b = schema(), schema()
            g = ord_()
            take(")")
            return Interp(a, b, g)
        err(f"unknown schema head {head!r}")

    c = schema()
    return c, pos


def parse_schema(text: str) -> Cascade:
    c, used = parse_schema_prefix(text)
    if text[used:].strip():
        raise CascadeError(f"trailing input in {text!r}")
    return c
