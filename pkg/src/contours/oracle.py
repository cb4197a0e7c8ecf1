"""Brute-force reference evaluation on finite truncations.

Nothing here calls the symbolic decision procedures: sets are evaluated
pointwise on explicit leaf labels and contour membership is recomputed by
direct recursion over an explicit finite tree, with "cofinite" replaced by
"every failing successor has all label components below ``slack``".  Answers
are trusted only when they agree at two widths.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from . import setalg as S
from .cascade import BundleView, Cascade, LeafView

Path = tuple[int, ...]

DEFAULT_CAP = 20_000


class OracleError(RuntimeError):
    pass


# -- pointwise set semantics ------------------------------------------------------

def _in_cascade(c: Cascade, label: Path) -> bool:
    """Is ``label`` (relative) a leaf of ``c``?  Walks views only."""
    i = 0
    while True:
        v = c.view()
        if isinstance(v, LeafView):
            return label[i:] == v.suffix
        if isinstance(v, BundleView):
            rest = label[i:]
            return _in_cascade(v.inner, rest) and eval_point(v.within, rest)
        if i >= len(label):
            return False
        nxt = v.child(label[i])
        if nxt is None:
            return False
        c = nxt
        i += 1


def _in_base(b: S.Base, label: Path) -> bool:
    """Walk the schema: successor labels at sequential nodes must clear g."""
    c, node, i = b.schema, b.at, 0
    while True:
        v = c.view()
        if isinstance(v, LeafView):
            return True
        k = b.g(node)
        if isinstance(v, BundleView):
            rest = label[i:]
            return not (len(rest) <= k and all(x < k for x in rest))
        if i >= len(label) or label[i] < k:
            return False
        nxt = v.child(label[i])
        if nxt is None:
            return False
        c, node, i = nxt, node + (label[i],), i + 1


def eval_point(expr: S.SymbolicSet, label: Path) -> bool:
    """Membership of one label, straight from the definitions."""
    if expr is S.ALL:
        return True
    if expr is S.EMPTY:
        return False
    if isinstance(expr, S.Cone):
        return label[: len(expr.path)] == expr.path
    if isinstance(expr, S.Thresh):
        table = dict(expr.exceptions)

        def g(node):
            if node in table:
                return table[node]
            return expr.depth[len(node)] if len(node) < len(expr.depth) else expr.default

        return all(label[i] >= g(label[:i]) for i in range(len(label)))
    if isinstance(expr, S.Prefixed):
        k = len(expr.path)
        return label[:k] == expr.path and eval_point(expr.inner, label[k:])
    if isinstance(expr, S.Pullback):
        return eval_point(expr.inner, expr.fmap(label))
    if isinstance(expr, S.LeavesOf):
        return _in_cascade(expr.cascade, label)
    if isinstance(expr, S.Base):
        return _in_base(expr, label)
    if isinstance(expr, S.Union):
        return any(eval_point(x, label) for x in expr.parts)
    if isinstance(expr, S.Inter):
        return all(eval_point(x, label) for x in expr.parts)
    if isinstance(expr, S.Compl):
        return not eval_point(expr.inner, label)
    raise OracleError(f"unknown set term {expr!r}")


# -- explicit finite model ------------------------------------------------------------

@dataclass
class _Node:
    label: Path
    kind: str                      # "leaf" | "seq" | "bundle"
    kids: list = field(default_factory=list)    # child node ids (seq) / leaf ids (bundle)
    rel: list = field(default_factory=list)     # labels of kids relative to this node


class FiniteModel:
    """Explicit tree: first ``width`` children per node; bundles keep leaves
    of the width-truncated bundled tree.  Sets are bitmasks over leaves."""

    def __init__(self, schema: Cascade, width: int, cap: int = DEFAULT_CAP):
        self.schema, self.width, self.cap = schema, width, cap
        self.nodes: list[_Node] = []
        self.leaves: list[Path] = []
        self.leaf_index: dict[Path, int] = {}
        self.root = self._build(schema, ())

    def _leaf(self, label: Path) -> int:
        if label not in self.leaf_index:
            if len(self.leaves) >= self.cap:
                raise OracleError(f"leaf cap {self.cap} exceeded")
            self.leaf_index[label] = len(self.leaves)
            self.leaves.append(label)
        return self.leaf_index[label]

    def _bundle_leaves(self, c: Cascade, rel: Path, within: S.SymbolicSet, out: list):
        v = c.view()
        if isinstance(v, LeafView):
            out.append(rel + v.suffix)
        elif isinstance(v, BundleView):
            before = len(out)
            self._bundle_leaves(v.inner, rel, S.ALL, out)
            out[before:] = [p for p in out[before:] if eval_point(v.within, p[len(rel):])]
        else:
            for n, ch in v.first(self.width):
                self._bundle_leaves(ch, rel + (n,), S.ALL, out)
        if len(out) > self.cap:
            raise OracleError(f"leaf cap {self.cap} exceeded")

    def _build(self, c: Cascade, path: Path) -> int:
        v = c.view()
        nid = len(self.nodes)
        if isinstance(v, LeafView):
            label = path + v.suffix
            self.nodes.append(_Node(label, "leaf", [self._leaf(label)]))
            return nid
        if isinstance(v, BundleView):
            node = _Node(path, "bundle")
            self.nodes.append(node)
            rels: list[Path] = []
            self._bundle_leaves(v.inner, (), S.ALL, rels)
            rels = [p for p in rels if eval_point(v.within, p)]
            node.rel = rels
            node.kids = [self._leaf(path + p) for p in rels]
            return nid
        node = _Node(path, "seq")
        self.nodes.append(node)
        for n, ch in v.first(self.width):
            node.kids.append(self._build(ch, path + (n,)))
            node.rel.append((n,))
        return nid

    # sets as bitmasks; atoms are evaluated pointwise once and cached
    def extension(self, expr: S.SymbolicSet) -> int:
        if isinstance(expr, S.Union):
            out = 0
            for x in expr.parts:
                out |= self.extension(x)
            return out
        if isinstance(expr, S.Inter):
            out = self.all_mask()
            for x in expr.parts:
                out &= self.extension(x)
            return out
        if isinstance(expr, S.Compl):
            return self.all_mask() ^ self.extension(expr.inner)
        cache = self.__dict__.setdefault("_atoms", {})
        mask = cache.get(expr)
        if mask is None and isinstance(expr, S.Push):
            # images are not pointwise; push the inner extension through the map
            mask = 0
            dom = getattr(expr.fmap, "schema", None)
            src = self if dom is None or dom == self.schema else FiniteModel(dom, self.width, self.cap)
            for label in src.labels(src.extension(expr.inner)):
                j = self.leaf_index.get(expr.fmap(label))
                if j is not None:
                    mask |= 1 << j
            cache[expr] = mask
        if mask is None:
            mask = 0
            for i, label in enumerate(self.leaves):
                if eval_point(expr, label):
                    mask |= 1 << i
            cache[expr] = mask
        return mask

    def all_mask(self) -> int:
        return (1 << len(self.leaves)) - 1

    def labels(self, mask: int) -> list[Path]:
        return [p for i, p in enumerate(self.leaves) if mask >> i & 1]


def oracle_setalg(model: FiniteModel, expr: S.SymbolicSet) -> int:
    return model.extension(expr)


def _small(rel: Path, slack: int) -> bool:
    return all(x < slack for x in rel)


def model_contour_contains(model: FiniteModel, mask: int, slack: int) -> bool:
    """Contour membership on one explicit model."""

    def go(nid: int) -> bool:
        node = model.nodes[nid]
        if node.kind == "leaf":
            return bool(mask >> node.kids[0] & 1)
        if node.kind == "bundle":
            return all(mask >> k & 1 or _small(r, slack) for k, r in zip(node.kids, node.rel))
        return all(go(k) or _small(r, slack) for k, r in zip(node.kids, node.rel))

    return go(model.root)


def model_residual(model: FiniteModel, mask: int, slack: int) -> bool:
    """Inductive residuality on one explicit model (rank-1 nodes: finite trace)."""

    def rank1(node):
        return node.kind == "bundle" or all(model.nodes[k].kind == "leaf" for k in node.kids)

    def go(nid: int) -> bool:
        node = model.nodes[nid]
        if node.kind == "leaf":
            return not mask >> node.kids[0] & 1
        if node.kind == "bundle":
            return all(not mask >> k & 1 or _small(r, slack) for k, r in zip(node.kids, node.rel))
        if rank1(node):
            return all(not mask >> model.nodes[k].kids[0] & 1 or _small(r, slack)
                       for k, r in zip(node.kids, node.rel))
        return all(go(k) or _small(r, slack) for k, r in zip(node.kids, node.rel))

    return go(model.root)


class TwoWidth:
    """A schema explicitly built at widths w and 2w.

    Slack at width w is (w - 1) // 2.  A question is answered only when both
    widths give the same answer; otherwise the result is None (inconclusive).
    """

    def __init__(self, schema: Cascade, width: int = 5, cap: int = DEFAULT_CAP):
        self.models = [FiniteModel(schema, w, cap) for w in (width, 2 * width)]

    def ask(self, fn, expr: S.SymbolicSet) -> Optional[bool]:
        a, b = (fn(m, m.extension(expr), max(1, (m.width - 1) // 2)) for m in self.models)
        return a if a == b else None

    def contour_contains(self, expr):
        return self.ask(model_contour_contains, expr)

    def residual(self, expr):
        return self.ask(model_residual, expr)


def two_width(fn, schema: Cascade, expr: S.SymbolicSet, width: int = 5,
              cap: int = DEFAULT_CAP) -> Optional[bool]:
    return TwoWidth(schema, width, cap).ask(fn, expr)


def oracle_contour_contains(schema: Cascade, expr: S.SymbolicSet, width: int = 5,
                            cap: int = DEFAULT_CAP) -> Optional[bool]:
    return two_width(model_contour_contains, schema, expr, width, cap)


def oracle_residual(schema: Cascade, expr: S.SymbolicSet, width: int = 5,
                    cap: int = DEFAULT_CAP) -> Optional[bool]:
    return two_width(model_residual, schema, expr, width, cap)


# -- Rudin-Keisler search on tiny grounds --------------------------------------------------

def _core(ground: Sequence, base: Iterable[frozenset]) -> frozenset:
    core = frozenset(ground)
    for b in base:
        core &= frozenset(b)
    return core


def oracle_rk_search(u: tuple[Sequence, Iterable], v: tuple[Sequence, Iterable],
                     max_maps: int = 2_000_000) -> Optional[dict]:
    """A map f: X -> Y with f(u) containing v, or None.

    ``u`` and ``v`` are (ground, base) pairs of finite filters.  On a finite
    ground a filter is principal at the meet of its base, so B is in f(u)
    iff f maps that meet into B.
    """
    xs, ubase = list(u[0]), list(u[1])
    ys, vbase = list(v[0]), list(v[1])
    if len(ys) ** len(xs) > max_maps or len(xs) > 12 or len(ys) > 12:
        raise OracleError("ambient too large for exhaustive search")
    core_u = _core(xs, ubase)
    vsets = [frozenset(b) for b in vbase]
    for values in itertools.product(ys, repeat=len(xs)):
        f = dict(zip(xs, values))
        img = {f[x] for x in core_u}
        if all(img <= b for b in vsets):
            return f
    return None
