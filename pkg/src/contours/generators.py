"""Seeded instance families: small monotone schemas and random symbolic sets."""

from __future__ import annotations

import itertools
import random
from typing import Iterator

from . import setalg as S
from .cascade import (
    LEAF, Bundle, Cascade, Collapse, Destroy, Ramp, Repeat, Seq, complete, graft, is_monotone,
)


def schema_family(max_rank: int = 3) -> list[Cascade]:
    """Monotone sequential schemas of finite rank <= max_rank, deduplicated, in a fixed order."""
    t = {k: complete(k) for k in range(0, max_rank + 2)}
    out: list[Cascade] = []
    layers: dict[int, list[Cascade]] = {0: [LEAF]}
    layers[1] = [t[1], Bundle(t[2]), Seq((LEAF, LEAF), Repeat(LEAF))]
    for r in range(2, max_rank + 1):
        cur = [t[r], Destroy(t[r + 1])]
        if r == 2:
            cur += [Collapse(t[3])]
        tops = layers[r - 1][:8]
        for top in tops:
            cur.append(Seq((), Repeat(top)))
            for lower in layers[r - 2][:2] + layers[r - 1][:1]:
                if r == max_rank and lower.rank() == r - 1:
                    continue
                if lower.rank() <= top.rank():
                    cur.append(Seq((lower,), Repeat(top)))
        cur.append(graft(t[1], t[r - 1], {(0,): t[r - 2]}) if r >= 2 else t[r])
        cur.append(Seq((), Ramp(r - 1, 0)))
        layers[r] = cur
    layers[1].append(Bundle(t[3]))
    seen = set()
    for r in range(1, max_rank + 1):
        for c in layers[r]:
            if c in seen:
                continue
            seen.add(c)
            if c.rank() == r and is_monotone(c)[0]:
                out.append(c)
    return out


def omega_family() -> list[Cascade]:
    """A few rank >= w schemas built from ramps."""
    ramp = Seq((), Ramp(0, 1))
    return [
        ramp,
        Seq((), Ramp(1, 1)),
        Seq((LEAF,), Ramp(1, 2)),
        Seq((), Repeat(ramp)),
        Seq((), Ramp(0, 1, complete(1))),
    ]


def random_path(rng: random.Random, max_len: int = 3, idx: int = 2) -> tuple[int, ...]:
    return tuple(rng.randrange(idx) for _ in range(rng.randint(1, max_len)))


def random_thresh(rng: random.Random, max_val: int = 2, n_exc: int = 2) -> S.SymbolicSet:
    exc = {}
    for _ in range(rng.randint(0, n_exc)):
        p = () if rng.random() < 0.4 else random_path(rng, 2)
        exc[p] = rng.randint(0, max_val)
    return S.thresh(exc, rng.randint(0, max_val))


def random_atom(rng: random.Random) -> S.SymbolicSet:
    k = rng.random()
    if k < 0.35:
        return S.cone(random_path(rng))
    if k < 0.8:
        return random_thresh(rng)
    return S.fin(random_path(rng, 3) for _ in range(rng.randint(1, 3)))


def random_set(rng: random.Random, depth: int = 2) -> S.SymbolicSet:
    if depth == 0 or rng.random() < 0.3:
        a = random_atom(rng)
        return S.compl(a) if rng.random() < 0.3 else a
    op = rng.choice("|&~")
    if op == "~":
        return S.compl(random_set(rng, depth - 1))
    parts = [random_set(rng, depth - 1) for _ in range(rng.randint(2, 3))]
    return S.union(*parts) if op == "|" else S.inter(*parts)


def random_sets(seed: int, count: int, depth: int = 2) -> Iterator[S.SymbolicSet]:
    rng = random.Random(seed)
    for _ in range(count):
        yield random_set(rng, depth)


def random_thresholds(rng: random.Random, max_val: int = 3, n_exc: int = 3, depth: int = 2) -> S.Thresholds:
    exc = {}
    for _ in range(rng.randint(0, n_exc)):
        p = tuple(rng.randrange(3) for _ in range(rng.randint(0, depth)))
        exc[p] = rng.randint(0, max_val)
    return S.Thresholds(exc, rng.randint(0, max_val))
