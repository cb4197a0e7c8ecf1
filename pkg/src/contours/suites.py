"""Verification suites and their line-delimited report records.

Each suite yields :class:`Record` objects.  Records are sorted by
(suite, instance) so reports do not depend on evaluation order, and carry
no timing so that equal seeds give byte-identical output.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import asdict, dataclass, field
from typing import Callable, Iterable, Iterator

from . import setalg as sa
from .cascade import (
    LEAF, Bundle, Ramp, Repeat, Seq, collapse, complete, confluence, decrease, destroy,
    format_schema, is_monotone,
)
from .contour import (
    Contour, FilterError, Image, contour_along, f_dn, finite_principal, image_formula_holds,
    is_residual, refinement_n0,
)
from .generators import omega_family, random_sets, random_thresholds, schema_family
from .hierarchy import rank_sum_bounded, max_contour_rank
from .oracle import TwoWidth
from .ordinals import OMEGA, AffineRanks, format_ordinal, ordinal, sup_plus_one
from .transforms import (
    collapse_map, interpolate, iterate_image, rel_decrease, thm31_image_level,
)

VERDICTS = ("pass", "fail", "inconclusive")


@dataclass
class Record:
    suite: str
    instance: str
    verdict: str
    witness: str = ""
    detail: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "Record":
        return cls(**json.loads(line))

    def key(self):
        return (self.suite, self.instance)


@dataclass
class SuiteConfig:
    suites: tuple = ()
    max_rank: int = 3
    width: int = 5
    seed: int = 0
    budget: int = 1000
    schemas: tuple = ()

    def __post_init__(self):
        for name in ("max_rank", "width", "budget"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")


def _schemas(cfg: SuiteConfig):
    return list(cfg.schemas) or schema_family(cfg.max_rank)


def _rec(suite, instance, ok, witness="", **detail) -> Record:
    return Record(suite, instance, "pass" if ok else "fail", "" if ok else witness, detail)


# -- 1. contour decision against the oracle --------------------------------------------------

def suite_contour_oracle(cfg: SuiteConfig) -> Iterator[Record]:
    for i, c in enumerate(_schemas(cfg)):
        tw = TwoWidth(c, cfg.width)
        agree = inconclusive = 0
        bad = None
        for s in random_sets(cfg.seed * 7919 + i, cfg.budget):
            a = sa.contour_member(s, c)
            b = tw.contour_contains(s)
            if b is None:
                inconclusive += 1
            elif a == b:
                agree += 1
            elif bad is None:
                bad = sa.format_set(s)
        verdict = "fail" if bad else ("inconclusive" if inconclusive > 0.05 * cfg.budget else "pass")
        yield Record("contour-oracle", format_schema(c), verdict, bad or "",
                     {"agree": agree, "inconclusive": inconclusive, "sets": cfg.budget,
                      "widths": [cfg.width, 2 * cfg.width]})


# -- 2. level law ---------------------------------------------------------------------------

LEVEL_WIDTH = 6


def level_law_mismatches(n: int, i: int, literal: bool, width: int = LEVEL_WIDTH) -> list:
    """Labels of the width box where iteration and the level set disagree.

    Points whose image could come from outside the box are skipped: the
    iterate only moves a label up by one in one coordinate per step.
    """
    from .oracle import eval_point

    got = iterate_image(n, i, width)
    level = thm31_image_level(n, i, literal)
    out = []
    for v in itertools.product(range(width - i), repeat=n):
        if (v in got) != eval_point(level, v):
            out.append(v)
    return out


def suite_level_law(cfg: SuiteConfig) -> Iterator[Record]:
    for n in range(2, 6):
        for i in range(n):
            for mode in ("literal", "corrected"):
                bad = level_law_mismatches(n, i, mode == "literal")
                yield _rec("thm31-level-law", f"n={n} i={i} {mode}", not bad,
                           str(bad[0]) if bad else "", mismatches=len(bad), width=LEVEL_WIDTH)


# -- 3. rank laws ------------------------------------------------------------------------------

def _confluence_instances():
    t = {k: complete(k) for k in range(5)}
    yield confluence(t[1], t[2])
    yield confluence(t[2], {(0, 0): t[3]}, t[1])
    yield confluence(t[1], t[3])
    yield Seq((t[0], t[1]), Repeat(t[2]))
    yield Seq((), Ramp(0, 1))
    yield Seq((t[1],), Ramp(1, 1))
    yield Seq((), Repeat(Seq((), Ramp(0, 1))))


def suite_rank_laws(cfg: SuiteConfig) -> Iterator[Record]:
    for c in schema_family(5):
        r = c.rank()
        if r < 2:
            continue
        d = destroy(c)
        ok = d.rank() == ordinal(int(r) - 1) and is_monotone(d)[0]
        yield _rec("rank-laws", "destroy " + format_schema(c), ok, format_ordinal(d.rank()))
    for c in _confluence_instances():
        got, expect = c.rank(), _rank_from_view(c)
        yield _rec("rank-laws", "confluence " + format_schema(c), got == expect,
                   f"{format_ordinal(got)} vs {format_ordinal(expect)}")
    for k in range(2, 5):
        for c in [complete(k), destroy(complete(k + 1)), Seq((), Repeat(complete(k - 1)))]:
            subject = Image(collapse_map(c), Contour(c))
            ans = max_contour_rank(subject, bound=k, candidates=[c], budget=cfg_budget(cfg))
            yield _rec("rank-laws", "collapse " + format_schema(c), ans.rank == k - 1,
                       ans.note, rank=ans.rank)


def cfg_budget(cfg: SuiteConfig) -> int:
    return min(cfg.budget, 25)


def _rank_from_view(c):
    """Least ordinal above the children's ranks, via the ordinal aggregator."""
    from .cascade import SeqView

    v = c.view()
    if not isinstance(v, SeqView):
        return c.rank()
    explicit = tuple(ch.rank() for _, ch in v.explicit)
    if v.tail is None:
        return sup_plus_one(explicit)
    return sup_plus_one(AffineRanks(explicit, v.tail_base, v.tail_step))


# -- 4. residual duality -------------------------------------------------------------------

def suite_residual_duality(cfg: SuiteConfig) -> Iterator[Record]:
    count = max(1, cfg.budget // 2)
    for i, c in enumerate(cfg.schemas or schema_family(cfg.max_rank) + omega_family()):
        tw = TwoWidth(c, cfg.width) if c.rank().is_finite() else None
        bad, oracle_bad, stable = None, None, 0
        for s in random_sets(cfg.seed * 104729 + 1000 + i, count):
            try:
                r = is_residual(c, s)
            except AssertionError:
                bad = bad or sa.format_set(s)
                continue
            if tw is not None:
                o = tw.residual(s)
                if o is not None:
                    stable += 1
                    if o != r and oracle_bad is None:
                        oracle_bad = sa.format_set(s)
        yield _rec("residual-duality", format_schema(c), not (bad or oracle_bad),
                   bad or oracle_bad or "", sets=count, oracle_stable=stable)


# -- 5. image formula -------------------------------------------------------------------------

def _random_core(rng, n):
    k = rng.randint(1, n)
    return rng.sample(range(n), k)


def image_instances(seed: int, count: int = 60):
    rng = random.Random(seed)
    for _ in range(count):
        nx, k, ny = rng.randint(2, 5), rng.randint(1, 4), rng.randint(1, 4)
        q = finite_principal(k, _random_core(rng, k))
        fam = [finite_principal(nx, _random_core(rng, nx)) for _ in range(k)]
        f = tuple(rng.randrange(ny) for _ in range(nx))
        yield f, q, fam, ny


def suite_image_formula(cfg: SuiteConfig) -> Iterator[Record]:
    for j, (f, q, fam, ny) in enumerate(image_instances(cfg.seed)):
        desc = (f"#{j:03d} f={list(f)} q={bin(q.core())} "
                f"p={[bin(p.core()) for p in fam]}")
        yield _rec("image-formula", desc, image_formula_holds(f, q, fam, ny), desc)


# -- 6. decrease monotonicity ------------------------------------------------------------------

def decrease_pairs(max_rank: int = 4):
    for w in schema_family(max_rank):
        r = int(w.rank())
        for k in range(1, r):
            yield decrease(w, k), w


def suite_decrease_monotone(cfg: SuiteConfig) -> Iterator[Record]:
    rng = random.Random(cfg.seed)
    for v, w in decrease_pairs(4):
        ok = rel_decrease(v, w)
        bad = ""
        if ok:
            for b in Contour(v).sample_base(rng, cfg_budget(cfg)):
                if not sa.contour_member(b, w):
                    ok, bad = False, sa.format_set(b)
                    break
        else:
            bad = "decreasing relation not recognized"
        yield _rec("decrease-monotone", f"{format_schema(v)} <| {format_schema(w)}", ok, bad)


# -- 7. interpolation --------------------------------------------------------------------------

def interpolation_instances(seed: int, count: int = 50):
    rng = random.Random(seed)
    omega_sources = [Seq((), Ramp(0, 1)), Seq((), Ramp(1, 1)), Seq((), Repeat(Seq((), Ramp(0, 1)))),
                     Seq((LEAF,), Ramp(1, 2))]
    for _ in range(count):
        if rng.random() < 0.4:
            a = rng.randint(3, 6)
            v = complete(a)
            b = rng.randint(1, a - 2)
            g = rng.randint(b + 1, a - 1)
        else:
            v = rng.choice(omega_sources)
            a = v.rank()
            b = rng.randint(1, 4)
            g = rng.choice([x for x in (b + 1, b + 2, OMEGA) if x < a or (x == OMEGA and a > OMEGA)]
                           or [b + 1])
        yield v, decrease(v, b), ordinal(g)


def suite_interpolation(cfg: SuiteConfig) -> Iterator[Record]:
    for j, (v, w, g) in enumerate(interpolation_instances(cfg.seed)):
        desc = f"#{j:02d} {format_schema(v)} to {format_ordinal(w.rank())} via {format_ordinal(g)}"
        try:
            t = interpolate(v, w, g)
            ok = t.rank() == g and rel_decrease(w, t) and rel_decrease(t, v)
            wit = "" if ok else format_schema(t)
        except (ValueError, FilterError) as e:
            ok, wit = False, str(e)
        yield _rec("interpolation", desc, ok, wit)


# -- 8. base refinement ------------------------------------------------------------------------

def refinement_instances(seed: int, count: int = 100, max_rank: int = 3):
    rng = random.Random(seed)
    fam = schema_family(max_rank)
    for _ in range(count):
        c = fam[rng.randrange(len(fam))]
        d = random_thresholds(rng, max_val=3, n_exc=3, depth=2)
        g = random_thresholds(rng, max_val=5, n_exc=3, depth=2)
        if g.default > d.default:
            g = sa.Thresholds(g.table(), d.default)
        yield c, g, d


def suite_base_refinement(cfg: SuiteConfig) -> Iterator[Record]:
    for j, (c, g, d) in enumerate(refinement_instances(cfg.seed, 100, cfg.max_rank)):
        n0 = refinement_n0(g, d)
        small = sa.base_set(c, f_dn(d, n0))
        big = sa.base_set(c, g)
        ok = sa.contains(big, sa.inter(small, sa.leaves_of(c)), c)
        yield _rec("base-refinement", f"#{j:03d} {format_schema(c)} g={g.table()}/{g.default} "
                   f"d={d.table()}/{d.default}", ok, f"n0={n0}", n0=n0)


# -- 9. bounded rank-sum check -----------------------------------------------------------------

def rank_sum_families(seed: int, count: int = 10):
    """Families of rank <= 2 contours on the leaves of T_4, all inside one envelope."""
    rng = random.Random(seed)
    t4 = complete(4)
    env = decrease(t4, 2)
    low = decrease(t4, 1)
    for j in range(count):
        members = [Contour(env)] if j % 2 == 0 else [Contour(low)]
        if j % 3 == 0:
            members.append(Contour(low if j % 2 == 0 else env))
        members.append(Contour(env).sample_base(rng, 1 + j % 3))
        yield env, members


def rank_sum_candidates():
    t4 = complete(4)
    return [t4, Seq((), Repeat(complete(3)))]


def suite_rank_sum_bounded(cfg: SuiteConfig) -> Iterator[Record]:
    for j, (env, members) in enumerate(rank_sum_families(cfg.seed)):
        rep = rank_sum_bounded(members, env, rank_sum_candidates(), budget=min(cfg.budget, 20), seed=cfg.seed + j)
        desc = f"#{j:02d} envelope {format_schema(env)} members={len(members)}"
        wit = "" if rep.passed else json.dumps(rep.unrefuted) if rep.unrefuted else "FIP or envelope check failed"
        yield Record("rank-sum-bounded", desc, "pass" if rep.passed else "fail", wit,
                     {"result": rep.text(), "fip_bound": rep.fip_bound})


SUITES: dict[str, Callable[[SuiteConfig], Iterable[Record]]] = {
    "contour-oracle": suite_contour_oracle,
    "thm31-level-law": suite_level_law,
    "rank-laws": suite_rank_laws,
    "residual-duality": suite_residual_duality,
    "image-formula": suite_image_formula,
    "decrease-monotone": suite_decrease_monotone,
    "interpolation": suite_interpolation,
    "base-refinement": suite_base_refinement,
    "rank-sum-bounded": suite_rank_sum_bounded,
}


def run_suite(cfg: SuiteConfig) -> list[Record]:
    out: list[Record] = []
    for name in cfg.suites:
        out.extend(SUITES[name](cfg))
    return sorted(out, key=Record.key)


def summary(records: list[Record], cfg: SuiteConfig) -> dict:
    counts = {v: sum(r.verdict == v for r in records) for v in VERDICTS}
    return {"summary": counts, "seed": cfg.seed, "suites": list(cfg.suites)}


def format_records(records: list[Record], cfg: SuiteConfig) -> str:
    lines = [r.to_json() for r in records]
    lines.append(json.dumps(summary(records, cfg), sort_keys=True, separators=(",", ":")))
    return "\n".join(lines) + "\n"


def parse_records(text: str) -> tuple[list[Record], dict]:
    records, footer = [], {}
    for line in text.splitlines():
        if not line.strip():
            continue
        obj = json.loads(line)
        if "summary" in obj:
            footer = obj
        else:
            records.append(Record(**obj))
    return records, footer


def format_text(records: list[Record], cfg: SuiteConfig) -> str:
    lines = []
    for r in records:
        line = f"{r.verdict.upper():12} {r.suite:18} {r.instance}"
        if r.witness:
            line += f"  [witness: {r.witness}]"
        lines.append(line)
    s = summary(records, cfg)["summary"]
    lines.append(f"seed {cfg.seed}: {s['pass']} pass, {s['fail']} fail, {s['inconclusive']} inconclusive")
    return "\n".join(lines) + "\n"
