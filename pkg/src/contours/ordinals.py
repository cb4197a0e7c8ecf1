"""Countable ordinals below epsilon_0 in Cantor normal form.

An :class:`Ordinal` is the sum ``w^e1*c1 + ... + w^ek*ck`` with strictly
decreasing exponents (themselves ordinals) and positive integer
coefficients.  Plain ``int`` values are accepted wherever an ordinal is
expected and are coerced with :func:`ordinal`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence, Union

OrdLike = Union["Ordinal", int]


class OrdinalError(ArithmeticError):
    pass


@total_ordering
class Ordinal:
    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Iterable[tuple["Ordinal", int]] = ()):
        terms = tuple((ordinal(e), int(c)) for e, c in terms)
        for i, (e, c) in enumerate(terms):
            if c < 1:
                raise OrdinalError(f"coefficient must be positive, got {c}")
            if i and not terms[i - 1][0] > e:
                raise OrdinalError("exponents must be strictly decreasing")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", hash(terms))

    def __setattr__(self, name, value):
        raise AttributeError("Ordinal is immutable")

    # -- construction -------------------------------------------------
    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise OrdinalError("negative ordinal")
        return ZERO if n == 0 else cls(((ZERO, n),))

    @classmethod
    def omega_power(cls, e: OrdLike, coeff: int = 1) -> "Ordinal":
        return cls(((ordinal(e), coeff),))

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_finite(self) -> bool:
        return all(e.is_zero() for e, _ in self.terms)

    def is_limit(self) -> bool:
        return bool(self.terms) and not self.terms[-1][0].is_zero()

    def is_successor(self) -> bool:
        return bool(self.terms) and self.terms[-1][0].is_zero()

    def __int__(self) -> int:
        if not self.is_finite():
            raise OrdinalError(f"{self} is infinite")
        return self.terms[0][1] if self.terms else 0

    def finite_part(self) -> int:
        """Coefficient of w^0, i.e. the trailing natural number."""
        if self.terms and self.terms[-1][0].is_zero():
            return self.terms[-1][1]
        return 0

    def limit_part(self) -> "Ordinal":
        """The largest limit ordinal (or 0) below or equal to self."""
        if self.is_successor():
            return Ordinal(self.terms[:-1])
        return self

    # -- order --------------------------------------------------------
    def _cmp(self, other: "Ordinal") -> int:
        for (e1, c1), (e2, c2) in zip(self.terms, other.terms):
            if e1 != e2:
                return 1 if e1 > e2 else -1
            if c1 != c2:
                return 1 if c1 > c2 else -1
        return (len(self.terms) > len(other.terms)) - (len(self.terms) < len(other.terms))

    def __eq__(self, other):
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._cmp(other) < 0

    def __hash__(self):
        if self.is_finite():
            return hash(int(self))
        return self._hash

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if isinstance(other, int):
            other = _coerce(other)
        if not isinstance(other, Ordinal):
            return NotImplemented
        if other.is_zero():
            return self
        lead_e, lead_c = other.terms[0]
        kept = []
        for e, c in self.terms:
            if e > lead_e:
                kept.append((e, c))
            elif e == lead_e:
                kept.append((e, c + lead_c))
                return Ordinal(kept + list(other.terms[1:]))
            else:
                break
        return Ordinal(kept + list(other.terms))

    def __radd__(self, other):
        if isinstance(other, int):
            return _coerce(other) + self
        return NotImplemented

    def sub_finite(self, k: int) -> "Ordinal":
        """self - k for a natural k, defined when the trailing part allows it."""
        if k == 0:
            return self
        fin = self.finite_part()
        if fin < k:
            raise OrdinalError(f"cannot subtract {k} from {self}")
        return self.limit_part() + (fin - k)

    def __repr__(self):
        return f"Ordinal({format_ordinal(self)!r})"

    def __str__(self):
        return format_ordinal(self)


ZERO = Ordinal(())
_small: dict[int, Ordinal] = {0: ZERO}


def _coerce(n: int) -> Ordinal:
    if n < 0:
        raise OrdinalError("negative ordinal")
    o = _small.get(n)
    if o is None:
        o = Ordinal(((ZERO, n),))
        if n < 256:
            _small[n] = o
    return o


def ordinal(x: OrdLike) -> Ordinal:
    if isinstance(x, Ordinal):
        return x
    if isinstance(x, bool) or not isinstance(x, int):
        raise TypeError(f"not an ordinal: {x!r}")
    return _coerce(x)


ONE = _coerce(1)
OMEGA = Ordinal(((ONE, 1),))


def compare(a: OrdLike, b: OrdLike) -> int:
    """-1, 0 or 1 as a <, =, > b."""
    return ordinal(a)._cmp(ordinal(b))


def add(a: OrdLike, b: OrdLike) -> Ordinal:
    return ordinal(a) + ordinal(b)


def minus_one_plus(a: OrdLike) -> Ordinal:
    """a-1 for finite a >= 1, a itself for infinite a."""
    a = ordinal(a)
    if a.is_zero():
        raise OrdinalError("-1+a is undefined for a = 0")
    return a.sub_finite(1) if a.is_finite() else a


def normalize(a: OrdLike) -> Ordinal:
    """Re-run canonical construction; identity on well-formed values."""
    a = ordinal(a)
    return Ordinal((normalize(e), c) for e, c in a.terms)


@dataclass(frozen=True)
class AffineRanks:
    """Rank stream: explicit ``prefix`` then ``base + step*j`` for j = 0, 1, ...

    ``step`` is a natural number; ``step == 0`` gives a constant tail.
    """

    prefix: tuple[Ordinal, ...]
    base: Ordinal
    step: int = 0

    def __post_init__(self):
        if self.step < 0:
            raise OrdinalError("affine step must be non-negative")

    def at(self, n: int) -> Ordinal:
        if n < len(self.prefix):
            return self.prefix[n]
        return self.base + self.step * (n - len(self.prefix))

    def tail_sup(self) -> tuple[Ordinal, bool]:
        """(supremum of the tail, whether it is attained)."""
        if self.step == 0:
            return self.base, True
        return self.base + OMEGA, False


def sup_plus_one(ranks: Union[Sequence[OrdLike], AffineRanks]) -> Ordinal:
    """Least ordinal strictly greater than every rank in the stream."""
    if isinstance(ranks, AffineRanks):
        best = ZERO
        for r in ranks.prefix:
            best = max(best, r + 1)
        sup, attained = ranks.tail_sup()
        return max(best, sup + 1 if attained else sup)
    if isinstance(ranks, (list, tuple)):
        best = ZERO
        for r in ranks:
            best = max(best, ordinal(r) + 1)
        return best
    raise OrdinalError("rank stream must be a finite list or AffineRanks")


# -- text syntax ------------------------------------------------------

def format_ordinal(a: Ordinal) -> str:
    if a.is_zero():
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero():
            parts.append(str(c))
            continue
        if e == ONE:
            s = "w"
        else:
            es = format_ordinal(e)
            s = f"w^{es}" if es.isdigit() or es == "w" else f"w^({es})"
        parts.append(s if c == 1 else f"{s}*{c}")
    return "+".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(w)|([+*^()]))")


def parse_ordinal(text: str) -> Ordinal:
    """Parse ``0``, ``5``, ``w``, ``w^2*3+w+4``, ``w^(w+1)``."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalError(f"bad ordinal syntax at column {pos + 1}: {text!r}")
        toks.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    toks.append(None)
    i = 0

    def peek():
        return toks[i]

    def take(expect=None):
        nonlocal i
        t = toks[i]
        if expect is not None and t != expect:
            raise OrdinalError(f"expected {expect!r}, got {t!r} in {text!r}")
        i += 1
        return t

    def expr():
        total = term()
        while peek() == "+":
            take()
            total = total + term()
        return total

    def term():
        t = peek()
        if t is not None and t.isdigit():
            take()
            return ordinal(int(t))
        if t == "w":
            take()
            exp = ONE
            if peek() == "^":
                take()
                if peek() == "(":
                    take()
                    exp = expr()
                    take(")")
                elif peek() is not None and peek().isdigit():
                    exp = ordinal(int(take()))
                elif peek() == "w":
                    take()
                    exp = OMEGA
                else:
                    raise OrdinalError(f"bad exponent in {text!r}")
            coeff = 1
            if peek() == "*":
                take()
                coeff = int(take())
            return ZERO if coeff == 0 else Ordinal.omega_power(exp, coeff)
        if t == "(":
            take()
            v = expr()
            take(")")
            return v
        raise OrdinalError(f"unexpected token {t!r} in {text!r}")

    value = expr()
    if peek() is not None:
        raise OrdinalError(f"trailing input in {text!r}")
    return value
