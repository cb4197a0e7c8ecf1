import itertools

import pytest
from hypothesis import given, strategies as st

from contours.ordinals import (
    OMEGA, AffineRanks, Ordinal, OrdinalError, add, compare, minus_one_plus,
    normalize, ordinal, parse_ordinal, sup_plus_one,
)

W = OMEGA


def test_compare_examples():
    assert compare(W, 3) == 1
    assert compare(W + 1, W + 1) == 0
    assert compare(W + W, W + 5) == 1
    assert compare(3, W) == -1


def test_add_examples():
    assert add(2, 3) == 5
    assert add(1, W) == W
    assert add(W, 1) == parse_ordinal("w+1")
    assert add(1, W) != add(W, 1)


def test_minus_one_plus():
    assert minus_one_plus(5) == 4
    assert minus_one_plus(W) == W
    assert minus_one_plus(W + 1) == W + 1
    with pytest.raises(OrdinalError):
        minus_one_plus(0)


def test_sup_plus_one():
    assert sup_plus_one(AffineRanks((), ordinal(0), 0)) == 1
    assert sup_plus_one([2, 2, 2]) == 3
    assert sup_plus_one(AffineRanks((), ordinal(0), 1)) == W
    assert sup_plus_one(AffineRanks((ordinal(1),), ordinal(2), 1)) == W
    assert sup_plus_one(AffineRanks((), W, 1)) == W + W
    assert sup_plus_one([]) == 0


@pytest.mark.parametrize("text", ["0", "5", "w", "w+4", "w^2*3+w+4", "w^(w+1)*2+7", "w^w"])
def test_text_round_trip(text):
    assert str(parse_ordinal(text)) == text


def test_parse_rejects_garbage():
    with pytest.raises(OrdinalError):
        parse_ordinal("w^")
    with pytest.raises(OrdinalError):
        parse_ordinal("3 w")


def test_noncanonical_terms_rejected():
    with pytest.raises(OrdinalError):
        Ordinal([(0, 1), (1, 1)])


def _small_ordinals():
    # up to three terms, exponents below w^2
    exps = [ordinal(0), ordinal(1), ordinal(2), W, W + 1]
    out = {ordinal(0)}
    for k in range(1, 4):
        for es in itertools.combinations(sorted(exps, reverse=True), k):
            for cs in itertools.product((1, 2), repeat=k):
                out.add(Ordinal(zip(es, cs)))
    return sorted(out)


SMALL = _small_ordinals()


def test_cnf_canonical_on_sums():
    for a in SMALL[::3]:
        for b in SMALL[::2]:
            s = add(a, b)
            assert normalize(s) == s
            assert str(parse_ordinal(str(s))) == str(s)


ords = st.sampled_from(SMALL)


@given(ords, ords, ords)
def test_add_associative(a, b, c):
    assert (a + b) + c == a + (b + c)


@given(ords, ords)
def test_add_monotone_in_right_argument(a, b):
    assert a + b >= b
    assert compare(a + b, a) >= 0


@given(st.integers(1, 20), ords)
def test_minus_one_plus_absorbs(n, alpha):
    if alpha.is_finite():
        return
    assert minus_one_plus(add(n, alpha)) == add(n - 1, alpha)


def test_order_is_total_on_enumeration():
    for a, b in itertools.combinations(SMALL, 2):
        assert (a < b) != (b < a)
