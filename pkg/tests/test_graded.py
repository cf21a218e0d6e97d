import random

import pytest

from bcov.graded import canonicalize_monomial, koszul_sign, sort_with_sign


def test_odd_swap():
    assert koszul_sign([1, 1], [1, 0]) == -1


def test_even_odd_swap():
    assert koszul_sign([2, 1], [1, 0]) == 1


def test_three_cycle_of_odds():
    # composition of two adjacent odd transpositions
    assert koszul_sign([1, 1, 1], [1, 2, 0]) == 1
    assert koszul_sign([1, 1, 1], [2, 0, 1]) == 1


def test_identity_permutation():
    assert koszul_sign([3, 5, 2, 1], [0, 1, 2, 3]) == 1


def test_invalid_permutation():
    with pytest.raises(ValueError, match="invalid permutation"):
        koszul_sign([1, 1], [0, 0])
    with pytest.raises(ValueError, match="invalid permutation"):
        koszul_sign([1, 1], [0])


def compose(p, q):
    # apply q first, then p, in the take-from convention
    return [q[p[i]] for i in range(len(p))]


def test_sign_is_homomorphism():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(2, 7)
        degrees = [rng.randrange(0, 4) for _ in range(n)]
        p = list(range(n))
        q = list(range(n))
        rng.shuffle(p)
        rng.shuffle(q)
        assert koszul_sign(degrees, compose(p, q)) == koszul_sign(
            degrees, q
        ) * koszul_sign([degrees[q[i]] for i in range(n)], p)


def test_canonicalize_sorts_with_sign():
    sorted_f, sign = canonicalize_monomial([(3, 1), (1, 1)])
    assert sorted_f == [(1, 1), (3, 1)]
    assert sign == -1


def test_canonicalize_identity_on_sorted_even():
    factors = [(1, 2), (1, 2)]
    sorted_f, sign = canonicalize_monomial(factors)
    assert sorted_f == factors
    assert sign == 1


def test_canonicalize_odd_square_is_zero():
    _, sign = canonicalize_monomial([(2, 1), (2, 1)])
    assert sign == 0


def test_canonicalize_idempotent():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randrange(1, 6)
        factors = [(rng.randrange(0, 8), rng.randrange(0, 3)) for _ in range(n)]
        out, sign = canonicalize_monomial(factors)
        if sign == 0:
            continue
        again, sign2 = canonicalize_monomial(out)
        assert again == out
        assert sign2 == 1


def test_sort_with_sign_matches_canonicalize():
    items = [5, 2, 2, 1]
    degrees = [1, 0, 0, 1]
    out, sign = sort_with_sign(items, degrees)
    assert out == [1, 2, 2, 5]
    assert sign == -1  # the two odd items cross exactly once
    # cross-check against canonicalize_monomial on the same data
    ref, ref_sign = canonicalize_monomial(list(zip(items, degrees)))
    assert [i for i, _ in ref] == out
    assert ref_sign == sign
