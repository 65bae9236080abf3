import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import digit_sum_by_division, nu2_binomial_exact, nu2_factorial_exact, nu2_factorial_floor_sum
from tcseq.dyadic import (
    binom_mod2,
    count_carries,
    digit_sum,
    kummer_pair,
    nu2_binomial,
    nu2_factorial,
    parity,
    verify_digit_identities,
    verify_kummer_step,
)
from tcseq.report import Sampled


@pytest.mark.parametrize("n, expected", [(0, 0), (7, 3), (12, 2)])
def test_digit_sum_examples(n, expected):
    assert digit_sum_by_division(n) == expected
    assert digit_sum(n) == expected


def test_digit_sum_matches_division_oracle_up_to_2_20():
    assert all(digit_sum(n) == digit_sum_by_division(n) for n in range(1 << 20))


@given(st.integers(min_value=0, max_value=1 << 200))
def test_digit_sum_big_ints(n):
    assert digit_sum(n) == digit_sum_by_division(n)


@pytest.mark.parametrize("n, expected", [(0, 0), (5, 1), (8, 0)])
def test_parity(n, expected):
    assert parity(n) == expected


@pytest.mark.parametrize("n, expected", [(1, 0), (4, 3), (10, 8)])
def test_nu2_factorial_examples(n, expected):
    assert nu2_factorial_exact(n) == expected
    assert nu2_factorial(n) == expected


def test_nu2_factorial_legendre_vs_floor_sum():
    for n in range(1 << 16):
        assert nu2_factorial(n) == nu2_factorial_floor_sum(n)
    for n in range(200):
        assert nu2_factorial(n) == nu2_factorial_exact(n)


@pytest.mark.parametrize("n, k, expected", [(3, 2, 0), (4, 2, 1), (9, 0, 0), (0, 0, 0), (17, 17, 0)])
def test_nu2_binomial_examples(n, k, expected):
    assert nu2_binomial_exact(n, k) == expected
    assert nu2_binomial(n, k) == expected


def test_nu2_binomial_exact_and_carries_up_to_64():
    for n in range(65):
        for k in range(n + 1):
            v = nu2_binomial(n, k)
            assert v == nu2_binomial_exact(n, k), (n, k)
            assert v == count_carries(k, n - k), (n, k)


@pytest.mark.parametrize("n, k, expected", [(3, 2, 1), (4, 2, 0), (12, 12, 1), (12, 0, 1)])
def test_binom_mod2_examples(n, k, expected):
    assert binom_mod2(n, k) == expected


def test_binom_mod2_iff_valuation_zero():
    bad = [
        (n, k)
        for n in range((1 << 12) + 1)
        for k in range(n + 1)
        if (binom_mod2(n, k) == 1) != (nu2_binomial(n, k) == 0)
    ]
    assert bad == []


@given(st.integers(0, 1 << 12), st.integers(0, 1 << 12))
def test_binom_mod2_iff_valuation_zero_random(n, k):
    n, k = max(n, k), min(n, k)
    assert (binom_mod2(n, k) == 1) == (nu2_binomial(n, k) == 0)


@pytest.mark.parametrize("fn", [nu2_binomial, binom_mod2])
def test_k_greater_than_n_rejected(fn):
    with pytest.raises(ValueError):
        fn(3, 4)


@pytest.mark.parametrize("fn", [digit_sum, parity, nu2_factorial])
def test_negative_rejected(fn):
    with pytest.raises(ValueError):
        fn(-1)


def test_digit_identity_examples():
    assert digit_sum(9) == 2 <= digit_sum(6) + digit_sum(3) == 4
    assert digit_sum(10) == digit_sum(5) == 2


@given(st.integers(0, 1 << 20))
def test_doubling_identities(a):
    assert digit_sum(2 * a) == digit_sum(a)
    assert digit_sum(2 * a + 1) == digit_sum(a) + 1


def test_verify_digit_identities_full():
    report = verify_digit_identities(1000)
    assert report.passed
    assert report.strategy == "full"
    assert report.checked == 3 * 1001 + 1001 * 1002 // 2


def test_verify_digit_identities_sampled_is_recorded():
    report = verify_digit_identities(10**6, Sampled(seed=7, count=5000))
    assert report.passed
    assert report.strategy == "sampled(seed=7, count=5000)"


def test_kummer_pair_and_sweep():
    assert kummer_pair(3) == (3, 2)
    with pytest.raises(ValueError):
        kummer_pair(1)
    report = verify_kummer_step(30)
    assert report.passed and report.checked == 2 * 29
