"""Exact 2-adic combinatorics on nonnegative Python ints.

All functions take arbitrary-size ints and never touch floating point.
Negative arguments raise :class:`ValueError`.
"""

from __future__ import annotations

import random

from .report import FULL, Report, Sampled


def _nat(n: int, name: str = "n") -> int:
    if not isinstance(n, int) or isinstance(n, bool):
        raise TypeError(f"{name} must be an int, got {type(n).__name__}")
    if n < 0:
        raise ValueError(f"{name} must be nonnegative, got {n}")
    return n


def digit_sum(n: int) -> int:
    """Number of ones in the binary expansion of ``n``."""
    return _nat(n).bit_count()


def parity(n: int) -> int:
    return _nat(n) & 1


def nu2_factorial(n: int) -> int:
    """2-adic valuation of ``n!`` (Legendre: ``n - digit_sum(n)``)."""
    return _nat(n) - n.bit_count()


def nu2_binomial(n: int, k: int) -> int:
    """2-adic valuation of ``C(n, k)`` via Kummer's digit-sum form."""
    _nat(n)
    _nat(k, "k")
    if k > n:
        raise ValueError(f"need k <= n, got n={n}, k={k}")
    return k.bit_count() + (n - k).bit_count() - n.bit_count()


def count_carries(a: int, b: int) -> int:
    """Number of carries produced when adding ``a`` and ``b`` in base 2.

    Simulates schoolbook addition bit by bit; used as the carry-count side
    of the Kummer check.
    """
    _nat(a, "a")
    _nat(b, "b")
    carries = 0
    carry = 0
    while a or b or carry:
        s = (a & 1) + (b & 1) + carry
        carry = s >> 1
        carries += carry
        a >>= 1
        b >>= 1
    return carries


def binom_mod2(n: int, k: int) -> int:
    """``C(n, k) mod 2``: 1 iff the bits of ``k`` are a submask of ``n`` (Lucas)."""
    _nat(n)
    _nat(k, "k")
    if k > n:
        raise ValueError(f"need k <= n, got n={n}, k={k}")
    return 1 if k & n == k else 0


def verify_digit_identities(n_max: int, strategy: str | Sampled = FULL) -> Report:
    """Check the elementary digit-sum identities for all ``a <= n_max``.

    The unary identities ``α(a) <= a``, ``α(2a) = α(a)`` and
    ``α(2a+1) = α(2a) + 1`` are always checked exhaustively. Subadditivity
    ``α(a+b) <= α(a) + α(b)`` is checked on the full grid ``a, b <= n_max``
    or on ``strategy.count`` seeded random pairs.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    report = Report(
        claim_id="digit-identities",
        checked_range=f"a, b <= {n_max}",
        strategy=str(strategy),
    )
    for a in range(n_max + 1):
        s = a.bit_count()
        report.check(s <= a, a, "α(a) <= a", s)
        report.check((2 * a).bit_count() == s, a, "α(2a) == α(a)", ((2 * a).bit_count(), s))
        report.check(
            (2 * a + 1).bit_count() == (2 * a).bit_count() + 1,
            a,
            "α(2a+1) == α(2a) + 1",
            ((2 * a + 1).bit_count(), (2 * a).bit_count()),
        )

    def sub(a: int, b: int) -> None:
        lhs = (a + b).bit_count()
        rhs = a.bit_count() + b.bit_count()
        report.check(lhs <= rhs, (a, b), "α(a+b) <= α(a) + α(b)", (lhs, rhs))

    if isinstance(strategy, Sampled):
        rng = random.Random(strategy.seed)
        for _ in range(strategy.count):
            sub(rng.randint(0, n_max), rng.randint(0, n_max))
    elif strategy == FULL:
        for a in range(n_max + 1):
            for b in range(a, n_max + 1):
                sub(a, b)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")
    return report


def kummer_pair(k: int) -> tuple[int, int]:
    """``(2^(k-1) - 1, 2^(k-2))``: the binomial whose parity the Q8 bound needs."""
    if k < 2:
        raise ValueError(f"need k >= 2, got {k}")
    return (1 << (k - 1)) - 1, 1 << (k - 2)


def verify_kummer_step(k_max: int) -> Report:
    """Check that ``C(2^(k-1)-1, 2^(k-2))`` is odd for ``2 <= k <= k_max``.

    Each case is decided twice: by the digit-sum formula and by counting
    carries in ``2^(k-2) + (2^(k-2) - 1)``; both must report valuation 0.
    """
    report = Report(claim_id="kummer", checked_range=f"2 <= k <= {k_max}")
    for k in range(2, k_max + 1):
        n, a = kummer_pair(k)
        by_digits = nu2_binomial(n, a)
        by_carries = count_carries(a, n - a)
        report.check(by_digits == 0, k, "digit-sum valuation == 0", by_digits)
        report.check(by_carries == 0, k, "carry count == 0", by_carries)
    return report
