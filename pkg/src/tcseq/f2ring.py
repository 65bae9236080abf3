"""The mod-2 cohomology ring of BQ8 and its Kuenneth square.

    H*(BQ8; F2) = F2[x, y, e] / (x^2 + xy + y^2, x^2 y + x y^2),   |x| = |y| = 1, |e| = 4

Elements are kept in normal form over the basis ``x^a y^b e^c`` with
``a <= 2`` and ``b <= 1``. Reduction uses the rewriting rules

    y^2 -> x^2 + x y,     x^3 -> 0,     x^2 y^2 -> 0

(the last two follow from the relations). Coefficients live in F2, so a
polynomial is a set of monomials and addition is symmetric difference.
"""

from __future__ import annotations

import json
import random
from dataclasses import asdict, dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .dyadic import binom_mod2


class Monomial(NamedTuple):
    i: int  # exponent of x
    j: int  # exponent of y
    l: int  # exponent of e

    @property
    def degree(self) -> int:
        return self.i + self.j + 4 * self.l

    @property
    def is_normal(self) -> bool:
        return self.i <= 2 and self.j <= 1

    def __str__(self) -> str:
        parts = []
        for sym, exp in (("x", self.i), ("y", self.j), ("e", self.l)):
            if exp == 1:
                parts.append(sym)
            elif exp > 1:
                parts.append(f"{sym}^{exp}")
        return "".join(parts) or "1"


@lru_cache(maxsize=None)
def _reduce_xy(i: int, j: int) -> frozenset[tuple[int, int]]:
    """Normal form of ``x^i y^j`` as a set of ``(a, b)`` with ``a <= 2, b <= 1``."""
    if i >= 3 or (i >= 2 and j >= 2):
        return frozenset()
    if j >= 2:
        # y^2 -> x^2 + xy lowers the y-exponent, so this terminates
        return _reduce_xy(i + 2, j - 2) ^ _reduce_xy(i + 1, j - 1)
    return frozenset({(i, j)})


def _toggle(acc: set, item) -> None:
    if item in acc:
        acc.remove(item)
    else:
        acc.add(item)


def _mono_mul(m1: Monomial, m2: Monomial) -> tuple[Monomial, ...]:
    l = m1.l + m2.l
    return tuple(Monomial(a, b, l) for a, b in _reduce_xy(m1.i + m2.i, m1.j + m2.j))


class Poly:
    """An element of H*(BQ8; F2) in normal form."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[Monomial] = ()):
        terms = frozenset(Monomial(*t) for t in terms)
        bad = [t for t in terms if not t.is_normal]
        if bad:
            raise ValueError(f"not in normal form: {bad}; use normal_form()")
        self.terms = terms

    @classmethod
    def _trusted(cls, terms: frozenset) -> Poly:
        p = cls.__new__(cls)
        p.terms = terms
        return p

    def __add__(self, other: Poly) -> Poly:
        return Poly._trusted(self.terms ^ other.terms)

    def __mul__(self, other: Poly) -> Poly:
        return multiply(self, other)

    def __pow__(self, m: int) -> Poly:
        return _power(self, m, ONE)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Poly(0)"
        return "Poly(" + " + ".join(str(t) for t in sorted(self.terms)) + ")"


def normal_form(raw: Iterable[tuple[int, int, int]]) -> Poly:
    """Reduce a sum of arbitrary monomials ``x^i y^j e^l`` (repeats cancel in pairs)."""
    acc: set[Monomial] = set()
    for i, j, l in raw:
        if min(i, j, l) < 0:
            raise ValueError(f"negative exponent in {(i, j, l)}")
        for a, b in _reduce_xy(i, j):
            _toggle(acc, Monomial(a, b, l))
    return Poly._trusted(frozenset(acc))


def multiply(p: Poly, q: Poly) -> Poly:
    acc: set[Monomial] = set()
    for m1 in p.terms:
        for m2 in q.terms:
            for m in _mono_mul(m1, m2):
                _toggle(acc, m)
    return Poly._trusted(frozenset(acc))


def _power(p, m: int, one):
    if m < 0:
        raise ValueError("negative exponent")
    result = one
    base = p
    while m:
        if m & 1:
            result = result * base
        m >>= 1
        if m:
            base = base * base
    return result


ZERO = Poly()
ONE = Poly([Monomial(0, 0, 0)])
X = Poly([Monomial(1, 0, 0)])
Y = Poly([Monomial(0, 1, 0)])
E = Poly([Monomial(0, 0, 1)])
X2Y = Poly([Monomial(2, 1, 0)])

_XY_BASIS = ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (2, 1))


def basis(d: int) -> list[Monomial]:
    """Normal-form basis monomials of degree ``d``."""
    out = []
    for a, b in _XY_BASIS:
        rest = d - a - b
        if rest >= 0 and rest % 4 == 0:
            out.append(Monomial(a, b, rest // 4))
    return sorted(out)


def graded_dim(d: int) -> int:
    if d < 0:
        raise ValueError("degree must be nonnegative")
    return len(basis(d))


# -- Kuenneth square ----------------------------------------------------------


class TensorPoly:
    """An element of H*(BQ8) (x) H*(BQ8): a set of ``(left, right)`` monomial pairs."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Monomial, Monomial]] = ()):
        terms = frozenset((Monomial(*a), Monomial(*b)) for a, b in terms)
        bad = [t for t in terms if not (t[0].is_normal and t[1].is_normal)]
        if bad:
            raise ValueError(f"not in normal form: {bad}")
        self.terms = terms

    @classmethod
    def _trusted(cls, terms: frozenset) -> TensorPoly:
        p = cls.__new__(cls)
        p.terms = terms
        return p

    @classmethod
    def cross(cls, p: Poly, q: Poly) -> TensorPoly:
        """The cross product ``p x q``."""
        return cls._trusted(frozenset((a, b) for a in p.terms for b in q.terms))

    def __add__(self, other: TensorPoly) -> TensorPoly:
        return TensorPoly._trusted(self.terms ^ other.terms)

    def __mul__(self, other: TensorPoly) -> TensorPoly:
        return tensor_multiply(self, other)

    def __pow__(self, m: int) -> TensorPoly:
        return _power(self, m, TENSOR_ONE)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, TensorPoly) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def coefficient(self, left: Monomial, right: Monomial) -> int:
        return 1 if (left, right) in self.terms else 0

    def __repr__(self) -> str:
        if not self.terms:
            return "TensorPoly(0)"
        return "TensorPoly(" + " + ".join(f"{a}(x){b}" for a, b in sorted(self.terms)) + ")"


def tensor_multiply(p: TensorPoly, q: TensorPoly) -> TensorPoly:
    acc: set[tuple[Monomial, Monomial]] = set()
    mul = _mono_mul
    for a1, b1 in p.terms:
        for a2, b2 in q.terms:
            lefts = mul(a1, a2)
            if not lefts:
                continue
            for b in mul(b1, b2):
                for a in lefts:
                    _toggle(acc, (a, b))
    return TensorPoly._trusted(frozenset(acc))


TENSOR_ONE = TensorPoly.cross(ONE, ONE)


def _tensor_basis(total: int) -> list[tuple[Monomial, Monomial]]:
    return [(a, b) for p in range(total + 1) for a in basis(p) for b in basis(total - p)]


def _f2_row_reduce(rows: list[frozenset], order: list) -> list[frozenset]:
    """Reduced row echelon form over F2 of sets of terms, pivots taken in ``order``."""
    rank = {t: idx for idx, t in enumerate(order)}
    pivots: dict = {}
    for row in rows:
        row = set(row)
        for piv, prow in pivots.items():
            if piv in row:
                row ^= prow
        if not row:
            continue
        piv = min(row, key=rank.__getitem__)
        for other_piv, prow in list(pivots.items()):
            if piv in prow:
                pivots[other_piv] = prow ^ row
        pivots[piv] = row
    return [frozenset(pivots[p]) for p in sorted(pivots, key=rank.__getitem__)]


def ideal_degree4_basis() -> list[TensorPoly]:
    """Basis of the degree-4 part of the ideal (x(x)1, y(x)1, 1(x)x, 1(x)y).

    Spanned by the products of the four generators with all degree-3
    basis elements; row reduction over F2 extracts a basis.
    """
    gens = [TensorPoly.cross(X, ONE), TensorPoly.cross(Y, ONE), TensorPoly.cross(ONE, X), TensorPoly.cross(ONE, Y)]
    spanning = []
    for g in gens:
        for t in _tensor_basis(3):
            prod = g * TensorPoly._trusted(frozenset([t]))
            if prod:
                spanning.append(prod.terms)
    rows = _f2_row_reduce(spanning, _tensor_basis(4))
    return [TensorPoly._trusted(r) for r in rows]


# -- the Q8 certificate -------------------------------------------------------

EXHAUSTIVE = "exhaustive"
RANDOM = "random"


class CertificateError(AssertionError):
    pass


@dataclass(frozen=True)
class Q8Certificate:
    """Record of checking ``(x^2y x x^2y) u^m != 0`` for admissible ``u``.

    ``u`` ranges over ``e x 1 + 1 x e + w`` with ``w`` in the degree-4 part
    of the ideal generated by the degree-one classes; ``m = 2^(k-1) - 1``.
    """

    k: int
    m: int
    mode: str
    seed: int | None
    trials: int | None
    witnesses_checked: int
    nonvanishing_ok: bool
    coefficient_ok: bool

    def __post_init__(self) -> None:
        if self.k < 2 or self.m != (1 << (self.k - 1)) - 1:
            raise ValueError(f"inconsistent certificate k={self.k}, m={self.m}")

    @property
    def passed(self) -> bool:
        return self.nonvanishing_ok and self.coefficient_ok

    def to_record(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_record(cls, line: str) -> Q8Certificate:
        return cls(**json.loads(line))


def _e_pow(a: int) -> Monomial:
    return Monomial(0, 0, a)


def _corrections(mode: str, seed: int | None, trials: int | None, size: int) -> Iterable[int]:
    if mode == EXHAUSTIVE:
        return range(1 << size)
    if mode == RANDOM:
        if seed is None or trials is None or trials < 1:
            raise ValueError("random mode needs a seed and a positive trial count")
        rng = random.Random(seed)
        return [rng.getrandbits(size) for _ in range(trials)]
    raise ValueError(f"unknown mode {mode!r}")


def q8_certificate(
    k: int,
    mode: str | None = None,
    seed: int | None = 42,
    trials: int | None = 1000,
    strict: bool = True,
) -> Q8Certificate:
    """Certify that ``(x^2y x x^2y) u^(2^(k-1)-1)`` survives every tested ``u``.

    For each correction ``w`` (a subset of :func:`ideal_degree4_basis`) the
    check computes ``u^m`` and verifies that

    * the coefficient of ``e^a x e^b`` (``a + b = m``) is ``C(m, a) mod 2``;
    * the product with ``x^2y x x^2y`` is exactly
      ``{x^2y e^a x x^2y e^b : C(m, a) odd}``, in particular nonzero.

    ``mode`` defaults to exhaustive (all 256 corrections) for ``k <= 3`` and
    to seeded random sampling above. With ``strict`` a failed check raises
    :class:`CertificateError`; otherwise the flags report it.
    """
    if k < 2:
        raise ValueError(f"the certificate needs k >= 2 (exponent 2^(k-2)), got k={k}")
    if mode is None:
        mode = EXHAUSTIVE if k <= 3 else RANDOM
    m = (1 << (k - 1)) - 1
    ideal = ideal_degree4_basis()
    choices = _corrections(mode, seed, trials, len(ideal))

    u0 = TensorPoly.cross(E, ONE) + TensorPoly.cross(ONE, E)
    top = TensorPoly.cross(X2Y, X2Y)
    expected_survivors = frozenset(
        (Monomial(2, 1, a), Monomial(2, 1, m - a)) for a in range(m + 1) if binom_mod2(m, a)
    )

    coefficient_ok = True
    nonvanishing_ok = True
    checked = 0
    for bits in choices:
        u = u0
        for idx, gen in enumerate(ideal):
            if bits >> idx & 1:
                u = u + gen
        um = u**m
        for a in range(m + 1):
            if um.coefficient(_e_pow(a), _e_pow(m - a)) != binom_mod2(m, a):
                coefficient_ok = False
        prod = top * um
        if not prod or prod.terms != expected_survivors:
            nonvanishing_ok = False
        checked += 1
        if strict and not (coefficient_ok and nonvanishing_ok):
            raise CertificateError(f"k={k}: check failed for correction bits {bits:08b}")
    return Q8Certificate(
        k=k,
        m=m,
        mode=mode,
        seed=seed if mode == RANDOM else None,
        trials=trials if mode == RANDOM else None,
        witnesses_checked=checked,
        nonvanishing_ok=nonvanishing_ok,
        coefficient_ok=coefficient_ok,
    )
