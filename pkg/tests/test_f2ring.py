import itertools
import random

import pytest

from oracles import ideal_spanning_set, quotient_dim, raw_monomials, series_coefficients
from tcseq.dyadic import binom_mod2
from tcseq.f2ring import (
    E,
    ONE,
    X,
    X2Y,
    Y,
    ZERO,
    CertificateError,
    Monomial,
    Poly,
    Q8Certificate,
    TensorPoly,
    basis,
    graded_dim,
    ideal_degree4_basis,
    multiply,
    normal_form,
    q8_certificate,
    tensor_multiply,
)


def P(*monos):
    return Poly([Monomial(*m) for m in monos])


def T(*pairs):
    return TensorPoly([(Monomial(*a), Monomial(*b)) for a, b in pairs])


@pytest.mark.parametrize(
    "raw, expected",
    [
        ([(0, 2, 0)], P((2, 0, 0), (1, 1, 0))),  # y^2 = x^2 + xy
        ([(1, 2, 0)], P((2, 1, 0))),  # xy^2 = x^2y
        ([(3, 0, 0)], ZERO),
        ([(0, 3, 0)], ZERO),
        ([(2, 2, 5)], ZERO),
        ([(1, 0, 0), (1, 0, 0)], ZERO),  # 2 = 0
    ],
)
def test_normal_form_examples(raw, expected):
    assert normal_form(raw) == expected


def test_relations_vanish():
    assert normal_form([(2, 0, 0), (1, 1, 0), (0, 2, 0)]) == ZERO
    assert normal_form([(2, 1, 0), (1, 2, 0)]) == ZERO


def test_normal_form_idempotent_and_normal():
    for d in range(13):
        for mono in raw_monomials(d):
            p = normal_form([mono])
            assert all(t.is_normal and t.degree == d for t in p.terms)
            assert normal_form(p.terms) == p


def test_poly_rejects_unreduced_terms():
    with pytest.raises(ValueError):
        Poly([Monomial(0, 2, 0)])


@pytest.mark.parametrize(
    "p, q, expected",
    [(X2Y, X, ZERO), (X2Y, Y, ZERO), (E, E, P((0, 0, 2))), (X, X, P((2, 0, 0))), (Y, Y, P((2, 0, 0), (1, 1, 0)))],
)
def test_multiply_examples(p, q, expected):
    assert multiply(p, q) == expected


def test_graded_dim_examples():
    assert [graded_dim(d) for d in (0, 1, 3)] == [1, 2, 1]
    assert basis(3) == [Monomial(2, 1, 0)]


def test_graded_dim_matches_series_and_period():
    series = series_coefficients([1, 2, 2, 1], 4, 41)
    for d in range(41):
        assert graded_dim(d) == series[d] == (1, 2, 2, 1)[d % 4]


def test_normal_forms_are_a_basis_of_the_quotient():
    # normal_form kills the ideal, and the basis has the dimension of the quotient
    # computed by linear algebra on raw monomials; together the rewriting is confluent.
    for d in range(17):
        for row in ideal_spanning_set(d):
            assert normal_form(row) == ZERO
        assert graded_dim(d) == quotient_dim(d)


def _random_poly(rng, max_deg=20):
    d = rng.randint(0, max_deg)
    terms = [m for m in basis(d) if rng.random() < 0.7]
    if rng.random() < 0.3:
        d2 = rng.randint(0, max_deg)
        terms += [m for m in basis(d2) if rng.random() < 0.5]
    return normal_form(terms)


def test_multiply_commutative_and_associative():
    rng = random.Random(20240601)
    for _ in range(1000):
        p, q, r = (_random_poly(rng) for _ in range(3))
        assert p * q == q * p
        assert (p * q) * r == p * (q * r)


def test_multiply_agrees_with_raw_expansion():
    rng = random.Random(5)
    for _ in range(200):
        p, q = _random_poly(rng), _random_poly(rng)
        raw = [(a.i + b.i, a.j + b.j, a.l + b.l) for a in p.terms for b in q.terms]
        assert p * q == normal_form(raw)


def test_tensor_examples():
    e1, one_e = TensorPoly.cross(E, ONE), TensorPoly.cross(ONE, E)
    assert e1 * one_e == TensorPoly.cross(E, E)
    assert TensorPoly.cross(X2Y, X2Y) * TensorPoly.cross(X, ONE) == TensorPoly()
    assert (e1 + one_e) ** 2 == TensorPoly.cross(E * E, ONE) + TensorPoly.cross(ONE, E * E)


def test_tensor_bilinear():
    rng = random.Random(11)
    for _ in range(200):
        a, b, c, d = (_random_poly(rng, 8) for _ in range(4))
        lhs = tensor_multiply(TensorPoly.cross(a + b, c), TensorPoly.cross(d, ONE))
        rhs = TensorPoly.cross((a + b) * d, c)
        assert lhs == rhs == TensorPoly.cross(a * d, c) + TensorPoly.cross(b * d, c)


def test_ideal_degree4_basis():
    gens = ideal_degree4_basis()
    assert len(gens) == 8
    terms = [next(iter(g.terms)) for g in gens]
    assert all(len(g) == 1 for g in gens)
    bidegrees = sorted((a.degree, b.degree) for a, b in terms)
    assert bidegrees == [(1, 3), (1, 3), (2, 2), (2, 2), (2, 2), (2, 2), (3, 1), (3, 1)]
    assert (Monomial(2, 1, 0), Monomial(1, 0, 0)) in terms
    assert (Monomial(0, 0, 1), Monomial(0, 0, 0)) not in terms
    assert (Monomial(0, 0, 0), Monomial(0, 0, 1)) not in terms


def test_x2y_annihilates_ideal():
    top = TensorPoly.cross(X2Y, X2Y)
    for g in ideal_degree4_basis():
        assert top * g == TensorPoly()


def test_certificate_k2_survivors():
    e_x2y = Monomial(2, 1, 1)
    x2y = Monomial(2, 1, 0)
    u = TensorPoly.cross(E, ONE) + TensorPoly.cross(ONE, E)
    prod = TensorPoly.cross(X2Y, X2Y) * u
    assert prod == T((e_x2y, x2y), (x2y, e_x2y))
    cert = q8_certificate(2, "exhaustive")
    assert (cert.m, cert.witnesses_checked, cert.passed) == (1, 256, True)


def test_certificate_k3_coefficient():
    assert binom_mod2(3, 2) == 1
    cert = q8_certificate(3)
    assert cert.mode == "exhaustive" and cert.passed and cert.witnesses_checked == 256


def test_certificate_k4_random():
    cert = q8_certificate(4, "random", seed=42, trials=1000)
    assert cert.passed and cert.seed == 42 and cert.trials == 1000


def test_coefficients_of_u_power_follow_binomials():
    # every w, every split a + b = m, checked directly rather than through the certificate
    ideal = ideal_degree4_basis()
    base = TensorPoly.cross(E, ONE) + TensorPoly.cross(ONE, E)
    m = 3
    for bits in itertools.product((0, 1), repeat=len(ideal)):
        u = base
        for bit, g in zip(bits, ideal):
            if bit:
                u = u + g
        um = u * u * u  # plain repeated product, not the binary power
        prod = TensorPoly.cross(X2Y, X2Y) * um
        for a in range(m + 1):
            left, right = Monomial(0, 0, a), Monomial(0, 0, m - a)
            assert um.coefficient(left, right) == binom_mod2(m, a)
            assert prod.coefficient(Monomial(2, 1, a), Monomial(2, 1, m - a)) == binom_mod2(m, a)


def test_certificate_rejects_small_k():
    for k in (0, 1):
        with pytest.raises(ValueError):
            q8_certificate(k)


def test_certificate_record_roundtrip():
    cert = q8_certificate(2)
    assert Q8Certificate.from_record(cert.to_record()) == cert
    with pytest.raises(ValueError):
        Q8Certificate(k=3, m=4, mode="exhaustive", seed=None, trials=None,
                      witnesses_checked=1, nonvanishing_ok=True, coefficient_ok=True)


def test_certificate_failure_is_loud(monkeypatch):
    # C(2^j - 1, a) is always odd, so a parity table of zeros is wrong everywhere
    import tcseq.f2ring as f2ring

    monkeypatch.setattr(f2ring, "binom_mod2", lambda n, k: 0)
    with pytest.raises(CertificateError):
        f2ring.q8_certificate(3)
    cert = f2ring.q8_certificate(3, strict=False)
    assert not cert.coefficient_ok and not cert.passed
