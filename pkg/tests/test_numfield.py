import math
import random
from fractions import Fraction

import pytest
import sympy

from hasseknot import arith, biquad, numfield
from hasseknot.errors import DomainError, UnsupportedPrimeError
from hasseknot.numfield import NumberField

from oracles import sums_of_two_squares_kernel

GAUSS = NumberField((1, 0, 1))                    # x^2 + 1
CUBIC_S3 = NumberField((-1, -1, 0, 1))            # x^3 - x - 1, disc -23
QUARTIC_13_17 = NumberField((16, 0, -60, 0, 1))   # min poly of sqrt13 + sqrt17


def test_discriminants():
    assert GAUSS.disc_poly == -4
    assert CUBIC_S3.disc_poly == -23
    assert QUARTIC_13_17.disc_poly == 2 ** 16 * 13 ** 2 * 17 ** 2


def test_discriminant_matches_sympy_random():
    rng = random.Random(11)
    x = sympy.symbols("x")
    for _ in range(50):
        deg = rng.randint(2, 5)
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [1]
        mine = numfield.poly_discriminant(coeffs)
        theirs = sympy.Poly(list(reversed(coeffs)), x).discriminant()
        assert mine == theirs, coeffs


def test_construction_rejects_bad_inputs():
    with pytest.raises(DomainError):
        NumberField((1, 1))            # degree 1
    with pytest.raises(DomainError):
        NumberField((1, 0, 2))         # not monic
    with pytest.raises(DomainError):
        NumberField((-1, 0, 1))        # x^2 - 1 = (x-1)(x+1)
    with pytest.raises(DomainError):
        NumberField((-8, 0, 0, 1))     # rational root 2
    with pytest.raises(DomainError):
        NumberField((1, 0, 2, 0, 1))   # (x^2+1)^2
    with pytest.raises(DomainError):
        NumberField((4, 0, 4, 0, 1))   # (x^2+2)^2, needs the degree-2 search


def test_construction_accepts_irreducibles():
    for coeffs in [(1, 0, 1), (-1, -1, 0, 1), (16, 0, -60, 0, 1), (1, 0, 0, 0, 1),
                   (2, 0, 0, 1), (7, -3, 0, 0, 0, 1)]:
        NumberField(coeffs)


def test_splitting_fixtures_gauss():
    assert numfield.splitting_data(GAUSS, 5).pairs == ((1, 1), (1, 1))
    assert numfield.splitting_data(GAUSS, 3).pairs == ((1, 2),)
    sd2 = numfield.splitting_data(GAUSS, 2)
    assert sd2.pairs == ((2, 1),) and sd2.reliable


def test_splitting_sum_ef_equals_degree():
    rng = random.Random(3)
    primes = arith.sieve_primes(10 ** 5)
    for K in (GAUSS, CUBIC_S3, QUARTIC_13_17):
        for p in rng.sample(primes, 1000):
            sd = numfield.splitting_data(K, p)
            assert sum(e * f for e, f in sd.pairs) == K.degree, (K, p)


def test_is_ideal_norm_fixtures():
    assert not numfield.is_ideal_norm(GAUSS, 3)
    assert numfield.is_ideal_norm(GAUSS, 45)
    assert numfield.is_ideal_norm(GAUSS, 1)
    with pytest.raises(DomainError):
        numfield.is_ideal_norm(GAUSS, -2)
    with pytest.raises(DomainError):
        numfield.is_ideal_norm(GAUSS, 0)


def test_is_ideal_norm_against_two_squares_kernel():
    for n in range(1, 2001):
        assert numfield.is_ideal_norm(GAUSS, n) == sums_of_two_squares_kernel(n), n


def test_is_ideal_norm_multiplicative_on_coprime_pairs():
    rng = random.Random(12)
    for _ in range(200):
        s = rng.randint(1, 3000)
        t = rng.randint(1, 3000)
        if math.gcd(s, t) != 1:
            continue
        both = numfield.is_ideal_norm(GAUSS, s) and numfield.is_ideal_norm(GAUSS, t)
        assert numfield.is_ideal_norm(GAUSS, s * t) == both


def test_is_ideal_norm_inverse_invariance():
    rng = random.Random(13)
    for _ in range(100):
        t = Fraction(rng.randint(1, 500), rng.randint(1, 500))
        assert numfield.is_ideal_norm(GAUSS, t) == numfield.is_ideal_norm(GAUSS, 1 / t)


def test_in_P_K_fixtures():
    assert numfield.in_P_K(GAUSS, 5)
    assert not numfield.in_P_K(GAUSS, 3)
    with pytest.raises(DomainError):
        numfield.in_P_K(GAUSS, 2)  # ramified
    # quartic: p unramified is in P_K iff p splits completely, i.e. both
    # 13 and 17 are squares mod p
    for p in (3, 5, 7, 11, 19, 23, 29, 43, 53, 101, 103):
        want = arith.kronecker(13, p) == 1 and arith.kronecker(17, p) == 1
        assert numfield.in_P_K(QUARTIC_13_17, p) == want, p


def test_delta_estimates_small():
    _, _, est = numfield.delta_K_estimate(GAUSS, 10 ** 4)
    assert 0.45 <= est <= 0.55
    _, _, est = numfield.delta_K_estimate(CUBIC_S3, 10 ** 4)
    assert 0.60 <= est <= 0.73   # S3 cubic: 4 of 6 Frobenius classes fix a root
    _, _, est = numfield.delta_K_estimate(QUARTIC_13_17, 10 ** 4)
    assert 0.20 <= est <= 0.30
    with pytest.raises(DomainError):
        numfield.delta_K_estimate(GAUSS, 50)


def test_count_ideal_norms_gauss():
    rows = numfield.count_ideal_norms(GAUSS, 100)
    assert rows[-1] == (100, 43)
    assert rows[0] == (1, 1)
    brute = [n for n in range(1, 101) if sums_of_two_squares_kernel(n)]
    for B, c in rows:
        assert c == sum(1 for n in brute if n <= B)


def test_count_ideal_norms_requires_overrides_at_bad_primes():
    with pytest.raises(UnsupportedPrimeError):
        numfield.count_ideal_norms(QUARTIC_13_17, 50)
    K = NumberField(QUARTIC_13_17.poly,
                    overrides=biquad.override_table_for(biquad.BiquadField(13, 17)))
    rows = dict(numfield.count_ideal_norms(K, 50))
    assert rows[1] == 1 and rows[50] > 1


def test_unsupported_prime_reports_p():
    try:
        numfield.is_ideal_norm(QUARTIC_13_17, 13)
    except UnsupportedPrimeError as exc:
        assert exc.prime == 13
    else:
        pytest.fail("expected UnsupportedPrimeError")


def test_override_table_parsing():
    table = numfield.parse_override_table(
        "# index divisor\n"
        "2 1 1 1 1 1 1\n"
        "503 1 1 2 1   # mixed\n")
    assert table[2] == ((1, 1), (1, 1), (1, 1))
    assert table[503] == ((1, 1), (2, 1))
    with pytest.raises(DomainError):
        numfield.parse_override_table("2 1\n")
    with pytest.raises(DomainError):
        numfield.parse_override_table("4 1 1 1 1\n")
    with pytest.raises(DomainError):
        numfield.parse_override_table("2 one 1\n")


def test_dedekind_index_divisor_field():
    # x^3 - x^2 - 2x - 8: 2 divides the index, the reduction mod 2 is not
    # squarefree, and (2) actually splits completely
    K = NumberField((-8, -2, -1, 1))
    assert K.disc_poly % 4 == 0
    sd = numfield.splitting_data(K, 2)
    assert not sd.reliable
    with pytest.raises(UnsupportedPrimeError):
        numfield.is_ideal_norm(K, 2)
    K2 = NumberField((-8, -2, -1, 1),
                     overrides=numfield.parse_override_table("2 1 1 1 1 1 1"))
    assert numfield.splitting_data(K2, 2).pairs == ((1, 1), (1, 1), (1, 1))
    assert numfield.is_ideal_norm(K2, 2)


def test_override_rejects_wrong_degree_sum():
    with pytest.raises(DomainError):
        NumberField((1, 0, 1), overrides={3: ((1, 1), (1, 1), (1, 1))})
