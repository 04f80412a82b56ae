import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fieldcarpet.errors import DomainError, UsageError
from fieldcarpet.finite_field import (
    FieldSpec,
    decode,
    default_modulus,
    encode,
    inv,
    is_irreducible,
    is_prime,
    parse_element,
    primes_up_to,
)

from oracles import inverse_by_search, power_by_repetition, reducible_by_enumeration

FIELDS = [FieldSpec(2), FieldSpec(3), FieldSpec(7), FieldSpec(2, 2), FieldSpec(3, 2, (1, 0, 1)),
          FieldSpec(5, 2), FieldSpec(2, 3), FieldSpec(19, 2, (1, 0, 1))]


def element_pair(field):
    return st.tuples(st.integers(0, field.q - 1), st.integers(0, field.q - 1))


def test_primality_against_trial_division():
    for n in range(-3, 2000):
        expected = n > 1 and all(n % d for d in range(2, int(n**0.5) + 1))
        assert is_prime(n) == expected
    assert primes_up_to(31) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31]


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (7, 2)])
def test_irreducibility_matches_factor_search(p, k):
    for low in itertools.product(range(p), repeat=k):
        coeffs = list(low) + [1]
        assert is_irreducible(coeffs, p) == (not reducible_by_enumeration(coeffs, p)), coeffs


def test_default_modulus_is_smallest_irreducible():
    assert default_modulus(3, 2) == (1, 0, 1)
    assert default_modulus(2, 2) == (1, 1, 1)
    assert FieldSpec(5, 1).modulus == (0, 1)


def test_descriptor_round_trip():
    for text in ("7", "3^2", "19^2/1,0,1", "2^3/1,1,0,1"):
        f = FieldSpec.parse(text)
        assert FieldSpec.parse(f.descriptor) == f
    assert FieldSpec.parse("19^2/1,0,1").q == 361


@pytest.mark.parametrize("text", ["4", "3^0", "3^2/1,1,1", "3^2/1,0", "x", "3^2/a,b,c", "1"])
def test_bad_field_descriptors(text):
    with pytest.raises(UsageError):
        FieldSpec.parse(text)


def test_encoding_is_base_p_digits(gf9):
    x = gf9.decode(3)
    assert x.coeffs == (0, 1)
    assert int(x * x) == 2  # x^2 = -1 modulo x^2 + 1
    assert encode(decode(7, gf9)) == 7
    with pytest.raises(UsageError):
        gf9.decode(9)


def test_zero_has_no_inverse(gf9):
    with pytest.raises(DomainError):
        inv(gf9.zero)
    with pytest.raises(DomainError):
        gf9.one / gf9.zero


def test_mixing_fields_is_rejected(gf3, gf9):
    with pytest.raises(UsageError):
        gf3.one + gf9.one


def test_parse_element_negative_means_negation(gf9):
    assert parse_element("-1", gf9) == -gf9.one
    assert parse_element("-3", gf9) == -gf9.decode(3)
    with pytest.raises(UsageError):
        parse_element("two", gf9)


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_inverse_matches_search_and_degree(field):
    for a in field.elements():
        if a.is_zero:
            continue
        assert a.inverse() == inverse_by_search(a)
        # degree over GF(p) is the least t with a^(p^t) = a
        t = next(t for t in range(1, field.k + 1) if power_by_repetition(a, field.p**t) == a)
        assert a.degree_over_prime() == t


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_frobenius_is_pth_power(field):
    for a in itertools.islice(field.elements(), 200):
        assert a.frobenius() == power_by_repetition(a, field.p)
        assert a.frobenius(field.k) == a
        assert a.in_prime_field == (a.frobenius() == a)


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_field_axioms(field):
    @settings(max_examples=60, deadline=None)
    @given(element_pair(field), st.integers(0, field.q - 1))
    def check(ab, c):
        a, b, c = field.decode(ab[0]), field.decode(ab[1]), field.decode(c)
        assert a + b == b + a and a * b == b * a
        assert (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert a - a == field.zero and a + field.zero == a and a * field.one == a
        # Frobenius is a ring homomorphism
        assert (a + b).frobenius() == a.frobenius() + b.frobenius()
        assert (a * b).frobenius() == a.frobenius() * b.frobenius()
        if not b.is_zero:
            assert (a / b) * b == a

    check()


@pytest.mark.parametrize("field", FIELDS, ids=str)
def test_array_ops_match_scalar_ops(field):
    n = np.arange(field.q)
    a, b = np.meshgrid(n, n)
    sums = field.add_arrays(a, b)
    prods = field.mul_arrays(a, b)
    rng = np.random.default_rng(1)
    picks = rng.integers(0, field.q, size=(300, 2))
    c = field.decode(int(rng.integers(1, field.q)))
    scaled = field.scale_array(n, c)
    frob = field.frobenius_array(n, 1)
    for x, y in picks:
        ex, ey = field.decode(int(x)), field.decode(int(y))
        assert sums[y, x] == int(ex + ey)
        assert prods[y, x] == int(ex * ey)
        assert scaled[x] == int(ex * c)
        assert frob[x] == int(ex.frobenius())
    assert np.array_equal(field.neg_arrays(n), [int(-field.decode(int(v))) for v in n])


def test_large_field_uses_digit_arithmetic():
    field = FieldSpec(3, 7)  # q = 2187, beyond the table size
    rng = np.random.default_rng(2)
    a = rng.integers(0, field.q, 500)
    b = rng.integers(0, field.q, 500)
    prods = field.mul_arrays(a, b)
    for x, y, z in zip(a, b, prods):
        assert int(field.decode(int(x)) * field.decode(int(y))) == z


@settings(max_examples=50, deadline=None)
@given(st.sampled_from([2, 3, 5, 7, 11, 13]), st.integers(-1000, 1000), st.integers(0, 40))
def test_int_operands_act_in_prime_field(p, n, e):
    f = FieldSpec(p)
    assert int(f.one * n) == n % p
    assert int(f.from_int(n) ** e) == pow(n, e, p)
