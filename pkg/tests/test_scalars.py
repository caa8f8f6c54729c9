import pytest
from hypothesis import given, strategies as st

from qnil.scalars import (
    Scalar,
    cyclotomic_field,
    cyclotomic_polynomial,
    nilpotency_order,
    q_factorial,
    q_generator,
    q_integer,
    rational_field,
    root_order,
    scalar_from_json,
    scalar_to_json,
)


@pytest.mark.parametrize("n, expected", [(1, [-1, 1]), (2, [1, 1]), (3, [1, 1, 1]), (4, [1, 0, 1]), (6, [1, -1, 1])])
def test_cyclotomic_polynomial_values(n, expected):
    assert cyclotomic_polynomial(n) == expected


def _poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _euler_phi(n):
    return sum(1 for k in range(1, n + 1) if __import__("math").gcd(k, n) == 1)


@pytest.mark.parametrize("n", range(1, 25))
def test_cyclotomic_product_over_divisors_is_x_n_minus_1(n):
    prod = [1]
    for d in range(1, n + 1):
        if n % d == 0:
            prod = _poly_mul(prod, cyclotomic_polynomial(d))
    assert prod == [-1] + [0] * (n - 1) + [1]
    poly = cyclotomic_polynomial(n)
    assert poly[-1] == 1 and len(poly) - 1 == _euler_phi(n)


def test_q_generator_examples():
    assert q_generator(cyclotomic_field(2)) == -1
    z = q_generator(cyclotomic_field(4))
    assert z * z == -1 and z != -1
    assert q_generator(rational_field(), 2) == 2
    with pytest.raises(ValueError):
        q_generator(rational_field(), 1)
    with pytest.raises(ValueError):
        q_generator(rational_field(), 0)
    with pytest.raises(ValueError):
        q_generator(rational_field())


@pytest.mark.parametrize("N", range(2, 13))
def test_primitive_root_properties(N):
    q = q_generator(cyclotomic_field(N))
    assert q ** N == 1
    assert all(q ** m != 1 for m in range(1, N))
    assert q_integer(N, q) == 0
    assert q_factorial(N - 1, q) != 0
    assert root_order(q) == N and nilpotency_order(q) == N


def test_q_integers_and_factorials():
    f3 = cyclotomic_field(3)
    z = q_generator(f3)
    assert q_integer(3, z) == 0
    assert q_integer(0, z) == 0
    assert q_integer(2, q_generator(cyclotomic_field(2))) == 0
    two = q_generator(rational_field(), 2)
    assert q_integer(3, two) == 7
    assert q_factorial(3, two) == 21
    assert q_factorial(2, z) == 1 + z
    assert q_factorial(1, z) == 1 and q_factorial(0, two) == 1


def test_nilpotency_order_needs_root_of_unity():
    with pytest.raises(ValueError):
        nilpotency_order(q_generator(rational_field(), 2))
    assert nilpotency_order(q_generator(rational_field(), 2), 3) == 3


def test_inverse_of_zero_fails():
    with pytest.raises(ZeroDivisionError):
        cyclotomic_field(5)(0).inverse()
    with pytest.raises(ZeroDivisionError):
        rational_field()(0).inverse()


def test_json_round_trip():
    f = cyclotomic_field(5)
    z = q_generator(f)
    s = z ** 3 - f("2/3")
    obj = scalar_to_json(s)
    assert obj == {"N": 5, "coeffs": ["-2/3", "0/1", "0/1", "1/1"]}
    assert scalar_from_json(obj) == s
    assert scalar_to_json(rational_field()("-4/6")) == "-2/3"
    assert scalar_from_json("-2/3") == rational_field()("-2/3")


def test_floats_rejected():
    with pytest.raises(TypeError):
        rational_field()(0.5)


fields = st.sampled_from([rational_field()] + [cyclotomic_field(n) for n in (2, 3, 4, 5, 6, 7, 8, 12)])
small = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def scalar_triples(draw):
    f = draw(fields)
    q = q_generator(f) if f.is_cyclotomic else f(3)

    def one():
        # polynomial in q with small rational coefficients
        coeffs = draw(st.lists(small, min_size=1, max_size=6))
        total = f(0)
        for i, c in enumerate(coeffs):
            total = total + f(c) * q ** i
        return total

    return one(), one(), one()


@given(scalar_triples())
def test_field_axioms(t):
    a, b, c = t
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0
    if a != 0:
        assert a * a.inverse() == 1
        assert (b / a) * a == b


@given(scalar_triples())
def test_reduction_is_idempotent(t):
    a, _, _ = t
    f = a.field
    assert f.reduce(f.reduce(a.coeffs)) == f.reduce(a.coeffs) == a.coeffs


@given(st.integers(min_value=2, max_value=12), st.lists(st.integers(-9, 9), min_size=1, max_size=30))
def test_reduce_agrees_with_evaluation_class(N, coeffs):
    # reducing a long polynomial equals summing its reduced monomials
    f = cyclotomic_field(N)
    z = q_generator(f)
    direct = f.wrap(f.reduce(coeffs))
    summed = f(0)
    for i, c in enumerate(coeffs):
        summed = summed + c * z ** i
    assert direct == summed
