from functools import lru_cache
from itertools import product as iproduct

import pytest
from hypothesis import given, strategies as st

from qnil.errors import InputError
from qnil.exact_linalg import ExactMatrix, SubspaceBasis
from qnil.ncomplex import homology, homology_table, homotopy_vanishing_check, verify_nilpotency
from qnil.qdga import AlgebraSpec, cyclic_shift, leibniz_check, matrix_qdga, pullback_grading
from qnil.scalars import cyclotomic_field, q_generator, rational_field
from qnil.universal import (
    EnvelopeSubspace,
    classical_envelope_dims,
    default_omega,
    extended_complex,
    induced_homomorphism,
    tensor_qdga,
    universal_envelope,
)

SMALL = [AlgebraSpec.ground(), AlgebraSpec.diagonal(2), AlgebraSpec.truncated_polynomial(2)]


def cq(N):
    f = cyclotomic_field(N)
    return f, q_generator(f)


def regimes():
    yield cq(2)
    yield cq(3)
    f = rational_field()
    yield f, q_generator(f, 2)


def test_tensor_dims_and_degree_zero_differential():
    f, q = cq(3)
    A = AlgebraSpec.truncated_polynomial(2)
    T = tensor_qdga(A, q, 4)
    assert [T.dim(n) for n in range(5)] == [2, 4, 8, 16, 32]
    for i in range(2):
        x = T.elementary(0, (i,))
        dx = T.differential(0, x)
        expected = [f.sub(a, b) for a, b in zip(T.elementary(1, (0, i)), T.elementary(1, (i, 0)))]
        assert dx == expected
        tau_x = T.multiply(1, T.tau, 0, x)
        x_tau = T.multiply(0, x, 1, T.tau)
        assert dx == [f.sub(a, b) for a, b in zip(tau_x, x_tau)]
    assert T.differential(1, T.tau) == T.multiply(1, T.tau, 1, T.tau)


@pytest.mark.parametrize("A", SMALL, ids=lambda a: a.name)
def test_words_factor_through_tau(A):
    _, q = cq(3)
    T = tensor_qdga(A, q, 3)
    for n in range(4):
        for w in iproduct(range(A.dim), repeat=n + 1):
            prod = T.elementary(0, (w[0],))
            deg = 0
            for letter in w[1:]:
                prod = T.multiply(deg, prod, 1, T.tau)
                prod = T.multiply(deg + 1, prod, 0, T.elementary(0, (letter,)))
                deg += 1
            assert prod == T.elementary(n, w)


@pytest.mark.parametrize("A", SMALL, ids=lambda a: a.name)
def test_differential_is_the_leibniz_extension(A):
    # expand d on x_0 tau x_1 ... tau x_n with d x = tau x - x tau and d tau = tau^2
    for f, q in regimes():
        T = tensor_qdga(A, q, 4, N=3)

        def d_factor(kind, letter):
            if kind == "tau":
                return 2, T.multiply(1, T.tau, 1, T.tau)
            x = T.elementary(0, (letter,))
            return 1, T.differential(0, x)

        for n in range(4):
            for w in iproduct(range(A.dim), repeat=n + 1):
                factors = []
                for i, letter in enumerate(w):
                    if i:
                        factors.append(("tau", None))
                    factors.append(("x", letter))
                total = [f.zero] * T.dim(n + 1)
                for pos in range(len(factors)):
                    prefix_deg = sum(1 for k, _ in factors[:pos] if k == "tau")
                    deg = 0
                    vec = T.from_base(A.unit)
                    for j, (kind, letter) in enumerate(factors):
                        if j == pos:
                            fd, fv = d_factor(kind, letter)
                        elif kind == "tau":
                            fd, fv = 1, T.tau
                        else:
                            fd, fv = 0, T.elementary(0, (letter,))
                        vec = T.multiply(deg, vec, fd, fv)
                        deg += fd
                    coeff = f.power(q.coeffs, prefix_deg)
                    total = [f.add(a, f.mul(coeff, b)) for a, b in zip(total, vec)]
                assert T.differential(n, T.elementary(n, w)) == total


@pytest.mark.parametrize("A", SMALL, ids=lambda a: a.name)
def test_tensor_leibniz_and_nilpotency(A):
    for f, q in regimes():
        T = tensor_qdga(A, q, 5, N=3)
        assert leibniz_check(T).ok
        assert T.check_associativity(4) is None and T.check_unit() is None
        if f.is_cyclotomic:
            assert verify_nilpotency(T.complex).ok


@pytest.mark.parametrize("A", SMALL, ids=lambda a: a.name)
@pytest.mark.parametrize("N", [2, 3])
def test_tensor_algebra_acyclic(A, N):
    _, q = cq(N)
    T = tensor_qdga(A, q, N + 3)
    table = homology_table(T.complex)
    assert any(r.n >= 1 for r in table)
    for r in table:
        assert r.dim == (1 if r.n == 0 else 0)


def test_envelope_of_ground_field():
    _, q = cq(3)
    env = universal_envelope(AlgebraSpec.ground(), q, 4)
    assert env.dims() == {0: 1, 1: 0, 2: 0, 3: 0, 4: 0}


ENVELOPE_ALGEBRAS = SMALL + [AlgebraSpec.diagonal(3), AlgebraSpec.upper_triangular()]


@pytest.mark.parametrize("A", ENVELOPE_ALGEBRAS, ids=lambda a: a.name)
def test_envelope_at_minus_one_is_classical(A):
    f, q = cq(2)
    n_max = 4 if A.dim <= 2 else 3
    env = universal_envelope(A, q, n_max)
    classical = classical_envelope_dims(A, f, n_max)
    assert env.dims() == classical
    assert classical == {n: A.dim * (A.dim - 1) ** n for n in range(n_max + 1)}


@lru_cache(maxsize=None)
def _compositions(n, largest):
    # {parts: count} over compositions of n into parts 1..largest
    if n == 0:
        return {0: 1}
    out = {}
    for p in range(1, min(n, largest) + 1):
        for parts, c in _compositions(n - p, largest).items():
            out[parts + 1] = out.get(parts + 1, 0) + c
    return out


def _free_envelope_dim(a, n, N):
    # x_0 d^(j_1) x_1 ... d^(j_r) x_r with 1 <= j_i <= N-1, j_1 + ... + j_r = n
    return a * sum(c * (a - 1) ** parts for parts, c in _compositions(n, N - 1).items())


@pytest.mark.parametrize("A", ENVELOPE_ALGEBRAS[1:4], ids=lambda a: a.name)
@pytest.mark.parametrize("N", [3, 4])
def test_envelope_dims_at_root_of_unity(A, N):
    _, q = cq(N)
    n_max = 5 if A.dim <= 2 else 3
    env = universal_envelope(A, q, n_max)
    assert env.dims() == {n: _free_envelope_dim(A.dim, n, N) for n in range(n_max + 1)}


def test_envelope_regression_values():
    _, q = cq(3)
    env = universal_envelope(AlgebraSpec.truncated_polynomial(2), q, 6)
    assert env.dims() == {0: 2, 1: 2, 2: 4, 3: 6, 4: 10, 5: 16, 6: 26}


@pytest.mark.parametrize("A", SMALL[1:], ids=lambda a: a.name)
def test_envelope_closed_and_minimal(A):
    for N in (2, 3):
        _, q = cq(N)
        env = universal_envelope(A, q, 4)
        assert env.closure_failure() is None
        for n in range(1, 5):
            basis = env.bases[n]
            for drop in range(basis.dim):
                keep = [v for i, v in enumerate(basis.vectors) if i != drop]
                smaller = dict(env.bases)
                smaller[n] = SubspaceBasis.span(basis.field, basis.ambient_dim, keep)
                assert EnvelopeSubspace(env.tensor, smaller).closure_failure() is not None


def test_envelope_as_qdga():
    _, q = cq(3)
    env = universal_envelope(AlgebraSpec.truncated_polynomial(2), q, 5)
    Om = env.as_qdga()
    assert leibniz_check(Om).ok and verify_nilpotency(Om.complex).ok
    assert Om.check_associativity(4) is None


def test_induced_homomorphism_identity():
    f, q = cq(3)
    A = AlgebraSpec.truncated_polynomial(2)
    env = universal_envelope(A, q, 4)
    rep = induced_homomorphism(A, ExactMatrix.identity(f, 2), env.as_qdga(), 4, envelope=env)
    assert rep.ok
    assert all(m == ExactMatrix.identity(f, m.rows) for m in rep.matrices.values())


def test_induced_homomorphism_into_matrix_algebra():
    f, q = cq(3)
    A = AlgebraSpec.diagonal(3)
    target = pullback_grading(matrix_qdga([1, 1, 1], cyclic_shift(f, N=3), q), 4)
    rep = induced_homomorphism(A, ExactMatrix.identity(f, 3), target, 4)
    assert rep.ok and rep.failure is None
    assert {n: m.shape for n, m in rep.matrices.items()} == {0: (3, 3), 1: (3, 6), 2: (3, 18), 3: (3, 48), 4: (3, 132)}


def test_induced_homomorphism_rejects_bad_phi():
    f, q = cq(3)
    A = AlgebraSpec.diagonal(3)
    target = pullback_grading(matrix_qdga([1, 1, 1], cyclic_shift(f, N=3), q), 3)
    with pytest.raises(InputError):
        induced_homomorphism(A, ExactMatrix.zeros(f, 3, 3), target, 3)
    # unital, but e_0 -> 1/2 is not idempotent
    h = "1/2"
    phi = ExactMatrix.from_rows(f, [[h, h, 0], [h, h, 0], [h, h, 0]])
    with pytest.raises(InputError):
        induced_homomorphism(A, phi, target, 3)


def test_default_omega():
    assert default_omega(AlgebraSpec.truncated_polynomial(2)) == [1, 0]
    om = default_omega(AlgebraSpec.diagonal(2))
    assert sum(om) == 1 and om[0] == 1


@pytest.mark.parametrize("A", SMALL, ids=lambda a: a.name)
@pytest.mark.parametrize("N", [2, 3])
@pytest.mark.parametrize("restrict", [False, True])
def test_extended_complex_homotopy(A, N, restrict):
    f, q = cq(N)
    X = extended_complex(A, q, n_max=N + 3, restrict_to_envelope=restrict)
    C = X.complex
    assert C.lo == -(N - 1)
    # d e_-1 = 1 in degree 0
    unit = X.envelope.bases[0].coordinates(X.envelope.tensor.unit) if restrict else [f.coerce(c) for c in A.unit]
    assert C.d_at(-1).column(0) == unit
    rep = homotopy_vanishing_check(C, X.h, q=q)
    assert rep.ok and rep.homology_checked


def test_extended_complex_custom_omega():
    _, q = cq(3)
    A = AlgebraSpec.diagonal(2)
    X = extended_complex(A, q, omega=["1/2", "1/2"], n_max=5)
    assert homotopy_vanishing_check(X.complex, X.h, q=q).ok
    with pytest.raises(InputError):
        extended_complex(A, q, omega=[1, 1], n_max=4)
    with pytest.raises(InputError):
        extended_complex(A, q, omega=[1], n_max=4)
