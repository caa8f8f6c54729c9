import random

import pytest
from hypothesis import given, strategies as st

from qnil.errors import AxiomViolation
from qnil.exact_linalg import ExactMatrix, inverse
from qnil.ncomplex import NComplex, ZMOD_N, homology, verify_nilpotency
from qnil.qdga import (
    QDGA,
    AlgebraSpec,
    _BlockLayout,
    _matrix_d,
    cyclic_shift,
    elementary_step,
    leibniz_check,
    matrix_qdga,
    matrix_qdga_graded,
    nilpotent_shift,
    projection_intertwines,
    pullback_grading,
)
from qnil.scalars import cyclotomic_field, q_generator, rational_field

F3 = cyclotomic_field(3)
Q3 = q_generator(F3)


def non_associative_spec():
    # basis 1, x, y with x x = y, x y = x and all other products of x, y zero
    n = 3
    sc = [[[0] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        sc[0][i][i] = sc[i][0][i] = 1
    sc[1][1][2] = 1
    sc[1][2][1] = 1
    return n, sc, [1, 0, 0]


def test_algebra_axioms_rejected_with_witness():
    n, sc, unit = non_associative_spec()
    with pytest.raises(AxiomViolation) as err:
        AlgebraSpec(n, sc, unit)
    assert len(err.value.witness) == 3
    i, j, k = err.value.witness
    A = AlgebraSpec(n, sc, unit, check=False)
    left = A.multiply(A.multiply(A.basis_vector(i), A.basis_vector(j)), A.basis_vector(k))
    right = A.multiply(A.basis_vector(i), A.multiply(A.basis_vector(j), A.basis_vector(k)))
    assert left != right


def test_bad_unit_rejected():
    with pytest.raises(AxiomViolation):
        AlgebraSpec(2, AlgebraSpec.diagonal(2).sc, [1, 0])


@pytest.mark.parametrize(
    "A",
    [AlgebraSpec.ground(), AlgebraSpec.diagonal(3), AlgebraSpec.truncated_polynomial(3), AlgebraSpec.cyclic_group(3), AlgebraSpec.upper_triangular()],
    ids=lambda a: a.name,
)
def test_presets_are_algebras_and_round_trip(A):
    A.check_axioms()
    B = AlgebraSpec.from_json(A.to_json())
    assert B.sc == A.sc and B.unit == A.unit


def test_change_of_basis_keeps_axioms():
    A = AlgebraSpec.truncated_polynomial(3)
    B = A.change_basis([[1, 1, 0], [0, 1, 2], [0, 0, 1]])
    B.check_axioms()
    assert B.dim == 3


def test_zero_differential_is_leibniz():
    f = F3
    A = matrix_qdga([1, 2, 1], ExactMatrix.zeros(f, 4, 4), Q3)
    assert all(A.complex.d_at(n).is_zero() for n in range(3))
    assert leibniz_check(A).ok


def test_zero_e_at_n2_gives_full_homology():
    f = cyclotomic_field(2)
    A = matrix_qdga([1, 1], ExactMatrix.zeros(f, 2, 2), q_generator(f))
    assert homology(A.complex, 1, 0).dim + homology(A.complex, 1, 1).dim == 4


def test_cyclic_shift_vanishing_and_structure():
    A = matrix_qdga([1, 1, 1], cyclic_shift(F3, N=3), Q3)
    assert A.lam == 1
    assert all(homology(A.complex, k, n).dim == 0 for k in (1, 2) for n in range(3))
    assert leibniz_check(A).ok
    assert A.check_unit() is None and A.check_associativity() is None and A.check_grading()


def test_nilpotent_controls():
    # the full nilpotent shift still gives zero homology; E_12 alone does not
    A = matrix_qdga([1, 1, 1], nilpotent_shift(F3, N=3), Q3)
    assert A.lam == 0
    assert all(homology(A.complex, k, n).dim == 0 for k in (1, 2) for n in range(3))
    B = matrix_qdga([1, 1, 1], elementary_step(F3, N=3), Q3)
    dims = {(k, n): homology(B.complex, k, n).dim for k in (1, 2) for n in range(3)}
    assert dims == {(1, 0): 2, (2, 0): 2, (1, 1): 0, (2, 1): 2, (1, 2): 2, (2, 2): 0}


def test_one_sided_differential_breaks_leibniz():
    e = cyclic_shift(F3, N=3)
    A = matrix_qdga([1, 1, 1], e, Q3)
    layout = _BlockLayout([1, 1, 1])
    d = {a: _matrix_d(layout, e, F3.zero, a) for a in range(3)}
    broken = QDGA(NComplex(3, F3, A.complex.dims, d, grading=ZMOD_N), Q3, A.unit, A._basis_product)
    rep = leibniz_check(broken)
    assert not rep.ok
    # first failing pair in the search order: E_11 E_22 = 0, but E_11 e E_22 = E_12
    assert rep.failure == ((0, 0), (0, 1))


def test_e_validation():
    f = F3
    with pytest.raises(AxiomViolation):
        matrix_qdga([1, 1, 1], ExactMatrix.identity(f, 3), Q3)
    bad = ExactMatrix.from_sparse(f, 3, 3, {(0, 1): f.one, (1, 2): f.one, (2, 0): f.coerce(2)})
    m = nilpotent_shift(f, N=3)
    with pytest.raises(AxiomViolation):
        matrix_qdga([2, 1, 1], m, Q3)
    # e^3 = 2 I is allowed; any scalar lambda is
    A = matrix_qdga([1, 1, 1], bad, Q3)
    assert A.lam == 2


def test_pullback_examples():
    f = F3
    zero = matrix_qdga([1, 1, 1], ExactMatrix.zeros(f, 3, 3), Q3)
    lifted = pullback_grading(zero, 7)
    assert all(lifted.complex.d_at(n).is_zero() for n in range(7))
    base = matrix_qdga([1, 1, 1], cyclic_shift(f, N=3), Q3)
    lifted = pullback_grading(base, 7)
    assert [lifted.dim(n) for n in range(8)] == [3] * 8
    assert projection_intertwines(lifted, base)
    assert leibniz_check(lifted).ok and verify_nilpotency(lifted.complex).ok
    graded = matrix_qdga_graded([1, 1, 1], cyclic_shift(f, N=3), Q3, 7)
    assert all(graded.complex.d_at(n) == lifted.complex.d_at(n) for n in range(7))


def test_rational_q_needs_graded_version():
    f = rational_field()
    q = q_generator(f, 2)
    with pytest.raises(ValueError):
        pullback_grading(matrix_qdga([1, 1, 1], cyclic_shift(f, N=3), q), 5)
    A = matrix_qdga_graded([1, 1, 1], cyclic_shift(f, N=3), q, 6)
    assert leibniz_check(A).ok


@st.composite
def admissible_e(draw):
    N = draw(st.sampled_from([2, 3, 4]))
    f = cyclotomic_field(N)
    invertible = draw(st.booleans())
    if invertible:
        size = draw(st.integers(1, 6 // N))
        sizes = [size] * N
    else:
        sizes = draw(st.lists(st.integers(1, 2), min_size=N, max_size=N).filter(lambda s: sum(s) <= 6))
    rng = random.Random(draw(st.integers(0, 2**20)))
    layout = _BlockLayout(sizes)
    offsets = [sum(sizes[:i]) for i in range(N)]
    S = layout.S
    blocks = []
    for b in range(N - 1):
        r, c = sizes[b], sizes[b + 1]
        if invertible:
            lower = [[rng.randint(-2, 2) if j < i else int(i == j) for j in range(r)] for i in range(r)]
            blocks.append(ExactMatrix.from_rows(f, lower))
        else:
            blocks.append(ExactMatrix.from_rows(f, [[rng.randint(-2, 2) for _ in range(c)] for _ in range(r)]))
    if invertible:
        lam = rng.choice([1, 2, -3])
        prod = ExactMatrix.identity(f, sizes[0])
        for B in blocks:
            prod = prod @ B
        blocks.append(inverse(prod).scaled(f(lam)))
    else:
        blocks.append(ExactMatrix.zeros(f, sizes[-1], sizes[0]))
    entries = {}
    for b, B in enumerate(blocks):
        r0, c0 = offsets[b], offsets[(b + 1) % N]
        for i in range(B.rows):
            for j in range(B.cols):
                if any(B.data[i][j]):
                    entries[(r0 + i, c0 + j)] = B.data[i][j]
    return sizes, ExactMatrix.from_sparse(f, S, S, entries), q_generator(f)


@given(admissible_e())
def test_matrix_qdga_properties(data):
    sizes, e, q = data
    A = matrix_qdga(sizes, e, q)
    assert verify_nilpotency(A.complex).ok
    assert leibniz_check(A).ok
    assert A.check_grading()
    lifted = pullback_grading(A, 2 * A.N + 1)
    assert projection_intertwines(lifted, A)
