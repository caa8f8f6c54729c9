import random

import pytest
from hypothesis import given, strategies as st

from qnil.errors import IndeterminateError
from qnil.exact_linalg import ExactMatrix
from qnil.ncomplex import (
    ZMOD_N,
    Z_GRADED,
    HomologyReport,
    NComplex,
    StringSpec,
    hexagon_check,
    homology,
    homotopy_vanishing_check,
    induced_power_maps,
    long_sequence_check,
    string_complex,
    string_homology_oracle,
    verify_nilpotency,
)
from qnil.scalars import cyclotomic_field, q_generator

F = {N: cyclotomic_field(N) for N in range(2, 6)}


def zero_complex(N, dims, grading=Z_GRADED):
    return NComplex(N, F[N], dims, {}, grading=grading)


def test_nilpotency_examples():
    assert verify_nilpotency(zero_complex(3, {0: 2, 1: 1, 2: 3})).ok
    assert verify_nilpotency(string_complex([StringSpec(0, 3)], 3, F[3])).ok
    bad = verify_nilpotency(string_complex([StringSpec(0, 4)], 3, F[3], validate=False))
    assert not bad.ok and bad.failing_degree == 0


def test_string_length_above_n_rejected():
    with pytest.raises(ValueError):
        string_complex([StringSpec(0, 4)], 3, F[3])


def test_levels_zero_and_n_vanish():
    C = string_complex([StringSpec(0, 1), StringSpec(1, 2)], 3, F[3])
    for n in C.degrees:
        assert homology(C, 0, n).dim == 0
        assert homology(C, 3, n).dim == 0


def test_homology_examples():
    C = string_complex([StringSpec(0, 1)], 3, F[3])
    assert homology(C, 1, 0).dim == 1
    assert homology(C, 2, 0).dim == 1
    full = string_complex([StringSpec(0, 3)], 3, F[3])
    assert all(homology(full, k, n).dim == 0 for k in (1, 2) for n in full.degrees)
    C4 = string_complex([StringSpec(2, 2)], 4, F[4])
    assert homology(C4, 2, 2).dim == 1 and homology(C4, 2, 3).dim == 1


def test_homology_report_json():
    rep = homology(string_complex([StringSpec(0, 1)], 3, F[3]), 1, 0)
    obj = rep.to_json()
    assert obj == {"k": 1, "n": 0, "dim": 1, "kernel_dim": 1, "image_dim": 0}
    assert HomologyReport.from_json(obj) == rep


def test_truncated_window_is_indeterminate():
    C = NComplex(3, F[3], {0: 1, 1: 1, 2: 1}, {}, bounded=False)
    assert C.determinate(1, 1) and not C.determinate(2, 1)
    with pytest.raises(IndeterminateError):
        homology(C, 2, 1)


def test_zero_differential_hexagon_by_rank_count():
    C = zero_complex(3, {0: 2, 1: 0, 2: 0}, grading=ZMOD_N)
    # every H^(k) is the whole space; i maps are identities and d maps zero
    assert homology(C, 1, 0).dim == 2 and homology(C, 2, 0).dim == 2
    for l, m in [(1, 1), (1, 2), (2, 1)]:
        rep = hexagon_check(C, l, m)
        assert rep.ok and len(rep.nodes) == 18


def test_full_string_hexagon_trivial():
    C = string_complex([StringSpec(0, 4)], 4, F[4], grading=ZMOD_N)
    rep = hexagon_check(C, 1, 2)
    assert rep.ok and all(node.dim == 0 for node in rep.nodes)
    G = string_complex([StringSpec(0, 4)], 4, F[4])
    assert long_sequence_check(G, 1, 2).ok


def test_exactness_needs_right_grading():
    C = string_complex([StringSpec(0, 2)], 3, F[3])
    with pytest.raises(ValueError):
        hexagon_check(C, 1, 1)
    with pytest.raises(ValueError):
        long_sequence_check(string_complex([StringSpec(0, 2)], 3, F[3], grading=ZMOD_N), 1, 1)
    with pytest.raises(ValueError):
        long_sequence_check(C, 2, 2)


def test_broken_complex_fails_exactness():
    # d^2 != 0 at N = 2: the induced maps are not even defined
    f = F[2]
    one = ExactMatrix.identity(f, 1)
    C = NComplex(2, f, {0: 1, 1: 1, 2: 1}, {0: one, 1: one})
    assert not verify_nilpotency(C).ok


def test_homotopy_zero_map_fails_identity():
    C = string_complex([StringSpec(0, 3)], 3, F[3])
    rep = homotopy_vanishing_check(C, {})
    assert not rep.identity_ok


def test_homotopy_on_single_full_string():
    # h v_(i+1) = c_i v_i; hd - q dh = I forces c_0 = 1 and c_i = 1 + q c_(i-1)
    N = 3
    f = F[N]
    q = q_generator(f)
    C = string_complex([StringSpec(0, N)], N, f)
    c0 = f.one
    c1 = f.add(f.one, q.coeffs)
    h = {1: ExactMatrix(f, 1, 1, [[c0]]), 2: ExactMatrix(f, 1, 1, [[c1]])}
    rep = homotopy_vanishing_check(C, h, q=q)
    assert rep.ok


@st.composite
def string_lists(draw, grading=None):
    N = draw(st.integers(2, 5))
    specs = draw(
        st.lists(st.builds(StringSpec, st.integers(-2, 4), st.integers(1, N)), min_size=0, max_size=6)
    )
    shuffle = draw(st.one_of(st.none(), st.integers(0, 2**20)))
    g = grading or draw(st.sampled_from([Z_GRADED, ZMOD_N]))
    return N, specs, shuffle, g


@given(string_lists())
def test_string_oracle_matches_homology(data):
    N, specs, shuffle, grading = data
    C = string_complex(specs, N, F[N], shuffle_seed=shuffle, grading=grading)
    for k in range(1, N):
        for n in C.degrees:
            assert homology(C, k, n).dim == string_homology_oracle(specs, N, k, n, grading)


@given(string_lists())
def test_image_inside_kernel(data):
    N, specs, shuffle, grading = data
    C = string_complex(specs, N, F[N], shuffle_seed=shuffle, grading=grading)
    for k in range(N + 1):
        for n in C.degrees:
            rep = homology(C, k, n)
            assert rep.dim == rep.kernel_dim - rep.image_dim >= 0


@given(string_lists(grading=ZMOD_N))
def test_hexagon_exact_on_strings(data):
    N, specs, shuffle, grading = data
    C = string_complex(specs, N, F[N], shuffle_seed=shuffle, grading=grading)
    for l in range(1, N):
        for m in range(1, N - l + 1):
            assert hexagon_check(C, l, m).ok


@given(string_lists(grading=Z_GRADED))
def test_long_sequences_exact_on_strings(data):
    N, specs, shuffle, grading = data
    C = string_complex(specs, N, F[N], shuffle_seed=shuffle, grading=grading)
    for l in range(1, N):
        for m in range(1, N - l + 1):
            assert long_sequence_check(C, l, m).ok


@given(string_lists())
def test_induced_powers(data):
    N, specs, shuffle, grading = data
    C = string_complex(specs, N, F[N], shuffle_seed=shuffle, grading=grading)
    for n in C.degrees:
        for k in range(1, N):
            for j in range(1, N - k + 1):
                direct, power = induced_power_maps(C, "i", j, k, n)
                assert direct == power
            for j in range(1, k + 1):
                if grading == Z_GRADED and n + j > C.hi:
                    continue
                direct, power = induced_power_maps(C, "d", j, k, n)
                assert direct == power


@given(st.integers(0, 10_000))
def test_homotopy_identity_implies_sum_and_vanishing(seed):
    # random sums of full strings admit a homotopy; build it in the string basis
    rng = random.Random(seed)
    N = rng.choice([2, 3, 4])
    f = F[N]
    q = q_generator(f)
    specs = [StringSpec(rng.randint(0, 3), N) for _ in range(rng.randint(1, 3))]
    C = string_complex(specs, N, f)
    # on each string h v_(i+1) = c_i v_i with c_0 = 1, c_i = 1 + q c_(i-1)
    entries = {n: {} for n in C.degrees}
    counters = {n: 0 for n in C.degrees}
    for s in specs:
        idx = []
        for i in range(s.length):
            n = s.start_degree + i
            idx.append((n, counters[n]))
            counters[n] += 1
        c = f.one
        for i in range(1, s.length):
            (n1, b), (n0, a) = idx[i], idx[i - 1]
            entries[n1][(a, b)] = c
            c = f.add(f.one, f.mul(q.coeffs, c))
    h = {n: ExactMatrix.from_sparse(f, C.dim(n - 1), C.dim(n), entries[n]) for n in C.degrees if C.dim(n - 1)}
    rep = homotopy_vanishing_check(C, h, q=q)
    assert rep.identity_ok
    assert rep.sum_ok and rep.vanishing_ok
