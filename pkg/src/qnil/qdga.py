"""Graded q-differential algebras, finite-dimensional algebras, and the matrix example.

A :class:`QDGA` is an :class:`~qnil.ncomplex.NComplex` together with a unit in
degree 0 and a product given on basis elements.  Products are sparse dicts
``{index: raw}`` internally; public vectors are dense lists of raw
coefficient tuples.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from gmpy2 import mpq

from .errors import AxiomViolation
from .exact_linalg import ExactMatrix, inverse
from .ncomplex import NComplex, ZMOD_N, Z_GRADED, verify_nilpotency
from .scalars import Scalar, rational_field

__all__ = [
    "AlgebraSpec",
    "QDGA",
    "LeibnizReport",
    "leibniz_check",
    "matrix_qdga",
    "matrix_qdga_graded",
    "pullback_grading",
    "projection_intertwines",
    "cyclic_shift",
    "nilpotent_shift",
    "elementary_step",
]


class AlgebraSpec:
    """Finite-dimensional unital associative algebra over Q by structure constants.

    ``sc[i][j][k]`` is the coefficient of ``e_k`` in ``e_i e_j``; ``unit`` holds
    the coordinates of 1.
    """

    def __init__(self, dim: int, sc, unit, name: str = "", check: bool = True):
        self.dim = dim
        self.sc = tuple(tuple(tuple(mpq(c) for c in row) for row in plane) for plane in sc)
        self.unit = tuple(mpq(c) for c in unit)
        self.name = name
        if len(self.sc) != dim or any(len(p) != dim or any(len(r) != dim for r in p) for p in self.sc):
            raise ValueError(f"structure constants must have shape {dim}x{dim}x{dim}")
        if len(self.unit) != dim:
            raise ValueError("unit vector has the wrong length")
        self._table = {
            (i, j): [(k, c) for k, c in enumerate(self.sc[i][j]) if c]
            for i in range(dim)
            for j in range(dim)
        }
        self._raw: dict = {}
        if check:
            self.check_axioms()

    def __repr__(self):
        return f"AlgebraSpec({self.name or 'dim=' + str(self.dim)})"

    def products(self, i: int, j: int) -> list[tuple[int, mpq]]:
        return self._table[(i, j)]

    def multiply(self, x, y) -> list[mpq]:
        out = [mpq(0)] * self.dim
        for i, xi in enumerate(x):
            if xi:
                for j, yj in enumerate(y):
                    if yj:
                        for k, c in self._table[(i, j)]:
                            out[k] += xi * yj * c
        return out

    def raw_table(self, field):
        """Structure constants and unit as raw scalars of ``field``."""
        cached = self._raw.get(field)
        if cached is None:
            table = {ij: [(k, field.coerce(c)) for k, c in items] for ij, items in self._table.items()}
            unit = [(i, field.coerce(c)) for i, c in enumerate(self.unit) if c]
            cached = (table, unit)
            self._raw[field] = cached
        return cached

    def basis_vector(self, i: int) -> list[mpq]:
        return [mpq(1) if t == i else mpq(0) for t in range(self.dim)]

    def check_axioms(self):
        for i, j, k in iproduct(range(self.dim), repeat=3):
            left = self.multiply(self.multiply(self.basis_vector(i), self.basis_vector(j)), self.basis_vector(k))
            right = self.multiply(self.basis_vector(i), self.multiply(self.basis_vector(j), self.basis_vector(k)))
            if left != right:
                raise AxiomViolation(f"associativity fails on basis triple {(i, j, k)}", (i, j, k))
        for i in range(self.dim):
            e = self.basis_vector(i)
            if self.multiply(self.unit, e) != e or self.multiply(e, self.unit) != e:
                raise AxiomViolation(f"unit fails on basis element {i}", (i,))

    def change_basis(self, P) -> "AlgebraSpec":
        """Same algebra in the basis given by the columns of ``P`` (old coordinates)."""
        F = rational_field()
        P = P if isinstance(P, ExactMatrix) else ExactMatrix.from_rows(F, P)
        Pinv = inverse(P)
        cols = [[c[0] for c in col] for col in P.columns()]
        n = self.dim
        sc = []
        for i in range(n):
            plane = []
            for j in range(n):
                prod = self.multiply(cols[i], cols[j])
                plane.append([c[0] for c in Pinv.apply([(x,) for x in prod])])
            sc.append(plane)
        unit = [c[0] for c in Pinv.apply([(x,) for x in self.unit])]
        return AlgebraSpec(n, sc, unit, name=self.name and f"{self.name}'")

    def to_json(self) -> dict:
        def s(c):
            return f"{c.numerator}/{c.denominator}"

        return {
            "dim": self.dim,
            "unit": [s(c) for c in self.unit],
            "sc": [[[s(c) for c in row] for row in plane] for plane in self.sc],
        }

    @classmethod
    def from_json(cls, obj: dict, name: str = "") -> "AlgebraSpec":
        return cls(int(obj["dim"]), obj["sc"], obj["unit"], name=name or obj.get("name", ""))

    # -- standard examples -------------------------------------------------

    @classmethod
    def ground(cls) -> "AlgebraSpec":
        """The ground field itself, one-dimensional."""
        return cls(1, [[[1]]], [1], name="C")

    @classmethod
    def diagonal(cls, n: int) -> "AlgebraSpec":
        """``C^n`` with orthogonal idempotents ``e_i``."""
        sc = [[[1 if (i == j == k) else 0 for k in range(n)] for j in range(n)] for i in range(n)]
        return cls(n, sc, [1] * n, name="+".join(["C"] * n))

    @classmethod
    def truncated_polynomial(cls, m: int) -> "AlgebraSpec":
        """``C[x]/(x^m)`` in the monomial basis ``1, x, ..., x^(m-1)``."""
        sc = [[[1 if (i + j == k) else 0 for k in range(m)] for j in range(m)] for i in range(m)]
        name = "C[x]/(x^2)" if m == 2 else f"C[x]/(x^{m})"
        return cls(m, sc, [1] + [0] * (m - 1), name=name)

    @classmethod
    def cyclic_group(cls, n: int) -> "AlgebraSpec":
        sc = [[[1 if (i + j) % n == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
        return cls(n, sc, [1] + [0] * (n - 1), name=f"C[Z/{n}]")

    @classmethod
    def upper_triangular(cls) -> "AlgebraSpec":
        """2x2 upper triangular matrices, basis ``E11, E12, E22``."""
        units = [(0, 0), (0, 1), (1, 1)]
        sc = [[[0] * 3 for _ in range(3)] for _ in range(3)]
        for i, (a, b) in enumerate(units):
            for j, (c, d) in enumerate(units):
                if b == c:
                    sc[i][j][units.index((a, d))] = 1
        return cls(3, sc, [1, 0, 1], name="T2")


def _sparse_add(out: dict, vec: dict, coeff, field):
    mul, add = field.mul, field.add
    for k, v in vec.items():
        term = mul(coeff, v)
        if k in out:
            out[k] = add(out[k], term)
        else:
            out[k] = term


def _dense(vec: dict, n: int, field) -> list:
    out = [field.zero] * n
    for k, v in vec.items():
        out[k] = v
    return out


def _sparse(vec) -> dict:
    return {i: v for i, v in enumerate(vec) if any(v)}


class QDGA:
    """Graded algebra with a degree-1 q-differential.

    ``basis_product(a, i, b, j)`` returns the product of basis element ``i`` of
    degree ``a`` with basis element ``j`` of degree ``b`` as a sparse dict in
    degree ``a + b``.
    """

    def __init__(self, complex: NComplex, q: Scalar, unit, basis_product, name: str = ""):
        self.complex = complex
        self.q = q
        self.field = complex.field
        self.unit = list(unit)
        self._basis_product = basis_product
        self.name = name
        if len(self.unit) != complex.dim(0):
            raise ValueError("unit must live in degree 0")

    def __repr__(self):
        return f"QDGA({self.name or self.complex!r})"

    @property
    def N(self) -> int:
        return self.complex.N

    def dim(self, n: int) -> int:
        return self.complex.dim(n)

    def product_defined(self, a: int, b: int) -> bool:
        C = self.complex
        if C.grading == ZMOD_N:
            return True
        return C.lo <= a and C.lo <= b and a + b <= C.hi

    def basis_product(self, a: int, i: int, b: int, j: int) -> dict:
        if not self.product_defined(a, b):
            raise ValueError(f"product of degrees {a} and {b} leaves the window")
        return self._basis_product(a, i, b, j)

    def multiply_sparse(self, a: int, x: dict, b: int, y: dict) -> dict:
        f = self.field
        out: dict = {}
        for i, xi in x.items():
            for j, yj in y.items():
                _sparse_add(out, self.basis_product(a, i, b, j), f.mul(xi, yj), f)
        return {k: v for k, v in out.items() if any(v)}

    def multiply(self, a: int, x, b: int, y) -> list:
        """Product of dense vectors ``x`` (degree ``a``) and ``y`` (degree ``b``)."""
        out = self.multiply_sparse(a, _sparse(x), b, _sparse(y))
        return _dense(out, self.dim(a + b), self.field)

    def product_tensor(self, a: int, b: int) -> ExactMatrix:
        """The product ``A^a x A^b -> A^(a+b)`` as a matrix on ``i * dim(b) + j``."""
        db = self.dim(b)
        entries = {}
        for i in range(self.dim(a)):
            for j in range(db):
                for k, v in self.basis_product(a, i, b, j).items():
                    entries[(k, i * db + j)] = v
        return ExactMatrix.from_sparse(self.field, self.dim(a + b), self.dim(a) * db, entries)

    def differential(self, n: int, x) -> list:
        return self.complex.d_at(n).apply(list(x))

    def check_unit(self) -> tuple | None:
        """First basis element on which the unit fails, or ``None``."""
        one = _sparse(self.unit)
        for n in self.complex.degrees:
            if not self.product_defined(0, n):
                continue
            for i in range(self.dim(n)):
                e = {i: self.field.one}
                if self.multiply_sparse(0, one, n, e) != e or self.multiply_sparse(n, e, 0, one) != e:
                    return (n, i)
        return None

    def check_associativity(self, max_total: int | None = None) -> tuple | None:
        """First basis triple violating associativity, or ``None``."""
        C = self.complex
        degs = C.degrees
        one = self.field.one
        for a, b, c in iproduct(degs, repeat=3):
            if max_total is not None and a + b + c > max_total:
                continue
            if not (self.product_defined(a, b) and self.product_defined(a + b, c)):
                continue
            for i, j, k in iproduct(range(self.dim(a)), range(self.dim(b)), range(self.dim(c))):
                ab = self.basis_product(a, i, b, j)
                left = self.multiply_sparse(a + b, ab, c, {k: one})
                bc = self.basis_product(b, j, c, k)
                right = self.multiply_sparse(a, {i: one}, b + c, bc)
                if left != right:
                    return ((a, i), (b, j), (c, k))
        return None

    def check_grading(self) -> bool:
        """Every basis product has the dimension of its target degree."""
        for a, b in iproduct(self.complex.degrees, repeat=2):
            if self.product_defined(a, b):
                n = self.dim(a + b)
                for i, j in iproduct(range(self.dim(a)), range(self.dim(b))):
                    if any(k >= n for k in self.basis_product(a, i, b, j)):
                        return False
        return True


@dataclass(frozen=True)
class LeibnizReport:
    ok: bool
    failure: tuple | None
    pairs_checked: int

    def __bool__(self):
        return self.ok


def leibniz_check(A: QDGA, q: Scalar | None = None) -> LeibnizReport:
    """Check ``d(xy) = d(x) y + q^a x d(y)`` on all basis pairs in the window."""
    C = A.complex
    f = A.field
    q = A.q if q is None else q
    mul = f.mul
    dcols: dict = {}

    def dbasis(n, i):
        key = (C.norm(n), i)
        if key not in dcols:
            dcols[key] = _sparse(C.d_at(n).column(i))
        return dcols[key]

    checked = 0
    degs = C.degrees
    for a, b in iproduct(degs, repeat=2):
        if not A.product_defined(a, b) or not A.product_defined(a + 1, b) or not A.product_defined(a, b + 1):
            continue
        if not C.d_known(a + b):
            continue
        qa = f.power(q.coeffs, a)
        da = C.d_at(a + b)
        for i in range(A.dim(a)):
            di = dbasis(a, i)
            for j in range(A.dim(b)):
                checked += 1
                xy = _dense(A.basis_product(a, i, b, j), A.dim(a + b), f)
                lhs = _sparse(da.apply(xy))
                rhs = A.multiply_sparse(a + 1, di, b, {j: f.one})
                second = A.multiply_sparse(a, {i: f.one}, b + 1, dbasis(b, j))
                _sparse_add(rhs, second, qa, f)
                rhs = {k: v for k, v in rhs.items() if any(v)}
                if lhs != rhs:
                    return LeibnizReport(False, ((a, i), (b, j)), checked)
    return LeibnizReport(True, None, checked)


# -- block matrix algebra ----------------------------------------------------------


class _BlockLayout:
    def __init__(self, block_sizes):
        if not block_sizes or any(int(n) < 1 for n in block_sizes):
            raise ValueError("block sizes must be positive integers")
        self.N = len(block_sizes)
        self.sizes = [int(n) for n in block_sizes]
        self.S = sum(self.sizes)
        self.block = [b for b, n in enumerate(self.sizes) for _ in range(n)]
        N = self.N
        self.comps = [[] for _ in range(N)]
        for r in range(self.S):
            for c in range(self.S):
                self.comps[(self.block[c] - self.block[r]) % N].append((r, c))
        self.index = [{rc: t for t, rc in enumerate(comp)} for comp in self.comps]

    def degree(self, r: int, c: int) -> int:
        return (self.block[c] - self.block[r]) % self.N


def cyclic_shift(field, block_sizes=None, N: int = 3) -> ExactMatrix:
    """``e = E_12 + E_23 + ... + E_N1`` for unit blocks; satisfies ``e^N = 1``."""
    if block_sizes is not None and any(n != 1 for n in block_sizes):
        raise ValueError("the cyclic-shift preset needs all blocks of size 1")
    S = N if block_sizes is None else len(block_sizes)
    return ExactMatrix.from_sparse(field, S, S, {(i, (i + 1) % S): field.one for i in range(S)})


def nilpotent_shift(field, N: int = 3) -> ExactMatrix:
    """``e = E_12 + ... + E_(N-1)N`` for unit blocks; ``e^N = 0``."""
    return ExactMatrix.from_sparse(field, N, N, {(i, i + 1): field.one for i in range(N - 1)})


def elementary_step(field, N: int = 3) -> ExactMatrix:
    """``e = E_12`` for unit blocks; ``e^2 = 0``, and the homology does not vanish."""
    return ExactMatrix.from_sparse(field, N, N, {(0, 1): field.one})


def _validate_e(layout: _BlockLayout, e: ExactMatrix):
    f = e.field
    if e.shape != (layout.S, layout.S):
        raise AxiomViolation(f"e must be {layout.S}x{layout.S}, got {e.shape}")
    for r in range(layout.S):
        for c in range(layout.S):
            if any(e.data[r][c]) and layout.degree(r, c) != 1 % layout.N:
                raise AxiomViolation(f"e has an entry at ({r}, {c}) outside degree 1", (r, c))
    power = ExactMatrix.identity(f, layout.S)
    for _ in range(layout.N):
        power = power @ e
    lam = power.data[0][0]
    if power != ExactMatrix.identity(f, layout.S).scaled(f.wrap(lam)):
        raise AxiomViolation("e^N is not a multiple of the identity")
    return f.wrap(lam)


def _matrix_d(layout, e: ExactMatrix, qpow, src: int) -> ExactMatrix:
    """``A -> eA - q^a Ae`` from component ``src`` to ``src + 1`` (mod N)."""
    f = e.field
    N = layout.N
    dst = (src + 1) % N
    src_comp = layout.comps[src]
    dst_index = layout.index[dst]
    nq = f.neg(qpow)
    entries: dict = {}
    nonzero_in_col = {
        c: [(s, e.data[s][c]) for s in range(layout.S) if any(e.data[s][c])] for c in range(layout.S)
    }
    nonzero_in_row = {
        r: [(t, e.data[r][t]) for t in range(layout.S) if any(e.data[r][t])] for r in range(layout.S)
    }
    for col, (r, c) in enumerate(src_comp):
        # e E_rc = sum_s e[s][r] E_sc
        for s, v in nonzero_in_col[r]:
            key = (dst_index[(s, c)], col)
            entries[key] = f.add(entries.get(key, f.zero), v)
        # E_rc e = sum_t e[c][t] E_rt
        for t, v in nonzero_in_row[c]:
            key = (dst_index[(r, t)], col)
            entries[key] = f.add(entries.get(key, f.zero), f.mul(nq, v))
    return ExactMatrix.from_sparse(f, len(layout.comps[dst]), len(src_comp), entries)


def _matrix_product(layout, field, deg_a, deg_b, deg_ab):
    comps, index = layout.comps, layout.index
    one = field.one

    def basis_product(a, i, b, j):
        r, c = comps[deg_a(a)][i]
        r2, c2 = comps[deg_b(b)][j]
        if c != r2:
            return {}
        return {index[deg_ab(a + b)][(r, c2)]: one}

    return basis_product


def _as_matrix(e, field) -> ExactMatrix:
    return e if isinstance(e, ExactMatrix) else ExactMatrix.from_rows(field, e)


class MatrixQDGA(QDGA):
    """The block-graded matrix algebra; keeps its layout, ``e`` and ``lambda``."""

    layout: _BlockLayout
    e: ExactMatrix
    lam: Scalar


def matrix_qdga(block_sizes, e, q: Scalar) -> MatrixQDGA:
    """``M_S`` graded by ``deg(A^i_j) = j - i mod N`` with ``d(A) = eA - q^a Ae``.

    ``e`` must be supported in degree 1 with ``e^N`` a multiple of 1; ``d^N = 0``
    is verified whenever ``q^N = 1``.
    """
    f = q.field
    layout = _BlockLayout(block_sizes)
    N = layout.N
    e = _as_matrix(e, f)
    lam = _validate_e(layout, e)
    dims = {a: len(layout.comps[a]) for a in range(N)}
    d = {a: _matrix_d(layout, e, f.power(q.coeffs, a), a) for a in range(N)}
    C = NComplex(N, f, dims, d, grading=ZMOD_N)
    if q ** N == 1:
        rep = verify_nilpotency(C)
        assert rep.ok, f"d^N != 0 at degree {rep.failing_degree}"
    unit = [f.one if r == c else f.zero for (r, c) in layout.comps[0]]
    bp = _matrix_product(layout, f, lambda a: a % N, lambda b: b % N, lambda s: s % N)
    A = MatrixQDGA(C, q, unit, bp, name=f"M_{layout.S} blocks={layout.sizes}")
    A.layout, A.e, A.lam = layout, e, lam
    return A


def matrix_qdga_graded(block_sizes, e, q: Scalar, n_max: int) -> MatrixQDGA:
    """The N-graded matrix algebra with ``d(A) = eA - q^n Ae`` on degree ``n``.

    Valid for any ``q``; for ``q^N = 1`` it coincides with
    :func:`pullback_grading` of :func:`matrix_qdga`.
    """
    f = q.field
    layout = _BlockLayout(block_sizes)
    N = layout.N
    e = _as_matrix(e, f)
    lam = _validate_e(layout, e)
    dims = {n: len(layout.comps[n % N]) for n in range(n_max + 1)}
    d = {n: _matrix_d(layout, e, f.power(q.coeffs, n), n % N) for n in range(n_max)}
    C = NComplex(N, f, dims, d, grading=Z_GRADED, bounded=False)
    unit = [f.one if r == c else f.zero for (r, c) in layout.comps[0]]
    bp = _matrix_product(layout, f, lambda a: a % N, lambda b: b % N, lambda s: s % N)
    A = MatrixQDGA(C, q, unit, bp, name=f"p*M_{layout.S} blocks={layout.sizes}")
    A.layout, A.e, A.lam = layout, e, lam
    return A


def pullback_grading(A: QDGA, hi: int) -> QDGA:
    """Lift a Z/N-graded q-differential algebra to degrees ``0..hi``.

    Degree ``n`` is a copy of degree ``n mod N``; product and ``d`` are the
    unique lifts making the projection a homomorphism that commutes with
    ``d``.  Requires ``q^N = 1``.
    """
    C = A.complex
    if C.grading != ZMOD_N:
        raise ValueError("pullback_grading needs a Z/N-graded algebra")
    N = C.N
    if A.q ** N != 1:
        raise ValueError("the lifted d is only well defined when q^N = 1")
    dims = {n: C.dim(n % N) for n in range(hi + 1)}
    d = {n: C.d_at(n % N) for n in range(hi)}
    lifted = NComplex(N, A.field, dims, d, grading=Z_GRADED, bounded=False)
    base_product = A._basis_product

    def bp(a, i, b, j):
        return base_product(a % N, i, b % N, j)

    out = QDGA(lifted, A.q, A.unit, bp, name=f"p*({A.name})")
    rep = verify_nilpotency(lifted)
    assert rep.ok, f"lifted d^N != 0 at degree {rep.failing_degree}"
    return out


def projection_intertwines(lifted: QDGA, base: QDGA) -> bool:
    """``pi d = d pi`` and ``pi(xy) = pi(x) pi(y)`` for the degree-wise projection."""
    N = base.N
    C = lifted.complex
    for n in C.degrees:
        if C.d_known(n) and C.d_at(n) != base.complex.d_at(n % N):
            return False
    for a, b in iproduct(C.degrees, repeat=2):
        if not lifted.product_defined(a, b):
            continue
        for i, j in iproduct(range(lifted.dim(a)), range(lifted.dim(b))):
            if lifted.basis_product(a, i, b, j) != base.basis_product(a % N, i, b % N, j):
                return False
    return True
