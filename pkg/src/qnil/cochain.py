"""Copresimplicial spaces and the three cochain families built on them.

* simplicial q-forms on a finite simplicial complex,
* q-Hochschild cochains ``C(A, M)`` with the cup product when ``M = A``,
* the dual-of-product complex ``C(A) = (A^{(x)n})^*`` with its contracting
  homotopy.

Every family is assembled twice: directly from its closed-form differential
and as the generic ``d_q`` / ``d~_q`` of an explicit coface family, so the
two can be compared matrix by matrix.  Cochain bases are elementary tensors
in lexicographic order.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from itertools import combinations
from itertools import product as iproduct

from gmpy2 import mpq

from .errors import AxiomViolation, InputError, ResourceCapExceeded
from .exact_linalg import ExactMatrix, inverse
from .ncomplex import NComplex, Z_GRADED
from .qdga import QDGA, AlgebraSpec
from .scalars import Scalar, ScalarField, nilpotency_order

__all__ = [
    "DEFAULT_CAP",
    "CopresimplicialSpace",
    "SimplicialComplexSpec",
    "BimoduleSpec",
    "d_q_from_cofaces",
    "random_copresimplicial",
    "simplicial_cofaces",
    "simplicial_forms",
    "hochschild_cofaces",
    "hochschild_complex",
    "hochschild_qdga",
    "hochschild_expected_dim",
    "dual_product_cofaces",
    "dual_product_complex",
    "dual_product_qdga",
    "DUAL_PRODUCT_SHIFT",
]

DEFAULT_CAP = 4096
LOWER = "lower"
FULL = "full"

# coface level n of the dual-product family sits in cochain degree n + 2
DUAL_PRODUCT_SHIFT = 2


def _guard(dim: int, cap: int, what: str):
    if dim > cap:
        raise ResourceCapExceeded(f"{what} has dimension {dim}, above the cap {cap}")


def _tuple_index(t, base: int) -> int:
    idx = 0
    for x in t:
        idx = idx * base + x
    return idx


class CopresimplicialSpace:
    """Levels ``E^0, ..., E^top`` with cofaces ``f_k: E^n -> E^(n+1)``, ``k = 0..n+1``."""

    def __init__(self, field: ScalarField, dims: dict[int, int], cofaces: dict, bounded: bool = False):
        self.field = field
        self.dims = dict(dims)
        self.top = max(dims)
        if sorted(dims) != list(range(self.top + 1)):
            raise ValueError("levels must be 0..top")
        self.cofaces = dict(cofaces)
        self.bounded = bounded
        for n in range(self.top):
            for k in range(n + 2):
                m = self.cofaces.get((n, k))
                if m is None:
                    raise ValueError(f"missing coface f_{k} on level {n}")
                if m.shape != (dims[n + 1], dims[n]):
                    raise ValueError(f"coface f_{k} on level {n} has shape {m.shape}")

    def coface(self, n: int, k: int) -> ExactMatrix:
        return self.cofaces[(n, k)]

    def identity_failure(self) -> tuple | None:
        """First ``(n, k, l)`` with ``f_l f_k != f_k f_(l-1)`` (``k < l``), or ``None``."""
        for n in range(self.top - 1):
            for l in range(n + 3):
                for k in range(l):
                    lhs = self.coface(n + 1, l) @ self.coface(n, k)
                    rhs = self.coface(n + 1, k) @ self.coface(n, l - 1)
                    if lhs != rhs:
                        return (n, k, l)
        return None

    def check_identities(self):
        witness = self.identity_failure()
        if witness is not None:
            n, k, l = witness
            raise AxiomViolation(f"coface identity fails on level {n} for k={k}, l={l}", witness)


def d_q_from_cofaces(S: CopresimplicialSpace, q: Scalar, variant: str = LOWER, N: int | None = None) -> NComplex:
    """``d_q = sum_(k<=n) q^k f_k - q^n f_(n+1)`` (lower) or ``sum_(k<=n+1) q^k f_k`` (full)."""
    if variant not in (LOWER, FULL):
        raise ValueError(f"variant must be {LOWER!r} or {FULL!r}")
    S.check_identities()
    f = S.field
    N = nilpotency_order(q, N)
    d = {}
    for n in range(S.top):
        m = ExactMatrix.zeros(f, S.dims[n + 1], S.dims[n])
        for k in range(n + 1):
            m = m + S.coface(n, k).scaled(q ** k)
        last = q ** (n + 1) if variant == FULL else -(q ** n)
        d[n] = m + S.coface(n, n + 1).scaled(last)
    return NComplex(N, f, S.dims, d, grading=Z_GRADED, bounded=S.bounded)


# -- random coface families ---------------------------------------------------


def _random_delta_set(rng: random.Random, levels: int, max_dim: int):
    """Random semi-simplicial set: ``faces[n][s]`` lists the faces of simplex ``s``.

    Level ``n`` always contains a simplex all of whose faces are the
    corresponding simplex of level ``n - 1`` (index 0), so every level is
    nonempty.
    """
    faces = [[()] * rng.randint(1, max_dim)]
    for n in range(1, levels):
        prev = faces[n - 1]
        simplices = [tuple([0] * (n + 1))]
        target = rng.randint(1, max_dim)
        attempts = 0
        while len(simplices) < target and attempts < 40:
            attempts += 1
            cand = _random_compatible(rng, faces, n)
            if cand is not None:
                simplices.append(cand)
        faces.append(simplices)
        del prev
    return faces


def _random_compatible(rng, faces, n):
    # need d_i sigma_j = d_(j-1) sigma_i for i < j
    prev = faces[n - 1]
    chosen: list[int] = []

    def face(s, level, i):
        return faces[level][s][i]

    def extend(j):
        if j == n + 1:
            return True
        order = list(range(len(prev)))
        rng.shuffle(order)
        for s in order:
            ok = n == 1 or all(face(s, n - 1, i) == face(chosen[i], n - 1, j - 1) for i in range(j))
            if ok:
                chosen.append(s)
                if extend(j + 1):
                    return True
                chosen.pop()
        return False

    return tuple(chosen) if extend(0) else None


def random_copresimplicial(field: ScalarField, seed: int, levels: int = 8, max_dim: int = 4) -> CopresimplicialSpace:
    """Dual of a random semi-simplicial set, in a random graded basis."""
    rng = random.Random(seed)
    faces = _random_delta_set(rng, levels, max_dim)
    dims = {n: len(faces[n]) for n in range(levels)}
    cofaces = {}
    for n in range(levels - 1):
        for k in range(n + 2):
            entries = {(s, faces[n + 1][s][k]): field.one for s in range(dims[n + 1])}
            cofaces[(n, k)] = ExactMatrix.from_sparse(field, dims[n + 1], dims[n], entries)
    from .ncomplex import random_unitriangular

    P = {n: random_unitriangular(rng, field, dims[n], spread=1) for n in dims}
    Pinv = {n: inverse(P[n]) for n in dims}
    cofaces = {(n, k): P[n + 1] @ m @ Pinv[n] for (n, k), m in cofaces.items()}
    return CopresimplicialSpace(field, dims, cofaces, bounded=False)


# -- simplicial forms -------------------------------------------------------------


@dataclass
class SimplicialComplexSpec:
    """Finite vertex set and facets; the simplices are all nonempty subsets of facets."""

    vertices: list
    facets: list
    simplices: set = dc_field(init=False, repr=False)

    def __post_init__(self):
        self.vertices = list(self.vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("vertex labels must be distinct")
        pos = {v: i for i, v in enumerate(self.vertices)}
        self.simplices = set()
        for facet in self.facets:
            facet = list(facet)
            if not facet:
                raise InputError("facets must be nonempty sets of vertices")
            unknown = [v for v in facet if v not in pos]
            if unknown:
                raise InputError(f"facet {facet} uses unknown vertices {unknown}")
            idx = sorted({pos[v] for v in facet})
            for r in range(1, len(idx) + 1):
                self.simplices.update(frozenset(c) for c in combinations(idx, r))

    @classmethod
    def from_json(cls, obj: dict) -> "SimplicialComplexSpec":
        return cls(obj["vertices"], obj["facets"])

    def to_json(self) -> dict:
        return {"vertices": self.vertices, "facets": [list(f) for f in self.facets]}

    def ordered_simplices(self, n: int) -> list[tuple[int, ...]]:
        """Sequences ``(x_0, ..., x_n)`` of vertex indices whose set is a simplex."""
        out = []
        V = len(self.vertices)

        def grow(prefix, support):
            if len(prefix) == n + 1:
                out.append(tuple(prefix))
                return
            for v in range(V):
                s = support | {v}
                if s in self.simplices:
                    prefix.append(v)
                    grow(prefix, s)
                    prefix.pop()

        grow([], frozenset())
        return out


def _simplex_levels(K: SimplicialComplexSpec, n_max: int, cap: int):
    levels = []
    for n in range(n_max + 1):
        simp = K.ordered_simplices(n)
        _guard(len(simp), cap, f"simplicial forms in degree {n}")
        levels.append((simp, {s: i for i, s in enumerate(simp)}))
    return levels


def simplicial_cofaces(K: SimplicialComplexSpec, field: ScalarField, n_max: int, cap: int = DEFAULT_CAP) -> CopresimplicialSpace:
    """Cofaces dual to deleting the ``k``-th vertex of an ordered simplex."""
    levels = _simplex_levels(K, n_max, cap)
    dims = {n: len(levels[n][0]) for n in range(n_max + 1)}
    cofaces = {}
    for n in range(n_max):
        src_index = levels[n][1]
        for k in range(n + 2):
            entries = {}
            for row, x in enumerate(levels[n + 1][0]):
                entries[(row, src_index[x[:k] + x[k + 1:]])] = field.one
            cofaces[(n, k)] = ExactMatrix.from_sparse(field, dims[n + 1], dims[n], entries)
    return CopresimplicialSpace(field, dims, cofaces)


def simplicial_forms(K: SimplicialComplexSpec, q: Scalar, n_max: int, N: int | None = None, cap: int = DEFAULT_CAP) -> QDGA:
    """Simplicial forms with the glued-endpoint product and ``q``-simplicial ``d_q``."""
    f = q.field
    N = nilpotency_order(q, N)
    levels = _simplex_levels(K, n_max, cap)
    dims = {n: len(levels[n][0]) for n in range(n_max + 1)}
    d = {}
    for n in range(n_max):
        src_index = levels[n][1]
        entries: dict = {}
        qk = [f.power(q.coeffs, k) for k in range(n + 1)]
        last = f.neg(f.power(q.coeffs, n))
        for row, x in enumerate(levels[n + 1][0]):
            for k in range(n + 1):
                key = (row, src_index[x[:k] + x[k + 1:]])
                entries[key] = f.add(entries.get(key, f.zero), qk[k])
            key = (row, src_index[x[: n + 1]])
            entries[key] = f.add(entries.get(key, f.zero), last)
        d[n] = ExactMatrix.from_sparse(f, dims[n + 1], dims[n], entries)
    C = NComplex(N, f, dims, d, grading=Z_GRADED, bounded=False)
    one = f.one

    def bp(a, i, b, j):
        s = levels[a][0][i]
        t = levels[b][0][j]
        if s[-1] != t[0]:
            return {}
        glued = s + t[1:]
        target = levels[a + b][1].get(glued)
        return {} if target is None else {target: one}

    unit = [one] * dims[0]
    return QDGA(C, q, unit, bp, name=f"Omega_K({len(K.vertices)} vertices)")


# -- Hochschild cochains -------------------------------------------------------


class BimoduleSpec:
    """Bimodule over an :class:`AlgebraSpec` by action tensors.

    ``left[i][s][t]`` is the coefficient of ``m_t`` in ``e_i . m_s`` and
    ``right[i][s][t]`` that of ``m_t`` in ``m_s . e_i``.
    """

    def __init__(self, algebra: AlgebraSpec, dim: int, left, right, check: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.left = tuple(tuple(tuple(mpq(c) for c in r) for r in p) for p in left)
        self.right = tuple(tuple(tuple(mpq(c) for c in r) for r in p) for p in right)
        for name, t in (("left", self.left), ("right", self.right)):
            if len(t) != algebra.dim or any(len(p) != dim or any(len(r) != dim for r in p) for p in t):
                raise ValueError(f"{name} action must have shape {algebra.dim}x{dim}x{dim}")
        self._left = {(i, s): [(t, c) for t, c in enumerate(self.left[i][s]) if c] for i in range(algebra.dim) for s in range(dim)}
        self._right = {(i, s): [(t, c) for t, c in enumerate(self.right[i][s]) if c] for i in range(algebra.dim) for s in range(dim)}
        if check:
            self.check_axioms()

    @classmethod
    def regular(cls, A: AlgebraSpec) -> "BimoduleSpec":
        left = [[list(A.sc[i][s]) for s in range(A.dim)] for i in range(A.dim)]
        right = [[list(A.sc[s][i]) for s in range(A.dim)] for i in range(A.dim)]
        return cls(A, A.dim, left, right)

    @classmethod
    def from_json(cls, algebra: AlgebraSpec, obj: dict) -> "BimoduleSpec":
        return cls(algebra, int(obj["dim"]), obj["left"], obj["right"])

    def to_json(self) -> dict:
        def s(c):
            return f"{c.numerator}/{c.denominator}"

        return {
            "dim": self.dim,
            "left": [[[s(c) for c in r] for r in p] for p in self.left],
            "right": [[[s(c) for c in r] for r in p] for p in self.right],
        }

    def act_left(self, i: int, m) -> list:
        out = [mpq(0)] * self.dim
        for s, ms in enumerate(m):
            if ms:
                for t, c in self._left[(i, s)]:
                    out[t] += ms * c
        return out

    def act_right(self, m, i: int) -> list:
        out = [mpq(0)] * self.dim
        for s, ms in enumerate(m):
            if ms:
                for t, c in self._right[(i, s)]:
                    out[t] += ms * c
        return out

    def check_axioms(self):
        A = self.algebra
        basis = [[mpq(1) if t == s else mpq(0) for t in range(self.dim)] for s in range(self.dim)]

        def left_vec(x, m):
            out = [mpq(0)] * self.dim
            for i, xi in enumerate(x):
                if xi:
                    out = [o + xi * v for o, v in zip(out, self.act_left(i, m))]
            return out

        def right_vec(m, x):
            out = [mpq(0)] * self.dim
            for i, xi in enumerate(x):
                if xi:
                    out = [o + xi * v for o, v in zip(out, self.act_right(m, i))]
            return out

        for s, m in enumerate(basis):
            if left_vec(A.unit, m) != m or right_vec(m, A.unit) != m:
                raise AxiomViolation(f"unit does not act as identity on m_{s}", (s,))
            for i, j in iproduct(range(A.dim), repeat=2):
                ei, ej = A.basis_vector(i), A.basis_vector(j)
                ij = A.multiply(ei, ej)
                if left_vec(ij, m) != self.act_left(i, self.act_left(j, m)):
                    raise AxiomViolation("left action is not associative", (i, j, s))
                if right_vec(m, ij) != self.act_right(self.act_right(m, i), j):
                    raise AxiomViolation("right action is not associative", (i, j, s))
                if self.act_right(self.act_left(i, m), j) != self.act_left(i, self.act_right(m, j)):
                    raise AxiomViolation("left and right actions do not commute", (i, j, s))


def _cochain_dims(A, M_dim, n_max, cap, what):
    dims = {}
    for n in range(n_max + 1):
        dims[n] = M_dim * A.dim ** n
        _guard(dims[n], cap, f"{what} in degree {n}")
    return dims


def hochschild_cofaces(A: AlgebraSpec, M: BimoduleSpec, field: ScalarField, n_max: int, cap: int = DEFAULT_CAP) -> CopresimplicialSpace:
    """``f_0 = x_0 w(..)``, ``f_k = w(.., x_(k-1) x_k, ..)``, ``f_(n+1) = w(..) x_n``."""
    dims = _cochain_dims(A, M.dim, n_max, cap, "Hochschild cochains")
    a, md = A.dim, M.dim
    table, _ = A.raw_table(field)
    cof = {}
    for n in range(n_max):
        faces = [dict() for _ in range(n + 2)]
        for J in iproduct(range(a), repeat=n + 1):
            Jrow = _tuple_index(J, a) * md
            tail = _tuple_index(J[1:], a) * md
            for m in range(md):
                for t, c in M._left[(J[0], m)]:
                    _acc(faces[0], (Jrow + t, tail + m), field.coerce(c), field)
            for k in range(1, n + 1):
                for r, c in table[(J[k - 1], J[k])]:
                    src = _tuple_index(J[: k - 1] + (r,) + J[k + 1:], a) * md
                    for m in range(md):
                        _acc(faces[k], (Jrow + m, src + m), c, field)
            head = _tuple_index(J[:n], a) * md
            for m in range(md):
                for t, c in M._right[(J[n], m)]:
                    _acc(faces[n + 1], (Jrow + t, head + m), field.coerce(c), field)
        for k in range(n + 2):
            cof[(n, k)] = ExactMatrix.from_sparse(field, dims[n + 1], dims[n], faces[k])
    return CopresimplicialSpace(field, dims, cof)


def _acc(entries: dict, key, value, field):
    entries[key] = field.add(entries[key], value) if key in entries else value


def hochschild_complex(
    A: AlgebraSpec,
    M: BimoduleSpec | None,
    q: Scalar,
    n_max: int,
    N: int | None = None,
    cap: int = DEFAULT_CAP,
) -> NComplex:
    """``M``-valued Hochschild cochains in degrees ``0..n_max`` with the q-coboundary.

    For a cochain ``w`` of degree ``n``::

        (d w)(x_0..x_n) = x_0 w(x_1..x_n) + sum_k q^k w(.., x_(k-1) x_k, ..) - q^n w(x_0..x_(n-1)) x_n
    """
    M = BimoduleSpec.regular(A) if M is None else M
    f = q.field
    N = nilpotency_order(q, N)
    dims = _cochain_dims(A, M.dim, n_max, cap, "Hochschild cochains")
    a, md = A.dim, M.dim
    table, _ = A.raw_table(f)
    d = {}
    for n in range(n_max):
        entries: dict = {}
        qk = [f.power(q.coeffs, k) for k in range(n + 1)]
        last = f.neg(qk[n])
        for J in iproduct(range(a), repeat=n + 1):
            base = _tuple_index(J, a) * md
            rest = _tuple_index(J[1:], a) * md
            for m in range(md):
                for t, c in M._left[(J[0], m)]:
                    _acc(entries, (base + t, rest + m), f.coerce(c), f)
            for k in range(1, n + 1):
                for r, c in table[(J[k - 1], J[k])]:
                    src = _tuple_index(J[: k - 1] + (r,) + J[k + 1:], a) * md
                    coeff = f.mul(qk[k], c)
                    for m in range(md):
                        _acc(entries, (base + m, src + m), coeff, f)
            head = _tuple_index(J[:n], a) * md
            for m in range(md):
                for t, c in M._right[(J[n], m)]:
                    _acc(entries, (base + t, head + m), f.mul(last, f.coerce(c)), f)
        d[n] = ExactMatrix.from_sparse(f, dims[n + 1], dims[n], entries)
    return NComplex(N, f, dims, d, grading=Z_GRADED, bounded=False)


def hochschild_qdga(A: AlgebraSpec, q: Scalar, n_max: int, N: int | None = None, cap: int = DEFAULT_CAP) -> QDGA:
    """``C(A, A)`` with the cup product ``(ab)(x..y..) = a(x..) b(y..)``."""
    C = hochschild_complex(A, None, q, n_max, N=N, cap=cap)
    f = q.field
    a = A.dim
    table, unit_items = A.raw_table(f)

    def bp(da, i, db, j):
        I, m = divmod(i, a)
        J, m2 = divmod(j, a)
        base = (I * a ** db + J) * a
        return {base + r: c for r, c in table[(m, m2)]}

    unit = [f.zero] * a
    for i, c in unit_items:
        unit[i] = c
    return QDGA(C, q, unit, bp, name=f"C({A.name or 'A'}, {A.name or 'A'})")


def hochschild_expected_dim(k: int, n: int, N: int, classical: dict[int, int]) -> int:
    """``dim H^(k),n`` predicted from classical Hochschild dims ``classical[j] = dim HH^j``.

    Degree ``N m`` carries ``HH^(2m)``, degree ``N(m+1) - k`` carries
    ``HH^(2m+1)``; every other degree is zero.
    """
    if n % N == 0:
        return classical[2 * (n // N)]
    if (n + k) % N == 0:
        m = (n + k) // N - 1
        return classical[2 * m + 1]
    return 0


# -- dual of the product ----------------------------------------------------


def _dual_dims(A, n_max, cap):
    dims = {0: 1}
    for n in range(1, n_max + 1):
        dims[n] = A.dim ** n
        _guard(dims[n], cap, f"multilinear forms in degree {n}")
    return dims


def _merge_entries(A, field, n, weights):
    """``w -> sum_k weights[k] w(.., x_k x_(k+1), ..)`` from degree ``n`` to ``n + 1``."""
    a = A.dim
    table, _ = A.raw_table(field)
    entries: dict = {}
    for J in iproduct(range(a), repeat=n + 1):
        row = _tuple_index(J, a)
        for k, wk in enumerate(weights):
            if wk is None:
                continue
            for r, c in table[(J[k], J[k + 1])]:
                col = _tuple_index(J[:k] + (r,) + J[k + 2:], a)
                _acc(entries, (row, col), field.mul(wk, c), field)
    return entries


def dual_product_complex(
    A: AlgebraSpec,
    q: Scalar,
    n_max: int,
    N: int | None = None,
    cap: int = DEFAULT_CAP,
) -> tuple[NComplex, dict[int, ExactMatrix]]:
    """``C(A)`` with ``(m w)(x_0..x_n) = sum_(k=1..n) q^(k-1) w(.., x_(k-1) x_k, ..)`` and its homotopy.

    The homotopy is ``(h w)(x_1..x_(n-1)) = w(1, x_1, .., x_(n-1))`` for
    ``n >= 2`` and zero on degree 1.
    """
    f = q.field
    N = nilpotency_order(q, N)
    dims = _dual_dims(A, n_max, cap)
    d = {0: ExactMatrix.zeros(f, dims[1], dims[0])}
    for n in range(1, n_max):
        weights = [f.power(q.coeffs, k) for k in range(n)]
        d[n] = ExactMatrix.from_sparse(f, dims[n + 1], dims[n], _merge_entries(A, f, n, weights))
    C = NComplex(N, f, dims, d, grading=Z_GRADED, bounded=False)
    _, unit_items = A.raw_table(f)
    a = A.dim
    h = {1: ExactMatrix.zeros(f, dims[0], dims[1])}
    for n in range(2, n_max + 1):
        entries = {}
        for J in iproduct(range(a), repeat=n - 1):
            row = _tuple_index(J, a)
            for s, u in unit_items:
                entries[(row, _tuple_index((s,) + J, a))] = u
        h[n] = ExactMatrix.from_sparse(f, dims[n - 1], dims[n], entries)
    return C, h


def dual_product_qdga(A: AlgebraSpec, q: Scalar, n_max: int, N: int | None = None, cap: int = DEFAULT_CAP) -> QDGA:
    """``C(A)`` as an algebra under the tensor product of forms."""
    C, _ = dual_product_complex(A, q, n_max, N=N, cap=cap)
    f = q.field
    a = A.dim
    one = f.one
    return QDGA(C, q, [one], lambda da, i, db, j: {i * a ** db + j: one}, name=f"C({A.name or 'A'})")


def dual_product_cofaces(A: AlgebraSpec, field: ScalarField, n_max: int, cap: int = DEFAULT_CAP) -> CopresimplicialSpace:
    """Merge cofaces on forms, shifted so that level ``n`` is cochain degree ``n + 2``.

    ``f_j`` merges the arguments in positions ``j`` and ``j + 1``; the full
    ``d~_q`` of this family is the product differential on degrees ``>= 2``.
    """
    dims = {n - DUAL_PRODUCT_SHIFT: A.dim ** n for n in range(DUAL_PRODUCT_SHIFT, n_max + 1)}
    for n, dim in dims.items():
        _guard(dim, cap, f"multilinear forms on level {n}")
    cof = {}
    for lvl in range(max(dims)):
        n = lvl + DUAL_PRODUCT_SHIFT
        for j in range(lvl + 2):
            weights = [None] * n
            weights[j] = field.one
            cof[(lvl, j)] = ExactMatrix.from_sparse(field, dims[lvl + 1], dims[lvl], _merge_entries(A, field, n, weights))
    return CopresimplicialSpace(field, dims, cof)
