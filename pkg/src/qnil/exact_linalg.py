"""Dense exact linear algebra over a :class:`~qnil.scalars.ScalarField`.

Matrices hold raw coefficient tuples (see :mod:`qnil.scalars`).  Elimination
is ordinary Gauss-Jordan over the field with a fixed pivot rule (leftmost
unresolved column, first row with a nonzero entry there), which makes every
echelon form, and hence every subspace basis, a deterministic function of
the input.  Dense storage is intended for dimensions up to a few thousand.
"""

from __future__ import annotations

from .errors import InclusionViolation, NotWellDefined
from .scalars import Scalar, ScalarField

__all__ = [
    "ExactMatrix",
    "SubspaceBasis",
    "Quotient",
    "rank",
    "kernel_basis",
    "image_basis",
    "contains",
    "quotient_dim",
    "induced_map",
    "inverse",
    "rref",
]


class ExactMatrix:
    """Immutable dense matrix of exact scalars.

    ``data`` is a list of rows, each a list of raw coefficient tuples.  Treat
    instances as values: no method mutates ``data`` in place.
    """

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field: ScalarField, rows: int, cols: int, data: list[list[tuple]]):
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entry layout does not match shape {rows}x{cols}")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.data = data

    # -- constructors --------------------------------------------------

    @classmethod
    def from_rows(cls, field: ScalarField, rows, cols: int | None = None) -> "ExactMatrix":
        data = [[field.coerce(x) for x in row] for row in rows]
        if cols is None:
            cols = len(data[0]) if data else 0
        return cls(field, len(data), cols, data)

    @classmethod
    def from_columns(cls, field: ScalarField, columns, rows: int) -> "ExactMatrix":
        columns = [list(c) for c in columns]
        data = [[columns[j][i] for j in range(len(columns))] for i in range(rows)]
        return cls(field, rows, len(columns), data)

    @classmethod
    def zeros(cls, field: ScalarField, rows: int, cols: int) -> "ExactMatrix":
        z = field.zero
        return cls(field, rows, cols, [[z] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, field: ScalarField, n: int) -> "ExactMatrix":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_sparse(cls, field: ScalarField, rows: int, cols: int, entries: dict) -> "ExactMatrix":
        """Build from ``{(i, j): raw}``."""
        m = cls.zeros(field, rows, cols)
        for (i, j), v in entries.items():
            m.data[i][j] = v
        return m

    # -- access ----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij) -> Scalar:
        i, j = ij
        return Scalar(self.field, self.data[i][j])

    def column(self, j: int) -> list[tuple]:
        return [row[j] for row in self.data]

    def columns(self) -> list[list[tuple]]:
        return [self.column(j) for j in range(self.cols)]

    def to_lists(self) -> list[list[Scalar]]:
        return [[Scalar(self.field, x) for x in row] for row in self.data]

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} over {self.field})"

    # -- algebra ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(any(x) for row in self.data for x in row)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    __hash__ = None

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        add = self.field.add
        data = [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        return ExactMatrix(self.field, self.rows, self.cols, data)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        self._check_same_shape(other)
        sub = self.field.sub
        data = [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.data, other.data)]
        return ExactMatrix(self.field, self.rows, self.cols, data)

    def __neg__(self) -> "ExactMatrix":
        neg = self.field.neg
        return ExactMatrix(self.field, self.rows, self.cols, [[neg(a) for a in r] for r in self.data])

    def scaled(self, s) -> "ExactMatrix":
        c = self.field.coerce(s)
        mul = self.field.mul
        data = [[mul(c, a) if any(a) else a for a in r] for r in self.data]
        return ExactMatrix(self.field, self.rows, self.cols, data)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        f = self.field
        mul, add, zero = f.mul, f.add, f.zero
        n = other.cols
        # sparse rows of the right factor
        right = [[(j, x) for j, x in enumerate(row) if any(x)] for row in other.data]
        data = []
        for row in self.data:
            acc = [zero] * n
            for k, a in enumerate(row):
                if any(a) and right[k]:
                    for j, b in right[k]:
                        acc[j] = add(acc[j], mul(a, b))
            data.append(acc)
        return ExactMatrix(f, self.rows, n, data)

    def apply(self, vec: list[tuple]) -> list[tuple]:
        """Matrix times a raw column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length does not match matrix")
        f = self.field
        mul, add, zero = f.mul, f.add, f.zero
        nz = [(k, v) for k, v in enumerate(vec) if any(v)]
        out = []
        for row in self.data:
            acc = zero
            for k, v in nz:
                a = row[k]
                if any(a):
                    acc = add(acc, mul(a, v))
            out.append(acc)
        return out

    def transpose(self) -> "ExactMatrix":
        data = [list(col) for col in zip(*self.data)] if self.rows else [[] for _ in range(self.cols)]
        return ExactMatrix(self.field, self.cols, self.rows, data)

    def _check_same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")


def rref(field: ScalarField, rows: list[list[tuple]], ncols: int) -> tuple[list[list[tuple]], list[int]]:
    """Reduced row echelon form of ``rows`` (copied) and its pivot columns.

    Zero rows are dropped from the result.
    """
    mul, sub, inv = field.mul, field.sub, field.inv
    work = [list(r) for r in rows if any(any(x) for x in r)]
    pivots: list[int] = []
    top = 0
    for col in range(ncols):
        if top == len(work):
            break
        pr = next((i for i in range(top, len(work)) if any(work[i][col])), None)
        if pr is None:
            continue
        work[top], work[pr] = work[pr], work[top]
        prow = work[top]
        p = prow[col]
        if p != field.one:
            ip = inv(p)
            prow = [mul(ip, x) if any(x) else x for x in prow]
            work[top] = prow
        nz = [(j, prow[j]) for j in range(col, ncols) if any(prow[j])]
        for i in range(len(work)):
            if i == top:
                continue
            row = work[i]
            c = row[col]
            if any(c):
                for j, x in nz:
                    row[j] = sub(row[j], mul(c, x))
        pivots.append(col)
        top += 1
    del work[top:]
    return work, pivots


def rank(M: ExactMatrix) -> int:
    # eliminate along the shorter side
    if M.rows > M.cols:
        M = M.transpose()
    return len(rref(M.field, M.data, M.cols)[1])


class SubspaceBasis:
    """Canonical basis of a subspace of ``field^ambient_dim``.

    The vectors are the nonzero rows of the reduced row echelon form of any
    spanning set, so equal spans give identical bases.  ``pivots[i]`` is the
    leading coordinate of ``vectors[i]``; every basis vector vanishes at the
    other pivots.
    """

    __slots__ = ("field", "ambient_dim", "vectors", "pivots")

    def __init__(self, field: ScalarField, ambient_dim: int, vectors, pivots):
        self.field = field
        self.ambient_dim = ambient_dim
        self.vectors = vectors
        self.pivots = pivots

    @classmethod
    def span(cls, field: ScalarField, ambient_dim: int, vectors) -> "SubspaceBasis":
        vectors = [list(v) for v in vectors]
        if any(len(v) != ambient_dim for v in vectors):
            raise ValueError("vector length does not match ambient dimension")
        rows, pivots = rref(field, vectors, ambient_dim)
        return cls(field, ambient_dim, rows, pivots)

    @classmethod
    def full(cls, field: ScalarField, n: int) -> "SubspaceBasis":
        return cls(field, n, ExactMatrix.identity(field, n).data, list(range(n)))

    @classmethod
    def empty(cls, field: ScalarField, n: int) -> "SubspaceBasis":
        return cls(field, n, [], [])

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __eq__(self, other):
        if not isinstance(other, SubspaceBasis):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.vectors == other.vectors

    __hash__ = None

    def __repr__(self):
        return f"SubspaceBasis(dim={self.dim}, ambient={self.ambient_dim})"

    @property
    def matrix(self) -> ExactMatrix:
        """Basis vectors as the columns of an ``ambient_dim x dim`` matrix."""
        return ExactMatrix.from_columns(self.field, self.vectors, self.ambient_dim)

    def residual(self, v: list[tuple]) -> list[tuple]:
        """``v`` minus its component along the basis, read off at the pivots."""
        f = self.field
        mul, sub = f.mul, f.sub
        w = list(v)
        for p, b in zip(self.pivots, self.vectors):
            c = w[p]
            if any(c):
                for j in range(p, len(w)):
                    if any(b[j]):
                        w[j] = sub(w[j], mul(c, b[j]))
        return w

    def contains_vector(self, v: list[tuple]) -> bool:
        return not any(any(x) for x in self.residual(v))

    def coordinates(self, v: list[tuple]) -> list[tuple]:
        """Coordinates of a vector known to lie in the span."""
        if not self.contains_vector(v):
            raise InclusionViolation("vector is not in the subspace")
        return [v[p] for p in self.pivots]


def kernel_basis(M: ExactMatrix) -> SubspaceBasis:
    f = M.field
    rows, pivots = rref(f, M.data, M.cols)
    pivot_set = set(pivots)
    vecs = []
    for free in range(M.cols):
        if free in pivot_set:
            continue
        v = [f.zero] * M.cols
        v[free] = f.one
        for r, p in zip(rows, pivots):
            if any(r[free]):
                v[p] = f.neg(r[free])
        vecs.append(v)
    K = SubspaceBasis.span(f, M.cols, vecs)
    assert K.dim + len(pivots) == M.cols, "rank-nullity violated"
    return K


def image_basis(M: ExactMatrix) -> SubspaceBasis:
    return SubspaceBasis.span(M.field, M.rows, M.columns())


def contains(space: SubspaceBasis, other: SubspaceBasis) -> bool:
    if space.ambient_dim != other.ambient_dim:
        raise ValueError(
            f"ambient dimension mismatch: {space.ambient_dim} vs {other.ambient_dim}"
        )
    if other.dim > space.dim:
        return False
    return all(space.contains_vector(v) for v in other.vectors)


def quotient_dim(K: SubspaceBasis, I: SubspaceBasis) -> int:
    if not contains(K, I):
        raise InclusionViolation("image is not contained in kernel; the complex is broken")
    return K.dim - I.dim


class Quotient:
    """The quotient ``K / I`` with canonical coordinates.

    Representatives are the reduced echelon basis of ``K`` projected along
    ``I`` (killed at the pivots of ``I``); the coordinate of a class is read
    off at the pivots of that basis after the same projection.
    """

    __slots__ = ("K", "I", "reps")

    def __init__(self, K: SubspaceBasis, I: SubspaceBasis):
        if not contains(K, I):
            raise InclusionViolation("image is not contained in kernel; the complex is broken")
        self.K = K
        self.I = I
        self.reps = SubspaceBasis.span(K.field, K.ambient_dim, [I.residual(v) for v in K.vectors])
        assert self.reps.dim == K.dim - I.dim

    @property
    def dim(self) -> int:
        return self.reps.dim

    @property
    def field(self) -> ScalarField:
        return self.K.field

    def coords(self, x: list[tuple]) -> list[tuple]:
        if not self.K.contains_vector(x):
            raise NotWellDefined("vector does not lie in the kernel subspace")
        y = self.I.residual(x)
        return [y[p] for p in self.reps.pivots]

    def representatives(self) -> list[list[tuple]]:
        return self.reps.vectors


def induced_map(f: ExactMatrix, src_K, src_I=None, dst_K=None, dst_I=None) -> ExactMatrix:
    """Matrix of ``[f]: src_K/src_I -> dst_K/dst_I`` in canonical quotient coordinates.

    Accepts either four subspace bases or two :class:`Quotient` objects.
    """
    if isinstance(src_K, Quotient):
        src, dst = src_K, src_I
    else:
        src, dst = Quotient(src_K, src_I), Quotient(dst_K, dst_I)
    for v in src.K.vectors:
        if not dst.K.contains_vector(f.apply(v)):
            raise NotWellDefined("f does not map the source kernel into the target kernel")
    for v in src.I.vectors:
        if not dst.I.contains_vector(f.apply(v)):
            raise NotWellDefined("f does not map the source image into the target image")
    cols = [dst.coords(f.apply(r)) for r in src.representatives()]
    return ExactMatrix.from_columns(f.field, cols, dst.dim)


def inverse(M: ExactMatrix) -> ExactMatrix:
    if M.rows != M.cols:
        raise ValueError("only square matrices are invertible")
    n = M.rows
    f = M.field
    ident = ExactMatrix.identity(f, n).data
    aug = [list(r) + list(e) for r, e in zip(M.data, ident)]
    rows, pivots = rref(f, aug, 2 * n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise ZeroDivisionError("matrix is singular")
    return ExactMatrix(f, n, n, [r[n:] for r in rows[:n]])
