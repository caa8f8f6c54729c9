"""Tensor algebra, universal q-differential envelope and the extended complex.

``T^n`` is the ``(n+1)``-fold tensor power of the base algebra, basis indexed
by index tuples in lexicographic order.  Products glue the last factor of the
left word to the first factor of the right word, and the differential
inserts the unit between factors::

    d(x_0..x_n) = sum_(k=0..n) q^k (x_0..x_(k-1), 1, x_k..x_n) - q^n (x_0..x_n, 1)

The envelope ``Omega`` is computed inside ``T`` as the smallest subspace
family containing the base algebra in degree 0 and closed under ``d`` and
products, so all of its bases are canonical echelon bases of subspaces of
``T^n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product as iproduct

from .cochain import DEFAULT_CAP, _guard, _tuple_index
from .errors import InclusionViolation, InputError, NotWellDefined
from .exact_linalg import ExactMatrix, SubspaceBasis
from .ncomplex import NComplex, Z_GRADED
from .qdga import QDGA, AlgebraSpec, _sparse
from .scalars import Scalar, nilpotency_order, q_integer

__all__ = [
    "TensorQDGA",
    "EnvelopeSubspace",
    "HomomorphismReport",
    "ExtendedComplex",
    "tensor_qdga",
    "tensor_cofaces",
    "universal_envelope",
    "classical_envelope_dims",
    "induced_homomorphism",
    "default_omega",
    "extended_complex",
]


class TensorQDGA(QDGA):
    """``T(A)`` truncated at ``n_max``; ``tau = 1 (x) 1`` in degree 1."""

    def __init__(self, complex, q, unit, basis_product, base: AlgebraSpec, tau):
        super().__init__(complex, q, unit, basis_product, name=f"T({base.name or 'A'})")
        self.base = base
        self.tau = tau

    def index(self, word) -> int:
        return _tuple_index(word, self.base.dim)

    def word(self, n: int, idx: int) -> tuple[int, ...]:
        a = self.base.dim
        out = []
        for _ in range(n + 1):
            idx, r = divmod(idx, a)
            out.append(r)
        return tuple(reversed(out))

    def elementary(self, n: int, word) -> list:
        """Dense vector of the basis tensor ``e_(w_0) (x) ... (x) e_(w_n)``."""
        v = [self.field.zero] * self.dim(n)
        v[self.index(word)] = self.field.one
        return v

    def from_base(self, x) -> list:
        """Degree-0 vector of a base-algebra element given in rational coordinates."""
        return [self.field.coerce(c) for c in x]

    def power(self, n: int, x, k: int) -> list:
        """``x^k`` for ``x`` in degree ``n`` (``k >= 1``)."""
        out = list(x)
        for j in range(1, k):
            out = self.multiply(n * j, out, n, x)
        return out


def tensor_qdga(A: AlgebraSpec, q: Scalar, n_max: int, N: int | None = None, cap: int = DEFAULT_CAP) -> TensorQDGA:
    f = q.field
    N = nilpotency_order(q, N)
    a = A.dim
    dims = {}
    for n in range(n_max + 1):
        dims[n] = a ** (n + 1)
        _guard(dims[n], cap, f"tensor algebra in degree {n}")
    table, unit_items = A.raw_table(f)
    d = {}
    for n in range(n_max):
        entries: dict = {}
        qk = [f.power(q.coeffs, k) for k in range(n + 1)]
        last = f.neg(qk[n])
        for src, w in enumerate(iproduct(range(a), repeat=n + 1)):
            for k in range(n + 1):
                for u, c in unit_items:
                    key = (_tuple_index(w[:k] + (u,) + w[k:], a), src)
                    entries[key] = f.add(entries.get(key, f.zero), f.mul(qk[k], c))
            for u, c in unit_items:
                key = (_tuple_index(w + (u,), a), src)
                entries[key] = f.add(entries.get(key, f.zero), f.mul(last, c))
        d[n] = ExactMatrix.from_sparse(f, dims[n + 1], dims[n], entries)
    C = NComplex(N, f, dims, d, grading=Z_GRADED, bounded=False)

    def bp(da, i, db, j):
        hi, last_x = divmod(i, a)
        first_y, lo = divmod(j, a ** db)
        out = {}
        for r, c in table[(last_x, first_y)]:
            out[(hi * a + r) * a ** db + lo] = c
        return out

    unit = [f.zero] * a
    for i, c in unit_items:
        unit[i] = c
    tau = [f.zero] * dims[1] if n_max >= 1 else None
    if tau is not None:
        for (i, ci), (j, cj) in iproduct(unit_items, repeat=2):
            tau[i * a + j] = f.mul(ci, cj)
    return TensorQDGA(C, q, unit, bp, A, tau)


def tensor_cofaces(A: AlgebraSpec, field, n_max: int, cap: int = DEFAULT_CAP):
    """Cofaces ``f_k`` inserting the unit in position ``k``; their ``d_q`` is the tensor differential."""
    from .cochain import CopresimplicialSpace

    a = A.dim
    _, unit_items = A.raw_table(field)
    dims = {}
    for n in range(n_max + 1):
        dims[n] = a ** (n + 1)
        _guard(dims[n], cap, f"tensor algebra in degree {n}")
    cof = {}
    for n in range(n_max):
        for k in range(n + 2):
            entries = {}
            for src, w in enumerate(iproduct(range(a), repeat=n + 1)):
                for u, c in unit_items:
                    entries[(_tuple_index(w[:k] + (u,) + w[k:], a), src)] = c
            cof[(n, k)] = ExactMatrix.from_sparse(field, dims[n + 1], dims[n], entries)
    return CopresimplicialSpace(field, dims, cof)


# -- envelope ------------------------------------------------------------------


@dataclass
class EnvelopeSubspace:
    """Per-degree canonical bases of ``Omega^n`` inside ``T^n``."""

    tensor: TensorQDGA
    bases: dict[int, SubspaceBasis]
    rounds: dict[int, int] = dc_field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return max(self.bases)

    def dims(self) -> dict[int, int]:
        return {n: b.dim for n, b in self.bases.items()}

    def closure_failure(self) -> tuple | None:
        """First ``("d", n)`` or ``("product", a, b)`` leaving the subspaces, or ``None``."""
        T = self.tensor
        if not all(self.bases[0].contains_vector(v) for v in SubspaceBasis.full(T.field, T.dim(0)).vectors):
            return ("base", 0)
        for n in range(self.n_max):
            for v in self.bases[n].vectors:
                if not self.bases[n + 1].contains_vector(T.differential(n, v)):
                    return ("d", n)
        for a_deg, b_deg in iproduct(range(self.n_max + 1), repeat=2):
            if a_deg + b_deg > self.n_max:
                continue
            for x in self.bases[a_deg].vectors:
                for y in self.bases[b_deg].vectors:
                    if not self.bases[a_deg + b_deg].contains_vector(T.multiply(a_deg, x, b_deg, y)):
                        return ("product", a_deg, b_deg)
        return None

    def restrict(self, M: ExactMatrix, src: int, dst: int) -> ExactMatrix:
        """A map ``T^src -> T^dst`` written in envelope coordinates."""
        cols = []
        for v in self.bases[src].vectors:
            cols.append(self.bases[dst].coordinates(M.apply(v)))
        return ExactMatrix.from_columns(self.tensor.field, cols, self.bases[dst].dim)

    def as_qdga(self) -> QDGA:
        T = self.tensor
        f = T.field
        dims = self.dims()
        d = {n: self.restrict(T.complex.d_at(n), n, n + 1) for n in range(self.n_max)}
        C = NComplex(T.N, f, dims, d, grading=Z_GRADED, bounded=False)

        def bp(a, i, b, j):
            prod = T.multiply(a, self.bases[a].vectors[i], b, self.bases[b].vectors[j])
            return _sparse(self.bases[a + b].coordinates(prod))

        unit = self.bases[0].coordinates(T.unit)
        return QDGA(C, T.q, unit, bp, name=f"Omega({T.base.name or 'A'})")


class _Closure:
    """Incremental span of candidate vectors, optionally carrying images.

    With images the stored rows are ``[v | image(v)]``; a dependent candidate
    is consistent exactly when its augmented row is already in the span.
    """

    def __init__(self, field, dim, image_dim=None):
        self.field = field
        self.dim = dim
        self.image_dim = image_dim
        self.vectors: list = []
        self.images: list = []
        self.span = SubspaceBasis.empty(field, dim)
        self.graph = SubspaceBasis.empty(field, dim + (image_dim or 0)) if image_dim is not None else None

    def offer(self, v, image=None) -> bool:
        """Add ``v`` if it is new; returns ``True`` when the span grew."""
        if self.span.contains_vector(v):
            if self.graph is not None and not self.graph.contains_vector(list(v) + list(image)):
                raise NotWellDefined("a linear relation among generators does not hold for their images")
            return False
        self.vectors.append(list(v))
        self.span = SubspaceBasis.span(self.field, self.dim, self.span.vectors + [list(v)])
        if self.graph is not None:
            self.images.append(list(image))
            rows = self.graph.vectors + [list(v) + list(image)]
            self.graph = SubspaceBasis.span(self.field, self.dim + self.image_dim, rows)
        return True


def _close(T: TensorQDGA, n_max: int, phi=None, target: QDGA | None = None):
    """Degree-by-degree closure; with ``phi`` also propagates images in ``target``."""
    f = T.field
    with_images = phi is not None
    states: dict[int, _Closure] = {}
    rounds = {}
    for n in range(n_max + 1):
        st = _Closure(f, T.dim(n), target.dim(n) if with_images else None)
        states[n] = st
        if n == 0:
            for i in range(T.dim(0)):
                v = [f.zero] * T.dim(0)
                v[i] = f.one
                st.offer(v, phi.column(i) if with_images else None)
            rounds[0] = 1
            continue
        prev = states[n - 1]
        for idx, v in enumerate(prev.vectors):
            img = target.differential(n - 1, prev.images[idx]) if with_images else None
            st.offer(T.differential(n - 1, v), img)
        # products of lower degrees are fixed; degree-0 factors act on the growing degree-n part
        for a_deg in range(1, n):
            b_deg = n - a_deg
            left, right = states[a_deg], states[b_deg]
            for ix, x in enumerate(left.vectors):
                for iy, y in enumerate(right.vectors):
                    img = target.multiply(a_deg, left.images[ix], b_deg, right.images[iy]) if with_images else None
                    st.offer(T.multiply(a_deg, x, b_deg, y), img)
        r = 0
        while True:
            r += 1
            grew = False
            base = states[0]
            current = list(zip(st.vectors, st.images if with_images else [None] * len(st.vectors)))
            for ia, x in enumerate(base.vectors):
                for v, img in current:
                    li = target.multiply(0, base.images[ia], n, img) if with_images else None
                    ri = target.multiply(n, img, 0, base.images[ia]) if with_images else None
                    grew |= st.offer(T.multiply(0, x, n, v), li)
                    grew |= st.offer(T.multiply(n, v, 0, x), ri)
            if not grew:
                break
        rounds[n] = r
    return states, rounds


def universal_envelope(A: AlgebraSpec, q: Scalar, n_max: int, N: int | None = None, cap: int = DEFAULT_CAP, tensor: TensorQDGA | None = None) -> EnvelopeSubspace:
    T = tensor_qdga(A, q, n_max, N=N, cap=cap) if tensor is None else tensor
    states, rounds = _close(T, n_max)
    return EnvelopeSubspace(T, {n: s.span for n, s in states.items()}, rounds)


def classical_envelope_dims(A: AlgebraSpec, field, n_max: int) -> dict[int, int]:
    """``dim`` of the intersection of the kernels of all adjacent multiplications in ``A^(x)(n+1)``.

    This is the classical universal differential envelope, built without any
    differential or closure iteration.
    """
    from .exact_linalg import kernel_basis

    a = A.dim
    table, _ = A.raw_table(field)
    out = {0: a}
    for n in range(1, n_max + 1):
        blocks = []
        for i in range(n):
            entries = {}
            for src, w in enumerate(iproduct(range(a), repeat=n + 1)):
                for r, c in table[(w[i], w[i + 1])]:
                    key = (_tuple_index(w[:i] + (r,) + w[i + 2:], a), src)
                    entries[key] = field.add(entries.get(key, field.zero), c)
            blocks.append(ExactMatrix.from_sparse(field, a ** n, a ** (n + 1), entries))
        stacked = ExactMatrix(field, n * a ** n, a ** (n + 1), [row for b in blocks for row in b.data])
        out[n] = kernel_basis(stacked).dim
    return out


# -- extending algebra maps to the envelope -----------------------------------


@dataclass
class HomomorphismReport:
    matrices: dict[int, ExactMatrix]
    intertwines_d: bool
    preserves_products: bool
    failure: tuple | None

    @property
    def ok(self) -> bool:
        return self.intertwines_d and self.preserves_products


def _check_phi(A: AlgebraSpec, phi: ExactMatrix, target: QDGA):
    f = target.field
    if phi.shape != (target.dim(0), A.dim):
        raise InputError(f"phi must be a {target.dim(0)}x{A.dim} matrix")
    unit_img = phi.apply([f.coerce(c) for c in A.unit])
    if unit_img != [f.reduce(c) for c in target.unit]:
        raise InputError("phi does not send the unit to the unit")
    table, _ = A.raw_table(f)
    for i, j in iproduct(range(A.dim), repeat=2):
        lhs = [f.zero] * target.dim(0)
        for k, c in table[(i, j)]:
            lhs = [f.add(x, f.mul(c, y)) for x, y in zip(lhs, phi.column(k))]
        rhs = target.multiply(0, phi.column(i), 0, phi.column(j))
        if lhs != rhs:
            raise InputError(f"phi is not multiplicative on basis pair {(i, j)}")


def induced_homomorphism(
    A: AlgebraSpec,
    phi: ExactMatrix,
    target: QDGA,
    n_max: int,
    envelope: EnvelopeSubspace | None = None,
) -> HomomorphismReport:
    """Extend a unital homomorphism ``A -> target^0`` to ``Omega -> target``.

    Values are forced on generators (``x -> phi(x)``, ``d xi -> d phi(xi)``,
    products to products); every linear relation met while closing the
    envelope is checked on the images, raising :class:`NotWellDefined` with
    the offending degree if one fails.  The returned matrices act on the
    canonical envelope coordinates.
    """
    _check_phi(A, phi, target)
    T = envelope.tensor if envelope is not None else tensor_qdga(A, target.q, n_max, N=target.N)
    states, _ = _close(T, n_max, phi=phi, target=target)
    f = T.field
    bases = {}
    mats = {}
    for n, st in states.items():
        dim = T.dim(n)
        bases[n] = st.span
        g = st.graph
        # pivots of the graph all fall in the source columns, so its rows are the canonical basis rows
        cols = [row[dim:] for row in g.vectors]
        mats[n] = ExactMatrix.from_columns(f, cols, target.dim(n))

    def apply(n, v):
        coords = bases[n].coordinates(v)
        return mats[n].apply(coords)

    failure = None
    d_ok = True
    for n in range(n_max):
        for i, v in enumerate(bases[n].vectors):
            if apply(n + 1, T.differential(n, v)) != target.differential(n, mats[n].column(i)):
                d_ok = False
                failure = failure or ("d", n, i)
    p_ok = True
    for a_deg, b_deg in iproduct(range(n_max + 1), repeat=2):
        if a_deg + b_deg > n_max:
            continue
        for i, x in enumerate(bases[a_deg].vectors):
            for j, y in enumerate(bases[b_deg].vectors):
                lhs = apply(a_deg + b_deg, T.multiply(a_deg, x, b_deg, y))
                rhs = target.multiply(a_deg, mats[a_deg].column(i), b_deg, mats[b_deg].column(j))
                if lhs != rhs:
                    p_ok = False
                    failure = failure or ("product", (a_deg, i), (b_deg, j))
    return HomomorphismReport(mats, d_ok, p_ok, failure)


# -- extended complex ------------------------------------------------------


def default_omega(A: AlgebraSpec) -> list:
    """Coordinate of the unit in a basis that starts with the unit."""
    i = next(i for i, c in enumerate(A.unit) if c)
    return [1 / A.unit[i] if j == i else 0 * A.unit[i] for j in range(A.dim)]


@dataclass
class ExtendedComplex:
    """``e_-(N-1) .. e_-1`` followed by ``T`` (or ``Omega``), with the homotopy ``h``."""

    complex: NComplex
    h: dict[int, ExactMatrix]
    omega: list
    envelope: EnvelopeSubspace | None

    @property
    def positive_degrees(self) -> list[int]:
        return [n for n in self.complex.degrees if n >= 1]


def extended_complex(
    A: AlgebraSpec,
    q: Scalar,
    omega=None,
    n_max: int = 6,
    restrict_to_envelope: bool = False,
    N: int | None = None,
    cap: int = DEFAULT_CAP,
) -> ExtendedComplex:
    f = q.field
    N = nilpotency_order(q, N)
    omega = default_omega(A) if omega is None else list(omega)
    if len(omega) != A.dim:
        raise InputError(f"omega needs {A.dim} coefficients")
    om = [f.coerce(c) for c in omega]
    one_val = f.zero
    for c, w in zip(A.unit, om):
        one_val = f.add(one_val, f.mul(f.coerce(c), w))
    if one_val != f.one:
        raise InputError("omega must take the value 1 on the unit")
    T = tensor_qdga(A, q, n_max, N=N, cap=cap)
    a = A.dim
    qinv = f.inv(q.coeffs)

    # h on T^n, n >= 0
    hT = {}
    for n in range(1, n_max + 1):
        entries = {}
        for src, w in enumerate(iproduct(range(a), repeat=n + 1)):
            if any(om[w[0]]):
                entries[(_tuple_index(w[1:], a), src)] = om[w[0]]
        hT[n] = ExactMatrix.from_sparse(f, T.dim(n - 1), T.dim(n), entries)
    h0 = ExactMatrix.from_rows(f, [[f.neg(f.mul(qinv, w)) for w in om]])

    env = None
    if restrict_to_envelope:
        env = universal_envelope(A, q, n_max, N=N, tensor=T)
        for n, m in hT.items():
            if not all(env.bases[n - 1].contains_vector(m.apply(v)) for v in env.bases[n].vectors):
                raise InclusionViolation(f"h does not map the envelope in degree {n} into degree {n - 1}")
        hpos = {n: env.restrict(m, n, n - 1) for n, m in hT.items()}
        h0 = h0 @ env.bases[0].matrix
        dpos = {n: env.restrict(T.complex.d_at(n), n, n + 1) for n in range(n_max)}
        pos_dims = env.dims()
        unit_pos = env.bases[0].coordinates(T.unit)
    else:
        hpos = hT
        dpos = {n: T.complex.d_at(n) for n in range(n_max)}
        pos_dims = {n: T.dim(n) for n in range(n_max + 1)}
        unit_pos = list(T.unit)

    dims = {-k: 1 for k in range(1, N)}
    dims.update(pos_dims)
    d = dict(dpos)
    for k in range(2, N):
        d[-k] = ExactMatrix.from_rows(f, [[f.one]])
    d[-1] = ExactMatrix.from_columns(f, [unit_pos], pos_dims[0])
    C = NComplex(N, f, dims, d, grading=Z_GRADED, bounded=False)

    h = dict(hpos)
    h[0] = h0
    for k in range(1, N - 1):
        # e_-k -> -q^-(k+1) [k+1]_q e_-(k+1)
        coeff = f.neg(f.mul(f.power(qinv, k + 1), q_integer(k + 1, q).coeffs))
        h[-k] = ExactMatrix.from_rows(f, [[coeff]])
    # h vanishes on e_-(N-1); missing entries are read as zero maps
    return ExtendedComplex(C, h, omega, env)
