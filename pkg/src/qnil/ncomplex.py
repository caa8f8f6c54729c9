"""Graded spaces with ``d^N = 0`` and their generalized homology.

An :class:`NComplex` is either Z-graded on a finite degree window ``[lo, hi]``
or Z/N-graded.  A Z-graded complex is *bounded* when degrees outside the
window are genuinely zero (string complexes, finite examples) and *truncated*
otherwise; for truncated complexes the lower end is still exact (all the
families built here start at a fixed degree) but ``d`` out of ``hi`` is
unknown, so only degrees whose defining maps stay inside the window are
reported.

``H^(k),n = ker(d^k: E^n -> E^(n+k)) / d^(N-k)(E^(n+k-N))``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .errors import IndeterminateError
from .exact_linalg import (
    ExactMatrix,
    Quotient,
    image_basis,
    induced_map,
    inverse,
    kernel_basis,
    rank,
)
from .scalars import Scalar, ScalarField, q_factorial, q_generator

__all__ = [
    "NComplex",
    "HomologyReport",
    "StringSpec",
    "NilpotencyReport",
    "NodeCheck",
    "ExactnessReport",
    "HomotopyReport",
    "verify_nilpotency",
    "homology",
    "homology_table",
    "hexagon_check",
    "long_sequence_check",
    "homotopy_vanishing_check",
    "string_complex",
    "string_homology_oracle",
    "random_string_specs",
    "random_unitriangular",
]

Z_GRADED = "Z"
ZMOD_N = "ZmodN"


class NComplex:
    """Degree-1 differential with ``d^N = 0`` on a graded space.

    Parameters
    ----------
    dims:
        degree -> dimension.  For Z/N grading the keys are ``0..N-1``.
    d:
        degree ``n`` -> matrix ``E^n -> E^(n+1)``; missing entries are zero.
    bounded:
        Z-graded only.  ``False`` marks the window as a truncation from above.
    """

    def __init__(
        self,
        N: int,
        field: ScalarField,
        dims: dict[int, int],
        d: dict[int, ExactMatrix],
        grading: str = Z_GRADED,
        bounded: bool = True,
    ):
        if N < 2:
            raise ValueError("nilpotency order N must be at least 2")
        if grading not in (Z_GRADED, ZMOD_N):
            raise ValueError(f"unknown grading {grading!r}")
        self.N = N
        self.field = field
        self.grading = grading
        if grading == ZMOD_N:
            if sorted(dims) != list(range(N)):
                raise ValueError("Z/N-graded complex needs dims for degrees 0..N-1")
            self.lo, self.hi = 0, N - 1
            self.bounded = True
        else:
            if not dims:
                raise ValueError("complex needs at least one degree")
            self.lo, self.hi = min(dims), max(dims)
            if sorted(dims) != list(range(self.lo, self.hi + 1)):
                raise ValueError("degree window must be contiguous")
            self.bounded = bounded
        self.dims = dict(dims)
        self.d = {}
        for n, m in d.items():
            n = self.norm(n)
            if m.shape != (self.dim(n + 1), self.dim(n)):
                raise ValueError(
                    f"d at degree {n} has shape {m.shape}, expected {(self.dim(n + 1), self.dim(n))}"
                )
            self.d[n] = m
        self._pow_cache: dict = {}
        self._quot_cache: dict = {}

    def __repr__(self):
        if self.grading == ZMOD_N:
            return f"NComplex(N={self.N}, Z/{self.N}-graded, dims={self.dims})"
        tag = "bounded" if self.bounded else "truncated"
        return f"NComplex(N={self.N}, window=[{self.lo}, {self.hi}] {tag}, dims={self.dims})"

    @property
    def degrees(self) -> list[int]:
        return list(range(self.lo, self.hi + 1))

    def norm(self, n: int) -> int:
        return n % self.N if self.grading == ZMOD_N else n

    def dim(self, n: int) -> int:
        n = self.norm(n)
        return self.dims.get(n, 0)

    def d_at(self, n: int) -> ExactMatrix:
        n = self.norm(n)
        m = self.d.get(n)
        if m is None:
            return ExactMatrix.zeros(self.field, self.dim(n + 1), self.dim(n))
        return m

    def dpow(self, n: int, k: int) -> ExactMatrix:
        """``d^k`` as a matrix ``E^n -> E^(n+k)``."""
        key = (self.norm(n), k)
        m = self._pow_cache.get(key)
        if m is None:
            if k == 0:
                m = ExactMatrix.identity(self.field, self.dim(n))
            else:
                m = self.d_at(n + k - 1) @ self.dpow(n, k - 1)
            self._pow_cache[key] = m
        return m

    def determinate(self, k: int, n: int) -> bool:
        """Whether ``H^(k),n`` is fixed by the data inside the window."""
        if self.bounded or k in (0, self.N):
            return True
        return n + k <= self.hi

    def d_known(self, n: int) -> bool:
        """Whether ``d`` out of degree ``n`` is part of the data."""
        return self.bounded or n < self.hi

    def quotient(self, k: int, n: int) -> Quotient:
        key = (k, self.norm(n))
        qt = self._quot_cache.get(key)
        if qt is None:
            if not self.determinate(k, n):
                raise IndeterminateError(
                    f"H^({k}),{n} needs degree {n + k} but the window ends at {self.hi}"
                )
            K = kernel_basis(self.dpow(n, k))
            I = image_basis(self.dpow(n + k - self.N, self.N - k))
            qt = Quotient(K, I)
            self._quot_cache[key] = qt
        return qt


@dataclass(frozen=True)
class HomologyReport:
    k: int
    n: int
    dim: int
    kernel_dim: int
    image_dim: int

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "dim": self.dim,
            "kernel_dim": self.kernel_dim,
            "image_dim": self.image_dim,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HomologyReport":
        return cls(int(obj["k"]), int(obj["n"]), int(obj["dim"]), int(obj["kernel_dim"]), int(obj["image_dim"]))


def homology(C: NComplex, k: int, n: int) -> HomologyReport:
    """``H^(k),n`` of ``C``; raises :class:`IndeterminateError` outside the window."""
    if not 0 <= k <= C.N:
        raise ValueError(f"level k={k} outside 0..{C.N}")
    qt = C.quotient(k, n)
    return HomologyReport(k, C.norm(n), qt.dim, qt.K.dim, qt.I.dim)


def homology_table(C: NComplex, levels=None, degrees=None) -> list[HomologyReport]:
    """All determinate ``H^(k),n`` for ``k`` in ``levels`` (default 1..N-1)."""
    levels = range(1, C.N) if levels is None else levels
    degrees = C.degrees if degrees is None else degrees
    return [homology(C, k, n) for n in degrees for k in levels if C.determinate(k, n)]


@dataclass(frozen=True)
class NilpotencyReport:
    ok: bool
    failing_degree: int | None
    checked: tuple[int, ...]

    def __bool__(self):
        return self.ok


def verify_nilpotency(C: NComplex) -> NilpotencyReport:
    checked = []
    for n in C.degrees:
        if not C.bounded and n + C.N > C.hi:
            continue
        checked.append(n)
        if not C.dpow(n, C.N).is_zero():
            return NilpotencyReport(False, n, tuple(checked))
    return NilpotencyReport(True, None, tuple(checked))


# -- exactness ---------------------------------------------------------------


@dataclass(frozen=True)
class NodeCheck:
    node: tuple[int, int]
    dim: int
    rank_in: int
    rank_out: int
    composite_zero: bool

    @property
    def ok(self) -> bool:
        return self.composite_zero and self.rank_in + self.rank_out == self.dim


@dataclass
class ExactnessReport:
    nodes: list[NodeCheck] = dc_field(default_factory=list)
    skipped: int = 0

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.nodes)

    @property
    def failures(self) -> list[NodeCheck]:
        return [c for c in self.nodes if not c.ok]

    def __bool__(self):
        return self.ok


def _step(C: NComplex, kind: str, j: int, k: int, n: int):
    """Induced map of ``i^j`` or ``d^j`` out of ``H^(k),n`` and its target node."""
    if kind == "i":
        tgt = (k + j, n)
        f = ExactMatrix.identity(C.field, C.dim(n))
    else:
        tgt = (k - j, n + j)
        f = C.dpow(n, j)
    m = induced_map(f, C.quotient(k, n), C.quotient(*tgt))
    return m, tgt


def _sequence_steps(N: int, l: int, m: int):
    return [("i", l), ("d", m), ("i", N - l - m), ("d", l), ("i", m), ("d", N - l - m)]


def _check_admissible(C: NComplex, l: int, m: int):
    if l < 1 or m < 1 or l + m > C.N:
        raise ValueError(f"need l, m >= 1 and l + m <= N, got l={l}, m={m}, N={C.N}")


def _node_check(C, node, f_in, f_out) -> NodeCheck:
    dim = C.quotient(*node).dim
    comp = (f_out @ f_in).is_zero()
    return NodeCheck((node[0], C.norm(node[1])), dim, rank(f_in), rank(f_out), comp)


def hexagon_check(C: NComplex, l: int, m: int) -> ExactnessReport:
    """Exactness of the hexagon of induced maps on a Z/N-graded complex.

    The hexagon splits into one graded hexagon per residue ``p``; the total
    hexagon is exact iff each of them is.
    """
    if C.grading != ZMOD_N:
        raise ValueError("hexagon_check needs a Z/N-graded complex; use long_sequence_check")
    _check_admissible(C, l, m)
    report = ExactnessReport()
    steps = _sequence_steps(C.N, l, m)
    for p in range(C.N):
        node = (m, p)
        nodes, maps = [], []
        for kind, j in steps:
            f, nxt = _step(C, kind, j, *node)
            nodes.append(node)
            maps.append(f)
            node = nxt
        for t in range(6):
            report.nodes.append(_node_check(C, nodes[t], maps[t - 1], maps[t]))
    return report


def long_sequence_check(C: NComplex, l: int, m: int, p: int | None = None) -> ExactnessReport:
    """Exactness of the long sequences obtained by splitting the hexagon by degree.

    Checks every node whose two neighbours are determinate; ``p=None`` runs
    all residues ``0..N-1``.
    """
    if C.grading != Z_GRADED:
        raise ValueError("long_sequence_check needs a Z-graded complex")
    _check_admissible(C, l, m)
    N = C.N
    residues = range(N) if p is None else [p]
    steps = _sequence_steps(N, l, m)
    report = ExactnessReport()
    for pp in residues:
        r_lo = (C.lo - pp) // N - 2
        r_hi = (C.hi - pp) // N + 2
        node = (m, N * r_lo + pp)
        nodes, maps = [node], []
        for _ in range(r_lo, r_hi):
            for kind, j in steps:
                nxt = (node[0] + j, node[1]) if kind == "i" else (node[0] - j, node[1] + j)
                f = None
                if C.determinate(*node) and C.determinate(*nxt):
                    f, _ = _step(C, kind, j, *node)
                maps.append(f)
                nodes.append(nxt)
                node = nxt
        for t in range(1, len(nodes) - 1):
            if all(C.determinate(*nodes[s]) for s in (t - 1, t, t + 1)):
                report.nodes.append(_node_check(C, nodes[t], maps[t - 1], maps[t]))
            else:
                report.skipped += 1
    return report


def induced_power_maps(C: NComplex, kind: str, j: int, k: int, n: int) -> tuple[ExactMatrix, ExactMatrix]:
    """``[i^j]`` (or ``[d^j]``) computed directly and as the j-th power of ``[i]`` (``[d]``)."""
    direct, _ = _step(C, kind, j, k, n)
    node = (k, n)
    power = ExactMatrix.identity(C.field, C.quotient(k, n).dim)
    for _ in range(j):
        f, node = _step(C, kind, 1, *node)
        power = f @ power
    return direct, power


# -- homotopy criterion -----------------------------------------------------


@dataclass
class HomotopyReport:
    identity_ok: bool
    identity_failures: list[int]
    sum_ok: bool
    sum_failures: list[int]
    vanishing_ok: bool
    nonzero: list[HomologyReport]
    identity_degrees: list[int]
    sum_degrees: list[int]
    homology_checked: int
    nilpotent: bool = True

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.sum_ok and self.vanishing_ok

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "identity_ok": self.identity_ok,
            "identity_failures": self.identity_failures,
            "sum_ok": self.sum_ok,
            "sum_failures": self.sum_failures,
            "vanishing_ok": self.vanishing_ok,
            "nonzero": [r.to_json() for r in self.nonzero],
            "identity_degrees": self.identity_degrees,
            "sum_degrees": self.sum_degrees,
            "homology_checked": self.homology_checked,
            "nilpotent": self.nilpotent,
        }


def homotopy_vanishing_check(
    C: NComplex,
    h: dict[int, ExactMatrix],
    degrees=None,
    q: Scalar | None = None,
) -> HomotopyReport:
    """Check ``h d - q d h = I``, the summation identity, and vanishing homology.

    ``h[n]`` maps degree ``n`` to ``n - 1``.  ``degrees`` restricts all three
    checks (e.g. to the positive part of a complex); each check only uses the
    degrees where its maps are known.  If ``d^N != 0`` (generic ``q``) only
    the first identity is checked and the other two are reported as failed.
    """
    f = C.field
    if q is None:
        q = q_generator(f)
    N = C.N
    degrees = list(C.degrees if degrees is None else degrees)

    def h_at(n):
        n = C.norm(n)
        m = h.get(n)
        if m is None:
            return ExactMatrix.zeros(f, C.dim(n - 1), C.dim(n))
        if m.shape != (C.dim(n - 1), C.dim(n)):
            raise ValueError(f"h at degree {n} has shape {m.shape}")
        return m

    def hpow(n, j):
        m = ExactMatrix.identity(f, C.dim(n))
        for s in range(j):
            m = h_at(n - s) @ m
        return m

    id_degrees, id_fail = [], []
    for n in degrees:
        if not C.d_known(n):
            continue
        id_degrees.append(n)
        lhs = h_at(n + 1) @ C.d_at(n) - (C.d_at(n - 1) @ h_at(n)).scaled(q)
        if lhs != ExactMatrix.identity(f, C.dim(n)):
            id_fail.append(n)

    nilpotent = verify_nilpotency(C).ok
    sum_degrees, sum_fail = [], []
    target = q_factorial(N - 1, q)
    # without d^N = 0 neither the summation identity nor H^(k) is meaningful
    for n in degrees if nilpotent else []:
        if not (C.bounded or n + N - 1 <= C.hi):
            continue
        sum_degrees.append(n)
        total = ExactMatrix.zeros(f, C.dim(n), C.dim(n))
        for k in range(N):
            top = n + k
            bottom = top - (N - 1)
            term = C.dpow(bottom, N - 1 - k) @ hpow(top, N - 1) @ C.dpow(n, k)
            total = total + term
        if total != ExactMatrix.identity(f, C.dim(n)).scaled(target):
            sum_fail.append(n)

    nonzero, checked = [], 0
    for n in degrees if nilpotent else []:
        for k in range(1, N):
            if C.determinate(k, n):
                checked += 1
                rep = homology(C, k, n)
                if rep.dim:
                    nonzero.append(rep)

    return HomotopyReport(
        identity_ok=not id_fail,
        identity_failures=id_fail,
        sum_ok=nilpotent and not sum_fail,
        sum_failures=sum_fail,
        vanishing_ok=nilpotent and not nonzero,
        nonzero=nonzero,
        identity_degrees=id_degrees,
        sum_degrees=sum_degrees,
        homology_checked=checked,
        nilpotent=nilpotent,
    )


# -- Jordan strings -----------------------------------------------------------


@dataclass(frozen=True)
class StringSpec:
    """A basis chain ``v_0 -> v_1 -> ... -> v_(length-1) -> 0`` starting in ``start_degree``."""

    start_degree: int
    length: int

    def to_json(self) -> dict:
        return {"start_degree": self.start_degree, "length": self.length}


def random_unitriangular(rng: random.Random, field: ScalarField, n: int, spread: int = 2) -> ExactMatrix:
    """``L @ U`` with unit-diagonal triangular factors over small integers."""
    lower = ExactMatrix.identity(field, n)
    upper = ExactMatrix.identity(field, n)
    for i in range(n):
        for j in range(n):
            if j < i:
                lower.data[i][j] = field.coerce(rng.randint(-spread, spread))
            elif j > i:
                upper.data[i][j] = field.coerce(rng.randint(-spread, spread))
    return lower @ upper


def string_complex(
    specs,
    N: int,
    field: ScalarField,
    shuffle_seed: int | None = None,
    grading: str = Z_GRADED,
    validate: bool = True,
) -> NComplex:
    """Direct sum of Jordan strings, optionally in a random graded basis.

    ``validate=False`` admits strings longer than ``N`` (which break
    ``d^N = 0``) for testing the nilpotency check.
    """
    specs = [s if isinstance(s, StringSpec) else StringSpec(*s) for s in specs]
    for s in specs:
        if s.length < 1:
            raise ValueError(f"string length must be positive: {s}")
        if validate and s.length > N:
            raise ValueError(f"string of length {s.length} violates d^{N} = 0")
    norm = (lambda n: n % N) if grading == ZMOD_N else (lambda n: n)
    if grading == ZMOD_N:
        degrees = list(range(N))
    elif specs:
        lo = min(s.start_degree for s in specs)
        hi = max(s.start_degree + s.length - 1 for s in specs)
        degrees = list(range(lo, hi + 1))
    else:
        degrees = [0]
    # basis index of each string vector
    dims = {n: 0 for n in degrees}
    index = []
    for s in specs:
        row = []
        for i in range(s.length):
            n = norm(s.start_degree + i)
            row.append((n, dims[n]))
            dims[n] += 1
        index.append(row)
    entries: dict[int, dict] = {n: {} for n in degrees}
    for row in index:
        for (n, a), (n1, b) in zip(row, row[1:]):
            entries[n][(b, a)] = field.one
    d = {}
    for n in degrees:
        nxt = norm(n + 1)
        if nxt in dims:
            d[n] = ExactMatrix.from_sparse(field, dims[nxt], dims[n], entries[n])
    if shuffle_seed is not None:
        rng = random.Random(shuffle_seed)
        P = {n: random_unitriangular(rng, field, dims[n]) for n in degrees}
        Pinv = {n: inverse(P[n]) for n in degrees}
        d = {n: P[norm(n + 1)] @ m @ Pinv[n] for n, m in d.items()}
    return NComplex(N, field, dims, d, grading=grading, bounded=True)


def string_homology_oracle(specs, N: int, k: int, n: int, grading: str = Z_GRADED) -> int:
    """Closed-form ``dim H^(k),n`` of a direct sum of strings.

    A string of length ``j`` from degree ``s`` contributes one dimension in
    degree ``s + i`` exactly when ``max(j - k, 0) <= i <= min(j, N - k) - 1``.
    """
    total = 0
    for s in specs:
        s = s if isinstance(s, StringSpec) else StringSpec(*s)
        j = s.length
        for i in range(max(j - k, 0), min(j, N - k)):
            deg = s.start_degree + i
            if (grading == ZMOD_N and deg % N == n % N) or (grading != ZMOD_N and deg == n):
                total += 1
    return total


def random_string_specs(rng: random.Random, N: int, max_strings: int = 5, degree_span: int = 4):
    count = rng.randint(1, max_strings)
    return [StringSpec(rng.randint(0, degree_span), rng.randint(1, N)) for _ in range(count)]
