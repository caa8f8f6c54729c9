"""Batch scenario runner: ``qnil <scenario> [options]``.

Builds the requested complex or algebra, runs the selected checks and emits
a JSON report (``--report``) plus a table on stdout.  Exit codes: 0 all
checks pass, 1 a check failed, 2 invalid input, 3 dimension cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path

import jsonschema

from .cochain import (
    DEFAULT_CAP,
    BimoduleSpec,
    SimplicialComplexSpec,
    dual_product_complex,
    hochschild_complex,
    hochschild_expected_dim,
    hochschild_qdga,
    simplicial_forms,
)
from .errors import AxiomViolation, InputError, QnilError, ResourceCapExceeded
from .exact_linalg import ExactMatrix
from .ncomplex import (
    ZMOD_N,
    Z_GRADED,
    StringSpec,
    hexagon_check,
    homology_table,
    homotopy_vanishing_check,
    long_sequence_check,
    random_string_specs,
    string_complex,
    string_homology_oracle,
    verify_nilpotency,
)
from .qdga import (
    AlgebraSpec,
    cyclic_shift,
    elementary_step,
    leibniz_check,
    matrix_qdga,
    matrix_qdga_graded,
    nilpotent_shift,
    pullback_grading,
)
from .scalars import cyclotomic_field, q_factorial, q_generator, rational_field, scalar_to_json
from .universal import classical_envelope_dims, extended_complex, tensor_qdga, universal_envelope

__all__ = ["ScenarioConfig", "SCENARIOS", "CHECKS", "validate_input", "run", "render_table", "main"]

SCENARIOS = ("matrix", "simplicial", "hochschild", "dual-product", "tensor", "envelope", "strings", "random-strings")
CHECKS = ("nilpotency", "leibniz", "hexagon", "long-sequences", "homotopy", "homology", "oracle")
CYCLOTOMIC_ONLY = {"hexagon", "homotopy"}

EXIT_OK, EXIT_FAILED, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3

DEFAULT_CHECKS = {
    "matrix": ("nilpotency", "leibniz", "homology"),
    "simplicial": ("nilpotency", "leibniz", "homology"),
    "hochschild": ("nilpotency", "leibniz", "homology", "oracle"),
    "dual-product": ("nilpotency", "homotopy", "homology"),
    "tensor": ("nilpotency", "leibniz", "homology", "oracle"),
    "envelope": ("nilpotency", "leibniz", "homology", "homotopy", "oracle"),
    "strings": ("nilpotency", "homology", "oracle"),
    "random-strings": ("nilpotency", "homology", "oracle"),
}
RATIONAL_DEFAULTS = {"leibniz", "oracle"}

ALGEBRA_PRESETS = {
    "ground": AlgebraSpec.ground,
    "diagonal2": lambda: AlgebraSpec.diagonal(2),
    "diagonal3": lambda: AlgebraSpec.diagonal(3),
    "dual-numbers": lambda: AlgebraSpec.truncated_polynomial(2),
    "truncated3": lambda: AlgebraSpec.truncated_polynomial(3),
    "group-z2": lambda: AlgebraSpec.cyclic_group(2),
    "upper-triangular": AlgebraSpec.upper_triangular,
}
MATRIX_PRESETS = {
    "cyclic-shift": cyclic_shift,
    "nilpotent-shift": nilpotent_shift,
    "elementary-step": elementary_step,
    "zero": None,
}
SIMPLICIAL_PRESETS = {
    "point": {"vertices": ["p"], "facets": [["p"]]},
    "two-points": {"vertices": ["a", "b"], "facets": [["a"], ["b"]]},
    "interval": {"vertices": ["a", "b"], "facets": [["a", "b"]]},
    "path": {"vertices": ["a", "b", "c"], "facets": [["a", "b"], ["b", "c"]]},
}

# -- input schemas -----------------------------------------------------------

_RATIONAL = {"oneOf": [{"type": "integer"}, {"type": "string", "pattern": r"^\s*-?\d+(\s*/\s*-?\d+)?\s*$"}]}

SCHEMAS = {
    "algebra": {
        "type": "object",
        "required": ["dim", "sc", "unit"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "name": {"type": "string"},
            "unit": {"type": "array", "items": _RATIONAL},
            "sc": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _RATIONAL}}},
        },
    },
    "bimodule": {
        "type": "object",
        "required": ["dim", "left", "right"],
        "properties": {
            "dim": {"type": "integer", "minimum": 1},
            "left": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _RATIONAL}}},
            "right": {"type": "array", "items": {"type": "array", "items": {"type": "array", "items": _RATIONAL}}},
        },
    },
    "simplicial": {
        "type": "object",
        "required": ["vertices", "facets"],
        "properties": {
            "vertices": {"type": "array", "items": {"type": ["string", "integer"]}, "minItems": 1},
            "facets": {
                "type": "array",
                "minItems": 1,
                "items": {"type": "array", "minItems": 1, "items": {"type": ["string", "integer"]}},
            },
        },
    },
    "matrix": {
        "type": "object",
        "required": ["N", "blocks", "e"],
        "properties": {
            "N": {"type": "integer", "minimum": 2},
            "blocks": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            "e": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
        },
    },
    "strings": {
        "type": "object",
        "required": ["strings"],
        "properties": {
            "N": {"type": "integer", "minimum": 2},
            "grading": {"enum": [Z_GRADED, ZMOD_N]},
            "strings": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["start_degree", "length"],
                    "properties": {
                        "start_degree": {"type": "integer"},
                        "length": {"type": "integer", "minimum": 1},
                    },
                },
            },
        },
    },
}


def _value_lines(text: str) -> dict[tuple, int]:
    """Line number of every JSON value, keyed by its path; assumes valid JSON."""
    lines: dict[tuple, int] = {}
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos] in " \t\r\n":
            pos += 1

    def line():
        return text.count("\n", 0, pos) + 1

    def string():
        nonlocal pos
        end = pos + 1
        while text[end] != '"':
            end += 2 if text[end] == "\\" else 1
        s = json.loads(text[pos : end + 1])
        pos = end + 1
        return s

    def value(path):
        nonlocal pos
        skip()
        lines[path] = line()
        ch = text[pos]
        if ch == "{":
            pos += 1
            skip()
            if text[pos] == "}":
                pos += 1
                return
            while True:
                skip()
                key = string()
                skip()
                pos += 1  # colon
                value(path + (key,))
                skip()
                ch = text[pos]
                pos += 1
                if ch == "}":
                    return
        elif ch == "[":
            pos += 1
            skip()
            if text[pos] == "]":
                pos += 1
                return
            i = 0
            while True:
                value(path + (i,))
                i += 1
                skip()
                ch = text[pos]
                pos += 1
                if ch == "]":
                    return
        elif ch == '"':
            string()
        else:
            while pos < n and text[pos] not in ",]} \t\r\n":
                pos += 1

    value(())
    return lines


def _anchor(name: str, lines: dict, path) -> str:
    path = tuple(path)
    while path and path not in lines:
        path = path[:-1]
    return f"{name}:{lines.get(path, 1)}"


def _load(path: str | Path, kind: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"{path}: cannot read input ({exc.strerror})") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}: invalid JSON: {exc.msg} (column {exc.colno})") from exc
    lines = _value_lines(text)
    errors = sorted(jsonschema.Draft7Validator(SCHEMAS[kind]).iter_errors(obj), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(x) for x in err.absolute_path) or "<root>"
        raise InputError(f"{_anchor(path, lines, err.absolute_path)}: {where}: {err.message}")
    return obj, lines


def validate_input(path: str | Path, kind: str, algebra: AlgebraSpec | None = None):
    """Parse and check an input file of the given kind.

    ``kind`` is one of ``algebra``, ``bimodule`` (needs ``algebra``),
    ``simplicial``, ``matrix`` or ``strings``.  Errors are raised as
    :class:`InputError` with a ``file:line:`` prefix.
    """
    obj, lines = _load(path, kind)
    try:
        if kind == "algebra":
            return AlgebraSpec.from_json(obj, name=obj.get("name", Path(path).stem))
        if kind == "bimodule":
            return BimoduleSpec.from_json(algebra, obj)
        if kind == "simplicial":
            return SimplicialComplexSpec.from_json(obj)
        if kind == "matrix":
            return obj
        if kind == "strings":
            return obj
    except AxiomViolation as exc:
        field = "sc" if kind == "algebra" else "left"
        anchor_path = (field,) + tuple(exc.witness[:2]) if exc.witness else (field,)
        raise InputError(f"{_anchor(path, lines, anchor_path)}: {exc} (witness {list(exc.witness or ())})") from exc
    except (ValueError, InputError) as exc:
        raise InputError(f"{_anchor(path, lines, ())}: {exc}") from exc
    raise ValueError(f"unknown input kind {kind!r}")


# -- configuration -------------------------------------------------------------


@dataclass
class ScenarioConfig:
    scenario: str
    N: int = 3
    q: str = "cyclotomic"
    n_max: int | None = None
    input_path: str | None = None
    algebra: str | None = None
    bimodule: str | None = None
    preset: str | None = None
    seed: int = 0
    checks: tuple[str, ...] | None = None
    omega: list | None = None
    cap: int = DEFAULT_CAP

    @property
    def cyclotomic(self) -> bool:
        return self.q == "cyclotomic"

    def resolved_checks(self) -> tuple[str, ...]:
        if self.checks is not None:
            return tuple(self.checks)
        defaults = DEFAULT_CHECKS[self.scenario]
        if not self.cyclotomic:
            defaults = tuple(c for c in defaults if c in RATIONAL_DEFAULTS)
        return defaults

    def validate(self):
        if self.scenario not in SCENARIOS:
            raise InputError(f"unknown scenario {self.scenario!r}")
        if self.N < 2:
            raise InputError("N must be at least 2")
        unknown = [c for c in self.resolved_checks() if c not in CHECKS]
        if unknown:
            raise InputError(f"unknown checks {unknown}; choose from {list(CHECKS)}")
        if not self.cyclotomic:
            value = _parse_rational(self.q)
            if value in (0, 1):
                raise InputError("rational q must differ from 0 and 1")
            bad = CYCLOTOMIC_ONLY & set(self.resolved_checks())
            if bad:
                raise InputError(f"checks {sorted(bad)} need a cyclotomic q")

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "N": self.N,
            "q": self.q,
            "n_max": self.n_max,
            "input": self.input_path,
            "algebra": self.algebra,
            "bimodule": self.bimodule,
            "preset": self.preset,
            "seed": self.seed,
            "checks": list(self.resolved_checks()),
            "omega": None if self.omega is None else [str(c) for c in self.omega],
            "cap": self.cap,
        }


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.replace(" ", ""))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"cannot read {text!r} as a rational number") from exc


def _field_and_q(config: ScenarioConfig):
    if config.cyclotomic:
        f = cyclotomic_field(config.N)
        return f, q_generator(f)
    f = rational_field()
    return f, q_generator(f, _parse_rational(config.q))


def _algebra(config: ScenarioConfig) -> AlgebraSpec:
    name = config.algebra or config.input_path or "dual-numbers"
    if name in ALGEBRA_PRESETS:
        return ALGEBRA_PRESETS[name]()
    return validate_input(name, "algebra")


# -- report -------------------------------------------------------------------


@dataclass
class RunReport:
    config: dict
    dims: dict = dc_field(default_factory=dict)
    checks: dict = dc_field(default_factory=dict)
    homology: list = dc_field(default_factory=list)
    notes: dict = dc_field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c["ok"] for c in self.checks.values())

    def to_json(self) -> dict:
        return {
            "config": self.config,
            "dims": {str(k): v for k, v in sorted(self.dims.items())},
            "checks": self.checks,
            "homology": self.homology,
            "notes": self.notes,
            "ok": self.ok,
        }


def _nilpotency(C) -> dict:
    rep = verify_nilpotency(C)
    return {"ok": rep.ok, "failing_degree": rep.failing_degree, "degrees_checked": list(rep.checked)}


def _leibniz(A) -> dict:
    rep = leibniz_check(A)
    failure = None if rep.failure is None else [list(p) for p in rep.failure]
    return {"ok": rep.ok, "failure": failure, "pairs_checked": rep.pairs_checked}


def _admissible(N):
    return [(l, m) for l in range(1, N) for m in range(1, N) if l + m <= N]


def _exactness(C, kind) -> dict:
    out, ok, nodes = [], True, 0
    for l, m in _admissible(C.N):
        rep = hexagon_check(C, l, m) if kind == "hexagon" else long_sequence_check(C, l, m)
        nodes += len(rep.nodes)
        for fail in rep.failures:
            ok = False
            out.append({"l": l, "m": m, "node": list(fail.node), "dim": fail.dim, "rank_in": fail.rank_in, "rank_out": fail.rank_out})
    return {"ok": ok, "nodes_checked": nodes, "failures": out}


def _homology(report: RunReport, C, levels=None):
    table = homology_table(C, levels=levels)
    report.homology = [r.to_json() for r in table]
    return table


def _homology_check(C, table, expected=None) -> dict:
    # Im d^(N-k) inside ker d^k is asserted while the table is computed
    out = {"ok": True, "entries": len(table)}
    if expected is not None:
        mism = [dict(r.to_json(), expected=expected(r.k, r.n)) for r in table if r.dim != expected(r.k, r.n)]
        out["ok"] = not mism
        out["mismatches"] = mism
    return out


def _run_matrix(config, report, checks, f, q):
    if config.input_path:
        spec = validate_input(config.input_path, "matrix")
        N, blocks, e = spec["N"], spec["blocks"], [[f.coerce(_parse_rational(str(c))) if isinstance(c, str) else f.coerce(c) for c in row] for row in spec["e"]]
        if N != config.N:
            raise InputError(f"{config.input_path}: N={N} does not match --N {config.N}")
        e = ExactMatrix(f, len(e), len(e[0]) if e else 0, e)
    else:
        preset = config.preset or "cyclic-shift"
        if preset not in MATRIX_PRESETS:
            raise InputError(f"unknown matrix preset {preset!r}; choose from {sorted(MATRIX_PRESETS)}")
        blocks = [1] * config.N
        builder = MATRIX_PRESETS[preset]
        e = ExactMatrix.zeros(f, config.N, config.N) if builder is None else builder(f, N=config.N)
    n_max = config.n_max if config.n_max is not None else 2 * config.N + 2
    if config.cyclotomic:
        A = matrix_qdga(blocks, e, q)
        report.notes["lambda"] = scalar_to_json(A.lam)
        graded = None
    else:
        A = matrix_qdga_graded(blocks, e, q, n_max)
        graded = A
    C = A.complex
    report.dims = dict(C.dims)
    if "nilpotency" in checks:
        report.checks["nilpotency"] = _nilpotency(C)
    if "leibniz" in checks:
        report.checks["leibniz"] = _leibniz(A)
    if "hexagon" in checks:
        report.checks["hexagon"] = _exactness(C, "hexagon")
    if "long-sequences" in checks:
        graded = graded or pullback_grading(A, n_max)
        report.checks["long-sequences"] = _exactness(graded.complex, "long")
    if "homology" in checks:
        table = _homology(report, C)
        report.checks["homology"] = _homology_check(C, table)
        report.notes["homology_total"] = {str(k): sum(r.dim for r in table if r.k == k) for k in range(1, C.N)}


def _run_strings(config, report, checks, f, q):
    if config.scenario == "strings":
        if config.input_path is None:
            raise InputError("the strings scenario needs --input")
        spec = validate_input(config.input_path, "strings")
        N = spec.get("N", config.N)
        if N != config.N:
            raise InputError(f"{config.input_path}: N={N} does not match --N {config.N}")
        grading = spec.get("grading", Z_GRADED)
        specs = [StringSpec(s["start_degree"], s["length"]) for s in spec["strings"]]
        shuffle = None
    else:
        rng = random.Random(config.seed)
        grading = ZMOD_N if config.preset == ZMOD_N else Z_GRADED
        specs = random_string_specs(rng, config.N, max_strings=5, degree_span=4)
        shuffle = rng.randrange(2 ** 31)
    if any(s.length > config.N for s in specs):
        raise InputError(f"string longer than N={config.N}")
    report.notes["strings"] = [s.to_json() for s in specs]
    report.notes["grading"] = grading
    C = string_complex(specs, config.N, f, shuffle_seed=shuffle, grading=grading)
    report.dims = dict(C.dims)
    if "nilpotency" in checks:
        report.checks["nilpotency"] = _nilpotency(C)
    if "hexagon" in checks:
        if grading != ZMOD_N:
            raise InputError("hexagon needs Z/N grading; use long-sequences for Z-graded strings")
        report.checks["hexagon"] = _exactness(C, "hexagon")
    if "long-sequences" in checks:
        if grading != Z_GRADED:
            raise InputError("long-sequences needs Z grading; use hexagon for Z/N-graded strings")
        report.checks["long-sequences"] = _exactness(C, "long")
    if "homology" in checks or "oracle" in checks:
        table = _homology(report, C)
        if "homology" in checks:
            report.checks["homology"] = _homology_check(C, table)
        if "oracle" in checks:
            report.checks["oracle"] = _homology_check(C, table, lambda k, n: string_homology_oracle(specs, config.N, k, n, grading))


def _run_simplicial(config, report, checks, f, q):
    if config.input_path:
        K = validate_input(config.input_path, "simplicial")
    else:
        preset = config.preset or "interval"
        if preset not in SIMPLICIAL_PRESETS:
            raise InputError(f"unknown simplicial preset {preset!r}; choose from {sorted(SIMPLICIAL_PRESETS)}")
        K = SimplicialComplexSpec.from_json(SIMPLICIAL_PRESETS[preset])
    n_max = config.n_max if config.n_max is not None else config.N + 2
    A = simplicial_forms(K, q, n_max, N=config.N, cap=config.cap)
    _standard(report, checks, A.complex, A)


def _standard(report, checks, C, A=None):
    report.dims = dict(C.dims)
    if "nilpotency" in checks:
        report.checks["nilpotency"] = _nilpotency(C)
    if "leibniz" in checks and A is not None:
        report.checks["leibniz"] = _leibniz(A)
    if "long-sequences" in checks:
        report.checks["long-sequences"] = _exactness(C, "long")
    if "hexagon" in checks:
        raise InputError("hexagon needs a Z/N-graded complex; use long-sequences")
    table = None
    if "homology" in checks:
        table = _homology(report, C)
        report.checks["homology"] = _homology_check(C, table)
    return table


def _run_hochschild(config, report, checks, f, q):
    A = _algebra(config)
    M = validate_input(config.bimodule, "bimodule", algebra=A) if config.bimodule else None
    n_max = config.n_max if config.n_max is not None else config.N + 3
    if M is None:
        H = hochschild_qdga(A, q, n_max, N=config.N, cap=config.cap)
        C = H.complex
    else:
        H, C = None, hochschild_complex(A, M, q, n_max, N=config.N, cap=config.cap)
        if "leibniz" in checks and config.checks is not None:
            raise InputError("a bimodule-valued complex has no product to check")
    _standard(report, checks, C, H)
    if "oracle" in checks:
        if not config.cyclotomic:
            report.checks["oracle"] = {"ok": True, "skipped": "the correspondence needs q^N = 1"}
            return
        f2 = cyclotomic_field(2)
        top = 2 * (n_max // config.N) + 2
        classical_C = hochschild_complex(A, M, q_generator(f2), top + 1, N=2, cap=config.cap)
        classical = {j: r.dim for j, r in ((r.n, r) for r in homology_table(classical_C))}
        report.notes["classical_dims"] = {str(j): d for j, d in sorted(classical.items())}
        table = homology_table(C)
        report.homology = [r.to_json() for r in table]
        report.checks["oracle"] = _homology_check(C, table, lambda k, n: hochschild_expected_dim(k, n, config.N, classical))


def _run_dual_product(config, report, checks, f, q):
    A = _algebra(config)
    n_max = config.n_max if config.n_max is not None else config.N + 3
    C, h = dual_product_complex(A, q, n_max, N=config.N, cap=config.cap)
    _standard(report, checks, C)
    if "homotopy" in checks:
        rep = homotopy_vanishing_check(C, h, degrees=[n for n in C.degrees if n >= 1], q=q)
        report.checks["homotopy"] = dict(rep.to_json(), ok=rep.ok)


def _run_tensor(config, report, checks, f, q):
    A = _algebra(config)
    n_max = config.n_max if config.n_max is not None else config.N + 3
    T = tensor_qdga(A, q, n_max, N=config.N, cap=config.cap)
    _standard(report, checks, T.complex, T)
    if "homotopy" in checks:
        X = extended_complex(A, q, omega=config.omega, n_max=n_max, N=config.N, cap=config.cap)
        rep = homotopy_vanishing_check(X.complex, X.h, q=q)
        report.checks["homotopy"] = dict(rep.to_json(), ok=rep.ok)
    if "oracle" in checks:
        report.checks["oracle"] = _closed_forms(T, A, q, n_max)


def _closed_forms(T, A, q, n_max) -> dict:
    """``d^n tau = [n!] tau^(n+1)`` and ``d^n x = [n!] tau^(n-1) d x`` on basis elements."""
    f = T.field
    failures = []
    checked = 0
    for n in range(1, n_max):
        c = q_factorial(n, q).coeffs
        lhs = T.complex.dpow(1, n).apply(T.tau)
        rhs = [f.mul(c, v) for v in T.power(1, T.tau, n + 1)]
        checked += 1
        if lhs != rhs:
            failures.append({"element": "tau", "n": n})
    for n in range(1, n_max + 1):
        c = q_factorial(n, q).coeffs
        for i in range(A.dim):
            x = T.from_base(A.basis_vector(i))
            dx = T.differential(0, x)
            base = dx if n == 1 else T.multiply(n - 1, T.power(1, T.tau, n - 1), 1, dx)
            checked += 1
            if T.complex.dpow(0, n).apply(x) != [f.mul(c, v) for v in base]:
                failures.append({"element": f"e_{i}", "n": n})
    return {"ok": not failures, "identities_checked": checked, "failures": failures}


def _run_envelope(config, report, checks, f, q):
    A = _algebra(config)
    n_max = config.n_max if config.n_max is not None else config.N + 3
    env = universal_envelope(A, q, n_max, N=config.N, cap=config.cap)
    Om = env.as_qdga()
    report.notes["closure_rounds"] = {str(n): r for n, r in sorted(env.rounds.items())}
    _standard(report, checks, Om.complex, Om)
    if "homotopy" in checks:
        X = extended_complex(A, q, omega=config.omega, n_max=n_max, restrict_to_envelope=True, N=config.N, cap=config.cap)
        rep = homotopy_vanishing_check(X.complex, X.h, q=q)
        report.checks["homotopy"] = dict(rep.to_json(), ok=rep.ok)
    if "oracle" in checks:
        failure = env.closure_failure()
        out = {"ok": failure is None, "closure_failure": None if failure is None else list(failure)}
        if config.cyclotomic and config.N == 2:
            classical = classical_envelope_dims(A, f, n_max)
            out["classical_dims"] = {str(n): d for n, d in sorted(classical.items())}
            out["dims_match"] = classical == env.dims()
            out["ok"] = out["ok"] and out["dims_match"]
        report.checks["oracle"] = out


RUNNERS = {
    "matrix": _run_matrix,
    "simplicial": _run_simplicial,
    "hochschild": _run_hochschild,
    "dual-product": _run_dual_product,
    "tensor": _run_tensor,
    "envelope": _run_envelope,
    "strings": _run_strings,
    "random-strings": _run_strings,
}


def run(config: ScenarioConfig) -> RunReport:
    """Build the scenario and run its checks; raises :class:`InputError` or :class:`ResourceCapExceeded`."""
    config.validate()
    f, q = _field_and_q(config)
    report = RunReport(config=config.to_json())
    report.notes["q"] = scalar_to_json(q)
    RUNNERS[config.scenario](config, report, set(config.resolved_checks()), f, q)
    return report


def render_table(report: RunReport) -> str:
    data = report.to_json()
    cfg = data["config"]
    lines = [f"scenario {cfg['scenario']}  N={cfg['N']}  q={cfg['q']}"]
    lines.append("dims     " + "  ".join(f"{n}:{d}" for n, d in data["dims"].items()))
    for name, res in data["checks"].items():
        lines.append(f"{'PASS' if res['ok'] else 'FAIL'}  {name}")
    if data["homology"]:
        lines.append("   k    n  dim  ker  im")
        for r in data["homology"]:
            lines.append(f"{r['k']:>4} {r['n']:>4} {r['dim']:>4} {r['kernel_dim']:>4} {r['image_dim']:>3}")
    lines.append("ok" if data["ok"] else "FAILED")
    return "\n".join(lines)


def dumps(report: RunReport) -> str:
    return json.dumps(report.to_json(), sort_keys=True, indent=2) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qnil", description="Build N-complexes and q-differential algebras and verify them exactly.")
    p.add_argument("scenario", choices=SCENARIOS)
    p.add_argument("--N", type=int, default=3, help="nilpotency order / order of the root of unity")
    p.add_argument("--q", default="cyclotomic", help="'cyclotomic' or a rational value such as 2 or -3/2")
    p.add_argument("--nmax", type=int, default=None, help="top degree of truncated complexes")
    p.add_argument("--input", default=None, help="JSON input (matrix, simplicial, strings or algebra spec)")
    p.add_argument("--algebra", default=None, help="algebra JSON path or preset: " + ", ".join(ALGEBRA_PRESETS))
    p.add_argument("--bimodule", default=None, help="bimodule JSON path (hochschild only)")
    p.add_argument("--preset", default=None, help="matrix e, simplicial complex, or 'ZmodN' for random-strings")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--checks", default=None, help="comma-separated subset of " + ",".join(CHECKS))
    p.add_argument("--omega", default=None, help="comma-separated coefficients of the linear form")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest dimension allowed in any degree")
    p.add_argument("--report", default=None, help="write the JSON report here")
    p.add_argument("--format", choices=("table", "json"), default="table", help="stdout format")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        checks = None if args.checks is None else tuple(c.strip() for c in args.checks.split(",") if c.strip())
        omega = None if args.omega is None else [_parse_rational(c) for c in args.omega.split(",")]
        config = ScenarioConfig(
            scenario=args.scenario,
            N=args.N,
            q=args.q,
            n_max=args.nmax,
            input_path=args.input,
            algebra=args.algebra,
            bimodule=args.bimodule,
            preset=args.preset,
            seed=args.seed,
            checks=checks,
            omega=omega,
            cap=args.cap,
        )
        report = run(config)
    except ResourceCapExceeded as exc:
        print(f"qnil: resource cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (InputError, AxiomViolation) as exc:
        print(f"qnil: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except QnilError as exc:
        # a broken complex (e.g. Im not inside ker) is a failed check, not bad input
        print(f"qnil: check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    text = dumps(report)
    if args.report:
        Path(args.report).write_text(text)
    print(text if args.format == "json" else render_table(report), end="\n" if args.format == "table" else "")
    return EXIT_OK if report.ok else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
