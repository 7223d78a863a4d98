"""Self-verification suite.

Each ``check_*`` function runs one family of identities and returns a
:class:`CheckResult` holding the worst residual and the threshold it was held
to.  The CLI ``verify`` command and the acceptance tests both call
:func:`run_suite`.

Residuals are deterministic for a given seed; wall-clock times are kept out of
the report so that repeated runs produce identical output.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError
from .fock import (
    basis_phi,
    eval_bound,
    from_basis_coords,
    inner_product,
    kernel_element,
    kernel_L,
    norm,
    random_element,
)
from .operators import op_A, op_D, op_M, verify_identities
from .quadrature import (
    DEFAULT_SPEC,
    LineMeasure,
    QuadratureSpec,
    SliceMeasure,
    basis_gram_quad,
    fock_inner_quad,
    line_integral,
    mellin_quad,
    moment_E,
    slice_integral,
)
from .quaternion import Quaternion, random_unit
from .special import mellin_K, rising
from .transforms import (
    HermiteExpansion,
    T_alpha_coeff,
    T_alpha_dunkl_quad,
    T_alpha_quad,
    T_inverse_quad,
    hermite_h,
    kernel_C,
    kernel_C_series,
    kernel_orthogonality_check,
    line_norm2,
)

ALPHA_GRID = (-0.5, 0.0, 0.5, 1.3)

# default thresholds per check
TOLERANCES = {
    "measure_normalization": 1e-7,
    "moment_lemma": 1e-7,
    "mellin_identity": 1e-7,
    "basis_orthonormality": 1e-7,
    "reproducing_property": 1e-11,
    "evaluation_bound": 1e-12,
    "generating_function": 1e-8,
    "kernel_orthogonality": 1e-6,
    "isometry": 1e-6,
    "inverse_round_trip": 1e-6,
    "dunkl_intertwining": 1e-6,
    "operator_identities": 1e-11,
    "slice_independence": 1e-7,
}

EPS = np.finfo(float).eps


@dataclass
class CheckResult:
    name: str
    residual: float
    tol: float
    detail: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return bool(self.residual < self.tol)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tol": self.tol,
            "detail": self.detail,
        }


def _random_units(rng: np.random.Generator, k: int):
    return [random_unit(int(s)) for s in rng.integers(0, 2 ** 31, size=k)]


def _random_point(rng: np.random.Generator, radius: float) -> Quaternion:
    v = rng.normal(size=4)
    return Quaternion(*(v / np.linalg.norm(v) * radius * rng.uniform() ** 0.25))


def _tol(name: str, override: float | None) -> float:
    return TOLERANCES[name] if override is None else float(override)


# -- individual checks ----------------------------------------------------------

def check_measure_normalization(alphas=ALPHA_GRID, spec=DEFAULT_SPEC, tol=None) -> CheckResult:
    """Total mass of d lambda_alpha is one, and h_0 has unit norm in L^2(d mu_alpha)."""
    worst, detail = 0.0, {}
    for a in alphas:
        mass = slice_integral(lambda p: np.ones(p.shape[:-1]), SliceMeasure(a), spec, degree=0)
        h0 = line_integral(lambda x: hermite_h(0, x, a) ** 2, LineMeasure(a), spec)
        detail[f"alpha={a}"] = {"slice_mass": mass, "h0_norm2": h0}
        worst = max(worst, abs(mass - 1.0), abs(h0 - 1.0))
    return CheckResult("measure_normalization", worst, _tol("measure_normalization", tol), detail)


def moment_closed_form(m: int, n: int, alpha: float) -> float:
    if m != n:
        return 0.0
    return 4.0 ** n * math.factorial(n) * rising(alpha + 1.0, n)


def check_moment_lemma(alphas=ALPHA_GRID, nmax: int = 4, spec=DEFAULT_SPEC, tol=None) -> CheckResult:
    """Quadrature E_{m,n} against its closed form, relative to E_{n,n} (the scale of the row)."""
    worst, where = 0.0, None
    for a in alphas:
        for m in range(nmax + 1):
            for n in range(nmax + 1):
                val = moment_E(m, n, a, spec=spec)
                exact = moment_closed_form(m, n, a)
                ref = math.sqrt(moment_closed_form(m, m, a) * moment_closed_form(n, n, a))
                err = abs(val - Quaternion(exact)) / ref
                if err >= worst:
                    worst, where = err, {"alpha": a, "m": m, "n": n}
    return CheckResult("moment_lemma", worst, _tol("moment_lemma", tol), {"worst_at": where})


MELLIN_GRID = ((1.5, 2.5, 3.5), (0.0, 0.5, 1.2))


def check_mellin_identity(spec=DEFAULT_SPEC, tol=None) -> CheckResult:
    worst, detail = 0.0, {}
    for d in MELLIN_GRID[0]:
        for nu in MELLIN_GRID[1]:
            val = mellin_quad(d, nu, spec)
            err = abs(val / mellin_K(d, nu) - 1.0)
            detail[f"delta={d},nu={nu}"] = err
            worst = max(worst, err)
    return CheckResult("mellin_identity", worst, _tol("mellin_identity", tol), detail)


def check_basis_orthonormality(alpha: float, nmax: int = 8, unit=None, spec=DEFAULT_SPEC, tol=None,
                               seed: int = 0) -> CheckResult:
    """Coefficient path (exact up to rounding), slice-quadrature path, and h_n on the line."""
    if unit is None:
        unit = random_unit(seed)
    basis = [basis_phi(n, alpha) for n in range(nmax + 1)]
    eye = np.eye(nmax + 1)
    coef = max(abs(inner_product(basis[n], basis[m]) - Quaternion(eye[m, n]))
               for m in range(nmax + 1) for n in range(nmax + 1))
    gram, _ = basis_gram_quad(alpha, nmax, unit, spec)
    target = np.zeros_like(gram)
    target[..., 0] = eye
    quad = float(np.max(np.linalg.norm(gram - target, axis=-1)))
    m = LineMeasure(alpha)
    herm = 0.0
    for i in range(nmax + 1):
        for j in range(i, nmax + 1):
            v = line_integral(lambda x, i=i, j=j: hermite_h(i, x, alpha) * hermite_h(j, x, alpha), m, spec)
            herm = max(herm, abs(v - eye[i, j]))
    # the coefficient path must sit at rounding level on its own
    coef_ok = coef <= 8 * EPS
    residual = max(quad, herm) if coef_ok else math.inf
    return CheckResult("basis_orthonormality", residual, _tol("basis_orthonormality", tol),
                       {"coefficient": coef, "quadrature": quad, "hermite_line": herm})


def check_reproducing_property(alpha: float, degree: int = 8, trials: int = 50, radius: float = 2.0,
                               seed: int = 0, tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        f = random_element(rng, degree, alpha)
        q = _random_point(rng, radius)
        kq = kernel_element(q, alpha, max(degree, 40))
        worst = max(worst, abs(inner_product(f, kq) - f(q)))
    return CheckResult("reproducing_property", worst, _tol("reproducing_property", tol),
                       {"trials": trials, "degree": degree})


def check_evaluation_bound(alpha: float, trials: int = 100, max_degree: int = 10, radius: float = 3.0,
                           seed: int = 0, tol=None) -> CheckResult:
    """Residual is the largest relative excess over the bound (zero when it always holds)."""
    rng = np.random.default_rng(seed)
    excess, violations = 0.0, 0
    for _ in range(trials):
        f = random_element(rng, int(rng.integers(0, max_degree + 1)), alpha)
        q = _random_point(rng, radius)
        c = eval_bound(q, alpha)
        lhs, rhs = abs(f(q)), c * norm(f)
        growth = c / math.exp(abs(q) ** 2 / 2.0)
        # allow rounding in the comparison itself, nothing more
        e = max(lhs / rhs - 1.0 - 4 * EPS, growth - 1.0 - 4 * EPS, 0.0)
        violations += e > 0
        excess = max(excess, e)
    return CheckResult("evaluation_bound", excess, _tol("evaluation_bound", tol),
                       {"trials": trials, "violations": int(violations)})


def check_generating_function(alpha: float, radius: float = 1.5, seed: int = 0, tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    units = _random_units(rng, 3)
    worst = 0.0
    for u in units:
        for r in np.linspace(0.0, radius, 7):
            for th in np.linspace(0.0, 2 * np.pi, 9)[:-1]:
                p = Quaternion(r * math.cos(th), *(r * math.sin(th) * u.vector))
                for x in np.linspace(-2.0, 2.0, 9):
                    d = abs(kernel_C(p, x, alpha).value - kernel_C_series(p, x, alpha, 40))
                    worst = max(worst, d)
    return CheckResult("generating_function", worst, _tol("generating_function", tol), {"units": 3})


def check_kernel_orthogonality(alpha: float, pairs: int = 10, seed: int = 0, spec=DEFAULT_SPEC,
                               tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        p = _random_point(rng, 1.5)
        q = _random_point(rng, 1.5)
        worst = max(worst, kernel_orthogonality_check(p, q, alpha, spec))
    # ||C^q||^2 = L(q, conj q) = L(|q|^2)
    q = Quaternion(0.7, 0.3)
    norm_dev = kernel_orthogonality_check(q.conj(), q, alpha, spec)
    l_dev = abs(kernel_L(q, q.conj(), alpha).value - kernel_L(abs(q) ** 2, 1.0, alpha).value)
    return CheckResult("kernel_orthogonality", max(worst, norm_dev, l_dev), _tol("kernel_orthogonality", tol),
                       {"pairs": pairs, "random_pairs": worst, "kernel_norm": norm_dev})


def check_isometry(alpha: float, nmax: int = 6, seed: int = 0, spec=DEFAULT_SPEC, tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    c = rng.normal(size=(nmax + 1, 4))
    phi = HermiteExpansion(c, alpha)
    target = phi.norm2()
    coef = abs(norm(T_alpha_coeff(phi)) ** 2 - target) / target
    quad = abs(line_norm2(phi, alpha, spec) - target)
    # T_alpha by quadrature against the coefficient transport at a few points
    f = T_alpha_coeff(phi)
    m = LineMeasure(alpha)
    pts = [_random_point(rng, 1.0) for _ in range(3)]
    transport = max(abs(T_alpha_quad(phi, q, m, spec) - f(q)) for q in pts)
    residual = max(quad, transport) if coef <= 16 * EPS else math.inf
    return CheckResult("isometry", residual, _tol("isometry", tol),
                       {"coefficient": coef, "line_norm": quad, "transport": transport})


SAMPLE_X = (-1.7, -0.4, 0.3, 0.8, 1.5)


def check_inverse_round_trip(alpha: float, nmax: int = 6, seed: int = 0, spec=DEFAULT_SPEC,
                             tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    units = _random_units(rng, 3)
    xs = np.array(SAMPLE_X)
    err, spread = 0.0, 0.0
    for n in range(nmax + 1):
        f = T_alpha_coeff(HermiteExpansion.basis(n, alpha))
        exact = hermite_h(n, xs, alpha)
        vals = [T_inverse_quad(f, xs, u, spec) for u in units]
        for v in vals:
            err = max(err, float(np.max(np.abs(v[:, 0] - exact))), float(np.max(np.abs(v[:, 1:]))))
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                spread = max(spread, float(np.max(np.abs(vals[i] - vals[j]))))
    return CheckResult("inverse_round_trip", max(err, spread), _tol("inverse_round_trip", tol),
                       {"round_trip": err, "unit_spread": spread})


def check_dunkl_intertwining(alpha: float, nmax: int = 6, xs=(0.3, 0.6, 1.0), seed: int = 0,
                             spec=DEFAULT_SPEC, tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    units = _random_units(rng, 3)
    m = LineMeasure(alpha)
    worst = 0.0
    for n in range(nmax + 1):
        psi = HermiteExpansion.basis(n, alpha)
        for x in xs:
            for u in units:
                lhs = T_alpha_dunkl_quad(psi, x, u, m, spec)
                rhs = T_alpha_quad(psi, Quaternion(0.0, *(-x * u.vector)), m, spec)
                worst = max(worst, abs(lhs - rhs))
    return CheckResult("dunkl_intertwining", worst, _tol("dunkl_intertwining", tol),
                       {"cases": (nmax + 1) * len(xs) * len(units)})


def _dyadic_element(rng: np.random.Generator, degree: int, alpha: float):
    from .fock import FockElement

    c = rng.integers(-64, 65, size=(degree + 1, 4)) / 8.0
    return FockElement.from_coeffs(c, alpha)


def check_operator_identities(alphas=ALPHA_GRID, pairs: int = 100, max_degree: int = 10, seed: int = 0,
                              tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = {"adjointness": 0.0, "adjointness_abs": 0.0, "commutator": 0.0, "norm_relation": 0.0}
    for a in alphas:
        for _ in range(pairs):
            f = random_element(rng, int(rng.integers(0, max_degree + 1)), a)
            g = random_element(rng, int(rng.integers(0, max_degree + 1)), a)
            rep = verify_identities(f, g)
            worst["adjointness"] = max(worst["adjointness"], rep.adjointness)
            worst["commutator"] = max(worst["commutator"], rep.commutator)
            worst["norm_relation"] = max(worst["norm_relation"], rep.norm_relation)
            # the second adjoint identity on its own, in absolute terms
            d1 = abs(inner_product(op_D(f), g) - inner_product(f, op_M(g)))
            d2 = abs(inner_product(op_M(g), f) - inner_product(g, op_D(f)))
            worst["adjointness_abs"] = max(worst["adjointness_abs"], d1, d2)
    # classical endpoint: [D, M] = identity with no rounding at all on dyadic data
    exact = 0.0
    for _ in range(20):
        f = _dyadic_element(rng, int(rng.integers(0, max_degree + 1)), -0.5)
        comm = op_D(op_M(f)).series - op_M(op_D(f)).series
        diff = comm - f.series
        exact = max(exact, float(np.max(np.abs(diff.coeffs))))
        exact = max(exact, float(np.max(np.abs(op_A(op_A(f)).coeffs - f.coeffs))))
    worst["classical_commutator"] = exact
    residual = max(worst.values()) if exact == 0.0 else math.inf
    return CheckResult("operator_identities", residual, _tol("operator_identities", tol), worst)


def check_slice_independence(alpha: float, degree: int = 8, units: int = 5, seed: int = 0,
                             spec=DEFAULT_SPEC, tol=None) -> CheckResult:
    rng = np.random.default_rng(seed)
    f = random_element(rng, degree, alpha)
    g = random_element(rng, degree, alpha)
    vals = [fock_inner_quad(f, g, u, spec) for u in _random_units(rng, units)]
    spread = max(abs(vals[i] - vals[j]) for i in range(units) for j in range(i + 1, units))
    coef = inner_product(f, g)
    agree = max(abs(v - coef) for v in vals) / max(1.0, abs(coef))
    return CheckResult("slice_independence", spread, _tol("slice_independence", tol),
                       {"units": units, "vs_coefficient_formula": agree})


# -- suite ----------------------------------------------------------------------

@dataclass
class RunConfig:
    alpha: float = 0.5
    degree: int = 8
    tol: float | None = None
    seed: int = 0
    spec: QuadratureSpec = DEFAULT_SPEC


def suite(cfg: RunConfig):
    """(name, thunk) pairs in report order."""
    a, s, sp, t = cfg.alpha, cfg.seed, cfg.spec, cfg.tol
    n6 = min(6, cfg.degree)
    return [
        ("measure_normalization", lambda: check_measure_normalization(ALPHA_GRID, sp, t)),
        ("moment_lemma", lambda: check_moment_lemma(ALPHA_GRID, 4, sp, t)),
        ("mellin_identity", lambda: check_mellin_identity(sp, t)),
        ("basis_orthonormality", lambda: check_basis_orthonormality(a, cfg.degree, None, sp, t, s)),
        ("reproducing_property", lambda: check_reproducing_property(a, cfg.degree, 50, 2.0, s, t)),
        ("evaluation_bound", lambda: check_evaluation_bound(a, 100, 10, 3.0, s, t)),
        ("generating_function", lambda: check_generating_function(a, 1.5, s, t)),
        ("kernel_orthogonality", lambda: check_kernel_orthogonality(a, 10, s, sp, t)),
        ("isometry", lambda: check_isometry(a, n6, s, sp, t)),
        ("inverse_round_trip", lambda: check_inverse_round_trip(a, n6, s, sp, t)),
        ("dunkl_intertwining", lambda: check_dunkl_intertwining(a, n6, (0.3, 0.6, 1.0), s, sp, t)),
        ("operator_identities", lambda: check_operator_identities(ALPHA_GRID, 100, 10, s, t)),
        ("slice_independence", lambda: check_slice_independence(a, cfg.degree, 5, s, sp, t)),
    ]


def run_check(name: str, thunk, tol: float | None = None) -> CheckResult:
    t0 = time.perf_counter()
    try:
        res = thunk()
    except ConvergenceError as exc:
        res = CheckResult(name, math.inf, _tol(name, tol), {"error": str(exc)})
    res.seconds = time.perf_counter() - t0
    return res


def run_suite(cfg: RunConfig, only=None) -> list[CheckResult]:
    return [run_check(name, thunk, cfg.tol) for name, thunk in suite(cfg) if only is None or name in only]
