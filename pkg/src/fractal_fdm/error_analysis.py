"""Step-error bounds for Hölder data and the Dirichlet discretization benchmark.

The bounds are the geometric-series estimates 64^m h C / (1 - 4^-alpha)
for the heat step and 64^m h^2 C / (1 - 4^-alpha) for the wave step.

The benchmark solves (L~ + q I) u = q u_exact with u_exact harmonic and
the boundary rows pinned; the chain discretization is exact for harmonic
data, so whatever error remains is the linear solver's.  Thomas
elimination alone leaves a residual of order 64^m * eps, which is why the
solver adds compensated iterative refinement: the off-diagonals and the
2 * 64^m part of the diagonal are powers of two, so every large product
is exact and fsum cancels the 64^m-scale terms without rounding.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, isfinite

import numpy as np

from .harmonic import BoundaryData, sample_harmonic
from .laplacian import TridiagonalMatrix


@dataclass(frozen=True)
class HolderParams:
    """Hölder exponent alpha and (constant-in-time) Hölder constant c."""

    alpha: float
    c: float

    def __post_init__(self):
        if not (isfinite(self.alpha) and self.alpha >= 0):
            raise ValueError(f"alpha must be a finite real >= 0, got {self.alpha}")
        if not (isfinite(self.c) and self.c > 0):
            raise ValueError(f"c must be a finite real > 0, got {self.c}")


def _holder_bound(params: HolderParams, m: int, step_factor: float) -> float:
    if params.alpha <= 0:
        raise ValueError("alpha must be positive: the geometric series diverges at alpha = 0")
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)) or m < 0:
        raise ValueError(f"level must be an integer >= 0, got {m!r}")
    return 64.0**m * step_factor * params.c / (1.0 - 4.0 ** (-params.alpha))


def heat_holder_bound(params: HolderParams, m: int, h: float) -> float:
    """Per-step increment bound 64^m h c / (1 - 4^-alpha) for the heat scheme."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    return _holder_bound(params, m, h)


def wave_holder_bound(params: HolderParams, m: int, h: float) -> float:
    """Second-difference bound 64^m h^2 c / (1 - 4^-alpha) for the wave scheme."""
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    return _holder_bound(params, m, h * h)


@dataclass(frozen=True)
class DirichletProblem:
    """Reaction problem (L~ + q I) u = q u_exact with harmonic exact solution."""

    m: int
    boundary_data: BoundaryData
    q: float = 2.0

    def __post_init__(self):
        if not (isfinite(self.q) and self.q > 0):
            raise ValueError(f"q must be a finite real > 0, got {self.q}")


def _system(problem: DirichletProblem) -> tuple[TridiagonalMatrix, np.ndarray, np.ndarray]:
    exact = sample_harmonic(problem.boundary_data, problem.m)
    n = exact.size
    scale = 64.0**problem.m
    q = problem.q
    diag = np.full(n, 2.0 * scale + q)
    sub = np.full(n - 1, -scale)
    sup = np.full(n - 1, -scale)
    # boundary rows pinned to identity so u(P0) = a, u(P1) = b
    diag[0] = diag[-1] = 1.0
    sup[0] = 0.0
    sub[-1] = 0.0
    rhs = q * exact
    rhs[0] = problem.boundary_data.a
    rhs[-1] = problem.boundary_data.b
    return TridiagonalMatrix(sub, diag, sup), rhs, exact


def _thomas(mat: TridiagonalMatrix, rhs: np.ndarray) -> np.ndarray:
    """Forward elimination, back substitution; scalar loops on Python floats."""
    sub = mat.sub.tolist()
    diag = mat.diag.tolist()
    sup = mat.sup.tolist()
    d = np.asarray(rhs, dtype=float).tolist()
    n = len(diag)
    cp = [0.0] * max(n - 1, 0)
    dp = [0.0] * n
    pivot = diag[0]
    if pivot == 0.0:
        raise RuntimeError("singular tridiagonal system (internal error: q > 0 forbids this)")
    if n > 1:
        cp[0] = sup[0] / pivot
    dp[0] = d[0] / pivot
    for i in range(1, n):
        pivot = diag[i] - sub[i - 1] * cp[i - 1]
        if pivot == 0.0:
            raise RuntimeError("singular tridiagonal system (internal error: q > 0 forbids this)")
        if i < n - 1:
            cp[i] = sup[i] / pivot
        dp[i] = (d[i] - sub[i - 1] * dp[i - 1]) / pivot
    for i in range(n - 2, -1, -1):
        dp[i] = dp[i] - cp[i] * dp[i + 1]
    return np.asarray(dp)


def _compensated_residual(
    scale: float, q: float, rhs: np.ndarray, u: np.ndarray
) -> np.ndarray:
    """Residual rhs - A u with the 64^m-scale cancellation done exactly.

    scale and 2*scale are powers of two, so each large product is exact;
    fsum removes the summation rounding.
    """
    n = u.size
    ul = u.tolist()
    rl = np.asarray(rhs, dtype=float).tolist()
    r = [0.0] * n
    r[0] = rl[0] - ul[0]
    r[-1] = rl[-1] - ul[-1]
    two_scale = 2.0 * scale
    for i in range(1, n - 1):
        r[i] = fsum(
            (rl[i], scale * ul[i - 1], -two_scale * ul[i], -q * ul[i], scale * ul[i + 1])
        )
    return np.asarray(r)


_MAX_REFINEMENT_ROUNDS = 4


def _solve_refined(
    mat: TridiagonalMatrix, rhs: np.ndarray, scale: float, q: float
) -> np.ndarray:
    u = _thomas(mat, rhs)
    best = u
    best_norm = float(np.max(np.abs(_compensated_residual(scale, q, rhs, u))))
    for _ in range(_MAX_REFINEMENT_ROUNDS):
        if best_norm == 0.0:
            break
        correction = _thomas(mat, _compensated_residual(scale, q, rhs, best))
        candidate = best + correction
        norm = float(np.max(np.abs(_compensated_residual(scale, q, rhs, candidate))))
        if norm >= best_norm:
            break
        best, best_norm = candidate, norm
    return best


def solve_dirichlet(problem: DirichletProblem) -> np.ndarray:
    """Solve (L~ + q I) u = q u_exact with pinned boundary rows."""
    mat, rhs, _ = _system(problem)
    return _solve_refined(mat, rhs, 64.0**problem.m, problem.q)


def dirichlet_error(problem: DirichletProblem) -> float:
    """Max-norm gap between the discrete solution and the exact harmonic sample."""
    mat, rhs, exact = _system(problem)
    u = _solve_refined(mat, rhs, 64.0**problem.m, problem.q)
    return float(np.max(np.abs(u - exact)))


@dataclass(frozen=True)
class DirichletReport:
    m: int
    q: float
    a: float
    b: float
    error: float
    residual: float
    solver: str = "tridiagonal-direct"

    def to_json_dict(self) -> dict:
        return {
            "m": self.m,
            "q": self.q,
            "boundary": [self.a, self.b],
            "E_m": self.error,
            "residual": self.residual,
            "solver": self.solver,
        }


def dirichlet_report(problem: DirichletProblem) -> DirichletReport:
    """Solve once and report both the benchmark error and the solver residual."""
    mat, rhs, exact = _system(problem)
    scale = 64.0**problem.m
    u = _solve_refined(mat, rhs, scale, problem.q)
    residual = float(np.max(np.abs(_compensated_residual(scale, problem.q, rhs, u))))
    return DirichletReport(
        m=problem.m,
        q=problem.q,
        a=problem.boundary_data.a,
        b=problem.boundary_data.b,
        error=float(np.max(np.abs(u - exact))),
        residual=residual,
    )
