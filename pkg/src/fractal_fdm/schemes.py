"""Explicit time stepping for the heat and wave equations on the level-m chain.

Heat uses the forward-Euler step U(k+1) = (I - h L~) U(k); wave uses the
three-term recurrence U(k+1) = (2I - h^2 L~) U(k) - U(k-1), with L~ the
renormalized Laplacian in its positive-semidefinite storage orientation.
Boundary entries are forced to zero after every step (homogeneous
Dirichlet data).  Stability is reported, never enforced: unstable runs
proceed until they overflow to non-finite values, at which point the
solver raises DivergedError carrying the first bad step.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import isfinite
from typing import IO, Iterable

import numpy as np

from .exceptions import DivergedError
from .geometry import GraphApprox, check_level
from .harmonic import BoundaryData, sample_harmonic
from .laplacian import TridiagonalMatrix, apply, max_eigenvalue, renormalized_laplacian

_IC_KINDS = ("zero", "impulse", "harmonic", "parameter_sine", "samples")


@dataclass(frozen=True)
class InitialCondition:
    """Initial data evaluated on the level-m chain, projected to zero at the boundary."""

    kind: str
    index: int | None = None
    a: float = 0.0
    b: float = 0.0
    frequency: float = 1.0
    path: str | None = None

    def __post_init__(self):
        if self.kind not in _IC_KINDS:
            raise ValueError(f"unknown initial-condition kind {self.kind!r}")
        if self.kind == "impulse":
            if self.index is None or self.index < 0:
                raise ValueError("impulse requires a vertex index >= 0")
        if self.kind == "samples" and not self.path:
            raise ValueError("samples requires a file path")
        if self.kind == "parameter_sine" and not isfinite(self.frequency):
            raise ValueError("parameter_sine requires a finite frequency")

    @classmethod
    def zero(cls) -> "InitialCondition":
        return cls(kind="zero")

    @classmethod
    def impulse(cls, index: int) -> "InitialCondition":
        return cls(kind="impulse", index=int(index))

    @classmethod
    def harmonic(cls, a: float, b: float) -> "InitialCondition":
        return cls(kind="harmonic", a=float(a), b=float(b))

    @classmethod
    def parameter_sine(cls, frequency: float) -> "InitialCondition":
        return cls(kind="parameter_sine", frequency=float(frequency))

    @classmethod
    def samples(cls, path: str) -> "InitialCondition":
        return cls(kind="samples", path=str(path))

    @classmethod
    def parse(cls, spec: str) -> "InitialCondition":
        """Parse a CLI descriptor: zero | impulse:J | harmonic:A,B | sine:F | samples:PATH."""
        kind, _, arg = spec.partition(":")
        kind = kind.strip()
        if kind == "zero":
            return cls.zero()
        if kind == "impulse":
            return cls.impulse(int(arg))
        if kind == "harmonic":
            a, b = (float(part) for part in arg.split(","))
            return cls.harmonic(a, b)
        if kind in ("sine", "parameter_sine"):
            return cls.parameter_sine(float(arg))
        if kind == "samples":
            return cls.samples(arg)
        raise ValueError(f"unknown initial-condition descriptor {spec!r}")

    def describe(self) -> str:
        if self.kind == "impulse":
            return f"impulse:{self.index}"
        if self.kind == "harmonic":
            return f"harmonic:{self.a!r},{self.b!r}"
        if self.kind == "parameter_sine":
            return f"sine:{self.frequency!r}"
        if self.kind == "samples":
            return f"samples:{self.path}"
        return "zero"

    def evaluate(self, m: int) -> np.ndarray:
        check_level(m)
        n = 8**m + 1
        if self.kind == "zero":
            u = np.zeros(n)
        elif self.kind == "impulse":
            if self.index >= n:
                raise ValueError(f"impulse index {self.index} out of range for {n} vertices")
            u = np.zeros(n)
            u[self.index] = 1.0
        elif self.kind == "harmonic":
            u = sample_harmonic(BoundaryData(self.a, self.b), m)
        elif self.kind == "parameter_sine":
            params = np.arange(n) / 8.0**m
            u = np.sin(np.pi * self.frequency * params)
        else:
            u = np.loadtxt(self.path, dtype=float).reshape(-1)
            if u.shape != (n,):
                raise ValueError(
                    f"samples file {self.path} has {u.size} values, expected {n}"
                )
        u[0] = 0.0
        u[-1] = 0.0
        return u


@dataclass(frozen=True)
class SchemeConfig:
    """One run: level m, horizon T split into N steps of h = T/N, initial data."""

    m: int
    T: float
    N: int
    initial: InitialCondition
    initial_velocity: InitialCondition = InitialCondition.zero()
    snapshot_steps: tuple[int, ...] | None = None

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ValueError(f"N must be an integer >= 1, got {self.N!r}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.snapshot_steps is not None:
            steps = tuple(sorted({int(s) for s in self.snapshot_steps}))
            for s in steps:
                if not 0 <= s <= self.N:
                    raise ValueError(f"snapshot step {s} outside 0..{self.N}")
            object.__setattr__(self, "snapshot_steps", steps)

    @property
    def h(self) -> float:
        return self.T / self.N

    def resolved_snapshots(self) -> tuple[int, ...]:
        """Requested snapshot steps, always including step 0."""
        steps = self.snapshot_steps if self.snapshot_steps is not None else (0, self.N)
        return tuple(sorted({0, *steps}))


@dataclass(frozen=True, eq=False)
class SolutionSnapshot:
    step: int
    time: float
    values: np.ndarray


@dataclass(frozen=True)
class StabilityReport:
    """Step-to-operator ratio and the spectral non-amplification criterion."""

    scheme: str
    m: int
    h: float
    ratio: float
    spectral_bound: float
    threshold: float
    stable: bool

    def to_json_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "m": self.m,
            "h": self.h,
            "ratio": self.ratio,
            "spectral_bound": self.spectral_bound,
            "threshold": self.threshold,
            "stable": self.stable,
        }


def stability_check(scheme: str, m: int, h: float) -> StabilityReport:
    """Report h*64^m (heat) or h^2*64^m (wave) and the spectral criterion.

    Heat is non-amplifying when h * lambda_max(L~) <= 2, wave when
    h^2 * lambda_max(L~) <= 4.
    """
    if scheme not in ("heat", "wave"):
        raise ValueError(f"scheme must be 'heat' or 'wave', got {scheme!r}")
    if h < 0:
        raise ValueError(f"step size must be nonnegative, got {h}")
    check_level(m)
    lam = max_eigenvalue(renormalized_laplacian(m))
    if scheme == "heat":
        ratio = h * 64.0**m
        spectral = h * lam
        threshold = 2.0
    else:
        ratio = h * h * 64.0**m
        spectral = h * h * lam
        threshold = 4.0
    return StabilityReport(scheme, m, h, ratio, spectral, threshold, spectral <= threshold)


def heat_step_matrix(m: int, h: float) -> TridiagonalMatrix:
    """Forward-Euler step matrix I - h L~: diagonal 1 - h 64^m deg, off-diagonals +h 64^m."""
    check_level(m)
    if h < 0:
        raise ValueError(f"step size must be nonnegative, got {h}")
    lap = renormalized_laplacian(m)
    return TridiagonalMatrix(-h * lap.sub, 1.0 - h * lap.diag, -h * lap.sup)


def wave_step_matrix(m: int, h: float) -> TridiagonalMatrix:
    """Leapfrog step matrix 2I - h^2 L~."""
    check_level(m)
    if h < 0:
        raise ValueError(f"step size must be nonnegative, got {h}")
    lap = renormalized_laplacian(m)
    h2 = h * h
    return TridiagonalMatrix(-h2 * lap.sub, 2.0 - h2 * lap.diag, -h2 * lap.sup)


def _clamp_boundary(u: np.ndarray) -> np.ndarray:
    u[0] = 0.0
    u[-1] = 0.0
    return u


def _freeze(u: np.ndarray) -> np.ndarray:
    out = u.copy()
    out.setflags(write=False)
    return out


def heat_solve(cfg: SchemeConfig) -> list[SolutionSnapshot]:
    """Iterate U(k+1) = A U(k) for k = 0..N-1, re-imposing zero boundary each step."""
    mat = heat_step_matrix(cfg.m, cfg.h)
    u = _clamp_boundary(cfg.initial.evaluate(cfg.m))
    wanted = set(cfg.resolved_snapshots())
    h = cfg.h
    snapshots = [SolutionSnapshot(0, 0.0, _freeze(u))] if 0 in wanted else []
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(1, cfg.N + 1):
            u = _clamp_boundary(apply(mat, u))
            if not np.isfinite(u).all():
                raise DivergedError(step=k)
            if k in wanted:
                snapshots.append(SolutionSnapshot(k, k * h, _freeze(u)))
    return snapshots


def _wave_start(cfg: SchemeConfig) -> tuple[TridiagonalMatrix, np.ndarray, np.ndarray]:
    """Initial pair (U(0), U(1)) via the second-order Taylor start.

    U(1) = U(0) + h V(0) + (h^2 / 2) * Laplacian action; the Laplacian
    action is minus the stored matrix action.
    """
    mat = wave_step_matrix(cfg.m, cfg.h)
    lap = renormalized_laplacian(cfg.m)
    h = cfg.h
    u0 = _clamp_boundary(cfg.initial.evaluate(cfg.m))
    v0 = _clamp_boundary(cfg.initial_velocity.evaluate(cfg.m))
    u1 = _clamp_boundary(u0 + h * v0 - 0.5 * h * h * apply(lap, u0))
    return mat, u0, u1


def wave_solve(cfg: SchemeConfig) -> list[SolutionSnapshot]:
    """Three-term recurrence U(k+1) = A U(k) - U(k-1), zero boundary each step."""
    mat, u_prev, u_cur = _wave_start(cfg)
    wanted = set(cfg.resolved_snapshots())
    h = cfg.h
    snapshots = []
    if 0 in wanted:
        snapshots.append(SolutionSnapshot(0, 0.0, _freeze(u_prev)))
    with np.errstate(over="ignore", invalid="ignore"):
        if not np.isfinite(u_cur).all():
            raise DivergedError(step=1)
        if 1 in wanted and cfg.N >= 1:
            snapshots.append(SolutionSnapshot(1, h, _freeze(u_cur)))
        for k in range(2, cfg.N + 1):
            u_next = _clamp_boundary(apply(mat, u_cur) - u_prev)
            if not np.isfinite(u_next).all():
                raise DivergedError(step=k)
            u_prev, u_cur = u_cur, u_next
            if k in wanted:
                snapshots.append(SolutionSnapshot(k, k * h, _freeze(u_cur)))
    return snapshots


def wave_reversal_error(cfg: SchemeConfig) -> float:
    """Max-norm gap between U(0) and its forward-then-backward image.

    The recurrence is algebraically time-symmetric, so the gap measures
    accumulated rounding only.
    """
    mat, u_prev, u_cur = _wave_start(cfg)
    u0 = u_prev.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        for k in range(2, cfg.N + 1):
            u_next = _clamp_boundary(apply(mat, u_cur) - u_prev)
            if not np.isfinite(u_next).all():
                raise DivergedError(step=k)
            u_prev, u_cur = u_cur, u_next
        # backward sweep: same recurrence with the pair reversed
        b_prev, b_cur = u_cur, u_prev
        for _ in range(cfg.N - 1):
            b_next = _clamp_boundary(apply(mat, b_cur) - b_prev)
            b_prev, b_cur = b_cur, b_next
    return float(np.max(np.abs(b_cur - u0)))


def write_snapshots_csv(
    graph: GraphApprox, snapshots: Iterable[SolutionSnapshot], stream: IO[str]
) -> None:
    """One row per vertex per snapshot: step,time,index,param,x,y,u."""
    stream.write("step,time,index,param,x,y,u\n")
    coords = graph.coords
    scale = 8.0**graph.level
    for snap in snapshots:
        time_repr = repr(float(snap.time))
        values = snap.values
        for i in range(graph.n_vertices):
            stream.write(
                f"{snap.step},{time_repr},{i},{i / scale!r},"
                f"{float(coords[i, 0])!r},{float(coords[i, 1])!r},{float(values[i])!r}\n"
            )


def write_snapshots_json(
    cfg: SchemeConfig,
    scheme: str,
    stability: StabilityReport,
    snapshots: Iterable[SolutionSnapshot],
    stream: IO[str],
    extra: dict | None = None,
) -> None:
    """Snapshots plus run metadata (scheme, m, T, N, h, initial data, stability)."""
    payload = {
        "scheme": scheme,
        "m": cfg.m,
        "T": cfg.T,
        "N": cfg.N,
        "h": cfg.h,
        "initial": cfg.initial.describe(),
        "stability": stability.to_json_dict(),
        "snapshots": [
            {"step": s.step, "time": s.time, "values": s.values.tolist()}
            for s in snapshots
        ],
    }
    if scheme == "wave":
        payload["initial_velocity"] = cfg.initial_velocity.describe()
    if extra:
        payload.update(extra)
    json.dump(payload, stream, indent=2)
    stream.write("\n")
