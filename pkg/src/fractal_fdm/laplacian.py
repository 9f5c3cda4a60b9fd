"""Tridiagonal graph Laplacians for the level-m vertex chain.

Matrices are stored in the positive-semidefinite orientation: diagonal
equal to the vertex degree, off-diagonals -1 (times 64^m for the
renormalized operator).  The differential action of the Laplacian at a
vertex is the negative of this matrix action; the time-stepping code
accounts for the sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

from .geometry import check_level


@dataclass(frozen=True, eq=False)
class TridiagonalMatrix:
    """Three-diagonal storage: sub and sup of length n-1, diag of length n."""

    sub: np.ndarray
    diag: np.ndarray
    sup: np.ndarray

    def __post_init__(self):
        sub = np.asarray(self.sub, dtype=float)
        diag = np.asarray(self.diag, dtype=float)
        sup = np.asarray(self.sup, dtype=float)
        if diag.ndim != 1 or diag.size < 1:
            raise ValueError("diagonal must be a nonempty 1-d array")
        if sub.shape != (diag.size - 1,) or sup.shape != (diag.size - 1,):
            raise ValueError(
                f"off-diagonals must have length {diag.size - 1}, "
                f"got {sub.shape} and {sup.shape}"
            )
        for name, arr in (("sub", sub), ("diag", diag), ("sup", sup)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return self.diag.size

    @property
    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.sub, self.sup))

    def to_dense(self) -> np.ndarray:
        dense = np.diag(self.diag)
        if self.n > 1:
            dense += np.diag(self.sub, -1) + np.diag(self.sup, 1)
        return dense


def laplacian_matrix(m: int) -> TridiagonalMatrix:
    """Chain Laplacian of level m: diagonal (1, 2, ..., 2, 1), off-diagonals -1."""
    check_level(m)
    n = 8**m + 1
    diag = np.full(n, 2.0)
    diag[0] = diag[-1] = 1.0
    off = np.full(n - 1, -1.0)
    return TridiagonalMatrix(off, diag, off)


def renormalized_laplacian(m: int) -> TridiagonalMatrix:
    """64^m times the level-m Laplacian; entries are exact integers for m <= 8."""
    check_level(m)
    factor = 64.0**m
    base = laplacian_matrix(m)
    return TridiagonalMatrix(factor * base.sub, factor * base.diag, factor * base.sup)


def apply(mat: TridiagonalMatrix, v) -> np.ndarray:
    """Matrix-vector product in O(n)."""
    v = np.asarray(v, dtype=float)
    if v.shape != (mat.n,):
        raise ValueError(f"vector length must be {mat.n}, got shape {v.shape}")
    out = mat.diag * v
    if mat.n > 1:
        out[1:] += mat.sub * v[:-1]
        out[:-1] += mat.sup * v[1:]
    return out


def max_eigenvalue(mat: TridiagonalMatrix, tol: float = 1e-10) -> float:
    """Largest eigenvalue of a symmetric tridiagonal matrix.

    Bisection on the characteristic recurrence (LAPACK stebz); the result
    is accurate to machine precision, which satisfies any tol >= 2^-52.
    """
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if not mat.is_symmetric:
        raise ValueError("matrix must be symmetric (sub == sup)")
    if mat.n == 1:
        return float(mat.diag[0])
    gershgorin = float(np.max(np.abs(mat.diag)) + 2.0 * np.max(np.abs(mat.sub)))
    try:
        lam = eigvalsh_tridiagonal(
            mat.diag,
            mat.sub,
            select="i",
            select_range=(mat.n - 1, mat.n - 1),
            tol=tol * gershgorin,
        )
    except np.linalg.LinAlgError as exc:
        raise RuntimeError(f"eigenvalue bisection did not converge: {exc}") from exc
    return float(lam[0])


def write_matrix_csv(mat: TridiagonalMatrix, stream: IO[str]) -> None:
    """Dense rows for n <= 100, otherwise a sparse row,col,value listing."""
    n = mat.n
    if n <= 100:
        dense = mat.to_dense()
        for row in dense:
            stream.write(",".join(repr(float(v)) for v in row) + "\n")
        return
    stream.write("row,col,value\n")
    for r in range(n):
        if r > 0:
            stream.write(f"{r},{r - 1},{float(mat.sub[r - 1])!r}\n")
        stream.write(f"{r},{r},{float(mat.diag[r])!r}\n")
        if r < n - 1:
            stream.write(f"{r},{r + 1},{float(mat.sup[r])!r}\n")
