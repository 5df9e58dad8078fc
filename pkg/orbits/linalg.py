"""
Numerical kernels: centering, thin SVD, numerical rank and multiplicity grouping.

The SVD is a one-sided (Hestenes) Jacobi iteration run on the thinner side
of the matrix, with a fixed cyclic sweep order and a fixed sign convention
so that identical input gives bit-identical output.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .conf import get_setting
from .exceptions import ConvergenceFailure, DimensionMismatch
from .geometry import LabeledImage

logger = logging.getLogger('orbit_shapes')

_EPS = np.finfo(float).eps


@dataclass(frozen=True, eq=False)
class ThinSvd:
    """M = left · diag(singulars) · rightᵀ with s = min(n, k) columns kept."""

    left: np.ndarray
    singulars: np.ndarray
    right: np.ndarray

    @property
    def s(self) -> int:
        return self.singulars.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singulars[np.newaxis, :]) @ self.right.T


@dataclass(frozen=True)
class MultiplicityBlocks:
    """Blocks of numerically equal singular values, largest first.

    ``blocks`` holds (τ_i, m_i) pairs with τ_1 > τ_2 > … > 0; values below the
    rank tolerance are only counted in ``zero_count``.
    """

    blocks: Tuple[Tuple[float, int], ...]
    zero_count: int

    @property
    def values(self) -> Tuple[float, ...]:
        return tuple(value for value, _ in self.blocks)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(count for _, count in self.blocks)

    @property
    def size(self) -> int:
        return sum(self.multiplicities) + self.zero_count

    def expand(self) -> np.ndarray:
        """Block values repeated by multiplicity, zeros appended."""
        values = [value for value, count in self.blocks for _ in range(count)]
        return np.array(values + [0.0] * self.zero_count)


def centroid(image: LabeledImage) -> np.ndarray:
    """Center of gravity (1/n)·Σ y_i."""
    return image.points.mean(axis=0)


def center(image: LabeledImage) -> LabeledImage:
    """Y_norm = (I − (1/n)·1·1ᵀ)·Y, the translate of Y with zero centroid."""
    return LabeledImage(image.points - centroid(image)[np.newaxis, :])


def _complete_columns(basis: np.ndarray, keep: np.ndarray) -> np.ndarray:
    """Replace the columns not in ``keep`` by an orthonormal completion of the kept ones."""
    rows, cols = basis.shape
    kept = basis[:, keep]
    q, _ = np.linalg.qr(np.hstack([kept, np.eye(rows)]))
    fill = q[:, kept.shape[1]:cols]
    completed = basis.copy()
    completed[:, ~keep] = fill
    return completed


def _one_sided_jacobi(a: np.ndarray, max_sweeps: int):
    """Orthogonalize the columns of ``a`` by plane rotations.

    Returns (rotated columns, accumulated rotation, sweeps used). On return
    every column pair satisfies |a_p·a_q| ≤ tol·‖a_p‖·‖a_q‖.
    """
    a = a.copy()
    rows, cols = a.shape
    v = np.eye(cols)
    tol = 8.0 * _EPS * max(rows, 1)
    for sweep in range(1, max_sweeps + 1):
        rotated = False
        for p in range(cols - 1):
            for q in range(p + 1, cols):
                alpha = float(a[:, p] @ a[:, p])
                beta = float(a[:, q] @ a[:, q])
                gamma = float(a[:, p] @ a[:, q])
                if gamma == 0.0 or abs(gamma) <= tol * np.sqrt(alpha * beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                t = 1.0 / (zeta + np.copysign(np.hypot(1.0, zeta), zeta))
                c = 1.0 / np.hypot(1.0, t)
                s = c * t
                ap = a[:, p].copy()
                a[:, p] = c * ap - s * a[:, q]
                a[:, q] = s * ap + c * a[:, q]
                vp = v[:, p].copy()
                v[:, p] = c * vp - s * v[:, q]
                v[:, q] = s * vp + c * v[:, q]
        if not rotated:
            return a, v, sweep
    raise ConvergenceFailure(f"One-sided Jacobi did not converge in {max_sweeps} sweeps")


def thin_svd(matrix, max_sweeps: Optional[int] = None) -> ThinSvd:
    """Thin SVD of a real n×k matrix.

    Singular values come back nonincreasing; each left singular vector has
    its largest-magnitude entry positive (first such entry on ties).
    """
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2:
        raise DimensionMismatch(f"thin_svd expects a matrix, got {m.ndim} axes")
    if not np.all(np.isfinite(m)):
        raise DimensionMismatch("thin_svd expects finite entries")
    if max_sweeps is None:
        max_sweeps = get_setting('MAX_SWEEPS')

    n, k = m.shape
    transposed = n < k
    work = m.T if transposed else m

    a, v, sweeps = _one_sided_jacobi(work, max_sweeps)
    logger.debug(f"thin_svd {n}x{k} converged after {sweeps} sweep(s)")

    sigma = np.linalg.norm(a, axis=0)
    order = np.argsort(-sigma, kind='stable')
    sigma = sigma[order]
    a = a[:, order]
    v = v[:, order]

    nonzero = sigma > 0
    u = np.zeros_like(a)
    u[:, nonzero] = a[:, nonzero] / sigma[nonzero][np.newaxis, :]
    if not np.all(nonzero):
        u = _complete_columns(u, nonzero)

    left, right = (v, u) if transposed else (u, v)

    for j in range(left.shape[1]):
        pivot = int(np.argmax(np.abs(left[:, j])))
        if left[pivot, j] < 0:
            left[:, j] = -left[:, j]
            right[:, j] = -right[:, j]

    for array in (left, sigma, right):
        array.setflags(write=False)
    return ThinSvd(left=left, singulars=sigma, right=right)


def numerical_rank(singulars: Sequence[float], tol_rank_rel: Optional[float] = None) -> int:
    """Count of σ_i > tol·σ_1 (0 when σ_1 = 0)."""
    if tol_rank_rel is None:
        tol_rank_rel = get_setting('TOL_RANK')
    values = np.asarray(singulars, dtype=float)
    if values.size == 0 or values[0] <= 0:
        return 0
    return int(np.count_nonzero(values > tol_rank_rel * values[0]))


def group_multiplicities(singulars: Sequence[float], tol_group_rel: Optional[float] = None,
                         tol_rank_rel: Optional[float] = None) -> MultiplicityBlocks:
    """Greedy left-to-right grouping of numerically equal singular values.

    A value joins the open block iff it is within tol_group_rel·σ_1 of the
    block's first member; the block value is the mean of its members.
    """
    if tol_group_rel is None:
        tol_group_rel = get_setting('TOL_GROUP')
    values = np.asarray(singulars, dtype=float)
    rank = numerical_rank(values, tol_rank_rel)
    nonzero = values[:rank]
    if rank == 0:
        return MultiplicityBlocks(blocks=(), zero_count=int(values.size))

    width = tol_group_rel * values[0]
    blocks = []
    members = [nonzero[0]]
    for value in nonzero[1:]:
        if abs(value - members[0]) <= width:
            members.append(value)
        else:
            blocks.append((float(np.mean(members)), len(members)))
            members = [value]
    blocks.append((float(np.mean(members)), len(members)))
    return MultiplicityBlocks(blocks=tuple(blocks), zero_count=int(values.size - rank))
