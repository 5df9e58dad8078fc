"""
Brute-force verifiers that share no code path with the SVD-based routines.

Used by the test-suite and by ``manage.py orbits selftest``.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conf import get_setting
from .exceptions import ConvergenceFailure, InvalidGridSpec, NotSymmetric, ShapeMismatch, UnsupportedDimension
from .geometry import LabeledImage

logger = logging.getLogger('orbit_shapes')

_CHUNK = 4096


@dataclass(frozen=True)
class GridSpec:
    """Search grid: ``angle_count`` uniform angles for k=2, ``sample_count`` random rotations for k=3."""

    angle_count: int = 100_000
    include_reflections: bool = True
    sample_count: int = 20_000
    seed: int = 0

    def __post_init__(self):
        if self.angle_count < 4:
            raise InvalidGridSpec(f"angle_count must be at least 4, got {self.angle_count}")
        if self.sample_count < 1:
            raise InvalidGridSpec(f"sample_count must be at least 1, got {self.sample_count}")


def _planar_rotations(angle_count: int) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(angle_count) / angle_count
    c, s = np.cos(theta), np.sin(theta)
    return np.stack([np.stack([c, -s], axis=-1), np.stack([s, c], axis=-1)], axis=-2)


def _quaternion_rotations(sample_count: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    q = rng.standard_normal((sample_count, 4))
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    w, x, y, z = q.T
    rotations = np.empty((sample_count, 3, 3))
    rotations[:, 0, 0] = 1 - 2 * (y * y + z * z)
    rotations[:, 0, 1] = 2 * (x * y - w * z)
    rotations[:, 0, 2] = 2 * (x * z + w * y)
    rotations[:, 1, 0] = 2 * (x * y + w * z)
    rotations[:, 1, 1] = 1 - 2 * (x * x + z * z)
    rotations[:, 1, 2] = 2 * (y * z - w * x)
    rotations[:, 2, 0] = 2 * (x * z - w * y)
    rotations[:, 2, 1] = 2 * (y * z + w * x)
    rotations[:, 2, 2] = 1 - 2 * (x * x + y * y)
    return np.concatenate([np.eye(3)[np.newaxis], rotations])


def _min_residual(x1: np.ndarray, x2: np.ndarray, rotations: np.ndarray) -> float:
    best = np.inf
    for start in range(0, rotations.shape[0], _CHUNK):
        block = rotations[start:start + _CHUNK]
        moved = np.einsum('nj,aij->ani', x1, block)
        residuals = np.sqrt(np.sum((moved - x2[np.newaxis]) ** 2, axis=(1, 2)))
        best = min(best, float(residuals.min()))
    return best


def brute_force_min_residual(y1: LabeledImage, y2: LabeledImage, spec: Optional[GridSpec] = None) -> float:
    """min over the grid of ‖center(Y1)·Rᵀ − center(Y2)‖_F (an upper bound on the Procrustes distance)."""
    spec = GridSpec() if spec is None else spec
    if y1.n != y2.n or y1.k != y2.k:
        raise ShapeMismatch(f"Images differ in shape: {y1.points.shape} vs {y2.points.shape}")
    k = y1.k
    if k == 2:
        rotations = _planar_rotations(spec.angle_count)
    elif k == 3:
        rotations = _quaternion_rotations(spec.sample_count, spec.seed)
    else:
        raise UnsupportedDimension(f"Brute-force search covers k=2 and k=3 only, got k={k}")
    if spec.include_reflections:
        mirror = np.eye(k)
        mirror[0, 0] = -1.0
        rotations = np.concatenate([rotations, rotations @ mirror])

    x1 = y1.points - y1.points.mean(axis=0)
    x2 = y2.points - y2.points.mean(axis=0)
    best = _min_residual(x1, x2, rotations)
    logger.debug(f"brute_force_min_residual k={k} candidates={rotations.shape[0]} best={best:.6e}")
    return best


def jacobi_eigenvalues(matrix, max_sweeps: Optional[int] = None) -> np.ndarray:
    """Eigenvalues of a symmetric matrix by classical cyclic Jacobi, nonincreasing."""
    if max_sweeps is None:
        max_sweeps = get_setting('MAX_SWEEPS')
    a = np.array(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotSymmetric(f"Expected a square matrix, got shape {a.shape}")
    scale = float(np.linalg.norm(a))
    if np.linalg.norm(a - a.T) > 1e-12 * (1.0 + scale):
        raise NotSymmetric("Matrix is not symmetric within 1e-12")
    a = 0.5 * (a + a.T)
    size = a.shape[0]
    threshold = np.finfo(float).eps * scale

    for sweep in range(max_sweeps):
        if _off_diagonal(a) <= threshold:
            break
        for p in range(size - 1):
            for q in range(p + 1, size):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                app, aqq = a[p, p], a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                t = np.copysign(1.0, theta) / (abs(theta) + np.hypot(1.0, theta))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                a[p, :] = a[:, p]
                a[q, :] = a[:, q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = a[q, p] = 0.0
    else:
        if _off_diagonal(a) > threshold:
            raise ConvergenceFailure(f"Cyclic Jacobi did not converge in {max_sweeps} sweeps")
    return np.sort(np.diag(a))[::-1]


def _off_diagonal(a: np.ndarray) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))
