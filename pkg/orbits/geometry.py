"""
Group elements of G ⊆ GL(k)⋉R^k and their actions.

An element is a pair (A, u) acting on points by x ↦ A·x + u. Images are
n×k matrices whose rows are labeled points; the group acts on the left,
row by row, so act_on_image(g, Y) = Y·Aᵀ + 1_n·uᵀ.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .conf import get_setting
from .exceptions import DimensionMismatch, NotOrthogonal, SingularLinearPart


def _frozen(array) -> np.ndarray:
    array = np.array(array, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class LabeledImage:
    """An ordered n×k matrix of labeled point coordinates (row i = point i)."""

    points: np.ndarray

    def __post_init__(self):
        points = _frozen(self.points)
        if points.ndim != 2:
            raise DimensionMismatch(f"An image is an n×k matrix, got {points.ndim} axes")
        if points.shape[0] < 1 or points.shape[1] < 1:
            raise DimensionMismatch(f"An image needs n ≥ 1 and k ≥ 1, got shape {points.shape}")
        if not np.all(np.isfinite(points)):
            raise DimensionMismatch("Image coordinates must be finite")
        object.__setattr__(self, 'points', points)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> 'LabeledImage':
        return cls(np.asarray(rows, dtype=float))

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def k(self) -> int:
        return self.points.shape[1]

    def scaled(self, factor: float) -> 'LabeledImage':
        return LabeledImage(factor * self.points)

    def tolist(self):
        return self.points.tolist()


@dataclass(frozen=True, eq=False)
class AffineElement:
    """(A, u) in GL(k)⋉R^k."""

    linear: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        linear = _frozen(self.linear)
        translation = _frozen(self.translation).reshape(-1)
        if linear.ndim != 2 or linear.shape[0] != linear.shape[1]:
            raise DimensionMismatch(f"Linear part must be square, got shape {linear.shape}")
        if translation.shape[0] != linear.shape[0]:
            raise DimensionMismatch(
                f"Translation has {translation.shape[0]} entries, linear part is {linear.shape[0]}×{linear.shape[0]}"
            )
        _check_invertible(linear)
        object.__setattr__(self, 'linear', linear)
        object.__setattr__(self, 'translation', translation)

    @property
    def k(self) -> int:
        return self.linear.shape[0]

    def is_motion(self, tol_orth: Optional[float] = None) -> bool:
        return _orthogonality_defect(self.linear) <= _tol_orth(tol_orth)


@dataclass(frozen=True, eq=False)
class MotionElement(AffineElement):
    """(R, u) in O(k)⋉R^k. ``proper`` is true iff det R = +1."""

    def __post_init__(self):
        super().__post_init__()
        tol = _tol_orth(None)
        defect = _orthogonality_defect(self.linear)
        if defect > tol:
            raise NotOrthogonal(f"Linear part is not orthogonal (‖RᵀR − I‖ = {defect:.3e})")
        det = float(np.linalg.det(self.linear))
        if abs(abs(det) - 1.0) > tol:
            raise NotOrthogonal(f"Orthogonal matrix has determinant {det!r}, expected ±1")

    @property
    def rotation(self) -> np.ndarray:
        return self.linear

    @property
    def proper(self) -> bool:
        return bool(np.linalg.det(self.linear) > 0)


def _tol_orth(tol_orth: Optional[float]) -> float:
    return get_setting('TOL_ORTH') if tol_orth is None else tol_orth


def _orthogonality_defect(matrix: np.ndarray) -> float:
    k = matrix.shape[0]
    return float(np.linalg.norm(matrix.T @ matrix - np.eye(k)))


def _check_invertible(linear: np.ndarray) -> None:
    singular_values = np.linalg.svd(linear, compute_uv=False)
    tol_rank = get_setting('TOL_RANK')
    if singular_values[0] == 0 or singular_values[-1] <= tol_rank * singular_values[0]:
        raise SingularLinearPart(
            f"Linear part is singular (condition number ≥ {1.0 / tol_rank:.0e})"
        )


def _as_motion_if_possible(linear: np.ndarray, translation: np.ndarray, motion: bool) -> AffineElement:
    if motion:
        return MotionElement(linear, translation)
    return AffineElement(linear, translation)


def identity(k: int) -> MotionElement:
    return MotionElement(np.eye(k), np.zeros(k))


def compose(g1: AffineElement, g2: AffineElement) -> AffineElement:
    """(A, u) ∘ (B, w) = (A·B, A·w + u). Two motions compose to a motion."""
    if g1.k != g2.k:
        raise DimensionMismatch(f"Cannot compose elements of dimension {g1.k} and {g2.k}")
    linear = g1.linear @ g2.linear
    translation = g1.linear @ g2.translation + g1.translation
    both_motions = isinstance(g1, MotionElement) and isinstance(g2, MotionElement)
    return _as_motion_if_possible(linear, translation, both_motions)


def inverse(g: AffineElement) -> AffineElement:
    """(A, u)⁻¹ = (A⁻¹, −A⁻¹·u); for motions A⁻¹ = Aᵀ."""
    _check_invertible(g.linear)
    if isinstance(g, MotionElement):
        linear_inv = g.linear.T.copy()
    else:
        linear_inv = np.linalg.inv(g.linear)
    return _as_motion_if_possible(linear_inv, -linear_inv @ g.translation, isinstance(g, MotionElement))


def apply_to_point(g: AffineElement, x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.shape[0] != g.k:
        raise DimensionMismatch(f"Point has {x.shape[0]} coordinates, element acts on R^{g.k}")
    return g.linear @ x + g.translation


def act_on_image(g: AffineElement, image: LabeledImage) -> LabeledImage:
    """Map every labeled point by g, keeping row order."""
    if image.k != g.k:
        raise DimensionMismatch(f"Image lives in R^{image.k}, element acts on R^{g.k}")
    return LabeledImage(image.points @ g.linear.T + g.translation[np.newaxis, :])


def embed_homogeneous(g: AffineElement) -> np.ndarray:
    """The (k+1)×(k+1) matrix [[A, u], [0ᵀ, 1]]."""
    k = g.k
    matrix = np.zeros((k + 1, k + 1))
    matrix[:k, :k] = g.linear
    matrix[:k, k] = g.translation
    matrix[k, k] = 1.0
    return matrix


def random_orthogonal(k: int, rng: np.random.Generator, proper: bool = False) -> np.ndarray:
    """Haar-distributed element of O(k) (or SO(k) when ``proper``)."""
    q, r = np.linalg.qr(rng.standard_normal((k, k)))
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    q = q * signs[np.newaxis, :]
    if proper and np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def random_motion(k: int, rng: np.random.Generator, proper: bool = False,
                  translation_scale: float = 10.0) -> MotionElement:
    """Haar rotation/reflection with a translation of norm at most ``translation_scale``."""
    rotation = random_orthogonal(k, rng, proper=proper)
    direction = rng.standard_normal(k)
    norm = np.linalg.norm(direction)
    if norm > 0:
        direction /= norm
    translation = direction * translation_scale * rng.uniform(0.0, 1.0)
    return MotionElement(rotation, translation)


def reflection(k: int, axis: int = 0) -> MotionElement:
    """The mirror x_axis ↦ −x_axis."""
    linear = np.eye(k)
    linear[axis, axis] = -1.0
    return MotionElement(linear, np.zeros(k))
