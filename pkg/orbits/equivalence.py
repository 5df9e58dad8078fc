"""
Equivalence tests, alignment and metrics on the space of orbits.
"""

import enum
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .conf import get_setting
from .exceptions import DegenerateImage, ShapeMismatch
from .geometry import LabeledImage, MotionElement, act_on_image
from .invariants import (
    Scheme,
    default_scheme,
    ellipsoid_spectrum,
    gram_invariant,
    similarity_normalize,
)
from .linalg import center, centroid, thin_svd

logger = logging.getLogger('orbit_shapes')


class Group(enum.Enum):
    MOTION = 'motion'
    PROPER_MOTION = 'proper'
    SIMILARITY = 'similarity'

    @classmethod
    def parse(cls, value) -> 'Group':
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.value, member.name):
                return member
        raise ValueError(f"Unknown group: {value!r}")


class Metric(enum.Enum):
    GRAM_FROBENIUS = 'gram'
    PROCRUSTES = 'procrustes'

    @classmethod
    def parse(cls, value) -> 'Metric':
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.value, member.name):
                return member
        raise ValueError(f"Unknown metric: {value!r}")


def default_group() -> Group:
    return Group.parse(get_setting('DEFAULT_GROUP'))


@dataclass(frozen=True, eq=False)
class AlignmentResult:
    """g = (Q, u) and scale c minimizing ‖c·Y1·Qᵀ + 1·uᵀ − Y2‖_F."""

    transform: MotionElement
    residual: float
    group_tag: Group
    scale: float = 1.0

    def apply(self, image: LabeledImage) -> LabeledImage:
        return act_on_image(self.transform, image.scaled(self.scale))


@dataclass(frozen=True)
class OrbitDistance:
    value: float
    kind: Metric
    group_tag: Group


def _require_same_shape(y1: LabeledImage, y2: LabeledImage, same_k: bool = True) -> None:
    if y1.n != y2.n:
        raise ShapeMismatch(f"Images have different point counts: n={y1.n} vs n={y2.n}")
    if same_k and y1.k != y2.k:
        raise ShapeMismatch(f"Images live in different dimensions: k={y1.k} vs k={y2.k}")


def _tol_eq(tol_eq: Optional[float]) -> float:
    return get_setting('TOL_EQ') if tol_eq is None else tol_eq


def _relative_gap(g1: np.ndarray, g2: np.ndarray) -> float:
    return float(np.linalg.norm(g1 - g2) / (1.0 + np.linalg.norm(g1)))


def motion_equivalent(y1: LabeledImage, y2: LabeledImage, tol_eq: Optional[float] = None) -> bool:
    """Same orbit under O(k)⋉R^k: Gram invariants agree in relative Frobenius norm."""
    _require_same_shape(y1, y2)
    gap = _relative_gap(gram_invariant(y1).gram, gram_invariant(y2).gram)
    verdict = gap <= _tol_eq(tol_eq)
    logger.debug(f"motion_equivalent gap={gap:.3e} verdict={verdict}")
    return verdict


def proper_motion_equivalent(y1: LabeledImage, y2: LabeledImage, tol_eq: Optional[float] = None,
                             tol_rank_rel: Optional[float] = None) -> bool:
    """Same orbit under SO(k)⋉R^k.

    Below full rank a reflection can be undone by a rotation fixing the
    span of the configuration, so only full-rank images can fail here.
    """
    if not motion_equivalent(y1, y2, tol_eq):
        return False
    if ellipsoid_spectrum(y1, tol_rank_rel=tol_rank_rel).rank < y1.k:
        return True
    alignment = align(y1, y2, Group.MOTION)
    return alignment.transform.proper


def similarity_equivalent(y1: LabeledImage, y2: LabeledImage, scheme=None,
                          tol_eq: Optional[float] = None) -> bool:
    """Same orbit under motions composed with positive scalings."""
    _require_same_shape(y1, y2)
    scheme = default_scheme() if scheme is None else Scheme.parse(scheme)
    n1 = similarity_normalize(gram_invariant(y1), scheme).normalized_gram.gram
    n2 = similarity_normalize(gram_invariant(y2), scheme).normalized_gram.gram
    gap = _relative_gap(n1, n2)
    verdict = gap <= _tol_eq(tol_eq)
    logger.debug(f"similarity_equivalent scheme={scheme.value} gap={gap:.3e} verdict={verdict}")
    return verdict


def align(y1: LabeledImage, y2: LabeledImage, group_tag=None) -> AlignmentResult:
    """Closed-form orthogonal Procrustes alignment of Y1 onto Y2."""
    group_tag = default_group() if group_tag is None else Group.parse(group_tag)
    _require_same_shape(y1, y2)

    x1 = center(y1).points
    x2 = center(y2).points
    svd = thin_svd(x1.T @ x2)
    u_m = np.array(svd.left)
    v_m = np.array(svd.right)
    weights = np.array(svd.singulars)

    rotation = v_m @ u_m.T
    if group_tag is Group.PROPER_MOTION and np.linalg.det(rotation) < 0:
        v_m[:, -1] = -v_m[:, -1]
        weights[-1] = -weights[-1]
        rotation = v_m @ u_m.T

    scale = 1.0
    if group_tag is Group.SIMILARITY:
        spread = float(np.sum(x1 * x1))
        if spread == 0.0 or ellipsoid_spectrum(y1).rank == 0:
            raise DegenerateImage("Cannot scale-align an image whose points all coincide")
        scale = float(np.sum(weights)) / spread
        if scale <= 0.0:
            # Uncorrelated images have no positive optimum; the infimum sits at scale 0.
            scale = 0.0

    translation = centroid(y2) - scale * rotation @ centroid(y1)
    transform = MotionElement(rotation, translation)
    moved = act_on_image(transform, y1.scaled(scale))
    residual = float(np.linalg.norm(moved.points - y2.points))
    logger.debug(f"align group={group_tag.value} scale={scale!r} residual={residual:.3e}")
    return AlignmentResult(transform=transform, residual=residual, group_tag=group_tag, scale=scale)


def orbit_distance_gram(y1: LabeledImage, y2: LabeledImage, group_tag=None, scheme=None) -> OrbitDistance:
    """‖A_{Y1} − A_{Y2}‖_F; for the similarity group the normalized invariants are compared."""
    group_tag = Group.MOTION if group_tag is None else Group.parse(group_tag)
    _require_same_shape(y1, y2, same_k=False)
    g1 = gram_invariant(y1)
    g2 = gram_invariant(y2)
    if group_tag is Group.SIMILARITY:
        g1 = similarity_normalize(g1, scheme).normalized_gram
        g2 = similarity_normalize(g2, scheme).normalized_gram
    value = float(np.linalg.norm(g1.gram - g2.gram))
    return OrbitDistance(value=value, kind=Metric.GRAM_FROBENIUS, group_tag=group_tag)


def orbit_distance_procrustes(y1: LabeledImage, y2: LabeledImage, group_tag=None) -> OrbitDistance:
    """Residual of the optimal alignment of Y1 onto Y2."""
    group_tag = default_group() if group_tag is None else Group.parse(group_tag)
    result = align(y1, y2, group_tag)
    return OrbitDistance(value=result.residual, kind=Metric.PROCRUSTES, group_tag=group_tag)


def orbit_distance(y1: LabeledImage, y2: LabeledImage, metric=Metric.GRAM_FROBENIUS,
                   group_tag=None, scheme=None) -> OrbitDistance:
    metric = Metric.parse(metric)
    group_tag = default_group() if group_tag is None else Group.parse(group_tag)
    if metric is Metric.PROCRUSTES:
        return orbit_distance_procrustes(y1, y2, group_tag)
    if group_tag is Group.PROPER_MOTION:
        # Gram matrices cannot see orientation; fall back to the motion metric.
        group_tag = Group.MOTION
    return orbit_distance_gram(y1, y2, group_tag, scheme)


def distance_matrix(images: Sequence[LabeledImage], metric=Metric.GRAM_FROBENIUS, group_tag=None,
                    scheme=None, workers: Optional[int] = None) -> np.ndarray:
    """m×m matrix of orbit distances, pairs evaluated concurrently and placed by index.

    The Gram metric is symmetric, so only i < j is computed. The Procrustes
    residual is computed in both directions and symmetrized by the maximum.
    """
    if workers is None:
        workers = get_setting('DIST_MATRIX_WORKERS')
    metric = Metric.parse(metric)
    m = len(images)
    for index, image in enumerate(images[1:], start=1):
        if image.n != images[0].n:
            raise ShapeMismatch(f"Image {index} has n={image.n}, image 0 has n={images[0].n}")
    pairs: List[tuple] = [(i, j) for i in range(m) for j in range(i + 1, m)]

    def evaluate(pair):
        i, j = pair
        forward = orbit_distance(images[i], images[j], metric, group_tag, scheme).value
        if metric is Metric.PROCRUSTES:
            backward = orbit_distance(images[j], images[i], metric, group_tag, scheme).value
            forward = max(forward, backward)
        return forward

    matrix = np.zeros((m, m))
    if pairs:
        with ThreadPoolExecutor(max_workers=max(1, workers)) as executor:
            values = list(executor.map(evaluate, pairs))
        for (i, j), value in zip(pairs, values):
            matrix[i, j] = matrix[j, i] = value
    logger.info(f"distance_matrix m={m} metric={metric.value} pairs={len(pairs)}")
    return matrix
