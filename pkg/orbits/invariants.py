"""
Invariants of labeled images under motions and similarities.

The complete motion invariant of an image Y is its Gram matrix
A_Y = Y_norm·Y_normᵀ. Its nonzero spectrum gives the semi-axis lengths of
the associated ellipsoid; dividing by a scale read off those lengths gives
the similarity invariant.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .conf import get_setting
from .exceptions import DegenerateImage, DimensionMismatch
from .geometry import LabeledImage, random_orthogonal
from .linalg import MultiplicityBlocks, center, group_multiplicities, numerical_rank, thin_svd

logger = logging.getLogger('orbit_shapes')

_EPS = np.finfo(float).eps


class Scheme(enum.Enum):
    """How a similarity class picks its unit-scale representative."""

    MAX_AXIS = 'max'
    MEAN_AXIS = 'mean'
    GEOM_MEAN_AXIS = 'gmean'

    @classmethod
    def parse(cls, value) -> 'Scheme':
        if isinstance(value, cls):
            return value
        for member in cls:
            if value in (member.value, member.name):
                return member
        raise ValueError(f"Unknown normalization scheme: {value!r}")


def default_scheme() -> Scheme:
    return Scheme.parse(get_setting('DEFAULT_SCHEME'))


def roundoff_floor(n: int, k: int, reference_norm: float) -> float:
    """Axis lengths at or below this are indistinguishable from zero."""
    return n * k * _EPS * reference_norm


@dataclass(frozen=True, eq=False)
class GramInvariant:
    """A_Y = Y_norm·Y_normᵀ together with the centered factor it came from.

    ``centered`` is any n×k matrix with gram = centered·centeredᵀ; spectra
    are read from it so small axes keep their accuracy. ``reference_norm``
    is ‖Y‖_F of the original input and sets the roundoff floor.
    """

    gram: np.ndarray
    n: int
    k_ambient: int
    centered: np.ndarray
    reference_norm: float

    def axis_lengths(self) -> np.ndarray:
        return _snapped_singulars(self.centered, self.reference_norm)

    def frobenius(self) -> float:
        return float(np.linalg.norm(self.gram))

    def scaled(self, factor: float) -> 'GramInvariant':
        """Invariant of the image scaled by ``factor`` (Gram scales by factor²)."""
        return GramInvariant(
            gram=self.gram * factor ** 2,
            n=self.n,
            k_ambient=self.k_ambient,
            centered=self.centered * factor,
            reference_norm=self.reference_norm * abs(factor),
        )


@dataclass(frozen=True, eq=False)
class EllipsoidSpectrum:
    """Semi-axis lengths (σ_i), their multiplicity blocks and principal axes.

    ``axes`` are the n×s left singular vectors of Y_norm (inside 1_n^⊥ for
    nonzero σ); ``frame`` are the k×s right singular vectors, the principal
    directions in R^k. Within an equal-σ block only the span is canonical.
    """

    axis_lengths: np.ndarray
    blocks: MultiplicityBlocks
    axes: np.ndarray
    frame: np.ndarray
    rank: int


@dataclass(frozen=True, eq=False)
class SimilarityInvariant:
    normalized_gram: GramInvariant
    scheme: Scheme
    scale: float


def _snapped_singulars(centered: np.ndarray, reference_norm: float) -> np.ndarray:
    singulars = np.array(thin_svd(centered).singulars)
    n, k = centered.shape
    singulars[singulars <= roundoff_floor(n, k, reference_norm)] = 0.0
    return singulars


def gram_invariant(image: LabeledImage) -> GramInvariant:
    """A_Y = center(Y)·center(Y)ᵀ."""
    centered = center(image).points
    gram = centered @ centered.T
    gram = 0.5 * (gram + gram.T)
    return GramInvariant(
        gram=gram,
        n=image.n,
        k_ambient=image.k,
        centered=centered,
        reference_norm=float(np.linalg.norm(image.points)),
    )


def ellipsoid_spectrum(image: LabeledImage, tol_group_rel: Optional[float] = None,
                       tol_rank_rel: Optional[float] = None) -> EllipsoidSpectrum:
    """Singular values and vectors of center(Y); s = min(n, k) of each."""
    centered = center(image).points
    svd = thin_svd(centered)
    lengths = np.array(svd.singulars)
    lengths[lengths <= roundoff_floor(image.n, image.k, float(np.linalg.norm(image.points)))] = 0.0
    lengths.setflags(write=False)
    return EllipsoidSpectrum(
        axis_lengths=lengths,
        blocks=group_multiplicities(lengths, tol_group_rel, tol_rank_rel),
        axes=svd.left,
        frame=svd.right,
        rank=numerical_rank(lengths, tol_rank_rel),
    )


def scheme_scale(axis_lengths: np.ndarray, scheme: Scheme, tol_rank_rel: Optional[float] = None) -> float:
    """The scale c that the scheme divides axis lengths by.

    The geometric mean runs over the numerically nonzero lengths only.
    """
    lengths = np.asarray(axis_lengths, dtype=float)
    if scheme is Scheme.MAX_AXIS:
        return float(lengths.max())
    if scheme is Scheme.MEAN_AXIS:
        return float(lengths.mean())
    nonzero = lengths[:numerical_rank(lengths, tol_rank_rel)]
    return float(np.exp(np.mean(np.log(nonzero))))


def similarity_normalize(invariant: GramInvariant, scheme=None) -> SimilarityInvariant:
    """Rescale a Gram invariant so its axis lengths meet the scheme's unit constraint."""
    scheme = default_scheme() if scheme is None else Scheme.parse(scheme)
    lengths = invariant.axis_lengths()
    if lengths.size == 0 or lengths[0] == 0:
        raise DegenerateImage("All points coincide (Y_norm = 0); the image has no scale")
    scale = scheme_scale(lengths, scheme)
    logger.debug(f"similarity_normalize scheme={scheme.value} scale={scale!r}")
    return SimilarityInvariant(
        normalized_gram=invariant.scaled(1.0 / scale),
        scheme=scheme,
        scale=scale,
    )


def synthesize_image(axis_lengths, axes, k: int, rng: np.random.Generator) -> LabeledImage:
    """An image whose spectrum is ``axis_lengths`` with principal axes ``axes``.

    ``axes`` is n×s column-orthonormal with columns in 1_n^⊥ (for nonzero
    lengths) and s = min(n, k); the result is U·diag(σ)·Vᵀ for a Haar-random
    orthogonal V.
    """
    lengths = np.asarray(axis_lengths, dtype=float)
    axes = np.asarray(axes, dtype=float)
    n, s = axes.shape
    if s != min(n, k) or lengths.shape != (s,):
        raise DimensionMismatch(f"Expected {min(n, k)} axis lengths and axes for n={n}, k={k}")
    frame = random_orthogonal(k, rng)[:, :s]
    return LabeledImage((axes * lengths[np.newaxis, :]) @ frame.T)
