"""
Orbit Shape SDK

One entry point per user-facing operation, shared by the management command
and the HTTP views. Every method returns a plain result dict; failures come
back as ``{'ok': False, 'error': ..., 'error_type': ...}`` instead of raising.
"""

import functools
import logging
from typing import Dict, List, Optional, Sequence

from .conf import get_setting
from .equivalence import (
    Group,
    Metric,
    align,
    default_group,
    distance_matrix,
    motion_equivalent,
    orbit_distance,
    orbit_distance_gram,
    orbit_distance_procrustes,
    proper_motion_equivalent,
    similarity_equivalent,
)
from .exceptions import OrbitError
from .geometry import LabeledImage
from .invariants import Scheme, default_scheme, ellipsoid_spectrum, gram_invariant
from .linalg import centroid, numerical_rank
from .selftest import run_selftest

logger = logging.getLogger('orbit_shapes')


def _failure(error: Exception) -> Dict:
    return {'ok': False, 'error': str(error), 'error_type': type(error).__name__}


def _reports_errors(method):
    @functools.wraps(method)
    def wrapper(*args, **kwargs):
        try:
            return method(*args, **kwargs)
        except (OrbitError, ValueError) as e:
            logger.warning(f"{method.__name__} failed: {type(e).__name__}: {e}")
            return _failure(e)
    return wrapper


class ShapeOrbitSDK:
    """Invariants, comparisons, alignments and distances for labeled images."""

    @staticmethod
    @_reports_errors
    def describe_image(image: LabeledImage, full_gram: bool = False,
                       tol_rank: Optional[float] = None) -> Dict:
        tol_rank = get_setting('TOL_RANK') if tol_rank is None else tol_rank
        spectrum = ellipsoid_spectrum(image, tol_rank_rel=tol_rank)
        result = {
            'ok': True,
            'n': image.n,
            'k': image.k,
            'centroid': centroid(image),
            'axis_lengths': spectrum.axis_lengths,
            'multiplicity_blocks': [
                {'value': value, 'multiplicity': count} for value, count in spectrum.blocks.blocks
            ],
            'zero_count': spectrum.blocks.zero_count,
            'rank': numerical_rank(spectrum.axis_lengths, tol_rank),
        }
        if full_gram:
            result['gram'] = gram_invariant(image).gram
        return result

    @staticmethod
    @_reports_errors
    def compare_images(first: LabeledImage, second: LabeledImage, group=None, scheme=None,
                       tol: Optional[float] = None, tol_rank: Optional[float] = None) -> Dict:
        group = default_group() if group is None else Group.parse(group)
        scheme = default_scheme() if scheme is None else Scheme.parse(scheme)
        tol = get_setting('TOL_EQ') if tol is None else tol

        if group is Group.MOTION:
            equivalent = motion_equivalent(first, second, tol)
        elif group is Group.PROPER_MOTION:
            equivalent = proper_motion_equivalent(first, second, tol, tol_rank)
        else:
            equivalent = similarity_equivalent(first, second, scheme, tol)

        gram_distance = orbit_distance_gram(
            first, second, Group.SIMILARITY if group is Group.SIMILARITY else Group.MOTION, scheme
        )
        procrustes_distance = orbit_distance_procrustes(first, second, group)
        logger.info(f"compare group={group.value} equivalent={equivalent}")
        return {
            'ok': True,
            'equivalent': equivalent,
            'group': group.value,
            'scheme': scheme.value,
            'tol': tol,
            'gram_distance': gram_distance.value,
            'procrustes_distance': procrustes_distance.value,
        }

    @staticmethod
    @_reports_errors
    def align_images(first: LabeledImage, second: LabeledImage, group=None) -> Dict:
        group = default_group() if group is None else Group.parse(group)
        result = align(first, second, group)
        return {
            'ok': True,
            'group': group.value,
            'rotation': result.transform.rotation,
            'translation': result.transform.translation,
            'proper': result.transform.proper,
            'scale': result.scale,
            'residual': result.residual,
        }

    @staticmethod
    @_reports_errors
    def distance(first: LabeledImage, second: LabeledImage, metric='gram', group=None, scheme=None) -> Dict:
        metric = Metric.parse(metric)
        group = Group.MOTION if group is None else Group.parse(group)
        value = orbit_distance(first, second, metric, group, scheme)
        return {'ok': True, 'metric': metric.value, 'group': value.group_tag.value, 'value': value.value}

    @staticmethod
    @_reports_errors
    def distance_matrix(images: Sequence[LabeledImage], metric='gram', group=None, scheme=None,
                        workers: Optional[int] = None) -> Dict:
        metric = Metric.parse(metric)
        group = Group.MOTION if group is None else Group.parse(group)
        matrix = distance_matrix(images, metric, group, scheme, workers)
        return {'ok': True, 'metric': metric.value, 'group': group.value, 'matrix': matrix}

    @staticmethod
    @_reports_errors
    def selftest(trials: int, seed: int) -> Dict:
        outcomes = run_selftest(trials, seed)
        properties: Dict[str, Dict] = {}
        failed: List[str] = []
        for name, outcome in outcomes.items():
            properties[name] = {'passed': outcome.passed, 'failed': outcome.failed, 'failures': outcome.failures}
            if outcome.failed:
                failed.append(name)
        return {'ok': True, 'passed': not failed, 'failed_properties': failed, 'properties': properties}
