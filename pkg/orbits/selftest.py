"""
Randomized property sweeps over the whole package.

Each property runs ``trials`` seeded random instances and counts passes and
failures. The sweep is deterministic for a given seed.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List

import numpy as np

from .equivalence import (
    Group,
    align,
    motion_equivalent,
    orbit_distance_gram,
    orbit_distance_procrustes,
    proper_motion_equivalent,
    similarity_equivalent,
)
from .geometry import LabeledImage, act_on_image, random_motion, reflection
from .invariants import (
    Scheme,
    ellipsoid_spectrum,
    gram_invariant,
    scheme_scale,
    similarity_normalize,
    synthesize_image,
)
from .linalg import center, thin_svd
from .oracle import GridSpec, brute_force_min_residual, jacobi_eigenvalues

logger = logging.getLogger('orbit_shapes')

_ORACLE_ANGLES = 3600


@dataclass
class PropertyOutcome:
    passed: int = 0
    failed: int = 0
    failures: List[str] = field(default_factory=list)

    def record(self, ok: bool, detail: str) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 5:
                self.failures.append(detail)


def _random_image(rng: np.random.Generator, n_min: int = 1, n_max: int = 8, k_max: int = 5) -> LabeledImage:
    n = int(rng.integers(n_min, n_max + 1))
    k = int(rng.integers(1, k_max + 1))
    return LabeledImage(rng.standard_normal((n, k)))


def check_motion_invariance(rng, trial):
    y = _random_image(rng)
    g = random_motion(y.k, rng)
    g1 = gram_invariant(y).gram
    g2 = gram_invariant(act_on_image(g, y)).gram
    gap = np.linalg.norm(g1 - g2) / (1.0 + np.linalg.norm(y.points) ** 2)
    return gap <= 1e-10, f"trial {trial}: relative gram gap {gap:.3e}"


def check_completeness(rng, trial):
    y = _random_image(rng)
    moved = act_on_image(random_motion(y.k, rng), y)
    residual = align(y, moved, Group.MOTION).residual
    ok = motion_equivalent(y, moved, 1e-8) and residual <= 1e-9 * (1.0 + np.linalg.norm(y.points))
    return ok, f"trial {trial}: residual {residual:.3e}"


def check_perturbation_rejected(rng, trial):
    y = _random_image(rng, n_min=2)
    y = y.scaled(1.0 / np.linalg.norm(center(y).points))
    noise = rng.standard_normal(y.points.shape)
    noise *= 1e-3 / np.linalg.norm(noise)
    perturbed = LabeledImage(y.points + noise)
    return not motion_equivalent(y, perturbed, 1e-8), f"trial {trial}: perturbed image accepted"


def check_onto(rng, trial):
    n = int(rng.integers(2, 9))
    k = int(rng.integers(1, 6))
    s = min(n, k)
    usable = min(s, n - 1)
    lengths = np.zeros(s)
    lengths[:usable] = np.sort(rng.uniform(0.5, 3.0, usable))[::-1]
    if usable >= 2 and rng.uniform() < 0.5:
        lengths[1] = lengths[0]
    if usable >= 1 and rng.uniform() < 0.3:
        lengths[usable - 1] = 0.0
    lengths = np.sort(lengths)[::-1]
    # Orthonormal axes inside 1_n^⊥ for the nonzero lengths, completed by 1_n/√n.
    basis = np.hstack([np.ones((n, 1)) / np.sqrt(n), rng.standard_normal((n, n - 1))])
    q, _ = np.linalg.qr(basis)
    axes = np.hstack([q[:, 1:], q[:, :1]])[:, :s]
    y = synthesize_image(lengths, axes, k, rng)
    got = ellipsoid_spectrum(y).axis_lengths
    gap = np.max(np.abs(got - lengths)) / max(lengths[0], 1.0)
    return gap <= 1e-9, f"trial {trial}: spectrum gap {gap:.3e}"


def check_scaling_law(rng, trial):
    y = _random_image(rng, n_min=2)
    a = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
    base = gram_invariant(y).gram
    gap = np.linalg.norm(gram_invariant(y.scaled(a)).gram - a ** 2 * base)
    return gap <= 1e-12 * a ** 2 * np.linalg.norm(base), f"trial {trial}: scaling gap {gap:.3e}"


def check_scheme_agreement(rng, trial):
    y1 = _random_image(rng, n_min=3)
    if trial % 2 == 0:
        a = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        y2 = act_on_image(random_motion(y1.k, rng), y1.scaled(a))
    else:
        y2 = LabeledImage(rng.standard_normal(y1.points.shape))
    verdicts = {scheme: similarity_equivalent(y1, y2, scheme, 1e-8) for scheme in Scheme}
    constraints_ok = True
    for scheme in Scheme:
        lengths = similarity_normalize(gram_invariant(y1), scheme).normalized_gram.axis_lengths()
        constraints_ok &= abs(scheme_scale(lengths, scheme) - 1.0) <= 1e-10
    expected = trial % 2 == 0
    ok = constraints_ok and all(v == expected for v in verdicts.values())
    return ok, f"trial {trial}: verdicts {[v for v in verdicts.values()]}, constraints {constraints_ok}"


def check_metric_axioms(rng, trial):
    n = int(rng.integers(1, 7))
    images = [LabeledImage(rng.standard_normal((n, int(rng.integers(1, 5))))) for _ in range(3)]
    d = lambda a, b: orbit_distance_gram(a, b).value
    d01, d10 = d(images[0], images[1]), d(images[1], images[0])
    ok = d01 == d10 and d01 <= d(images[0], images[2]) + d(images[2], images[1]) + 1e-12
    return ok, f"trial {trial}: symmetry or triangle inequality violated"


def check_zero_set_agreement(rng, trial):
    y1 = _random_image(rng, n_min=2)
    if trial % 2 == 0:
        y2 = act_on_image(random_motion(y1.k, rng), y1)
    else:
        y2 = LabeledImage(y1.points + 0.1 * rng.standard_normal(y1.points.shape))
    scale = 1.0 + np.linalg.norm(y1.points) ** 2
    gram_zero = orbit_distance_gram(y1, y2).value <= 1e-9 * scale
    procrustes_zero = orbit_distance_procrustes(y1, y2, Group.MOTION).value <= 1e-8 * np.sqrt(scale)
    verdict = motion_equivalent(y1, y2, 1e-8)
    return gram_zero == procrustes_zero == verdict, f"trial {trial}: zero sets disagree"


def check_svd_oracle(rng, trial):
    rows, cols = int(rng.integers(1, 9)), int(rng.integers(1, 9))
    m = rng.standard_normal((rows, cols))
    singulars = thin_svd(m).singulars
    eigen = jacobi_eigenvalues(m.T @ m)
    s = singulars.shape[0]
    top = max(eigen[0], 1e-300)
    ok = np.all(np.abs(singulars ** 2 - eigen[:s]) <= 1e-9 * top) and np.all(np.abs(eigen[s:]) <= 1e-9 * top)
    return ok, f"trial {trial}: singular values disagree with Jacobi eigenvalues"


def check_procrustes_oracle(rng, trial):
    n = int(rng.integers(2, 8))
    y1 = LabeledImage(rng.standard_normal((n, 2)))
    y2 = LabeledImage(rng.standard_normal((n, 2)))
    residual = align(y1, y2, Group.MOTION).residual
    grid = brute_force_min_residual(y1, y2, GridSpec(angle_count=_ORACLE_ANGLES))
    bound = 2.0 * np.pi * np.linalg.norm(center(y1).points) / _ORACLE_ANGLES
    ok = residual - 1e-10 <= grid <= residual + bound
    return ok, f"trial {trial}: align {residual:.6e} vs grid {grid:.6e}"


def check_chirality(rng, trial):
    triangle = LabeledImage(rng.standard_normal((3, 2)))
    mirrored = act_on_image(reflection(2), triangle)
    padded = LabeledImage(np.hstack([triangle.points, np.zeros((3, 1))]))
    padded_mirror = LabeledImage(np.hstack([mirrored.points, np.zeros((3, 1))]))
    ok = (motion_equivalent(triangle, mirrored)
          and not proper_motion_equivalent(triangle, mirrored)
          and proper_motion_equivalent(padded, padded_mirror))
    return ok, f"trial {trial}: chirality check failed"


PROPERTIES: Dict[str, Callable] = {
    'motion_invariance': check_motion_invariance,
    'completeness': check_completeness,
    'perturbation_rejected': check_perturbation_rejected,
    'onto': check_onto,
    'scaling_law': check_scaling_law,
    'similarity_schemes': check_scheme_agreement,
    'metric_axioms': check_metric_axioms,
    'zero_set_agreement': check_zero_set_agreement,
    'svd_oracle': check_svd_oracle,
    'procrustes_oracle': check_procrustes_oracle,
    'chirality': check_chirality,
}


def run_selftest(trials: int, seed: int) -> Dict[str, PropertyOutcome]:
    """Run every property ``trials`` times from one seeded generator."""
    if trials < 0:
        raise ValueError(f"trials must be nonnegative, got {trials}")
    rng = np.random.default_rng(seed)
    outcomes = {}
    for name, check in PROPERTIES.items():
        outcome = PropertyOutcome()
        for trial in range(trials):
            ok, detail = check(rng, trial)
            outcome.record(bool(ok), detail)
        if outcome.failed:
            logger.warning(f"selftest property {name}: {outcome.failed} failure(s): {outcome.failures}")
        else:
            logger.info(f"selftest property {name}: {outcome.passed} passed")
        outcomes[name] = outcome
    return outcomes
