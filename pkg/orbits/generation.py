"""
Seeded fixture generation: a random image, optionally a transformed and
noised copy, and the ground-truth transform that produced it.
"""

import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry import LabeledImage, MotionElement, act_on_image, identity, random_motion

logger = logging.getLogger('orbit_shapes')


class TransformKind(enum.Enum):
    MOTION = 'motion'
    PROPER = 'proper'
    SIMILARITY = 'similarity'
    NONE = 'none'


@dataclass(frozen=True, eq=False)
class GeneratedInstance:
    kind: TransformKind
    source: LabeledImage
    target: Optional[LabeledImage]
    transform: MotionElement
    scale: float
    noise: float
    seed: int

    def truth(self) -> dict:
        return {
            'seed': self.seed,
            'transform': self.kind.value,
            'rotation': self.transform.rotation,
            'translation': self.transform.translation,
            'proper': self.transform.proper,
            'scale': self.scale,
            'noise': self.noise,
        }


def generate_instance(n: int, k: int, seed: int, transform='none', noise: float = 0.0) -> GeneratedInstance:
    """Y ~ N(0, I) of shape n×k and, unless transform is none with zero noise, g·(c·Y) + σ·N(0, I)."""
    if n < 1 or k < 1:
        raise ValueError(f"n and k must be at least 1, got n={n}, k={k}")
    if noise < 0:
        raise ValueError(f"noise must be nonnegative, got {noise}")
    kind = TransformKind(transform)
    rng = np.random.default_rng(seed)
    source = LabeledImage(rng.standard_normal((n, k)))

    scale = 1.0
    if kind is TransformKind.NONE:
        g = identity(k)
    else:
        g = random_motion(k, rng, proper=kind is TransformKind.PROPER)
        if kind is TransformKind.SIMILARITY:
            scale = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))

    target = None
    if kind is not TransformKind.NONE or noise > 0:
        moved = act_on_image(g, source.scaled(scale)).points
        if noise > 0:
            moved = moved + noise * rng.standard_normal((n, k))
        target = LabeledImage(moved)

    logger.info(f"Generated instance n={n} k={k} seed={seed} transform={kind.value} noise={noise}")
    return GeneratedInstance(kind=kind, source=source, target=target, transform=g, scale=scale,
                             noise=noise, seed=seed)
