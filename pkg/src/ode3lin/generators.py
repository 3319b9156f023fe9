"""Random nondegenerate point transformations for property tests and demos.

Transformations are built by composing one or two elementary maps (scalings,
shears, hodograph swaps, inversions, monomial maps) with small rational
parameters drawn from a seeded ``random.Random``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterator, List, Optional

from .kernel import U, X, RationalExpr
from .transform import DegenerateTransformError, PointTransform

_x = RationalExpr.var(X)
_u = RationalExpr.var(U)


def _nonzero_fraction(rng: random.Random, size: int = 3) -> Fraction:
    while True:
        num = rng.randint(-size, size)
        if num:
            return Fraction(num, rng.randint(1, 2))


def _scaling(rng):
    return _nonzero_fraction(rng) * _x, _nonzero_fraction(rng) * _u


def _shear(rng):
    return _x, _u + _nonzero_fraction(rng) * _x ** rng.randint(1, 3)


def _tilt(rng):
    return _x + _nonzero_fraction(rng) * _u, _u


def _swap(rng):
    return _u, _x


def _inversion(rng):
    return _x, _nonzero_fraction(rng) / (_x * _u)


def _projective(rng):
    return 1 / _x, _u / _x


def _monomial(rng):
    a = rng.randint(-2, 2)
    b = rng.choice([-2, -1, 2, 3])
    return _x, _x**a * _u**b


def _translation(rng):
    return _x + _nonzero_fraction(rng), _u + _nonzero_fraction(rng)


ELEMENTARY: List[Callable[[random.Random], tuple]] = [
    _scaling,
    _shear,
    _tilt,
    _swap,
    _inversion,
    _projective,
    _monomial,
    _translation,
]


def compose(outer: tuple, inner: tuple) -> tuple:
    """(φ, ψ) of ``outer`` after ``inner``."""
    phi1, psi1 = inner
    sub = {X: phi1, U: psi1}
    return outer[0].substitute(sub), outer[1].substitute(sub)


def random_transform(rng: random.Random, depth: int = 2) -> PointTransform:
    """A nondegenerate composite of ``depth`` elementary maps."""
    while True:
        pair = (_x, _u)
        try:
            for _ in range(depth):
                pair = compose(rng.choice(ELEMENTARY)(rng), pair)
            return PointTransform(*pair)
        except (DegenerateTransformError, ZeroDivisionError):
            continue


def transforms(count: int, seed: int = 0, depth: int = 2, rng: Optional[random.Random] = None) -> Iterator[PointTransform]:
    """``count`` distinct random transformations (deterministic for a seed)."""
    rng = rng or random.Random(seed)
    seen = set()
    while len(seen) < count:
        t = random_transform(rng, depth)
        key = (t.phi, t.psi)
        if key in seen:
            continue
        seen.add(key)
        yield t
