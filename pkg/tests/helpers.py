"""Shared test utilities."""

from fanosolve import RationalQuadratic


def random_rq(rng):
    """Random rational quadratic with a root-free denominator."""
    delta = rng.uniform(-5, 5)
    sigma = rng.uniform(0.3, 3.0)
    b2 = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 2.0)
    b1 = 2 * delta * b2
    b0 = (sigma**2 + delta**2) * b2
    a = rng.uniform(-3, 3, size=3)
    return RationalQuadratic(a[0], a[1], a[2], b0, b1, b2)
