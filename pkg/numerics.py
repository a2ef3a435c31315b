"""Quadrature and scalar maximization used by the Greedy agent and the oracles.

Both wrap scipy routines: QUADPACK adaptive quadrature for integrals and a
grid scan refined by golden-section search for maximization.
"""
import logging
import math
from typing import Callable, Iterable, Optional, Tuple

import numpy as np
from scipy import integrate as _quadpack
from scipy import optimize

from datatypes import MaximizerSettings, QuadratureSettings
from errors import NumericalError

logger = logging.getLogger(__name__)

ScalarFunction = Callable[[float], float]

DEFAULT_QUADRATURE = QuadratureSettings()


def _accept(value: float, abserr: float, settings: QuadratureSettings, message: str) -> float:
    """Keep a QUADPACK result flagged with a warning if its error estimate is acceptable."""
    bound = max(settings.abs_tol, settings.rel_tol * abs(value))
    if math.isfinite(value) and abserr <= 100.0 * bound:
        logger.debug("Quadrature warning ignored (abserr=%.3g): %s", abserr, message)
        return value
    raise NumericalError(f"quadrature did not converge: {message.strip()}", value)


def integrate(
    f: ScalarFunction,
    a: float,
    b: float,
    settings: Optional[QuadratureSettings] = None,
    breakpoints: Optional[Iterable[float]] = None,
) -> float:
    """Integrate f over the finite interval [a, b].

    Args:
        f: Integrand, finite and piecewise smooth on [a, b]
        a: Lower limit
        b: Upper limit, a <= b
        settings: Tolerances and subdivision budget
        breakpoints: Kinks of f; the ones strictly inside (a, b) are passed to QUADPACK

    Returns:
        float: Integral estimate

    Raises:
        NumericalError: If the subdivision budget ran out before the tolerance was met
    """
    settings = settings or DEFAULT_QUADRATURE
    if b < a:
        raise ValueError(f"integration limits out of order: [{a}, {b}]")
    if a == b:
        return 0.0
    points = sorted({p for p in (breakpoints or ()) if a < p < b})
    out = _quadpack.quad(
        f, a, b,
        epsabs=settings.abs_tol,
        epsrel=settings.rel_tol,
        limit=max(settings.max_subdivisions, len(points) + 1),
        points=points or None,
        full_output=1,
    )
    value, abserr = out[0], out[1]
    if len(out) > 3:
        return _accept(value, abserr, settings, out[3])
    return value


def integrate_tail(
    f: ScalarFunction,
    a: float,
    settings: Optional[QuadratureSettings] = None,
    scale: float = 1.0,
    breakpoints: Optional[Iterable[float]] = None,
) -> float:
    """Integrate f over [a, inf).

    Substitutes x = a + scale * u / (1 - u), which maps [a, inf) onto [0, 1),
    and integrates the transformed function with integrate(). `scale` should
    be of the order of the tail's length so the mass does not bunch up near
    u = 1.

    Args:
        f: Integrand with a decaying tail
        a: Lower limit
        settings: Tolerances and subdivision budget
        scale: Length scale of the substitution, > 0
        breakpoints: Kinks of f in x coordinates

    Returns:
        float: Integral estimate

    Raises:
        NumericalError: As integrate()
    """
    if not scale > 0:
        raise ValueError(f"scale must be > 0, got {scale!r}")

    def transformed(u: float) -> float:
        if u >= 1.0:
            return 0.0
        gap = 1.0 - u
        value = f(a + scale * u / gap)
        return value * scale / (gap * gap) if value else 0.0

    mapped = [(p - a) / (scale + p - a) for p in (breakpoints or ()) if p > a]
    return integrate(transformed, 0.0, 1.0, settings, mapped)


def maximize_scalar(f: ScalarFunction, settings: MaximizerSettings) -> Tuple[float, float]:
    """Maximize f over the bracket [lo, hi].

    Scans an evenly spaced grid, then refines the best grid cell by
    golden-section search. This is a local method: it finds the peak nearest
    the best grid sample.

    Args:
        f: Function finite on the bracket
        settings: Bracket, grid resolution and refinement tolerance

    Returns:
        tuple: (z_star, f(z_star)), never worse than the best grid sample
    """
    settings.validate()
    grid = np.linspace(settings.lo, settings.hi, settings.resolution)
    values = np.array([f(float(z)) for z in grid])
    best = int(np.argmax(values))
    best_z, best_value = float(grid[best]), float(values[best])

    if best == 0 or best == len(grid) - 1:
        return best_z, best_value

    bracket = (float(grid[best - 1]), best_z, float(grid[best + 1]))
    try:
        refined = optimize.minimize_scalar(
            lambda z: -f(z), bracket=bracket, method="golden", tol=settings.tolerance
        )
    except (ValueError, RuntimeError) as exc:
        logger.debug("Golden-section refinement skipped: %s", exc)
        return best_z, best_value

    z_star = float(refined.x)
    if not bracket[0] <= z_star <= bracket[2]:
        return best_z, best_value
    value = f(z_star)
    if value >= best_value:
        return z_star, float(value)
    return best_z, best_value
