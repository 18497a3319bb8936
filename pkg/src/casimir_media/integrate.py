"""Adaptive quadrature used by the production potentials.

Thin layer over ``scipy.integrate.quad`` that turns QUADPACK's failure codes into
ConvergenceError, and a semi-infinite variant for integrands decaying like exp(-2uR).
"""

import logging
import math
from typing import Callable, Iterable, Optional

from scipy.integrate import quad

from .errors import ConvergenceError

logger = logging.getLogger(__name__)

QUAD_LIMIT = 400


def adaptive_quad(
    func: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-300,
    points: Optional[Iterable[float]] = None,
    what: str = "integral",
) -> float:
    """Integrate ``func`` over [a, b] (b may be inf) to the requested tolerance.

    Raises:
        ConvergenceError: QUADPACK reports that the tolerance was not met.
    """
    kwargs = {}
    if points is not None and math.isfinite(b):
        pts = sorted({p for p in points if a < p < b})
        if pts:
            kwargs["points"] = pts
    out = quad(
        func,
        a,
        b,
        epsabs=abs_tol,
        epsrel=rel_tol,
        limit=QUAD_LIMIT,
        full_output=1,
        **kwargs,
    )
    value, abserr, info = out[0], out[1], out[2]
    if len(out) > 3:
        # QUADPACK appends its message only when ier > 0
        raise ConvergenceError(
            f"{what}: quadrature did not converge ({out[3].strip()}); "
            f"value={value!r}, error estimate={abserr!r}"
        )
    logger.debug("%s: %d evaluations, value=%r, err=%r", what, info["neval"], value, abserr)
    return value


def semi_infinite_quad(
    func: Callable[[float], float],
    scale: float,
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-300,
    landmarks: Iterable[float] = (),
    what: str = "integral",
) -> float:
    """Integrate ``func`` over [0, inf) through u = scale * t / (1 - t), t in [0, 1).

    ``landmarks`` are u values where the integrand changes character (resonance widths,
    decay lengths); their images in t become QUADPACK break points.
    """

    def mapped(t: float) -> float:
        one_minus = 1.0 - t
        if one_minus <= 0.0:
            return 0.0
        u = scale * t / one_minus
        return func(u) * scale / (one_minus * one_minus)

    points = [u / (u + scale) for u in landmarks if u > 0.0 and math.isfinite(u)]
    return adaptive_quad(mapped, 0.0, 1.0, rel_tol, abs_tol, points=points, what=what)
