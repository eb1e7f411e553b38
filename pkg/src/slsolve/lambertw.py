"""Principal branch of the Lambert W function on [0, inf).

Every double-exponential mesh-size formula in this package is of the form
h = W(c*n)/(g*n), so a dependable scalar W suffices; the negative branch
is never needed.
"""

import math


def lambert_w0(x: float) -> float:
    """Solve w * exp(w) = x for w >= 0.

    Parameters
    ----------
    x : float
        Nonnegative finite argument.

    Returns
    -------
    float
        The principal-branch value, with residual |w*e^w - x| below
        1e-14 * max(1, x).

    Raises
    ------
    ValueError
        If ``x`` is negative or not finite.
    """
    if not math.isfinite(x):
        raise ValueError(f"lambert_w0 requires a finite argument, got {x!r}")
    if x < 0.0:
        raise ValueError(f"lambert_w0 is only defined for x >= 0, got {x!r}")
    if x == 0.0:
        return 0.0

    # Damped log guess; within a few percent over the whole half-line.
    lg = math.log1p(x)
    w = lg * (1.0 - math.log1p(lg) / (2.0 + lg))

    tol = 1e-15 * max(1.0, x)
    best_w, best_f = w, math.inf
    for _ in range(50):
        e = math.exp(w)
        f = w * e - x
        if abs(f) < best_f:
            best_w, best_f = w, abs(f)
        if abs(f) <= tol:
            return w
        # Halley update; w > 0 keeps the denominator away from the w = -1 pole.
        step = f / (e * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0))
        if w - step == w:
            break
        w -= step
    # The iteration can stall one or two ulps short of tol; the best iterate
    # still has to satisfy the documented residual bound.
    if best_f <= 1e-14 * max(1.0, x):
        return best_w
    raise RuntimeError(f"lambert_w0 did not converge for x={x!r}")
