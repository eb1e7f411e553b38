"""Conformal maps onto the problem interval and the transformed coefficients.

Each map phi sends the real line onto the open interval of the problem,
pushing the endpoints to -inf/+inf, and carries closed-form first,
second, and third derivatives.  Under the substitution
``v = u(phi) / sqrt(phi')`` the equation -u'' + q u = lambda rho u turns
into -v'' + qtilde v = lambda * rho(phi) * phi'^2 * v with

    qtilde = 3/4 (phi''/phi')^2 - phi'''/(2 phi') + phi'^2 q(phi),

which is the fully expanded form of the curvature term
-sqrt(phi') d/dt[(1/phi') d/dt sqrt(phi')]; the expansion avoids both a
symbolic engine and numerical differentiation noise.

Catalog (decay of the transformed solution in parentheses):

    interval      SE map                  DE map
    (0, 1)        tanh(t)/2 + 1/2         tanh(sinh t)/2 + 1/2
    (0, inf)      arcsinh(e^t)            arcsinh(e^(sinh t))
    (-inf, inf)   t                       kappa * sinh(t)

The half-line maps evaluate arcsinh(e^y) via the asymptote y + log 2
once y > 30 so that e^(sinh t) never overflows at reachable mesh points.
"""

import math
from dataclasses import dataclass
from typing import Callable

from .meshing import DecayProfile

INTERVAL_KINDS = ("unit", "half_line", "real_line")
DECAY_KINDS = ("SE", "DE")

_ASINH_EXP_ASYMPTOTE = 30.0


class EvaluationError(ValueError):
    """A transformed-coefficient evaluation failed at a collocation point."""

    def __init__(self, message: str, point: float):
        super().__init__(f"{message} (at t={point!r})")
        self.point = point


@dataclass(frozen=True)
class ConformalMap:
    """A monotone map of the real line onto a problem interval.

    ``phi`` and its three derivative evaluators are plain scalar callables;
    instances are immutable and safe to share across threads.
    """

    interval_kind: str
    decay_kind: str
    kappa: float
    phi: Callable[[float], float]
    dphi: Callable[[float], float]
    d2phi: Callable[[float], float]
    d3phi: Callable[[float], float]


def _sech2(y: float) -> float:
    # 1/cosh^2 without overflow: cosh(y) -> inf gives a clean 0.
    c = math.cosh(y)
    return 1.0 / (c * c) if math.isfinite(c) else 0.0


def _asinh_exp(y: float) -> float:
    if y > _ASINH_EXP_ASYMPTOTE:
        return y + math.log(2.0)
    return math.asinh(math.exp(y))


def _asinh_exp_derivs(y: float):
    """First three derivatives of y -> arcsinh(e^y), branch-stable in y."""
    if y > 0.0:
        f = math.exp(-2.0 * y)
        t = 1.0 + f
        return t**-0.5, f * t**-1.5, f * (3.0 * f * t**-2.5 - 2.0 * t**-1.5)
    e = math.exp(y)
    s = 1.0 + math.exp(2.0 * y)
    return e * s**-0.5, e * s**-1.5, e * (3.0 * s**-2.5 - 2.0 * s**-1.5)


def _unit_se() -> ConformalMap:
    def phi(t):
        return 0.5 * math.tanh(t) + 0.5

    def d1(t):
        return 0.5 * _sech2(t)

    def d2(t):
        return -_sech2(t) * math.tanh(t)

    def d3(t):
        s2 = _sech2(t)
        u = math.tanh(t)
        return s2 * (2.0 * u * u - s2)

    return ConformalMap("unit", "SE", 1.0, phi, d1, d2, d3)


def _unit_de() -> ConformalMap:
    def phi(t):
        return 0.5 * math.tanh(math.sinh(t)) + 0.5

    def d1(t):
        return 0.5 * _sech2(math.sinh(t)) * math.cosh(t)

    def d2(t):
        s, c = math.sinh(t), math.cosh(t)
        return 0.5 * _sech2(s) * (s - 2.0 * c * c * math.tanh(s))

    def d3(t):
        s, c = math.sinh(t), math.cosh(t)
        u = math.tanh(s)
        s2 = _sech2(s)
        c3 = c * c * c
        return 0.5 * s2 * (c - 6.0 * c * s * u + 4.0 * c3 * u * u - 2.0 * c3 * s2)

    return ConformalMap("unit", "DE", 1.0, phi, d1, d2, d3)


def _half_line_se() -> ConformalMap:
    def phi(t):
        return _asinh_exp(t)

    def d1(t):
        return _asinh_exp_derivs(t)[0]

    def d2(t):
        return _asinh_exp_derivs(t)[1]

    def d3(t):
        return _asinh_exp_derivs(t)[2]

    return ConformalMap("half_line", "SE", 1.0, phi, d1, d2, d3)


def _half_line_de() -> ConformalMap:
    # phi = psi(sinh t) with psi = arcsinh o exp; chain rule throughout.
    def phi(t):
        return _asinh_exp(math.sinh(t))

    def d1(t):
        return _asinh_exp_derivs(math.sinh(t))[0] * math.cosh(t)

    def d2(t):
        s, c = math.sinh(t), math.cosh(t)
        p1, p2, _ = _asinh_exp_derivs(s)
        return p2 * c * c + p1 * s

    def d3(t):
        s, c = math.sinh(t), math.cosh(t)
        p1, p2, p3 = _asinh_exp_derivs(s)
        return p3 * c * c * c + 3.0 * p2 * c * s + p1 * c

    return ConformalMap("half_line", "DE", 1.0, phi, d1, d2, d3)


def _real_line_se() -> ConformalMap:
    return ConformalMap(
        "real_line", "SE", 1.0,
        phi=lambda t: t,
        dphi=lambda t: 1.0,
        d2phi=lambda t: 0.0,
        d3phi=lambda t: 0.0,
    )


def _real_line_de(kappa: float) -> ConformalMap:
    return ConformalMap(
        "real_line", "DE", kappa,
        phi=lambda t: kappa * math.sinh(t),
        dphi=lambda t: kappa * math.cosh(t),
        d2phi=lambda t: kappa * math.sinh(t),
        d3phi=lambda t: kappa * math.cosh(t),
    )


def _validate_map(m: ConformalMap) -> None:
    # Monotonicity over the reachable mesh range, endpoint limits at +-20.
    for i in range(-60, 61):
        t = i / 10.0
        if not m.dphi(t) > 0.0:
            raise ValueError(f"map derivative not positive at t={t}")
    lo, hi = m.phi(-20.0), m.phi(20.0)
    if m.interval_kind == "unit":
        ok = abs(lo) < 1e-6 and abs(hi - 1.0) < 1e-6
    elif m.interval_kind == "half_line":
        ok = 0.0 <= lo < 1e-6 and hi > 10.0
    else:
        ok = lo < -10.0 and hi > 10.0
    if not ok:
        raise ValueError(
            f"map does not cover the {m.interval_kind} interval: phi(-20)={lo!r}, phi(20)={hi!r}"
        )


def map_catalog(interval_kind: str, decay_kind: str, kappa: float = 1.0) -> ConformalMap:
    """Look up a catalog map; kappa rescales only the real-line DE map."""
    if interval_kind not in INTERVAL_KINDS:
        raise ValueError(f"unknown interval kind {interval_kind!r}; expected one of {INTERVAL_KINDS}")
    if decay_kind not in DECAY_KINDS:
        raise ValueError(f"unknown decay kind {decay_kind!r}; expected one of {DECAY_KINDS}")
    if not (kappa > 0.0 and math.isfinite(kappa)):
        raise ValueError(f"map scale must be positive, got kappa={kappa!r}")
    if kappa != 1.0 and (interval_kind, decay_kind) != ("real_line", "DE"):
        raise ValueError("kappa != 1 is only supported for the real-line DE map")
    builders = {
        ("unit", "SE"): _unit_se,
        ("unit", "DE"): _unit_de,
        ("half_line", "SE"): _half_line_se,
        ("half_line", "DE"): _half_line_de,
        ("real_line", "SE"): _real_line_se,
        ("real_line", "DE"): lambda: _real_line_de(kappa),
    }
    m = builders[(interval_kind, decay_kind)]()
    _validate_map(m)
    return m


def qtilde_eval(m: ConformalMap, q: Callable[[float], float], t: float) -> float:
    """Transformed coefficient 3/4 (phi''/phi')^2 - phi'''/(2 phi') + phi'^2 q(phi)."""
    p1 = m.dphi(t)
    if not (p1 > 0.0 and math.isfinite(p1)):
        raise EvaluationError(f"map derivative must be positive, got {p1!r}", point=t)
    x = m.phi(t)
    try:
        qx = q(x)
    except (ArithmeticError, ValueError) as exc:
        raise EvaluationError(f"coefficient q undefined at x={x!r}: {exc}", point=t) from exc
    if not math.isfinite(qx):
        raise EvaluationError(f"coefficient q non-finite at x={x!r}", point=t)
    r = m.d2phi(t) / p1
    return 0.75 * r * r - m.d3phi(t) / (2.0 * p1) + p1 * p1 * qx


def weight_eval(m: ConformalMap, rho: Callable[[float], float], t: float) -> float:
    """Transformed weight rho(phi(t)) * phi'(t)^2; must come out positive."""
    p1 = m.dphi(t)
    x = m.phi(t)
    try:
        rx = rho(x)
    except (ArithmeticError, ValueError) as exc:
        raise EvaluationError(f"weight rho undefined at x={x!r}: {exc}", point=t) from exc
    w = rx * p1 * p1
    if not math.isfinite(w):
        raise EvaluationError(f"transformed weight non-finite at x={x!r}", point=t)
    if w <= 0.0:
        raise EvaluationError(
            f"transformed weight must be positive, got {w!r}", point=t
        )
    return w


@dataclass(frozen=True)
class TransformedProblem:
    """A problem after the change of variables, ready for collocation."""

    map: ConformalMap
    qtilde: Callable[[float], float]
    weight: Callable[[float], float]
    decay: DecayProfile


def transform_problem(m: ConformalMap, q, rho, decay: DecayProfile) -> TransformedProblem:
    """Bundle the transformed coefficient and weight evaluators.

    Samples the weight on t in [-3, 3] so a sign mistake in rho surfaces
    at construction rather than deep inside an assembly.
    """
    qt = lambda t: qtilde_eval(m, q, t)
    wt = lambda t: weight_eval(m, rho, t)
    for i in range(-12, 13):
        wt(i / 4.0)
    return TransformedProblem(map=m, qtilde=qt, weight=wt, decay=decay)
