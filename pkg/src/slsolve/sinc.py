"""Sinc basis functions and the collocation differentiation matrices."""

import math
from dataclasses import dataclass

import numpy as np

# Below this |z| the direct formula sin(pi z)/(pi z) is replaced by a
# degree-3 Taylor polynomial in (pi z)^2; keeps relative error at the
# eps level with no special case pinned to z == 0.
_SERIES_CUTOFF = 1e-4


def sinc(z: float) -> float:
    """sin(pi z) / (pi z), with the removable singularity filled in."""
    if not math.isfinite(z):
        raise ValueError(f"sinc requires a finite argument, got {z!r}")
    w = math.pi * z
    if abs(z) >= _SERIES_CUTOFF:
        return math.sin(w) / w
    w2 = w * w
    return 1.0 - w2 / 6.0 * (1.0 - w2 / 20.0 * (1.0 - w2 / 42.0))


def sinc_basis(j: int, h: float, x: float) -> float:
    """Basis element centered at j*h with mesh size h, evaluated at x.

    Equals 1 at x = j*h and vanishes at every other mesh point k*h.
    """
    if h <= 0.0:
        raise ValueError(f"mesh size must be positive, got h={h!r}")
    return sinc((x - j * h) / h)


def diff_matrix(order: int, M: int, N: int) -> np.ndarray:
    """Differentiation matrix of the sinc basis at unit mesh size.

    Entry (j, k), with j, k = -M..N mapped to 0-based storage by +M,
    holds h^order times the order-th derivative of the basis element
    centered at j*h, evaluated at k*h.  The h-scaling makes the result
    independent of h: order 0 is the identity, order 2 is the symmetric
    Toeplitz matrix with diagonal -pi^2/3 and off-diagonals
    -2(-1)^(k-j)/(k-j)^2.
    """
    if order not in (0, 2):
        raise ValueError(f"unsupported derivative order {order!r}; expected 0 or 2")
    if M < 0 or N < 0:
        raise ValueError(f"truncation indices must be nonnegative, got M={M}, N={N}")
    size = M + N + 1
    if order == 0:
        return np.eye(size)
    k = np.arange(size)
    offset = np.abs(k[None, :] - k[:, None])
    sign = np.where(offset % 2 == 0, 1.0, -1.0)
    out = -2.0 * sign / np.square(np.maximum(offset, 1))
    out[offset == 0] = -np.pi**2 / 3.0
    return out


@dataclass(frozen=True)
class SincWeights:
    """Coefficients of a truncated sinc expansion on the mesh j*h, j = -M..N."""

    h: float
    M: int
    N: int
    values: np.ndarray

    def __post_init__(self):
        if self.h <= 0.0:
            raise ValueError(f"mesh size must be positive, got h={self.h!r}")
        if self.M < 0 or self.N < 0:
            raise ValueError(f"truncation indices must be nonnegative, got M={self.M}, N={self.N}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or len(values) != self.M + self.N + 1:
            raise ValueError(
                f"expected {self.M + self.N + 1} coefficients, got shape {values.shape}"
            )
        object.__setattr__(self, "values", values)


def expansion_eval(weights: SincWeights, x: float) -> float:
    """Evaluate the truncated expansion sum_j values_j * S(j,h)(x).

    At a mesh point x = k*h this reproduces the stored coefficient
    values_k exactly (discrete orthogonality of the basis).
    """
    j = np.arange(-weights.M, weights.N + 1)
    # np.sinc is sin(pi x)/(pi x), identical to the scalar sinc here.
    return float(weights.values @ np.sinc((x - j * weights.h) / weights.h))
