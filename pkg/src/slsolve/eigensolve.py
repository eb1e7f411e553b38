"""Assembly and solution of the generalized collocation eigensystem.

Collocating the transformed equation at the mesh points kh gives
``(A - mu D^2) v = 0`` with

    A    = -(1/h^2) delta2 + diag(qtilde(kh)),
    D^2  = diag(rho(phi(kh)) * phi'(kh)^2),

where delta2 is the order-2 sinc differentiation matrix.  A is symmetric
by construction and D^2 is diagonal positive, so the generalized
eigenvalues are real.

Two reduction routes are used:

* moderate weight grading: the diagonal congruence
  B = D^-1 A D^-1 applied as a_jk / (d_j d_k), which is exact, cheap and
  bitwise-symmetric; eigenvalues of B are the generalized eigenvalues.

* strong grading (max w / min w beyond ~1e8, typical of
  double-exponential weights at large truncation): the congruence norm
  explodes like 1/min(w) and a dense symmetric solver then loses the
  small eigenvalues entirely.  Instead factor A + s D^2 = L L^T with a
  small stabilizing shift s and solve for G = L^-1 D^2 L^-T; the lowest
  generalized eigenvalues become the LARGEST eigenvalues of G and are
  recovered with absolute accuracy ~eps*(mu+s).  Eigenvalues beyond
  1/eps of the smallest are not resolvable in this regime and are
  reported saturated at the clamp magnitude; callers of this package
  only consume the low end of the spectrum.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from .meshing import MeshConfig
from .maps import EvaluationError, TransformedProblem
from .sinc import diff_matrix

# Weight grading max(w)/min(w) above which the congruence route is
# abandoned for the shifted factorization route.
GRADE_LIMIT = 1e8

_SYMMETRY_TOL = 1e-12


class AssemblyError(RuntimeError):
    """A coefficient evaluation failed while filling the system."""

    def __init__(self, message: str, index: int, point: float):
        super().__init__(f"{message} (index k={index}, t={point!r})")
        self.index = index
        self.point = point


class DefinitenessError(AssemblyError):
    """A weight entry came out nonpositive, so D^2 is not positive definite."""


class SolverError(RuntimeError):
    """The eigensolver failed to converge."""


@dataclass(frozen=True)
class GeneralizedSystem:
    """Dense symmetric A with the positive diagonal of D^2 and its mesh."""

    matrix: np.ndarray
    weights: np.ndarray
    mesh: MeshConfig

    @property
    def size(self) -> int:
        return self.mesh.size


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues, optionally with eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: Optional[np.ndarray] = None


def assemble(tp: TransformedProblem, mesh: MeshConfig) -> GeneralizedSystem:
    """Fill A and D^2 at the collocation points k*h, k = -M..N."""
    h = mesh.h
    size = mesh.size
    qvals = np.empty(size)
    wvals = np.empty(size)
    for idx, k in enumerate(range(-mesh.M, mesh.N + 1)):
        t = k * h
        try:
            qvals[idx] = tp.qtilde(t)
        except EvaluationError as exc:
            raise AssemblyError(str(exc), index=k, point=t) from exc
        try:
            wvals[idx] = tp.weight(t)
        except EvaluationError as exc:
            raise DefinitenessError(str(exc), index=k, point=t) from exc
    if not np.all(np.isfinite(qvals)):
        idx = int(np.flatnonzero(~np.isfinite(qvals))[0])
        raise AssemblyError("non-finite transformed coefficient", index=idx - mesh.M, point=(idx - mesh.M) * h)
    if np.any(wvals <= 0.0):
        idx = int(np.flatnonzero(wvals <= 0.0)[0])
        raise DefinitenessError("nonpositive weight entry", index=idx - mesh.M, point=(idx - mesh.M) * h)

    A = -diff_matrix(2, mesh.M, mesh.N) / (h * h)
    A[np.diag_indices(size)] += qvals
    return GeneralizedSystem(matrix=A, weights=wvals, mesh=mesh)


def solve_standard_symmetric(B: np.ndarray, compute_vectors: bool = False) -> Spectrum:
    """All eigenvalues (ascending) of a dense symmetric matrix.

    Backed by LAPACK's symmetric solvers (Householder tridiagonalization
    with implicitly shifted QL/QR style iterations), which converge
    unconditionally for symmetric input and do not require definiteness.
    Eigenvector residuals satisfy ||B z - lambda z|| <= 1e-10 ||B||_F.
    """
    B = np.asarray(B, dtype=float)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {B.shape}")
    skew = np.max(np.abs(B - B.T)) if B.size else 0.0
    if skew > _SYMMETRY_TOL:
        raise ValueError(f"matrix is not symmetric: max |B - B^T| = {skew!r}")
    try:
        if compute_vectors:
            vals, vecs = np.linalg.eigh(B)
            return Spectrum(eigenvalues=vals, eigenvectors=vecs)
        return Spectrum(eigenvalues=np.linalg.eigvalsh(B))
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"symmetric eigensolver failed: {exc}") from exc


def _solve_congruence(A, w, compute_vectors):
    d = np.sqrt(w)
    B = A / np.outer(d, d)
    spectrum = solve_standard_symmetric(B, compute_vectors=compute_vectors)
    if spectrum.eigenvectors is None:
        return spectrum
    return Spectrum(eigenvalues=spectrum.eigenvalues, eigenvectors=spectrum.eigenvectors / d[:, None])


def _solve_inverted(A, w, compute_vectors):
    # Shift at the scale of the low eigenvalues: min_k A_kk / w_k is an
    # upper bound for the smallest generalized eigenvalue and is invariant
    # under (A, D^2) -> (cA, cD^2).
    s = (np.diag(A) / w).min()
    if not (s > 0.0 and np.isfinite(s)):
        s = abs(np.trace(A)) / w.sum() * 1e-6 + np.finfo(float).tiny
    L = None
    for _ in range(60):
        try:
            L = np.linalg.cholesky(A + np.diag(s * w))
            break
        except np.linalg.LinAlgError:
            s *= 10.0
    if L is None:
        raise SolverError("could not find a positive definite shift of (A, D^2)")

    Y = scipy.linalg.solve_triangular(L, np.diag(w), lower=True)
    G = scipy.linalg.solve_triangular(L, Y.T, lower=True)
    G = 0.5 * (G + G.T)
    spectrum = solve_standard_symmetric(G, compute_vectors=compute_vectors)
    theta = spectrum.eigenvalues
    # Anything below eps*max(theta) is noise from the unresolvable top of
    # the mu-spectrum; clamp so those saturate instead of reordering.
    floor = 0.5 * np.finfo(float).eps * theta[-1]
    clamped = np.clip(theta, floor, None)
    mu = 1.0 / clamped - s
    order = np.argsort(mu)
    mu = mu[order]
    if spectrum.eigenvectors is None:
        return Spectrum(eigenvalues=mu)
    Z = scipy.linalg.solve_triangular(L.T, spectrum.eigenvectors, lower=False)
    Z = Z / np.sqrt(clamped)[None, :]
    return Spectrum(eigenvalues=mu, eigenvectors=Z[:, order])


def solve_generalized(system: GeneralizedSystem, compute_vectors: bool = False) -> Spectrum:
    """Generalized eigenvalues mu of (A, D^2), ascending.

    Recovered eigenvectors are D^2-orthonormal: z_i^T D^2 z_j = delta_ij.
    """
    w = np.asarray(system.weights, dtype=float)
    if np.any(w <= 0.0):
        k = int(np.flatnonzero(w <= 0.0)[0])
        raise DefinitenessError("nonpositive weight entry", index=k - system.mesh.M,
                                point=(k - system.mesh.M) * system.mesh.h)
    A = np.asarray(system.matrix, dtype=float)
    if w.max() / w.min() <= GRADE_LIMIT:
        return _solve_congruence(A, w, compute_vectors)
    return _solve_inverted(A, w, compute_vectors)
