import math

import numpy as np
import pytest

from slsolve import (AssemblyError, DefinitenessError, GeneralizedSystem,
                     MeshConfig, assemble, builtin, de_mesh, map_catalog,
                     solve_generalized, solve_standard_symmetric,
                     transform_problem, transformed)
from slsolve.meshing import DecayProfile


def charpoly_roots(A, w):
    """Brute-force generalized eigenvalues for dimension <= 3.

    Samples det(A - mu diag(w)) at dim+1 nodes, fits the exact-degree
    polynomial, and returns its sorted real roots.
    """
    dim = A.shape[0]
    nodes = np.linspace(-1.0, 1.0, dim + 1) * (np.abs(A).max() / min(w) + 1.0)
    dets = [np.linalg.det(A - mu * np.diag(w)) for mu in nodes]
    coeffs = np.polyfit(nodes, dets, dim)
    return np.sort(np.roots(coeffs).real)


def anyprofile():
    return DecayProfile.se(alpha=1.0, rho_decay=1.0, d=1.0)


def test_assemble_one_point_system():
    m = map_catalog("real_line", "DE")
    tp = transform_problem(m, lambda x: 0.0, lambda x: 1.0, anyprofile())
    system = assemble(tp, MeshConfig(h=1.0, M=0, N=0))
    assert system.matrix.shape == (1, 1)
    assert system.matrix[0, 0] == pytest.approx(math.pi**2 / 3.0 - 0.5, abs=1e-14)
    assert system.matrix[0, 0] == pytest.approx(2.7898681336964526, abs=1e-14)
    assert system.weights[0] == pytest.approx(1.0, abs=1e-16)


def test_assemble_dimension_and_symmetry():
    problem = builtin("laguerre", alpha=3.0)
    tp = transformed(problem, "de")
    system = assemble(tp, MeshConfig(h=0.11, M=4, N=7))
    assert system.matrix.shape == (12, 12)
    assert np.max(np.abs(system.matrix - system.matrix.T)) == 0.0


def test_assemble_reports_failing_point():
    m = map_catalog("real_line", "SE")
    tp = transform_problem(m, lambda x: math.log(x), lambda x: 1.0, anyprofile())
    with pytest.raises(AssemblyError) as info:
        assemble(tp, MeshConfig(h=0.5, M=4, N=4))
    assert info.value.index == -4
    assert info.value.point == -2.0


def test_standard_solver_examples():
    spectrum = solve_standard_symmetric(np.diag([3.0, 1.0, 2.0]))
    np.testing.assert_allclose(spectrum.eigenvalues, [1.0, 2.0, 3.0], atol=1e-14)
    spectrum = solve_standard_symmetric(np.array([[0.0, 1.0], [1.0, 0.0]]))
    np.testing.assert_allclose(spectrum.eigenvalues, [-1.0, 1.0], atol=1e-14)
    spectrum = solve_standard_symmetric(np.array([[2.0, 1.0], [1.0, 2.0]]))
    np.testing.assert_allclose(spectrum.eigenvalues, [1.0, 3.0], atol=1e-14)


def test_standard_solver_rejects_asymmetric():
    with pytest.raises(ValueError):
        solve_standard_symmetric(np.array([[0.0, 1.0], [0.5, 0.0]]))


def test_standard_solver_residuals():
    rng = np.random.default_rng(3)
    B = rng.standard_normal((40, 40))
    B = 0.5 * (B + B.T)
    spectrum = solve_standard_symmetric(B, compute_vectors=True)
    norm = np.linalg.norm(B, "fro")
    for i in range(40):
        z = spectrum.eigenvectors[:, i]
        residual = np.linalg.norm(B @ z - spectrum.eigenvalues[i] * z)
        assert residual <= 1e-10 * norm


def test_generalized_trivial_cases():
    mesh = MeshConfig(h=1.0, M=1, N=1)
    spectrum = solve_generalized(GeneralizedSystem(np.eye(3), np.ones(3), mesh))
    np.testing.assert_allclose(spectrum.eigenvalues, np.ones(3), atol=1e-14)
    spectrum = solve_generalized(GeneralizedSystem(
        np.diag([1.0, 2.0, 3.0]), np.array([1.0, 4.0, 9.0]), mesh))
    np.testing.assert_allclose(spectrum.eigenvalues, [1.0 / 3.0, 0.5, 1.0], atol=1e-14)


def test_generalized_two_by_two_against_characteristic_polynomial():
    # det(A - mu D^2) = 4 mu^2 - 10 mu + 3
    A = np.array([[2.0, 1.0], [1.0, 2.0]])
    w = np.array([1.0, 4.0])
    disc = math.sqrt(100.0 - 48.0)
    expected = np.array([(10.0 - disc) / 8.0, (10.0 + disc) / 8.0])
    np.testing.assert_allclose(expected, [0.34861218113400277, 2.1513878188659972], rtol=1e-15)
    mesh = MeshConfig(h=1.0, M=0, N=1)
    spectrum = solve_generalized(GeneralizedSystem(A, w, mesh))
    np.testing.assert_allclose(spectrum.eigenvalues, expected, rtol=1e-13)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_generalized_matches_charpoly_oracle(dim):
    rng = np.random.default_rng(100 + dim)
    mesh = MeshConfig(h=1.0, M=0, N=dim - 1)
    for _ in range(30):
        A = rng.standard_normal((dim, dim))
        A = 0.5 * (A + A.T)
        w = rng.uniform(0.5, 2.0, size=dim)
        spectrum = solve_generalized(GeneralizedSystem(A, w, mesh))
        oracle = charpoly_roots(A, w)
        np.testing.assert_allclose(spectrum.eigenvalues, oracle, rtol=1e-10, atol=1e-10)


def test_generalized_rejects_nonpositive_weight():
    mesh = MeshConfig(h=1.0, M=1, N=1)
    with pytest.raises(DefinitenessError):
        solve_generalized(GeneralizedSystem(np.eye(3), np.array([1.0, 0.0, 1.0]), mesh))


def _bessel_system(n, balanced=True):
    problem = builtin("bessel", n=7)
    tp = transformed(problem, "de")
    mesh = de_mesh(problem.de_profile, n)
    if not balanced:
        mesh = MeshConfig(h=mesh.h, M=n, N=n)
    return assemble(tp, mesh)


def test_scaling_invariance_congruence_route():
    system = _bessel_system(8, balanced=False)
    base = solve_generalized(system).eigenvalues
    scaled = solve_generalized(GeneralizedSystem(
        1e4 * system.matrix, 1e4 * system.weights, system.mesh)).eigenvalues
    np.testing.assert_allclose(scaled, base, rtol=1e-12)


def test_scaling_invariance_graded_route():
    system = _bessel_system(15, balanced=True)
    assert system.weights.max() / system.weights.min() > 1e8
    base = solve_generalized(system).eigenvalues[:6]
    scaled = solve_generalized(GeneralizedSystem(
        1e4 * system.matrix, 1e4 * system.weights, system.mesh)).eigenvalues[:6]
    np.testing.assert_allclose(scaled, base, rtol=1e-12)


def test_low_spectrum_real_and_positive():
    for n in (5, 9, 14):
        spectrum = solve_generalized(_bessel_system(n))
        assert spectrum.eigenvalues.dtype.kind == "f"
        assert spectrum.eigenvalues[0] > 0.0
        assert np.all(np.diff(spectrum.eigenvalues) >= 0.0)


def test_generalized_eigenvector_orthogonality():
    system = _bessel_system(15)
    spectrum = solve_generalized(system, compute_vectors=True)
    Z = spectrum.eigenvectors[:, :5]
    gram = Z.T @ (system.weights[:, None] * Z)
    np.testing.assert_allclose(gram, np.eye(5), atol=1e-8)


def test_generalized_eigenvector_residuals_low_end():
    system = _bessel_system(12)
    spectrum = solve_generalized(system, compute_vectors=True)
    A, w = system.matrix, system.weights
    for i in range(4):
        z = spectrum.eigenvectors[:, i]
        mu = spectrum.eigenvalues[i]
        residual = np.linalg.norm(A @ z - mu * (w * z))
        scale = np.linalg.norm(A @ z) + abs(mu) * np.linalg.norm(w * z)
        assert residual <= 1e-8 * scale
