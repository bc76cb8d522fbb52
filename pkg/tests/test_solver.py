import numpy as np
import pytest
import scipy.sparse as sp

from wg_shishkin.analytic import ExactSolution
from wg_shishkin.assembly import assemble_system
from wg_shishkin.mesh import MeshParams, build_mesh
from wg_shishkin.solver import SolverError, solve_spd

RNG = np.random.default_rng(31415)


def random_spd(dim):
    m = RNG.standard_normal((dim, dim))
    a = m @ m.T + dim * np.eye(dim)  # diagonally dominant
    return sp.csr_matrix(a)


class TestBasics:
    @pytest.mark.parametrize("method", ["direct", "pcg"])
    def test_identity(self, method):
        rhs = RNG.standard_normal(10)
        x, report = solve_spd(sp.identity(10, format="csr"), rhs, method)
        assert x == pytest.approx(rhs, rel=1e-14)
        assert report.iterations <= 1

    @pytest.mark.parametrize("method", ["direct", "pcg"])
    def test_two_by_two(self, method):
        matrix = sp.csr_matrix(np.array([[2.0, 1.0], [1.0, 2.0]]))
        x, _ = solve_spd(matrix, np.array([3.0, 3.0]), method)
        assert x == pytest.approx([1.0, 1.0], rel=1e-12)

    def test_zero_rhs(self):
        x, report = solve_spd(random_spd(5), np.zeros(5))
        assert np.all(x == 0.0)
        assert report.rel_residual == 0.0

    def test_rejects_unknown_method(self):
        with pytest.raises(ValueError):
            solve_spd(random_spd(3), np.ones(3), method="gmres")

    def test_rejects_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_spd(random_spd(3), np.ones(4))


class TestFailureModes:
    def test_singular_matrix(self):
        matrix = sp.csr_matrix(np.array([[1.0, 1.0], [1.0, 1.0]]))
        with pytest.raises(SolverError):
            solve_spd(matrix, np.array([1.0, 2.0]))

    def test_indefinite_matrix_direct(self):
        matrix = sp.csr_matrix(np.diag([1.0, -1.0, 2.0]))
        with pytest.raises(SolverError):
            solve_spd(matrix, np.ones(3), method="direct")

    def test_indefinite_matrix_pcg(self):
        matrix = sp.csr_matrix(np.diag([1.0, -1.0, 2.0]))
        with pytest.raises(SolverError):
            solve_spd(matrix, np.ones(3), method="pcg")


class TestCrossMethodAgreement:
    @pytest.mark.parametrize("dim", [20, 97, 200])
    def test_random_spd(self, dim):
        matrix = random_spd(dim)
        rhs = RNG.standard_normal(dim)
        x_direct, rep_d = solve_spd(matrix, rhs, "direct", tol=1e-12)
        x_pcg, rep_p = solve_spd(matrix, rhs, "pcg", tol=1e-12)
        rel = np.linalg.norm(x_direct - x_pcg) / np.linalg.norm(x_direct)
        assert rel < 1e-9
        assert rep_p.iterations > 0

    def test_reported_residual_is_recomputed(self):
        matrix = random_spd(50)
        rhs = RNG.standard_normal(50)
        x, report = solve_spd(matrix, rhs, "pcg", tol=1e-10)
        independent = np.linalg.norm(rhs - matrix @ x) / np.linalg.norm(rhs)
        assert independent <= 2.0 * max(report.rel_residual, 1e-300)
        assert report.rel_residual <= 1e-10


class TestOnDiscreteSystem:
    def test_spec_case_reaches_1e12_by_both_methods(self):
        mesh = build_mesh(MeshParams(n=8, eps=1e-3, k=3))
        sol = ExactSolution(1, 1e-3)
        system = assemble_system(mesh, 3, 1e-3, sol.forcing)
        x_direct, rep_d = solve_spd(system.matrix, system.rhs, "direct",
                                    tol=1e-12)
        x_pcg, rep_p = solve_spd(system.matrix, system.rhs, "pcg", tol=1e-12)
        assert rep_d.rel_residual <= 1e-12
        assert rep_p.rel_residual <= 1e-12
        rel = np.linalg.norm(x_direct - x_pcg) / np.linalg.norm(x_direct)
        assert rel < 1e-9
