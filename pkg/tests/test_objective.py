import numpy as np
import pytest

from fwaccel import (QuadraticObjective, Simplex, exact_line_search,
                     finite_diff_check, generate_instance, golden_section,
                     load_instance, save_instance)


@pytest.fixture(scope="module")
def instance():
    return generate_instance(30, 5, 0.5, 10.0, seed=42)


class TestGenerator:
    def test_deterministic(self, instance):
        other = generate_instance(30, 5, 0.5, 10.0, seed=42)
        assert np.array_equal(instance.A, other.A)
        assert np.array_equal(instance.b, other.b)
        assert np.array_equal(instance.x_star, other.x_star)
        assert instance.f_star == other.f_star

    def test_top_eigenvalue_is_beta(self, instance):
        # power iteration, independent of the eigendecomposition route
        v = np.ones(30) / np.sqrt(30)
        for _ in range(2000):
            v = instance.A @ v
            v /= np.linalg.norm(v)
        lam = float(v @ (instance.A @ v))
        assert abs(lam - instance.beta) / instance.beta <= 1e-6

    def test_planted_gradient(self, instance):
        g = instance.A @ instance.x_star + instance.b
        off = np.delete(g, instance.support)
        assert np.max(np.abs(g[instance.support])) <= 1e-9
        assert np.max(np.abs(off - instance.delta)) <= 1e-9

    def test_complementarity_margin(self, instance):
        g = instance.A @ instance.x_star + instance.b
        off_min = np.min(np.delete(g, instance.support))
        on_max = np.max(np.abs(g[instance.support]))
        assert off_min - on_max >= instance.delta - 1e-9

    def test_delta_zero_gradient_vanishes(self):
        inst = generate_instance(10, 3, 0.0, 5.0, seed=1)
        g = inst.A @ inst.x_star + inst.b
        assert np.max(np.abs(g)) <= 1e-9

    def test_x_star_feasible_and_sparse(self, instance):
        fset = Simplex(30)
        assert fset.contains(instance.x_star)
        assert fset.sparsity_of(instance.x_star) <= instance.r - 1

    def test_fw_gap_zero_at_optimum(self, instance):
        g = instance.A @ instance.x_star + instance.b
        gap = float(instance.x_star @ g) - float(g.min())
        assert abs(gap) <= 1e-9

    def test_f_star_matches_projected_gradient(self):
        inst = generate_instance(5, 2, 0.5, 10.0, seed=7)
        fset = Simplex(5)
        x = np.full(5, 0.2)
        step = 1.0 / inst.beta
        for _ in range(500000):
            g = inst.A @ x + inst.b
            x_new = fset.project(x - step * g)
            if np.linalg.norm((x - x_new) / step) <= 1e-12:
                x = x_new
                break
            x = x_new
        f_pg = 0.5 * x @ (inst.A @ x) + inst.b @ x
        assert abs(f_pg - inst.f_star) <= 1e-10

    def test_invalid_args(self):
        with pytest.raises(ValueError):
            generate_instance(5, 6, 0.0, 1.0, seed=0)
        with pytest.raises(ValueError):
            generate_instance(5, 2, 0.0, -1.0, seed=0)


class TestQuadraticObjective:
    def test_identity_example(self):
        obj = QuadraticObjective(np.eye(3), np.zeros(3))
        e1 = np.array([1.0, 0.0, 0.0])
        v, g = obj.value_and_gradient(e1)
        assert v == pytest.approx(0.5)
        assert np.allclose(g, e1)

    def test_incremental_gradient_matches_fresh(self, instance):
        obj = instance.objective()
        rng = np.random.default_rng(0)
        x = np.full(30, 1.0 / 30)
        g = obj.gradient(x)
        for _ in range(1000):
            j = int(rng.integers(30))
            gamma = float(rng.uniform(0, 1))
            g = obj.incremental_gradient(g, gamma, j)
            e = np.zeros(30)
            e[j] = 1.0
            x = (1 - gamma) * x + gamma * e
            assert np.max(np.abs(g - obj.gradient(x))) <= 1e-10

    def test_gradient_is_beta_lipschitz(self, instance):
        obj = instance.objective()
        rng = np.random.default_rng(1)
        for _ in range(100):
            x, y = rng.standard_normal((2, 30))
            lhs = np.linalg.norm(obj.gradient(x) - obj.gradient(y))
            assert lhs <= (obj.beta + 1e-6) * np.linalg.norm(x - y)


class TestLineSearch:
    def test_zero_slope(self):
        obj = QuadraticObjective(np.eye(1), np.zeros(1))
        assert exact_line_search(obj, np.zeros(1), np.ones(1), 1.0) == 0.0

    def test_interior_minimizer(self):
        obj = QuadraticObjective(np.eye(1), np.array([-0.3]))
        gamma = exact_line_search(obj, np.zeros(1), np.ones(1), 1.0)
        assert gamma == pytest.approx(0.3)

    def test_matches_golden_section(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            M = rng.standard_normal((5, 5))
            obj = QuadraticObjective(M @ M.T + np.eye(5), rng.standard_normal(5))
            w = rng.standard_normal(5)
            s = rng.standard_normal(5)
            closed = exact_line_search(obj, w, s, 1.0)
            golden = golden_section(lambda g: obj.value(w + g * s), 0.0, 1.0)
            assert abs(closed - golden) <= 1e-6

    def test_negative_gamma_max_rejected(self):
        obj = QuadraticObjective(np.eye(2), np.zeros(2))
        with pytest.raises(ValueError):
            exact_line_search(obj, np.zeros(2), np.ones(2), -1.0)


class TestFiniteDiff:
    def test_quadratic_gradient(self, instance):
        obj = instance.objective()
        rng = np.random.default_rng(3)
        for _ in range(5):
            assert finite_diff_check(obj, rng.standard_normal(30)) <= 1e-5

    def test_identity_quadratic(self):
        obj = QuadraticObjective(np.eye(4), np.zeros(4))
        rng = np.random.default_rng(4)
        assert finite_diff_check(obj, rng.standard_normal(4)) <= 1e-6

    def test_constant_function(self):
        obj = QuadraticObjective(np.zeros((3, 3)), np.zeros(3))
        assert finite_diff_check(obj, np.ones(3)) == 0.0


def test_instance_round_trip(tmp_path, instance):
    path = tmp_path / "inst.npz"
    save_instance(instance, path)
    back = load_instance(path)
    assert np.array_equal(back.A, instance.A)
    assert np.array_equal(back.b, instance.b)
    assert np.array_equal(back.x_star, instance.x_star)
    assert back.f_star == instance.f_star
    assert (back.n, back.r, back.delta, back.beta, back.seed) == (
        instance.n, instance.r, instance.delta, instance.beta, instance.seed)
