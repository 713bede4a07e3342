import numpy as np
import pytest

from fwaccel import (InnerSubproblem, QuadraticObjective, Schedule, Simplex,
                     afista_run, exact_projection_solver, generate_instance,
                     horizon_for_accuracy, inner_dual_gap, lambda_of, nu_of,
                     omega_gap, y_update)


class TestSchedules:
    @pytest.mark.parametrize("t,a,expected", [(1, 5, 1.0), (6, 5, 2.0), (3, 2, 2.0)])
    def test_lambda_values(self, t, a, expected):
        assert lambda_of(t, a) == pytest.approx(expected)

    def test_lambda_monotone(self):
        lams = [lambda_of(t) for t in range(1, 200)]
        assert lams[0] == 1.0
        assert all(b > a for a, b in zip(lams, lams[1:]))

    def test_nu_example(self):
        sched = Schedule(T=2, beta=1.0, D0=1.0)
        assert nu_of(1, sched) == pytest.approx(1.0 / (1.0 + np.log(2.0)), abs=1e-5)
        assert nu_of(1, sched) == pytest.approx(0.59061, abs=1e-5)

    def test_nu_at_horizon(self):
        sched = Schedule(T=37, beta=1.0, D0=1.0)
        lam = lambda_of(37)
        assert nu_of(37, sched) == pytest.approx(
            1.0 / (lam ** 2 * 37 * (1.0 + np.log(37))))

    def test_nu_quadratic_in_D0(self):
        base = Schedule(T=10, beta=3.0, D0=1.0)
        double = Schedule(T=10, beta=3.0, D0=2.0)
        for t in range(1, 11):
            assert nu_of(t, double) == pytest.approx(4.0 * nu_of(t, base))

    def test_nu_overflow(self):
        sched = Schedule(T=5, beta=1.0, D0=1.0)
        with pytest.raises(ValueError):
            nu_of(6, sched)

    def test_nu_nonincreasing(self):
        sched = Schedule(T=100, beta=2.0, D0=1.4)
        nus = [nu_of(t, sched) for t in range(1, 101)]
        assert all(v > 0 for v in nus)
        assert all(b <= a for a, b in zip(nus, nus[1:]))

    def test_horizon_for_accuracy(self):
        T = horizon_for_accuracy(1e-3, beta=10.0, D0=np.sqrt(2))
        lam = lambda_of(T)
        assert 1.5 * 10.0 * 2.0 / lam ** 2 <= 1e-3
        if T > 2:
            lam_prev = lambda_of(T - 1)
            assert 1.5 * 10.0 * 2.0 / lam_prev ** 2 > 1e-3


class TestYUpdate:
    def test_no_momentum_at_t1(self):
        x1 = np.array([0.2, 0.8])
        x0 = np.array([0.5, 0.5])
        assert np.allclose(y_update(x1, x0, 1), x1)

    def test_stationary(self):
        x = np.array([0.3, 0.7])
        assert np.allclose(y_update(x, x, 9), x)

    def test_coefficient_value(self):
        # a=5, t=6: (lam_6 - 1)/lam_7 = (2 - 1)/(11/5) = 5/11
        x1 = np.array([1.0])
        x0 = np.array([0.0])
        assert y_update(x1, x0, 6)[0] == pytest.approx(1.0 + 5.0 / 11.0)


def make_subproblem(rng, n=4, lam=2.0, beta=3.0):
    g = rng.standard_normal(n)
    y = rng.standard_normal(n) * 0.3 + 1.0 / n
    x_prev = np.abs(rng.standard_normal(n))
    x_prev /= x_prev.sum()
    return InnerSubproblem(g, y, x_prev, lam, beta)


class TestInnerSubproblem:
    def test_phi_gradient_consistency(self):
        rng = np.random.default_rng(0)
        sub = make_subproblem(rng)
        x = rng.standard_normal(4)
        h = 1e-6
        for i in range(4):
            e = np.zeros(4)
            e[i] = h
            num = (sub.phi(x + e) - sub.phi(x - e)) / (2 * h)
            assert abs(num - sub.grad_phi(x)[i]) <= 1e-6

    def test_Phi_gradient_consistency(self):
        rng = np.random.default_rng(1)
        sub = make_subproblem(rng)
        w = rng.standard_normal(4)
        h = 1e-6
        for i in range(4):
            e = np.zeros(4)
            e[i] = h
            num = (sub.Phi(w + e) - sub.Phi(w - e)) / (2 * h)
            assert abs(num - sub.grad_Phi(w)[i]) <= 1e-6

    def test_Phi_strong_convexity_and_smoothness(self):
        rng = np.random.default_rng(2)
        for _ in range(50):
            sub = make_subproblem(rng, lam=float(rng.uniform(1, 5)))
            mu = sub.beta / sub.lam ** 2
            w, wp = rng.standard_normal((2, 4))
            d = wp - w
            gap = sub.Phi(wp) - sub.Phi(w) - float(np.vdot(sub.grad_Phi(w), d))
            half_d2 = 0.5 * float(np.vdot(d, d))
            assert gap >= mu * half_d2 - 1e-8
            assert gap <= mu * half_d2 + 1e-8

    def test_mix_is_feasible_combination(self):
        rng = np.random.default_rng(3)
        sub = make_subproblem(rng)
        fset = Simplex(4)
        w = fset.project(rng.standard_normal(4))
        assert fset.contains(sub.mix(w))


class TestOmegaGap:
    def test_nonpositive_at_exact_minimizer(self):
        rng = np.random.default_rng(4)
        fset = Simplex(4)
        for _ in range(20):
            sub = make_subproblem(rng)
            x_opt = fset.project(sub.y_prev - sub.grad_snapshot / sub.beta)
            assert omega_gap(sub, x_opt, fset) <= 1e-9

    def test_equals_fw_gap_at_t1(self):
        rng = np.random.default_rng(5)
        fset = Simplex(4)
        sub = make_subproblem(rng, lam=1.0)
        x = fset.project(rng.standard_normal(4))
        g = sub.grad_phi(x)
        fw_gap = float(np.vdot(x, g)) - float(np.vdot(fset.loo(g), g))
        assert omega_gap(sub, x, fset) == pytest.approx(fw_gap, abs=1e-12)

    def test_matches_grid_enumeration_2d(self):
        rng = np.random.default_rng(6)
        fset = Simplex(2)
        for _ in range(10):
            sub = make_subproblem(rng, n=2)
            x = fset.project(rng.standard_normal(2))
            g = sub.grad_phi(x)
            # enumerate w over a fine grid of the 1-simplex
            ts = np.linspace(0, 1, 20001)
            ws = np.stack([ts, 1 - ts], axis=1)
            mixes = (1 - 1 / sub.lam) * sub.x_prev + (1 / sub.lam) * ws
            grid_val = np.max((x - mixes) @ g)
            assert omega_gap(sub, x, fset) == pytest.approx(grid_val, abs=1e-7)


class TestInnerDualGap:
    def test_nonnegative_and_tight_at_minimizer(self):
        rng = np.random.default_rng(7)
        fset = Simplex(5)
        for _ in range(50):
            sub = make_subproblem(rng, n=5)
            w = fset.project(rng.standard_normal(5))
            assert inner_dual_gap(sub, w, fset) >= -1e-12
        # projected gradient to the Phi minimizer, then a near-zero gap
        sub = make_subproblem(rng, n=5)
        w = np.full(5, 0.2)
        for _ in range(200000):
            w_new = fset.project(w - sub.grad_Phi(w) / sub.curv)
            if np.linalg.norm(w_new - w) <= 1e-14:
                w = w_new
                break
            w = w_new
        assert inner_dual_gap(sub, w, fset) <= 1e-9

    def test_slide_identity(self):
        # omega at the mixed point equals the Phi Wolfe gap at w
        rng = np.random.default_rng(8)
        fset = Simplex(6)
        for _ in range(100):
            sub = make_subproblem(rng, n=6, lam=float(rng.uniform(1, 4)))
            w = fset.project(rng.standard_normal(6))
            x = sub.mix(w)
            assert omega_gap(sub, x, fset) == pytest.approx(
                inner_dual_gap(sub, w, fset), abs=1e-9)


class TestAfistaRun:
    def test_singleton_domain(self):
        fset = Simplex(1)
        obj = QuadraticObjective(np.array([[2.0]]), np.array([1.0]), beta=2.0)
        sched = Schedule(T=10, beta=2.0, D0=1.0)
        trace = afista_run(obj, fset, exact_projection_solver(), sched,
                           np.array([1.0]), f_star=obj.value(np.array([1.0])))
        assert all(row.error == 0.0 for row in trace.rows)

    def test_fo_count_equals_T(self):
        inst = generate_instance(10, 2, 1.0, 5.0, seed=0)
        fset = Simplex(10)
        sched = Schedule(T=10, beta=inst.beta, D0=fset.diameter)
        trace = afista_run(inst.objective(), fset, exact_projection_solver(),
                           sched, np.full(10, 0.1), f_star=inst.f_star)
        assert trace.rows[-1].fo == 10
        assert [row.fo for row in trace.rows] == list(range(1, 11))

    def test_error_envelope_with_exact_inner(self):
        fset = Simplex(50)
        D0 = fset.diameter
        inst = generate_instance(50, 5, 1.0, 10.0, seed=3)
        sched = Schedule(T=100, beta=inst.beta, D0=D0)
        trace = afista_run(inst.objective(), fset, exact_projection_solver(),
                           sched, np.full(50, 1 / 50), f_star=inst.f_star)
        for row in trace.rows:
            if row.outer_iter < 2:
                continue
            lam = lambda_of(row.outer_iter)
            assert row.error <= 1.5 * inst.beta * D0 ** 2 / lam ** 2 + 1e-9
            assert row.dist_half_sq <= 4.0 * D0 ** 2 / lam ** 2 + 1e-9

    def test_counters_nondecreasing(self):
        inst = generate_instance(12, 3, 0.5, 4.0, seed=1)
        fset = Simplex(12)
        sched = Schedule(T=20, beta=inst.beta, D0=fset.diameter)
        from fwaccel import afw_solver
        trace = afista_run(inst.objective(), fset, afw_solver(), sched,
                           np.full(12, 1 / 12), f_star=inst.f_star)
        for prev, row in zip(trace.rows, trace.rows[1:]):
            assert row.fo >= prev.fo
            assert row.loo >= prev.loo
            assert row.sparse_proj >= prev.sparse_proj
            assert row.loo_equiv >= prev.loo_equiv
