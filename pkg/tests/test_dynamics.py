import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from genmom import dynamics as dyn
from genmom.exceptions import DivergenceError, InvalidArgumentError
from genmom.objectives import Quadratic, make_problem, make_quadratic
from genmom.spaces import make_mirror


def _quad(n=5, kappa=10.0, L=1.0, mu=1.0, mirror="euclidean_unconstrained"):
    obj = make_quadratic(n, kappa, L)
    m = make_mirror(mirror, n, mu)
    if m.kind == "entropy_simplex":
        return make_problem(obj, m)
    return make_problem(obj, m, x0=np.ones(n))


def test_time_scales():
    e = dyn.TimeScale.exponential(0.7)
    for t in (0.0, 1.3, 4.0):
        assert e.log_rate(t) == 0.7
        assert e.alpha_dot(t) == pytest.approx(0.7 * math.exp(0.7 * t))
    p = dyn.TimeScale.polynomial(2.0)
    assert p.alpha(0.0) == 1.0 and p.alpha(2.0) == 9.0
    assert p.alpha_dot(2.0) == pytest.approx(6.0)
    with pytest.raises(InvalidArgumentError):
        dyn.TimeScale.exponential(0.0)


def test_rhs_examples():
    prob = _quad()
    rng = np.random.default_rng(0)
    ts = dyn.TimeScale.polynomial(1.0)
    ad, mod1 = dyn.accelerated_dynamics(ts), dyn.momentum_dynamics(1.0, ts)
    for _ in range(20):
        t = rng.uniform(0, 5)
        x, z = rng.standard_normal(5), rng.standard_normal(5)
        for u, v in zip(dyn.rhs(ad, t, x, z, prob), dyn.rhs(mod1, t, x, z, prob)):
            np.testing.assert_allclose(u, v, rtol=1e-14, atol=1e-14)
    eta = 0.8
    mod0 = dyn.momentum_dynamics(0.0, dyn.TimeScale.exponential(eta))
    x, z = rng.standard_normal(5), rng.standard_normal(5)
    _, dz = dyn.rhs(mod0, 3.0, x, z, prob)
    np.testing.assert_allclose(dz, -eta * prob.objective.gradient(x), rtol=1e-15)


def test_hd_equilibrium():
    prob = make_problem(Quadratic([1.0, 2.0]), make_mirror("euclidean_unconstrained", 2), x0=np.zeros(2))
    dx, dz = dyn.rhs(dyn.hamiltonian_dynamics(), 0.0, np.zeros(2), np.zeros(2), prob)
    assert not dx.any() and not dz.any()
    tr = dyn.integrate(dyn.hamiltonian_dynamics(), prob, 1.0, 0.01, x0=np.zeros(2), z0=np.zeros(2))
    assert not tr.x.any() and not tr.z.any()
    rep = dyn.avg_gradient_bound_check(tr, 0.0)
    assert rep.max_ratio == 0.0 and rep.passed


def test_momentum_equilibrium_keeps_c_at_zero():
    prob = make_problem(Quadratic([1.0, 2.0]), make_mirror("euclidean_unconstrained", 2), x0=np.zeros(2))
    tr = dyn.integrate(dyn.momentum_dynamics(1.0, dyn.TimeScale.polynomial(2.0)), prob, 2.0, 0.01)
    _, c = dyn.conserved_c(tr)
    assert np.all(c == 0.0)


def test_harmonic_oscillator_closed_form():
    prob = make_problem(Quadratic([1.0]), make_mirror("euclidean_unconstrained", 1), x0=np.array([1.0]))
    tr = dyn.integrate(dyn.hamiltonian_dynamics(), prob, 10.0, 1e-3, x0=np.array([1.0]),
                       z0=np.array([0.0]))
    assert np.max(np.abs(tr.x[:, 0] - np.cos(tr.t))) <= 1e-6
    assert np.max(np.abs(tr.z[:, 0] + np.sin(tr.t))) <= 1e-6
    assert len(tr.t) == 10001 and np.allclose(np.diff(tr.t), 1e-3)


def test_initial_values_of_conserved_quantities():
    prob = _quad()
    ts = dyn.TimeScale.polynomial(2.0)
    tr = dyn.integrate(dyn.momentum_dynamics(1.0, ts), prob, 0.1, 0.01)
    cf = dyn.conserved_cf(tr)
    assert cf[0] == ts.alpha(0.0) * prob.f0 + prob.mirror.conjugate_value(prob.z0)
    idx, c = dyn.conserved_c(tr, [0, 5, 10])
    assert c[0] == 0.0


def test_constant_objective_freezes_dual():
    prob = make_problem(Quadratic(np.zeros(3)), make_mirror("euclidean_unconstrained", 3),
                        x0=np.array([0.5, -1.0, 2.0]))
    tr = dyn.integrate(dyn.momentum_dynamics(0.5, dyn.TimeScale.exponential(1.0)), prob, 2.0, 0.01)
    cf = dyn.conserved_cf(tr)
    assert np.all(tr.z == tr.z[0])
    assert np.max(np.abs(cf - cf[0])) == 0.0


def test_hamiltonian_conserved():
    prob = _quad(L=4.0)
    tr = dyn.integrate(dyn.hamiltonian_dynamics(), prob, 10.0, 1e-3, x0=prob.x0, z0=np.zeros(5))
    H = dyn.conserved_cf(tr)
    assert np.max(np.abs(H - H[0])) <= 1e-6 * prob.scale


@pytest.mark.parametrize("lam,ts", [(0.0, dyn.TimeScale.exponential(1.0)),
                                    (0.5, dyn.TimeScale.exponential(0.5)),
                                    (1.0, dyn.TimeScale.polynomial(2.0)),
                                    (2.0, dyn.TimeScale.polynomial(1.0))])
def test_momentum_conservation_and_order(lam, ts):
    prob = _quad(L=16.0)
    drift, cmax = [], []
    for dt in (2e-3, 1e-3):
        tr = dyn.integrate(dyn.momentum_dynamics(lam, ts), prob, 4.0, dt)
        cf = dyn.conserved_cf(tr)
        drift.append(np.max(np.abs(cf - cf[0])))
        cmax.append(np.max(np.abs(dyn.conserved_c(tr)[1])))
    assert drift[1] <= 1e-5 * prob.scale and cmax[1] <= 1e-4 * prob.scale
    assert drift[1] <= drift[0]
    if drift[1] > 1e-12 * prob.scale:
        assert drift[0] / drift[1] >= 8.0


def test_entropy_momentum_dynamics():
    prob = _quad(mirror="entropy_simplex")
    tr = dyn.integrate(dyn.momentum_dynamics(1.0, dyn.TimeScale.polynomial(2.0)), prob, 5.0, 1e-3)
    np.testing.assert_allclose(tr.x.sum(axis=1), 1.0, atol=1e-12)
    assert np.all(tr.x > 0)
    cf = dyn.conserved_cf(tr)
    assert np.max(np.abs(cf - cf[0])) <= 1e-8
    assert np.max(np.abs(dyn.conserved_c(tr)[1])) <= 1e-6


def test_heavy_ball_second_order_form():
    eta, mu = 1.3, 2.0
    prob = _quad(L=4.0, mu=mu)
    obj = prob.objective
    tr = dyn.integrate(dyn.momentum_dynamics(0.0, dyn.TimeScale.exponential(eta)), prob, 5.0, 1e-3)

    def f(t, Y):
        x, v = Y[:5], Y[5:]
        return np.concatenate([v, -eta * v - eta ** 2 / mu * obj.gradient(x)])

    # x'(0) = eta (z0 / mu - x0) = 0
    sol = solve_ivp(f, (0, 5), np.concatenate([prob.x0, np.zeros(5)]), t_eval=tr.t,
                    method="DOP853", rtol=1e-12, atol=1e-13)
    assert np.max(np.abs(sol.y[:5].T - tr.x)) <= 1e-5


@pytest.mark.parametrize("p", [2.0, 3.0])
def test_damped_inertial_ode(p):
    # alpha = t^p, mu = p, h = alpha^(2/p) / p, started at t = 1
    obj = make_quadratic(5, 10.0, 4.0)
    prob = make_problem(obj, make_mirror("euclidean_unconstrained", 5, p), x0=np.ones(5))
    ts = dyn.TimeScale.polynomial(p, offset=0.0)
    tr = dyn.integrate(dyn.momentum_dynamics(2.0 / p, ts, h_scale=1.0 / p), prob, 5.0, 1e-3, t0=1.0)

    def f(t, Y):
        x, v = Y[:5], Y[5:]
        return np.concatenate([v, -(p + 1) / t * v - obj.gradient(x)])

    sol = solve_ivp(f, (1, 6), np.concatenate([np.ones(5), np.zeros(5)]), t_eval=tr.t,
                    method="DOP853", rtol=1e-12, atol=1e-13)
    assert np.max(np.abs(sol.y[:5].T - tr.x)) <= 1e-4


def test_average_gradient_bound_one_dimensional():
    prob = make_problem(Quadratic([1.0]), make_mirror("euclidean_unconstrained", 1), x0=np.array([1.0]))
    tr = dyn.integrate(dyn.hamiltonian_dynamics(), prob, 20.0, 1e-3, x0=np.array([1.0]), z0=np.zeros(1))
    rep = dyn.average_gradient_check(tr, 0.0)
    assert rep.passed and rep.max_ratio <= 1.0 + 1e-9
    # tight at odd quarter periods, where |sin t| = 1
    assert rep.max_ratio == pytest.approx(1.0, abs=1e-6)
    assert math.cos(rep.worst_t) == pytest.approx(0.0, abs=1e-3)
    # z_t = -int grad f
    np.testing.assert_allclose(tr.z, -tr.grad_integral, atol=1e-12)


def test_average_gradient_bound_hypotheses():
    prob = _quad()
    tr = dyn.integrate(dyn.hamiltonian_dynamics(), prob, 1.0, 0.01, x0=prob.x0, z0=np.ones(5))
    with pytest.raises(InvalidArgumentError):
        dyn.average_gradient_check(tr, 0.0)
    tr2 = dyn.integrate(dyn.momentum_dynamics(1.0, dyn.TimeScale.polynomial(1.0)), prob, 1.0, 0.01)
    with pytest.raises(InvalidArgumentError):
        dyn.average_gradient_check(tr2, 0.0)


def test_integrate_rejects_bad_input():
    prob = _quad()
    mod = dyn.momentum_dynamics(1.0, dyn.TimeScale.polynomial(1.0))
    with pytest.raises(InvalidArgumentError):
        dyn.integrate(mod, prob, 1.0, 0.0)
    with pytest.raises(InvalidArgumentError):
        dyn.integrate(mod, prob, 1.0, 0.3)
    with pytest.raises(InvalidArgumentError):
        dyn.integrate(mod, prob, 1.0, 0.01, x0=np.zeros(5), z0=np.ones(5))
    with pytest.raises(InvalidArgumentError):
        dyn.Dynamics("mod")


def test_divergence_reports_time():
    prob = _quad(L=1e6)
    with pytest.raises(DivergenceError) as info:
        dyn.integrate(dyn.hamiltonian_dynamics(), prob, 10.0, 0.1, x0=prob.x0, z0=np.zeros(5))
    assert "t=" in str(info.value)
