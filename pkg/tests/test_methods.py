import math

import numpy as np
import pytest

from genmom import methods
from genmom.exceptions import BoxExitError, DivergenceError, UnsupportedGeometryError
from genmom.methods import averaged_iterate, run
from genmom.objectives import DoubleWell, Quadratic, make_problem, make_quadratic
from genmom.schedules import ScheduleParams, build_schedule
from genmom.spaces import make_mirror


def _quad(n=8, kappa=100.0, mirror="euclidean_unconstrained", mu=1.0, **kw):
    obj = make_quadratic(n, kappa)
    m = make_mirror(mirror, n, mu, **kw)
    if m.kind == "entropy_simplex":
        return make_problem(obj, m)
    x0 = np.ones(n) if m.kind != "euclidean_ball" else np.full(n, 0.5 / math.sqrt(n))
    return make_problem(obj, m, x0=x0)


def _xs(result):
    return np.array(result.history.x)


# scalar oracles

def test_gmd_f_scalar_oracle_lambda1():
    # f = x^2 / 2, psi* = z^2 / 2, lambda = 1, c mu / L = 1, x0 = z0 = 1
    prob = make_problem(Quadratic([1.0]), make_mirror("euclidean_unconstrained", 1), x0=np.array([1.0]))
    res = run(prob, "gmd_f", 30, lam=1.0, c=1.0, track_ck=True)
    A, H = 1.0, 1.0
    x = y = z = 1.0
    for k in range(1, 31):
        a = (1.0 + math.sqrt(1.0 + 4.0 * A)) / 2.0  # positive root of a^2 = A + a
        A_new = A + a
        H_prev, H = H, A_new
        t = a / A_new
        r = H_prev / H
        x = (r * y + t * z) / (r + t)
        z_new = z - H * t * x
        y = x + t * (z_new - z)
        z, A = z_new, A_new
        if k == 1:
            assert a == pytest.approx((1 + math.sqrt(5)) / 2, rel=1e-15)
            assert x == 1.0
        # iterates start at 1, so 1e-12 is relative to the initial scale
        assert res.history.x[k][0] == pytest.approx(x, abs=1e-12)
        assert res.history.y[k][0] == pytest.approx(y, abs=1e-12)
        assert res.history.z[k][0] == pytest.approx(z, abs=1e-12)


def test_gmd_scalar_oracle_lambda0():
    # c mu / L = 0.25 gives a_k / A_k = 1/2 and H = 1
    prob = make_problem(Quadratic([2.0]), make_mirror("euclidean_unconstrained", 1),
                        x0=np.array([1.5]))
    res = run(prob, "gmd", 20, lam=0.0, c=0.5, track_ck=True)
    x = y = z = 1.5
    for k in range(1, 21):
        x = 0.5 * y + 0.5 * z
        z_new = z - 0.5 * 2.0 * x
        y = x + 0.5 * (z_new - z)
        z = z_new
        assert res.history.x[k][0] == pytest.approx(x, abs=1e-12)
        assert res.history.y[k][0] == pytest.approx(y, abs=1e-12)


def test_gmd_b_exact_corrector_on_ideal_quadratic():
    prob = make_problem(Quadratic([3.0]), make_mirror("euclidean_unconstrained", 1), x0=np.array([1.0]))
    res = run(prob, "gmd_b", 5, lam=1.0, c=0.5, track_ck=True)
    np.testing.assert_allclose(np.array(res.history.y[1:]), 0.0, atol=1e-15)


# fixed points

@pytest.mark.parametrize("method", methods.METHODS)
def test_zero_gradient_is_a_fixed_point(method):
    obj = Quadratic(np.zeros(3))
    prob = make_problem(obj, make_mirror("euclidean_unconstrained", 3), x0=np.array([1.0, -2.0, 3.0]))
    s = build_schedule(ScheduleParams(1.0, 0.5, 1.0, 1.0), 50)
    res = run(prob, method, 50, schedule=s, track_ck=True)
    for arr in (res.history.x, res.history.y, res.history.z):
        np.testing.assert_array_equal(np.array(arr), np.tile(arr[0], (51, 1)))


# equivalences and identities

def test_gmd_equals_gmd_f_at_lambda1():
    prob = _quad()
    a = run(prob, "gmd", 100, lam=1.0, c=0.5, track_ck=True)
    b = run(prob, "gmd_f", 100, lam=1.0, c=0.5, track_ck=True)
    assert np.max(np.abs(_xs(a) - _xs(b))) <= 1e-12
    assert np.max(np.abs(np.array(a.history.y) - np.array(b.history.y))) <= 1e-12


@pytest.mark.parametrize("lam", [0.0, 1.0, 2.0])
def test_gmd_b_equals_gmd_at_c1(lam):
    obj = make_quadratic(8, 100.0)
    prob = make_problem(obj, make_mirror("euclidean_unconstrained", 8, 0.9), x0=np.ones(8))
    a = run(prob, "gmd", 100, lam=lam, c=1.0, track_ck=True)
    b = run(prob, "gmd_b", 100, lam=lam, c=1.0, track_ck=True)
    assert np.max(np.abs(_xs(a) - _xs(b))) <= 1e-10


def test_gmd_b_differs_from_gmd_below_c1():
    prob = _quad()
    a = run(prob, "gmd", 50, lam=1.0, c=0.5, track_ck=True)
    b = run(prob, "gmd_b", 50, lam=1.0, c=0.5, track_ck=True)
    assert np.max(np.abs(_xs(a) - _xs(b))) > 1e-3


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 2.0])
def test_gmd_y_is_weighted_mean_of_mirror_points(lam):
    prob = _quad()
    r = run(prob, "gmd", 200, lam=lam, c=0.5, track_ck=True)
    s = r.schedule
    log_w = []
    for k in range(201):
        # (1/A_k) sum_i a_i v_i built independently of the running mean in the state
        log_w.append(s.logA[k] + math.log(s.theta[k]) if k else s.logA[0])
        w = np.exp(np.array(log_w) - s.logA[k])
        mean = (w[:, None] * np.array(r.history.v[: k + 1])).sum(axis=0)
        y = r.history.y[k]
        assert np.max(np.abs(y - mean)) <= 1e-9 * max(1.0, np.max(np.abs(mean)))


def test_lambda0_gmd_is_constant_momentum_on_gradient_steps():
    # with theta constant, y_k = x_k - (theta^2 / mu) grad f(x_k) and
    # x_{k+1} = y_k + (1 - theta)(y_k - y_{k-1})
    prob = _quad(mu=1.5)
    r = run(prob, "gmd", 100, lam=0.0, c=0.5, track_ck=True)
    theta = r.schedule.theta[1]
    mu = prob.mu
    xs, ys, gs = _xs(r), np.array(r.history.y), np.array(r.history.grad)
    np.testing.assert_allclose(ys[1:], xs[1:] - theta ** 2 / mu * gs[1:], atol=1e-13)
    for k in range(1, 100):
        pred = ys[k] + (1 - theta) * (ys[k] - ys[k - 1])
        assert np.max(np.abs(xs[k + 1] - pred)) <= 1e-12


# feasibility

@pytest.mark.parametrize("mirror,kw", [("entropy_simplex", {}), ("euclidean_ball", {"radius": 0.51})])
def test_gmd_f_stays_feasible(mirror, kw):
    obj = make_quadratic(8, 100.0)
    # z0 far outside the ball puts x0 on its boundary, so the projection is active
    prob = make_problem(obj, make_mirror(mirror, 8, 1.0, **kw), z0=np.full(8, 3.0))
    r = run(prob, "gmd_f", 500, lam=1.0, c=0.5, track_ck=True)
    m = prob.mirror
    for k in range(501):
        for pt in (r.history.x[k], r.history.y[k]):
            assert m.is_feasible(pt, tol=1e-9)
    assert m.is_feasible(averaged_iterate(r.state, r.schedule), tol=1e-9)


def test_averaged_iterate_reduces_to_y_at_lambda1():
    prob = _quad()
    r = run(prob, "gmd_f", 40, lam=1.0, c=0.5)
    # weights theta_i H_i - h_i = a_i - a_i vanish up to roundoff
    assert r.state.xhat_weight <= 1e-12 * r.schedule.H[40]
    np.testing.assert_allclose(averaged_iterate(r.state, r.schedule), r.state.y, atol=1e-14)
    r0 = run(prob, "gmd_f", 0, lam=1.0, c=0.5)
    np.testing.assert_array_equal(averaged_iterate(r0.state, r0.schedule), prob.x0)


def test_averaged_iterate_weights_nonnegative():
    for lam in (0.0, 0.3, 0.7, 1.0):
        s = build_schedule(ScheduleParams(lam, 0.5, 1.0, 1.0), 500)
        w = s.theta[1:] * s.H[1:] - s.h[1:]
        assert np.all(w >= -1e-12 * s.H[1:])


# run loop

def test_budget_zero_and_running_min():
    prob = _quad()
    assert len(run(prob, "gmd_f", 0, lam=1.0, c=0.5).trace) == 1
    tr = run(prob, "gmd_f", 1000, lam=1.0, c=0.5).trace
    g = tr.column("min_grad_sq")
    assert np.all(np.diff(g) <= 0)
    np.testing.assert_allclose(g, np.minimum.accumulate(tr.column("grad_norm_dual") ** 2))


def test_runs_are_deterministic():
    prob = _quad()
    a = run(prob, "gmd_b", 200, lam=0.5, c=0.5).trace
    b = run(prob, "gmd_b", 200, lam=0.5, c=0.5).trace
    assert a.records == b.records


def test_geometry_errors():
    e = _quad(mirror="entropy_simplex")
    for method in ("gmd", "gmd_b"):
        with pytest.raises(UnsupportedGeometryError, match="X ≡ E"):
            run(e, method, 5, lam=1.0, c=0.5)
    run(e, "gmd_f", 5, lam=1.0, c=0.5)


def test_gmd_b_runs_in_p_norm_geometry():
    prob = _quad(mirror="squared_p_norm", p=1.5)
    r = run(prob, "gmd_b", 300, lam=1.0, c=0.5)
    assert r.trace.column("gap")[-1] < 1e-2 * r.trace.column("gap")[0]


def test_nan_gradient_raises_divergence_with_partial_trace():
    class Bad(Quadratic):
        def gradient(self, x):
            g = super().gradient(x)
            return g * np.nan if abs(x[0]) < 0.9 else g

    prob = make_problem(Bad([1.0, 1.0]), make_mirror("euclidean_unconstrained", 2), x0=np.ones(2))
    with pytest.raises(DivergenceError) as info:
        run(prob, "gmd", 100, lam=1.0, c=1.0)
    err = info.value
    assert err.k >= 1 and len(err.trace) == err.k
    assert np.all(np.isfinite(err.state.x))


def test_box_exit_is_reported():
    # deliberately inconsistent schedule: steps sized for L = 0.1 on a problem with L = 11
    prob = make_problem(DoubleWell(), make_mirror("euclidean_unconstrained", 2), x0=np.array([1.9, 1.9]))
    s = build_schedule(ScheduleParams(0.0, 0.9, 1.0, 1.0), 100)
    with pytest.raises(BoxExitError):
        run(prob, "gmd", 100, schedule=s)


def test_history_cap_disables_ck():
    prob = _quad()
    with pytest.warns(UserWarning, match="cap"):
        r = run(prob, "gmd", 30, lam=1.0, c=0.5, track_ck=True, history_cap=10)
    E = r.trace.column("E")
    assert np.all(np.isfinite(E[1:11])) and np.all(np.isnan(E[11:]))
    assert len(r.history) == 11
