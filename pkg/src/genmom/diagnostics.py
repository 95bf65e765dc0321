"""Traces, conserved and bounded quantities, and checks of the convergence bounds.

Two quantities are tracked along a run:

``C_f`` (all methods)
    ``H_k f(y_k) - sum_{i>=1} h_i f(x_i) + sum_{i>=1} H_i theta_i <grad f(x_i), x_i> + psi*(z_k)``,
    nonincreasing for convex ``f`` whenever ``H_k theta_k^2 <= mu / L``.
``C`` (optional)
    ``B_k f(y_k) - sum_{i<=k} b_i f(y_i) + sum_{i<=k} a_i D(z_k, z_i)`` with ``C_0 = 0``;
    its increments ``E_k`` obey the error bounds checked by :func:`check_error_bound`.
"""

from dataclasses import dataclass, fields
import math

import numpy as np

from .exceptions import InvalidArgumentError, InvalidConfigError

CSV_COLUMNS = ("k", "f_y", "f_x", "grad_norm_dual", "min_grad_sq", "gap", "A", "H", "B", "C_f", "E")


@dataclass(frozen=True)
class TraceRecord:
    k: int
    f_y: float
    f_x: float
    grad_norm_dual: float
    min_grad_sq: float
    gap: float | None
    A: float | None
    H: float | None
    B: float | None
    C_f: float | None
    E: float | None = None
    C: float | None = None
    f_xhat: float | None = None


class Trace:
    """Ordered list of :class:`TraceRecord` with column access."""

    def __init__(self, records=None, meta=None):
        self.records = list(records or [])
        self.meta = dict(meta or {})

    def __len__(self):
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def append(self, record):
        self.records.append(record)

    def column(self, name):
        """Column as a float array; missing values become ``nan``."""
        if name not in {f.name for f in fields(TraceRecord)}:
            raise InvalidArgumentError(f"unknown trace column {name!r}")
        return np.array([np.nan if getattr(r, name) is None else getattr(r, name)
                         for r in self.records], dtype=float)


class History:
    """Per-iteration iterates kept for the O(k) diagnostics."""

    def __init__(self):
        self.x, self.y, self.z, self.v, self.grad = [], [], [], [], []
        self.f_x, self.f_y, self.psi_star = [], [], []

    def __len__(self):
        return len(self.z)

    def append(self, state, objective, mirror):
        self.x.append(state.x)
        self.y.append(state.y)
        self.z.append(state.z)
        self.v.append(state.v)
        self.grad.append(state.grad)
        self.f_x.append(objective.value(state.x))
        self.f_y.append(objective.value(state.y))
        self.psi_star.append(mirror.conjugate_value(state.z))


def averaged_iterate(state, schedule):
    """Convex combination of ``y_k`` and ``x_1..x_k`` with weights ``H_k`` and ``theta_i H_i - h_i``."""
    Hk = schedule.H[state.k]
    return (Hk * state.y + state.xhat_num) / (Hk + state.xhat_weight)


class TraceBuilder:
    """Builds trace records step by step for :func:`genmom.methods.run`."""

    def __init__(self, problem, schedule, method, track_ck=False):
        self.problem = problem
        self.schedule = schedule
        self.method = method
        self.track_ck = track_ck
        self.obj = problem.objective
        self.mirror = problem.mirror
        self.space = problem.mirror.space

    def disable_ck(self):
        self.track_ck = False

    def _gap(self, value):
        f_opt = self.problem.f_opt
        return None if f_opt is None else value - f_opt

    def start(self, state):
        s = self.schedule
        f_y = self.obj.value(state.y)
        f_x = self.obj.value(state.x)
        gn = self.space.dual_norm(state.grad)
        self.min_grad_sq = gn * gn
        self.sum_hf = 0.0
        self.sum_inner = 0.0
        self.f_y_prev = f_y
        self.C = 0.0
        self.trace = Trace(meta={"method": self.method, "lam": s.params.lam, "c": s.params.c})
        self.trace.append(TraceRecord(
            0, f_y, f_x, gn, self.min_grad_sq, self._gap(f_x), s.A[0], s.H[0], s.B[0],
            s.H[0] * f_y + self.mirror.conjugate_value(state.z),
            None, 0.0 if self.track_ck else None, f_x))
        return self.trace

    def step(self, prev, new):
        s = self.schedule
        k = new.k
        f_y = self.obj.value(new.y)
        f_x = self.obj.value(new.x)
        gn = self.space.dual_norm(new.grad)
        self.min_grad_sq = min(self.min_grad_sq, gn * gn)
        theta = s.theta[k]
        self.sum_hf += s.h[k] * f_x
        self.sum_inner += s.H[k] * theta * float(new.grad @ new.x)
        psi = self.mirror.conjugate_value(new.z)
        c_f = s.H[k] * f_y - self.sum_hf + self.sum_inner + psi
        if self.method == "gmd_f":
            f_hat = self.obj.value(averaged_iterate(new, s))
            gap = self._gap(f_hat)
        else:
            f_hat = None
            gap = self._gap(f_y)
        E = C = None
        if self.track_ck:
            E = e_increment(self.mirror, s, k, self.f_y_prev, f_y, prev, new)
            self.C += E
            C = self.C
        self.f_y_prev = f_y
        self.trace.append(TraceRecord(k, f_y, f_x, gn, self.min_grad_sq, gap,
                                      s.A[k], s.H[k], s.B[k], c_f, E, C, f_hat))


def e_increment(mirror, schedule, k, f_y_prev, f_y, prev, new):
    """``E_k = C_k - C_{k-1}`` evaluated without differencing large sums.

    Uses ``sum_{i<k} a_i [D(z_k, z_i) - D(z_{k-1}, z_i)]
    = A_{k-1} D(z_k, z_{k-1}) + A_{k-1} <z_k - z_{k-1}, v_{k-1} - vbar_{k-1}>``.
    """
    A_prev = schedule.A[k - 1]
    dz = new.z - prev.z
    bregman_part = A_prev * (mirror.bregman_dual(new.z, prev.z)
                             + float(dz @ (prev.v - prev.vbar)))
    return schedule.B[k - 1] * (f_y - f_y_prev) + bregman_part


# history-based quantities

def _check_history(history, k):
    if not 0 <= k < len(history):
        raise InvalidArgumentError(f"k={k} outside the stored history (length {len(history)})")


def bregman_sum(history, schedule, mirror, i, upto=None):
    """``sum_{j < upto} a_j D(z_i, z_j)``; ``upto`` defaults to ``i``."""
    _check_history(history, i)
    upto = i if upto is None else upto
    zi = history.z[i]
    return float(sum(schedule.a[j] * mirror.bregman_dual(zi, history.z[j]) for j in range(upto)))


def compute_ck(history, schedule, mirror, k):
    """``C_k`` evaluated directly from its definition (O(k) Bregman evaluations)."""
    _check_history(history, k)
    f_y = np.asarray(history.f_y[: k + 1])
    return (schedule.B[k] * f_y[k] - float(schedule.b[: k + 1] @ f_y)
            + bregman_sum(history, schedule, mirror, k))


def structural_identity_residual(history, schedule, mirror, k):
    """Residual of the averaging identity for ``(1/B_k) sum_i b_i f(y_i)``.

    The identity reads ``(1/B_k) sum_{i<=k} b_i f(y_i) = f(y_0)
    - sum_{i=1}^k (1/B_{i-1} - 1/B_i) sum_{j<i} a_j D(z_i, z_j)
    + sum_{i=1}^k (1/B_{i-1} - 1/B_k) E_i`` and holds for any iterates.
    """
    _check_history(history, k)
    B, b = schedule.B, schedule.b
    f_y = np.asarray(history.f_y[: k + 1])
    lhs = float(b[: k + 1] @ f_y) / B[k]
    C = np.array([compute_ck(history, schedule, mirror, i) for i in range(k + 1)])
    E = np.diff(C)
    i = np.arange(1, k + 1)
    sums = np.array([bregman_sum(history, schedule, mirror, j) for j in i])
    rhs = (f_y[0] - float(np.sum((1.0 / B[i - 1] - 1.0 / B[i]) * sums))
           + float(np.sum((1.0 / B[i - 1] - 1.0 / B[k]) * E)))
    return abs(lhs - rhs)


@dataclass(frozen=True)
class BoundCheck:
    """Worst slack (bound minus measured value) of an inequality over a range of k."""

    name: str
    min_slack: float
    tolerance: float
    worst_k: int

    @property
    def passed(self):
        return self.min_slack >= -self.tolerance


def _finish_check(name, slacks, ks, tol):
    slacks = np.asarray(slacks, dtype=float)
    j = int(np.argmin(slacks))
    return BoundCheck(name, float(slacks[j]), tol, int(ks[j]))


def error_bound_slacks(result, eps_H, form):
    """Slack of the per-step bound on ``E_k`` for each stored ``k >= 1``.

    ``form="bregman"`` bounds ``E_k`` by ``-(1-c) A_{k-1} D(z_{k-1}, z_k)``
    and ``form="gradient"`` by ``-(1-c) B_{k-1} ||grad f(x_k)||_*^2 / (2L)``;
    both add ``B_{k-1} (eps_H / 2) ||x_k - y_{k-1}||^2``.

    Returns ``(ks, slack, raw)``. ``raw`` is bound minus ``E_k``; ``slack``
    is the same inequality divided by ``B_{k-1}``, which puts it in units of
    ``f`` and keeps it meaningful when ``B_k`` grows geometrically.
    """
    if form not in ("bregman", "gradient"):
        raise InvalidArgumentError("form must be 'bregman' or 'gradient'")
    h, s, mirror = result.history, result.schedule, result.problem.mirror
    space = mirror.space
    c, L = s.params.c, s.params.L
    E = result.trace.column("E")
    ks = np.arange(1, len(h))
    slack, raw = [], []
    for k in ks:
        Bp = s.B[k - 1]
        drift = 0.5 * eps_H * space.norm(h.x[k] - h.y[k - 1]) ** 2
        if form == "bregman":
            # A_{k-1} / B_{k-1} = 1 / H_k
            main = -(1.0 - c) * mirror.bregman_dual(h.z[k - 1], h.z[k]) / s.H[k]
        else:
            main = -(1.0 - c) * space.dual_norm(h.grad[k]) ** 2 / (2.0 * L)
        slack.append(main + drift - E[k] / Bp)
        raw.append(Bp * (main + drift) - E[k])
    return ks, np.array(slack), np.array(raw)


def check_error_bound(result, eps_H, form, tol):
    ks, slack, _ = error_bound_slacks(result, eps_H, form)
    return _finish_check(f"E_k bound ({form})", slack, ks, tol)


def check_extrapolation_bound(result, tol):
    """``||x_k - y_{k-1}||^2 / 2 <= theta_k^2 / (mu A_{k-1}) sum_{i<=k-2} a_i D(z_{k-1}, z_i)``."""
    h, s, mirror = result.history, result.schedule, result.problem.mirror
    mu = mirror.modulus
    ks = np.arange(1, len(h))
    slacks = []
    for k in ks:
        lhs = 0.5 * mirror.space.norm(h.x[k] - h.y[k - 1]) ** 2
        rhs = (s.theta[k] ** 2 / (mu * s.A[k - 1])
               * bregman_sum(h, s, mirror, k - 1, upto=k - 1))
        slacks.append(rhs - lhs)
    return _finish_check("extrapolation distance", slacks, ks, tol)


def two_point_gap(a, b, u, delta):
    """``a ||u + delta||^2 + b ||u||^2 - (ab / (a + b)) ||delta||^2``, nonnegative for ``a, b > 0``.

    Zero exactly at ``u = -(a / (a + b)) delta``.
    """
    u = np.asarray(u, dtype=float)
    delta = np.asarray(delta, dtype=float)
    w = u + delta
    return a * float(w @ w) + b * float(u @ u) - a * b / (a + b) * float(delta @ delta)


def gradient_pairing_weights(schedule, i):
    """Weights ``nu_1..nu_i`` with ``sum_{j<i} a_j D(z_i, z_j) >= (1/2mu) sum_j nu_j ||grad f(x_j)||^2``.

    Each term ``a_j ||z_j - z_i||^2`` is split in halves and neighbouring
    halves are paired through :func:`two_point_gap`, giving
    ``nu_j = a_{j-1} a_j / (2 (a_{j-1} + a_j)) (theta_j H_j)^2`` for ``j < i`` and
    ``nu_i = a_{i-1} (theta_i H_i)^2 / 2``.
    """
    if i < 1:
        raise InvalidArgumentError("i must be at least 1")
    a = schedule.a
    j = np.arange(1, i + 1)
    step2 = (schedule.theta[j] * schedule.H[j]) ** 2
    nu = 0.5 * a[j - 1] * a[j] / (a[j - 1] + a[j]) * step2
    nu[-1] = 0.5 * a[i - 1] * step2[-1]
    return nu


def check_gradient_pairing(result, i, tol):
    """Check the Euclidean lower bound of ``sum_{j<i} a_j D(z_i, z_j)`` by gradient norms."""
    h, s, mirror = result.history, result.schedule, result.problem.mirror
    if mirror.kind != "euclidean_unconstrained":
        raise InvalidConfigError("the pairing bound needs psi* = ||z||^2 / (2 mu)")
    lhs = bregman_sum(h, s, mirror, i)
    g2 = np.array([float(g @ g) for g in h.grad[1: i + 1]])
    rhs = float(gradient_pairing_weights(s, i) @ g2) / (2.0 * mirror.modulus)
    return BoundCheck(f"gradient pairing (i={i})", lhs - rhs, tol, i)


def check_min_gradient_bound(result, c_prime, tol):
    """Check the weighted bound on Bregman sums and gradient norms at the last stored k.

    ``c' sum_i (1/B_{i-1} - 1/B_i) sum_{j<i} a_j D(z_i, z_j)
    + c(1-c)/(2L) sum_i (1 - B_{i-1}/B_k) ||grad f(x_i)||_*^2``
    is at most ``f(x_0) - f*`` when the weight condition holds with ``c'``
    (see :func:`genmom.schedules.condition_margin`).
    """
    h, s, prob = result.history, result.schedule, result.problem
    if prob.f_opt is None:
        raise InvalidArgumentError("the bound needs a known optimum")
    k = len(h) - 1
    B = s.B
    c, L = s.params.c, s.params.L
    i = np.arange(1, k + 1)
    breg = np.array([bregman_sum(h, s, prob.mirror, j) for j in i])
    g2 = np.array([prob.mirror.space.dual_norm(h.grad[j]) ** 2 for j in i])
    lhs = (c_prime * float(np.sum((1.0 / B[i - 1] - 1.0 / B[i]) * breg))
           + c * (1.0 - c) / (2.0 * L) * float(np.sum((1.0 - B[i - 1] / B[k]) * g2)))
    rhs = h.f_y[0] - prob.f_opt
    return BoundCheck("min-gradient bound", rhs - lhs, tol, k)


def value_bound_check(result, tol):
    """Check ``f(xhat_k) - f* <= (H_0 (f(x_0) - f*) + D(x*, x_0)) / (H_0 + sum_i theta_i H_i)``.

    For ``lambda = 0`` the denominator is ``1 + k sqrt(c mu / L)``.
    """
    prob, s, trace = result.problem, result.schedule, result.trace
    if result.method != "gmd_f":
        raise InvalidArgumentError("the value bound is stated for gmd_f")
    if prob.f_opt is None or prob.x_opt is None:
        raise InvalidArgumentError("the value bound needs a known minimizer")
    gap = trace.column("gap")
    ks = np.arange(len(trace))
    numer = s.H[0] * (prob.f0 - prob.f_opt) + prob.mirror.bregman_primal(prob.x_opt, prob.x0)
    theta_H = np.concatenate([[0.0], s.theta[1:] * s.H[1:]])[: len(trace)]
    denom = s.H[0] + np.cumsum(theta_H)
    return _finish_check("function value bound", numer / denom - gap, ks, tol)


def smallest_rate_constant(trace, power=2.0, k_min=1):
    """``max_{k >= k_min} k^power * gap_k``, the smallest K with ``gap_k <= K / k^power``."""
    gap = trace.column("gap")
    ks = np.arange(len(gap))
    m = ks >= k_min
    return float(np.max(ks[m] ** power * gap[m]))


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    k_lo: int
    k_hi: int
    residual: float


def fit_rate(values, ks=None, k_range=None, tail=0.5):
    """Least-squares slope of ``log(values)`` against ``log(k)``.

    Parameters
    ----------
    values : array_like
        Positive quantities, e.g. a trace column.
    ks : array_like, optional
        Matching iteration indices; defaults to ``0..len(values)-1``.
    k_range : (int, int), optional
        Inclusive window. Defaults to the last ``tail`` fraction of ``k >= 1``.

    Returns ``None`` when the window holds a nonpositive or non-finite value
    or fewer than three points.
    """
    values = np.asarray(values, dtype=float)
    ks = np.arange(values.size) if ks is None else np.asarray(ks, dtype=float)
    if k_range is None:
        k_hi = ks.max()
        k_range = (max(1.0, math.floor(k_hi * (1.0 - tail))), k_hi)
    m = (ks >= k_range[0]) & (ks <= k_range[1]) & (ks > 0)
    vals, kk = values[m], ks[m]
    if vals.size < 3 or not np.all(np.isfinite(vals)) or np.any(vals <= 0):
        return None
    X = np.log(kk)
    Y = np.log(vals)
    slope, intercept = np.polyfit(X, Y, 1)
    res = float(np.sqrt(np.mean((Y - (slope * X + intercept)) ** 2)))
    return RateFit(float(slope), float(intercept), int(kk[0]), int(kk[-1]), res)
