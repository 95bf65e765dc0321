"""Continuous-time momentum dynamics and their conserved quantities.

Three families are supported:

``hd``
    ``x' = grad psi*(z)``, ``z' = -grad f(x)``; conserves ``f(x) + psi*(z)``.
``mod``
    ``x' = (alpha'/alpha)(grad psi*(z) - x)``, ``z' = -h(alpha)(alpha'/alpha) grad f(x)``
    with ``h(alpha) = h_scale * alpha^lam``.
``ad``
    ``mod`` with ``h(alpha) = alpha``.

Integration is fixed-step RK4. The running integrals that appear in the
conserved quantities are appended to the state vector and integrated by the
same RK4 steps, so they carry the integrator's fourth-order accuracy.
"""

from dataclasses import dataclass
import math

import numpy as np

from .exceptions import DivergenceError, InvalidArgumentError

DYNAMICS_KINDS = ("hd", "ad", "mod")


@dataclass(frozen=True)
class TimeScale:
    """Strictly increasing time reparametrization ``alpha_t``.

    ``exponential``: ``alpha_t = exp(eta t)``, so ``alpha'/alpha = eta``.
    ``polynomial``: ``alpha_t = (offset + t)^p``; the default offset 1 gives ``alpha_0 = 1``.
    """

    kind: str
    rate: float
    offset: float = 1.0

    def __post_init__(self):
        if self.kind not in ("exponential", "polynomial"):
            raise InvalidArgumentError(f"unknown time scale {self.kind!r}")
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise InvalidArgumentError("time-scale rate must be positive")

    @classmethod
    def exponential(cls, eta):
        return cls("exponential", float(eta))

    @classmethod
    def polynomial(cls, p, offset=1.0):
        return cls("polynomial", float(p), float(offset))

    def alpha(self, t):
        if self.kind == "exponential":
            return math.exp(self.rate * t)
        return (self.offset + t) ** self.rate

    def log_rate(self, t):
        """``alpha'_t / alpha_t``."""
        if self.kind == "exponential":
            return self.rate
        return self.rate / (self.offset + t)

    def alpha_dot(self, t):
        return self.alpha(t) * self.log_rate(t)


@dataclass(frozen=True)
class Dynamics:
    kind: str
    timescale: TimeScale | None = None
    lam: float = 1.0
    h_scale: float = 1.0

    def __post_init__(self):
        if self.kind not in DYNAMICS_KINDS:
            raise InvalidArgumentError(f"unknown dynamics {self.kind!r}")
        if self.kind != "hd" and self.timescale is None:
            raise InvalidArgumentError(f"{self.kind} dynamics needs a time scale")
        if self.kind == "ad" and self.lam != 1.0:
            raise InvalidArgumentError("ad dynamics has lam = 1; use mod for other values")
        if self.h_scale <= 0:
            raise InvalidArgumentError("h_scale must be positive")

    def h(self, alpha):
        return self.h_scale * alpha ** self.lam


def hamiltonian_dynamics():
    return Dynamics("hd")


def accelerated_dynamics(timescale):
    return Dynamics("ad", timescale, 1.0)


def momentum_dynamics(lam, timescale, h_scale=1.0):
    return Dynamics("mod", timescale, float(lam), float(h_scale))


def rhs(dynamics, t, x, z, problem):
    """Time derivatives ``(x', z')``."""
    obj, mirror = problem.objective, problem.mirror
    g = obj.gradient(x)
    v = mirror.grad_conjugate(z)
    if dynamics.kind == "hd":
        return v, -g
    ts = dynamics.timescale
    r = ts.log_rate(t)
    return r * (v - x), -(dynamics.h(ts.alpha(t)) * r) * g


# layout of the augmented state: x, z, int grad f, int alpha' v, then scalars
_SCALARS = ("f_dh", "h_inner", "f_dbeta", "adot_psi", "adot_zv")


def _augmented(dynamics, problem, n):
    obj, mirror = problem.objective, problem.mirror
    hd = dynamics.kind == "hd"
    ts = dynamics.timescale
    lam = dynamics.lam

    def deriv(t, Y):
        x = Y[:n]
        z = Y[n:2 * n]
        g = obj.gradient(x)
        v = mirror.grad_conjugate(z)
        out = np.empty_like(Y)
        out[2 * n:3 * n] = g
        if hd:
            out[:n] = v
            out[n:2 * n] = -g
            out[3 * n:] = 0.0
            return out
        alpha = ts.alpha(t)
        r = ts.log_rate(t)
        adot = alpha * r
        h = dynamics.h(alpha)
        dh = lam * h * r  # d h(alpha_t) / dt
        f = obj.value(x)
        out[:n] = r * (v - x)
        out[n:2 * n] = -(h * r) * g
        out[3 * n:4 * n] = adot * v
        s = 4 * n
        out[s] = f * dh
        out[s + 1] = h * r * float(g @ x)
        out[s + 2] = f * (dh * alpha + h * adot)  # d(h alpha)/dt * f
        out[s + 3] = adot * mirror.conjugate_value(z)
        out[s + 4] = adot * float(z @ v)
        return out

    return deriv


@dataclass
class Trajectory:
    """Samples of an integrated trajectory.

    ``integrals`` holds, per sample, ``int grad f``, ``int alpha' v`` (both
    vectors) and the scalar integrals named in ``_SCALARS``, all from ``t0``.
    """

    dynamics: Dynamics
    problem: object
    t: np.ndarray
    x: np.ndarray
    z: np.ndarray
    grad_integral: np.ndarray
    adot_v_integral: np.ndarray
    scalars: dict
    dt: float

    @property
    def t0(self):
        return float(self.t[0])

    def f(self):
        return np.array([self.problem.objective.value(x) for x in self.x])


def integrate(dynamics, problem, T, dt, x0=None, z0=None, t0=0.0):
    """Integrate ``dynamics`` from ``t0`` to ``t0 + T`` with fixed-step RK4.

    For ``hd`` any ``x0`` may be paired with ``z0``; for ``ad``/``mod`` the
    start must satisfy ``x0 = grad psi*(z0)``. Defaults come from ``problem``.

    Raises
    ------
    DivergenceError
        If the state becomes non-finite.
    """
    if not (dt > 0 and T >= 0):
        raise InvalidArgumentError("need dt > 0 and T >= 0")
    mirror = problem.mirror
    n = mirror.dimension
    z0 = problem.z0 if z0 is None else mirror.space.check(z0, "z0")
    x0 = mirror.grad_conjugate(z0) if x0 is None else mirror.space.check(x0, "x0")
    if dynamics.kind == "hd" and mirror.constrained:
        raise InvalidArgumentError("hd dynamics needs an unconstrained mirror map")
    if dynamics.kind != "hd":
        if np.max(np.abs(mirror.grad_conjugate(z0) - x0)) > 1e-12 * max(1.0, np.max(np.abs(x0))):
            raise InvalidArgumentError("momentum dynamics needs x0 = grad psi*(z0)")
    steps = int(round(T / dt))
    if abs(steps * dt - T) > 1e-9 * max(1.0, T):
        raise InvalidArgumentError("T must be a multiple of dt")
    deriv = _augmented(dynamics, problem, n)
    size = 4 * n + len(_SCALARS)
    Y = np.zeros(size)
    Y[:n] = x0
    Y[n:2 * n] = z0
    out = np.empty((steps + 1, size))
    out[0] = Y
    t = t0
    for i in range(1, steps + 1):
        # blow-up is reported below as DivergenceError, not as a numpy warning
        with np.errstate(over="ignore", invalid="ignore"):
            k1 = deriv(t, Y)
            k2 = deriv(t + 0.5 * dt, Y + (0.5 * dt) * k1)
            k3 = deriv(t + 0.5 * dt, Y + (0.5 * dt) * k2)
            k4 = deriv(t + dt, Y + dt * k3)
            Y = Y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t = t0 + i * dt
        if not np.all(np.isfinite(Y[:2 * n])):
            raise DivergenceError(f"non-finite state at t={t:g}", k=i)
        out[i] = Y
    times = t0 + dt * np.arange(steps + 1)
    s = 4 * n
    scalars = {name: out[:, s + j].copy() for j, name in enumerate(_SCALARS)}
    return Trajectory(dynamics, problem, times, out[:, :n].copy(), out[:, n:2 * n].copy(),
                      out[:, 2 * n:3 * n].copy(), out[:, 3 * n:4 * n].copy(), scalars, dt)


def conserved_cf(traj):
    """The function-value invariant at every sample.

    For ``hd`` this is the Hamiltonian ``f(x) + psi*(z)``. Otherwise
    ``h(alpha_t) f(x_t) - int f d h(alpha) + int h(alpha)(alpha'/alpha)<grad f, x> + psi*(z_t)``.
    """
    mirror = traj.problem.mirror
    f = traj.f()
    psi = np.array([mirror.conjugate_value(z) for z in traj.z])
    if traj.dynamics.kind == "hd":
        return f + psi
    ts = traj.dynamics.timescale
    h = np.array([traj.dynamics.h(ts.alpha(t)) for t in traj.t])
    return h * f - traj.scalars["f_dh"] + traj.scalars["h_inner"] + psi


def checkpoint_indices(traj, count=20):
    """``count`` sample indices evenly spread over ``(t0, t_end]``."""
    m = len(traj.t) - 1
    return np.unique(np.round(np.linspace(0, m, count + 1)[1:]).astype(int))


def conserved_c(traj, indices=None):
    """The second invariant ``C_t`` (identically zero) at the given sample indices.

    ``C_t = beta_t f(x_t) - beta_0 f(x_0) - int beta' f + alpha_0 D(z_t, z_0)
    + int D(z_t, z_s) alpha'_s ds`` with ``beta = h(alpha) alpha``. The last
    integral is expanded into running integrals of ``alpha' psi*(z)``,
    ``alpha' v`` and ``alpha' <z, v>``.
    """
    if traj.dynamics.kind == "hd":
        raise InvalidArgumentError("C_t is defined for momentum dynamics")
    if indices is None:
        indices = checkpoint_indices(traj)
    ts = traj.dynamics.timescale
    mirror = traj.problem.mirror
    obj = traj.problem.objective
    t0 = traj.t0
    a0 = ts.alpha(t0)
    beta0 = traj.dynamics.h(a0) * a0
    f0 = obj.value(traj.x[0])
    z0 = traj.z[0]
    vals = []
    for i in indices:
        t = traj.t[i]
        a = ts.alpha(t)
        zt = traj.z[i]
        beta = traj.dynamics.h(a) * a
        sweep = ((a - a0) * mirror.conjugate_value(zt) - traj.scalars["adot_psi"][i]
                 - float(zt @ traj.adot_v_integral[i]) + traj.scalars["adot_zv"][i])
        vals.append(beta * obj.value(traj.x[i]) - beta0 * f0 - traj.scalars["f_dbeta"][i]
                    + a0 * mirror.bregman_dual(zt, z0) + sweep)
    return np.asarray(indices), np.array(vals)


@dataclass(frozen=True)
class AverageGradientReport:
    max_ratio: float  # max over samples of measured / bound
    tolerance: float
    worst_t: float

    @property
    def passed(self):
        return self.max_ratio <= 1.0 + self.tolerance


def average_gradient_check(traj, f_opt, conj_modulus=None, tolerance=0.01):
    """Check ``||(1/t) int grad f||_* <= sqrt(2 (f(x0) - f*) / m) / t`` along ``hd``.

    ``conj_modulus`` is the strong convexity ``m`` of ``psi*`` in the dual
    norm; by default ``1/mu`` for the Euclidean map, where
    ``psi*(z) = ||z||^2 / (2 mu)``. Needs ``z0 = 0``.
    """
    if traj.dynamics.kind != "hd":
        raise InvalidArgumentError("the average-gradient bound is for hd dynamics")
    if f_opt is None:
        raise InvalidArgumentError("the average-gradient bound needs a known optimum")
    mirror = traj.problem.mirror
    if conj_modulus is None:
        if mirror.kind != "euclidean_unconstrained":
            raise InvalidArgumentError("give conj_modulus for non-Euclidean mirror maps")
        conj_modulus = 1.0 / mirror.mu
    if np.any(traj.z[0] != 0.0):
        raise InvalidArgumentError("the average-gradient bound needs z0 = 0")
    space = traj.problem.mirror.space
    f0 = traj.problem.objective.value(traj.x[0])
    bound_num = math.sqrt(2.0 * max(f0 - f_opt, 0.0) / conj_modulus)
    worst, worst_t = 0.0, float(traj.t[0])
    for t, gi in zip(traj.t[1:], traj.grad_integral[1:]):
        elapsed = t - traj.t0
        lhs = space.dual_norm(gi) / elapsed
        bound = bound_num / elapsed
        ratio = lhs / bound if bound > 0 else (0.0 if lhs == 0 else math.inf)
        if ratio > worst:
            worst, worst_t = ratio, float(t)
    return AverageGradientReport(worst, tolerance, worst_t)


avg_gradient_bound_check = average_gradient_check
