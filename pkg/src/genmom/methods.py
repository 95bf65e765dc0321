"""Discrete generalized momentum methods.

Three steppers share the dual update ``z_k = z_{k-1} - H_k theta_k grad f(x_k)``
with ``theta_k = a_k / A_k`` and differ in how ``x_k`` and ``y_k`` are formed:

* ``gmd_f``: extrapolation weighted by ``H_{k-1}/H_k``; works with any mirror map.
* ``gmd``: ``x_k = (A_{k-1}/A_k) y_{k-1} + theta_k v_{k-1}``; unconstrained maps only.
* ``gmd_b``: ``x_k`` built from the running mean of ``v_i`` and ``y_k`` a
  steepest-descent step from ``x_k``; unconstrained Euclidean or l_p maps.

Here ``v_k = grad_conjugate(z_k)``.
"""

from dataclasses import dataclass
import warnings

import numpy as np

from . import diagnostics
from .diagnostics import averaged_iterate  # noqa: F401  (re-exported)
from .exceptions import BoxExitError, DivergenceError, InvalidArgumentError, UnsupportedGeometryError
from .schedules import ScheduleParams, build_schedule

METHODS = ("gmd_f", "gmd", "gmd_b")


@dataclass(frozen=True)
class IterateState:
    """Iterates after step ``k``.

    ``vbar`` is the weighted mean ``(1/A_k) sum_i a_i v_i``. ``xhat_num`` and
    ``xhat_weight`` accumulate the non-negative weights ``theta_i H_i - h_i``
    of the averaged iterate.
    """

    k: int
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    v: np.ndarray
    grad: np.ndarray
    vbar: np.ndarray
    xhat_num: np.ndarray
    xhat_weight: float


def initial_state(problem):
    z = problem.z0.copy()
    x = problem.mirror.grad_conjugate(z)
    g = problem.objective.gradient(x)
    return IterateState(0, x, x.copy(), z, x.copy(), g, x.copy(), np.zeros_like(x), 0.0)


def _dual_step(state, schedule, problem, x, k):
    g = problem.objective.gradient(x)
    theta = schedule.theta[k]
    z = state.z - (schedule.H[k] * theta) * g
    if not np.isfinite(z).all():
        raise FloatingPointError("non-finite dual iterate")
    v = problem.mirror.grad_conjugate(z)
    return g, theta, z, v


def _finish(state, schedule, k, x, y, z, v, g, theta):
    vbar = state.vbar + theta * (v - state.vbar)
    w = max(theta * schedule.H[k] - schedule.h[k], 0.0)
    return IterateState(k, x, y, z, v, g, vbar, state.xhat_num + w * x, state.xhat_weight + w)


def gmd_f_step(state, schedule, problem):
    k = state.k + 1
    theta = schedule.theta[k]
    r = schedule.H[k - 1] / schedule.H[k]
    # (r y + theta v) / (r + theta), written so that v == y gives x == y exactly
    x = state.y + (theta / (r + theta)) * (state.v - state.y)
    g, theta, z, v = _dual_step(state, schedule, problem, x, k)
    y = x + theta * (v - state.v)
    return _finish(state, schedule, k, x, y, z, v, g, theta)


def gmd_step(state, schedule, problem):
    k = state.k + 1
    theta = schedule.theta[k]
    x = state.y + theta * (state.v - state.y)
    g, theta, z, v = _dual_step(state, schedule, problem, x, k)
    y = x + theta * (v - state.v)
    return _finish(state, schedule, k, x, y, z, v, g, theta)


def gmd_b_step(state, schedule, problem):
    k = state.k + 1
    theta = schedule.theta[k]
    x = state.y + theta * (state.v - state.vbar)
    g, theta, z, v = _dual_step(state, schedule, problem, x, k)
    y = problem.mirror.space.steepest_descent(x, g, problem.objective.L)
    return _finish(state, schedule, k, x, y, z, v, g, theta)


STEPPERS = {"gmd_f": "gmd_f_step", "gmd": "gmd_step", "gmd_b": "gmd_b_step"}


def get_stepper(method):
    if method not in STEPPERS:
        raise InvalidArgumentError(f"unknown method {method!r}; expected one of {METHODS}")
    # looked up at call time so a patched stepper is picked up
    return globals()[STEPPERS[method]]


def check_geometry(method, mirror):
    """Raise if ``method`` is not defined for ``mirror``."""
    if method not in METHODS:
        raise InvalidArgumentError(f"unknown method {method!r}; expected one of {METHODS}")
    if method in ("gmd", "gmd_b") and mirror.constrained:
        raise UnsupportedGeometryError(
            f"{method} requires an unconstrained feasible set (X ≡ E); "
            f"{mirror.kind} is constrained")
    if method == "gmd_b" and mirror.space.norm_kind == "ell1_simplex":
        raise UnsupportedGeometryError("gmd_b does not support l1/l_inf geometry")


@dataclass
class RunResult:
    method: str
    problem: object
    schedule: object
    trace: "diagnostics.Trace"
    state: IterateState
    history: "diagnostics.History | None"


def run(problem, method, iters, lam=None, c=None, a0=1.0, schedule=None,
        track_ck=False, history_cap=2000):
    """Run a discrete method for ``iters`` steps and record a trace.

    Either ``schedule`` or ``(lam, c)`` must be given; in the latter case
    the schedule uses the mirror modulus and the objective's ``L``.

    With ``track_ck`` the dual history is stored (up to ``history_cap``
    iterations) and the per-step increment ``E_k`` of the bounded quantity
    ``C_k`` is recorded. Beyond the cap those columns are left empty.

    Raises
    ------
    DivergenceError
        If an iterate becomes non-finite or leaves the objective's box. The
        exception carries the iteration index, last valid state and partial trace.
    """
    check_geometry(method, problem.mirror)
    if schedule is None:
        if lam is None or c is None:
            raise InvalidArgumentError("give a schedule or both lam and c")
        schedule = build_schedule(ScheduleParams(lam, c, problem.mu, problem.L, a0), iters)
    elif schedule.k_max < iters:
        raise InvalidArgumentError("schedule is shorter than the number of iterations")
    if method == "gmd_f" and schedule.params.lam > 1.0:
        warnings.warn("gmd_f is analysed for lambda in [0, 1]", stacklevel=2)
    step = get_stepper(method)
    obj, mirror = problem.objective, problem.mirror

    state = initial_state(problem)
    rec = diagnostics.TraceBuilder(problem, schedule, method, track_ck)
    history = diagnostics.History() if track_ck else None
    if history is not None:
        history.append(state, obj, mirror)
    trace = rec.start(state)
    warned = False
    for k in range(1, iters + 1):
        try:
            # overflow is reported as DivergenceError below, not as a numpy warning
            with np.errstate(over="ignore", invalid="ignore"):
                new = step(state, schedule, problem)
        except (FloatingPointError, OverflowError) as err:
            raise DivergenceError(f"arithmetic failure at k={k}: {err}", k=k,
                                  state=state, trace=trace) from err
        if not (np.all(np.isfinite(new.x)) and np.all(np.isfinite(new.y))
                and np.all(np.isfinite(new.z))):
            raise DivergenceError(f"non-finite iterate at k={k}", k=k, state=state, trace=trace)
        if obj.box is not None and not (obj.in_box(new.x) and obj.in_box(new.y)):
            raise BoxExitError(f"iterate left the box of {obj.name} at k={k}", k=k,
                               state=state, trace=trace)
        if history is not None:
            if k <= history_cap:
                history.append(new, obj, mirror)
            elif not warned:
                warnings.warn(f"dual history cap {history_cap} reached; "
                              "C_k diagnostics disabled from here on", stacklevel=2)
                warned = True
                rec.disable_ck()
        with np.errstate(over="ignore", invalid="ignore"):
            rec.step(state, new)
        last = trace.records[-1]
        if not (np.isfinite(last.f_x) and np.isfinite(last.f_y)):
            trace.records.pop()
            raise DivergenceError(f"non-finite objective value at k={k}", k=k,
                                  state=state, trace=trace)
        state = new
    return RunResult(method, problem, schedule, trace, state, history)
