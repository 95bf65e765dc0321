"""Experiment configuration, CSV output, lambda sweeps, baselines and check suites.

Configurations are flat JSON objects. Keys match the command-line flags
with dashes turned into underscores (``diag_ck``, ``history_cap``); the
interpolation exponent is spelled ``lambda``.

All randomness comes from ``numpy.random.default_rng(seed)`` (PCG64 seeded
through ``SeedSequence``), so equal configs give byte-identical output on
one platform.
"""

from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import asdict, dataclass, field, fields
import json
import math
import sys
import warnings

import numpy as np

from . import diagnostics, dynamics, methods
from .diagnostics import CSV_COLUMNS, Trace, TraceRecord
from .exceptions import (DivergenceError, InfeasibleScheduleError, InvalidArgumentError,
                         InvalidConfigError)
from .objectives import (DoubleWell, StyblinskiTang, make_logistic, make_problem,
                         make_quadratic)
from .schedules import ScheduleParams, build_schedule
from .spaces import MIRROR_KINDS, make_mirror

COMMANDS = ("run", "simulate", "sweep", "check")
PROBLEMS = ("quadratic", "logistic", "double_well", "styblinski_tang")
TIMESCALES = ("exponential", "polynomial")
SWEEP_COLUMNS = ("lambda", "slope_gap", "slope_min_grad_sq", "final_gap", "final_min_grad_sq",
                 "error")

EXIT_OK, EXIT_CONFIG, EXIT_DIVERGENCE, EXIT_CHECK = 0, 1, 2, 3


@dataclass
class ExperimentConfig:
    command: str = "run"
    method: str = "gmd_f"
    lam: float = 1.0
    c: float = 0.5
    a0: float = 1.0
    mu: float = 1.0
    mirror: str = "euclidean_unconstrained"
    radius: float | None = None
    p: float | None = None
    problem: str = "quadratic"
    dim: int = 10
    kappa: float = 100.0
    L: float = 1.0
    n_samples: int = 100
    reg: float = 0.0
    seed: int = 0
    iters: int = 100
    dt: float = 1e-3
    tmax: float = 10.0
    dynamics: str = "mod"
    timescale: str = "exponential"
    eta: float = 1.0
    power: float = 2.0
    diag_ck: bool = False
    history_cap: int = 2000
    lambdas: list = field(default_factory=lambda: [0.0, 0.5, 1.0])
    suite: str = "all"
    workers: int = 1
    out: str | None = None

    def to_dict(self):
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def _bool(v):
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v.lower() in ("true", "1", "yes", "false", "0", "no"):
        return v.lower() in ("true", "1", "yes")
    if isinstance(v, (int, float)) and v in (0, 1):
        return bool(v)
    raise ValueError(f"not a boolean: {v!r}")


def _int(v):
    if isinstance(v, bool) or float(v) != int(float(v)):
        raise ValueError(f"not an integer: {v!r}")
    return int(float(v))


def _opt_float(v):
    return None if v is None else float(v)


def _lambdas(v):
    if isinstance(v, str):
        v = [s for s in v.split(",") if s.strip()]
    return [float(x) for x in v]


def _opt_str(v):
    return None if v is None else str(v)


_FLOATS = ("lam", "c", "a0", "mu", "kappa", "L", "reg", "dt", "tmax", "eta", "power")
_INTS = ("dim", "n_samples", "seed", "iters", "history_cap", "workers")
_STRS = ("command", "method", "mirror", "problem", "dynamics", "timescale", "suite")

# config key -> (field name, converter)
KEYS = {}
for _f in fields(ExperimentConfig):
    _name = _f.name
    if _name in _FLOATS:
        _conv = float
    elif _name in _INTS:
        _conv = _int
    elif _name in _STRS:
        _conv = str
    elif _name in ("radius", "p"):
        _conv = _opt_float
    elif _name == "diag_ck":
        _conv = _bool
    elif _name == "lambdas":
        _conv = _lambdas
    else:
        _conv = _opt_str
    KEYS["lambda" if _name == "lam" else _name] = (_name, _conv)


def _apply(cfg, mapping, origin):
    for key, value in mapping.items():
        if key not in KEYS:
            raise InvalidConfigError(f"unknown config key {key!r} ({origin})")
        name, conv = KEYS[key]
        try:
            setattr(cfg, name, conv(value))
        except (TypeError, ValueError) as err:
            raise InvalidConfigError(f"bad value for {key!r}: {err}") from err


def parse_config(source=None, overrides=None, validate=True):
    """Build a validated :class:`ExperimentConfig`.

    Parameters
    ----------
    source : str, os.PathLike or dict, optional
        A JSON file or an already-parsed mapping.
    overrides : dict, optional
        Values that take precedence over ``source`` (typically CLI flags);
        ``None`` values are ignored.
    """
    cfg = ExperimentConfig()
    if source is not None:
        if isinstance(source, dict):
            data = source
        else:
            try:
                with open(source) as fh:
                    data = json.load(fh)
            except OSError as err:
                raise InvalidConfigError(f"cannot read config {source}: {err}") from err
            except json.JSONDecodeError as err:
                raise InvalidConfigError(f"config {source} is not valid JSON: {err}") from err
        if not isinstance(data, dict):
            raise InvalidConfigError("config must be a flat key-value object")
        for key, value in data.items():
            if isinstance(value, dict):
                raise InvalidConfigError(f"config key {key!r} is nested; use flat keys")
        _apply(cfg, data, "config file")
    if overrides:
        _apply(cfg, {k: v for k, v in overrides.items() if v is not None}, "flag")
    if validate:
        validate_config(cfg)
    return cfg


def validate_config(cfg):
    """Raise :class:`InvalidConfigError` naming the violated constraint."""
    if cfg.command not in COMMANDS:
        raise InvalidConfigError(f"command must be one of {COMMANDS}")
    if cfg.problem not in PROBLEMS:
        raise InvalidConfigError(f"problem must be one of {PROBLEMS}")
    if cfg.mirror not in MIRROR_KINDS:
        raise InvalidConfigError(f"mirror must be one of {MIRROR_KINDS}")
    if cfg.method not in methods.METHODS:
        raise InvalidConfigError(f"method must be one of {methods.METHODS}")
    if cfg.timescale not in TIMESCALES:
        raise InvalidConfigError(f"timescale must be one of {TIMESCALES}")
    if cfg.dynamics not in dynamics.DYNAMICS_KINDS:
        raise InvalidConfigError(f"dynamics must be one of {dynamics.DYNAMICS_KINDS}")
    if cfg.iters < 0 or cfg.history_cap < 0 or cfg.dim < 1 or cfg.workers < 1:
        raise InvalidConfigError("iters and history_cap must be >= 0, dim and workers >= 1")
    if not (cfg.dt > 0 and cfg.tmax >= cfg.dt):
        raise InvalidConfigError("need dt > 0 and tmax >= dt")
    lams = cfg.lambdas if cfg.command == "sweep" else [cfg.lam]
    if cfg.command in ("run", "sweep"):
        if cfg.method == "gmd_f" and any(lam > 1.0 for lam in lams):
            raise InvalidConfigError("gmd_f is analysed for λ ∈ [0, 1] (lambda <= 1)")
    try:
        problem = build_problem(cfg)
        if cfg.command in ("run", "sweep"):
            methods.check_geometry(cfg.method, problem.mirror)
            for lam in lams:
                ScheduleParams(lam, cfg.c, problem.mu, problem.L, cfg.a0)
    except InfeasibleScheduleError as err:
        raise InvalidConfigError(f"λ=0 requires cμ/L < 1: {err}") from err
    except InvalidConfigError:
        raise
    except InvalidArgumentError as err:
        raise InvalidConfigError(str(err)) from err
    return problem


def build_objective(cfg):
    if cfg.problem == "quadratic":
        return make_quadratic(cfg.dim, cfg.kappa, cfg.L)
    if cfg.problem == "logistic":
        return make_logistic(cfg.n_samples, cfg.dim, cfg.seed, cfg.reg)
    if cfg.problem == "double_well":
        if cfg.dim != 2:
            raise InvalidConfigError("double_well needs dim = 2")
        return DoubleWell()
    return StyblinskiTang(cfg.dim)


def default_start(cfg, objective, mirror):
    """Documented starting point for each problem and mirror map.

    quadratic: all-ones (shrunk into the ball for ``euclidean_ball``);
    logistic: the origin; nonconvex problems: uniform in a sub-box drawn from ``seed``.
    The entropy map always starts at the simplex barycentre.
    """
    n = objective.dimension
    if mirror.kind == "entropy_simplex":
        return np.full(n, 1.0 / n)
    if cfg.problem == "quadratic":
        x0 = np.ones(n)
        if mirror.kind == "euclidean_ball":
            x0 *= min(1.0, 0.5 * mirror.radius / math.sqrt(n))
        return x0
    if cfg.problem == "logistic":
        return np.zeros(n)
    rng = np.random.default_rng(cfg.seed)
    half = 1.5 if cfg.problem == "double_well" else 4.0
    return rng.uniform(-half, half, n)


def build_problem(cfg):
    objective = build_objective(cfg)
    mirror = make_mirror(cfg.mirror, objective.dimension, cfg.mu, cfg.radius, cfg.p)
    x0 = default_start(cfg, objective, mirror)
    if cfg.problem == "quadratic" and mirror.kind == "entropy_simplex":
        # minimizer of x^T Q x / 2 over the simplex is proportional to 1/q
        q = objective.eigenvalues
        if np.all(q > 0):
            xs = (1.0 / q) / np.sum(1.0 / q)
            return make_problem(objective, mirror, x0=x0, f_opt=objective.value(xs), x_opt=xs)
    return make_problem(objective, mirror, x0=x0)


def run_experiment(cfg, lam=None):
    """Run the discrete method described by ``cfg`` (optionally at another ``lambda``)."""
    problem = build_problem(cfg)
    lam = cfg.lam if lam is None else lam
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return methods.run(problem, cfg.method, cfg.iters, lam=lam, c=cfg.c, a0=cfg.a0,
                           track_ck=cfg.diag_ck, history_cap=cfg.history_cap)


def build_dynamics(cfg):
    if cfg.dynamics == "hd":
        return dynamics.hamiltonian_dynamics()
    ts = (dynamics.TimeScale.exponential(cfg.eta) if cfg.timescale == "exponential"
          else dynamics.TimeScale.polynomial(cfg.power))
    if cfg.dynamics == "ad":
        return dynamics.accelerated_dynamics(ts)
    return dynamics.momentum_dynamics(cfg.lam, ts)


def simulate_experiment(cfg):
    """Integrate the continuous dynamics described by ``cfg``.

    ``hd`` starts from the default primal point with ``z0 = 0``; the other
    dynamics start from the problem's paired ``(x0, z0)``.
    """
    problem = build_problem(cfg)
    dyn = build_dynamics(cfg)
    if dyn.kind == "hd":
        return dynamics.integrate(dyn, problem, cfg.tmax, cfg.dt, x0=problem.x0,
                                  z0=np.zeros(problem.mirror.dimension))
    return dynamics.integrate(dyn, problem, cfg.tmax, cfg.dt)


# CSV

def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    v = float(v)
    return "" if math.isnan(v) else "%.17g" % v


def _write_rows(path, header, rows):
    try:
        fh = open(path, "w", newline="") if path not in (None, "-") else None
    except OSError as err:
        raise OSError(f"cannot write {path}: {err}") from err
    out = fh if fh is not None else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(v) for v in row])
    finally:
        if fh is not None:
            fh.close()


def emit_trace(trace, path):
    """Write ``trace`` as CSV (``path`` of ``None`` or ``"-"`` means stdout)."""
    _write_rows(path, CSV_COLUMNS,
                ([getattr(r, c) for c in CSV_COLUMNS] for r in trace.records))


def read_trace(path):
    """Parse a CSV written by :func:`emit_trace`."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as err:
        raise OSError(f"cannot read {path}: {err}") from err
    if not rows or tuple(rows[0]) != CSV_COLUMNS:
        raise InvalidArgumentError(f"{path} does not have the trace header")
    trace = Trace()
    for row in rows[1:]:
        vals = {c: (None if s == "" else float(s)) for c, s in zip(CSV_COLUMNS, row)}
        vals["k"] = int(vals["k"])
        trace.append(TraceRecord(**vals))
    return trace


def trajectory_rows(traj, checkpoints=20):
    """Rows ``t, f, C_f, C, x_1..x_n`` for a trajectory; ``C`` is filled at checkpoints."""
    f = traj.f()
    cf = dynamics.conserved_cf(traj)
    c = np.full(len(traj.t), np.nan)
    if traj.dynamics.kind != "hd":
        idx, vals = dynamics.conserved_c(traj, dynamics.checkpoint_indices(traj, checkpoints))
        c[idx] = vals
        c[0] = 0.0
    n = traj.x.shape[1]
    header = ["t", "f", "C_f", "C"] + [f"x_{i + 1}" for i in range(n)]
    rows = ([traj.t[j], f[j], cf[j], c[j], *traj.x[j]] for j in range(len(traj.t)))
    return header, rows


def emit_trajectory(traj, path, checkpoints=20):
    header, rows = trajectory_rows(traj, checkpoints)
    _write_rows(path, header, rows)


# sweeps and baselines

def _sweep_row(args):
    cfg, lam = args
    row = {"lambda": lam}
    try:
        result = run_experiment(cfg, lam)
    except (DivergenceError, InvalidArgumentError) as err:
        row["error"] = f"{type(err).__name__}: {err}"
        return row
    trace = result.trace
    gap, g2 = trace.column("gap"), trace.column("min_grad_sq")
    fg, fm = diagnostics.fit_rate(gap), diagnostics.fit_rate(g2)
    row["slope_gap"] = None if fg is None else fg.slope
    row["slope_min_grad_sq"] = None if fm is None else fm.slope
    row["final_gap"] = gap[-1]
    row["final_min_grad_sq"] = g2[-1]
    return row


def sweep_lambda(cfg, lambdas=None, out=None):
    """Run ``cfg`` once per ``lambda`` and summarize the fitted rates.

    Failed runs are recorded in the ``error`` column and the sweep goes on.
    With ``cfg.workers > 1`` runs execute in separate processes.
    """
    lambdas = list(cfg.lambdas if lambdas is None else lambdas)
    jobs = [(cfg, float(lam)) for lam in lambdas]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(_sweep_row, jobs))
    else:
        rows = [_sweep_row(j) for j in jobs]
    if out is not None:
        _write_rows(out, SWEEP_COLUMNS, ([r.get(c) for c in SWEEP_COLUMNS] for r in rows))
    return rows


def baseline_gd(problem, steps):
    """Gradient descent ``x <- x - grad f(x) / L`` recorded in the trace schema.

    ``x`` and ``y`` coincide; schedule and conserved-quantity columns are empty.
    """
    mirror = problem.mirror
    if mirror.constrained:
        raise InvalidConfigError("baseline_gd needs an unconstrained problem")
    if mirror.space.norm_kind != "euclidean":
        raise InvalidConfigError("baseline_gd is the Euclidean gradient step")
    obj = problem.objective
    f_opt = problem.f_opt
    x = problem.x0.copy()
    trace = Trace(meta={"method": "gd"})
    best = math.inf
    for k in range(steps + 1):
        if k > 0:
            x = x - g / obj.L
            if not np.all(np.isfinite(x)):
                raise DivergenceError(f"non-finite iterate at k={k}", k=k, trace=trace)
        g = obj.gradient(x)
        f = obj.value(x)
        gn = float(np.linalg.norm(g))
        best = min(best, gn * gn)
        trace.append(TraceRecord(k, f, f, gn, best, None if f_opt is None else f - f_opt,
                                 None, None, None, None))
    return trace


# check suites

@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    passed: bool
    measured: float
    tolerance: float
    detail: str = ""

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return (f"{status}  {self.suite}/{self.name}  measured={self.measured:.3e}"
                f"  tol={self.tolerance:.3g}{extra}")


def _quad_problem(dim=20, kappa=1e3, L=1.0, mirror="euclidean_unconstrained", mu=1.0):
    obj = make_quadratic(dim, kappa, L)
    m = make_mirror(mirror, dim, mu)
    if m.kind == "entropy_simplex":
        return make_problem(obj, m)
    return make_problem(obj, m, x0=np.ones(dim))


def _dw_problem(seed=0):
    obj = DoubleWell()
    m = make_mirror("euclidean_unconstrained", 2, obj.L)
    x0 = np.random.default_rng(seed).uniform(-1.5, 1.5, 2)
    return make_problem(obj, m, x0=x0)


def _run(problem, method, iters, lam, c, track_ck=False):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        return methods.run(problem, method, iters, lam=lam, c=c, track_ck=track_ck)


def _max_cf_increment(problem, lam, iters=500):
    try:
        trace = _run(problem, "gmd_f", iters, lam, 0.5).trace
    except DivergenceError as err:
        # a diverging run still reports the increments seen before the blow-up
        trace = err.trace
    cf = trace.column("C_f")
    if len(cf) < 2:
        return math.inf, problem.scale
    with np.errstate(invalid="ignore"):
        return float(np.nanmax(np.diff(cf))), problem.scale


def check_spaces():
    rng = np.random.default_rng(0)
    out = []
    for kind in MIRROR_KINDS:
        kw = {"radius": 2.0} if kind == "euclidean_ball" else {"p": 1.5} if kind == "squared_p_norm" else {}
        m = make_mirror(kind, 5, 1.5, **kw)
        worst = 0.0
        for _ in range(20):
            z = rng.standard_normal(5)
            x = m.grad_conjugate(z)
            # Fenchel-Young holds with equality at x = grad psi*(z)
            worst = max(worst, abs(m.value(x) + m.conjugate_value(z) - float(x @ z)))
        out.append(CheckResult("spaces", f"fenchel_young[{kind}]", worst <= 1e-9, worst, 1e-9))
    return out


def check_schedules():
    out = []
    for lam in (0.0, 0.5, 1.0, 2.0):
        s = build_schedule(ScheduleParams(lam, 0.5, 1.0, 4.0), 200)
        k = np.arange(1, 201)
        p = s.params
        # (a_k / A_k)^2 H_k = c mu / L
        res = float(np.max(np.abs(s.theta[k] ** 2 * s.H[k] / p.ratio - 1.0)))
        out.append(CheckResult("schedules", f"recurrence[lambda={lam:g}]", res <= 1e-10, res, 1e-10))
    return out


def check_discrete():
    out = []
    for label, mirror in (("euclidean", "euclidean_unconstrained"), ("entropy", "entropy_simplex")):
        prob = _quad_problem(mirror=mirror)
        inc, scale = _max_cf_increment(prob, 1.0)
        out.append(CheckResult("discrete", f"cf_monotone[{label}]", inc <= 1e-8 * scale, inc,
                               1e-8 * scale, "max C_f increment"))
    prob = _quad_problem(mirror="entropy_simplex")
    r = _run(prob, "gmd_f", 500, 1.0, 0.5, track_ck=True)
    ys = np.array(r.history.y)
    err = float(max(np.max(np.abs(ys.sum(axis=1) - 1.0)), max(0.0, -ys.min())))
    out.append(CheckResult("discrete", "simplex_feasibility", err <= 1e-9, err, 1e-9))
    prob = _quad_problem()
    a = _run(prob, "gmd", 100, 1.0, 0.5, track_ck=True)
    b = _run(prob, "gmd_f", 100, 1.0, 0.5, track_ck=True)
    d = float(np.max(np.abs(np.array(a.history.x) - np.array(b.history.x))))
    out.append(CheckResult("discrete", "gmd_equals_gmd_f[lambda=1]", d <= 1e-12, d, 1e-12))
    a = _run(prob, "gmd", 100, 1.0, 1.0, track_ck=True)
    b = _run(prob, "gmd_b", 100, 1.0, 1.0, track_ck=True)
    d = float(np.max(np.abs(np.array(a.history.x) - np.array(b.history.x))))
    out.append(CheckResult("discrete", "gmd_b_equals_gmd[c=1]", d <= 1e-10, d, 1e-10))
    return out


def check_diagnostics():
    out = []
    scale_q = _quad_problem().scale
    for method in ("gmd_f", "gmd", "gmd_b"):
        r = _run(_quad_problem(dim=3), method, 20, 1.0, 0.5, track_ck=True)
        res = diagnostics.structural_identity_residual(r.history, r.schedule, r.problem.mirror, 20)
        tol = 1e-8 * r.problem.scale
        out.append(CheckResult("diagnostics", f"structural_identity[{method}]", res <= tol, res, tol))
    for label, prob, lam, eps in (("quadratic", _quad_problem(), 1.0, 0.0),
                                  ("double_well", _dw_problem(), 0.0, DoubleWell().L)):
        for method, form in (("gmd", "bregman"), ("gmd_b", "gradient")):
            r = _run(prob, method, 300, lam, 0.5, track_ck=True)
            bc = diagnostics.check_error_bound(r, eps, form, 1e-8 * prob.scale)
            out.append(CheckResult("diagnostics", f"error_bound[{method},{label}]", bc.passed,
                                   bc.min_slack, bc.tolerance, f"worst k={bc.worst_k}"))
    r = _run(_quad_problem(), "gmd_f", 1000, 0.0, 0.5)
    bc = diagnostics.value_bound_check(r, 1e-9 * scale_q)
    out.append(CheckResult("diagnostics", "value_bound[lambda=0]", bc.passed, bc.min_slack,
                           bc.tolerance, f"worst k={bc.worst_k}"))
    return out


def check_continuous():
    out = []
    prob = _quad_problem(dim=5, kappa=10.0, L=16.0)
    tr = dynamics.integrate(dynamics.hamiltonian_dynamics(), prob, 10.0, 1e-3,
                            x0=prob.x0, z0=np.zeros(5))
    H = dynamics.conserved_cf(tr)
    drift = float(np.max(np.abs(H - H[0])))
    out.append(CheckResult("continuous", "hamiltonian[hd]", drift <= 1e-6 * prob.scale, drift,
                           1e-6 * prob.scale))
    rep = dynamics.average_gradient_check(tr, prob.f_opt)
    out.append(CheckResult("continuous", "average_gradient[hd]", rep.passed, rep.max_ratio,
                           1.0 + rep.tolerance, "max ratio to bound"))
    for lam, ts in ((0.0, dynamics.TimeScale.exponential(1.0)),
                    (1.0, dynamics.TimeScale.polynomial(2.0))):
        tr = dynamics.integrate(dynamics.momentum_dynamics(lam, ts), prob, 10.0, 1e-3)
        cf = dynamics.conserved_cf(tr)
        drift = float(np.max(np.abs(cf - cf[0])))
        out.append(CheckResult("continuous", f"cf_conserved[mod({lam:g})]",
                               drift <= 1e-5 * prob.scale, drift, 1e-5 * prob.scale))
        _, c = dynamics.conserved_c(tr)
        cmax = float(np.max(np.abs(c)))
        out.append(CheckResult("continuous", f"c_vanishes[mod({lam:g})]",
                               cmax <= 1e-4 * prob.scale, cmax, 1e-4 * prob.scale))
    return out


SUITES = {
    "spaces": check_spaces,
    "schedules": check_schedules,
    "discrete": check_discrete,
    "diagnostics": check_diagnostics,
    "continuous": check_continuous,
}


def run_checks(selector="all", stream=None):
    """Run the selected suites, print one line per check and return the results."""
    if selector == "all":
        names = list(SUITES)
    else:
        names = [s.strip() for s in selector.split(",") if s.strip()]
        bad = [s for s in names if s not in SUITES]
        if bad:
            raise InvalidConfigError(f"unknown check suite(s) {bad}; choose from {list(SUITES)}")
    stream = sys.stdout if stream is None else stream
    results = []
    for name in names:
        for res in SUITES[name]():
            print(res.line(), file=stream)
            results.append(res)
    return results


def write_config(cfg, path):
    with open(path, "w") as fh:
        json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
