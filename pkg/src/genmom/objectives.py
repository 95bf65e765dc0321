"""Test objectives with known smoothness constants, and problem instances."""

from dataclasses import dataclass, field

import numpy as np

from .exceptions import BoxExitError, InvalidArgumentError
from .spaces import MirrorMap


class Objective:
    """Base class for smooth objectives.

    Subclasses set ``dimension``, ``L``, ``eps_H``, ``optimum_value`` and
    ``optimum_point`` (the last two may be ``None``) and implement
    :meth:`value` and :meth:`gradient`.

    ``norms`` lists the space norms for which ``L`` is a valid smoothness
    constant. ``box`` is ``None`` or a ``(lower, upper)`` pair of arrays
    outside of which the constants do not hold.
    """

    name = "objective"
    norms = ("euclidean",)
    box = None
    convex = True

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise InvalidArgumentError(f"expected shape ({self.dimension},), got {x.shape}")
        return x

    def in_box(self, x):
        if self.box is None:
            return True
        lo, hi = self.box
        return bool(np.all(x >= lo) and np.all(x <= hi))

    def check_box(self, x, k=None):
        if not self.in_box(x):
            raise BoxExitError(f"iterate left the box of {self.name} at k={k}", k=k)


class Quadratic(Objective):
    """``f(x) = x^T Q x / 2`` with diagonal ``Q``; minimum 0 at the origin.

    Because ``Q`` is diagonal, ``L = max(Q)`` bounds the gradient change in
    every supported norm pair (l2/l2, lp/lq, l1/l_inf).
    """

    name = "quadratic"
    norms = ("euclidean", "p_norm", "ell1_simplex")

    def __init__(self, eigenvalues):
        q = np.asarray(eigenvalues, dtype=float)
        if q.ndim != 1 or q.size == 0 or np.any(q < 0) or not np.all(np.isfinite(q)):
            raise InvalidArgumentError("eigenvalues must be a nonempty nonnegative vector")
        self.eigenvalues = q
        self.dimension = q.size
        self.L = float(q.max())
        self.eps_H = 0.0
        self.optimum_value = 0.0
        self.optimum_point = np.zeros(self.dimension)

    def value(self, x):
        x = self._check(x)
        return 0.5 * float(x @ (self.eigenvalues * x))

    def gradient(self, x):
        return self.eigenvalues * self._check(x)


def make_quadratic(dimension, kappa, L=1.0):
    """Diagonal quadratic with eigenvalues log-spaced in ``[L/kappa, L]`` (ascending)."""
    if dimension < 1:
        raise InvalidArgumentError("dimension must be positive")
    if not kappa >= 1.0:
        raise InvalidArgumentError("kappa must be at least 1")
    if dimension == 1:
        return Quadratic([L])
    return Quadratic(np.logspace(np.log10(L / kappa), np.log10(L), dimension))


class Logistic(Objective):
    """L2-regularized logistic loss, averaged over samples.

    ``f(w) = mean(log(1 + exp(-y_i <a_i, w>))) + (reg/2)||w||^2``.
    """

    name = "logistic"

    def __init__(self, features, labels, reg=0.0):
        X = np.asarray(features, dtype=float)
        y = np.asarray(labels, dtype=float)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise InvalidArgumentError("features must be (n, d) and labels (n,)")
        if not np.all(np.isin(y, (-1.0, 1.0))):
            raise InvalidArgumentError("labels must be +1 or -1")
        if reg < 0:
            raise InvalidArgumentError("reg must be nonnegative")
        self.features = X
        self.labels = y
        self.reg = float(reg)
        self.dimension = X.shape[1]
        n = X.shape[0]
        self.L = float(np.linalg.norm(X, 2) ** 2 / (4.0 * n) + reg)
        self.eps_H = 0.0
        self.optimum_value = None
        self.optimum_point = None

    def value(self, w):
        w = self._check(w)
        margins = self.labels * (self.features @ w)
        return float(np.mean(np.logaddexp(0.0, -margins))) + 0.5 * self.reg * float(w @ w)

    def gradient(self, w):
        w = self._check(w)
        margins = self.labels * (self.features @ w)
        # d/dm log(1 + e^{-m}) = -sigmoid(-m)
        weights = -self.labels * np.exp(-np.logaddexp(0.0, margins))
        return self.features.T @ weights / self.features.shape[0] + self.reg * w


def make_logistic(n_samples, dimension, seed, reg=0.0):
    """Synthetic separable-ish logistic regression drawn from ``seed``."""
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n_samples, dimension))
    w_true = rng.standard_normal(dimension)
    noise = 0.5 * rng.standard_normal(n_samples)
    y = np.where(X @ w_true + noise >= 0.0, 1.0, -1.0)
    return Logistic(X, y, reg)


class DoubleWell(Objective):
    """``f(x) = (x_1^2 - 1)^2 / 4 + x_2^2 / 2`` on a square box.

    Minima at ``(+-1, 0)`` with value 0 and a saddle at the origin. The
    Hessian is ``diag(3 x_1^2 - 1, 1)``, so on ``[-r, r]^2`` the smoothness
    constant is ``max(3 r^2 - 1, 1)``.
    """

    name = "double_well"
    convex = False

    def __init__(self, half_width=2.0):
        r = float(half_width)
        if r <= 0:
            raise InvalidArgumentError("half_width must be positive")
        self.dimension = 2
        self.half_width = r
        self.box = (np.full(2, -r), np.full(2, r))
        self.L = max(3.0 * r * r - 1.0, 1.0)
        self.eps_H = self.L
        self.optimum_value = 0.0
        self.optimum_point = np.array([1.0, 0.0])

    def value(self, x):
        x = self._check(x)
        return 0.25 * (x[0] ** 2 - 1.0) ** 2 + 0.5 * x[1] ** 2

    def gradient(self, x):
        x = self._check(x)
        return np.array([x[0] ** 3 - x[0], x[1]])


class StyblinskiTang(Objective):
    """``f(x) = sum(x_i^4 - 16 x_i^2 + 5 x_i) / 2`` on a cube.

    The Hessian is ``diag(6 x_i^2 - 16)``; on ``[-r, r]^n`` the smoothness
    constant is ``max(6 r^2 - 16, 16)``.
    """

    name = "styblinski_tang"
    convex = False

    def __init__(self, dimension=2, half_width=5.0):
        r = float(half_width)
        if dimension < 1 or r <= 0:
            raise InvalidArgumentError("dimension and half_width must be positive")
        self.dimension = int(dimension)
        self.half_width = r
        self.box = (np.full(self.dimension, -r), np.full(self.dimension, r))
        self.L = max(6.0 * r * r - 16.0, 16.0)
        self.eps_H = self.L
        # global minimizer: most negative real root of 4t^3 - 32t + 5 = 0
        roots = np.roots([4.0, 0.0, -32.0, 5.0])
        t = float(np.min(roots.real))
        if abs(t) > r:
            self.optimum_value = None
            self.optimum_point = None
        else:
            self.optimum_point = np.full(self.dimension, t)
            self.optimum_value = self.dimension * 0.5 * (t ** 4 - 16 * t ** 2 + 5 * t)

    def value(self, x):
        x = self._check(x)
        return 0.5 * float(np.sum(x ** 4 - 16.0 * x ** 2 + 5.0 * x))

    def gradient(self, x):
        x = self._check(x)
        return 2.0 * x ** 3 - 16.0 * x + 2.5


def make_nonconvex_2d(kind, dimension=2):
    """``double_well`` or ``styblinski_tang`` (the latter also in higher dimension)."""
    if kind == "double_well":
        if dimension != 2:
            raise InvalidArgumentError("double_well is two-dimensional")
        return DoubleWell()
    if kind == "styblinski_tang":
        return StyblinskiTang(dimension)
    raise InvalidArgumentError(f"unknown nonconvex objective {kind!r}")


def finite_difference_gradient(objective, x, step=1e-6):
    """Central-difference gradient, used as an independent check."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        g[i] = (objective.value(x + e) - objective.value(x - e)) / (2.0 * step)
    return g


@dataclass(frozen=True)
class ProblemInstance:
    """An objective paired with a mirror map and a starting dual point.

    The primal start is ``x0 = grad_conjugate(z0)``. ``f_opt`` is the known
    minimum over the feasible set, or ``None``.
    """

    objective: Objective
    mirror: MirrorMap
    z0: np.ndarray
    f_opt: float | None = None
    x_opt: np.ndarray | None = field(default=None, repr=False)

    @property
    def x0(self):
        return self.mirror.grad_conjugate(self.z0)

    @property
    def f0(self):
        return self.objective.value(self.x0)

    @property
    def L(self):
        return self.objective.L

    @property
    def mu(self):
        return self.mirror.modulus

    @property
    def scale(self):
        """``max(1, |f(x0)|, f(x0) - f*)`` used to make tolerances relative."""
        f0 = self.f0
        s = max(1.0, abs(f0))
        if self.f_opt is not None:
            s = max(s, f0 - self.f_opt)
        return s


def make_problem(objective, mirror, x0=None, z0=None, f_opt="auto", x_opt=None):
    """Pair an objective with a mirror map.

    Exactly one of ``x0`` (a feasible primal point) or ``z0`` may be given;
    with neither, ``z0 = 0``. With ``f_opt="auto"`` the objective's known
    minimum is used when its minimizer is feasible for the mirror map.
    """
    if objective.dimension != mirror.dimension:
        raise InvalidArgumentError(
            f"objective dimension {objective.dimension} != mirror dimension {mirror.dimension}")
    if mirror.space.norm_kind not in objective.norms:
        raise InvalidArgumentError(
            f"{objective.name} has no smoothness constant for the {mirror.space.norm_kind} norm")
    if x0 is not None and z0 is not None:
        raise InvalidArgumentError("give x0 or z0, not both")
    if x0 is not None:
        z0 = mirror.dual_point(x0)
        if np.max(np.abs(mirror.grad_conjugate(z0) - x0)) > 1e-12 * max(1.0, np.max(np.abs(x0))):
            raise InvalidArgumentError("x0 is not reproduced by the mirror map")
    elif z0 is None:
        z0 = np.zeros(mirror.dimension)
    z0 = mirror.space.check(z0, "z0").copy()
    if isinstance(f_opt, str):
        f_opt, x_opt = None, None
        xs = objective.optimum_point
        if xs is not None and mirror.is_feasible(xs):
            f_opt, x_opt = objective.optimum_value, np.asarray(xs, dtype=float)
    x0v = mirror.grad_conjugate(z0)
    if objective.box is not None:
        objective.check_box(x0v, k=0)
    return ProblemInstance(objective, mirror, z0, f_opt, x_opt)
