"""Normed spaces, mirror maps and Bregman divergences.

Points are plain 1-D numpy arrays. Whether an array is a primal point ``x``
or a dual point ``z`` is carried by argument names; mixing the two roles is
the caller's responsibility.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import log_softmax, logsumexp, softmax, xlogy

from .exceptions import InvalidArgumentError, UnsupportedGeometryError

NORM_KINDS = ("euclidean", "p_norm", "ell1_simplex")
MIRROR_KINDS = ("euclidean_unconstrained", "euclidean_ball", "entropy_simplex", "squared_p_norm")

# entropy outputs are floored here so that log(x) stays finite
_SIMPLEX_FLOOR = np.finfo(float).tiny
_FEAS_TOL = 1e-12


def _as_vector(u, dimension, name="point"):
    u = np.asarray(u, dtype=float)
    if u.ndim != 1 or u.shape[0] != dimension:
        raise InvalidArgumentError(
            f"{name} has shape {u.shape}, expected ({dimension},)")
    if not np.isfinite(u).all():
        raise InvalidArgumentError(f"{name} has non-finite entries")
    return u


@dataclass(frozen=True)
class NormedSpace:
    """A finite-dimensional real space with a primal norm and its dual.

    Parameters
    ----------
    dimension : int
        Number of coordinates.
    norm_kind : str
        ``"euclidean"``, ``"p_norm"`` or ``"ell1_simplex"``.
    p : float, optional
        Exponent of the primal norm, required for ``"p_norm"`` (``1 < p <= 2``).
    """

    dimension: int
    norm_kind: str = "euclidean"
    p: float | None = None

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise InvalidArgumentError("dimension must be a positive integer")
        if self.norm_kind not in NORM_KINDS:
            raise InvalidArgumentError(f"unknown norm kind {self.norm_kind!r}")
        if self.norm_kind == "p_norm":
            if self.p is None or not (1.0 < self.p <= 2.0):
                raise InvalidArgumentError("p_norm requires 1 < p <= 2")

    @property
    def q(self):
        """Dual exponent, ``1/p + 1/q = 1``."""
        if self.norm_kind == "euclidean":
            return 2.0
        if self.norm_kind == "ell1_simplex":
            return np.inf
        return self.p / (self.p - 1.0)

    def check(self, u, name="point"):
        return _as_vector(u, self.dimension, name)

    def norm(self, x):
        x = self.check(x)
        if self.norm_kind == "euclidean":
            return float(np.linalg.norm(x))
        if self.norm_kind == "ell1_simplex":
            return float(np.sum(np.abs(x)))
        return float(np.linalg.norm(x, ord=self.p))

    def dual_norm(self, z):
        z = self.check(z)
        if self.norm_kind == "euclidean":
            return float(np.linalg.norm(z))
        if self.norm_kind == "ell1_simplex":
            return float(np.max(np.abs(z)))
        return float(np.linalg.norm(z, ord=self.q))

    def steepest_descent(self, x, grad, L):
        """Minimize ``<grad, u - x> + (L/2)||u - x||^2`` over the whole space.

        The minimizer moves a distance ``||grad||_* / L`` along the unit
        direction that maximizes ``<grad, d>``.
        """
        if self.norm_kind == "ell1_simplex":
            raise UnsupportedGeometryError(
                "steepest descent step is only defined here for euclidean and p_norm spaces")
        x = self.check(x)
        g = self.check(grad, "gradient")
        gnorm = self.dual_norm(g)
        if gnorm == 0.0:
            return x.copy()
        if self.norm_kind == "euclidean":
            return x - g / L
        q = self.q
        # unit l_p vector aligned with g, scaled by ||g||_q / L
        direction = np.sign(g) * (np.abs(g) / gnorm) ** (q - 1.0)
        return x - (gnorm / L) * direction


class MirrorMap:
    """A strongly convex distance-generating function together with its conjugate.

    Parameters
    ----------
    space : NormedSpace
    kind : str
        One of ``MIRROR_KINDS``.
    mu : float
        Declared strong convexity parameter. For ``squared_p_norm`` the
        modulus with respect to the l_p norm is ``mu * (p - 1)``, exposed as
        :attr:`modulus`.
    radius : float, optional
        Ball radius for ``euclidean_ball``.
    """

    def __init__(self, space, kind, mu=1.0, radius=None):
        if kind not in MIRROR_KINDS:
            raise InvalidArgumentError(f"unknown mirror map kind {kind!r}")
        if not (np.isfinite(mu) and mu > 0):
            raise InvalidArgumentError("mu must be positive and finite")
        needed = {
            "euclidean_unconstrained": "euclidean",
            "euclidean_ball": "euclidean",
            "entropy_simplex": "ell1_simplex",
            "squared_p_norm": "p_norm",
        }[kind]
        if space.norm_kind != needed:
            raise InvalidArgumentError(f"{kind} requires a {needed} space, got {space.norm_kind}")
        if kind == "euclidean_ball":
            if radius is None or not (np.isfinite(radius) and radius > 0):
                raise InvalidArgumentError("euclidean_ball requires a positive radius")
        self.space = space
        self.kind = kind
        self.mu = float(mu)
        self.radius = None if radius is None else float(radius)

    def __repr__(self):
        extra = f", radius={self.radius}" if self.radius is not None else ""
        return f"MirrorMap({self.kind!r}, dimension={self.dimension}, mu={self.mu}{extra})"

    @property
    def dimension(self):
        return self.space.dimension

    @property
    def modulus(self):
        """Strong convexity constant of the primal function in the space norm."""
        if self.kind == "squared_p_norm":
            return self.mu * (self.space.p - 1.0)
        return self.mu

    @property
    def constrained(self):
        """True when the feasible set is a proper subset of the space."""
        return self.kind in ("euclidean_ball", "entropy_simplex")

    # conjugate side

    def grad_conjugate(self, z):
        """Gradient of the conjugate: the primal point paired with ``z``."""
        z = self.space.check(z, "dual point")
        mu = self.mu
        if self.kind == "euclidean_unconstrained":
            return z / mu
        if self.kind == "euclidean_ball":
            nz = np.linalg.norm(z)
            if nz / mu <= self.radius:
                return z / mu
            return (self.radius / nz) * z
        if self.kind == "entropy_simplex":
            x = np.maximum(softmax(z / mu), _SIMPLEX_FLOOR)
            return x / x.sum()
        q = self.space.q
        nq = np.linalg.norm(z, ord=q)
        if nq == 0.0:
            return np.zeros_like(z)
        return (nq / mu) * np.sign(z) * (np.abs(z) / nq) ** (q - 1.0)

    def conjugate_value(self, z):
        """Value of the convex conjugate of the mirror function at ``z``."""
        z = self.space.check(z, "dual point")
        mu = self.mu
        if self.kind == "euclidean_unconstrained":
            return float(z @ z) / (2.0 * mu)
        if self.kind == "euclidean_ball":
            nz = float(np.linalg.norm(z))
            if nz / mu <= self.radius:
                return nz * nz / (2.0 * mu)
            R = self.radius
            return R * nz - 0.5 * mu * R * R
        if self.kind == "entropy_simplex":
            return mu * float(logsumexp(z / mu))
        return float(np.linalg.norm(z, ord=self.space.q)) ** 2 / (2.0 * mu)

    def bregman_dual(self, z, w):
        """Bregman divergence of the conjugate, ``D(z, w)``, clipped at zero."""
        z = self.space.check(z, "dual point")
        w = self.space.check(w, "dual point")
        if self.kind == "euclidean_unconstrained":
            d = z - w
            return float(d @ d) / (2.0 * self.mu)
        if self.kind == "entropy_simplex":
            # equals mu * KL(x_w || x_z); log-softmax avoids the floor
            lw = log_softmax(w / self.mu)
            lz = log_softmax(z / self.mu)
            val = self.mu * float(np.exp(lw) @ (lw - lz))
        else:
            val = (self.conjugate_value(z) - self.conjugate_value(w)
                   - float((z - w) @ self.grad_conjugate(w)))
        return max(val, 0.0)

    def three_point_residual(self, u, v, w):
        """Residual of the three-point identity; zero up to roundoff."""
        return (self.bregman_dual(u, v) - self.bregman_dual(w, v)
                - float((self.grad_conjugate(w) - self.grad_conjugate(v)) @ (u - w))
                - self.bregman_dual(u, w))

    conjugate_grad = grad_conjugate
    three_point_identity_residual = three_point_residual

    # primal side

    def is_feasible(self, x, tol=_FEAS_TOL):
        x = self.space.check(x)
        if self.kind == "euclidean_ball":
            return bool(np.linalg.norm(x) <= self.radius * (1.0 + tol))
        if self.kind == "entropy_simplex":
            return bool(np.all(x >= 0.0) and abs(x.sum() - 1.0) <= tol * max(1, self.dimension))
        return True

    def value(self, x):
        """Value of the mirror function at a feasible primal point."""
        x = self.space.check(x)
        if not self.is_feasible(x, tol=1e-9):
            raise InvalidArgumentError("point is outside the feasible set")
        if self.kind in ("euclidean_unconstrained", "euclidean_ball"):
            return 0.5 * self.mu * float(x @ x)
        if self.kind == "entropy_simplex":
            return self.mu * float(np.sum(xlogy(x, x)))
        return 0.5 * self.mu * float(np.linalg.norm(x, ord=self.space.p)) ** 2

    def dual_point(self, x):
        """A dual point whose conjugate gradient is ``x``.

        For the simplex the representative with ``sum(z) = mu * sum(log x)``
        is returned; ``x`` must be strictly positive.
        """
        x = self.space.check(x)
        if not self.is_feasible(x, tol=1e-9):
            raise InvalidArgumentError("point is outside the feasible set")
        mu = self.mu
        if self.kind in ("euclidean_unconstrained", "euclidean_ball"):
            return mu * x
        if self.kind == "entropy_simplex":
            if np.any(x <= 0.0):
                raise InvalidArgumentError("entropy mirror map needs a strictly positive point")
            return mu * np.log(x)
        p = self.space.p
        nx = np.linalg.norm(x, ord=p)
        if nx == 0.0:
            return np.zeros_like(x)
        return mu * nx * np.sign(x) * (np.abs(x) / nx) ** (p - 1.0)

    def bregman_primal(self, x, y):
        """Bregman divergence of the mirror function, ``D(x, y)``."""
        x = self.space.check(x)
        y = self.space.check(y)
        if self.kind in ("euclidean_unconstrained", "euclidean_ball"):
            d = x - y
            return 0.5 * self.mu * float(d @ d)
        if self.kind == "entropy_simplex":
            if np.any(y <= 0.0):
                raise InvalidArgumentError("second argument must be strictly positive")
            return max(self.mu * float(np.sum(xlogy(x, x) - xlogy(x, y))), 0.0)
        val = self.value(x) - self.value(y) - float(self.dual_point(y) @ (x - y))
        return max(val, 0.0)


def make_mirror(kind, dimension, mu=1.0, radius=None, p=None):
    """Build a mirror map together with the matching normed space."""
    norm_kind = {
        "euclidean_unconstrained": "euclidean",
        "euclidean_ball": "euclidean",
        "entropy_simplex": "ell1_simplex",
        "squared_p_norm": "p_norm",
    }.get(kind)
    if norm_kind is None:
        raise InvalidArgumentError(f"unknown mirror map kind {kind!r}")
    space = NormedSpace(dimension, norm_kind, p if norm_kind == "p_norm" else None)
    return MirrorMap(space, kind, mu=mu, radius=radius)
