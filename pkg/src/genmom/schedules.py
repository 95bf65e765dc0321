"""Step-size schedules ``a_k, A_k, H_k = A_k^lambda, B_k``.

Each ``a_k`` (k >= 1) is the positive root of

    a^2 = (c mu / L) (A_{k-1} + a)^(2 - lambda),

i.e. ``(a_k / A_k)^2 = c mu / (L H_k)``.
"""

from dataclasses import dataclass
import math
import warnings

import numpy as np

from .exceptions import InfeasibleScheduleError, InvalidArgumentError, RootFindingError

ROOT_TOL = 1e-14
ROOT_MAX_ITER = 200


@dataclass(frozen=True)
class ScheduleParams:
    """Parameters of the schedule.

    Parameters
    ----------
    lam : float
        Interpolation exponent in ``[0, 2]``; ``H = A^lam``.
    c : float
        Step fraction in ``(0, 1]``.
    mu, L : float
        Mirror-map modulus and smoothness constant.
    a0 : float
        Initial weight, ``A_0 = a_0``.
    """

    lam: float
    c: float
    mu: float
    L: float
    a0: float = 1.0

    def __post_init__(self):
        for name in ("lam", "c", "mu", "L", "a0"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"{name} must be finite")
        if not 0.0 <= self.lam <= 2.0:
            raise InvalidArgumentError("lambda must lie in [0, 2]")
        if not 0.0 < self.c <= 1.0:
            raise InvalidArgumentError("c must lie in (0, 1]")
        if self.mu <= 0 or self.L <= 0 or self.a0 <= 0:
            raise InvalidArgumentError("mu, L and a0 must be positive")
        if self.lam == 0.0 and self.ratio >= 1.0:
            raise InfeasibleScheduleError(
                f"lambda=0 requires c*mu/L < 1 (got {self.ratio:g})")

    @property
    def ratio(self):
        """``c mu / L``."""
        return self.c * self.mu / self.L


def _next_ratio(A_prev, logA_prev, lam, ratio):
    """Ratio ``s = a_k / A_{k-1}`` where ``a_k`` is the positive root of
    ``a^2 = ratio (A_{k-1} + a)^(2 - lam)``.

    Working with ``s`` keeps the root finding scale free:
    ``s^2 = rho (1 + s)^(2 - lam)`` with ``rho = ratio A_{k-1}^(-lam)``.
    """
    if lam == 0.0:
        r = math.sqrt(ratio)
        return r / (1.0 - r)
    if lam == 2.0:
        return math.sqrt(ratio) / A_prev
    rho = ratio * math.exp(-lam * logA_prev)
    e = 2.0 - lam

    # s^2 / (1 + s)^(2 - lam) is increasing on s > 0, so the root is unique
    def g(s):
        return s * s - rho * (1.0 + s) ** e

    lo, hi = 0.0, max(1.0, math.sqrt(rho))
    while g(hi) <= 0.0:
        lo, hi = hi, 2.0 * hi
        if hi > 1e300:
            raise RootFindingError("could not bracket the step-size root")
    s = 0.5 * (lo + hi)
    for _ in range(ROOT_MAX_ITER):
        gs = g(s)
        if gs > 0:
            hi = s
        else:
            lo = s
        dg = 2.0 * s - rho * e * (1.0 + s) ** (e - 1.0)
        s_new = s - gs / dg if dg > 0 else -1.0
        if not lo < s_new < hi:
            s_new = 0.5 * (lo + hi)
        if abs(s_new - s) <= ROOT_TOL * s_new or hi - lo <= ROOT_TOL * hi:
            return s_new
        s = s_new
    raise RootFindingError(
        f"step-size root did not converge in {ROOT_MAX_ITER} iterations (A={A_prev:g}, lambda={lam})")


@dataclass(frozen=True)
class Schedule:
    """Schedule arrays indexed ``0..k_max``.

    ``theta[k] = a_k / A_k`` and ``logA`` are always finite. ``a``, ``A``,
    ``B`` and ``b`` can overflow to ``inf`` on long geometric schedules
    (``lambda = 0``); the methods only need ``theta`` and ``H``, which stay
    finite. ``B[k] = A[k] H[k+1]``, so ``H`` is also computed at
    ``k_max + 1`` and stored in ``H_next``.
    """

    params: ScheduleParams
    theta: np.ndarray
    logA: np.ndarray
    a: np.ndarray
    A: np.ndarray
    H: np.ndarray
    h: np.ndarray
    B: np.ndarray
    b: np.ndarray
    H_next: float

    @property
    def k_max(self):
        return self.theta.size - 1

    @property
    def finite(self):
        """True when ``a``, ``A`` and ``B`` are all finite."""
        return bool(np.all(np.isfinite(self.B)) and np.all(np.isfinite(self.A)))


def build_schedule(params, k_max):
    """Compute the schedule up to index ``k_max``."""
    if int(k_max) != k_max or k_max < 0:
        raise InvalidArgumentError("k_max must be a nonnegative integer")
    k_max = int(k_max)
    lam, ratio = params.lam, params.ratio
    n = k_max + 2
    s = np.empty(n)
    logA = np.empty(n)
    logA[0] = math.log(params.a0)
    s[0] = np.inf
    for k in range(1, n):
        A_prev = math.exp(logA[k - 1]) if logA[k - 1] < 700 else math.inf
        s[k] = _next_ratio(A_prev, logA[k - 1], lam, ratio)
        logA[k] = logA[k - 1] + math.log1p(s[k])
    theta = np.empty(n)
    theta[0] = 1.0
    theta[1:] = s[1:] / (1.0 + s[1:])
    with np.errstate(over="ignore"):
        A = np.exp(logA)
        A[0] = params.a0
        a = np.empty(n)
        a[0] = params.a0
        a[1:] = theta[1:] * A[1:]
        H_all = np.exp(lam * logA)
        H_all[0] = params.a0 ** lam
        B = A[:-1] * H_all[1:]
    H = H_all[:-1]
    h = np.empty(k_max + 1)
    h[0] = H[0]
    h[1:] = np.diff(H)
    b = np.empty(k_max + 1)
    b[0] = B[0]
    with np.errstate(invalid="ignore"):
        b[1:] = np.diff(B)
    return Schedule(params, theta[:-1].copy(), logA[:-1].copy(), a[:-1].copy(), A[:-1].copy(),
                    H, h, B, b, float(H_all[-1]))


def constant_h_params(c, mu, L, a0=1.0):
    """Parameters of the constant-H schedule (``H = 1``, ``lambda = 0``).

    The caller picks ``mu`` and ``L`` so that ``mu / (L H) = 1``; the
    recurrence then gives ``a_k / A_k = sqrt(c)``.
    """
    return ScheduleParams(0.0, c, mu, L, a0)


@dataclass(frozen=True)
class GrowthReport:
    lam: float
    fitted: float
    predicted: float
    kind: str  # "power" (exponent of k) or "geometric" (ratio a_{k+1}/a_k)

    @property
    def relative_error(self):
        return abs(self.fitted - self.predicted) / abs(self.predicted)


def asymptotic_growth_check(schedule):
    """Compare the tail growth of ``a_k`` with its predicted rate.

    For ``lambda > 0`` the exponent of ``a_k ~ k^e`` is fitted over the tail
    half and compared with ``(2 - lambda) / lambda``. For ``lambda = 0`` the
    geometric ratio is compared with ``1 / (1 - sqrt(c mu / L))``.
    """
    lam = schedule.params.lam
    k_max = schedule.k_max
    if lam > 0 and k_max < 100.0 / lam:
        warnings.warn("k_max is below 100/lambda; the asymptotic regime may not be reached",
                      stacklevel=2)
    ks = np.arange(max(1, k_max // 2), k_max + 1)
    if ks.size < 2:
        raise InvalidArgumentError("k_max too small for a growth fit")
    loga = np.log(schedule.theta[ks]) + schedule.logA[ks]
    if lam == 0.0:
        slope = np.polyfit(ks, loga, 1)[0]
        return GrowthReport(lam, float(np.exp(slope)),
                            1.0 / (1.0 - math.sqrt(schedule.params.ratio)), "geometric")
    slope = np.polyfit(np.log(ks), loga, 1)[0]
    return GrowthReport(lam, float(slope), (2.0 - lam) / lam, "power")


def condition_margin(schedule, eps_H, c_prime, k):
    """Smallest margin of the weight condition for the min-gradient bound.

    Returns ``min_i [(1 - c') (1/B_{i-1} - 1/B_i) - (c eps_H / L)(1/B_i - 1/B_k)]``
    over ``i = 1..k``; the condition holds when the result is ``>= 0``.
    """
    if not 1 <= k <= schedule.k_max:
        raise InvalidArgumentError("k must lie in 1..k_max")
    p = schedule.params
    invB = 1.0 / schedule.B[: k + 1]
    i = np.arange(1, k + 1)
    margins = ((1.0 - c_prime) * (invB[i - 1] - invB[i])
               - (p.c * eps_H / p.L) * (invB[i] - invB[k]))
    return float(margins.min())
