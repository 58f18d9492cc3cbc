"""Statistical machinery for the progressive estimator.

Holds the Monte-Carlo estimator state (signed sums for the Rademacher
trials plus squared sums for variances), the supremum-deviation bounds
computed from it, the variance-based empirical peeling of vertices into
classes, and the two sufficient-sample-size formulas (the variance-aware
one and the vertex-diameter baseline used for comparison).
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .rng import rademacher_signs

log = logging.getLogger(__name__)


@dataclass
class Partition:
    """Vertices grouped into variance classes, highest variance first.

    ``var_bound[j]`` upper-bounds the true variance of every estimator
    function in class j; bounds are nonincreasing in j and at most 1/4.
    """

    t: int
    class_of: np.ndarray           # per-vertex class index in [0, t)
    var_bound: np.ndarray          # per-class bound, in (0, 1/4]

    def members(self, j: int) -> np.ndarray:
        return np.nonzero(self.class_of == j)[0]


@dataclass
class McEraState:
    """Accumulators for the c-trial Monte-Carlo Rademacher average.

    ``signed_sums[v, k]`` is the running sum of sign * f_v over samples,
    ``sq_sums[v]`` the running sum of f_v squared; signs come from the
    counter-based stream keyed by (seed, sample index, trial).
    """

    n: int
    c: int
    seed: int
    r: int = 0
    signed_sums: np.ndarray = field(init=False)
    sq_sums: np.ndarray = field(init=False)

    def __post_init__(self):
        self.signed_sums = np.zeros((self.n, self.c))
        self.sq_sums = np.zeros(self.n)

    def signs_for_block(self, count: int) -> np.ndarray:
        """Sign rows for the next ``count`` samples (row i -> sample r+i)."""
        return rademacher_signs(self.seed, self.r, count, self.c)

    def add_sample(self, contrib: dict[int, float], signs: np.ndarray) -> None:
        """Fold one sample's sparse contributions in; advances r."""
        for v, f in contrib.items():
            self.signed_sums[v] += f * signs
            self.sq_sums[v] += f * f
        self.r += 1


def wimpy_variance(state: McEraState, members: np.ndarray) -> float:
    """Largest mean-of-squares over the class: max_v sq_sums[v] / r."""
    if state.r < 1:
        raise ValueError("wimpy variance needs at least one sample")
    if members.size == 0:
        log.debug("wimpy variance of an empty class, returning 0")
        return 0.0
    return float(state.sq_sums[members].max() / state.r)


def mcera(state: McEraState, members: np.ndarray) -> float:
    """Monte-Carlo Rademacher average of the class, sup taken as-is.

    (1/c) * sum over trials of max_v signed_sums[v, k] / r; may be
    negative, no clamping here.
    """
    if state.r < 1:
        raise ValueError("mcera needs at least one sample")
    if members.size == 0:
        log.debug("mcera of an empty class, returning 0")
        return 0.0
    per_trial = state.signed_sums[members].max(axis=0) / state.r
    return float(per_trial.mean())


def era_upper_bound(rc: float, wimpy: float, c: int, r: int, delta: float) -> float:
    """Probabilistic upper bound on the true Rademacher average."""
    return rc + math.sqrt(4.0 * wimpy * math.log(1.0 / delta) / (c * r))


def eps_bound(rc: float, wimpy: float, var_bound: float, t: int,
              c: int, r: int, delta: float) -> float:
    """Upper bound xi on the supremum deviation of one class.

    Chains the Monte-Carlo Rademacher average through its concentration
    terms; ``delta`` is this class's share of the failure probability.
    A negative Rademacher estimate is floored at zero before entering
    the square roots (loosening only).
    """
    ell = math.log(4.0 * t / delta)
    r_tilde = max(0.0, era_upper_bound(rc, wimpy, c, r, delta / (4.0 * t)))
    lr = ell / r
    r_i = r_tilde + lr + math.sqrt(lr * lr + 2.0 * lr * r_tilde)
    return 2.0 * r_i + math.sqrt(2.0 * ell * (var_bound + 4.0 * r_i) / r) + ell / (3.0 * r)


def _bennett_h(x: float) -> float:
    return (1.0 + x) * math.log1p(x) - x


def _phi_denominator(x: float, eps: float) -> float:
    g = x * (1.0 - x)
    return g * _bennett_h(eps / g)


def _xhat(var_bound: float, eps: float) -> float:
    """Upper end of the search interval for the numeric sample-size sup."""
    lo = 0.5 - math.sqrt(eps / 3.0 - eps * eps / 9.0)
    hi = 0.5
    # phi is decreasing in x on (0, 1/2]; find the smallest x in [lo, hi]
    # where it drops to 2 eps^2 (always satisfied at 1/2)
    target = 2.0 * eps * eps
    if _phi_denominator(lo, eps) <= target:
        xhat1 = lo
    else:
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if _phi_denominator(mid, eps) <= target:
                hi = mid
            else:
                lo = mid
        xhat1 = hi
    xhat2 = 0.5 - math.sqrt(max(0.0, 0.25 - var_bound))
    return min(xhat1, xhat2)


def sufficient_sample_size_closed_form(var_bound: float, psi_ub: float,
                                       eps: float, delta: float) -> float:
    """Bernstein-shaped closed-form sample count (before rounding)."""
    log_term = max(0.0, math.log(2.0 * psi_ub / var_bound)) + math.log(1.0 / delta)
    return (2.0 * var_bound + 2.0 * eps / 3.0) / (eps * eps) * log_term


def sufficient_sample_size(var_bound: float, psi_ub: float,
                           eps: float, delta: float) -> int:
    """Samples sufficient for a uniform eps-approximation w.p. 1 - delta.

    ``var_bound`` bounds the estimators' maximum variance, ``psi_ub``
    the sum of all centralities (the average-internal-nodes estimate is
    the usual caller value). Returns the ceiling of the larger of the
    closed form and the numeric supremum it approximates.
    """
    if not 0.0 < eps < 1.0 or not 0.0 < delta < 1.0:
        raise ValueError("eps and delta must lie in (0, 1)")
    if not 0.0 < var_bound <= 0.25:
        raise ValueError("var_bound must lie in (0, 1/4]")
    if psi_ub <= 0.0:
        raise ValueError("psi_ub must be positive")
    closed = sufficient_sample_size_closed_form(var_bound, psi_ub, eps, delta)

    xhat = _xhat(var_bound, eps)

    def objective(x: float) -> float:
        num = math.log(2.0 * psi_ub * xhat / (x * delta))
        if num <= 0.0:
            return 0.0
        return num / _phi_denominator(x, eps)

    # coarse log-spaced grid, then golden-section around the best point
    grid = np.exp(np.linspace(math.log(xhat * 1e-9), math.log(xhat * (1 - 1e-12)), 200))
    vals = [objective(float(x)) for x in grid]
    best = int(np.argmax(vals))
    lo = float(grid[max(0, best - 1)])
    hi = float(grid[min(len(grid) - 1, best + 1)])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = objective(x1), objective(x2)
    for _ in range(80):
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = objective(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = objective(x1)
    numeric = max(vals[best], f1, f2)
    return max(1, int(math.ceil(max(closed, numeric))))


def empirical_peeling(sq_sums: np.ndarray, r: int, delta: float) -> Partition:
    """Group vertices into geometric variance buckets with safe bounds.

    Bucket j < t-1 holds vertices whose empirical mean square falls in
    (4^-(j+2), 4^-(j+1)]; the last bucket catches everything smaller
    (zeros included). Each class's variance bound is its bucket edge
    plus a one-sided empirical-Bernstein slack at confidence
    delta / (2t), clamped to 1/4.
    """
    if r < 1:
        raise ValueError("peeling needs at least one bootstrap sample")
    n = sq_sums.size
    what = sq_sums / r
    t = int(math.ceil(math.log(r) / math.log(4.0))) + 2
    edges = 0.25 ** np.arange(1, t + 1)          # bucket upper edges, descending
    class_of = np.empty(n, dtype=np.int64)
    for j in range(t):
        if j == t - 1:
            mask = what <= edges[j]
        elif j == 0:
            mask = what > edges[1]
        else:
            mask = (what > edges[j + 1]) & (what <= edges[j])
        class_of[mask] = j

    ell = math.log(2.0 * t / delta)
    var_bound = np.empty(t)
    for j in range(t):
        if j < t - 1:
            edge = edges[j]
        else:
            members = what[class_of == j]
            edge = float(members.max()) if members.size else 0.0
        slack = math.sqrt(2.0 * edge * ell / r) + ell / (3.0 * r)
        var_bound[j] = min(0.25, edge + slack)
    return Partition(t=t, class_of=class_of, var_bound=var_bound)


def vd_baseline_sample_size(vertex_diameter: int, eps: float, delta: float) -> int:
    """Fixed sample size from the vertex-diameter bound, for comparison.

    Scales with log2 of the internal-vertex count of the longest
    shortest path; independent of n.
    """
    if vertex_diameter < 2:
        raise ValueError("vertex diameter must be at least 2")
    if vertex_diameter == 2:
        log_term = 1.0
    else:
        log_term = math.floor(math.log2(vertex_diameter - 2)) + 1.0
    return int(math.ceil(0.5 / (eps * eps) * (log_term + math.log(1.0 / delta))))
