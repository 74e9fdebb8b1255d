"""Leja points, transfinite diameters and Siciak extremal function estimates.

In one variable the Siciak extremal function of ``E`` is the Green function
of the complement with pole at infinity.  It is approximated from below by
``(1/k) log(|w_k(z)| / ||w_k||_E)`` with ``w_k`` the monic polynomial whose
roots are the first ``k`` Leja points of ``E``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple, Sequence

import numpy as np
from numba import njit
from scipy.spatial import ConvexHull, QhullError

from .envelope import ExtremalSolution
from .errors import ArityError, EmptySetError, PoolExhaustedError
from .geometry import Grid, SetMask

_CHUNK = 1 << 16


@njit(cache=True)
def _sum_log_dist(zr, zi, pr, pi):
    out = np.empty(zr.shape[0])
    for m in range(zr.shape[0]):
        s = 0.0
        for j in range(pr.shape[0]):
            dx = zr[m] - pr[j]
            dy = zi[m] - pi[j]
            s += 0.5 * math.log(dx * dx + dy * dy)
        out[m] = s
    return out


def sum_log_dist(z, roots: np.ndarray) -> np.ndarray:
    """``sum_j log|z - roots_j|`` for an array of points (``-inf`` at roots)."""
    z = np.asarray(z, dtype=complex)
    flat = z.ravel()
    roots = np.asarray(roots, dtype=complex)
    out = np.empty(flat.shape[0])
    pr, pi = np.ascontiguousarray(roots.real), np.ascontiguousarray(roots.imag)
    with np.errstate(divide="ignore"):
        for s in range(0, flat.shape[0], _CHUNK):
            part = flat[s:s + _CHUNK]
            out[s:s + _CHUNK] = _sum_log_dist(np.ascontiguousarray(part.real),
                                               np.ascontiguousarray(part.imag), pr, pi)
    return out.reshape(z.shape)


# --------------------------------------------------------------------------
# Leja sequences


@dataclass(eq=False)
class LejaSequence:
    """Greedy Leja points with their running log-products.

    ``increments[m]`` is ``sum_{j<m} log|z_m - z_j|`` (zero for the first
    point) and ``log_products[m]`` its cumulative sum, i.e. the log of the
    Vandermonde product of the first ``m+1`` points.
    """

    points: np.ndarray
    increments: np.ndarray
    pool: np.ndarray
    mask: SetMask | None = None

    @property
    def k(self) -> int:
        return len(self.points)

    @property
    def log_products(self) -> np.ndarray:
        return np.cumsum(self.increments)


def _diameter_start(pool: np.ndarray) -> int:
    """Index of the lexicographically smallest endpoint of a diameter of ``pool``."""
    if len(pool) <= 2048:
        cand = np.arange(len(pool))
    else:
        try:
            cand = np.unique(ConvexHull(np.column_stack([pool.real, pool.imag])).vertices)
        except QhullError:
            # collinear pool: the extremes along the principal direction
            d = pool - pool.mean()
            direction = d[np.argmax(np.abs(d))]
            proj = (d * np.conj(direction)).real
            cand = np.array([np.argmin(proj), np.argmax(proj)])
    pts = pool[cand]
    dist = np.abs(pts[:, None] - pts[None, :])
    best = dist.max()
    ends = cand[np.any(dist >= best * (1 - 1e-12), axis=1)]
    return int(ends.min())


def leja_from_points(pool: np.ndarray, k: int, mask: SetMask | None = None) -> LejaSequence:
    """Greedy Leja sequence drawn from a candidate pool.

    The pool order decides ties: among maximizers the earliest candidate
    wins, so a lexicographically sorted pool gives lexicographic tie-breaking.
    """
    pool = np.asarray(pool, dtype=complex)
    if k < 2:
        raise ValueError("need k >= 2 Leja points")
    if k > len(pool):
        raise PoolExhaustedError(f"asked for {k} Leja points from a pool of {len(pool)}")
    idx = np.empty(k, dtype=np.int64)
    inc = np.zeros(k)
    idx[0] = _diameter_start(pool)
    with np.errstate(divide="ignore"):
        logp = np.log(np.abs(pool - pool[idx[0]]))
    logp[idx[0]] = -np.inf
    for m in range(1, k):
        j = int(np.argmax(logp))
        if not np.isfinite(logp[j]):
            raise PoolExhaustedError("pool has fewer distinct points than requested")
        idx[m] = j
        inc[m] = logp[j]
        with np.errstate(divide="ignore"):
            logp += np.log(np.abs(pool - pool[j]))
        logp[j] = -np.inf
    return LejaSequence(pool[idx], inc, pool, mask)


def leja_pool(mask: SetMask) -> np.ndarray:
    """Edge nodes of the mask when it has interior, all nodes for thin masks."""
    edge = mask.edge
    if edge.sum() < mask.node_count:
        return mask.grid.nodes[edge]
    return mask.grid.nodes[mask.flags]


def leja_points(mask: SetMask, k: int) -> LejaSequence:
    if mask.node_count == 0:
        raise EmptySetError("empty mask")
    if k > mask.node_count:
        raise PoolExhaustedError(f"k={k} exceeds the {mask.node_count} mask nodes")
    return leja_from_points(leja_pool(mask), k, mask)


# --------------------------------------------------------------------------
# capacity


@dataclass(frozen=True)
class CapacityEstimate:
    gamma: float
    robin: float
    diameters: np.ndarray
    k: int
    converged: bool
    spread: float


def _tail_fit(m: np.ndarray, d: np.ndarray) -> float:
    design = np.column_stack([np.ones(len(m)), np.log(m) / m])
    coef = np.linalg.lstsq(design, np.log(d), rcond=None)[0]
    return float(math.exp(coef[0]))


def diameters(leja: LejaSequence) -> np.ndarray:
    """``d_m = (prod_{i<j<=m} |z_i - z_j|)^(2/(m(m-1)))`` for ``m = 2..k``."""
    m = np.arange(2, leja.k + 1)
    return np.exp(2.0 * leja.log_products[1:] / (m * (m - 1)))


def transfinite_diameter(leja: LejaSequence) -> CapacityEstimate:
    """Extrapolated transfinite diameter, i.e. the logarithmic capacity.

    The tail ``m in [k/2, k]`` is fitted by ``log d_m = log gamma + c log(m)/m``,
    the rate at which Fekete diameters of a circle converge.  ``spread`` is
    the relative change of the fit when the window is halved.
    """
    k = leja.k
    if k < 32:
        raise ValueError("transfinite_diameter needs k >= 32")
    d = diameters(leja)
    m = np.arange(2, k + 1)
    tail = m >= k // 2
    gamma = _tail_fit(m[tail], d[tail])
    early = tail & (m <= (k // 2 + k) // 2)
    late = m >= (3 * k) // 4
    spread = max(abs(_tail_fit(m[early], d[early]) - gamma),
                 abs(_tail_fit(m[late], d[late]) - gamma)) / gamma
    dt = d[tail]
    monotone = bool(np.all(dt[1:] <= dt[:-1] * (1 + 1e-3)))
    return CapacityEstimate(gamma, -math.log(gamma), d, k, monotone and spread < 1e-2, spread)


# --------------------------------------------------------------------------
# Siciak estimates


@dataclass(eq=False)
class SiciakEstimator:
    """``V(z) ~ max(0, (sum log|z - z_j| - log||w_k||_E) / k)`` from Leja roots."""

    leja: LejaSequence
    log_norm: float

    @property
    def k(self) -> int:
        return self.leja.k

    def raw(self, z) -> np.ndarray:
        """The estimator before the clamp at zero (a Lelong-class function)."""
        return (sum_log_dist(z, self.leja.points) - self.log_norm) / self.k

    def __call__(self, z) -> np.ndarray:
        return np.maximum(0.0, self.raw(z))


def siciak_estimator(mask: SetMask, k: int = 128, norm_samples: int = 4096) -> SiciakEstimator:
    """Estimator normalized by the sup of ``|w_k|`` over the mask nodes.

    When the mask carries its set spec, ``norm_samples`` points of the exact
    outer boundary join the norm, so lattice gaps cannot hide peaks of
    ``|w_k|`` and the estimate stays below the true extremal function.
    """
    leja = leja_points(mask, k)
    pts = mask.points
    if mask.spec is not None and norm_samples:
        pts = np.concatenate([pts, mask.spec.sample_points(norm_samples)])
    log_norm = float(sum_log_dist(pts, leja.points).max())
    return SiciakEstimator(leja, log_norm)


def siciak_from_points(pool: np.ndarray, k: int, norm_points: np.ndarray | None = None) -> SiciakEstimator:
    leja = leja_from_points(pool, k)
    pts = pool if norm_points is None else norm_points
    return SiciakEstimator(leja, float(sum_log_dist(pts, leja.points).max()))


def siciak_estimate(est: SiciakEstimator, z) -> np.ndarray | float:
    if est.k < 8:
        raise ValueError("siciak_estimate needs an estimator with k >= 8")
    out = est(z)
    return float(out) if np.ndim(out) == 0 else out


def siciak_field(est: SiciakEstimator, grid: Grid) -> ExtremalSolution:
    """The estimate sampled on every inside node of a grid (zero elsewhere)."""
    vals = np.zeros(grid.shape)
    vals[grid.inside] = est(grid.nodes[grid.inside])
    return ExtremalSolution(grid, vals, 0, 0.0, "siciak-grid", True, 0.0, "leja",
                            est.leja.mask, {"k": est.k})


def circle_sup(f: Callable, center: complex, radius: float, n: int = 512) -> float:
    """Max of ``f`` over ``n`` equally spaced points of a circle.

    For subharmonic ``f`` this is the sup over the closed disk.
    """
    th = 2 * np.pi * np.arange(n) / n
    return float(np.max(f(center + radius * np.exp(1j * th))))


class RobinEstimate(NamedTuple):
    robin: float
    sequence: np.ndarray
    monotone: bool


def robin_from_field(est: SiciakEstimator, radii: Sequence[float], n_angles: int = 512) -> RobinEstimate:
    """Extrapolate ``sup_{|z|=s} V - log s`` as ``s`` grows.

    The sequence must be non-increasing in ``s``; violations beyond ``1e-3``
    are reported through ``monotone`` rather than raised.  The limit comes
    from a least-squares fit ``robin + c/s``.
    """
    radii = np.asarray(sorted(radii), dtype=float)
    pts = est.leja.points
    diam = float(np.abs(pts[:, None] - pts[None, :]).max())
    if radii[0] <= 2 * diam:
        raise ValueError(f"radii must exceed twice the set diameter ({2 * diam:.3g})")
    seq = np.array([circle_sup(est, 0j, s, n_angles) - math.log(s) for s in radii])
    monotone = bool(np.all(np.diff(seq) <= 1e-3))
    if len(radii) == 1:
        return RobinEstimate(float(seq[0]), seq, monotone)
    design = np.column_stack([np.ones(len(radii)), 1.0 / radii])
    robin = float(np.linalg.lstsq(design, seq, rcond=None)[0][0])
    return RobinEstimate(robin, seq, monotone)


def ball_siciak(center, t: float, z) -> np.ndarray | float:
    """``log+(|z - center| / t)``, the Siciak function of a closed disk/ball."""
    z = np.asarray(z, dtype=complex)
    center = np.asarray(center, dtype=complex)
    if z.ndim and center.ndim:
        r = np.sqrt(np.sum(np.abs(z - center.reshape(center.shape + (1,) * (z.ndim - 1))) ** 2, axis=0))
    else:
        r = np.abs(z - center)
    out = np.maximum(0.0, np.log(np.maximum(r, 1e-300) / t))
    return float(out) if np.ndim(out) == 0 else out


def product_siciak(components: Sequence[Callable], z) -> np.ndarray | float:
    """Siciak function of a product set: ``max_j V_{E_j}(z_j)``.

    ``z`` has the coordinate index first, so ``z[j]`` may be an array.
    """
    z = [np.asarray(zj, dtype=complex) for zj in z]
    if len(z) != len(components):
        raise ArityError(f"{len(components)} factors but a point with {len(z)} coordinates")
    out = components[0](z[0])
    for f, zj in zip(components[1:], z[1:]):
        out = np.maximum(out, f(zj))
    return float(out) if np.ndim(out) == 0 else out
