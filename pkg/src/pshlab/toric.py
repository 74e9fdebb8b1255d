"""Relative extremal functions of Reinhardt sets in C^2.

A plurisubharmonic function invariant under the torus action on a complete
Reinhardt domain is a convex function of ``(log|z1|, log|z2|)`` that is
non-decreasing in each variable.  The relative extremal function is then the
largest such function that is ``<= 0`` on the log-shadow of Omega and
``<= -1`` on the log-shadow of E.

Non-decreasing plus ``<= -1`` on E means ``<= -1`` on the whole quadrant below
E's outer corner, so the obstacle is that quadrant.  The envelope is taken
as the lower convex hull of the obstacle graph together with zero values on
the boundary of Omega's shadow, then relaxed with midpoint-convexity and
monotone projection sweeps until nothing moves.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.spatial import ConvexHull

from .envelope import ExtremalSolution, RegionSup
from .errors import EmptyRegionError, NotCompactlyContainedError, UnsupportedToricError
from .geometry import DomainSpec

_DIRECTIONS = ((1, 0), (0, 1), (1, 1), (1, -1))


@dataclass(eq=False)
class LogGrid:
    """Uniform grid in log-modulus coordinates, top edges on ``log`` of Omega's extent."""

    s1: np.ndarray
    s2: np.ndarray
    inside: np.ndarray
    omega: DomainSpec
    e_corner: tuple[float, float]

    @property
    def shape(self):
        return self.inside.shape

    @property
    def spacing(self) -> float:
        return float(self.s1[1] - self.s1[0])

    def mesh(self):
        return np.meshgrid(self.s1, self.s2, indexing="ij")


def _shadow_inside(omega: DomainSpec, S1, S2, closed=False, tol=1e-12):
    if omega.kind == "polydisk":
        l1, l2 = (math.log(r) for r in omega.radii)
        if closed:
            return (S1 <= l1 + tol) & (S2 <= l2 + tol)
        return (S1 < l1 - tol) & (S2 < l2 - tol)
    a = omega.radii[0]
    q = np.exp(2 * S1) + np.exp(2 * S2)
    return q <= a * a * (1 + tol) if closed else q < a * a * (1 - tol)


def _check_omega(omega: DomainSpec) -> None:
    if omega.dim != 2 or omega.kind not in ("polydisk", "ball"):
        raise UnsupportedToricError("toric path needs a polydisk or ball in C^2")
    if any(abs(c) > 0 for c in omega.centers):
        raise UnsupportedToricError("toric path needs Omega centred at the origin")


def toric_relative_extremal(e_radii: Sequence[tuple[float, float]], omega: DomainSpec,
                            resolution: int = 64, tol: float = 1e-10,
                            max_iter: int = 10_000) -> ExtremalSolution:
    """Relative extremal function of ``E = {r_in_j <= |z_j| <= r_out_j}`` in ``omega``.

    ``resolution`` counts nodes per unit of log-modulus.
    """
    if len(e_radii) != 2:
        raise UnsupportedToricError("toric path is implemented for n = 2 only")
    _check_omega(omega)
    lo = []
    for r_in, r_out in e_radii:
        if not r_out > 0 or r_in < 0 or r_in > r_out:
            raise UnsupportedToricError(
                f"radii interval ({r_in}, {r_out}) lies on a coordinate axis or is empty")
        lo.append(math.log(r_out))
    corner = np.array(lo)
    if not _shadow_inside(omega, corner[0], corner[1]):
        raise NotCompactlyContainedError("E is not compactly inside Omega")

    delta = 1.0 / resolution
    if omega.kind == "polydisk":
        top = [math.log(r) for r in omega.radii]
    else:
        top = [math.log(omega.radii[0])] * 2
    s_min = min(lo) - 1.0
    axes = []
    for t in top:
        n = int(math.ceil((t - s_min) / delta))
        axes.append(t - delta * np.arange(n, -1, -1))
    S1, S2 = np.meshgrid(axes[0], axes[1], indexing="ij")
    inside = _shadow_inside(omega, S1, S2)
    grid = LogGrid(axes[0], axes[1], inside, omega, (lo[0], lo[1]))

    obstacle = np.where((S1 <= lo[0] + 1e-12) & (S2 <= lo[1] + 1e-12), -1.0, 0.0)
    obstacle[~inside] = 0.0
    values = _hull_envelope(grid, obstacle)
    its, change = _relax(grid, values, obstacle, tol, max_iter)
    return ExtremalSolution(grid, values, its, change, "toric", change <= tol, tol,
                            "hull+midpoint", None, {"s_min": float(axes[0][0])})


def _boundary_samples(grid: LogGrid, n: int) -> np.ndarray:
    omega = grid.omega
    s_lo = min(grid.s1[0], grid.s2[0])
    if omega.kind == "polydisk":
        l1, l2 = grid.s1[-1], grid.s2[-1]
        right = np.column_stack([np.full(len(grid.s2), l1), grid.s2])
        top = np.column_stack([grid.s1, np.full(len(grid.s1), l2)])
        return np.vstack([right, top])
    a = omega.radii[0]
    th = np.linspace(0.0, np.pi / 2, 8 * n + 1)[1:-1]
    pts = np.column_stack([np.log(a * np.cos(th)), np.log(a * np.sin(th))])
    pts = pts[(pts[:, 0] >= s_lo) & (pts[:, 1] >= s_lo)]
    # where the circle meets the truncation edges
    edge = math.log(math.sqrt(a * a - math.exp(2 * s_lo)))
    return np.vstack([pts, [[s_lo, edge], [edge, s_lo]]])


def _hull_envelope(grid: LogGrid, obstacle: np.ndarray) -> np.ndarray:
    S1, S2 = grid.mesh()
    low = (obstacle < 0) & grid.inside
    bnd = _boundary_samples(grid, max(grid.shape))
    pts = np.vstack([
        np.column_stack([S1[low], S2[low], obstacle[low]]),
        np.column_stack([bnd, np.zeros(len(bnd))]),
    ])
    hull = ConvexHull(pts)
    eq = hull.equations[hull.equations[:, 2] < -1e-12]
    # plane of each lower facet: value = -(n1 s1 + n2 s2 + off) / n3
    c1 = -eq[:, 0] / eq[:, 2]
    c2 = -eq[:, 1] / eq[:, 2]
    c0 = -eq[:, 3] / eq[:, 2]
    flat1, flat2 = S1.ravel(), S2.ravel()
    out = np.full(flat1.shape, -np.inf)
    for s in range(0, len(flat1), 4096):
        v = c0[None, :] + c1[None, :] * flat1[s:s + 4096, None] + c2[None, :] * flat2[s:s + 4096, None]
        out[s:s + 4096] = v.max(axis=1)
    out = out.reshape(S1.shape)
    out = np.minimum(out, obstacle)
    out[~grid.inside] = 0.0
    return np.clip(out, -1.0, 0.0)


def _monotone_projection(values: np.ndarray, inside: np.ndarray) -> None:
    # largest function non-decreasing in each index below the current one
    v = np.where(inside, values, 0.0)
    v = np.minimum.accumulate(v[::-1, :], axis=0)[::-1, :]
    v = np.minimum.accumulate(v[:, ::-1], axis=1)[:, ::-1]
    values[inside] = v[inside]


def _relax(grid: LogGrid, values: np.ndarray, obstacle: np.ndarray, tol: float, max_iter: int):
    inside = grid.inside
    S1, S2 = grid.mesh()
    # a stencil is used only where both ends are inside or on the boundary of the shadow
    closed = np.pad(_shadow_inside(grid.omega, S1, S2, closed=True, tol=1e-9), 1,
                    constant_values=False)
    n0, n1 = values.shape
    change = 0.0
    for it in range(1, max_iter + 1):
        old = values.copy()
        padded = np.pad(values, 1)
        for d0, d1 in _DIRECTIONS:
            plus = (slice(1 + d0, 1 + d0 + n0), slice(1 + d1, 1 + d1 + n1))
            minus = (slice(1 - d0, 1 - d0 + n0), slice(1 - d1, 1 - d1 + n1))
            ok = inside & closed[plus] & closed[minus]
            avg = 0.5 * (padded[plus] + padded[minus])
            values[ok] = np.minimum(values[ok], avg[ok])
        _monotone_projection(values, inside)
        np.minimum(values, obstacle, out=values)
        change = float(np.abs(values - old).max())
        if change <= tol:
            return it, change
    return max_iter, change


def toric_value(sol: ExtremalSolution, z1, z2) -> np.ndarray:
    """Evaluate a toric solution at points of C^2 by bilinear interpolation in log-moduli."""
    grid: LogGrid = sol.grid
    with np.errstate(divide="ignore"):
        s1 = np.log(np.abs(np.asarray(z1, dtype=complex)))
        s2 = np.log(np.abs(np.asarray(z2, dtype=complex)))
    return _interp(grid, sol.values, s1, s2)


def _interp(grid: LogGrid, v: np.ndarray, s1, s2):
    d = grid.spacing
    f1 = (np.clip(s1, grid.s1[0], grid.s1[-1]) - grid.s1[0]) / d
    f2 = (np.clip(s2, grid.s2[0], grid.s2[-1]) - grid.s2[0]) / d
    i = np.clip(np.floor(f1).astype(int), 0, len(grid.s1) - 2)
    j = np.clip(np.floor(f2).astype(int), 0, len(grid.s2) - 2)
    t1 = np.clip(f1 - i, 0, 1)
    t2 = np.clip(f2 - j, 0, 1)
    return ((1 - t1) * (1 - t2) * v[i, j] + t1 * (1 - t2) * v[i + 1, j]
            + (1 - t1) * t2 * v[i, j + 1] + t1 * t2 * v[i + 1, j + 1])


def toric_region_sup(sol: ExtremalSolution, region: DomainSpec) -> RegionSup:
    """Sup over a centred ball or polydisk region of C^2.

    ``where`` packs the moduli ``(|z1|, |z2|)`` of the maximizer as a complex
    number.
    """
    grid: LogGrid = sol.grid
    _check_omega(region)
    S1, S2 = grid.mesh()
    sel = _shadow_inside(region, S1, S2, closed=True, tol=1e-9) & _shadow_inside(
        grid.omega, S1, S2, closed=True, tol=1e-9)
    if not sel.any():
        raise EmptyRegionError(f"{region.label} misses the log grid")
    vals = np.where(sel, sol.values, -np.inf)
    k = int(np.argmax(vals))
    i, j = np.unravel_index(k, vals.shape)
    return RegionSup(float(vals[i, j]), complex(math.exp(S1[i, j]), math.exp(S2[i, j])))
