"""Relative extremal functions on lattices and their Laplacian mass.

The relative extremal function of ``E`` in a disk ``Omega`` is computed as the
largest discrete subharmonic function below the obstacle that is ``-1`` on
the mask and ``0`` elsewhere, with ``0`` on the boundary nodes.  Its fixed
point is the discrete harmonic measure of the condenser ``(E, Omega)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from . import _multigrid
from .errors import EmptyRegionError, EmptySetError, InvalidRadiiError, UnconvergedError
from .geometry import DomainSpec, Grid, SetMask

METHODS = ("multigrid", "jacobi", "red-black")


@dataclass(eq=False)
class ExtremalSolution:
    """A scalar field on a lattice plus solver diagnostics.

    ``kind`` is ``"relative"`` for relative extremal functions,
    ``"siciak-grid"`` for Siciak estimates sampled on a grid and ``"toric"``
    for the log-modulus solver (then ``grid`` is a :class:`pshlab.toric.LogGrid`).
    """

    grid: object
    values: np.ndarray
    iterations: int
    residual: float
    kind: str
    converged: bool = True
    tol: float = 1e-8
    method: str = ""
    mask: SetMask | None = None
    diagnostics: dict = field(default_factory=dict)


class CapacityMass(NamedTuple):
    mass: float
    density: np.ndarray


class RegionSup(NamedTuple):
    value: float
    where: complex


def obstacle(mask: SetMask) -> np.ndarray:
    return np.where(mask.flags, -1.0, 0.0)


def _sweep(u: np.ndarray, psi: np.ndarray, free: np.ndarray, ordering: str) -> float:
    """One obstacle-clamped relaxation sweep in place; returns the sup-norm change."""
    old = u.copy()
    if ordering == "jacobi":
        avg = np.zeros_like(u)
        avg[1:-1, 1:-1] = 0.25 * (u[:-2, 1:-1] + u[2:, 1:-1] + u[1:-1, :-2] + u[1:-1, 2:])
        u[free] = np.minimum(psi[free], avg[free])
    else:
        for color in (0, 1):
            avg = np.zeros_like(u)
            avg[1:-1, 1:-1] = 0.25 * (u[:-2, 1:-1] + u[2:, 1:-1] + u[1:-1, :-2] + u[1:-1, 2:])
            sel = free & _checker(u.shape, color)
            u[sel] = np.minimum(psi[sel], avg[sel])
    return float(np.abs(u - old).max())


_CHECKERS: dict = {}


def _checker(shape, color):
    key = (shape, color)
    if key not in _CHECKERS:
        i, j = np.indices(shape)
        _CHECKERS[key] = (i + j) % 2 == color
    return _CHECKERS[key]


def relax(mask: SetMask, tol: float = 1e-8, max_iter: int | None = None,
          ordering: str = "jacobi", record: list | None = None) -> ExtremalSolution:
    """Plain obstacle relaxation ``u <- min(psi, four-neighbour average)`` from ``psi``.

    Iterates decrease monotonically.  Slow (diffusion time scaling), so only
    practical on coarse grids; :func:`relative_extremal` uses it for the
    ``jacobi`` and ``red-black`` methods.  ``record`` collects the sup norm of
    every iterate when given.
    """
    grid = mask.grid
    psi = obstacle(mask)
    free = grid.interior
    u = psi.copy()
    u[~grid.inside] = 0.0
    if max_iter is None:
        max_iter = 20 * max(grid.shape) ** 2
    change = math.inf
    it = 0
    while it < max_iter:
        it += 1
        change = _sweep(u, psi, free, ordering)
        if record is not None:
            record.append(u.copy())
        if change <= tol:
            break
    return ExtremalSolution(grid, u, it, change, "relative", change <= tol, tol, ordering, mask)


def relative_extremal(mask: SetMask, omega: DomainSpec | None = None, tol: float = 1e-8,
                      max_iter: int | None = None, method: str = "multigrid") -> ExtremalSolution:
    """Relative extremal function ``u_{E,Omega}`` of a rasterized set.

    Parameters
    ----------
    mask : SetMask
        Rasterized ``E``; its grid must have been built on ``omega``.
    omega : DomainSpec, optional
        The disk ``Omega``.  Defaults to the grid's domain.
    tol : float
        Target sup-norm change of one obstacle sweep at the returned field.
        The multigrid path drives the five-point Laplacian on free nodes
        below ``tol``, which bounds the sweep change by ``tol*h**2/4``.
    max_iter : int, optional
        Sweep cap for the relaxation methods (default ``20*n**2`` for ``n``
        nodes per side); CG iteration cap for multigrid.
    method : {"multigrid", "jacobi", "red-black"}

    Returns
    -------
    ExtremalSolution
        ``converged`` is False when the cap was hit; that is a diagnostic,
        not an error.
    """
    grid = mask.grid
    if omega is not None and omega.as_plane() != grid.domain:
        raise ValueError(f"mask grid was built on {grid.domain.label}, not {omega.label}")
    if grid.domain.kind != "disk":
        raise ValueError("relative_extremal expects a disk Omega (n = 1 path)")
    if mask.node_count == 0:
        raise EmptySetError("empty mask")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if method != "multigrid":
        sol = relax(mask, tol, max_iter, method)
    else:
        psi = obstacle(mask)
        fixed = ~grid.interior | mask.flags
        u0 = np.where(mask.flags, -1.0, 0.0)
        u, its, defect = _multigrid.solve_dirichlet(
            fixed, u0, grid.h, tol=tol, max_iter=max_iter or 200)
        np.clip(u, -1.0, 0.0, out=u)
        u[~grid.inside] = 0.0
        u[grid.boundary] = 0.0
        # one clamped sweep at the fixed point measures the residual
        change = _sweep(u, psi, grid.interior, "jacobi")
        converged = defect <= tol and change <= tol
        sol = ExtremalSolution(grid, u, its + 1, change, "relative", converged, tol,
                               "multigrid", mask, {"laplacian_defect": defect})
    sol.diagnostics["mask_oscillation"] = mask_oscillation(sol)
    return sol


def mask_oscillation(sol: ExtremalSolution) -> float:
    """Largest jump ``u + 1`` from a mask node to a free neighbour.

    Shrinks like ``h`` where the true envelope is continuous at ``E``; a
    heuristic regularity indicator, not a certificate.
    """
    m = sol.mask.flags
    u = sol.values
    jump = 0.0
    for axis in (0, 1):
        for shift in (1, -1):
            nb_mask = np.roll(m, shift, axis=axis)
            sel = nb_mask & ~m & sol.grid.interior
            if sel.any():
                jump = max(jump, float((u[sel] + 1.0).max()))
    return jump


def concentric_disk_u(t: float, a: float, z) -> np.ndarray | float:
    """Closed form ``max(-1, log(|z|/a)/log(a/t))`` for ``E = disk(0,t)`` in ``disk(0,a)``."""
    if not 0 < t < a:
        raise InvalidRadiiError(f"need 0 < t < a, got t={t}, a={a}")
    r = np.abs(np.asarray(z, dtype=complex))
    with np.errstate(divide="ignore"):
        val = np.log(r / a) / math.log(a / t)
    val = np.clip(val, -1.0, 0.0)
    return float(val) if np.ndim(val) == 0 else val


def laplacian_mass(sol: ExtremalSolution) -> CapacityMass:
    """Total discrete Laplacian of a relative extremal function.

    For ``E = disk(0,t)`` in ``disk(0,a)`` this tends to ``2*pi/log(a/t)``, the
    condenser charge.
    """
    if sol.kind != "relative":
        raise ValueError("laplacian_mass needs a relative extremal solution")
    if not sol.converged or sol.residual > sol.tol:
        raise UnconvergedError(f"solution residual {sol.residual:.3g} exceeds tol {sol.tol:.3g}")
    u = sol.values
    dens = np.zeros_like(u)
    dens[1:-1, 1:-1] = u[:-2, 1:-1] + u[2:, 1:-1] + u[1:-1, :-2] + u[1:-1, 2:] - 4.0 * u[1:-1, 1:-1]
    dens[~sol.grid.interior] = 0.0
    return CapacityMass(float(dens.sum()), dens)


def region_sup(sol: ExtremalSolution, region: DomainSpec) -> RegionSup:
    """Maximum of a lattice field over the nodes in a closed planar region."""
    if sol.kind == "toric":
        from .toric import toric_region_sup
        return toric_region_sup(sol, region)
    grid: Grid = sol.grid
    sel = grid.region_flags(region)
    if not sel.any():
        raise EmptyRegionError(f"{region.label} contains no nodes of the grid")
    vals = np.where(sel, sol.values, -np.inf)
    k = int(np.argmax(vals))
    i, j = np.unravel_index(k, vals.shape)
    return RegionSup(float(vals[i, j]), complex(grid.nodes[i, j]))


def region_inf(sol: ExtremalSolution, region: DomainSpec) -> RegionSup:
    grid: Grid = sol.grid
    sel = grid.region_flags(region)
    if not sel.any():
        raise EmptyRegionError(f"{region.label} contains no nodes of the grid")
    vals = np.where(sel, sol.values, np.inf)
    k = int(np.argmin(vals))
    i, j = np.unravel_index(k, vals.shape)
    return RegionSup(float(vals[i, j]), complex(grid.nodes[i, j]))


def sample_field(sol: ExtremalSolution, z) -> np.ndarray:
    """Bilinear interpolation of a planar lattice field at arbitrary points."""
    grid: Grid = sol.grid
    z = np.asarray(z, dtype=complex)
    fx = z.real / grid.h - grid.i0
    fy = z.imag / grid.h - grid.j0
    i = np.clip(np.floor(fx).astype(int), 0, grid.shape[0] - 2)
    j = np.clip(np.floor(fy).astype(int), 0, grid.shape[1] - 2)
    tx = np.clip(fx - i, 0.0, 1.0)
    ty = np.clip(fy - j, 0.0, 1.0)
    v = sol.values
    return ((1 - tx) * (1 - ty) * v[i, j] + tx * (1 - ty) * v[i + 1, j]
            + (1 - tx) * ty * v[i, j + 1] + tx * ty * v[i + 1, j + 1])
