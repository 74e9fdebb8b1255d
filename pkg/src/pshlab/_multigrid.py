"""Geometric multigrid preconditioned CG for the five-point Dirichlet problem.

The unknowns are the non-fixed nodes of a boolean array; fixed nodes hold
Dirichlet values.  Coarse levels take every other node, a coarse node being
fixed when its fine twin is.  The V-cycle is symmetric (red-black on the way
down, black-red on the way up, transpose restriction), so it is a valid CG
preconditioner even where the rediscretized coarse masks are crude.
"""
from __future__ import annotations

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import factorized
from numba import njit

_COARSEST = 40


@njit(cache=True)
def _rbgs(u, f, fixed, h2, color):
    n0, n1 = u.shape
    for i in range(1, n0 - 1):
        j0 = 1 + ((i + 1 + color) % 2)
        for j in range(j0, n1 - 1, 2):
            if not fixed[i, j]:
                u[i, j] = 0.25 * (u[i - 1, j] + u[i + 1, j] + u[i, j - 1] + u[i, j + 1] + h2 * f[i, j])


@njit(cache=True)
def _apply(u, fixed, inv_h2, out):
    # out = -Laplacian(u) on free nodes, 0 on fixed nodes
    n0, n1 = u.shape
    out[:, :] = 0.0
    for i in range(1, n0 - 1):
        for j in range(1, n1 - 1):
            if not fixed[i, j]:
                out[i, j] = (4.0 * u[i, j] - u[i - 1, j] - u[i + 1, j] - u[i, j - 1] - u[i, j + 1]) * inv_h2


@njit(cache=True)
def _residual(u, f, fixed, inv_h2, r):
    n0, n1 = u.shape
    r[:, :] = 0.0
    for i in range(1, n0 - 1):
        for j in range(1, n1 - 1):
            if not fixed[i, j]:
                r[i, j] = f[i, j] - (4.0 * u[i, j] - u[i - 1, j] - u[i + 1, j]
                                     - u[i, j - 1] - u[i, j + 1]) * inv_h2


@njit(cache=True)
def _restrict(r, fixedc, rc):
    n0, n1 = rc.shape
    rc[:, :] = 0.0
    for I in range(1, n0 - 1):
        for J in range(1, n1 - 1):
            if not fixedc[I, J]:
                i = 2 * I
                j = 2 * J
                rc[I, J] = (4.0 * r[i, j]
                            + 2.0 * (r[i - 1, j] + r[i + 1, j] + r[i, j - 1] + r[i, j + 1])
                            + r[i - 1, j - 1] + r[i - 1, j + 1] + r[i + 1, j - 1] + r[i + 1, j + 1]) / 16.0


@njit(cache=True)
def _prolong_add(ec, fixed, u):
    n0, n1 = u.shape
    for i in range(1, n0 - 1):
        for j in range(1, n1 - 1):
            if fixed[i, j]:
                continue
            I = i // 2
            J = j // 2
            if i % 2 == 0 and j % 2 == 0:
                v = ec[I, J]
            elif i % 2 == 1 and j % 2 == 0:
                v = 0.5 * (ec[I, J] + ec[I + 1, J])
            elif i % 2 == 0:
                v = 0.5 * (ec[I, J] + ec[I, J + 1])
            else:
                v = 0.25 * (ec[I, J] + ec[I + 1, J] + ec[I, J + 1] + ec[I + 1, J + 1])
            u[i, j] += v


@njit(cache=True)
def _dot(a, b):
    s = 0.0
    n0, n1 = a.shape
    for i in range(n0):
        for j in range(n1):
            s += a[i, j] * b[i, j]
    return s


@njit(cache=True)
def _axpy(alpha, x, y):
    # y += alpha * x, returns max |y| change norm unused
    n0, n1 = x.shape
    for i in range(n0):
        for j in range(n1):
            y[i, j] += alpha * x[i, j]


@njit(cache=True)
def _xpby(x, beta, y):
    # y = x + beta * y
    n0, n1 = x.shape
    for i in range(n0):
        for j in range(n1):
            y[i, j] = x[i, j] + beta * y[i, j]


class _Coarse:
    def __init__(self, fixed, h2):
        free = ~fixed
        self.free = free
        n = int(free.sum())
        idx = -np.ones(fixed.shape, dtype=np.int64)
        idx[free] = np.arange(n)
        fi = np.argwhere(free)
        rows = [np.arange(n)]
        cols = [np.arange(n)]
        vals = [np.full(n, 4.0 / h2)]
        for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            nb = idx[fi[:, 0] + di, fi[:, 1] + dj]
            ok = nb >= 0
            rows.append(np.arange(n)[ok])
            cols.append(nb[ok])
            vals.append(np.full(ok.sum(), -1.0 / h2))
        self.n = n
        if n:
            mat = sp.csc_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
                                shape=(n, n))
            self.solve_free = factorized(mat)

    def __call__(self, f):
        u = np.zeros(f.shape)
        if self.n:
            u[self.free] = self.solve_free(f[self.free])
        return u


class Hierarchy:
    """Level data for one fixed-node pattern."""

    def __init__(self, fixed: np.ndarray, h: float, nu: int = 2):
        n0, n1 = fixed.shape
        levels = 0
        while min(n0, n1) >> levels > _COARSEST:
            levels += 1
        block = 1 << levels
        # pad so each axis has block*m + 1 nodes; padding is fixed (exterior)
        p0 = (-(n0 - 1)) % block
        p1 = (-(n1 - 1)) % block
        self.shape = (n0, n1)
        self.pad = (p0, p1)
        fx = np.ones((n0 + p0, n1 + p1), dtype=np.bool_)
        fx[:n0, :n1] = fixed
        fx[0, :] = fx[-1, :] = True
        fx[:, 0] = fx[:, -1] = True
        self.nu = nu
        self.levels = []
        hc = h
        while True:
            if min(fx.shape) <= _COARSEST or len(self.levels) == levels:
                self.levels.append((fx, hc * hc, _Coarse(fx, hc * hc)))
                break
            self.levels.append((fx, hc * hc, None))
            fx = fx[::2, ::2].copy()
            fx[0, :] = fx[-1, :] = True
            fx[:, 0] = fx[:, -1] = True
            hc *= 2.0

    def embed(self, a: np.ndarray, fill=0.0) -> np.ndarray:
        out = np.full((self.shape[0] + self.pad[0], self.shape[1] + self.pad[1]), fill, dtype=a.dtype)
        out[: self.shape[0], : self.shape[1]] = a
        return out

    def vcycle(self, f: np.ndarray, k: int = 0) -> np.ndarray:
        fixed, h2, coarse = self.levels[k]
        if coarse is not None:
            return coarse(f)
        u = np.zeros_like(f)
        for _ in range(self.nu):
            _rbgs(u, f, fixed, h2, 0)
            _rbgs(u, f, fixed, h2, 1)
        r = np.empty_like(u)
        _residual(u, f, fixed, 1.0 / h2, r)
        fixedc = self.levels[k + 1][0]
        rc = np.empty(fixedc.shape)
        _restrict(r, fixedc, rc)
        _prolong_add(self.vcycle(rc, k + 1), fixed, u)
        for _ in range(self.nu):
            _rbgs(u, f, fixed, h2, 1)
            _rbgs(u, f, fixed, h2, 0)
        return u


def solve_dirichlet(fixed: np.ndarray, u0: np.ndarray, h: float, tol: float = 1e-8,
                    max_iter: int = 200):
    """Discrete harmonic extension of the fixed values of ``u0``.

    Returns ``(u, iterations, defect)`` where ``defect`` is the sup norm of
    the five-point Laplacian on the free nodes, which is what ``tol`` bounds.
    """
    hier = Hierarchy(fixed, h)
    fx = hier.levels[0][0]
    u = hier.embed(u0.astype(float))
    inv_h2 = 1.0 / (h * h)
    r = np.empty_like(u)
    _apply(u, fx, inv_h2, r)
    r *= -1.0
    e = np.zeros_like(u)
    defect = float(np.abs(r).max())
    it = 0
    if defect > tol:
        z = hier.vcycle(r)
        p = z.copy()
        rz = _dot(r, z)
        ap = np.empty_like(u)
        for it in range(1, max_iter + 1):
            _apply(p, fx, inv_h2, ap)
            alpha = rz / _dot(p, ap)
            _axpy(alpha, p, e)
            _axpy(-alpha, ap, r)
            defect = float(np.abs(r).max())
            if defect <= tol:
                break
            z = hier.vcycle(r)
            rz_new = _dot(r, z)
            _xpby(z, rz_new / rz, p)
            rz = rz_new
    u += e
    n0, n1 = hier.shape
    return u[:n0, :n1].copy(), it, defect
