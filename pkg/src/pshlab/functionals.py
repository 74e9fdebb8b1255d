"""Two-sided bounds for the local growth function and the inequalities around them.

Everything here works on one complex variable (``Omega`` and ``A`` disks)
unless stated otherwise; product sets in C^n are handled by
:func:`product_compose`, which reduces them to one-variable factors.

The local growth function ``h_E`` is never computed directly.  It is
bracketed by a lower field built from the Siciak function of ``E`` and an
upper field built from the relative extremal function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .envelope import ExtremalSolution, laplacian_mass, region_sup, relative_extremal, sample_field
from .envelope import concentric_disk_u
from .errors import NeedsScanError, SandwichUnavailableError
from .geometry import CompactSetSpec, DomainSpec, Grid, SetMask, build_grid, measure_1d, rasterize_set
from .siciak import (CapacityEstimate, SiciakEstimator, ball_siciak, circle_sup, siciak_from_points,
                     transfinite_diameter)

DEFAULT_K = 256
POOL_SAMPLES = 4096
N_ANGLES = 512
TWO_E2 = 2.0 * math.e ** 2


# --------------------------------------------------------------------------
# reports


@dataclass(frozen=True)
class InequalityReport:
    """One checked inequality ``lhs <= rhs``.

    ``tol`` is absolute; it is ``rel_tol * max(|lhs|, |rhs|)`` for the
    relative tolerance the check was built with.  ``passed`` is None when the
    check was skipped (see ``note``).
    """

    name: str
    lhs: float
    rhs: float
    tol: float
    rel_tol: float
    provenance: tuple[str, ...] = ()
    passed: bool | None = None
    note: str = ""

    @property
    def residual(self) -> float:
        return self.rhs - self.lhs

    @classmethod
    def build(cls, name, lhs, rhs, rel_tol, provenance=(), note=""):
        lhs, rhs = float(lhs), float(rhs)
        tol = rel_tol * max(abs(lhs), abs(rhs))
        return cls(name, lhs, rhs, tol, rel_tol, tuple(provenance), rhs - lhs >= -tol, note)

    @classmethod
    def skipped(cls, name, note, provenance=()):
        return cls(name, math.nan, math.nan, math.nan, math.nan, tuple(provenance), None, note)

    def as_row(self) -> dict:
        return {"check": self.name, "lhs": self.lhs, "rhs": self.rhs, "residual": self.residual,
                "tol": self.tol, "pass": self.passed, "note": self.note}


@dataclass(eq=False)
class BoundsReport:
    """Lower and upper fields bracketing ``h_E`` on the inside nodes of a grid."""

    grid: Grid
    lower: np.ndarray
    upper: np.ndarray
    sup_A_u: float
    sup_Omega_V_A: float
    probe: np.ndarray
    tol: float = 0.03

    @property
    def gap(self) -> np.ndarray:
        return self.upper - self.lower

    @property
    def equality_indicator(self) -> float:
        """Sup of ``|upper - lower|`` over the probe nodes."""
        return float(np.abs(self.gap[self.probe]).max())

    @property
    def min_gap(self) -> float:
        return float(self.gap[self.grid.inside].min())

    def sandwich_holds(self) -> bool:
        scale = float(np.abs(self.upper[self.probe]).max())
        return self.min_gap >= -self.tol * max(scale, 1.0)


@dataclass(frozen=True)
class ConjectureRecord:
    label: str
    a: float
    n: int
    sup_A_u_abs: float
    sup_Omega_V: float
    product: float
    gamma: float
    grid_h: float
    extra: dict = field(default_factory=dict, compare=False)

    def as_row(self) -> dict:
        row = {"set": self.label, "a": self.a, "n": self.n, "sup_A_u_abs": self.sup_A_u_abs,
               "sup_Omega_V": self.sup_Omega_V, "product": self.product, "gamma": self.gamma,
               "h": self.grid_h}
        row.update(self.extra)
        return row


# --------------------------------------------------------------------------
# shared solves


def exact_pool(spec: CompactSetSpec, total: int = POOL_SAMPLES) -> np.ndarray:
    """Dense samples of the outer boundary of ``E``, the Leja candidates."""
    if spec.kind == "raster":
        return np.asarray(spec.points, dtype=complex)
    per_piece = max(64, total // max(1, len(spec.pieces())))
    return np.unique(spec.sample_points(per_piece))


def set_estimator(spec: CompactSetSpec, k: int = DEFAULT_K) -> SiciakEstimator:
    """Siciak estimator whose Leja points come from the exact geometry of ``E``."""
    pool = exact_pool(spec)
    return siciak_from_points(pool, min(k, len(pool)))


@dataclass(eq=False)
class PlanarCase:
    """Relative extremal function and Siciak estimate of one set in one disk."""

    spec: CompactSetSpec
    omega: DomainSpec
    grid: Grid
    mask: SetMask
    u: ExtremalSolution
    est: SiciakEstimator

    @property
    def label(self) -> str:
        return self.spec.label

    @property
    def a(self) -> float:
        return self.omega.radius

    def sup_u(self, region: DomainSpec) -> float:
        return region_sup(self.u, region).value

    def sup_V(self, region: DomainSpec) -> float:
        """Sup of the Siciak estimate over a closed disk (its boundary circle)."""
        return circle_sup(self.est, region.center, region.radius, N_ANGLES)

    def inf_V_boundary(self) -> float:
        th = 2 * np.pi * np.arange(N_ANGLES) / N_ANGLES
        return float(self.est(self.omega.center + self.a * np.exp(1j * th)).min())

    @cached_property
    def capacity(self) -> CapacityEstimate:
        return transfinite_diameter(self.est.leja)

    @property
    def gamma(self) -> float:
        return self.capacity.gamma

    @cached_property
    def V_nodes(self) -> np.ndarray:
        vals = np.zeros(self.grid.shape)
        inside = self.grid.inside
        vals[inside] = self.est(self.grid.nodes[inside])
        return vals

    def provenance(self) -> tuple[str, ...]:
        return (f"u:{self.label}@h={self.grid.h:g}", f"V:{self.label}@k={self.est.k}")


@lru_cache(maxsize=4)
def _grid(omega: DomainSpec, resolution: int) -> Grid:
    return build_grid(omega, resolution)


@lru_cache(maxsize=4)
def solve_case(spec: CompactSetSpec, omega: DomainSpec, resolution: int = 256,
               k: int = DEFAULT_K, tol: float = 1e-8) -> PlanarCase:
    """Solve once per ``(E, Omega, resolution)`` and share the result across checks."""
    grid = _grid(omega, resolution)
    mask = rasterize_set(spec, grid)
    u = relative_extremal(mask, omega, tol=tol)
    return PlanarCase(spec, omega, grid, mask, u, set_estimator(spec, k))


def sup_omega_ball_siciak(A: DomainSpec, omega: DomainSpec) -> float:
    """``sup_Omega V_A`` for disks: ``log((a + |c_A - c_Omega|) / rho)``."""
    return math.log((omega.radius + abs(A.center - omega.center)) / A.radius)


# --------------------------------------------------------------------------
# sandwich and the conjecture quantity


def sandwich_bounds(E: CompactSetSpec, A: DomainSpec, omega: DomainSpec, resolution: int = 256,
                  probe: DomainSpec | None = None, tol: float = 0.03) -> BoundsReport:
    """Bracket ``h_E`` between ``V_E/sup_Omega V_A`` and ``(u+1)/|sup_A u|``.

    ``probe`` (default ``A``) is the region where the equality indicator is
    measured; mask nodes are excluded from it.
    """
    case = solve_case(E, omega, resolution)
    s_u = case.sup_u(A)
    norm_A = sup_omega_ball_siciak(A, omega)
    inside = case.grid.inside
    # mask nodes stand for E on the lattice, where both fields vanish
    lower = np.where(inside & ~case.mask.flags, case.V_nodes / norm_A, 0.0)
    upper = np.where(inside, (case.u.values + 1.0) / abs(s_u), 0.0)
    region = case.grid.region_flags(probe or A) & ~case.mask.flags
    return BoundsReport(case.grid, lower, upper, s_u, norm_A, region, tol)


def conjecture_quantity(E: CompactSetSpec, A: DomainSpec, omega: DomainSpec,
                        resolution: int = 256) -> ConjectureRecord:
    """``|sup_A u_{E,Omega}| * sup_Omega V_E`` with the capacity attached."""
    case = solve_case(E, omega, resolution)
    s_u = abs(case.sup_u(A))
    s_v = case.sup_V(omega)
    return ConjectureRecord(E.label, omega.radius, 1, s_u, s_v, s_u * s_v, case.gamma, case.grid.h,
                            {"iterations": case.u.iterations, "residual": case.u.residual,
                             "converged": case.u.converged})


# --------------------------------------------------------------------------
# inequality checks


def capacity_sup_check(E: CompactSetSpec, n: int = 1, gamma: float | None = None,
                 A: DomainSpec | None = None, rel_tol: float = 0.03) -> list[InequalityReport]:
    """``log(1/gamma) <= sup_A V_E <= 2 e^2 n log(n/gamma)`` as two reports.

    ``gamma`` defaults to the transfinite-diameter estimate of ``E``.
    """
    A = A or DomainSpec.disk(0, 1.0)
    est = set_estimator(E)
    if gamma is None:
        gamma = transfinite_diameter(est.leja).gamma
    prov = (f"V:{E.label}@k={est.k}", f"gamma={gamma:.6g}")
    if gamma >= 1:
        note = f"capacity estimate {gamma:.4g} >= 1"
        return [InequalityReport.skipped("capacity-sup-lower", note, prov),
                InequalityReport.skipped("capacity-sup-upper", note, prov)]
    s_v = circle_sup(est, A.center, A.radius, N_ANGLES)
    return [
        InequalityReport.build("capacity-sup-lower", math.log(1 / gamma), s_v, rel_tol, prov),
        InequalityReport.build("capacity-sup-upper", s_v, TWO_E2 * n * math.log(n / gamma), rel_tol, prov),
    ]


def relative_sup_check(E: CompactSetSpec, omega: DomainSpec, A: DomainSpec, resolution: int = 256,
                 rel_tol: float = 0.03) -> InequalityReport:
    """``sup_A u + 1 <= 2 sup_A V / sup_Omega V``."""
    case = solve_case(E, omega, resolution)
    lhs = case.sup_u(A) + 1.0
    rhs = 2.0 * case.sup_V(A) / case.sup_V(omega)
    return InequalityReport.build("relative-sup", lhs, rhs, rel_tol, case.provenance())


def klimek_check(E: CompactSetSpec, omega: DomainSpec, regions: Sequence[DomainSpec],
                 resolution: int = 256, rel_tol: float = 0.05) -> list[InequalityReport]:
    """``sup_R u + 1 <= sup_R V / inf_{boundary of Omega} V`` on each probe disk ``R``."""
    case = solve_case(E, omega, resolution)
    floor = case.inf_V_boundary()
    note = "ill-conditioned: V nearly vanishes on the boundary" if floor < 1e-3 else ""
    out = []
    for R in regions:
        lhs = case.sup_u(R) + 1.0
        rhs = case.sup_V(R) / floor
        out.append(InequalityReport.build(f"klimek[{R.label}]", lhs, rhs, rel_tol,
                                          case.provenance(), note))
    return out


class CapacityPair(NamedTuple):
    sup_A_V: float
    cap: float

    @property
    def product(self) -> float:
        return self.sup_A_V * self.cap


def capacity_pair(E: CompactSetSpec, omega: DomainSpec, A: DomainSpec,
                  resolution: int = 256) -> CapacityPair:
    """``sup_A V_E`` and the condenser charge of ``(E, Omega)`` as capacity proxy."""
    case = solve_case(E, omega, resolution)
    return CapacityPair(case.sup_V(A), laplacian_mass(case.u).mass)


def fit_alexander_taylor(pairs: Sequence[CapacityPair]) -> tuple[float, float]:
    """Tightest constants with ``c_lo/cap <= sup_A V <= c_hi/cap`` over ``pairs``."""
    prods = np.array([p.product for p in pairs])
    return float(prods.min()), float(prods.max())


def alexander_taylor_check(E: CompactSetSpec, omega: DomainSpec, A: DomainSpec,
                           constants: tuple[float, float], resolution: int = 256,
                           rel_tol: float = 0.03) -> list[InequalityReport]:
    """Both ends of ``c_lo/cap <= sup_A V <= c_hi/cap`` (both exponents are 1 for n = 1)."""
    pair = capacity_pair(E, omega, A, resolution)
    c_lo, c_hi = constants
    prov = (f"V:{E.label}", f"mass:{E.label}@res={resolution}")
    return [
        InequalityReport.build("alexander-taylor-lower", c_lo / pair.cap, pair.sup_A_V, rel_tol, prov),
        InequalityReport.build("alexander-taylor-upper", pair.sup_A_V, c_hi / pair.cap, rel_tol, prov),
    ]


def capacity_bracket_constants(a: float, n: int, gamma: float, c_conj: float) -> tuple[float, float]:
    """Constants for the two ends of the capacity bracket of ``sup_A h_E``.

    The lower end follows from the lower field and the lower capacity bound for ``sup_A V_E``:
    ``sup_A h_E >= sup_A V_E / log a >= log(1/gamma) / log a``.  The upper end
    follows from the upper field, the conjectured floor ``c_conj`` and
    ``sup_Omega V_E <= sup_A V_E + log a``, giving
    ``(2 e^2 n + log a / log(n/gamma)) / c_conj``.
    """
    return math.log(a), (TWO_E2 * n + math.log(a) / math.log(n / gamma)) / c_conj


def capacity_bracket_check(E: CompactSetSpec, a: float = 2.0, resolution: int = 256,
                      c_conj: float | None = None, rel_tol: float = 0.03) -> list[InequalityReport]:
    """Check ``(1/C) log(1/gamma) <= sup_A h_E <= C log(n/gamma)`` for the scan's floor.

    ``c_conj`` is the empirical minimum of the conjecture quantity from a
    scan; the reports are conditional on the conjecture holding with it.
    The certified bracket ``[sup_A lower, sup_A upper]`` must sit inside the
    capacity bracket, so both ends are checked against the matching field.
    """
    if c_conj is None:
        raise NeedsScanError("capacity_bracket_check needs the empirical floor of a conjecture scan")
    omega, A = DomainSpec.disk(0, a), DomainSpec.disk(0, 1.0)
    case = solve_case(E, omega, resolution)
    gamma = case.gamma
    s_u = case.sup_u(A)
    lower = case.sup_V(A) / math.log(a)
    upper = (s_u + 1.0) / abs(s_u)
    c_lo, c_hi = capacity_bracket_constants(a, 1, gamma, c_conj)
    C = max(c_lo, c_hi)
    note = f"conditional on the conjecture with C={c_conj:.6g}; bracket constant {C:.6g}"
    prov = case.provenance()
    return [
        InequalityReport.build("capacity-bracket-lower", math.log(1 / gamma) / C, lower, rel_tol, prov, note),
        InequalityReport.build("capacity-bracket-upper", upper, C * math.log(1 / gamma), rel_tol, prov, note),
    ]


def tau(n: int) -> float:
    return 1.0 - 1.0 / (8.0 * math.e ** 2 * n)


class SmallBallResult(NamedTuple):
    covered: bool
    margin: float
    radius: float


def small_ball_condition(E: CompactSetSpec | SetMask, z0: complex, n: int, gamma: float) -> SmallBallResult:
    """Whether ``E`` lies in the closed ball of radius ``gamma**tau_n`` about ``z0``.

    A :class:`SetMask` is measured through its nodes, a spec through its
    exact geometry.  ``margin`` is radius minus the farthest distance.
    """
    radius = gamma ** tau(n)
    if isinstance(E, SetMask):
        far = float(np.abs(E.points - z0).max())
    else:
        far = E.max_modulus(about=complex(z0))
    return SmallBallResult(far <= radius, radius - far, radius)


def submultiplicativity_check(E: CompactSetSpec, a: float = 2.0, resolution: int = 256,
                rel_tol: float = 0.05) -> InequalityReport:
    """``|sup_D u_E| >= |sup_D u_I| * |sup_I u_E|`` with ``D`` the unit disk, ``I = [-1, 1]``.

    ``sup_I u_E`` is the maximum over the lattice nodes of the interval's mask.
    """
    omega, D = DomainSpec.disk(0, a), DomainSpec.disk(0, 1.0)
    interval = CompactSetSpec.segment(-1.0, 1.0)
    case_e = solve_case(E, omega, resolution)
    case_i = solve_case(interval, omega, resolution)
    on_interval = float(case_e.u.values[case_i.mask.flags].max())
    lhs = abs(case_i.sup_u(D)) * abs(on_interval)
    rhs = abs(case_e.sup_u(D))
    return InequalityReport.build("submultiplicativity", lhs, rhs, rel_tol,
                                  case_e.provenance() + case_i.provenance())


# --------------------------------------------------------------------------
# products in C^n


@dataclass(eq=False)
class ProductFactor:
    """One-variable relative extremal function on ``D(0, r)`` and Siciak function."""

    spec: CompactSetSpec
    r: float
    u: object
    V: object
    gamma: float


def product_factor(spec: CompactSetSpec, r: float, resolution: int = 256) -> ProductFactor:
    """Closed forms for centred disks, lattice and Leja estimates otherwise."""
    if spec.kind == "disk" and spec.center == 0:
        t = spec.radius
        return ProductFactor(spec, r, lambda z: concentric_disk_u(t, r, z),
                             lambda z: ball_siciak(0j, t, z), t)
    case = solve_case(spec, DomainSpec.disk(0, r), resolution)
    return ProductFactor(spec, r, lambda z: sample_field(case.u, z), case.est, case.gamma)


def _radii(dom: DomainSpec, n: int) -> tuple[str, list[float]]:
    if any(abs(c) > 0 for c in dom.centers):
        raise SandwichUnavailableError(f"{dom.label} is not centred at the origin")
    if dom.kind == "ball":
        return "ball", [dom.radii[0]] * n
    if dom.kind == "polydisk":
        return "polydisk", list(dom.radii)
    raise SandwichUnavailableError(f"{dom.label} is neither a ball nor a polydisk")


def product_compose(factors: Sequence[CompactSetSpec], omega: DomainSpec, A: DomainSpec,
                    resolution: int = 256) -> ConjectureRecord:
    """Conjecture record of ``E_1 x ... x E_n`` through an intermediate polydisk ``B``.

    ``B = Omega`` when ``Omega`` is a polydisk and ``D(0, a/sqrt(n))^n`` when it
    is the ball of radius ``a``.  Since ``u_{E,Omega} <= u_{E,B}`` on ``B`` the
    recorded ``|sup_A u|`` is a lower bound for the one over ``Omega``; on
    ``B`` both extremal functions are maxima of their one-variable factors.
    """
    n = len(factors)
    if omega.dim != n or A.dim != n:
        raise SandwichUnavailableError(f"{n} factors but Omega in C^{omega.dim}, A in C^{A.dim}")
    o_kind, o_radii = _radii(omega, n)
    a_kind, a_radii = _radii(A, n)
    if o_kind == "ball":
        a = o_radii[0]
        if a_kind == "ball" and a <= math.sqrt(n) * a_radii[0]:
            raise SandwichUnavailableError(
                f"a = {a:g} <= sqrt({n}) leaves no polydisk between the unit ball and Omega")
        b_radii = [a / math.sqrt(n)] * n
    else:
        b_radii = o_radii
    if any(ra >= rb for ra, rb in zip(a_radii, b_radii)):
        raise SandwichUnavailableError("A is not compactly inside the intermediate polydisk")
    comps = [product_factor(f, r, resolution) for f, r in zip(factors, b_radii)]
    # sup over a ball or polydisk of max_j f_j(z_j) is max_j of the one-variable sups
    s_u = max(circle_sup(c.u, 0j, ra, N_ANGLES) for c, ra in zip(comps, a_radii))
    s_v = max(circle_sup(c.V, 0j, ro, N_ANGLES) for c, ro in zip(comps, o_radii))
    disks = all(f.kind == "disk" for f in factors)
    gamma = min(f.radius for f in factors) if disks else min(c.gamma for c in comps)
    label = " x ".join(f.label for f in factors)
    h = 0.0 if all(f.kind == "disk" and f.center == 0 for f in factors) else 1.0 / resolution
    return ConjectureRecord(label, max(o_radii), n, abs(s_u), s_v, abs(s_u) * s_v, gamma, h,
                            {"polydisk_capacity": disks, "B_radii": tuple(b_radii)})


def brudnyi_envelope_constant(B: tuple[float, float], subsets: Sequence[CompactSetSpec],
                              a: float = 2.0, resolution: int = 256,
                              d: float = 4.0) -> tuple[float, np.ndarray]:
    """Measure-ratio constant certified by the upper sandwich field.

    For every normalized ``f`` and ``z`` we have ``f(z) - sup_E f <= (u(z)+1)/|sup_A u|``,
    so ``sup_B f - sup_E f`` is at most the max of the upper field over the
    nodes of ``B``.  Returns the largest ``upper / log(d |B| / |E|)`` over
    ``subsets`` and the per-subset values.
    """
    omega, A = DomainSpec.disk(0, a), DomainSpec.disk(0, 1.0)
    interval = CompactSetSpec.segment(*B)
    vals = []
    for E in subsets:
        case = solve_case(E, omega, resolution)
        on_b = rasterize_set(interval, case.grid).flags
        upper = (float(case.u.values[on_b].max()) + 1.0) / abs(case.sup_u(A))
        vals.append(upper / math.log(d * (B[1] - B[0]) / measure_1d(E)))
    vals = np.array(vals)
    return float(vals.max()), vals
