"""Domains, compact sets and their lattice discretizations.

Everything here lives in one complex variable except :class:`DomainSpec`
balls and polydisks, which the product and toric paths use to describe
domains in C^n.  Lattices are anchored at the origin: node ``(i, j)`` sits at
``i*h + 1j*j*h``, so halving ``h`` nests the coarse lattice in the fine one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EmptySetError,
    InvalidDomainError,
    NotCompactlyContainedError,
    UnsupportedMeasureError,
)

MAX_CANTOR_LEVEL = 8
_EPS = 1e-9

_NEIGHBOURS = ((1, 0), (-1, 0), (0, 1), (0, -1))


def _c(z) -> complex:
    if isinstance(z, (list, tuple)) and len(z) == 2:
        return complex(z[0], z[1])
    return complex(z)


@dataclass(frozen=True)
class DomainSpec:
    """An open region: a disk in C, a ball or polydisk in C^n, or a rectangle.

    Use the constructors :meth:`disk`, :meth:`ball`, :meth:`polydisk` and
    :meth:`rectangle` rather than filling the fields by hand.
    """

    kind: str
    centers: tuple[complex, ...] = (0j,)
    radii: tuple[float, ...] = (1.0,)
    corners: tuple[complex, complex] | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("disk", "ball", "polydisk", "rectangle"):
            raise InvalidDomainError(f"unknown domain kind {self.kind!r}")
        if self.kind == "rectangle":
            if self.corners is None:
                raise InvalidDomainError("rectangle needs two corners")
            z0, z1 = self.corners
            if abs(z0.real - z1.real) <= 0 or abs(z0.imag - z1.imag) <= 0:
                raise InvalidDomainError("empty rectangle")
            return
        if any(not r > 0 for r in self.radii):
            raise InvalidDomainError(f"radius must be positive, got {self.radii}")
        if self.kind == "polydisk" and len(self.centers) != len(self.radii):
            raise InvalidDomainError("polydisk needs one center per radius")
        if self.kind in ("disk", "ball") and len(self.radii) != 1:
            raise InvalidDomainError("disk and ball take a single radius")

    # constructors -------------------------------------------------------
    @classmethod
    def disk(cls, center=0j, radius: float = 1.0, label: str = "") -> "DomainSpec":
        return cls("disk", (_c(center),), (float(radius),), None,
                   label or f"disk({_fmt(center)},{radius:g})")

    @classmethod
    def ball(cls, radius: float, n: int, center: Sequence | None = None,
             label: str = "") -> "DomainSpec":
        if n < 1:
            raise InvalidDomainError("dimension must be >= 1")
        centers = tuple(_c(c) for c in center) if center is not None else (0j,) * n
        if len(centers) != n:
            raise InvalidDomainError("ball center has wrong dimension")
        if n == 1:
            return cls.disk(centers[0], radius, label)
        return cls("ball", centers, (float(radius),), None,
                   label or f"ball(0,{radius:g};n={n})")

    @classmethod
    def polydisk(cls, radii: Sequence[float], centers: Sequence | None = None,
                 label: str = "") -> "DomainSpec":
        radii = tuple(float(r) for r in radii)
        centers = tuple(_c(c) for c in centers) if centers is not None else (0j,) * len(radii)
        if len(radii) == 0:
            raise InvalidDomainError("polydisk needs at least one radius")
        return cls("polydisk", centers, radii, None,
                   label or "polydisk(" + ",".join(f"{r:g}" for r in radii) + ")")

    @classmethod
    def rectangle(cls, z0, z1, label: str = "") -> "DomainSpec":
        z0, z1 = _c(z0), _c(z1)
        return cls("rectangle", (0j,), (1.0,), (z0, z1), label or f"rect({_fmt(z0)},{_fmt(z1)})")

    # geometry -----------------------------------------------------------
    @property
    def dim(self) -> int:
        if self.kind in ("disk", "rectangle"):
            return 1
        return len(self.centers)

    @property
    def center(self) -> complex:
        return self.centers[0]

    @property
    def radius(self) -> float:
        if self.kind == "polydisk" and len(set(self.radii)) > 1:
            raise InvalidDomainError("polydisk radii differ; use .radii")
        return self.radii[0]

    def as_plane(self) -> "DomainSpec":
        """The same domain seen as a region of C (one-component polydisks become disks)."""
        if self.kind == "polydisk" and self.dim == 1:
            return DomainSpec.disk(self.centers[0], self.radii[0], self.label)
        if self.dim != 1:
            raise InvalidDomainError(f"{self.label} is not a planar domain")
        return self

    def bbox(self) -> tuple[float, float, float, float]:
        d = self.as_plane()
        if d.kind == "rectangle":
            z0, z1 = d.corners
            return (min(z0.real, z1.real), max(z0.real, z1.real),
                    min(z0.imag, z1.imag), max(z0.imag, z1.imag))
        c, r = d.center, d.radii[0]
        return c.real - r, c.real + r, c.imag - r, c.imag + r

    def depth(self, z) -> np.ndarray:
        """Signed distance to the boundary, positive inside (planar domains only)."""
        d = self.as_plane()
        z = np.asarray(z)
        if d.kind == "rectangle":
            x0, x1, y0, y1 = d.bbox()
            return np.minimum(np.minimum(z.real - x0, x1 - z.real),
                              np.minimum(z.imag - y0, y1 - z.imag))
        return d.radii[0] - np.abs(z - d.center)

    def contains(self, z, closed: bool = True) -> np.ndarray:
        dep = self.depth(z)
        return dep >= -_EPS if closed else dep > _EPS

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "label": self.label}
        if self.kind == "rectangle":
            out["corners"] = [[z.real, z.imag] for z in self.corners]
        else:
            out["centers"] = [[c.real, c.imag] for c in self.centers]
            out["radii"] = list(self.radii)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "DomainSpec":
        kind = d["kind"]
        label = d.get("label", "")
        if kind == "rectangle":
            return cls.rectangle(*d["corners"], label=label)
        if kind == "disk":
            center = d.get("center", (d.get("centers") or [0])[0])
            radius = d.get("radius", (d.get("radii") or [1.0])[0])
            return cls.disk(center, radius, label)
        if kind == "ball":
            n = int(d.get("n", len(d.get("centers", [])) or 1))
            return cls.ball(d.get("radius", (d.get("radii") or [1.0])[0]), n,
                            d.get("centers"), label)
        if kind == "polydisk":
            return cls.polydisk(d["radii"], d.get("centers"), label)
        raise InvalidDomainError(f"unknown domain kind {kind!r}")


def _fmt(z) -> str:
    z = _c(z)
    if z.imag == 0:
        return f"{z.real:g}"
    return f"{z.real:g}{z.imag:+g}i"


# --------------------------------------------------------------------------
# compact sets


_SET_KINDS = ("disk", "segment", "union", "cantor", "annulus", "product", "raster")


@dataclass(frozen=True)
class CompactSetSpec:
    """Symbolic description of a compact set E.

    ``segment`` accepts complex endpoints; only segments on the real axis
    have a one-dimensional measure here.  ``raster`` is a finite point cloud
    (typically lattice nodes) fattened to the grid at rasterization.
    """

    kind: str
    center: complex = 0j
    radius: float = 0.0
    inner: float = 0.0
    endpoints: tuple[complex, complex] | None = None
    level: int = 0
    children: tuple["CompactSetSpec", ...] = ()
    points: tuple[complex, ...] = ()
    label: str = ""

    def __post_init__(self):
        if self.kind not in _SET_KINDS:
            raise ValueError(f"unknown set kind {self.kind!r}")
        if self.kind in ("disk", "annulus") and not self.radius > 0:
            raise ValueError("radius must be positive")
        if self.kind == "annulus" and not 0 <= self.inner < self.radius:
            raise ValueError("annulus needs 0 <= inner < outer")
        if self.kind == "cantor" and not 0 <= self.level <= MAX_CANTOR_LEVEL:
            raise ValueError(f"cantor level must lie in [0, {MAX_CANTOR_LEVEL}]")
        if self.kind in ("union", "product") and not self.children:
            raise ValueError(f"{self.kind} needs at least one child")

    # constructors -------------------------------------------------------
    @classmethod
    def disk(cls, center=0j, radius: float = 1.0, label: str = "") -> "CompactSetSpec":
        return cls("disk", center=_c(center), radius=float(radius),
                   label=label or f"disk({_fmt(center)},{radius:g})")

    @classmethod
    def annulus(cls, center=0j, inner: float = 0.5, outer: float = 1.0,
                label: str = "") -> "CompactSetSpec":
        return cls("annulus", center=_c(center), radius=float(outer), inner=float(inner),
                   label=label or f"annulus({_fmt(center)},{inner:g},{outer:g})")

    @classmethod
    def segment(cls, a, b, label: str = "") -> "CompactSetSpec":
        a, b = _c(a), _c(b)
        return cls("segment", endpoints=(a, b), label=label or f"seg[{_fmt(a)},{_fmt(b)}]")

    @classmethod
    def cantor(cls, a, b, level: int, label: str = "") -> "CompactSetSpec":
        a, b = _c(a), _c(b)
        return cls("cantor", endpoints=(a, b), level=int(level),
                   label=label or f"cantor[{_fmt(a)},{_fmt(b)}]^{level}")

    @classmethod
    def union(cls, children: Iterable["CompactSetSpec"], label: str = "") -> "CompactSetSpec":
        children = tuple(children)
        return cls("union", children=children,
                   label=label or "U(" + ";".join(c.label for c in children) + ")")

    @classmethod
    def product(cls, factors: Iterable["CompactSetSpec"], label: str = "") -> "CompactSetSpec":
        factors = tuple(factors)
        return cls("product", children=factors,
                   label=label or " x ".join(c.label for c in factors))

    @classmethod
    def raster(cls, points: Iterable[complex], label: str = "raster") -> "CompactSetSpec":
        return cls("raster", points=tuple(complex(p) for p in points), label=label)

    # derived ------------------------------------------------------------
    @property
    def dim(self) -> int:
        return len(self.children) if self.kind == "product" else 1

    @property
    def is_thin(self) -> bool:
        """True when the set has empty interior in C (segments, Cantor iterates, point clouds)."""
        if self.kind in ("segment", "cantor", "raster"):
            return True
        if self.kind == "union":
            return all(c.is_thin for c in self.children)
        return False

    def pieces(self) -> list["CompactSetSpec"]:
        """Flatten unions and Cantor iterates into disks, annuli, segments and rasters."""
        if self.kind == "union":
            return [p for c in self.children for p in c.pieces()]
        if self.kind == "cantor":
            a, b = self.endpoints
            return [CompactSetSpec.segment(a + (b - a) * lo, a + (b - a) * hi)
                    for lo, hi in _cantor_intervals(self.level)]
        if self.kind == "product":
            raise ValueError("product sets do not decompose into planar pieces")
        return [self]

    def max_modulus(self, about: complex = 0j) -> float:
        out = 0.0
        for p in self.pieces():
            if p.kind in ("disk", "annulus"):
                out = max(out, abs(p.center - about) + p.radius)
            elif p.kind == "segment":
                out = max(out, *(abs(e - about) for e in p.endpoints))
            else:
                out = max(out, max(abs(z - about) for z in p.points))
        return out

    def diameter_bound(self) -> float:
        pts = self.sample_points(64)
        return float(np.max(np.abs(pts[:, None] - pts[None, :])))

    def sample_points(self, n: int = 512) -> np.ndarray:
        """Points whose maximum of any subharmonic function equals its sup over the set.

        Disks and annuli contribute their outer circle, segments a uniform
        sampling with ``n`` points, rasters their points.
        """
        chunks = []
        for p in self.pieces():
            if p.kind in ("disk", "annulus"):
                th = 2 * np.pi * np.arange(n) / n
                chunks.append(p.center + p.radius * np.exp(1j * th))
            elif p.kind == "segment":
                a, b = p.endpoints
                chunks.append(a + (b - a) * np.linspace(0.0, 1.0, n))
            else:
                chunks.append(np.asarray(p.points, dtype=complex))
        return np.concatenate(chunks)

    def scaled(self, s: float, about: complex = 0j) -> "CompactSetSpec":
        return self._map(lambda z: about + s * (z - about), abs(s))

    def translated(self, c) -> "CompactSetSpec":
        c = _c(c)
        return self._map(lambda z: z + c, 1.0)

    def _map(self, f, s) -> "CompactSetSpec":
        k = self.kind
        if k in ("disk", "annulus"):
            return CompactSetSpec(k, center=f(self.center), radius=self.radius * s,
                                  inner=self.inner * s, label=f"T({self.label})")
        if k in ("segment", "cantor"):
            a, b = self.endpoints
            return CompactSetSpec(k, endpoints=(f(a), f(b)), level=self.level,
                                  label=f"T({self.label})")
        if k == "raster":
            return CompactSetSpec.raster([f(z) for z in self.points], label=f"T({self.label})")
        if k == "union":
            return CompactSetSpec.union([c._map(f, s) for c in self.children],
                                        label=f"T({self.label})")
        raise ValueError("cannot map a product set in the plane")

    # serialization ------------------------------------------------------
    def to_dict(self) -> dict:
        k = self.kind
        out: dict = {"kind": k, "label": self.label}
        if k in ("disk", "annulus"):
            out["center"] = [self.center.real, self.center.imag]
            out["radius"] = self.radius
            if k == "annulus":
                out["inner"] = self.inner
        elif k in ("segment", "cantor"):
            out["endpoints"] = [[z.real, z.imag] for z in self.endpoints]
            if k == "cantor":
                out["level"] = self.level
        elif k in ("union", "product"):
            out["children"] = [c.to_dict() for c in self.children]
        else:
            out["points"] = [[z.real, z.imag] for z in self.points]
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "CompactSetSpec":
        k = d["kind"]
        label = d.get("label", "")
        if k == "disk":
            return cls.disk(d.get("center", 0), d["radius"], label)
        if k == "annulus":
            return cls.annulus(d.get("center", 0), d["inner"], d.get("radius", d.get("outer")), label)
        if k == "segment":
            return cls.segment(*d["endpoints"], label=label)
        if k == "cantor":
            return cls.cantor(*d["endpoints"], level=d["level"], label=label)
        if k == "union":
            return cls.union([cls.from_dict(c) for c in d["children"]], label)
        if k == "product":
            return cls.product([cls.from_dict(c) for c in d["children"]], label)
        if k == "raster":
            return cls.raster([_c(p) for p in d["points"]], label or "raster")
        raise ValueError(f"unknown set kind {k!r}")


def _cantor_intervals(level: int) -> list[tuple[float, float]]:
    iv = [(0.0, 1.0)]
    for _ in range(level):
        nxt = []
        for lo, hi in iv:
            third = (hi - lo) / 3.0
            nxt.append((lo, lo + third))
            nxt.append((hi - third, hi))
        iv = nxt
    return iv


def real_intervals(spec: CompactSetSpec) -> list[tuple[float, float]]:
    """Merged list of real intervals making up ``spec``.

    Raises :class:`UnsupportedMeasureError` for anything that is not a finite
    union of real segments and Cantor iterates.
    """
    raw = []
    try:
        pieces = spec.pieces()
    except ValueError as exc:
        raise UnsupportedMeasureError(str(exc)) from exc
    for p in pieces:
        if p.kind != "segment":
            raise UnsupportedMeasureError(f"{p.kind} is not a subset of the real line")
        a, b = p.endpoints
        if abs(a.imag) > _EPS or abs(b.imag) > _EPS:
            raise UnsupportedMeasureError("segment leaves the real axis")
        raw.append((min(a.real, b.real), max(a.real, b.real)))
    raw.sort()
    merged: list[list[float]] = []
    for lo, hi in raw:
        if merged and lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def measure_1d(spec: CompactSetSpec) -> float:
    """Exact one-dimensional Lebesgue measure of a union of real segments."""
    return float(sum(hi - lo for lo, hi in real_intervals(spec)))


# --------------------------------------------------------------------------
# lattices


@dataclass(frozen=True, eq=False)
class Grid:
    """Uniform lattice over the bounding box of a planar domain.

    ``inside`` marks nodes of the open domain, ``boundary`` the inside nodes
    with at least one of their four neighbours outside; these carry the
    Dirichlet data.  ``interior`` is the rest of ``inside``.
    """

    domain: DomainSpec
    h: float
    i0: int
    j0: int
    inside: np.ndarray
    boundary: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.inside.shape

    @cached_property
    def x(self) -> np.ndarray:
        return (self.i0 + np.arange(self.shape[0])) * self.h

    @cached_property
    def y(self) -> np.ndarray:
        return (self.j0 + np.arange(self.shape[1])) * self.h

    @cached_property
    def nodes(self) -> np.ndarray:
        return self.x[:, None] + 1j * self.y[None, :]

    @cached_property
    def interior(self) -> np.ndarray:
        return self.inside & ~self.boundary

    @property
    def exterior(self) -> np.ndarray:
        return ~self.inside

    @property
    def bbox(self) -> DomainSpec:
        return DomainSpec.rectangle(complex(self.x[0], self.y[0]), complex(self.x[-1], self.y[-1]))

    def index_window(self, x0: float, x1: float, y0: float, y1: float) -> tuple[slice, slice]:
        """Index slices of the nodes within the given coordinate box (clipped)."""
        n0, n1 = self.shape
        i_lo = max(0, math.floor(x0 / self.h - _EPS) - self.i0)
        i_hi = min(n0, math.ceil(x1 / self.h + _EPS) - self.i0 + 1)
        j_lo = max(0, math.floor(y0 / self.h - _EPS) - self.j0)
        j_hi = min(n1, math.ceil(y1 / self.h + _EPS) - self.j0 + 1)
        return slice(i_lo, max(i_lo, i_hi)), slice(j_lo, max(j_lo, j_hi))

    def region_flags(self, region: DomainSpec) -> np.ndarray:
        """Nodes lying in the closed region (intersected with the domain's inside)."""
        return region.contains(self.nodes, closed=True) & self.inside

    def locate(self, z: complex) -> tuple[int, int]:
        """Indices of the lattice node nearest to ``z``."""
        i = int(round(z.real / self.h)) - self.i0
        j = int(round(z.imag / self.h)) - self.j0
        return i, j


def build_grid(domain: DomainSpec, resolution: int) -> Grid:
    """Lattice of spacing ``1/resolution`` covering ``domain`` plus one exterior layer."""
    if resolution < 16:
        raise ValueError(f"resolution must be >= 16 nodes per unit, got {resolution}")
    plane = domain.as_plane()
    h = 1.0 / resolution
    x0, x1, y0, y1 = plane.bbox()
    i0 = math.floor(x0 / h + _EPS) - 1
    i1 = math.ceil(x1 / h - _EPS) + 1
    j0 = math.floor(y0 / h + _EPS) - 1
    j1 = math.ceil(y1 / h - _EPS) + 1
    x = np.arange(i0, i1 + 1) * h
    y = np.arange(j0, j1 + 1) * h
    nodes = x[:, None] + 1j * y[None, :]
    inside = plane.contains(nodes, closed=False)
    padded = np.pad(inside, 1, constant_values=False)
    outside_nb = np.zeros_like(inside)
    for di, dj in _NEIGHBOURS:
        outside_nb |= ~padded[1 + di: padded.shape[0] - 1 + di, 1 + dj: padded.shape[1] - 1 + dj]
    boundary = inside & outside_nb
    if not (inside & ~boundary).any():
        raise InvalidDomainError(f"{plane.label} has no interior nodes at resolution {resolution}")
    return Grid(plane, h, i0, j0, inside, boundary)


@dataclass(frozen=True, eq=False)
class SetMask:
    """Lattice proxy for a compact set: the member nodes and their count."""

    grid: Grid
    flags: np.ndarray
    spec: CompactSetSpec | None = None
    fattened: bool = False

    @property
    def node_count(self) -> int:
        return int(self.flags.sum())

    @cached_property
    def edge(self) -> np.ndarray:
        """Member nodes with a non-member 4-neighbour."""
        padded = np.pad(self.flags, 1, constant_values=False)
        full = np.ones_like(self.flags)
        for di, dj in _NEIGHBOURS:
            full &= padded[1 + di: padded.shape[0] - 1 + di, 1 + dj: padded.shape[1] - 1 + dj]
        return self.flags & ~full

    @property
    def points(self) -> np.ndarray:
        return self.grid.nodes[self.flags]

    def is_subset_of(self, other: "SetMask") -> bool:
        return bool(np.all(other.flags[self.flags]))


def _piece_flags(p: CompactSetSpec, grid: Grid, out: np.ndarray) -> None:
    h = grid.h
    if p.kind in ("disk", "annulus"):
        c, r = p.center, p.radius
        sl = grid.index_window(c.real - r, c.real + r, c.imag - r, c.imag + r)
        d = np.abs(grid.nodes[sl] - c)
        hit = d <= r * (1 + _EPS) + _EPS
        if p.kind == "annulus":
            hit &= d >= p.inner * (1 - _EPS) - _EPS
        out[sl] |= hit
    elif p.kind == "segment":
        a, b = p.endpoints
        pad = h
        sl = grid.index_window(min(a.real, b.real) - pad, max(a.real, b.real) + pad,
                               min(a.imag, b.imag) - pad, max(a.imag, b.imag) + pad)
        z = grid.nodes[sl]
        ab = b - a
        if abs(ab) == 0:
            dist = np.abs(z - a)
        else:
            s = np.clip(((z - a) * np.conj(ab)).real / abs(ab) ** 2, 0.0, 1.0)
            dist = np.abs(z - (a + s * ab))
        out[sl] |= dist <= 0.5 * h * (1 + 1e-6)
    elif p.kind == "raster":
        for z in p.points:
            sl = grid.index_window(z.real - h, z.real + h, z.imag - h, z.imag + h)
            out[sl] |= np.abs(grid.nodes[sl] - z) <= 0.5 * h * (1 + 1e-6)
    else:
        raise ValueError(f"cannot rasterize a {p.kind} piece")


def rasterize_set(spec: CompactSetSpec, grid: Grid) -> SetMask:
    """Mark the lattice nodes belonging to ``spec``.

    Areal pieces (disks, annuli) keep the nodes they contain.  Thin pieces
    (segments, Cantor iterates, point clouds) are fattened to the nodes
    within ``h/2``, which gives a one-node-thick strip.  Every member must
    keep a collar of at least ``2h`` from the boundary of the grid's domain.
    """
    if spec.kind == "product":
        raise ValueError("product sets live in C^n; rasterize their factors instead")
    flags = np.zeros(grid.shape, dtype=bool)
    for p in spec.pieces():
        _piece_flags(p, grid, flags)
    if not flags.any():
        raise EmptySetError(f"{spec.label} has no lattice nodes at h={grid.h:g}")
    depth = grid.domain.depth(grid.nodes[flags])
    if np.any(depth < 2 * grid.h - _EPS) or np.any(grid.boundary[flags]) or not np.all(grid.inside[flags]):
        raise NotCompactlyContainedError(
            f"{spec.label} comes within 2h of the boundary of {grid.domain.label}")
    return SetMask(grid, flags, spec, fattened=any(p.is_thin for p in spec.pieces()))


SET_FAMILIES = ("disk", "segment", "annulus", "cantor", "union")


def _random_point(rng: np.random.Generator, radius: float) -> complex:
    return complex(math.sqrt(rng.random()) * radius * np.exp(2j * np.pi * rng.random()))


def _random_piece(rng: np.random.Generator, family: str, reach: float) -> CompactSetSpec:
    if family == "disk":
        r = float(np.exp(rng.uniform(math.log(0.02), math.log(0.5))))
        return CompactSetSpec.disk(_random_point(rng, max(reach - r, 0.0)), round(r, 6))
    if family == "annulus":
        r = float(rng.uniform(0.1, 0.5))
        return CompactSetSpec.annulus(_random_point(rng, reach - r), round(r * rng.uniform(0.2, 0.9), 6),
                                      round(r, 6))
    # segment-like: a chord with both ends inside the disk of radius ``reach``
    length = float(np.exp(rng.uniform(math.log(0.05), math.log(1.5))))
    mid = _random_point(rng, max(reach - length / 2, 0.0))
    d = 0.5 * length * np.exp(1j * np.pi * rng.random())
    a, b = complex(np.round(mid - d, 6)), complex(np.round(mid + d, 6))
    if family == "cantor":
        return CompactSetSpec.cantor(a, b, int(rng.integers(1, 5)))
    return CompactSetSpec.segment(a, b)


def random_compact_set(rng: np.random.Generator, reach: float = 0.95,
                       families: Sequence[str] = SET_FAMILIES) -> CompactSetSpec:
    """A seeded random planar set inside the closed disk of radius ``reach``.

    Unions combine two or three disks or segments.
    """
    family = families[int(rng.integers(len(families)))]
    if family == "union":
        m = int(rng.integers(2, 4))
        return CompactSetSpec.union(
            _random_piece(rng, ("disk", "segment")[int(rng.integers(2))], reach) for _ in range(m))
    return _random_piece(rng, family, reach)
