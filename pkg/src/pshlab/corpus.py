"""Seeded corpora of subharmonic test functions and the campaigns that use them.

Functions are built from logs of polynomial moduli, positive scalings,
maxima and additive constants, so every member is subharmonic by
construction and cheap to evaluate exactly.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .errors import (EmptyCorpusError, GeometryError, NearConstantError, ZeroMeasureError)
from .geometry import CompactSetSpec, DomainSpec, SetMask, measure_1d, real_intervals
from .siciak import SiciakEstimator, sum_log_dist

RECIPES = ("scaled-log-poly", "max-combination", "shifted")
PLACEMENTS = ("inside-E", "inside-A", "annular", "mixed")
N_ANGLES = 512


@dataclass(frozen=True)
class PshFunctionSpec:
    """A subharmonic function as an expression tree.

    ``scaled-log-poly`` is ``scale * sum_j log|z - roots_j|`` (zero when there
    are no roots), ``max-combination`` the pointwise max of ``children`` and
    ``shifted`` its single child plus ``constant``.  ``tag`` records the class
    (``("F_r", r)``, ``("R_a", a)`` or ``("raw", 0)``) and ``sups`` the cached
    ``(sup_Omega, sup_A)`` of a normalized function.
    """

    recipe: str
    roots: tuple[complex, ...] = ()
    scale: float = 1.0
    children: tuple["PshFunctionSpec", ...] = ()
    constant: float = 0.0
    tag: tuple[str, float] = ("raw", 0.0)
    sups: tuple[float, float] | None = None

    def __post_init__(self):
        if self.recipe not in RECIPES:
            raise ValueError(f"unknown recipe {self.recipe!r}")
        if self.recipe == "scaled-log-poly" and not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.recipe == "max-combination" and not self.children:
            raise ValueError("max-combination needs children")
        if self.recipe == "shifted" and len(self.children) != 1:
            raise ValueError("shifted takes exactly one child")

    @classmethod
    def log_poly(cls, roots, scale: float = 1.0) -> "PshFunctionSpec":
        return cls("scaled-log-poly", roots=tuple(complex(r) for r in roots), scale=float(scale))

    @classmethod
    def maximum(cls, children) -> "PshFunctionSpec":
        return cls("max-combination", children=tuple(children))

    @classmethod
    def shifted(cls, child: "PshFunctionSpec", constant: float) -> "PshFunctionSpec":
        return cls("shifted", children=(child,), constant=float(constant))

    @property
    def degree(self) -> int:
        if self.recipe == "scaled-log-poly":
            return len(self.roots)
        return max(c.degree for c in self.children)

    def __call__(self, z) -> np.ndarray:
        return evaluate(self, z)

    def to_dict(self) -> dict:
        d: dict = {"recipe": self.recipe}
        if self.recipe == "scaled-log-poly":
            d["roots"] = [[r.real, r.imag] for r in self.roots]
            d["scale"] = self.scale
        else:
            d["children"] = [c.to_dict() for c in self.children]
        if self.recipe == "shifted":
            d["constant"] = self.constant
        if self.tag[0] != "raw":
            d["tag"] = list(self.tag)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PshFunctionSpec":
        tag = tuple(d.get("tag", ("raw", 0.0)))
        kids = tuple(cls.from_dict(c) for c in d.get("children", ()))
        return cls(d["recipe"], roots=tuple(complex(x, y) for x, y in d.get("roots", ())),
                   scale=d.get("scale", 1.0), children=kids, constant=d.get("constant", 0.0),
                   tag=(tag[0], float(tag[1])))


def evaluate(spec: PshFunctionSpec, z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if spec.recipe == "scaled-log-poly":
        if not spec.roots:
            return np.zeros(z.shape)
        return spec.scale * sum_log_dist(z, np.array(spec.roots))
    if spec.recipe == "shifted":
        return evaluate(spec.children[0], z) + spec.constant
    out = evaluate(spec.children[0], z)
    for c in spec.children[1:]:
        out = np.maximum(out, evaluate(c, z))
    return out


def affine(spec: PshFunctionSpec, alpha: float, beta: float) -> PshFunctionSpec:
    """``alpha * f + beta`` for ``alpha > 0``, pushing the scaling into the leaves."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if spec.recipe == "shifted":
        return affine(spec.children[0], alpha, alpha * spec.constant + beta)
    if spec.recipe == "scaled-log-poly":
        inner = replace(spec, scale=spec.scale * alpha, tag=("raw", 0.0), sups=None)
    else:
        inner = PshFunctionSpec.maximum(affine(c, alpha, 0.0) for c in spec.children)
    return inner if beta == 0 else PshFunctionSpec.shifted(inner, beta)


def leja_recipe(est: SiciakEstimator) -> PshFunctionSpec:
    """The Siciak estimate ``max(0, (1/k) log|w_k| - log||w_k|| / k)`` as a corpus member.

    Normalizing it realizes the lower bound in the sandwich for ``h_E``.
    """
    k = est.k
    raw = PshFunctionSpec.shifted(PshFunctionSpec.log_poly(est.leja.points, 1.0 / k), -est.log_norm / k)
    return PshFunctionSpec.maximum([raw, PshFunctionSpec.log_poly(())])


# --------------------------------------------------------------------------
# suprema


def disk_sup(f, center: complex, radius: float, h: float | None = None,
             n_angles: int = N_ANGLES) -> float:
    """Sup over a closed disk: boundary circle samples plus lattice nodes inside.

    For subharmonic ``f`` the circle alone is exact up to sampling; the nodes
    (spacing ``h``, default ``radius/16``) guard coarse angular sampling.
    """
    th = 2 * np.pi * np.arange(n_angles) / n_angles
    pts = [center + radius * np.exp(1j * th)]
    h = radius / 16 if h is None else h
    m = int(radius / h)
    g = h * np.arange(-m, m + 1)
    nodes = g[:, None] + 1j * g[None, :]
    pts.append(center + nodes[np.abs(nodes) <= radius])
    return float(max(np.max(f(p)) for p in pts))


def set_sup(f, E: CompactSetSpec | SetMask, n: int = N_ANGLES) -> float:
    """Sup over ``E`` from its boundary samples (and mask nodes when given a mask)."""
    if isinstance(E, SetMask):
        vals = [np.max(f(E.points))]
        if E.spec is not None:
            vals.append(np.max(f(E.spec.sample_points(n))))
        return float(max(vals))
    return float(np.max(f(E.sample_points(n))))


def interval_sup(f, intervals: Sequence[tuple[float, float]], spacing: float) -> float:
    """Sup over a union of real intervals sampled at ``spacing`` (endpoints included)."""
    best = -math.inf
    for lo, hi in intervals:
        m = max(2, int(math.ceil((hi - lo) / spacing)) + 1)
        best = max(best, float(np.max(f(np.linspace(lo, hi, m) + 0j))))
    return best


# --------------------------------------------------------------------------
# corpus generation and normalization


@dataclass(frozen=True)
class CorpusConfig:
    """Parameters of a seeded corpus.

    ``param`` is ``r`` for the ``F`` family and ``a`` for ``R``; the root
    region ``A`` is the unit disk.  ``E`` is needed for ``inside-E`` placement.
    """

    seed: int = 0
    count: int = 32
    max_degree: int = 4
    root_placement: str = "mixed"
    family: str = "R"
    param: float = 2.0
    E: CompactSetSpec | None = None

    def __post_init__(self):
        if self.count < 1 or self.max_degree < 1:
            raise ValueError("count and max_degree must be at least 1")
        if self.root_placement not in PLACEMENTS:
            raise ValueError(f"root_placement must be one of {PLACEMENTS}")
        if self.family not in ("F", "R"):
            raise ValueError("family must be 'F' or 'R'")
        if not self.param > 1:
            raise ValueError("class parameter must exceed 1")
        if self.root_placement == "inside-E" and self.E is None:
            raise ValueError("inside-E placement needs E")

    @property
    def omega(self) -> DomainSpec:
        return DomainSpec.disk(0, self.param)

    @property
    def A(self) -> DomainSpec:
        return DomainSpec.disk(0, 1.0)


def _point_in_set(rng: np.random.Generator, E: CompactSetSpec) -> complex:
    pieces = E.pieces()
    p = pieces[rng.integers(len(pieces))]
    if p.kind in ("disk", "annulus"):
        rad = math.sqrt(rng.uniform(p.inner ** 2, p.radius ** 2))
        return p.center + rad * np.exp(2j * np.pi * rng.random())
    if p.kind == "segment":
        a, b = p.endpoints
        return a + (b - a) * rng.random()
    return complex(p.points[rng.integers(len(p.points))])


def _root(rng: np.random.Generator, placement: str, cfg: CorpusConfig) -> complex:
    if placement == "mixed":
        options = PLACEMENTS if cfg.E is not None else PLACEMENTS[1:]
        placement = options[rng.integers(len(options))]
        if placement == "mixed":
            placement = "inside-A"
    if placement == "inside-E":
        return _point_in_set(rng, cfg.E)
    if placement == "inside-A":
        rad = math.sqrt(rng.random())
    else:
        rad = rng.uniform(1.0, cfg.param)
    return rad * np.exp(2j * np.pi * rng.random())


def _leaf(rng, cfg) -> PshFunctionSpec:
    deg = int(rng.integers(1, cfg.max_degree + 1))
    roots = [_root(rng, cfg.root_placement, cfg) for _ in range(deg)]
    return PshFunctionSpec.log_poly(roots, float(rng.uniform(0.5, 2.0)) / deg)


def sample_psh(config: CorpusConfig) -> list[PshFunctionSpec]:
    """Deterministic corpus of raw subharmonic functions.

    Roughly half the members are single log-polynomials, a quarter maxima
    of two or three of them and a quarter shifted log-polynomials.
    """
    rng = np.random.default_rng(config.seed)
    out = []
    for _ in range(config.count):
        kind = rng.random()
        if kind < 0.5:
            out.append(_leaf(rng, config))
        elif kind < 0.75:
            m = int(rng.integers(2, 4))
            kids = [PshFunctionSpec.shifted(_leaf(rng, config), float(rng.normal(0, 0.5)))
                    for _ in range(m)]
            out.append(PshFunctionSpec.maximum(kids))
        else:
            out.append(PshFunctionSpec.shifted(_leaf(rng, config), float(rng.normal(0, 1.0))))
    return out


def normalize_to_class(spec: PshFunctionSpec, omega: DomainSpec, A: DomainSpec,
                       family: str = "R") -> PshFunctionSpec:
    """``g = (f - sup_Omega f) / (sup_Omega f - sup_A f)``: ``sup_Omega g = 0``, ``sup_A g = -1``."""
    s_o = disk_sup(spec, omega.center, omega.radius)
    s_a = disk_sup(spec, A.center, A.radius)
    d = s_o - s_a
    if not d >= 1e-9:
        raise NearConstantError(f"sup over Omega exceeds sup over A by only {d:.3g}")
    g = affine(spec, 1.0 / d, -s_o / d)
    tag = ("F_r" if family == "F" else "R_a", float(omega.radius))
    return replace(g, tag=tag, sups=(0.0, -1.0))


def normalized_corpus(config: CorpusConfig, extra: Sequence[PshFunctionSpec] = ()) -> list[PshFunctionSpec]:
    """Sample, then normalize; near-constant members are dropped."""
    out = []
    for f in list(extra) + sample_psh(config):
        try:
            out.append(normalize_to_class(f, config.omega, config.A, config.family))
        except NearConstantError:
            continue
    return out


# --------------------------------------------------------------------------
# campaigns


def empirical_h(corpus: Sequence[PshFunctionSpec], E: SetMask | CompactSetSpec, probes,
                cumulative: bool = False) -> np.ndarray:
    """Max over the corpus of ``g(z) - sup_E g``: a lower bound for ``h_E`` at each probe.

    With ``cumulative`` the running maxima over corpus prefixes are returned,
    one row per prefix length.
    """
    if not corpus:
        raise EmptyCorpusError("empirical_h needs at least one function")
    probes = np.asarray(probes, dtype=complex)
    rows = np.array([g(probes) - set_sup(g, E) for g in corpus])
    run = np.maximum.accumulate(rows, axis=0)
    return run if cumulative else run[-1]


@dataclass(eq=False)
class BernsteinReport:
    """Doubling ratios ``(sup_{st} f - sup_t f) / log s`` per function and ``s``."""

    c_hat: float
    ratios: np.ndarray
    s_values: np.ndarray
    center: complex
    t: float
    argmax: int

    @property
    def finite(self) -> bool:
        return bool(np.all(np.isfinite(self.ratios)))


def bernstein_check(corpus: Sequence[PshFunctionSpec], x: complex, t: float,
                    s_grid: Sequence[float], a: float) -> BernsteinReport:
    """Doubling campaign on ``B_c(x, t)``; needs ``B_c(x, a t)`` inside the unit disk.

    ``s = 1`` is dropped (the ratio is 0/0 there).
    """
    if abs(x) + a * t > 1 + 1e-12:
        raise GeometryError(f"|x| + a t = {abs(x) + a * t:.4g} > 1")
    if not corpus:
        raise EmptyCorpusError("bernstein_check needs a corpus")
    s_vals = np.array([s for s in s_grid if s > 1.0])
    if np.any(s_vals > a):
        raise GeometryError("s must lie in [1, a]")
    ratios = np.empty((len(corpus), len(s_vals)))
    for i, f in enumerate(corpus):
        base = disk_sup(f, x, t)
        for j, s in enumerate(s_vals):
            ratios[i, j] = (disk_sup(f, x, s * t) - base) / math.log(s)
    k = int(np.argmax(ratios.max(axis=1)))
    return BernsteinReport(float(ratios.max()), ratios, s_vals, complex(x), float(t), k)


@dataclass(eq=False)
class BrudnyiReport:
    """Measure-ratio campaign on a real interval ``B``.

    ``lhs[i, j] = sup_B f_i - sup_{E_j} f_i`` and
    ``log_ratio[j] = log(d |B| / |E_j|)``; a violation is
    ``lhs > c_hat * log_ratio`` beyond ``1e-9``.
    """

    c_hat: float
    d: float
    lhs: np.ndarray
    log_ratio: np.ndarray
    measures: np.ndarray

    @property
    def violations(self) -> int:
        return int(np.sum(self.lhs > self.c_hat * self.log_ratio[None, :] + 1e-9))

    @property
    def ratios(self) -> np.ndarray:
        return self.lhs / self.log_ratio[None, :]


def brudnyi_check(corpus: Sequence[PshFunctionSpec], B: tuple[float, float],
                  subsets: Sequence[CompactSetSpec], c_hat: float | None = None,
                  d: float = 4.0, spacing: float | None = None) -> BrudnyiReport:
    """``sup_B f <= c log(d |B| / |E|) + sup_E f`` over a corpus and subsets of ``B``.

    Without ``c_hat`` the constant is fitted as the largest observed ratio;
    pass a fitted value to test it on a held-out corpus.
    """
    if not corpus:
        raise EmptyCorpusError("brudnyi_check needs a corpus")
    lo, hi = B
    length = hi - lo
    spacing = spacing or length / 4096
    measures = np.empty(len(subsets))
    pieces = []
    for j, E in enumerate(subsets):
        ivs = real_intervals(E)
        if any(a < lo - 1e-12 or b > hi + 1e-12 for a, b in ivs):
            raise GeometryError(f"{E.label} is not inside [{lo:g}, {hi:g}]")
        m = measure_1d(E)
        if m <= 0:
            raise ZeroMeasureError(f"{E.label} has zero length")
        measures[j] = m
        pieces.append(ivs)
    log_ratio = np.log(d * length / measures)
    lhs = np.empty((len(corpus), len(subsets)))
    for i, f in enumerate(corpus):
        sup_b = interval_sup(f, [(lo, hi)], spacing)
        for j, ivs in enumerate(pieces):
            lhs[i, j] = sup_b - interval_sup(f, ivs, spacing)
    if c_hat is None:
        c_hat = float((lhs / log_ratio[None, :]).max())
    return BrudnyiReport(float(c_hat), d, lhs, log_ratio, measures)


def subset_patterns(B: tuple[float, float], count: int, seed: int = 0,
                    max_pieces: int = 4) -> list[CompactSetSpec]:
    """Seeded unions of disjoint subintervals of ``B`` with varied total length.

    ``B`` is cut into equal slots, one piece per slot at a random offset;
    total lengths are log-uniform between 0.3% and 90% of ``|B|``.
    """
    rng = np.random.default_rng(seed)
    lo, hi = B
    out = []
    for i in range(count):
        m = int(rng.integers(1, max_pieces + 1))
        slot = (hi - lo) / m
        frac = 10 ** rng.uniform(-2.5, math.log10(0.9))
        lengths = rng.dirichlet(np.ones(m)) * frac * (hi - lo)
        lengths = np.minimum(lengths, slot)
        segs = []
        for j, ell in enumerate(lengths):
            start = lo + j * slot + rng.uniform(0.0, slot - ell)
            segs.append(CompactSetSpec.segment(start, start + ell))
        label = f"pattern{i}"
        out.append(CompactSetSpec.union(segs, label=label) if m > 1 else replace(segs[0], label=label))
    return out
