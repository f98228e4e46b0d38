"""Discrete GFF, circle averages and the regularised gamma-LQG area measure.

The field lives on the vertices of an N x N grid covering [-1, 1]^2 (spacing
h = 2/N) with zero boundary values.  ``sample_dgff`` draws the discrete GFF
with covariance (4 I - adjacency)^{-1}, whose diagonal grows like
log(N) / (2 pi).  The LQG field is ``sqrt(2 pi)`` times that, so that circle
averages have variance log(1/eps) + O(1), the normalisation under which
eps^{gamma^2/2} exp(gamma h_eps) has a non-trivial limit.

Regularisation radii ``eps`` are given in grid cells throughout.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

import numpy as np
from scipy import fft

from .rng import stream

LQG_SCALE = math.sqrt(2 * math.pi)


@dataclass(frozen=True)
class LqgParams:
    gamma: float

    def __post_init__(self):
        if not 0 <= self.gamma < 2:
            raise ValueError("gamma must lie in [0, 2)")

    @property
    def q(self) -> float:
        """Q = 2/gamma + gamma/2 (infinite at gamma = 0)."""
        return math.inf if self.gamma == 0 else 2 / self.gamma + self.gamma / 2

    @property
    def gamma_q(self) -> float:
        """gamma * Q = 2 + gamma^2 / 2, finite for every gamma."""
        return 2 + self.gamma ** 2 / 2


@dataclass(frozen=True, eq=False)
class GridField:
    """Vertex values on the (N+1) x (N+1) grid of [-1, 1]^2, zero on the boundary."""

    values: np.ndarray
    seed: int | None = None
    boundary: str = "zero"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ValueError("field values must be a square array")
        object.__setattr__(self, "values", v)

    @property
    def resolution(self) -> int:
        return self.values.shape[0] - 1

    @property
    def h(self) -> float:
        return 2.0 / self.resolution

    @property
    def mask(self) -> np.ndarray:
        """Cells inside the simulation domain (the whole square)."""
        return np.ones((self.resolution, self.resolution), dtype=bool)

    def cell_centers(self):
        c = -1 + (np.arange(self.resolution) + 0.5) * self.h
        return np.meshgrid(c, c, indexing="xy")

    def __add__(self, other: "GridField") -> "GridField":
        return GridField(self.values + other.values)

    def scaled(self, c: float) -> "GridField":
        return GridField(c * self.values, self.seed, self.boundary)


def _check_resolution(n: int):
    if n < 64 or n & (n - 1):
        raise ValueError("resolution must be a power of 2 and at least 64")


@lru_cache(maxsize=8)
def _inv_sqrt_eigs(n: int) -> np.ndarray:
    """(4 - 2 cos(pi j/n) - 2 cos(pi k/n))^{-1/2} on the interior modes (shared, read-only)."""
    k = np.arange(1, n)
    lam1 = 2 - 2 * np.cos(np.pi * k / n)
    out = 1.0 / np.sqrt(lam1[:, None] + lam1[None, :])
    out.setflags(write=False)
    return out


def sample_dgff(resolution: int, seed) -> GridField:
    """Zero-boundary discrete GFF (unit-weight edges), exact via the sine transform."""
    _check_resolution(resolution)
    z = stream(seed, "dgff", resolution).standard_normal((resolution - 1, resolution - 1))
    inner = fft.dstn(z * _inv_sqrt_eigs(resolution), type=1, norm="ortho")
    v = np.zeros((resolution + 1, resolution + 1))
    v[1:-1, 1:-1] = inner
    s = seed if isinstance(seed, (int, np.integer)) else None
    return GridField(v, s)


def lqg_field(resolution: int, seed) -> GridField:
    return sample_dgff(resolution, seed).scaled(LQG_SCALE)


def dgff_variance(resolution: int, weights: np.ndarray) -> float:
    """Exact variance of sum(weights * h) for the discrete GFF (weights on interior vertices)."""
    _check_resolution(resolution)
    w = np.asarray(weights, dtype=float)
    if w.shape != (resolution - 1, resolution - 1):
        raise ValueError("weights must cover the interior vertices")
    c = fft.dstn(w, type=1, norm="ortho")
    return float(np.sum((c * _inv_sqrt_eigs(resolution)) ** 2))


def green_center(resolution: int) -> float:
    """Discrete Green's function G(c, c) at the centre vertex."""
    w = np.zeros((resolution - 1, resolution - 1))
    w[resolution // 2 - 1, resolution // 2 - 1] = 1.0
    return dgff_variance(resolution, w)


# --------------------------------------------------------------------------
# interpolation and circle averages


def _to_grid(f: GridField, x, y):
    return (np.asarray(x) + 1) / f.h, (np.asarray(y) + 1) / f.h


def bilinear(f: GridField, x, y) -> np.ndarray:
    gx, gy = _to_grid(f, x, y)
    n = f.resolution
    if np.any(gx < 0) or np.any(gx > n) or np.any(gy < 0) or np.any(gy > n):
        raise ValueError("interpolation point outside the domain")
    i = np.minimum(np.floor(gx).astype(int), n - 1)
    j = np.minimum(np.floor(gy).astype(int), n - 1)
    tx, ty = gx - i, gy - j
    v = f.values          # indexed [row = y, col = x]
    return ((1 - tx) * (1 - ty) * v[j, i] + tx * (1 - ty) * v[j, i + 1]
            + (1 - tx) * ty * v[j + 1, i] + tx * ty * v[j + 1, i + 1])


def circle_points(eps: float) -> int:
    return max(16, int(math.ceil(4 * math.pi * eps)))


def _circle_offsets(f: GridField, eps: float):
    k = circle_points(eps)
    th = 2 * np.pi * np.arange(k) / k
    r = eps * f.h
    return r * np.cos(th), r * np.sin(th)


def _check_eps(eps: float):
    if eps < 2:
        raise ValueError("eps must be at least 2 grid cells")


def _check_inside(f: GridField, x, y, margin: float, what: str):
    lim = 1 - margin
    if np.any(np.abs(x) > lim + 1e-12) or np.any(np.abs(y) > lim + 1e-12):
        raise ValueError(f"{what} leaves the domain (margin {margin:.4g} required)")


def circle_average(f: GridField, z, eps: float):
    """Mean of the bilinear interpolant on the circle of radius eps (cells) around z."""
    _check_eps(eps)
    z = np.asarray(z, dtype=complex)
    dx, dy = _circle_offsets(f, eps)
    x = z.real[..., None] + dx
    y = z.imag[..., None] + dy
    _check_inside(f, z.real, z.imag, eps * f.h, "circle")
    out = bilinear(f, x, y).mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def circle_average_weights(resolution: int, z: complex, eps: float) -> np.ndarray:
    """The circle average as a linear functional on interior vertex values."""
    n = resolution
    w = np.zeros((n + 1, n + 1))
    f = GridField(w)
    dx, dy = _circle_offsets(f, eps)
    gx, gy = _to_grid(f, z.real + dx, z.imag + dy)
    i = np.floor(gx).astype(int)
    j = np.floor(gy).astype(int)
    tx, ty = gx - i, gy - j
    k = dx.size
    for a, b, c in ((0, 0, (1 - tx) * (1 - ty)), (1, 0, tx * (1 - ty)),
                    (0, 1, (1 - tx) * ty), (1, 1, tx * ty)):
        np.add.at(w, (j + b, i + a), c / k)
    return w[1:-1, 1:-1]


# --------------------------------------------------------------------------
# area measure


@dataclass(frozen=True, eq=False)
class LqgMeasure:
    eps: float
    cell_masses: np.ndarray          # N x N, NaN outside the evaluated region
    params: LqgParams = field(default_factory=lambda: LqgParams(0.0))

    def __post_init__(self):
        m = self.cell_masses[np.isfinite(self.cell_masses)]
        if np.any(m < 0):
            raise ValueError("cell masses must be non-negative")

    def total(self, region=None) -> float:
        m = self.cell_masses if region is None else self.cell_masses[region]
        if np.any(np.isnan(m)):
            raise ValueError("region includes cells that were not evaluated")
        return math.fsum(m.ravel())


def _region_mask(f: GridField, region) -> np.ndarray:
    if callable(region):
        X, Y = f.cell_centers()
        return np.asarray(region(X, Y), dtype=bool)
    m = np.asarray(region, dtype=bool)
    if m.shape != (f.resolution, f.resolution):
        raise ValueError("region mask must have one entry per cell")
    return m


def lqg_measure(f: GridField, params: LqgParams, eps: float, region) -> LqgMeasure:
    """Cell masses eps^{gamma^2/2} exp(gamma h_eps(center)) * cell area on ``region``."""
    _check_eps(eps)
    mask = _region_mask(f, region)
    X, Y = f.cell_centers()
    x, y = X[mask], Y[mask]
    _check_inside(f, x, y, eps * f.h, "region")
    g = params.gamma
    out = np.full(mask.shape, np.nan)
    if g == 0:
        out[mask] = f.h ** 2
    else:
        he = circle_average(f, x + 1j * y, eps)
        out[mask] = (eps * f.h) ** (g * g / 2) * np.exp(g * he) * f.h ** 2
    return LqgMeasure(eps, out, params)


def lqg_area(f: GridField, params: LqgParams, eps: float, region) -> float:
    return lqg_measure(f, params, eps, region).total(_region_mask(f, region))


def boundary_length_chord(f: GridField, params: LqgParams, eps: float, y0: float = 0.0,
                          x_range=(-0.5, 0.5)) -> float:
    """1-d analog of the boundary measure: sum of eps^{gamma^2/4} exp(gamma h_eps / 2) dx on a chord."""
    _check_eps(eps)
    x = np.arange(x_range[0] + f.h / 2, x_range[1], f.h)
    _check_inside(f, x, np.full_like(x, y0), eps * f.h, "chord")
    he = circle_average(f, x + 1j * y0, eps)
    g = params.gamma
    return math.fsum(((eps * f.h) ** (g * g / 4) * np.exp(g * he / 2) * f.h).tolist())


# --------------------------------------------------------------------------
# coordinate change


@dataclass(frozen=True)
class Mobius:
    """phi(z) = e^{i theta} (z + a) / (1 + conj(a) z), a disk automorphism."""

    a: complex = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if abs(self.a) >= 1:
            raise ValueError("|a| must be < 1")

    def __call__(self, z):
        a = complex(self.a)
        if a == 0 and self.theta == 0:
            return np.asarray(z, dtype=complex)
        return np.exp(1j * self.theta) * (z + a) / (1 + a.conjugate() * z)

    def deriv(self, z):
        a = complex(self.a)
        if a == 0 and self.theta == 0:
            return np.ones_like(np.asarray(z, dtype=complex))
        return np.exp(1j * self.theta) * (1 - abs(a) ** 2) / (1 + a.conjugate() * z) ** 2

    def inverse(self) -> "Mobius":
        return Mobius(-complex(self.a) * np.exp(1j * self.theta), -self.theta)


@dataclass(frozen=True)
class Disk:
    center: complex = 0.0
    radius: float = 0.25

    def __call__(self, x, y):
        return np.abs(x + 1j * y - self.center) < self.radius


def coord_change_check(f: GridField, params: LqgParams, phi: Mobius, region=Disk(), eps: float = 8.0) -> float:
    """|mu_{h1}(A) - mu_{h2}(phi(A))| / mu_{h2}(phi(A)) with h1 = h2 o phi + Q log|phi'|.

    ``f`` is h2.  The circle average of h1 around a cell centre z is the mean
    of h2(phi(w)) + Q log|phi'(w)| over the circle points w, with h2
    interpolated bilinearly; gamma Q = 2 + gamma^2/2 is used directly so that
    gamma = 0 is covered.  phi(A) is the set of cells whose centre is mapped
    into A by phi^{-1}.
    """
    _check_eps(eps)
    g = params.gamma
    X, Y = f.cell_centers()
    inA = _region_mask(f, region)
    inv = phi.inverse()
    w = inv(X + 1j * Y)
    inPhiA = _region_mask(f, lambda x, y: region(w.real, w.imag))
    r = eps * f.h
    # h1 side: circles around cells of A, pushed through phi
    z = (X + 1j * Y)[inA]
    dx, dy = _circle_offsets(f, eps)
    pts = z[:, None] + (dx + 1j * dy)[None, :]
    img = phi(pts)
    _check_inside(f, img.real, img.imag, r, "phi(circles around A)")
    _check_inside(f, pts.real, pts.imag, 0.0, "circles around A")
    h1 = (g * bilinear(f, img.real, img.imag) + params.gamma_q * np.log(np.abs(phi.deriv(pts)))).mean(axis=1)
    m1 = math.fsum((r ** (g * g / 2) * np.exp(h1) * f.h ** 2).tolist())
    m2 = lqg_area(f, params, eps, inPhiA)
    return abs(m1 - m2) / m2


# --------------------------------------------------------------------------
# persistence


def save_field(f: GridField, path) -> Path:
    """Row-major float64 binary plus a JSON sidecar."""
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    np.ascontiguousarray(f.values, dtype="<f8").tofile(p.with_suffix(".bin"))
    meta = {"resolution": f.resolution, "seed": f.seed, "boundary": f.boundary,
            "dtype": "float64-le", "shape": list(f.values.shape), "domain": [-1, 1, -1, 1]}
    p.with_suffix(".json").write_text(json.dumps(meta, indent=1))
    return p.with_suffix(".bin")


def load_field(path) -> GridField:
    p = Path(path)
    meta = json.loads(p.with_suffix(".json").read_text())
    v = np.fromfile(p.with_suffix(".bin"), dtype="<f8").reshape(meta["shape"])
    return GridField(v, meta["seed"], meta["boundary"])
