"""Uniform cell-centered grids on boxes in R^1 / R^2 with zero exterior.

Functions live on interior cells only (piecewise constant, identically zero
outside the mask), stored as flat float arrays ordered like
``mask.nonzero()``.  The zero extension is part of every norm here: the
gradient seminorm uses forward differences with zero ghost cells, so
boundary cells always contribute.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

__all__ = [
    "Domain",
    "volume",
    "lp_norm",
    "grad_seminorm",
    "grad_seminorm_pow",
    "test_function",
]


@dataclass(frozen=True, eq=False)
class Domain:
    """Uniform grid over a box; ``mask`` flags cells whose center lies in Omega."""

    dim: int
    box: tuple[tuple[float, float], ...]
    h: float
    mask: np.ndarray

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError("only 1-d and 2-d grids are supported")
        if self.h <= 0.0:
            raise ValueError("cell width must be positive")
        if self.mask.ndim != self.dim:
            raise ValueError("mask rank must match dim")
        if self.n < 1:
            raise ValueError("mask selects no interior cells")

    @property
    def n(self):
        return int(self.mask.sum())

    @property
    def shape(self):
        return self.mask.shape

    @property
    def cell(self):
        """Cell measure h^dim."""
        return self.h**self.dim

    def axis_centers(self, a):
        lo, _ = self.box[a]
        return lo + self.h * (np.arange(self.shape[a]) + 0.5)

    def centers(self):
        """Interior cell centers, shape (n, dim), in mask.nonzero() order."""
        axes = [self.axis_centers(a) for a in range(self.dim)]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g[self.mask] for g in grids], axis=1)
        return pts

    def embed(self, u):
        """Scatter interior values onto the full lattice (zeros elsewhere)."""
        full = np.zeros(self.shape)
        full[self.mask] = u
        return full

    def restrict(self, full):
        return np.asarray(full)[self.mask]

    def key(self):
        """Content hash usable as a cache key."""
        md = hashlib.sha256()
        md.update(np.int64(self.dim).tobytes())
        md.update(np.asarray(self.box, dtype=float).tobytes())
        md.update(np.float64(self.h).tobytes())
        md.update(self.mask.tobytes())
        return md.hexdigest()

    @classmethod
    def interval(cls, lo, hi, cells):
        h = (hi - lo) / cells
        return cls(1, ((float(lo), float(hi)),), h, np.ones(cells, dtype=bool))

    @classmethod
    def rectangle(cls, box, resolution):
        """2-d box meshed with ``resolution`` cells along the first axis."""
        (x0, x1), (y0, y1) = box
        h = (x1 - x0) / resolution
        ny = int(round((y1 - y0) / h))
        if abs(ny * h - (y1 - y0)) > 1e-9 * max(1.0, abs(y1 - y0)):
            raise ValueError("box side lengths must be commensurate with h")
        mask = np.ones((resolution, ny), dtype=bool)
        return cls(2, ((float(x0), float(x1)), (float(y0), float(y1))), h, mask)

    @classmethod
    def disk(cls, box, resolution):
        """Disk inscribed in the 2-d box, cells kept when their center is inside."""
        d = cls.rectangle(box, resolution)
        (x0, x1), (y0, y1) = d.box
        cx, cy = 0.5 * (x0 + x1), 0.5 * (y0 + y1)
        r = 0.5 * min(x1 - x0, y1 - y0)
        gx, gy = np.meshgrid(d.axis_centers(0), d.axis_centers(1), indexing="ij")
        mask = (gx - cx) ** 2 + (gy - cy) ** 2 < r * r
        return cls(2, d.box, d.h, mask)


def volume(d):
    """|Omega| of the discretization: n * h^dim."""
    return d.n * d.cell


def lp_norm(d, u, p):
    """(sum |u_i|^p h^dim)^(1/p)."""
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    return float(np.sum(np.abs(u) ** p) * d.cell) ** (1.0 / p)


def _padded_gradients(d, u):
    """Forward-difference components on the zero-padded lattice."""
    full = np.pad(d.embed(u), 1)
    comps = [np.diff(full, axis=a, append=0.0) / d.h for a in range(d.dim)]
    return comps


def grad_seminorm_pow(d, u, p):
    """sum |grad_h u|^p h^dim with zero exterior ghosts."""
    comps = _padded_gradients(d, u)
    mag2 = sum(c * c for c in comps)
    return float(np.sum(mag2 ** (p / 2.0)) * d.cell)


def grad_seminorm(d, u, p):
    if p <= 1.0:
        raise ValueError("p must exceed 1")
    return grad_seminorm_pow(d, u, p) ** (1.0 / p)


def _envelope(d):
    """Product of half-sine profiles on the bounding box, restricted to the mask."""
    axes = [np.sin(np.pi * (d.axis_centers(a) - d.box[a][0]) / (d.box[a][1] - d.box[a][0]))
            for a in range(d.dim)]
    grids = np.meshgrid(*axes, indexing="ij")
    prof = np.ones(d.shape)
    for g in grids:
        prof = prof * g
    return prof[d.mask]


def _bump(d):
    """Compactly supported smooth bump centered in the box, max 1."""
    vals = np.ones(d.shape)
    for a in range(d.dim):
        lo, hi = d.box[a]
        xi = 2.0 * (d.axis_centers(a) - 0.5 * (lo + hi)) / (hi - lo)
        prof = np.where(np.abs(xi) < 1.0, np.exp(1.0 - 1.0 / (1.0 - np.minimum(xi * xi, 1.0 - 1e-12))), 0.0)
        shape = [1] * d.dim
        shape[a] = -1
        vals = vals * prof.reshape(shape)
    return vals[d.mask]


def test_function(kind, d, seed=0):
    """Deterministic sample functions: bump, eigen-guess, random-smooth, random-rough."""
    rng = np.random.default_rng(seed)
    if kind == "bump":
        return _bump(d)
    if kind == "eigen-guess":
        return _envelope(d)
    if kind == "random-smooth":
        env = _envelope(d)
        pts = d.centers()
        out = np.zeros(d.n)
        for _ in range(4):
            freq = rng.integers(1, 5, size=d.dim)
            amp = rng.normal()
            phase = rng.uniform(0, np.pi, size=d.dim)
            wave = np.ones(d.n)
            for a in range(d.dim):
                lo, hi = d.box[a]
                wave = wave * np.sin(freq[a] * np.pi * (pts[:, a] - lo) / (hi - lo) + phase[a])
            out += amp * wave
        return env * out
    if kind == "random-rough":
        return rng.uniform(-1.0, 1.0, size=d.n)
    raise ValueError(f"unknown test function kind {kind!r}")
