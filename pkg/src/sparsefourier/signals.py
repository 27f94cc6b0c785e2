"""Domain types and deterministic generators for test objects.

Types
-----
``Signal1D``   complex length-N sample vector.
``Image2D``    complex n-by-n sample grid (row major).
``IndexSet``   sorted, duplicate-free indices in an ambient range; doubles as
               a time-domain support and a frequency-sampling set.

Generators
----------
``gen_sparse_signal``  random sparse spikes with complex Gaussian amplitudes.
``gen_dirac_comb``     the sqrt(N)-periodic unit spike train (self-dual under
                       the DFT, extremal for the classical time-frequency
                       uncertainty inequality |T| + |W| >= 2 sqrt(N)).
``gen_phantom``        piecewise-constant ellipse test images.

All generators are pure functions of their arguments (and the seed carried by
the supplied ``Rng``); outputs are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rng import Rng

__all__ = [
    "Signal1D",
    "Image2D",
    "IndexSet",
    "gen_sparse_signal",
    "gen_dirac_comb",
    "gen_phantom",
    "LOGAN_SHEPP_ELLIPSES",
]


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Signal1D:
    """Complex discrete signal of length ``n``."""

    n: int
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"signal length must be positive, got {self.n}")
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.n,):
            raise ValueError(f"expected {self.n} samples, got shape {v.shape}")
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("signal contains non-finite entries")
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def zeros(cls, n: int) -> "Signal1D":
        return cls(n, np.zeros(n, dtype=np.complex128))

    def support(self, tol: float = 0.0) -> "IndexSet":
        """Indices with |value| strictly above ``tol``."""
        idx = np.nonzero(np.abs(self.values) > tol)[0]
        return IndexSet(self.n, idx)


@dataclass(frozen=True)
class Image2D:
    """Complex ``side`` x ``side`` image, row major."""

    side: int
    values: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.side <= 0:
            raise ValueError(f"image side must be positive, got {self.side}")
        v = np.asarray(self.values, dtype=np.complex128)
        if v.shape != (self.side, self.side):
            raise ValueError(
                f"expected a {self.side}x{self.side} grid, got shape {v.shape}"
            )
        if not np.all(np.isfinite(v.view(np.float64))):
            raise ValueError("image contains non-finite entries")
        object.__setattr__(self, "values", _freeze(v))

    @classmethod
    def zeros(cls, side: int) -> "Image2D":
        return cls(side, np.zeros((side, side), dtype=np.complex128))


@dataclass(frozen=True)
class IndexSet:
    """Strictly increasing indices inside [0, n)."""

    n: int
    indices: np.ndarray = field(compare=False)

    def __post_init__(self):
        if self.n <= 0:
            raise ValueError(f"ambient size must be positive, got {self.n}")
        idx = np.asarray(self.indices, dtype=np.int64)
        if idx.ndim != 1:
            raise ValueError("indices must be one-dimensional")
        if idx.size:
            if idx[0] < 0 or idx[-1] >= self.n:
                raise ValueError(f"indices must lie in [0, {self.n})")
            if np.any(np.diff(idx) <= 0):
                raise ValueError("indices must be strictly increasing")
        object.__setattr__(self, "indices", _freeze(idx))

    @classmethod
    def of(cls, n: int, values) -> "IndexSet":
        """Build from any iterable: sorts and removes duplicates."""
        return cls(n, np.unique(np.asarray(list(values), dtype=np.int64)))

    @classmethod
    def full(cls, n: int) -> "IndexSet":
        return cls(n, np.arange(n, dtype=np.int64))

    @classmethod
    def empty(cls, n: int) -> "IndexSet":
        return cls(n, np.empty(0, dtype=np.int64))

    def __len__(self) -> int:
        return int(self.indices.size)

    def __contains__(self, k: int) -> bool:
        i = np.searchsorted(self.indices, k)
        return i < self.indices.size and self.indices[i] == k

    def complement(self) -> "IndexSet":
        mask = np.ones(self.n, dtype=bool)
        mask[self.indices] = False
        return IndexSet(self.n, np.nonzero(mask)[0])

    def mask(self) -> np.ndarray:
        m = np.zeros(self.n, dtype=bool)
        m[self.indices] = True
        return m


def gen_sparse_signal(n: int, support_size: int, rng: Rng) -> tuple[Signal1D, IndexSet]:
    """Random sparse signal with exact support of the requested size.

    The support is drawn by sampling {0, ..., n-1} ``support_size`` times
    without replacement; on-support amplitudes are standard complex Gaussians
    (independent unit-variance real and imaginary parts); off-support entries
    are exactly zero.
    """
    if not 0 <= support_size <= n:
        raise ValueError(f"support_size must be in [0, {n}], got {support_size}")
    support = rng.sample_without_replacement(n, support_size)
    values = np.zeros(n, dtype=np.complex128)
    values[support] = rng.complex_gaussians(support_size)
    return Signal1D(n, values), IndexSet(n, support)


def gen_dirac_comb(n: int) -> Signal1D:
    """Unit spike train with spacing sqrt(n); requires n to be a perfect square.

    The comb has exactly sqrt(n) nonzeros and its DFT is again a comb
    (height sqrt(n)) supported on the multiples of sqrt(n), which makes
    |supp(f)| + |supp(fhat)| = 2 sqrt(n): the equality case of the classical
    uncertainty inequality.
    """
    root = math.isqrt(n)
    if root * root != n:
        raise ValueError(f"comb length must be a perfect square, got {n}")
    values = np.zeros(n, dtype=np.complex128)
    values[::root] = 1.0
    return Signal1D(n, values)


# Ten-ellipse head phantom, the standard published parameter table.
# Columns: additive intensity, semi-axis a, semi-axis b, center x, center y,
# rotation angle in degrees (counter-clockwise), all in [-1, 1] coordinates.
LOGAN_SHEPP_ELLIPSES: tuple[tuple[float, float, float, float, float, float], ...] = (
    (1.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0),
    (-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0),
    (-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0),
    (-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0),
    (0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0),
    (0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0),
    (0.01, 0.0230, 0.0230, 0.00, -0.6060, 0.0),
    (0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0),
)

# Parameter ranges for randomly drawn phantoms (documented choice; a pixel
# belongs to an ellipse iff its center point lies inside, so images stay
# exactly piecewise constant).
RANDOM_ELLIPSE_CENTER = (-0.8, 0.8)
RANDOM_ELLIPSE_AXES = (0.05, 0.5)
RANDOM_ELLIPSE_AMPLITUDE = (-1.0, 1.0)


def _render_ellipses(side: int, ellipses) -> np.ndarray:
    # Pixel (row i, col j) has center (x, y) = ((2j+1)/side - 1, 1 - (2i+1)/side).
    coords = (2.0 * np.arange(side) + 1.0) / side - 1.0
    x = coords[np.newaxis, :]
    y = -coords[:, np.newaxis]
    img = np.zeros((side, side), dtype=np.float64)
    for amp, a, b, x0, y0, phi_deg in ellipses:
        phi = math.radians(phi_deg)
        c, s = math.cos(phi), math.sin(phi)
        xr = (x - x0) * c + (y - y0) * s
        yr = -(x - x0) * s + (y - y0) * c
        inside = (xr / a) ** 2 + (yr / b) ** 2 <= 1.0
        img[inside] += amp
    return img


def gen_phantom(
    kind: str,
    side: int,
    ellipse_count: int = 10,
    rng: Rng | None = None,
    amplitude_range: tuple[float, float] = RANDOM_ELLIPSE_AMPLITUDE,
) -> Image2D:
    """Piecewise-constant ellipse phantom on a ``side`` x ``side`` grid.

    ``kind="logan_shepp"`` rasterizes the standard ten-ellipse head phantom
    (``LOGAN_SHEPP_ELLIPSES``).  ``kind="random_ellipses"`` superposes
    ``ellipse_count`` ellipses with centers in [-0.8, 0.8]^2, semi-axes in
    [0.05, 0.5], rotation in [0, pi), and amplitudes drawn from
    ``amplitude_range`` (default [-1, 1]).
    """
    if side < 8:
        raise ValueError(f"phantom side must be at least 8, got {side}")
    if kind == "logan_shepp":
        img = _render_ellipses(side, LOGAN_SHEPP_ELLIPSES)
    elif kind == "random_ellipses":
        if ellipse_count < 1:
            raise ValueError("random phantom needs at least one ellipse")
        if rng is None:
            raise ValueError("random phantom generation requires an Rng")
        ellipses = []
        for _ in range(ellipse_count):
            x0 = rng.uniform(*RANDOM_ELLIPSE_CENTER)
            y0 = rng.uniform(*RANDOM_ELLIPSE_CENTER)
            a = rng.uniform(*RANDOM_ELLIPSE_AXES)
            b = rng.uniform(*RANDOM_ELLIPSE_AXES)
            phi = rng.uniform(0.0, 180.0)
            amp = rng.uniform(*amplitude_range)
            ellipses.append((amp, a, b, x0, y0, phi))
        img = _render_ellipses(side, ellipses)
    else:
        raise ValueError(f"unknown phantom kind: {kind!r}")
    return Image2D(side, img.astype(np.complex128))
