"""Matplotlib rendering of experiment results to image files.

These sit next to the delimited output: the CSV/PGM files carry the
byte-exact numbers, the PNG figures carry the same content in a form you can
look at.  The Agg backend is forced so rendering works headless.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .bench import PhaseGrid
from .signals import Image2D

__all__ = ["save_phase_figure", "save_image_figure", "save_rate_curve"]

_KIND_TITLES = {
    "p1_recovery": "l1 recovery success rate",
    "certificate_sufficiency": "dual certificate success rate",
}


def save_phase_figure(grid: PhaseGrid, path: str | Path) -> Path:
    """Heat map of success rates over (ratio, omega size) cells."""
    path = Path(path)
    rates = grid.rates()
    fig, ax = plt.subplots(figsize=(6.0, 4.5))
    im = ax.imshow(
        rates,
        origin="lower",
        aspect="auto",
        cmap="gray",
        vmin=0.0,
        vmax=1.0,
        interpolation="nearest",
    )
    ax.set_xticks(range(len(grid.ratio_bins)))
    ax.set_xticklabels([f"{r:.3g}" for r in grid.ratio_bins], rotation=45)
    ax.set_yticks(range(len(grid.omega_sizes)))
    ax.set_yticklabels([str(v) for v in grid.omega_sizes])
    ax.set_xlabel("|T| / |Omega|")
    ax.set_ylabel("|Omega|")
    ax.set_title(f"{_KIND_TITLES.get(grid.kind, grid.kind)} (N={grid.n})")
    fig.colorbar(im, ax=ax, label="success rate")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_rate_curve(grid: PhaseGrid, omega_size: int, path: str | Path) -> Path:
    """Cross-section of a phase grid at one omega size, rate vs spike count."""
    path = Path(path)
    i = grid.omega_sizes.index(omega_size)
    rates = grid.rates()[i]
    spikes = grid.spike_counts(omega_size)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(spikes, rates, "o-")
    ax.axhline(0.5, color="gray", linestyle=":")
    ax.set_xlabel("|T|")
    ax.set_ylabel("success rate")
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(f"{_KIND_TITLES.get(grid.kind, grid.kind)}, |Omega|={omega_size}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_image_figure(
    img: Image2D | np.ndarray, path: str | Path, title: str | None = None
) -> Path:
    """Grayscale rendering of a (possibly complex) image; real part is shown."""
    path = Path(path)
    values = img.values if isinstance(img, Image2D) else np.asarray(img)
    data = np.real(values)
    fig, ax = plt.subplots(figsize=(5.0, 5.0))
    ax.imshow(data, cmap="gray", interpolation="nearest")
    ax.set_axis_off()
    if title:
        ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
