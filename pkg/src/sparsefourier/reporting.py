"""Byte-stable delimited and raster output.

CSV layout: header ``omega_size,ratio,trials,successes,rate``, one row per
grid cell, LF line endings, ``.`` decimal separator; ratios print with up to
six significant digits and rates with six decimal places, so reruns with the
same seed are byte-identical regardless of parallelism.

PGM output is binary P5 with maxval 255.  Values are min-max normalized; the
applied affine mapping is recorded in a ``<name>.pgm.txt`` sidecar so the
raster remains quantitatively interpretable.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .bench import PhaseGrid
from .signals import Image2D

__all__ = ["write_csv", "write_pgm"]


def _fmt_ratio(value: float) -> str:
    return f"{value:.6g}"


def write_csv(grid: PhaseGrid, path: str | Path) -> Path:
    """One row per (omega size, ratio) cell; returns the written path."""
    path = Path(path)
    lines = ["omega_size,ratio,trials,successes,rate"]
    for i, omega_size in enumerate(grid.omega_sizes):
        for j, ratio in enumerate(grid.ratio_bins):
            successes = int(grid.success_counts[i, j])
            rate = successes / grid.trials_per_cell
            lines.append(
                f"{omega_size},{_fmt_ratio(ratio)},{grid.trials_per_cell},"
                f"{successes},{rate:.6f}"
            )
    path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    return path


def write_pgm(img: Image2D | np.ndarray, path: str | Path) -> Path:
    """Binary P5 with min-max normalization; mapping goes to a sidecar file.

    Complex input is reduced to its real part (imaginary content of the
    reconstructions is round-off).  A constant image maps to all zeros.
    """
    path = Path(path)
    values = img.values if isinstance(img, Image2D) else np.asarray(img)
    data = np.real(values).astype(np.float64)
    if data.ndim != 2:
        raise ValueError("PGM output needs a 2D array")
    vmin = float(data.min())
    vmax = float(data.max())
    if vmax > vmin:
        scaled = np.round((data - vmin) * (255.0 / (vmax - vmin)))
    else:
        scaled = np.zeros_like(data)
    raster = scaled.astype(np.uint8)

    height, width = raster.shape
    header = f"P5\n{width} {height}\n255\n".encode("ascii")
    path.write_bytes(header + raster.tobytes())

    sidecar = path.with_name(path.name + ".txt")
    sidecar.write_text(
        "pixel = round((value - vmin) * 255 / (vmax - vmin)); real part of data\n"
        f"vmin = {vmin!r}\nvmax = {vmax!r}\n",
        encoding="ascii",
    )
    return path
