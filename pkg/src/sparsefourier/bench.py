"""Seeded Monte-Carlo experiment harnesses.

``run_phase_diagram`` estimates recovery (or certificate) success rates over
a grid of (observed-frequency count, spike-to-frequency ratio) cells.  Each
trial draws a support by sampling without replacement, fills it with complex
Gaussian amplitudes, draws the observed frequencies the same way, solves,
and scores success.  Trial i of cell c runs on the stream
``hash64(master_seed, c, i)``, so results are reproducible and independent
of worker scheduling: the same RunConfig yields identical grids whether run
inline or across a process pool.

``run_phantom`` reconstructs a piecewise-constant phantom from a radial-line
frequency mask twice: zero-filled minimum energy (the artifact-prone
baseline) and total-variation minimization.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .certificates import build_certificate_direct
from .recover import SolveConfig, solve_p1
from .rng import Rng, hash64
from .sampling import star_mask, uniform_omega
from .signals import Image2D, gen_phantom, gen_sparse_signal
from .spectral import PartialFourierOp, observe, observe_image
from .tv import TvConfig, minimum_energy_image, solve_tv_2d

__all__ = [
    "RunConfig",
    "PhaseGrid",
    "PhantomRun",
    "DEFAULT_OMEGA_SIZES",
    "DEFAULT_RATIOS",
    "run_phase_diagram",
    "run_phantom",
    "fifty_percent_crossing",
]

DEFAULT_OMEGA_SIZES = (16, 32, 64, 128)
# 8 ratio steps from 1/16 to 1/2.
DEFAULT_RATIOS = tuple(1 / 16 + j * (1 / 2 - 1 / 16) / 7 for j in range(8))


@dataclass(frozen=True)
class RunConfig:
    """Master seed, worker count, solver knobs, and output root for one run."""

    seed: int = 0
    parallelism: int = 1
    solve: SolveConfig = field(default_factory=SolveConfig)
    tv: TvConfig = field(default_factory=TvConfig)
    out_dir: str | None = None

    def __post_init__(self):
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")


@dataclass(frozen=True)
class PhaseGrid:
    """Success counts over (omega size, |T|/|Omega| ratio) cells."""

    n: int
    omega_sizes: tuple[int, ...]
    ratio_bins: tuple[float, ...]
    trials_per_cell: int
    success_counts: np.ndarray = field(compare=False)  # omega x ratio, int
    kind: str = "p1_recovery"

    def rates(self) -> np.ndarray:
        return self.success_counts / float(self.trials_per_cell)

    def spike_counts(self, omega_size: int) -> list[int]:
        return [max(1, round(r * omega_size)) for r in self.ratio_bins]


def _phase_trial(args) -> tuple[int, bool]:
    (cell, trial, seed, n, omega_size, t_size, kind, solve_cfg) = args
    rng = Rng(hash64(seed, cell, trial))
    f, t_set = gen_sparse_signal(n, t_size, rng)
    omega = uniform_omega(n, omega_size, rng)
    if kind == "certificate_sufficiency":
        signs = f.values[t_set.indices]
        signs = signs / np.abs(signs)
        report = build_certificate_direct(t_set, omega, signs)
        return cell, report.certificate_valid
    op = PartialFourierOp(n, omega)
    result = solve_p1(op, observe(op, f), solve_cfg, ground_truth=f)
    return cell, bool(result.exact)


def run_phase_diagram(
    cfg: RunConfig,
    kind: str = "p1_recovery",
    n: int = 512,
    omega_sizes: tuple[int, ...] = DEFAULT_OMEGA_SIZES,
    ratios: tuple[float, ...] = DEFAULT_RATIOS,
    trials: int = 100,
) -> PhaseGrid:
    """Monte-Carlo success-rate grid; deterministic for a given RunConfig."""
    if kind not in ("p1_recovery", "certificate_sufficiency"):
        raise ValueError(f"unknown experiment kind: {kind!r}")
    if trials < 1:
        raise ValueError("need at least one trial per cell")
    omega_sizes = tuple(int(v) for v in omega_sizes)
    ratios = tuple(float(r) for r in ratios)
    if any(v < 1 or v > n for v in omega_sizes):
        raise ValueError("omega sizes must lie in [1, n]")
    if any(not 0.0 < r <= 1.0 for r in ratios):
        raise ValueError("ratios must lie in (0, 1]")

    tasks = []
    for i, omega_size in enumerate(omega_sizes):
        for j, ratio in enumerate(ratios):
            cell = i * len(ratios) + j
            t_size = max(1, round(ratio * omega_size))
            for trial in range(trials):
                tasks.append(
                    (cell, trial, cfg.seed, n, omega_size, t_size, kind, cfg.solve)
                )

    counts = np.zeros(len(omega_sizes) * len(ratios), dtype=np.int64)
    if cfg.parallelism == 1:
        outcomes = map(_phase_trial, tasks)
        for cell, ok in outcomes:
            counts[cell] += int(ok)
    else:
        chunk = max(1, len(tasks) // (8 * cfg.parallelism))
        with ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            for cell, ok in pool.map(_phase_trial, tasks, chunksize=chunk):
                counts[cell] += int(ok)

    return PhaseGrid(
        n=n,
        omega_sizes=omega_sizes,
        ratio_bins=ratios,
        trials_per_cell=trials,
        success_counts=counts.reshape(len(omega_sizes), len(ratios)),
        kind=kind,
    )


def fifty_percent_crossing(grid: PhaseGrid, omega_size: int) -> float | None:
    """Spike count at which the success rate crosses 50%, by interpolation.

    Scans the ratio axis of the given omega row; returns the linearly
    interpolated |T| where the rate first drops through 0.5, or None when
    the row never starts above 0.5 or never drops below it.
    """
    i = grid.omega_sizes.index(omega_size)
    rates = grid.rates()[i]
    spikes = grid.spike_counts(omega_size)
    if rates[0] < 0.5:
        return None
    for j in range(len(rates) - 1):
        if rates[j] >= 0.5 > rates[j + 1]:
            slope = (rates[j + 1] - rates[j]) / (spikes[j + 1] - spikes[j])
            return spikes[j] + (0.5 - rates[j]) / slope
    return None


@dataclass(frozen=True)
class PhantomRun:
    """Ground truth with its two reconstructions and their relative errors."""

    truth: Image2D
    min_energy: Image2D
    tv_recon: Image2D
    min_energy_error: float
    tv_error: float
    mask_size: int


def run_phantom(
    cfg: RunConfig,
    phantom_kind: str,
    side: int,
    line_count: int,
    ellipse_count: int = 10,
) -> PhantomRun:
    """Star-mask phantom experiment: minimum-energy vs TV reconstruction."""
    if phantom_kind == "logan_shepp":
        truth = gen_phantom("logan_shepp", side)
    elif phantom_kind == "random_ellipses":
        truth = gen_phantom(
            "random_ellipses", side, ellipse_count, Rng(hash64(cfg.seed, 0x9e))
        )
    else:
        raise ValueError(f"unknown phantom kind: {phantom_kind!r}")

    mask = star_mask(side, line_count)
    data = observe_image(mask.indices, truth)
    baseline = minimum_energy_image(mask, data, side)
    tv_result = solve_tv_2d(mask, data, cfg.tv)

    scale = float(np.linalg.norm(truth.values))
    err = lambda img: float(np.linalg.norm(img.values - truth.values)) / scale  # noqa: E731
    return PhantomRun(
        truth=truth,
        min_energy=baseline,
        tv_recon=tv_result.image,
        min_energy_error=err(baseline),
        tv_error=err(tv_result.image),
        mask_size=len(mask.indices),
    )
