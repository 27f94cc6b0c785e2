"""Sparse recovery from partial Fourier data.

``solve_p1`` minimizes the l1 norm subject to matching the observed Fourier
coefficients, by projected gradient descent on a smoothed modulus
sum_t sqrt(|g(t)|^2 + eps^2) whose smoothing eps is annealed geometrically.
Each iteration takes one gradient step and re-projects onto the data-matching
affine set with two FFTs; a step is only accepted if it does not increase the
current smoothed objective (the step is halved otherwise), so the objective
trace is non-increasing by construction.

``solve_p0`` is the combinatorial reference: it enumerates candidate supports
by increasing size and returns the sparsest signal consistent with the data,
together with a uniqueness verdict.  Exponential cost restricts it to small
lengths; it exists as ground truth for the convex solver.

``least_squares_known_support`` recovers a signal from its observed
coefficients when the support is already known, via guarded normal equations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import IllConditionedError, UnsupportedSizeError
from .signals import IndexSet, Signal1D
from .spectral import PartialFourierOp, restricted_matrix

__all__ = [
    "SolveConfig",
    "RecoveryResult",
    "solve_p1",
    "solve_p0",
    "least_squares_known_support",
    "P0_RESIDUAL_TOL",
    "P0_UNIQUENESS_TOL",
]

ANNEAL_STAGES = 20
STALL_WINDOW = 1000
STALL_REL_CHANGE = 1e-12
MAX_STEP_HALVINGS = 30

P0_RESIDUAL_TOL = 1e-8
P0_UNIQUENESS_TOL = 1e-8
P0_MAX_LENGTH = 24

LSQ_CONDITION_RTOL = 1e-10


@dataclass(frozen=True)
class SolveConfig:
    """Knobs for the projected-gradient l1 solver.

    ``step_size=None`` resolves to 0.2 / n at solve time.  The smoothing eps
    decays geometrically from ``smoothing_eps_start`` to ``smoothing_eps_end``
    across 20 stages, advancing every max_iters / 20 iterations or as soon as
    the iterate stalls within a stage.
    """

    max_iters: int = 200_000
    step_size: float | None = None
    smoothing_eps_start: float = 1e-1
    smoothing_eps_end: float = 1e-8
    success_tol: float = 1e-4

    def __post_init__(self):
        if self.max_iters <= 0:
            raise ValueError("max_iters must be positive")
        if self.step_size is not None and self.step_size <= 0:
            raise ValueError("step_size must be positive")
        if not 0 < self.smoothing_eps_end < self.smoothing_eps_start:
            raise ValueError("need 0 < smoothing_eps_end < smoothing_eps_start")
        if self.success_tol <= 0:
            raise ValueError("success_tol must be positive")

    def resolved_step(self, n: int) -> float:
        return self.step_size if self.step_size is not None else 0.2 / n


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of one solve.

    ``rel_l2_error`` and ``exact`` are filled only when a ground truth was
    supplied; ``exact`` means the relative l2 error is at most the configured
    success tolerance.  ``objective_trace`` carries the per-iteration smoothed
    objective when tracking was requested.
    """

    reconstruction: Signal1D
    iterations_used: int
    rel_l2_error: float | None = None
    exact: bool | None = None
    objective_trace: np.ndarray | None = field(default=None, compare=False)


def _relative_error(candidate: np.ndarray, truth: np.ndarray) -> float:
    denom = float(np.linalg.norm(truth))
    diff = float(np.linalg.norm(candidate - truth))
    if denom == 0.0:
        return 0.0 if diff == 0.0 else float("inf")
    return diff / denom


def solve_p1(
    op: PartialFourierOp,
    data: np.ndarray,
    cfg: SolveConfig | None = None,
    ground_truth: Signal1D | None = None,
    track_objective: bool = False,
) -> RecoveryResult:
    """Minimize the l1 norm subject to matching the observed coefficients.

    Starts from the minimum-energy signal (unobserved spectrum zero-filled)
    and iterates  g <- project(g - eta * grad smoothed-l1(g)).  The returned
    signal always satisfies the data constraint to round-off because the last
    accepted operation is a projection.
    """
    cfg = cfg or SolveConfig()
    if len(op.omega) < 1:
        raise ValueError("at least one observed frequency is required")
    data = np.asarray(data, dtype=np.complex128)
    if data.shape != (len(op.omega),):
        raise ValueError(f"expected {len(op.omega)} observations, got {data.shape}")
    if not np.all(np.isfinite(data.view(np.float64))):
        raise ValueError("observed data contains non-finite values")

    n = op.n
    idx = op.omega.indices
    eta0 = cfg.resolved_step(n)

    # Minimum-energy start: zero-filled spectrum.
    spectrum = np.zeros(n, dtype=np.complex128)
    spectrum[idx] = data
    g = np.fft.ifft(spectrum)

    stage_len = max(1, cfg.max_iters // ANNEAL_STAGES)
    ratio = (cfg.smoothing_eps_end / cfg.smoothing_eps_start) ** (
        1.0 / (ANNEAL_STAGES - 1)
    )
    eps_of = lambda stage: cfg.smoothing_eps_start * ratio**stage  # noqa: E731

    stage = 0
    eps2 = eps_of(stage) ** 2
    m = np.sqrt(g.real**2 + g.imag**2 + eps2)
    obj = float(m.sum())

    trace = [obj] if track_objective else None
    stall = 0
    iters = 0
    # Accepted steps warm-start the next iteration's trial step (recovering
    # geometrically toward the configured base) so rejected probes stay rare.
    eta_warm = eta0

    while iters < cfg.max_iters:
        # Scheduled annealing: the stage also advances on iteration count.
        scheduled = min(iters // stage_len, ANNEAL_STAGES - 1)
        if scheduled > stage:
            stage = scheduled
            eps2 = eps_of(stage) ** 2
            m = np.sqrt(g.real**2 + g.imag**2 + eps2)
            obj = float(m.sum())

        eta = min(eta0, 2.0 * eta_warm)
        accepted = False
        for _ in range(MAX_STEP_HALVINGS):
            y = g * (1.0 - eta / m)
            spectrum = np.fft.fft(y)
            spectrum[idx] = data
            gn = np.fft.ifft(spectrum)
            mn = np.sqrt(gn.real**2 + gn.imag**2 + eps2)
            objn = float(mn.sum())
            if objn <= obj:
                accepted = True
                break
            eta *= 0.5
        iters += 1

        if accepted:
            eta_warm = eta
            diff = gn - g
            change2 = float(np.vdot(diff, diff).real)
            g, m, obj = gn, mn, objn
            scale2 = max(float(np.vdot(g, g).real), 1e-300)
            if change2 <= STALL_REL_CHANGE**2 * scale2:
                stall += 1
            else:
                stall = 0
        else:
            # The sweep is deterministic, so retrying cannot help: the stage
            # has converged as far as this step rule can take it.
            stall = STALL_WINDOW

        if trace is not None:
            trace.append(obj)

        if stall >= STALL_WINDOW:
            if stage >= ANNEAL_STAGES - 1:
                break
            stage += 1
            eps2 = eps_of(stage) ** 2
            m = np.sqrt(g.real**2 + g.imag**2 + eps2)
            obj = float(m.sum())
            stall = 0
            eta_warm = eta0

    rel = exact = None
    if ground_truth is not None:
        rel = _relative_error(g, ground_truth.values)
        exact = rel <= cfg.success_tol
    return RecoveryResult(
        reconstruction=Signal1D(n, g),
        iterations_used=iters,
        rel_l2_error=rel,
        exact=exact,
        objective_trace=np.asarray(trace) if trace is not None else None,
    )


def solve_p0(
    op: PartialFourierOp, data: np.ndarray, max_support: int
) -> tuple[Signal1D, int, bool]:
    """Sparsest signal consistent with the observed coefficients.

    Enumerates supports by increasing size; the first size admitting a fit
    with residual below ``P0_RESIDUAL_TOL`` is the l0 optimum.  ``unique`` is
    True when exactly one support of that size fits (solutions closer than
    ``P0_UNIQUENESS_TOL`` in sup norm are identified) and every fit has full
    column rank.

    Cost grows combinatorially; lengths above 24 are refused.
    """
    n = op.n
    if n > P0_MAX_LENGTH:
        raise UnsupportedSizeError(
            f"exhaustive support search is limited to n <= {P0_MAX_LENGTH}, got {n}"
        )
    if not 0 <= max_support <= n:
        raise ValueError(f"max_support must be in [0, {n}], got {max_support}")
    data = np.asarray(data, dtype=np.complex128)
    if data.shape != (len(op.omega),):
        raise ValueError(f"expected {len(op.omega)} observations, got {data.shape}")

    full = restricted_matrix(IndexSet.full(n), op.omega).entries

    if float(np.linalg.norm(data)) < P0_RESIDUAL_TOL:
        return Signal1D.zeros(n), 0, True

    for size in range(1, max_support + 1):
        feasible: list[tuple[np.ndarray, bool]] = []
        for support in itertools.combinations(range(n), size):
            cols = full[:, support]
            x, _, rank, _ = np.linalg.lstsq(cols, data, rcond=None)
            residual = float(np.linalg.norm(cols @ x - data))
            if residual < P0_RESIDUAL_TOL:
                padded = np.zeros(n, dtype=np.complex128)
                padded[list(support)] = x
                feasible.append((padded, rank == size))
        if feasible:
            solution, full_rank = feasible[0]
            unique = full_rank and all(fr for _, fr in feasible[1:])
            if unique:
                for other, _ in feasible[1:]:
                    if float(np.max(np.abs(other - solution))) > P0_UNIQUENESS_TOL:
                        unique = False
                        break
            return Signal1D(n, solution), size, unique

    raise RuntimeError(
        f"no support of size <= {max_support} reproduces the data "
        f"(residual tolerance {P0_RESIDUAL_TOL})"
    )


def least_squares_known_support(
    t_set: IndexSet, omega: IndexSet, data: np.ndarray
) -> Signal1D:
    """Least-squares fit on a known support, zero elsewhere.

    Solves the normal equations (F* F) x = F* data for the restricted minor
    F, refusing numerically singular systems (relative singular-value cutoff
    ``LSQ_CONDITION_RTOL``), which signals an unstable inversion.
    """
    if len(t_set) < 1:
        raise ValueError("support must be nonempty")
    if len(omega) < len(t_set):
        raise ValueError(
            f"need at least as many observations as unknowns "
            f"({len(omega)} < {len(t_set)})"
        )
    data = np.asarray(data, dtype=np.complex128)
    if data.shape != (len(omega),):
        raise ValueError(f"expected {len(omega)} observations, got {data.shape}")

    f_mat = restricted_matrix(t_set, omega).entries
    sv = np.linalg.svd(f_mat, compute_uv=False)
    if sv[-1] <= LSQ_CONDITION_RTOL * sv[0]:
        raise IllConditionedError(
            "restricted Fourier minor is numerically singular "
            f"(sigma_min/sigma_max = {float(sv[-1]) / max(float(sv[0]), 1e-300):.3e})"
        )
    gram = f_mat.conj().T @ f_mat
    x = np.linalg.solve(gram, f_mat.conj().T @ data)
    values = np.zeros(t_set.n, dtype=np.complex128)
    values[t_set.indices] = x
    return Signal1D(t_set.n, values)
