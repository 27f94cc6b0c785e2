"""Set-partition combinatorics behind the random-matrix moment bounds.

The operator norm of the zero-diagonal kernel matrix H0 built from a random
Bernoulli frequency set is controlled through E[Tr(H0^(2n))].  Expanding the
trace over index tuples and grouping frequency tuples by their coincidence
pattern turns that expectation into a sum over set partitions, with one
polynomial factor per block:

    E[Tr(H0^(2n))] = sum over partitions ~ of {1..2n}
                     sum over t in T^(2n), t_j != t_(j+1) cyclically,
                         with block sums t_A' = 0 (mod N) for every block
                     N^(#blocks) * prod over blocks Phi_(block size)(tau)

where Phi_m is a signed variant of the Stirling-weighted polynomial

    F_m(tau) = sum_(k=1..m) (k-1)! S(m,k) (-1)^(m-k) tau^k.

This module provides: exact Stirling and no-singleton partition tables, the
F polynomials with their closed-form bound, the inclusion-exclusion identity
checker, the trace expectation both by the partition formula and by exact
enumeration over all frequency subsets (the independent oracle), the moment
bound with its convexity machinery, and the calculators for the theory's
tuning constants.

Sign conventions: evaluating the partition formula with Phi_m = F_m yields a
negative value for the manifestly non-negative E[Tr(H0^2)]; the per-block
factor consistent with the inclusion-exclusion identity is
Phi_m = (-1)^(m+1) F_m, which reproduces the enumeration oracle exactly.
Both conventions are exposed (``corrected`` is the default); every magnitude
bound is identical under either since |Phi_m| = |F_m|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import UnsupportedSizeError, VacuousRegimeError
from .rng import Rng
from .signals import IndexSet

__all__ = [
    "PHI",
    "PartitionTables",
    "set_partitions",
    "stirling",
    "no_singleton_count",
    "bell_number",
    "f_tau",
    "f_tau_series",
    "f_tau_bound",
    "inclusion_exclusion_check",
    "expected_trace_formula",
    "expected_trace_enumeration",
    "MomentBoundInputs",
    "MomentBoundResult",
    "moment_bound",
    "n_small_holds",
    "log_ineq_holds",
    "TheoremParams",
    "theorem_params",
    "convexity_check_f_k",
    "f_k_profile",
]

PHI = (1.0 + math.sqrt(5.0)) / 2.0

FORMULA_MAX_SUPPORT = 8
FORMULA_MAX_POWER = 3
ENUMERATION_MAX_AMBIENT = 14
INCLUSION_MAX_SIZE = 4


# -- partition tables ---------------------------------------------------------


class PartitionTables:
    """Exact tables of S(n, k) and of no-singleton partition counts P(n, k).

    S obeys S(n+1, k) = S(n, k-1) + k S(n, k).  P splits by what a marked
    element does: it either joins one of the k existing blocks (each already
    of size >= 2) or pairs up with one of the other n-1 elements, giving
    P(n, k) = k P(n-1, k) + (n-1) P(n-2, k-1).  (Stating the first term
    without the factor k undercounts: it would give P(5, 2) = 7 where direct
    enumeration of the ten 3+2 splits gives 10.)  Entries are Python
    integers, so the tables never overflow.
    """

    def __init__(self, max_n: int):
        if max_n < 0:
            raise ValueError("max_n must be non-negative")
        self.max_n = max_n
        s = [[0] * (max_n + 1) for _ in range(max_n + 1)]
        s[0][0] = 1
        for n in range(max_n):
            for k in range(n + 2):
                prev = s[n][k - 1] if k >= 1 else 0
                s[n + 1][k] = prev + k * s[n][k]
        self._stirling = s

        p = [[0] * (max_n + 1) for _ in range(max_n + 1)]
        p[0][0] = 1
        for n in range(1, max_n + 1):
            for k in range(max_n + 1):
                val = k * p[n - 1][k]
                if n >= 2 and k >= 1:
                    val += (n - 1) * p[n - 2][k - 1]
                p[n][k] = val
        self._no_singleton = p

    def stirling(self, n: int, k: int) -> int:
        if not (0 <= k <= n <= self.max_n):
            raise ValueError(f"need 0 <= k <= n <= {self.max_n}, got ({n}, {k})")
        return self._stirling[n][k]

    def no_singleton(self, n: int, k: int) -> int:
        if not (0 <= n <= self.max_n and 0 <= k <= self.max_n):
            raise ValueError(f"need 0 <= n, k <= {self.max_n}, got ({n}, {k})")
        return self._no_singleton[n][k]

    def bell(self, n: int) -> int:
        return sum(self._stirling[n])


@lru_cache(maxsize=None)
def _tables(max_n: int) -> PartitionTables:
    return PartitionTables(max_n)


def stirling(n: int, k: int) -> int:
    """Number of partitions of an n-set into exactly k blocks."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be non-negative")
    if k > n:
        return 0
    return _tables(max(n, 8)).stirling(n, k)


def no_singleton_count(n: int, k: int) -> int:
    """Number of partitions of an n-set into k blocks, none of size one."""
    if n < 0 or k < 0:
        raise ValueError("arguments must be non-negative")
    return _tables(max(n, k, 8)).no_singleton(n, k)


def bell_number(n: int) -> int:
    return _tables(max(n, 8)).bell(n)


def set_partitions(n: int) -> Iterator[list[list[int]]]:
    """All partitions of {0, ..., n-1} as lists of blocks.

    Generated by inserting element i into each block of a partition of the
    first i elements, or starting a new block.
    """
    if n == 0:
        yield []
        return

    def extend(i: int, blocks: list[list[int]]) -> Iterator[list[list[int]]]:
        if i == n:
            yield [list(b) for b in blocks]
            return
        for b in blocks:
            b.append(i)
            yield from extend(i + 1, blocks)
            b.pop()
        blocks.append([i])
        yield from extend(i + 1, blocks)
        blocks.pop()

    yield from extend(1, [[0]])


# -- the F polynomials --------------------------------------------------------


def f_tau(n: int, tau: float) -> float:
    """F_n(tau) = sum_(k=1..n) (k-1)! S(n,k) (-1)^(n-k) tau^k.

    F_1 = tau, F_2 = -tau + tau^2, F_3 = tau - 3 tau^2 + 2 tau^3, ...
    Requires 0 <= tau < 1/2 (the equivalent infinite-series form diverges
    beyond that).
    """
    if n < 1:
        raise ValueError("polynomial index must be at least 1")
    if not 0.0 <= tau < 0.5:
        raise ValueError(f"tau must lie in [0, 1/2), got {tau}")
    tables = _tables(max(n, 8))
    terms = [
        math.factorial(k - 1) * tables.stirling(n, k) * (-1) ** (n - k) * tau**k
        for k in range(1, n + 1)
    ]
    return math.fsum(terms)


def f_tau_series(n: int, tau: float, terms: int = 200) -> float:
    """Equivalent series form sum_(k>=1) (-1)^(n+k) tau^k k^(n-1) / (1-tau)^k."""
    if n < 1:
        raise ValueError("polynomial index must be at least 1")
    if not 0.0 <= tau < 0.5:
        raise ValueError(f"tau must lie in [0, 1/2), got {tau}")
    u = tau / (1.0 - tau)
    return math.fsum(
        (-1.0) ** ((n + k) % 2) * u**k * float(k) ** (n - 1)
        for k in range(1, terms + 1)
    )


def _g_bound(n: int, u: float) -> float:
    """G_u(n): the closed-form majorant of |F_n| as a function of n, u = tau/(1-tau)."""
    if math.log(u) <= 1.0 - n:
        return u
    return math.exp((n - 1) * (math.log(n - 1) - math.log(math.log(1.0 / u)) - 1.0))


def f_tau_bound(n: int, tau: float) -> float:
    """Closed-form upper bound on |F_n(tau)|.

    Equals tau/(1-tau) while that ratio is at most e^(1-n) (the alternating
    series is then dominated by its first term), and otherwise the maximum of
    the series' term profile, exp((n-1)(log(n-1) - log log((1-tau)/tau) - 1)).
    """
    if n < 1:
        raise ValueError("polynomial index must be at least 1")
    if not 0.0 < tau < 0.5:
        raise ValueError(f"tau must lie in (0, 1/2), got {tau}")
    return _g_bound(n, tau / (1.0 - tau))


# -- inclusion-exclusion over coincidence patterns ----------------------------


def _pattern(word: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    """Partition of positions induced by value coincidences in ``word``."""
    groups: dict[int, list[int]] = {}
    for pos, val in enumerate(word):
        groups.setdefault(val, []).append(pos)
    return tuple(tuple(g) for g in sorted(groups.values()))


def _is_coarsening(coarse: list[list[int]], fine: list[list[int]]) -> bool:
    """True when every block of ``fine`` lies inside one block of ``coarse``."""
    owner = {}
    for bi, block in enumerate(coarse):
        for x in block:
            owner[x] = bi
    return all(len({owner[x] for x in block}) == 1 for block in fine)


def inclusion_exclusion_check(
    set_size: int, ground_size: int, rng: Rng | None = None
) -> bool:
    """Verify the partition inclusion-exclusion identity on a generic function.

    For every partition ~ of A = {1..set_size} and a random complex function
    f on G^A (|G| = ground_size), compares

        sum over words with coincidence pattern exactly ~  of f

    against the signed combination over coarser partitions ~1 of the
    unconstrained sums over words constant on each ~1 block:

        sum_(~1 coarser than ~) (-1)^(#~ - #~1)
            prod over blocks A' of ~1 of (number of ~-blocks in A' - 1)!
            sum over words constant on blocks of ~1  of f.

    Returns True when every partition matches to 1e-9.
    """
    if set_size > INCLUSION_MAX_SIZE or ground_size > INCLUSION_MAX_SIZE:
        raise UnsupportedSizeError(
            f"identity check enumerates G^A exactly; sizes are capped at "
            f"{INCLUSION_MAX_SIZE}"
        )
    if set_size < 1 or ground_size < 1:
        raise ValueError("sizes must be at least 1")
    rng = rng or Rng(0x1EC)
    words = list(np.ndindex(*([ground_size] * set_size)))
    values = {
        w: complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for w in words
    }

    parts = list(set_partitions(set_size))

    def pattern_key(blocks) -> tuple[tuple[int, ...], ...]:
        return tuple(sorted(tuple(sorted(b)) for b in blocks))

    def sum_exact(target: list[list[int]]) -> complex:
        tgt = pattern_key(target)
        return sum(
            v for w, v in values.items() if pattern_key(_pattern(w)) == tgt
        )

    def sum_constant_on(blocks: list[list[int]]) -> complex:
        total = 0j
        for w, v in values.items():
            if all(len({w[x] for x in block}) == 1 for block in blocks):
                total += v
        return total

    worst = 0.0
    for fine in parts:
        lhs = sum_exact(fine)
        rhs = 0j
        for coarse in parts:
            if not _is_coarsening(coarse, fine):
                continue
            sign = (-1) ** (len(fine) - len(coarse))
            weight = 1
            owner = {x: bi for bi, blk in enumerate(coarse) for x in blk}
            for bi, blk in enumerate(coarse):
                inner = len({tuple(sorted(f)) for f in fine if owner[f[0]] == bi})
                weight *= math.factorial(inner - 1)
            rhs += sign * weight * sum_constant_on(coarse)
        worst = max(worst, abs(lhs - rhs))
    return worst < 1e-9


# -- expected trace of H0^(2n) ------------------------------------------------


def _phi_factor(block_size: int, tau: float, sign_convention: str) -> float:
    base = f_tau(block_size, tau)
    if sign_convention == "uncorrected":
        return base
    if sign_convention == "corrected":
        return (-1.0) ** (block_size + 1) * base
    raise ValueError(f"unknown sign convention: {sign_convention!r}")


def _cyclic_tuples(values: np.ndarray, length: int) -> np.ndarray:
    """All tuples from ``values`` of the given length with no equal cyclic neighbors."""
    grids = np.meshgrid(*([values] * length), indexing="ij")
    tuples = np.stack([g.reshape(-1) for g in grids], axis=1)
    ok = np.ones(len(tuples), dtype=bool)
    for j in range(length):
        ok &= tuples[:, j] != tuples[:, (j + 1) % length]
    return tuples[ok]


def expected_trace_formula(
    n_ambient: int,
    t_set: IndexSet,
    tau: float,
    n: int,
    sign_convention: str = "corrected",
) -> float:
    """E[Tr(H0^(2n))] by the partition formula.

    Enumerates partitions of 2n positions and index tuples t in T^(2n) with
    t_j != t_(j+1) cyclically, counting tuples whose block sums
    sum_(a in block) (t_a - t_(a+1)) vanish modulo N, each partition weighted
    by N^(#blocks) times the product of per-block Phi factors.
    """
    if t_set.n != n_ambient:
        raise ValueError("support set does not live in the stated ambient size")
    if len(t_set) > FORMULA_MAX_SUPPORT:
        raise UnsupportedSizeError(
            f"partition formula is capped at |T| <= {FORMULA_MAX_SUPPORT}"
        )
    if not 1 <= n <= FORMULA_MAX_POWER:
        raise UnsupportedSizeError(
            f"partition formula is capped at n <= {FORMULA_MAX_POWER}"
        )
    if not 0.0 <= tau < 0.5:
        raise ValueError(f"tau must lie in [0, 1/2), got {tau}")
    if len(t_set) < 2:
        return 0.0  # no tuple can avoid equal cyclic neighbors

    two_n = 2 * n
    tuples = _cyclic_tuples(t_set.indices, two_n)
    if len(tuples) == 0:
        return 0.0
    diffs = tuples - np.roll(tuples, -1, axis=1)

    total = 0.0
    for blocks in set_partitions(two_n):
        if any(len(b) < 2 for b in blocks):
            continue  # singleton blocks force t_a = t_(a+1)
        weight = float(n_ambient) ** len(blocks)
        for b in blocks:
            weight *= _phi_factor(len(b), tau, sign_convention)
        match = np.ones(len(diffs), dtype=bool)
        for b in blocks:
            match &= diffs[:, b].sum(axis=1) % n_ambient == 0
        total += weight * int(match.sum())
    return total


def expected_trace_enumeration(
    n_ambient: int, t_set: IndexSet, tau: float, n: int
) -> float:
    """E[Tr(H0^(2n))] by exact enumeration over all 2^N frequency subsets.

    The independent oracle: builds H0 for every subset Omega and averages
    Tr(H0^(2n)) = ||H0^n||_F^2 under the Bernoulli weights
    tau^|Omega| (1-tau)^(N-|Omega|).  Exponential in N, hence the cap.
    """
    if t_set.n != n_ambient:
        raise ValueError("support set does not live in the stated ambient size")
    if n_ambient > ENUMERATION_MAX_AMBIENT:
        raise UnsupportedSizeError(
            f"subset enumeration is capped at N <= {ENUMERATION_MAX_AMBIENT}"
        )
    if n < 1:
        raise ValueError("power must be at least 1")
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")

    t = t_set.indices
    size = len(t)
    if size < 2:
        return 0.0
    diffs = (t[:, np.newaxis] - t[np.newaxis, :]) % n_ambient
    # c(u) per frequency k: rows of the character table.
    chars = np.exp(
        2j * np.pi * np.outer(np.arange(n_ambient), np.arange(n_ambient)) / n_ambient
    )
    total = 0.0
    for bits in range(1 << n_ambient):
        members = [k for k in range(n_ambient) if bits >> k & 1]
        weight = tau ** len(members) * (1.0 - tau) ** (n_ambient - len(members))
        if weight == 0.0:
            continue
        c = chars[members].sum(axis=0) if members else np.zeros(n_ambient, complex)
        h0 = -c[diffs]
        np.fill_diagonal(h0, 0.0)
        hn = np.linalg.matrix_power(h0, n)
        total += weight * float(np.linalg.norm(hn) ** 2)
    return total


# -- the moment bound ---------------------------------------------------------


@dataclass(frozen=True)
class MomentBoundInputs:
    """Parameters of the 2n-th trace moment bound."""

    n: int
    tau: float
    t_size: int
    n_ambient: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("moment order n must be at least 1")
        if not 0.0 < self.tau < 0.5:
            raise ValueError(f"tau must lie in (0, 1/2), got {self.tau}")
        if self.t_size < 1 or self.n_ambient < 1:
            raise ValueError("sizes must be positive")

    @property
    def c_tau(self) -> float:
        return math.e * math.log((1.0 - self.tau) / self.tau)

    @property
    def gamma_sq(self) -> float:
        return 2.0 * PHI**2 / (1.0 - self.tau)


@dataclass(frozen=True)
class MomentBoundResult:
    a_n: float
    b_n: float
    bound: float
    simplified: float | None  # 2 e^-n gamma^2n n^(n+1) (tau N)^n |T|^(n+1)


def _log_a_n(inp: MomentBoundInputs) -> float:
    n = inp.n
    return (
        2 * n * math.log(2 * n - 1)
        - (2 * n - 1) * math.log(inp.c_tau)
        + math.log(inp.n_ambient)
        + 2 * n * math.log(inp.t_size)
    )


def _log_b_n(inp: MomentBoundInputs) -> float:
    n = inp.n
    log_dfact = math.lgamma(2 * n + 1) - math.lgamma(n + 1) - n * math.log(2.0)
    return (
        log_dfact
        + n * math.log(inp.tau / (1.0 - inp.tau))
        + n * math.log(inp.n_ambient)
        + (n + 1) * math.log(inp.t_size)
    )


def n_small_holds(inp: MomentBoundInputs) -> bool:
    """Whether a_n is dominated by the simplified-bound threshold.

    Tests  a_n <= 2^(n+1) e^-n n^n (tau/(1-tau))^n N^n |T|^n  in log space.
    """
    n = inp.n
    rhs = (
        (n + 1) * math.log(2.0)
        - n
        + n * math.log(n)
        + n * math.log(inp.tau / (1.0 - inp.tau))
        + n * math.log(inp.n_ambient)
        + n * math.log(inp.t_size)
    )
    return _log_a_n(inp) <= rhs


def moment_bound(inp: MomentBoundInputs) -> MomentBoundResult:
    """The 2n-th moment bound  E[Tr(H0^(2n))] <= n phi^(2n) max(a_n, b_n).

    a_n = (2n-1)^(2n) c_tau^-(2n-1) N |T|^(2n) and
    b_n = (2n)!/(n! 2^n) (tau/(1-tau))^n N^n |T|^(n+1); the simplified value
    2 e^-n gamma^(2n) n^(n+1) (tau N)^n |T|^(n+1) is returned when the
    a_n-domination gate holds (None otherwise).  Values that overflow a
    double come back as inf; the log-space gate never overflows.
    """
    log_a = _log_a_n(inp)
    log_b = _log_b_n(inp)
    n = inp.n
    log_bound = math.log(n) + 2 * n * math.log(PHI) + max(log_a, log_b)

    def safe_exp(x: float) -> float:
        return math.exp(x) if x < 700.0 else float("inf")

    simplified = None
    if n_small_holds(inp):
        log_simpl = (
            math.log(2.0)
            - n
            + n * math.log(inp.gamma_sq)
            + (n + 1) * math.log(n)
            + n * math.log(inp.tau * inp.n_ambient)
            + (n + 1) * math.log(inp.t_size)
        )
        simplified = safe_exp(log_simpl)
    return MomentBoundResult(
        a_n=safe_exp(log_a),
        b_n=safe_exp(log_b),
        bound=safe_exp(log_bound),
        simplified=simplified,
    )


def log_ineq_holds(tau: float, n: int, alpha: float = 1.0) -> bool:
    """The numeric inequality gating the simplified moment bound.

    Checks  (n-1) log r + log n + 1/(2n) <= log s  with
    r = (1-tau)^3 / (e alpha^2 phi^2 log^2((1-tau)/tau)) and
    s = tau/(1-tau) * e log((1-tau)/tau).
    """
    if not 0.0 < tau < 0.5:
        raise ValueError(f"tau must lie in (0, 1/2), got {tau}")
    if n < 1:
        raise ValueError("n must be at least 1")
    log_ratio = math.log((1.0 - tau) / tau)
    r = (1.0 - tau) ** 3 / (math.e * alpha**2 * PHI**2 * log_ratio**2)
    s = tau / (1.0 - tau) * math.e * log_ratio
    return (n - 1) * math.log(r) + math.log(n) + 1.0 / (2 * n) <= math.log(s)


# -- theory parameter calculators ---------------------------------------------


@dataclass(frozen=True)
class TheoremParams:
    """Tuning constants for a target failure exponent M."""

    alpha_m: float
    eps_m: float
    n_iter: int
    support_cap: int


def theorem_params(m: float, n_ambient: int, tau: float) -> TheoremParams:
    """Constants of the recovery guarantee at failure probability O(N^-M).

    alpha(M) = 1/(29.6 (M+1)); eps_M = sqrt(2 M log N / (tau N)); the series
    length is the nearest integer to (M+1) log N; and the certified support
    cap is floor(alpha(M) tau N / log N).  Raises when tau N <= M log N,
    where the guarantee is vacuous.
    """
    if m <= 0:
        raise ValueError("accuracy parameter M must be positive")
    if not 0.0 < tau < 1.0:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    if n_ambient < 2:
        raise ValueError("ambient size must be at least 2")
    log_n = math.log(n_ambient)
    tau_n = tau * n_ambient
    if tau_n <= m * log_n:
        raise VacuousRegimeError(
            f"tau N = {tau_n:.3g} must exceed M log N = {m * log_n:.3g}"
        )
    alpha_m = 1.0 / (29.6 * (m + 1.0))
    eps_m = math.sqrt(2.0 * m * log_n / tau_n)
    n_iter = round((m + 1.0) * log_n)
    support_cap = math.floor(alpha_m * tau_n / log_n)
    return TheoremParams(alpha_m, eps_m, n_iter, support_cap)


# -- discrete convexity of the dominant-block profile --------------------------


def f_k_profile(n: int, tau: float, n_ambient: int, t_size: int) -> list[float]:
    """The per-block-count profile f(k), k = 1..n, inside the trace bound.

    f(k) = N^k |T|^(2n-k) (2n-1)(2n-3)...(2n-2k+1) G(2)^(k-1) G(2n-2k+2)
    with G the closed-form majorant of |F| at u = tau/(1-tau).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 0.0 < tau < 0.5:
        raise ValueError(f"tau must lie in (0, 1/2), got {tau}")
    u = tau / (1.0 - tau)
    out = []
    for k in range(1, n + 1):
        odd_product = 1.0
        for j in range(1, k + 1):
            odd_product *= 2 * n - 2 * j + 1
        out.append(
            float(n_ambient) ** k
            * float(t_size) ** (2 * n - k)
            * odd_product
            * _g_bound(2, u) ** (k - 1)
            * _g_bound(2 * n - 2 * k + 2, u)
        )
    return out


def convexity_check_f_k(n: int, tau: float, n_ambient: int, t_size: int) -> bool:
    """Discrete convexity of f(k) on 1 <= k <= n (hence max at an endpoint)."""
    if n > 30:
        raise UnsupportedSizeError("profile check is capped at n <= 30")
    f = f_k_profile(n, tau, n_ambient, t_size)
    if len(f) < 3:
        return True
    return all(
        f[i + 1] - f[i] >= f[i] - f[i - 1] - 1e-9 * abs(f[i])
        for i in range(1, len(f) - 1)
    )
