import math

import numpy as np
import pytest

from sparsefourier.rng import Rng
from sparsefourier.sampling import bernoulli_omega, star_mask, uniform_omega


class TestBernoulli:
    def test_mean_size_matches_binomial(self):
        n, tau, draws = 512, 0.125, 10_000
        rng = Rng(101)
        sizes = np.array([len(bernoulli_omega(n, tau, rng)) for _ in range(draws)])
        mean = tau * n
        sigma = math.sqrt(n * tau * (1 - tau))
        assert abs(sizes.mean() - mean) < 3 * sigma / math.sqrt(draws)
        assert abs(sizes.var() - sigma**2) < 0.1 * sigma**2

    def test_deterministic_for_fixed_seed(self):
        a = bernoulli_omega(20, 0.5, Rng(7))
        b = bernoulli_omega(20, 0.5, Rng(7))
        assert np.array_equal(a.indices, b.indices)

    def test_invalid_rate_rejected(self):
        for tau in (0.0, 1.0, -0.1, 1.5):
            with pytest.raises(ValueError):
                bernoulli_omega(10, tau, Rng(0))

    def test_small_size_tail_is_below_the_deviation_bound(self):
        # P(|Omega| < (1 - eps_M) tau N) <= N^-M with
        # eps_M = sqrt(2 M log N / (tau N)), checked by Monte Carlo at M = 1
        n, tau, m_exp, draws = 512, 0.25, 1.0, 4000
        eps = math.sqrt(2 * m_exp * math.log(n) / (tau * n))
        threshold = (1 - eps) * tau * n
        rng = Rng(55)
        hits = sum(len(bernoulli_omega(n, tau, rng)) < threshold for _ in range(draws))
        assert hits / draws <= n**-m_exp


class TestUniform:
    def test_exact_sizes(self):
        rng = Rng(1)
        assert len(uniform_omega(10, 10, rng)) == 10
        assert len(uniform_omega(10, 0, rng)) == 0
        for _ in range(50):
            assert len(uniform_omega(512, 64, rng)) == 64

    def test_oversized_request_rejected(self):
        with pytest.raises(ValueError):
            uniform_omega(5, 6, Rng(0))


class TestStarMask:
    def test_two_lines_are_exactly_the_axes(self):
        side = 16
        mask = star_mask(side, 2)
        axes = {k for k in range(side)} | {side * k for k in range(side)}
        assert set(mask.indices.indices.tolist()) == axes

    def test_single_axis_line_is_row_zero(self):
        mask = star_mask(8, 1)
        assert mask.indices.indices.tolist() == list(range(8))

    def test_density_at_full_scale(self):
        mask = star_mask(512, 22)
        frac = len(mask.indices) / 512**2
        assert 0.02 <= frac <= 0.05

    def test_dc_always_included(self):
        for lines in (1, 3, 22):
            assert 0 in star_mask(32, lines).indices

    def test_negation_symmetry(self):
        for side, lines in ((64, 1), (64, 2), (64, 4), (64, 22), (32, 7)):
            idx = star_mask(side, lines).indices.indices
            w1, w2 = idx // side, idx % side
            negated = np.sort(((-w1) % side) * side + ((-w2) % side))
            assert np.array_equal(negated, idx), (side, lines)

    def test_invalid_sizes_rejected(self):
        with pytest.raises(ValueError):
            star_mask(4, 2)
        with pytest.raises(ValueError):
            star_mask(16, 0)
