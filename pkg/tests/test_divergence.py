from __future__ import annotations

import numpy as np
import pytest
from numpy.testing import assert_allclose

from qpe import DensityMatrix, Effect
from qpe.config import ToleranceConfig
from qpe.divergence import (
    classical_max_divergence,
    effect_probability,
    max_divergence,
    order_divergence_gap,
    povm_distinguishability_lower_bound,
    renyi_divergence,
    renyi_entropy,
)
from qpe.exceptions import BadAlpha
from qpe.linalg import fidelity, random_unitary
from qpe.states import min_entropy, random_state

# log(0.7 / 0.46): the worst likelihood ratio of the stored skewed pair.
MAX_DIV_SKEWED_PAIR = 0.4198538455602639
ENTROPY_LOWER = 1.2683991415464448
ENTROPY_UPPER = 1.2794222271544065

ALPHA_GRID = (0.5, 0.999, 1.0, 1.001, 2.0, 5.0, 10.0)


def full_rank_state(n, rng):
    return random_state(n, rng=rng)


class TestRenyiEntropy:
    def test_uniform_hits_log_dim(self):
        bot = DensityMatrix.maximally_mixed(4)
        for alpha in ALPHA_GRID + (np.inf,):
            assert_allclose(renyi_entropy(bot, alpha), np.log(4.0), atol=1e-12)

    def test_pure_state_is_zero(self):
        pure = DensityMatrix.pure([1.0, 0.0, 0.0])
        for alpha in (0.5, 1.0, 2.0, np.inf):
            assert_allclose(renyi_entropy(pure, alpha), 0.0, atol=1e-12)

    def test_frozen_shannon_values(self):
        lower = DensityMatrix.from_diag(np.array([30, 29, 11, 10]) / 80)
        upper = DensityMatrix.from_diag(np.array([34, 23, 12, 11]) / 80)
        assert_allclose(renyi_entropy(lower, 1.0), ENTROPY_LOWER, atol=1e-12)
        assert_allclose(renyi_entropy(upper, 1.0), ENTROPY_UPPER, atol=1e-12)

    def test_quadratic_order_closed_form(self):
        rho = DensityMatrix.from_diag([0.7, 0.2, 0.1])
        assert_allclose(renyi_entropy(rho, 2.0),
                        -np.log(0.49 + 0.04 + 0.01), atol=1e-12)

    def test_infinite_order_is_min_entropy(self, rng):
        rho = full_rank_state(3, rng)
        assert_allclose(renyi_entropy(rho, np.inf), min_entropy(rho), atol=1e-12)

    def test_decreasing_in_alpha(self, rng):
        rho = full_rank_state(4, rng)
        values = [renyi_entropy(rho, a) for a in ALPHA_GRID]
        assert np.all(np.diff(values) <= 1e-10)

    def test_rejects_nonpositive_order(self, rng):
        with pytest.raises(BadAlpha):
            renyi_entropy(full_rank_state(2, rng), 0.0)

    def test_base_two(self):
        two = ToleranceConfig(log_base="two")
        bot = DensityMatrix.maximally_mixed(4)
        assert_allclose(renyi_entropy(bot, 1.0, two), 2.0, atol=1e-12)


class TestMaxDivergence:
    def test_frozen_skewed_pair(self):
        upper = DensityMatrix.from_diag([0.70, 0.20, 0.10])
        lower = DensityMatrix.from_diag([0.46, 0.46, 0.08])
        assert_allclose(max_divergence(upper, lower).value,
                        MAX_DIV_SKEWED_PAIR, atol=1e-12)

    def test_self_divergence_vanishes(self, rng):
        rho = full_rank_state(3, rng)
        assert_allclose(max_divergence(rho, rho).value, 0.0, atol=1e-10)

    def test_support_escape_is_infinite(self, rng):
        narrow = random_state(3, rank=1, rng=rng)
        wide = full_rank_state(3, rng)
        d = max_divergence(wide, narrow)
        assert d.value == np.inf and d.support_violation

    def test_against_bottom_complements_min_entropy(self, rng):
        sigma = full_rank_state(4, rng)
        bot = DensityMatrix.maximally_mixed(4)
        assert_allclose(max_divergence(sigma, bot).value,
                        np.log(4.0) - min_entropy(sigma), atol=1e-10)

    def test_classical_route_agrees_on_diagonals(self, rng):
        x = rng.dirichlet(np.ones(4))
        y = rng.dirichlet(np.ones(4))
        quantum = max_divergence(DensityMatrix.from_diag(y),
                                 DensityMatrix.from_diag(x)).value
        assert_allclose(classical_max_divergence(y, x), quantum, atol=1e-10)

    def test_classical_support_escape(self):
        assert classical_max_divergence([0.5, 0.5, 0.0], [0.7, 0.3, 0.0]) < np.inf
        assert classical_max_divergence([0.5, 0.3, 0.2], [0.7, 0.3, 0.0]) == np.inf


class TestSandwichedFamily:
    def test_half_order_is_log_squared_fidelity(self, rng):
        a = full_rank_state(3, rng)
        b = full_rank_state(3, rng)
        f = fidelity(a.matrix, b.matrix)
        assert_allclose(renyi_divergence(a, b, 0.5).value,
                        -np.log(f ** 2), atol=1e-9)

    def test_unit_order_matches_classical_relative_entropy(self, rng):
        x = rng.dirichlet(np.ones(3))
        y = rng.dirichlet(np.ones(3))
        kl = float((x * (np.log(x) - np.log(y))).sum())
        got = renyi_divergence(DensityMatrix.from_diag(x),
                               DensityMatrix.from_diag(y), 1.0).value
        assert_allclose(got, kl, atol=1e-10)

    def test_unit_order_basis_independent(self, rng):
        a = full_rank_state(3, rng)
        b = full_rank_state(3, rng)
        U = random_unitary(3, rng)
        rotated = renyi_divergence(
            DensityMatrix(U @ a.matrix @ U.conj().T),
            DensityMatrix(U @ b.matrix @ U.conj().T), 1.0).value
        assert_allclose(rotated, renyi_divergence(a, b, 1.0).value, atol=1e-9)

    def test_monotone_in_alpha_and_capped_by_max(self, rng):
        for _ in range(20):
            a = full_rank_state(3, rng)
            b = full_rank_state(3, rng)
            values = [renyi_divergence(a, b, al).value for al in ALPHA_GRID]
            top = max_divergence(a, b).value
            assert np.all(np.diff(values) >= -1e-9)
            assert values[-1] <= top + 1e-9

    def test_continuity_at_unit_order(self, rng):
        a = full_rank_state(3, rng)
        b = full_rank_state(3, rng)
        center = renyi_divergence(a, b, 1.0).value
        assert abs(renyi_divergence(a, b, 1.0 - 1e-6).value - center) < 1e-4
        assert abs(renyi_divergence(a, b, 1.0 + 1e-6).value - center) < 1e-4

    def test_large_alpha_approaches_max_divergence(self, rng):
        a = full_rank_state(3, rng)
        b = full_rank_state(3, rng)
        assert abs(renyi_divergence(a, b, 100.0).value
                   - max_divergence(a, b).value) < 1e-2

    def test_support_rule_above_one(self, rng):
        narrow = random_state(3, rank=1, rng=rng)
        wide = full_rank_state(3, rng)
        d = renyi_divergence(wide, narrow, 2.0)
        assert d.value == np.inf and d.support_violation
        assert renyi_divergence(narrow, wide, 2.0).value < np.inf

    def test_disjoint_supports_infinite_below_one(self):
        a = DensityMatrix.from_diag([1.0, 0.0])
        b = DensityMatrix.from_diag([0.0, 1.0])
        assert renyi_divergence(a, b, 0.5).value == np.inf

    def test_asymmetry_of_the_quasi_metric(self):
        a = DensityMatrix.from_diag([0.9, 0.1])
        b = DensityMatrix.from_diag([0.5, 0.5])
        fwd = max_divergence(a, b).value
        back = max_divergence(b, a).value
        assert abs(fwd - back) > 0.1


class TestOrderGap:
    def test_zero_exactly_on_ordered_pairs(self, make_ordered_pair):
        for _ in range(30):
            rho, sigma = make_ordered_pair(3)
            gap, verdict = order_divergence_gap(rho, sigma)
            assert verdict.holds
            assert abs(gap) < 1e-10

    def test_positive_on_unordered_pairs(self, make_incomparable_pair):
        for _ in range(30):
            a, b = make_incomparable_pair(3)
            gap, verdict = order_divergence_gap(a, b)
            assert verdict.fails
            assert gap > 1e-6


class TestMeasurementBound:
    def test_never_exceeds_max_divergence(self, rng):
        for _ in range(20):
            a = full_rank_state(3, rng)
            b = full_rank_state(3, rng)
            bound = povm_distinguishability_lower_bound(a, b, seed=0)
            assert bound <= max_divergence(a, b).value + 1e-9

    def test_attained_on_full_rank_pairs(self, rng):
        for _ in range(20):
            a = full_rank_state(3, rng)
            b = full_rank_state(3, rng)
            bound = povm_distinguishability_lower_bound(a, b, seed=0)
            assert_allclose(bound, max_divergence(a, b).value, atol=1e-8)

    def test_exact_on_diagonal_pair_via_basis_projector(self):
        a = DensityMatrix.from_diag([0.7, 0.2, 0.1])
        b = DensityMatrix.from_diag([0.5, 0.3, 0.2])
        assert_allclose(povm_distinguishability_lower_bound(a, b, trials=0),
                        np.log(0.7 / 0.5), atol=1e-12)

    def test_infinite_when_target_escapes_support(self, rng):
        narrow = random_state(3, rank=2, rng=rng)
        wide = full_rank_state(3, rng)
        assert povm_distinguishability_lower_bound(wide, narrow) == np.inf


class TestEffectProbability:
    def test_born_rule_on_diagonals(self):
        rho = DensityMatrix.from_diag([0.5, 0.3, 0.2])
        E = Effect.from_diag([1.0, 0.5, 0.0])
        assert_allclose(effect_probability(rho, E), 0.65, atol=1e-12)
