"""Order rule and discount-search tests."""

import numpy as np
import pytest

from blf.dlm import DiscountPair, NIGPrior, default_prior, forward_filter
from blf.lattice import run_stage
from blf.selection import (
    SearchGrid,
    fit_blfdyn,
    fit_blffix,
    fit_fixed,
    scree_table,
    select_order,
)
from blf.simulate import gen_tvar2
from helpers import static_nig_posterior

SMALL_GRID = SearchGrid(gammas=(0.9, 0.95, 1.0), deltas=(0.9, 0.95, 1.0), p_max=4)


class TestSelectOrder:
    def test_formula_example(self):
        """Change from -50 to -50.1 is 0.2% < 0.5%, so order 2."""
        assert select_order([-100.0, -50.0, -50.1, -50.05], 0.5) == 2

    def test_constant_scree_gives_one(self):
        assert select_order([-10.0, -10.0, -10.0], 0.5) == 1

    def test_saturation_returns_full_length(self):
        assert select_order([-100.0, -50.0, -25.0, -12.0], 0.5) == 4

    def test_monotone_in_threshold(self):
        """Raising tau never increases the selected order."""
        rng = np.random.default_rng(30)
        for _ in range(50):
            scree = -np.abs(rng.normal(50, 20, size=8)).cumsum()[::-1] - 1.0
            taus = np.sort(rng.uniform(0.01, 20.0, size=4))
            orders = [select_order(scree, t) for t in taus]
            assert all(a >= b for a, b in zip(orders, orders[1:]))

    def test_rejects_zero_and_short(self):
        with pytest.raises(ValueError, match="nonzero"):
            select_order([-10.0, 0.0, -5.0], 0.5)
        with pytest.raises(ValueError, match="two"):
            select_order([-10.0], 0.5)


class TestSearchGrid:
    def test_defaults_match_reference_setup(self):
        grid = SearchGrid()
        assert grid.p_max == 15
        expect = np.round(np.arange(0.80, 1.0001, 0.02), 10)
        np.testing.assert_array_equal(np.array(grid.gammas), expect)
        assert len(grid.pairs()) == 121

    def test_pair_iteration_order(self):
        grid = SearchGrid(gammas=(0.9, 0.8), deltas=(1.0, 0.9), p_max=2)
        got = [(p.gamma, p.delta) for p in grid.pairs()]
        assert got == [(0.8, 0.9), (0.8, 1.0), (0.9, 0.9), (0.9, 1.0)]

    def test_validation(self):
        with pytest.raises(ValueError):
            SearchGrid(gammas=(0.0, 0.9), deltas=(0.9,), p_max=3)
        with pytest.raises(ValueError):
            SearchGrid(p_max=0)


class TestFitters:
    def test_singleton_grid_dyn_equals_fix_on_white_noise(self):
        """Degenerate grid: both searches land on the same configuration and
        order, so the fits are bit-identical."""
        rng = np.random.default_rng(31)
        x = rng.normal(size=400)
        grid = SearchGrid(gammas=(1.0,), deltas=(1.0,), p_max=4)
        rd = fit_blfdyn(x, grid=grid)
        rf = fit_blffix(x, grid=grid)
        assert rd.chosen_order == rf.chosen_order == 1
        assert [(d.gamma, d.delta) for d in rd.per_stage_discounts] == \
               [(d.gamma, d.delta) for d in rf.per_stage_discounts]
        assert np.array_equal(rd.fit.coeffs, rf.fit.coeffs)
        assert np.array_equal(rd.fit.sigma2, rf.fit.sigma2)

    def test_blfdyn_stage_choice_is_argmax(self):
        rng = np.random.default_rng(32)
        x = rng.normal(size=250)
        x[1:] += 0.7 * x[:-1]
        rep = fit_blfdyn(x, grid=SMALL_GRID)
        chosen = rep.per_stage_discounts[0]
        prior = default_prior(x)
        st = run_stage(x, x, 1, chosen, chosen, prior)
        for pair in SMALL_GRID.pairs():
            other = run_stage(x, x, 1, pair, pair, prior)
            assert st.loglik >= other.loglik

    def test_white_noise_blffix_order_one(self):
        rng = np.random.default_rng(33)
        x = rng.normal(size=800)
        rep = fit_blffix(x, grid=SMALL_GRID)
        assert rep.chosen_order == 1
        assert np.mean(np.abs(rep.fit.coeffs[:, 0])) < 0.1

    def test_static_singleton_matches_conjugate_regression(self):
        """Grid pinned at (1, 1): the stage-1 PARCOR path is the constant
        static posterior mean of the lag-1 regression."""
        rng = np.random.default_rng(34)
        x = np.zeros(300)
        for t in range(1, 300):
            x[t] = 0.6 * x[t - 1] - 0.2 * (x[t - 2] if t > 1 else 0.0) \
                + rng.standard_normal()
        grid = SearchGrid(gammas=(1.0,), deltas=(1.0,), p_max=2)
        prior = NIGPrior()
        rep = fit_fixed(x, DiscountPair(1.0, 1.0), 2, prior=prior)
        alpha1 = rep.run.stages[0].alpha
        assert np.ptp(alpha1) == 0.0
        mu_T, _, _, _ = static_nig_posterior(x[1:], x[:-1], prior)
        np.testing.assert_allclose(alpha1[0], mu_T, rtol=1e-10)

    def test_tvar2_selects_order_two(self):
        proc = gen_tvar2(1024, seed=12)
        rep = fit_blfdyn(proc.x)
        assert rep.chosen_order == 2
        assert not rep.saturated

    def test_deterministic_pipeline(self):
        rng = np.random.default_rng(35)
        x = rng.normal(size=300)
        a = fit_blfdyn(x, grid=SMALL_GRID)
        b = fit_blfdyn(x, grid=SMALL_GRID)
        assert np.array_equal(a.fit.coeffs, b.fit.coeffs)
        assert np.array_equal(a.scree, b.scree)
        assert a.chosen_order == b.chosen_order


class TestScreeTable:
    def test_rows_and_first_pct_undefined(self):
        rng = np.random.default_rng(36)
        x = rng.normal(size=300)
        rep = fit_blfdyn(x, grid=SMALL_GRID)
        rows = scree_table(rep)
        assert len(rows) == SMALL_GRID.p_max
        assert rows[0][2] is None
        assert all(pct is not None for _, _, pct in rows[1:])
        assert [m for m, _, _ in rows] == [1, 2, 3, 4]

    def test_tvar2_pct_below_threshold_at_three(self):
        proc = gen_tvar2(1024, seed=12)
        rep = fit_blfdyn(proc.x)
        rows = scree_table(rep)
        assert rows[2][2] < 0.5  # consequence of order-2 selection
