import math

import numpy as np
import pytest

from entropy_lab import (
    Ellipsoid,
    NotSupportedError,
    PreconditionError,
    ResourceBudgetError,
    ball_covering_upper,
    greedy_cover_count,
    sandwich_entropy,
    truncate_ellipsoid,
    volume_lower_bound,
)
from entropy_lab.covering import (
    CELL_BUDGET_ENV,
    axes_digest,
    covering_kappa,
    export_bounds_csv,
)

LN2 = math.log(2.0)


class TestEllipsoid:
    def test_axes_sorted(self):
        e = Ellipsoid([0.25, 1.0, 0.5])
        np.testing.assert_array_equal(e.semi_axes, [1.0, 0.5, 0.25])

    def test_positive_axes_required(self):
        with pytest.raises(ValueError):
            Ellipsoid([1.0, 0.0])

    def test_complex_doubles_real_dimension(self):
        e = Ellipsoid([1.0, 0.5], field="complex")
        assert e.real_dim == 4
        np.testing.assert_array_equal(e.real_axes(), [1.0, 1.0, 0.5, 0.5])


class TestVolumeLowerBound:
    def test_unit_disk_half_radius(self):
        assert volume_lower_bound(Ellipsoid([1.0], field="complex"), 0.5) == 2.0

    def test_two_dims(self):
        assert volume_lower_bound(
            Ellipsoid([1.0, 1.0], field="complex"), 0.25
        ) == pytest.approx(8.0, rel=1e-15)

    def test_unequal_axes(self):
        # 4*(log2(4) + (0 + log2(0.5))/2) per complex dim pair = 6 bits
        assert volume_lower_bound(
            Ellipsoid([1.0, 0.5], field="complex"), 0.25
        ) == pytest.approx(6.0, rel=1e-15)

    def test_clamped_at_zero(self):
        assert volume_lower_bound(Ellipsoid([0.1], field="complex"), 0.9) == 0.0

    def test_real_field_not_supported(self):
        with pytest.raises(NotSupportedError):
            volume_lower_bound(Ellipsoid([1.0]), 0.5)

    def test_strictly_increasing_in_axes(self):
        base = volume_lower_bound(Ellipsoid([1.0, 0.5], field="complex"), 0.25)
        bigger = volume_lower_bound(Ellipsoid([1.0, 0.6], field="complex"), 0.25)
        assert bigger > base


class TestBallCoveringUpper:
    def test_small_d_branch(self):
        assert ball_covering_upper(1, 0.5) == pytest.approx(2 * math.log2(5), rel=1e-15)

    def test_rogers_branch(self):
        kappa = (16.0 * 5**2.5) ** 0.1
        expected = 10 * math.log2(kappa / 0.5)
        got = ball_covering_upper(5, 0.5, rogers_c=16.0)
        assert got == pytest.approx(expected, rel=1e-15)
        assert got == pytest.approx(19.8, abs=0.1)

    def test_kappa_decreases_toward_one(self):
        vals = [covering_kappa(d, 0.5, 16.0) for d in range(5, 201)]
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert covering_kappa(100, 0.5, 16.0) < covering_kappa(10, 0.5, 16.0)
        # frozen from direct evaluation of (16*d**2.5)**(1/(2*d))
        assert covering_kappa(10, 0.5, 16.0) == pytest.approx(
            (16.0 * 10**2.5) ** 0.05, rel=1e-15)
        assert covering_kappa(100, 0.5, 16.0) == pytest.approx(1.0740, abs=1e-4)

    def test_epsilon_at_least_one_flagged(self):
        with pytest.warns(UserWarning):
            assert ball_covering_upper(3, 1.5) == 0.0


class TestTruncateEllipsoid:
    def test_basic_threshold(self):
        res = truncate_ellipsoid([1, 0.5, 0.25, 0.125], 0.3, 0.5)
        assert res.kept_dims == 3
        assert res.dropped_max_axis == 0.125
        assert res.inflated_epsilon == pytest.approx(0.15, rel=1e-15)

    def test_all_dropped(self):
        res = truncate_ellipsoid([0.1, 0.05], 1.0, 0.5)
        assert res.kept_dims == 0
        assert res.dropped_max_axis == 0.1

    def test_none_dropped(self):
        res = truncate_ellipsoid([1, 1, 1], 0.5, 0.1)
        assert res.kept_dims == 3
        assert res.dropped_max_axis == 0.0
        assert res.inflated_epsilon == pytest.approx(0.45, rel=1e-15)

    def test_requires_sorted(self):
        with pytest.raises(ValueError):
            truncate_ellipsoid([0.5, 1.0], 0.3, 0.5)


class TestGreedyCoverCount:
    def test_interval_basic(self):
        assert greedy_cover_count(Ellipsoid([1.0]), 0.3, 0.3 / 8) == 4

    def test_disk_radius_one_eps_one(self):
        assert greedy_cover_count(Ellipsoid([1.0, 1.0]), 1.0, 0.25) == 1

    def test_disk_half_eps(self):
        count = greedy_cover_count(Ellipsoid([1.0, 1.0]), 0.5, 0.5 / 8)
        assert 4 <= count <= 12
        assert count == 9  # golden from the oracle run at grid_step = eps/8

    def test_interval_optimal_for_random_pairs(self):
        # count == ceil(length/(2*eps)) exactly, provided the grid is fine
        # enough for the pair's ceiling margin; the sufficient condition below
        # is a priori, not tuned on oracle output
        rng = np.random.default_rng(0)
        done = 0
        while done < 50:
            length = rng.uniform(0.5, 4.0)
            eps = rng.uniform(0.05, 0.5)
            optimum = math.ceil(length / (2 * eps))
            if optimum - length / (2 * eps) < 0.05:
                continue  # resample near-boundary pairs; any grid can tip them
            step = eps / 8
            while (length + 2 * step) / (2 * (eps - step / 2)) >= optimum:
                step /= 2
            count = greedy_cover_count(Ellipsoid([length / 2]), eps, step)
            assert count == optimum, (length, eps, step)
            done += 1

    def test_complex_axis_becomes_real_disk(self):
        complex_count = greedy_cover_count(Ellipsoid([1.0], field="complex"), 0.5, 0.0625)
        real_count = greedy_cover_count(Ellipsoid([1.0, 1.0]), 0.5, 0.0625)
        assert complex_count == real_count

    def test_dimension_limit(self):
        with pytest.raises(NotSupportedError):
            greedy_cover_count(Ellipsoid([1, 1, 1, 1]), 0.5, 0.1)
        with pytest.raises(NotSupportedError):
            greedy_cover_count(Ellipsoid([1, 1], field="complex"), 0.5, 0.1)

    def test_grid_too_coarse(self):
        with pytest.raises(PreconditionError):
            greedy_cover_count(Ellipsoid([1.0]), 0.4, 0.2)

    def test_cell_budget(self, monkeypatch):
        monkeypatch.setenv(CELL_BUDGET_ENV, "100")
        with pytest.raises(ResourceBudgetError):
            greedy_cover_count(Ellipsoid([1.0, 1.0]), 0.5, 0.02)

    def test_three_dim_ball(self):
        count = greedy_cover_count(Ellipsoid([1.0, 1.0, 1.0]), 0.5, 0.125)
        # volume ratio forces at least 8; fine coverings of the ball at
        # half radius need a few dozen
        assert 8 <= count <= 120


class TestSandwichEntropy:
    def test_unit_complex_disk(self):
        b = sandwich_entropy([1.0], 0.5, tau=0.5)
        assert b.lower_log2 == 2.0
        assert b.upper_log2 == pytest.approx(2 * math.log2(9), rel=1e-15)
        assert b.lower_log2 <= b.upper_log2

    def test_geometric_axes_goldens(self):
        axes = 2.0 ** (1 - np.arange(1, 21, dtype=float))
        b = sandwich_entropy(axes, 0.1, tau=0.5)
        expected_lower = 2 * sum(math.log2(mu / 0.1) for mu in (1, 0.5, 0.25, 0.125))
        assert b.lower_log2 == pytest.approx(expected_lower, rel=1e-14)
        # five axes survive tau*eps = 0.05
        assert b.upper_log2 == pytest.approx(ball_covering_upper(5, 0.05), rel=1e-14)
        assert b.lower_log2 <= b.upper_log2

    def test_lower_clamp_as_eps_reaches_one(self):
        assert sandwich_entropy([1.0, 1.0, 1.0], 1.0).lower_log2 == 0.0
        near = sandwich_entropy([1.0, 1.0, 1.0], 0.999999)
        assert 0.0 < near.lower_log2 < 1e-4
        full = sandwich_entropy([1.0, 1.0, 1.0], 1.2)
        assert full.lower_log2 == 0.0 and full.upper_log2 == 0.0

    def test_fully_truncated(self):
        b = sandwich_entropy([0.01, 0.005], 1.0, tau=0.5)
        assert (b.lower_log2, b.upper_log2) == (0.0, 0.0)
        assert "single-ball" in b.methods[1] or "fully-truncated" in b.methods[1]

    def test_large_axes_rescaled(self):
        b = sandwich_entropy([2.0, 1.0], 0.5, tau=0.5)
        assert "rescaled" in b.methods[1]
        assert b.lower_log2 <= b.upper_log2

    def test_sandwich_brackets_greedy_count(self):
        # validity of the bracket against the empirical oracle, one complex
        # dim at a time so the oracle stays runnable
        for mu in (1.0, 0.7):
            for eps in (0.5, 0.35, 0.25):
                if eps >= mu:
                    continue
                for tau in (0.3, 0.5, 0.7):
                    e = Ellipsoid([mu], field="complex")
                    count = greedy_cover_count(e, eps, grid_step=eps / 8)
                    b = sandwich_entropy([mu], eps, tau=tau)
                    assert b.lower_log2 <= math.log2(count) <= b.upper_log2, (
                        mu, eps, tau, count, b)


class TestExport:
    def test_axes_digest_stable(self):
        assert axes_digest([1.0, 0.5]) == axes_digest(np.asarray([1.0, 0.5]))
        assert axes_digest([1.0, 0.5]) != axes_digest([1.0, 0.25])

    def test_export_csv(self, tmp_path):
        path = tmp_path / "bounds.csv"
        export_bounds_csv(
            path,
            [
                {"axes": [1.0], "epsilon": 0.5, "tau": 0.5,
                 "lower_bits": 2.0, "upper_bits": 6.34, "greedy_count": 9},
                {"axes": [1.0, 0.5], "epsilon": 0.25, "tau": 0.5,
                 "lower_bits": 6.0, "upper_bits": 20.0, "greedy_count": None},
            ],
        )
        lines = path.read_text().splitlines()
        assert lines[0] == "axes_hash,epsilon,tau,lower_bits,upper_bits,greedy_count"
        assert lines[1].endswith(",9")
        assert lines[2].endswith(",")
