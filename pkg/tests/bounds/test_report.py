"""
Tests for bound reports, sweeps and scaling fits.
"""

import math

import pytest

from bounds.asymptotics import tau0
from bounds.report import (
    BoundReport,
    ScalingFit,
    bound_report,
    fit_time_scaling,
    locate_switching_crossover,
    log_spaced_gammas,
    solve_optimal_time,
    sweep_bound_reports,
    sweep_optimal_times,
)
from dynamics.errors import DomainError


class TestBoundReport:
    """Test cases for the exact-versus-limit comparison."""

    def test_gamma100(self):
        report = bound_report(100.0)
        assert report.N == 5
        assert report.has_window_integer
        assert report.s_in_bracket is True
        assert report.relative_gap == pytest.approx(
            abs(report.exact_time - report.limiting_time) / report.limiting_time
        )

    @pytest.mark.slow
    def test_gap_shrinks_with_gamma(self):
        near, far = sweep_bound_reports([100.0, 1000.0])
        assert far.N == 8
        assert far.relative_gap < near.relative_gap

    def test_no_window_integer(self):
        report = bound_report(1.1)
        assert report.N is None
        assert report.exact_time is None
        assert report.s_in_bracket is None

    def test_to_dict(self):
        data = BoundReport(2.0, 0.1, 1.1, 1, limiting_time=5.0, exact_time=6.0).to_dict()
        assert data["gamma"] == 2.0
        assert data["N"] == 1
        assert data["s_in_bracket"] is None


class TestSweeps:
    """Test cases for log-spaced sweeps."""

    def test_log_spaced_gammas(self):
        gammas = log_spaced_gammas(10.0, 1000.0, 3)
        assert gammas == pytest.approx([10.0, 100.0, 1000.0])
        assert log_spaced_gammas(5.0, 50.0, 1) == [5.0]

    @pytest.mark.parametrize("lo, hi, points", [(1.0, 10.0, 5), (10.0, 5.0, 5), (2.0, 10.0, 0)])
    def test_log_spaced_gammas_invalid(self, lo, hi, points):
        with pytest.raises(DomainError):
            log_spaced_gammas(lo, hi, points)

    def test_solve_optimal_time_row(self):
        row = solve_optimal_time(2.0)
        assert row["n"] == 0
        assert row["branch"] == "+"
        assert row["log_temperature_ratio"] == pytest.approx(2.0 * math.log(2.0))
        assert row["one_switch_time"] == pytest.approx(row["total_time"])

    def test_sweep_preserves_order(self):
        rows = sweep_optimal_times(2.0, 20.0, 4)
        assert [r["gamma"] for r in rows] == pytest.approx(log_spaced_gammas(2.0, 20.0, 4))

    @pytest.mark.slow
    def test_parallel_sweep_matches_serial(self):
        serial = sweep_optimal_times(2.0, 20.0, 4, workers=1)
        parallel = sweep_optimal_times(2.0, 20.0, 4, workers=2)
        assert serial == parallel


class TestScaling:
    """Test cases for the scaling fit."""

    def test_fit_exact_line(self):
        rows = [{"gamma": g, "total_time": 3.0 * 2.0 * math.log(g) + 1.0} for g in (2.0, 4.0, 8.0)]
        fit = fit_time_scaling(rows)
        assert fit.slope == pytest.approx(3.0)
        assert fit.intercept == pytest.approx(1.0)
        assert fit.points == 3
        assert fit.to_dict()["tau0"] == pytest.approx(tau0())

    def test_fit_needs_two_rows(self):
        with pytest.raises(DomainError):
            fit_time_scaling([{"gamma": 2.0, "total_time": 2.0}])

    def test_relative_deviation(self):
        fit = ScalingFit(slope=tau0() * 1.05, intercept=0.0, points=2)
        assert fit.relative_deviation == pytest.approx(0.05)

    @pytest.mark.slow
    def test_exponential_law_emerges(self):
        rows = sweep_optimal_times(50.0, 1000.0, 20)
        fit = fit_time_scaling(rows)
        assert fit.relative_deviation < 0.10


@pytest.mark.slow
def test_switching_crossover_inside_range():
    gamma = locate_switching_crossover(1.5, 100.0, xtol=1e-4)
    assert gamma is not None
    assert 1.5 < gamma < 100.0


def test_switching_crossover_absent():
    assert locate_switching_crossover(1.5, 2.0, xtol=1e-4) is None
