"""Tests for advantage curves and noise-model fitting."""

import io

import numpy as np
import pytest

from gicirc import (
    advantage_vs_qng,
    fit_noise_model,
    gain_from_qng,
    load_fit_data,
    to_db,
)

PAPER_LOSSES = (0.16, 0.10, 0.15)
NOISE_OFF = (0.0, 1.0)


class TestAdvantageVsQng:
    def test_noise_off_lossless_matches_ideal_gain(self):
        curve = advantage_vs_qng(6.0, [6.0], (0.0, 0.0, 0.0), NOISE_OFF, NOISE_OFF)
        assert curve[0] == pytest.approx(to_db(gain_from_qng(6.0).G ** 2), abs=1e-9)

    def test_alpha_independent(self):
        a = advantage_vs_qng(4.0, [3.0, 6.0], PAPER_LOSSES, NOISE_OFF, NOISE_OFF, alpha2=4.0)
        b = advantage_vs_qng(4.0, [3.0, 6.0], PAPER_LOSSES, NOISE_OFF, NOISE_OFF, alpha2=81.0)
        assert np.allclose(a, b, atol=1e-10)

    def test_saturation_with_hot_auxiliary(self):
        # A hot downstream auxiliary caps the achievable advantage: the
        # curve increments shrink by orders of magnitude across the sweep.
        grid = np.linspace(2.0, 14.0, 13)
        curve = advantage_vs_qng(4.0, grid, PAPER_LOSSES, (5e-4, 2.0), (4e-4, 208.0))
        inc = np.diff(curve)
        assert np.all(inc > 0)
        assert inc[-1] < 0.05 * inc[0]

    def test_low_upstream_gain_wins_in_studied_window(self):
        # Ordering holds where the downstream amplifier is the weaker one
        # (up to its 6 dB operating point); at higher downstream gain,
        # matching favors the larger upstream gain instead.
        grid = np.linspace(2.0, 6.0, 9)
        low = advantage_vs_qng(4.0, grid, PAPER_LOSSES, (5e-4, 2.0), (4e-4, 208.0))
        high = advantage_vs_qng(8.0, grid, PAPER_LOSSES, (5e-4, 2.0), (4e-4, 208.0))
        assert np.all(high < low)


class TestLoadFitData:
    def test_reads_with_and_without_sigma(self):
        text = "qng1_db,qng2_db,advantage_db,sigma_db\n4,6,1.2,0.5\n8,6,0.9,\n"
        rows = load_fit_data(io.StringIO(text))
        assert rows[0] == (4.0, 6.0, 1.2, 0.5)
        assert rows[1][3] == 1.0

    def test_missing_columns_rejected(self):
        with pytest.raises(ValueError, match="columns"):
            load_fit_data(io.StringIO("a,b\n1,2\n"))


class TestFitNoiseModel:
    def synthetic(self, noise1, noise2, qng1s=(4.0, 8.0), qng2s=(3.0, 6.0, 9.0, 12.0)):
        data = []
        for q1 in qng1s:
            curve = advantage_vs_qng(q1, qng2s, PAPER_LOSSES, noise1, noise2)
            data.extend((q1, q2, float(a)) for q2, a in zip(qng2s, curve))
        return data

    def test_ideal_data_drives_rho_to_floor(self):
        # Noise-free data generated by the ideal model: the fit must push
        # both rho values to the lower bound and fit essentially exactly.
        data = self.synthetic(NOISE_OFF, NOISE_OFF)
        result = fit_noise_model(data, PAPER_LOSSES, seed=3, restarts=2, max_evals=400)
        assert result.rho1 < 1e-6
        assert result.rho2 < 1e-6
        assert result.residual_rms < 1e-6
        assert result.converged

    def test_deterministic_under_seed(self):
        data = self.synthetic((1e-3, 3.0), (1e-3, 50.0), qng1s=(4.0,), qng2s=(3.0, 6.0, 9.0, 12.0))
        a = fit_noise_model(data, PAPER_LOSSES, seed=11, restarts=2, max_evals=150)
        b = fit_noise_model(data, PAPER_LOSSES, seed=11, restarts=2, max_evals=150)
        assert a == b

    def test_weighted_points_dominate(self):
        # Give one corrupted point a huge sigma: the fit should track the
        # clean points and report a small weighted residual.
        data = self.synthetic(NOISE_OFF, NOISE_OFF, qng1s=(4.0,), qng2s=(3.0, 6.0, 9.0, 12.0))
        corrupted = [data[0][:2] + (data[0][2] + 3.0, 1e6)] + [
            row + (1.0,) for row in data[1:]
        ]
        result = fit_noise_model(corrupted, PAPER_LOSSES, seed=5, restarts=2, max_evals=400)
        assert result.residual_rms < 1e-3

    def test_data_validation(self):
        with pytest.raises(ValueError, match="at least 4"):
            fit_noise_model([(4, 6, 1.0)] * 3, PAPER_LOSSES)
        with pytest.raises(ValueError, match="distinct qng2"):
            fit_noise_model([(4, 6, 1.0)] * 5, PAPER_LOSSES)
        with pytest.raises(ValueError, match="bounds"):
            fit_noise_model(
                [(4, q, 1.0) for q in (3, 6, 9, 12)],
                PAPER_LOSSES,
                bounds=((0.5, 0.1), (1.0, 10.0)),
            )
