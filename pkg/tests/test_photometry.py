"""Flux chain: conversion constants, the three averaging routes, link budget."""

import math

import numpy as np
import pytest

from aoci.photometry import (
    FluxEstimate,
    NeuralParams,
    SourceParams,
    background_pmf,
    derive_state,
    link_budget,
    mean_flux,
    mean_flux_mc,
    mean_flux_quadrature,
    mean_flux_series,
    received_flux_at,
    received_flux_batch,
    response_window_gain,
)
from aoci.specfun import SeriesConvergenceError


class TestReceivedFlux:
    def test_photon_conversion_constant(self, baseline_cfg):
        # 1 mW of delivered optical power at 594 nm is 2.9903e15 photons/s.
        state = derive_state(baseline_cfg)
        assert state.photons_per_joule * 1e-3 == pytest.approx(2.9903e15, rel=1e-4)

    def test_zero_power(self, baseline_cfg):
        cfg = baseline_cfg.with_value("source.power_mw", 0.0)
        assert received_flux_at(0.0, cfg) == 0.0

    def test_chain_factorization(self, baseline_cfg):
        # Phi(0) = k eta(0) G_c h_l A0 (lambda/hc) x
        from aoci.optics import coupling_eta_closed

        state = derive_state(baseline_cfg)
        eta0 = coupling_eta_closed(baseline_cfg.coupling, 0.0)
        expected = (
            state.k * eta0 * state.g_c * state.h_l * state.a0
            * state.photons_per_joule * baseline_cfg.source.power_tx
        )
        assert received_flux_at(0.0, baseline_cfg) == pytest.approx(expected, rel=1e-12)

    def test_decreasing_within_main_lobe(self, baseline_cfg):
        cp = baseline_cfg.coupling
        r_null = 3.8317 * cp.omega0 / (2.0 * math.sqrt(cp.coupling_argument))
        rs = np.linspace(0.0, 0.9 * r_null, 30)
        vals = [received_flux_at(float(r), baseline_cfg) for r in rs]
        assert all(b < a for a, b in zip(vals, vals[1:]))

    def test_auto_falls_back_beyond_series_range(self, baseline_cfg):
        # r = 50 w0 exceeds the series convergence envelope; auto must fall
        # back to the overlap integral instead of failing.
        r = 50.0 * baseline_cfg.coupling.omega0
        with pytest.raises(SeriesConvergenceError):
            received_flux_at(r, baseline_cfg, eta_method="closed")
        auto = received_flux_at(r, baseline_cfg)
        integral = received_flux_at(r, baseline_cfg, eta_method="integral")
        assert auto == integral

    def test_batch_matches_scalar(self, baseline_cfg):
        rs = np.linspace(0.0, 5.0 * baseline_cfg.coupling.omega0, 7)
        batch = received_flux_batch(rs, baseline_cfg)
        for i, r in enumerate(rs):
            scalar = received_flux_at(float(r), baseline_cfg)
            assert batch[i] == pytest.approx(scalar, rel=1e-9)


class TestMeanFluxRoutes:
    def test_series_agrees_with_quadrature(self, baseline_cfg):
        fs = mean_flux_series(baseline_cfg)
        fq = mean_flux_quadrature(baseline_cfg)
        assert fs.method == "series" and fq.method == "quadrature"
        assert abs(fs.value - fq.value) / fq.value <= 1e-6

    def test_mc_agrees_with_quadrature(self, baseline_cfg):
        fq = mean_flux_quadrature(baseline_cfg)
        fm = mean_flux_mc(baseline_cfg, n=200_000, seed=99)
        assert abs(fm.value - fq.value) <= 3.0 * fm.err_bound

    def test_mc_reproducible_and_stderr_scales(self, baseline_cfg):
        a = mean_flux_mc(baseline_cfg, n=50_000, seed=7)
        b = mean_flux_mc(baseline_cfg, n=50_000, seed=7)
        assert a == b
        wide = mean_flux_mc(baseline_cfg, n=25_000, seed=7)
        # doubling n cuts the standard error by ~1/sqrt(2)
        assert wide.err_bound / a.err_bound == pytest.approx(math.sqrt(2.0), rel=0.2)

    def test_degenerate_pointing_limit(self, baseline_cfg):
        cfg = baseline_cfg.with_value("beam.sigma_s_mm", 1e-4)  # 0.1 um
        fq = mean_flux_quadrature(cfg)
        phi0 = received_flux_at(0.0, cfg)
        assert abs(fq.value - phi0) / phi0 <= 1e-3

    def test_zero_power_all_routes(self, baseline_cfg):
        cfg = baseline_cfg.with_value("source.power_mw", 0.0)
        assert mean_flux_series(cfg).value == 0.0
        assert mean_flux_quadrature(cfg).value == 0.0
        assert mean_flux_mc(cfg, n=1000, seed=1).value == 0.0

    def test_linearity_in_power(self, baseline_cfg):
        doubled = baseline_cfg.with_value("source.power_mw", 80.0)
        f1 = mean_flux_quadrature(baseline_cfg)
        f2 = mean_flux_quadrature(doubled)
        assert f2.value == pytest.approx(2.0 * f1.value, rel=1e-12)
        s1 = mean_flux_series(baseline_cfg)
        s2 = mean_flux_series(doubled)
        assert s2.value == pytest.approx(2.0 * s1.value, rel=1e-12)

    def test_monotone_in_skin_and_pointing_spread(self, baseline_cfg):
        flux_by_delta = [
            mean_flux_quadrature(baseline_cfg.with_value("skin.delta_mm", d)).value
            for d in [4.0, 5.5, 7.0, 8.5, 10.0]
        ]
        assert all(b < a for a, b in zip(flux_by_delta, flux_by_delta[1:]))
        flux_by_sigma = [
            mean_flux_quadrature(baseline_cfg.with_value("beam.sigma_s_mm", s)).value
            for s in [0.02, 0.05, 0.1, 0.3, 1.0]
        ]
        assert all(b < a for a, b in zip(flux_by_sigma, flux_by_sigma[1:]))

    def test_sigma_slope_in_spread_dominated_regime(self, baseline_cfg):
        # Where the displacement spread dominates every beam scale the average
        # drops as 1/sigma^2: slope -2 on the log-log curve.
        sigmas = [2.0, 4.0]
        vals = [
            mean_flux_quadrature(baseline_cfg.with_value("beam.sigma_s_mm", s)).value
            for s in sigmas
        ]
        slope = math.log(vals[1] / vals[0]) / math.log(sigmas[1] / sigmas[0])
        assert slope == pytest.approx(-2.0, abs=0.1)

    def test_auto_method_tags(self, baseline_cfg):
        assert mean_flux(baseline_cfg, method="auto").method == "series"
        # sigma_s far beyond the mode-field radius defeats the series route
        hard = baseline_cfg.with_value("beam.sigma_s_mm", 30.0)
        est = mean_flux(hard, method="auto")
        assert est.method == "quadrature"
        assert mean_flux(baseline_cfg, method="mc", n=2000, seed=3).method == "monte_carlo"

    def test_unknown_method_rejected(self, baseline_cfg):
        with pytest.raises(ValueError):
            mean_flux(baseline_cfg, method="fastest")


class TestFluxEstimate:
    def test_method_field_discipline(self):
        with pytest.raises(ValueError):
            FluxEstimate(value=1.0, method="series", err_bound=0.0, n_samples=10, seed=1)
        with pytest.raises(ValueError):
            FluxEstimate(value=1.0, method="monte_carlo", err_bound=0.0)
        with pytest.raises(ValueError):
            FluxEstimate(value=-1.0, method="series", err_bound=0.0)
        with pytest.raises(ValueError):
            FluxEstimate(value=1.0, method="magic", err_bound=0.0)


class TestLinkBudget:
    def test_window_gain_value(self):
        # 0.15 s window: 0.15 (e-1)/e = 0.094818
        assert response_window_gain(0.15) == pytest.approx(0.094818, abs=1e-6)

    def test_budget_composition_exact(self, baseline_cfg):
        flux = mean_flux_quadrature(baseline_cfg)
        budget = link_budget(baseline_cfg, flux)
        expected = flux.value * response_window_gain(baseline_cfg.neural.tau) + 1.5
        assert budget == expected  # algebraic identity, bit-exact

    def test_no_signal_leaves_background(self, baseline_cfg):
        cfg = baseline_cfg.with_value("source.power_mw", 0.0)
        flux = mean_flux_quadrature(cfg)
        assert link_budget(cfg, flux) == cfg.neural.mean_background

    def test_spec_numeric_point(self, baseline_cfg):
        est = FluxEstimate(value=1e15, method="series", err_bound=0.0)
        budget = link_budget(baseline_cfg, est)
        assert budget == pytest.approx(9.4818e13 + 1.5, rel=1e-4)


class TestBackgroundPmf:
    def test_zero_background(self):
        neural = NeuralParams(f0=0.0, tau=0.15, y_th=5.0, d_th=10.0)
        assert background_pmf(neural, 0) == 1.0
        assert background_pmf(neural, 3) == 0.0

    def test_spec_point(self):
        neural = NeuralParams(f0=10.0, tau=0.15, y_th=5.0, d_th=10.0)
        assert neural.mean_background == pytest.approx(1.5)
        assert background_pmf(neural, 0) == pytest.approx(0.22313, abs=1e-5)

    def test_normalization(self):
        neural = NeuralParams(f0=10.0, tau=0.15, y_th=5.0, d_th=10.0)
        total = math.fsum(background_pmf(neural, n) for n in range(51))
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_rejects_negative_count(self):
        neural = NeuralParams(f0=10.0, tau=0.15, y_th=5.0, d_th=10.0)
        with pytest.raises(ValueError):
            background_pmf(neural, -1)


class TestParamValidation:
    def test_source(self):
        with pytest.raises(ValueError):
            SourceParams(power_tx=-1.0, lam=594e-9)
        with pytest.warns(UserWarning):
            SourceParams(power_tx=1.0, lam=1500e-9)

    def test_neural(self):
        with pytest.raises(ValueError):
            NeuralParams(f0=-1.0, tau=0.15, y_th=1.0, d_th=2.0)
        with pytest.raises(ValueError):
            NeuralParams(f0=1.0, tau=0.15, y_th=2.0, d_th=1.0)
        with pytest.raises(ValueError):
            NeuralParams(f0=1.0, tau=0.15, y_th=0.0, d_th=1.0)
