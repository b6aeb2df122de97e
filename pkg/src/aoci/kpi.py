"""Hearing and safety indicators.

All threshold logic runs in the photon-count domain over one neural response
window: the deterministic signal count is ``Phi(r) * tau (e-1)/e`` for the
sampled pointing displacement r, and the background is a Poisson count with
mean ``B = f0 tau``. A stimulus is perceived when the total count reaches
the excitation threshold ``y_th``; it is harmful when it reaches the damage
threshold ``d_th``.

The exceedance probabilities are Monte Carlo estimates with Wilson 95%
intervals. One estimator serves both thresholds and all parameter
comparisons are run under common random numbers (same seed, same block
structure), which makes the monotonicity relations exact per seed:
``p_damage <= p_hearing`` whenever ``d_th >= y_th``, and ``p_hearing`` is
nondecreasing in transmit power.

``p_false_hearing`` exposes two numbers on purpose: the survival probability
``Pr(N >= y_th)`` that matches the verbal definition of a false trigger, and
the closed form ``Q(y_th + 1, B)``, which is the Poisson CDF
``Pr(N <= y_th)`` -- the complementary reading of the same definition. Both
are returned so the discrepancy stays visible instead of being silently
resolved; downstream reporting uses the survival reading, which also agrees
with false triggers being vanishingly rare at realistic thresholds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from aoci import optics
from aoci.photometry import (
    NeuralParams,
    derive_state,
    received_flux_batch,
    response_window_gain,
)
from aoci.specfun import regularized_gamma_q
from aoci.stochastics import RngStream, sample_poisson

if TYPE_CHECKING:
    from aoci.config import LinkConfig

__all__ = [
    "ProbabilityEstimate",
    "FalseHearing",
    "KpiReport",
    "wilson_interval",
    "p_hearing",
    "p_false_hearing",
    "p_damage",
    "safety_check",
    "kpi_report",
]

KPI_BLOCK_SIZE = 1 << 16

_Z95 = 1.959963984540054  # two-sided 95% normal quantile


class ProbabilityEstimate(NamedTuple):
    """A Monte Carlo probability with its Wilson 95% interval."""

    value: float
    ci_low: float
    ci_high: float
    n_samples: int
    seed: int


class FalseHearing(NamedTuple):
    """Both readings of the false-hearing probability (see module docstring)."""

    literal: float
    cdf_closed_form: float


def wilson_interval(successes: int, n: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if n <= 0:
        raise ValueError("need at least one sample")
    p_hat = successes / n
    denom = 1.0 + z * z / n
    center = (p_hat + z * z / (2.0 * n)) / denom
    half = (z / denom) * math.sqrt(p_hat * (1.0 - p_hat) / n + z * z / (4.0 * n * n))
    lo = 0.0 if successes == 0 else max(center - half, 0.0)
    hi = 1.0 if successes == n else min(center + half, 1.0)
    return lo, hi


def _exceedance(
    cfg: "LinkConfig",
    threshold: float,
    n: int,
    seed: int,
    signal_shot_noise: bool,
) -> ProbabilityEstimate:
    """Pr(total count over one window >= threshold), common-random-number MC.

    Block b draws its displacements from stream (seed, 2b) and its background
    counts from stream (seed, 2b+1), so two calls with the same (n, seed) see
    identical randomness regardless of threshold or transmit power: estimates
    are pathwise comparable across parameter values.
    """
    if n < 10_000:
        raise ValueError(f"need at least 10000 samples, got {n}")
    if threshold < 0.0:
        raise ValueError(f"threshold must be >= 0, got {threshold}")

    gain = response_window_gain(cfg.neural.tau)
    b_mean = cfg.neural.mean_background
    sigma = cfg.beam.sigma_s

    hits = 0
    produced = 0
    block = 0
    while produced < n:
        count = min(KPI_BLOCK_SIZE, n - produced)
        r_stream = RngStream(seed, 2 * block)
        noise_stream = RngStream(seed, 2 * block + 1)
        u = r_stream.uniforms(count)
        r = sigma * np.sqrt(-2.0 * np.log(u))
        signal_counts = received_flux_batch(r, cfg) * gain
        if signal_shot_noise:
            # Extension beyond the additive model: the whole count is Poisson
            # with the signal folded into the mean.
            totals = np.array(
                [
                    sample_poisson(RngStream(seed, (2 * block + 1) * (1 << 20) + i), m)
                    for i, m in enumerate(signal_counts + b_mean)
                ],
                dtype=np.float64,
            )
        else:
            totals = signal_counts + sample_poisson(noise_stream, b_mean, count)
        hits += int(np.count_nonzero(totals >= threshold))
        produced += count
        block += 1

    lo, hi = wilson_interval(hits, n)
    return ProbabilityEstimate(value=hits / n, ci_low=lo, ci_high=hi, n_samples=n, seed=seed)


def p_hearing(
    cfg: "LinkConfig",
    n: int = 100_000,
    seed: int = 1234,
    signal_shot_noise: bool = False,
) -> ProbabilityEstimate:
    """Probability that a transmitted stimulus excites the neurons."""
    return _exceedance(cfg, cfg.neural.y_th, n, seed, signal_shot_noise)


def p_damage(
    cfg: "LinkConfig",
    n: int = 100_000,
    seed: int = 1234,
    signal_shot_noise: bool = False,
) -> ProbabilityEstimate:
    """Probability that the delivered count reaches the damage threshold.

    Same estimator and randomness as ``p_hearing`` with the higher threshold;
    the background-only branch is dropped since the background count is
    negligible against any damage threshold.
    """
    if math.isinf(cfg.neural.d_th):
        return ProbabilityEstimate(0.0, 0.0, 0.0, n, seed)
    return _exceedance(cfg, cfg.neural.d_th, n, seed, signal_shot_noise)


def p_false_hearing(neural: NeuralParams) -> FalseHearing:
    """Probability of excitation by background alone, both readings.

    literal: ``Pr(N >= y_th) = 1 - Q(y_th, B)`` for integer y_th >= 1 (1 when
    y_th = 0). cdf_closed_form: ``Q(y_th + 1, B)``, the Poisson CDF
    ``Pr(N <= y_th)``.
    """
    y_th = neural.y_th
    if not (y_th >= 0 and float(y_th).is_integer()):
        raise ValueError(
            f"count-domain false-hearing needs an integer threshold, got {y_th}"
        )
    b = neural.mean_background
    closed_form = regularized_gamma_q(y_th + 1.0, b)
    if y_th == 0:
        literal = 1.0
    else:
        literal = 1.0 - regularized_gamma_q(float(y_th), b)
    return FalseHearing(literal=literal, cdf_closed_form=closed_form)


@dataclass(frozen=True)
class KpiReport:
    """Full indicator set for one configuration."""

    p_hearing: ProbabilityEstimate
    p_false_hearing: FalseHearing
    p_damage: ProbabilityEstimate
    skin_irradiance: float  # W/m^2 at the emission spot
    neuron_irradiance: float  # W/m^2 over the fiber mode-field disc
    mpe_skin_ok: bool
    mpe_neuron_ok: bool
    dynamic_range_w: tuple[float, float] | None  # None when empty


def _fiber_output_power(cfg: "LinkConfig") -> float:
    """Optical power leaving the fiber at perfect alignment (worst case)."""
    state = derive_state(cfg)
    eta0 = optics.coupling_eta_closed(cfg.coupling, 0.0, cfg.series_ctl)
    return cfg.source.power_tx * state.h_l * state.a0 * state.g_c * eta0 * state.k


def safety_check(
    cfg: "LinkConfig",
    hearing_target: float = 0.9,
    n: int = 50_000,
    seed: int = 1234,
) -> tuple[float, float, bool, bool, tuple[float, float] | None]:
    """Irradiances, exposure verdicts, and the usable transmit-power range.

    skin irradiance: transmit power over the emission spot ``pi w_spot^2``;
    neuron irradiance: peak fiber output power over the mode-field disc
    ``pi w0^2``. Both are linear in transmit power, so the exposure-limited
    maximum power is closed-form. The dynamic range is the power interval
    where hearing probability meets the target while both exposure verdicts
    hold; it is found by bisection on the common-random-number estimator
    (monotone in power per seed) and is None when empty.
    """
    x = cfg.source.power_tx
    skin_area = math.pi * cfg.skin_spot_radius**2
    neuron_area = math.pi * cfg.coupling.omega0**2
    skin_irr = x / skin_area
    fiber_power = _fiber_output_power(cfg)
    neuron_irr = fiber_power / neuron_area

    mpe_skin_ok = skin_irr <= cfg.mpe_skin
    mpe_neuron_ok = neuron_irr <= cfg.mpe_neuron

    # Exposure-limited maximum transmit power (irradiance is linear in x).
    x_max_skin = cfg.mpe_skin * skin_area
    chain = fiber_power / x if x > 0.0 else _fiber_output_power(cfg.with_value("source.power_mw", 1.0)) * 1e3
    x_max_neuron = cfg.mpe_neuron * neuron_area / chain
    x_max = min(x_max_skin, x_max_neuron)

    def hearing_at(power_w: float) -> float:
        test_cfg = cfg.with_value("source.power_mw", power_w * 1e3)
        return p_hearing(test_cfg, n=n, seed=seed).value

    dynamic_range: tuple[float, float] | None
    if hearing_at(x_max) < hearing_target:
        dynamic_range = None
    else:
        lo, hi = 0.0, x_max
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if mid <= 0.0 or hearing_at(mid) >= hearing_target:
                hi = mid
            else:
                lo = mid
        dynamic_range = (hi, x_max)

    return skin_irr, neuron_irr, mpe_skin_ok, mpe_neuron_ok, dynamic_range


def kpi_report(
    cfg: "LinkConfig",
    n: int = 100_000,
    seed: int = 1234,
    signal_shot_noise: bool = False,
    hearing_target: float = 0.9,
    with_dynamic_range: bool = True,
) -> KpiReport:
    """Assemble every indicator for one configuration."""
    skin_irr, neuron_irr, skin_ok, neuron_ok, dyn = safety_check(
        cfg,
        hearing_target=hearing_target,
        n=max(n // 2, 10_000),
        seed=seed,
    ) if with_dynamic_range else (*_irradiances_only(cfg), None)
    return KpiReport(
        p_hearing=p_hearing(cfg, n=n, seed=seed, signal_shot_noise=signal_shot_noise),
        p_false_hearing=p_false_hearing(cfg.neural),
        p_damage=p_damage(cfg, n=n, seed=seed, signal_shot_noise=signal_shot_noise),
        skin_irradiance=skin_irr,
        neuron_irradiance=neuron_irr,
        mpe_skin_ok=skin_ok,
        mpe_neuron_ok=neuron_ok,
        dynamic_range_w=dyn,
    )


def _irradiances_only(cfg: "LinkConfig") -> tuple[float, float, bool, bool]:
    x = cfg.source.power_tx
    skin_irr = x / (math.pi * cfg.skin_spot_radius**2)
    neuron_irr = _fiber_output_power(cfg) / (math.pi * cfg.coupling.omega0**2)
    return skin_irr, neuron_irr, skin_irr <= cfg.mpe_skin, neuron_irr <= cfg.mpe_neuron
