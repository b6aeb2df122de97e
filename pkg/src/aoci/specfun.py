"""Scalar special functions and series/quadrature engines.

Everything in this module is pure and deterministic: identical inputs
(including control settings) give bit-identical outputs, so results are
reproducible and safe to evaluate concurrently.

The classical functions (``erf``, ``bessel_j1``, ``bessel_i0``,
``regularized_gamma_q``) are thin, contract-checked wrappers over
scipy/cephes; their accuracy is pinned by independent brute-force series
oracles in the test suite.

Two confluent hypergeometric sums are implemented explicitly because no
common library exposes them:

* ``humbert_psi2`` -- the double series
  ``Psi2(1; b1, b2; x, y) = sum_{m,n} (1)_{m+n} x^m y^n / ((b1)_m (b2)_n m! n!)``
* ``f4_general`` -- the quadruple series
  ``sum_{m,k,n,l} (1)_{m+n} (1)_{k+l} (1)_{n+l} x1^m x2^k y1^n y2^l
  / ((1)_n (2)_m (1)_l (2)_k m! n! k! l!)``

Both evaluators use compensated summation, a truncation rule that stops
only after three consecutive constant-total-order shells contribute below
tolerance (term magnitude is not monotone per index when arguments
alternate in sign), and a cancellation guard that raises
``PrecisionLossError`` instead of returning silently wrong digits.
Factorial/Pochhammer magnitudes are always handled in log space with the
sign tracked separately, so no intermediate overflows occur.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate
from scipy import special as _special

__all__ = [
    "SeriesControl",
    "QuadControl",
    "NumericalError",
    "SeriesConvergenceError",
    "PrecisionLossError",
    "QuadratureExhaustedError",
    "erf",
    "bessel_j1",
    "bessel_i0",
    "regularized_gamma_q",
    "humbert_psi2",
    "f4_general",
    "integrate_semi_infinite",
]

# Ratio of sum(|term|) to |sum(term)| above which a result has lost too
# many digits to trust at double precision.
_CANCELLATION_LIMIT = 1.0e12

_LOG_MAX_DOUBLE = math.log(np.finfo(np.float64).max)


@dataclass(frozen=True)
class SeriesControl:
    """Truncation control for the hypergeometric series evaluators.

    rel_tol / abs_tol bound the estimated truncation error at
    ``max(rel_tol * |result|, abs_tol)``; ``max_terms_per_index`` caps every
    summation index independently.
    """

    rel_tol: float = 1.0e-10
    abs_tol: float = 1.0e-300
    max_terms_per_index: int = 400

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0):
            raise ValueError(f"SeriesControl.rel_tol must be > 0, got {self.rel_tol}")
        if not (self.abs_tol >= 0.0):
            raise ValueError(f"SeriesControl.abs_tol must be >= 0, got {self.abs_tol}")
        if self.max_terms_per_index < 8:
            raise ValueError(
                f"SeriesControl.max_terms_per_index must be >= 8, got {self.max_terms_per_index}"
            )


@dataclass(frozen=True)
class QuadControl:
    """Control for adaptive quadrature of semi-infinite integrals.

    ``tail_cutoff_sigmas`` fixes where the integration interval is truncated,
    in units of the integrand's decay scale supplied by the caller.
    """

    rel_tol: float = 1.0e-9
    abs_tol: float = 1.0e-300
    max_subdivisions: int = 2000
    tail_cutoff_sigmas: float = 10.0

    def __post_init__(self) -> None:
        if not (self.rel_tol > 0.0):
            raise ValueError(f"QuadControl.rel_tol must be > 0, got {self.rel_tol}")
        if not (self.abs_tol >= 0.0):
            raise ValueError(f"QuadControl.abs_tol must be >= 0, got {self.abs_tol}")
        if self.max_subdivisions < 4:
            raise ValueError(
                f"QuadControl.max_subdivisions must be >= 4, got {self.max_subdivisions}"
            )
        if not (self.tail_cutoff_sigmas >= 6.0):
            raise ValueError(
                f"QuadControl.tail_cutoff_sigmas must be >= 6, got {self.tail_cutoff_sigmas}"
            )


class NumericalError(Exception):
    """Base class for numerical evaluation failures.

    Carries the best available estimate so callers can decide whether a
    degraded value is still usable (e.g. to fall back to another method).
    """

    def __init__(self, message: str, value: float = math.nan, err_est: float = math.inf):
        super().__init__(message)
        self.value = value
        self.err_est = err_est


class SeriesConvergenceError(NumericalError):
    """Series terms did not decay below tolerance within the index caps."""


class PrecisionLossError(NumericalError):
    """Alternating cancellation destroyed the requested accuracy."""


class QuadratureExhaustedError(NumericalError):
    """Adaptive subdivision budget exhausted before reaching tolerance."""


# ---------------------------------------------------------------------------
# Classical special functions
# ---------------------------------------------------------------------------


def erf(x: float) -> float:
    """Error function; total, odd, |erf| <= 1."""
    return math.erf(x)


def bessel_j1(x: float) -> float:
    """Bessel function of the first kind, order 1."""
    return float(_special.j1(x))


def bessel_i0(x: float, scaled: bool = False) -> float:
    """Modified Bessel function of the first kind, order 0.

    With ``scaled=True`` returns ``exp(-x) * I0(x)``, which stays bounded for
    all x >= 0. The unscaled value overflows the double range near x ~ 713;
    that case raises ``OverflowError`` rather than returning ``inf``.
    """
    if x < 0.0:
        raise ValueError(f"bessel_i0 requires x >= 0, got {x}")
    if scaled:
        return float(_special.i0e(x))
    if x <= 700.0:
        return float(_special.i0(x))
    log_value = x + math.log(float(_special.i0e(x)))
    if log_value >= _LOG_MAX_DOUBLE:
        raise OverflowError(
            f"bessel_i0({x}) exceeds the double range; call with scaled=True"
        )
    return math.exp(log_value)


def regularized_gamma_q(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) = Gamma(s, x) / Gamma(s).

    For integer s = k+1 this equals the Poisson CDF ``Pr(N <= k)`` at mean x.
    """
    if not (s > 0.0):
        raise ValueError(f"regularized_gamma_q requires s > 0, got {s}")
    if x < 0.0:
        raise ValueError(f"regularized_gamma_q requires x >= 0, got {x}")
    return float(_special.gammaincc(s, x))


# ---------------------------------------------------------------------------
# Humbert Psi2 double series
# ---------------------------------------------------------------------------


def _signed_log_pow(base: float, exponent: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """log|base**n| and sign(base)**n for integer exponents n >= 0.

    base == 0 maps to log 0 = -inf for n > 0 and log 1 = 0 for n == 0.
    """
    n = np.asarray(exponent, dtype=np.float64)
    if base == 0.0:
        logs = np.where(n == 0, 0.0, -np.inf)
        return logs, np.ones_like(n)
    logs = n * math.log(abs(base))
    if base > 0.0:
        signs = np.ones_like(n)
    else:
        signs = np.where(np.asarray(exponent) % 2 == 0, 1.0, -1.0)
    return logs, signs


def _check_converged(
    shell_history: list[float], accumulated: float, ctl: SeriesControl
) -> bool:
    """Three consecutive anti-diagonal shells below the running tolerance."""
    if len(shell_history) < 3:
        return False
    tol = max(ctl.rel_tol * abs(accumulated), ctl.abs_tol)
    return all(c <= tol for c in shell_history[-3:])


def _tail_estimate(shell_history: list[float]) -> float:
    """Geometric extrapolation of the remaining tail from the last shells."""
    tail = shell_history[-1]
    if len(shell_history) >= 2 and shell_history[-2] > 0.0:
        ratio = min(shell_history[-1] / shell_history[-2], 0.99)
        tail = shell_history[-1] * ratio / (1.0 - ratio)
    return tail


def humbert_psi2(
    b1: float, b2: float, x: float, y: float, ctl: SeriesControl | None = None
) -> float:
    """Humbert double hypergeometric series Psi2(1; b1, b2; x, y).

    ``sum_{m,n>=0} (1)_{m+n} x^m y^n / ((b1)_m (b2)_n m! n!)``, summed along
    anti-diagonals of constant m+n. The series is entire in both arguments,
    but for strongly negative x the terms alternate and cancel; when the
    cancellation exceeds what double precision can absorb a
    ``PrecisionLossError`` is raised.

    Raises
    ------
    SeriesConvergenceError
        If the shells have not decayed below tolerance once either index
        reaches ``ctl.max_terms_per_index``.
    PrecisionLossError
        If ``sum|term| / |sum term|`` exceeds 1e12.
    """
    value, _ = _psi2_eval(b1, b2, x, y, ctl or SeriesControl())
    return value


def _psi2_single_series(b: float, z: float, ctl: SeriesControl, label: str) -> tuple[float, float]:
    """Psi2 with one argument zero: ``sum_m z^m / (b)_m``, cancellation-free.

    The sum is the confluent 1F1(1; b; z). For z < 0 the direct series
    alternates and its condition number grows like e^|z|, so Kummer's
    transformation ``1F1(1; b; z) = e^z 1F1(b-1; b; -z)`` is applied instead:
    the transformed series has nonnegative terms only and is summed by a
    multiplicative term recurrence, keeping errors at a few ulps.
    """
    # Terms grow until the index reaches ~|z|, so an index cap below that can
    # never satisfy the decay criterion; fail fast with the honest reason.
    if abs(z) > b + ctl.max_terms_per_index:
        raise SeriesConvergenceError(
            f"humbert_psi2: |argument| ~ {abs(z):.3g} needs more terms than "
            f"max_terms_per_index={ctl.max_terms_per_index} ({label})"
        )
    if z >= 0.0:
        prefactor = 1.0
        ratio = lambda m, term: term * (z / (b + m))
    else:
        prefactor = math.exp(z)
        w = -z
        ratio = lambda m, term: term * (w * (b - 1.0 + m) / ((b + m) * (m + 1.0)))

    total = 0.0
    term = 1.0
    below = 0
    history: list[float] = []
    for m in range(ctl.max_terms_per_index + 1):
        if not math.isfinite(term):
            raise PrecisionLossError(
                f"humbert_psi2: series terms overflow the double range ({label})",
                value=prefactor * total,
            )
        total += term
        history.append(abs(term))
        if abs(term) <= max(ctl.rel_tol * abs(total), ctl.abs_tol):
            below += 1
            if below >= 3:
                return prefactor * total, prefactor * (
                    _tail_estimate(history) + 1.0e-16 * total
                )
        else:
            below = 0
        term = ratio(m, term)
    raise SeriesConvergenceError(
        f"humbert_psi2 did not converge within max_terms_per_index="
        f"{ctl.max_terms_per_index} ({label})",
        value=prefactor * total,
        err_est=prefactor * history[-1],
    )


def _g_table(x: float, n_max: int) -> list[float]:
    """Values ``g_n(x) = 1F1(n+1; 2; x)`` for n = 0..n_max, in closed form.

    ``g_n(x) = e^x L_{n-1}^{(1)}(-x) / n`` for n >= 1 (generalized Laguerre),
    evaluated by the stable three-term recurrence; ``g_0 = (e^x - 1)/x``.
    This avoids the e^|x|-conditioned cancellation of the defining series at
    negative x, where g_n oscillates with slowly decaying amplitude.
    """
    g0 = 1.0 if x == 0.0 else (math.exp(x) - 1.0) / x
    values = [g0]
    if n_max == 0:
        return values
    ex = math.exp(x)
    w = -x
    lkm1 = 1.0  # L_0^{(1)}(w)
    lk = 2.0 - w  # L_1^{(1)}(w)
    values.append(ex * lkm1)
    if n_max >= 2:
        values.append(ex * lk / 2.0)
    for k in range(1, n_max - 1):
        lkp1 = ((2.0 * k + 2.0 - w) * lk - (k + 1.0) * lkm1) / (k + 1.0)
        if not math.isfinite(lkp1):
            raise PrecisionLossError(
                f"hypergeometric inner functions overflow at order {k + 1} for x={x}"
            )
        values.append(ex * lkp1 / (k + 2.0))
        lkm1, lk = lk, lkp1
    return values


def _psi2_21(x: float, y: float, ctl: SeriesControl) -> tuple[float, float]:
    """Psi2(1; 2, 1; x, y) as ``sum_n g_n(x) y^n / n!`` with closed-form g_n.

    The y-weights are nonnegative and g_n is evaluated without cancellation,
    so the only cancellation left is the sign oscillation of g_n itself,
    whose amplitude is bounded; the sum is well conditioned for all x <= 0,
    y >= 0. Needs roughly y + O(sqrt(y)) terms, so very large y exhausts the
    index cap and raises SeriesConvergenceError.
    """
    cap = ctl.max_terms_per_index
    if y > cap:
        raise SeriesConvergenceError(
            f"humbert_psi2: the y-weights peak near index {y:.3g}, beyond "
            f"max_terms_per_index={cap}; use the integral route instead"
        )
    gs = _g_table(x, min(cap, 64))
    total = 0.0
    weight = 1.0  # y^n / n!
    below = 0
    history: list[float] = []
    for n in range(cap + 1):
        if n >= len(gs):
            gs = _g_table(x, min(cap, len(gs) * 2))
        term = gs[n] * weight
        if not math.isfinite(term):
            raise PrecisionLossError(
                f"humbert_psi2: terms overflow the double range (x={x}, y={y})",
                value=total,
            )
        total += term
        history.append(abs(term))
        if abs(term) <= max(ctl.rel_tol * abs(total), ctl.abs_tol):
            below += 1
            if below >= 3:
                return total, _tail_estimate(history) + 1.0e-16 * abs(total)
        else:
            below = 0
        weight *= y / (n + 1.0)
    raise SeriesConvergenceError(
        f"humbert_psi2 did not converge within max_terms_per_index={cap} "
        f"(x={x}, y={y}); y is too large for the series route",
        value=total,
        err_est=history[-1],
    )


def _psi2_eval(
    b1: float, b2: float, x: float, y: float, ctl: SeriesControl
) -> tuple[float, float]:
    """Evaluate Psi2 returning ``(value, truncation_error_estimate)``."""
    if not (b1 > 0.0 and b2 > 0.0):
        raise ValueError(f"humbert_psi2 requires b1, b2 > 0, got ({b1}, {b2})")
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"humbert_psi2 requires finite arguments, got ({x}, {y})")

    # (1)_{m+n} cancels against m! (resp. n!) when the other index is pinned
    # at zero, collapsing the double sum to sum z^m / (b)_m.
    if y == 0.0:
        return _psi2_single_series(b1, x, ctl, f"x={x}, y=0")
    if x == 0.0:
        return _psi2_single_series(b2, y, ctl, f"x=0, y={y}")
    if b1 == 2.0 and b2 == 1.0:
        return _psi2_21(x, y, ctl)

    # Generic parameters: anti-diagonal walk with log-space terms. Accurate
    # to ~1e-11 in the mildly cancelling regimes; the cancellation guards
    # refuse regimes where double precision cannot deliver digits. The
    # stably computable single-argument boundary values give the order of
    # magnitude the result should have, against which the roundoff floor of
    # the alternating sum is checked (without this an alternating sum whose
    # shells swing far above the result can plateau on pure roundoff and
    # pass a ratio test self-consistently).
    def boundary_scale(b: float, z: float) -> float:
        try:
            value, _ = _psi2_single_series(b, z, ctl, f"z={z} boundary")
        except SeriesConvergenceError as exc:
            value = exc.value  # partial sum still carries the magnitude
        return abs(value) if math.isfinite(value) else 0.0

    magnitude_scale = max(boundary_scale(b1, x) * boundary_scale(b2, y), 1.0e-300)

    cap = ctl.max_terms_per_index
    lg_b1 = math.lgamma(b1)
    lg_b2 = math.lgamma(b2)

    total = 0.0
    comp = 0.0  # Neumaier compensation
    abs_total = 0.0
    shells: list[float] = []

    for t in range(2 * cap + 1):
        m_lo = max(0, t - cap)
        m_hi = min(t, cap)
        m = np.arange(m_lo, m_hi + 1)
        n = t - m

        log_x, sign_x = _signed_log_pow(x, m)
        log_y, sign_y = _signed_log_pow(y, n)
        log_terms = (
            _special.gammaln(1.0 + t)
            + log_x
            + log_y
            - (_special.gammaln(b1 + m) - lg_b1)
            - (_special.gammaln(b2 + n) - lg_b2)
            - _special.gammaln(m + 1.0)
            - _special.gammaln(n + 1.0)
        )
        if float(np.max(log_terms)) > _LOG_MAX_DOUBLE - 20.0:
            raise PrecisionLossError(
                f"humbert_psi2: terms overflow the double range "
                f"(b1={b1}, b2={b2}, x={x}, y={y})",
                value=total + comp,
            )
        terms = sign_x * sign_y * np.exp(log_terms)

        shell = math.fsum(terms.tolist())
        abs_total += float(np.sum(np.abs(terms)))
        if 1.0e-16 * abs_total > 1.0e-2 * magnitude_scale:
            raise PrecisionLossError(
                "humbert_psi2: the roundoff floor of the alternating sum "
                f"exceeds the expected result magnitude (b1={b1}, b2={b2}, "
                f"x={x}, y={y})",
                value=total + comp,
            )
        # Neumaier compensated accumulation of the shell contribution.
        s = total + shell
        if abs(total) >= abs(shell):
            comp += (total - s) + shell
        else:
            comp += (shell - s) + total
        total = s

        shells.append(abs(shell))
        if _check_converged(shells, total + comp, ctl):
            result = total + comp
            if abs_total > _CANCELLATION_LIMIT * max(abs(result), 1.0e-300):
                raise PrecisionLossError(
                    "humbert_psi2: cancellation exceeds double precision "
                    f"(sum|term|/|sum| ~ {abs_total / max(abs(result), 1e-300):.2e})",
                    value=result,
                    err_est=abs_total * 1.0e-16,
                )
            err = _tail_estimate(shells) + 1.0e-16 * abs_total
            return result, err

    best = total + comp
    raise SeriesConvergenceError(
        f"humbert_psi2 did not converge within max_terms_per_index={cap} "
        f"(b1={b1}, b2={b2}, x={x}, y={y})",
        value=best,
        err_est=shells[-1] if shells else math.inf,
    )


# ---------------------------------------------------------------------------
# Quadruple hypergeometric series
# ---------------------------------------------------------------------------
#
# The quadruple sum factorizes exactly over its index pairs:
#
#   sum_{m,k,n,l} (1)_{m+n} (1)_{k+l} (1)_{n+l} x1^m x2^k y1^n y2^l
#                 / ((1)_n (2)_m (1)_l (2)_k m! n! k! l!)
#     = sum_{n,l} C(n+l, n) y1^n y2^l g_n(x1) g_l(x2),
#
#   g_n(x) = sum_m C(m+n, m) x^m / (m+1)!
#
# (regroup (1)_{m+n}/((1)_n (2)_m m!) = C(m+n,m)/(m+1)! per half, and
# (1)_{n+l}/(n! l!) = C(n+l,n)). The inner functions are the same
# ``g_n(x) = 1F1(n+1; 2; x)`` used by the Psi2 evaluator and are computed in
# closed form via the Laguerre recurrence; the outer double series converges
# geometrically with ratio ~ (y1+y2) and carries the anti-diagonal
# truncation rule. A literal four-index shell walk computes the identical
# sum at O(T^4) cost, which is what the brute-force oracle in the test
# suite does.


class _GTable:
    """Lazily grown table of g_n(x) values for one argument x."""

    def __init__(self, x: float):
        self.x = x
        self.values: list[float] = _g_table(x, 64)

    def upto(self, n: int) -> list[float]:
        while len(self.values) <= n:
            self.values = _g_table(self.x, 2 * max(n, len(self.values)))
        return self.values


def f4_general(
    x1: float, x2: float, y1: float, y2: float, ctl: SeriesControl | None = None
) -> float:
    """Quadruple hypergeometric series with the (1)/(2) Pochhammer pattern.

    ``sum (1)_{m+n} (1)_{k+l} (1)_{n+l} x1^m x2^k y1^n y2^l /
    ((1)_n (2)_m (1)_l (2)_k m! n! k! l!)`` for ``0 <= y1, y2 < 1``.
    Symmetric under the simultaneous swap (x1, y1) <-> (x2, y2). Converges
    iff y1 + y2 < 1; near that boundary the outer shells decay slowly and
    the evaluation may exhaust the index cap, which raises
    ``SeriesConvergenceError`` (callers are expected to fall back to a
    quadrature route in that regime).
    """
    value, _ = _f4_eval(x1, x2, y1, y2, ctl or SeriesControl())
    return value


def _f4_eval(
    x1: float, x2: float, y1: float, y2: float, ctl: SeriesControl
) -> tuple[float, float]:
    """Evaluate the quadruple series returning ``(value, error_estimate)``."""
    for name, y in (("y1", y1), ("y2", y2)):
        if not (0.0 <= y < 1.0):
            raise ValueError(f"f4_general requires {name} in [0, 1), got {y}")
    if not (math.isfinite(x1) and math.isfinite(x2)):
        raise ValueError(f"f4_general requires finite x arguments, got ({x1}, {x2})")

    cap = ctl.max_terms_per_index
    g1 = _GTable(x1)
    g2 = _GTable(x2)

    # When y == 0 the corresponding index is pinned to 0 below, so the log is
    # never multiplied by a nonzero power; 0.0 avoids 0 * -inf.
    log_y1 = math.log(y1) if y1 > 0.0 else 0.0
    log_y2 = math.log(y2) if y2 > 0.0 else 0.0

    total = 0.0
    comp = 0.0
    abs_total = 0.0
    shells: list[float] = []

    for t in range(2 * cap + 1):
        if y1 == 0.0 and y2 == 0.0 and t > 0:
            shell_terms = [0.0]
        else:
            n_lo, n_hi = max(0, t - cap), min(t, cap)
            if y1 == 0.0:
                n_hi = 0
            if y2 == 0.0:
                n_lo = t
            if n_lo > n_hi:
                shell_terms = [0.0]
            else:
                n = np.arange(n_lo, n_hi + 1)
                l = t - n
                gv1 = np.asarray(g1.upto(n_hi))[n]
                gv2 = np.asarray(g2.upto(int(l.max())))[l]
                log_w = (
                    _special.gammaln(t + 1.0)
                    - _special.gammaln(n + 1.0)
                    - _special.gammaln(l + 1.0)
                    + n * log_y1
                    + l * log_y2
                )
                shell_terms = (np.exp(log_w) * gv1 * gv2).tolist()

        shell = math.fsum(shell_terms)
        abs_total += math.fsum(abs(v) for v in shell_terms)
        s = total + shell
        if abs(total) >= abs(shell):
            comp += (total - s) + shell
        else:
            comp += (shell - s) + total
        total = s

        shells.append(abs(shell))
        if _check_converged(shells, total + comp, ctl):
            result = total + comp
            if abs_total > _CANCELLATION_LIMIT * max(abs(result), 1.0e-300):
                raise PrecisionLossError(
                    "f4_general: cancellation exceeds double precision",
                    value=result,
                    err_est=abs_total * 1.0e-16,
                )
            err = _tail_estimate(shells) + 1.0e-16 * abs_total
            return result, err

    best = total + comp
    raise SeriesConvergenceError(
        f"f4_general did not converge within max_terms_per_index={cap} "
        f"(x1={x1}, x2={x2}, y1={y1}, y2={y2}); "
        "use the quadrature route for this argument regime",
        value=best,
        err_est=shells[-1] if shells else math.inf,
    )


# ---------------------------------------------------------------------------
# Adaptive quadrature on (0, inf)
# ---------------------------------------------------------------------------


def integrate_semi_infinite(
    f,
    decay_scale: float,
    ctl: QuadControl | None = None,
    breakpoints: tuple[float, ...] = (),
) -> tuple[float, float]:
    """Integrate ``f`` over (0, inf) for an integrand with a known decay scale.

    The semi-infinite domain is truncated at
    ``ctl.tail_cutoff_sigmas * decay_scale`` and handed to adaptive
    Gauss-Kronrod subdivision (QUADPACK). ``breakpoints`` may list interior
    abscissae where the integrand is concentrated or non-smooth; they are
    forwarded to the subdivision so narrow features are never stepped over.

    Returns
    -------
    (value, err_est)
        ``err_est`` is the achieved absolute-error estimate, which satisfies
        ``err_est <= max(rel_tol * |value|, abs_tol)`` on success.

    Raises
    ------
    QuadratureExhaustedError
        If the subdivision budget is exhausted first. The exception carries
        the best estimate and its achieved error.
    """
    ctl = ctl or QuadControl()
    if not (decay_scale > 0.0 and math.isfinite(decay_scale)):
        raise ValueError(f"decay_scale must be positive and finite, got {decay_scale}")

    cutoff = ctl.tail_cutoff_sigmas * decay_scale
    interior = sorted({p for p in breakpoints if 0.0 < p < cutoff})
    result = _integrate.quad(
        f,
        0.0,
        cutoff,
        epsabs=ctl.abs_tol,
        epsrel=ctl.rel_tol,
        limit=ctl.max_subdivisions,
        points=interior if interior else None,
        full_output=1,
    )
    value, err_est = float(result[0]), float(result[1])
    if len(result) > 3:
        # QUADPACK flagged trouble; accept only if tolerance was still met.
        if err_est > max(ctl.rel_tol * abs(value), ctl.abs_tol):
            raise QuadratureExhaustedError(
                f"integrate_semi_infinite: {result[3]}".strip(),
                value=value,
                err_est=err_est,
            )
    return value, err_est
