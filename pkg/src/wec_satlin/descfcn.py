"""Quasi-linear treatment of generator current saturation.

A current-limited controller clips its commanded current at +/- i_max.  For
a sinusoidal command the clipped output is a saturated sine, and each odd
harmonic of that waveform is a fixed fraction of the command amplitude: the
saturation factor ``f_sat(n, I)`` with clipping depth ``I = i_max / |command|``.
Treating the clipper as the gain ``f_sat,1`` at the fundamental (and
``f_sat,n`` at harmonic n) turns the nonlinear loop back into circuit
algebra, at the price of a scalar transcendental equation for the operating
point, solved here by damped fixed-point iteration with a bisection
fallback.

The payoff: a clipped waveform packs up to 4/pi more fundamental current
than any sinusoid of the same peak, so nonlinear clipping beats the best
linear controller under a hard current limit.  ``linear_saturation_equivalent``
quantifies that linear baseline for comparison.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, DomainError
from .mismatch import (
    OperatingPoint,
    TheveninSource,
    gamma_for_amplitude_target,
    matched_baseline,
    operating_point,
)

__all__ = [
    "SaturationFactors",
    "HarmonicComponent",
    "SaturationSolution",
    "saturation_factor",
    "saturation_factors",
    "solve_operating_point",
    "classic_sidf_power",
    "equivalent_z",
    "linear_saturation_equivalent",
    "reconstruct_current",
]

SQUARE_WAVE_GAIN = 4.0 / math.pi  # fundamental of a square wave over its peak


@dataclass(frozen=True)
class SaturationFactors:
    """Harmonic content of a saturated sine, keyed by odd harmonic index.

    ``i_script`` is the clipping depth i_max/|command|; values >= 1 mean the
    clipper never engages.  ``factors[n]`` is the signed ratio of the nth
    harmonic amplitude to the command amplitude.
    """

    i_script: float
    factors: dict[int, float]


@dataclass(frozen=True)
class HarmonicComponent:
    """One harmonic of the converged loop: current and load-voltage phasors
    (cosine convention) and the average power it delivers to the load."""

    n: int
    current: complex
    v_load: complex
    power: float


@dataclass(frozen=True)
class SaturationSolution:
    """Converged quasi-linear operating point of the clipped-current loop."""

    i_max: float
    i_temp: complex  # pre-clipper controller output phasor
    psi: float  # phase of i_temp
    factors: SaturationFactors
    harmonics: list[HarmonicComponent]
    p_total: float  # W, summed over harmonics
    converged: bool
    iterations: int
    residual: float

    @property
    def fundamental(self) -> HarmonicComponent:
        return self.harmonics[0]


def saturation_factor(n: int, i_script: float) -> float:
    """Harmonic-n amplitude of a clipped unit sine, relative to the command.

    For clipping depth I = i_max/|command| and theta = n asin(I):

        n = 1, I >= 1:   1
        n = 1, I < 1:    (2/pi) (I sqrt(1 - I^2) + theta)
        n odd >= 3, I<1: (4/pi) (n sqrt(1 - I^2) sin(theta) - I cos(theta))
                               / (n (n^2 - 1))
        even n, or n != 1 with I >= 1:  0

    The fundamental is continuous and rises from (4/pi) I (square-wave
    limit) to 1 at clipping onset; higher harmonics are signed and decay at
    least as 1/n^2.
    """
    if n < 1 or n != int(n):
        raise DomainError(f"harmonic index must be a positive integer, got {n}")
    if i_script <= 0.0:
        raise DomainError(f"clipping depth must be positive, got {i_script}")
    n = int(n)
    if n % 2 == 0:
        return 0.0
    if i_script >= 1.0:
        return 1.0 if n == 1 else 0.0
    root = math.sqrt(1.0 - i_script**2)
    theta = n * math.asin(i_script)
    if n == 1:
        return (2.0 / math.pi) * (i_script * root + theta)
    return (
        (4.0 / math.pi)
        * (n * root * math.sin(theta) - i_script * math.cos(theta))
        / (n * (n**2 - 1))
    )


def saturation_factors(i_script: float, n_max: int = 9) -> SaturationFactors:
    """Saturation factors for every odd harmonic up to ``n_max``."""
    return SaturationFactors(
        i_script=i_script,
        factors={n: saturation_factor(n, i_script) for n in range(1, n_max + 1, 2)},
    )


def equivalent_z(n: int, z_c: complex, f_sat_n: float, z_th: complex) -> complex:
    """Normalized load impedance seen at harmonic ``n`` through the clipper.

    Approximating the clipper by the gain f_sat,n turns the controller
    impedance into Z_c / f_sat,n, i.e. z_n = Z_c / (f_sat,n Z_th*).  A zero
    factor means no current flows at this harmonic; the open-circuit marker
    (complex infinity) is returned, which maps to gamma = 1.
    """
    if f_sat_n < 0.0:
        f_sat_n = abs(f_sat_n)  # sign lives in the harmonic phase
    if f_sat_n == 0.0:
        return complex(math.inf, 0.0)
    return complex(z_c) / (f_sat_n * complex(z_th).conjugate())


def _fundamental_gain(f: float, src: TheveninSource, z_c: complex, i_max: float) -> float:
    """f_sat,1 evaluated at the command amplitude implied by loop gain ``f``."""
    i_temp_mag = abs(src.v_th) / abs(f * src.z_th + z_c)
    return saturation_factor(1, i_max / i_temp_mag)


def solve_operating_point(
    src: TheveninSource,
    i_max: float,
    z_c: complex | None = None,
    n_harmonics: int = 9,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> SaturationSolution:
    """Solve the clipped-current loop for its quasi-linear operating point.

    Closes the pair

        i_temp = v_th / (f z_th + z_c),   f = f_sat,1(i_max / |i_temp|)

    for the fundamental gain f in (0, 1].  Damped fixed-point iteration
    (damping 0.5) handles the typical monotone case; if the residual stops
    shrinking, the solver falls back to bisection, which is safe because the
    residual f - f_sat,1(f) is continuous, negative as f -> 0+ and
    non-negative at f = 1.

    The default controller is the conjugate-matched one, z_c = z_th*: for a
    hard current limit, clipping the unconstrained-optimal command is the
    optimal steady-state policy.

    Harmonic phasors (cosine convention) follow the odd-waveform expansion:
    harmonic n of the clipped command has amplitude f_sat,n |i_temp| and
    phase n psi + (n - 1) pi/2.  The source drives only the fundamental;
    every higher harmonic sees the short-circuited source impedance at its
    own frequency and therefore dissipates (negative power).

    Raises :class:`ConvergenceError` (with residual trace) if the loop does
    not close within ``max_iter`` evaluations.
    """
    if i_max <= 0.0:
        raise DomainError(f"current limit must be positive, got {i_max}")
    if n_harmonics < 1 or n_harmonics % 2 == 0:
        raise DomainError(f"n_harmonics must be odd and positive, got {n_harmonics}")
    if z_c is None:
        z_c = src.z_th.conjugate()
    z_c = complex(z_c)

    residuals: list[float] = []
    i_unsat = src.v_th / (src.z_th + z_c)
    if i_max >= abs(i_unsat):
        f = 1.0
        iterations = 0
    else:
        f = _fundamental_gain(1.0, src, z_c, i_max)
        prev_residual = math.inf
        rising = 0
        iterations = 0
        converged = False
        while iterations < max_iter:
            iterations += 1
            g = _fundamental_gain(f, src, z_c, i_max)
            residual = abs(g - f)
            residuals.append(residual)
            if residual < tol:
                converged = True
                break
            rising = rising + 1 if residual >= prev_residual else 0
            prev_residual = residual
            if rising >= 2:
                break  # oscillating; hand over to bisection
            f = f + 0.5 * (g - f)
        if not converged:
            lo, hi = 1e-15, 1.0
            while iterations < max_iter:
                iterations += 1
                f = 0.5 * (lo + hi)
                g = _fundamental_gain(f, src, z_c, i_max)
                residual = abs(g - f)
                residuals.append(residual)
                if residual < tol:
                    converged = True
                    break
                if f - g < 0.0:
                    lo = f
                else:
                    hi = f
            if not converged:
                raise ConvergenceError(
                    f"operating point did not converge in {max_iter} iterations "
                    f"(last residual {residuals[-1]:.3e})",
                    residuals=residuals,
                )

    i_temp = src.v_th / (f * src.z_th + z_c)
    psi = cmath.phase(i_temp)
    i_temp_mag = abs(i_temp)
    factors = saturation_factors(i_max / i_temp_mag, n_harmonics)

    harmonics: list[HarmonicComponent] = []
    p_total = 0.0
    for n, f_n in factors.factors.items():
        current = f_n * i_temp_mag * cmath.exp(1j * (n * psi + (n - 1) * math.pi / 2.0))
        if n == 1:
            v_load = src.v_th - src.z_th * current
        else:
            v_load = -src.z_th_at(n) * current
        power = 0.5 * (v_load * current.conjugate()).real
        p_total += power
        harmonics.append(HarmonicComponent(n=n, current=current, v_load=v_load, power=power))

    return SaturationSolution(
        i_max=i_max,
        i_temp=i_temp,
        psi=psi,
        factors=factors,
        harmonics=harmonics,
        p_total=p_total,
        converged=True,
        iterations=iterations,
        residual=residuals[-1] if residuals else 0.0,
    )


def classic_sidf_power(solution: SaturationSolution) -> float:
    """Average power keeping only the fundamental of the clipped current.

    This is the classic single-harmonic describing-function estimate.  Since
    every higher harmonic dissipates, it upper-bounds the full sum
    ``solution.p_total``.
    """
    if not solution.converged:
        raise DomainError("solution did not converge; no power estimate available")
    return solution.fundamental.power


def linear_saturation_equivalent(src: TheveninSource, i_max: float) -> OperatingPoint:
    """Best purely linear controller meeting the same current limit.

    A linear controller keeps the current sinusoidal, so its peak equals its
    fundamental and the limit caps the current ratio at i_max/|I_m|.  The
    returned point sits on the minimum-current optimal contour at exactly
    that ratio, i.e. the highest-power linear design obeying the limit.
    Clipped (nonlinear) control beats this baseline whenever the limit binds
    hard, thanks to the up-to-4/pi fundamental boost.
    """
    baseline = matched_baseline(src)
    if i_max > baseline.i_peak_matched:
        raise DomainError(
            "current limit exceeds the matched current; no reduction is needed"
        )
    target = i_max / baseline.i_peak_matched
    gamma = gamma_for_amplitude_target(target, src.alpha, epsilon=-1)
    return operating_point(gamma, src.alpha, epsilon=-1)


def reconstruct_current(solution: SaturationSolution, omega: float, t) -> np.ndarray:
    """Time-domain current rebuilt from the harmonic phasors at times ``t``.

    Truncated at the solution's harmonic count, so the peak may exceed the
    clip level by a small Gibbs overshoot (about 2 percent at nine
    harmonics).
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for h in solution.harmonics:
        out += (h.current * np.exp(1j * h.n * omega * t)).real
    return out
