"""Tests for the saturation describing functions and the operating-point solve."""

import math

import numpy as np
import pytest

from oracles import clipped_sine_fourier
from wec_satlin import (
    DomainError,
    TheveninSource,
    classic_sidf_power,
    equivalent_z,
    gamma_from_z,
    linear_saturation_equivalent,
    matched_baseline,
    power_ratio,
    reconstruct_current,
    saturation_factor,
    saturation_factors,
    solve_operating_point,
    z_from_gamma,
)

SQ = 4.0 / math.pi


class TestSaturationFactor:
    def test_unclipped_fundamental_is_unity(self):
        for i_script in (1.0, 1.5, 10.0, math.inf):
            assert saturation_factor(1, i_script) == 1.0

    def test_unclipped_harmonics_vanish(self):
        for n in (3, 5, 7):
            assert saturation_factor(n, 2.0) == 0.0

    def test_even_harmonics_vanish(self):
        for n in (2, 4, 6, 8):
            assert saturation_factor(n, 0.3) == 0.0

    def test_continuity_at_clipping_onset(self):
        below = saturation_factor(1, 1.0 - 1e-12)
        assert below == pytest.approx(1.0, abs=1e-6)
        assert saturation_factor(1, 1.0) == 1.0

    def test_square_wave_asymptote_fundamental(self):
        i_script = 1e-4
        assert saturation_factor(1, i_script) / i_script == pytest.approx(
            SQ, abs=1e-6
        )

    def test_square_wave_asymptote_third(self):
        i_script = 1e-4
        assert saturation_factor(3, i_script) / i_script == pytest.approx(
            SQ / 3.0, abs=1e-6
        )

    def test_against_quadrature_oracle(self):
        for n in (1, 3, 5, 7, 9):
            for i_script in np.arange(0.1, 0.95, 0.1):
                oracle = clipped_sine_fourier(n, float(i_script))
                assert saturation_factor(n, float(i_script)) == pytest.approx(
                    oracle, abs=1e-8
                )

    def test_fundamental_dominates_harmonics(self):
        for i_script in np.linspace(0.02, 0.98, 49):
            f1 = saturation_factor(1, float(i_script))
            for n in (3, 5, 7, 9):
                assert abs(saturation_factor(n, float(i_script))) < f1

    def test_harmonic_decay_away_from_nulls(self):
        # magnitudes fall off with n except near the oscillatory nulls of
        # the coefficient formula; 0.5 sits on one (|f_9| > |f_7| there),
        # confirmed against quadrature below
        for i_script in (0.1, 0.3, 0.7, 0.9):
            mags = [abs(saturation_factor(n, i_script)) for n in (1, 3, 5, 7, 9)]
            assert all(b <= a + 1e-15 for a, b in zip(mags, mags[1:]))

    def test_known_ordering_inversion_at_half_depth(self):
        f7 = saturation_factor(7, 0.5)
        f9 = saturation_factor(9, 0.5)
        assert abs(f9) > abs(f7)
        assert f9 == pytest.approx(clipped_sine_fourier(9, 0.5), abs=1e-8)
        assert f7 == pytest.approx(clipped_sine_fourier(7, 0.5), abs=1e-8)

    def test_fundamental_monotone_in_depth(self):
        grid = np.linspace(1e-6, 1.0, 500)
        vals = [saturation_factor(1, g) for g in grid]
        assert all(b >= a for a, b in zip(vals, vals[1:]))

    def test_guards(self):
        with pytest.raises(DomainError):
            saturation_factor(0, 0.5)
        with pytest.raises(DomainError):
            saturation_factor(1, 0.0)
        with pytest.raises(DomainError):
            saturation_factor(1, -0.2)

    def test_factors_bundle(self):
        bundle = saturation_factors(0.4, n_max=9)
        assert sorted(bundle.factors) == [1, 3, 5, 7, 9]
        assert 0.0 <= bundle.factors[1] <= 1.0


class TestEquivalentZ:
    def test_matched_unclipped(self):
        assert equivalent_z(1, 1.0 - 1.0j, 1.0, 1.0 + 1.0j) == pytest.approx(1.0)

    def test_half_gain_doubles_impedance(self):
        assert equivalent_z(1, 1.0 - 1.0j, 0.5, 1.0 + 1.0j) == pytest.approx(2.0)

    def test_open_circuit_marker(self):
        marker = equivalent_z(4, 1.0 + 0j, 0.0, 1.0 + 0j)
        assert math.isinf(marker.real)
        assert gamma_from_z(marker) == 1.0

    def test_round_trip_through_gamma(self):
        z = equivalent_z(3, 0.8 - 0.4j, 0.37, 1.1 + 0.9j)
        assert abs(z_from_gamma(gamma_from_z(z)) - z) < 1e-12


def make_source(alpha: float = 0.0, r: float = 1.0, v: complex = 10.0 + 0j):
    return TheveninSource(v_th=v, z_th=complex(r, alpha * r))


class TestOperatingPointSolve:
    def test_unsaturated_limit(self):
        src = make_source()
        base = matched_baseline(src)
        sol = solve_operating_point(src, i_max=2.0 * base.i_peak_matched)
        assert sol.factors.factors[1] == 1.0
        assert abs(sol.fundamental.current) == pytest.approx(base.i_peak_matched)
        assert sol.p_total == pytest.approx(base.p_matched, rel=1e-12)
        assert all(h.power == 0.0 for h in sol.harmonics[1:])

    def test_square_wave_limit(self):
        src = make_source(alpha=0.8)
        base = matched_baseline(src)
        i_max = 1e-3 * base.i_peak_matched
        sol = solve_operating_point(src, i_max)
        assert abs(sol.fundamental.current) == pytest.approx(SQ * i_max, rel=1e-3)

    def test_residual_and_phase_conditions(self):
        src = make_source(alpha=1.5)
        base = matched_baseline(src)
        for frac in (0.2, 0.5, 0.9):
            sol = solve_operating_point(src, frac * base.i_peak_matched)
            assert sol.residual < 1e-12
            # phase condition: the fundamental keeps the command's phase
            assert math.remainder(
                math.atan2(sol.fundamental.current.imag, sol.fundamental.current.real)
                - sol.psi,
                2.0 * math.pi,
            ) == pytest.approx(0.0, abs=1e-12)
            # amplitude condition
            f1 = sol.factors.factors[1]
            assert abs(sol.fundamental.current) == pytest.approx(
                f1 * abs(sol.i_temp), rel=1e-12
            )

    def test_fundamental_bounded_by_square_wave(self):
        src = make_source(alpha=2.0)
        base = matched_baseline(src)
        for frac in (0.05, 0.3, 0.7):
            i_max = frac * base.i_peak_matched
            sol = solve_operating_point(src, i_max)
            assert abs(sol.fundamental.current) <= SQ * i_max * (1.0 + 1e-12)
            gain = sol.factors.factors[1] / sol.factors.i_script
            assert 1.0 - 1e-12 <= gain <= SQ + 1e-12

    def test_gain_deepens_monotonically(self):
        src = make_source()
        base = matched_baseline(src)
        gains = []
        for frac in (0.9, 0.6, 0.3, 0.1, 0.02):
            sol = solve_operating_point(src, frac * base.i_peak_matched)
            gains.append(sol.factors.factors[1] / sol.factors.i_script)
        assert all(b >= a - 1e-12 for a, b in zip(gains, gains[1:]))

    def test_harmonics_dissipate(self):
        src = make_source(alpha=1.0)
        base = matched_baseline(src)
        sol = solve_operating_point(src, 0.4 * base.i_peak_matched)
        assert all(h.power <= 0.0 for h in sol.harmonics if h.n >= 3)
        assert sol.p_total <= classic_sidf_power(sol)

    def test_peak_respect_of_reconstruction(self):
        # at nine harmonics the truncated series overshoots the clip level
        # by under 2 percent for moderate clipping; deep clipping approaches
        # the square-wave partial-sum overshoot (~18 percent), so the bound
        # there is necessarily looser
        src = make_source()
        base = matched_baseline(src)
        t = np.linspace(0.0, 2.0 * math.pi, 20001)

        sol = solve_operating_point(src, 0.75 * base.i_peak_matched, n_harmonics=9)
        wave = reconstruct_current(sol, 1.0, t)
        assert np.max(np.abs(wave)) <= sol.i_max * 1.02

        deep = solve_operating_point(src, 0.05 * base.i_peak_matched, n_harmonics=9)
        wave = reconstruct_current(deep, 1.0, t)
        assert np.max(np.abs(wave)) <= deep.i_max * 1.20

    def test_guards(self):
        src = make_source()
        with pytest.raises(DomainError):
            solve_operating_point(src, 0.0)
        with pytest.raises(DomainError):
            solve_operating_point(src, 1.0, n_harmonics=4)

    def test_custom_controller(self):
        src = make_source(alpha=0.5)
        z_c = 2.0 - 0.3j
        base = matched_baseline(src)
        sol = solve_operating_point(src, 0.5 * base.i_peak_matched, z_c=z_c)
        # loop closure: i_temp (f z_th + z_c) = v_th
        f1 = sol.factors.factors[1]
        assert abs(sol.i_temp * (f1 * src.z_th + z_c) - src.v_th) < 1e-9 * abs(
            src.v_th
        )


class TestClassicSidfPower:
    def test_unsaturated_equals_matched(self):
        src = make_source(alpha=1.0)
        base = matched_baseline(src)
        sol = solve_operating_point(src, 10.0 * base.i_peak_matched)
        assert classic_sidf_power(sol) == pytest.approx(base.p_matched, rel=1e-12)

    def test_route_equivalence_with_mismatch_algebra(self):
        # on a purely resistive source the fundamental power equals the
        # mismatch-algebra power at the clipper's equivalent impedance
        src = make_source(alpha=0.0, r=0.7, v=4.0 + 0j)
        base = matched_baseline(src)
        for frac in (0.2, 0.5, 0.8):
            sol = solve_operating_point(src, frac * base.i_peak_matched)
            f1 = sol.factors.factors[1]
            z1 = equivalent_z(1, src.z_th.conjugate(), f1, src.z_th)
            expected = power_ratio(gamma_from_z(z1)) * base.p_matched
            assert classic_sidf_power(sol) == pytest.approx(expected, rel=1e-10)

    def test_bounds_full_sum(self):
        src = make_source(alpha=3.0)
        base = matched_baseline(src)
        for frac in (0.1, 0.4, 0.7):
            sol = solve_operating_point(src, frac * base.i_peak_matched)
            assert classic_sidf_power(sol) >= sol.p_total


class TestLinearBaseline:
    def test_full_limit_is_matched_point(self):
        src = make_source(alpha=1.0)
        base = matched_baseline(src)
        pt = linear_saturation_equivalent(src, base.i_peak_matched)
        assert pt.gamma == 0.0
        assert pt.power_ratio == 1.0

    def test_real_axis_case(self):
        src = make_source(alpha=0.0)
        base = matched_baseline(src)
        pt = linear_saturation_equivalent(src, 0.5 * base.i_peak_matched)
        assert pt.gamma.real == pytest.approx(0.5, abs=1e-9)
        assert pt.power_ratio == pytest.approx(0.75, abs=1e-8)
        assert pt.epsilon == -1

    def test_nonlinear_beats_linear_when_clipping_hard(self):
        src = make_source(alpha=0.0)
        base = matched_baseline(src)
        for frac in (0.2, 0.4, 0.6):
            i_max = frac * base.i_peak_matched
            sol = solve_operating_point(src, i_max)
            linear = linear_saturation_equivalent(src, i_max)
            assert sol.p_total > linear.power_ratio * base.p_matched

    def test_guard_above_matched(self):
        src = make_source()
        base = matched_baseline(src)
        with pytest.raises(DomainError):
            linear_saturation_equivalent(src, 1.5 * base.i_peak_matched)
