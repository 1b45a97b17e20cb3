"""Potential engineering: closed forms, degeneracy, corrections."""

import numpy as np
import pytest

from fraxonium import potential_forge as pf


def coeff_dict(pot):
    return dict(pot.coefficients)


class TestClosedForms:
    def test_qutrit_a1(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04))
        assert coeff_dict(pot)[1] == pytest.approx(np.pi**2 / 4, rel=1e-12)

    def test_d4_a1(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(4, 0.04))
        assert coeff_dict(pot)[1] == pytest.approx(np.pi**2 / (4 * np.sqrt(2)), rel=1e-12)

    def test_d5_pair(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(5, 0.04))
        c = coeff_dict(pot)
        assert c[1] == pytest.approx(np.pi**2 / 4, rel=1e-12)
        assert c[2] == pytest.approx(-np.pi**2 / 16, rel=1e-12)

    def test_qutrit_first_order_factor(self):
        eta = 0.05
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, eta, correction_order=1))
        assert coeff_dict(pot)[1] == pytest.approx(np.pi**2 / 4 * (1 - eta / 4), rel=1e-12)

    def test_qutrit_minimum_shift(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04))
        assert pf.minima_shift_first_order(pot, 1) == pytest.approx(-np.pi / 4, rel=1e-12)
        assert pf.minima_shift_first_order(pot, -1) == pytest.approx(np.pi / 4, rel=1e-12)
        assert pf.minima_shift_first_order(pot, 0) == 0.0


class TestDegeneracy:
    @pytest.mark.parametrize("d", [3, 4, 5, 6, 7])
    def test_lowest_minima_degenerate(self, d):
        eta = 0.04
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(d, eta))
        mins = pf.find_minima_numeric(pot)
        assert len(mins) == d
        vals = np.array([v for _, v in mins])
        assert vals.max() - vals.min() < 5 * eta**2

    def test_first_order_tightens_degeneracy(self):
        eta = 0.08
        worse = pf.solve_coefficients(pf.QuditPotentialSpec(5, eta, 0))
        better = pf.solve_coefficients(pf.QuditPotentialSpec(5, eta, 1))

        def spread(pot):
            vals = [v for _, v in pf.find_minima_numeric(pot)]
            return max(vals) - min(vals)

        assert spread(better) < spread(worse)

    def test_minima_positions_match_numeric_search(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(5, 0.03, correction_order=1))
        numeric = np.array([p for p, _ in pf.find_minima_numeric(pot)])
        analytic = np.array(sorted(p for _, p in pot.minima))
        assert np.allclose(numeric, analytic, atol=5e-3)


class TestEvaluation:
    def test_zero_flux_symmetry(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04))
        phi = np.linspace(-3, 3, 101)
        u = pf.evaluate_potential(pot, phi)
        assert np.allclose(u, u[::-1], atol=1e-14)

    def test_flux_shifts_quadratic_term_only(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04))
        phi = 0.7
        diff = pf.evaluate_potential(pot, phi, 0.3) - pf.evaluate_potential(pot, phi, 0.0)
        expected = 0.02 * ((phi - 0.3) ** 2 - phi**2)
        assert diff == pytest.approx(expected, abs=1e-14)

    def test_scalar_input_returns_float(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04))
        assert isinstance(pf.evaluate_potential(pot, 0.5), float)


class TestValidation:
    def test_rejects_small_dimension(self):
        with pytest.raises(pf.PotentialError):
            pf.QuditPotentialSpec(1, 0.04)

    def test_rejects_nonperturbative_eta(self):
        with pytest.raises(pf.PotentialError):
            pf.QuditPotentialSpec(3, 1.5)

    def test_rejects_bad_correction_order(self):
        with pytest.raises(pf.PotentialError):
            pf.QuditPotentialSpec(3, 0.04, correction_order=2)

    def test_rejects_out_of_window_well(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04))
        with pytest.raises(pf.PotentialError):
            pf.minima_shift_first_order(pot, 5)

    def test_d2_has_no_engineered_harmonics(self):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(2, 0.04))
        assert pot.coefficients == ()
        assert len(pot.minima) == 2
