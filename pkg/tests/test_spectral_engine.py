"""Exact diagonalization in the oscillator basis against independent oracles."""

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.sparse import diags
from scipy.sparse.linalg import eigsh

from fraxonium import spectral_engine as se


def qutrit_spec(e_c=0.08, e_l=0.03, n_fock=120):
    return se.preset_spec("qutrit", e_c, e_l, n_fock=n_fock)


class TestDisplacement:
    @pytest.mark.parametrize("z", [0.3, -0.7j, 0.5 + 0.5j, 1.0])
    def test_matches_exponentiated_ladder(self, z):
        dim = 60
        n = np.arange(1, dim)
        a = np.diag(np.sqrt(n), 1)
        exact = expm(z * a.conj().T - np.conj(z) * a)
        closed = se.displacement_matrix(dim, z)
        inner = slice(0, dim // 2)
        assert np.abs(closed[inner, inner] - exact[inner, inner]).max() < 1e-8

    def test_unitary_on_inner_block(self):
        d = se.displacement_matrix(120, 0.4 + 0.2j)
        g = d.conj().T @ d
        assert np.abs(g[:40, :40] - np.eye(40)).max() < 1e-10

    def test_large_dimension_stable(self):
        d = se.displacement_matrix(512, 1.0j)
        assert np.isfinite(d).all()

    def test_rejects_negative_index(self):
        with pytest.raises(se.SpectralError):
            se.displacement_element(-1, 0, 0.5)


class TestHamiltonian:
    def test_oscillator_limit(self):
        # a vanishing junction leaves the bare LC ladder
        spec = se.CircuitSpec(e_c=0.1, e_l=0.2, harmonics=(se.HarmonicTerm(1, 1e-14),))
        w, _ = se.diagonalize(se.build_hamiltonian(spec), 6)
        expected = np.sqrt(8 * 0.1 * 0.2) * (np.arange(6) + 0.5)
        assert np.allclose(w, expected, atol=1e-10)

    def test_hermitian(self):
        h = se.build_hamiltonian(qutrit_spec(n_fock=80).with_flux(0.37)).entries
        assert np.abs(h - h.conj().T).max() < 1e-12

    def test_real_space_oracle(self):
        # independent finite-difference diagonalization on a phase grid
        e_c, e_l = 0.08, 0.03
        spec = qutrit_spec(e_c, e_l, n_fock=140)
        w_fock, _ = se.diagonalize(se.build_hamiltonian(spec), 4)

        n_pts, span = 8001, 40.0
        phi = np.linspace(-span, span, n_pts)
        h_grid = phi[1] - phi[0]
        u = e_l / 2 * phi**2 - np.cos(2 * phi) + np.pi**2 * e_l / 4 * np.cos(phi)
        kin = 4 * e_c / h_grid**2
        ham = diags(
            [u + 2 * kin, -kin * np.ones(n_pts - 1), -kin * np.ones(n_pts - 1)],
            [0, 1, -1],
        )
        w_grid = eigsh(ham.tocsc(), k=4, sigma=u.min(), which="LM", return_eigenvectors=False)
        assert np.abs(np.sort(w_grid) - w_fock).max() < 1e-5

    def test_flux_operator_commutation(self):
        spec = qutrit_spec(n_fock=100)
        phi = se.flux_operator(spec).entries
        n = se.charge_operator(spec).entries
        comm = phi @ n - n @ phi
        assert np.abs(comm[:50, :50] - 1j * np.eye(50)).max() < 1e-10

    def test_harmonic_phase_offset_encodes_sine(self):
        # amplitude A at offset pi/2 must act as -A sin(phi)
        spec = se.CircuitSpec(
            e_c=0.1, e_l=0.1, harmonics=(se.HarmonicTerm(1, 0.3, np.pi / 2),), n_fock=80
        )
        h = se.build_hamiltonian(spec).entries
        sigma = spec.sigma
        n = np.arange(1, 80)
        a = np.diag(np.sqrt(n), 1)
        phi_op = sigma / np.sqrt(2) * (a + a.conj().T)
        num = np.sqrt(8 * spec.e_c * spec.e_l)
        h_ref = num * np.diag(np.arange(80) + 0.5) - 0.3 * expm(1j * phi_op).imag @ np.eye(80)
        inner = slice(0, 40)
        assert np.abs(h[inner, inner] - h_ref[inner, inner]).max() < 1e-8


class TestSpectrum:
    def test_parity_alternates_in_symmetric_double_well(self):
        spec = se.preset_spec("fluxonium", 0.1, 0.03, n_fock=120)
        sweep = se.sweep_flux(spec, [0.0], k=4, parities=True)
        p = sweep.parities[0]
        assert np.allclose(np.abs(p), 1, atol=1e-8)

    def test_sweep_even_in_flux(self):
        spec = qutrit_spec(n_fock=100)
        sweep = se.sweep_flux(spec, [-0.4, 0.4], k=5)
        assert np.allclose(sweep.energies[0], sweep.energies[1], atol=1e-10)

    def test_qutrit_multiplet(self):
        w, _ = se.diagonalize(se.build_hamiltonian(qutrit_spec()), 4)
        spread = w[2] - w[0]
        gap = w[3] - w[2]
        assert spread < 0.2 * gap

    def test_convergence_check_requires_growth(self):
        with pytest.raises(se.SpectralError):
            se.convergence_check(qutrit_spec(), 4, 100, 100)

    def test_unknown_preset(self):
        with pytest.raises(se.SpectralError):
            se.preset_spec("nope", 0.1, 0.1)


class TestDipoles:
    def test_selection_rules_at_zero_flux(self):
        chart = se.dipole_chart(qutrit_spec(), k=6)
        same = chart.parities[:, None] * chart.parities[None, :] > 0
        off = ~np.eye(6, dtype=bool)
        assert np.abs(chart.phi_elems[same & off]).max() < 1e-8
        assert np.abs(chart.charge_elems[same & off]).max() < 1e-8

    def test_flux_breaks_selection_rules(self):
        chart = se.dipole_chart(qutrit_spec().with_flux(0.3), k=4)
        assert abs(chart.phi_elems[0, 2]) > 1e-4

    def test_transition_energies_scaled_by_plasma(self):
        chart = se.dipole_chart(qutrit_spec(), k=4)
        de = abs(chart.level_energies[0] - chart.level_energies[3])
        assert chart.transition_energies[0, 3] == pytest.approx(
            de / chart.plasma_frequency, rel=1e-12
        )

    def test_dipole_vs_flux_shapes(self):
        out = se.dipole_vs_flux(qutrit_spec(n_fock=80), [(0, 1), (0, 3)], [0.0, 0.2])
        assert out["phi"].shape == (2, 2)
        assert not out["crossing"].all()
