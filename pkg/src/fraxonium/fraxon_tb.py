"""Low-energy tight-binding model of the fraxon states.

Each of the d lowest potential minima hosts a Gaussian-localized state with
on-site energy eps_l; quantum phase slips couple adjacent minima with a WKB
hopping t.  The barrier region is approximated by an effective cosine
E_J_bar [1 - cos(L phi)] whose inverse period L is fixed so the corrected
minima spacing maps onto 2 pi, which reduces the hopping to the transmon
tunneling result.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import potential_forge, spectral_engine
from .potential_forge import EngineeredPotential, QuditPotentialSpec


@dataclass(frozen=True)
class FraxonParams:
    """Circuit energies (units of E_J) feeding the tight-binding construction."""

    d: int
    e_c: float
    e_l: float
    correction_order: int = 0

    def __post_init__(self):
        if self.e_c <= 0 or self.e_l <= 0:
            raise ValueError("E_C and E_L must be positive")

    @property
    def eta(self) -> float:
        return self.e_l

    def potential(self) -> EngineeredPotential:
        return potential_forge.solve_coefficients(
            QuditPotentialSpec(self.d, self.eta, self.correction_order)
        )


@dataclass
class TightBindingModel:
    """Assembled d x d tridiagonal fraxon Hamiltonian and its effective scales."""

    d: int
    eps: np.ndarray  # on-site energies, well order l = -floor(d/2) .. upward
    t: float
    L_eff: float
    e_j_bar: float
    e_l_bar: float
    e_c_bar: float
    ell_d: float
    overlap_s: float  # nearest-neighbor Gaussian overlap, diagnostic only

    @property
    def matrix(self) -> np.ndarray:
        m = np.diag(self.eps).astype(float)
        off = -self.t * np.ones(self.d - 1)
        m += np.diag(off, 1) + np.diag(off, -1)
        return m

    def eigenvalues(self) -> np.ndarray:
        return eigh_tridiagonal(self.eps, -self.t * np.ones(self.d - 1), eigvals_only=True)


def minimum_position(params: FraxonParams, l: int, phi_x: float = 0.0) -> float:
    """First-order-corrected minimum phi_l including its flux dependence."""
    pot = params.potential()
    spec = pot.spec
    L = spec.leading_order
    x = potential_forge._base_node(spec, l)
    ns = pot.orders
    a = pot.amplitudes
    corr = np.sum(ns * a * np.sin(ns * x)) if len(a) else 0.0
    return x - params.eta / L**2 * (x - phi_x) + params.eta / L**2 * corr


def curvature_energy(params: FraxonParams, l: int = 0, phi_x: float = 0.0) -> float:
    """Effective inductive energy E_L_bar,d from the curvature at minimum l."""
    pot = params.potential()
    spec = pot.spec
    L = spec.leading_order
    phi_l = minimum_position(params, l, phi_x)
    ns = pot.orders
    a = pot.amplitudes
    harm = np.sum(a * ns**2 * np.cos(ns * phi_l)) if len(a) else 0.0
    return params.e_l - spec.leading_sign * L**2 * np.cos(L * phi_l) - params.e_l * harm


def effective_scales(params: FraxonParams, phi_x: float = 0.0):
    """(L, E_J_bar, E_L_bar, E_C_bar, ell_d) of the effective cosine model.

    L is fixed by mapping the corrected spacing of adjacent minima onto 2 pi;
    for the qutrit this reduces to L = 2 / (1 - eta / 4).
    """
    lo = params.potential().spec.well_indices()[0]
    phi0 = minimum_position(params, int(lo), 0.0)
    phi1 = minimum_position(params, int(lo) + 1, 0.0)
    L = 2 * np.pi / (phi1 - phi0)
    e_l_bar = curvature_energy(params, 0 if params.d % 2 else int(lo), phi_x)
    e_j_bar = e_l_bar / L**2
    e_c_bar = L**2 * params.e_c
    ell_d = (8 * params.e_c / e_l_bar) ** 0.25
    return L, e_j_bar, e_l_bar, e_c_bar, ell_d


def onsite_energy(
    params: FraxonParams, l: int, phi_x: float = 0.0, mode: str = "expectation"
) -> float:
    """On-site fraxon energy eps_l.

    ``simple`` mode is the flux parabola E_L (phi_l - phi_x)^2 / 2 -
    E_L phi_l^2 / 2 + E_0; ``expectation`` evaluates the full potential on
    the Gaussian well state, which smears each harmonic by exp(-n^2 l_d^2/4).
    """
    pot = params.potential()
    spec = pot.spec
    if l not in spec.well_indices():
        raise ValueError(f"well index {l} outside the {params.d}-minima window")
    L = spec.leading_order
    phi_l = minimum_position(params, l, phi_x)
    if mode == "simple":
        e_l_bar0 = curvature_energy(params, 0 if params.d % 2 else spec.well_indices()[0], 0.0)
        phi0 = minimum_position(params, 0 if params.d % 2 else spec.well_indices()[0], 0.0)
        e0 = 0.5 * np.sqrt(8 * params.e_c * e_l_bar0) + _full_potential(pot, params, phi0, 0.0)
        return (
            params.e_l / 2 * (phi_l - phi_x) ** 2 - params.e_l / 2 * phi_l**2 + e0
        )
    if mode != "expectation":
        raise ValueError(f"unknown mode {mode!r}")
    e_l_bar = curvature_energy(params, l, phi_x)
    ell = (8 * params.e_c / e_l_bar) ** 0.25
    ns = pot.orders
    a = pot.amplitudes
    harm = (
        params.e_l * np.sum(a * np.exp(-(ns**2) * ell**2 / 4) * np.cos(ns * phi_l))
        if len(a)
        else 0.0
    )
    return (
        0.5 * np.sqrt(8 * params.e_c * e_l_bar)
        + params.e_l / 4 * (ell**2 + 2 * (phi_l - phi_x) ** 2)
        - ell**2 / 4 * e_l_bar
        + spec.leading_sign * np.exp(-(L**2) * ell**2 / 4) * np.cos(L * phi_l)
        + harm
    )


def _full_potential(pot, params, phi, phi_x):
    u = params.e_l / 2 * (phi - phi_x) ** 2 + pot.leading_sign * np.cos(
        pot.spec.leading_order * phi
    )
    for n, a in pot.coefficients:
        u += params.e_l * a * np.cos(n * phi)
    return u


def hopping(params: FraxonParams, phi_x: float = 0.0):
    """WKB phase-slip amplitude t of the effective transmon model.

    t = 2 sqrt(2/pi) * hbar omega_p * (8 E_J_bar / E_C_bar)^(1/4)
        * exp(-sqrt(8 E_J_bar / E_C_bar)),  hbar omega_p = sqrt(8 E_C_bar E_J_bar).

    Returns (t, scales) with scales = (L, E_J_bar, E_L_bar, E_C_bar, ell_d).
    """
    scales = effective_scales(params, phi_x)
    L, e_j_bar, e_l_bar, e_c_bar, _ = scales
    ratio = e_j_bar / e_c_bar
    if ratio < 3:
        warnings.warn(
            f"E_J_bar/E_C_bar = {ratio:.2f} < 3: WKB hopping is unreliable",
            stacklevel=2,
        )
    arg = np.sqrt(8 * ratio)
    t = 2 * np.sqrt(2 / np.pi) * np.sqrt(8 * e_c_bar * e_j_bar) * (8 * ratio) ** 0.25 * np.exp(-arg)
    return float(t), scales


def gaussian_overlap(params: FraxonParams) -> float:
    """Nearest-neighbor overlap s of adjacent well Gaussians (diagnostic)."""
    L, _, _, _, ell = effective_scales(params)
    spacing = 2 * np.pi / L
    return float(np.exp(-(spacing**2) / (4 * ell**2)))


def build_model(
    params: FraxonParams, phi_x: float = 0.0, mode: str = "expectation"
) -> TightBindingModel:
    """Assemble the d x d tridiagonal fraxon Hamiltonian at flux phi_x."""
    pot = params.potential()
    ls = pot.spec.well_indices()
    eps = np.array([onsite_energy(params, int(l), phi_x, mode) for l in ls])
    t, (L, e_j_bar, e_l_bar, e_c_bar, ell) = hopping(params, phi_x)
    return TightBindingModel(
        d=params.d,
        eps=eps,
        t=t,
        L_eff=L,
        e_j_bar=e_j_bar,
        e_l_bar=e_l_bar,
        e_c_bar=e_c_bar,
        ell_d=ell,
        overlap_s=gaussian_overlap(params),
    )


def circuit_spec(params: FraxonParams, n_fock: int = 140) -> spectral_engine.CircuitSpec:
    """Exact-diagonalization spec for the same engineered circuit."""
    pot = params.potential()
    harmonics = tuple(
        spectral_engine.HarmonicTerm(n, params.e_l * a) for n, a in pot.coefficients
    ) + (spectral_engine.HarmonicTerm(pot.spec.leading_order, float(pot.leading_sign)),)
    return spectral_engine.CircuitSpec(
        e_c=params.e_c, e_l=params.e_l, harmonics=harmonics, n_fock=n_fock
    )


@dataclass
class ComparisonReport:
    """Per-flux deviation between tight-binding and exact low-energy spectra."""

    phix_grid: np.ndarray
    tb_levels: np.ndarray  # (n_flux, d), ground-aligned
    exact_levels: np.ndarray  # (n_flux, d), ground-aligned
    max_deviation: float
    mean_deviation: float
    t_tb: float
    t_exact: float

    @property
    def t_ratio(self) -> float:
        """t_exact / t_TB; below 1 when WKB overestimates the splitting."""
        return self.t_exact / self.t_tb


def compare_with_exact(
    params: FraxonParams,
    phix_grid,
    mode: str = "expectation",
    n_fock: int = 140,
) -> ComparisonReport:
    """Deviation of the TB lowest-d levels from exact diagonalization.

    Both spectra are aligned by subtracting their own ground-state energy at
    phi_x = 0 (absolute offsets differ between the models).  The exact
    hopping is read off the zero-flux multiplet spread of the uniform
    tridiagonal model.
    """
    phix_grid = np.atleast_1d(np.asarray(phix_grid, dtype=float))
    d = params.d
    spec = circuit_spec(params, n_fock)
    sweep = spectral_engine.sweep_flux(spec, phix_grid, k=d)

    tb0 = build_model(params, 0.0, mode).eigenvalues()[0]
    w0, _ = spectral_engine.diagonalize(
        spectral_engine.build_hamiltonian(spec.with_flux(0.0)), d
    )
    tb_levels = np.array(
        [build_model(params, px, mode).eigenvalues() for px in phix_grid]
    ) - tb0
    exact_levels = sweep.energies - w0[0]

    dev = np.abs(tb_levels - exact_levels)
    t_tb = build_model(params, 0.0, mode).t
    spread_exact = w0[d - 1] - w0[0]
    t_exact = spread_exact / (4 * np.cos(np.pi / (d + 1)))
    return ComparisonReport(
        phix_grid=phix_grid,
        tb_levels=tb_levels,
        exact_levels=exact_levels,
        max_deviation=float(dev.max()),
        mean_deviation=float(dev.mean()),
        t_tb=float(t_tb),
        t_exact=float(t_exact),
    )
