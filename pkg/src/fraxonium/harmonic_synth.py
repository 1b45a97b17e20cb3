"""Effective energy-phase relations of junction+inductor modular elements.

A modular element is a Josephson junction (energy tau * E_L) in series with
an inductance (energy E_L).  Minimizing over the internal phase drop yields
an effective relation containing all harmonics with alternating signs,
epsilon_n ~ (-1)^n tau^n.  Parallel composition with fractional flux offsets
filters the harmonics; series composition of two identical elements flips
the sign of the surviving component.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar


class SynthesisError(RuntimeError):
    """Raised when a minimization or composition cannot be carried out."""


@dataclass(frozen=True)
class ModularElement:
    """Series junction+inductor pair with ratio tau = E_J / E_L."""

    tau: float
    e_l: float = 1.0  # inductive energy scale of the pair

    def __post_init__(self):
        if self.tau < 0:
            raise SynthesisError(f"tau must be >= 0, got {self.tau}")
        if self.tau >= 1:
            warnings.warn(
                f"tau = {self.tau} outside the perturbative range (tau < 1); "
                "numeric minimization is still exact",
                stacklevel=2,
            )


@dataclass(frozen=True)
class EffectiveEnergyPhase:
    """Tabulated energy-phase relation with its Fourier decomposition.

    ``cos_coeffs[n]`` / ``sin_coeffs[n]`` multiply cos(n phi) / sin(n phi);
    index 0 holds the constant offset.  ``period_order`` k means the relation
    is 2*pi/k periodic.
    """

    phi: np.ndarray
    energy: np.ndarray
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray
    period_order: int = 1

    @property
    def fourier(self):
        """List of (n, epsilon_n) for the cosine content, n >= 1."""
        return [(n, float(c)) for n, c in enumerate(self.cos_coeffs)][1:]

    def __call__(self, phi):
        phi = np.asarray(phi, dtype=float)
        ns = np.arange(len(self.cos_coeffs))
        arg = np.multiply.outer(phi, ns)
        out = np.cos(arg) @ self.cos_coeffs + np.sin(arg) @ self.sin_coeffs
        return out if out.ndim else float(out)

    def dominant_harmonic(self):
        """(order, amplitude) of the largest cosine component with n >= 1."""
        mags = np.abs(self.cos_coeffs[1:])
        if mags.size == 0 or mags.max() == 0:
            return 0, 0.0
        n = int(np.argmax(mags)) + 1
        return n, float(self.cos_coeffs[n])


def _pair_energy(elem: ModularElement, phi, dphi):
    return elem.e_l * (
        -elem.tau * np.cos((phi + dphi) / 2) + (phi - dphi) ** 2 / 8
    )


def minimize_internal_phase(elem: ModularElement, phi: float, max_iter: int = 10_000):
    """Global minimizer (dphi*, energy) of the two-term element energy.

    Solves the self-consistency dphi = phi - 2 tau sin[(phi + dphi)/2] by a
    damped fixed point (the map is a contraction for tau < 1); for larger tau
    a bracketed 1-D search over dphi in [phi - 2 pi, phi + 2 pi] is used.
    """
    tau = elem.tau
    if tau == 0:
        return phi, float(_pair_energy(elem, phi, phi))
    if tau < 0.9:
        dphi = phi
        for _ in range(max_iter):
            new = phi - 2 * tau * np.sin((phi + dphi) / 2)
            new = 0.5 * dphi + 0.5 * new
            if abs(new - dphi) < 1e-12:
                dphi = new
                break
            dphi = new
        else:
            return _search_internal_phase(elem, phi)
        return float(dphi), float(_pair_energy(elem, phi, dphi))
    return _search_internal_phase(elem, phi)


def _search_internal_phase(elem: ModularElement, phi: float):
    """Fallback: dense grid plus bounded refinement over one 4 pi window."""
    grid = np.linspace(phi - 2 * np.pi, phi + 2 * np.pi, 801)
    vals = _pair_energy(elem, phi, grid)
    i = int(np.argmin(vals))
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(
        lambda d: _pair_energy(elem, phi, d),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12},
    )
    if not res.success:
        raise SynthesisError(f"internal-phase search failed at phi={phi}")
    return float(res.x), float(res.fun)


def _decompose(phi: np.ndarray, energy: np.ndarray, n_max: int):
    g = len(phi)
    spec = np.fft.rfft(energy) / g
    cos_c = np.zeros(n_max + 1)
    sin_c = np.zeros(n_max + 1)
    cos_c[0] = spec[0].real
    top = min(n_max, len(spec) - 1)
    cos_c[1 : top + 1] = 2 * spec[1 : top + 1].real
    sin_c[1 : top + 1] = -2 * spec[1 : top + 1].imag
    return cos_c, sin_c


def effective_relation(
    elem: ModularElement, grid_size: int = 1024, n_max: int = 32
) -> EffectiveEnergyPhase:
    """Tabulate the minimized element energy over [0, 2 pi) and Fourier-analyze it."""
    if grid_size < 64:
        raise SynthesisError("grid_size must be >= 64")
    phi = np.linspace(0, 2 * np.pi, grid_size, endpoint=False)
    energy = np.array([minimize_internal_phase(elem, p)[1] for p in phi])
    cos_c, sin_c = _decompose(phi, energy, n_max)
    return EffectiveEnergyPhase(phi, energy, cos_c, sin_c, period_order=1)


def _resample(cos_c, sin_c, grid_size, period_order):
    phi = np.linspace(0, 2 * np.pi, grid_size, endpoint=False)
    ns = np.arange(len(cos_c))
    arg = np.outer(phi, ns)
    energy = np.cos(arg) @ cos_c + np.sin(arg) @ sin_c
    return EffectiveEnergyPhase(phi, energy, cos_c, sin_c, period_order)


def parallel_compose(rel: EffectiveEnergyPhase, copies: int) -> EffectiveEnergyPhase:
    """Sum of ``copies`` flux-shifted replicas with step 2 pi / copies.

    Harmonics whose order is not a multiple of ``copies`` cancel exactly;
    the survivors are multiplied by ``copies``.
    """
    if copies < 1:
        raise SynthesisError("copies must be >= 1")
    if copies == 1:
        return rel
    cos_c = rel.cos_coeffs.copy()
    sin_c = rel.sin_coeffs.copy()
    ns = np.arange(len(cos_c))
    keep = ns % copies == 0
    cos_c = np.where(keep, copies * cos_c, 0.0)
    sin_c = np.where(keep, copies * sin_c, 0.0)
    return _resample(cos_c, sin_c, len(rel.phi), rel.period_order * copies)


def series_negate(rel: EffectiveEnergyPhase, dominance: float = 3.0) -> EffectiveEnergyPhase:
    """Energy-phase relation of two identical copies of ``rel`` in series.

    For a relation dominated by A cos(k phi) the internal phase relaxes so
    that the pair contributes -2|A| |cos(k phi / 2)|, which keeps the
    2 pi / k periodicity while flipping the sign of the leading Fourier
    component.
    """
    k, amp = rel.dominant_harmonic()
    if k == 0:
        return _resample(
            np.zeros_like(rel.cos_coeffs), np.zeros_like(rel.sin_coeffs), len(rel.phi), rel.period_order
        )
    others = np.abs(rel.cos_coeffs[1:]).copy()
    others[k - 1] = 0.0
    if others.size and others.max() * dominance > abs(amp):
        raise SynthesisError(
            "no dominant harmonic: series composition of a mixed relation is ambiguous"
        )
    phi = rel.phi
    energy = -2 * abs(amp) * np.abs(np.cos(k * phi / 2))
    cos_c, sin_c = _decompose(phi, energy, len(rel.cos_coeffs) - 1)
    return EffectiveEnergyPhase(phi, energy, cos_c, sin_c, period_order=k)


@dataclass(frozen=True)
class KiteFit:
    """Two-harmonic fit of an asymmetric kite: U = -E_J cos(phi) + E_K cos(2 phi)."""

    e_j: float
    e_k: float
    sin_residual: float  # sin(phi) content left by branch asymmetry
    offset: float
    fit_residual: float  # rms of everything beyond the fitted model
    relation: EffectiveEnergyPhase


def kite_potential(
    e_j1: float,
    e_j2: float,
    e_l1: float,
    e_l2: float,
    grid_size: int = 1024,
    residual_tol: float = 0.05,
) -> KiteFit:
    """Compose two modular branches in parallel with a pi flux bias and fit them.

    The fitted model is U = -E_J cos(phi) + E_K cos(2 phi); for nominally
    equal branches the 2 pi-periodic parts cancel and E_J vanishes.  The full
    Fourier table is always available on the returned relation; a warning is
    emitted when content beyond the two-term model exceeds ``residual_tol``
    of the leading amplitude.
    """
    for name, val in [("e_j1", e_j1), ("e_j2", e_j2), ("e_l1", e_l1), ("e_l2", e_l2)]:
        if val <= 0:
            raise SynthesisError(f"{name} must be positive, got {val}")
    rel1 = effective_relation(ModularElement(e_j1 / e_l1, e_l1), grid_size)
    rel2 = effective_relation(ModularElement(e_j2 / e_l2, e_l2), grid_size)
    phi = rel1.phi
    energy = rel1.energy + rel2(phi + np.pi)
    cos_c, sin_c = _decompose(phi, energy, len(rel1.cos_coeffs) - 1)
    combined = EffectiveEnergyPhase(phi, energy, cos_c, sin_c, period_order=1)
    e_j = -cos_c[1]
    e_k = cos_c[2]
    model = cos_c[0] - e_j * np.cos(phi) + e_k * np.cos(2 * phi) + sin_c[1] * np.sin(phi)
    resid = float(np.sqrt(np.mean((energy - model) ** 2)))
    lead = max(abs(e_j), abs(e_k), 1e-300)
    if resid > residual_tol * lead:
        warnings.warn(
            f"kite fit residual {resid:.3g} exceeds {residual_tol} x leading amplitude; "
            "harmonics beyond the two-term model are significant",
            stacklevel=2,
        )
    return KiteFit(
        e_j=float(e_j),
        e_k=float(e_k),
        sin_residual=float(sin_c[1]),
        offset=float(cos_c[0]),
        fit_residual=resid,
        relation=combined,
    )
