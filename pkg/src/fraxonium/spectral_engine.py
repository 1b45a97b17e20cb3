"""Circuit Hamiltonians in a truncated harmonic-oscillator Fock basis.

The circuit is a capacitor (E_C), inductor (E_L) and a set of harmonic
Josephson terms A cos(n phi + offset), all in units of the leading Josephson
energy E_J = 1.  The oscillator basis of the LC part gives a diagonal
sqrt(8 E_C E_L)(n + 1/2) term; each harmonic enters through displacement
operator matrix elements, with the external flux gauged into the Josephson
terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.linalg import eigh
from scipy.special import eval_genlaguerre, gammaln

from . import potential_forge


class SpectralError(RuntimeError):
    """Raised for invalid circuit specs or failed diagonalizations."""


@dataclass(frozen=True)
class HarmonicTerm:
    """One Fourier component of the Josephson potential.

    ``phase_offset`` pi/2 turns the cosine into -sin(n phi), as produced by
    kite asymmetries.
    """

    order: int
    amplitude: float
    phase_offset: float = 0.0

    def __post_init__(self):
        if self.order < 1:
            raise SpectralError(f"harmonic order must be >= 1, got {self.order}")


@dataclass(frozen=True)
class CircuitSpec:
    """Energies (units of E_J), harmonic content, flux and Fock truncation."""

    e_c: float
    e_l: float
    harmonics: tuple = ()
    phi_x: float = 0.0
    n_fock: int = 120

    def __post_init__(self):
        if self.e_c <= 0 or self.e_l <= 0:
            raise SpectralError("E_C and E_L must be positive")
        if self.n_fock < 2:
            raise SpectralError("n_fock must be >= 2")
        object.__setattr__(self, "harmonics", tuple(self.harmonics))

    @property
    def sigma(self) -> float:
        """Oscillator width (8 E_C / E_L)^(1/4)."""
        return (8 * self.e_c / self.e_l) ** 0.25

    def with_flux(self, phi_x: float) -> "CircuitSpec":
        return replace(self, phi_x=phi_x)


@dataclass(frozen=True)
class FockOperator:
    """Dense operator in the oscillator number basis."""

    entries: np.ndarray
    hermitian: bool = False

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass
class SpectrumSweep:
    """Eigenvalues (and optionally parities/eigenvectors) over a flux grid."""

    phix_grid: np.ndarray
    energies: np.ndarray  # (n_flux, k)
    parities: np.ndarray | None = None
    eigenvectors: list | None = None
    spec: CircuitSpec | None = None


@dataclass
class DipoleChart:
    """Flux and charge matrix elements between the lowest eigenstates."""

    levels: int
    phi_elems: np.ndarray  # k x k, <a|phi|b>
    charge_elems: np.ndarray  # k x k, <a|n|b>
    transition_energies: np.ndarray  # |E_a - E_b| / omega_p
    level_energies: np.ndarray  # E_a in units of E_J
    parities: np.ndarray
    plasma_frequency: float


def _log_abs_laguerre(n: int, k: int, x: float):
    """(sign, log|L_n^(k)(x)|); direct evaluation is safe for n + k <= ~1000."""
    val = eval_genlaguerre(n, k, x)
    if not np.isfinite(val):
        raise SpectralError(f"Laguerre evaluation failed for n={n}, k={k}, x={x}")
    if val == 0.0:  # exact polynomial root: the matrix element vanishes
        return 0.0, -np.inf
    return np.sign(val), np.log(abs(val))


def displacement_element(m: int, n: int, z: complex) -> complex:
    """Matrix element <m| exp(z a^dag - z* a) |n> of the displacement operator.

    Closed form in terms of generalized Laguerre polynomials; factorial
    ratios are accumulated through log-gamma so the result stays finite for
    m, n up to several hundred.
    """
    if m < 0 or n < 0:
        raise SpectralError("Fock indices must be non-negative")
    z = complex(z)
    if z == 0:
        return 1.0 + 0.0j if m == n else 0.0 + 0.0j
    lo, hi = (n, m) if m >= n else (m, n)
    k = hi - lo
    x = abs(z) ** 2
    sign, logl = _log_abs_laguerre(lo, k, x)
    log_mag = 0.5 * (gammaln(lo + 1) - gammaln(hi + 1)) + k * np.log(abs(z)) - x / 2 + logl
    base = z if m >= n else -np.conj(z)
    phase = (base / abs(z)) ** k if k else 1.0
    return sign * np.exp(log_mag) * phase


def displacement_matrix(dim: int, z: complex) -> np.ndarray:
    """Dense (dim x dim) displacement operator from the closed form."""
    out = np.empty((dim, dim), dtype=complex)
    for m in range(dim):
        for n in range(dim):
            out[m, n] = displacement_element(m, n, z)
    return out


def _exp_iphi_matrix(dim: int, p: int, sigma: float) -> np.ndarray:
    """Matrix of exp(i p phi) with phi = sigma (a + a^dag) / sqrt(2)."""
    return displacement_matrix(dim, 1j * p * sigma / np.sqrt(2))


def build_hamiltonian(spec: CircuitSpec, _cache: dict | None = None) -> FockOperator:
    """Full circuit Hamiltonian in the truncated Fock basis.

    The LC part is diagonal; each harmonic A cos(p (phi + phi_x) + offset)
    contributes (A/2) e^{i(p phi_x + offset)} E_p + h.c. with E_p the
    exp(i p phi) matrix, which only depends on (p, sigma) and is cached
    across flux points.
    """
    n = spec.n_fock
    h = np.diag(np.sqrt(8 * spec.e_c * spec.e_l) * (np.arange(n) + 0.5)).astype(complex)
    for term in spec.harmonics:
        key = (term.order, n)
        if _cache is not None and key in _cache:
            ep = _cache[key]
        else:
            ep = _exp_iphi_matrix(n, term.order, spec.sigma)
            if _cache is not None:
                _cache[key] = ep
        theta = term.order * spec.phi_x + term.phase_offset
        h += 0.5 * term.amplitude * (np.exp(1j * theta) * ep + np.exp(-1j * theta) * ep.conj().T)
    herm_dev = np.abs(h - h.conj().T).max()
    if herm_dev > 1e-12 * max(np.abs(h).max(), 1.0):
        raise SpectralError(f"Hamiltonian lost hermiticity: deviation {herm_dev}")
    return FockOperator(entries=h, hermitian=True)


def flux_operator(spec: CircuitSpec) -> FockOperator:
    """phi = sigma (a + a^dag) / sqrt(2), tridiagonal in the Fock basis."""
    n = spec.n_fock
    off = spec.sigma / np.sqrt(2) * np.sqrt(np.arange(1, n))
    m = np.diag(off, 1) + np.diag(off, -1)
    return FockOperator(entries=m.astype(complex), hermitian=True)


def charge_operator(spec: CircuitSpec) -> FockOperator:
    """n = -i d/dphi = i (a^dag - a) / (sigma sqrt(2))."""
    n = spec.n_fock
    off = np.sqrt(np.arange(1, n)) / (spec.sigma * np.sqrt(2))
    m = 1j * (np.diag(off, -1) - np.diag(off, 1))
    return FockOperator(entries=m, hermitian=True)


def parity_operator(dim: int) -> np.ndarray:
    return np.diag((-1.0) ** np.arange(dim))


def diagonalize(op: FockOperator, k: int | None = None):
    """Ascending eigenvalues and orthonormal eigenvectors of a Hermitian operator."""
    if not np.all(np.isfinite(op.entries)):
        raise SpectralError("non-finite entries in operator")
    if k is not None and k > op.dim:
        raise SpectralError(f"requested {k} levels from a dim-{op.dim} operator")
    w, v = eigh(op.entries)
    if k is not None:
        w, v = w[:k], v[:, :k]
    return w, v


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of each eigenvector real positive."""
    out = vecs.copy()
    for j in range(out.shape[1]):
        i = int(np.argmax(np.abs(out[:, j])))
        ph = out[i, j]
        if ph != 0:
            out[:, j] *= np.conj(ph) / abs(ph)
    return out


def sweep_flux(
    spec: CircuitSpec,
    phix_grid,
    k: int = 8,
    parities: bool = False,
    eigenvectors: bool = False,
) -> SpectrumSweep:
    """Diagonalize the circuit at each flux point, energy-ordered levels."""
    phix_grid = np.atleast_1d(np.asarray(phix_grid, dtype=float))
    if phix_grid.size == 0:
        raise SpectralError("flux grid is empty")
    cache: dict = {}
    energies = np.empty((phix_grid.size, k))
    par = np.empty((phix_grid.size, k)) if parities else None
    vecs = [] if eigenvectors else None
    p_op = parity_operator(spec.n_fock)
    for i, px in enumerate(phix_grid):
        h = build_hamiltonian(spec.with_flux(px), _cache=cache)
        w, v = diagonalize(h, k)
        energies[i] = w
        if parities:
            par[i] = np.real(np.einsum("ij,i,ij->j", np.conj(v), np.diag(p_op), v))
        if eigenvectors:
            vecs.append(_fix_phases(v))
    return SpectrumSweep(phix_grid, energies, par, vecs, spec)


def leading_harmonic_order(spec: CircuitSpec) -> int:
    """Order of the largest-amplitude harmonic, setting the plasma frequency."""
    if not spec.harmonics:
        return 1
    term = max(spec.harmonics, key=lambda t: abs(t.amplitude))
    return term.order


def plasma_frequency(spec: CircuitSpec) -> float:
    """omega_p = L_d sqrt(8 E_C E_J) with E_J = 1."""
    return leading_harmonic_order(spec) * np.sqrt(8 * spec.e_c)


def dipole_chart(spec: CircuitSpec, k: int = 6) -> DipoleChart:
    """Flux/charge matrix elements between the lowest k eigenstates."""
    h = build_hamiltonian(spec)
    w, v = diagonalize(h, k)
    v = _fix_phases(v)
    phi_m = v.conj().T @ flux_operator(spec).entries @ v
    n_m = v.conj().T @ charge_operator(spec).entries @ v
    par = np.real(np.einsum("ij,i,ij->j", np.conj(v), (-1.0) ** np.arange(spec.n_fock), v))
    wp = plasma_frequency(spec)
    omega = np.abs(w[:, None] - w[None, :]) / wp
    return DipoleChart(
        levels=k,
        phi_elems=phi_m,
        charge_elems=n_m,
        transition_energies=omega,
        level_energies=w,
        parities=par,
        plasma_frequency=wp,
    )


def dipole_vs_flux(spec: CircuitSpec, pairs, phix_grid, k: int | None = None):
    """Per-flux dipole elements for the requested (alpha, beta) level pairs.

    Eigenvector phases are fixed pointwise so curves are continuous away
    from crossings; near-degenerate pairs (|dE| < 1e-9) are flagged in the
    ``crossing`` column.
    """
    pairs = [tuple(p) for p in pairs]
    kmax = (max(max(p) for p in pairs) + 1) if k is None else k
    phix_grid = np.atleast_1d(np.asarray(phix_grid, dtype=float))
    cache: dict = {}
    out = {
        "phix": phix_grid,
        "pairs": pairs,
        "phi": np.empty((phix_grid.size, len(pairs)), dtype=complex),
        "charge": np.empty((phix_grid.size, len(pairs)), dtype=complex),
        "omega": np.empty((phix_grid.size, len(pairs))),
        "crossing": np.zeros((phix_grid.size, len(pairs)), dtype=bool),
    }
    wp = plasma_frequency(spec)
    for i, px in enumerate(phix_grid):
        sp = spec.with_flux(px)
        h = build_hamiltonian(sp, _cache=cache)
        w, v = diagonalize(h, kmax)
        v = _fix_phases(v)
        phi_full = flux_operator(sp).entries
        n_full = charge_operator(sp).entries
        for j, (a, b) in enumerate(pairs):
            out["phi"][i, j] = v[:, a].conj() @ phi_full @ v[:, b]
            out["charge"][i, j] = v[:, a].conj() @ n_full @ v[:, b]
            out["omega"][i, j] = abs(w[a] - w[b]) / wp
            out["crossing"][i, j] = abs(w[a] - w[b]) < 1e-9
    return out


def convergence_check(spec: CircuitSpec, k: int, n1: int, n2: int) -> float:
    """Max shift of the lowest k levels when growing the truncation n1 -> n2."""
    if n2 <= n1:
        raise SpectralError("n2 must exceed n1")
    w1, _ = diagonalize(build_hamiltonian(replace(spec, n_fock=n1)), k)
    w2, _ = diagonalize(build_hamiltonian(replace(spec, n_fock=n2)), k)
    return float(np.abs(w1 - w2).max())


# ---------------------------------------------------------------------------
# presets

PRESET_NAMES = ("qutrit", "qutrit-asym", "d4", "d5-alt", "d5-solver", "fluxonium")


def preset_spec(
    name: str,
    e_c: float,
    e_l: float,
    n_fock: int = 120,
    phi_x: float = 0.0,
    e_j_tilde: float = 0.0,
    e_k_tilde: float = 1.0,
    e_j0: float | None = None,
) -> CircuitSpec:
    """Shipped circuit presets.

    qutrit      : -cos(2 phi) + (pi^2 E_L / 4) cos(phi)
    qutrit-asym : asymmetric kite, E_J0 cos(phi) - E_J~ sin(phi) - E_K~ cos(2 phi)
    d4          : +cos(4 phi) + (pi^2 E_L / (4 sqrt 2)) cos(phi)
    d5-alt    : -cos(4 phi) + (pi^2 E_L / 8)(cos(phi) - cos(2 phi)/4)
    d5-solver   : -cos(4 phi) with the degeneracy-solver coefficients
    fluxonium   : -cos(phi)
    """
    if name == "qutrit":
        harmonics = (
            HarmonicTerm(1, np.pi**2 * e_l / 4),
            HarmonicTerm(2, -1.0),
        )
    elif name == "qutrit-asym":
        if e_j0 is None:
            e_j0 = np.pi**2 * e_l / 4
        harmonics = (
            HarmonicTerm(1, e_j0),
            HarmonicTerm(1, e_j_tilde, np.pi / 2),
            HarmonicTerm(2, -e_k_tilde),
        )
    elif name == "d4":
        harmonics = (
            HarmonicTerm(1, np.pi**2 * e_l / (4 * np.sqrt(2))),
            HarmonicTerm(4, 1.0),
        )
    elif name == "d5-alt":
        harmonics = (
            HarmonicTerm(1, np.pi**2 * e_l / 8),
            HarmonicTerm(2, -np.pi**2 * e_l / 32),
            HarmonicTerm(4, -1.0),
        )
    elif name == "d5-solver":
        pot = potential_forge.solve_coefficients(
            potential_forge.QuditPotentialSpec(d=5, eta=e_l)
        )
        harmonics = tuple(
            HarmonicTerm(n, e_l * a) for n, a in pot.coefficients
        ) + (HarmonicTerm(4, -1.0),)
    elif name == "fluxonium":
        harmonics = (HarmonicTerm(1, -1.0),)
    else:
        raise SpectralError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    return CircuitSpec(e_c=e_c, e_l=e_l, harmonics=harmonics, phi_x=phi_x, n_fock=n_fock)
