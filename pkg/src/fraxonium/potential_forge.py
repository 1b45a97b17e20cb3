"""Fourier engineering of qudit potentials with d degenerate minima.

The working potential, in units of the leading Josephson energy, is

    U(phi) = (eta/2) (phi - phi_x)^2 + s * cos(L_d phi) + eta * sum_n a_n cos(n phi)

with s = -1 for odd d (leading order L_d = d - 1) and s = +1 for even d
(L_d = d).  The coefficients a_n are fixed by requiring the lowest d minima
to be degenerate order by order in eta = E_L / E_J.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq


class PotentialError(ValueError):
    """Raised for invalid qudit specifications or failed searches."""


@dataclass(frozen=True)
class QuditPotentialSpec:
    """Dimension, inductive ratio and correction order of an engineered potential."""

    d: int
    eta: float
    correction_order: int = 0

    def __post_init__(self):
        if self.d < 2:
            raise PotentialError(f"qudit dimension must be >= 2, got {self.d}")
        if not self.eta > 0:
            raise PotentialError(f"eta must be positive, got {self.eta}")
        if self.eta >= 1:
            raise PotentialError(
                f"eta = {self.eta} outside the perturbative regime (eta < 1)"
            )
        if self.correction_order not in (0, 1):
            raise PotentialError("correction_order must be 0 or 1")

    @property
    def parity(self) -> str:
        return "even" if self.d % 2 == 0 else "odd"

    @property
    def leading_order(self) -> int:
        """Order L_d of the dominant harmonic."""
        return self.d if self.d % 2 == 0 else self.d - 1

    @property
    def leading_sign(self) -> int:
        """Sign of the cos(L_d phi) term: -1 for odd d, +1 for even d."""
        return 1 if self.d % 2 == 0 else -1

    @property
    def n_coefficients(self) -> int:
        return (self.d - 1) // 2 if self.d % 2 else self.d // 2 - 1

    def base_minima(self) -> np.ndarray:
        """Zeroth-order minima positions of the leading cosine, lowest d wells."""
        L = self.leading_order
        if self.d % 2:
            ls = np.arange(-(self.d - 1) // 2, (self.d - 1) // 2 + 1)
            return 2 * np.pi * ls / L
        ls = np.arange(-self.d // 2, self.d // 2)
        return np.pi * (2 * ls + 1) / L

    def well_indices(self) -> np.ndarray:
        if self.d % 2:
            return np.arange(-(self.d - 1) // 2, (self.d - 1) // 2 + 1)
        return np.arange(-self.d // 2, self.d // 2)


@dataclass(frozen=True)
class EngineeredPotential:
    """Solved potential: harmonic coefficients and corrected minima positions."""

    spec: QuditPotentialSpec
    coefficients: tuple  # ((n, a_n), ...)
    minima: tuple  # ((l, phi_l), ...)
    leading_sign: int

    @property
    def orders(self) -> np.ndarray:
        return np.array([n for n, _ in self.coefficients], dtype=int)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([a for _, a in self.coefficients])


def _base_node(spec: QuditPotentialSpec, l: int) -> float:
    L = spec.leading_order
    if spec.d % 2:
        return 2 * np.pi * l / L
    return np.pi * (2 * l + 1) / L


def _zeroth_order_system(spec: QuditPotentialSpec):
    """Linear system fixing the a_n at zeroth order in eta.

    Odd d: sum_n sin^2(pi n l / L_d) a_n = (2 pi / L_d)^2 l^2 / 4, l = 1..(d-1)/2.
    Even d: degeneracy of U at the half-shifted nodes,
    sum_n [cos(n x_0) - cos(n x_l)] a_n = (x_l^2 - x_0^2) / 2, l = 1..d/2-1.
    """
    L = spec.leading_order
    m = spec.n_coefficients
    ns = np.arange(1, m + 1)
    if spec.d % 2:
        ls = np.arange(1, m + 1)
        M = np.sin(np.pi * np.outer(ns, ls) / L) ** 2  # (n, l)
        rhs = (2 * np.pi / L) ** 2 * ls**2 / 4
        return M.T, rhs
    x = np.pi * (2 * np.arange(0, m + 1) + 1) / L
    M = np.cos(ns[None, :] * x[0]) - np.cos(np.outer(x[1:], ns))
    rhs = (x[1:] ** 2 - x[0] ** 2) / 2
    return M, rhs


def _first_order_shift(spec: QuditPotentialSpec, a0: np.ndarray, l: int) -> float:
    """First-order minimum displacement delta_phi_l^(1)."""
    L = spec.leading_order
    x = _base_node(spec, l)
    ns = np.arange(1, len(a0) + 1)
    return -(x - np.sum(ns * a0 * np.sin(ns * x))) / L**2


def solve_coefficients(spec: QuditPotentialSpec) -> EngineeredPotential:
    """Solve for the harmonic amplitudes a_n that degenerate the lowest d minima.

    Returns the zeroth-order coefficients; if ``spec.correction_order == 1``
    the first-order (in eta) corrections are added as well.
    """
    m = spec.n_coefficients
    if m == 0:
        a = np.zeros(0)
    else:
        M, rhs = _zeroth_order_system(spec)
        try:
            a0 = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError as exc:
            raise PotentialError("singular degeneracy system; bad harmonic choice") from exc
        a = a0.copy()
        if spec.correction_order == 1:
            L = spec.leading_order
            if spec.d % 2:
                ls = np.arange(1, m + 1)
                d1 = np.array([_first_order_shift(spec, a0, l) for l in ls])
                rhs1 = -(L**2 / 4) * d1**2
            else:
                ls = np.arange(0, m + 1)
                d1 = np.array([_first_order_shift(spec, a0, l) for l in ls])
                rhs1 = (L**2 / 2) * (d1[1:] ** 2 - d1[0] ** 2)
            a1 = np.linalg.solve(M, rhs1)
            a = a0 + spec.eta * a1

    minima = []
    for l in spec.well_indices():
        dphi = _first_order_shift(spec, a, int(l))
        minima.append((int(l), _base_node(spec, int(l)) + spec.eta * dphi))

    return EngineeredPotential(
        spec=spec,
        coefficients=tuple((int(n), float(a[n - 1])) for n in range(1, m + 1)),
        minima=tuple(minima),
        leading_sign=spec.leading_sign,
    )


def minima_shift_first_order(pot: EngineeredPotential, l: int) -> float:
    """First-order displacement of minimum l from its zeroth-order node."""
    if l not in pot.spec.well_indices():
        raise PotentialError(f"well index {l} outside the {pot.spec.d}-minima window")
    return _first_order_shift(pot.spec, pot.amplitudes, l)


def evaluate_potential(pot: EngineeredPotential, phi, phi_x: float = 0.0):
    """Full potential in units of E_J at phase ``phi`` and external flux ``phi_x``."""
    spec = pot.spec
    phi = np.asarray(phi, dtype=float)
    u = 0.5 * spec.eta * (phi - phi_x) ** 2
    u = u + pot.leading_sign * np.cos(spec.leading_order * phi)
    for n, a in pot.coefficients:
        u = u + spec.eta * a * np.cos(n * phi)
    return u if u.ndim else float(u)


def _potential_derivative(pot: EngineeredPotential, phi, phi_x: float):
    spec = pot.spec
    du = spec.eta * (phi - phi_x)
    du = du - pot.leading_sign * spec.leading_order * np.sin(spec.leading_order * phi)
    for n, a in pot.coefficients:
        du = du - spec.eta * a * n * np.sin(n * phi)
    return du


def find_minima_numeric(
    pot: EngineeredPotential,
    phi_x: float = 0.0,
    window: float | None = None,
    points_per_2pi: int = 10_000,
):
    """Locate all local minima of the full potential in ``|phi| <= window``.

    Dense sampling followed by root bracketing of dU/dphi to 1e-12; minima
    closer than 1e-6 rad are merged.  Returns a list of (phi*, U(phi*))
    sorted by phi.
    """
    if window is None:
        window = np.pi + 0.4
    n_pts = max(64, int(points_per_2pi * window / np.pi))
    grid = np.linspace(-window, window, n_pts)
    dU = _potential_derivative(pot, grid, phi_x)
    minima = []
    for i in range(len(grid) - 1):
        if dU[i] < 0 <= dU[i + 1]:
            root = brentq(
                lambda p: _potential_derivative(pot, p, phi_x),
                grid[i],
                grid[i + 1],
                xtol=1e-12,
                rtol=8.9e-16,
            )
            if not minima or abs(root - minima[-1]) > 1e-6:
                minima.append(root)
    if not minima:
        raise PotentialError("no local minimum found in the search window")
    return [(p, float(evaluate_potential(pot, p, phi_x))) for p in minima]
