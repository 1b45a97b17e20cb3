"""Tripod driving of the qutrit: RWA Hamiltonian, STIRAP cycles, holonomies.

Basis ordering is (|0>, |1>, |2>, |u>).  With resonant drives the RWA
Hamiltonian is H = sum_a Omega_a |u><a| + h.c.; its two zero-energy dark
states carry the adiabatic dynamics, and a closed loop of the Rabi vector
rotates the dark frame by a purely geometric angle.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh, null_space, svd
from scipy.optimize import brentq


class DriveError(RuntimeError):
    """Raised for invalid schedules or degenerate drive configurations."""


@dataclass(frozen=True)
class TripodSystem:
    """Three Rabi couplings to a common upper level, optional detunings."""

    couplings: tuple  # (Omega_0, Omega_1, Omega_2), may be complex
    upper_level_label: int = 5
    detunings: tuple = (0.0, 0.0, 0.0, 0.0)

    def hamiltonian(self) -> np.ndarray:
        om = np.asarray(self.couplings, dtype=complex)
        h = np.zeros((4, 4), dtype=complex)
        h[3, :3] = om
        h[:3, 3] = np.conj(om)
        h += np.diag(self.detunings)
        return h


def rwa_hamiltonian(om0, om1, om2) -> np.ndarray:
    return TripodSystem((om0, om1, om2)).hamiltonian()


@dataclass(frozen=True)
class Leg:
    """One schedule segment: amplitudes ramp from ``start`` to ``stop``."""

    duration: float
    start: tuple  # (Omega_0, Omega_1, Omega_2) at the leg entry
    stop: tuple
    shape: str = "sin2"  # sin2 | linear | constant

    def amplitudes(self, s):
        """Rabi amplitudes at fractional position s in [0, 1]."""
        s = np.clip(s, 0.0, 1.0)
        if self.shape == "constant":
            w = 0.0 * s
        elif self.shape == "linear":
            w = s
        elif self.shape == "sin2":
            w = np.sin(np.pi * s / 2) ** 2
        else:
            raise DriveError(f"unknown ramp shape {self.shape!r}")
        a = np.asarray(self.start, dtype=float)
        b = np.asarray(self.stop, dtype=float)
        return a + np.multiply.outer(w, b - a) if np.ndim(s) else a + w * (b - a)


@dataclass(frozen=True)
class PulseSchedule:
    """Ordered legs with continuous amplitudes across boundaries."""

    legs: tuple
    sample_dt: float | None = None  # default T / 1e5

    def __post_init__(self):
        for prev, nxt in zip(self.legs, self.legs[1:]):
            if not np.allclose(prev.stop, nxt.start, atol=1e-12):
                raise DriveError("discontinuous amplitudes across leg boundary")

    @property
    def duration(self) -> float:
        return sum(leg.duration for leg in self.legs)

    def amplitudes(self, t: float):
        t = float(np.clip(t, 0.0, self.duration))
        for leg in self.legs:
            if t <= leg.duration or leg is self.legs[-1]:
                return np.asarray(leg.amplitudes(t / leg.duration))
            t -= leg.duration
        raise DriveError("empty schedule")

    def is_closed(self, atol: float = 1e-9) -> bool:
        return np.allclose(self.legs[0].start, self.legs[-1].stop, atol=atol)


@dataclass
class StirapTrace:
    """Time series of level populations plus the final state."""

    times: np.ndarray
    populations: np.ndarray  # (n_samples, 4) for (P0, P1, P2, Pu)
    final_state: np.ndarray
    leakage: float  # max population of |u> along the run
    norm_drift: float


def _step_states(psi, om, dt):
    """Exact one-step propagator for the resonant tripod.

    H^3 = Obar^2 H, so exp(-i H dt) = 1 + (cos(Obar dt) - 1) H^2/Obar^2
    - i sin(Obar dt) H/Obar.
    """
    obar = float(np.sqrt(np.sum(np.abs(om) ** 2)))
    if obar == 0:
        return psi
    h = np.zeros((4, 4), dtype=complex)
    h[3, :3] = om
    h[:3, 3] = np.conj(om)
    hp = h @ psi
    hhp = h @ hp
    return psi + (np.cos(obar * dt) - 1) / obar**2 * hhp - 1j * np.sin(obar * dt) / obar * hp


def propagate(
    schedule: PulseSchedule,
    initial: np.ndarray,
    detunings=None,
    n_samples: int = 1001,
) -> StirapTrace:
    """Integrate the RWA Schroedinger equation over the schedule.

    Piecewise-constant amplitudes over steps of ``sample_dt`` with exact 4x4
    exponentials; the step is halved (up to 4 times) if the norm drifts by
    more than 1e-9.
    """
    psi0 = np.asarray(initial, dtype=complex)
    if abs(np.linalg.norm(psi0) - 1) > 1e-9:
        raise DriveError("initial state must be normalized")
    T = schedule.duration
    dt = schedule.sample_dt if schedule.sample_dt is not None else T / 1e5
    use_detuning = detunings is not None and np.any(np.asarray(detunings) != 0)

    for attempt in range(5):
        n_steps = max(1, int(np.ceil(T / dt)))
        times_rec = [0.0]
        pops = [np.abs(psi0) ** 2]
        psi = psi0.copy()
        record_every = max(1, n_steps // (n_samples - 1))
        leak = float(abs(psi[3]) ** 2)
        for i in range(n_steps):
            t_mid = (i + 0.5) * T / n_steps
            om = schedule.amplitudes(t_mid)
            h_dt = T / n_steps
            if use_detuning:
                sys = TripodSystem(tuple(om), detunings=tuple(detunings))
                w, v = eigh(sys.hamiltonian())
                psi = (v * np.exp(-1j * w * h_dt)) @ (v.conj().T @ psi)
            else:
                psi = _step_states(psi, om, h_dt)
            leak = max(leak, float(abs(psi[3]) ** 2))
            if (i + 1) % record_every == 0 or i == n_steps - 1:
                times_rec.append((i + 1) * T / n_steps)
                pops.append(np.abs(psi) ** 2)
        drift = abs(np.linalg.norm(psi) - 1)
        if drift <= 1e-9:
            return StirapTrace(
                times=np.array(times_rec),
                populations=np.array(pops),
                final_state=psi,
                leakage=leak,
                norm_drift=float(drift),
            )
        dt /= 2
    raise DriveError(f"norm drift {drift} persists after 4 step halvings")


def dark_subspace(om0, om1, om2, reference: np.ndarray | None = None) -> np.ndarray:
    """Orthonormal basis (4 x 2) of the zero-energy dark subspace.

    The dark states are the lower-level combinations annihilated by the
    coupling row.  If ``reference`` is given the basis gauge is fixed by
    maximal overlap with it (for continuation along a parameter path).
    """
    om = np.array([om0, om1, om2], dtype=complex)
    obar = np.linalg.norm(om)
    if obar == 0:
        raise DriveError("all couplings vanish: the whole lower subspace is dark")
    lower = null_space(om[None, :] / obar)  # 3 x 2
    basis = np.zeros((4, 2), dtype=complex)
    basis[:3, :] = lower
    if reference is not None:
        basis = basis @ _polar_unitary(basis.conj().T @ reference)
    return basis


def _polar_unitary(m: np.ndarray) -> np.ndarray:
    u, _, vh = svd(m)
    return u @ vh


def holonomy_oracle(schedule: PulseSchedule, n_steps: int = 4000) -> np.ndarray:
    """Geometric 2x2 unitary acquired by the dark frame over a closed loop.

    Discrete parallel transport: the dark basis is continued by
    maximal-overlap alignment along the path and the holonomy is the
    residual rotation back onto the initial frame.
    """
    if not schedule.is_closed():
        raise DriveError("schedule is not a closed loop in the Rabi amplitudes")
    T = schedule.duration
    om0 = schedule.amplitudes(0.0)
    b0 = dark_subspace(*om0)
    basis = b0
    for i in range(1, n_steps + 1):
        om = schedule.amplitudes(i * T / n_steps)
        basis = dark_subspace(*om, reference=basis)
    return b0.conj().T @ basis


def rotation_angle(holonomy: np.ndarray) -> float:
    """Rotation angle of a (near) SO(2) holonomy in the dark plane."""
    c = 0.5 * np.real(np.trace(holonomy))
    return float(np.arccos(np.clip(c, -1.0, 1.0)))


def adiabaticity(schedule: PulseSchedule, n_probe: int = 256) -> float:
    """Minimum of Obar * T along the loop (the relevant gap is Obar)."""
    T = schedule.duration
    obars = [
        np.linalg.norm(schedule.amplitudes(t))
        for t in np.linspace(0, T, n_probe)
    ]
    return float(min(obars) * T)


@lru_cache(maxsize=None)
def _pi_half_ratio() -> float:
    """Peak-to-constant Rabi ratio making the default loop a pi/2 gate.

    The loop geometry alone fixes the dark-frame rotation; the ratio is
    tuned so the holonomy rotates the state |0> into (|0> + |2>)/sqrt(2),
    i.e. a quarter-turn of the Bloch vector (pi/4 in the dark plane).
    """

    def angle_err(r):
        sched = _triangle_cycle(1.0, 3.0, r)
        return rotation_angle(holonomy_oracle(sched, n_steps=2000)) - np.pi / 4

    return brentq(angle_err, 0.5, 6.0, xtol=1e-10)


def _triangle_cycle(omega1: float, T: float, ratio: float) -> PulseSchedule:
    peak = ratio * omega1
    leg_t = T / 3
    return PulseSchedule(
        legs=(
            Leg(leg_t, (0.0, omega1, 0.0), (0.0, omega1, peak)),
            Leg(leg_t, (0.0, omega1, peak), (peak, omega1, 0.0)),
            Leg(leg_t, (peak, omega1, 0.0), (0.0, omega1, 0.0)),
        )
    )


def default_cycle(omega1: float = 1.0, T: float | None = None) -> PulseSchedule:
    """Shipped pi/2 cycle: a three-leg closed loop in the (Omega_0, Omega_2)
    plane with Omega_1 held constant and sin^2 ramps."""
    if T is None:
        T = 500.0 / omega1
    return _triangle_cycle(omega1, T, _pi_half_ratio())


def make_cycle(name: str, omega1: float = 1.0, T: float | None = None) -> PulseSchedule:
    if name == "default":
        return default_cycle(omega1, T)
    raise DriveError(f"unknown cycle {name!r}")


@dataclass
class FeasibilityEntry:
    pair: tuple
    dipole_phi: float
    dipole_charge: float
    transition_energy: float
    rabi_ratio: float
    forbidden: bool
    rwa_ok: bool


def rwa_feasibility(
    chart,
    omega_max: float,
    drive_pairs,
    T: float | None = None,
    rwa_threshold: float = 0.1,
):
    """Check Omega << transition frequency for each requested drive pair.

    ``chart`` is a spectral_engine.DipoleChart at the working flux.  A pair
    whose flux and charge elements both vanish (< 1e-10) is flagged
    forbidden.  Returns (entries, adiabaticity Obar*T or None).
    """
    entries = []
    for a, b in drive_pairs:
        dphi = abs(chart.phi_elems[a, b])
        dn = abs(chart.charge_elems[a, b])
        de = abs(chart.level_energies[a] - chart.level_energies[b])
        forbidden = dphi < 1e-10 and dn < 1e-10
        ratio = omega_max / de if de > 0 else np.inf
        entries.append(
            FeasibilityEntry(
                pair=(a, b),
                dipole_phi=dphi,
                dipole_charge=dn,
                transition_energy=de,
                rabi_ratio=ratio,
                forbidden=forbidden,
                rwa_ok=(not forbidden) and ratio <= rwa_threshold,
            )
        )
    obar_t = omega_max * T if T is not None else None
    if obar_t is not None and obar_t < 10:
        warnings.warn(f"adiabaticity parameter Obar*T = {obar_t:.1f} is low", stacklevel=2)
    return entries, obar_t


def drive_amplitude_map(chart, e_l: float, e_c: float, flux_drive: float = 0.0, n_g: float = 0.0):
    """Physical drive amplitudes lambda^f, lambda^c for each level pair.

    lambda^f = phi_drive * E_L * |<a|phi|b>| for a flux drive of amplitude
    ``flux_drive`` and lambda^c = 8 E_C n_g |<a|n|b>| for a charge drive
    with offset ``n_g``; both in the chart's energy units.
    """
    lam_f = flux_drive * e_l * np.abs(chart.phi_elems)
    lam_c = 8 * e_c * n_g * np.abs(chart.charge_elems)
    return lam_f, lam_c
