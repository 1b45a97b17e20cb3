"""Acceptance gate: ten go/no-go checks covering every module.

Each test prints a single ``[acceptance] <name>: PASS|FAIL`` line with the
measured numbers, then asserts.  Tolerances are pinned here on purpose —
do not loosen them to make a check pass.
"""

import time

import numpy as np
import pytest

from fraxonium import drive_lab as dl
from fraxonium import fraxon_tb as tb
from fraxonium import harmonic_synth as hs
from fraxonium import potential_forge as pf
from fraxonium import spectral_engine as se

# (preset, E_C, E_L) triples used by the spectral checks
PRESET_ENERGIES = {
    "qutrit": (0.08, 0.03),
    "d4": (0.01, 0.04),
    "d5-solver": (0.01, 0.04),
    "fluxonium": (0.1, 0.03),
}


def report(name, ok, detail, t0, limit):
    elapsed = time.perf_counter() - t0
    line = f"[acceptance] {name}: {'PASS' if ok else 'FAIL'} ({detail}; {elapsed:.1f}s)"
    print(line, flush=True)
    assert ok, line
    assert elapsed < limit, f"{name} exceeded the {limit}s budget ({elapsed:.1f}s)"


def test_01_coefficient_closed_forms():
    t0 = time.perf_counter()
    got = {
        3: dict(pf.solve_coefficients(pf.QuditPotentialSpec(3, 0.04)).coefficients),
        4: dict(pf.solve_coefficients(pf.QuditPotentialSpec(4, 0.04)).coefficients),
        5: dict(pf.solve_coefficients(pf.QuditPotentialSpec(5, 0.04)).coefficients),
    }
    want = {
        3: {1: np.pi**2 / 4},
        4: {1: np.pi**2 / (4 * np.sqrt(2))},
        5: {1: np.pi**2 / 4, 2: -np.pi**2 / 16},
    }
    errs = [
        abs(got[d][n] / want[d][n] - 1) for d in want for n in want[d]
    ]
    report(
        "coefficient closed forms", max(errs) < 1e-12,
        f"max rel err {max(errs):.2e} (tol 1e-12)", t0, 1.0,
    )


def test_02_minima_degeneracy():
    t0 = time.perf_counter()
    eta = 0.04
    spreads = {}
    for d in (3, 4, 5):
        pot = pf.solve_coefficients(pf.QuditPotentialSpec(d, eta))
        vals = [v for _, v in pf.find_minima_numeric(pot)]
        spreads[d] = max(vals) - min(vals)
    worst = max(spreads.values())
    report(
        "engineered minima degeneracy", worst < 5 * eta**2,
        f"worst spread {worst:.2e} vs bound {5 * eta**2:.2e}", t0, 5.0,
    )


def test_03_modular_element_series_and_filtering():
    t0 = time.perf_counter()
    tau = 0.1
    rel = hs.effective_relation(hs.ModularElement(tau))
    want = (-tau * (1 - tau**2 / 8), tau**2 / 4, -(tau**3) / 8)
    series_err = max(abs(rel.cos_coeffs[n + 1] - want[n]) for n in range(3))
    filt_err = 0.0
    scale = np.abs(rel.cos_coeffs[1:]).max()
    for copies in (2, 3, 4):
        out = hs.parallel_compose(rel, copies)
        ns = np.arange(1, len(out.cos_coeffs))
        bad = ns[ns % copies != 0]
        filt_err = max(filt_err, np.abs(out.cos_coeffs[bad]).max() / scale)
    ok = series_err < 5 * tau**4 and filt_err < 1e-10
    report(
        "modular element series + harmonic filtering", ok,
        f"series err {series_err:.2e} (tol {5 * tau**4:.1e}), "
        f"leakage {filt_err:.1e} (tol 1e-10)", t0, 10.0,
    )


def test_04_quasi_degenerate_multiplets():
    t0 = time.perf_counter()
    ratios = {}
    for preset, d in (("qutrit", 3), ("d4", 4), ("d5-solver", 5)):
        e_c, e_l = PRESET_ENERGIES[preset]
        spec = se.preset_spec(preset, e_c, e_l, n_fock=140)
        w, _ = se.diagonalize(se.build_hamiltonian(spec), d + 1)
        ratios[preset] = (w[d - 1] - w[0]) / (w[d] - w[d - 1])
    worst = max(ratios.values())
    detail = ", ".join(f"{k} {v:.3f}" for k, v in ratios.items())
    report(
        "lowest-d multiplet separation", worst < 0.2,
        f"spread/gap: {detail} (tol 0.2)", t0, 60.0,
    )


def test_05_truncation_convergence():
    t0 = time.perf_counter()
    shifts = {}
    for preset, (e_c, e_l) in PRESET_ENERGIES.items():
        spec = se.preset_spec(preset, e_c, e_l)
        shifts[preset] = se.convergence_check(spec, 8, 100, 140)
    worst = max(shifts.values())
    detail = ", ".join(f"{k} {v:.1e}" for k, v in shifts.items())
    report(
        "Fock truncation convergence", worst < 1e-8,
        f"level shift N=100->140: {detail} (tol 1e-8)", t0, 60.0,
    )


def test_06_displacement_oracle():
    t0 = time.perf_counter()
    from scipy.linalg import expm

    dim = 60
    a = np.diag(np.sqrt(np.arange(1, dim)), 1)
    worst = 0.0
    for z in (0.5, 1.0, 0.7j, 0.6 - 0.6j):
        closed = se.displacement_matrix(dim, z)
        exact = expm(z * a.conj().T - np.conj(z) * a)
        inner = slice(0, dim // 2)
        worst = max(worst, np.abs(closed[inner, inner] - exact[inner, inner]).max())
    report(
        "displacement operator closed form", worst < 1e-8,
        f"max inner-block deviation {worst:.1e} (tol 1e-8)", t0, 10.0,
    )


def test_07_parity_selection_rules():
    t0 = time.perf_counter()
    e_c, e_l = PRESET_ENERGIES["qutrit"]
    chart = se.dipole_chart(se.preset_spec("qutrit", e_c, e_l), k=6)
    same = chart.parities[:, None] * chart.parities[None, :] > 0
    off = ~np.eye(6, dtype=bool)
    same_par = max(
        np.abs(chart.phi_elems[same & off]).max(),
        np.abs(chart.charge_elems[same & off]).max(),
    )
    e15 = max(abs(chart.phi_elems[1, 5]), abs(chart.charge_elems[1, 5]))
    e05 = abs(chart.phi_elems[0, 5])
    e25 = abs(chart.phi_elems[2, 5])
    ok = same_par < 1e-8 and e15 < 1e-8 and e05 > 1e-3 and e25 > 1e-3
    report(
        "parity selection rules", ok,
        f"equal-parity max {same_par:.1e}, (1,5) {e15:.1e}, "
        f"(0,5) {e05:.2e}, (2,5) {e25:.2e}", t0, 30.0,
    )


def test_08_tight_binding_agreement():
    t0 = time.perf_counter()
    params = tb.FraxonParams(3, 0.08, 0.06)
    grid = np.linspace(-np.pi / 2, np.pi / 2, 21)
    rep = tb.compare_with_exact(params, grid, n_fock=140)
    overestimate = rep.t_tb / rep.t_exact
    ok = rep.max_deviation <= 0.5 * rep.t_tb and 1.0 <= overestimate <= 2.5
    report(
        "tight-binding vs exact levels", ok,
        f"max deviation {rep.max_deviation:.3f} vs 0.5 t = {0.5 * rep.t_tb:.3f}, "
        f"t_TB/t_exact {overestimate:.2f} in [1, 2.5]", t0, 120.0,
    )


def test_09_stirap_pi_half_gate():
    t0 = time.perf_counter()
    sched = dl.default_cycle(1.0)  # T = 500 / Omega_1
    psi0 = np.array([1, 0, 0, 0], dtype=complex)
    trace = dl.propagate(sched, psi0)
    hol = dl.holonomy_oracle(sched)
    b0 = dl.dark_subspace(*sched.amplitudes(0.0))
    predicted = b0 @ (hol @ (b0.conj().T @ psi0))
    fidelity = abs(np.vdot(predicted, trace.final_state)) ** 2
    p = trace.populations[-1]
    ok = (
        abs(p[0] - 0.5) < 0.01
        and abs(p[2] - 0.5) < 0.01
        and trace.leakage < 0.01
        and fidelity >= 0.999
        and trace.norm_drift < 1e-9
    )
    report(
        "pi/2 holonomic gate", ok,
        f"P0 {p[0]:.4f}, P2 {p[2]:.4f}, leakage {trace.leakage:.1e}, "
        f"fidelity {fidelity:.6f}, norm drift {trace.norm_drift:.1e}", t0, 30.0,
    )


def test_10_fluxonium_half_flux_splitting():
    t0 = time.perf_counter()
    e_c, e_l = PRESET_ENERGIES["fluxonium"]
    spec = se.preset_spec("fluxonium", e_c, e_l, n_fock=140, phi_x=np.pi)
    w, _ = se.diagonalize(se.build_hamiltonian(spec), 3)
    split = w[1] - w[0]
    # phase-slip amplitude of the bare -cos(phi) well (E_J = 1)
    ratio = 8 / e_c
    t_wkb = 2 * np.sqrt(2 / np.pi) * np.sqrt(8 * e_c) * ratio**0.25 * np.exp(-np.sqrt(ratio))
    factor = split / (2 * t_wkb)
    ok = 1 / 3 < factor < 3 and split < 0.1 * (w[2] - w[1])
    report(
        "half-flux fluxonium doublet", ok,
        f"splitting {split:.2e} vs 2t {2 * t_wkb:.2e} (factor {factor:.2f}, "
        f"window [1/3, 3])", t0, 30.0,
    )
