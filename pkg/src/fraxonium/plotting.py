"""Figure rendering for the CLI report path.

All functions write a file and return its path; matplotlib runs on the Agg
backend so they are safe in headless sessions.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from . import potential_forge


def save_potential(pot, path, phi_x: float = 0.0):
    phi = np.linspace(-1.5 * np.pi, 1.5 * np.pi, 1201)
    u = potential_forge.evaluate_potential(pot, phi, phi_x)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(phi, u, lw=1.5)
    for _, pl in pot.minima:
        ax.axvline(pl, color="0.7", lw=0.7, ls=":")
    ax.set_xlabel(r"$\varphi$")
    ax.set_ylabel(r"$U/E_J$")
    ax.set_title(f"engineered potential, d={pot.spec.d}, eta={pot.spec.eta:g}")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_relation(rel, path, fit=None):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    axes[0].plot(rel.phi, rel.energy, lw=1.5)
    axes[0].set_xlabel(r"$\varphi$")
    axes[0].set_ylabel("energy")
    axes[0].set_title("energy-phase relation")
    ns = np.arange(1, len(rel.cos_coeffs))
    axes[1].bar(ns, rel.cos_coeffs[1:], width=0.6)
    axes[1].set_xlabel("harmonic order n")
    axes[1].set_ylabel(r"$\epsilon_n$")
    axes[1].set_xlim(0.25, min(10.75, ns[-1] + 0.75))
    if fit is not None:
        axes[1].set_title(
            rf"fit: $\tilde E_J$={fit.e_j:.3g}, $\tilde E_K$={fit.e_k:.3g}"
        )
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_spectrum(sweep, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    rel = sweep.energies - sweep.energies[:, 0].min()
    for j in range(rel.shape[1]):
        ax.plot(sweep.phix_grid, rel[:, j], lw=1.2)
    ax.set_xlabel(r"$\varphi_x$")
    ax.set_ylabel(r"$(E - E_0^{min})/E_J$")
    ax.set_title("spectrum vs external flux")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_dipoles(chart, path):
    fig, axes = plt.subplots(1, 2, figsize=(8, 3.6))
    for ax, mat, label in (
        (axes[0], np.abs(chart.phi_elems), r"$|\langle\alpha|\hat\varphi|\beta\rangle|$"),
        (axes[1], np.abs(chart.charge_elems), r"$|\langle\alpha|\hat n|\beta\rangle|$"),
    ):
        im = ax.imshow(mat, origin="lower", cmap="viridis")
        ax.set_xlabel(r"$\beta$")
        ax.set_ylabel(r"$\alpha$")
        ax.set_title(label)
        fig.colorbar(im, ax=ax, fraction=0.046)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_tb_compare(report, path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for j in range(report.exact_levels.shape[1]):
        ax.plot(report.phix_grid, report.exact_levels[:, j], "-", color="C0", lw=1.4,
                label="exact" if j == 0 else None)
        ax.plot(report.phix_grid, report.tb_levels[:, j], "--", color="C3", lw=1.2,
                label="tight binding" if j == 0 else None)
    ax.set_xlabel(r"$\varphi_x$")
    ax.set_ylabel(r"$E/E_J$ (ground-aligned)")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_stirap(trace, schedule, path):
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    labels = (r"$P_0$", r"$P_1$", r"$P_2$", r"$P_u$")
    for j, lab in enumerate(labels):
        axes[0].plot(trace.times, trace.populations[:, j], label=lab, lw=1.3)
    axes[0].set_xlabel("t")
    axes[0].set_ylabel("population")
    axes[0].legend(frameon=False)
    ts = np.linspace(0, schedule.duration, 400)
    oms = np.array([schedule.amplitudes(t) for t in ts])
    axes[1].plot(oms[:, 0], oms[:, 2], lw=1.3)
    axes[1].set_xlabel(r"$\Omega_0$")
    axes[1].set_ylabel(r"$\Omega_2$")
    axes[1].set_title("drive loop")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path
