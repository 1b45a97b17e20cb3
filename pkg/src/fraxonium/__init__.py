"""Toolkit for designing generalized-fluxonium qudit circuits.

Submodules
----------
potential_forge : Fourier coefficients producing d degenerate potential minima.
harmonic_synth  : energy-phase relations of junction+inductor modular elements
                  and their parallel/series composition into high harmonics.
spectral_engine : truncated Fock-basis Hamiltonians, flux sweeps, dipole charts.
fraxon_tb       : low-energy tight-binding model of the fraxon states.
drive_lab       : tripod RWA driving, STIRAP cycles and dark-state holonomies.
cli             : command-line front end with CSV/JSON output and figures.
"""

__version__ = "0.1.0"
