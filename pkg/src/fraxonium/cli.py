"""Command-line front end.

Subcommands: engineer, kite, spectrum, dipoles, tb-compare, stirap, check.
Each emits bit-stable CSV (12 significant digits, resolved parameters in
``# key = value`` header lines) or JSON carrying the same data plus the
resolved configuration; ``--plot`` additionally renders a figure next to
the delimited output.  Parameters can come from an INI config file with one
section per subcommand; explicit flags override file values.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys

import numpy as np

from . import drive_lab, fraxon_tb, harmonic_synth, potential_forge, spectral_engine


class ConfigError(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _write_output(path, fmt, config, columns, rows, extras=None):
    """Emit the resolved config plus a rectangular table as CSV or JSON."""
    meta = dict(config)
    meta.update(extras or {})
    if fmt == "csv":
        lines = [f"# {k} = {_fmt(v)}" for k, v in meta.items()]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(v) for v in row))
        text = "\n".join(lines) + "\n"
    elif fmt == "json":
        payload = {
            "config": {k: (_fmt(v) if isinstance(v, float) else v) for k, v in config.items()},
            "columns": list(columns),
            "rows": [[_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row] for row in rows],
        }
        for k, v in (extras or {}).items():
            payload[k] = _fmt(v) if isinstance(v, (float, np.floating)) else v
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        raise ConfigError(f"unknown format {fmt!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# option plumbing

COMMON = {
    "out": (str, None),
    "format": (str, "csv"),
    "plot": (str, None),
}

OPTIONS = {
    "engineer": {"d": (int, 3), "eta": (float, 0.04), "order": (int, 0), **COMMON},
    "kite": {
        "ej1": (float, 0.2),
        "ej2": (float, 0.2),
        "el1": (float, 1.0),
        "el2": (float, 1.0),
        **COMMON,
    },
    "spectrum": {
        "preset": (str, "qutrit"),
        "ec": (float, 0.08),
        "el": (float, 0.03),
        "phix_min": (float, -np.pi / 2),
        "phix_max": (float, np.pi / 2),
        "points": (int, 201),
        "levels": (int, 8),
        "nfock": (int, 120),
        **COMMON,
    },
    "dipoles": {
        "preset": (str, "qutrit"),
        "ec": (float, 0.08),
        "el": (float, 0.03),
        "phix": (float, 0.0),
        "levels": (int, 5),
        "nfock": (int, 120),
        **COMMON,
    },
    "tb-compare": {
        "d": (int, 3),
        "ec": (float, 0.08),
        "el": (float, 0.06),
        "phix_max": (float, np.pi / 2),
        "points": (int, 41),
        "mode": (str, "expectation"),
        "nfock": (int, 140),
        **COMMON,
    },
    "stirap": {
        "T": (float, 500.0),
        "omega1": (float, 1.0),
        "cycle": (str, "default"),
        "samples": (int, 501),
        **COMMON,
    },
    "check": {
        "preset": (str, "qutrit"),
        "ec": (float, 0.08),
        "el": (float, 0.03),
        "levels": (int, 8),
        "n1": (int, 100),
        "n2": (int, 140),
        **COMMON,
    },
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="fraxonium",
        description="Design and simulate generalized-fluxonium qudit circuits.",
    )
    parser.add_argument("--config", help="INI file with one section per subcommand")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "engineer": "solve potential coefficients and locate the degenerate minima",
        "kite": "fit the two-branch kite element energy-phase relation",
        "spectrum": "sweep the exact spectrum over external flux",
        "dipoles": "flux/charge dipole matrix elements at fixed flux",
        "tb-compare": "tight-binding vs exact low-energy spectra",
        "stirap": "propagate a STIRAP cycle and report the gate summary",
        "check": "Fock-truncation convergence check",
    }
    for name, opts in OPTIONS.items():
        p = sub.add_parser(name, help=helps[name])
        for key, (typ, _default) in opts.items():
            flag = "--" + key.replace("_", "-")
            p.add_argument(flag, type=typ, default=None)
    return parser


def _resolve(args) -> dict:
    """Merge builtin defaults, config-file section and explicit flags."""
    opts = OPTIONS[args.command]
    resolved = {k: default for k, (_t, default) in opts.items()}
    if args.config:
        cp = configparser.ConfigParser()
        if not cp.read(args.config):
            raise ConfigError(f"cannot read config file {args.config!r}")
        if cp.has_section(args.command):
            for key, raw in cp.items(args.command):
                key = key.replace("-", "_")
                if key.lower() == "t":
                    key = "T"
                if key not in opts:
                    raise ConfigError(
                        f"unknown key {key!r} in section [{args.command}]"
                    )
                typ = opts[key][0]
                try:
                    resolved[key] = typ(raw)
                except ValueError as exc:
                    raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
    for key in opts:
        val = getattr(args, key, None)
        if val is not None:
            resolved[key] = val
    return resolved


# ---------------------------------------------------------------------------
# subcommands

def cmd_engineer(cfg):
    if cfg["d"] < 3:
        raise ConfigError("d >= 3 required for engineered coefficients "
                          "(use the fluxonium preset for d = 2)")
    spec = potential_forge.QuditPotentialSpec(cfg["d"], cfg["eta"], cfg["order"])
    pot = potential_forge.solve_coefficients(spec)
    mins = potential_forge.find_minima_numeric(pot)
    vals = [v for _, v in mins]
    residual = max(vals) - min(vals)
    rows = [("coefficient", n, a) for n, a in pot.coefficients]
    rows += [("minimum", l, p) for l, p in pot.minima]
    extras = {"degeneracy_residual": residual, "leading_order": spec.leading_order,
              "leading_sign": pot.leading_sign}
    _write_output(cfg["out"], cfg["format"], _public(cfg),
                  ("kind", "index", "value"), rows, extras)
    if cfg["plot"]:
        from . import plotting

        plotting.save_potential(pot, cfg["plot"])


def cmd_kite(cfg):
    fit = harmonic_synth.kite_potential(cfg["ej1"], cfg["ej2"], cfg["el1"], cfg["el2"])
    rel = fit.relation
    rows = [(n, rel.cos_coeffs[n]) for n in range(1, min(11, len(rel.cos_coeffs)))]
    extras = {
        "e_j_eff": fit.e_j,
        "e_k_eff": fit.e_k,
        "sin_residual": fit.sin_residual,
        "fit_residual": fit.fit_residual,
    }
    _write_output(cfg["out"], cfg["format"], _public(cfg), ("n", "epsilon_n"), rows, extras)
    if cfg["plot"]:
        from . import plotting

        plotting.save_relation(rel, cfg["plot"], fit)


def _circuit(cfg):
    return spectral_engine.preset_spec(
        cfg["preset"], cfg["ec"], cfg["el"], n_fock=cfg["nfock"]
    )


def cmd_spectrum(cfg):
    spec = _circuit(cfg)
    grid = np.linspace(cfg["phix_min"], cfg["phix_max"], cfg["points"])
    sweep = spectral_engine.sweep_flux(spec, grid, k=cfg["levels"])
    cols = ["phix"] + [f"E{j}" for j in range(cfg["levels"])]
    rows = [(px, *sweep.energies[i]) for i, px in enumerate(grid)]
    _write_output(cfg["out"], cfg["format"], _public(cfg), cols, rows)
    if cfg["plot"]:
        from . import plotting

        plotting.save_spectrum(sweep, cfg["plot"])


def cmd_dipoles(cfg):
    spec = _circuit(cfg).with_flux(cfg["phix"])
    chart = spectral_engine.dipole_chart(spec, k=cfg["levels"] + 1)
    rows = []
    for a in range(cfg["levels"] + 1):
        for b in range(a + 1, cfg["levels"] + 1):
            rows.append(
                (a, b,
                 abs(chart.phi_elems[a, b]),
                 abs(chart.charge_elems[a, b]),
                 chart.transition_energies[a, b])
            )
    _write_output(
        cfg["out"], cfg["format"], _public(cfg),
        ("alpha", "beta", "abs_phi", "abs_n", "omega_over_wp"), rows,
        {"plasma_frequency": chart.plasma_frequency},
    )
    if cfg["plot"]:
        from . import plotting

        plotting.save_dipoles(chart, cfg["plot"])


def cmd_tb_compare(cfg):
    params = fraxon_tb.FraxonParams(cfg["d"], cfg["ec"], cfg["el"])
    grid = np.linspace(-cfg["phix_max"], cfg["phix_max"], cfg["points"])
    rep = fraxon_tb.compare_with_exact(params, grid, mode=cfg["mode"], n_fock=cfg["nfock"])
    d = cfg["d"]
    cols = ["phix"] + [f"tb_E{j}" for j in range(d)] + [f"exact_E{j}" for j in range(d)]
    rows = [
        (px, *rep.tb_levels[i], *rep.exact_levels[i]) for i, px in enumerate(grid)
    ]
    extras = {
        "t_tb": rep.t_tb,
        "t_exact": rep.t_exact,
        "t_ratio": rep.t_ratio,
        "max_deviation": rep.max_deviation,
        "mean_deviation": rep.mean_deviation,
    }
    _write_output(cfg["out"], cfg["format"], _public(cfg), cols, rows, extras)
    if cfg["plot"]:
        from . import plotting

        plotting.save_tb_compare(rep, cfg["plot"])


def cmd_stirap(cfg):
    omega1 = cfg["omega1"]
    schedule = drive_lab.make_cycle(cfg["cycle"], omega1, cfg["T"] / omega1)
    initial = np.array([1, 0, 0, 0], dtype=complex)
    trace = drive_lab.propagate(schedule, initial, n_samples=cfg["samples"])
    hol = drive_lab.holonomy_oracle(schedule)
    b0 = drive_lab.dark_subspace(*schedule.amplitudes(0.0))
    predicted = b0 @ (hol @ (b0.conj().T @ initial))
    fidelity = float(abs(np.vdot(predicted, trace.final_state)) ** 2)
    extras = {
        "final_P0": float(trace.populations[-1, 0]),
        "final_P1": float(trace.populations[-1, 1]),
        "final_P2": float(trace.populations[-1, 2]),
        "final_Pu": float(trace.populations[-1, 3]),
        "leakage": trace.leakage,
        "fidelity_vs_holonomy": fidelity,
        "adiabaticity": drive_lab.adiabaticity(schedule),
        "norm_drift": trace.norm_drift,
    }
    rows = [
        (t, *trace.populations[i]) for i, t in enumerate(trace.times)
    ]
    _write_output(cfg["out"], cfg["format"], _public(cfg),
                  ("t", "P0", "P1", "P2", "Pu"), rows, extras)
    if cfg["plot"]:
        from . import plotting

        plotting.save_stirap(trace, schedule, cfg["plot"])


def cmd_check(cfg):
    spec = spectral_engine.preset_spec(cfg["preset"], cfg["ec"], cfg["el"])
    shift = spectral_engine.convergence_check(spec, cfg["levels"], cfg["n1"], cfg["n2"])
    _write_output(cfg["out"], cfg["format"], _public(cfg),
                  ("n1", "n2", "max_level_shift"), [(cfg["n1"], cfg["n2"], shift)])


def _public(cfg):
    return {k: v for k, v in cfg.items() if k not in ("out", "plot") and v is not None}


HANDLERS = {
    "engineer": cmd_engineer,
    "kite": cmd_kite,
    "spectrum": cmd_spectrum,
    "dipoles": cmd_dipoles,
    "tb-compare": cmd_tb_compare,
    "stirap": cmd_stirap,
    "check": cmd_check,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        HANDLERS[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (potential_forge.PotentialError,
            harmonic_synth.SynthesisError,
            spectral_engine.SpectralError,
            drive_lab.DriveError,
            ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
