"""Command-line entry point.

Every command computes all of its artifacts in memory first; files are then
written through a temporary name and renamed, followed by manifest.json.
Exit codes: 0 success, 1 invalid input, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import hashlib
import json
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .config import COMMANDS, ConfigError, RunConfig, load_config
from .equilibrium import droplet_radii, equilibrium_measure
from .errors import DomainError, QuadratureError, RegimeError, UnboundedDropletError
from .extremes import a_n_const, omega_law, weibull_cdf
from .kernel import build_context, density_profile, rescaled_kernel
from .limits import canonical_spec, half_line_mass, k_alpha, mass_one_residual, ward_report
from .norms import critical_window, high_start, norm_asymptotic_crit, norm_asymptotic_high, window_tag
from .sampler import empirical_max_modulus, ks_critical_95, ks_statistic, prepare, sample_batch

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


def _fmt(v) -> str:
    if isinstance(v, (str, np.str_)):
        return str(v)
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return format(float(v), ".17g")


def csv_text(header: list[str], columns: list) -> str:
    """CSV with one header row; floats use 17 significant digits."""
    cols = [np.asarray(c) for c in columns]
    n = len(cols[0])
    if any(len(c) != n for c in cols):
        raise ValueError("ragged CSV columns")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for i in range(n):
        w.writerow([_fmt(c[i]) for c in cols])
    return buf.getvalue()


def json_text(obj) -> str:
    def conv(o):
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, np.ndarray):
            return o.tolist()
        raise TypeError(type(o))

    return json.dumps(obj, indent=2, sort_keys=True, default=conv) + "\n"


# --------------------------------------------------------------- commands


def cmd_equilibrium(cfg: RunConfig, threads: int):
    e = cfg.ensemble(cfg.N[0])
    eq = equilibrium_measure(e)
    r = cfg.grid("r", {"linspace": [0.0, eq.rho_star, 401]})
    dens = eq.density(r)
    summary = {
        "rho0": eq.rho0,
        "rho1": eq.rho1,
        "rho_star": eq.rho_star,
        "tau_star": eq.tau_star,
        "singular_mass": eq.singular_mass,
        "ring_mass": eq.ring_mass(),
        "total_mass": eq.total_mass(),
        "wall_density": eq.wall_density(),
        "gamma_N": eq.gamma_N,
        "N": e.N,
    }
    return {
        "equilibrium_density.csv": csv_text(["r [length]", "density [per dA=dxdy/pi]"], [r, dens]),
        "equilibrium_summary.json": json_text(summary),
    }


def cmd_norms(cfg: RunConfig, threads: int):
    out = {}
    for N in cfg.N:
        e = cfg.ensemble(N)
        ctx = build_context(e, cfg.tol, threads)
        lo, hi = critical_window(e, cfg.M)
        m_n = high_start(e, cfg.M)
        hp = np.full(N, np.nan)
        cp = np.full(N, np.nan)
        tags = []
        for j in range(N):
            if m_n <= j < N:
                hp[j] = norm_asymptotic_high(e, j, cfg.M)
            if max(lo, 1) <= j <= hi:
                cp[j] = norm_asymptotic_crit(e, j, cfg.M)
            tags.append(window_tag(e, j, cfg.M))
        out[f"norms_N{N}.csv"] = csv_text(
            ["j [degree]", "log_norm [1]", "high_prediction [1]", "crit_prediction [1]", "window_tag [label]"],
            [np.arange(N), ctx.norms.log_norms, hp, cp, tags],
        )
    return out


def cmd_kernel(cfg: RunConfig, threads: int):
    x = cfg.grid("x", {"linspace": [0.25, 3.0, 111]})
    out, summary = {}, {"alpha": cfg.alpha, "sup_abs_err": {}}
    lim = np.real(k_alpha(cfg.alpha, x, x))
    for N in cfg.N:
        ctx = build_context(cfg.ensemble(N), cfg.tol, threads)
        rn = np.real(rescaled_kernel(ctx, x, x))
        err = np.abs(rn - lim)
        summary["sup_abs_err"][str(N)] = float(err.max())
        out[f"kernel_N{N}.csv"] = csv_text(
            ["x [gamma_N]", "R_N [1]", "R_limit [1]", "abs_err [1]"], [x, rn, lim, err]
        )
    out["kernel_summary.json"] = json_text(summary)
    return out


def cmd_profile(cfg: RunConfig, threads: int):
    p = cfg.build_potential()
    out = {}
    for N in cfg.N:
        if cfg.rho_star is None:
            _, rho1 = droplet_radii(p)
            r = cfg.grid("r", {"linspace": [1e-3, 1.2 * rho1, 600]})
            dens = density_profile(p, N, r)
            tag = "free"
        else:
            r = cfg.grid("r", {"linspace": [1e-3, cfg.rho_star * (1 - 1e-6), 600]})
            if np.any(r >= cfg.rho_star):
                raise ConfigError("profile radii must stay below rho_star")
            dens = density_profile(p, N, r, cfg.rho_star, cfg.alpha, cfg.build_h())
            tag = f"wall{cfg.rho_star:g}"
        out[f"profile_{tag}_N{N}.csv"] = csv_text(["r [length]", "K_N_diag_over_N [per dA=dxdy/pi]"], [r, dens])
    return out


def cmd_limit_density(cfg: RunConfig, threads: int):
    x = cfg.grid("x", {"geomspace": [1e-4, 10.0, 400]})
    out, masses = {}, {}
    for a in cfg.alphas:
        out[f"limit_density_alpha{a:g}.csv"] = csv_text(
            ["x [gamma_N]", "K_alpha_diag [1]"], [x, np.real(k_alpha(a, x, x))]
        )
        masses[f"{a:g}"] = half_line_mass(a)
    out["limit_density_summary.json"] = json_text({"half_line_mass": masses})
    return out


def cmd_massone(cfg: RunConfig, threads: int):
    x = cfg.grid("x", {"linspace": [0.1, 5.0, 20]})
    rows = {k: [] for k in ("alpha", "x", "reduced", "direct", "tail")}
    for a in cfg.alphas:
        spec = canonical_spec(a, cfg.intervals)
        for xi in x:
            rep = mass_one_residual(spec, xi, direct=cfg.direct)
            for k, v in zip(rows, (a, xi, rep.reduced, rep.direct, rep.tail_estimate)):
                rows[k].append(v)
    text = csv_text(
        ["alpha [1]", "x [gamma_N]", "reduced_residual [1]", "direct_residual [1]", "tail_estimate [1]"],
        list(rows.values()),
    )
    summary = {
        "max_reduced": float(np.max(np.abs(rows["reduced"]))),
        "max_direct": float(np.nanmax(np.abs(rows["direct"]))) if cfg.direct else None,
    }
    return {"massone.csv": text, "massone_summary.json": json_text(summary)}


def cmd_ward(cfg: RunConfig, threads: int):
    x = cfg.grid("x", {"linspace": [0.2, 3.0, 29]})
    cols = {k: [] for k in ("alpha", "x", "R", "C", "lhs", "rhs", "res")}
    summary = {}
    for a in cfg.alphas:
        rep = ward_report(canonical_spec(a, cfg.intervals), x, include_wall_charge=cfg.include_wall_charge)
        for k, v in zip(cols, (np.full(x.size, a), x, rep.R, rep.C, rep.lhs, rep.rhs, rep.residual)):
            cols[k].extend(np.asarray(v).tolist())
        summary[f"{a:g}"] = rep.max_residual
    text = csv_text(
        ["alpha [1]", "x [gamma_N]", "R [1]", "C [1]", "dbar_C [1]", "R_minus_Delta_logR [1]", "residual [1]"],
        list(cols.values()),
    )
    return {"ward.csv": text, "ward_summary.json": json_text({"max_residual": summary, "include_wall_charge": cfg.include_wall_charge})}


def cmd_maxmod(cfg: RunConfig, threads: int):
    x = cfg.grid("x", {"linspace": [0.0, 3.0, 301]})
    out, summary = {}, {"alpha": cfg.alpha, "a_N": {}, "sup_error": {}}
    for N in cfg.N:
        ctx = build_context(cfg.ensemble(N), cfg.tol, threads)
        _, p, i_vals, _ = omega_law(ctx, x)
        w = weibull_cdf(cfg.alpha, x)
        err = np.abs(p - w)
        summary["a_N"][str(N)] = a_n_const(ctx.ensemble)
        summary["sup_error"][str(N)] = float(err.max())
        out[f"maxmod_N{N}.csv"] = csv_text(
            ["x [a_N]", "exact_cdf [1]", "weibull_cdf [1]", "abs_err [1]", "I_N [1]"], [x, p, w, err, i_vals]
        )
    out["maxmod_summary.json"] = json_text(summary)
    return out


def cmd_sample(cfg: RunConfig, threads: int):
    N = cfg.N[0]
    ctx = build_context(cfg.ensemble(N), cfg.tol, threads)
    st = prepare(ctx, cfg.nodes_per_degree, threads)
    batch = sample_batch(st, cfg.seed, cfg.count, threads)
    ids = np.repeat(np.arange(batch.count), N)
    pts = batch.configs.ravel()
    return {
        "samples.csv": csv_text(["config_id [index]", "re [length]", "im [length]"], [ids, pts.real, pts.imag])
    }


def cmd_sample_maxmod(cfg: RunConfig, threads: int):
    N = cfg.N[0]
    ctx = build_context(cfg.ensemble(N), cfg.tol, threads)
    st = prepare(ctx, cfg.nodes_per_degree, threads)
    batch = sample_batch(st, cfg.seed, cfg.count, threads)
    a_n = a_n_const(ctx.ensemble)
    omega, emp = empirical_max_modulus(batch, ctx.ensemble.rho_star, a_n)
    xs, inv = np.unique(omega, return_inverse=True)
    _, p, _, _ = omega_law(ctx, xs)
    exact = p[inv]
    ks = ks_statistic(omega, exact)
    summary = {"N": N, "count": batch.count, "seed": cfg.seed, "a_N": a_n, "ks": ks, "ks_critical_95": ks_critical_95(batch.count)}
    return {
        "sample_maxmod.csv": csv_text(["omega [a_N]", "empirical_cdf [1]", "exact_cdf [1]"], [omega, emp, exact]),
        "sample_maxmod_summary.json": json_text(summary),
    }


HANDLERS = {
    "equilibrium": cmd_equilibrium,
    "norms": cmd_norms,
    "kernel": cmd_kernel,
    "profile": cmd_profile,
    "limit-density": cmd_limit_density,
    "massone-check": cmd_massone,
    "ward-check": cmd_ward,
    "maxmod": cmd_maxmod,
    "sample": cmd_sample,
    "sample-maxmod": cmd_sample_maxmod,
}


# ---------------------------------------------------------------- output


def _atomic_write(path: Path, text: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_artifacts(out_dir: Path, artifacts: dict, cfg: RunConfig) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    entries = []
    for name in sorted(artifacts):
        data = artifacts[name]
        _atomic_write(out_dir / name, data)
        raw = data.encode("utf-8")
        entries.append({"path": name, "bytes": len(raw), "sha256": hashlib.sha256(raw).hexdigest()})
    manifest = {
        "command": cfg.command,
        "config_sha256": cfg.sha256(),
        "version": __version__,
        "artifacts": entries,
    }
    path = out_dir / "manifest.json"
    _atomic_write(path, json_text(manifest))
    return path


def run(config_path, command: str | None = None, out: str | None = None, threads: int = 1) -> int:
    """Run one config; returns the process exit code."""
    try:
        cfg = load_config(config_path, command)
        if threads < 1:
            raise ConfigError("--threads must be positive")
        out_dir = Path(out if out is not None else cfg.out)
    except (ConfigError, DomainError) as exc:
        print(f"hardwall: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_INVALID
    try:
        artifacts = HANDLERS[cfg.command](cfg, threads)
    except RegimeError as exc:
        print(f"hardwall: not in the hard-wall regime: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except UnboundedDropletError as exc:
        print(f"hardwall: unbounded droplet: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ConfigError, DomainError) as exc:
        print(f"hardwall: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except QuadratureError as exc:
        print(f"hardwall: quadrature failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FloatingPointError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"hardwall: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    write_artifacts(out_dir, artifacts, cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hardwall", description="Hard-wall Coulomb gas numerics.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name in ("run", *COMMANDS):
        sp = sub.add_parser(name, help="run the command named in the config" if name == "run" else None)
        sp.add_argument("--config", required=True, help="JSON config file")
        sp.add_argument("--out", default=None, help="output directory (overrides the config)")
        sp.add_argument("--threads", type=int, default=1, help="worker threads for inner loops")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = None if args.subcommand == "run" else args.subcommand
    return run(args.config, command, args.out, args.threads)


if __name__ == "__main__":
    sys.exit(main())
