"""Command-line front end: every experiment is a subcommand writing a CSV
data file plus a JSON run manifest; `replay` re-runs a manifest and must
reproduce the CSV byte-for-byte.

Floats are printed with 17 significant digits so reproducibility is
checkable by byte comparison.  WEYL_LAB_THREADS caps internal parallelism
(default: machine parallelism); results never depend on the schedule.
"""

from __future__ import annotations

import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .analysis import (
    cluster_sup_scan,
    localized_integral,
    localized_sum,
    loglog_fit,
)
from .errors import (
    DomainError,
    PreconditionError,
    QuadratureError,
    ResourceLimitError,
    WeylLabError,
)
from .lattice import Lattice, injectivity_radius
from .manifolds import (
    ZERO_DERIV,
    DerivIndex,
    FlatTorus,
    RoundSphere2,
    cluster_kernel,
    eigenlevels,
    spectral_function,
)
from .projector import cluster_vs_bessel, offdiagonal_scan, remainder, remainder_scan
from .randomwaves import (
    RandomWaveEnsemble,
    empirical_covariance,
    exact_covariance,
    rescaled_covariance_error,
    sample_wave_grid,
)
from .rng import uniform_matrix
from .smoothing import MollifierSpec, SmoothedProjector

EXIT_NUMERIC = 1
EXIT_CONFIG = 2
EXIT_RESOURCE = 3


def thread_count() -> int:
    env = os.environ.get("WEYL_LAB_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise DomainError("WEYL_LAB_THREADS must be an integer, got %r" % env)
        if n < 1:
            raise DomainError("WEYL_LAB_THREADS must be >= 1")
        return n
    return os.cpu_count() or 1


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % float(value)
    return str(value)


def parse_manifold(text: str):
    parts = text.split(":")
    if parts[0] == "sphere2":
        if len(parts) == 1:
            return RoundSphere2()
        if len(parts) == 2:
            return RoundSphere2(radius=float(parts[1]))
        raise DomainError("bad manifold spec %r" % text)
    if parts[0] == "torus":
        if len(parts) < 3:
            raise DomainError("torus spec is torus:<dim>:<basis>, got %r" % text)
        dim = int(parts[1])
        basis_spec = ":".join(parts[2:])
        if basis_spec == "square2pi":
            return FlatTorus(Lattice.square(2.0 * np.pi, dim=dim))
        if basis_spec == "unit":
            return FlatTorus(Lattice.square(1.0, dim=dim))
        if basis_spec == "hex":
            if dim != 2:
                raise DomainError("hex lattice is 2-d")
            return FlatTorus(Lattice.hexagonal(1.0))
        if basis_spec.startswith("diag:"):
            entries = [float(v) for v in basis_spec[5:].split(",")]
            if len(entries) != dim:
                raise DomainError("diag basis needs %d entries" % dim)
            return FlatTorus(Lattice.from_basis(np.diag(entries)))
        if basis_spec.startswith("mat:"):
            rows = [[float(v) for v in row.split(",")]
                    for row in basis_spec[4:].split(";")]
            return FlatTorus(Lattice.from_basis(np.array(rows)))
        raise DomainError("unknown torus basis %r" % basis_spec)
    raise DomainError("unknown manifold %r (use torus:<n>:<basis> or sphere2[:R])" % text)


def parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise DomainError("grid spec is lo:hi:count[:log], got %r" % text)
    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    if count < 1:
        raise DomainError("grid count must be >= 1")
    if count == 1:
        return np.array([hi])
    if len(parts) == 4:
        if parts[3] != "log":
            raise DomainError("grid suffix must be 'log', got %r" % parts[3])
        if lo <= 0.0:
            raise DomainError("log grid needs lo > 0")
        return np.geomspace(lo, hi, count)
    return np.linspace(lo, hi, count)


def parse_deriv(text: str | None) -> DerivIndex:
    if not text:
        return ZERO_DERIV
    parts = text.split(",")
    if len(parts) != 2:
        raise DomainError("--deriv takes 'ax,ay': first-coordinate orders on x and y")
    ax, ay = int(parts[0]), int(parts[1])
    return DerivIndex(alpha=(ax, 0), beta=(ay, 0))


def parse_vector(text: str, dim: int) -> np.ndarray:
    vals = [float(v) for v in text.split(",")]
    if len(vals) != dim:
        raise DomainError("expected %d comma-separated values, got %r" % (dim, text))
    return np.array(vals)


def seeded_cell_points(lattice: Lattice, count: int, seed: int, salt: int) -> np.ndarray:
    """Deterministic points uniform over the fundamental cell."""
    u = uniform_matrix(seed + salt, np.arange(count), lattice.dim)
    return u @ lattice.basis.T


def seeded_pairs(lattice: Lattice, count: int, seed: int, max_dist: float | None = None):
    """(x, y) pairs with y = x + offset; offsets have seeded directions and
    radii spread over (0, max_dist] (default: half the injectivity radius)."""
    if max_dist is None:
        max_dist = 0.5 * injectivity_radius(lattice)
    xs = seeded_cell_points(lattice, count, seed, salt=101)
    u = uniform_matrix(seed + 202, np.arange(count), 2)
    radii = max_dist * (np.arange(1, count + 1) / count)
    angles = 2.0 * np.pi * u[:, 0]
    if lattice.dim == 2:
        dirs = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    else:
        z = 2.0 * u[:, 1] - 1.0
        r = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        dirs = np.stack([r * np.cos(angles), r * np.sin(angles), z], axis=1)
    return [(xs[i], xs[i] + radii[i] * dirs[i]) for i in range(count)]


def write_outputs(out_dir: str, name: str, header, rows, config: dict,
                  results: dict | None = None) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / (name + ".csv")
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    csv_path.write_bytes(("\n".join(lines) + "\n").encode("ascii"))
    manifest = {
        "subcommand": name,
        "artifact_version": __version__,
        "seed": config.get("seed"),
        "timestamp": datetime.now(timezone.utc).isoformat(),
        "full_config": config,
    }
    if results:
        manifest["results"] = results
    (out / (name + ".manifest.json")).write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return csv_path


# ---------------------------------------------------------------------------
# subcommand runners: config dict -> (header, rows, results); pure given the
# config, so `replay` reproduces the CSV byte-for-byte


def run_eigens(config: dict):
    m = parse_manifold(config["manifold"])
    grid = parse_grid(config["lambda_grid"])
    lam_max = float(grid[-1])
    levels = eigenlevels(m, lam_max)
    rows, cum = [], 0
    for i, lv in enumerate(levels):
        cum += lv.multiplicity
        rows.append((i, lv.sqrt_eigenvalue, lv.multiplicity, cum))
    header = ["level_index", "sqrt_eigenvalue", "multiplicity", "cumulative_count"]
    return header, rows, {"lambda_max": lam_max, "total_multiplicity": cum}


def _manifold_points(m, x0_text, direction_text, dists):
    """Base point and geodesic points at the requested distances."""
    if isinstance(m, FlatTorus):
        x0 = parse_vector(x0_text, m.dim) if x0_text else np.zeros(m.dim)
        direction = (parse_vector(direction_text, m.dim) if direction_text
                     else np.eye(m.dim)[0])
        direction = direction / np.linalg.norm(direction)
        return x0, [x0 + r * direction for r in dists], direction
    x0 = m.radius * np.array([0.0, 0.0, 1.0])
    pts = [m.radius * np.array([np.sin(r / m.radius), 0.0, np.cos(r / m.radius)])
           for r in dists]
    return x0, pts, None


def run_kernel(config: dict):
    m = parse_manifold(config["manifold"])
    lam = float(config["lam"])
    width = float(config["width"])
    d = parse_deriv(config.get("deriv"))
    dists = parse_grid(config["dist_grid"])
    x0, points, _ = _manifold_points(m, config.get("x0"), config.get("direction"), dists)
    rows = []
    for r, pt in zip(dists, points):
        if width > 0.0:
            val = cluster_kernel(m, lam, width, x0, pt, d)
        else:
            val = spectral_function(m, lam, x0, pt, d)
        rows.append((r, val))
    header = ["dist", "cluster_value" if width > 0.0 else "spectral_function"]
    return header, rows, None


def run_remainder_scan(config: dict):
    m = parse_manifold(config["manifold"])
    if not isinstance(m, FlatTorus):
        raise DomainError("remainder-scan is defined on flat tori")
    grid = parse_grid(config["lambda_grid"])
    d = parse_deriv(config.get("deriv"))
    n_pairs = int(config["pairs"])
    seed = int(config["seed"])
    if n_pairs <= 1:
        pairs = [(np.zeros(m.dim), np.zeros(m.dim))]
    else:
        pairs = seeded_pairs(m.lattice, n_pairs, seed,
                             max_dist=0.45 * injectivity_radius(m.lattice))
    rep = remainder_scan(m, grid, pairs, d)
    rows = list(zip(rep.lambda_grid, rep.sup_values))
    header = ["lambda", "sup_abs_remainder"]
    return header, rows, {"fitted_exponent": rep.fitted_exponent,
                          "fit_residual": rep.fit_residual, "num_pairs": len(pairs)}


def run_offdiag_scan(config: dict):
    m = parse_manifold(config["manifold"])
    grid = parse_grid(config["lambda_grid"])
    eps = float(config["eps"])
    n_pairs = int(config["pairs"])
    seed = int(config["seed"])
    if isinstance(m, FlatTorus):
        inj = injectivity_radius(m.lattice)
        if eps >= inj:
            raise DomainError("eps must be below the injectivity radius %.6g" % inj)
        xs = seeded_cell_points(m.lattice, n_pairs, seed, salt=11)
        u = uniform_matrix(seed + 33, np.arange(n_pairs), 2)
        radii = eps + (inj * 0.999 - eps) * u[:, 0]
        angles = 2.0 * np.pi * u[:, 1]
        pairs = []
        for i in range(n_pairs):
            off = radii[i] * np.array([np.cos(angles[i]), np.sin(angles[i])]) \
                if m.dim == 2 else radii[i] * np.eye(3)[0]
            pairs.append((xs[i], xs[i] + off))
    else:
        u = uniform_matrix(seed + 7, np.arange(n_pairs), 1)[:, 0]
        lo = eps / m.radius
        thetas = lo + (np.pi - 2.0 * lo) * u
        north = m.radius * np.array([0.0, 0.0, 1.0])
        pairs = [(north, m.radius * np.array([np.sin(t), 0.0, np.cos(t)]))
                 for t in thetas]
    rep = offdiagonal_scan(m, grid, eps, pairs)
    rows = list(zip(rep.lambda_grid, rep.sup_values))
    header = ["lambda", "sup_abs_spectral_function"]
    return header, rows, {"fitted_exponent": rep.fitted_exponent,
                          "fit_residual": rep.fit_residual}


def run_smooth_compare(config: dict):
    m = parse_manifold(config["manifold"])
    if not isinstance(m, FlatTorus):
        raise DomainError("smooth-compare is defined on flat tori")
    grid = parse_grid(config["lambda_grid"])
    a_values = [float(v) for v in str(config["A"]).split(",")]
    n_pairs = int(config["pairs"])
    seed = int(config["seed"])
    rel_tol = float(config.get("tol") or 1e-9)
    spec = MollifierSpec.for_manifold(m)
    cell = m.lattice.basis @ (0.5 * np.ones(m.dim))
    max_dist = float(np.linalg.norm(cell))
    pairs = seeded_pairs(m.lattice, n_pairs, seed, max_dist=max_dist)
    rows, results = [], {}
    for lam in grid:
        for a in a_values:
            proj = SmoothedProjector(m, spec, float(lam), a, rel_tol=rel_tol)

            def one(pair):
                x, y = pair
                s = proj.spectral(x, y)
                im = proj.images(x, y)
                return s, im

            with ThreadPoolExecutor(max_workers=thread_count()) as pool:
                values = list(pool.map(one, pairs))
            worst = 0.0
            for i, ((x, y), (s, im)) in enumerate(zip(pairs, values)):
                diff = abs(s - im)
                worst = max(worst, diff / (1.0 + abs(s)))
                rows.append((lam, a, i, x[0], x[1], y[0], y[1], s, im, diff))
            results["max_rel_err_lambda=%s_A=%s" % (fmt(float(lam)), fmt(a))] = worst
    header = ["lambda", "A", "pair_index", "x1", "x2", "y1", "y2",
              "spectral", "images", "abs_diff"]
    return header, rows, results


def run_cluster_bessel(config: dict):
    m = parse_manifold(config["manifold"])
    lam = float(config["lam"])
    width = float(config["width"])
    d = parse_deriv(config.get("deriv"))
    dists = parse_grid(config["dist_grid"])
    x0_text = config.get("x0")
    x0 = (parse_vector(x0_text, m.dim) if (x0_text and isinstance(m, FlatTorus))
          else (np.zeros(m.dim) if isinstance(m, FlatTorus) else None))
    direction = None
    if config.get("direction") and isinstance(m, FlatTorus):
        direction = parse_vector(config["direction"], m.dim)
    table = cluster_vs_bessel(m, lam, width, x0, dists, d, direction=direction)
    rows = [(r, c, p, e, e / table.diagonal if table.diagonal else np.nan)
            for r, c, p, e in zip(table.dists, table.cluster,
                                  table.bessel_prediction, table.abs_error)]
    header = ["dist", "cluster", "bessel_prediction", "abs_error", "err_over_diagonal"]
    return header, rows, {"diagonal": table.diagonal,
                          "mean_shell_radius": table.mean_shell_radius}


def run_randomwave(config: dict):
    m = parse_manifold(config["manifold"])
    mode = config["mode"]
    lam = float(config["lam"])
    width = float(config["width"])
    seed = int(config["seed"])
    samples = int(config["samples"])
    ens = RandomWaveEnsemble(m, lam, width, seed=seed, num_samples=samples)
    dists = parse_grid(config["dist_grid"])
    x0, points, _ = _manifold_points(m, config.get("x0"), config.get("direction"), dists)
    if mode == "sample":
        waves = sample_wave_grid(ens, np.arange(samples), np.vstack(points))
        rows = [(s, i, dists[i], waves[s, i])
                for s in range(samples) for i in range(len(points))]
        header = ["sample_index", "point_index", "dist", "wave_value"]
        return header, rows, None
    if mode == "covariance":
        rows = []
        for r, pt in zip(dists, points):
            emp, se = empirical_covariance(ens, x0, pt)
            ex = exact_covariance(ens, x0, pt)
            rows.append((r, emp, se, ex, abs(emp - ex),
                         (emp - ex) / se if se > 0 else np.nan))
        header = ["dist", "empirical", "std_error", "exact", "abs_diff", "z_score"]
        return header, rows, None
    if mode == "rescaled":
        if not isinstance(m, FlatTorus):
            raise DomainError("rescaled mode runs on flat tori")
        rows = []
        x0 = np.zeros(m.dim)
        for sep in parse_grid(config["dist_grid"]):
            v = np.zeros(m.dim)
            v[0] = sep
            exact, universal, err = rescaled_covariance_error(ens, x0, np.zeros(m.dim), v)
            rows.append((sep, exact, universal, err))
        header = ["separation", "exact_rescaled", "universal_limit", "abs_error"]
        return header, rows, None
    raise DomainError("randomwave mode must be sample, covariance, or rescaled")


def run_appendix_a(config: dict):
    n_exp = int(config["N"])
    p_values = [float(v) for v in str(config["p"]).split(",")]
    grid = parse_grid(config["lambda_grid"])
    rows, results = [], {}
    for p in p_values:
        ratios = []
        for lam in grid:
            s = localized_sum(float(lam), n_exp, p)
            integ = localized_integral(float(lam), n_exp, p)
            ratio = s / float(lam) ** p
            ratios.append(ratio)
            rows.append((lam, p, s, integ, ratio, s / integ))
        results["ratio_spread_p=%s" % fmt(p)] = max(ratios) / min(ratios)
    header = ["lambda", "p", "localized_sum", "localized_integral",
              "sum_over_lambda_p", "sum_over_integral"]
    return header, rows, results


def run_cluster_sup(config: dict):
    m = parse_manifold(config["manifold"])
    grid = parse_grid(config["lambda_grid"])
    rule_text = str(config["A_rule"])
    rule = rule_text if rule_text == "one-over-log" else float(rule_text)
    d = parse_deriv(config.get("deriv"))
    rep = cluster_sup_scan(m, grid, rule, d)
    rows = []
    for i, lam in enumerate(rep.lambda_grid):
        a = 1.0 / np.log(lam) if rule_text == "one-over-log" else float(rule_text)
        norm = rep.normalized[i] if rep.normalized is not None else ""
        rows.append((lam, a, rep.sup_values[i], norm))
    header = ["lambda", "A", "sup_value", "normalized"]
    return header, rows, {"fitted_exponent": rep.fitted_exponent}


RUNNERS = {
    "eigens": run_eigens,
    "kernel": run_kernel,
    "remainder-scan": run_remainder_scan,
    "offdiag-scan": run_offdiag_scan,
    "smooth-compare": run_smooth_compare,
    "cluster-bessel": run_cluster_bessel,
    "randomwave": run_randomwave,
    "appendix-a": run_appendix_a,
    "cluster-sup": run_cluster_sup,
}


def execute(name: str, config: dict, out_dir: str) -> Path:
    header, rows, results = RUNNERS[name](config)
    path = write_outputs(out_dir, name, header, rows, config, results)
    if results:
        for key, val in results.items():
            click.echo("%s: %s" % (key, fmt(val) if isinstance(val, float) else val))
    click.echo("wrote %s" % path)
    return path


def guarded(fn):
    import functools

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (DomainError, PreconditionError) as exc:
            click.echo("config error: %s" % exc, err=True)
            sys.exit(EXIT_CONFIG)
        except ResourceLimitError as exc:
            click.echo("resource limit: %s" % exc, err=True)
            sys.exit(EXIT_RESOURCE)
        except (QuadratureError, FloatingPointError, ArithmeticError) as exc:
            click.echo("numeric failure: %s" % exc, err=True)
            sys.exit(EXIT_NUMERIC)
        except WeylLabError as exc:
            click.echo("error: %s" % exc, err=True)
            sys.exit(EXIT_NUMERIC)

    return wrapper


manifold_option = click.option("--manifold", required=True,
                               help="torus:<n>:<basis> or sphere2[:radius]; bases: "
                                    "square2pi, unit, hex, diag:a,b[,c], mat:a,b;c,d")
out_option = click.option("--out", default=".", show_default=True,
                          help="output directory for CSV + manifest")
seed_option = click.option("--seed", default=0, show_default=True, type=int)
deriv_option = click.option("--deriv", default=None,
                            help="ax,ay: first-coordinate derivative orders on x and y")


@click.group()
@click.version_option(version=__version__)
def main():
    """Numerical lab for two-point Weyl asymptotics on model manifolds."""


@main.command()
@manifold_option
@click.option("--lambda-grid", "lambda_grid", required=True,
              help="lo:hi:count[:log]; the hi endpoint is the level-table cutoff")
@out_option
@guarded
def eigens(manifold, lambda_grid, out):
    """Eigenvalue level table up to the grid's upper endpoint."""
    execute("eigens", {"manifold": manifold, "lambda_grid": lambda_grid, "seed": 0}, out)


@main.command()
@manifold_option
@click.option("--lambda", "lam", required=True, type=float)
@click.option("--width", default=0.0, show_default=True,
              help="0 evaluates E_lambda; > 0 evaluates the cluster window")
@click.option("--dist-grid", "dist_grid", default="0:0:1", show_default=True)
@click.option("--x0", default=None, help="base point (torus only)")
@click.option("--direction", default=None, help="geodesic direction (torus only)")
@deriv_option
@out_option
@guarded
def kernel(manifold, lam, width, dist_grid, x0, direction, deriv, out):
    """Spectral function / cluster kernel along a geodesic."""
    execute("kernel", {"manifold": manifold, "lam": lam, "width": width,
                       "dist_grid": dist_grid, "x0": x0, "direction": direction,
                       "deriv": deriv, "seed": 0}, out)


@main.command("remainder-scan")
@manifold_option
@click.option("--lambda-grid", "lambda_grid", required=True)
@click.option("--pairs", default=1, show_default=True,
              help="1 = diagonal pair only; more adds seeded near-diagonal pairs")
@deriv_option
@seed_option
@out_option
@guarded
def remainder_scan_cmd(manifold, lambda_grid, pairs, deriv, seed, out):
    """Sup of |Weyl remainder| over pairs, per lambda, with exponent fit."""
    execute("remainder-scan", {"manifold": manifold, "lambda_grid": lambda_grid,
                               "pairs": pairs, "deriv": deriv, "seed": seed}, out)


@main.command("offdiag-scan")
@manifold_option
@click.option("--lambda-grid", "lambda_grid", required=True)
@click.option("--eps", required=True, type=float, help="minimum pair distance")
@click.option("--pairs", default=6, show_default=True)
@seed_option
@out_option
@guarded
def offdiag_scan_cmd(manifold, lambda_grid, eps, pairs, seed, out):
    """Sup of |E_lambda| over pairs at distance >= eps, with exponent fit."""
    execute("offdiag-scan", {"manifold": manifold, "lambda_grid": lambda_grid,
                             "eps": eps, "pairs": pairs, "seed": seed}, out)


@main.command("smooth-compare")
@manifold_option
@click.option("--lambda-grid", "lambda_grid", required=True)
@click.option("--A", "a_values", required=True,
              help="comma-separated mollifier widths, e.g. 1.0,0.5")
@click.option("--pairs", default=20, show_default=True)
@click.option("--tol", default=None, type=float, help="quadrature relative tolerance")
@seed_option
@out_option
@guarded
def smooth_compare_cmd(manifold, lambda_grid, a_values, pairs, tol, seed, out):
    """Spectral-side vs method-of-images smoothed projector."""
    execute("smooth-compare", {"manifold": manifold, "lambda_grid": lambda_grid,
                               "A": a_values, "pairs": pairs, "tol": tol,
                               "seed": seed}, out)


@main.command("cluster-bessel")
@manifold_option
@click.option("--lambda", "lam", required=True, type=float)
@click.option("--width", default=1.0, show_default=True)
@click.option("--dist-grid", "dist_grid", required=True)
@click.option("--x0", default=None)
@click.option("--direction", default=None)
@deriv_option
@out_option
@guarded
def cluster_bessel_cmd(manifold, lam, width, dist_grid, x0, direction, deriv, out):
    """Cluster kernel vs the universal Bessel prediction."""
    execute("cluster-bessel", {"manifold": manifold, "lam": lam, "width": width,
                               "dist_grid": dist_grid, "x0": x0,
                               "direction": direction, "deriv": deriv, "seed": 0}, out)


@main.command()
@manifold_option
@click.option("--mode", type=click.Choice(["sample", "covariance", "rescaled"]),
              required=True)
@click.option("--lambda", "lam", required=True, type=float)
@click.option("--width", default=1.0, show_default=True)
@click.option("--samples", default=100, show_default=True)
@click.option("--dist-grid", "dist_grid", default="0:0:1", show_default=True,
              help="point separations (or rescaled |u-v| values in rescaled mode)")
@click.option("--x0", default=None)
@click.option("--direction", default=None)
@seed_option
@out_option
@guarded
def randomwave(manifold, mode, lam, width, samples, dist_grid, x0, direction, seed, out):
    """Monochromatic random-wave sampling and covariance experiments."""
    execute("randomwave", {"manifold": manifold, "mode": mode, "lam": lam,
                           "width": width, "samples": samples,
                           "dist_grid": dist_grid, "x0": x0,
                           "direction": direction, "seed": seed}, out)


@main.command("appendix-a")
@click.option("--N", "n_exp", default=4, show_default=True, type=int)
@click.option("--p", default="0,1,2", show_default=True,
              help="comma-separated polynomial weights")
@click.option("--lambda-grid", "lambda_grid", required=True)
@out_option
@guarded
def appendix_a_cmd(n_exp, p, lambda_grid, out):
    """Localized sums and integrals with boundedness ratios."""
    execute("appendix-a", {"N": n_exp, "p": p, "lambda_grid": lambda_grid, "seed": 0},
            out)


@main.command("cluster-sup")
@manifold_option
@click.option("--lambda-grid", "lambda_grid", required=True)
@click.option("--A-rule", "a_rule", default="1.0", show_default=True,
              help="fixed width or 'one-over-log'")
@deriv_option
@out_option
@guarded
def cluster_sup_cmd(manifold, lambda_grid, a_rule, deriv, out):
    """Diagonal windowed cluster sums along a lambda grid."""
    execute("cluster-sup", {"manifold": manifold, "lambda_grid": lambda_grid,
                            "A_rule": a_rule, "deriv": deriv, "seed": 0}, out)


@main.command()
@click.argument("manifest_path", type=click.Path(exists=True, dir_okay=False))
@out_option
@guarded
def replay(manifest_path, out):
    """Re-run a manifest; the CSV it writes must be byte-identical."""
    manifest = json.loads(Path(manifest_path).read_text())
    name = manifest.get("subcommand")
    if name not in RUNNERS:
        raise DomainError("manifest names unknown subcommand %r" % name)
    execute(name, manifest["full_config"], out)


if __name__ == "__main__":
    main()
