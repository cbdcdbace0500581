"""The two-point Weyl law: Bessel closed-form leading term, remainder
extraction, scaling scans, and the cluster-vs-Bessel comparison.

Leading-term derivatives are exact Bessel-ladder formulas chain-ruled
through w = torus_log(x, y); no finite differences anywhere (they would
contaminate exponent fits at scale lambda * d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lattice as lat
from .analysis import ScanReport, scan_report
from .errors import DomainError, PreconditionError
from .manifolds import (
    ZERO_DERIV,
    DerivIndex,
    FlatTorus,
    ModelManifold,
    RoundSphere2,
    cluster_kernel,
    spectral_function,
    sphere_angle,
)
from .specfun import BesselOrder, bessel_ratio


@dataclass(frozen=True, eq=False)
class RemainderSample:
    """One evaluation of exact = leading + remainder (identity by construction)."""

    lam: float
    x: np.ndarray
    y: np.ndarray
    dist: float
    leading: float
    exact: float
    remainder: float
    deriv: DerivIndex


def _ball_profile_derivative(n: int, u: np.ndarray, gamma) -> float:
    """D^gamma of G(u) = integral over the unit ball of e^{i<u,xi>} d xi,
    |gamma| <= 2, via d/dr [J_nu(r)/r^nu] = -r * J_{nu+1}(r)/r^{nu+1}."""
    r = float(np.linalg.norm(u))
    c = (2.0 * np.pi) ** (n / 2.0)
    total = int(sum(gamma))
    # BesselOrder takes 2*nu: the ladder runs f_{n/2}, f_{n/2+1}, f_{n/2+2}
    if total == 0:
        return c * float(bessel_ratio(BesselOrder(n), r))
    idx = [j for j, g in enumerate(gamma) for _ in range(g)]
    if total == 1:
        (j,) = idx
        return -c * float(u[j]) * float(bessel_ratio(BesselOrder(n + 2), r))
    i, j = idx
    val = float(u[i]) * float(u[j]) * float(bessel_ratio(BesselOrder(n + 4), r))
    if i == j:
        val -= float(bessel_ratio(BesselOrder(n + 2), r))
    return c * val


def _sphere_profile_derivative(n: int, u: np.ndarray, gamma) -> float:
    """D^gamma of S(u) = integral over S^{n-1} of e^{i<u,sigma>} d sigma,
    |gamma| <= 2; same ladder one order down (f_{(n-2)/2} upward)."""
    r = float(np.linalg.norm(u))
    c = (2.0 * np.pi) ** (n / 2.0)
    total = int(sum(gamma))
    if total == 0:
        return c * float(bessel_ratio(BesselOrder(n - 2), r))
    idx = [j for j, g in enumerate(gamma) for _ in range(g)]
    if total == 1:
        (j,) = idx
        return -c * float(u[j]) * float(bessel_ratio(BesselOrder(n), r))
    i, j = idx
    val = float(u[i]) * float(u[j]) * float(bessel_ratio(BesselOrder(n + 2), r))
    if i == j:
        val -= float(bessel_ratio(BesselOrder(n), r))
    return c * val


def _combined_gamma(m: FlatTorus, d: DerivIndex):
    alpha, beta = d.padded(m.dim)
    return alpha, tuple(a + b for a, b in zip(alpha, beta))


def leading_term(m: FlatTorus, lam: float, x, y, d: DerivIndex = ZERO_DERIV) -> float:
    """Universal ball-Fourier leading term of the two-point Weyl law on a
    flat torus: (lambda^n/(2pi)^n) * B_n(lambda * d_g(x,y)), with exact
    closed-form derivatives."""
    if not isinstance(m, FlatTorus):
        raise DomainError("leading_term is defined on flat tori")
    if lam <= 0.0:
        raise DomainError("lambda must be positive")
    n = m.dim
    w = lat.torus_log(m.lattice, x, y)
    alpha, gamma = _combined_gamma(m, d)
    base = lam**n / (2.0 * np.pi) ** n
    deriv_scale = (-1.0) ** sum(alpha) * lam ** int(sum(gamma))
    return base * deriv_scale * _ball_profile_derivative(n, lam * w, gamma)


def remainder(m: FlatTorus, lam: float, x, y, d: DerivIndex = ZERO_DERIV,
              cap: int = lat.DEFAULT_ENUM_CAP) -> RemainderSample:
    """Exact spectral function minus the Weyl leading term."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    w = lat.torus_log(m.lattice, x, y)
    exact = spectral_function(m, lam, x, y, d, cap)
    lead = leading_term(m, lam, x, y, d)
    return RemainderSample(lam=float(lam), x=x, y=y, dist=float(np.linalg.norm(w)),
                           leading=lead, exact=exact, remainder=exact - lead, deriv=d)


def _check_pairs_within(m: FlatTorus, point_pairs, bound: float, what: str):
    for x, y in point_pairs:
        dval = lat.torus_distance(m.lattice, x, y)
        if dval > bound + 1e-12:
            raise PreconditionError(
                "pair at distance %.6g violates %s <= %.6g" % (dval, what, bound))


def remainder_scan(m: FlatTorus, lambda_grid, point_pairs,
                   d: DerivIndex = ZERO_DERIV) -> ScanReport:
    """Sup over the pair set of |remainder| per lambda, with a log-log
    exponent fit (empirical growth of the Weyl remainder)."""
    from .lattice import injectivity_radius

    grid = np.asarray(lambda_grid, dtype=float)
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError("lambda grid must be strictly increasing")
    _check_pairs_within(m, point_pairs, 0.5 * injectivity_radius(m.lattice),
                        "d_g(x,y) (half the injectivity radius)")
    sups = np.empty(grid.size)
    for i, lam in enumerate(grid):
        sups[i] = max(abs(remainder(m, lam, x, y, d).remainder) for x, y in point_pairs)
    return scan_report(grid, sups)


def offdiagonal_scan(m: ModelManifold, lambda_grid, eps: float, sample_pairs) -> ScanReport:
    """Sup over pairs at distance >= eps of |E_lambda(x,y)| per lambda,
    with the fitted growth exponent."""
    grid = np.asarray(lambda_grid, dtype=float)
    if eps <= 0.0:
        raise DomainError("eps must be positive")
    for x, y in sample_pairs:
        if isinstance(m, RoundSphere2):
            dval = sphere_angle(m, x, y) * m.radius
        else:
            dval = lat.torus_distance(m.lattice, x, y)
        if dval < eps - 1e-12:
            raise PreconditionError("pair at distance %.6g violates d_g >= %.6g" % (dval, eps))
    sups = np.empty(grid.size)
    for i, lam in enumerate(grid):
        sups[i] = max(abs(spectral_function(m, lam, x, y)) for x, y in sample_pairs)
    return scan_report(grid, sups)


@dataclass(frozen=True, eq=False)
class ClusterBesselTable:
    """Cluster kernel along a geodesic vs the width * F'(mean shell radius)
    Bessel prediction; errors also reported in units of the diagonal value."""

    dists: np.ndarray
    cluster: np.ndarray
    bessel_prediction: np.ndarray
    abs_error: np.ndarray
    diagonal: float
    mean_shell_radius: float


def _window_mean_shell_radius(m: ModelManifold, lam: float, width: float) -> float:
    if isinstance(m, FlatTorus):
        _, _, norms = lat.dual_vectors(m.lattice, lam + width)
        in_window = norms[norms > lam]
        return float(np.mean(in_window)) if in_window.size else lam + 0.5 * width
    radii = []
    l = 0
    while m.level_sqrt_eigenvalue(l) <= lam + width:
        if m.level_sqrt_eigenvalue(l) > lam:
            radii.extend([m.level_sqrt_eigenvalue(l)] * (2 * l + 1))
        l += 1
    return float(np.mean(radii)) if radii else lam + 0.5 * width


def cluster_prediction(m: ModelManifold, lam: float, width: float, dist,
                       d: DerivIndex = ZERO_DERIV, direction=None,
                       lam_mid: float | None = None):
    """width * (lam_mid^{n-1}/(2pi)^{n/2}) J_{(n-2)/2}(lam_mid d)/(lam_mid d)^{(n-2)/2},
    the Taylor step F(lam+width) - F(lam) ~ width * F'(lam_mid) evaluated at
    the window's multiplicity-weighted mean shell radius."""
    n = m.dim
    if lam_mid is None:
        lam_mid = _window_mean_shell_radius(m, lam, width)
    dist = np.asarray(dist, dtype=float)
    scalar = dist.ndim == 0
    dist = np.atleast_1d(dist)
    if d.is_zero:
        vals = (width * lam_mid ** (n - 1) / (2.0 * np.pi) ** n
                * (2.0 * np.pi) ** (n / 2.0) * bessel_ratio(BesselOrder(n - 2), lam_mid * dist))
    else:
        if not isinstance(m, FlatTorus):
            raise DomainError("derivative predictions are torus-only")
        direction = (np.eye(n)[0] if direction is None
                     else np.asarray(direction, dtype=float))
        direction = direction / np.linalg.norm(direction)
        alpha, gamma = _combined_gamma(m, d)
        base = width * lam_mid ** (n - 1) / (2.0 * np.pi) ** n
        scale = (-1.0) ** sum(alpha) * lam_mid ** int(sum(gamma))
        vals = np.array([
            base * scale * _sphere_profile_derivative(n, lam_mid * r * direction, gamma)
            for r in dist
        ])
    return (float(vals[0]), float(lam_mid)) if scalar else (vals, float(lam_mid))


def cluster_vs_bessel(m: ModelManifold, lam: float, width: float, x0, dist_grid,
                      d: DerivIndex = ZERO_DERIV, direction=None) -> ClusterBesselTable:
    """Cluster kernel along a geodesic from x0 against the universal Bessel
    prediction of the window."""
    dist_grid = np.asarray(dist_grid, dtype=float)
    if np.any(dist_grid < 0.0):
        raise DomainError("distances must be nonnegative")
    if isinstance(m, FlatTorus):
        from .lattice import injectivity_radius

        if np.max(dist_grid) > 0.5 * injectivity_radius(m.lattice):
            raise PreconditionError("distance grid exceeds half the injectivity radius")
        x0 = np.asarray(x0, dtype=float)
        direction = (np.eye(m.dim)[0] if direction is None
                     else np.asarray(direction, dtype=float))
        direction = direction / np.linalg.norm(direction)
        points = [x0 + r * direction for r in dist_grid]
    else:
        if np.max(dist_grid) > 0.5 * np.pi * m.radius:
            raise PreconditionError("distance grid exceeds half the injectivity radius")
        # geodesic along a meridian from the pole (sphere kernels are
        # rotation invariant, so the base point is immaterial)
        points = [m.radius * np.array([np.sin(r / m.radius), 0.0, np.cos(r / m.radius)])
                  for r in dist_grid]
        x0 = m.radius * np.array([0.0, 0.0, 1.0])
    cluster = np.array([cluster_kernel(m, lam, width, x0, pt, d) for pt in points])
    prediction, lam_mid = cluster_prediction(
        m, lam, width, dist_grid, d,
        direction=direction if isinstance(m, FlatTorus) else None)
    diagonal = cluster_kernel(m, lam, width, x0, x0, d)
    return ClusterBesselTable(
        dists=dist_grid,
        cluster=cluster,
        bessel_prediction=np.asarray(prediction),
        abs_error=np.abs(cluster - np.asarray(prediction)),
        diagonal=float(diagonal),
        mean_shell_radius=lam_mid,
    )
