"""Statistical machinery: log-log exponent fitting, localized sums and
integrals with their boundedness ratios, and the windowed diagonal cluster
scan."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import DomainError
from .manifolds import ZERO_DERIV, DerivIndex, ModelManifold, RoundSphere2
from . import lattice as lat


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    max_abs_residual: float
    grid_size: int


@dataclass(frozen=True, eq=False)
class ScanReport:
    """Per-lambda scan values with a fitted growth exponent.

    `normalized` carries an optional companion column (e.g. value * log
    lambda / lambda^p for boundedness inspection)."""

    lambda_grid: np.ndarray
    sup_values: np.ndarray
    fitted_exponent: float
    fit_residual: float
    normalized: np.ndarray | None = None


def loglog_fit(xs, ys) -> FitResult:
    """Least squares for log y = slope * log x + intercept (natural logs)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if xs.ndim != 1 or xs.shape != ys.shape:
        raise DomainError("xs and ys must be 1-d arrays of equal length")
    if xs.size < 3:
        raise DomainError("need at least 3 points to fit")
    if np.any(xs <= 0.0) or np.any(ys <= 0.0):
        raise DomainError("loglog_fit requires strictly positive data")
    if np.any(np.diff(xs) <= 0.0):
        raise DomainError("xs must be strictly increasing")
    lx, ly = np.log(xs), np.log(ys)
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    return FitResult(float(slope), float(intercept), float(np.max(np.abs(resid))), xs.size)


def scan_report(lambda_grid, values, normalized=None) -> ScanReport:
    fit = loglog_fit(lambda_grid, values)
    return ScanReport(
        lambda_grid=np.asarray(lambda_grid, dtype=float),
        sup_values=np.asarray(values, dtype=float),
        fitted_exponent=fit.slope,
        fit_residual=fit.max_abs_residual,
        normalized=None if normalized is None else np.asarray(normalized, dtype=float),
    )


def _tail_integral(y0: float, lam: float, N: int, p: float) -> float:
    """int_{y0}^inf y^{-N} (y + lam - 1)^p dy; closed form (binomial) for
    integer p, adaptive quadrature otherwise."""
    if float(p).is_integer():
        pi_ = int(p)
        total = 0.0
        c = 1.0
        for j in range(pi_ + 1):
            # C(p, j) * (lam-1)^{p-j} * y0^{j-N+1} / (N-1-j)
            binom = c
            total += binom * (lam - 1.0) ** (pi_ - j) * y0 ** (j - N + 1.0) / (N - 1.0 - j)
            c = c * (pi_ - j) / (j + 1.0)
        return total
    val, _ = quad(lambda y: y ** (-float(N)) * (y + lam - 1.0) ** p, y0, np.inf, limit=200)
    return val


def localized_sum(lam: float, N: int, p: float) -> float:
    """sum_{k=0}^inf (1 + |lam - k|)^{-N} k^p.

    The sum is truncated at K and the monotone tail is replaced by the
    midpoint of its integral bracket, so the error is below
    1e-12 * max(1, lam^p).
    """
    if lam < 1.0:
        raise DomainError("lam must be >= 1")
    if not isinstance(N, (int, np.integer)) or N < 2:
        raise DomainError("N must be an integer >= 2")
    if p < 0.0:
        raise DomainError("p must be >= 0")
    if N - p <= 1.0:
        raise DomainError("sum diverges unless N > p + 1")
    scale = max(1.0, float(lam) ** p)
    # bracket width <= g(K)/2 with g(t) = (1+t-lam)^{-N} t^p decreasing
    y0 = 64.0
    while (1.0 + y0) ** (-float(N)) * (y0 + lam) ** p > 2e-12 * scale:
        y0 *= 2.0
        if y0 > 4e6:
            raise DomainError("term budget exhausted; N too small for p")
    kmax = int(np.ceil(lam + y0))
    k = np.arange(0, kmax + 1, dtype=float)
    head = float(np.sum((1.0 + np.abs(lam - k)) ** (-float(N)) * k**p))
    upper = _tail_integral(kmax + 1.0 - lam, lam, N, p)
    lower = _tail_integral(kmax + 2.0 - lam, lam, N, p)
    return head + 0.5 * (upper + lower)


def localized_sum_ratio_scan(lambda_grid, N: int, p: float) -> ScanReport:
    """Localized sums along a lambda grid with the ratio sum / lambda^p as
    the normalized column (boundedness of the ratio is the claim)."""
    grid = np.asarray(lambda_grid, dtype=float)
    sums = np.array([localized_sum(l, N, p) for l in grid])
    return scan_report(grid, sums, normalized=sums / grid**p)


def localized_integral(lam: float, N: int, p: float) -> float:
    """int_1^inf (1 + |lam - r|)^{-N} (1 + r)^p dr by adaptive quadrature
    split at r = lam."""
    if lam < 1.0:
        raise DomainError("lam must be >= 1")
    if N - p <= 1.0:
        raise DomainError("integral diverges unless N > p + 1")
    f = lambda r: (1.0 + abs(lam - r)) ** (-float(N)) * (1.0 + r) ** p
    scale = max(1.0, lam**p)
    left, le = quad(f, 1.0, lam, epsabs=1e-12 * scale, epsrel=1e-12, limit=200)
    right, re_ = quad(f, lam, np.inf, epsabs=1e-12 * scale, epsrel=1e-12, limit=200)
    if le + re_ > 1e-10 * scale:
        raise DomainError("quadrature error estimate exceeds tolerance")
    return float(left + right)


def cluster_sup_scan(m: ModelManifold, lambda_grid, A_rule,
                     d: DerivIndex = ZERO_DERIV) -> ScanReport:
    """Diagonal windowed sums sup_x sum_{lambda_j in (lambda, lambda+A]}
    |d^alpha phi_j(x)|^2 along a lambda grid.

    On these models the diagonal sum is constant in x (torus modes have
    constant modulus; the sphere level sum is rotation invariant), so the
    sup over any x-grid equals the common value.  A_rule is a fixed width
    or "one-over-log" for A = 1/log lambda; the one-over-log report carries
    value * log(lambda) / lambda^{n-1+2|alpha|} in `normalized`.
    """
    grid = np.asarray(lambda_grid, dtype=float)
    one_over_log = isinstance(A_rule, str)
    if one_over_log and A_rule != "one-over-log":
        raise DomainError("A_rule must be a positive width or 'one-over-log'")
    if tuple(d.alpha) != tuple(d.beta):
        raise DomainError("cluster sup scan takes matched derivatives (alpha == beta)")
    if isinstance(m, RoundSphere2) and not d.is_zero:
        raise DomainError("derivatives are unsupported on the sphere")
    n = m.dim
    values = np.empty(grid.size)
    for i, lam in enumerate(grid):
        A = 1.0 / np.log(lam) if one_over_log else float(A_rule)
        if A <= 0.0:
            raise DomainError("window width must be positive")
        if isinstance(m, RoundSphere2):
            total = 0.0
            l = 0
            while m.level_sqrt_eigenvalue(l) <= lam + A:
                if m.level_sqrt_eigenvalue(l) > lam:
                    total += (2 * l + 1) / (4.0 * np.pi * m.radius**2)
                l += 1
            values[i] = total
        else:
            alpha, _ = d.padded(n)
            _, vectors, norms = lat.dual_vectors(m.lattice, lam + A)
            sel = vectors[norms > lam]
            mono = np.ones(sel.shape[0])
            for j, a in enumerate(alpha):
                if a:
                    mono = mono * sel[:, j] ** (2 * a)
            values[i] = np.sum(mono) / m.lattice.covolume
    normalized = None
    if one_over_log:
        exponent = n - 1 + 2 * sum(d.alpha)
        normalized = values * np.log(grid) / grid**exponent
    return scan_report(grid, values, normalized=normalized)
