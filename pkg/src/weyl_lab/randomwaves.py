"""Monochromatic random waves over a spectral window: seeded Gaussian
ensembles, empirical vs exact covariance, and the universal Bessel limit of
the rescaled covariance.

Torus ensembles sample cos/sin mode pairs over the window's dual points;
sphere ensembles sample an explicit real orthonormal basis per level
(normalized associated-Legendre recurrences, built once per ensemble).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lattice as lat
from .errors import DomainError, PreconditionError
from .manifolds import FlatTorus, ModelManifold, cluster_kernel
from .rng import gaussian_matrix
from .specfun import universal_covariance


def _torus_window_modes(m: FlatTorus, lam: float, width: float):
    """Canonical half of the window's dual points (first nonzero coefficient
    positive), sorted by (norm, lexicographic coeffs)."""
    coeffs, vectors, norms = lat.dual_vectors(m.lattice, lam + width)
    sel = norms > lam
    coeffs, vectors = coeffs[sel], vectors[sel]
    canonical = np.zeros(coeffs.shape[0], dtype=bool)
    for i, c in enumerate(coeffs):
        nz = c[c != 0]
        canonical[i] = nz.size > 0 and nz[0] > 0
    return vectors[canonical]


def _normalized_legendre_rows(l: int, cos_theta: np.ndarray) -> np.ndarray:
    """Spherical-harmonic-normalized associated Legendre values
    Pbar_l^m(cos theta) for m = 0..l, shape (l+1, N); stable upward
    recurrence, so sum_m Y_lm^2 reproduces (2l+1)/(4 pi)."""
    x = np.asarray(cos_theta, dtype=float)
    sin_theta = np.sqrt(np.maximum(0.0, 1.0 - x * x))
    out = np.zeros((l + 1, x.size))
    pmm = np.full(x.size, np.sqrt(1.0 / (4.0 * np.pi)))  # Pbar_0^0
    for m in range(0, l + 1):
        if m == l:
            out[m] = pmm
            break
        prev = pmm                                   # Pbar_m^m
        cur = np.sqrt(2.0 * m + 3.0) * x * pmm       # Pbar_{m+1}^m
        for ll in range(m + 2, l + 1):
            a = np.sqrt((4.0 * ll * ll - 1.0) / (ll * ll - m * m))
            b = np.sqrt(((2.0 * ll + 1.0) * (ll - 1.0 - m) * (ll - 1.0 + m))
                        / ((2.0 * ll - 3.0) * (ll * ll - m * m)))
            prev, cur = cur, a * x * cur - b * prev
        out[m] = cur                                 # Pbar_l^m
        pmm = -np.sqrt((2.0 * m + 3.0) / (2.0 * m + 2.0)) * sin_theta * pmm
    return out


def _sphere_level_basis_values(l: int, radius: float, points: np.ndarray) -> np.ndarray:
    """Real orthonormal basis values for one sphere level at unit-sphere
    scaled points; shape (2l+1, N).  Ordering: m = 0, then (cos, sin) pairs
    for m = 1..l."""
    pts = np.atleast_2d(points) / radius
    theta = np.arccos(np.clip(pts[:, 2], -1.0, 1.0))
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    pbar = _normalized_legendre_rows(l, np.cos(theta))
    rows = [pbar[0]]
    for m in range(1, l + 1):
        rows.append(np.sqrt(2.0) * pbar[m] * np.cos(m * phi))
        rows.append(np.sqrt(2.0) * pbar[m] * np.sin(m * phi))
    return np.vstack(rows) / radius


@dataclass(eq=False)
class RandomWaveEnsemble:
    """Seeded Gaussian ensemble over the window (lam, lam + width]."""

    manifold: ModelManifold
    lam: float
    width: float = 1.0
    seed: int = 0
    num_samples: int = 1
    _mode_cache: object = field(default=None, repr=False)
    _coef_cache: object = field(default=None, repr=False)

    def __post_init__(self):
        if self.lam <= 0.0 or self.width <= 0.0:
            raise DomainError("need lam > 0 and width > 0")
        if self.num_samples < 1:
            raise DomainError("num_samples must be >= 1")

    @property
    def normalization(self) -> float:
        n = self.manifold.dim
        return self.lam ** ((1 - n) / 2.0)

    def _modes(self):
        if self._mode_cache is None:
            if isinstance(self.manifold, FlatTorus):
                vectors = _torus_window_modes(self.manifold, self.lam, self.width)
                if vectors.shape[0] == 0:
                    raise DomainError("spectral window (%g, %g] holds no modes"
                                      % (self.lam, self.lam + self.width))
                self._mode_cache = ("torus", vectors)
            else:
                degrees = []
                l = 0
                while self.manifold.level_sqrt_eigenvalue(l) <= self.lam + self.width:
                    if self.manifold.level_sqrt_eigenvalue(l) > self.lam:
                        degrees.append(l)
                    l += 1
                if not degrees:
                    raise DomainError("spectral window (%g, %g] holds no modes"
                                      % (self.lam, self.lam + self.width))
                self._mode_cache = ("sphere", degrees)
        return self._mode_cache

    @property
    def mode_count(self) -> int:
        kind, data = self._modes()
        if kind == "torus":
            return 2 * data.shape[0]
        return sum(2 * l + 1 for l in data)

    def mode_values(self, points) -> np.ndarray:
        """Orthonormal eigenfunction values, shape (mode_count, n_points).
        Torus ordering: (cos, sin) per canonical dual point; sphere: levels
        ascending, m-blocks as in the level basis."""
        kind, data = self._modes()
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if kind == "torus":
            covol = self.manifold.lattice.covolume
            phases = data @ pts.T
            amp = np.sqrt(2.0 / covol)
            vals = np.empty((2 * data.shape[0], pts.shape[0]))
            vals[0::2] = amp * np.cos(phases)
            vals[1::2] = amp * np.sin(phases)
            return vals
        blocks = [_sphere_level_basis_values(l, self.manifold.radius, pts) for l in data]
        return np.vstack(blocks)

    def coefficients(self, sample_indices=None) -> np.ndarray:
        """Gaussian coefficients, shape (num samples, mode_count); the full
        matrix is cached after the first build."""
        if sample_indices is None:
            if self._coef_cache is None:
                self._coef_cache = gaussian_matrix(
                    self.seed, np.arange(self.num_samples), self.mode_count)
            return self._coef_cache
        idx = np.asarray(sample_indices, dtype=np.int64)
        if np.any(idx < 0) or np.any(idx >= self.num_samples):
            raise DomainError("sample index out of range")
        return gaussian_matrix(self.seed, idx, self.mode_count)


def sample_wave(ens: RandomWaveEnsemble, sample_index: int, x) -> float:
    """One wave sample at one point: lam^{(1-n)/2} sum a_j phi_j(x),
    bit-reproducible given (seed, sample_index)."""
    coeffs = ens.coefficients([sample_index])[0]
    phi = ens.mode_values([np.asarray(x, dtype=float)])[:, 0]
    return float(ens.normalization * (coeffs @ phi))


def sample_wave_grid(ens: RandomWaveEnsemble, sample_indices, points) -> np.ndarray:
    """Wave samples on a point grid, shape (n_samples, n_points)."""
    coeffs = ens.coefficients(sample_indices)
    phi = ens.mode_values(points)
    return ens.normalization * (coeffs @ phi)


def exact_covariance(ens: RandomWaveEnsemble, x, y) -> float:
    """lam^{1-n} * cluster kernel over the window (the covariance of the
    Gaussian field by construction)."""
    n = ens.manifold.dim
    return ens.lam ** (1 - n) * cluster_kernel(ens.manifold, ens.lam, ens.width, x, y)


def empirical_covariance(ens: RandomWaveEnsemble, x, y):
    """Monte Carlo mean of psi(x) psi(y) with its standard error."""
    if ens.num_samples < 2:
        raise PreconditionError("need num_samples >= 2 for a standard error")
    waves = sample_wave_grid(ens, np.arange(ens.num_samples),
                             np.vstack([np.asarray(x, float), np.asarray(y, float)]))
    prod = waves[:, 0] * waves[:, 1]
    mean = float(np.mean(prod))
    std_err = float(np.std(prod, ddof=1) / np.sqrt(prod.size))
    return mean, std_err


@dataclass(frozen=True, eq=False)
class CovarianceReport:
    point_pairs: list
    empirical: np.ndarray
    exact: np.ndarray
    std_errors: np.ndarray
    universal_limit: np.ndarray | None = None


def covariance_report(ens: RandomWaveEnsemble, point_pairs) -> CovarianceReport:
    emp, se, ex = [], [], []
    for x, y in point_pairs:
        m, s = empirical_covariance(ens, x, y)
        emp.append(m)
        se.append(s)
        ex.append(exact_covariance(ens, x, y))
    return CovarianceReport(point_pairs=list(point_pairs), empirical=np.array(emp),
                            exact=np.array(ex), std_errors=np.array(se))


def default_rescaling_radius(lam: float) -> float:
    """Largest |u| admitted in rescaled coordinates: sqrt(lam / log lam)."""
    return float(np.sqrt(lam / np.log(lam)))


def rescaled_covariance_error(ens: RandomWaveEnsemble, x0, u, v,
                              r_max: float | None = None):
    """Exact rescaled covariance at exp_{x0}(u/lam), exp_{x0}(v/lam) against
    the universal Bessel limit; returns (exact_rescaled, universal, abs_error).

    |u|, |v| must stay within the admissible rescaling radius (default
    sqrt(lam/log lam)), mirroring the covariance-convergence constraint.
    """
    if not isinstance(ens.manifold, FlatTorus):
        raise DomainError("rescaled coordinates are implemented on flat tori")
    n = ens.manifold.dim
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    r_lam = default_rescaling_radius(ens.lam) if r_max is None else float(r_max)
    for name, vec in (("u", u), ("v", v)):
        if np.linalg.norm(vec) > r_lam:
            raise PreconditionError(
                "|%s| = %.6g exceeds the rescaling radius %.6g (the covariance "
                "scaling limit holds for |u|,|v| = O(sqrt(lam/log lam)))"
                % (name, float(np.linalg.norm(vec)), r_lam))
    x0 = np.asarray(x0, dtype=float)
    x = x0 + u / ens.lam
    y = x0 + v / ens.lam
    exact_rescaled = exact_covariance(ens, x, y)
    universal = float(universal_covariance(n, float(np.linalg.norm(u - v))))
    return exact_rescaled, universal, abs(exact_rescaled - universal)
