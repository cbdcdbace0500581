"""Model-manifold eigendata and exact kernel evaluation.

Flat tori: mode sums over dual-lattice points (with exact monomial
derivative factors).  Round 2-sphere: addition theorem through Legendre
polynomials, so kernels carry no quadrature error.

Eigenfunction conventions: torus modes e^{i<k,x>}/sqrt(covol) with k a dual
point and eigenvalue |k|^2; sphere level l has sqrt-eigenvalue
sqrt(l(l+1))/R and multiplicity 2l+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import lattice as lat
from .errors import DomainError, SpectrumError
from .lattice import Lattice
from .specfun import legendre_p

# lambda must stay this far from the spectrum (avoids half-counting ambiguity)
ON_SPECTRUM_TOL = 1e-9


@dataclass(frozen=True)
class FlatTorus:
    lattice: Lattice

    @property
    def dim(self) -> int:
        return self.lattice.dim

    @property
    def volume(self) -> float:
        return self.lattice.covolume


@dataclass(frozen=True)
class RoundSphere2:
    radius: float = 1.0

    def __post_init__(self):
        if self.radius <= 0.0:
            raise DomainError("sphere radius must be positive")

    @property
    def dim(self) -> int:
        return 2

    @property
    def volume(self) -> float:
        return 4.0 * np.pi * self.radius**2

    def level_sqrt_eigenvalue(self, l: int) -> float:
        return float(np.sqrt(l * (l + 1.0)) / self.radius)


ModelManifold = FlatTorus | RoundSphere2


@dataclass(frozen=True)
class DerivIndex:
    """Multi-indices alpha (on x) and beta (on y), total order <= 2.

    Nonzero orders are torus-only; the sphere path accepts only zero.
    """

    alpha: tuple = ()
    beta: tuple = ()

    def __post_init__(self):
        for mi in (self.alpha, self.beta):
            if any((not isinstance(a, (int, np.integer))) or a < 0 for a in mi):
                raise DomainError("multi-index entries must be nonnegative integers")
        if self.total_order > 2:
            raise DomainError("total derivative order is capped at 2")

    @property
    def total_order(self) -> int:
        return int(sum(self.alpha) + sum(self.beta))

    @property
    def is_zero(self) -> bool:
        return self.total_order == 0

    def padded(self, dim: int):
        a = tuple(self.alpha) + (0,) * (dim - len(self.alpha))
        b = tuple(self.beta) + (0,) * (dim - len(self.beta))
        if len(a) != dim or len(b) != dim:
            raise DomainError("multi-index longer than manifold dimension")
        return a, b


ZERO_DERIV = DerivIndex()


@dataclass(frozen=True, eq=False)
class EigenLevel:
    """One eigenvalue level: sqrt-eigenvalue, multiplicity, and mode data
    (dual points on the torus, the degree l on the sphere)."""

    sqrt_eigenvalue: float
    multiplicity: int
    modes: object


def _sphere_degrees_up_to(m: RoundSphere2, lambda_max: float):
    ls = []
    l = 0
    while m.level_sqrt_eigenvalue(l) <= lambda_max:
        ls.append(l)
        l += 1
    return ls


def eigenlevels(m: ModelManifold, lambda_max: float, cap: int = lat.DEFAULT_ENUM_CAP):
    """All eigenvalue levels with sqrt-eigenvalue <= lambda_max, ascending."""
    if lambda_max <= 0.0:
        raise DomainError("lambda_max must be positive")
    if isinstance(m, RoundSphere2):
        return [EigenLevel(m.level_sqrt_eigenvalue(l), 2 * l + 1, l)
                for l in _sphere_degrees_up_to(m, lambda_max)]
    points = lat.enumerate_dual(m.lattice, lambda_max, cap)
    levels = []
    group = [points[0]]
    for p in points[1:]:
        if p.norm - group[-1].norm <= ON_SPECTRUM_TOL * (1.0 + p.norm):
            group.append(p)
        else:
            levels.append(EigenLevel(group[0].norm, len(group), list(group)))
            group = [p]
    levels.append(EigenLevel(group[0].norm, len(group), list(group)))
    return levels


def sphere_angle(m: RoundSphere2, x, y) -> float:
    """Angle between two points given as 3-vectors of length `radius`."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != (3,) or y.shape != (3,):
        raise DomainError("sphere points are 3-vectors")
    for p in (x, y):
        if abs(np.linalg.norm(p) - m.radius) > 1e-9 * m.radius:
            raise DomainError("point does not lie on the sphere of radius %g" % m.radius)
    return float(np.arctan2(np.linalg.norm(np.cross(x, y)), float(x @ y)))


def _check_off_spectrum_torus(norms: np.ndarray, lam: float):
    if np.any(np.abs(norms - lam) < ON_SPECTRUM_TOL):
        raise SpectrumError(
            "lambda=%.12g is within %g of the torus spectrum; shift lambda "
            "(e.g. by a small window width) and retry" % (lam, ON_SPECTRUM_TOL)
        )


def _torus_mode_factor(vectors: np.ndarray, alpha, beta):
    """Exact derivative factor: d_x^alpha d_y^beta acting on
    cos(<k, y-x>) contributes (-1)^|alpha| * (i k)^{alpha+beta}."""
    gamma = tuple(a + b for a, b in zip(alpha, beta))
    total = sum(gamma)
    mono = np.ones(vectors.shape[0])
    for j, g in enumerate(gamma):
        if g:
            mono = mono * vectors[:, j] ** g
    return ((-1.0) ** sum(alpha)) * (1j**total) * mono


def _torus_windowed_sum(m: FlatTorus, norms_lo: float, lam_hi: float, x, y,
                        d: DerivIndex, cap: int) -> float:
    """Mode sum over dual points with norms_lo < |k| <= lam_hi (lo < 0 means
    the full ball |k| <= lam_hi)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha, beta = d.padded(m.dim)
    # enumerate a hair beyond lam_hi so the off-spectrum guard sees both sides
    _, vectors, norms = lat.dual_vectors(m.lattice, lam_hi + 2.0 * ON_SPECTRUM_TOL, cap)
    if norms_lo < 0.0:
        _check_off_spectrum_torus(norms, lam_hi)
    mask = (norms > norms_lo) & (norms <= lam_hi)
    vectors = vectors[mask]
    phases = vectors @ (y - x)
    factor = _torus_mode_factor(vectors, alpha, beta)
    return float(np.real(np.sum(factor * np.exp(1j * phases)))) / m.lattice.covolume


def _sphere_level_sum(m: RoundSphere2, degrees, x, y) -> float:
    if not degrees:
        return 0.0
    theta = sphere_angle(m, x, y)
    c = np.cos(theta)
    total = 0.0
    for l in degrees:
        total += (2 * l + 1) / (4.0 * np.pi * m.radius**2) * legendre_p(l, c)
    return float(total)


def spectral_function(m: ModelManifold, lam: float, x, y,
                      d: DerivIndex = ZERO_DERIV, cap: int = lat.DEFAULT_ENUM_CAP) -> float:
    """The spectral function E_lambda(x, y): full projector kernel onto
    eigenvalues <= lambda^2, as an exact mode sum.

    lambda must be at least ON_SPECTRUM_TOL away from the spectrum;
    derivatives are torus-only.
    """
    if lam <= 0.0:
        raise DomainError("lambda must be positive")
    if isinstance(m, RoundSphere2):
        if not d.is_zero:
            raise DomainError("derivatives are unsupported on the sphere")
        degrees = _sphere_degrees_up_to(m, lam)
        nxt = m.level_sqrt_eigenvalue(len(degrees))
        prev = m.level_sqrt_eigenvalue(len(degrees) - 1) if degrees else None
        if abs(nxt - lam) < ON_SPECTRUM_TOL or (prev is not None and abs(prev - lam) < ON_SPECTRUM_TOL):
            raise SpectrumError(
                "lambda=%.12g is within %g of the sphere spectrum; shift lambda"
                % (lam, ON_SPECTRUM_TOL))
        return _sphere_level_sum(m, degrees, x, y)
    return _torus_windowed_sum(m, -1.0, lam, x, y, d, cap)


def cluster_kernel(m: ModelManifold, lam: float, width: float, x, y,
                   d: DerivIndex = ZERO_DERIV, cap: int = lat.DEFAULT_ENUM_CAP) -> float:
    """Windowed projector kernel over sqrt-eigenvalues in (lambda, lambda+width],
    computed as a single windowed mode sum.

    Window membership uses exact half-open comparisons, so representable
    boundary values (e.g. integer lambda on the square 2 pi torus) are
    unambiguous even when they sit on the spectrum.
    """
    if lam <= 0.0 or width <= 0.0:
        raise DomainError("need lambda > 0 and width > 0")
    if isinstance(m, RoundSphere2):
        if not d.is_zero:
            raise DomainError("derivatives are unsupported on the sphere")
        degrees = [l for l in _sphere_degrees_up_to(m, lam + width)
                   if m.level_sqrt_eigenvalue(l) > lam]
        return _sphere_level_sum(m, degrees, x, y)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    alpha, beta = d.padded(m.dim)
    _, vectors, norms = lat.dual_vectors(m.lattice, lam + width, cap)
    mask = norms > lam
    vectors = vectors[mask]
    phases = vectors @ (y - x)
    factor = _torus_mode_factor(vectors, alpha, beta)
    return float(np.real(np.sum(factor * np.exp(1j * phases)))) / m.lattice.covolume


def eigenvalue_count(m: ModelManifold, lam: float, cap: int = lat.DEFAULT_ENUM_CAP) -> int:
    """Counting function N(lambda) = #{sqrt-eigenvalues <= lambda} with
    multiplicity."""
    if isinstance(m, RoundSphere2):
        return sum(2 * l + 1 for l in _sphere_degrees_up_to(m, lam))
    return lat.shell_count(m.lattice, 0.0, lam, cap) + 1
