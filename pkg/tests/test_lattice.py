import itertools

import numpy as np
import pytest
from numpy.testing import assert_allclose

from weyl_lab.errors import CutLocusError, DomainError, ResourceLimitError
from weyl_lab.lattice import (
    Lattice,
    deck_images,
    dual_vectors,
    enumerate_dual,
    injectivity_radius,
    shell_count,
    torus_log,
)

SQUARE2PI = Lattice.square(2.0 * np.pi)  # dual lattice = integer grid


def brute_count(radius, reach=None):
    # independent double-loop oracle over the integer dual grid
    reach = reach if reach is not None else int(radius) + 1
    hits = 0
    for a, b in itertools.product(range(-reach, reach + 1), repeat=2):
        if a * a + b * b <= radius * radius:
            hits += 1
    return hits


def test_enumerate_dual_unit_radius():
    pts = enumerate_dual(SQUARE2PI, 1.0)
    assert len(pts) == 5
    assert pts[0].coeffs == (0, 0) and pts[0].norm == 0.0
    assert {p.coeffs for p in pts} == {(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)}


def test_enumerate_dual_radius_ten_against_brute_force():
    pts = enumerate_dual(SQUARE2PI, 10.0)
    assert len(pts) == brute_count(10.0) == 317
    # complete and duplicate-free
    assert len({p.coeffs for p in pts}) == 317
    # ordered by (norm, lexicographic coeffs)
    norms = [p.norm for p in pts]
    assert norms == sorted(norms)


def test_enumerate_dual_small_radius():
    assert len(enumerate_dual(SQUARE2PI, 0.5)) == 1


def test_enumeration_cap():
    with pytest.raises(ResourceLimitError):
        enumerate_dual(SQUARE2PI, 50.0, cap=100)


def test_shell_count_values():
    assert shell_count(SQUARE2PI, 0.5, 1.0) == 4
    assert shell_count(SQUARE2PI, 0.0, 10.0) == 316
    assert shell_count(SQUARE2PI, 1.0, 1.2) == 0
    with pytest.raises(DomainError):
        shell_count(SQUARE2PI, 2.0, 1.0)


def test_gauss_count_consistency():
    for lam in [3.7, 9.0, 14.2]:
        assert shell_count(SQUARE2PI, 0.0, lam) + 1 == len(enumerate_dual(SQUARE2PI, lam))


def test_weyl_count_within_five_percent():
    lam = 200.0
    n = len(enumerate_dual(SQUARE2PI, lam))
    continuum = np.pi * lam**2 * SQUARE2PI.covolume / (2.0 * np.pi) ** 2
    assert abs(n / continuum - 1.0) < 0.05


def test_injectivity_radius():
    assert_allclose(injectivity_radius(SQUARE2PI), np.pi, rtol=1e-12)
    rect = Lattice.from_basis(np.diag([2.0 * np.pi, 4.0 * np.pi]))
    assert_allclose(injectivity_radius(rect), np.pi, rtol=1e-12)
    hexa = Lattice.hexagonal(1.0)
    assert_allclose(injectivity_radius(hexa), 0.5, rtol=1e-12)


def test_torus_log_basics():
    x = np.array([0.3, 1.0])
    assert_allclose(torus_log(SQUARE2PI, x, x), np.zeros(2), atol=1e-15)
    w = torus_log(SQUARE2PI, np.zeros(2), np.array([6.0, 0.0]))
    assert_allclose(w, np.array([6.0 - 2.0 * np.pi, 0.0]), atol=1e-12)


def test_torus_log_antisymmetry():
    rng = np.random.default_rng(7)
    for _ in range(20):
        x = SQUARE2PI.basis @ rng.random(2)
        y = SQUARE2PI.basis @ rng.random(2)
        try:
            w = torus_log(SQUARE2PI, x, y)
        except CutLocusError:
            continue
        assert_allclose(w, -torus_log(SQUARE2PI, y, x), atol=1e-12)


def test_torus_log_cut_locus():
    with pytest.raises(CutLocusError) as err:
        torus_log(SQUARE2PI, np.zeros(2), np.array([np.pi, 0.0]))
    assert len(err.value.ties) >= 2


def test_deck_images_zero_offset():
    imgs = deck_images(SQUARE2PI, np.zeros(2), np.zeros(2), 0.9 * 2.0 * np.pi)
    assert imgs.shape == (1, 2)
    assert_allclose(imgs[0], np.zeros(2), atol=1e-15)
    imgs = deck_images(SQUARE2PI, np.zeros(2), np.zeros(2), 2.0 * np.pi)
    assert imgs.shape == (5, 2)


def test_deck_images_against_brute_force():
    x, y, radius = np.zeros(2), np.array([1.0, 0.0]), 7.0
    expected = []
    for a, b in itertools.product(range(-3, 4), repeat=2):
        w = y - x + SQUARE2PI.basis @ np.array([a, b], dtype=float)
        if np.linalg.norm(w) <= radius:
            expected.append(tuple(np.round(w, 9)))
    imgs = deck_images(SQUARE2PI, x, y, radius)
    assert {tuple(np.round(w, 9)) for w in imgs} == set(expected)
    norms = np.linalg.norm(imgs, axis=1)
    assert np.all(np.diff(norms) >= -1e-12)


def test_deck_images_norms_swap_symmetry():
    x, y = np.array([0.2, 0.4]), np.array([1.5, 2.0])
    a = np.sort(np.linalg.norm(deck_images(SQUARE2PI, x, y, 9.0), axis=1))
    b = np.sort(np.linalg.norm(deck_images(SQUARE2PI, y, x, 9.0), axis=1))
    assert_allclose(a, b, atol=1e-12)


def test_lattice_validation():
    with pytest.raises(DomainError):
        Lattice.from_basis(np.zeros((2, 2)))
    with pytest.raises(DomainError):
        Lattice.from_basis(np.eye(4))
    lat = Lattice.square(1.0)
    assert_allclose(lat.dual_basis, 2.0 * np.pi * np.eye(2), rtol=1e-15)
    assert_allclose(lat.covolume, 1.0)


def test_dual_vectors_sorted_deterministically():
    c1, v1, n1 = dual_vectors(SQUARE2PI, 12.3)
    c2, v2, n2 = dual_vectors(SQUARE2PI, 12.3)
    assert np.array_equal(c1, c2) and np.array_equal(v1, v2)
    assert np.all(np.diff(n1) >= -1e-15)
