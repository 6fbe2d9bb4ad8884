"""Support-function sweeps against geometric oracles."""

import numpy as np
import pytest

from specrange.exceptions import HullDomainError
from specrange.model import LatticeBox, OperatorMatrix, SeededRandomPotential, assemble
from specrange.numrange import compute_hull


def hull_of(matrix, n_angles=360):
    return compute_hull(OperatorMatrix(np.asarray(matrix, dtype=complex)),
                        n_angles=n_angles)


def test_jordan_block_hull_is_half_disk_boundary():
    hull = hull_of([[0.0, 1.0], [0.0, 0.0]], n_angles=720)
    # numerical range of the 2x2 nilpotent Jordan block: disk of radius 1/2
    assert np.max(np.abs(hull.supports - 0.5)) < 1e-12
    verts = np.asarray(hull.vertices())
    assert np.max(np.abs(np.abs(verts) - 0.5)) < 1e-4


def test_diagonal_hull_support_equals_pointwise_max():
    d = np.array([1.0 + 0.2j, -0.4 + 1.1j, 0.3 - 0.9j, -1.2 - 0.1j])
    hull = hull_of(np.diag(d), n_angles=360)
    for theta, s in zip(hull.thetas, hull.supports):
        oracle = np.max((np.exp(1j * theta) * d).real)
        assert abs(s - oracle) < 1e-12


def test_hermitian_hull_degenerates_to_real_segment():
    d = np.array([-1.5, -0.2, 0.4, 2.0])
    hull = hull_of(np.diag(d), n_angles=360)
    verts = np.asarray(hull.vertices())
    assert np.max(np.abs(verts.imag)) < 1e-9
    assert abs(verts.real.max() - 2.0) < 1e-9
    assert abs(verts.real.min() + 1.5) < 1e-9


def test_translation_covariance_of_supports():
    rng = np.random.default_rng(5)
    a = rng.normal(size=(7, 7)) + 1j * rng.normal(size=(7, 7))
    c = 0.7 - 0.3j
    h0 = hull_of(a, n_angles=90)
    h1 = hull_of(a + c * np.eye(7), n_angles=90)
    shift = (np.exp(1j * h0.thetas) * c).real
    assert np.max(np.abs(h1.supports - (h0.supports + shift))) < 1e-10


def test_rotation_covariance_on_the_sampled_grid():
    rng = np.random.default_rng(6)
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    n = 90
    k = 13
    phi = 2 * np.pi * k / n
    h0 = hull_of(a, n_angles=n)
    h1 = hull_of(np.exp(1j * phi) * a, n_angles=n)
    # s_{e^{i phi} A}(theta_m) = s_A(theta_{m+k})
    assert np.max(np.abs(h1.supports - np.roll(h0.supports, -k))) < 1e-10


def test_eigenvalues_lie_inside_with_margin():
    box = LatticeBox(1, ((-12, 12),))
    pot = SeededRandomPotential(17, box, (-0.5, 0.5), (0.0, 0.8))
    op = assemble(box, pot)
    hull = compute_hull(op, n_angles=360)
    for lam in np.linalg.eigvals(op.matrix):
        assert hull.contains(lam, tol=1e-10)
        assert hull.boundary_distance(lam) >= 0.0


def test_witness_points_attain_their_supports():
    box = LatticeBox(1, ((-8, 8),))
    pot = SeededRandomPotential(23, box, (-0.4, 0.4), (0.1, 0.6))
    op = assemble(box, pot)
    hull = compute_hull(op, n_angles=60)
    for theta, s, w in zip(hull.thetas, hull.supports, hull.witnesses):
        # the witness is the Rayleigh point of the top vector at this angle
        assert abs((np.exp(1j * theta) * w).real - s) < 1e-9
        assert hull.contains(complex(w), tol=1e-9)


def test_contains_rejects_far_point_and_distance_raises():
    hull = hull_of([[0.0, 1.0], [0.0, 0.0]], n_angles=360)
    assert not hull.contains(2.0 + 2.0j, tol=1e-8)
    with pytest.raises(HullDomainError):
        hull.boundary_distance(2.0 + 2.0j)
    assert hull.boundary_distance(0.0) == pytest.approx(0.5, abs=1e-6)


def test_refining_angles_tightens_the_outer_polygon():
    rng = np.random.default_rng(9)
    a = rng.normal(size=(10, 10)) + 1j * rng.normal(size=(10, 10))
    coarse = hull_of(a, n_angles=90)
    fine = hull_of(a, n_angles=720)
    # every fine vertex satisfies the coarse half-planes: outer regions nest
    for v in np.asarray(fine.vertices()):
        assert coarse.contains(complex(v), tol=1e-9)
    # and the fine region is no larger in any sampled direction
    assert np.max(fine.supports[::8] - coarse.supports) < 1e-12


def test_angle_grid_shape_and_first_angle():
    hull = hull_of(np.diag([1.0, -1.0]), n_angles=16)
    assert len(hull.thetas) == 16 == len(hull.supports)
    assert hull.thetas[0] == 0.0
    assert hull.n_angles == 16
