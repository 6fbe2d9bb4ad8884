"""Lattice boxes, potential kinds, and operator assembly."""

import numpy as np
import pytest

from specrange.exceptions import DimensionLimitError
from specrange.model import (Alternating1DPotential, ConstantPotential,
                             GeometricDecayPotential, LatticeBox,
                             OperatorMatrix, PowerDecayPotential,
                             SeededRandomPotential, SumPotential,
                             TablePotential, assemble, imag_part,
                             potential_bounds, real_part)


# ---------------------------------------------------------------------------
# boxes


def test_box_enumeration_is_lexicographic():
    box = LatticeBox(2, ((-1, 1), (0, 1)))
    assert box.site_count == 6
    sites = [tuple(s) for s in box.sites]
    assert sites == [(-1, 0), (-1, 1), (0, 0), (0, 1), (1, 0), (1, 1)]


def test_box_index_site_bijection():
    box = LatticeBox(2, ((-2, 2), (-1, 3)))
    for i in range(box.site_count):
        site = box.index_site(i)
        assert box.site_index(site) == i


def test_box_rejects_empty_axis_and_rank_mismatch():
    with pytest.raises(ValueError):
        LatticeBox(1, ((3, 2),))
    with pytest.raises(ValueError):
        LatticeBox(2, ((0, 1),))


# ---------------------------------------------------------------------------
# assembly


def test_assemble_free_1d_is_tridiagonal():
    box = LatticeBox(1, ((0, 4),))
    op = assemble(box, TablePotential({}))
    expected = np.diag(np.ones(4), 1) + np.diag(np.ones(4), -1)
    assert np.array_equal(op.matrix, expected.astype(np.complex128))
    assert op.hermitian


def test_assemble_2d_adjacency():
    box = LatticeBox(2, ((0, 1), (0, 1)))
    op = assemble(box, TablePotential({}))
    m = op.matrix.real
    # sites (0,0),(0,1),(1,0),(1,1); neighbors differ in one coordinate by 1
    assert m[0, 1] == 1 and m[0, 2] == 1 and m[0, 3] == 0
    assert m[1, 3] == 1 and m[2, 3] == 1 and m[1, 2] == 0
    assert np.array_equal(m, m.T)


def test_assemble_places_potential_on_diagonal():
    box = LatticeBox(1, ((-2, 2),))
    pot = TablePotential({(-1,): 2.0 - 1.0j, (2,): 0.5j})
    op = assemble(box, pot)
    diag = np.diag(op.matrix)
    assert diag[box.site_index((-1,))] == 2.0 - 1.0j
    assert diag[box.site_index((2,))] == 0.5j
    assert diag[box.site_index((0,))] == 0.0
    assert op.provenance.potential is pot


def test_assemble_enforces_dimension_cap():
    box = LatticeBox(1, ((0, 99),))
    with pytest.raises(DimensionLimitError):
        assemble(box, TablePotential({}), max_dim=50)


def test_real_imag_part_reconstruct_operator():
    box = LatticeBox(1, ((0, 5),))
    op = assemble(box, ConstantPotential(0.3 - 0.8j))
    h = real_part(op).matrix
    s = imag_part(op).matrix
    assert np.allclose(h + 1j * s, op.matrix)
    assert np.allclose(h, h.conj().T)
    assert np.allclose(s, s.conj().T)


def test_operator_matrix_rejects_nonsquare():
    with pytest.raises(ValueError):
        OperatorMatrix(np.zeros((2, 3)))


# ---------------------------------------------------------------------------
# potential kinds


def sites_1d(*ns):
    return np.array([[n] for n in ns], dtype=np.int64)


def test_table_accepts_mapping_and_pairs():
    t1 = TablePotential({(0,): 1.0j, (3,): -2.0})
    t2 = TablePotential((((0,), 1.0j), ((3,), -2.0)))
    ns = sites_1d(-1, 0, 3)
    assert np.array_equal(t1.values(ns), t2.values(ns))
    assert list(t1.values(ns)) == [0.0, 1.0j, -2.0]
    assert t1.tail_info().radius == 3
    assert t1.tail_info().base == 0.0


def test_constant_tail_base_is_the_constant():
    c = ConstantPotential(0.5 + 0.25j)
    tail = c.tail_info()
    assert tail.base == 0.5 + 0.25j
    assert tail.im_sup_beyond(100) == 0.0
    assert np.all(c.values(sites_1d(-7, 0, 9)) == 0.5 + 0.25j)


def test_power_decay_formula_and_parity():
    p = PowerDecayPotential(amplitude=2.0 + 1.0j, exponent=3.0)
    vals = p.values(sites_1d(0, 1, -2))
    assert vals[0] == 2.0 + 1.0j
    assert vals[1] == (2.0 + 1.0j) / 2.0
    assert vals[2] == (2.0 + 1.0j) / 9.0
    masked = PowerDecayPotential(amplitude=1.0j, exponent=2.0, parity="even")
    mv = masked.values(sites_1d(0, 1, 2, 3))
    assert mv[0] != 0 and mv[2] != 0
    assert mv[1] == 0 and mv[3] == 0


def test_power_decay_rejects_nonpositive_exponent():
    with pytest.raises(ValueError):
        PowerDecayPotential(amplitude=1.0, exponent=0.0)


def test_geometric_decay_formula_and_ratio_domain():
    g = GeometricDecayPotential(amplitude=1.0 - 1.0j, ratio=-0.5)
    vals = g.values(sites_1d(0, 1, 2))
    assert vals[0] == 1.0 - 1.0j
    assert vals[1] == (1.0 - 1.0j) * -0.5
    assert vals[2] == (1.0 - 1.0j) * 0.25
    with pytest.raises(ValueError):
        GeometricDecayPotential(amplitude=1.0, ratio=1.0)


def test_tail_envelope_dominates_actual_values():
    for pot in (PowerDecayPotential(amplitude=0.7 - 0.2j, exponent=2.5),
                GeometricDecayPotential(amplitude=0.4 + 0.9j, ratio=0.6),
                TablePotential({(2,): 1.0j}),
                ConstantPotential(0.1 + 0.1j)):
        tail = pot.tail_info()
        ns = sites_1d(*range(tail.radius + 1, tail.radius + 40))
        dev = pot.values(ns) - tail.base
        for k, s in enumerate(ns[:, 0]):
            assert abs(dev[k].imag) <= tail.im_sup_beyond(int(s)) + 1e-15
            assert abs(dev[k].real) <= tail.re_sup_beyond(int(s)) + 1e-15


def test_alternating_pattern_and_declaration():
    alt = Alternating1DPotential(b_even=0.25, b_odd=-1.0)
    vals = alt.values(sites_1d(-2, -1, 0, 1))
    assert np.array_equal(vals, np.array([0.25j, -1.0j, 0.25j, -1.0j]))
    assert alt.im_alternating() == (0.25, -1.0)
    with pytest.raises(ValueError):
        alt.values(np.zeros((2, 2), dtype=np.int64))


def test_seeded_random_is_deterministic_and_in_range():
    box = LatticeBox(1, ((-5, 5),))
    a = SeededRandomPotential(99, box, (-0.25, 0.5), (0.1, 0.9))
    b = SeededRandomPotential(99, box, (-0.25, 0.5), (0.1, 0.9))
    ns = sites_1d(*range(-8, 9))
    va, vb = a.values(ns), b.values(ns)
    assert np.array_equal(va, vb)
    inside = (np.abs(ns[:, 0]) <= 5)
    assert np.all(va[~inside] == 0.0)
    assert np.all(va[inside].real >= -0.25) and np.all(va[inside].real <= 0.5)
    assert np.all(va[inside].imag >= 0.1) and np.all(va[inside].imag <= 0.9)
    other = SeededRandomPotential(100, box, (-0.25, 0.5), (0.1, 0.9))
    assert not np.array_equal(va, other.values(ns))


def test_seeded_random_is_a_function_of_the_site():
    # per-site draws: value at a site does not depend on the query batch
    box = LatticeBox(1, ((-5, 5),))
    pot = SeededRandomPotential(7, box, (-1.0, 1.0), (0.0, 1.0))
    full = pot.values(sites_1d(*range(-5, 6)))
    single = pot.values(sites_1d(3))
    assert single[0] == full[8]


def test_sum_potential_is_additive_and_composes_tails():
    s = SumPotential((ConstantPotential(1.0j),
                      TablePotential({(0,): -1.0j, (4,): 0.5})))
    ns = sites_1d(-1, 0, 4, 11)
    assert list(s.values(ns)) == [1.0j, 0.0, 0.5 + 1.0j, 1.0j]
    tail = s.tail_info()
    assert tail.base == 1.0j
    assert tail.radius == 4
    assert s.sup_abs() <= 1.0 + np.hypot(0.5, 1.0) + 1e-15


def test_potential_bounds_cover_box_and_global_range():
    box = LatticeBox(1, ((-3, 3),))
    pot = PowerDecayPotential(amplitude=-0.8 + 0.4j, exponent=2.0)
    r_lo, r_hi, i_lo, i_hi = potential_bounds(pot, box)
    vals = pot.values(box.sites)
    assert r_lo <= vals.real.min() and r_hi >= vals.real.max()
    assert i_lo <= vals.imag.min() and i_hi >= vals.imag.max()
    # the global widening keeps 0 inside for decaying kinds
    assert r_lo <= 0.0 <= r_hi and i_lo <= 0.0 <= i_hi
