"""Absence criteria: every check's certifying branch and its refusals."""

import pytest

from specrange.criteria import (CriteriaParams, Target, check_alternating,
                                check_direction_decay, check_full_decay,
                                check_halfspace_support, check_level_set_empty,
                                check_pair_condition, check_real_window,
                                check_summability, evaluate_all)
from specrange.model import (Alternating1DPotential, ConstantPotential,
                             GeometricDecayPotential, PowerDecayPotential,
                             SumPotential, TablePotential)

ABSENT = "absence_guaranteed"
INCONCLUSIVE = "inconclusive"

PAIR_POT = PowerDecayPotential(amplitude=0.3 + 0.4j, exponent=3.0)


# ---------------------------------------------------------------------------
# targets


def test_target_kinds_and_matching():
    assert Target("all").matches(5.0 - 3.0j)
    assert Target("im", 1.0).matches(-2.5 + 1.0j)
    assert not Target("im", 1.0).matches(-2.5 + 1.01j)
    assert Target("nonreal").matches(1.0 + 0.1j)
    assert not Target("nonreal").matches(1.0)
    assert Target("re", -2.5).matches(-2.5 + 9.0j)
    with pytest.raises(ValueError):
        Target("spectral")
    with pytest.raises(ValueError):
        Target("im")
    with pytest.raises(ValueError):
        Target("all", 3.0)


# ---------------------------------------------------------------------------
# level set / halfspace


def test_level_set_empty_certifies_with_gap():
    res = check_level_set_empty(ConstantPotential(0.5j), b=2.0)
    assert res.verdict == ABSENT
    assert res.target == Target("im", 2.0)


def test_level_set_hit_is_inconclusive():
    res = check_level_set_empty(ConstantPotential(0.5j), b=0.5)
    assert res.verdict == INCONCLUSIVE
    assert "nonempty" in res.witness


def test_level_set_needs_usable_tail_certificate():
    # table support beyond the scan-site cap: certificate unusable
    pot = TablePotential({(1_500_001,): 1.0j})
    res = check_level_set_empty(pot, b=2.0)
    assert res.verdict == INCONCLUSIVE
    assert "tail certificate" in res.witness


def test_halfspace_confines_finite_level_set():
    pot = TablePotential({(-2,): 0.7j, (3,): 0.7j, (4,): 0.1 + 0.2j})
    sup = check_halfspace_support(pot, b=0.7, side="sup_finite")
    inf = check_halfspace_support(pot, b=0.7, side="inf_finite")
    assert sup.verdict == ABSENT and "= 3" in sup.witness
    assert inf.verdict == ABSENT and "= -2" in inf.witness


def test_halfspace_without_separating_tail_is_inconclusive():
    # Im d = 0 on odd sites forever: at b = 0 the level set is unbounded
    pot = PowerDecayPotential(amplitude=0.4j, exponent=2.0, parity="even")
    res = check_halfspace_support(pot, b=0.0)
    assert res.verdict == INCONCLUSIVE


def test_halfspace_validates_arguments():
    with pytest.raises(ValueError):
        check_halfspace_support(PAIR_POT, b=0.4, side="left")
    with pytest.raises(ValueError):
        check_halfspace_support(PAIR_POT, b=0.4, axis=1)


# ---------------------------------------------------------------------------
# decay criteria


def test_direction_and_full_decay_certify_for_decaying_im():
    for check in (check_direction_decay, check_full_decay):
        res = check(PAIR_POT)
        assert res.verdict == ABSENT
        assert res.target == Target("nonreal")


def test_decay_refused_for_constant_imaginary_part():
    res = check_full_decay(ConstantPotential(0.5j))
    assert res.verdict == INCONCLUSIVE
    res = check_direction_decay(ConstantPotential(0.5j), direction="-")
    assert res.verdict == INCONCLUSIVE


# ---------------------------------------------------------------------------
# pair condition


def test_pair_condition_finds_adjacent_witness():
    res = check_pair_condition(PAIR_POT, b=0.0)
    assert res.verdict == ABSENT
    assert "witness m" in res.witness
    assert "witness_site" in res.detail


def test_pair_condition_fails_when_every_pair_is_hit():
    alt = Alternating1DPotential(b_even=0.0, b_odd=1.0)
    for b in (0.0, 1.0):
        res = check_pair_condition(alt, b=b)
        assert res.verdict == INCONCLUSIVE


def test_pair_condition_is_1d_only():
    res = check_pair_condition(PAIR_POT, b=0.0, nu=2)
    assert res.verdict == INCONCLUSIVE
    assert "one dimension" in res.witness


# ---------------------------------------------------------------------------
# alternating / real window / summability


def test_alternating_certifies_distinct_two_value_pattern():
    res = check_alternating(Alternating1DPotential(b_even=0.0, b_odd=1.0))
    assert res.verdict == ABSENT
    assert res.target == Target("all")


def test_alternating_refuses_constant_pattern_and_other_kinds():
    res = check_alternating(Alternating1DPotential(b_even=0.5, b_odd=0.5))
    assert res.verdict == INCONCLUSIVE
    res = check_alternating(PAIR_POT)
    assert res.verdict == INCONCLUSIVE


def test_real_window_excludes_levels_outside_the_band():
    res = check_real_window(PAIR_POT, a=-3.0)
    assert res.verdict == ABSENT
    assert res.target == Target("re", -3.0)


def test_real_window_refusals():
    assert check_real_window(PAIR_POT, a=1.5).verdict == INCONCLUSIVE
    assert check_real_window(ConstantPotential(0.5), a=-3.0).verdict == INCONCLUSIVE
    # real finite table: no way to miss every level infinitely often
    assert check_real_window(TablePotential({(0,): 1.0}),
                             a=-3.0).verdict == INCONCLUSIVE


def test_summability_needs_parity_gap_and_first_moment():
    good = PowerDecayPotential(amplitude=0.8j, exponent=2.5, parity="even")
    assert check_summability(good).verdict == ABSENT
    no_parity = PowerDecayPotential(amplitude=0.8j, exponent=2.5)
    assert check_summability(no_parity).verdict == INCONCLUSIVE
    heavy_re = PowerDecayPotential(amplitude=0.3 + 0.8j, exponent=1.5,
                                   parity="even")
    res = check_summability(heavy_re)
    assert res.verdict == INCONCLUSIVE
    geometric = GeometricDecayPotential(amplitude=0.2 + 0.9j, ratio=0.5,
                                        parity="odd")
    assert check_summability(geometric).verdict == ABSENT


# ---------------------------------------------------------------------------
# aggregation


def test_evaluate_all_keeps_fixed_entry_order():
    params = CriteriaParams(b_values=(0.4,), a_values=(-2.5,))
    rep = evaluate_all(PAIR_POT, nu=1, params=params)
    ids = [e.criterion for e in rep.entries]
    assert ids == ["level_set_empty",
                   "halfspace_support", "halfspace_support",
                   "direction_decay", "direction_decay",
                   "full_decay",
                   "pair_condition", "pair_condition",
                   "alternating",
                   "real_window",
                   "summability"]


def test_evaluate_all_combines_nonreal_and_level_zero():
    rep = evaluate_all(PAIR_POT, nu=1, params=CriteriaParams())
    assert rep.nonreal_excluded
    assert 0.0 in rep.im_excluded
    assert rep.no_boundary_eigenvalues
    kinds = {(t.kind, t.value) for t in rep.guaranteed_targets()}
    assert ("all", None) in kinds and ("nonreal", None) in kinds


def test_evaluate_all_does_not_overclaim_for_the_counterexample():
    ce = SumPotential((TablePotential({(-1,): -2.0, (0,): -1.0j, (1,): -2.0}),
                       ConstantPotential(1.0j)))
    rep = evaluate_all(ce, nu=1, params=CriteriaParams(b_values=(1.0,)))
    assert not rep.no_boundary_eigenvalues
    assert not rep.nonreal_excluded
    assert 1.0 not in rep.im_excluded


def test_evaluate_all_notes_selfadjoint_degeneracy():
    rep = evaluate_all(PowerDecayPotential(amplitude=0.5, exponent=1.5),
                       nu=1, params=CriteriaParams(b_values=(0.5,)))
    assert any("selfadjoint" in n for n in rep.notes)
    assert rep.nonreal_excluded
    assert not rep.no_boundary_eigenvalues


def test_report_json_shape():
    rep = evaluate_all(PAIR_POT, nu=1,
                       params=CriteriaParams(b_values=(0.4,), a_values=(-3.0,)))
    doc = rep.to_json_dict()
    assert set(doc) == {"nu", "parameters", "entries", "combined", "notes"}
    assert set(doc["combined"]) == {"no_boundary_eigenvalues",
                                    "nonreal_excluded", "im_excluded",
                                    "re_excluded"}
    for entry in doc["entries"]:
        assert set(entry) == {"criterion", "target", "verdict", "witness",
                              "detail"}
