from fractions import Fraction as F

import pytest

from tncost.costmodel import ttns_total_report
from tncost.geometry import AxisSpec, LatticeSpec
from tncost.optimizer import (
    SearchBudgetExceeded,
    SearchConfig,
    analytic_floor,
    lower_bound_gap,
    optimize_splits,
)
from tncost.presets import TABLE_PRESETS, get_preset

SQUARE = LatticeSpec.box(2)


def test_square_grid_sequence():
    seq = [optimize_splits(SQUARE, SearchConfig(g, 4))[1].coeff for g in (2, 4, 8, 16)]
    # found by this search: the optimum sits 1/(2g) above the floor
    assert seq == [F(17, 4), F(33, 8), F(65, 16), F(129, 32)]


@pytest.mark.parametrize("g", [2, 3, 4, 5])
def test_grid_refinement(g):
    coarse = optimize_splits(SQUARE, SearchConfig(g, 3))[1]
    fine = optimize_splits(SQUARE, SearchConfig(2 * g, 3))[1]
    assert fine.coeff <= coarse.coeff


def test_tree_matches_cost_model():
    for lattice in (SQUARE, LatticeSpec.box(2, pbc=[1]), LatticeSpec.box(3)):
        tree, e = optimize_splits(lattice, SearchConfig(4, 4))
        assert ttns_total_report(tree).total == e
        assert tree.depth() == 4


@pytest.mark.parametrize("g", [2, 4, 8])
def test_torus_is_eight(g):
    assert optimize_splits(LatticeSpec.box(2, pbc=[0, 1]), SearchConfig(g, 4))[1].coeff == 8


@pytest.mark.parametrize("name", TABLE_PRESETS)
def test_balanced_matches_canonical(name):
    p = get_preset(name)
    canonical = ttns_total_report(p.build_tree()).total
    _, e = optimize_splits(p.lattice, SearchConfig(2, p.prefix_layers + 4, balanced_only=True))
    assert e == canonical


def test_floor_respected():
    assert analytic_floor(SQUARE) == 4
    assert analytic_floor(LatticeSpec.box(3)) == 4
    assert analytic_floor(LatticeSpec.box(2, pbc=[1])) is None
    for g in (2, 3, 4):
        assert optimize_splits(LatticeSpec.box(3), SearchConfig(g, 3))[1].coeff >= 4


def test_one_dimensional_chain():
    _, e = optimize_splits(LatticeSpec.box(1), SearchConfig(4, 2))
    # one shallow layer: (1, 1, 2); deeper layers reach (2, 2, 2)
    assert (e.coeff, e.order) == (6, 0)
    assert optimize_splits(LatticeSpec.box(1), SearchConfig(4, 4))[1].coeff == 8


def test_root_only_tree_costs_nothing():
    tree, e = optimize_splits(SQUARE, SearchConfig(2, 1))
    assert e.coeff == 0 and len(tree) == 3


def test_tie_break_prefers_small_axis_and_fraction():
    tree, _ = optimize_splits(SQUARE, SearchConfig(2, 3))
    assert tree.root.split_axis == 0


def test_budget_error_carries_best():
    with pytest.raises(SearchBudgetExceeded) as info:
        optimize_splits(SQUARE, SearchConfig(16, 4, budget=1500))
    assert info.value.exponent is not None
    assert info.value.exponent.coeff >= F(129, 32)
    assert ttns_total_report(info.value.tree).total == info.value.exponent
    with pytest.raises(SearchBudgetExceeded) as info:
        optimize_splits(SQUARE, SearchConfig(16, 4, budget=1))
    assert info.value.tree is None


def test_config_validation():
    with pytest.raises(ValueError):
        SearchConfig(1)
    with pytest.raises(ValueError):
        SearchConfig(2, 0)
    with pytest.raises(ValueError):
        SearchConfig(3, balanced_only=True)
    with pytest.raises(ValueError):
        optimize_splits(LatticeSpec((AxisSpec.unbounded(), AxisSpec.unit())))


def test_lower_bound_gap():
    rep = lower_bound_gap(SQUARE, [2, 4, 8, 16])
    assert rep.monotone and rep.above_floor
    assert rep.exponents[0] == F(17, 4)
    assert rep.gaps[-1] == F(1, 32)
    torus = lower_bound_gap(LatticeSpec.box(2, pbc=[0, 1]), [2, 4])
    assert torus.exponents == [8, 8] and torus.floor is None
    with pytest.raises(ValueError):
        lower_bound_gap(SQUARE, [2])
