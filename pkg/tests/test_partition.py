from fractions import Fraction as F

import numpy as np
import pytest

from tncost.geometry import LatticeSpec, Region, boundary_area_symbolic, region_mask
from tncost.partition import (
    AxisPolicy,
    EnumerationBudgetExceeded,
    SplitStrategy,
    build_ttns_tree,
    descent_sequence,
    mps_max_cut,
    mps_max_cut_coefficient,
    prefix_cut_sizes,
    snake_ordering,
)
from tncost.presets import TABLE_PRESETS, get_preset


def descent_areas(tree):
    return [[a.coeff for a in d.areas] for d in descent_sequence(tree)]


def test_cylinder_descent():
    tree = build_ttns_tree(LatticeSpec.box(2, pbc=[1]), SplitStrategy(AxisPolicy.ALTERNATE_2D, max_depth=7))
    assert descent_areas(tree)[:6] == [[1], [F(3, 2)], [F(3, 2), 1], [1], [F(3, 4)], [F(1, 2)]]


def test_cube_obc_descent():
    tree = build_ttns_tree(LatticeSpec.box(3), SplitStrategy(AxisPolicy.CYCLIC, max_depth=7))
    want = [[1], [1], [F(3, 4)], [F(3, 4), F(1, 2)], [F(9, 16), F(7, 16)], [F(3, 8), F(5, 16)]]
    assert descent_areas(tree)[:6] == want


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_long_cylinder_prefix(k):
    p = get_preset("2d-long-cylinder", k=k)
    rows = descent_sequence(p.build_tree())
    by_layer = {d.layer: [a.coeff for a in d.areas] for d in rows}
    assert min(by_layer) == -k
    # top edge cuts the long cylinder in the middle: one ring of bonds
    assert by_layer[-k] == [1]
    if k >= 2:
        assert by_layer[-k + 1] == [2, 1]
    for layer in range(-k + 2, 0):
        assert by_layer[layer] == [2]
    want = [[2], [2], [F(3, 2)], [1], [F(3, 4)], [F(1, 2)]]
    if k == 1:
        # a single halving leaves both blocks with one open end
        want[0] = [2, 1]
    assert [by_layer[n] for n in range(6)] == want


def test_long_cuboid_descent():
    rows = descent_sequence(get_preset("3d-long-cuboid-yz-pbc").build_tree())
    by_layer = {d.layer: d.area.coeff for d in rows}
    assert [by_layer[n] for n in range(6)] == [2, 2, F(3, 2), 1, F(5, 8), F(3, 8)]


def test_one_dimensional_chain():
    tree = build_ttns_tree(LatticeSpec.box(1), SplitStrategy(max_depth=5))
    # the two halves each have one open end; interior segments have two
    assert {n.area.coeff for n in tree.nodes() if n is not tree.root} == {1, 2}
    assert all(n.area.order == 0 for n in tree.nodes())


def test_prefix_requires_power_of_two():
    lat = LatticeSpec.box(2, pbc=[1], multiples={0: 3})
    with pytest.raises(ValueError):
        build_ttns_tree(lat, SplitStrategy(AxisPolicy.ALTERNATE_2D, elongated_prefix=True))
    # without the prefix the tree is still built
    build_ttns_tree(lat, SplitStrategy(AxisPolicy.ALTERNATE_2D, max_depth=3))


def test_invalid_strategy():
    with pytest.raises(ValueError):
        SplitStrategy(cut_fraction=1)
    with pytest.raises(ValueError):
        SplitStrategy(max_depth=0)
    with pytest.raises(ValueError):
        build_ttns_tree(LatticeSpec.box(3), SplitStrategy(AxisPolicy.ALTERNATE_2D))


def test_min_coeff_stops_descent():
    lat = LatticeSpec.box(2)
    full = build_ttns_tree(lat, SplitStrategy(AxisPolicy.ALTERNATE_2D, max_depth=8))
    cut = build_ttns_tree(lat, SplitStrategy(AxisPolicy.ALTERNATE_2D, max_depth=8, min_coeff=F(1, 2)))
    assert len(cut) < len(full)
    assert all(n.area.coeff >= F(1, 2) for n in cut.internal_nodes() if n is not cut.root)


@pytest.mark.parametrize("name", TABLE_PRESETS)
def test_tree_invariants(name):
    p = get_preset(name)
    tree = p.build_tree(max_depth=p.prefix_layers + 5)
    for node in tree.internal_nodes():
        a, b = node.children
        assert a.area.coeff >= b.area.coeff
        assert a.layer == b.layer == node.layer + 1
    # fast-path areas agree with the direct formula
    for node in tree.nodes():
        assert node.area == boundary_area_symbolic(node.region, p.lattice)


@pytest.mark.parametrize("name", ["2d-square", "2d-torus", "3d-cube-yz-pbc", "2d-long-cylinder"])
def test_partition_property(name):
    p = get_preset(name, k=2)
    tree = p.build_tree(max_depth=p.prefix_layers + 4)
    L = 4
    n_sites = p.lattice.n_sites(L)
    by_layer = {}
    for node in tree.nodes():
        by_layer.setdefault(node.layer, []).append(node)
    leaves_above = []
    for layer in sorted(by_layer):
        nodes = by_layer[layer] + leaves_above
        count = np.zeros(p.lattice.shape(L), dtype=int)
        for n in nodes:
            count += region_mask(n.region, p.lattice, L)
        assert count.sum() == n_sites and count.max() == 1, layer
        leaves_above += [n for n in by_layer[layer] if n.is_leaf]


def test_snake_3x3():
    # (x, y) with zero-based indices; y runs back and forth
    sites = snake_ordering(LatticeSpec.box(2), 3).sites
    assert sites == [(0, 0), (0, 1), (0, 2), (1, 2), (1, 1), (1, 0), (2, 0), (2, 1), (2, 2)]


@pytest.mark.parametrize("dim,sizes", [(1, range(2, 9)), (2, range(2, 9)), (3, range(2, 6))])
def test_snake_is_hamiltonian_path(dim, sizes):
    lat = LatticeSpec.box(dim)
    for L in sizes:
        sites = snake_ordering(lat, L).sites
        assert len(set(sites)) == len(sites) == L ** dim
        for s, t in zip(sites, sites[1:]):
            assert sum(abs(a - b) for a, b in zip(s, t)) == 1


def test_snake_max_cut_values():
    assert mps_max_cut(snake_ordering(LatticeSpec.box(2), 8))[0] == 9
    assert mps_max_cut(snake_ordering(LatticeSpec.box(2, pbc=[1]), 8))[0] == 10
    assert mps_max_cut(snake_ordering(LatticeSpec.box(1), 8)) == (1, 1)


def test_snake_slice_cuts():
    sizes = prefix_cut_sizes(snake_ordering(LatticeSpec.box(2), 8))
    assert all(sizes[8 * i - 1] == 8 for i in range(1, 8))
    sizes = prefix_cut_sizes(snake_ordering(LatticeSpec.box(3), 4))
    assert all(sizes[16 * i - 1] == 16 for i in range(1, 4))


def test_max_cut_budget():
    with pytest.raises(EnumerationBudgetExceeded):
        mps_max_cut(snake_ordering(LatticeSpec.box(2), 8), budget=10)


def test_max_cut_coefficient():
    assert mps_max_cut_coefficient(LatticeSpec.box(2, pbc=[1])).coeff == 1
    lat = LatticeSpec.box(3, pbc=[1, 2], multiples={0: 8})
    assert (mps_max_cut_coefficient(lat).coeff, mps_max_cut_coefficient(lat).order) == (1, 2)
    assert mps_max_cut_coefficient(LatticeSpec.box(5, pbc=range(5))).order == 4


def test_tie_break_is_lower_corner():
    tree = build_ttns_tree(LatticeSpec.box(2, pbc=[0, 1]), SplitStrategy(AxisPolicy.ALTERNATE_2D, max_depth=2))
    first, second = tree.root.children
    assert first.area == second.area
    assert first.region.corner() < second.region.corner()
    assert first.region == Region.of((0, F(1, 2)), None)


@pytest.mark.parametrize("name", ["3d-long-cuboid-yz-pbc", "3d-cube-yz-pbc", "3d-cube-xyz-pbc"])
def test_quartering_per_full_cycle_3d(name):
    # one full x, y, z cycle halves every side, so face areas drop by 1/4
    areas = {d.layer: d.area.coeff for d in descent_sequence(get_preset(name).build_tree())}
    for n in range(3, max(areas) - 2):
        assert areas[n + 3] == areas[n] / 4, (name, n)
