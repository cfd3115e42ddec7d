"""MPS site orderings and binary TTNS partition trees.

A partition tree starts from the full system. The split of the root is the
top edge of the TTNS; every other internal node is one tensor, whose three
legs carry the node's own boundary area and the areas of its two children.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .geometry import (
    BC,
    FULL,
    AreaCoefficient,
    Interval,
    LatticeSpec,
    Rational,
    Region,
    as_fraction,
    area_from_parts,
    boundary_area_symbolic,
)


class AxisPolicy(enum.Enum):
    ALTERNATE_2D = "alternate"
    CYCLIC = "cyclic"
    LONGEST_AXIS_FIRST = "longest"


@dataclass(frozen=True)
class SplitStrategy:
    axis_policy: AxisPolicy = AxisPolicy.CYCLIC
    elongated_prefix: bool = False
    cut_fraction: Fraction = Fraction(1, 2)
    max_depth: int = 12
    min_coeff: Fraction = Fraction(0)

    def __post_init__(self):
        f = as_fraction(self.cut_fraction)
        if not 0 < f < 1:
            raise ValueError(f"cut_fraction must lie in (0, 1), got {f}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        object.__setattr__(self, "cut_fraction", f)
        object.__setattr__(self, "min_coeff", as_fraction(self.min_coeff))


@dataclass(eq=False)
class PartitionNode:
    region: Region
    area: AreaCoefficient
    layer: int
    children: tuple[PartitionNode, ...] = ()
    split_axis: int | None = None
    # per-axis extents and (low face, high face) exposure flags
    lengths: tuple[Fraction, ...] = field(default=(), repr=False)
    faces: tuple[tuple[int, int], ...] = field(default=(), repr=False)

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def walk(self) -> Iterator[PartitionNode]:
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


@dataclass
class PartitionTree:
    """Binary tree of regions.

    Layer numbering: the children of the root (the two
    halves joined by the top edge) are layer 0 for an ``L^D`` block. With an
    elongated prefix of ``k`` halvings the root sits at layer ``-k-1`` and
    the ``L^D`` blocks at layer ``-1``.
    """

    lattice: LatticeSpec
    root: PartitionNode
    strategy: SplitStrategy | None = None
    prefix_layers: int = 0
    meta: dict = field(default_factory=dict)

    def nodes(self) -> Iterator[PartitionNode]:
        return self.root.walk()

    def internal_nodes(self) -> Iterator[PartitionNode]:
        return (n for n in self.nodes() if n.children)

    def tensors(self) -> Iterator[PartitionNode]:
        """Internal nodes other than the root; each is one TTNS tensor."""
        return (n for n in self.internal_nodes() if n is not self.root)

    def depth(self) -> int:
        return max(n.layer for n in self.nodes()) - self.root.layer

    def __len__(self):
        return sum(1 for _ in self.nodes())


def _order_children(a: PartitionNode, b: PartitionNode) -> tuple[PartitionNode, PartitionNode]:
    # larger area first; equal areas: lexicographically smallest corner first
    ca, cb = a.area.coeff, b.area.coeff
    if ca != cb:
        return (a, b) if ca > cb else (b, a)
    return (a, b) if a.region.corner() <= b.region.corner() else (b, a)


def _faces_of(region: Region, lattice: LatticeSpec) -> tuple[tuple[int, int], ...]:
    out = []
    for span, ax in zip(region.spans, lattice.axes):
        if span is FULL:
            out.append((0, 0))
        elif ax.bc is BC.PBC:
            out.append((0, 0) if span.length == ax.multiple else (1, 1))
        else:
            out.append((int(span.lo > 0), int(ax.is_unbounded or span.hi < ax.multiple)))
    return tuple(out)


def make_node(region: Region, lattice: LatticeSpec, layer: int) -> PartitionNode:
    area = boundary_area_symbolic(region, lattice)
    return PartitionNode(region, area, layer, lengths=region.lengths(lattice), faces=_faces_of(region, lattice))


@functools.lru_cache(maxsize=65536)
def _area(lengths: tuple[Fraction, ...], faces: tuple[tuple[int, int], ...], order: int) -> AreaCoefficient:
    return AreaCoefficient(area_from_parts(lengths, tuple(lo + hi for lo, hi in faces)), order)


def attach_split(node: PartitionNode, axis: int, fraction: Rational, lattice: LatticeSpec) -> tuple[PartitionNode, PartitionNode]:
    """Split ``node`` in place and return its (ordered) children.

    Child extents and face exposures are derived from the parent's, which is
    equivalent to re-running :func:`exposed_faces` on each child.
    """
    if not 0 <= axis < lattice.dim:
        raise IndexError(f"axis {axis} out of range for a {lattice.dim}D lattice")
    f = as_fraction(fraction)
    if not 0 < f < 1:
        raise ValueError(f"cut fraction must lie in (0, 1), got {f}")
    span, ax = node.region.spans[axis], lattice.axes[axis]
    lo = Fraction(0) if span is FULL else span.lo
    width = node.lengths[axis]
    w1 = f * width
    w2 = width - w1
    cut = lo + w1
    lo_face, hi_face = node.faces[axis]
    if span is FULL and ax.bc is BC.PBC:
        lo_face = hi_face = 1
    children = []
    for a_lo, a_hi, w, face in ((lo, cut, w1, (lo_face, 1)), (cut, lo + width, w2, (1, hi_face))):
        spans = node.region.spans[:axis] + (Interval._trusted(a_lo, a_hi, w),) + node.region.spans[axis + 1:]
        lengths = node.lengths[:axis] + (w,) + node.lengths[axis + 1:]
        faces = node.faces[:axis] + (face,) + node.faces[axis + 1:]
        children.append(PartitionNode(Region._trusted(spans), _area(lengths, faces, lattice.order),
                                      node.layer + 1, lengths=lengths, faces=faces))
    node.children = _order_children(*children)
    node.split_axis = axis
    return node.children


def _prefix_axis(lattice: LatticeSpec) -> tuple[int, int] | None:
    long_axes = [a for a, ax in enumerate(lattice.axes) if ax.multiple != 1]
    if not long_axes:
        return None
    if len(long_axes) > 1:
        raise ValueError("elongated prefix supports a single elongated axis")
    a = long_axes[0]
    k = lattice.axes[a].pow2
    if k is None:
        raise ValueError(f"elongated prefix needs an extent 2^k L, got {lattice.axes[a].multiple} L")
    return a, k


def _policy_axis(policy: AxisPolicy, layer: int, lengths: tuple[Fraction, ...]) -> int:
    dim = len(lengths)
    if policy is AxisPolicy.ALTERNATE_2D:
        if dim > 2:
            raise ValueError("Alternate2D needs a 1D or 2D lattice")
        return layer % dim
    if policy is AxisPolicy.CYCLIC:
        return layer % dim
    longest = max(lengths)
    return lengths.index(longest)


def build_ttns_tree(lattice: LatticeSpec, strategy: SplitStrategy) -> PartitionTree:
    """Materialize the full recursive-bisection tree down to ``strategy.max_depth``."""
    if not lattice.is_finite:
        raise ValueError("TTNS trees need every axis to be finite")
    prefix = _prefix_axis(lattice) if strategy.elongated_prefix else None
    k = prefix[1] if prefix else 0
    root = make_node(Region.full(lattice), lattice, -k - 1)
    tree = PartitionTree(lattice, root, strategy, prefix_layers=k)
    bottom = root.layer + strategy.max_depth

    stack = [root]
    while stack:
        node = stack.pop()
        if node.layer >= bottom:
            continue
        if node is not root and node.area.coeff < strategy.min_coeff:
            continue
        # layer of the children this split produces
        child_layer = node.layer + 1
        if child_layer < 0:
            axis, frac = prefix[0], Fraction(1, 2)
        else:
            axis = _policy_axis(strategy.axis_policy, child_layer, node.lengths)
            frac = strategy.cut_fraction
        stack.extend(attach_split(node, axis, frac, lattice))
    return tree


@dataclass(frozen=True)
class DescentRow:
    layer: int
    area: AreaCoefficient
    sibling_area: AreaCoefficient
    parent_area: AreaCoefficient
    node: PartitionNode = field(compare=False, repr=False)

    @property
    def areas(self) -> tuple[AreaCoefficient, ...]:
        if self.area == self.sibling_area:
            return (self.area,)
        return (self.area, self.sibling_area)


def descent_sequence(tree: PartitionTree) -> list[DescentRow]:
    """Follow the larger-area child from the root; one row per layer."""
    rows = []
    node = tree.root
    while node.children:
        first, second = node.children
        rows.append(DescentRow(first.layer, first.area, second.area, node.area, first))
        node = first
    return rows


@dataclass
class SiteOrdering:
    lattice: LatticeSpec
    L: int
    sites: list[tuple[int, ...]]

    def __iter__(self):
        return iter(self.sites)

    def __len__(self):
        return len(self.sites)

    @property
    def shape(self) -> tuple[int, ...]:
        return self.lattice.shape(self.L)


def _boustrophedon(shape: tuple[int, ...]) -> list[tuple[int, ...]]:
    if len(shape) == 1:
        return [(i,) for i in range(shape[0])]
    inner = _boustrophedon(shape[1:])
    out = []
    for i in range(shape[0]):
        part = inner if i % 2 == 0 else inner[::-1]
        out.extend((i,) + rest for rest in part)
    return out


def snake_ordering(lattice: LatticeSpec, L: int) -> SiteOrdering:
    """Snake path: axis 0 (x) advances slowest, each slice is traversed
    back and forth so consecutive sites stay neighbours on open axes."""
    if L < 2:
        raise ValueError("L must be >= 2")
    return SiteOrdering(lattice, L, _boustrophedon(lattice.shape(L)))


class EnumerationBudgetExceeded(RuntimeError):
    pass


def _neighbours(site: tuple[int, ...], shape: tuple[int, ...], pbc: tuple[bool, ...]):
    for a, n in enumerate(shape):
        for step in (-1, 1):
            j = site[a] + step
            if 0 <= j < n:
                pass
            elif pbc[a]:
                j %= n
            else:
                continue
            if j == site[a]:
                continue
            yield site[:a] + (j,) + site[a + 1:]


def prefix_cut_sizes(ordering: SiteOrdering) -> list[int]:
    """Crossing-bond counts for every prefix cut ``1..N-1`` of the ordering."""
    shape = ordering.shape
    pbc = tuple(ax.bc is BC.PBC for ax in ordering.lattice.axes)
    inside = np.zeros(shape, dtype=bool)
    crossing = 0
    sizes = []
    for site in ordering.sites[:-1]:
        n_in = n_out = 0
        for nb in _neighbours(site, shape, pbc):
            if inside[nb]:
                n_in += 1
            else:
                n_out += 1
        inside[site] = True
        crossing += n_out - n_in
        sizes.append(crossing)
    return sizes


def mps_max_cut(ordering: SiteOrdering, budget: int = 1_000_000) -> tuple[int, int]:
    """Largest number of bonds cut by any MPS bond, and the prefix length where it occurs."""
    if len(ordering) > budget:
        raise EnumerationBudgetExceeded(f"{len(ordering)} sites exceed the enumeration budget {budget}")
    if len(ordering) < 2:
        return 0, 0
    sizes = prefix_cut_sizes(ordering)
    best = max(sizes)
    return best, sizes.index(best) + 1


def mps_max_cut_coefficient(lattice: LatticeSpec) -> AreaCoefficient:
    """Leading coefficient of the largest snake cut: one cross-section perpendicular to x."""
    cross = Fraction(1)
    for a, ax in enumerate(lattice.axes[1:], start=1):
        if ax.is_unbounded:
            raise ValueError(f"axis {a} is unbounded; only x may be")
        cross *= ax.multiple
    return AreaCoefficient(cross, lattice.order)

