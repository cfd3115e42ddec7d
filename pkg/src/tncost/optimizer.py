"""Search over split axes and cut fractions for the cheapest TTNS partition tree.

The objective is the largest per-tensor cost exponent of the tree (the top
edge carries no tensor). Every node above ``max_depth`` must be split; each
split picks an axis and a cut fraction ``k/g`` of the node's current extent.

Subproblems are memoized on congruence classes: the value of a subtree only
depends on the multiset of per-axis (extent, exposure) pairs, where exposure
is the number of open faces (0, 1 or 2) or "ring" for an unsplit periodic
axis. All arithmetic is on integers, with extents scaled by a common
denominator so every reachable cut is integral.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .costmodel import CostExponent, ttns_total_report
from .geometry import BC, FULL, LatticeSpec, Region
from .partition import PartitionNode, PartitionTree, attach_split, make_node

RING = -1


class SearchBudgetExceeded(RuntimeError):
    """Raised when the number of distinct subproblems exceeds the budget.

    ``tree`` and ``exponent`` hold the best complete result found before the
    budget ran out (both None if no root split finished).
    """

    def __init__(self, message, tree=None, exponent=None):
        super().__init__(message)
        self.tree = tree
        self.exponent = exponent


@dataclass(frozen=True)
class SearchConfig:
    grid_denominator: int = 2
    max_depth: int = 4
    balanced_only: bool = False
    budget: int = 2_000_000

    def __post_init__(self):
        if self.grid_denominator < 2:
            raise ValueError(f"grid denominator must be >= 2, got {self.grid_denominator}")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.balanced_only and self.grid_denominator % 2:
            raise ValueError("balanced search needs an even grid denominator")

    def fractions(self) -> list[int]:
        """Cut numerators ``k`` (over ``grid_denominator``), ascending."""
        g = self.grid_denominator
        return [g // 2] if self.balanced_only else list(range(1, g))


# per-axis state: (extent, low face open, high face open, unsplit ring)
AxisState = tuple[int, int, int, bool]


class _Search:
    def __init__(self, lattice: LatticeSpec, config: SearchConfig):
        if not lattice.is_finite:
            raise ValueError("optimizer needs every axis to be finite")
        self.lattice = lattice
        self.config = config
        self.g = config.grid_denominator
        self.ks = config.fractions()
        denom = math.lcm(*(ax.multiple.denominator for ax in lattice.axes))
        self.scale = denom * self.g ** config.max_depth
        self.memo: dict[tuple, int] = {}
        self.choice: dict[tuple, tuple[int, int]] = {}
        self.enforce_budget = True

    # -- state helpers
    def root_state(self) -> tuple[AxisState, ...]:
        return tuple((int(ax.multiple * self.scale), 0, 0, ax.bc is BC.PBC) for ax in self.lattice.axes)

    def state_of(self, node: PartitionNode) -> tuple[AxisState, ...]:
        out = []
        for span, ax, n, (lo, hi) in zip(node.region.spans, self.lattice.axes, node.lengths, node.faces):
            out.append((int(n * self.scale), lo, hi, span is FULL and ax.bc is BC.PBC))
        return tuple(out)

    @staticmethod
    def area(state) -> int:
        total = 0
        for a, (_, lo, hi, ring) in enumerate(state):
            e = 0 if ring else lo + hi
            if e:
                prod = e
                for b, other in enumerate(state):
                    if b != a:
                        prod *= other[0]
                total += prod
        return total

    def children(self, state, axis: int, k: int):
        n, lo, hi, ring = state[axis]
        w1 = n * k // self.g
        if ring:
            lo = hi = 1
        c1 = state[:axis] + ((w1, lo, 1, False),) + state[axis + 1:]
        c2 = state[:axis] + ((n - w1, 1, hi, False),) + state[axis + 1:]
        return c1, c2

    @staticmethod
    def key(state, depth: int) -> tuple:
        return tuple(sorted((n, RING if ring else lo + hi) for n, lo, hi, ring in state)) + (depth,)

    @staticmethod
    def tensor(parent: int, a: int, b: int) -> int:
        x, y, z = sorted((parent, a, b))
        return x + y + 2 * z

    def candidates(self, state):
        for axis in range(len(state)):
            for k in self.ks:
                yield axis, k

    # -- search
    def solve(self, state, depth: int) -> int:
        """Best achievable max tensor cost below a non-root node with ``depth`` splits left."""
        if depth == 0:
            return 0
        key = self.key(state, depth)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self.enforce_budget and len(self.memo) >= self.config.budget:
            raise SearchBudgetExceeded(f"more than {self.config.budget} subproblems")
        parent = self.area(state)
        best, pick = None, None
        for axis, k in self.candidates(state):
            c1, c2 = self.children(state, axis, k)
            cost = self.tensor(parent, self.area(c1), self.area(c2))
            if best is not None and cost >= best:
                continue
            v = max(cost, self.solve(c1, depth - 1))
            if best is not None and v >= best:
                continue
            v = max(v, self.solve(c2, depth - 1))
            if best is None or v < best:
                best, pick = v, (axis, k)
        self.memo[key] = best
        self.choice[state + (depth,)] = pick
        return best

    def split_value(self, state, depth: int, axis: int, k: int, top: bool) -> int:
        c1, c2 = self.children(state, axis, k)
        cost = 0 if top else self.tensor(self.area(state), self.area(c1), self.area(c2))
        return max(cost, self.solve(c1, depth - 1), self.solve(c2, depth - 1))

    def choose(self, state, depth: int, target: int, top: bool) -> tuple[int, int]:
        pick = None if top else self.choice.get(state + (depth,))
        if pick is not None:
            return pick
        for axis, k in self.candidates(state):
            if self.split_value(state, depth, axis, k, top) == target:
                return axis, k
        raise AssertionError("no split reproduces the memoized optimum")

    def build(self, root_pick: tuple[int, int], value: int) -> PartitionTree:
        lattice = self.lattice
        root = make_node(Region.full(lattice), lattice, -1)
        tree = PartitionTree(lattice, root, None, meta={"grid": self.g, "max_depth": self.config.max_depth})
        self.enforce_budget = False
        stack = [(root, self.config.max_depth, root_pick)]
        while stack:
            node, depth, pick = stack.pop()
            if depth == 0:
                continue
            state = self.state_of(node)
            if pick is None:
                pick = self.choose(state, depth, self.solve(state, depth), top=False)
            axis, k = pick
            for child in attach_split(node, axis, Fraction(k, self.g), lattice):
                stack.append((child, depth - 1, None))
        return tree

    def run(self) -> tuple[PartitionTree, int]:
        state = self.root_state()
        depth = self.config.max_depth
        best, pick = None, None
        try:
            for axis, k in self.candidates(state):
                v = self.split_value(state, depth, axis, k, top=True)
                if best is None or v < best:
                    best, pick = v, (axis, k)
        except SearchBudgetExceeded as exc:
            if pick is not None:
                exc.tree = self.build(pick, best)
                exc.exponent = self.exponent(best)
            raise
        return self.build(pick, best), best

    def exponent(self, value: int) -> CostExponent:
        order = self.lattice.order
        return CostExponent(Fraction(value, self.scale ** order), order)


def optimize_splits(lattice: LatticeSpec, config: SearchConfig | None = None) -> tuple[PartitionTree, CostExponent]:
    """Exhaustive grid search; returns the optimal tree and its max tensor exponent.

    Ties are broken towards the smaller axis index, then the smaller fraction.
    """
    config = config or SearchConfig()
    search = _Search(lattice, config)
    tree, value = search.run()
    exponent = search.exponent(value)
    tree.meta["subproblems"] = len(search.memo)
    tree.meta["exponent"] = exponent
    return tree, exponent


def analytic_floor(lattice: LatticeSpec) -> Fraction | None:
    """Known lower bound on any tree's exponent: 4 for the open square and the open cube."""
    unit = all(ax.multiple == 1 for ax in lattice.axes)
    obc = all(ax.bc is BC.OBC for ax in lattice.axes)
    if unit and obc and lattice.dim in (2, 3):
        return Fraction(4)
    return None


@dataclass
class GapReport:
    grids: list[int]
    exponents: list[Fraction]
    order: int
    floor: Fraction | None
    monotone: bool
    gaps: list[Fraction] | None = field(default=None)

    @property
    def above_floor(self) -> bool:
        return self.floor is None or all(e >= self.floor for e in self.exponents)


def lower_bound_gap(lattice: LatticeSpec, results) -> GapReport:
    """Summarize optima over increasing grid denominators.

    ``results`` is a list of ``(g, CostExponent)`` pairs, or of grid
    denominators, in which case the searches are run here with the default
    depth.
    """
    pairs = []
    for item in results:
        if isinstance(item, int):
            item = (item, optimize_splits(lattice, SearchConfig(grid_denominator=item))[1])
        pairs.append(item)
    if len(pairs) < 2:
        raise ValueError("need results for at least two grid denominators")
    pairs.sort(key=lambda p: p[0])
    grids = [g for g, _ in pairs]
    exps = [e.coeff for _, e in pairs]
    floor = analytic_floor(lattice)
    return GapReport(
        grids=grids,
        exponents=exps,
        order=lattice.order,
        floor=floor,
        monotone=all(b <= a for a, b in zip(exps, exps[1:])),
        gaps=None if floor is None else [e - floor for e in exps],
    )


def verify_tree_exponent(tree: PartitionTree) -> CostExponent:
    """Recompute an optimized tree's exponent with the cost model."""
    return ttns_total_report(tree).total
