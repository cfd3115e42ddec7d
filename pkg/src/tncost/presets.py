"""Named geometries: the 2D, 3D and hypercube systems of the summary table."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .costmodel import MpsStrategy
from .geometry import LatticeSpec
from .partition import AxisPolicy, PartitionTree, SplitStrategy, build_ttns_tree

DEFAULT_K = 3
DEFAULT_HYPERCUBE_DIM = 4
# nodes down to layer 8 of every L^D block are materialized (tables print 0..5)
BLOCK_LAYERS = 8


@dataclass(frozen=True)
class Preset:
    name: str
    geometry: str
    pbc_label: str
    lattice: LatticeSpec
    strategy: SplitStrategy
    mps_strategy: MpsStrategy
    analytic_floor: Fraction | None = None

    def build_tree(self, max_depth: int | None = None) -> PartitionTree:
        strategy = self.strategy
        if max_depth is not None:
            strategy = SplitStrategy(strategy.axis_policy, strategy.elongated_prefix,
                                     strategy.cut_fraction, max_depth, strategy.min_coeff)
        return build_ttns_tree(self.lattice, strategy)

    @property
    def prefix_layers(self) -> int:
        if not self.strategy.elongated_prefix:
            return 0
        return max((ax.pow2 or 0) for ax in self.lattice.axes)


def _strategy(policy: AxisPolicy, k: int = 0) -> SplitStrategy:
    return SplitStrategy(policy, elongated_prefix=k > 0, max_depth=k + BLOCK_LAYERS + 1)


def _make(name: str, k: int, dim: int) -> Preset:
    alt, cyc = AxisPolicy.ALTERNATE_2D, AxisPolicy.CYCLIC
    snake, inf = MpsStrategy.SNAKE_OBC, MpsStrategy.INFINITE_LX
    long_x = {0: 2 ** k}
    if name == "2d-square":
        return Preset(name, "2D L x L square", "--", LatticeSpec.box(2), _strategy(alt), snake,
                      analytic_floor=Fraction(4))
    if name == "2d-cylinder":
        return Preset(name, "2D L x L cylinder", "y", LatticeSpec.box(2, pbc=[1]), _strategy(alt), snake)
    if name == "2d-long-cylinder":
        return Preset(name, f"2D L_x x L cylinder, L_x = {2 ** k}L", "y",
                      LatticeSpec.box(2, pbc=[1], multiples=long_x), _strategy(alt, k), snake)
    if name == "2d-torus":
        return Preset(name, "2D L x L torus", "y,x", LatticeSpec.box(2, pbc=[0, 1]), _strategy(alt), inf)
    if name == "3d-cube-obc":
        return Preset(name, "3D L x L x L cube", "--", LatticeSpec.box(3), _strategy(cyc), snake,
                      analytic_floor=Fraction(4))
    if name == "3d-cube-yz-pbc":
        return Preset(name, "3D L x L x L cube", "z,y", LatticeSpec.box(3, pbc=[1, 2]), _strategy(cyc), snake)
    if name == "3d-long-cuboid-yz-pbc":
        return Preset(name, f"3D L_x x L x L cuboid, L_x = {2 ** k}L", "z,y",
                      LatticeSpec.box(3, pbc=[1, 2], multiples=long_x), _strategy(cyc, k), snake)
    if name == "3d-cube-xyz-pbc":
        return Preset(name, "3D L x L x L cube", "z,y,x", LatticeSpec.box(3, pbc=[0, 1, 2]), _strategy(cyc), inf)
    if name == "hypercube":
        if dim < 4:
            raise ValueError(f"hypercube preset needs D >= 4, got {dim}")
        return Preset(f"hypercube-{dim}", f"{dim}D L^{dim} hypercube", "all",
                      LatticeSpec.box(dim, pbc=range(dim)), _strategy(cyc), inf)
    raise KeyError(name)


# order of the summary table
SUMMARY_ORDER = [
    "2d-square",
    "2d-cylinder",
    "2d-long-cylinder",
    "2d-torus",
    "3d-cube-obc",
    "3d-cube-yz-pbc",
    "3d-long-cuboid-yz-pbc",
    "3d-cube-xyz-pbc",
    "hypercube",
]

TABLE_PRESETS = [n for n in SUMMARY_ORDER if n != "hypercube"]


def get_preset(name: str, k: int = DEFAULT_K, dim: int = DEFAULT_HYPERCUBE_DIM) -> Preset:
    """Look up a preset; ``hypercube-5`` style names set the dimension."""
    if name.startswith("hypercube-"):
        try:
            dim = int(name.split("-", 1)[1])
        except ValueError:
            raise KeyError(f"unknown preset {name!r}") from None
        name = "hypercube"
    if k < 1:
        raise ValueError(f"elongation exponent k must be >= 1, got {k}")
    try:
        return _make(name, k, dim)
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; choose from {', '.join(SUMMARY_ORDER)}") from None


def all_presets(k: int = DEFAULT_K, dim: int = DEFAULT_HYPERCUBE_DIM) -> list[Preset]:
    return [get_preset(n, k, dim) for n in SUMMARY_ORDER]
