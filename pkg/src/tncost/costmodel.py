"""Bond dimensions and contraction costs under the area-law model.

Bond dimensions scale as ``M ~ q**|dA|``, so every cost ``M1**a * M2**b ...``
is ``q**(exponent * L**(D-1))``. Exponents are kept as exact rationals in
units of ``ln q``; ``q`` itself never needs a value.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .geometry import BC, AreaCoefficient, LatticeSpec, LeadingTerm, as_fraction
from .partition import PartitionTree, descent_sequence, mps_max_cut_coefficient


@dataclass(frozen=True)
class CostExponent(LeadingTerm):
    """Cost ``q**(coeff * L**order)``."""

    def __str__(self):
        return f"q^({self.coeff} L^{self.order})"


@dataclass(frozen=True)
class CostInterval:
    """Range ``[lower, upper]`` of achievable exponents (equal ends for a single value)."""

    lower: Fraction
    upper: Fraction
    order: int

    def __str__(self):
        if self.lower == self.upper:
            return str(self.upper)
        return f"{self.lower}..{self.upper}"


class MpsStrategy(enum.Enum):
    """How an MPS handles the x axis; the value is the cost multiplier
    applied to the snake cut coefficient."""

    SNAKE_OBC = "snake-obc"
    PBC_NAIVE = "pbc-naive"
    PBC_VERSTRAETE = "pbc-verstraete"
    PBC_PIPPAN = "pbc-pippan"
    INFINITE_LX = "infinite-lx"

    @property
    def multiplier(self) -> int:
        return _MPS_MULTIPLIER[self]


_MPS_MULTIPLIER = {
    MpsStrategy.SNAKE_OBC: 3,
    # open-chain MPS on a ring: bond dimensions squared
    MpsStrategy.PBC_NAIVE: 6,
    MpsStrategy.PBC_VERSTRAETE: 5,
    MpsStrategy.PBC_PIPPAN: 3,
    MpsStrategy.INFINITE_LX: 3,
}


class RuleKind(enum.Enum):
    MPS_SINGLE_SITE = "mps"
    TTNS_SINGLE_SITE = "ttns"
    TTNS_TWO_SITE_NAIVE = "ttns-two-site"


@dataclass(frozen=True)
class CostRule:
    kind: RuleKind = RuleKind.TTNS_SINGLE_SITE
    z: int = 3
    mps_strategy: MpsStrategy = MpsStrategy.SNAKE_OBC

    def __post_init__(self):
        if self.kind is not RuleKind.MPS_SINGLE_SITE and self.z < 3:
            raise ValueError(f"tree vertex degree must be >= 3, got {self.z}")

    @property
    def name(self) -> str:
        if self.kind is RuleKind.MPS_SINGLE_SITE:
            return f"mps/{self.mps_strategy.value}"
        return f"{self.kind.value}/z={self.z}"


def bond_exponent(area: AreaCoefficient) -> CostExponent:
    """Bond dimension of an edge whose subsystem has boundary ``area``."""
    return CostExponent(area.coeff, area.order)


def ttns_tensor_exponent(e1, e2, e3) -> Fraction:
    """Exponent of ``M1 * M2 * M3**2`` with ``M1 <= M2 <= M3``."""
    vals = sorted(as_fraction(e) for e in (e1, e2, e3))
    if vals[0] < 0:
        raise ValueError("edge exponents must be >= 0")
    a, b, c = vals
    return a + b + 2 * c


def ttns_two_site_exponent(max_area, z: int) -> Fraction:
    """Exponent of ``M**(3z-3)`` for naive two-site updates."""
    if z < 3:
        raise ValueError(f"vertex degree must be >= 3, got {z}")
    return (3 * z - 3) * as_fraction(max_area)


def mps_total_exponent(lattice: LatticeSpec, strategy: MpsStrategy = MpsStrategy.SNAKE_OBC) -> CostExponent:
    """MPS cost ``O(M**3)`` with the snake ordering and the chosen x-boundary treatment.

    ``INFINITE_LX`` replaces x by an unbounded open axis, so it accepts any
    boundary condition on x.
    """
    x_bc = lattice.axes[0].bc
    if strategy is MpsStrategy.SNAKE_OBC and x_bc is BC.PBC:
        raise ValueError("snake-obc needs an open x axis; pick a PBC strategy for periodic x")
    if strategy in (MpsStrategy.PBC_NAIVE, MpsStrategy.PBC_VERSTRAETE, MpsStrategy.PBC_PIPPAN) and x_bc is not BC.PBC:
        raise ValueError(f"{strategy.value} needs a periodic x axis")
    cut = mps_max_cut_coefficient(lattice)
    return CostExponent(strategy.multiplier * cut.coeff, cut.order)


@dataclass
class ReportRow:
    layer: int
    areas: tuple[AreaCoefficient, ...]
    # cost of the tensor on the descent path; None for the top edge
    exponent: CostExponent | None
    # largest cost among all tensors of this layer
    layer_max: CostExponent | None
    dominant: bool = False
    prefix: bool = False
    top_edge: bool = False


@dataclass
class CostReport:
    rows: list[ReportRow]
    total: CostExponent
    rule: CostRule
    lattice: LatticeSpec
    descent_max: CostExponent
    meta: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return self.total.order

    @property
    def dominant_layers(self) -> list[int]:
        return [r.layer for r in self.rows if r.dominant]


def _tensor_cost(rule: CostRule, parent: Fraction, a: Fraction, b: Fraction) -> Fraction:
    if rule.kind is RuleKind.TTNS_SINGLE_SITE:
        if rule.z != 3:
            raise ValueError("single-site costs are only defined for binary trees (z = 3)")
        return ttns_tensor_exponent(parent, a, b)
    return ttns_two_site_exponent(max(parent, a, b), rule.z)


def ttns_total_report(tree: PartitionTree, rule: CostRule | None = None) -> CostReport:
    """Per-layer costs along the descent path plus the maximum over the whole tree."""
    rule = rule or CostRule()
    if rule.kind is RuleKind.MPS_SINGLE_SITE:
        raise ValueError("ttns_total_report needs a tree cost rule")
    if not tree.root.children:
        raise ValueError("tree has no edges")
    order = tree.lattice.order

    layer_max: dict[int, Fraction] = {}
    for node in tree.tensors():
        c1, c2 = node.children
        cost = _tensor_cost(rule, node.area.coeff, c1.area.coeff, c2.area.coeff)
        layer = c1.layer
        if layer not in layer_max or cost > layer_max[layer]:
            layer_max[layer] = cost

    if rule.kind is RuleKind.TTNS_TWO_SITE_NAIVE:
        top = max(n.area.coeff for n in tree.nodes())
        total = ttns_two_site_exponent(top, rule.z)
    else:
        total = max(layer_max.values(), default=Fraction(0))

    rows = []
    descent_max = Fraction(0)
    top_layer = tree.root.layer + 1
    for d in descent_sequence(tree):
        if d.layer == top_layer:
            rows.append(ReportRow(d.layer, d.areas, None, None, prefix=d.layer < 0, top_edge=True))
            continue
        cost = _tensor_cost(rule, d.parent_area.coeff, d.area.coeff, d.sibling_area.coeff)
        descent_max = max(descent_max, cost)
        lm = layer_max[d.layer]
        rows.append(ReportRow(d.layer, d.areas, CostExponent(cost, order), CostExponent(lm, order),
                              dominant=lm == total, prefix=d.layer < 0))
    return CostReport(rows, CostExponent(total, order), rule, tree.lattice, CostExponent(descent_max, order))


@dataclass
class SummaryRow:
    preset: str
    geometry: str
    pbc: str
    mps: CostExponent
    mps_strategy: MpsStrategy
    ttns: CostInterval

    @property
    def asterisk(self) -> bool:
        """MPS value needs a workaround for periodic x (infinite MPS or a dedicated periodic-MPS scheme)."""
        return self.mps_strategy in (MpsStrategy.INFINITE_LX, MpsStrategy.PBC_PIPPAN)


def summary_table(presets: Iterable) -> list[SummaryRow]:
    """MPS and TTNS exponents for each preset geometry.

    Items may be preset objects or preset names. The TTNS entry spans the
    known analytic floor (where one exists) up to the canonical strategy's
    value.
    """
    from .presets import get_preset

    rows = []
    for p in presets:
        if isinstance(p, str):
            p = get_preset(p)
        tree = p.build_tree()
        report = ttns_total_report(tree)
        upper = report.total.coeff
        lower = p.analytic_floor if p.analytic_floor is not None else upper
        rows.append(SummaryRow(
            preset=p.name,
            geometry=p.geometry,
            pbc=p.pbc_label,
            mps=mps_total_exponent(p.lattice, p.mps_strategy),
            mps_strategy=p.mps_strategy,
            ttns=CostInterval(lower, upper, report.order),
        ))
    return rows
