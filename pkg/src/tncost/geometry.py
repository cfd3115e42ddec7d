"""Lattices, box-shaped subsystems and their boundary areas.

All lengths are measured in units of the linear system size ``L``. A box
region's boundary area is reported at leading order, ``|dA| ~ a * L**(D-1)``,
with ``a`` an exact :class:`~fractions.Fraction`. :func:`boundary_area_numeric`
counts crossing bonds on an explicit hypercubic lattice and serves as an
independent check of the symbolic formula.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

Rational = Union[int, Fraction, str]


class UndefinedAreaError(ValueError):
    """Raised when a region's boundary area has no finite leading coefficient."""


class DivisibilityError(ValueError):
    """Raised when a region does not align with the bonds of a lattice of size L."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    return Fraction(value)


class BC(enum.Enum):
    OBC = "obc"
    PBC = "pbc"


@dataclass(frozen=True)
class AxisSpec:
    """One lattice axis.

    ``multiple`` is the axis extent in units of L (``None`` for an unbounded
    axis, which must have open boundaries).
    """

    multiple: Fraction | None = Fraction(1)
    bc: BC = BC.OBC

    def __post_init__(self):
        if self.multiple is None:
            if self.bc is BC.PBC:
                raise ValueError("an unbounded axis cannot be periodic")
            return
        m = as_fraction(self.multiple)
        if m < 1:
            raise ValueError(f"axis multiple must be >= 1, got {m}")
        object.__setattr__(self, "multiple", m)

    @classmethod
    def unit(cls, bc: BC = BC.OBC) -> AxisSpec:
        return cls(Fraction(1), bc)

    @classmethod
    def unbounded(cls) -> AxisSpec:
        return cls(None, BC.OBC)

    @property
    def is_unbounded(self) -> bool:
        return self.multiple is None

    @property
    def pow2(self) -> int | None:
        """``k`` if the extent is ``2**k * L``, else ``None``."""
        m = self.multiple
        if m is None or m.denominator != 1:
            return None
        n = m.numerator
        if n & (n - 1):
            return None
        return n.bit_length() - 1


@dataclass(frozen=True)
class LatticeSpec:
    axes: tuple[AxisSpec, ...]

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        if len(self.axes) < 1:
            raise ValueError("a lattice needs at least one axis")

    @classmethod
    def box(cls, dim: int, pbc: Sequence[int] = (), multiples: dict | None = None) -> LatticeSpec:
        """Hypercubic box; ``pbc`` lists periodic axis indices, ``multiples``
        maps axis index to extent in units of L."""
        multiples = multiples or {}
        axes = []
        for a in range(dim):
            bc = BC.PBC if a in pbc else BC.OBC
            axes.append(AxisSpec(as_fraction(multiples.get(a, 1)), bc))
        return cls(tuple(axes))

    @property
    def dim(self) -> int:
        return len(self.axes)

    @property
    def order(self) -> int:
        return self.dim - 1

    @property
    def is_finite(self) -> bool:
        return all(not ax.is_unbounded for ax in self.axes)

    def n_sites(self, L: int) -> int:
        return int(np.prod(self.shape(L)))

    def shape(self, L: int) -> tuple[int, ...]:
        """Number of sites along each axis for linear size ``L``."""
        out = []
        for a, ax in enumerate(self.axes):
            if ax.is_unbounded:
                raise UndefinedAreaError(f"axis {a} is unbounded")
            n = ax.multiple * L
            if n.denominator != 1:
                raise DivisibilityError(f"axis {a} extent {ax.multiple}*L is not an integer for L={L}")
            out.append(int(n))
        return tuple(out)

    def describe(self) -> str:
        names = axis_names(self.dim)
        parts = []
        for name, ax in zip(names, self.axes):
            ext = "inf" if ax.is_unbounded else ("L" if ax.multiple == 1 else f"{ax.multiple}L")
            parts.append(f"{name}:{ext}/{ax.bc.value}")
        return " ".join(parts)


def axis_names(dim: int) -> list[str]:
    base = ["x", "y", "z", "w"]
    if dim <= len(base):
        return base[:dim]
    return [f"x{i}" for i in range(dim)]


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    length: Fraction = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        lo, hi = as_fraction(self.lo), as_fraction(self.hi)
        if not hi > lo:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "length", hi - lo)

    @classmethod
    def _trusted(cls, lo: Fraction, hi: Fraction, length: Fraction) -> Interval:
        # skips validation; callers guarantee lo < hi
        obj = object.__new__(cls)
        obj.__dict__.update(lo=lo, hi=hi, length=length)
        return obj

    def __str__(self):
        return f"[{self.lo},{self.hi}]"


class _FullSpan:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "FULL"

    __str__ = __repr__

    def __reduce__(self):
        return (_FullSpan, ())


FULL = _FullSpan()
Span = Union[Interval, _FullSpan]


@dataclass(frozen=True)
class Region:
    """Axis-aligned box: one :class:`Interval` or ``FULL`` per axis."""

    spans: tuple[Span, ...]

    def __post_init__(self):
        spans = []
        for s in self.spans:
            if s is FULL or isinstance(s, Interval):
                spans.append(s)
            else:
                lo, hi = s
                spans.append(Interval(lo, hi))
        object.__setattr__(self, "spans", tuple(spans))

    @classmethod
    def _trusted(cls, spans: tuple[Span, ...]) -> Region:
        obj = object.__new__(cls)
        obj.__dict__["spans"] = spans
        return obj

    @classmethod
    def full(cls, lattice: LatticeSpec) -> Region:
        return cls((FULL,) * lattice.dim)

    @classmethod
    def of(cls, *spans) -> Region:
        """``Region.of((0, "1/2"), None)``; ``None`` stands for a full span."""
        return cls(tuple(FULL if s is None else s for s in spans))

    @property
    def dim(self) -> int:
        return len(self.spans)

    def corner(self) -> tuple[Fraction, ...]:
        """Lower corner, used for deterministic tie-breaking."""
        return tuple(Fraction(0) if s is FULL else s.lo for s in self.spans)

    def lengths(self, lattice: LatticeSpec) -> tuple[Fraction, ...]:
        return tuple(span_length(s, ax, a) for a, (s, ax) in enumerate(zip(self.spans, lattice.axes)))

    def validate(self, lattice: LatticeSpec) -> None:
        if self.dim != lattice.dim:
            raise ValueError(f"region has {self.dim} axes, lattice has {lattice.dim}")
        for a, (s, ax) in enumerate(zip(self.spans, lattice.axes)):
            if s is FULL or ax.is_unbounded:
                continue
            if s.lo < 0 or s.hi > ax.multiple:
                raise ValueError(f"interval {s} on axis {a} exceeds [0, {ax.multiple}]")

    def __str__(self):
        return "x".join(str(s) for s in self.spans)


def span_length(span: Span, axis: AxisSpec, index: int = 0) -> Fraction:
    if span is FULL:
        if axis.is_unbounded:
            raise UndefinedAreaError(f"full span on unbounded axis {index} has infinite length")
        return axis.multiple
    return span.length


def _check_axis(region: Region, axis: int, lattice: LatticeSpec) -> None:
    if not 0 <= axis < lattice.dim:
        raise IndexError(f"axis {axis} out of range for a {lattice.dim}D lattice")
    if region.dim != lattice.dim:
        raise ValueError(f"region has {region.dim} axes, lattice has {lattice.dim}")


def exposed_faces(region: Region, axis: int, lattice: LatticeSpec) -> int:
    """Number of the region's faces perpendicular to ``axis`` that border the complement."""
    _check_axis(region, axis, lattice)
    span, ax = region.spans[axis], lattice.axes[axis]
    if span is FULL:
        return 0
    if ax.bc is BC.PBC:
        return 0 if span.length == ax.multiple else 2
    faces = 0
    if span.lo > 0:
        faces += 1
    if ax.is_unbounded or span.hi < ax.multiple:
        faces += 1
    return faces


@dataclass(frozen=True)
class LeadingTerm:
    """``coeff * L**order``; only terms of equal order compare."""

    coeff: Fraction
    order: int

    def __post_init__(self):
        c = as_fraction(self.coeff)
        if c < 0:
            raise ValueError(f"coefficient must be >= 0, got {c}")
        object.__setattr__(self, "coeff", c)

    def _check(self, other: LeadingTerm) -> None:
        if not isinstance(other, LeadingTerm):
            raise TypeError(f"cannot compare with {type(other).__name__}")
        if self.order != other.order:
            raise ValueError(f"cannot compare L^{self.order} with L^{other.order}")

    def __lt__(self, other):
        self._check(other)
        return self.coeff < other.coeff

    def __le__(self, other):
        self._check(other)
        return self.coeff <= other.coeff

    def __gt__(self, other):
        self._check(other)
        return self.coeff > other.coeff

    def __ge__(self, other):
        self._check(other)
        return self.coeff >= other.coeff


@dataclass(frozen=True)
class AreaCoefficient(LeadingTerm):
    """Leading-order boundary area ``coeff * L**order``."""

    def __str__(self):
        return f"{self.coeff} L^{self.order}"


@functools.lru_cache(maxsize=65536)
def area_from_parts(lengths: tuple[Fraction, ...], exposures: tuple[int, ...]) -> Fraction:
    total = Fraction(0)
    for a, faces in enumerate(exposures):
        if not faces:
            continue
        cross = Fraction(1)
        for b, length in enumerate(lengths):
            if b != a:
                cross *= length
        total += faces * cross
    return total


def boundary_area_symbolic(region: Region, lattice: LatticeSpec) -> AreaCoefficient:
    """Leading coefficient of the number of bonds leaving ``region``.

    Each exposed face contributes the product of the region's extents along
    the other axes.
    """
    region.validate(lattice)
    n_unbounded = sum(ax.is_unbounded for ax in lattice.axes)
    if n_unbounded > 1:
        raise UndefinedAreaError("at most one unbounded axis is supported")
    lengths = region.lengths(lattice)
    exposures = tuple(exposed_faces(region, a, lattice) for a in range(lattice.dim))
    return AreaCoefficient(area_from_parts(lengths, exposures), lattice.order)


def _scaled(value: Fraction, L: int, what: str) -> int:
    v = value * L
    if v.denominator != 1:
        raise DivisibilityError(f"{what} = {value} is not a multiple of 1/{L}")
    return int(v)


def region_mask(region: Region, lattice: LatticeSpec, L: int) -> np.ndarray:
    """Boolean occupation array of ``region`` on the explicit lattice."""
    region.validate(lattice)
    shape = lattice.shape(L)
    mask = np.ones(shape, dtype=bool)
    for a, span in enumerate(region.spans):
        if span is FULL:
            continue
        lo = _scaled(span.lo, L, f"axis {a} lower endpoint")
        hi = _scaled(span.hi, L, f"axis {a} upper endpoint")
        line = np.zeros(shape[a], dtype=bool)
        line[lo:hi] = True
        view = [1] * len(shape)
        view[a] = shape[a]
        mask &= line.reshape(view)
    return mask


def crossing_edges(mask: np.ndarray, lattice: LatticeSpec) -> int:
    """Number of nearest-neighbour bonds with exactly one end inside ``mask``."""
    count = 0
    for a, ax in enumerate(lattice.axes):
        if ax.bc is BC.PBC:
            count += int(np.count_nonzero(mask != np.roll(mask, 1, axis=a)))
        else:
            lower = np.take(mask, range(mask.shape[a] - 1), axis=a)
            upper = np.take(mask, range(1, mask.shape[a]), axis=a)
            count += int(np.count_nonzero(lower != upper))
    return count


def boundary_area_numeric(region: Region, lattice: LatticeSpec, L: int) -> int:
    """Brute-force count of bonds crossing the boundary of ``region`` at size ``L``."""
    if not lattice.is_finite:
        raise UndefinedAreaError("numeric areas need every axis to be finite")
    return crossing_edges(region_mask(region, lattice, L), lattice)


def split_region(region: Region, axis: int, fraction: Rational, lattice: LatticeSpec) -> tuple[Region, Region]:
    """Cut ``region`` perpendicular to ``axis`` at ``lo + fraction * (hi - lo)``.

    A full span on a periodic axis is opened into the arcs ``[0, c]`` and
    ``[c, m]``.
    """
    _check_axis(region, axis, lattice)
    f = as_fraction(fraction)
    if not 0 < f < 1:
        raise ValueError(f"cut fraction must lie in (0, 1), got {f}")
    span, ax = region.spans[axis], lattice.axes[axis]
    if span is FULL:
        if ax.is_unbounded:
            raise UndefinedAreaError(f"cannot split the unbounded axis {axis}")
        lo, hi = Fraction(0), ax.multiple
    else:
        lo, hi = span.lo, span.hi
    cut = lo + f * (hi - lo)
    first = list(region.spans)
    second = list(region.spans)
    first[axis] = Interval(lo, cut)
    second[axis] = Interval(cut, hi)
    return Region(tuple(first)), Region(tuple(second))
