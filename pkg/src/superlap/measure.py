"""Signed measures on the fractional-order interval [0, 1].

A measure is a finite list of weighted Dirac atoms ``weight * delta_order``
plus, optionally, atoms obtained by Gauss-Legendre quadrature of a density.
Positive and negative parts are kept separate; validation checks that the
positive mass on high orders dominates the negative part and derives the
diagnostics (gamma, s_sharp) every downstream solver consumes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "MeasureError",
    "ZeroHighMass",
    "NegativeHighAtom",
    "MeasureAtom",
    "SpectralMeasure",
    "ValidatedMeasure",
    "discretize_density",
    "validate",
    "truncate_series",
]


class MeasureError(ValueError):
    """Invalid measure input."""


class ZeroHighMass(MeasureError):
    """No positive mass on [s_bar, 1]."""


class NegativeHighAtom(MeasureError):
    """A negative atom sits inside [s_bar, 1]."""


@dataclass(frozen=True)
class MeasureAtom:
    """One Dirac component: ``weight * delta_order``, weight signed and nonzero."""

    order: float
    weight: float

    def __post_init__(self):
        if not 0.0 <= self.order <= 1.0:
            raise MeasureError(f"atom order {self.order} outside [0, 1]")
        if self.weight == 0.0:
            raise MeasureError("atom weight must be nonzero")


@dataclass
class SpectralMeasure:
    """Signed measure split into positive and negative atom lists.

    ``minus_atoms`` store positive magnitudes; the negative sign is implied.
    ``tail_mass`` records the remainder dropped by a series truncation.
    """

    plus_atoms: list[MeasureAtom] = field(default_factory=list)
    minus_atoms: list[MeasureAtom] = field(default_factory=list)
    tail_mass: float = 0.0

    def __post_init__(self):
        for a in self.plus_atoms + self.minus_atoms:
            if a.weight <= 0.0:
                raise MeasureError(
                    "atom lists hold magnitudes; put the sign in the list choice"
                )
        plus_orders = {a.order for a in self.plus_atoms}
        minus_orders = {a.order for a in self.minus_atoms}
        clash = plus_orders & minus_orders
        if clash:
            raise MeasureError(f"opposite-sign atoms share orders {sorted(clash)}")
        if not self.plus_atoms:
            raise MeasureError("positive part must carry mass")

    @classmethod
    def from_signed_atoms(cls, atoms, tail_mass=0.0):
        """Split a signed atom list into the two magnitude lists.

        Atoms at a repeated order are merged (summed) first, so an order
        never appears on both sides.
        """
        merged: dict[float, float] = {}
        for a in atoms:
            merged[a.order] = merged.get(a.order, 0.0) + a.weight
        plus = [MeasureAtom(s, w) for s, w in sorted(merged.items()) if w > 0.0]
        minus = [MeasureAtom(s, -w) for s, w in sorted(merged.items()) if w < 0.0]
        return cls(plus, minus, tail_mass)

    def mass_plus(self, lo=0.0, hi=1.0):
        return sum(a.weight for a in self.plus_atoms if lo <= a.order <= hi)

    def mass_minus(self, lo=0.0, hi=1.0):
        return sum(a.weight for a in self.minus_atoms if lo <= a.order <= hi)


@dataclass(frozen=True)
class ValidatedMeasure:
    """Atom list that passed the domination checks, with derived diagnostics.

    gamma is the measured ratio (negative low mass) / (positive high mass);
    s_sharp is the largest order carrying positive mass, the strongest
    admissible choice for the critical-exponent order.
    """

    plus_atoms: tuple[MeasureAtom, ...]
    minus_atoms: tuple[MeasureAtom, ...]
    s_bar: float
    gamma: float
    s_sharp: float
    mass_plus_high: float
    mass_minus_low: float
    tail_mass: float = 0.0

    @property
    def atoms(self):
        """Signed atom view (minus atoms carry negative weights)."""
        signed = [MeasureAtom(a.order, a.weight) for a in self.plus_atoms]
        signed += [MeasureAtom(a.order, -a.weight) for a in self.minus_atoms]
        return tuple(sorted(signed, key=lambda a: a.order))

    @property
    def orders(self):
        return tuple(sorted({a.order for a in self.plus_atoms + self.minus_atoms}))

    def as_spectral(self):
        return SpectralMeasure(list(self.plus_atoms), list(self.minus_atoms), self.tail_mass)


def discretize_density(f, m):
    """Quadrature a density on [0, 1] into a signed atom list.

    ``f`` is either a callable on [0, 1] or a pair of arrays (s_table,
    f_table) interpolated linearly.  Gauss-Legendre nodes/weights of order
    ``m`` are used; positive samples feed the positive part, negative
    samples the negative part, zero-weight atoms are dropped.
    """
    if m < 2:
        raise MeasureError("quadrature order must be at least 2")
    if callable(f):
        fn = f
    else:
        s_tab = np.asarray(f[0], dtype=float)
        f_tab = np.asarray(f[1], dtype=float)
        if s_tab.shape != f_tab.shape or s_tab.ndim != 1:
            raise MeasureError("density table needs matching 1-d arrays")
        fn = lambda s: np.interp(s, s_tab, f_tab)
    nodes, wts = np.polynomial.legendre.leggauss(m)
    nodes = 0.5 * (nodes + 1.0)
    wts = 0.5 * wts
    atoms = []
    for s, w in zip(nodes, wts):
        val = float(fn(s)) * w
        if val != 0.0:
            atoms.append(MeasureAtom(float(s), val))
    if not atoms or all(a.weight == 0.0 for a in atoms):
        raise MeasureError("density is identically zero at the quadrature nodes")
    return atoms


def validate(m, s_bar):
    """Check the domination conditions and derive gamma and s_sharp.

    Requires positive mass on [s_bar, 1] and no negative mass there; gamma
    is then mass_minus([0, s_bar]) / mass_plus([s_bar, 1]) (zero when the
    negative part is empty), and s_sharp the largest positive-atom order.
    """
    if not 0.0 < s_bar <= 1.0:
        raise MeasureError(f"s_bar {s_bar} outside (0, 1]")
    high = m.mass_plus(s_bar, 1.0)
    if high <= 0.0:
        raise ZeroHighMass(f"no positive mass on [{s_bar}, 1]")
    bad = [a for a in m.minus_atoms if a.order >= s_bar]
    if bad:
        raise NegativeHighAtom(
            f"negative atoms at orders {[a.order for a in bad]} inside [{s_bar}, 1]"
        )
    low = m.mass_minus(0.0, s_bar)
    gamma = low / high if low > 0.0 else 0.0
    s_sharp = max(a.order for a in m.plus_atoms)
    return ValidatedMeasure(
        plus_atoms=tuple(sorted(m.plus_atoms, key=lambda a: a.order)),
        minus_atoms=tuple(sorted(m.minus_atoms, key=lambda a: a.order)),
        s_bar=s_bar,
        gamma=gamma,
        s_sharp=s_sharp,
        mass_plus_high=high,
        mass_minus_low=low,
        tail_mass=m.tail_mass,
    )


def truncate_series(orders, weights, k, tail_extra=0.0):
    """Keep the first ``k`` atoms of a Dirac series, reporting the tail mass.

    ``orders`` must be strictly decreasing.  The dropped in-list weights are
    summed into ``tail_mass``; ``tail_extra`` adds the analytic remainder of
    the series beyond the supplied terms.  Negative weights are allowed and
    land in the negative part.
    """
    orders = list(orders)
    weights = list(weights)
    if len(orders) != len(weights):
        raise MeasureError("orders and weights lengths differ")
    if k < 1:
        raise MeasureError("cut index must be at least 1")
    if any(b >= a for a, b in zip(orders, orders[1:])):
        raise MeasureError("series orders must be strictly decreasing")
    kept = [MeasureAtom(s, w) for s, w in zip(orders[:k], weights[:k]) if w != 0.0]
    tail = float(sum(weights[k:])) + float(tail_extra)
    return SpectralMeasure.from_signed_atoms(kept, tail_mass=tail)
