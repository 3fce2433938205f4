"""Finite-support symmetric probability measures and their decay classes."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal

from pdim_lab.core.errors import UsageError
from pdim_lab.core.groups import (
    Element,
    GraphContext,
    GroupContext,
    annulus_index,
    ball,
)

logger = logging.getLogger(__name__)

MASS_TOLERANCE = 1e-12

DecayMode = Literal["poly", "exp"]


@dataclass(frozen=True)
class Measure:
    """A symmetric probability measure with finite support, identity excluded.

    On a group context the support is a set of increments and the pair {g, h}
    carries weight mu(g^-1 h). On a graph context there is no group law; every
    edge of the graph carries the same ``edge_weight`` and ``support`` is empty.
    """

    context: GroupContext
    support: tuple[Element, ...]
    masses: tuple[float, ...]
    provenance: str
    exact: tuple[Fraction, ...] | None = None
    edge_weight: float | None = None
    _index: dict[Element, int] = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_index", {g: i for i, g in enumerate(self.support)})

    @property
    def is_graph(self) -> bool:
        return self.edge_weight is not None

    @property
    def is_rational(self) -> bool:
        return self.exact is not None or self.is_graph and self.exact_edge_weight is not None

    @property
    def exact_edge_weight(self) -> Fraction | None:
        if self.edge_weight is None:
            return None
        degree = self.context.degree
        return Fraction(1, degree) if degree else None

    def mass(self, g: Element) -> float:
        i = self._index.get(g)
        return 0.0 if i is None else self.masses[i]

    def exact_mass(self, g: Element) -> Fraction:
        if self.exact is None:
            raise UsageError(f"measure {self.provenance} has no exact masses")
        i = self._index.get(g)
        return Fraction(0) if i is None else self.exact[i]

    def pair_mass(self, g: Element, h: Element) -> float:
        """mu(g^-1 h), or the edge weight when {g, h} is a graph edge."""
        if self.edge_weight is not None:
            return self.edge_weight if h in self.context.neighbours(g) else 0.0
        return self.mass(self.context.mul(self.context.inv(g), h))

    def steps(self, v: Element) -> Iterator[tuple[Element, float]]:
        """Neighbours of ``v`` in the weighted graph, with their pair masses."""
        if self.edge_weight is not None:
            for w in self.context.neighbours(v):
                yield w, self.edge_weight
            return
        mul = self.context.mul
        for s, m in zip(self.support, self.masses):
            yield mul(v, s), m

    def exact_steps(self, v: Element) -> Iterator[tuple[Element, Fraction]]:
        if self.edge_weight is not None:
            weight = self.exact_edge_weight
            assert weight is not None
            for w in self.context.neighbours(v):
                yield w, weight
            return
        if self.exact is None:
            raise UsageError(f"measure {self.provenance} has no exact masses")
        mul = self.context.mul
        for s, m in zip(self.support, self.exact):
            yield mul(v, s), m

    def __len__(self) -> int:
        return len(self.support)


@dataclass(frozen=True)
class DecayClassReport:
    """Minimal constant of M_s^b (poly) or eM_s^r (exp) and an optional membership verdict."""

    s: float
    mode: DecayMode
    constant: float
    exact_constant: Fraction | None = None
    queried: float | None = None
    member: bool | None = None


@dataclass(frozen=True)
class AnnulusReport:
    M: int
    masses: tuple[tuple[int, float], ...]
    dominant: bool

    @property
    def total(self) -> float:
        return math.fsum(m for _, m in self.masses)


@dataclass(frozen=True)
class MeasureCorrection:
    """What the explicit-measure loader changed before accepting a file."""

    identity_mass: float
    max_asymmetry: float
    raw_total: float


def _require_group(ctx: GroupContext, what: str) -> None:
    if not ctx.is_group:
        raise UsageError(f"{what} needs a group context, got graph {ctx.spec}")


def _from_weights(
    ctx: GroupContext, weights: Mapping[Element, float | Fraction], provenance: str
) -> Measure:
    if not weights:
        raise UsageError(f"{provenance}: support is empty")
    for g, w in weights.items():
        if g == ctx.identity:
            raise UsageError(f"{provenance}: identity must not carry mass")
        if w <= 0:
            raise UsageError(f"{provenance}: non-positive mass at {ctx.format_element(g)}")
        if weights.get(ctx.inv(g)) != w:
            raise UsageError(f"{provenance}: weights are not symmetric at {ctx.format_element(g)}")

    support = tuple(sorted(weights, key=ctx.order_key))
    exact: tuple[Fraction, ...] | None = None
    if all(isinstance(w, Fraction) for w in weights.values()):
        total = sum((Fraction(weights[g]) for g in support), Fraction(0))
        exact = tuple(Fraction(weights[g]) / total for g in support)
        masses = tuple(float(x) for x in exact)
    else:
        total_f = math.fsum(float(w) for w in weights.values())
        masses = tuple(float(weights[g]) / total_f for g in support)

    if abs(math.fsum(masses) - 1.0) > MASS_TOLERANCE:
        raise UsageError(f"{provenance}: total mass deviates from 1")
    return Measure(
        context=ctx, support=support, masses=masses, provenance=provenance, exact=exact
    )


def neighbour_measure(ctx: GraphContext) -> Measure:
    """Nearest-neighbour measure on a graph: weight 1/max_degree on every edge."""
    if ctx.max_degree == 0:
        raise UsageError(f"{ctx.spec} has no edges")
    return Measure(
        context=ctx,
        support=(),
        masses=(),
        provenance="uniform-ball:1",
        edge_weight=1.0 / ctx.max_degree,
    )


def uniform_on_ball(ctx: GroupContext, n: int) -> Measure:
    """Mass 1/(|B(n)| - 1) on each non-identity element of B(n)."""
    if n < 1:
        raise UsageError(f"uniform_on_ball needs n >= 1, got {n}")
    if isinstance(ctx, GraphContext):
        if n != 1:
            raise UsageError("graph contexts only support the radius-1 (neighbour) measure")
        return neighbour_measure(ctx)
    elements = ball(ctx, n).elements[1:]
    return _from_weights(ctx, {g: Fraction(1) for g in elements}, f"uniform-ball:{n}")


def uniform_on_set(ctx: GroupContext, S: Iterable[Element]) -> Measure:
    """Equidistribution on a symmetric, identity-free set S."""
    _require_group(ctx, "uniform_on_set")
    elements = list(dict.fromkeys(S))
    if not elements:
        raise UsageError("uniform_on_set: S is empty")
    for g in elements:
        if not ctx.contains(g):
            raise UsageError(f"uniform_on_set: {g!r} is not an element of {ctx.spec}")
    members = set(elements)
    if ctx.identity in members:
        raise UsageError("uniform_on_set: S contains the identity")
    for g in elements:
        if ctx.inv(g) not in members:
            raise UsageError(
                f"uniform_on_set: S is not symmetric, missing inverse of {ctx.format_element(g)}"
            )
    return _from_weights(ctx, {g: Fraction(1) for g in elements}, "uniform-set")


def poly_decay(ctx: GroupContext, s: float, R: int) -> Measure:
    """mu(g) proportional to |g|^-s on B(R) minus the identity.

    Integer exponents keep exact rational masses.
    """
    _require_group(ctx, "poly_decay")
    if s <= 0:
        raise UsageError(f"poly_decay needs s > 0, got {s}")
    if R < 1:
        raise UsageError(f"poly_decay needs R >= 1, got {R}")
    elements = ball(ctx, R).elements[1:]
    weights: dict[Element, float | Fraction]
    if float(s).is_integer():
        k = int(s)
        weights = {g: Fraction(1, ctx.word_length(g) ** k) for g in elements}
    else:
        weights = {g: ctx.word_length(g) ** -s for g in elements}
    return _from_weights(ctx, weights, f"poly:{_num(s)},{R}")


def stretched_exp_decay(ctx: GroupContext, r: float, s: float, R: int) -> Measure:
    """mu(g) proportional to r^(|g|^s) on B(R) minus the identity."""
    _require_group(ctx, "stretched_exp_decay")
    if not 0 < r < 1:
        raise UsageError(f"stretched_exp_decay needs 0 < r < 1, got {r}")
    if not 0 < s <= 1:
        raise UsageError(f"stretched_exp_decay needs 0 < s <= 1, got {s}")
    if R < 1:
        raise UsageError(f"stretched_exp_decay needs R >= 1, got {R}")
    elements = ball(ctx, R).elements[1:]
    weights = {g: r ** (ctx.word_length(g) ** s) for g in elements}
    return _from_weights(ctx, weights, f"sexp:{_num(r)},{_num(s)},{R}")


def explicit_measure(
    ctx: GroupContext, raw: Mapping[Element, float], provenance: str = "explicit"
) -> tuple[Measure, MeasureCorrection]:
    """Accept a user-supplied mass table.

    Identity mass is dropped (self-loops never change connectivity), the table is
    symmetrised by averaging mu(g) and mu(g^-1), and the result is renormalised.
    """
    _require_group(ctx, "explicit_measure")
    for g, w in raw.items():
        if not ctx.contains(g):
            raise UsageError(f"{provenance}: {g!r} is not an element of {ctx.spec}")
        if w < 0 or not math.isfinite(w):
            raise UsageError(f"{provenance}: invalid mass {w} at {ctx.format_element(g)}")

    raw_total = math.fsum(raw.values())
    identity_mass = float(raw.get(ctx.identity, 0.0))
    if identity_mass > 0:
        logger.warning(
            "%s: dropping identity mass %.6g and renormalising", provenance, identity_mass
        )

    sym: dict[Element, float] = {}
    max_asymmetry = 0.0
    for g, w in raw.items():
        if g == ctx.identity or g in sym:
            continue
        g_inv = ctx.inv(g)
        w_inv = float(raw.get(g_inv, 0.0))
        max_asymmetry = max(max_asymmetry, abs(w - w_inv))
        avg = (w + w_inv) / 2
        if avg > 0:
            sym[g] = avg
            sym[g_inv] = avg
    if max_asymmetry > 0:
        logger.warning("%s: symmetrised, max |mu(g) - mu(g^-1)| = %.6g", provenance, max_asymmetry)

    measure = _from_weights(ctx, sym, provenance)
    return measure, MeasureCorrection(
        identity_mass=identity_mass, max_asymmetry=max_asymmetry, raw_total=raw_total
    )


def decay_class(
    mu: Measure,
    s: float,
    mode: DecayMode = "poly",
    *,
    constant: float | None = None,
) -> DecayClassReport:
    """Minimal admissible b (poly) or r (exp) and membership of ``mu`` for a queried constant.

    Membership is strict: mu is in M_s^b iff b > b_min, in eM_s^r iff r > r_min.
    """
    if mu.is_graph:
        raise UsageError("decay classes are defined for measures on groups")
    if s <= 0:
        raise UsageError(f"decay exponent must be > 0, got {s}")
    ctx = mu.context
    exact_constant: Fraction | None = None
    if mode == "poly":
        value = max(m * ctx.word_length(g) ** s for g, m in zip(mu.support, mu.masses))
        if mu.exact is not None and float(s).is_integer():
            k = int(s)
            exact_constant = max(
                q * ctx.word_length(g) ** k for g, q in zip(mu.support, mu.exact)
            )
            value = float(exact_constant)
    elif mode == "exp":
        value = max(m ** (1.0 / ctx.word_length(g) ** s) for g, m in zip(mu.support, mu.masses))
    else:
        raise UsageError(f"unknown decay mode: {mode}")
    member = None if constant is None else constant > value
    return DecayClassReport(
        s=s,
        mode=mode,
        constant=value,
        exact_constant=exact_constant,
        queried=constant,
        member=member,
    )


def annulus_mass(mu: Measure, M: int) -> AnnulusReport:
    """mu(A_i) for the dyadic annuli around B(M), and whether mu(A_0) > 1/2."""
    if mu.is_graph:
        raise UsageError("annulus masses are defined for measures on groups")
    if M < 1:
        raise UsageError(f"M must be >= 1, got {M}")
    ctx = mu.context
    buckets: dict[int, list[float]] = {}
    for g, m in zip(mu.support, mu.masses):
        buckets.setdefault(annulus_index(ctx.word_length(g), M), []).append(m)
    top = max(buckets)
    masses = tuple((i, math.fsum(buckets.get(i, []))) for i in range(top + 1))
    return AnnulusReport(M=M, masses=masses, dominant=masses[0][1] > 0.5)


def max_atom(mu: Measure) -> tuple[Element, float]:
    """Element of maximal mass; ties go to the first element in canonical order."""
    if mu.is_graph:
        raise UsageError("max_atom is defined for measures on groups")
    best = 0
    for i, m in enumerate(mu.masses):
        if m > mu.masses[best]:
            best = i
    return mu.support[best], mu.masses[best]


def max_atom_exact(mu: Measure) -> tuple[Element, Fraction]:
    if mu.exact is None:
        raise UsageError(f"measure {mu.provenance} has no exact masses")
    best = 0
    for i, q in enumerate(mu.exact):
        if q > mu.exact[best]:
            best = i
    return mu.support[best], mu.exact[best]


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))
