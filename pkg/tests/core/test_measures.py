"""Unit tests for measure constructors, decay classes and annulus masses."""

from __future__ import annotations

import logging
import math
import random
from fractions import Fraction

import pytest

from pdim_lab.core.errors import UsageError
from pdim_lab.core.groups import CanopyTree, FreeGroup, HeisenbergGroup, LatticeGroup, ball
from pdim_lab.core.measures import (
    annulus_mass,
    decay_class,
    explicit_measure,
    max_atom,
    max_atom_exact,
    neighbour_measure,
    poly_decay,
    stretched_exp_decay,
    uniform_on_ball,
    uniform_on_set,
)
from pdim_lab.core.percolation import expected_simple_degree

Z1 = LatticeGroup(1)
Z2 = LatticeGroup(2)
F2 = FreeGroup(2)


class TestUniformMeasures:
    """Tests for uniform_on_ball and uniform_on_set."""

    def test_plane_radius_one(self) -> None:
        mu = uniform_on_ball(Z2, 1)
        assert len(mu) == 4
        assert mu.exact == (Fraction(1, 4),) * 4

    def test_line_radius_two(self) -> None:
        mu = uniform_on_ball(Z1, 2)
        assert mu.support == ((1,), (-1,), (2,), (-2,))
        assert all(m == 0.25 for m in mu.masses)

    def test_free_radius_two(self) -> None:
        mu = uniform_on_ball(F2, 2)
        assert len(mu) == 16
        assert set(mu.exact or ()) == {Fraction(1, 16)}

    def test_identity_never_in_support(self) -> None:
        assert Z2.identity not in uniform_on_ball(Z2, 3).support

    def test_radius_zero_rejected(self) -> None:
        with pytest.raises(UsageError):
            uniform_on_ball(Z2, 0)

    def test_set_generators(self) -> None:
        assert uniform_on_set(Z2, Z2.generators).exact == (Fraction(1, 4),) * 4
        f3 = FreeGroup(3)
        assert set(uniform_on_set(f3, f3.generators).exact or ()) == {Fraction(1, 6)}

    def test_set_not_symmetric(self) -> None:
        with pytest.raises(UsageError, match="symmetric"):
            uniform_on_set(Z2, [(1, 0)])

    def test_set_with_identity(self) -> None:
        with pytest.raises(UsageError, match="identity"):
            uniform_on_set(Z1, [(0,), (1,), (-1,)])


class TestDecayFamilies:
    """Tests for poly_decay and stretched_exp_decay."""

    def test_poly_line(self) -> None:
        mu = poly_decay(Z1, 2, 2)
        assert mu.support == ((1,), (-1,), (2,), (-2,))
        assert mu.exact == (Fraction(2, 5), Fraction(2, 5), Fraction(1, 10), Fraction(1, 10))
        assert mu.provenance == "poly:2,2"

    def test_poly_radius_one_is_uniform(self) -> None:
        mu = poly_decay(Z2, 1, 1)
        ref = uniform_on_ball(Z2, 1)
        assert mu.support == ref.support
        assert mu.exact == ref.exact

    def test_poly_fractional_exponent_is_float(self) -> None:
        mu = poly_decay(Z1, 1.5, 3)
        assert mu.exact is None
        assert math.isclose(math.fsum(mu.masses), 1.0, abs_tol=1e-12)

    def test_stretched_exp_line(self) -> None:
        mu = stretched_exp_decay(Z1, 0.5, 1, 2)
        assert mu.masses == pytest.approx([1 / 3, 1 / 3, 1 / 6, 1 / 6])

    def test_stretched_exp_bad_base(self) -> None:
        with pytest.raises(UsageError):
            stretched_exp_decay(Z1, 1.0, 1, 2)

    def test_poly_on_graph_rejected(self) -> None:
        with pytest.raises(UsageError, match="group context"):
            poly_decay(CanopyTree(3), 2, 2)


class TestDecayClass:
    """Tests for decay_class membership constants."""

    def test_poly_constant(self) -> None:
        report = decay_class(poly_decay(Z1, 2, 2), 2)
        assert report.exact_constant == Fraction(2, 5)
        assert report.constant == pytest.approx(0.4)

    def test_membership_is_strict(self) -> None:
        mu = poly_decay(Z1, 2, 2)
        assert decay_class(mu, 2, constant=0.4).member is False
        assert decay_class(mu, 2, constant=0.41).member is True

    def test_generators_constant(self) -> None:
        report = decay_class(uniform_on_set(Z2, Z2.generators), 3)
        assert report.exact_constant == Fraction(1, 4)

    def test_exp_constant(self) -> None:
        # r_min = max mu(g)^(1/|g|^s)
        report = decay_class(poly_decay(Z1, 2, 2), 1, "exp")
        assert report.constant == pytest.approx(max(0.4, 0.1**0.5))

    def test_graph_measure_rejected(self) -> None:
        with pytest.raises(UsageError):
            decay_class(neighbour_measure(CanopyTree(3)), 1)

    @pytest.mark.parametrize(
        "mu, s, mode",
        [
            (poly_decay(Z2, 1.5, 3), 1.5, "poly"),
            (poly_decay(Z1, 2, 4), 2, "poly"),
            (stretched_exp_decay(Z2, 0.5, 1, 3), 1, "exp"),
        ],
        ids=["poly-float", "poly-exact", "exp"],
    )
    def test_membership_flips_at_the_minimal_constant(self, mu, s: float, mode: str) -> None:
        b_min = decay_class(mu, s, mode).constant
        assert decay_class(mu, s, mode, constant=b_min * (1 + 1e-9)).member is True
        assert decay_class(mu, s, mode, constant=b_min * (1 - 1e-9)).member is False
        assert decay_class(mu, s, mode, constant=b_min).member is False


class TestAnnulusMassAndAtoms:
    """Tests for annulus_mass and max_atom."""

    def test_inner_annulus_dominates(self) -> None:
        report = annulus_mass(poly_decay(Z1, 2, 2), 1)
        assert report.masses[0][1] == pytest.approx(0.8)
        assert report.dominant is True
        assert report.total == pytest.approx(1.0)

    def test_inner_annulus_small(self) -> None:
        report = annulus_mass(uniform_on_ball(Z2, 4), 1)
        assert report.masses[0][1] == pytest.approx(0.1)
        assert report.dominant is False

    def test_max_atom_tie_goes_to_canonical_first(self) -> None:
        assert max_atom(poly_decay(Z1, 2, 2)) == ((1,), pytest.approx(0.4))

    def test_max_atom_values(self) -> None:
        assert max_atom(uniform_on_ball(Z2, 1))[1] == pytest.approx(0.25)
        assert max_atom_exact(uniform_on_ball(F2, 2))[1] == Fraction(1, 16)


class TestExplicitMeasure:
    """Tests for explicit mass tables."""

    def test_identity_and_asymmetry_corrected(self, caplog: pytest.LogCaptureFixture) -> None:
        raw = {(0,): 0.2, (1,): 0.5, (-1,): 0.3}
        with caplog.at_level(logging.WARNING, logger="pdim_lab.core.measures"):
            mu, correction = explicit_measure(Z1, raw)
        assert correction.identity_mass == pytest.approx(0.2)
        assert correction.max_asymmetry == pytest.approx(0.2)
        assert mu.masses == pytest.approx([0.5, 0.5])
        assert "identity" in caplog.text

    def test_negative_mass_rejected(self) -> None:
        with pytest.raises(UsageError):
            explicit_measure(Z1, {(1,): -0.5, (-1,): 0.5})


class TestGraphMeasures:
    """Tests for nearest-neighbour measures on graph contexts."""

    def test_canopy_neighbour_weight(self) -> None:
        mu = uniform_on_ball(CanopyTree(5), 1)
        assert mu.is_graph
        assert mu.edge_weight == pytest.approx(0.25)
        assert mu.exact_edge_weight == Fraction(1, 4)

    def test_only_radius_one(self) -> None:
        with pytest.raises(UsageError):
            uniform_on_ball(CanopyTree(5), 2)


class TestExpectedDegree:
    """Tests for the expected number of distinct neighbours."""

    def test_plane_generators(self) -> None:
        mu = uniform_on_ball(Z2, 1)
        assert expected_simple_degree(mu, 4 * math.log(1.5)) == pytest.approx(4 / 3)

    def test_zero_intensity(self) -> None:
        assert expected_simple_degree(uniform_on_ball(Z2, 1), 0.0) == 0.0


class TestRandomisedMeasureLaws:
    """Symmetry and unit mass over randomly drawn supports and weights."""

    @pytest.mark.parametrize(
        "ctx", [Z1, Z2, F2, HeisenbergGroup()], ids=["Z1", "Z2", "F2", "heis"]
    )
    def test_explicit_tables(self, ctx) -> None:
        rng = random.Random(11)
        candidates = [g for g in ball(ctx, 3).elements if g != ctx.identity]
        for _ in range(50):
            picked = rng.sample(candidates, rng.randint(1, min(12, len(candidates))))
            raw = {g: rng.uniform(0.01, 5.0) for g in picked}
            mu, _ = explicit_measure(ctx, raw)
            assert math.fsum(mu.masses) == pytest.approx(1.0, abs=1e-12)
            assert ctx.identity not in mu.support
            for g in mu.support:
                assert mu.mass(ctx.inv(g)) == pytest.approx(mu.mass(g), rel=1e-12)

    @pytest.mark.parametrize(
        "build",
        [
            lambda rng: uniform_on_ball(Z2, rng.randint(1, 4)),
            lambda rng: poly_decay(Z2, rng.uniform(0.5, 4.0), rng.randint(1, 4)),
            lambda rng: poly_decay(F2, rng.uniform(0.5, 4.0), rng.randint(1, 3)),
            lambda rng: stretched_exp_decay(Z1, rng.uniform(0.1, 0.9), rng.uniform(0.5, 2), 5),
        ],
        ids=["uniform", "poly-Z2", "poly-F2", "exp-Z1"],
    )
    def test_family_constructors(self, build) -> None:
        rng = random.Random(5)
        for _ in range(20):
            mu = build(rng)
            ctx = mu.context
            assert math.fsum(mu.masses) == pytest.approx(1.0, abs=1e-12)
            assert all(m > 0 for m in mu.masses)
            for g in mu.support:
                assert mu.mass(ctx.inv(g)) == mu.mass(g)
            if mu.exact is not None:
                assert sum(mu.exact) == 1
