"""Unit tests for word-metric contexts and ball/annulus enumeration."""

from __future__ import annotations

import math
import random
from collections import deque
from pathlib import Path

import pytest

from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.core.groups import (
    CanopyTree,
    EdgeListGraph,
    FreeGroup,
    HeisenbergGroup,
    LamplighterGroup,
    LatticeGroup,
    ProductGroup,
    annuli,
    annulus_index,
    ball,
    inv,
    mul,
    word_length,
)


def _random_word(ctx, rng: random.Random, letters: int):
    g = ctx.identity
    for _ in range(rng.randint(0, letters)):
        g = ctx.mul(g, rng.choice(ctx.generators))
    return g


def _bfs_distance(ctx: CanopyTree, g: tuple[int, int, int], h: tuple[int, int, int]) -> int:
    seen = {g: 0}
    queue = deque([g])
    while queue:
        v = queue.popleft()
        if v == h:
            return seen[v]
        for w in ctx.neighbours(v):
            if w not in seen:
                seen[w] = seen[v] + 1
                queue.append(w)
    raise AssertionError("unreachable")


class TestGroupLaw:
    """Tests for mul / inv on the group contexts."""

    def test_lattice_addition(self) -> None:
        assert mul(LatticeGroup(2), (1, 2), (3, -1)) == (4, 1)

    def test_free_reduction(self) -> None:
        f2 = FreeGroup(2)
        # (a b)(b^-1 a) = a a
        assert mul(f2, (1, 2), (-2, 1)) == (1, 1)

    @pytest.mark.parametrize(
        "ctx, g",
        [
            (LatticeGroup(3), (2, -1, 5)),
            (FreeGroup(3), (1, -3, 2, 2)),
            (HeisenbergGroup(), (2, -3, 7)),
            (LamplighterGroup(), ((-2, 0, 3), 1)),
            (ProductGroup(LatticeGroup(1), FreeGroup(2)), ((4,), (2, -1))),
        ],
    )
    def test_inverse_laws(self, ctx, g) -> None:
        assert mul(ctx, g, inv(ctx, g)) == ctx.identity
        assert mul(ctx, inv(ctx, g), g) == ctx.identity
        assert inv(ctx, inv(ctx, g)) == g
        assert word_length(ctx, g) == word_length(ctx, inv(ctx, g))

    def test_heisenberg_associative(self) -> None:
        h = HeisenbergGroup()
        a, b, c = (1, 2, 3), (-1, 4, 0), (2, -2, 5)
        assert h.mul(h.mul(a, b), c) == h.mul(a, h.mul(b, c))

    def test_lamplighter_associative(self) -> None:
        lamp = LamplighterGroup()
        a, b, c = ((0, 2), 1), ((1,), -3), ((-1, 0), 2)
        assert lamp.mul(lamp.mul(a, b), c) == lamp.mul(a, lamp.mul(b, c))

    def test_foreign_element_rejected(self) -> None:
        with pytest.raises(UsageError):
            mul(LatticeGroup(2), (1, 2), (3,))

    def test_graph_context_has_no_law(self) -> None:
        with pytest.raises(UsageError):
            CanopyTree(3).mul((0, 0, 0), (1, 0, 0))


class TestWordLength:
    """Tests for word lengths, closed forms against the BFS oracle."""

    def test_lattice_l1(self) -> None:
        assert word_length(LatticeGroup(2), (3, -4)) == 7

    def test_free_reduced_length(self) -> None:
        assert word_length(FreeGroup(2), (1, 2, -1)) == 3

    def test_heisenberg_commutator(self) -> None:
        h = HeisenbergGroup()
        x, y = (1, 0, 0), (0, 1, 0)
        commutator = h.mul(h.mul(h.mul(x, y), h.inv(x)), h.inv(y))
        assert commutator == (0, 0, 1)
        assert h.word_length(commutator) == 4

    def test_lamplighter_closed_form_matches_bfs(self) -> None:
        lamp = LamplighterGroup()
        for radius, sphere in enumerate(lamp.spheres(5)):
            for g in sphere:
                assert lamp.word_length(g) == radius

    def test_lamplighter_examples(self) -> None:
        lamp = LamplighterGroup()
        assert lamp.word_length(((0,), 0)) == 1
        assert lamp.word_length(((1,), 0)) == 3
        assert lamp.word_length(((), -2)) == 2

    def test_canopy_lengths_match_bfs(self) -> None:
        canopy = CanopyTree(4)
        for radius, sphere in enumerate(canopy.spheres(8)):
            for g in sphere:
                assert canopy.word_length(g) == radius

    def test_canopy_distance_matches_bfs(self) -> None:
        canopy = CanopyTree(4)
        vertices = ball(canopy, 8).elements
        for g in vertices[::5]:
            for h in vertices[::7]:
                assert canopy.distance(g, h) == _bfs_distance(canopy, g, h)

    def test_product_length_is_additive(self) -> None:
        ctx = ProductGroup(LatticeGroup(2), FreeGroup(2))
        assert ctx.word_length(((1, -2), (1, 1))) == 5
        assert ctx.degree == 8

    @pytest.mark.parametrize(
        "ctx, letters",
        [
            (LatticeGroup(3), 12),
            (FreeGroup(3), 12),
            (LamplighterGroup(), 12),
            (HeisenbergGroup(), 4),
            (ProductGroup(LatticeGroup(1), FreeGroup(2)), 12),
        ],
        ids=["Z3", "F3", "lamplighter", "heis", "Z x F2"],
    )
    def test_triangle_inequality_on_random_pairs(self, ctx, letters: int) -> None:
        rng = random.Random(2024)
        for _ in range(10_000):
            g = _random_word(ctx, rng, letters)
            h = _random_word(ctx, rng, letters)
            assert word_length(ctx, mul(ctx, g, h)) <= word_length(ctx, g) + word_length(ctx, h)
            assert word_length(ctx, inv(ctx, g)) == word_length(ctx, g)


class TestBall:
    """Tests for ball and sphere enumeration."""

    def test_lattice_ball(self) -> None:
        b = ball(LatticeGroup(2), 2)
        assert len(b) == 13
        assert b.sphere_sizes == (1, 4, 8)

    def test_free_ball(self) -> None:
        b = ball(FreeGroup(2), 2)
        assert len(b) == 17
        assert b.sphere_sizes == (1, 4, 12)

    def test_radius_zero(self) -> None:
        b = ball(HeisenbergGroup(), 0)
        assert b.elements == ((0, 0, 0),)

    def test_sorted_and_closed_under_inversion(self) -> None:
        h = HeisenbergGroup()
        b = ball(h, 3)
        lengths = [h.word_length(g) for g in b.elements]
        assert lengths == sorted(lengths)
        assert all(h.inv(g) in b for g in b.elements)
        assert sum(b.sphere_sizes) == len(b)

    def test_canopy_spheres(self) -> None:
        b = ball(CanopyTree(3), 6)
        assert b.sphere_sizes == (1, 1, 3, 3, 6, 4, 8)
        assert len(b) == 26

    def test_finite_graph_pads_empty_spheres(self) -> None:
        b = ball(CanopyTree(1), 4)
        assert b.sphere_sizes == (1, 1, 2, 0, 0)

    def test_negative_radius(self) -> None:
        with pytest.raises(UsageError):
            ball(LatticeGroup(1), -1)

    def test_cap_exceeded_reports_partial_counts(self) -> None:
        with pytest.raises(CapExceededError) as info:
            ball(FreeGroup(3), 6, cap=100)
        assert info.value.cap == 100
        assert info.value.partial[:3] == (1, 6, 30)


class TestSphereClosedForms:
    """Sphere sizes against their closed forms."""

    @staticmethod
    def _lattice_sphere(d: int, n: int) -> int:
        if n == 0:
            return 1
        return sum(2**i * math.comb(d, i) * math.comb(n - 1, i - 1) for i in range(1, d + 1))

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_lattice_up_to_twenty(self, d: int) -> None:
        sizes = ball(LatticeGroup(d), 20).sphere_sizes
        assert sizes == tuple(self._lattice_sphere(d, n) for n in range(21))

    @pytest.mark.parametrize("k, m_max", [(1, 12), (2, 10), (3, 7)])
    def test_free_groups(self, k: int, m_max: int) -> None:
        sizes = ball(FreeGroup(k), m_max).sphere_sizes
        assert sizes[0] == 1
        for m in range(1, m_max + 1):
            assert sizes[m] == 2 * k * (2 * k - 1) ** (m - 1)

    @pytest.mark.slow
    def test_free_rank_two_to_twelve(self) -> None:
        sizes = ball(FreeGroup(2), 12).sphere_sizes
        assert sizes[1:] == tuple(4 * 3 ** (m - 1) for m in range(1, 13))


class TestAnnuli:
    """Tests for dyadic annuli."""

    def test_line(self) -> None:
        a = annuli(LatticeGroup(1), 1, 2)
        assert set(a[0]) == {(-1,), (0,), (1,)}
        assert set(a[1]) == {(2,), (-2,)}
        assert set(a[2]) == {(3,), (-3,), (4,), (-4,)}

    def test_plane_sizes(self) -> None:
        a = annuli(LatticeGroup(2), 1, 1)
        assert [len(x) for x in a] == [5, 8]

    def test_index(self) -> None:
        assert annulus_index(0, 2) == 0
        assert annulus_index(2, 2) == 0
        assert annulus_index(3, 2) == 1
        assert annulus_index(9, 2) == 3

    def test_invalid_m(self) -> None:
        with pytest.raises(UsageError):
            annuli(LatticeGroup(1), 0, 1)


class TestFormatting:
    """Tests for element display."""

    def test_free_letters(self) -> None:
        f2 = FreeGroup(2)
        assert f2.format_element((1, 2, -1)) == "abA"
        assert f2.format_element(()) == "e"
        assert FreeGroup(5).format_element(()) == "1"

    def test_lamplighter(self) -> None:
        assert LamplighterGroup().format_element(((0, 2), 1)) == "0,2@1"

    def test_product(self) -> None:
        ctx = ProductGroup(LatticeGroup(1), FreeGroup(2))
        assert ctx.format_element(((3,), (1,))) == "3|a"


class TestEdgeListGraph:
    """Tests for explicit graphs read from edge lists."""

    def _write(self, tmp_path: Path, text: str) -> Path:
        path = tmp_path / "g.txt"
        path.write_text(text, encoding="utf-8")
        return path

    def test_reads_edges(self, tmp_path: Path) -> None:
        path = self._write(tmp_path, "a b\nb c  # comment\nc a\nc d\nd d\n\n")
        g = EdgeListGraph.from_file(path)
        assert g.format_element(g.identity) == "a"
        assert g.max_degree == 3
        assert ball(g, 3).sphere_sizes == (1, 2, 1, 0)
        assert g.distance(g.vertex("a"), g.vertex("d")) == 2

    def test_malformed_line(self, tmp_path: Path) -> None:
        path = self._write(tmp_path, "a b c\n")
        with pytest.raises(UsageError, match=":1:"):
            EdgeListGraph.from_file(path)

    def test_missing_file(self, tmp_path: Path) -> None:
        with pytest.raises(FileNotFoundError):
            EdgeListGraph.from_file(tmp_path / "missing.txt")
