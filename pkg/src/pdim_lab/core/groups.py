"""Word-metric geometry of finitely generated groups and of locally finite graphs.

Elements are plain nested tuples of ints in a canonical form, so equality and
hashing are structural:

  - ``zd:<d>``      lattice vector ``(x_1, ..., x_d)``
  - ``free:<k>``    freely reduced word; generator ``i`` is ``i``, its inverse ``-i``
  - ``heis``        upper unitriangular matrix entries ``(a, b, c)``
  - ``lamp``        ``(sorted lit lamps, head position)``
  - ``product:A+B`` pair ``(g, h)``
  - ``canopy:<D>``  ``(i, j, k)``: node ``k`` at depth ``j`` of the tree hanging at ``x_i``
  - ``graph:<path>`` integer vertex id (labels are kept for display)

Graph contexts have no group law; they take part in metric and percolation
operations only.
"""

from __future__ import annotations

import logging
import threading
from abc import ABC, abstractmethod
from collections.abc import Iterable
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import networkx as nx

from pdim_lab.common_utils.rng import stable_key
from pdim_lab.core.errors import CapExceededError, UsageError
from pdim_lab.settings import get_settings

logger = logging.getLogger(__name__)

Element = Any


def _lex_key(obj: Element) -> Any:
    # positive before negative at equal magnitude: +1 sorts ahead of -1
    if isinstance(obj, int):
        return (abs(obj), obj < 0)
    return tuple(_lex_key(item) for item in obj)


class GroupContext(ABC):
    """A finitely generated group with a fixed symmetric generating set.

    Subclasses provide the group law; word lengths without a closed form come
    from a BFS sphere table shared by all callers and guarded by a lock.
    """

    kind: str = ""
    is_group: bool = True

    def __init__(self, identity: Element, generators: tuple[Element, ...]) -> None:
        self.identity = identity
        self.generators = generators
        self._lock = threading.Lock()
        self._spheres: list[tuple[Element, ...]] = [(identity,)]
        self._lengths: dict[Element, int] = {identity: 0}

    # -- group law ---------------------------------------------------------

    @abstractmethod
    def mul(self, g: Element, h: Element) -> Element: ...

    @abstractmethod
    def inv(self, g: Element) -> Element: ...

    @abstractmethod
    def contains(self, g: Element) -> bool:
        """True when ``g`` is a canonical element of this context."""

    @property
    @abstractmethod
    def spec(self) -> str:
        """The group specification string this context was built from."""

    @property
    def generator_names(self) -> tuple[str, ...]:
        return tuple(self.format_element(s) for s in self.generators)

    # -- metric ------------------------------------------------------------

    def word_length(self, g: Element) -> int:
        length = self._lengths.get(g)
        if length is not None:
            return length
        return self._bfs_length(g)

    def neighbours(self, g: Element) -> tuple[Element, ...]:
        return tuple(self.mul(g, s) for s in self.generators)

    def distance(self, g: Element, h: Element) -> int:
        """d(g, h) = |g^-1 h|."""
        return self.word_length(self.mul(self.inv(g), h))

    def order_key(self, g: Element) -> tuple[int, Any]:
        """Canonical total order: word length, then structure."""
        return self.word_length(g), _lex_key(g)

    def element_key(self, g: Element) -> int:
        return stable_key(g)

    def format_element(self, g: Element) -> str:
        if isinstance(g, tuple):
            return ",".join(str(x) for x in g)
        return str(g)

    @property
    def degree(self) -> int:
        return len(self.generators)

    # -- BFS sphere table --------------------------------------------------

    def spheres(self, n: int, cap: int | None = None) -> list[tuple[Element, ...]]:
        """Spheres S(0)..S(n) in deterministic BFS order."""
        if n < 0:
            raise UsageError(f"radius must be >= 0, got {n}")
        cap = get_settings().element_cap if cap is None else cap
        with self._lock:
            self._grow(n, cap)
            return self._spheres[: n + 1]

    def _grow(self, n: int, cap: int) -> None:
        total = sum(len(s) for s in self._spheres)
        if total > cap and len(self._spheres) <= n:
            raise CapExceededError(
                f"ball enumeration exceeds cap {cap}",
                cap=cap,
                partial=tuple(len(s) for s in self._spheres),
            )
        while len(self._spheres) <= n:
            radius = len(self._spheres)
            layer: list[Element] = []
            fresh: dict[Element, int] = {}
            for g in self._spheres[-1]:
                for w in self.neighbours(g):
                    if w not in self._lengths and w not in fresh:
                        fresh[w] = radius
                        layer.append(w)
            if total + len(layer) > cap:
                raise CapExceededError(
                    f"ball of radius {radius} exceeds cap {cap}",
                    cap=cap,
                    partial=tuple(len(s) for s in self._spheres) + (len(layer),),
                )
            if not layer:
                # finite component exhausted; empty spheres keep radii aligned
                self._spheres.append(())
                continue
            self._lengths.update(fresh)
            self._spheres.append(tuple(layer))
            total += len(layer)

    def _bfs_length(self, g: Element) -> int:
        cap = get_settings().element_cap
        with self._lock:
            while g not in self._lengths:
                before = len(self._spheres)
                self._grow(before, cap)
                if not self._spheres[-1]:
                    raise UsageError(f"{self.format_element(g)} is not reachable from the root")
            return self._lengths[g]


class LatticeGroup(GroupContext):
    """Z^d with the standard generators +-e_i."""

    kind = "zd"

    def __init__(self, d: int) -> None:
        if d < 1:
            raise UsageError(f"lattice dimension must be >= 1, got {d}")
        self.d = d
        gens: list[tuple[int, ...]] = []
        for i in range(d):
            for sign in (1, -1):
                gens.append(tuple(sign if j == i else 0 for j in range(d)))
        super().__init__((0,) * d, tuple(gens))

    @property
    def spec(self) -> str:
        return f"zd:{self.d}"

    def mul(self, g: Element, h: Element) -> Element:
        return tuple(a + b for a, b in zip(g, h))

    def inv(self, g: Element) -> Element:
        return tuple(-a for a in g)

    def contains(self, g: Element) -> bool:
        return (
            isinstance(g, tuple) and len(g) == self.d and all(isinstance(a, int) for a in g)
        )

    def word_length(self, g: Element) -> int:
        return sum(abs(a) for a in g)


class FreeGroup(GroupContext):
    """F_k on k free generators; words are reduced tuples of +-1..+-k."""

    kind = "free"
    _LETTERS = "abcdefghijklmnopqrstuvwxyz"

    @property
    def identity_literal(self) -> str:
        # "e" is a generator letter once k >= 5
        return "e" if self.k < 5 else "1"

    def __init__(self, k: int) -> None:
        if not 1 <= k <= len(self._LETTERS):
            raise UsageError(f"free group rank must be in 1..26, got {k}")
        self.k = k
        gens: list[tuple[int, ...]] = []
        for i in range(1, k + 1):
            gens.extend([(i,), (-i,)])
        super().__init__((), tuple(gens))

    @property
    def spec(self) -> str:
        return f"free:{self.k}"

    def mul(self, g: Element, h: Element) -> Element:
        i = 0
        n = min(len(g), len(h))
        while i < n and g[-1 - i] == -h[i]:
            i += 1
        return g[: len(g) - i] + h[i:]

    def inv(self, g: Element) -> Element:
        return tuple(-x for x in reversed(g))

    def contains(self, g: Element) -> bool:
        if not isinstance(g, tuple):
            return False
        for i, x in enumerate(g):
            if not isinstance(x, int) or x == 0 or abs(x) > self.k:
                return False
            if i and g[i - 1] == -x:
                return False
        return True

    def word_length(self, g: Element) -> int:
        return len(g)

    def format_element(self, g: Element) -> str:
        if not g:
            return self.identity_literal
        return "".join(
            self._LETTERS[x - 1] if x > 0 else self._LETTERS[-x - 1].upper() for x in g
        )


class HeisenbergGroup(GroupContext):
    """Discrete Heisenberg group H_3(Z) generated by x^{+-1}, y^{+-1}.

    (a, b, c) is the matrix [[1, a, c], [0, 1, b], [0, 0, 1]], i.e. x^a y^b z^(c - ab)
    with z = [x, y] central.
    """

    kind = "heis"

    def __init__(self) -> None:
        super().__init__((0, 0, 0), ((1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)))

    @property
    def spec(self) -> str:
        return "heis"

    def mul(self, g: Element, h: Element) -> Element:
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    def inv(self, g: Element) -> Element:
        return (-g[0], -g[1], -g[2] + g[0] * g[1])

    def contains(self, g: Element) -> bool:
        return isinstance(g, tuple) and len(g) == 3 and all(isinstance(a, int) for a in g)


class LamplighterGroup(GroupContext):
    """Z_2 wr Z with generators {lamp toggle, shift^{+-1}}."""

    kind = "lamp"

    def __init__(self) -> None:
        super().__init__(((), 0), (((0,), 0), ((), 1), ((), -1)))

    @property
    def spec(self) -> str:
        return "lamp"

    def mul(self, g: Element, h: Element) -> Element:
        lamps, head = g
        other, shift = h
        toggled = set(lamps)
        toggled.symmetric_difference_update(x + head for x in other)
        return tuple(sorted(toggled)), head + shift

    def inv(self, g: Element) -> Element:
        lamps, head = g
        return tuple(x - head for x in lamps), -head

    def contains(self, g: Element) -> bool:
        if not (isinstance(g, tuple) and len(g) == 2):
            return False
        lamps, head = g
        return (
            isinstance(head, int)
            and isinstance(lamps, tuple)
            and all(isinstance(x, int) for x in lamps)
            and list(lamps) == sorted(set(lamps))
        )

    def word_length(self, g: Element) -> int:
        lamps, head = g
        if not lamps:
            return abs(head)
        lo = min(lamps[0], 0, head)
        hi = max(lamps[-1], 0, head)
        tour = (hi - lo) + min(-lo + abs(hi - head), hi + abs(head - lo))
        return len(lamps) + tour

    def format_element(self, g: Element) -> str:
        lamps, head = g
        return ",".join(str(x) for x in lamps) + f"@{head}"


class ProductGroup(GroupContext):
    """Direct product G x H generated by S x {e} and {e} x T."""

    kind = "product"

    def __init__(self, left: GroupContext, right: GroupContext) -> None:
        if not (left.is_group and right.is_group):
            raise UsageError("products are only defined for group contexts")
        self.left = left
        self.right = right
        gens = tuple((s, right.identity) for s in left.generators) + tuple(
            (left.identity, t) for t in right.generators
        )
        super().__init__((left.identity, right.identity), gens)

    @property
    def spec(self) -> str:
        return f"product:{self.left.spec}+{self.right.spec}"

    def mul(self, g: Element, h: Element) -> Element:
        return self.left.mul(g[0], h[0]), self.right.mul(g[1], h[1])

    def inv(self, g: Element) -> Element:
        return self.left.inv(g[0]), self.right.inv(g[1])

    def contains(self, g: Element) -> bool:
        return (
            isinstance(g, tuple)
            and len(g) == 2
            and self.left.contains(g[0])
            and self.right.contains(g[1])
        )

    def word_length(self, g: Element) -> int:
        return self.left.word_length(g[0]) + self.right.word_length(g[1])

    def format_element(self, g: Element) -> str:
        return f"{self.left.format_element(g[0])}|{self.right.format_element(g[1])}"


class GraphContext(GroupContext):
    """A rooted, locally finite graph; the word metric is graph distance to the root."""

    is_group = False

    def __init__(self, root: Element) -> None:
        super().__init__(root, ())

    def mul(self, g: Element, h: Element) -> Element:
        raise UsageError(f"{self.spec} is a graph context and has no group law")

    def inv(self, g: Element) -> Element:
        raise UsageError(f"{self.spec} is a graph context and has no group law")

    @abstractmethod
    def neighbours(self, g: Element) -> tuple[Element, ...]: ...

    @property
    @abstractmethod
    def max_degree(self) -> int: ...

    @property
    def degree(self) -> int:
        return self.max_degree


class CanopyTree(GraphContext):
    """Path x_0..x_D with a binary tree of depth i hanging at x_i, built lazily."""

    kind = "canopy"

    def __init__(self, depth: int) -> None:
        if depth < 0:
            raise UsageError(f"canopy depth must be >= 0, got {depth}")
        self.depth = depth
        super().__init__((0, 0, 0))

    @property
    def spec(self) -> str:
        return f"canopy:{self.depth}"

    @property
    def max_degree(self) -> int:
        if self.depth >= 2:
            return 4
        return 3 if self.depth == 1 else 0

    def path_vertex(self, i: int) -> Element:
        return (i, 0, 0)

    def neighbours(self, g: Element) -> tuple[Element, ...]:
        i, j, k = g
        out: list[Element] = []
        if j == 0:
            if i > 0:
                out.append((i - 1, 0, 0))
            if i < self.depth:
                out.append((i + 1, 0, 0))
        else:
            out.append((i, j - 1, k // 2))
        if j < i:
            out.extend([(i, j + 1, 2 * k), (i, j + 1, 2 * k + 1)])
        return tuple(out)

    def contains(self, g: Element) -> bool:
        if not (isinstance(g, tuple) and len(g) == 3):
            return False
        i, j, k = g
        return 0 <= i <= self.depth and 0 <= j <= i and 0 <= k < (1 << j)

    def word_length(self, g: Element) -> int:
        return g[0] + g[1]

    def distance(self, g: Element, h: Element) -> int:
        (i, j, k), (i2, j2, k2) = g, h
        if i != i2:
            return j + abs(i - i2) + j2
        steps = 0
        while j > j2:
            k, j, steps = k // 2, j - 1, steps + 1
        while j2 > j:
            k2, j2, steps = k2 // 2, j2 - 1, steps + 1
        while k != k2:
            k, k2, steps = k // 2, k2 // 2, steps + 2
        return steps

    def format_element(self, g: Element) -> str:
        return ".".join(str(x) for x in g)


class EdgeListGraph(GraphContext):
    """Explicit finite graph; vertex 0 (the first one listed) is the root."""

    kind = "graph"

    def __init__(self, graph: nx.Graph, source: str = "<memory>") -> None:
        if graph.number_of_nodes() == 0:
            raise UsageError("edge list is empty")
        self.graph = nx.convert_node_labels_to_integers(graph, label_attribute="label")
        self.source = source
        self._adjacency = {v: tuple(sorted(self.graph.adj[v])) for v in self.graph.nodes}
        self._distances: dict[int, dict[int, int]] = {}
        super().__init__(0)

    @classmethod
    def from_file(cls, path: str | Path) -> EdgeListGraph:
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(path)
        graph = nx.Graph()
        for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise UsageError(f"{path}:{lineno}: expected 'u v', got {raw!r}")
            u, v = parts
            graph.add_node(u)
            graph.add_node(v)
            if u != v:
                graph.add_edge(u, v)
        return cls(graph, source=str(path))

    @property
    def spec(self) -> str:
        return f"graph:{self.source}"

    @property
    def max_degree(self) -> int:
        return max((len(a) for a in self._adjacency.values()), default=0)

    def neighbours(self, g: Element) -> tuple[Element, ...]:
        return self._adjacency[g]

    def distance(self, g: Element, h: Element) -> int:
        table = self._distances.get(h)
        if table is None:
            table = dict(nx.single_source_shortest_path_length(self.graph, h))
            self._distances[h] = table
        if g not in table:
            raise UsageError(
                f"{self.format_element(g)} and {self.format_element(h)} are not connected"
            )
        return table[g]

    def contains(self, g: Element) -> bool:
        return isinstance(g, int) and g in self._adjacency

    def format_element(self, g: Element) -> str:
        return str(self.graph.nodes[g]["label"])

    def vertex(self, label: str) -> int:
        for v, data in self.graph.nodes(data=True):
            if data["label"] == label:
                return v
        raise UsageError(f"unknown vertex label: {label}")


@dataclass(frozen=True)
class Ball:
    """B(n): elements sorted by word length (BFS order within a sphere)."""

    radius: int
    elements: tuple[Element, ...]
    sphere_sizes: tuple[int, ...]
    _members: frozenset[Element] = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_members", frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._members


def _check_member(ctx: GroupContext, *elements: Element) -> None:
    for g in elements:
        if not ctx.contains(g):
            raise UsageError(f"{g!r} is not an element of {ctx.spec}")


def mul(ctx: GroupContext, g: Element, h: Element) -> Element:
    """Canonical product g*h; both factors must belong to ``ctx``."""
    _check_member(ctx, g, h)
    return ctx.mul(g, h)


def inv(ctx: GroupContext, g: Element) -> Element:
    _check_member(ctx, g)
    return ctx.inv(g)


def word_length(ctx: GroupContext, g: Element) -> int:
    """|g| = d_X(g, e) in the context's Cayley graph (or rooted graph)."""
    _check_member(ctx, g)
    return ctx.word_length(g)


def ball(ctx: GroupContext, n: int, cap: int | None = None) -> Ball:
    """Exact enumeration of B(n).

    Raises:
        UsageError: If n < 0.
        CapExceededError: If |B(n)| exceeds the element cap; carries the partial sphere counts.
    """
    spheres = ctx.spheres(n, cap)
    elements = tuple(g for sphere in spheres for g in sphere)
    return Ball(radius=n, elements=elements, sphere_sizes=tuple(len(s) for s in spheres))


def annuli(
    ctx: GroupContext, M: int, i_max: int, cap: int | None = None
) -> list[tuple[Element, ...]]:
    """A_0 = B(M) and A_i = B(M 2^i) minus B(M 2^(i-1)) for 1 <= i <= i_max."""
    if M < 1:
        raise UsageError(f"M must be >= 1, got {M}")
    if i_max < 0:
        raise UsageError(f"i_max must be >= 0, got {i_max}")
    big = ball(ctx, M * 2**i_max, cap)
    out: list[list[Element]] = [[] for _ in range(i_max + 1)]
    for g in big.elements:
        out[annulus_index(ctx.word_length(g), M)].append(g)
    return [tuple(a) for a in out]


def annulus_index(length: int, M: int) -> int:
    """Index i of the annulus containing an element of word length ``length``."""
    i = 0
    while length > M * 2**i:
        i += 1
    return i


def sorted_elements(ctx: GroupContext, elements: Iterable[Element]) -> list[Element]:
    return sorted(elements, key=ctx.order_key)
