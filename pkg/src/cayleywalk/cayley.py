"""Cayley graph enumeration, word length and reduced words."""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Callable, Iterable, TextIO

import numpy as np

from .errors import CapExceeded, UnknownElement
from .groups import DEFAULT_CAP, ConcreteGroup, Element, Letter, Word


class CayleyGraph:
    """Right Cayley graph of a finite group with BFS data from the identity.

    Vertex 0 is the identity.  ``neighbors[v, k]`` is the vertex reached from
    ``v`` by the k-th letter of ``letters`` (generator order, sign +1 before
    -1, inverse letters omitted for involutions).
    """

    def __init__(
        self,
        group: ConcreteGroup,
        elements: list[Element],
        index_of: dict[Element, int],
        letters: list[Letter],
        neighbors: np.ndarray,
        distance: np.ndarray,
        parent: list[tuple[int, Letter] | None],
    ) -> None:
        self.group = group
        self.elements = elements
        self.index_of = index_of
        self.letters = letters
        self.neighbors = neighbors
        self.distance = distance
        self.parent = parent
        src = np.repeat(distance, neighbors.shape[1]) if len(letters) else distance[:0]
        dst = distance[neighbors.ravel()] if len(letters) else distance[:0]
        self.bipartite = bool(np.all((src - dst) % 2 == 1))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def adjacency(self) -> list[list[tuple[int, Letter]]]:
        return [
            [(int(w), letter) for w, letter in zip(row, self.letters)] for row in self.neighbors
        ]

    @property
    def diameter(self) -> int:
        return int(self.distance.max())

    def index(self, g: Element) -> int:
        try:
            return self.index_of[g]
        except KeyError:
            raise UnknownElement(g) from None

    def length_counts(self) -> list[int]:
        """Number of elements of each length 0..diameter."""
        return np.bincount(self.distance).tolist()

    def parity_classes(self) -> tuple[np.ndarray, np.ndarray]:
        even = self.distance % 2 == 0
        return np.flatnonzero(even), np.flatnonzero(~even)

    def __repr__(self) -> str:
        return f"<CayleyGraph {self.group.name} |V|={len(self)} bipartite={self.bipartite}>"


def build_cayley(group: ConcreteGroup, cap: int = DEFAULT_CAP) -> CayleyGraph:
    if group.order() > cap:
        raise CapExceeded(f"{group.name} has order {group.order()} > cap {cap}")
    letters = group.letters()
    identity = group.identity()
    elements: list[Element] = [identity]
    index_of: dict[Element, int] = {identity: 0}
    dist = [0]
    parent: list[tuple[int, Letter] | None] = [None]
    rows: list[list[int]] = []
    queue = deque([0])
    apply = group.apply
    while queue:
        v = queue.popleft()
        g = elements[v]
        row = []
        for letter in letters:
            h = apply(g, letter)
            w = index_of.get(h)
            if w is None:
                w = len(elements)
                index_of[h] = w
                elements.append(h)
                dist.append(dist[v] + 1)
                parent.append((v, letter))
                queue.append(w)
            row.append(w)
        rows.append(row)
    # rows were appended in BFS order, which equals vertex index order
    neighbors = np.array(rows, dtype=np.int64).reshape(len(elements), len(letters))
    return CayleyGraph(
        group, elements, index_of, letters, neighbors, np.array(dist, dtype=np.int64), parent
    )


def length_of(graph: CayleyGraph, g: Element) -> int:
    return int(graph.distance[graph.index(g)])


def reduced_word(graph: CayleyGraph, g: Element) -> Word:
    """Lexicographically smallest reduced expression for ``g``."""
    v = graph.index(g)
    out: list[Letter] = []
    while graph.parent[v] is not None:
        v, letter = graph.parent[v]
        out.append(letter)
    out.reverse()
    return tuple(out)


def is_bipartite(graph: CayleyGraph) -> bool:
    return graph.bipartite


def parity_sums(
    graph: CayleyGraph, f: Callable[[Element], object]
) -> tuple[Fraction, Fraction, Fraction]:
    """Exact sums of ``f`` over even-length, odd-length and all elements."""
    even = odd = Fraction(0)
    for g, d in zip(graph.elements, graph.distance.tolist()):
        val = Fraction(f(g))
        if d % 2:
            odd += val
        else:
            even += val
    return even, odd, even + odd


def length_function(graph: CayleyGraph) -> Callable[[Element], int]:
    """``f = l`` as a callable on elements, for use with ``parity_sums`` etc."""
    dist = graph.distance
    index_of = graph.index_of
    return lambda g: int(dist[index_of[g]])


def dump_edges(graph: CayleyGraph, out: TextIO) -> None:
    """Write ``u v gen sign`` lines (1-based generators) and a ``# distances`` block."""
    out.write(f"# cayley graph {graph.group.name} vertices={len(graph)}\n")
    for u, row in enumerate(graph.neighbors.tolist()):
        for w, (gen, sign) in zip(row, graph.letters):
            out.write(f"{u} {w} {gen + 1} {sign}\n")
    out.write("# distances\n")
    for v, d in enumerate(graph.distance.tolist()):
        out.write(f"{v} {d}\n")


def read_distances(lines: Iterable[str]) -> list[int]:
    """Parse the ``# distances`` block written by :func:`dump_edges`."""
    dist: list[int] = []
    in_block = False
    for line in lines:
        line = line.strip()
        if line == "# distances":
            in_block = True
            continue
        if in_block and line and not line.startswith("#"):
            v, d = line.split()
            assert int(v) == len(dist)
            dist.append(int(d))
    return dist
