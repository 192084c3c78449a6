"""Brute-force reference computations.

Nothing in here calls the closed forms it is used to check.
"""

from __future__ import annotations

import itertools
import math
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

from .cayley import build_cayley
from .groups import GroupSpec, build_group, presentation_of, has_odd_relator
from .walk import LimitValue


def kappa_inclusion_exclusion(n: int, j: int, k: int) -> int:
    """sum_m (-1)^m C(k, m) C(n - m j + k - 1, k - 1)."""
    if n < 0:
        return 0
    if k == 0:
        return 1 if n == 0 else 0
    total = 0
    for m in range(0, k + 1):
        top = n - m * j + k - 1
        if top < k - 1:
            break
        total += (-1) ** m * math.comb(k, m) * math.comb(top, k - 1)
    return total


def kappa_bruteforce(n: int, j: int, k: int) -> int:
    return sum(1 for t in itertools.product(range(j), repeat=k) if sum(t) == n)


def inversions(perm: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(perm, 2) if a > b)


def cycles(perm: Sequence[int]) -> int:
    """Cycle count of a one-line permutation of 1..n, fixed points included."""
    remaining = set(range(1, len(perm) + 1))
    count = 0
    while remaining:
        i = remaining.pop()
        count += 1
        j = perm[i - 1]
        while j != i:
            remaining.discard(j)
            j = perm[j - 1]
    return count


@lru_cache(maxsize=None)
def cyclic_length_histogram(n: int) -> np.ndarray:
    """Counts of each word length in Z_n, by BFS over residues with steps +1, -1."""
    dist = [-1] * n
    dist[0] = 0
    queue = deque([0])
    while queue:
        r = queue.popleft()
        for s in ((r + 1) % n, (r - 1) % n):
            if dist[s] < 0:
                dist[s] = dist[r] + 1
                queue.append(s)
    hist = np.bincount(dist).astype(np.int64)
    hist.setflags(write=False)
    return hist


def enumerated_limit_from_histogram(hist: Sequence[int], any_odd_relator: bool) -> LimitValue:
    """Average length over G (or over parity classes) from a length histogram."""
    hist = np.asarray(hist, dtype=np.int64)
    weighted = np.arange(len(hist), dtype=np.int64) * hist
    size = int(hist.sum())
    even = int(weighted[0::2].sum())
    odd = int(weighted[1::2].sum())
    if any_odd_relator:
        return LimitValue.single(Fraction(even + odd, size))
    return LimitValue.parity_split(Fraction(2 * even, size), Fraction(2 * odd, size))


def modulus_lists(max_product: int, min_len: int = 2) -> Iterator[tuple[int, ...]]:
    """Non-decreasing lists of integers > 1 with product <= max_product."""

    def rec(prefix: tuple[int, ...], lo: int, room: int):
        if len(prefix) >= min_len:
            yield prefix
        d = lo
        while d <= room:
            yield from rec(prefix + (d,), d, room // d)
            d += 1

    yield from rec((), 2, max_product)


def cyclic_product_histograms(max_product: int) -> Iterator[tuple[tuple[int, ...], np.ndarray]]:
    """(moduli, length histogram of the product) for every list in ``modulus_lists``.

    Product histograms are built by convolving factor histograms, which
    relies on word length adding across commuting factors; that step is
    checked separately by full BFS on the smaller products.
    """

    def rec(prefix, lo, room, hist):
        if len(prefix) >= 2:
            yield prefix, hist
        d = lo
        while d <= room:
            yield from rec(prefix + (d,), d, room // d, np.convolve(hist, cyclic_length_histogram(d)))
            d += 1

    yield from rec((), 2, max_product, np.array([1], dtype=np.int64))


def bfs_cyclic_product_limit(moduli: Sequence[int]) -> LimitValue:
    """Limit from a full Cayley-graph BFS of Z_{n1} x ... x Z_{nk}."""
    spec = GroupSpec.cyclic_product(moduli)
    graph = build_cayley(build_group(spec))
    return enumerated_limit_from_histogram(graph.length_counts(), has_odd_relator(presentation_of(spec)))


def all_permutations(n: int) -> Iterator[tuple[int, ...]]:
    return itertools.permutations(range(1, n + 1))
