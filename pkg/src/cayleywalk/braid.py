"""Braid words, the reduced-word lift W -> Br, closures and component counts.

A braid word on n strands is a sequence of signed generator indices:
``i`` stands for sigma_i and ``-i`` for its inverse (1 <= i < n).  This is
also the JSON wire format, e.g. ``[1, -2, 4, 4, 6]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .cayley import CayleyGraph, reduced_word
from .errors import InvalidSpec
from .groups import Element, is_coxeter
from .polynomial import IntPolynomial, harmonic

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.strands < 2:
            raise InvalidSpec(f"a braid needs at least two strands, got {self.strands}")
        for x in self.letters:
            if isinstance(x, bool) or not isinstance(x, int) or not 1 <= abs(x) < self.strands:
                raise InvalidSpec(f"letter {x!r} out of range for {self.strands} strands")

    def __len__(self) -> int:
        return len(self.letters)

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise InvalidSpec("cannot concatenate braids on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def to_json(self) -> str:
        return json.dumps(list(self.letters))

    @classmethod
    def from_json(cls, text: str, strands: int | None = None) -> "BraidWord":
        try:
            letters = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidSpec(f"braid word is not a JSON list: {exc}") from None
        if not isinstance(letters, list):
            raise InvalidSpec("braid word must be a JSON list of nonzero integers")
        if strands is None:
            strands = max((abs(x) for x in letters), default=1) + 1
        return cls(strands, tuple(letters))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return " ".join(f"s{abs(x)}" + ("^-1" if x < 0 else "") for x in self.letters)


def lift_to_braid(graph: CayleyGraph, g: Element) -> BraidWord:
    """sigma_{i1} ... sigma_{ir} for the lex-min reduced word s_{i1} ... s_{ir} of g.

    For a product of Coxeter groups the indices run over all generators in
    their fixed order, so the result is a word in the Artin-Tits group.
    """
    if not is_coxeter(graph.group.spec):
        raise InvalidSpec(f"{graph.group.name} is not a Coxeter group")
    word = reduced_word(graph, g)
    return BraidWord(len(graph.group.generator_names) + 1, tuple(gen + 1 for gen, _ in word))


def free_reduce(b: BraidWord) -> BraidWord:
    stack: list[int] = []
    for x in b.letters:
        if stack and stack[-1] == -x:
            stack.pop()
        else:
            stack.append(x)
    return BraidWord(b.strands, tuple(stack))


def underlying_permutation(b: BraidWord) -> Permutation:
    """Product s_{i1} s_{i2} ... as functions, one-line notation on 1..n."""
    perm = list(range(1, b.strands + 1))
    for x in b.letters:
        i = abs(x) - 1
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
    return tuple(perm)


def compose_permutations(p: Sequence[int], q: Sequence[int]) -> Permutation:
    """(p o q)(i) = p(q(i))."""
    return tuple(p[x - 1] for x in q)


def cycle_count(perm: Sequence[int]) -> int:
    seen = [False] * len(perm)
    count = 0
    for start in range(len(perm)):
        if not seen[start]:
            count += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j] - 1
    return count


def closure_components(b: BraidWord) -> int:
    return cycle_count(underlying_permutation(b))


def inversion_count(perm: Sequence[int]) -> int:
    n = len(perm)
    return sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])


def cycle_count_polynomial(n: int) -> IntPolynomial:
    """sum over S_n of x^c(w) = x (x+1) ... (x+n-1)."""
    if n < 1:
        raise InvalidSpec(f"n must be >= 1, got {n}")
    poly = IntPolynomial.one()
    for k in range(n):
        poly = poly * IntPolynomial([k, 1])
    return poly


def component_limits(n: int) -> tuple[Fraction, Fraction]:
    """(even-step, odd-step) limits of E[c(closure)] for the walk on S_n.

    The even-step limit is H_n + (-1)^n / (n(n-1)).  This is the sign that
    direct enumeration gives (n = 2: the only even permutation is the
    identity, whose closure has 2 components); the opposite orientation
    is available as :func:`component_limits_stated` for comparison.
    """
    if n < 2:
        raise InvalidSpec(f"component_limits needs n >= 2, got {n}")
    corr = Fraction((-1) ** n, n * (n - 1))
    h = harmonic(n)
    return h + corr, h - corr


def component_limits_stated(n: int) -> tuple[Fraction, Fraction]:
    """Opposite sign orientation: even-step H_n - (-1)^n/(n(n-1)).

    Kept only to show it disagrees with enumeration; do not use for results.
    """
    even, odd = component_limits(n)
    return odd, even


def block_diagonal_compose(words: Iterable[BraidWord]) -> BraidWord:
    words = list(words)
    if not words:
        raise InvalidSpec("block_diagonal_compose needs at least one word")
    letters: list[int] = []
    shift = 0
    for w in words:
        letters.extend(x + shift if x > 0 else x - shift for x in w.letters)
        shift += w.strands
    return BraidWord(shift, tuple(letters))
