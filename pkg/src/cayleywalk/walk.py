"""Random walks X_0 = 1, X_{k+1} = X_k * sigma on a Cayley graph.

Only symmetric step distributions are accepted (weight of a letter equals
the weight of its inverse).  The right-multiplication kernel of any such
distribution is doubly stochastic, so the uniform law is stationary.
"""

from __future__ import annotations

import bisect
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .cayley import CayleyGraph, parity_sums
from .errors import InvalidSpec
from .groups import ConcreteGroup, Element, Letter, Presentation, has_odd_relator
from .rng import BatchXoshiro256, Xoshiro256, trial_seeds

DENSE_LIMIT = 5000
CHUNK = 16384


@dataclass(frozen=True)
class LimitValue:
    """Limit of E[f(X_n)]: one value, or separate even/odd-step limits."""

    even: Fraction
    odd: Fraction
    split: bool

    @classmethod
    def single(cls, value) -> "LimitValue":
        v = Fraction(value)
        return cls(v, v, False)

    @classmethod
    def parity_split(cls, even, odd) -> "LimitValue":
        return cls(Fraction(even), Fraction(odd), True)

    @property
    def value(self) -> Fraction:
        """The common limit; raises if even- and odd-step limits differ."""
        if self.even != self.odd:
            raise ValueError(f"no single limit: even {self.even}, odd {self.odd}")
        return self.even

    def at_step(self, n: int) -> Fraction:
        return self.odd if n % 2 else self.even

    def __str__(self) -> str:
        if self.even == self.odd:
            return format_fraction(self.even)
        return f"even={format_fraction(self.even)} odd={format_fraction(self.odd)}"


def format_fraction(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class StepDistribution:
    """Probability of each step letter plus a holding probability."""

    weights: tuple[tuple[Letter, Fraction], ...]
    hold: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if not 0 <= self.hold < 1:
            raise InvalidSpec(f"hold must lie in [0, 1), got {self.hold}")
        if any(w < 0 for _, w in self.weights):
            raise InvalidSpec("negative step weight")
        if self.hold + sum(w for _, w in self.weights) != 1:
            raise InvalidSpec("step weights and hold must sum to 1")
        table = dict(self.weights)
        for (gen, sign), w in self.weights:
            partner = table.get((gen, -sign))
            if partner is not None and partner != w:
                raise InvalidSpec(f"asymmetric weights for generator {gen}: {w} vs {partner}")

    @property
    def aperiodic(self) -> bool:
        return self.hold > 0

    def weight(self, letter: Letter) -> Fraction:
        return dict(self.weights).get(letter, Fraction(0))

    def check(self, group: ConcreteGroup) -> None:
        letters = set(group.letters())
        given = {letter for letter, _ in self.weights}
        if given != letters:
            raise InvalidSpec(f"weights must cover exactly the letters {sorted(letters)}")

    def probabilities(self, letters: Sequence[Letter]) -> list[Fraction]:
        """``[hold, p(letter_0), p(letter_1), ...]`` in the given letter order."""
        table = dict(self.weights)
        return [self.hold] + [table[letter] for letter in letters]


def uniform_step_distribution(group: ConcreteGroup, hold=0) -> StepDistribution:
    hold = Fraction(hold)
    letters = group.letters()
    w = (1 - hold) / len(letters)
    return StepDistribution(tuple((letter, w) for letter in letters), hold)


def weighted_step_distribution(
    group: ConcreteGroup, weights: Mapping[Letter, object], hold=0
) -> StepDistribution:
    """Normalize relative letter weights to total mass ``1 - hold``.

    Letters missing from ``weights`` get weight 0, which is only accepted
    when the inverse letter is missing (or zero) too.
    """
    hold = Fraction(hold)
    letters = group.letters()
    extra = set(weights) - set(letters)
    if extra:
        raise InvalidSpec(f"unknown letters {sorted(extra)}")
    raw = {letter: Fraction(weights.get(letter, 0)) for letter in letters}
    total = sum(raw.values())
    if total <= 0:
        raise InvalidSpec("at least one letter needs positive weight")
    dist = tuple((letter, raw[letter] * (1 - hold) / total) for letter in letters)
    return StepDistribution(dist, hold)


@dataclass
class WalkResult:
    steps: int
    seed: int
    samples: list
    visited: list[int] | None = None


def _cumulative(graph: CayleyGraph, dist: StepDistribution) -> np.ndarray:
    cum = np.cumsum([float(p) for p in dist.probabilities(graph.letters)])
    cum[-1] = 1.0
    return cum


def _extended_neighbors(graph: CayleyGraph) -> np.ndarray:
    # column 0 is "hold"
    ids = np.arange(len(graph), dtype=np.int64)[:, None]
    return np.hstack([ids, graph.neighbors])


def _check_parity(parity_locked: bool, graph: CayleyGraph, v, k: int) -> None:
    if parity_locked and np.any(graph.distance[v] % 2 != k % 2):
        raise AssertionError(f"walk left the parity class of step {k}")


def simulate(
    graph: CayleyGraph,
    dist: StepDistribution,
    steps: int,
    seed: int,
    f: Callable[[Element], object] | None = None,
    keep_visits: bool = True,
) -> WalkResult:
    """Run one trajectory of ``steps`` steps from the identity.

    Each step draws one uniform ``u`` and moves along letter ``k`` where
    ``k`` is the first index with ``u < cumsum([hold, p_0, p_1, ...])[k]``
    (index 0 means stay put).
    """
    if steps < 0:
        raise InvalidSpec("steps must be >= 0")
    dist.check(graph.group)
    cum = _cumulative(graph, dist).tolist()
    ext = _extended_neighbors(graph).tolist()
    parity_locked = graph.bipartite and dist.hold == 0
    dist_list = graph.distance.tolist()
    rng = Xoshiro256(seed)
    last = len(cum) - 1
    v = 0
    visited = [0]
    for k in range(1, steps + 1):
        idx = bisect.bisect_right(cum, rng.uniform())
        v = ext[v][min(idx, last)]
        if parity_locked and dist_list[v] % 2 != k % 2:
            raise AssertionError(f"walk left the parity class of step {k}")
        visited.append(v)
    if f is None:
        samples = list(visited)
    else:
        elements = graph.elements
        samples = [f(elements[i]) for i in visited]
    return WalkResult(steps, seed, samples, visited if keep_visits else None)


def _run_chunk(graph, cum, ext, seeds, steps, record, parity_locked):
    rng = BatchXoshiro256(seeds)
    state = np.zeros(len(seeds), dtype=np.int64)
    last = len(cum) - 1
    out = {}
    if 0 in record:
        out[0] = state.copy()
    for k in range(1, steps + 1):
        idx = np.minimum(np.searchsorted(cum, rng.uniform(), side="right"), last)
        state = ext[state, idx]
        if parity_locked:
            _check_parity(True, graph, state, k)
        if k in record:
            out[k] = state.copy()
    return out


def simulate_many(
    graph: CayleyGraph,
    dist: StepDistribution,
    steps: int,
    trials: int,
    seed: int,
    record: Iterable[int] | None = None,
    threads: int = 1,
) -> dict[int, np.ndarray]:
    """Final (or recorded) vertex of ``trials`` independent walks.

    Trial ``i`` is the trajectory ``simulate(..., seed=trial_seed(seed, i))``
    would produce.  Output does not depend on ``threads``.
    """
    if trials < 1:
        raise InvalidSpec("trials must be >= 1")
    if steps < 0:
        raise InvalidSpec("steps must be >= 0")
    dist.check(graph.group)
    record = {steps} if record is None else set(record)
    cum = _cumulative(graph, dist)
    ext = _extended_neighbors(graph)
    parity_locked = graph.bipartite and dist.hold == 0
    chunks = [trial_seeds(seed, lo, min(lo + CHUNK, trials)) for lo in range(0, trials, CHUNK)]
    job = lambda seeds: _run_chunk(graph, cum, ext, seeds, steps, record, parity_locked)
    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, chunks))
    else:
        parts = [job(c) for c in chunks]
    return {k: np.concatenate([p[k] for p in parts]) for k in sorted(record)}


def limiting_expectation(
    graph: CayleyGraph,
    presentation: Presentation,
    f: Callable[[Element], object],
    hold=0,
) -> LimitValue:
    """Exact limit of E[f(X_n)] by averaging f over G or over parity classes."""
    even, odd, total = parity_sums(graph, f)
    size = len(graph)
    if has_odd_relator(presentation) or Fraction(hold) > 0:
        return LimitValue.single(total / size)
    return LimitValue.parity_split(2 * even / size, 2 * odd / size)


def exact_transition_sums(graph: CayleyGraph, dist: StepDistribution) -> tuple[list, list]:
    """Row and column sums of the transition matrix in exact arithmetic."""
    probs = dist.probabilities(graph.letters)
    n = len(graph)
    rows = [probs[0]] * n
    cols = [probs[0]] * n
    for v, row in enumerate(graph.neighbors.tolist()):
        for w, p in zip(row, probs[1:]):
            rows[v] += p
            cols[w] += p
    return rows, cols


def transition_matrix(graph: CayleyGraph, dist: StepDistribution) -> np.ndarray:
    n = len(graph)
    if n > DENSE_LIMIT:
        raise InvalidSpec(f"dense transition matrix limited to {DENSE_LIMIT} vertices")
    probs = [float(p) for p in dist.probabilities(graph.letters)]
    mat = np.zeros((n, n))
    mat[np.arange(n), np.arange(n)] += probs[0]
    for k, p in enumerate(probs[1:]):
        np.add.at(mat, (np.arange(n), graph.neighbors[:, k]), p)
    return mat


def exact_law(graph: CayleyGraph, dist: StepDistribution, n_steps: int) -> np.ndarray:
    """Distribution of X_N started at the identity (float64)."""
    start = np.zeros(len(graph))
    start[0] = 1.0
    if len(graph) <= DENSE_LIMIT:
        return start @ np.linalg.matrix_power(transition_matrix(graph, dist), n_steps)
    probs = [float(p) for p in dist.probabilities(graph.letters)]
    law = start
    for _ in range(n_steps):
        nxt = probs[0] * law
        for k, p in enumerate(probs[1:]):
            nxt += p * np.bincount(graph.neighbors[:, k], weights=law, minlength=len(graph))
        law = nxt
    return law


def predicted_law(graph: CayleyGraph, dist: StepDistribution, n_steps: int) -> np.ndarray:
    """Limit law for step counts of the parity of ``n_steps``."""
    n = len(graph)
    if graph.bipartite and dist.hold == 0:
        mask = graph.distance % 2 == n_steps % 2
        return mask / mask.sum()
    return np.full(n, 1.0 / n)


def tv_distance(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p, dtype=float) - np.asarray(q, dtype=float)).sum())


@dataclass
class WalkRow:
    step: int
    parity: str
    empirical_mean: float
    std_error: float
    exact_limit: Fraction
    tv_distance: float
    trials: int
    exact_mean: float | None = None
    exact_tv: float | None = None


@dataclass
class WalkReport:
    group: str
    trials: int
    seed: int
    limit: LimitValue
    rows: list[WalkRow] = field(default_factory=list)

    CSV_HEADER = (
        "step",
        "parity",
        "empirical_mean",
        "exact_limit",
        "tv_distance",
        "std_error",
        "trials",
        "exact_mean",
        "exact_tv",
    )


def empirical_vs_limit(
    graph: CayleyGraph,
    dist: StepDistribution,
    f: Callable[[Element], object],
    steps: int,
    trials: int,
    seed: int,
    presentation: Presentation | None = None,
    threads: int = 1,
) -> WalkReport:
    """Monte Carlo E[f(X_N)] and law of X_N at N = steps-1, steps, steps+1."""
    if presentation is None:
        presentation = graph.group.presentation()
    limit = limiting_expectation(graph, presentation, f, dist.hold)
    values = np.array([float(Fraction(f(g))) for g in graph.elements])
    horizon = [n for n in (steps - 1, steps, steps + 1) if n >= 0]
    finals = simulate_many(graph, dist, max(horizon), trials, seed, horizon, threads)
    report = WalkReport(graph.group.name, trials, seed, limit)
    for n in horizon:
        states = finals[n]
        vals = values[states]
        mean = float(vals.mean())
        se = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.nan
        empirical = np.bincount(states, minlength=len(graph)) / trials
        target = predicted_law(graph, dist, n)
        row = WalkRow(
            step=n,
            parity="odd" if n % 2 else "even",
            empirical_mean=mean,
            std_error=se,
            exact_limit=limit.at_step(n),
            tv_distance=tv_distance(empirical, target),
            trials=trials,
        )
        if len(graph) <= DENSE_LIMIT:
            law = exact_law(graph, dist, n)
            row.exact_mean = float(law @ values)
            row.exact_tv = tv_distance(law, target)
        report.rows.append(row)
    return report
