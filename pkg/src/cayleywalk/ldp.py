"""Large deviations of L_N, the total length of N i.i.d. even permutations.

Two laws for L_N are computed exactly:

``composition``
    counts length tuples, Pr(L_N = 2s) = kappa(s, M+1, N) * (2/n!)^N, as if
    every even length 0, 2, ..., 2M were attained by exactly one element.
``true_length``
    the actual law: N-fold convolution of the even-length histogram of S_n
    normalized by n!/2.

They disagree already for n = 3, N = 2 (log 2/9 against log 4/9).  Both are
reported side by side; nothing here decides which one is meant.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .cayley import build_cayley
from .errors import CapExceeded, DomainError, InvalidSpec
from .groups import GroupSpec, build_group
from .limits import poincare_polynomial

HISTOGRAM_MAX_N = 9


class Model(str, enum.Enum):
    COMPOSITION = "composition"
    TRUE_LENGTH = "true_length"


def max_half_length(n: int) -> int:
    """M = floor(n(n-1)/4)."""
    return n * (n - 1) // 4


def _window_power(kernel: Sequence[int], k: int, top: int) -> list[int]:
    """Coefficients 0..top of (sum_i kernel[i] t^i)^k, by k sequential convolutions."""
    poly = [1] + [0] * top
    for _ in range(k):
        nxt = [0] * (top + 1)
        for i, c in enumerate(kernel):
            if not c:
                continue
            for t in range(i, top + 1):
                a = poly[t - i]
                if a:
                    nxt[t] += c * a
        poly = nxt
    return poly


def kappa_exact(n: int, j: int, k: int) -> int:
    """Number of (x_1..x_k) with 0 <= x_i < j and sum n."""
    if j < 1:
        raise InvalidSpec(f"j must be >= 1, got {j}")
    if n < 0 or k < 0:
        return 0
    if n > k * (j - 1):
        return 0
    # row[t] after step i counts i-tuples summing to t; sliding window of width j
    row = [1] + [0] * n
    for _ in range(k):
        prefix = 0
        nxt = [0] * (n + 1)
        for t in range(n + 1):
            prefix += row[t]
            if t >= j:
                prefix -= row[t - j]
            nxt[t] = prefix
        row = nxt
    return row[n]


def kappa_asymptotic(x: float, M: int, N: int) -> float:
    """Natural log of the restricted-composition asymptotic for kappa(Nx, M+1, N)."""
    if not 0 < x < M:
        raise DomainError(f"asymptotic needs 0 < x < M = {M}, got x = {x}")
    a = M + 1 - x
    b = M - x
    return (
        -0.5 * math.log(2 * math.pi * N)
        + (N * a + 0.5) * math.log(a)
        - (N * b + 1.5) * math.log(b)
        - N * (b / a) ** (M + 1)
    )


def _xlogx(v: float) -> float:
    return 0.0 if v == 0 else v * math.log(v)


def rate_I(x, n: int) -> float:
    """Rate function as displayed: +inf outside [0, M], 0 log 0 taken as 0."""
    if n < 3:
        raise InvalidSpec(f"rate_I needs n >= 3, got {n}")
    M = max_half_length(n)
    if not 0 <= x <= M:
        return math.inf
    if isinstance(x, (int, Fraction)):
        a = M + 1 - Fraction(x)
        first = float((1 - 1 / a) ** (M + 1))
    else:
        a = M + 1 - x
        first = (1 - 1 / a) ** (M + 1)
    b = a - 1
    return first + _xlogx(float(b)) - _xlogx(float(a)) + math.log(math.factorial(n) // 2)


@lru_cache(maxsize=None)
def _histogram_from_graph(n: int) -> tuple[int, ...]:
    graph = build_cayley(build_group(GroupSpec.coxeter_a(n - 1)))
    counts = graph.length_counts()
    return tuple(c if k % 2 == 0 else 0 for k, c in enumerate(counts))


def even_length_histogram(n: int, max_n: int = HISTOGRAM_MAX_N) -> dict[int, int]:
    """{length: count} over even-length permutations of S_n.

    Computed from the Cayley graph of A_{n-1} and from the even coefficients
    of its Poincare polynomial; the two must agree.
    """
    if n < 2:
        raise InvalidSpec(f"n must be >= 2, got {n}")
    if n > max_n:
        raise CapExceeded(f"n = {n} exceeds histogram cap {max_n}")
    from_graph = _histogram_from_graph(n)
    poly = poincare_polynomial(range(2, n + 1)).coeffs
    from_poly = tuple(c if k % 2 == 0 else 0 for k, c in enumerate(poly))
    if from_graph != from_poly:
        raise AssertionError(f"length histogram mismatch for n = {n}")
    return {k: c for k, c in enumerate(from_graph) if c}


def _half_kernel(n: int) -> list[int]:
    """Histogram indexed by length / 2."""
    hist = even_length_histogram(n)
    top = max(hist) // 2
    return [hist.get(2 * s, 0) for s in range(top + 1)]


def exact_probability(model: Model | str, N: int, target: int, n: int) -> Fraction:
    model = Model(model)
    if target % 2:
        raise InvalidSpec(f"target must be even, got {target}")
    if N < 0:
        raise InvalidSpec("N must be >= 0")
    half = target // 2
    if half < 0:
        return Fraction(0)
    if model is Model.COMPOSITION:
        M = max_half_length(n)
        return kappa_exact(half, M + 1, N) * Fraction(2, math.factorial(n)) ** N
    kernel = _half_kernel(n)
    if half > N * (len(kernel) - 1):
        return Fraction(0)
    count = _window_power(kernel, N, half)[half]
    return Fraction(count, (math.factorial(n) // 2) ** N)


def exact_logprob(model: Model | str, N: int, target: int, n: int) -> float:
    p = exact_probability(model, N, target, n)
    if p == 0:
        return -math.inf
    return math.log(p.numerator) - math.log(p.denominator)


def true_length_distribution(n: int, N: int) -> dict[int, Fraction]:
    """Full law of L_N under the true-length model, keyed by even target."""
    kernel = _half_kernel(n)
    top = N * (len(kernel) - 1)
    counts = _window_power(kernel, N, top)
    denom = (math.factorial(n) // 2) ** N
    return {2 * s: Fraction(c, denom) for s, c in enumerate(counts) if c}


@dataclass
class ReportRow:
    n: int
    N: int
    x: Fraction
    model: str
    log_prob: float
    neg_log_prob_over_N: float
    I_x: float
    kappa_asymptotic_log: float | None
    delta: float | None = None

    CSV_HEADER = (
        "n",
        "N",
        "x",
        "model",
        "log_prob",
        "neg_log_prob_over_N",
        "I_x",
        "kappa_asymptotic_log",
        "delta",
    )


def _report_cell(args: tuple[int, Fraction, int, str]) -> ReportRow:
    n, x, N, model = args
    M = max_half_length(n)
    target = 2 * N * x
    if target.denominator != 1:
        raise InvalidSpec(f"N * x must be an integer (N = {N}, x = {x})")
    logp = exact_logprob(model, N, int(target), n)
    try:
        asym = kappa_asymptotic(float(x), M, N)
    except DomainError:
        asym = None
    return ReportRow(n, N, x, model, logp, -logp / N, rate_I(x, n), asym)


def rate_convergence_report(
    n: int, x, N_list: Iterable[int], workers: int = 1
) -> list[ReportRow]:
    """Both models' -log Pr(L_N = 2Nx)/N for each N, next to I(x).

    ``delta`` is the change in ``neg_log_prob_over_N`` from the previous N
    of the same model.  Nothing is asserted about convergence here.
    """
    x = Fraction(x)
    N_list = list(N_list)
    cells = [(n, x, N, m.value) for N in N_list for m in Model]
    if workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_report_cell, cells))
    else:
        rows = [_report_cell(c) for c in cells]
    previous: dict[str, float] = {}
    for row in rows:
        if row.model in previous:
            row.delta = row.neg_log_prob_over_N - previous[row.model]
        previous[row.model] = row.neg_log_prob_over_N
    return rows
