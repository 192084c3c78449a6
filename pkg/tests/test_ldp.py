import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cayleywalk.errors import CapExceeded, DomainError, InvalidSpec
from cayleywalk.ldp import (
    Model,
    ReportRow,
    even_length_histogram,
    exact_logprob,
    exact_probability,
    kappa_asymptotic,
    kappa_exact,
    max_half_length,
    rate_I,
    rate_convergence_report,
    true_length_distribution,
)
from cayleywalk.oracles import all_permutations, inversions, kappa_bruteforce, kappa_inclusion_exclusion
from cayleywalk.rng import BatchXoshiro256, trial_seeds


def test_kappa_examples():
    for j in range(1, 6):
        for k in range(0, 6):
            assert kappa_exact(0, j, k) == 1
    assert kappa_exact(2, 2, 3) == 3
    assert kappa_exact(3, 3, 2) == 2
    assert kappa_exact(1, 2, 2) == 2
    assert kappa_exact(5, 1, 3) == 0
    with pytest.raises(InvalidSpec):
        kappa_exact(1, 0, 1)


def test_kappa_matches_inclusion_exclusion_grid():
    for j in range(1, 9):
        for k in range(0, 13):
            for n in range(0, 61):
                assert kappa_exact(n, j, k) == kappa_inclusion_exclusion(n, j, k), (n, j, k)


@given(n=st.integers(0, 20), j=st.integers(1, 5), k=st.integers(0, 6))
def test_kappa_matches_bruteforce(n, j, k):
    assert kappa_exact(n, j, k) == kappa_bruteforce(n, j, k)


@given(j=st.integers(1, 8), k=st.integers(0, 12))
def test_kappa_row_sums(j, k):
    assert sum(kappa_exact(n, j, k) for n in range(k * (j - 1) + 1)) == j**k


def test_kappa_big_integers():
    # exact beyond float range
    assert kappa_exact(300, 4, 200) == kappa_inclusion_exclusion(300, 4, 200)
    assert kappa_exact(300, 4, 200).bit_length() > 53


def test_kappa_asymptotic():
    for x, M, N in ((0.5, 1, 100), (1.5, 3, 200), (0.3, 2, 1)):
        a, b = mpmath.mpf(M + 1 - x), mpmath.mpf(M - x)
        with mpmath.workprec(80):
            ref = mpmath.log(
                a ** (N * a + 0.5) / b ** (N * b + 1.5) * mpmath.exp(-N * (b / a) ** (M + 1)) / mpmath.sqrt(2 * mpmath.pi * N)
            )
        assert kappa_asymptotic(x, M, N) == pytest.approx(float(ref), rel=1e-12)
    # the asymptotic is compared against the exact count in reports only
    assert math.isfinite(math.log(kappa_exact(50, 2, 100)))
    assert math.isfinite(kappa_asymptotic(0.3, 2, 1))
    for x in (0, 1):
        with pytest.raises(DomainError):
            kappa_asymptotic(x, 1, 10)


def test_rate_examples():
    assert rate_I(-1, 4) == math.inf
    assert rate_I(Fraction(7, 2), 4) == math.inf
    for n in range(3, 9):
        assert rate_I(max_half_length(n), n) == pytest.approx(math.log(math.factorial(n) / 2), abs=1e-12)
    assert rate_I(0, 3) == pytest.approx(0.25 - 2 * math.log(2) + math.log(3), abs=1e-14)
    assert rate_I(0, 3) < 0
    with pytest.raises(InvalidSpec):
        rate_I(0, 2)


def rate_reference(x: Fraction, n: int):
    """The displayed formula with the rational part exact and logs at 80 bits."""
    M = n * (n - 1) // 4
    a = M + 1 - x
    b = M - x
    first = (1 - 1 / a) ** (M + 1)
    with mpmath.workprec(80):
        xlogx = lambda v: mpmath.mpf(0) if v == 0 else mpmath.mpf(v.numerator) / v.denominator * mpmath.log(
            mpmath.mpf(v.numerator) / v.denominator
        )
        return (
            mpmath.mpf(first.numerator) / first.denominator
            + xlogx(b)
            - xlogx(a)
            + mpmath.log(math.factorial(n) // 2)
        )


@pytest.mark.parametrize("x,n", [(Fraction(1, 3), 3), (Fraction(3, 2), 4), (Fraction(7, 5), 5)])
def test_rate_matches_high_precision(x, n):
    assert abs(rate_I(x, n) - float(rate_reference(x, n))) < 1e-13


def test_rate_at_M_matches_reference():
    for n in (3, 4, 6):
        M = max_half_length(n)
        assert abs(rate_I(M, n) - float(rate_reference(Fraction(M), n))) < 1e-13


def test_histogram_examples():
    assert even_length_histogram(3) == {0: 1, 2: 2}
    assert even_length_histogram(4) == {0: 1, 2: 5, 4: 5, 6: 1}
    assert even_length_histogram(2) == {0: 1}
    with pytest.raises(CapExceeded):
        even_length_histogram(10)
    with pytest.raises(InvalidSpec):
        even_length_histogram(1)


@pytest.mark.parametrize("n", range(2, 8))
def test_histogram_matches_inversion_oracle(n):
    counts = {}
    for p in all_permutations(n):
        inv = inversions(p)
        if inv % 2 == 0:
            counts[inv] = counts.get(inv, 0) + 1
    hist = even_length_histogram(n)
    assert hist == counts
    assert sum(hist.values()) == math.factorial(n) // 2


def test_logprob_examples():
    assert exact_logprob(Model.TRUE_LENGTH, 1, 0, 3) == pytest.approx(math.log(1 / 3))
    assert exact_logprob(Model.TRUE_LENGTH, 2, 2, 3) == pytest.approx(math.log(4 / 9))
    assert exact_logprob(Model.COMPOSITION, 2, 2, 3) == pytest.approx(math.log(2 / 9))
    assert exact_probability("true_length", 2, 2, 3) == Fraction(4, 9)
    assert exact_probability("composition", 2, 2, 3) == Fraction(2, 9)
    assert exact_logprob(Model.TRUE_LENGTH, 2, 100, 3) == -math.inf
    with pytest.raises(InvalidSpec):
        exact_logprob(Model.TRUE_LENGTH, 2, 3, 3)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("N", range(0, 9))
def test_true_length_law_sums_to_one(n, N):
    law = true_length_distribution(n, N)
    assert sum(law.values()) == 1
    for target, p in law.items():
        assert exact_probability(Model.TRUE_LENGTH, N, target, n) == p


@pytest.mark.parametrize("n", range(2, 8))
def test_true_length_law_at_one_step_is_histogram(n):
    hist = even_length_histogram(n)
    half = Fraction(1, math.factorial(n) // 2)
    assert true_length_distribution(n, 1) == {k: c * half for k, c in hist.items()}


def test_true_length_monte_carlo():
    n, N, samples = 4, 5, 10**6
    hist = even_length_histogram(n)
    lengths = np.repeat(list(hist.keys()), list(hist.values()))
    rng = BatchXoshiro256(trial_seeds(424242, 0, samples))
    total = np.zeros(samples, dtype=np.int64)
    for _ in range(N):
        idx = np.minimum((rng.uniform() * len(lengths)).astype(np.int64), len(lengths) - 1)
        total += lengths[idx]
    counts = np.bincount(total)
    for target, p in true_length_distribution(n, N).items():
        if p < Fraction(1, 1000):
            continue
        p = float(p)
        freq = counts[target] / samples if target < len(counts) else 0.0
        sigma = math.sqrt(p * (1 - p) / samples)
        assert abs(freq - p) < 5 * sigma, (target, freq, p)


def test_report_examples():
    rows = rate_convergence_report(3, 1, [10, 100, 1000])
    true = [r for r in rows if r.model == "true_length"]
    for r in true:
        assert r.neg_log_prob_over_N == pytest.approx(math.log(1.5), rel=1e-12)
    rows = rate_convergence_report(3, 0, [5, 50])
    for r in rows:
        assert r.neg_log_prob_over_N == pytest.approx(math.log(3), rel=1e-12)
        assert r.kappa_asymptotic_log is None
    assert rows[0].delta is None and rows[2].delta == pytest.approx(0, abs=1e-12)
    with pytest.raises(InvalidSpec):
        rate_convergence_report(4, Fraction(1, 3), [2])
    assert ReportRow.CSV_HEADER[:8] == (
        "n", "N", "x", "model", "log_prob", "neg_log_prob_over_N", "I_x", "kappa_asymptotic_log",
    )


def test_report_parallel_matches_serial():
    serial = rate_convergence_report(4, Fraction(3, 2), [2, 4, 8])
    parallel = rate_convergence_report(4, Fraction(3, 2), [2, 4, 8], workers=2)
    assert serial == parallel


def test_models_disagree():
    # same tuple count, different weights
    for N in (2, 3, 4):
        assert exact_probability(Model.COMPOSITION, N, 2, 3) != exact_probability(Model.TRUE_LENGTH, N, 2, 3)
