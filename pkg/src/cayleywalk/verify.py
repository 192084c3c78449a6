"""Exit checks: every closed form against an independent brute-force route.

Each check returns ``(ok, detail)``; :func:`run_all` times them and the
``verify`` CLI subcommand prints one line per check.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import braid, ldp, limits, oracles
from .cayley import build_cayley, length_function, length_of, reduced_word
from .groups import GroupSpec, build_group, presentation_of
from .polynomial import harmonic
from .walk import (
    empirical_vs_limit,
    exact_law,
    limiting_expectation,
    predicted_law,
    tv_distance,
    uniform_step_distribution,
)

DEFAULT_SEED = 20240229

POINCARE_TYPES = (
    ["A1", "A2", "A3", "A4", "A5", "B2", "B3", "B4", "D4"]
    + [f"I2({m})" for m in range(3, 13)]
)


@dataclass
class CheckResult:
    key: str
    claim: str
    ok: bool
    detail: str
    seconds: float


def _graph(spec: GroupSpec):
    return build_cayley(build_group(spec))


def check_cyclic_limits() -> tuple[bool, str]:
    bad = []
    for m in range(2, 65):
        spec = GroupSpec.cyclic(m)
        g = _graph(spec)
        got = limiting_expectation(g, presentation_of(spec), length_function(g))
        if got != limits.cyclic_limit(m):
            bad.append(m)
    return not bad, f"m = 2..64, mismatches: {bad}" if bad else "m = 2..64 exact"


def check_cyclic_products(max_product: int = 4096, bfs_max_product: int = 512) -> tuple[bool, str]:
    bad = []
    count = 0
    for moduli, hist in oracles.cyclic_product_histograms(max_product):
        count += 1
        enum = oracles.enumerated_limit_from_histogram(hist, any(q % 2 for q in moduli))
        if not enum.even == enum.odd == limits.cyclic_product_limit(moduli):
            bad.append(moduli)
    bfs_count = 0
    for moduli in oracles.modulus_lists(bfs_max_product):
        bfs_count += 1
        enum = oracles.bfs_cyclic_product_limit(moduli)
        if not enum.even == enum.odd == limits.cyclic_product_limit(moduli):
            bad.append(moduli)
    return not bad, (
        f"{count} lists (product <= {max_product}) by histogram convolution, "
        f"{bfs_count} (product <= {bfs_max_product}) by full BFS; mismatches: {bad[:5]}"
    )


def check_poincare() -> tuple[bool, str]:
    bad = []
    for t in POINCARE_TYPES:
        degrees = limits.degrees_of(t)
        poly = limits.poincare_polynomial(degrees)
        g = _graph(limits.coxeter_group_spec(t))
        ok = (
            list(poly.coeffs) == g.length_counts()
            and poly(1) == len(g) == limits.group_order(degrees)
            and poly.degree == limits.reflection_number(degrees) == g.diameter
            and poly.is_palindromic()
        )
        if not ok:
            bad.append(t)
    return not bad, f"{len(POINCARE_TYPES)} types; mismatches: {bad}"


def check_coxeter_limits() -> tuple[bool, str]:
    bad = []
    for t in POINCARE_TYPES:
        spec = limits.coxeter_group_spec(t)
        g = _graph(spec)
        enum = limiting_expectation(g, presentation_of(spec), length_function(g))
        closed = limits.coxeter_limit(t)
        if enum != closed:
            bad.append(t)
            continue
        fam, param = limits.parse_coxeter_type(t)[0]
        odd_dihedral = (fam == "I2" and param % 2) or t == "A2"
        if t == "A1":
            expected = (Fraction(0), Fraction(1))
        elif odd_dihedral:
            m = 3 if t == "A2" else param
            expected = (Fraction(m, 2) - Fraction(1, 2 * m), Fraction(m, 2) + Fraction(1, 2 * m))
        else:
            half = Fraction(limits.reflection_number(limits.degrees_of(t)), 2)
            expected = (half, half)
        if (closed.even, closed.odd) != expected:
            bad.append(t)
    exceptional_ms = [3, 5, 7, 9, 11]
    for m in exceptional_ms:
        v = limits.coxeter_limit(f"I2({m})")
        if (v.even, v.odd) != (Fraction(m, 2) - Fraction(1, 2 * m), Fraction(m, 2) + Fraction(1, 2 * m)):
            bad.append(f"I2({m})")
    return not bad, f"{len(POINCARE_TYPES)} types vs enumeration, I2(m) m={exceptional_ms}; mismatches: {bad}"


def table_rows(max_rank: int = 12, max_m: int = 30) -> list[str]:
    rows = [f"A{n}" for n in range(1, max_rank + 1)]
    rows += [f"B{n}" for n in range(2, max_rank + 1)]
    rows += [f"D{n}" for n in range(4, max_rank + 1)]
    rows += ["E6", "E7", "E8", "F4", "G2", "H3", "H4"]
    rows += [f"I2({m})" for m in range(3, max_m + 1)]
    return rows


def check_table_identities() -> tuple[bool, str]:
    bad = []
    rows = table_rows()
    for t in rows:
        d = limits.degrees_of(t)
        total, signed = limits.length_sums(d)
        order = limits.group_order(d)
        ref = limits.reflection_number(d)
        if 2 * total != order * ref:
            bad.append(t)
        if sum(1 for x in d if x % 2 == 0) >= 2 and signed != 0:
            bad.append(t)
    e8 = limits.degrees_of("E8")
    return not bad, (
        f"{len(rows)} rows; |W(E8)| = {limits.group_order(e8)}, "
        f"P'(1) = {limits.length_sums(e8)[0]}; failures: {bad}"
    )


def check_components(max_n: int = 7) -> tuple[bool, str]:
    bad = []
    for n in range(2, max_n + 1):
        g = _graph(GroupSpec.coxeter_a(n - 1))
        c = [oracles.cycles(p) for p in g.elements]
        lengths = g.distance.tolist()
        even = [ci for ci, l in zip(c, lengths) if l % 2 == 0]
        odd = [ci for ci, l in zip(c, lengths) if l % 2 == 1]
        enum = (Fraction(sum(even), len(even)), Fraction(sum(odd), len(odd)))
        corr = Fraction((-1) ** n, n * (n - 1))
        h = harmonic(n)
        fact = math.factorial(n)
        ok = (
            enum == braid.component_limits(n)
            and enum == (h + corr, h - corr)
            and sum(c) == fact * h
            and braid.cycle_count_polynomial(n).derivative()(1) == sum(c)
            and sum(ci * (-1) ** l for ci, l in zip(c, lengths)) == (-1) ** n * math.factorial(n - 2)
            and all((l - (n - ci)) % 2 == 0 for ci, l in zip(c, lengths))
            # the opposite sign orientation must disagree with enumeration
            and braid.component_limits_stated(n) != enum
        )
        if not ok:
            bad.append(n)
    return not bad, f"n = 2..{max_n}, even class takes +; opposite orientation refuted; failures: {bad}"


POWERING_GROUPS = (
    [GroupSpec.cyclic(m) for m in range(2, 21)]
    + [GroupSpec.dihedral(4)]
    + [GroupSpec.coxeter_a(r) for r in range(1, 5)]
    + [GroupSpec.coxeter_b(2), GroupSpec.coxeter_b(3)]
    + [GroupSpec.coxeter_i2(m) for m in range(3, 9)]
)


def check_chain_powering(n_steps: int = 10**4, tol: float = 1e-9) -> tuple[bool, str]:
    bad = []
    worst = 0.0
    for spec in POWERING_GROUPS:
        g = _graph(spec)
        dist = uniform_step_distribution(g.group)
        for n in (n_steps, n_steps + 1):
            tv = tv_distance(exact_law(g, dist, n), predicted_law(g, dist, n))
            worst = max(worst, tv)
            if not tv < tol:
                bad.append((spec.label, n))
    return not bad, f"{len(POWERING_GROUPS)} groups at N = {n_steps}, {n_steps + 1}; max TV {worst:.3g}; failures: {bad}"


MONTE_CARLO_GROUPS = (
    GroupSpec.coxeter_a(2),
    GroupSpec.coxeter_a(3),
    GroupSpec.cyclic(5),
    GroupSpec.cyclic(6),
)


def check_monte_carlo(
    trials: int = 10**5, steps: int = 200, seed: int = DEFAULT_SEED, threads: int = 1
) -> tuple[bool, str]:
    bad = []
    worst = 0.0
    for spec in MONTE_CARLO_GROUPS:
        g = _graph(spec)
        dist = uniform_step_distribution(g.group)
        report = empirical_vs_limit(g, dist, length_function(g), steps, trials, seed, threads=threads)
        for row in report.rows:
            z = abs(row.empirical_mean - float(row.exact_limit)) / row.std_error
            worst = max(worst, z)
            if not z < 5:
                bad.append((spec.label, row.step))
    return not bad, f"{trials} trials, N = {steps - 1}..{steps + 1}, seed {seed}; max |z| {worst:.2f}; failures: {bad}"


LIFT_TYPES = (
    [f"A{n}" for n in range(1, 6)]
    + [f"B{n}" for n in range(2, 6)]
    + ["D4", "D5"]
    + [f"I2({m})" for m in range(3, 13)]
    + ["A1xA1", "A1xA2", "A2xB2", "A1xA1xA1", "A3xI2(5)"]
)


def check_lift_and_closure() -> tuple[bool, str]:
    bad = []
    checked = 0
    for t in LIFT_TYPES:
        spec = limits.coxeter_group_spec(t)
        g = _graph(spec)
        type_a = spec.family == "coxeter_a"
        for elt in g.elements:
            b = braid.lift_to_braid(g, elt)
            word = reduced_word(g, elt)
            ok = len(b) == length_of(g, elt) and g.group.evaluate(word) == elt
            if type_a:
                ok = ok and braid.underlying_permutation(b) == elt and len(b) == oracles.inversions(elt)
            if not ok:
                bad.append((t, elt))
                break
            checked += 1
    closure = braid.closure_components(braid.BraidWord(3, (1, 2)))
    fig = braid.block_diagonal_compose(
        [braid.BraidWord(3, (1, -2)), braid.BraidWord(2, (1, 1)), braid.BraidWord(2, (1,))]
    )
    ok = not bad and closure == 1 and fig.letters == (1, -2, 4, 4, 6) and fig.strands == 7
    return ok, f"{checked} elements lifted; closure(s1 s2) = {closure}; composed word {list(fig.letters)}; failures: {bad[:3]}"


def check_ldp() -> tuple[bool, str]:
    problems = []
    for n in range(0, 61):
        for j in range(1, 9):
            for k in range(0, 13):
                if ldp.kappa_exact(n, j, k) != oracles.kappa_inclusion_exclusion(n, j, k):
                    problems.append(("kappa", n, j, k))
    for n in range(2, 7):
        for N in range(1, 9):
            if sum(ldp.true_length_distribution(n, N).values()) != 1:
                problems.append(("normalization", n, N))
    for n in (3, 4, 5):
        for N in (1, 2, 3, 5, 8, 13, 21):
            p = ldp.exact_probability("true_length", N, 0, n)
            if p != Fraction(2, math.factorial(n)) ** N:
                problems.append(("boundary", n, N))
            rate = -ldp.exact_logprob("true_length", N, 0, n) / N
            if not math.isclose(rate, math.log(math.factorial(n) // 2), rel_tol=1e-12):
                problems.append(("boundary-log", n, N))
    n, x = 4, Fraction(3, 2)
    ref_N = 2**10
    c = -ldp.exact_logprob("composition", ref_N, int(2 * ref_N * x), n) / ref_N
    rows = [r for r in ldp.rate_convergence_report(n, x, [2**k for k in range(1, 10)]) if r.model == "composition"]
    gaps = [abs(r.neg_log_prob_over_N - c) for r in rows]
    if not all(a > b for a, b in zip(gaps, gaps[1:])):
        problems.append(("convergence", gaps))
    comp = ldp.exact_logprob("composition", 2, 2, 3)
    true = ldp.exact_logprob("true_length", 2, 2, 3)
    if not (
        math.isclose(comp, math.log(2 / 9), rel_tol=1e-12)
        and math.isclose(true, math.log(4 / 9), rel_tol=1e-12)
        and comp != true
    ):
        problems.append(("discrepancy", comp, true))
    return not problems, (
        f"kappa grid, normalization, boundary, convergence gaps {gaps[0]:.3g} -> {gaps[-1]:.3g}, "
        f"n=3 N=2: composition {comp:.6f} vs true {true:.6f}; problems: {problems[:3]}"
    )


CHECKS: list[tuple[str, str, Callable[[], tuple[bool, str]]]] = [
    ("C1", "cyclic walk limits", check_cyclic_limits),
    ("C2", "cyclic product limits", check_cyclic_products),
    ("C3", "Poincare factorization", check_poincare),
    ("C4", "Coxeter walk limits", check_coxeter_limits),
    ("C5", "degree-table identities", check_table_identities),
    ("C6", "closure component limits", check_components),
    ("C7", "chain powering to limit law", check_chain_powering),
    ("C8", "Monte Carlo vs exact limits", check_monte_carlo),
    ("C9", "lift and closure", check_lift_and_closure),
    ("C10", "large-deviation oracles", check_ldp),
]


def run_check(key: str) -> CheckResult:
    for k, claim, func in CHECKS:
        if k == key:
            start = time.perf_counter()
            try:
                ok, detail = func()
            except Exception as exc:  # a crash is a failed check, not a crashed run
                ok, detail = False, f"{type(exc).__name__}: {exc}"
            return CheckResult(k, claim, ok, detail, time.perf_counter() - start)
    raise KeyError(key)


def run_all(keys=None) -> list[CheckResult]:
    return [run_check(k) for k, _, _ in CHECKS if keys is None or k in keys]
