import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cayleywalk.cayley import build_cayley, length_function
from cayleywalk.errors import InvalidSpec
from cayleywalk.groups import GroupSpec, build_group
from cayleywalk.limits import (
    coxeter_group_spec,
    coxeter_limit,
    cyclic_limit,
    cyclic_product_limit,
    degree_table,
    degrees_of,
    group_order,
    length_sums,
    parity_limits_from_degrees,
    parse_coxeter_type,
    poincare_polynomial,
    product_limit,
    reflection_number,
)
from cayleywalk.oracles import bfs_cyclic_product_limit, cyclic_length_histogram, enumerated_limit_from_histogram
from cayleywalk.polynomial import IntPolynomial, harmonic
from cayleywalk.walk import LimitValue, limiting_expectation

ENUMERABLE_TYPES = (
    [f"A{n}" for n in range(1, 6)]
    + [f"B{n}" for n in range(2, 5)]
    + ["D4"]
    + [f"I2({m})" for m in range(3, 13)]
    + ["A1xA1", "A1xA2", "A1xI2(5)", "A2xB2"]
)


def enumerate_lengths(coxeter_type):
    graph = build_cayley(build_group(coxeter_group_spec(coxeter_type)))
    return graph


def test_cyclic_limit_examples():
    assert cyclic_limit(5) == LimitValue.single(Fraction(6, 5))
    assert cyclic_limit(6) == LimitValue.parity_split(Fraction(4, 3), Fraction(5, 3))
    assert cyclic_limit(8) == LimitValue.parity_split(2, 2)
    with pytest.raises(InvalidSpec):
        cyclic_limit(1)


@pytest.mark.parametrize("m", range(2, 65))
def test_cyclic_limit_matches_walk(m):
    graph = build_cayley(build_group(GroupSpec.cyclic(m)))
    assert cyclic_limit(m) == limiting_expectation(graph, graph.group.presentation(), length_function(graph))


def test_product_limit_examples():
    assert product_limit([Fraction(2, 3), Fraction(2, 3)]) == Fraction(4, 3)
    assert product_limit([Fraction(1, 2), 1]) == Fraction(3, 2)
    assert product_limit([0, Fraction(5, 2)]) == Fraction(5, 2)


def test_cyclic_product_examples():
    assert cyclic_product_limit([3, 3]) == Fraction(4, 3)
    assert cyclic_product_limit([2, 2]) == 1
    assert cyclic_product_limit([2, 4]) == Fraction(3, 2)
    for bad in ([5], [], [1, 4]):
        with pytest.raises(InvalidSpec):
            cyclic_product_limit(bad)


@given(st.lists(st.integers(2, 9), min_size=2, max_size=3))
@settings(max_examples=40, deadline=None)
def test_cyclic_product_matches_bfs(moduli):
    lim = bfs_cyclic_product_limit(moduli)
    assert lim.even == lim.odd == cyclic_product_limit(moduli)


def test_histogram_route_matches_bfs():
    import numpy as np

    for moduli in ([2, 3], [3, 5], [2, 2, 3], [4, 6]):
        hist = np.array([1])
        for n in moduli:
            hist = np.convolve(hist, cyclic_length_histogram(n))
        odd = any(n % 2 for n in moduli)
        assert enumerated_limit_from_histogram(hist, odd) == bfs_cyclic_product_limit(moduli)


def test_degree_examples():
    assert degrees_of("A3") == [2, 3, 4]
    assert degrees_of("B3") == [2, 4, 6]
    assert degrees_of("E8") == [2, 8, 12, 14, 18, 20, 24, 30]
    assert degrees_of("C3") == degrees_of("B3")
    assert sorted(degrees_of("D5")) == [2, 4, 5, 6, 8]
    assert degrees_of("I2(7)") == degrees_of("I2_7") == [2, 7]
    assert degrees_of("G2") == [2, 6]
    assert degrees_of("A1xB2") == [2, 2, 4]
    assert parse_coxeter_type("A2 × I2(5)") == (("A", 2), ("I2", 5))
    for bad in ("Z3", "A0", "D3", "I2(2)", "E9", ""):
        with pytest.raises(InvalidSpec):
            degrees_of(bad)


def test_table_rows_consistent():
    orders = {"E6": 51840, "E7": 2903040, "E8": 696729600, "F4": 1152, "G2": 12, "H3": 120, "H4": 14400}
    for name, order in orders.items():
        degs = degrees_of(name)
        assert group_order(degs) == order
        total, _ = length_sums(degs)
        assert 2 * total == order * reflection_number(degs)
    assert degree_table()["exceptional"]


@pytest.mark.parametrize("n", range(1, 13))
def test_classical_families(n):
    assert group_order(degrees_of(f"A{n}")) == math.factorial(n + 1)
    assert reflection_number(degrees_of(f"A{n}")) == n * (n + 1) // 2
    if n >= 2:
        assert group_order(degrees_of(f"B{n}")) == 2**n * math.factorial(n)
        assert reflection_number(degrees_of(f"B{n}")) == n * n
    if n >= 4:
        assert group_order(degrees_of(f"D{n}")) == 2 ** (n - 1) * math.factorial(n)
        assert reflection_number(degrees_of(f"D{n}")) == n * (n - 1)


def test_poincare_examples():
    assert poincare_polynomial([2, 3]) == IntPolynomial([1, 2, 2, 1])
    assert poincare_polynomial([2, 4]) == IntPolynomial([1, 2, 2, 2, 1])
    assert poincare_polynomial([2]) == IntPolynomial([1, 1])
    assert str(poincare_polynomial([2, 3])) == "1 + 2t + 2t^2 + t^3"


@pytest.mark.parametrize("ctype", ENUMERABLE_TYPES)
def test_poincare_matches_enumeration(ctype):
    graph = enumerate_lengths(ctype)
    poly = poincare_polynomial(degrees_of(ctype))
    assert list(poly.coeffs) == graph.length_counts()
    assert poly(1) == len(graph)
    assert poly.degree == graph.diameter == reflection_number(degrees_of(ctype))
    assert poly.is_palindromic()


def test_length_sums_examples():
    assert length_sums([2, 3, 4]) == (72, 0)
    assert length_sums([2, 3]) == (9, -1)
    assert length_sums([2]) == (1, -1)


@pytest.mark.parametrize("ctype", ENUMERABLE_TYPES)
def test_length_sums_match_enumeration(ctype):
    graph = enumerate_lengths(ctype)
    d = [int(x) for x in graph.distance]
    assert length_sums(degrees_of(ctype)) == (sum(d), sum((-1) ** x * x for x in d))


def test_coxeter_limit_examples():
    assert coxeter_limit("B3") == LimitValue.parity_split(Fraction(9, 2), Fraction(9, 2))
    assert str(coxeter_limit("B3")) == "9/2"
    assert coxeter_limit("I2(5)") == LimitValue.parity_split(Fraction(12, 5), Fraction(13, 5))
    assert coxeter_limit("H3").value == Fraction(15, 2)
    assert coxeter_limit("A1") == LimitValue.parity_split(0, 1)
    assert coxeter_limit("A2") == LimitValue.parity_split(Fraction(4, 3), Fraction(5, 3))


@pytest.mark.parametrize("ctype", ENUMERABLE_TYPES)
def test_coxeter_limit_matches_walk(ctype):
    graph = enumerate_lengths(ctype)
    walk = limiting_expectation(graph, graph.group.presentation(), length_function(graph))
    assert coxeter_limit(ctype) == walk


@pytest.mark.parametrize("ctype", sorted(set(ENUMERABLE_TYPES) | {"E6", "E7", "E8", "F4", "G2", "H3", "H4", "D7", "B9"}))
def test_generic_degree_route_agrees(ctype):
    assert parity_limits_from_degrees(degrees_of(ctype)) == coxeter_limit(ctype)


def test_group_spec_mapping():
    assert coxeter_group_spec("G2") == GroupSpec.coxeter_i2(6)
    assert coxeter_group_spec("C4") == GroupSpec.coxeter_b(4)
    with pytest.raises(InvalidSpec):
        coxeter_group_spec("E6")


def test_polynomial_basics():
    p = IntPolynomial([1, 2, 0, 0])
    assert p.coeffs == (1, 2) and p.degree == 1
    assert (p * p) == IntPolynomial([1, 4, 4])
    assert p.derivative() == IntPolynomial([2])
    assert harmonic(3) == Fraction(11, 6)
