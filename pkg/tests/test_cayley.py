import io
import itertools
from fractions import Fraction

import pytest

from cayleywalk.cayley import (
    build_cayley,
    dump_edges,
    is_bipartite,
    length_function,
    length_of,
    parity_sums,
    read_distances,
    reduced_word,
)
from cayleywalk.errors import UnknownElement
from cayleywalk.groups import GroupSpec, build_group, has_odd_relator, presentation_of
from cayleywalk.oracles import cyclic_length_histogram, inversions

from test_groups import SMALL_SPECS


def graph_of(spec):
    return build_cayley(build_group(spec))


def test_cyclic6_distances():
    g = graph_of(GroupSpec.cyclic(6))
    assert len(g) == 6
    assert [length_of(g, (r,)) for r in range(6)] == [0, 1, 2, 3, 2, 1]


def test_s3_is_hexagon_with_alternating_labels():
    g = graph_of(GroupSpec.coxeter_a(2))
    assert len(g) == 6
    # 2-regular, every vertex sees one s1 edge and one s2 edge
    for v in range(6):
        assert sorted(letter for _, letter in g.adjacency[v]) == [(0, 1), (1, 1)]
    # the walk s1 s2 s1 s2 s1 s2 visits all six vertices once
    v, seen = 0, []
    for k in range(6):
        seen.append(v)
        v = int(g.neighbors[v, k % 2])
    assert v == 0 and sorted(seen) == list(range(6))


def test_s4_diameter():
    g = graph_of(GroupSpec.coxeter_a(3))
    assert len(g) == 24 and g.diameter == 6 == 4 * 3 // 2


def test_length_examples():
    s3 = graph_of(GroupSpec.coxeter_a(2))
    assert length_of(s3, s3.group.identity()) == 0
    assert length_of(s3, (3, 2, 1)) == 3 == inversions((3, 2, 1))
    z7 = graph_of(GroupSpec.cyclic(7))
    assert length_of(z7, (4,)) == 3
    with pytest.raises(UnknownElement):
        length_of(z7, (9,))


def test_reduced_word_examples():
    s3 = graph_of(GroupSpec.coxeter_a(2))
    assert reduced_word(s3, s3.group.identity()) == ()
    assert reduced_word(s3, (3, 2, 1)) == ((0, 1), (1, 1), (0, 1))
    z8 = graph_of(GroupSpec.cyclic(8))
    assert reduced_word(z8, (5,)) == ((0, -1),) * 3


def lex_min_reduced_word_bruteforce(group, target, length):
    letters = group.letters()
    for word in itertools.product(sorted(letters, key=lambda l: (l[0], -l[1])), repeat=length):
        if group.evaluate(word) == target:
            return word
    return None


@pytest.mark.parametrize(
    "spec",
    [GroupSpec.coxeter_a(2), GroupSpec.coxeter_a(3), GroupSpec.coxeter_b(2), GroupSpec.dihedral(4), GroupSpec.cyclic(8)],
    ids=lambda s: s.label,
)
def test_reduced_word_is_lex_min(spec):
    g = graph_of(spec)
    for elt in g.elements:
        d = length_of(g, elt)
        assert reduced_word(g, elt) == lex_min_reduced_word_bruteforce(g.group, elt, d)


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
def test_graph_invariants(spec):
    g = graph_of(spec)
    assert len(g) == g.group.order()
    assert g.distance[0] == 0 and g.elements[0] == g.group.identity()
    for v in range(len(g)):
        for w, _ in g.adjacency[v]:
            gap = abs(int(g.distance[v]) - int(g.distance[w]))
            assert gap <= 1
            if g.bipartite:
                assert gap == 1
    for elt in g.elements:
        word = reduced_word(g, elt)
        assert len(word) == length_of(g, elt)
        assert g.group.evaluate(word) == elt
    assert g.bipartite == (not has_odd_relator(presentation_of(spec)))


def brute_force_bipartite(g):
    color = {0: 0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w, _ in g.adjacency[v]:
            if w not in color:
                color[w] = 1 - color[v]
                stack.append(w)
            elif color[w] == color[v]:
                return False
    return True


def test_bipartite_examples():
    assert is_bipartite(graph_of(GroupSpec.coxeter_a(3)))
    assert not is_bipartite(graph_of(GroupSpec.cyclic(5)))
    assert is_bipartite(graph_of(GroupSpec.dihedral(4)))
    for spec in SMALL_SPECS:
        g = graph_of(spec)
        assert is_bipartite(g) == brute_force_bipartite(g)


def test_bipartite_classes_have_equal_size():
    for spec in SMALL_SPECS:
        g = graph_of(spec)
        if g.bipartite:
            assert parity_sums(g, lambda _: 1) == (Fraction(len(g), 2), Fraction(len(g), 2), len(g))


@pytest.mark.parametrize("n", range(2, 7))
def test_type_a_length_is_inversion_count(n):
    g = graph_of(GroupSpec.coxeter_a(n - 1))
    for p in itertools.permutations(range(1, n + 1)):
        assert length_of(g, p) == inversions(p)


def test_parity_sums_examples():
    s3 = graph_of(GroupSpec.coxeter_a(2))
    assert parity_sums(s3, length_function(s3)) == (4, 5, 9)
    z4 = graph_of(GroupSpec.cyclic(4))
    assert parity_sums(z4, length_function(z4)) == (2, 2, 4)
    assert all(isinstance(x, Fraction) for x in parity_sums(z4, length_function(z4)))


def test_cycle_histogram_oracle_matches_graph():
    for n in range(1, 40):
        assert cyclic_length_histogram(n).tolist() == graph_of(GroupSpec.cyclic(n)).length_counts()


def test_dump_round_trip():
    g = graph_of(GroupSpec.coxeter_a(2))
    buf = io.StringIO()
    dump_edges(g, buf)
    text = buf.getvalue()
    edges = [line.split() for line in text.splitlines() if line and not line.startswith("#")][: len(g) * 2]
    assert edges[0] == ["0", "1", "1", "1"]
    assert read_distances(text.splitlines()) == g.distance.tolist()
