import itertools

import pytest

from circflow import families, mp_coloring
from circflow.colorings import EdgeColoring, is_proper, sees_odd_violation
from circflow.mp_coloring import (
    INF,
    derive_triangle_pattern,
    factor_color_of_pair,
    k4p_factorization_labels,
    k4p_one_factorization,
    mp_prime_coloring,
    mp_tilde_coloring,
)
from circflow.multigraph import is_perfect_matching


def test_k4p_factorization_t1_first_matching():
    labels = k4p_factorization_labels(1)
    m0 = {frozenset(p) for p in labels[0]}
    expected = {frozenset((0, INF)), frozenset((1, 10)), frozenset((2, 9)),
                frozenset((3, 8)), frozenset((4, 7)), frozenset((5, 6))}
    assert m0 == expected


def test_k4p_factorization_t1_shift():
    labels = k4p_factorization_labels(1)
    m1 = {frozenset(p) for p in labels[1]}
    assert frozenset((1, INF)) in m1
    assert frozenset((2, 0)) in m1


@pytest.mark.parametrize("t", [1, 2])
def test_k4p_factorization_partitions_edges(t):
    p = 2 * t + 1
    k = families.complete_graph(4 * p)
    factors = k4p_one_factorization(t)
    assert len(factors) == 4 * p - 1
    for f in factors:
        assert is_perfect_matching(k, f)
    union = set().union(*factors)
    assert len(union) == sum(len(f) for f in factors)  # pairwise disjoint
    assert union == set(k.edge_ids)


def test_factor_color_is_consistent_with_matchings():
    t = 2
    for j, matching in enumerate(k4p_factorization_labels(t)):
        for a, b in matching:
            assert factor_color_of_pair(t, a, b) == j


@pytest.mark.parametrize("t", [1, 2])
def test_triangle_pattern_is_the_unique_search_solution(t):
    # regeneration check: exhaustive search over all color assignments of the
    # six triangle edges subject to "each vertex sees every color once"
    mod = 8 * t + 3
    for j in range(0, 3 * t, 3):
        derived = derive_triangle_pattern(t, j)
        circuit = mp_coloring.triangle_circuit_labels(t, j)
        freed: dict = {}
        for k, v in enumerate(circuit):
            w = circuit[(k + 1) % 6]
            col = factor_color_of_pair(t, v, w)
            freed.setdefault(v, set()).add(col)
            freed.setdefault(w, set()).add(col)
        keys = list(derived)
        solutions = []
        pool = sorted({factor_color_of_pair(t, circuit[k], circuit[(k + 1) % 6])
                       for k in range(6)})
        for combo in itertools.product(pool, repeat=len(keys)):
            assignment = dict(zip(keys, combo))
            ok = True
            for vertex in set(v for key in keys for v in key):
                got = {assignment[key] for key in keys if vertex in key}
                need = freed[vertex]
                counts = [assignment[key] for key in keys if vertex in key]
                if got != need or len(counts) != len(set(counts)):
                    ok = False
                    break
            if ok:
                solutions.append(assignment)
        assert solutions == [derived]


@pytest.mark.parametrize("t", [1, 2])
def test_mp_prime_coloring_sees_odd(t):
    data = mp_prime_coloring(t)
    p = 2 * t + 1
    g = data.family.graph
    coloring = data.coloring
    assert coloring.palette == 4 * p + 1
    assert coloring.mode == "sees-odd"
    assert sees_odd_violation(g, coloring) is None


def test_mp_prime_junction_windows_t1():
    data = mp_prime_coloring(1)
    g = data.family.graph
    colors = data.coloring.colors
    palette = 13
    # hub sees every color exactly once
    hub_colors = sorted(colors[e] for e in g.incident_edges("w"))
    assert hub_colors == list(range(palette))
    # each junction sees its i+4t+7 color exactly three times, the rest once
    for i in range(1, 14):
        seen: dict = {}
        for e in g.incident_edges(f"c{i}"):
            seen[colors[e]] = seen.get(colors[e], 0) + 1
        triple = (i + 11) % palette
        assert seen[triple] == 3
        assert all(v == 1 for c, v in seen.items() if c != triple)
    # degree bookkeeping: 12 once-seen colors + one thrice = 15 edges
    assert g.degree("c1") == 15


def test_mp_prime_internal_vertices_see_all_once():
    data = mp_prime_coloring(1)
    g = data.family.graph
    colors = data.coloring.colors
    for v in ("v1@1", "v7@3", "x@5"):
        got = sorted(colors[e] for e in g.incident_edges(v))
        assert got == list(range(13))


@pytest.mark.parametrize("t", [1, 2])
def test_mp_tilde_coloring(t):
    p = 2 * t + 1
    g, coloring = mp_tilde_coloring(t)
    assert g.is_regular(4 * p + 1)
    assert coloring.palette == 4 * p + 1
    ok, clash = is_proper(g, coloring)
    assert ok, clash
    assert len(set(coloring.colors.values())) == 4 * p + 1
    assert all(g.degree(v) != 2 for v in g.vertices)


def test_mp_tilde_matches_family_stage():
    fam = families.mp_graph(3, families.MP_TILDE)
    g, _ = mp_tilde_coloring(1)
    assert fam.graph == g
