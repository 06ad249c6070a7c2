import itertools
from fractions import Fraction

import pytest

from circflow import families, flows, valuations
from circflow.flows import (
    BridgedGraphError,
    DirectedCircuit,
    FlowError,
    Orientation,
    RationalFlow,
    SizeCapExceeded,
    add_circuit_flow,
    bipartite_regular_flow,
    build_flower_flow,
    circular_flow_number,
    circulation_feasible,
    read_flow,
    verify_flow,
    write_flow,
)
from circflow.multigraph import Multigraph, perfect_matchings


def cycle_graph(k):
    vs = [f"v{i}" for i in range(k)]
    es = [(f"e{i}", f"v{i}", f"v{(i + 1) % k}") for i in range(k)]
    return Multigraph(vs, es)


def k33():
    return Multigraph([f"a{i}" for i in range(3)] + [f"b{i}" for i in range(3)],
                      [(f"e{i}{j}", f"a{i}", f"b{j}") for i in range(3) for j in range(3)])


def directed_cycle_flow(k, r=Fraction(2)):
    g = cycle_graph(k)
    dirs = {f"e{i}": (f"v{i}", f"v{(i + 1) % k}") for i in range(k)}
    values = {f"e{i}": Fraction(1) for i in range(k)}
    return g, RationalFlow(Orientation(dirs), values, Fraction(r))


def test_verify_flow_cycle():
    g, flow = directed_cycle_flow(6)
    assert verify_flow(g, flow).verdict == "verified"


def test_verify_flow_rejects_conservation_break():
    g, flow = directed_cycle_flow(4)
    bad = RationalFlow(flow.orientation, {**flow.values, "e0": Fraction(2)}, flow.r)
    cert = verify_flow(g, bad)
    assert cert.verdict == "refuted"
    assert "conservation_at" in cert.witness["violation"]


def test_verify_flow_rejects_out_of_window_values():
    g, flow = directed_cycle_flow(4, r=Fraction(3, 2))
    assert verify_flow(g, flow).verdict == "refuted"  # 1 > r-1


def test_petersen_has_no_4_flow():
    # any claimed 4-flow witness must fail: phi_c(Petersen) = 5
    p = families.petersen()
    result = circular_flow_number(p)
    relabeled = result.flow.with_r(Fraction(4))
    assert verify_flow(p, relabeled).verdict == "refuted"


def test_coverage_mismatch_is_an_error():
    g, flow = directed_cycle_flow(4)
    h = cycle_graph(5)
    with pytest.raises(FlowError):
        verify_flow(h, flow)


def test_add_circuit_flow_identity_and_errors():
    g, flow = directed_cycle_flow(5)
    circ = DirectedCircuit(tuple(f"e{i}" for i in range(5)), "v0")
    same = add_circuit_flow(flow, circ, Fraction(0))
    assert same.values == flow.values
    backwards = DirectedCircuit(tuple(reversed([f"e{i}" for i in range(5)])), "v0")
    with pytest.raises(FlowError):
        add_circuit_flow(flow, backwards, Fraction(1, 2))


def test_add_circuit_flow_on_flower_base():
    # two forward-directed circuits through the zero edge of the J5 base flow
    data = build_flower_flow(2)
    base = data.base_flow
    c1 = DirectedCircuit(("ab0", "bc0", "cd0", "bd1", "ab1", "aa1", "aa2", "aa3", "aa4"), "a0")
    c2 = DirectedCircuit(("ab0", "bc0", "dc4", "bd4", "bc4", "dc3", "bd3", "ab3", "aa3", "aa4"), "a0")
    half = Fraction(1, 2)
    lifted = add_circuit_flow(add_circuit_flow(base, c1, half), c2, half)
    lifted = RationalFlow(lifted.orientation, lifted.values, Fraction(9, 2))
    assert verify_flow(data.graph, lifted).verdict == "verified"


def test_circulation_feasible_cycle():
    g, flow = directed_cycle_flow(6)
    ok, witness = circulation_feasible(g, flow.orientation, Fraction(2))
    assert ok and all(v == 1 for v in witness.values.values())


def test_circulation_infeasible_at_source_vertex():
    k4 = families.complete_graph(4)
    dirs = {}
    for e in k4.edges():
        if "v1" in e.ends:
            dirs[e.eid] = ("v1", e.other("v1"))  # v1 is a pure source
        else:
            dirs[e.eid] = (e.u, e.v)
    ok, witness = circulation_feasible(k4, Orientation(dirs), Fraction(10))
    assert not ok
    out = sum(1 for eid in k4.edge_ids if dirs[eid][0] in witness and dirs[eid][1] not in witness)
    inn = sum(1 for eid in k4.edge_ids if dirs[eid][1] in witness and dirs[eid][0] not in witness)
    assert out > 9 * inn


def test_circulation_rejects_small_r():
    g, flow = directed_cycle_flow(3)
    with pytest.raises(FlowError):
        circulation_feasible(g, flow.orientation, Fraction(3, 2))


def test_petersen_best_orientation_feasible_at_5():
    p = families.petersen()
    result = circular_flow_number(p)
    ok, witness = circulation_feasible(p, result.orientation, Fraction(5))
    assert ok
    assert verify_flow(p, witness).verdict == "verified"


# frozen expected values; K_{2t+2} values are 2 + 2/t, Petersen by enumeration
PHI_EXPECTED = [
    ("K4", lambda: families.complete_graph(4), Fraction(4)),
    ("K6", lambda: families.complete_graph(6), Fraction(3)),
    ("K33", k33, Fraction(3)),
    ("Petersen", families.petersen, Fraction(5)),
]


@pytest.mark.parametrize("name,make,expected", PHI_EXPECTED)
def test_circular_flow_number_exact(name, make, expected):
    g = make()
    result = circular_flow_number(g)
    assert result.value == expected
    assert result.flow.r == expected
    assert verify_flow(g, result.flow).verdict == "verified"


def test_circular_flow_number_relabel_invariant():
    import random

    g = k33()
    base = circular_flow_number(g).value
    rng = random.Random(11)
    for _ in range(3):
        names = list(g.vertices)
        shuffled = names[:]
        rng.shuffle(shuffled)
        h = g.relabeled(dict(zip(names, shuffled)))
        assert circular_flow_number(h).value == base


def test_circular_flow_number_bridge_and_cap_errors():
    path = Multigraph(["a", "b"], [("e", "a", "b")])
    with pytest.raises(BridgedGraphError):
        circular_flow_number(path)
    big = families.flower_snark(2).graph  # 30 edges
    with pytest.raises(SizeCapExceeded):
        circular_flow_number(big)


def test_odd_cut_lower_bound_invariant():
    # phi_c >= 2 + 1/k whenever a (2k+1)-cut exists; check on the corpus
    from circflow.multigraph import edge_cut

    for name, make, expected in PHI_EXPECTED:
        g = make()
        n = g.num_vertices()
        verts = list(g.vertices)
        for mask in range(1, 1 << min(n, 10)):
            side = [verts[i] for i in range(min(n, 10)) if mask & (1 << i)]
            if len(side) in (0, n):
                continue
            size = len(edge_cut(g, side).edges)
            if size % 2:
                k = (size - 1) // 2
                assert expected >= 2 + Fraction(1, k)


def test_reversed_flow_is_valid():
    g, flow = directed_cycle_flow(6)
    rev = RationalFlow(flow.orientation.reversed(), flow.values, flow.r)
    assert verify_flow(g, rev).verdict == "verified"
    p = families.petersen()
    result = circular_flow_number(p)
    rev = RationalFlow(result.flow.orientation.reversed(), result.flow.values, result.flow.r)
    assert verify_flow(p, rev).verdict == "verified"


def test_monotone_acceptance_in_r():
    data = build_flower_flow(2)
    assert verify_flow(data.graph, data.flow).verdict == "verified"
    bigger = data.flow.with_r(Fraction(5))
    assert verify_flow(data.graph, bigger).verdict == "verified"


def test_bipartite_regular_flow_k33():
    g = k33()
    flow = bipartite_regular_flow(g, 1)
    assert flow.r == Fraction(3)
    assert verify_flow(g, flow).verdict == "verified"


def test_bipartite_regular_flow_k55():
    g = Multigraph([f"a{i}" for i in range(5)] + [f"b{i}" for i in range(5)],
                   [(f"e{i}{j}", f"a{i}", f"b{j}") for i in range(5) for j in range(5)])
    flow = bipartite_regular_flow(g, 2)
    assert flow.r == Fraction(5, 2)
    assert verify_flow(g, flow).verdict == "verified"


def test_bipartite_regular_flow_rejects_odd_cycle():
    with pytest.raises(FlowError):
        bipartite_regular_flow(cycle_graph(5), 1)
    with pytest.raises(FlowError):
        bipartite_regular_flow(cycle_graph(6), 1)  # 2-regular, not 3-regular


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_build_flower_flow(n):
    data = build_flower_flow(n)
    assert data.flow.r == Fraction(4 * n + 1, n)
    assert verify_flow(data.graph, data.flow).verdict == "verified"
    assert len(data.circuits) == n
    # matching pairs black with white
    for eid in data.matching:
        e = data.graph.edge(eid)
        assert data.bipartition.color(e.u) != data.bipartition.color(e.v)


def test_flower_flow_zero_edge_arithmetic():
    # every circuit traverses a0b0 forward, so its final value is n * (1/n) = 1
    data = build_flower_flow(2)
    assert data.base_flow.values["ab0"] == 0
    assert data.flow.values["ab0"] == 1
    assert all(("ab0", 1) in circ for circ in data.circuits)


def test_flower_matching_is_the_stated_one():
    data = build_flower_flow(3)
    mod = 7
    expected = {f"ab{i}" for i in range(mod)} | {f"dc{i}" for i in range(mod)}
    assert data.matching == expected


def test_flow_file_round_trip():
    data = build_flower_flow(1)
    text = write_flow(data.flow)
    back = read_flow(text)
    assert back.r == data.flow.r
    assert back.values == data.flow.values
    assert dict(back.orientation.items()) == dict(data.flow.orientation.items())
    assert verify_flow(data.graph, back).verdict == "verified"


def test_base_flower_flow_integer_mode():
    data = build_flower_flow(2)
    cert = verify_flow(data.graph, data.base_flow)
    assert cert.verdict == "verified"
    # exactly one zero edge, and it is flagged
    zeros = [e for e, v in data.base_flow.values.items() if v == 0]
    assert zeros == ["ab0"] == [data.base_flow.zero_edge]
