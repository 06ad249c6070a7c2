from fractions import Fraction

import pytest

from circflow import colorings, families, flows
from circflow.certificates import (
    Certificate,
    CertificateError,
    certificate_from_json,
    graph_hash,
    make_certificate,
    rat,
    reverify,
    unrat,
)
from circflow.multigraph import add_matching_copies, perfect_matchings


def test_rational_strings():
    assert rat(Fraction(9, 2)) == "9/2"
    assert rat(4) == "4/1"
    assert unrat("9/2") == Fraction(9, 2)
    assert unrat("7") == Fraction(7)


def test_round_trip_and_canonical_bytes():
    k4 = families.complete_graph(4)
    result = flows.circular_flow_number(k4)
    cert = flows.phi_c_certificate(k4, result, elapsed_s=1.23)
    back = certificate_from_json(cert.to_json())
    assert back.canonical_bytes() == cert.canonical_bytes()
    assert back.verdict == cert.verdict
    # elapsed time lives outside the canonical payload
    again = flows.phi_c_certificate(k4, result, elapsed_s=9.99)
    assert again.canonical_bytes() == cert.canonical_bytes()
    assert again.certificate_sha256() == cert.certificate_sha256()


def test_reverify_flow_certificate():
    k4 = families.complete_graph(4)
    result = flows.circular_flow_number(k4)
    cert = flows.phi_c_certificate(k4, result)
    assert reverify(cert, k4)


def test_reverify_detects_tampered_value():
    k4 = families.complete_graph(4)
    result = flows.circular_flow_number(k4)
    cert = flows.phi_c_certificate(k4, result)
    doc = cert.to_json().replace('"value": "4/1"', '"value": "4/1"')
    tampered = certificate_from_json(doc)
    edge = next(iter(tampered.witness["flow"]["edges"]))
    tampered.witness["flow"]["edges"][edge]["value"] = "17/1"
    assert not reverify(tampered, k4)


def test_reverify_rejects_wrong_graph():
    k4 = families.complete_graph(4)
    cert = flows.phi_c_certificate(k4, flows.circular_flow_number(k4))
    with pytest.raises(CertificateError):
        reverify(cert, families.complete_graph(6))


def test_reverify_chromatic_index():
    p = families.petersen()
    result = colorings.chromatic_index(p)
    cert = colorings.chromatic_index_certificate(p, result)
    assert reverify(cert, p)
    broken = certificate_from_json(cert.to_json())
    eid = next(iter(broken.witness["coloring"]))
    neighbor = next(e for e in p.edge_ids
                    if e != eid and p.edge(e).ends & p.edge(eid).ends)
    broken.witness["coloring"][eid] = broken.witness["coloring"][neighbor]
    assert not reverify(broken, p)


def test_reverify_class_property_reruns_refutation():
    p = families.petersen()
    pm = sorted(perfect_matchings(p)[0])
    cert = colorings.class_property(p, pm, 2, [1, 2])
    assert cert.verdict == "verified"
    assert reverify(cert, p)


def test_reverify_balanced_and_parity():
    from circflow import valuations
    from circflow.multigraph import edge_cut

    k4 = families.complete_graph(4)
    flow = flows.circular_flow_number(k4).flow
    bip = valuations.flow_to_bipartition(k4, flow)
    omega = valuations.valuation_from_bipartition(k4, bip, flow.r)
    cert = valuations.check_balanced(k4, omega)
    assert reverify(cert, k4)

    coloring = colorings.chromatic_index(k4).coloring
    pcert = colorings.parity_lemma_check(k4, coloring, [edge_cut(k4, ["v1"])])
    assert reverify(pcert, k4)


def test_unknown_kind_rejected():
    with pytest.raises(CertificateError):
        Certificate("bogus-kind", "0" * 64, {}, {}, "verified")
    with pytest.raises(CertificateError):
        Certificate("flow-valid", "0" * 64, {}, {}, "maybe")


def test_canonical_serialization_is_stable():
    k4 = families.complete_graph(4)
    a = make_certificate("parity", k4, {"z": 1, "a": 2}, {"y": [3, 2]}, "verified")
    b = make_certificate("parity", k4, {"a": 2, "z": 1}, {"y": [3, 2]}, "verified")
    assert a.canonical_bytes() == b.canonical_bytes()


def test_graph_hash_ignores_construction_order():
    g1 = families.complete_graph(4)
    g2 = g1.relabeled({})  # identity copy
    assert graph_hash(g1) == graph_hash(g2)
