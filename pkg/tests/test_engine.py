from plslab.engine import (UNDECODABLE, Certificate, build_views, check_completeness, decode_map,
                           encode_map, run_verifier, verify_view)
from plslab.graph import Graph, LabeledGraph, Pointer
from plslab.schemes import AcyclicCert, make_scheme


def path(n=3):
    g = Graph(range(1, n + 1), [(i, i + 1) for i in range(1, n)])
    return LabeledGraph(g, {i: Pointer(i - 1 if i > 1 else None) for i in g.nodes}, "pointer")


def test_views_contain_neighbor_triples():
    inst = path()
    views = build_views(inst, {1: "a", 2: "b", 3: "c"})
    assert views[2].neighbor_ids == {1, 3}
    assert views[2].neighbor(1).cert == "a" and views[2].neighbor(1).label == Pointer(None)
    assert views[1].neighbor(3) is None


def test_honest_run_accepts_everywhere():
    inst, scheme = path(5), make_scheme("acyclic")
    verdict = run_verifier(scheme, inst, encode_map(scheme, inst, scheme.prove(inst)))
    assert verdict.all_accept and verdict.rejecting == ()
    assert check_completeness(scheme, scheme.language, [inst]) == []


def test_undecodable_certificate_rejects_owner_and_neighbors():
    inst, scheme = path(5), make_scheme("acyclic")
    certs = encode_map(scheme, inst, scheme.prove(inst))
    certs[3] = Certificate("0101010101")
    assert decode_map(scheme, inst, certs)[3] is UNDECODABLE
    assert run_verifier(scheme, inst, certs).rejecting == (2, 3, 4)


def test_verifier_faults_count_as_rejection():
    inst, scheme = path(3), make_scheme("acyclic")
    views = build_views(inst, {1: AcyclicCert(0), 2: "junk", 3: AcyclicCert(2)})
    assert not verify_view(scheme, views[2])


def test_structured_certs_pass_through():
    inst, scheme = path(3), make_scheme("acyclic")
    bad = {1: AcyclicCert(0), 2: AcyclicCert(1), 3: AcyclicCert(1)}
    assert run_verifier(scheme, inst, bad).rejecting == (3,)
