import csv
import io

import pytest

from plslab.constructions import directed_cycle
from plslab.corpus import corrupted_corpus, exhaustive_suite
from plslab.engine import run_verifier
from plslab.graph import Pointer
from plslab.languages import Language, decide_membership, edit_distance_to_language
from plslab.oracles import (CertSpace, _branch_and_bound, _rejection_set_search, min_rejections,
                            recheck_witness, sensitivity_sweep, strong_local_stability_probe)
from plslab.schemes import make_scheme


@pytest.mark.parametrize("name, lang, n", [("acyclic", Language.ACYCLIC, 4), ("stp", Language.ST_P, 3),
                                           ("universal:LEADER", Language.LEADER, 4)])
def test_search_strategies_agree(name, lang, n):
    scheme = make_scheme(name)
    for inst in exhaustive_suite(lang, n):
        if decide_membership(lang, inst):
            continue
        doms = scheme.domains(inst)
        a = _branch_and_bound(scheme, inst, doms, inst.n + 1, 10**7)
        b = _rejection_set_search(scheme, inst, doms, inst.n + 1, 10**7)
        assert a[3] and b[3]
        assert a[0] == b[0]
        assert run_verifier(scheme, inst, b[1]).k == b[0]


def test_members_get_prover_map():
    scheme = make_scheme("acyclic")
    inst = directed_cycle(4).relabeled({1: Pointer(None)})
    res = min_rejections(scheme, inst)
    assert res.k == 0 and res.method == "prover"


def test_cutoff_decides_threshold():
    scheme, inst = make_scheme("acyclic"), directed_cycle(5)
    assert min_rejections(scheme, inst, cutoff=1).k is None
    res = min_rejections(scheme, inst, cutoff=2)
    assert res.k == 1 and res.exhaustive


def test_enlarging_the_space_never_raises_k():
    scheme = make_scheme("st")
    for inst in corrupted_corpus(Language.ST_L, 10, seed=4, min_n=3, max_n=4):
        full = scheme.domains(inst)
        small = CertSpace({v: d[: max(1, len(d) // 3)] for v, d in full.items()})
        k_small = min_rejections(scheme, inst, space=small).k
        k_full = min_rejections(scheme, inst).k
        assert k_full <= k_small


def test_seeds_are_used():
    scheme, inst = make_scheme("acyclic"), directed_cycle(4)
    doms = scheme.domains(inst)
    seed_map = {v: doms[v][0] for v in inst.nodes}
    res = min_rejections(scheme, inst, seeds=[seed_map], budget=1)
    assert res.k is not None and res.k <= run_verifier(scheme, inst, seed_map).k


def test_sweep_csv_header_and_rows():
    corpus = corrupted_corpus(Language.ACYCLIC, 6, seed=2, max_n=5)
    report = sensitivity_sweep(make_scheme("acyclic"), Language.ACYCLIC, corpus)
    text = report.to_csv()
    assert text.startswith("# bounded-space experiment")
    rows = list(csv.reader(io.StringIO(text.split("\n", 1)[1])))
    assert rows[0] == ["instance-id", "n", "edit-distance", "k-min", "ratio", "exhaustive", "witness-file"]
    assert len(rows) == 1 + len(corpus)
    for r, inst in zip(report.rows, corpus):
        assert r.distance == edit_distance_to_language(Language.ACYCLIC, inst)
    assert report.min_ratio >= 1.0 and report.all_exhaustive
    assert sensitivity_sweep(make_scheme("acyclic"), Language.ACYCLIC, corpus).to_csv() == text


def test_probe_witness_rechecks():
    res = strong_local_stability_probe(Language.ST_P, 4, [0.5, 100.0])
    assert res.exhaustive and res.pastes_checked > 0
    assert res.witnesses[100.0] is None
    w = res.witnesses[0.5]
    assert w is not None and w.distance > 0.5 * w.boundary
    assert recheck_witness(Language.ST_P, w)


def test_probe_rejects_weighted_language():
    with pytest.raises(ValueError):
        strong_local_stability_probe(Language.MST_L, 3, [1.0])
