import random

import numpy as np
import pytest

from plslab import kernels
from plslab.corpus import corrupted_corpus, exhaustive_suite
from plslab.languages import Language, decide_membership
from plslab.oracles import _kernel_kind, kernel_arrays, kernel_cert, kernel_code, min_rejections
from plslab.engine import run_verifier
from plslab.schemes import make_scheme

CASES = [("acyclic", Language.ACYCLIC), ("st", Language.ST_L), ("stp", Language.ST_P)]


def test_backend_selected():
    assert kernels.BACKEND in kernels.backends()
    assert "python" in kernels.backends()


@pytest.mark.parametrize("name, lang", CASES)
def test_backends_agree(name, lang):
    impls = kernels.backends()
    kind = _kernel_kind(make_scheme(name))
    for inst in corrupted_corpus(lang, 15, seed=3, min_n=2, max_n=4):
        arrays = kernel_arrays(inst)
        out = {b: mod.min_rejections(kind, *arrays, inst.n + 1, 10**8) for b, mod in impls.items()}
        ks = {b: r[0] for b, r in out.items()}
        assert len(set(ks.values())) == 1, ks
        for b, mod in impls.items():
            codes = out[b][1]
            rv = mod.reject_vector(kind, *arrays, np.array(codes, dtype=np.intc))
            assert int(np.sum(rv)) == ks[b]


@pytest.mark.parametrize("name, lang", CASES)
def test_kernel_matches_generic_search(name, lang):
    scheme = make_scheme(name)
    for inst in exhaustive_suite(lang, 3):
        if decide_membership(lang, inst):
            continue
        a = min_rejections(scheme, inst)
        b = min_rejections(scheme, inst, use_kernel=False)
        assert a.exhaustive and b.exhaustive
        assert a.k == b.k
        assert run_verifier(scheme, inst, a.witness).k == a.k


@pytest.mark.parametrize("name, lang", CASES)
def test_cert_codes_round_trip(name, lang):
    scheme = make_scheme(name)
    kind = _kernel_kind(scheme)
    inst = corrupted_corpus(lang, 1, seed=1, min_n=4, max_n=4)[0]
    for c in scheme.domains(inst)[inst.nodes[0]]:
        assert kernel_cert(kind, inst, kernel_code(kind, inst, c)) == c


def test_rejection_sets_order():
    sets = list(kernels.rejection_sets(4, [2], 3))
    assert sets[0] == [2]
    assert all(2 in s for s in sets)
    assert [len(s) for s in sets] == sorted(len(s) for s in sets)
    assert max(len(s) for s in sets) == 2


def test_budget_marks_search_incomplete():
    inst = corrupted_corpus(Language.ST_L, 1, seed=9, min_n=6, max_n=6)[0]
    res = min_rejections(make_scheme("st"), inst, budget=5)
    assert not res.exhaustive and res.lower_bound == 0
