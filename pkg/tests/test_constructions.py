import pytest

from plslab.constructions import (PreconditionError, build_path_stp, build_regular_glue,
                                  build_wrapper_construction, circulant, directed_cycle, paired_cycle)
from plslab.engine import encode_map, run_verifier
from plslab.languages import Language, decide_membership, edit_distance_to_language
from plslab.schemes import make_scheme


def verdict(c):
    return run_verifier(c.scheme, c.instance, encode_map(c.scheme, c.instance, c.certs))


@pytest.mark.parametrize("n", [4, 6, 10, 20])
def test_path_splice(n):
    c = build_path_stp(n)
    assert verdict(c).rejecting == c.meta["expected_rejecting"]
    assert edit_distance_to_language(Language.ST_P, c.instance) >= n // 2


@pytest.mark.parametrize("n", [2, 3, 5])
def test_path_splice_preconditions(n):
    with pytest.raises(PreconditionError):
        build_path_stp(n)


def test_circulant_regular():
    g = circulant(10, 3)
    assert all(len(g.adj[v]) == 3 for v in g.nodes)
    with pytest.raises(PreconditionError):
        circulant(5, 3)


def test_regular_glue_small():
    c = build_regular_glue(2, 6, 3, 6)
    assert not decide_membership(Language.REGULAR, c.instance)
    assert verdict(c).k <= c.meta["bound"]
    with pytest.raises(PreconditionError):
        build_regular_glue(2, 6, 2, 8)


@pytest.mark.parametrize("inst", [directed_cycle(3), directed_cycle(9), paired_cycle(8)])
def test_wrapper_fake_single_rejection(inst):
    c = build_wrapper_construction(make_scheme("acyclic"), inst)
    assert verdict(c).rejecting == (min(inst.nodes),)


def test_paired_cycle_distance_grows():
    assert edit_distance_to_language(Language.ACYCLIC, paired_cycle(12)) == 6
    with pytest.raises(PreconditionError):
        paired_cycle(5)
