"""Hypothesis strategies shared by the test modules."""
import random

from hypothesis import strategies as st

from plslab.corpus import corrupt, label_universe, random_connected_graph, random_member
from plslab.graph import LabeledGraph
from plslab.languages import Language


@st.composite
def graphs(draw, min_n=1, max_n=7, weighted=False):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    first = draw(st.sampled_from([1, 1, 5, 100]))
    return random_connected_graph(n, random.Random(seed), weighted=weighted, first_id=first)


@st.composite
def labelings(draw, kind, min_n=1, max_n=6, weighted=False):
    g = draw(graphs(min_n, max_n, weighted))
    labels = {v: draw(st.sampled_from(label_universe(g, v, kind))) for v in g.nodes}
    return LabeledGraph(g, labels, kind)


@st.composite
def near_members(draw, lang: Language, min_n=2, max_n=6):
    """A random member with up to two labels rewritten."""
    g = draw(graphs(min_n, max_n, weighted=lang is Language.MST_L))
    rng = random.Random(draw(st.integers(0, 2**32 - 1)))
    member = random_member(lang, g, rng)
    return corrupt(member, draw(st.integers(0, 2)), rng)
