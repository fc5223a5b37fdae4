"""Hypothesis strategies for graphs and building sets."""

from itertools import combinations

from hypothesis import strategies as st

from nestohedron.bitsets import full
from nestohedron.building import Graph, close_under_unions, graphical_from_graph, validate_building


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 6):
    n = draw(st.integers(min_n, max_n))
    pairs = list(combinations(range(n), 2))
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def buildings(draw, min_n: int = 1, max_n: int = 6, graphical: bool | None = None):
    g = draw(graphs(min_n, max_n))
    b = graphical_from_graph(g)
    extend = draw(st.booleans()) if graphical is None else not graphical
    if extend and g.vertex_count >= 2:
        extra = draw(st.lists(st.integers(1, full(g.vertex_count)), min_size=1, max_size=3))
        b = validate_building(close_under_unions(set(b.sets) | set(extra)), g.vertex_count)
    return b


@st.composite
def families(draw, max_n: int = 4):
    """Arbitrary families of nonempty subsets, valid or not."""
    n = draw(st.integers(1, max_n))
    fam = draw(st.sets(st.integers(1, full(n)), max_size=2 ** n - 1))
    return n, fam
