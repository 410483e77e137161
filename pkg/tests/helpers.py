"""Shared generators for the test suite."""

from __future__ import annotations

import itertools
import random

from hypothesis import strategies as st

from qlanroute.graph import (
    InterQlanGraph,
    Qlan,
    client,
    client_graph,
    make_edge,
    super_node,
)


def index_pairs(n1: int, n2: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n1 + 1) for j in range(1, n2 + 1)]


def all_client_graphs(n1: int, n2: int):
    """Every bipartite client graph on n1 + n2 vertices, 2**(n1*n2) of them."""
    pairs = index_pairs(n1, n2)
    for bits in range(2 ** len(pairs)):
        yield client_graph(n1, n2, [p for k, p in enumerate(pairs) if bits >> k & 1])


def random_client_graph(rng: random.Random, n1: int, n2: int, p: float = 0.5) -> InterQlanGraph:
    return client_graph(n1, n2, [pair for pair in index_pairs(n1, n2) if rng.random() < p])


def random_plain_graph(rng: random.Random, max_vertices: int = 10, p: float = 0.4) -> InterQlanGraph:
    """Arbitrary graph over both QLANs: intra-QLAN edges and supers allowed.

    Mirrors the intermediate graphs that local complementation produces.
    """
    n1 = rng.randint(1, max(1, max_vertices // 2))
    n2 = rng.randint(1, max(1, max_vertices - n1 - 2))
    vertices = [client(Qlan.Q1, i) for i in range(1, n1 + 1)]
    vertices += [client(Qlan.Q2, j) for j in range(1, n2 + 1)]
    if rng.random() < 0.5:
        vertices.append(super_node(Qlan.Q1))
    if rng.random() < 0.5:
        vertices.append(super_node(Qlan.Q2))
    edges = {
        make_edge(u, v)
        for u, v in itertools.combinations(vertices, 2)
        if rng.random() < p
    }
    return InterQlanGraph(frozenset(vertices), frozenset(edges))


@st.composite
def client_graphs(draw, max_n1: int = 4, max_n2: int = 4) -> InterQlanGraph:
    n1 = draw(st.integers(min_value=1, max_value=max_n1))
    n2 = draw(st.integers(min_value=1, max_value=max_n2))
    pairs = index_pairs(n1, n2)
    mask = draw(st.integers(min_value=0, max_value=2 ** len(pairs) - 1))
    return client_graph(n1, n2, [p for k, p in enumerate(pairs) if mask >> k & 1])


@st.composite
def plain_graphs(draw, max_vertices: int = 10) -> InterQlanGraph:
    seed = draw(st.integers(min_value=0, max_value=2**32 - 1))
    return random_plain_graph(random.Random(seed), max_vertices=max_vertices)
