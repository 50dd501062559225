"""Shared fixtures and Hypothesis strategies."""

from __future__ import annotations

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from dcmulticast import EnergyModel, MulticastInstance, Network
from dcmulticast.experiments import random_small_instance

settings.register_profile(
    "default",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture
def two_node():
    """u=0 awake in slot 1, v=1 awake in slot 2, one edge, K=2."""
    return Network([0, 1], [(0, 1)], 2, {0: {1}, 1: {2}})


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def networks(draw, min_nodes=2, max_nodes=8, max_K=4, connected=True):
    """Random network; connected ones grow from a random spanning tree."""
    n = draw(st.integers(min_nodes, max_nodes))
    K = draw(st.integers(1, max_K))
    edges = set()
    if connected:
        for v in range(1, n):
            edges.add((draw(st.integers(0, v - 1)), v))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    extra = draw(st.lists(st.sampled_from(pairs), max_size=len(pairs))) if pairs else []
    edges.update(extra)
    slots = st.frozensets(st.integers(1, K), min_size=1, max_size=K)
    schedule = {u: draw(slots) for u in range(n)}
    return Network(range(n), edges, K, schedule)


@st.composite
def instances(draw, min_nodes=2, max_nodes=8, max_K=4, min_terminals=1):
    """Connected network plus a terminal set whose source is its first draw."""
    net = draw(networks(min_nodes=max(min_nodes, min_terminals), max_nodes=max_nodes, max_K=max_K))
    n = len(net.nodes)
    terms = draw(st.lists(st.integers(0, n - 1), min_size=min_terminals, max_size=n, unique=True))
    return net, MulticastInstance(terms, terms[0])


energies = st.builds(
    lambda e_r, extra: EnergyModel(e_r + extra, e_r),
    st.integers(0, 20),
    st.integers(0, 20),
)


def seeded_instances(count, seed, **kw):
    """Deterministic batch of Erdos-Renyi instances for the exhaustive checks."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(kw.get("min_nodes", 2), kw.get("max_nodes", 7) + 1))
        K = int(rng.integers(1, kw.get("max_K", 4) + 1))
        out.append(
            random_small_instance(
                rng, n, K, edge_prob=kw.get("edge_prob", 0.45), n_terminals=None
            )
        )
    return out
