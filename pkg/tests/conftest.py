import random

import pytest

from dpnia import MultiplexInstance, SocialNetwork


def build_instance(edges1, edges2, phi_labels, psi_labels=(), nodes1=(), nodes2=()):
    """Label-level instance builder for hand-written fixtures."""
    g1 = SocialNetwork.from_edges(edges1, nodes=nodes1)
    g2 = SocialNetwork.from_edges(edges2, nodes=nodes2)
    phi = [(g1.index_of(a), g2.index_of(b)) for a, b in phi_labels]
    psi = [(g1.index_of(a), g2.index_of(b)) for a, b in psi_labels]
    return MultiplexInstance(g1, g2, phi, psi)


def random_multiplex(seed, n_max=30, phi_max=10, psi_max=4, p=0.15):
    """Random two-layer instance with a random partial matching.

    Layer sizes, density and pair counts all vary with the seed.
    """
    rng = random.Random(seed)
    n1 = rng.randint(4, n_max)
    n2 = rng.randint(4, n_max)
    g1 = SocialNetwork.from_edges((), nodes=(f"a{i}" for i in range(n1)))
    g2 = SocialNetwork.from_edges((), nodes=(f"b{i}" for i in range(n2)))
    for net, n in ((g1, n1), (g2, n2)):
        for i in range(n):
            for j in range(i + 1, n):
                if rng.random() < p:
                    net.add_edge(i, j)
    total = min(n1, n2)
    n_pairs = rng.randint(2, max(2, min(phi_max + psi_max, total)))
    left = rng.sample(range(n1), n_pairs)
    right = rng.sample(range(n2), n_pairs)
    pairs = sorted(zip(left, right))
    n_psi = min(psi_max, max(0, n_pairs - 2))
    psi = pairs[:n_psi]
    phi = pairs[n_psi:]
    return MultiplexInstance(g1, g2, phi, psi)


@pytest.fixture
def t1():
    """Small two-layer fixture with three observed pairs used throughout."""
    return build_instance(
        edges1=[("a4", "a1"), ("a4", "a2"), ("a4", "a3"),
                ("a5", "a1"), ("a5", "a2")],
        edges2=[("b4", "b1"), ("b4", "b2"), ("b5", "b1"),
                ("b5", "b2"), ("b6", "b1")],
        phi_labels=[("a1", "b1"), ("a2", "b2"), ("a3", "b3")],
        nodes1=[f"a{i}" for i in range(1, 7)],
        nodes2=[f"b{i}" for i in range(1, 7)],
    )


def lab1(inst, label):
    return inst.g1.index_of(label)


def lab2(inst, label):
    return inst.g2.index_of(label)
