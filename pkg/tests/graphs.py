"""Graph fixtures and seeded random graph generators for the test suite."""

import itertools

import numpy as np

from qisorank.netio import Network, from_edges


def path(n, name="P"):
    labels = [f"{name}{i}" for i in range(n)]
    return from_edges(zip(labels, labels[1:]), name=name, nodes=labels)


def cycle(n, name="C"):
    labels = [f"{name}{i}" for i in range(n)]
    return from_edges([(labels[i], labels[(i + 1) % n]) for i in range(n)], name=name,
                      nodes=labels)


def complete(n, name="K"):
    labels = [f"{name}{i}" for i in range(n)]
    return from_edges(itertools.combinations(labels, 2), name=name, nodes=labels)


def star(leaves, name="S"):
    labels = [f"{name}c"] + [f"{name}{i}" for i in range(leaves)]
    return from_edges([(labels[0], x) for x in labels[1:]], name=name, nodes=labels)


def uniform_connected(rng, n, name="G"):
    """Uniform draw from connected labelled graphs on ``n`` nodes.

    G(n, 1/2) gives every labelled graph the same weight; rejecting the
    disconnected draws leaves the uniform law on connected ones.
    """
    labels = [f"{name}{i}" for i in range(n)]
    pairs = list(itertools.combinations(range(n), 2))
    while True:
        keep = rng.random(len(pairs)) < 0.5
        edges = [(labels[i], labels[j]) for (i, j), k in zip(pairs, keep) if k]
        if not edges:
            continue
        net = from_edges(edges, name=name, nodes=labels)
        if net.is_connected:
            return net


def random_pairs(seed, count, sizes=(3, 4, 5)):
    rng = np.random.default_rng(seed)
    return [(uniform_connected(rng, int(rng.choice(sizes)), "a"),
             uniform_connected(rng, int(rng.choice(sizes)), "b")) for _ in range(count)]


def random_tuples(seed, count, m, sizes=(3, 4), connected_support=False):
    """Random ``m``-tuples of networks; optionally only those whose
    Kronecker product graph is connected (at most one bipartite factor)."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        nets = [uniform_connected(rng, int(rng.choice(sizes)), chr(ord("a") + k))
                for k in range(m)]
        if connected_support and sum(n.is_bipartite() for n in nets) > 1:
            continue
        out.append(nets)
    return out


def relabel(net, rng, name="H"):
    """Copy of ``net`` with shuffled node order and fresh labels.

    Returns the copy and ``perm`` with ``perm[i]`` the copy's index of
    original node ``i``.
    """
    perm = rng.permutation(net.n)
    labels = [f"{name}{k}" for k in range(net.n)]
    edges = [(labels[perm[i]], labels[perm[j]]) for i, j in net.edges]
    return from_edges(edges, name=name, nodes=labels), perm
