"""Undirected networks: edge-list parsing, neighborhoods and components."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import ParseError, ValidationError


@dataclass(frozen=True, eq=False)
class Network:
    """A simple undirected graph with a fixed node order.

    The node order is the order in which labels first appear in the input.
    It decides which register basis state each node occupies, so it is part
    of the network's identity.
    """

    name: str
    nodes: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]
    index: dict[str, int] = field(repr=False)
    adjacency: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.adjacency.setflags(write=False)

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=0)

    @property
    def is_connected(self) -> bool:
        return len(connected_components(self)) == 1

    def is_bipartite(self) -> bool:
        color = -np.ones(self.n, dtype=int)
        for start in range(self.n):
            if color[start] >= 0:
                continue
            color[start] = 0
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in np.flatnonzero(self.adjacency[i]):
                    if color[j] < 0:
                        color[j] = 1 - color[i]
                        queue.append(j)
                    elif color[j] == color[i]:
                        return False
        return True

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adjacency[i, j])

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self.name == other.name and self.nodes == other.nodes
                and set(self.edges) == set(other.edges))

    def __hash__(self):
        return hash((self.name, self.nodes, frozenset(self.edges)))


def from_edges(edges: Iterable[tuple[str, str]], name: str = "G",
               nodes: Sequence[str] | None = None) -> Network:
    """Build a network from label pairs.

    ``nodes`` fixes the node order explicitly; otherwise labels are ordered by
    first appearance. Duplicate edges collapse; self-loops are rejected.
    """
    order: list[str] = list(nodes) if nodes is not None else []
    index = {label: i for i, label in enumerate(order)}
    if len(index) != len(order):
        raise ValidationError("duplicate node labels")
    pairs = []
    seen = set()
    for u, v in edges:
        if u == v:
            raise ValidationError(f"self-loop on node {u!r}")
        for label in (u, v):
            if label not in index:
                if nodes is not None:
                    raise ValidationError(f"edge endpoint {label!r} not in node list")
                index[label] = len(order)
                order.append(label)
        i, j = index[u], index[v]
        key = (min(i, j), max(i, j))
        if key not in seen:
            seen.add(key)
            pairs.append(key)
    if not order:
        raise ValidationError("empty graph")
    adjacency = np.zeros((len(order), len(order)), dtype=np.int8)
    for i, j in pairs:
        adjacency[i, j] = adjacency[j, i] = 1
    return Network(name=name, nodes=tuple(order), edges=tuple(pairs),
                   index=index, adjacency=adjacency)


def parse_edge_list(text: str, name: str = "G") -> Network:
    """Parse a whitespace-separated edge list.

    Blank lines and lines starting with ``#`` are skipped. Every other line
    must hold exactly two node labels.
    """
    pairs = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            raise ParseError(f"expected 2 node labels, got {len(fields)}", lineno)
        if fields[0] == fields[1]:
            raise ValidationError(f"line {lineno}: self-loop on node {fields[0]!r}")
        pairs.append((fields[0], fields[1]))
    if not pairs:
        raise ValidationError("empty graph")
    return from_edges(pairs, name=name)


def read_edge_list(path: str | Path, name: str | None = None) -> Network:
    path = Path(path)
    text = path.read_bytes().decode("utf-8")
    return parse_edge_list(text, name=name or path.stem)


def format_edge_list(net: Network) -> str:
    return "".join(f"{net.nodes[i]}\t{net.nodes[j]}\n" for i, j in net.edges)


def neighbors(net: Network, i: int) -> set[int]:
    if not 0 <= i < net.n:
        raise IndexError(f"node index {i} out of range for {net.n} nodes")
    return {int(j) for j in np.flatnonzero(net.adjacency[i])}


def connected_components(net: Network) -> list[set[int]]:
    """Components ordered by their smallest node index."""
    seen = np.zeros(net.n, dtype=bool)
    components = []
    for start in range(net.n):
        if seen[start]:
            continue
        seen[start] = True
        comp = {start}
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(net.adjacency[i]):
                if not seen[j]:
                    seen[j] = True
                    comp.add(int(j))
                    queue.append(j)
        components.append(comp)
    return components


def require_connected(nets: Sequence[Network]) -> None:
    for net in nets:
        if net.n < 2 or not net.is_connected:
            raise ValidationError(f"network {net.name!r} must be connected with at least 2 nodes")
