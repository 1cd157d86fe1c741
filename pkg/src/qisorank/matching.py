"""Greedy node alignment from conditional measurement tables."""

from __future__ import annotations

import json
import warnings as _warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .measure import ConditionalTable
from .netio import Network

PROVENANCE = ("forward-conditional", "reverse-conditional", "combined", "residual-statistics")
TIE_TOL = 1e-7


@dataclass(frozen=True)
class MatchConfig:
    neighbor_priority: bool = True
    tie_break: str = "lowest-index"
    min_score: float = 0.0
    use_reverse_pass: bool = False

    def __post_init__(self):
        if not 0.0 <= self.min_score <= 1.0:
            raise ValidationError("min_score must lie in [0, 1]")
        if self.tie_break != "lowest-index":
            raise ValidationError(f"unsupported tie-break rule {self.tie_break!r}")


@dataclass
class Alignment:
    networks: tuple[str, ...]
    tuples: list[tuple[str, ...]] = field(default_factory=list)
    indices: list[tuple[int, ...]] = field(default_factory=list)
    scores: list[float] = field(default_factory=list)
    provenance: list[str] = field(default_factory=list)
    component_summary: list[int] = field(default_factory=list)
    selected: list[int] = field(default_factory=list)
    edge_correctness: float | None = None
    warnings: list[str] = field(default_factory=list)

    def __len__(self):
        return len(self.tuples)

    def mapping(self, k: int = 1) -> dict[int, int]:
        """Index map from network 0 into network ``k``."""
        return {t[0]: t[k] for t in self.indices}

    def to_dict(self) -> dict:
        ec = self.edge_correctness
        return {
            "networks": list(self.networks),
            "tuples": [{"nodes": list(nodes), "score": score, "provenance": prov}
                       for nodes, score, prov in zip(self.tuples, self.scores, self.provenance)],
            "edge_correctness": None if ec is None or np.isnan(ec) else ec,
            "component_summary": list(self.component_summary),
            "selected": list(self.selected),
            "warnings": list(self.warnings),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


# --- score tensors ---------------------------------------------------------

def _setting_tensors(tables: Mapping[int, ConditionalTable], dims: Sequence[int]):
    """Joint mass and conditional probability tensors in canonical axis order."""
    if not tables:
        raise ValidationError("no conditional tables supplied")
    first = next(iter(tables.values()))
    order = (first.focus, *first.rest)
    if sorted(order) != list(range(len(dims))):
        raise ValidationError(f"tables cover registers {order}, expected all of 0..{len(dims) - 1}")
    shape = tuple(dims[r] for r in order)
    joint = np.zeros(shape)
    cond = np.zeros(shape)
    present = np.zeros(shape[0], dtype=bool)
    for value, table in tables.items():
        if (table.focus, *table.rest) != order:
            raise ValidationError("inconsistent register order across tables")
        probs = table.as_tensor()
        joint[value] = table.marginal * probs
        cond[value] = probs
        present[value] = True
    axes = np.argsort(order)
    present_full = np.broadcast_to(
        present.reshape((-1,) + (1,) * (len(dims) - 1)), shape)
    return (np.transpose(joint, axes), np.transpose(cond, axes),
            np.transpose(present_full, axes))


def _top_mask(cond: np.ndarray) -> np.ndarray:
    flat = cond.reshape(cond.shape[0], -1)
    best = flat.max(axis=1, keepdims=True)
    return (flat >= best - TIE_TOL) & (flat > 0)


class _Greedy:
    """Shared greedy state across passes over different score tensors."""

    def __init__(self, nets: Sequence[Network], cfg: MatchConfig):
        self.nets = list(nets)
        self.cfg = cfg
        self.dims = tuple(n.n for n in nets)
        self.matched = [np.zeros(d, dtype=bool) for d in self.dims]
        self.picks: list[tuple[tuple[int, ...], float, str]] = []
        self.image: dict[int, tuple[int, ...]] = {}

    def _support(self, cands: np.ndarray) -> np.ndarray:
        # For every matched x' with image y': +1 when x ~ x' and each y_k ~ y'_k
        # (edge conserved), -1 when adjacency disagrees in any network.
        adj0 = self.nets[0].adjacency
        support = np.zeros(len(cands), dtype=int)
        for xp, img in self.image.items():
            a0 = adj0[cands[:, 0], xp].astype(bool)
            agree = np.ones(len(cands), dtype=bool)
            for k in range(1, len(self.dims)):
                agree &= self.nets[k].adjacency[cands[:, k], img[k]].astype(bool) == a0
            support += np.where(agree, a0.astype(int), -1)
        return support

    def run(self, joint, cond, provenance: np.ndarray, threshold: float) -> None:
        top = _top_mask(cond).reshape(cond.shape)
        scale = joint.max() if joint.size else 0.0
        while True:
            avail = (joint > 0) & (cond >= threshold - TIE_TOL)
            for k, used in enumerate(self.matched):
                shape = [1] * len(self.dims)
                shape[k] = -1
                avail &= ~used.reshape(shape)
            cands = np.argwhere(avail)
            if not len(cands):
                return
            if self.cfg.neighbor_priority and self.image:
                adj0 = self.nets[0].adjacency
                matched_x = np.fromiter(self.image, dtype=int)
                in_frontier = adj0[np.ix_(cands[:, 0], matched_x)].any(axis=1)
                if in_frontier.any():
                    cands = cands[in_frontier]
                    support = self._support(cands)
                    cands = cands[support == support.max()]
            values = joint[tuple(cands.T)]
            best = values.max()
            cands = cands[values >= best - TIE_TOL * scale]
            pick = tuple(int(i) for i in cands[0])  # argwhere order: lowest index first
            label = PROVENANCE[provenance[pick]] if top[pick] else "residual-statistics"
            self.picks.append((pick, float(cond[pick]), label))
            self.image[pick[0]] = pick
            for k, i in enumerate(pick):
                self.matched[k][i] = True

    def alignment(self) -> Alignment:
        nets = self.nets
        al = Alignment(networks=tuple(n.name for n in nets))
        for idx, score, label in self.picks:
            al.indices.append(idx)
            al.tuples.append(tuple(nets[k].nodes[i] for k, i in enumerate(idx)))
            al.scores.append(min(max(score, 0.0), 1.0))
            al.provenance.append(label)
        _summarize_components(al, nets)
        if al.tuples:
            with _warnings.catch_warnings():
                _warnings.simplefilter("ignore")
                al.edge_correctness = edge_correctness(al, nets)
        return al


def _conserved(al: Alignment, nets: Sequence[Network], a: int, b: int) -> bool:
    ia, ib = al.indices[a], al.indices[b]
    return all(nets[k].has_edge(ia[k], ib[k]) for k in range(len(nets)))


def _summarize_components(al: Alignment, nets: Sequence[Network]) -> None:
    """Components of the conserved-edge subgraph over matched network-0 nodes."""
    n = len(al.indices)
    links = {i: [j for j in range(n) if j != i and _conserved(al, nets, i, j)] for i in range(n)}
    seen, comps = set(), []
    for start in range(n):
        if start in seen or not links[start]:
            continue
        comp, stack = [], [start]
        seen.add(start)
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in links[i]:
                if j not in seen:
                    seen.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    comps.sort(key=lambda c: (-len(c), c[0]))
    al.component_summary = [len(c) for c in comps]
    al.selected = comps[0] if comps else []
    if n and not comps:
        al.warnings.append("no matched edge is conserved; no connected solution selected")


def match_pairwise(tables: Mapping[int, ConditionalTable],
                   reverse_tables: Mapping[int, ConditionalTable] | None,
                   nets: Sequence[Network], cfg: MatchConfig = MatchConfig()) -> Alignment:
    """Greedy two-network alignment from forward (and optional reverse) tables.

    The first pick is the pair with the largest joint mass
    ``P(x) * P(y | x)``. After that, unmatched neighbours of already matched
    ``x`` nodes go first, preferring pairs that close the most conserved
    edges, then the largest mass. Each pair taken from the top of its
    conditional table is recorded as measured; pairs reached further down
    the table are recorded as residual statistics. With ``reverse_tables``
    the forward and reverse scores are averaged before ranking.
    """
    if len(nets) != 2:
        raise ValidationError("match_pairwise aligns exactly two networks")
    dims = tuple(n.n for n in nets)
    joint, cond, present = _setting_tensors(tables, dims)
    provenance = np.zeros(dims, dtype=int)
    if reverse_tables:
        rj, rc, rp = _setting_tensors(reverse_tables, dims)
        both = present & rp
        joint = np.where(both, 0.5 * (joint + rj), np.where(present, joint, rj))
        cond = np.where(both, 0.5 * (cond + rc), np.where(present, cond, rc))
        provenance = np.where(both, 2, np.where(present, 0, 1))
    return _finish(joint, cond, provenance, nets, cfg)


def _finish(joint, cond, provenance, nets, cfg, extra_settings=()) -> Alignment:
    greedy = _Greedy(nets, cfg)
    if not np.any(joint > 0):
        al = greedy.alignment()
        al.warnings.append("all matching scores are zero; empty alignment")
        return al
    greedy.run(joint, cond, provenance, cfg.min_score)
    for j, c, p in extra_settings:
        greedy.run(j, c, p, cfg.min_score)
    if cfg.min_score > 0:
        residual = np.full(provenance.shape, PROVENANCE.index("residual-statistics"))
        greedy.run(joint, cond, residual, 0.0)
    return greedy.alignment()


def match_multiway(settings: Sequence[Mapping[int, ConditionalTable]],
                   nets: Sequence[Network], cfg: MatchConfig = MatchConfig()) -> Alignment:
    """Greedy alignment of several networks from grouped conditional tables.

    The first setting conditions network 0 on joint tuples of the others and
    drives the matching. Later settings (another register measured alone)
    are averaged with the earlier ones and only used to place nodes the
    first setting left unmatched.
    """
    if not settings:
        raise ValidationError("at least one measurement setting is required")
    dims = tuple(n.n for n in nets)
    first = next(iter(settings[0].values()), None)
    if first is None or first.focus != 0:
        raise ValidationError("the first setting must measure network 0 alone")
    joint, cond, _ = _setting_tensors(settings[0], dims)
    provenance = np.zeros(dims, dtype=int)
    extra = []
    j_sum, c_sum = joint.copy(), cond.copy()
    for k, setting in enumerate(settings[1:], start=2):
        j, c, _ = _setting_tensors(setting, dims)
        j_sum += j
        c_sum += c
        extra.append((j_sum / k, c_sum / k, np.full(dims, PROVENANCE.index("combined"))))
    return _finish(joint, cond, provenance, nets, cfg, extra_settings=extra[-1:])


def edge_correctness(alignment: Alignment, nets: Sequence[Network]) -> float:
    """Fraction of network-0 edges between matched nodes whose images are
    edges in every other network."""
    if not alignment.indices:
        _warnings.warn("edge correctness undefined for an empty alignment")
        return float("nan")
    image = {t[0]: t for t in alignment.indices}
    total = kept = 0
    for i, j in nets[0].edges:
        if i in image and j in image:
            total += 1
            kept += all(nets[k].has_edge(image[i][k], image[j][k]) for k in range(1, len(nets)))
    if total == 0:
        _warnings.warn("no edge of network 0 has both endpoints matched")
        return float("nan")
    return kept / total
