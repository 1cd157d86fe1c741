"""End-to-end alignment: networks -> operator -> phase estimation -> tables -> matching."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .matching import Alignment, MatchConfig, match_multiway, match_pairwise
from .measure import ConditionalTable, grouped_collapse, sampled_tables
from .netio import Network, require_connected
from .operators import (attach_scores, hermitian_decompose, kron_support_connected,
                        stochastic_operator)
from .pea import PeaOutcome, recovered_eigenvector, run_pea

MODELS = ("closest-hermitian", "exact-stochastic")
MAX_NETWORKS = 4


@dataclass
class AlignmentRun:
    alignment: Alignment
    outcome: PeaOutcome
    model: object
    settings: list[tuple[str, dict[int, ConditionalTable]]] = field(default_factory=list)

    @property
    def eigenvector(self) -> np.ndarray:
        return recovered_eigenvector(self.outcome)


def build_model(nets: Sequence[Network], model: str = "closest-hermitian",
                scores: np.ndarray | None = None):
    if model not in MODELS:
        raise ValidationError(f"unknown model {model!r}; choose from {MODELS}")
    A = stochastic_operator(nets)
    if model == "exact-stochastic":
        if scores is not None:
            raise ValidationError("score files need the closest-hermitian model")
        return A
    H = hermitian_decompose(A)
    return H if scores is None else attach_scores(H, scores)


def measurement_settings(outcome: PeaOutcome, m: int, extra: bool, mode: str = "exact",
                         shots: int = 1024, seed: int = 0):
    """Forward setting (network 0 alone), plus network 1 alone when ``extra``."""
    state = outcome.post_state
    alones = [0, 1] if extra else [0]
    settings = []
    for k, alone in enumerate(alones):
        rest = [r for r in range(m) if r != alone]
        if mode == "sampled":
            tables = sampled_tables(state, alone, rest, shots, seed + 1 + k)
        else:
            tables = grouped_collapse(state, alone, rest)
        name = ("forward" if alone == 0 else "reverse") if m == 2 else f"grouped_G{alone + 1}"
        settings.append((name, tables))
    return settings


def align_networks(nets: Sequence[Network], model: str = "closest-hermitian",
                   mode: str = "exact", t: int = 8, shots: int = 1024, seed: int = 0,
                   scores: np.ndarray | None = None,
                   cfg: MatchConfig = MatchConfig()) -> AlignmentRun:
    if not 2 <= len(nets) <= MAX_NETWORKS:
        raise ValidationError(f"align 2 to {MAX_NETWORKS} networks, got {len(nets)}")
    if scores is not None and len(nets) != 2:
        raise ValidationError("score files are defined for network pairs only")
    require_connected(nets)
    op = build_model(nets, model, scores)
    outcome = run_pea(op, t=t, mode=mode, shots=shots, seed=seed)
    extra = scores is not None or cfg.use_reverse_pass
    settings = measurement_settings(outcome, len(nets), extra, mode, shots, seed)
    if len(nets) == 2:
        reverse = settings[1][1] if extra else None
        alignment = match_pairwise(settings[0][1], reverse, nets, cfg)
    else:
        alignment = match_multiway([tables for _, tables in settings], nets, cfg)
    notes = list(outcome.warnings)
    if not kron_support_connected(nets):
        notes.append("Kronecker product graph is disconnected (several bipartite networks); "
                     "the principal eigenvector is not unique")
    alignment.warnings = notes + alignment.warnings
    return AlignmentRun(alignment=alignment, outcome=outcome, model=op, settings=settings)
