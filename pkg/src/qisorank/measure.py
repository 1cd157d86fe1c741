"""Conditional measurements on multi-register states."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DegenerateConditionError, ValidationError
from .pea import QuantumState

ZERO_TOL = 1e-15


@dataclass(frozen=True, eq=False)
class ConditionalTable:
    """Outcome statistics of the ``rest`` registers given ``focus = condition_value``.

    ``raw_amplitudes`` is the collapsed, still unnormalized state; the
    conditional probabilities are its squared moduli renormalized.
    """

    focus: object
    condition_value: int
    rest: tuple
    rest_shape: tuple[int, ...]
    raw_amplitudes: np.ndarray
    probabilities: np.ndarray
    marginal: float
    provenance: str = "exact"

    @classmethod
    def from_raw(cls, raw, focus=0, condition_value=0, rest=(1,), rest_shape=None,
                 marginal=None, provenance="exact") -> ConditionalTable:
        raw = np.real_if_close(np.asarray(raw))
        mass = float(np.sum(np.abs(raw) ** 2))
        if mass <= ZERO_TOL:
            raise DegenerateConditionError(
                f"condition {focus}={condition_value} has zero probability")
        return cls(focus=focus, condition_value=int(condition_value), rest=tuple(rest),
                   rest_shape=tuple(rest_shape or (raw.size,)), raw_amplitudes=raw,
                   probabilities=np.abs(raw) ** 2 / mass,
                   marginal=mass if marginal is None else float(marginal),
                   provenance=provenance)

    def outcome_tuple(self, flat: int) -> tuple[int, ...]:
        return tuple(int(i) for i in np.unravel_index(flat, self.rest_shape))

    def as_tensor(self) -> np.ndarray:
        return self.probabilities.reshape(self.rest_shape)


def marginal_distribution(state: QuantumState, register) -> np.ndarray:
    """Born-rule marginal of one register over its valid basis values."""
    axis = state.layout.axis_of(register)
    probs = np.abs(state.valid_tensor()) ** 2
    other = tuple(a for a in range(probs.ndim) if a != axis)
    return probs.sum(axis=other)


def collapse(state: QuantumState, register, value: int) -> ConditionalTable:
    """Fix ``register = value`` and keep the unnormalized remainder."""
    layout = state.layout
    axis = layout.axis_of(register)
    size = layout.size_of(register)
    if not 0 <= value < size:
        raise ValidationError(f"value {value} out of range for register {register!r}")
    sub = np.take(state.valid_tensor(), value, axis=axis)
    rest = tuple(r for r in layout.registers if r != register)
    return ConditionalTable.from_raw(sub.ravel(), focus=register, condition_value=value,
                                     rest=rest, rest_shape=sub.shape)


def _check_partition(state: QuantumState, alone, rest: Sequence) -> None:
    if state.layout.t:
        raise ValidationError("grouped collapse needs a network-only state")
    nets = set(range(len(state.layout.network_dims)))
    rest = list(rest)
    if alone in rest or len(set(rest)) != len(rest):
        raise ValidationError("overlapping register partition")
    if {alone, *rest} != nets:
        raise ValidationError(f"registers {alone!r} + {rest!r} do not partition {sorted(nets)}")


def _grouped_tensor(state: QuantumState, alone, rest: Sequence) -> np.ndarray:
    return np.transpose(state.valid_tensor(), (alone, *rest))


def grouped_collapse(state: QuantumState, alone: int, rest: Sequence[int]
                     ) -> dict[int, ConditionalTable]:
    """Condition on each value of ``alone``; outcomes are joint tuples of ``rest``.

    Tuple index order is row-major in the given ``rest`` order. Values of
    ``alone`` with zero probability are left out.
    """
    _check_partition(state, alone, rest)
    tensor = _grouped_tensor(state, alone, rest)
    shape = tensor.shape[1:]
    tables = {}
    for value in range(tensor.shape[0]):
        raw = tensor[value].ravel()
        if np.sum(np.abs(raw) ** 2) <= ZERO_TOL:
            continue
        tables[value] = ConditionalTable.from_raw(raw, focus=alone, condition_value=value,
                                                  rest=tuple(rest), rest_shape=shape)
    return tables


def sample_counts(source, shots: int, seed: int = 0) -> dict[int, int]:
    """Seeded multinomial draw over a table's outcomes or a plain distribution."""
    if shots < 1:
        raise ValidationError("shots must be >= 1")
    p = source.probabilities if isinstance(source, ConditionalTable) else np.asarray(source, float)
    p = p / p.sum()
    counts = np.random.default_rng(seed).multinomial(shots, p)
    return {i: int(c) for i, c in enumerate(counts)}


def sampled_tables(state: QuantumState, alone: int, rest: Sequence[int], shots: int,
                   seed: int = 0) -> dict[int, ConditionalTable]:
    """Estimate :func:`grouped_collapse` tables from ``shots`` joint readouts."""
    _check_partition(state, alone, rest)
    probs = np.abs(_grouped_tensor(state, alone, rest)) ** 2
    counts = np.array(list(sample_counts(probs.ravel(), shots, seed).values()))
    counts = counts.reshape(probs.shape)
    tables = {}
    for value in range(counts.shape[0]):
        row = counts[value].ravel()
        if row.sum() == 0:
            continue
        tables[value] = ConditionalTable.from_raw(
            np.sqrt(row / shots), focus=alone, condition_value=value, rest=tuple(rest),
            rest_shape=probs.shape[1:], provenance="sampled")
    return tables


def total_variation(p, q) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def format_tables_tsv(tables: Mapping[int, ConditionalTable], nets=None) -> str:
    """One row per (condition, outcome): ``condition outcome raw probability``.

    With ``nets`` (the full network list) node labels replace indices; joint
    outcomes are comma-joined.
    """
    lines = ["condition\toutcome\traw_amplitude\tprobability"]
    for value in sorted(tables):
        table = tables[value]
        cond = nets[table.focus].nodes[value] if nets is not None else str(value)
        for flat, (raw, prob) in enumerate(zip(table.raw_amplitudes, table.probabilities)):
            idx = table.outcome_tuple(flat)
            if nets is not None:
                outcome = ",".join(nets[r].nodes[i] for r, i in zip(table.rest, idx))
            else:
                outcome = ",".join(str(i) for i in idx)
            raw_text = f"{raw.real:.10g}" if np.isreal(raw) else f"{complex(raw):.10g}"
            lines.append(f"{cond}\t{outcome}\t{raw_text}\t{prob:.10g}")
    return "\n".join(lines) + "\n"
