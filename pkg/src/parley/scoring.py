"""State-weighted scoring: cause evaluation, effect application, NPC
response selection, and cause-based node coloring.

Everything here is a pure function; all state lives in the arguments.
A score is the general cause weight plus the inner products of the cause
weight vectors with the current player and conversant state vectors, so
its magnitude never exceeds 1 + |player states| + |NPC states|.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Sequence

from .errors import DimensionMismatchError, NoCandidatesError
from .model import CauseWeights, StateVector, clamp


class SelectionMode(str, Enum):
    ARGMAX = "argmax"
    SOFTMAX_SAMPLE = "softmax"


@dataclass(frozen=True)
class SelectionPolicy:
    """How an NPC turn picks among scored candidates.

    Argmax is deterministic (ties fall to the lowest edge order) and is the
    default because it keeps authoring and testing reproducible. Softmax
    sampling draws proportionally to exp(score/temperature) from a seeded
    generator, for the probabilistic reading of selection.
    """

    mode: SelectionMode = SelectionMode.ARGMAX
    temperature: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.temperature <= 0:
            raise ValueError(f"temperature must be positive, got {self.temperature!r}")

    def new_rng(self) -> random.Random:
        return random.Random(self.seed)


def cause_score(
    cause: CauseWeights,
    player_states: StateVector,
    npc_states: StateVector,
) -> float:
    """Score one candidate line against the current states.

    Returns the general weight plus the dot products of the player and NPC
    weight vectors with the matching state vectors. Raises
    :class:`DimensionMismatchError` if a weight vector does not line up
    with its state vector.
    """
    if len(cause.player) != len(player_states):
        raise DimensionMismatchError(
            f"cause has {len(cause.player)} player weights for {len(player_states)} player states"
        )
    if len(cause.npc) != len(npc_states):
        raise DimensionMismatchError(
            f"cause has {len(cause.npc)} NPC weights for {len(npc_states)} NPC states"
        )
    score = cause.general
    for w, s in zip(cause.player, player_states.values):
        score += w * s
    for w, s in zip(cause.npc, npc_states.values):
        score += w * s
    return score


def apply_effect(states: StateVector, effects: Sequence[float]) -> StateVector:
    """Add ``effects`` to ``states`` componentwise, clamped into [-1, 1].

    The input vector is untouched; a new vector is returned.
    """
    if len(effects) != len(states):
        raise DimensionMismatchError(
            f"effect has {len(effects)} components for {len(states)} states"
        )
    return StateVector(
        names=states.names,
        values=tuple(clamp(s + e) for s, e in zip(states.values, effects)),
    )


@dataclass(frozen=True)
class Candidate:
    """One selectable successor on an NPC turn.

    ``cause`` is None for structural nodes (references, subdialogs,
    terminations) competing alongside NPC items; they score a neutral 0.
    """

    node_id: str
    cause: CauseWeights | None
    conversant_id: str | None = None


def score_candidates(
    candidates: Sequence[Candidate],
    player_states: StateVector,
    npc_states_of: Mapping[str, StateVector],
) -> list[float]:
    scores: list[float] = []
    for candidate in candidates:
        if candidate.cause is None:
            scores.append(0.0)
            continue
        if candidate.conversant_id is None:
            raise DimensionMismatchError(
                f"candidate {candidate.node_id!r} has a cause but no conversant"
            )
        scores.append(
            cause_score(candidate.cause, player_states, npc_states_of[candidate.conversant_id])
        )
    return scores


def select_npc_response(
    candidates: Sequence[Candidate],
    player_states: StateVector,
    npc_states_of: Mapping[str, StateVector],
    policy: SelectionPolicy,
    rng: random.Random | None = None,
) -> str:
    """Pick the node id the NPC turn follows.

    Candidates must already be in edge order: argmax breaks ties by taking
    the first maximal score. For softmax sampling, pass ``rng`` to let
    draws evolve across a session; without one, a generator is seeded
    fresh from the policy so identical inputs give identical output.
    """
    if not candidates:
        raise NoCandidatesError("NPC turn with no candidates")
    scores = score_candidates(candidates, player_states, npc_states_of)

    if policy.mode is SelectionMode.ARGMAX or len(candidates) == 1:
        best = 0
        for i in range(1, len(scores)):
            if scores[i] > scores[best]:
                best = i
        return candidates[best].node_id

    if rng is None:
        rng = policy.new_rng()
    top = max(scores)
    weights = [math.exp((s - top) / policy.temperature) for s in scores]
    total = sum(weights)
    pick = rng.random() * total
    cumulative = 0.0
    for candidate, weight in zip(candidates, weights):
        cumulative += weight
        if pick < cumulative:
            return candidate.node_id
    return candidates[-1].node_id  # float round-off on the last boundary


class ColorKind(str, Enum):
    NEUTRAL = "neutral"
    POSITIVE = "positive"
    NEGATIVE = "negative"


#: Weight means closer to zero than this render as neutral (avoids float
#: noise tinting nodes that are zero for all practical purposes).
NEUTRAL_EPSILON = 1e-9


@dataclass(frozen=True)
class ColorClass:
    """Viewer hint: white for neutral cause, green shades for positive,
    red shades for negative, intensity from the mean weight."""

    kind: ColorKind
    intensity: float = 0.0


def color_class(cause: CauseWeights) -> ColorClass:
    """Classify a cause by the mean of all its components (general included)."""
    components = list(cause.components())
    mean = sum(components) / len(components)
    if abs(mean) <= NEUTRAL_EPSILON:
        return ColorClass(ColorKind.NEUTRAL, 0.0)
    if mean > 0:
        return ColorClass(ColorKind.POSITIVE, min(1.0, mean))
    return ColorClass(ColorKind.NEGATIVE, min(1.0, -mean))
