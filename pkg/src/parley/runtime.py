"""Conversation execution: a session walks the graph, alternating player
menus with automatic NPC turns.

A session rests only in two phases: awaiting a player choice, or ended.
Everything between (scored NPC selections, reference jumps, subdialog
push/pop, termination handling) happens inside auto-advance, bounded by a
step guard so cyclic graphs cannot hang the engine.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .errors import (
    DialogError,
    InvalidChoiceError,
    InvalidPhaseError,
    CycleOverflowError,
    NoCandidatesError,
    NotFoundError,
    ReplayError,
    UnmatchedBranchError,
)
from .model import (
    DialogItem,
    DialogNode,
    Edge,
    Project,
    ReferenceNode,
    StartNode,
    StateVector,
    SubdialogNode,
    TerminationNode,
    node_kind,
)
from .scoring import Candidate, SelectionPolicy, apply_effect, score_candidates, select_npc_response

DEFAULT_MAX_STEPS = 10_000


class PhaseKind(str, Enum):
    AWAITING_CHOICE = "awaiting-choice"
    NPC_TURN = "npc-turn"
    ENDED = "ended"


@dataclass(frozen=True)
class Phase:
    kind: PhaseKind
    direction: str | None = None
    termination_value: str | None = None


@dataclass(frozen=True)
class MenuOption:
    """A selectable player line: label falls back from the menu label to the
    cue to the direction, so it is never empty on a well-formed item."""

    node_id: str
    label: str
    order: int


@dataclass(frozen=True)
class TranscriptEntry:
    """One visited node. Items carry actor/cue/direction; NPC items picked on
    an automatic turn also record the score they won with."""

    node_id: str
    kind: str
    actor_id: str | None = None
    cue: str | None = None
    direction: str | None = None
    score: float | None = None
    states_after: dict = field(default_factory=dict)

    def as_payload(self) -> dict:
        return {
            "nodeId": self.node_id,
            "kind": self.kind,
            "actorId": self.actor_id,
            "cue": self.cue,
            "direction": self.direction,
            "score": self.score,
            "statesAfter": self.states_after,
        }


@dataclass(frozen=True)
class StateEdit:
    """A manual state change scheduled within a replay.

    ``step`` counts consumed choices: step 0 edits become the start
    overrides (they precede the opening auto-advance), step k edits apply
    after choice k-1 has fully resolved, and step len(choices) edits apply
    at the very end.
    """

    step: int
    scope: str  # "player" or an NPC actor id
    name: str
    value: float


class SimulationSession:
    """Live traversal state over an immutable project.

    Confine a session to one logical thread at a time; distinct sessions
    over the same project may run concurrently.
    """

    def __init__(
        self,
        project: Project,
        policy: SelectionPolicy | None = None,
        max_steps: int = DEFAULT_MAX_STEPS,
    ):
        self.project = project
        self.policy = policy or SelectionPolicy()
        self.max_steps = max_steps
        self.rng = self.policy.new_rng()
        self.player_states = StateVector.from_declarations(project.player_state_decls)
        self.npc_states: dict[str, StateVector] = {
            actor.id: StateVector.from_declarations(project.npc_state_decls)
            for actor in project.npc_actors()
        }
        self.current_node_id: str | None = None
        self.subdialog_stack: list[str] = []
        self.transcript: list[TranscriptEntry] = []
        self.phase = Phase(PhaseKind.NPC_TURN)
        self._menu_edges: tuple[Edge, ...] = ()

    # -- public interface ---------------------------------------------------

    def menu_options(self) -> list[MenuOption]:
        """The player items selectable right now, in edge order."""
        if self.phase.kind is not PhaseKind.AWAITING_CHOICE:
            raise InvalidPhaseError(
                f"no menu while session is {self.phase.kind.value}"
            )
        options: list[MenuOption] = []
        for edge in self._menu_edges:
            item = self.project.node(edge.to_id)
            assert isinstance(item, DialogItem)
            label = item.menu_label or item.cue or item.direction or ""
            options.append(MenuOption(item.id, label, edge.order))
        return options

    def choose(self, option_node_id: str) -> None:
        """Speak the chosen player line, then auto-advance to the next rest."""
        if self.phase.kind is not PhaseKind.AWAITING_CHOICE:
            raise InvalidPhaseError(
                f"cannot choose while session is {self.phase.kind.value}"
            )
        if all(edge.to_id != option_node_id for edge in self._menu_edges):
            raise InvalidChoiceError(
                f"node {option_node_id!r} is not one of the current menu options"
            )
        item = self.project.node(option_node_id)
        self._menu_edges = ()
        self.phase = Phase(PhaseKind.NPC_TURN)
        self._enter(item)
        self._advance()

    def set_state(self, scope: str, name: str, value: float) -> None:
        """Manually set one state (clamped). No traversal side effects."""
        if scope == "player":
            self.player_states = self.player_states.with_value(name, value)
        elif scope in self.npc_states:
            self.npc_states[scope] = self.npc_states[scope].with_value(name, value)
        else:
            raise NotFoundError(f"unknown state scope {scope!r}")

    def states_snapshot(self) -> dict:
        """Player states plus every NPC's states, in declaration order."""
        return {
            "player": self.player_states.as_dict(),
            "npcs": {
                npc_id: self.npc_states[npc_id].as_dict()
                for npc_id in sorted(self.npc_states)
            },
        }

    # -- traversal ----------------------------------------------------------

    def _apply_item_effect(self, item: DialogItem) -> None:
        self.player_states = apply_effect(self.player_states, item.effect.player)
        if item.conversant_id not in self.npc_states:
            raise NotFoundError(
                f"item {item.id!r} addresses unknown conversant {item.conversant_id!r}"
            )
        self.npc_states[item.conversant_id] = apply_effect(
            self.npc_states[item.conversant_id], item.effect.npc
        )

    def _apply_start_effect(self, start: StartNode) -> None:
        # A start node has no conversant; its NPC-side effect seeds every NPC.
        self.player_states = apply_effect(self.player_states, start.effect.player)
        for npc_id in self.npc_states:
            self.npc_states[npc_id] = apply_effect(self.npc_states[npc_id], start.effect.npc)

    def _enter(self, node: DialogNode, score: float | None = None) -> None:
        self.current_node_id = node.id
        actor_id = cue = direction = None
        if isinstance(node, StartNode):
            self._apply_start_effect(node)
        elif isinstance(node, DialogItem):
            self._apply_item_effect(node)
            actor_id, cue, direction = node.actor_id, node.cue, node.direction
        elif isinstance(node, TerminationNode):
            direction = node.direction
        self.transcript.append(
            TranscriptEntry(
                node_id=node.id,
                kind=node_kind(node),
                actor_id=actor_id,
                cue=cue,
                direction=direction,
                score=score,
                states_after=self.states_snapshot(),
            )
        )

    def _branch_edges(self, sub_id: str, value: str | None) -> tuple[Edge, ...]:
        edges = self.project.outgoing(sub_id)
        if value:
            matched = tuple(e for e in edges if e.branch_label == value)
            if not matched:
                raise UnmatchedBranchError(
                    f"subdialog {sub_id!r} has no branch matching termination value {value!r}"
                )
        else:
            matched = tuple(e for e in edges if e.branch_label is None)
            if len(matched) != 1:
                raise UnmatchedBranchError(
                    f"subdialog {sub_id!r} needs exactly one unlabeled branch for a "
                    f"valueless termination, found {len(matched)}"
                )
        return matched

    def _select(self, pending: Sequence[Edge]) -> tuple[Edge, float | None]:
        nodes = [self.project.node(e.to_id) for e in pending]
        candidates = [
            Candidate(n.id, n.cause, n.conversant_id)
            if isinstance(n, DialogItem)
            else Candidate(n.id, None, None)
            for n in nodes
        ]
        scores = score_candidates(candidates, self.player_states, self.npc_states)
        if len(pending) == 1:
            index = 0
        else:
            chosen = select_npc_response(
                candidates, self.player_states, self.npc_states, self.policy, rng=self.rng
            )
            index = next(i for i, c in enumerate(candidates) if c.node_id == chosen)
        score = scores[index] if isinstance(nodes[index], DialogItem) else None
        return pending[index], score

    def _advance(self) -> None:
        """Run NPC turns and structural nodes until a menu or the end."""
        steps = 0

        def count() -> None:
            nonlocal steps
            steps += 1
            if steps > self.max_steps:
                raise CycleOverflowError(
                    f"auto-advance exceeded {self.max_steps} steps without reaching "
                    "a menu or a termination (cyclic graph?)",
                    steps=self.max_steps,
                )

        while True:
            node = self.project.node(self.current_node_id)

            if isinstance(node, ReferenceNode):
                count()
                self._enter(self.project.start_named(node.target_start_name))
                continue
            if isinstance(node, SubdialogNode):
                self.subdialog_stack.append(node.id)
                count()
                self._enter(self.project.start_named(node.target_start_name))
                continue
            if isinstance(node, TerminationNode):
                if not self.subdialog_stack:
                    self.phase = Phase(PhaseKind.ENDED, node.direction, node.termination_value)
                    self._menu_edges = ()
                    return
                sub_id = self.subdialog_stack.pop()
                self.current_node_id = sub_id  # back at the invoking node
                pending = self._branch_edges(sub_id, node.termination_value)
            else:
                pending = self.project.outgoing(node.id)

            player_edges = tuple(
                e for e in pending if self.project.is_player_item(self.project.node(e.to_id))
            )
            if player_edges:
                self._menu_edges = player_edges
                self.phase = Phase(PhaseKind.AWAITING_CHOICE)
                return
            if not pending:
                raise NoCandidatesError(
                    f"node {self.current_node_id!r} is a dead end: NPC turn with no options"
                )
            edge, score = self._select(pending)
            count()
            self._enter(self.project.node(edge.to_id), score=score)


def start_conversation(
    project: Project,
    start_name: str,
    policy: SelectionPolicy | None = None,
    state_overrides: Mapping[str, Mapping[str, float]] | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> SimulationSession:
    """Open a session at a named start node.

    States come up at their declared defaults, the start node's effect is
    applied, overrides (keyed "player" or NPC id) are set clamped, and the
    session advances through any immediate NPC turns until it rests.
    """
    start = project.start_named(start_name)
    session = SimulationSession(project, policy, max_steps=max_steps)
    session._enter(start)
    if state_overrides:
        for scope, states in state_overrides.items():
            for name, value in states.items():
                session.set_state(scope, name, value)
    session._advance()
    return session


def replay(
    project: Project,
    start_name: str,
    choices: Sequence[str],
    state_edits: Sequence[StateEdit] = (),
    policy: SelectionPolicy | None = None,
    max_steps: int = DEFAULT_MAX_STEPS,
) -> SimulationSession:
    """Headless scripted play: a list of option node ids plus timed edits.

    Deterministic for a fixed policy seed, and step-for-step identical to
    making the same calls interactively. Errors carry the 0-based index of
    the step that failed.
    """
    by_step: dict[int, list[StateEdit]] = {}
    for edit in state_edits:
        if edit.step < 0 or edit.step > len(choices):
            raise ReplayError(edit.step, "state edit scheduled beyond the end of the replay")
        by_step.setdefault(edit.step, []).append(edit)

    overrides: dict[str, dict[str, float]] = {}
    for edit in by_step.get(0, []):
        overrides.setdefault(edit.scope, {})[edit.name] = edit.value

    try:
        session = start_conversation(
            project, start_name, policy, state_overrides=overrides or None, max_steps=max_steps
        )
    except DialogError as exc:
        raise ReplayError(0, str(exc)) from exc

    for i, choice in enumerate(choices):
        try:
            for edit in by_step.get(i, []) if i > 0 else []:
                session.set_state(edit.scope, edit.name, edit.value)
            if session.phase.kind is not PhaseKind.AWAITING_CHOICE:
                raise InvalidChoiceError(
                    f"session is {session.phase.kind.value}, cannot take choice {choice!r}"
                )
            session.choose(choice)
        except DialogError as exc:
            raise ReplayError(i, str(exc)) from exc

    if choices:  # step-0 edits already went in as start overrides
        for edit in by_step.get(len(choices), []):
            session.set_state(edit.scope, edit.name, edit.value)
    return session
