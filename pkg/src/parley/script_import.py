"""Screenplay-style script import.

A writer's first draft is linear: actor-labeled lines, with stage
directions in square brackets. The importer turns that text into a
straight-line graph (start, one item per line, termination) that authors
then branch out in the editor of their choice. All cause and effect
weights start at zero; defining how each line moves states is authoring
work the importer deliberately leaves alone.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import ScriptImportError, ScriptParseError
from .model import (
    Actor,
    ActorKind,
    CauseWeights,
    Diagnostic,
    DialogItem,
    EffectWeights,
    Project,
    ProjectBuilder,
    ReferenceNode,
    Severity,
    StartNode,
    SubdialogNode,
    TerminationNode,
)

IMPORTED_END_DIRECTION = "imported script end"


class ScriptLineKind(str, Enum):
    CUE = "cue"
    STANDALONE_DIRECTION = "standalone-direction"
    BLANK = "blank"


@dataclass
class ScriptLine:
    kind: ScriptLineKind
    line_number: int
    actor_name: str | None = None
    direction: str | None = None
    cue: str | None = None


def parse_script(text: str) -> list[ScriptLine]:
    """Split script text into classified lines.

    Grammar: ``Actor: rest`` is a cue line (a leading ``[...]`` inside
    ``rest`` becomes the direction); a line that is only ``[...]`` is a
    standalone direction; blank lines are blank; anything else continues
    the previous cue, separated by a space. Square brackets are the only
    special characters; round parens and mid-line brackets pass through
    verbatim.
    """
    lines: list[ScriptLine] = []
    last_cue: ScriptLine | None = None

    for number, raw in enumerate(text.replace("\r\n", "\n").split("\n"), start=1):
        stripped = raw.strip()
        if not stripped:
            lines.append(ScriptLine(ScriptLineKind.BLANK, number))
            continue

        colon = raw.find(":")
        bracket = raw.find("[")
        if colon != -1 and (bracket == -1 or colon < bracket):
            actor = raw[:colon].strip()
            if not actor:
                raise ScriptParseError("empty actor name before ':'", number)
            rest = raw[colon + 1 :].strip()
            direction = cue = None
            if rest.startswith("["):
                close = rest.find("]")
                if close == -1:
                    raise ScriptParseError("unclosed '['", number)
                direction = rest[1:close].strip()
                cue = rest[close + 1 :].strip() or None
            else:
                cue = rest or None
            if cue is None and direction is None:
                raise ScriptParseError("cue line has neither direction nor text", number)
            last_cue = ScriptLine(
                ScriptLineKind.CUE, number, actor_name=actor, direction=direction, cue=cue
            )
            lines.append(last_cue)
            continue

        if stripped.startswith("["):
            close = stripped.find("]")
            if close == -1:
                raise ScriptParseError("unclosed '['", number)
            trailing = stripped[close + 1 :].strip()
            if not trailing:
                lines.append(
                    ScriptLine(
                        ScriptLineKind.STANDALONE_DIRECTION,
                        number,
                        direction=stripped[1:close].strip(),
                    )
                )
                continue
            # bracketed text with a tail continues the previous cue verbatim

        if last_cue is None:
            raise ScriptParseError(
                "line continues no preceding cue (expected 'Actor: ...')", number
            )
        last_cue.cue = f"{last_cue.cue} {stripped}" if last_cue.cue else stripped

    return lines


def _slug(name: str) -> str:
    slug = re.sub(r"[^a-z0-9]+", "_", name.strip().lower()).strip("_")
    return slug or "actor"


def build_graph(
    lines: list[ScriptLine],
    project: Project,
    page_name: str,
    start_name: str,
    player_name: str | None = None,
) -> tuple[Project, list[Diagnostic]]:
    """Append a linear graph built from parsed script lines to a project.

    Actor names are matched case-insensitively against existing actors;
    unmatched names are created as NPCs (or as the player, for the name
    given in ``player_name``) with an info diagnostic each. Standalone
    directions attach to the most recent speaker.
    """
    if page_name in {p.name for p in project.pages}:
        raise ScriptImportError(f"page {page_name!r} already exists")
    if start_name in project.starts_by_name:
        raise ScriptImportError(f"start name {start_name!r} already exists")

    builder = ProjectBuilder.from_project(project)
    diagnostics: list[Diagnostic] = []
    builder.add_page(page_name)

    player_needle = player_name.strip().lower() if player_name else None

    def resolve_actor(name: str, line_number: int) -> Actor:
        actor = builder.actor_named(name)
        is_player_name = player_needle is not None and name.strip().lower() == player_needle
        if actor is not None:
            if is_player_name and actor.kind is not ActorKind.PLAYER:
                raise ScriptImportError(
                    f"player name {name!r} matches existing non-player actor {actor.id!r}",
                    line_number,
                )
            return actor
        actor_id = _slug(name)
        suffix = 2
        while builder.actor_named(actor_id) is not None or builder.has_actor_id(actor_id):
            actor_id = f"{_slug(name)}{suffix}"
            suffix += 1
        kind = ActorKind.PLAYER if is_player_name else ActorKind.NPC
        actor = builder.add_actor(Actor(actor_id, name.strip(), kind))
        diagnostics.append(
            Diagnostic(
                Severity.INFO,
                f"created {kind.value} actor {actor_id!r} for script name {name.strip()!r}",
            )
        )
        return actor

    def fresh_id(base: str) -> str:
        node_id = base
        suffix = 2
        while builder.has_node_id(node_id):
            node_id = f"{base}_{suffix}"
            suffix += 1
        return node_id

    zero_effect = EffectWeights.zeros(builder.player_state_count, builder.npc_state_count)
    zero_cause = CauseWeights.zeros(builder.player_state_count, builder.npc_state_count)

    prefix = _slug(start_name)
    start = StartNode(fresh_id(f"{prefix}_start"), name=start_name, effect=zero_effect)
    builder.add_node(page_name, start)
    previous_id = start.id

    # Two passes would also work, but conversants want script order anyway:
    # an NPC line addresses its own speaker, a player line addresses the
    # NPC spoken to most recently (or the project's only NPC).
    last_speaker: Actor | None = None
    last_npc: Actor | None = None
    item_index = 0

    def npc_conversant_for_player(line_number: int) -> Actor:
        if last_npc is not None:
            return last_npc
        npcs = [a for a in builder.actors if a.kind is ActorKind.NPC]
        if not npcs:
            raise ScriptImportError("no NPC exists to receive player lines", line_number)
        return npcs[0]

    def append_item(actor: Actor, cue: str | None, direction: str | None, line_number: int):
        nonlocal previous_id, last_speaker, last_npc, item_index
        item_index += 1
        if actor.kind is ActorKind.NPC:
            conversant = actor
            cause = zero_cause
        else:
            conversant = npc_conversant_for_player(line_number)
            cause = None
        item = DialogItem(
            id=fresh_id(f"{prefix}_{item_index:03d}"),
            actor_id=actor.id,
            conversant_id=conversant.id,
            effect=zero_effect,
            cue=cue,
            direction=direction,
            cause=cause,
        )
        builder.add_node(page_name, item)
        builder.add_edge(previous_id, item.id, order=0)
        previous_id = item.id
        last_speaker = actor
        if actor.kind is ActorKind.NPC:
            last_npc = actor

    for line in lines:
        if line.kind is ScriptLineKind.BLANK:
            continue
        if line.kind is ScriptLineKind.CUE:
            actor = resolve_actor(line.actor_name or "", line.line_number)
            append_item(actor, line.cue, line.direction, line.line_number)
        else:
            if last_speaker is None:
                raise ScriptImportError(
                    "standalone direction appears before any cue line; "
                    "no speaker to attribute it to",
                    line.line_number,
                )
            append_item(last_speaker, None, line.direction, line.line_number)

    termination = TerminationNode(fresh_id(f"{prefix}_end"), direction=IMPORTED_END_DIRECTION)
    builder.add_node(page_name, termination)
    builder.add_edge(previous_id, termination.id, order=0)

    return builder.build(), diagnostics


def render_script(project: Project, start_name: str) -> str:
    """Render a linear imported graph back to script text.

    Directions attributed to the current speaker come out as standalone
    ``[...]`` lines, matching what the importer consumed.
    """
    node = project.start_named(start_name)
    items: list[DialogItem] = []
    seen = {node.id}
    while True:
        successors = project.successors(node.id)
        if isinstance(node, TerminationNode) or not successors:
            break
        if len(successors) != 1:
            raise ScriptImportError(
                f"node {node.id!r} has {len(successors)} successors; "
                "only linear graphs render back to scripts"
            )
        node = successors[0]
        if node.id in seen:
            raise ScriptImportError("graph is cyclic; cannot render as a script")
        seen.add(node.id)
        if isinstance(node, DialogItem):
            items.append(node)
        elif isinstance(node, (ReferenceNode, SubdialogNode)):
            raise ScriptImportError(
                f"{node.id!r} is not a dialog item; only plain linear graphs render"
            )

    lines: list[str] = []
    last_actor_id: str | None = None
    for item in items:
        actor = project.actor(item.actor_id)
        if item.cue is None and item.direction is not None and item.actor_id == last_actor_id:
            lines.append(f"[{item.direction}]")
            continue
        parts = [f"{actor.display_name}:"]
        if item.direction is not None:
            parts.append(f"[{item.direction}]")
        if item.cue is not None:
            parts.append(item.cue)
        lines.append(" ".join(parts))
        last_actor_id = item.actor_id
    return "\n".join(lines) + ("\n" if lines else "")
