"""Domain model for branching game dialog projects.

A project bundles actors, bounded state declarations, organizational pages,
and a directed graph of dialog nodes. Conversation structure is a graph, not
a tree: a node may have any number of predecessors, and cycles are legal
(validation flags them as warnings only).

Projects are immutable once built. Assemble one with :class:`ProjectBuilder`
(single-threaded by contract), then share it read-only across any number of
concurrent simulations.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Union

from .errors import NotFoundError

STATE_MIN = -1.0
STATE_MAX = 1.0


def clamp(value: float) -> float:
    """Clamp a real number into the legal state range [-1, 1]."""
    if value < STATE_MIN:
        return STATE_MIN
    if value > STATE_MAX:
        return STATE_MAX
    return value


def in_range(value: float) -> bool:
    return STATE_MIN <= value <= STATE_MAX


class ActorKind(str, Enum):
    PLAYER = "player"
    NPC = "npc"


class StateScope(str, Enum):
    PLAYER = "player"
    NPC = "npc"


class AssetRole(str, Enum):
    AUDIO = "audio"
    LIP_SYNC = "lipsync"
    OTHER = "other"


@dataclass(frozen=True)
class StateDeclaration:
    """An author-defined bounded quantity attached to the player or to NPCs.

    NPC declarations are a single shared schema; every NPC gets its own
    value vector over that schema at runtime.
    """

    name: str
    scope: StateScope
    default: float = 0.0


@dataclass(frozen=True)
class StateVector:
    """Ordered, named state values, each held inside [-1, 1].

    Ordering follows the declaration list so weight vectors and state
    vectors line up index-for-index.
    """

    names: tuple[str, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.names) != len(self.values):
            raise ValueError(
                f"state vector has {len(self.names)} names but {len(self.values)} values"
            )
        for name, value in zip(self.names, self.values):
            if not in_range(value):
                raise ValueError(f"state {name!r} value {value!r} outside [-1, 1]")

    @classmethod
    def from_declarations(cls, decls: Iterable[StateDeclaration]) -> "StateVector":
        decls = tuple(decls)
        return cls(
            names=tuple(d.name for d in decls),
            values=tuple(clamp(d.default) for d in decls),
        )

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise NotFoundError(f"unknown state {name!r}") from None

    def get(self, name: str) -> float:
        return self.values[self.index_of(name)]

    def with_value(self, name: str, value: float) -> "StateVector":
        """Return a copy with one state set to ``clamp(value)``."""
        i = self.index_of(name)
        values = list(self.values)
        values[i] = clamp(value)
        return replace(self, values=tuple(values))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values))

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Actor:
    """Any character who can speak: the player or an NPC."""

    id: str
    display_name: str
    kind: ActorKind
    attributes: dict[str, str] = field(default_factory=dict)
    color: str | None = None  # render hint for cue bars in viewers


@dataclass(frozen=True)
class CauseWeights:
    """Selection weights for an NPC line: a general term plus one weight per
    player state and per NPC state. Each component lives in [-1, 1]."""

    general: float = 0.0
    player: tuple[float, ...] = ()
    npc: tuple[float, ...] = ()

    @classmethod
    def zeros(cls, player_count: int, npc_count: int) -> "CauseWeights":
        return cls(0.0, (0.0,) * player_count, (0.0,) * npc_count)

    def components(self) -> Iterator[float]:
        yield self.general
        yield from self.player
        yield from self.npc


@dataclass(frozen=True)
class EffectWeights:
    """Additive state deltas applied when a line is spoken (then clamped)."""

    player: tuple[float, ...] = ()
    npc: tuple[float, ...] = ()

    @classmethod
    def zeros(cls, player_count: int, npc_count: int) -> "EffectWeights":
        return cls((0.0,) * player_count, (0.0,) * npc_count)

    def components(self) -> Iterator[float]:
        yield from self.player
        yield from self.npc

    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.components())


@dataclass(frozen=True)
class AssetRef:
    """A file associated with a dialog item (audio clip, lip-sync data...)."""

    role: AssetRole
    path: str


@dataclass(frozen=True)
class StartNode:
    """A named entry point into a dialog graph. Its effect defines the
    initial state; it carries no cause and accepts no incoming edges."""

    id: str
    name: str
    effect: EffectWeights = EffectWeights()


@dataclass(frozen=True)
class DialogItem:
    """One element of speech: a cue, a stage direction, or both.

    Player items are picked from a menu, so they never carry a cause;
    NPC items always do. The conversant is the NPC whose state vector
    feeds scoring and receives the item's NPC-side effects.
    """

    id: str
    actor_id: str
    conversant_id: str
    effect: EffectWeights = EffectWeights()
    cue: str | None = None
    direction: str | None = None
    menu_label: str | None = None  # player items only
    cause: CauseWeights | None = None  # present iff the actor is an NPC
    assets: tuple[AssetRef, ...] = ()


@dataclass(frozen=True)
class TerminationNode:
    """Ends a dialog graph. ``direction`` tells the game engine why; the
    optional value selects a branch when the graph ran as a subdialog."""

    id: str
    direction: str = ""
    termination_value: str | None = None


@dataclass(frozen=True)
class ReferenceNode:
    """A jump to the start node of another graph (usually on another page)."""

    id: str
    target_start_name: str


@dataclass(frozen=True)
class SubdialogNode:
    """Runs another graph as a unit, then continues along the outgoing edge
    whose branch label matches the inner graph's termination value."""

    id: str
    target_start_name: str


DialogNode = Union[StartNode, DialogItem, TerminationNode, ReferenceNode, SubdialogNode]

NODE_KIND_NAMES = {
    StartNode: "start",
    DialogItem: "item",
    TerminationNode: "termination",
    ReferenceNode: "reference",
    SubdialogNode: "subdialog",
}


def node_kind(node: DialogNode) -> str:
    return NODE_KIND_NAMES[type(node)]


@dataclass(frozen=True)
class Edge:
    """A possible transition. ``order`` is the author-visible total order
    used for menus and tie-breaking; branch labels appear only on edges
    leaving a subdialog node."""

    from_id: str
    to_id: str
    order: int
    branch_label: str | None = None


@dataclass(frozen=True)
class Page:
    """Organizational grouping of nodes. No runtime semantics."""

    name: str
    node_ids: frozenset[str] = frozenset()
    layout: dict[str, tuple[float, float]] = field(default_factory=dict)


@dataclass(frozen=True)
class Project:
    """The whole authored artifact. Immutable; safe to share between threads."""

    title: str = "untitled"
    version: str = ""
    actors: tuple[Actor, ...] = ()
    player_state_decls: tuple[StateDeclaration, ...] = ()
    npc_state_decls: tuple[StateDeclaration, ...] = ()
    pages: tuple[Page, ...] = ()
    nodes: tuple[DialogNode, ...] = ()
    edges: tuple[Edge, ...] = ()

    @cached_property
    def actors_by_id(self) -> dict[str, Actor]:
        return {a.id: a for a in self.actors}

    @cached_property
    def nodes_by_id(self) -> dict[str, DialogNode]:
        return {n.id: n for n in self.nodes}

    @cached_property
    def starts_by_name(self) -> dict[str, StartNode]:
        out: dict[str, StartNode] = {}
        for n in self.nodes:
            if isinstance(n, StartNode) and n.name not in out:
                out[n.name] = n
        return out

    @cached_property
    def edges_from(self) -> dict[str, tuple[Edge, ...]]:
        by_source: dict[str, list[Edge]] = {}
        for e in self.edges:
            by_source.setdefault(e.from_id, []).append(e)
        return {k: tuple(sorted(v, key=lambda e: e.order)) for k, v in by_source.items()}

    @cached_property
    def page_of(self) -> dict[str, str]:
        out: dict[str, str] = {}
        for page in self.pages:
            for node_id in page.node_ids:
                out.setdefault(node_id, page.name)
        return out

    def node(self, node_id: str) -> DialogNode:
        try:
            return self.nodes_by_id[node_id]
        except KeyError:
            raise NotFoundError(f"unknown node {node_id!r}") from None

    def actor(self, actor_id: str) -> Actor:
        try:
            return self.actors_by_id[actor_id]
        except KeyError:
            raise NotFoundError(f"unknown actor {actor_id!r}") from None

    def start_named(self, name: str) -> StartNode:
        try:
            return self.starts_by_name[name]
        except KeyError:
            raise NotFoundError(f"unknown start node {name!r}") from None

    def outgoing(self, node_id: str) -> tuple[Edge, ...]:
        """Outgoing edges of a node, sorted by edge order ascending."""
        self.node(node_id)
        return self.edges_from.get(node_id, ())

    def successors(self, node_id: str) -> tuple[DialogNode, ...]:
        """Nodes reachable by one edge, sorted by edge order ascending."""
        return tuple(self.node(e.to_id) for e in self.outgoing(node_id))

    def npc_actors(self) -> tuple[Actor, ...]:
        return tuple(a for a in self.actors if a.kind is ActorKind.NPC)

    def player_actors(self) -> tuple[Actor, ...]:
        return tuple(a for a in self.actors if a.kind is ActorKind.PLAYER)

    def is_player_item(self, node: DialogNode) -> bool:
        if not isinstance(node, DialogItem):
            return False
        actor = self.actors_by_id.get(node.actor_id)
        return actor is not None and actor.kind is ActorKind.PLAYER


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    message: str
    node_id: str | None = None

    def __str__(self) -> str:
        where = f" [{self.node_id}]" if self.node_id else ""
        return f"{self.severity.value}{where}: {self.message}"


def _error(message: str, node_id: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, message, node_id)


def _warning(message: str, node_id: str | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, message, node_id)


def _check_weight_vector(
    diags: list[Diagnostic],
    node_id: str,
    label: str,
    weights: tuple[float, ...],
    expected_len: int,
    scope: str,
) -> None:
    if len(weights) != expected_len:
        diags.append(
            _error(
                f"{label} has {len(weights)} {scope} weights, expected {expected_len}",
                node_id,
            )
        )
    for w in weights:
        if not in_range(w):
            diags.append(_error(f"{label} {scope} weight {w!r} outside [-1, 1]", node_id))


def validate(project: Project) -> list[Diagnostic]:
    """Check every structural invariant; return diagnostics, never raise.

    An empty list means the project is valid. Cycles and unreachable nodes
    are warnings (the graph is deliberately unrestricted); dangling
    references, out-of-range weights, and taxonomy violations are errors.
    """
    diags: list[Diagnostic] = []

    # Actors.
    seen_actor_ids: set[str] = set()
    for actor in project.actors:
        if actor.id in seen_actor_ids:
            diags.append(_error(f"duplicate actor id {actor.id!r}"))
        seen_actor_ids.add(actor.id)
        if not actor.id:
            diags.append(_error("actor with empty id"))
    if not any(a.kind is ActorKind.PLAYER for a in project.actors):
        diags.append(_error("project has no player actor"))

    # State declarations.
    for scope, decls in (
        (StateScope.PLAYER, project.player_state_decls),
        (StateScope.NPC, project.npc_state_decls),
    ):
        seen: set[str] = set()
        for decl in decls:
            if not decl.name:
                diags.append(_error(f"{scope.value} state declaration with empty name"))
            if decl.name in seen:
                diags.append(
                    _error(f"duplicate {scope.value} state declaration {decl.name!r}")
                )
            seen.add(decl.name)
            if decl.scope is not scope:
                diags.append(
                    _error(f"state {decl.name!r} declared under the wrong scope list")
                )
            if not in_range(decl.default):
                diags.append(
                    _error(f"state {decl.name!r} default {decl.default!r} outside [-1, 1]")
                )

    n_player = len(project.player_state_decls)
    n_npc = len(project.npc_state_decls)

    # Nodes.
    seen_node_ids: set[str] = set()
    start_names: set[str] = set()
    for node in project.nodes:
        if node.id in seen_node_ids:
            diags.append(_error(f"duplicate node id {node.id!r}", node.id))
        seen_node_ids.add(node.id)

        if isinstance(node, StartNode):
            if node.name in start_names:
                diags.append(_error(f"duplicate start name {node.name!r}", node.id))
            start_names.add(node.name)
            _check_weight_vector(diags, node.id, "start effect", node.effect.player, n_player, "player")
            _check_weight_vector(diags, node.id, "start effect", node.effect.npc, n_npc, "npc")

        elif isinstance(node, DialogItem):
            actor = project.actors_by_id.get(node.actor_id)
            if actor is None:
                diags.append(_error(f"item actor {node.actor_id!r} does not exist", node.id))
            conversant = project.actors_by_id.get(node.conversant_id)
            if conversant is None:
                diags.append(
                    _error(f"item conversant {node.conversant_id!r} does not exist", node.id)
                )
            elif conversant.kind is not ActorKind.NPC:
                diags.append(
                    _error(f"item conversant {node.conversant_id!r} is not an NPC", node.id)
                )
            if node.cue is None and node.direction is None:
                diags.append(_error("item has neither cue nor direction", node.id))
            if actor is not None:
                if actor.kind is ActorKind.PLAYER:
                    if node.cause is not None:
                        diags.append(
                            _error("player item carries a cause (cause is deactivated for player lines)", node.id)
                        )
                else:
                    if node.cause is None:
                        diags.append(_error("NPC item is missing its cause weights", node.id))
                    if node.menu_label is not None:
                        diags.append(
                            _error("menu label on an NPC item (menu labels are for player items)", node.id)
                        )
            if node.cause is not None:
                if not in_range(node.cause.general):
                    diags.append(
                        _error(f"cause general weight {node.cause.general!r} outside [-1, 1]", node.id)
                    )
                _check_weight_vector(diags, node.id, "cause", node.cause.player, n_player, "player")
                _check_weight_vector(diags, node.id, "cause", node.cause.npc, n_npc, "npc")
            _check_weight_vector(diags, node.id, "effect", node.effect.player, n_player, "player")
            _check_weight_vector(diags, node.id, "effect", node.effect.npc, n_npc, "npc")

        elif isinstance(node, (ReferenceNode, SubdialogNode)):
            if node.target_start_name not in project.starts_by_name:
                diags.append(
                    _error(
                        f"{node_kind(node)} targets unknown start {node.target_start_name!r}",
                        node.id,
                    )
                )

    # Edges.
    seen_orders: set[tuple[str, int]] = set()
    incoming: dict[str, int] = {}
    for edge in project.edges:
        source = project.nodes_by_id.get(edge.from_id)
        target = project.nodes_by_id.get(edge.to_id)
        if source is None:
            diags.append(_error(f"edge from unknown node {edge.from_id!r}"))
        if target is None:
            diags.append(_error(f"edge to unknown node {edge.to_id!r}", edge.from_id))
        if (edge.from_id, edge.order) in seen_orders:
            diags.append(
                _error(f"duplicate edge order {edge.order} on node {edge.from_id!r}", edge.from_id)
            )
        seen_orders.add((edge.from_id, edge.order))
        if edge.branch_label is not None and not isinstance(source, SubdialogNode):
            diags.append(
                _error("branch label on an edge whose source is not a subdialog", edge.from_id)
            )
        if isinstance(source, (TerminationNode, ReferenceNode)):
            diags.append(
                _error(f"{node_kind(source)} node has an outgoing edge", edge.from_id)
            )
        if target is not None:
            incoming[edge.to_id] = incoming.get(edge.to_id, 0) + 1
            if isinstance(target, StartNode):
                diags.append(_error("start node has an incoming edge", edge.to_id))

    # Page partition: every node on exactly one page.
    page_names: set[str] = set()
    membership: dict[str, int] = {}
    for page in project.pages:
        if page.name in page_names:
            diags.append(_error(f"duplicate page name {page.name!r}"))
        page_names.add(page.name)
        for node_id in page.node_ids:
            if node_id not in project.nodes_by_id:
                diags.append(
                    _error(f"page {page.name!r} lists unknown node {node_id!r}")
                )
            membership[node_id] = membership.get(node_id, 0) + 1
        for node_id in page.layout:
            if node_id not in page.node_ids:
                diags.append(
                    _warning(f"page {page.name!r} has layout for node {node_id!r} not on the page")
                )
    for node in project.nodes:
        count = membership.get(node.id, 0)
        if count == 0:
            diags.append(_error("node belongs to no page", node.id))
        elif count > 1:
            diags.append(_error("node belongs to more than one page", node.id))

    # Warnings: dead ends, mixed successors, unreachable nodes, cycles.
    for node in project.nodes:
        if isinstance(node, (TerminationNode, ReferenceNode)):
            continue
        out = project.edges_from.get(node.id, ())
        if not out:
            diags.append(
                _warning(f"{node_kind(node)} node is a dead end (no outgoing edges)", node.id)
            )
            continue
        targets = [project.nodes_by_id.get(e.to_id) for e in out]
        targets = [t for t in targets if t is not None]
        player_items = [t for t in targets if project.is_player_item(t)]
        if player_items and len(player_items) != len(targets):
            diags.append(
                _warning(
                    "successors mix player items with other nodes; only the player items form the menu",
                    node.id,
                )
            )

    reachable: set[str] = set()
    frontier = [n.id for n in project.nodes if isinstance(n, StartNode)]
    reachable.update(frontier)
    while frontier:
        current = frontier.pop()
        for edge in project.edges_from.get(current, ()):
            if edge.to_id in project.nodes_by_id and edge.to_id not in reachable:
                reachable.add(edge.to_id)
                frontier.append(edge.to_id)
    for node in project.nodes:
        if node.id not in reachable:
            diags.append(_warning("node is unreachable from every start node", node.id))

    diags.extend(_cycle_warnings(project))
    return diags


def _cycle_warnings(project: Project) -> list[Diagnostic]:
    """One warning per back edge found by depth-first search (edge order)."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {n.id: WHITE for n in project.nodes}
    warnings: list[Diagnostic] = []

    for root in project.nodes:
        if color[root.id] != WHITE:
            continue
        stack: list[tuple[str, int]] = [(root.id, 0)]
        color[root.id] = GRAY
        while stack:
            node_id, edge_index = stack[-1]
            out = project.edges_from.get(node_id, ())
            if edge_index >= len(out):
                color[node_id] = BLACK
                stack.pop()
                continue
            stack[-1] = (node_id, edge_index + 1)
            target = out[edge_index].to_id
            if target not in color:
                continue  # dangling edge, reported as an error elsewhere
            if color[target] == GRAY:
                warnings.append(
                    _warning(f"cycle detected via edge {node_id!r} -> {target!r}", node_id)
                )
            elif color[target] == WHITE:
                color[target] = GRAY
                stack.append((target, 0))
    return warnings


def successors(project: Project, node_id: str) -> tuple[DialogNode, ...]:
    """Module-level alias of :meth:`Project.successors`."""
    return project.successors(node_id)


def projects_equivalent(a: Project, b: Project) -> bool:
    """Structural equality up to collection order.

    Actors, pages, and nodes are compared keyed by id/name; edges as a set;
    state declaration lists are ordered (their order is load-bearing).
    """
    if (a.title, a.version) != (b.title, b.version):
        return False
    if a.player_state_decls != b.player_state_decls:
        return False
    if a.npc_state_decls != b.npc_state_decls:
        return False
    if {x.id: x for x in a.actors} != {x.id: x for x in b.actors}:
        return False
    if {p.name: (p.node_ids, p.layout) for p in a.pages} != {
        p.name: (p.node_ids, p.layout) for p in b.pages
    }:
        return False
    if {n.id: n for n in a.nodes} != {n.id: n for n in b.nodes}:
        return False
    return sorted(a.edges, key=_edge_key) == sorted(b.edges, key=_edge_key)


def _edge_key(e: Edge) -> tuple:
    return (e.from_id, e.order, e.to_id, e.branch_label or "")


class ProjectBuilder:
    """Accumulates a project and freezes it with :meth:`build`.

    Not thread-safe; mutation is confined to the building thread. Duplicate
    ids are rejected eagerly so mistakes surface at the call site.
    """

    def __init__(self, title: str = "untitled", version: str = ""):
        self.title = title
        self.version = version
        self._actors: list[Actor] = []
        self._player_decls: list[StateDeclaration] = []
        self._npc_decls: list[StateDeclaration] = []
        self._pages: dict[str, list[str]] = {}
        self._layouts: dict[str, dict[str, tuple[float, float]]] = {}
        self._nodes: list[DialogNode] = []
        self._edges: list[Edge] = []
        self._node_ids: set[str] = set()
        self._actor_ids: set[str] = set()

    @classmethod
    def from_project(cls, project: Project) -> "ProjectBuilder":
        builder = cls(project.title, project.version)
        for actor in project.actors:
            builder.add_actor(actor)
        for decl in project.player_state_decls:
            builder.add_state(decl)
        for decl in project.npc_state_decls:
            builder.add_state(decl)
        for page in project.pages:
            builder.add_page(page.name)
            for node_id in sorted(page.node_ids):
                builder._pages[page.name].append(node_id)
            builder._layouts[page.name] = dict(page.layout)
        builder._nodes = list(project.nodes)
        builder._node_ids = {n.id for n in project.nodes}
        builder._edges = list(project.edges)
        return builder

    def add_actor(self, actor: Actor) -> Actor:
        if actor.id in self._actor_ids:
            raise ValueError(f"duplicate actor id {actor.id!r}")
        self._actor_ids.add(actor.id)
        self._actors.append(actor)
        return actor

    def actor_named(self, name: str) -> Actor | None:
        """Case-insensitive match on id or display name, trimmed."""
        needle = name.strip().lower()
        for actor in self._actors:
            if actor.id.lower() == needle or actor.display_name.strip().lower() == needle:
                return actor
        return None

    def add_state(self, decl: StateDeclaration) -> StateDeclaration:
        target = self._player_decls if decl.scope is StateScope.PLAYER else self._npc_decls
        if any(d.name == decl.name for d in target):
            raise ValueError(f"duplicate {decl.scope.value} state {decl.name!r}")
        target.append(decl)
        return decl

    def add_page(self, name: str) -> str:
        if name in self._pages:
            raise ValueError(f"duplicate page name {name!r}")
        self._pages[name] = []
        self._layouts[name] = {}
        return name

    def add_node(self, page_name: str, node: DialogNode) -> DialogNode:
        if node.id in self._node_ids:
            raise ValueError(f"duplicate node id {node.id!r}")
        if page_name not in self._pages:
            self.add_page(page_name)
        self._node_ids.add(node.id)
        self._nodes.append(node)
        self._pages[page_name].append(node.id)
        return node

    def add_edge(
        self,
        from_id: str,
        to_id: str,
        order: int | None = None,
        branch_label: str | None = None,
    ) -> Edge:
        if order is None:
            existing = [e.order for e in self._edges if e.from_id == from_id]
            order = max(existing) + 1 if existing else 0
        edge = Edge(from_id, to_id, order, branch_label)
        self._edges.append(edge)
        return edge

    def set_position(self, page_name: str, node_id: str, x: float, y: float) -> None:
        self._layouts[page_name][node_id] = (float(x), float(y))

    @property
    def player_state_count(self) -> int:
        return len(self._player_decls)

    @property
    def npc_state_count(self) -> int:
        return len(self._npc_decls)

    @property
    def actors(self) -> tuple[Actor, ...]:
        return tuple(self._actors)

    def has_node_id(self, node_id: str) -> bool:
        return node_id in self._node_ids

    def has_actor_id(self, actor_id: str) -> bool:
        return actor_id in self._actor_ids

    def build(self) -> Project:
        pages = tuple(
            Page(name, frozenset(ids), dict(self._layouts[name]))
            for name, ids in self._pages.items()
        )
        return Project(
            title=self.title,
            version=self.version,
            actors=tuple(self._actors),
            player_state_decls=tuple(self._player_decls),
            npc_state_decls=tuple(self._npc_decls),
            pages=pages,
            nodes=tuple(self._nodes),
            edges=tuple(self._edges),
        )
