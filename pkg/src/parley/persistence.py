"""Project file format (XML, version 1) and the dialog asset inventory.

The writer is canonical: collections are emitted in sorted order and
floats in their shortest round-trip decimal form, so saving the same
project twice yields byte-identical files and ``load(save(p))`` gives a
structurally equal project.

The reader is strict. Unknown elements or attributes, missing required
attributes, bad numbers, and out-of-range weights are schema errors, never
silently repaired: authoring files must be honest. The format is also
described by the shipped ``data/project-v1.xsd``.
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    InvalidProjectError,
    ProjectParseError,
    SchemaError,
    UnsupportedVersionError,
)
from .model import (
    Actor,
    ActorKind,
    AssetRef,
    AssetRole,
    CauseWeights,
    DialogItem,
    DialogNode,
    Edge,
    EffectWeights,
    Page,
    Project,
    ReferenceNode,
    Severity,
    StartNode,
    StateDeclaration,
    StateScope,
    SubdialogNode,
    TerminationNode,
    in_range,
    validate,
)

FORMAT_VERSION = 1

SCHEMA_PATH = Path(__file__).parent / "data" / "project-v1.xsd"

#: tag -> (required attributes, optional attributes); the executable twin of
#: the shipped XSD, used by the strict reader.
SCHEMA_ATTRS: dict[str, tuple[frozenset, frozenset]] = {
    "simdialog": (frozenset({"version"}), frozenset()),
    "metadata": (frozenset({"title"}), frozenset({"projectVersion"})),
    "actors": (frozenset(), frozenset()),
    "actor": (frozenset({"id", "displayName", "kind"}), frozenset({"color"})),
    "attr": (frozenset({"key", "value"}), frozenset()),
    "states": (frozenset({"scope"}), frozenset()),
    "state": (frozenset({"name", "default"}), frozenset()),
    "pages": (frozenset(), frozenset()),
    "page": (frozenset({"name"}), frozenset()),
    "node": (
        frozenset({"id", "type"}),
        frozenset({"name", "actor", "conversant", "menuLabel", "value", "target"}),
    ),
    "cue": (frozenset(), frozenset()),
    "direction": (frozenset(), frozenset()),
    "cause": (frozenset({"general"}), frozenset()),
    "effect": (frozenset(), frozenset()),
    "w": (frozenset({"scope", "state", "value"}), frozenset()),
    "asset": (frozenset({"role", "path"}), frozenset()),
    "layout": (frozenset(), frozenset()),
    "pos": (frozenset({"node", "x", "y"}), frozenset()),
    "edges": (frozenset(), frozenset()),
    "edge": (frozenset({"from", "to", "order"}), frozenset({"branch"})),
}


def _fmt(value: float) -> str:
    return repr(float(value))


# -- writing ----------------------------------------------------------------


def _weights_element(
    tag: str,
    player: tuple[float, ...],
    npc: tuple[float, ...],
    player_decls: tuple[StateDeclaration, ...],
    npc_decls: tuple[StateDeclaration, ...],
    general: float | None = None,
) -> ET.Element:
    elem = ET.Element(tag)
    if general is not None:
        elem.set("general", _fmt(general))
    for scope, weights, decls in (
        ("player", player, player_decls),
        ("npc", npc, npc_decls),
    ):
        for decl, weight in zip(decls, weights):
            if weight != 0.0:
                w = ET.SubElement(elem, "w")
                w.set("scope", scope)
                w.set("state", decl.name)
                w.set("value", _fmt(weight))
    return elem


def _node_element(node: DialogNode, project: Project) -> ET.Element:
    elem = ET.Element("node")
    elem.set("id", node.id)
    pd, nd = project.player_state_decls, project.npc_state_decls

    if isinstance(node, StartNode):
        elem.set("type", "start")
        elem.set("name", node.name)
        if not node.effect.is_zero():
            elem.append(_weights_element("effect", node.effect.player, node.effect.npc, pd, nd))
    elif isinstance(node, DialogItem):
        elem.set("type", "item")
        elem.set("actor", node.actor_id)
        elem.set("conversant", node.conversant_id)
        if node.menu_label is not None:
            elem.set("menuLabel", node.menu_label)
        if node.cue is not None:
            ET.SubElement(elem, "cue").text = node.cue
        if node.direction is not None:
            ET.SubElement(elem, "direction").text = node.direction
        if node.cause is not None:
            elem.append(
                _weights_element(
                    "cause", node.cause.player, node.cause.npc, pd, nd, general=node.cause.general
                )
            )
        if not node.effect.is_zero():
            elem.append(_weights_element("effect", node.effect.player, node.effect.npc, pd, nd))
        for asset in node.assets:
            a = ET.SubElement(elem, "asset")
            a.set("role", asset.role.value)
            a.set("path", asset.path)
    elif isinstance(node, TerminationNode):
        elem.set("type", "termination")
        if node.termination_value is not None:
            elem.set("value", node.termination_value)
        ET.SubElement(elem, "direction").text = node.direction or None
    elif isinstance(node, ReferenceNode):
        elem.set("type", "reference")
        elem.set("target", node.target_start_name)
    elif isinstance(node, SubdialogNode):
        elem.set("type", "subdialog")
        elem.set("target", node.target_start_name)
    return elem


def to_element(project: Project) -> ET.Element:
    root = ET.Element("simdialog")
    root.set("version", str(FORMAT_VERSION))

    metadata = ET.SubElement(root, "metadata")
    metadata.set("title", project.title)
    if project.version:
        metadata.set("projectVersion", project.version)

    actors = ET.SubElement(root, "actors")
    for actor in sorted(project.actors, key=lambda a: a.id):
        a = ET.SubElement(actors, "actor")
        a.set("id", actor.id)
        a.set("displayName", actor.display_name)
        a.set("kind", actor.kind.value)
        if actor.color is not None:
            a.set("color", actor.color)
        for key in sorted(actor.attributes):
            attr = ET.SubElement(a, "attr")
            attr.set("key", key)
            attr.set("value", actor.attributes[key])

    for scope, decls in (
        ("player", project.player_state_decls),
        ("npc", project.npc_state_decls),
    ):
        states = ET.SubElement(root, "states")
        states.set("scope", scope)
        for decl in decls:  # declaration order is semantic, never sorted
            s = ET.SubElement(states, "state")
            s.set("name", decl.name)
            s.set("default", _fmt(decl.default))

    pages = ET.SubElement(root, "pages")
    nodes_by_id = project.nodes_by_id
    for page in sorted(project.pages, key=lambda p: p.name):
        p = ET.SubElement(pages, "page")
        p.set("name", page.name)
        for node_id in sorted(page.node_ids):
            node = nodes_by_id.get(node_id)
            if node is not None:
                p.append(_node_element(node, project))
        if page.layout:
            layout = ET.SubElement(p, "layout")
            for node_id in sorted(page.layout):
                x, y = page.layout[node_id]
                pos = ET.SubElement(layout, "pos")
                pos.set("node", node_id)
                pos.set("x", _fmt(x))
                pos.set("y", _fmt(y))

    edges = ET.SubElement(root, "edges")
    for edge in sorted(project.edges, key=lambda e: (e.from_id, e.order)):
        e = ET.SubElement(edges, "edge")
        e.set("from", edge.from_id)
        e.set("to", edge.to_id)
        e.set("order", str(edge.order))
        if edge.branch_label is not None:
            e.set("branch", edge.branch_label)
    return root


def dumps(project: Project) -> str:
    """Serialize a project to canonical XML text (deterministic)."""
    diagnostics = validate(project)
    errors = [d for d in diagnostics if d.severity is Severity.ERROR]
    if errors:
        raise InvalidProjectError(
            f"refusing to save: project has {len(errors)} validation error(s); "
            f"first: {errors[0]}",
            diagnostics=errors,
        )
    root = to_element(project)
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def save(project: Project, path: str | Path) -> None:
    """Write the canonical XML project file (refuses invalid projects)."""
    text = dumps(project)
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write project file {path}: {exc}") from exc


# -- reading ----------------------------------------------------------------


def _element_name(elem: ET.Element) -> str:
    ident = elem.get("id") or elem.get("name") or elem.get("state")
    return f"{elem.tag} {ident!r}" if ident else elem.tag


def _check_attrs(elem: ET.Element) -> None:
    if elem.tag not in SCHEMA_ATTRS:
        raise SchemaError("unknown element", elem.tag)
    required, optional = SCHEMA_ATTRS[elem.tag]
    present = set(elem.attrib)
    missing = required - present
    if missing:
        raise SchemaError(f"missing attribute {sorted(missing)[0]!r}", _element_name(elem))
    unexpected = present - required - optional
    if unexpected:
        raise SchemaError(f"unexpected attribute {sorted(unexpected)[0]!r}", _element_name(elem))


def _require_no_text(elem: ET.Element) -> None:
    if (elem.text or "").strip():
        raise SchemaError("unexpected text content", _element_name(elem))


def _children(elem: ET.Element, *allowed: str) -> list[ET.Element]:
    _require_no_text(elem)
    for child in elem:
        if child.tag not in allowed:
            raise SchemaError(f"unexpected child <{child.tag}>", _element_name(elem))
        _check_attrs(child)
    return list(elem)


def _float_attr(elem: ET.Element, name: str, bounded: bool = True) -> float:
    raw = elem.get(name)
    try:
        value = float(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise SchemaError(f"attribute {name!r} is not a number: {raw!r}", _element_name(elem))
    if bounded and not in_range(value):
        raise SchemaError(
            f"attribute {name!r} value {raw} outside [-1, 1]", _element_name(elem)
        )
    return value


def _int_attr(elem: ET.Element, name: str) -> int:
    raw = elem.get(name)
    try:
        return int(raw)  # type: ignore[arg-type]
    except (TypeError, ValueError):
        raise SchemaError(f"attribute {name!r} is not an integer: {raw!r}", _element_name(elem))


def _read_weights(
    elem: ET.Element,
    player_decls: tuple[StateDeclaration, ...],
    npc_decls: tuple[StateDeclaration, ...],
) -> tuple[tuple[float, ...], tuple[float, ...]]:
    player = {d.name: 0.0 for d in player_decls}
    npc = {d.name: 0.0 for d in npc_decls}
    seen: set[tuple[str, str]] = set()
    for w in _children(elem, "w"):
        scope = w.get("scope")
        state = w.get("state", "")
        target = player if scope == "player" else npc if scope == "npc" else None
        if target is None:
            raise SchemaError(f"unknown scope {scope!r}", _element_name(w))
        if state not in target:
            raise SchemaError(f"unknown {scope} state {state!r}", f"w {state!r}")
        if (scope, state) in seen:
            raise SchemaError(f"duplicate weight for {scope} state {state!r}", f"w {state!r}")
        seen.add((scope, state))
        target[state] = _float_attr(w, "value")
    return tuple(player.values()), tuple(npc.values())


def _read_node(
    elem: ET.Element,
    player_decls: tuple[StateDeclaration, ...],
    npc_decls: tuple[StateDeclaration, ...],
) -> DialogNode:
    node_id = elem.get("id", "")
    node_type = elem.get("type")
    name = _element_name(elem)

    def text_child(children: list[ET.Element], tag: str) -> str | None:
        found = [c for c in children if c.tag == tag]
        if len(found) > 1:
            raise SchemaError(f"more than one <{tag}>", name)
        if not found:
            return None
        return found[0].text or ""

    if node_type == "start":
        if elem.get("name") is None:
            raise SchemaError("start node needs a name", name)
        children = _children(elem, "effect")
        if len(children) > 1:
            raise SchemaError("more than one <effect>", name)
        if children:
            player, npc = _read_weights(children[0], player_decls, npc_decls)
            effect = EffectWeights(player, npc)
        else:
            effect = EffectWeights.zeros(len(player_decls), len(npc_decls))
        return StartNode(node_id, elem.get("name", ""), effect)

    if node_type == "item":
        for required in ("actor", "conversant"):
            if elem.get(required) is None:
                raise SchemaError(f"item node needs attribute {required!r}", name)
        children = _children(elem, "cue", "direction", "cause", "effect", "asset")
        causes = [c for c in children if c.tag == "cause"]
        effects = [c for c in children if c.tag == "effect"]
        if len(causes) > 1 or len(effects) > 1:
            raise SchemaError("more than one <cause> or <effect>", name)
        cause = None
        if causes:
            general = _float_attr(causes[0], "general")
            player, npc = _read_weights(causes[0], player_decls, npc_decls)
            cause = CauseWeights(general, player, npc)
        if effects:
            player, npc = _read_weights(effects[0], player_decls, npc_decls)
            effect = EffectWeights(player, npc)
        else:
            effect = EffectWeights.zeros(len(player_decls), len(npc_decls))
        assets = []
        for a in children:
            if a.tag != "asset":
                continue
            role_raw = a.get("role", "")
            try:
                role = AssetRole(role_raw)
            except ValueError:
                raise SchemaError(f"unknown asset role {role_raw!r}", _element_name(a))
            assets.append(AssetRef(role, a.get("path", "")))
        return DialogItem(
            id=node_id,
            actor_id=elem.get("actor", ""),
            conversant_id=elem.get("conversant", ""),
            effect=effect,
            cue=text_child(children, "cue"),
            direction=text_child(children, "direction"),
            menu_label=elem.get("menuLabel"),
            cause=cause,
            assets=tuple(assets),
        )

    if node_type == "termination":
        children = _children(elem, "direction")
        direction = text_child(children, "direction")
        return TerminationNode(node_id, direction or "", elem.get("value"))

    if node_type == "reference" or node_type == "subdialog":
        target = elem.get("target")
        if target is None:
            raise SchemaError(f"{node_type} node needs attribute 'target'", name)
        _children(elem)
        cls = ReferenceNode if node_type == "reference" else SubdialogNode
        return cls(node_id, target)

    raise SchemaError(f"unknown node type {node_type!r}", name)


def loads(text: str) -> Project:
    """Parse project XML text; strict about structure, ranges, and version."""
    try:
        root = ET.fromstring(text)
    except ET.ParseError as exc:
        line, column = getattr(exc, "position", (None, None))
        raise ProjectParseError(f"not well-formed XML: {exc.msg}", line, column) from exc

    if root.tag != "simdialog":
        raise SchemaError(f"root element must be <simdialog>, got <{root.tag}>", root.tag)
    _check_attrs(root)
    version = _int_attr(root, "version")
    if version != FORMAT_VERSION:
        raise UnsupportedVersionError(
            f"file format version {version} is not supported (reader knows version {FORMAT_VERSION})"
        )

    title = ""
    project_version = ""
    actors: list[Actor] = []
    decls: dict[StateScope, tuple[StateDeclaration, ...]] = {}
    pages: list[Page] = []
    nodes: list[DialogNode] = []
    edges: list[Edge] = []
    seen_sections: set[str] = set()

    sections = _children(root, "metadata", "actors", "states", "pages", "edges")
    for section in sections:
        key = section.tag + (section.get("scope", "") if section.tag == "states" else "")
        if key in seen_sections:
            raise SchemaError("duplicate section", _element_name(section))
        seen_sections.add(key)

        if section.tag == "metadata":
            title = section.get("title", "")
            project_version = section.get("projectVersion", "")
            _children(section)

        elif section.tag == "actors":
            for a in _children(section, "actor"):
                kind_raw = a.get("kind", "")
                try:
                    kind = ActorKind(kind_raw)
                except ValueError:
                    raise SchemaError(f"unknown actor kind {kind_raw!r}", _element_name(a))
                attributes = {}
                for attr in _children(a, "attr"):
                    key_name = attr.get("key", "")
                    if key_name in attributes:
                        raise SchemaError(f"duplicate attr {key_name!r}", _element_name(a))
                    attributes[key_name] = attr.get("value", "")
                actor = Actor(
                    a.get("id", ""), a.get("displayName", ""), kind, attributes, a.get("color")
                )
                if any(existing.id == actor.id for existing in actors):
                    raise SchemaError(f"duplicate actor id {actor.id!r}", _element_name(a))
                actors.append(actor)

        elif section.tag == "states":
            scope_raw = section.get("scope", "")
            try:
                scope = StateScope(scope_raw)
            except ValueError:
                raise SchemaError(f"unknown states scope {scope_raw!r}", _element_name(section))
            scope_decls = []
            for s in _children(section, "state"):
                decl = StateDeclaration(s.get("name", ""), scope, _float_attr(s, "default"))
                if any(d.name == decl.name for d in scope_decls):
                    raise SchemaError(f"duplicate state {decl.name!r}", _element_name(s))
                scope_decls.append(decl)
            decls[scope] = tuple(scope_decls)

    player_decls = decls.get(StateScope.PLAYER, ())
    npc_decls = decls.get(StateScope.NPC, ())

    # Nodes reference the declaration lists, so read pages on a second pass.
    for section in sections:
        if section.tag == "pages":
            for p in _children(section, "page"):
                page_name = p.get("name", "")
                if any(page.name == page_name for page in pages):
                    raise SchemaError(f"duplicate page name {page_name!r}", _element_name(p))
                node_ids = []
                layout: dict[str, tuple[float, float]] = {}
                for child in _children(p, "node", "layout"):
                    if child.tag == "node":
                        node = _read_node(child, player_decls, npc_decls)
                        if any(n.id == node.id for n in nodes):
                            raise SchemaError(f"duplicate node id {node.id!r}", _element_name(child))
                        nodes.append(node)
                        node_ids.append(node.id)
                    else:
                        for pos in _children(child, "pos"):
                            ref = pos.get("node", "")
                            if ref in layout:
                                raise SchemaError(f"duplicate position for {ref!r}", "layout")
                            layout[ref] = (
                                _float_attr(pos, "x", bounded=False),
                                _float_attr(pos, "y", bounded=False),
                            )
                pages.append(Page(page_name, frozenset(node_ids), layout))

        elif section.tag == "edges":
            seen_orders: set[tuple[str, int]] = set()
            for e in _children(section, "edge"):
                edge = Edge(
                    e.get("from", ""),
                    e.get("to", ""),
                    _int_attr(e, "order"),
                    e.get("branch"),
                )
                if (edge.from_id, edge.order) in seen_orders:
                    raise SchemaError(
                        f"duplicate order {edge.order} on edges from {edge.from_id!r}",
                        _element_name(e),
                    )
                seen_orders.add((edge.from_id, edge.order))
                edges.append(edge)

    return Project(
        title=title,
        version=project_version,
        actors=tuple(actors),
        player_state_decls=player_decls,
        npc_state_decls=npc_decls,
        pages=tuple(pages),
        nodes=tuple(nodes),
        edges=tuple(edges),
    )


def load(path: str | Path) -> Project:
    """Read a project file from disk."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProjectParseError(f"cannot read project file {path}: {exc}") from exc
    return loads(text)


# -- asset inventory ----------------------------------------------------------


@dataclass(frozen=True)
class InventoryEntry:
    path: str
    role: AssetRole
    referencing_node_ids: tuple[str, ...]
    exists: bool | None  # None when no asset root was given


@dataclass(frozen=True)
class InventoryReport:
    """All dialog-related assets a project references, deduplicated by
    (path, role), optionally checked for presence on disk."""

    entries: tuple[InventoryEntry, ...]

    @property
    def reference_count(self) -> int:
        return sum(len(e.referencing_node_ids) for e in self.entries)

    @property
    def missing_count(self) -> int:
        return sum(1 for e in self.entries if e.exists is False)

    def machine_lines(self) -> list[str]:
        """One asset per line: path, role, reference count, exists flag."""
        flags = {True: "yes", False: "no", None: "-"}
        return [
            f"{e.path}\t{e.role.value}\t{len(e.referencing_node_ids)}\t{flags[e.exists]}"
            for e in self.entries
        ]

    def table(self) -> str:
        if not self.entries:
            return "no assets referenced\n"
        rows = [("PATH", "ROLE", "REFS", "EXISTS")]
        flags = {True: "yes", False: "MISSING", None: "-"}
        for e in self.entries:
            rows.append(
                (e.path, e.role.value, str(len(e.referencing_node_ids)), flags[e.exists])
            )
        widths = [max(len(r[i]) for r in rows) for i in range(4)]
        lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip() for row in rows]
        summary = f"{len(self.entries)} assets, {self.reference_count} references"
        if any(e.exists is not None for e in self.entries):
            summary += f", {self.missing_count} missing"
        return "\n".join(lines) + "\n" + summary + "\n"


def inventory(project: Project, asset_root: str | Path | None = None) -> InventoryReport:
    """Aggregate every asset referenced by dialog items.

    With ``asset_root``, relative asset paths are resolved against it (never
    against the project file location) and checked for existence. Missing
    files are report content, not errors.
    """
    refs: dict[tuple[str, str], list[str]] = {}
    roles: dict[tuple[str, str], AssetRole] = {}
    for node in project.nodes:
        if not isinstance(node, DialogItem):
            continue
        for asset in node.assets:
            key = (asset.path, asset.role.value)
            refs.setdefault(key, []).append(node.id)
            roles[key] = asset.role
    entries = []
    for key in sorted(refs):
        path, _ = key
        exists: bool | None = None
        if asset_root is not None:
            exists = (Path(asset_root) / path).exists()
        entries.append(
            InventoryEntry(
                path=path,
                role=roles[key],
                referencing_node_ids=tuple(sorted(refs[key])),
                exists=exists,
            )
        )
    return InventoryReport(tuple(entries))
