"""XML round-trip, schema strictness, and inventory tests."""

from __future__ import annotations

import random
import xml.etree.ElementTree as ET
from pathlib import Path

import pytest

from fixtures import date_night_project, mood_project, random_project
from parley.errors import (
    InvalidProjectError,
    ProjectParseError,
    SchemaError,
    UnsupportedVersionError,
)
from parley.model import (
    Actor,
    ActorKind,
    AssetRef,
    AssetRole,
    CauseWeights,
    DialogItem,
    Edge,
    EffectWeights,
    Page,
    Project,
    ProjectBuilder,
    ReferenceNode,
    StartNode,
    StateDeclaration,
    StateScope,
    TerminationNode,
    projects_equivalent,
)
from parley.persistence import (
    SCHEMA_ATTRS,
    SCHEMA_PATH,
    dumps,
    inventory,
    load,
    loads,
    save,
)
from parley.script_import import build_graph, parse_script

DATA = Path(__file__).parent / "data"


def minimal_project() -> Project:
    b = ProjectBuilder("tiny")
    b.add_actor(Actor("p", "Hero", ActorKind.PLAYER))
    b.add_page("main")
    b.add_node("main", StartNode("s", "go"))
    b.add_node("main", TerminationNode("t", "done"))
    b.add_edge("s", "t", 0)
    return b.build()


# -- saving -------------------------------------------------------------------


def test_minimal_save_is_wellformed_and_schema_conformant():
    text = dumps(minimal_project())
    root = ET.fromstring(text)  # well-formed
    assert root.tag == "simdialog"
    assert root.get("version") == "1"
    # every element and attribute is declared by the format schema
    for elem in root.iter():
        assert elem.tag in SCHEMA_ATTRS, elem.tag
        required, optional = SCHEMA_ATTRS[elem.tag]
        assert required <= set(elem.attrib) <= (required | optional), elem.tag


def test_shipped_schema_file_exists_and_parses():
    assert SCHEMA_PATH.exists()
    schema_root = ET.parse(SCHEMA_PATH).getroot()
    assert schema_root.tag.endswith("schema")


def test_save_twice_is_byte_identical(tmp_path):
    project = date_night_project()
    first, second = tmp_path / "a.xml", tmp_path / "b.xml"
    save(project, first)
    save(project, second)
    assert first.read_bytes() == second.read_bytes()


def test_save_is_stable_across_reload(tmp_path):
    path = tmp_path / "p.xml"
    save(date_night_project(), path)
    text = path.read_text(encoding="utf-8")
    assert dumps(load(path)) == text


def test_imported_scene_file_has_six_item_nodes(tmp_path):
    b = ProjectBuilder("host")
    b.add_actor(Actor("hero", "Hero", ActorKind.PLAYER))
    project, _ = build_graph(
        parse_script((DATA / "two_actor_scene.txt").read_text(encoding="utf-8")),
        b.build(),
        "scene",
        "scene-start",
    )
    path = tmp_path / "scene.xml"
    save(project, path)
    root = ET.parse(path).getroot()
    assert len(root.findall(".//node[@type='item']")) == 6


def test_save_refuses_projects_with_errors(tmp_path):
    b = ProjectBuilder()
    b.add_actor(Actor("p", "Hero", ActorKind.PLAYER))
    b.add_page("main")
    b.add_node("main", StartNode("s", "go"))
    b.add_node("main", ReferenceNode("r", "nowhere"))
    b.add_edge("s", "r", 0)
    with pytest.raises(InvalidProjectError) as excinfo:
        save(b.build(), tmp_path / "bad.xml")
    assert excinfo.value.diagnostics
    assert not (tmp_path / "bad.xml").exists()


# -- loading -------------------------------------------------------------------


def test_round_trip_fixtures():
    for project in (minimal_project(), mood_project(), date_night_project()):
        assert projects_equivalent(project, loads(dumps(project)))


def test_round_trip_random_projects():
    for seed in range(60):
        project = random_project(random.Random(seed))
        text = dumps(project)
        back = loads(text)
        assert projects_equivalent(project, back), f"seed {seed}"
        assert dumps(back) == text, f"seed {seed}"


def test_golden_minimal_file_loads_to_documented_project():
    golden = (DATA / "golden_minimal.xml").read_text(encoding="utf-8")
    expected = Project(
        title="two liner",
        actors=(
            Actor("kay", "Kay", ActorKind.NPC, color="#27ae60"),
            Actor("sam", "Sam", ActorKind.PLAYER, {"age": "30"}),
        ),
        player_state_decls=(StateDeclaration("confidence", StateScope.PLAYER, 0.0),),
        npc_state_decls=(StateDeclaration("mood", StateScope.NPC, 0.25),),
        pages=(
            Page("main", frozenset({"s1", "n1", "t1"}), {"s1": (0.0, 0.0)}),
        ),
        nodes=(
            StartNode("s1", "hallway", EffectWeights((0.0,), (0.5,))),
            DialogItem(
                "n1", "kay", "kay",
                EffectWeights((-0.25,), (0.0,)),
                cue="Oh. It's you.",
                cause=CauseWeights(-0.5, (0.0,), (-1.0,)),
                assets=(AssetRef(AssetRole.AUDIO, "kay/greet.wav"),),
            ),
            TerminationNode("t1", "scene over"),
        ),
        edges=(Edge("s1", "n1", 0), Edge("n1", "t1", 0)),
    )
    got = loads(golden)
    assert projects_equivalent(got, expected)
    # the golden file is in canonical form: re-saving reproduces it byte for byte
    assert dumps(got) == golden


def test_out_of_range_weight_is_a_schema_error():
    project = mood_project()
    text = dumps(project).replace('value="1.0"', 'value="1.5"')
    with pytest.raises(SchemaError) as excinfo:
        loads(text)
    assert "w" in str(excinfo.value)
    assert "1.5" in str(excinfo.value)


def test_out_of_range_state_default_is_a_schema_error():
    text = dumps(mood_project()).replace('default="0.0"', 'default="-3.0"')
    with pytest.raises(SchemaError):
        loads(text)


def test_unknown_version_rejected():
    text = dumps(minimal_project()).replace('version="1"', 'version="2"')
    with pytest.raises(UnsupportedVersionError):
        loads(text)


def test_malformed_xml_reports_position():
    with pytest.raises(ProjectParseError) as excinfo:
        loads("<simdialog version='1'><actors></simdialog>")
    assert excinfo.value.line is not None


def test_unknown_element_and_attribute_rejected():
    text = dumps(minimal_project())
    assert "<actors>" in text  # replace targets stay in sync with the writer
    with pytest.raises(SchemaError):
        loads(text.replace("<actors>", "<actors><wizard />"))
    with pytest.raises(SchemaError):
        loads(text.replace("<metadata", '<metadata mood="great"'))


def test_duplicate_ids_rejected_at_load():
    text = dumps(minimal_project())
    target = '<node id="t" type="termination">'
    assert target in text
    bad = text.replace(
        target,
        '<node id="t" type="termination"><direction>x</direction></node>' + target,
        1,
    )
    with pytest.raises(SchemaError):
        loads(bad)


def test_unknown_state_in_weights_rejected():
    text = dumps(mood_project()).replace('state="mood"', 'state="zzz"', 1)
    with pytest.raises(SchemaError):
        loads(text)


def test_missing_file(tmp_path):
    with pytest.raises(ProjectParseError):
        load(tmp_path / "nope.xml")


def test_text_content_and_whitespace_round_trip():
    b = ProjectBuilder("whitespace")
    b.add_actor(Actor("p", "Hero", ActorKind.PLAYER))
    b.add_actor(Actor("kay", "Kay", ActorKind.NPC))
    b.add_page("main")
    b.add_node("main", StartNode("s", "go"))
    b.add_node(
        "main",
        DialogItem(
            "n", "kay", "kay", EffectWeights((), ()),
            cue="  keep <my> & \"padding\"  ",
            direction="line one\nline two",
            cause=CauseWeights(0.0, (), ()),
        ),
    )
    b.add_node("main", TerminationNode("t", "done"))
    b.add_edge("s", "n", 0)
    b.add_edge("n", "t", 0)
    project = b.build()
    back = loads(dumps(project))
    item = back.node("n")
    assert item.cue == "  keep <my> & \"padding\"  "
    assert item.direction == "line one\nline two"


# -- inventory ------------------------------------------------------------------


def test_inventory_empty_project():
    report = inventory(minimal_project())
    assert report.entries == ()
    assert report.reference_count == 0
    assert report.machine_lines() == []
    assert "no assets" in report.table()


def test_inventory_deduplicates_by_path_and_role():
    report = inventory(date_night_project())
    by_key = {(e.path, e.role) for e in report.entries}
    assert ("morgan/happy.wav", AssetRole.AUDIO) in by_key
    happy = next(e for e in report.entries if e.path == "morgan/happy.wav")
    assert happy.referencing_node_ids == ("n_happy", "n_walk")
    assert report.reference_count == 4
    assert all(e.exists is None for e in report.entries)


def test_inventory_existence_check(tmp_path):
    (tmp_path / "morgan").mkdir()
    (tmp_path / "morgan" / "happy.wav").write_bytes(b"RIFF")
    report = inventory(date_night_project(), asset_root=tmp_path)
    flags = {e.path: e.exists for e in report.entries}
    assert flags["morgan/happy.wav"] is True
    assert flags["morgan/slap.wav"] is False
    assert report.missing_count == 2


def test_inventory_machine_lines_are_tab_separated(tmp_path):
    report = inventory(date_night_project(), asset_root=tmp_path)
    for line in report.machine_lines():
        path, role, count, exists = line.split("\t")
        assert role in {"audio", "lipsync", "other"}
        assert count.isdigit()
        assert exists in {"yes", "no"}
    # entries are sorted and unique by (path, role)
    keys = [tuple(l.split("\t")[:2]) for l in report.machine_lines()]
    assert keys == sorted(set(keys))


def test_inventory_completeness():
    project = date_night_project()
    report = inventory(project)
    expected = set()
    for node in project.nodes:
        if isinstance(node, DialogItem):
            for asset in node.assets:
                expected.add((asset.path, asset.role))
    assert {(e.path, e.role) for e in report.entries} == expected
