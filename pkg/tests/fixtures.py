"""Shared fixture graphs and random project generators.

The date-night fixture is the workhorse: a four-phase conversation (meeting,
small talk, negotiation, parting) built from four subdialog nodes, where the
negotiation outcome picks the branch by termination value. All effect values
are quarters so every hand-traced state sum is float-exact.
"""

from __future__ import annotations

import random

from parley.model import (
    Actor,
    ActorKind,
    AssetRef,
    AssetRole,
    CauseWeights,
    DialogItem,
    EffectWeights,
    Project,
    ProjectBuilder,
    ReferenceNode,
    StartNode,
    StateDeclaration,
    StateScope,
    SubdialogNode,
    TerminationNode,
)


def mood_project() -> Project:
    """Player asks how it's going; the reply hangs on the NPC's mood.

    The positive reply carries mood weight +1 (edge order 0), the negative
    reply mood weight -1 (edge order 1). No player states at all, which
    also exercises empty vectors in the score.
    """
    b = ProjectBuilder("mood check")
    b.add_actor(Actor("sam", "Sam", ActorKind.PLAYER, color="#c0392b"))
    b.add_actor(Actor("kay", "Kay", ActorKind.NPC, color="#27ae60"))
    b.add_state(StateDeclaration("mood", StateScope.NPC, 0.0))
    zero = EffectWeights.zeros(0, 1)
    b.add_page("main")
    b.add_node("main", StartNode("s", "mood-check", zero))
    b.add_node("main", DialogItem("q", "sam", "kay", zero, cue="How are you doing?"))
    b.add_node(
        "main",
        DialogItem(
            "pos", "kay", "kay", zero,
            cue="Very well, thank you.",
            cause=CauseWeights(0.0, (), (1.0,)),
        ),
    )
    b.add_node(
        "main",
        DialogItem(
            "neg", "kay", "kay", zero,
            cue="Get lost, creep.",
            cause=CauseWeights(0.0, (), (-1.0,)),
        ),
    )
    b.add_node("main", TerminationNode("t_pos", "scene over"))
    b.add_node("main", TerminationNode("t_neg", "scene over badly"))
    b.add_edge("s", "q", 0)
    b.add_edge("q", "pos", 0)
    b.add_edge("q", "neg", 1)
    b.add_edge("pos", "t_pos", 0)
    b.add_edge("neg", "t_neg", 0)
    return b.build()


def date_night_project() -> Project:
    """Four subdialogs chained on a main page; negotiation branches by
    termination value into a warm parting or an immediate slap."""
    b = ProjectBuilder("date night", version="3")
    b.add_actor(Actor("alex", "Alex", ActorKind.PLAYER, {"age": "29"}, color="#c0392b"))
    b.add_actor(Actor("morgan", "Morgan", ActorKind.NPC, color="#27ae60"))
    b.add_state(StateDeclaration("confidence", StateScope.PLAYER, 0.0))
    b.add_state(StateDeclaration("mood", StateScope.NPC, 0.0))
    b.add_state(StateDeclaration("interest", StateScope.NPC, 0.0))

    zero = EffectWeights.zeros(1, 2)
    zero_cause = CauseWeights.zeros(1, 2)

    def eff(confidence=0.0, mood=0.0, interest=0.0) -> EffectWeights:
        return EffectWeights((confidence,), (mood, interest))

    def mood_cause(weight: float) -> CauseWeights:
        return CauseWeights(0.0, (0.0,), (weight, 0.0))

    b.add_page("main")
    b.add_node("main", StartNode("s_main", "date-night", eff(confidence=0.25, interest=0.25)))
    b.add_node("main", SubdialogNode("d_meet", "meeting"))
    b.add_node("main", SubdialogNode("d_talk", "small-talk"))
    b.add_node("main", SubdialogNode("d_nego", "negotiation"))
    b.add_node("main", SubdialogNode("d_part", "parting"))
    b.add_node("main", TerminationNode("t_date", "evening ends with plans"))
    b.add_node("main", TerminationNode("t_slap", "slapped; evening over"))
    b.add_edge("s_main", "d_meet", 0)
    b.add_edge("d_meet", "d_talk", 0)
    b.add_edge("d_talk", "d_nego", 0)
    b.add_edge("d_nego", "d_part", 0, branch_label="date")
    b.add_edge("d_nego", "t_slap", 1, branch_label="slap")
    b.add_edge("d_part", "t_date", 0)
    b.set_position("main", "s_main", 0.0, 0.0)
    b.set_position("main", "d_meet", 120.0, 0.0)

    b.add_page("meeting")
    b.add_node("meeting", StartNode("s_meet", "meeting", zero))
    b.add_node(
        "meeting",
        DialogItem("n_hi", "morgan", "morgan", zero,
                   cue="Hi, I'm Morgan. You must be Alex.", cause=zero_cause),
    )
    b.add_node(
        "meeting",
        DialogItem("p_warm", "alex", "morgan", eff(confidence=0.25, mood=0.5),
                   cue="Great to meet you. I've been looking forward to this.",
                   menu_label="Be warm"),
    )
    b.add_node(
        "meeting",
        DialogItem("p_cool", "alex", "morgan", eff(confidence=-0.25, mood=-0.5),
                   cue="Hey.", menu_label="Play it cool"),
    )
    b.add_node("meeting", TerminationNode("t_meet", "introductions done"))
    b.add_edge("s_meet", "n_hi", 0)
    b.add_edge("n_hi", "p_warm", 0)
    b.add_edge("n_hi", "p_cool", 1)
    b.add_edge("p_warm", "t_meet", 0)
    b.add_edge("p_cool", "t_meet", 0)

    b.add_page("small-talk")
    b.add_node("small-talk", StartNode("s_talk", "small-talk", zero))
    b.add_node(
        "small-talk",
        DialogItem("n_ask", "morgan", "morgan", zero,
                   cue="So, how's the evening treating you?", cause=zero_cause),
    )
    b.add_node(
        "small-talk",
        DialogItem("p_honest", "alex", "morgan", eff(confidence=0.25, mood=0.25),
                   cue="Better by the minute.", menu_label="Be honest"),
    )
    b.add_node(
        "small-talk",
        DialogItem("p_brag", "alex", "morgan", eff(confidence=0.25, mood=-0.25),
                   cue="It improved the moment you saw me.", menu_label="Show off"),
    )
    b.add_node(
        "small-talk",
        DialogItem("n_glow", "morgan", "morgan", eff(mood=0.25),
                   cue="You're easy company, you know that?", cause=mood_cause(1.0)),
    )
    b.add_node(
        "small-talk",
        DialogItem("n_dry", "morgan", "morgan", eff(confidence=-0.25),
                   cue="The evening is doing its best.", cause=mood_cause(-1.0)),
    )
    b.add_node("small-talk", TerminationNode("t_talk", "small talk over"))
    b.add_edge("s_talk", "n_ask", 0)
    b.add_edge("n_ask", "p_honest", 0)
    b.add_edge("n_ask", "p_brag", 1)
    b.add_edge("p_honest", "n_glow", 0)
    b.add_edge("p_honest", "n_dry", 1)
    b.add_edge("p_brag", "n_glow", 0)
    b.add_edge("p_brag", "n_dry", 1)
    b.add_edge("n_glow", "t_talk", 0)
    b.add_edge("n_dry", "t_talk", 0)

    b.add_page("negotiation")
    b.add_node("negotiation", StartNode("s_nego", "negotiation", zero))
    b.add_node(
        "negotiation",
        DialogItem("n_again", "morgan", "morgan", zero,
                   cue="I'd like to do this again. Would you?", cause=zero_cause),
    )
    b.add_node(
        "negotiation",
        DialogItem("p_yes", "alex", "morgan", eff(confidence=0.25, mood=0.25),
                   cue="I'd love that.", menu_label="Say yes"),
    )
    b.add_node(
        "negotiation",
        DialogItem("p_no", "alex", "morgan", eff(confidence=-0.25, mood=-1.0),
                   cue="You must be joking.", menu_label="Shut it down"),
    )
    b.add_node(
        "negotiation",
        DialogItem("n_happy", "morgan", "morgan", eff(interest=0.5),
                   cue="Wonderful. Saturday, then.", cause=mood_cause(1.0),
                   assets=(AssetRef(AssetRole.AUDIO, "morgan/happy.wav"),)),
    )
    b.add_node(
        "negotiation",
        DialogItem("n_slap", "morgan", "morgan", eff(interest=-1.0),
                   direction="slaps Alex", cause=mood_cause(-1.0),
                   assets=(AssetRef(AssetRole.AUDIO, "morgan/slap.wav"),
                           AssetRef(AssetRole.LIP_SYNC, "morgan/slap.sync"))),
    )
    b.add_node("negotiation", TerminationNode("t_nd", "negotiation: agreed", "date"))
    b.add_node("negotiation", TerminationNode("t_ns", "negotiation: rejected", "slap"))
    b.add_edge("s_nego", "n_again", 0)
    b.add_edge("n_again", "p_yes", 0)
    b.add_edge("n_again", "p_no", 1)
    b.add_edge("p_yes", "n_happy", 0)
    b.add_edge("p_yes", "n_slap", 1)
    b.add_edge("p_no", "n_happy", 0)
    b.add_edge("p_no", "n_slap", 1)
    b.add_edge("n_happy", "t_nd", 0)
    b.add_edge("n_slap", "t_ns", 0)

    b.add_page("parting")
    b.add_node("parting", StartNode("s_part", "parting", zero))
    b.add_node(
        "parting",
        DialogItem("n_walk", "morgan", "morgan", zero,
                   cue="Walk me to my car?", cause=zero_cause,
                   assets=(AssetRef(AssetRole.AUDIO, "morgan/happy.wav"),)),
    )
    b.add_node(
        "parting",
        DialogItem("p_walk", "alex", "morgan", eff(confidence=0.25),
                   cue="Of course.", menu_label="Walk along"),
    )
    b.add_node("parting", TerminationNode("t_part", "goodnight"))
    b.add_edge("s_part", "n_walk", 0)
    b.add_edge("n_walk", "p_walk", 0)
    b.add_edge("p_walk", "t_part", 0)
    return b.build()


DATE_PATH_CHOICES = ["p_warm", "p_honest", "p_yes", "p_walk"]
SLAP_PATH_CHOICES = ["p_cool", "p_brag", "p_no"]


def cycle_project() -> Project:
    """Two NPC lines pointing at each other forever; start feeds the loop."""
    b = ProjectBuilder("endless loop")
    b.add_actor(Actor("sam", "Sam", ActorKind.PLAYER))
    b.add_actor(Actor("kay", "Kay", ActorKind.NPC))
    zero = EffectWeights.zeros(0, 0)
    zero_cause = CauseWeights.zeros(0, 0)
    b.add_page("main")
    b.add_node("main", StartNode("s", "loop", zero))
    b.add_node("main", DialogItem("a", "kay", "kay", zero, cue="tick", cause=zero_cause))
    b.add_node("main", DialogItem("b", "kay", "kay", zero, cue="tock", cause=zero_cause))
    b.add_edge("s", "a", 0)
    b.add_edge("a", "b", 0)
    b.add_edge("b", "a", 0)
    return b.build()


def reference_project() -> Project:
    """Two pages joined by a reference node; the target start has an effect."""
    b = ProjectBuilder("referenced scenes")
    b.add_actor(Actor("sam", "Sam", ActorKind.PLAYER))
    b.add_actor(Actor("kay", "Kay", ActorKind.NPC))
    b.add_state(StateDeclaration("trust", StateScope.NPC, 0.0))
    zero = EffectWeights.zeros(0, 1)
    zero_cause = CauseWeights.zeros(0, 1)
    b.add_page("one")
    b.add_node("one", StartNode("s1", "scene-one", zero))
    b.add_node("one", DialogItem("n1", "kay", "kay", zero, cue="Follow me.", cause=zero_cause))
    b.add_node("one", ReferenceNode("r1", "scene-two"))
    b.add_edge("s1", "n1", 0)
    b.add_edge("n1", "r1", 0)
    b.add_page("two")
    b.add_node("two", StartNode("s2", "scene-two", EffectWeights((), (0.5,))))
    b.add_node("two", DialogItem("n2", "kay", "kay", zero, cue="We made it.", cause=zero_cause))
    b.add_node("two", TerminationNode("t2", "arrived"))
    b.add_edge("s2", "n2", 0)
    b.add_edge("n2", "t2", 0)
    return b.build()


# -- random generators --------------------------------------------------------

_PHRASES = [
    "Well, look who it is.",
    "No limits here <angle> & \"quotes\" allowed",
    "Ünïcodé — em dash, naïve café",
    "line one\nline two",
    "  padded  ",
    "What do you want?",
    "(Blake 2000) stays verbatim",
    "…",
]


def _rand_weight(rng: random.Random) -> float:
    roll = rng.random()
    if roll < 0.25:
        return rng.choice([0.0, 1.0, -1.0, 0.5, -0.5])
    if roll < 0.5:
        return round(rng.uniform(-1.0, 1.0), 3)
    return rng.uniform(-1.0, 1.0)


def _rand_effect(rng: random.Random, n_player: int, n_npc: int) -> EffectWeights:
    return EffectWeights(
        tuple(_rand_weight(rng) for _ in range(n_player)),
        tuple(_rand_weight(rng) for _ in range(n_npc)),
    )


def _rand_cause(rng: random.Random, n_player: int, n_npc: int) -> CauseWeights:
    return CauseWeights(
        _rand_weight(rng),
        tuple(_rand_weight(rng) for _ in range(n_player)),
        tuple(_rand_weight(rng) for _ in range(n_npc)),
    )


def _rand_text(rng: random.Random) -> str:
    return f"{rng.choice(_PHRASES)} #{rng.randrange(1000)}"


def random_project(rng: random.Random) -> Project:
    """A random valid project (warnings allowed, never errors).

    Exercises persistence: unicode and XML-special text, optional fields,
    assets, layout positions, references, subdialog branch labels.
    """
    b = ProjectBuilder(
        title=f"fuzz <&> Ünïcodé {rng.randrange(10_000)}",
        version=str(rng.randrange(5)),
    )
    attrs = {"age": str(rng.randrange(18, 80))} if rng.random() < 0.5 else {}
    b.add_actor(Actor("player", "The Player", ActorKind.PLAYER, attrs))
    npc_ids = []
    for i in range(rng.randint(1, 3)):
        npc_id = f"npc_{i}"
        b.add_actor(
            Actor(npc_id, f'NPC {i} "quoted"', ActorKind.NPC,
                  color=rng.choice([None, "#27ae60", "#c0392b"]))
        )
        npc_ids.append(npc_id)
    for i in range(rng.randint(0, 3)):
        b.add_state(StateDeclaration(f"p{i}", StateScope.PLAYER, _rand_weight(rng)))
    for i in range(rng.randint(0, 3)):
        b.add_state(StateDeclaration(f"n{i}", StateScope.NPC, _rand_weight(rng)))
    n_player, n_npc = b.player_state_count, b.npc_state_count

    page_count = rng.randint(1, 3)
    start_names = [f"scene-{p}" for p in range(page_count)]
    for p in range(page_count):
        page = f"page-{p}"
        b.add_page(page)
        start = StartNode(f"s{p}", start_names[p], _rand_effect(rng, n_player, n_npc))
        b.add_node(page, start)
        prev = start.id
        item_ids: list[str] = []
        for i in range(rng.randint(0, 5)):
            node_id = f"i{p}_{i}"
            conversant = rng.choice(npc_ids)
            if rng.random() < 0.4:
                item = DialogItem(
                    node_id, "player", conversant, _rand_effect(rng, n_player, n_npc),
                    cue=_rand_text(rng),
                    menu_label=_rand_text(rng) if rng.random() < 0.4 else None,
                    direction=_rand_text(rng) if rng.random() < 0.2 else None,
                )
            else:
                item = DialogItem(
                    node_id, conversant, conversant, _rand_effect(rng, n_player, n_npc),
                    cue=None if rng.random() < 0.1 else _rand_text(rng),
                    direction=_rand_text(rng) if rng.random() < 0.3 else None,
                    cause=_rand_cause(rng, n_player, n_npc),
                    assets=tuple(
                        AssetRef(rng.choice(list(AssetRole)), f"assets/clip_{rng.randrange(4)}.wav")
                        for _ in range(rng.randrange(3))
                    ),
                )
                if item.cue is None and item.direction is None:
                    item = DialogItem(
                        node_id, conversant, conversant, item.effect,
                        direction=_rand_text(rng), cause=item.cause, assets=item.assets,
                    )
            b.add_node(page, item)
            b.add_edge(prev, node_id)
            if rng.random() < 0.3:
                b.set_position(page, node_id, rng.uniform(-500, 500), rng.uniform(0, 400))
            prev = node_id
            item_ids.append(node_id)

        roll = rng.random()
        other_starts = [s for s in start_names if s != start_names[p]]
        if roll < 0.2 and other_starts:
            b.add_node(page, ReferenceNode(f"r{p}", rng.choice(other_starts)))
            b.add_edge(prev, f"r{p}")
        elif roll < 0.35 and other_starts:
            sub_id = f"d{p}"
            b.add_node(page, SubdialogNode(sub_id, rng.choice(other_starts)))
            b.add_edge(prev, sub_id)
            term_id = f"dt{p}"
            b.add_node(page, TerminationNode(term_id, "after subdialog"))
            b.add_edge(sub_id, term_id, 0,
                       branch_label=rng.choice([None, "done", "fail"]))
        else:
            b.add_node(
                page,
                TerminationNode(
                    f"t{p}", _rand_text(rng),
                    rng.choice([None, "ok", "fled"]),
                ),
            )
            b.add_edge(prev, f"t{p}")
    return b.build()


def random_runnable_project(rng: random.Random) -> Project:
    """A random acyclic menu/NPC-turn graph that always reaches a termination.

    Layered: each non-terminal node fans out to 1-3 nodes of one kind
    (all player items or all NPC items); the last layer feeds a single
    termination. Used for runtime fuzzing.
    """
    b = ProjectBuilder("runnable fuzz")
    b.add_actor(Actor("player", "Player", ActorKind.PLAYER))
    npc_ids = []
    for i in range(rng.randint(1, 2)):
        npc_id = f"npc_{i}"
        b.add_actor(Actor(npc_id, f"NPC {i}", ActorKind.NPC))
        npc_ids.append(npc_id)
    for i in range(rng.randint(0, 2)):
        b.add_state(StateDeclaration(f"p{i}", StateScope.PLAYER, _rand_weight(rng)))
    for i in range(rng.randint(1, 2)):
        b.add_state(StateDeclaration(f"n{i}", StateScope.NPC, _rand_weight(rng)))
    n_player, n_npc = b.player_state_count, b.npc_state_count

    b.add_page("main")
    b.add_node("main", StartNode("s", "fuzz", _rand_effect(rng, n_player, n_npc)))
    current_layer = ["s"]
    counter = 0
    for depth in range(rng.randint(1, 5)):
        player_turn = rng.random() < 0.5
        next_layer: list[str] = []
        for node_id in current_layer:
            for _ in range(rng.randint(1, 3)):
                counter += 1
                child_id = f"n{counter}"
                conversant = rng.choice(npc_ids)
                if player_turn:
                    item = DialogItem(
                        child_id, "player", conversant,
                        _rand_effect(rng, n_player, n_npc), cue=f"player line {counter}",
                    )
                else:
                    item = DialogItem(
                        child_id, conversant, conversant,
                        _rand_effect(rng, n_player, n_npc), cue=f"npc line {counter}",
                        cause=_rand_cause(rng, n_player, n_npc),
                    )
                b.add_node("main", item)
                b.add_edge(node_id, child_id)
                next_layer.append(child_id)
        current_layer = next_layer
    b.add_node("main", TerminationNode("t", "fuzz over"))
    for node_id in current_layer:
        b.add_edge(node_id, "t")
    return b.build()
