"""Command-line toolchain: validate, import, play, inventory, serve.

Exit codes: 0 success (warnings allowed), 1 domain error (validation,
parsing, bad choices), 2 usage error. Data goes to stdout, diagnostics to
stderr, so output composes in shells and CI.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DialogError
from .model import ActorKind, Project, ProjectBuilder, Actor, Severity, validate
from .persistence import inventory, load, save
from .runtime import PhaseKind, SimulationSession, TranscriptEntry, start_conversation
from .scoring import SelectionMode, SelectionPolicy
from .script_import import build_graph, parse_script

EXIT_OK = 0
EXIT_DOMAIN = 1


# -- transcript rendering (stable line format, used by golden tests) ---------


def _quote(text: str) -> str:
    return json.dumps(text, ensure_ascii=False)


def format_states(states: dict) -> str:
    def vec(values: dict) -> str:
        return ",".join(f"{name}={value!r}" for name, value in values.items())

    parts = [f"player[{vec(states['player'])}]"]
    for npc_id in sorted(states["npcs"]):
        parts.append(f"{npc_id}[{vec(states['npcs'][npc_id])}]")
    return " ".join(parts)


def format_entry(entry: TranscriptEntry) -> str:
    parts = [entry.kind, entry.node_id]
    if entry.actor_id is not None:
        parts.append(f"actor={entry.actor_id}")
    if entry.score is not None:
        parts.append(f"score={entry.score!r}")
    if entry.cue is not None:
        parts.append(f"cue={_quote(entry.cue)}")
    if entry.direction is not None:
        parts.append(f"direction={_quote(entry.direction)}")
    parts.append("|")
    parts.append(format_states(entry.states_after))
    return " ".join(parts)


def format_phase(session: SimulationSession) -> list[str]:
    phase = session.phase
    if phase.kind is PhaseKind.ENDED:
        line = f"phase ended direction={_quote(phase.direction or '')}"
        if phase.termination_value is not None:
            line += f" value={_quote(phase.termination_value)}"
        return [line]
    lines = [f"phase {phase.kind.value}"]
    if phase.kind is PhaseKind.AWAITING_CHOICE:
        for i, option in enumerate(session.menu_options(), start=1):
            lines.append(f"option {i} {option.node_id} {_quote(option.label)}")
    return lines


# -- shared helpers -----------------------------------------------------------


def _policy_from_args(args: argparse.Namespace) -> SelectionPolicy:
    mode = SelectionMode.SOFTMAX_SAMPLE if args.policy == "softmax" else SelectionMode.ARGMAX
    return SelectionPolicy(mode=mode, temperature=args.temperature, seed=args.seed)


def _parse_set_flags(pairs: list[str], project: Project) -> dict[str, dict[str, float]]:
    """Parse ``scope.state=value`` flags; ``npc`` means the project's only NPC."""
    overrides: dict[str, dict[str, float]] = {}
    for pair in pairs:
        try:
            key, raw_value = pair.split("=", 1)
            scope, state = key.split(".", 1)
            value = float(raw_value)
        except ValueError:
            raise DialogError(f"bad --set {pair!r}; expected scope.state=value") from None
        scope = scope.strip()
        if scope == "npc":
            npcs = project.npc_actors()
            if len(npcs) != 1:
                raise DialogError(
                    f"--set scope 'npc' needs exactly one NPC in the project, found {len(npcs)}"
                )
            scope = npcs[0].id
        overrides.setdefault(scope, {})[state.strip()] = value
    return overrides


def _resolve_choice(session: SimulationSession, token: str, step: int) -> str:
    menu = session.menu_options()
    if token.isdigit():
        index = int(token)
        if not 1 <= index <= len(menu):
            raise DialogError(
                f"step {step}: choice {index} out of range (menu has {len(menu)} options)"
            )
        return menu[index - 1].node_id
    for option in menu:
        if option.node_id == token:
            return token
    raise DialogError(f"step {step}: {token!r} is not one of the current menu options")


# -- subcommands --------------------------------------------------------------


def cmd_validate(args: argparse.Namespace) -> int:
    project = load(args.project)
    diagnostics = validate(project)
    for diagnostic in diagnostics:
        print(diagnostic)
    errors = sum(1 for d in diagnostics if d.severity is Severity.ERROR)
    warnings = sum(1 for d in diagnostics if d.severity is Severity.WARNING)
    print(f"{errors} errors, {warnings} warnings")
    return EXIT_DOMAIN if errors else EXIT_OK


def cmd_import(args: argparse.Namespace) -> int:
    script_path = Path(args.script)
    text = script_path.read_text(encoding="utf-8")
    lines = parse_script(text)

    project_path = Path(args.project)
    if project_path.exists():
        project = load(project_path)
    else:
        project = Project(title=project_path.stem)
        print(f"info: creating new project {project_path}", file=sys.stderr)

    page = args.page or script_path.stem
    start = args.start or page
    project, diagnostics = build_graph(
        lines, project, page_name=page, start_name=start, player_name=args.player_name
    )

    if not project.player_actors():
        # A project must keep at least one player actor to stay valid.
        builder = ProjectBuilder.from_project(project)
        builder.add_actor(Actor("player", "Player", ActorKind.PLAYER))
        project = builder.build()
        print("info: added default player actor 'player'", file=sys.stderr)

    for diagnostic in diagnostics:
        print(diagnostic, file=sys.stderr)
    save(project, project_path)
    print(f"imported {page!r}: start {start!r} plus {len(lines)} script lines -> {project_path}")
    return EXIT_OK


def cmd_play(args: argparse.Namespace) -> int:
    project = load(args.project)
    policy = _policy_from_args(args)
    overrides = _parse_set_flags(args.set or [], project)

    if args.interactive:
        return _play_interactive(project, args.start, policy, overrides, args.max_steps)

    tokens: list[str] = []
    if args.choices:
        for raw in Path(args.choices).read_text(encoding="utf-8").splitlines():
            line = raw.strip()
            if line and not line.startswith("#"):
                tokens.append(line)

    session = start_conversation(
        project, args.start, policy, state_overrides=overrides or None, max_steps=args.max_steps
    )
    for step, token in enumerate(tokens):
        if session.phase.kind is not PhaseKind.AWAITING_CHOICE:
            raise DialogError(f"step {step}: session is {session.phase.kind.value}, cannot choose")
        session.choose(_resolve_choice(session, token, step))

    for entry in session.transcript:
        print(format_entry(entry))
    for line in format_phase(session):
        print(line)
    return EXIT_OK


def _play_interactive(
    project: Project,
    start_name: str,
    policy: SelectionPolicy,
    overrides: dict,
    max_steps: int,
) -> int:
    session = start_conversation(
        project, start_name, policy, state_overrides=overrides or None, max_steps=max_steps
    )
    printed = 0

    def show_progress() -> None:
        nonlocal printed
        for entry in session.transcript[printed:]:
            print(format_entry(entry))
        printed = len(session.transcript)

    show_progress()
    while session.phase.kind is PhaseKind.AWAITING_CHOICE:
        for i, option in enumerate(session.menu_options(), start=1):
            print(f"  {i}. {option.label}")
        try:
            raw = input("> ").strip()
        except EOFError:
            print("phase interrupted")
            return EXIT_OK
        if not raw:
            continue
        if raw in ("quit", "exit"):
            print("phase interrupted")
            return EXIT_OK
        try:
            if raw.startswith("set "):
                # mirrors the simulator's manual state manipulation
                _, key, value = raw.split(None, 2)
                scope, state = key.split(".", 1)
                if scope == "npc" and len(project.npc_actors()) == 1:
                    scope = project.npc_actors()[0].id
                session.set_state(scope, state, float(value))
                print(format_states(session.states_snapshot()))
                continue
            session.choose(_resolve_choice(session, raw, printed))
            show_progress()
        except (DialogError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
    for line in format_phase(session):
        print(line)
    return EXIT_OK


def cmd_inventory(args: argparse.Namespace) -> int:
    project = load(args.project)
    report = inventory(project, asset_root=args.assets)
    if args.machine:
        for line in report.machine_lines():
            print(line)
    else:
        print(report.table(), end="")
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import create_app

    project = load(args.project)
    app = create_app(project, default_seed=args.seed, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parley", description="Branching game dialog toolchain."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a project file and print diagnostics")
    p.add_argument("project")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("import", help="import a linear screenplay-style script")
    p.add_argument("script")
    p.add_argument("project")
    p.add_argument("--page", help="page name for the imported graph (default: script stem)")
    p.add_argument("--start", help="start node name (default: page name)")
    p.add_argument("--player-name", help="script actor name to treat as the player")
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("play", help="play a conversation headless or interactively")
    p.add_argument("project")
    p.add_argument("--start", required=True, help="start node name")
    p.add_argument("--choices", help="file with one choice per line (menu index or node id)")
    p.add_argument("--interactive", action="store_true", help="prompt on the terminal")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--policy", choices=["argmax", "softmax"], default="argmax")
    p.add_argument("--temperature", type=float, default=1.0)
    p.add_argument("--max-steps", type=int, default=10_000)
    p.add_argument(
        "--set",
        action="append",
        metavar="scope.state=value",
        help="set a state before play starts (repeatable); scope is 'player', "
        "an NPC id, or 'npc' for the only NPC",
    )
    p.set_defaults(func=cmd_play)

    p = sub.add_parser("inventory", help="list every asset referenced by dialog items")
    p.add_argument("project")
    p.add_argument("--assets", help="directory to resolve and existence-check assets against")
    p.add_argument("--machine", action="store_true", help="tab-separated lines instead of a table")
    p.set_defaults(func=cmd_inventory)

    p = sub.add_parser("serve", help="run the local simulation server")
    p.add_argument("project")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8470)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ui", help="directory with the built web simulator to serve at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DialogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
