"""Local HTTP + server-sent-events API for the web simulator.

The server is a thin façade over the runtime: every endpoint maps onto one
session operation, so a scripted HTTP exchange produces exactly the
transcript a headless replay with the same inputs would. Sessions live in
memory, isolated from each other; requests against one session are
serialized by a per-session lock. Binds localhost by default; this is a
local authoring tool, not a deployment target.
"""

from __future__ import annotations

import asyncio
import itertools
import json
from dataclasses import dataclass, field

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, StreamingResponse
from pydantic import BaseModel

from .errors import DialogError, NotFoundError
from .model import (
    DialogItem,
    Project,
    ReferenceNode,
    StartNode,
    SubdialogNode,
    TerminationNode,
    node_kind,
)
from .runtime import PhaseKind, SimulationSession, start_conversation
from .scoring import SelectionMode, SelectionPolicy, color_class

WIRE_VERSION = 1


class CreateSessionRequest(BaseModel):
    startName: str
    policy: str = "argmax"
    seed: int | None = None
    temperature: float = 1.0


class ChooseRequest(BaseModel):
    nodeId: str


class StateEditRequest(BaseModel):
    scope: str
    name: str
    value: float


@dataclass
class SessionHandle:
    session_id: str
    session: SimulationSession
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    subscribers: list[asyncio.Queue] = field(default_factory=list)


def graph_view(project: Project) -> dict:
    """Wire shape of the whole graph; node colors come from their cause."""
    positions: dict[str, tuple[float, float]] = {}
    for page in project.pages:
        positions.update(page.layout)

    nodes = []
    for node in project.nodes:
        payload: dict = {
            "id": node.id,
            "kind": node_kind(node),
            "page": project.page_of.get(node.id),
            "colorClass": None,
            "position": None,
        }
        if node.id in positions:
            x, y = positions[node.id]
            payload["position"] = {"x": x, "y": y}
        if isinstance(node, StartNode):
            payload["startName"] = node.name
        elif isinstance(node, DialogItem):
            payload["actor"] = node.actor_id
            payload["conversant"] = node.conversant_id
            payload["cue"] = node.cue
            payload["direction"] = node.direction
            payload["menuLabel"] = node.menu_label
            if node.cause is not None:
                color = color_class(node.cause)
                payload["colorClass"] = {"kind": color.kind.value, "intensity": color.intensity}
        elif isinstance(node, TerminationNode):
            payload["direction"] = node.direction
            payload["terminationValue"] = node.termination_value
        elif isinstance(node, (ReferenceNode, SubdialogNode)):
            payload["target"] = node.target_start_name
        nodes.append(payload)

    edges = [
        {"from": e.from_id, "to": e.to_id, "order": e.order, "branchLabel": e.branch_label}
        for e in project.edges
    ]
    return {"nodes": nodes, "edges": edges}


def project_payload(project: Project) -> dict:
    return {
        "wireVersion": WIRE_VERSION,
        "title": project.title,
        "version": project.version,
        "actors": [
            {
                "id": a.id,
                "displayName": a.display_name,
                "kind": a.kind.value,
                "color": a.color,
                "attributes": dict(a.attributes),
            }
            for a in project.actors
        ],
        "playerStateDecls": [
            {"name": d.name, "default": d.default} for d in project.player_state_decls
        ],
        "npcStateDecls": [
            {"name": d.name, "default": d.default} for d in project.npc_state_decls
        ],
        "graph": graph_view(project),
    }


def snapshot_payload(session: SimulationSession) -> dict:
    phase = session.phase
    menu = []
    if phase.kind is PhaseKind.AWAITING_CHOICE:
        menu = [
            {"nodeId": o.node_id, "label": o.label, "order": o.order}
            for o in session.menu_options()
        ]
    states = session.states_snapshot()
    return {
        "phase": {
            "kind": phase.kind.value,
            "direction": phase.direction,
            "terminationValue": phase.termination_value,
        },
        "currentNodeId": session.current_node_id,
        "menu": menu,
        "playerStates": states["player"],
        "npcStates": states["npcs"],
        "subdialogDepth": len(session.subdialog_stack),
        "transcript": [entry.as_payload() for entry in session.transcript],
    }


def create_app(project: Project, default_seed: int = 0, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="parley simulation server")
    handles: dict[str, SessionHandle] = {}
    ids = itertools.count(1)

    @app.exception_handler(DialogError)
    async def dialog_error_handler(request: Request, exc: DialogError):
        status = 404 if isinstance(exc, NotFoundError) else 400
        return JSONResponse(status_code=status, content={"error": str(exc)})

    def handle_of(session_id: str) -> SessionHandle:
        handle = handles.get(session_id)
        if handle is None:
            raise NotFoundError(f"unknown session {session_id!r}")
        return handle

    def broadcast(handle: SessionHandle) -> None:
        payload = snapshot_payload(handle.session)
        for queue in list(handle.subscribers):
            queue.put_nowait(payload)

    @app.get("/health")
    async def health():
        return {"status": "ok", "title": project.title}

    @app.get("/project")
    async def get_project():
        return project_payload(project)

    @app.post("/sessions")
    async def create_session(request: CreateSessionRequest):
        mode = (
            SelectionMode.SOFTMAX_SAMPLE
            if request.policy == "softmax"
            else SelectionMode.ARGMAX
        )
        seed = request.seed if request.seed is not None else default_seed
        try:
            policy = SelectionPolicy(mode=mode, temperature=request.temperature, seed=seed)
        except ValueError as exc:
            return JSONResponse(status_code=400, content={"error": str(exc)})
        session = start_conversation(project, request.startName, policy)
        handle = SessionHandle(f"s-{next(ids)}", session)
        handles[handle.session_id] = handle
        return {"sessionId": handle.session_id, "snapshot": snapshot_payload(session)}

    @app.get("/sessions/{session_id}")
    async def get_snapshot(session_id: str):
        handle = handle_of(session_id)
        async with handle.lock:
            return snapshot_payload(handle.session)

    @app.post("/sessions/{session_id}/choose")
    async def choose(session_id: str, request: ChooseRequest):
        handle = handle_of(session_id)
        async with handle.lock:
            handle.session.choose(request.nodeId)
            broadcast(handle)
            return snapshot_payload(handle.session)

    @app.post("/sessions/{session_id}/state")
    async def edit_state(session_id: str, request: StateEditRequest):
        handle = handle_of(session_id)
        async with handle.lock:
            handle.session.set_state(request.scope, request.name, request.value)
            broadcast(handle)
            return snapshot_payload(handle.session)

    @app.get("/sessions/{session_id}/events")
    async def events(session_id: str, request: Request):
        handle = handle_of(session_id)
        queue: asyncio.Queue = asyncio.Queue()
        handle.subscribers.append(queue)

        async def stream():
            # Stateless stream: nothing is replayed on (re)connect; the
            # snapshot endpoint is the source of truth.
            try:
                while True:
                    if await request.is_disconnected():
                        return
                    try:
                        payload = await asyncio.wait_for(queue.get(), timeout=0.25)
                    except asyncio.TimeoutError:
                        yield ": keepalive\n\n"
                        continue
                    data = json.dumps(payload, ensure_ascii=False)
                    yield f"event: snapshot\ndata: {data}\n\n"
            finally:
                if queue in handle.subscribers:
                    handle.subscribers.remove(queue)

        return StreamingResponse(stream(), media_type="text/event-stream")

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
