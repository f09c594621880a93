"""Branching game dialog engine and toolchain.

Conversations are directed graphs walked by a two-phase runtime (player
menus, automatic NPC turns). NPC lines are picked by state-weighted cause
scores; speaking any line applies bounded effects to the player's and the
conversant's state vectors.
"""

from .errors import (
    CycleOverflowError,
    DialogError,
    DimensionMismatchError,
    InvalidChoiceError,
    InvalidPhaseError,
    InvalidProjectError,
    NoCandidatesError,
    NotFoundError,
    ProjectParseError,
    ReplayError,
    SchemaError,
    ScriptImportError,
    ScriptParseError,
    UnmatchedBranchError,
    UnsupportedVersionError,
)
from .model import (
    Actor,
    ActorKind,
    AssetRef,
    AssetRole,
    CauseWeights,
    Diagnostic,
    DialogItem,
    DialogNode,
    Edge,
    EffectWeights,
    Page,
    Project,
    ProjectBuilder,
    ReferenceNode,
    Severity,
    StartNode,
    StateDeclaration,
    StateScope,
    StateVector,
    SubdialogNode,
    TerminationNode,
    projects_equivalent,
    successors,
    validate,
)
from .persistence import InventoryReport, inventory, load, loads, save, dumps
from .runtime import (
    MenuOption,
    Phase,
    PhaseKind,
    SimulationSession,
    StateEdit,
    TranscriptEntry,
    replay,
    start_conversation,
)
from .scoring import (
    Candidate,
    ColorClass,
    ColorKind,
    SelectionPolicy,
    SelectionMode,
    apply_effect,
    cause_score,
    color_class,
    select_npc_response,
)
from .script_import import ScriptLine, ScriptLineKind, build_graph, parse_script, render_script

__version__ = "0.1.0"
