/** Wire types mirroring the simulation server's JSON payloads (version 1).
 *
 * The UI is a pure projection of these shapes: every number shown on screen
 * originates in a server payload, never in client-side computation.
 */

export type PhaseKind = "awaiting-choice" | "npc-turn" | "ended";

export interface PhaseInfo {
  kind: PhaseKind;
  direction: string | null;
  terminationValue: string | null;
}

export interface MenuOptionWire {
  nodeId: string;
  label: string;
  order: number;
}

export type StateMap = Record<string, number>;

export interface StatesAfter {
  player: StateMap;
  npcs: Record<string, StateMap>;
}

export interface TranscriptEntryWire {
  nodeId: string;
  kind: string;
  actorId: string | null;
  cue: string | null;
  direction: string | null;
  score: number | null;
  statesAfter: StatesAfter;
}

export interface UiSnapshot {
  phase: PhaseInfo;
  currentNodeId: string | null;
  menu: MenuOptionWire[];
  playerStates: StateMap;
  npcStates: Record<string, StateMap>;
  subdialogDepth: number;
  transcript: TranscriptEntryWire[];
}

export interface ColorClassWire {
  kind: "neutral" | "positive" | "negative";
  intensity: number;
}

export interface GraphNodeWire {
  id: string;
  kind: "start" | "item" | "termination" | "reference" | "subdialog";
  page: string | null;
  colorClass: ColorClassWire | null;
  position: { x: number; y: number } | null;
  startName?: string;
  actor?: string;
  conversant?: string;
  cue?: string | null;
  direction?: string | null;
  menuLabel?: string | null;
  terminationValue?: string | null;
  target?: string;
}

export interface GraphEdgeWire {
  from: string;
  to: string;
  order: number;
  branchLabel: string | null;
}

export interface GraphViewWire {
  nodes: GraphNodeWire[];
  edges: GraphEdgeWire[];
}

export interface ActorWire {
  id: string;
  displayName: string;
  kind: "player" | "npc";
  color: string | null;
  attributes: Record<string, string>;
}

export interface StateDeclWire {
  name: string;
  default: number;
}

export interface ProjectPayload {
  wireVersion: number;
  title: string;
  version: string;
  actors: ActorWire[];
  playerStateDecls: StateDeclWire[];
  npcStateDecls: StateDeclWire[];
  graph: GraphViewWire;
}

export interface CreateSessionResponse {
  sessionId: string;
  snapshot: UiSnapshot;
}
