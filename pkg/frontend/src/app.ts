/** Simulator shell: wires the server snapshots to the menu, state sliders,
 * transcript, and graph view. All rendering is a function of the latest
 * snapshot; user actions only ever issue server requests. */

import { ApiClient } from "./api.js";
import { renderGraph } from "./graphView.js";
import { renderMenu } from "./menu.js";
import { renderStatePanel } from "./statePanel.js";
import { renderTranscript } from "./transcript.js";
import type { ProjectPayload, UiSnapshot } from "./types.js";

export interface SimulatorElements {
  title: HTMLElement;
  starts: HTMLSelectElement;
  restart: HTMLButtonElement;
  graph: HTMLElement;
  menu: HTMLElement;
  states: HTMLElement;
  transcript: HTMLElement;
  status: HTMLElement;
}

export function buildShell(root: HTMLElement): SimulatorElements {
  root.textContent = "";
  root.className = "simulator";
  const make = <K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className: string,
    parent: HTMLElement,
  ): HTMLElementTagNameMap[K] => {
    const element = document.createElement(tag);
    element.className = className;
    parent.appendChild(element);
    return element;
  };

  const header = make("header", "header", root);
  const title = make("h1", "title", header);
  const starts = make("select", "start-select", header);
  const restart = make("button", "restart", header);
  restart.textContent = "restart";
  const status = make("span", "status", header);

  const main = make("main", "main", root);
  const graph = make("section", "graph-pane", main);
  const side = make("aside", "side-pane", main);
  const menu = make("section", "menu-pane", side);
  const states = make("section", "state-pane", side);
  const transcript = make("section", "transcript-pane", side);
  return { title, starts, restart, graph, menu, states, transcript, status };
}

export class Simulator {
  private sessionId: string | null = null;
  private latest: UiSnapshot | null = null;
  private project: ProjectPayload | null = null;
  private stream: { close(): void } | null = null;
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private readonly elements: SimulatorElements,
    private readonly api: ApiClient,
  ) {}

  /** Serialize user actions so requests reach the server one at a time. */
  private enqueue(action: () => Promise<void>): Promise<void> {
    this.pending = this.pending.then(action).catch((error) => {
      this.elements.status.textContent = String(error);
    });
    return this.pending;
  }

  async boot(): Promise<void> {
    const project = await this.api.project();
    this.project = project;
    this.elements.title.textContent = project.title;

    const startNames = project.graph.nodes
      .filter((n) => n.kind === "start" && n.startName)
      .map((n) => n.startName as string)
      .sort();
    this.elements.starts.textContent = "";
    for (const name of startNames) {
      const option = document.createElement("option");
      option.value = name;
      option.textContent = name;
      this.elements.starts.appendChild(option);
    }
    this.elements.restart.addEventListener("click", () => {
      void this.enqueue(() => this.startSession(this.elements.starts.value));
    });
    if (startNames.length > 0) {
      await this.startSession(startNames[0]);
    }
  }

  async startSession(startName: string): Promise<void> {
    this.stream?.close();
    const created = await this.api.createSession(startName);
    this.sessionId = created.sessionId;
    this.applySnapshot(created.snapshot);
    this.stream = this.api.subscribe(created.sessionId, (snapshot) =>
      this.applySnapshot(snapshot),
    );
    this.elements.status.textContent = "";
  }

  applySnapshot(snapshot: UiSnapshot): void {
    this.latest = snapshot;
    this.render();
  }

  get snapshot(): UiSnapshot | null {
    return this.latest;
  }

  private render(): void {
    const snapshot = this.latest;
    const project = this.project;
    if (!snapshot || !project) {
      return;
    }
    renderMenu(this.elements.menu, snapshot, (nodeId) => {
      void this.enqueue(async () => {
        if (this.sessionId) {
          this.applySnapshot(await this.api.choose(this.sessionId, nodeId));
        }
      });
    });
    renderStatePanel(this.elements.states, snapshot, (scope, name, value) => {
      void this.enqueue(async () => {
        if (this.sessionId) {
          this.applySnapshot(await this.api.setState(this.sessionId, scope, name, value));
        }
      });
    });
    renderTranscript(this.elements.transcript, snapshot, project.actors);
    renderGraph(
      this.elements.graph,
      project,
      snapshot.currentNodeId,
      snapshot.transcript.map((entry) => entry.nodeId),
    );
  }
}

export async function boot(root: HTMLElement, api = new ApiClient("")): Promise<Simulator> {
  const simulator = new Simulator(buildShell(root), api);
  await simulator.boot();
  return simulator;
}
