/** Thin client for the simulation server. fetch and the event-stream
 * factory are injectable so tests can run against an in-memory server. */

import type { CreateSessionResponse, ProjectPayload, UiSnapshot } from "./types.js";

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export interface EventStreamHandle {
  close(): void;
}

export type EventStreamFactory = (
  url: string,
  onSnapshot: (snapshot: UiSnapshot) => void,
) => EventStreamHandle;

/** Default factory wraps the browser's EventSource (absent under jsdom). */
export function browserEventStreamFactory(
  url: string,
  onSnapshot: (snapshot: UiSnapshot) => void,
): EventStreamHandle {
  const source = new EventSource(url);
  source.addEventListener("snapshot", (event) => {
    onSnapshot(JSON.parse((event as MessageEvent).data) as UiSnapshot);
  });
  return { close: () => source.close() };
}

async function parseOrThrow<T>(response: Response): Promise<T> {
  const body = await response.json().catch(() => null);
  if (!response.ok) {
    const message =
      body && typeof body === "object" && "error" in body
        ? String((body as { error: unknown }).error)
        : `request failed with status ${response.status}`;
    throw new Error(message);
  }
  return body as T;
}

export class ApiClient {
  private readonly fetchImpl: FetchLike;
  private readonly streamFactory: EventStreamFactory | null;

  constructor(
    private readonly baseUrl: string = "",
    fetchImpl?: FetchLike,
    streamFactory?: EventStreamFactory,
  ) {
    this.fetchImpl = fetchImpl ?? ((url, init) => fetch(url, init));
    this.streamFactory =
      streamFactory ??
      (typeof EventSource === "undefined" ? null : browserEventStreamFactory);
  }

  private post(path: string, payload: unknown): Promise<Response> {
    return this.fetchImpl(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  async project(): Promise<ProjectPayload> {
    return parseOrThrow(await this.fetchImpl(`${this.baseUrl}/project`));
  }

  async createSession(
    startName: string,
    policy = "argmax",
    seed = 0,
  ): Promise<CreateSessionResponse> {
    return parseOrThrow(await this.post("/sessions", { startName, policy, seed }));
  }

  async snapshot(sessionId: string): Promise<UiSnapshot> {
    return parseOrThrow(await this.fetchImpl(`${this.baseUrl}/sessions/${sessionId}`));
  }

  async choose(sessionId: string, nodeId: string): Promise<UiSnapshot> {
    return parseOrThrow(await this.post(`/sessions/${sessionId}/choose`, { nodeId }));
  }

  async setState(
    sessionId: string,
    scope: string,
    name: string,
    value: number,
  ): Promise<UiSnapshot> {
    return parseOrThrow(
      await this.post(`/sessions/${sessionId}/state`, { scope, name, value }),
    );
  }

  /** Subscribe to snapshot pushes; returns null when the platform has no
   * EventSource (the POST responses already carry fresh snapshots). */
  subscribe(
    sessionId: string,
    onSnapshot: (snapshot: UiSnapshot) => void,
  ): EventStreamHandle | null {
    if (!this.streamFactory) {
      return null;
    }
    return this.streamFactory(`${this.baseUrl}/sessions/${sessionId}/events`, onSnapshot);
  }
}
