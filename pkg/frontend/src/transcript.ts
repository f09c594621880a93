/** Conversation log: who said what, with directions in brackets. */

import type { ActorWire, UiSnapshot } from "./types.js";

export function renderTranscript(
  container: HTMLElement,
  snapshot: UiSnapshot,
  actors: readonly ActorWire[],
): void {
  container.textContent = "";
  container.classList.add("transcript");
  const names = new Map(actors.map((a) => [a.id, a.displayName]));

  for (const entry of snapshot.transcript) {
    if (entry.kind !== "item") {
      continue; // structural nodes stay visible in the graph view instead
    }
    const line = document.createElement("div");
    line.className = "transcript-line";
    const speaker = document.createElement("span");
    speaker.className = "transcript-speaker";
    speaker.textContent = entry.actorId ? names.get(entry.actorId) ?? entry.actorId : "";
    line.appendChild(speaker);
    const said = document.createElement("span");
    const direction = entry.direction ? `[${entry.direction}]` : "";
    said.textContent = [direction, entry.cue ?? ""].filter(Boolean).join(" ");
    line.appendChild(said);
    container.appendChild(line);
  }

  if (snapshot.phase.kind === "ended") {
    const line = document.createElement("div");
    line.className = "transcript-ended";
    line.textContent = `— ${snapshot.phase.direction ?? "ended"} —`;
    container.appendChild(line);
  }
}
