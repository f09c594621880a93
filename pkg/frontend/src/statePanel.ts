/** Live state panel: one slider per state for the player and every NPC.
 *
 * Sliders are bounded to [-1, 1] and send a single edit on release; their
 * positions always come from the latest server snapshot, so a value the
 * server clamped snaps back on the next render.
 */

import type { StateMap, UiSnapshot } from "./types.js";

export type StateEditHandler = (scope: string, name: string, value: number) => void;

function sliderRow(
  scope: string,
  name: string,
  value: number,
  onEdit: StateEditHandler,
): HTMLElement {
  const row = document.createElement("div");
  row.className = "state-row";

  const label = document.createElement("label");
  label.textContent = name;
  row.appendChild(label);

  const slider = document.createElement("input");
  slider.type = "range";
  slider.min = "-1";
  slider.max = "1";
  slider.step = "0.01";
  slider.value = String(value);
  slider.dataset.scope = scope;
  slider.dataset.state = name;

  const readout = document.createElement("span");
  readout.className = "state-value";
  readout.textContent = value.toFixed(2);

  slider.addEventListener("input", () => {
    readout.textContent = Number(slider.value).toFixed(2);
  });
  slider.addEventListener("change", () => {
    onEdit(scope, name, Number(slider.value));
  });

  row.appendChild(slider);
  row.appendChild(readout);
  return row;
}

function section(
  container: HTMLElement,
  title: string,
  scope: string,
  states: StateMap,
  onEdit: StateEditHandler,
): void {
  const names = Object.keys(states);
  if (names.length === 0) {
    return;
  }
  const heading = document.createElement("h3");
  heading.textContent = title;
  container.appendChild(heading);
  for (const name of names) {
    container.appendChild(sliderRow(scope, name, states[name], onEdit));
  }
}

export function renderStatePanel(
  container: HTMLElement,
  snapshot: UiSnapshot,
  onEdit: StateEditHandler,
): void {
  container.textContent = "";
  container.classList.add("state-panel");
  section(container, "player", "player", snapshot.playerStates, onEdit);
  for (const npcId of Object.keys(snapshot.npcStates).sort()) {
    section(container, npcId, npcId, snapshot.npcStates[npcId], onEdit);
  }
}
