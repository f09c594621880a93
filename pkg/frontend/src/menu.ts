/** Player choice menu. One button per option; a finished conversation shows
 * the termination direction instead. */

import type { UiSnapshot } from "./types.js";

export function renderMenu(
  container: HTMLElement,
  snapshot: UiSnapshot,
  onChoose: (nodeId: string) => void,
): void {
  container.textContent = "";
  container.classList.add("menu");

  if (snapshot.phase.kind === "ended") {
    const ended = document.createElement("div");
    ended.className = "menu-ended";
    const direction = snapshot.phase.direction ?? "";
    const value = snapshot.phase.terminationValue;
    ended.textContent = value
      ? `Conversation ended: ${direction} (${value})`
      : `Conversation ended: ${direction}`;
    container.appendChild(ended);
    return;
  }

  // guards double clicks: at most one choose request per rendered menu
  let sent = false;
  for (const option of snapshot.menu) {
    const button = document.createElement("button");
    button.type = "button";
    button.className = "menu-option";
    button.dataset.nodeId = option.nodeId;
    button.textContent = option.label;
    button.addEventListener("click", () => {
      if (sent) {
        return;
      }
      sent = true;
      onChoose(option.nodeId);
    });
    container.appendChild(button);
  }
}
