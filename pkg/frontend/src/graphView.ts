/** Read-only node-link view of the dialog graph (SVG).
 *
 * Node backgrounds follow the server-computed cause color (white neutral,
 * green shades positive, red shades negative); the bar on top of an item is
 * the speaking actor's color. Stored editor positions win over the built-in
 * layered layout. The view pans by dragging and zooms on the wheel.
 */

import type {
  ActorWire,
  ColorClassWire,
  GraphEdgeWire,
  GraphNodeWire,
  ProjectPayload,
} from "./types.js";

export const NODE_WIDTH = 150;
export const NODE_HEIGHT = 54;

const SVG_NS = "http://www.w3.org/2000/svg";

export function fillForColor(color: ColorClassWire | null): string {
  if (!color || color.kind === "neutral" || color.intensity <= 0) {
    return "rgb(255,255,255)";
  }
  const shade = Math.round(160 * Math.min(1, color.intensity));
  if (color.kind === "positive") {
    return `rgb(${255 - shade},255,${255 - shade})`;
  }
  return `rgb(255,${255 - shade},${255 - shade})`;
}

export interface Point {
  x: number;
  y: number;
}

/** Stored positions when present, else a layered left-to-right layout per
 * page: breadth-first layers from the page's start nodes. */
export function layoutNodes(
  nodes: GraphNodeWire[],
  edges: GraphEdgeWire[],
): Map<string, Point> {
  const positions = new Map<string, Point>();
  const outgoing = new Map<string, string[]>();
  for (const edge of [...edges].sort((a, b) => a.order - b.order)) {
    const list = outgoing.get(edge.from) ?? [];
    list.push(edge.to);
    outgoing.set(edge.from, list);
  }

  const pages = new Map<string, GraphNodeWire[]>();
  for (const node of nodes) {
    const page = node.page ?? "";
    const list = pages.get(page) ?? [];
    list.push(node);
    pages.set(page, list);
  }

  let pageTop = 30;
  for (const pageName of [...pages.keys()].sort()) {
    const pageNodes = pages.get(pageName)!;
    const pageIds = new Set(pageNodes.map((n) => n.id));
    const layer = new Map<string, number>();
    const queue: string[] = [];
    for (const node of pageNodes) {
      if (node.kind === "start") {
        layer.set(node.id, 0);
        queue.push(node.id);
      }
    }
    while (queue.length > 0) {
      const id = queue.shift()!;
      for (const next of outgoing.get(id) ?? []) {
        if (pageIds.has(next) && !layer.has(next)) {
          layer.set(next, (layer.get(id) ?? 0) + 1);
          queue.push(next);
        }
      }
    }
    for (const node of pageNodes) {
      if (!layer.has(node.id)) {
        layer.set(node.id, 0); // unreachable nodes pile into the first column
      }
    }

    const rowsUsed = new Map<number, number>();
    let deepest = 0;
    for (const node of pageNodes) {
      const depth = layer.get(node.id)!;
      const row = rowsUsed.get(depth) ?? 0;
      rowsUsed.set(depth, row + 1);
      deepest = Math.max(deepest, row);
      positions.set(
        node.id,
        node.position ?? {
          x: 40 + depth * (NODE_WIDTH + 50),
          y: pageTop + row * (NODE_HEIGHT + 26),
        },
      );
    }
    pageTop += (deepest + 1) * (NODE_HEIGHT + 26) + 50;
  }
  return positions;
}

function truncate(text: string, limit = 24): string {
  return text.length > limit ? `${text.slice(0, limit - 1)}…` : text;
}

function nodeLabel(node: GraphNodeWire): string {
  switch (node.kind) {
    case "start":
      return `▶ ${node.startName ?? node.id}`;
    case "termination":
      return `■ ${node.direction || "end"}`;
    case "reference":
      return `→ ${node.target ?? ""}`;
    case "subdialog":
      return `⊕ ${node.target ?? ""}`;
    default:
      return truncate(node.cue ?? (node.direction ? `[${node.direction}]` : ""));
  }
}

function svgElement<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string>,
): SVGElementTagNameMap[K] {
  const element = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) {
    element.setAttribute(key, value);
  }
  return element;
}

export function renderGraph(
  container: HTMLElement,
  project: ProjectPayload,
  currentNodeId: string | null,
  visitedNodeIds: readonly string[],
): void {
  container.textContent = "";
  container.classList.add("graph-view");

  const { nodes, edges } = project.graph;
  const positions = layoutNodes(nodes, edges);
  const actorsById = new Map<string, ActorWire>(project.actors.map((a) => [a.id, a]));
  const visited = new Set(visitedNodeIds);
  const pathEdges = new Set<string>();
  for (let i = 1; i < visitedNodeIds.length; i++) {
    pathEdges.add(`${visitedNodeIds[i - 1]}->${visitedNodeIds[i]}`);
  }

  let maxX = 0;
  let maxY = 0;
  for (const point of positions.values()) {
    maxX = Math.max(maxX, point.x + NODE_WIDTH + 40);
    maxY = Math.max(maxY, point.y + NODE_HEIGHT + 40);
  }

  const svg = svgElement("svg", {
    class: "graph-svg",
    viewBox: `0 0 ${Math.max(maxX, 300)} ${Math.max(maxY, 200)}`,
    preserveAspectRatio: "xMidYMid meet",
  });

  for (const edge of edges) {
    const from = positions.get(edge.from);
    const to = positions.get(edge.to);
    if (!from || !to) {
      continue;
    }
    const onPath = pathEdges.has(`${edge.from}->${edge.to}`);
    const group = svgElement("g", { class: onPath ? "edge edge-visited" : "edge" });
    group.appendChild(
      svgElement("line", {
        x1: String(from.x + NODE_WIDTH),
        y1: String(from.y + NODE_HEIGHT / 2),
        x2: String(to.x),
        y2: String(to.y + NODE_HEIGHT / 2),
        stroke: onPath ? "#1f6feb" : "#9a9a9a",
        "stroke-width": onPath ? "3" : "1.5",
      }),
    );
    if (edge.branchLabel) {
      const label = svgElement("text", {
        x: String((from.x + NODE_WIDTH + to.x) / 2),
        y: String((from.y + to.y + NODE_HEIGHT) / 2 - 6),
        class: "edge-label",
        "font-size": "11",
        "text-anchor": "middle",
      });
      label.textContent = edge.branchLabel;
      group.appendChild(label);
    }
    svg.appendChild(group);
  }

  for (const node of nodes) {
    const point = positions.get(node.id)!;
    const isCurrent = node.id === currentNodeId;
    const classes = ["node", `node-${node.kind}`];
    if (visited.has(node.id)) {
      classes.push("node-visited");
    }
    if (isCurrent) {
      classes.push("node-current");
    }
    const group = svgElement("g", {
      class: classes.join(" "),
      "data-node-id": node.id,
      transform: `translate(${point.x},${point.y})`,
    });
    group.appendChild(
      svgElement("rect", {
        class: "node-box",
        width: String(NODE_WIDTH),
        height: String(NODE_HEIGHT),
        rx: "6",
        fill: fillForColor(node.colorClass),
        stroke: isCurrent ? "#1f6feb" : visited.has(node.id) ? "#444444" : "#b5b5b5",
        "stroke-width": isCurrent ? "3" : visited.has(node.id) ? "2" : "1",
      }),
    );
    if (node.kind === "item" && node.actor) {
      const actor = actorsById.get(node.actor);
      group.appendChild(
        svgElement("rect", {
          class: "actor-bar",
          width: String(NODE_WIDTH),
          height: "7",
          rx: "3",
          fill: actor?.color ?? "#888888",
        }),
      );
    }
    const text = svgElement("text", {
      x: "8",
      y: "32",
      class: "node-label",
      "font-size": "12",
    });
    text.textContent = nodeLabel(node);
    group.appendChild(text);
    svg.appendChild(group);
  }

  container.appendChild(svg);
  attachPanZoom(svg);
}

function attachPanZoom(svg: SVGSVGElement): void {
  const read = () => (svg.getAttribute("viewBox") ?? "0 0 300 200").split(" ").map(Number);
  let dragging = false;
  let last: Point = { x: 0, y: 0 };

  svg.addEventListener("wheel", (event) => {
    event.preventDefault();
    const [x, y, w, h] = read();
    const factor = event.deltaY > 0 ? 1.12 : 1 / 1.12;
    const nw = w * factor;
    const nh = h * factor;
    svg.setAttribute(
      "viewBox",
      `${x + (w - nw) / 2} ${y + (h - nh) / 2} ${nw} ${nh}`,
    );
  });
  svg.addEventListener("mousedown", (event) => {
    dragging = true;
    last = { x: event.clientX, y: event.clientY };
  });
  svg.addEventListener("mousemove", (event) => {
    if (!dragging) {
      return;
    }
    const [x, y, w, h] = read();
    const scale = w / (svg.clientWidth || w);
    svg.setAttribute(
      "viewBox",
      `${x - (event.clientX - last.x) * scale} ${y - (event.clientY - last.y) * scale} ${w} ${h}`,
    );
    last = { x: event.clientX, y: event.clientY };
  });
  svg.addEventListener("mouseup", () => {
    dragging = false;
  });
  svg.addEventListener("mouseleave", () => {
    dragging = false;
  });
}
