import { diffLines } from "./diff";
import { decideAt, positiveCount } from "./gamma";
import type { QueueItem } from "./types";

/** Code pane: one li per line, textContent only (never reformats the code). */
function renderPane(
  doc: Document,
  text: string,
  startLine: number,
  marks: ("same" | "changed")[],
): HTMLElement {
  const pane = doc.createElement("ol");
  pane.className = "code-pane";
  pane.start = startLine;
  text.split("\n").forEach((line, index) => {
    const li = doc.createElement("li");
    li.textContent = line;
    if (marks[index] === "changed") {
      li.classList.add("line-changed");
    }
    pane.appendChild(li);
  });
  return pane;
}

export function renderItem(doc: Document, item: QueueItem, gamma: number): HTMLElement {
  const card = doc.createElement("article");
  card.className = "pair-card";
  card.dataset.pairId = item.pair_id;

  const header = doc.createElement("header");
  const title = doc.createElement("span");
  title.className = "pair-id";
  title.textContent = item.pair_id;
  header.appendChild(title);
  if (item.detector) {
    const detector = doc.createElement("span");
    detector.className = "detector-tag";
    detector.textContent = item.detector;
    header.appendChild(detector);
  }
  if (item.prediction) {
    const badge = doc.createElement("span");
    const decision = decideAt(item.prediction.prob_true, gamma);
    badge.className = `prediction-badge decision-${decision.toLowerCase()}`;
    badge.dataset.decision = decision;
    badge.textContent = `λ=${item.prediction.prob_true.toFixed(3)} → ${decision}`;
    header.appendChild(badge);
  }
  card.appendChild(header);

  const panes = doc.createElement("div");
  panes.className = "panes";
  const marks = diffLines(item.fragment1.text, item.fragment2.text);
  panes.appendChild(renderPane(doc, item.fragment1.text, item.fragment1.start_line, marks.left));
  panes.appendChild(renderPane(doc, item.fragment2.text, item.fragment2.start_line, marks.right));
  card.appendChild(panes);

  const actions = doc.createElement("div");
  actions.className = "actions";
  for (const [label, text] of [
    ["TP", "true positive (t)"],
    ["FP", "false positive (f)"],
  ] as const) {
    const button = doc.createElement("button");
    button.dataset.action = "label";
    button.dataset.label = label;
    button.dataset.pairId = item.pair_id;
    button.textContent = text;
    actions.appendChild(button);
  }
  card.appendChild(actions);
  return card;
}

export interface QueueViewModel {
  items: QueueItem[];
  gamma: number;
  page: number;
  totalPages: number;
  total: number;
  labeledCount: number;
  modelLoaded: boolean;
}

export function renderQueue(doc: Document, root: HTMLElement, view: QueueViewModel): void {
  root.textContent = "";
  if (view.items.length === 0) {
    const empty = doc.createElement("p");
    empty.className = "empty-state";
    empty.textContent = view.total === 0 ? "All pairs labeled." : "Nothing on this page.";
    root.appendChild(empty);
    return;
  }
  for (const item of view.items) {
    root.appendChild(renderItem(doc, item, view.gamma));
  }
}

/** Re-threshold the visible decision badges in place; pure in (items, gamma). */
export function refreshDecisions(root: HTMLElement, items: QueueItem[], gamma: number): void {
  for (const item of items) {
    if (!item.prediction) continue;
    const badge = root.querySelector<HTMLElement>(
      `[data-pair-id="${item.pair_id}"] .prediction-badge`,
    );
    if (!badge) continue;
    const decision = decideAt(item.prediction.prob_true, gamma);
    badge.dataset.decision = decision;
    badge.className = `prediction-badge decision-${decision.toLowerCase()}`;
    badge.textContent = `λ=${item.prediction.prob_true.toFixed(3)} → ${decision}`;
  }
}

export function renderFooterStats(
  doc: Document,
  footer: HTMLElement,
  view: QueueViewModel,
): void {
  footer.textContent = "";
  const stats = doc.createElement("span");
  stats.className = "stats";
  const positives = positiveCount(view.items, view.gamma);
  stats.textContent =
    `page ${view.page}/${Math.max(view.totalPages, 1)} · ${view.total} queued · ` +
    `${view.labeledCount} labeled this session · ${positives} shown TP at γ=${view.gamma.toFixed(2)}`;
  footer.appendChild(stats);
}
