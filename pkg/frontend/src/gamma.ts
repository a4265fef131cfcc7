import type { QueueItem } from "./types";

/** Threshold rule shared with the server: true positive iff prob >= gamma. */
export function decideAt(probTrue: number, gamma: number): "TP" | "FP" {
  return probTrue >= gamma ? "TP" : "FP";
}

export function clampGamma(value: number): number {
  if (Number.isNaN(value)) return 0.5;
  return Math.min(1, Math.max(0, value));
}

/** How many listed items the current gamma marks true positive. */
export function positiveCount(items: QueueItem[], gamma: number): number {
  let count = 0;
  for (const item of items) {
    if (item.prediction && decideAt(item.prediction.prob_true, gamma) === "TP") {
      count += 1;
    }
  }
  return count;
}
