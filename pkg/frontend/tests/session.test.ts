import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api";
import { LabelingSession } from "../src/session";
import type { QueueItem } from "../src/types";

function item(id: string): QueueItem {
  return {
    pair_id: id,
    detector: "tool",
    fragment1: { text: "int a;", path: null, start_line: 1 },
    fragment2: { text: "int b;", path: null, start_line: 1 },
    features: null,
    prediction: null,
  };
}

interface StubBehavior {
  failFeedbackWith?: number;
  delayFeedback?: boolean;
}

function makeSession(behavior: StubBehavior = {}) {
  const submissions: Array<{ pairId: string; label: string; labeler: string }> = [];
  let release: (() => void) | null = null;
  const api = {
    async fetchQueue() {
      throw new Error("not used");
    },
    async submitLabel(pairId: string, label: string, labeler: string) {
      if (behavior.delayFeedback) {
        await new Promise<void>((resolve) => {
          release = resolve;
        });
      }
      if (behavior.failFeedbackWith) {
        throw new ApiError(behavior.failFeedbackWith, "rejected");
      }
      submissions.push({ pairId, label, labeler });
    },
  } as unknown as ApiClient;
  const session = new LabelingSession(api, {
    labeler: "alice",
    gamma: 0.5,
    page: 1,
    pageSize: 20,
    labeledCount: 0,
  });
  session.items = [item("p1"), item("p2"), item("p3")];
  session.total = 3;
  return { session, submissions, releaseDelayed: () => release?.() };
}

describe("LabelingSession.submit", () => {
  it("removes the item optimistically and counts the label", async () => {
    const { session, submissions } = makeSession();
    const outcome = await session.submit("p2", "TP");
    expect(outcome).toBe("ok");
    expect(session.items.map((i) => i.pair_id)).toEqual(["p1", "p3"]);
    expect(session.state.labeledCount).toBe(1);
    expect(submissions).toEqual([{ pairId: "p2", label: "TP", labeler: "alice" }]);
  });

  it("restores the item at its position when the server rejects", async () => {
    const { session } = makeSession({ failFeedbackWith: 400 });
    const outcome = await session.submit("p2", "FP");
    expect(outcome).toBe("rolled-back");
    expect(session.items.map((i) => i.pair_id)).toEqual(["p1", "p2", "p3"]);
    expect(session.state.labeledCount).toBe(0);
  });

  it("suppresses a second submit while the first is in flight", async () => {
    const { session, submissions, releaseDelayed } = makeSession({ delayFeedback: true });
    const first = session.submit("p1", "TP");
    const second = await session.submit("p1", "TP");
    expect(second).toBe("suppressed");
    releaseDelayed();
    expect(await first).toBe("ok");
    expect(submissions).toHaveLength(1);
  });

  it("suppresses a submit for an already-labeled pair", async () => {
    const { session } = makeSession();
    await session.submit("p1", "TP");
    expect(await session.submit("p1", "TP")).toBe("suppressed");
  });

  it("requires a labeler id", async () => {
    const { session } = makeSession();
    session.state.labeler = "";
    await expect(session.submit("p1", "TP")).rejects.toThrow(/labeler/);
  });
});
