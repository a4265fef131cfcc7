import { ApiClient, ApiError } from "./api";
import type { CloneLabel, QueueItem, QueuePage } from "./types";

export interface SessionState {
  labeler: string;
  gamma: number;
  page: number;
  pageSize: number;
  labeledCount: number;
}

export type SubmitOutcome = "ok" | "suppressed" | "rolled-back";

/** Queue bookkeeping: optimistic removal with rollback, double-submit
 * suppression, and session counters. Rendering stays elsewhere. */
export class LabelingSession {
  items: QueueItem[] = [];
  total = 0;
  totalPages = 0;
  private inFlight = new Set<string>();

  constructor(
    private api: ApiClient,
    public state: SessionState,
  ) {}

  async loadPage(page: number): Promise<QueuePage> {
    const payload = await this.api.fetchQueue(page, this.state.pageSize);
    this.items = payload.items;
    this.total = payload.total;
    this.totalPages = payload.total_pages;
    this.state.page = payload.page;
    return payload;
  }

  /** Optimistically remove, POST, roll back on failure. */
  async submit(pairId: string, label: CloneLabel): Promise<SubmitOutcome> {
    if (!this.state.labeler) {
      throw new Error("labeler id must be set before labeling");
    }
    if (this.inFlight.has(pairId)) {
      return "suppressed";
    }
    const index = this.items.findIndex((item) => item.pair_id === pairId);
    if (index === -1) {
      return "suppressed";
    }
    const [removed] = this.items.splice(index, 1);
    this.inFlight.add(pairId);
    try {
      await this.api.submitLabel(pairId, label, this.state.labeler);
      this.state.labeledCount += 1;
      this.total = Math.max(0, this.total - 1);
      return "ok";
    } catch (error) {
      this.items.splice(index, 0, removed);
      if (error instanceof ApiError) {
        return "rolled-back";
      }
      throw error;
    } finally {
      this.inFlight.delete(pairId);
    }
  }

  setGamma(gamma: number): void {
    this.state.gamma = gamma;
  }
}
