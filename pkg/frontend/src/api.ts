import type { CloneLabel, QueuePage, TrainResult, TrainStatus } from "./types";

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
  }
}

type FetchLike = typeof fetch;

/** Thin typed client over the validation service HTTP API. */
export class ApiClient {
  constructor(
    private baseUrl: string = "",
    private fetchImpl: FetchLike = fetch,
  ) {}

  private async request(path: string, init?: RequestInit): Promise<unknown> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    let body: unknown = null;
    try {
      body = await response.json();
    } catch {
      body = null;
    }
    if (!response.ok) {
      const detail =
        body && typeof body === "object" && "error_msg" in body
          ? String((body as { error_msg: unknown }).error_msg)
          : `HTTP ${response.status}`;
      throw new ApiError(response.status, detail);
    }
    return body;
  }

  fetchQueue(page: number, pageSize: number): Promise<QueuePage> {
    return this.request(`/api/queue?page=${page}&page_size=${pageSize}`) as Promise<QueuePage>;
  }

  async submitLabel(pairId: string, label: CloneLabel, labeler: string): Promise<void> {
    await this.request("/api/feedback", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ pair_id: pairId, label, labeler }),
    });
  }

  async triggerTrain(model: string = "nn"): Promise<TrainResult> {
    const body = (await this.request("/api/train", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ model }),
    })) as { result: TrainResult };
    return body.result;
  }

  trainStatus(): Promise<TrainStatus> {
    return this.request("/api/train/status") as Promise<TrainStatus>;
  }
}
