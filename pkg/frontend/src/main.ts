import { ApiClient, ApiError } from "./api";
import { clampGamma } from "./gamma";
import { refreshDecisions, renderFooterStats, renderQueue } from "./render";
import { LabelingSession } from "./session";
import type { CloneLabel } from "./types";

export interface AppHandles {
  session: LabelingSession;
  refresh: () => Promise<void>;
  stopPolling: () => void;
}

function banner(doc: Document, host: HTMLElement, kind: string, message: string): void {
  host.textContent = "";
  const note = doc.createElement("div");
  note.className = `banner banner-${kind}`;
  note.textContent = message;
  host.appendChild(note);
}

/** Wire the whole app into a root element. Injectable fetch keeps it testable. */
export function startApp(
  doc: Document,
  root: HTMLElement,
  options: { baseUrl?: string; fetchImpl?: typeof fetch; pollIntervalMs?: number } = {},
): AppHandles {
  const api = new ApiClient(options.baseUrl ?? "", options.fetchImpl ?? fetch.bind(globalThis));
  const session = new LabelingSession(api, {
    labeler: "",
    gamma: 0.5,
    page: 1,
    pageSize: 20,
    labeledCount: 0,
  });

  root.innerHTML = `
    <div class="toolbar">
      <label>labeler <input type="text" id="labeler-input" placeholder="your id"></label>
      <label>γ <input type="range" id="gamma-slider" min="0" max="1" step="0.01" value="0.5">
        <span id="gamma-value">0.50</span></label>
      <button id="train-button">train model</button>
      <button id="prev-page">prev</button>
      <button id="next-page">next</button>
    </div>
    <div id="banner-host"></div>
    <main id="queue-root"></main>
    <footer id="footer-stats"></footer>
  `;

  const queueRoot = root.querySelector<HTMLElement>("#queue-root")!;
  const footer = root.querySelector<HTMLElement>("#footer-stats")!;
  const bannerHost = root.querySelector<HTMLElement>("#banner-host")!;
  const labelerInput = root.querySelector<HTMLInputElement>("#labeler-input")!;
  const gammaSlider = root.querySelector<HTMLInputElement>("#gamma-slider")!;
  const gammaValue = root.querySelector<HTMLElement>("#gamma-value")!;
  const trainButton = root.querySelector<HTMLButtonElement>("#train-button")!;

  let pollTimer: ReturnType<typeof setInterval> | null = null;
  let modelLoaded = false;

  const view = () => ({
    items: session.items,
    gamma: session.state.gamma,
    page: session.state.page,
    totalPages: session.totalPages,
    total: session.total,
    labeledCount: session.state.labeledCount,
    modelLoaded,
  });

  const redraw = () => {
    renderQueue(doc, queueRoot, view());
    renderFooterStats(doc, footer, view());
  };

  const refresh = async () => {
    try {
      const page = await session.loadPage(session.state.page);
      modelLoaded = page.items.some((item) => item.prediction !== null);
      bannerHost.textContent = "";
      redraw();
    } catch {
      banner(doc, bannerHost, "error", "could not reach the service — retry");
      const retry = doc.createElement("button");
      retry.id = "retry-button";
      retry.textContent = "retry";
      retry.addEventListener("click", () => void refresh());
      bannerHost.appendChild(retry);
    }
  };

  labelerInput.addEventListener("input", () => {
    session.state.labeler = labelerInput.value.trim();
  });

  gammaSlider.addEventListener("input", () => {
    const gamma = clampGamma(Number(gammaSlider.value));
    session.setGamma(gamma);
    gammaValue.textContent = gamma.toFixed(2);
    // pure client-side re-threshold, no server round-trip
    refreshDecisions(queueRoot, session.items, gamma);
    renderFooterStats(doc, footer, view());
  });

  const submit = async (pairId: string, label: CloneLabel) => {
    if (!session.state.labeler) {
      banner(doc, bannerHost, "warn", "set a labeler id before labeling");
      return;
    }
    const outcome = await session.submit(pairId, label);
    if (outcome === "rolled-back") {
      banner(doc, bannerHost, "error", `label for ${pairId} was rejected — restored to queue`);
    } else if (outcome === "ok") {
      bannerHost.textContent = "";
    }
    redraw();
  };

  root.addEventListener("click", (event) => {
    const target = event.target as HTMLElement | null;
    if (target?.dataset.action === "label") {
      void submit(target.dataset.pairId!, target.dataset.label as CloneLabel);
    }
  });

  doc.addEventListener("keydown", (event) => {
    const key = (event as KeyboardEvent).key;
    if ((event.target as HTMLElement | null)?.tagName === "INPUT") return;
    const first = session.items[0];
    if (!first) return;
    if (key === "t") void submit(first.pair_id, "TP");
    else if (key === "f") void submit(first.pair_id, "FP");
    else if (key === "s") {
      // skip: rotate the first item to the back of the local list
      session.items.push(session.items.shift()!);
      redraw();
    }
  });

  const pollTraining = () => {
    pollTimer = setInterval(async () => {
      try {
        const status = await api.trainStatus();
        if (!status.running) {
          if (pollTimer) clearInterval(pollTimer);
          pollTimer = null;
          await refresh(); // refresh first: it clears the banner host
          const accuracy = status.last?.cv_mean_accuracy;
          banner(
            doc,
            bannerHost,
            "info",
            accuracy !== undefined
              ? `training finished — CV mean accuracy ${accuracy.toFixed(4)}`
              : "training finished",
          );
        }
      } catch {
        /* transient poll failure: keep polling */
      }
    }, options.pollIntervalMs ?? 1000);
  };

  trainButton.addEventListener("click", async () => {
    try {
      banner(doc, bannerHost, "info", "training started…");
      const result = await api.triggerTrain();
      await refresh(); // refresh first: it clears the banner host
      const accuracy = result.cv_mean_accuracy;
      banner(
        doc,
        bannerHost,
        "info",
        accuracy !== undefined
          ? `training finished — CV mean accuracy ${accuracy.toFixed(4)}`
          : "training finished",
      );
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        banner(doc, bannerHost, "warn", "training already running");
        pollTraining();
      } else if (error instanceof ApiError && error.status === 422) {
        banner(doc, bannerHost, "warn", `cannot train yet: ${error.message} — label at least one of each class`);
      } else {
        banner(doc, bannerHost, "error", "training request failed");
      }
    }
  });

  root.querySelector<HTMLButtonElement>("#prev-page")!.addEventListener("click", () => {
    if (session.state.page > 1) {
      session.state.page -= 1;
      void refresh();
    }
  });
  root.querySelector<HTMLButtonElement>("#next-page")!.addEventListener("click", () => {
    if (session.state.page < session.totalPages) {
      session.state.page += 1;
      void refresh();
    }
  });

  void refresh();
  return {
    session,
    refresh,
    stopPolling: () => {
      if (pollTimer) clearInterval(pollTimer);
    },
  };
}

declare global {
  interface Window {
    clonevalApp?: AppHandles;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.clonevalApp = startApp(document, document.getElementById("app")!);
}
