// Application shell: work queue on the left, annotation or adjudication in
// the main panel, agreement gauge in the header. Configuration comes from
// the query string: ?base=http://127.0.0.1:8571&session=s1&coder=c1&pair=c1,c2

import { AdjudicationFlow, renderUnanimous } from "./adjudicate";
import { AnnotationFlow } from "./annotate";
import { Api } from "./api";
import { DraftStore } from "./drafts";
import { clear, el } from "./dom";
import { AlphaGauge } from "./gauge";
import { WorkQueue } from "./queue";
import type { Issue, Taxonomy } from "./types";

interface AppConfig {
  base: string;
  session: string;
  coder: string;
  pair: [string, string];
}

export function configFromLocation(search: string): AppConfig {
  const params = new URLSearchParams(search);
  const pairRaw = (params.get("pair") ?? "c1,c2").split(",");
  return {
    base: params.get("base") ?? "http://127.0.0.1:8571",
    session: params.get("session") ?? "s1",
    coder: params.get("coder") ?? "c1",
    pair: [pairRaw[0] ?? "c1", pairRaw[1] ?? "c2"],
  };
}

export async function mount(root: HTMLElement, config: AppConfig): Promise<void> {
  const api = new Api(config.base);
  const drafts = new DraftStore(window.localStorage);
  const taxonomy: Taxonomy = await api.getTaxonomy();
  const queue = new WorkQueue(api, config.session, config.coder);
  const gauge = new AlphaGauge(api, config.session, config.pair);

  const header = el("header", {});
  const gaugeBox = el("div", { class: "gauge" });
  header.append(
    el("h1", {}, "privlens annotation workbench"),
    el("p", {}, `session ${config.session} - coder ${config.coder}`),
    gaugeBox,
  );
  const queueBox = el("nav", { class: "queue" });
  const mainBox = el("main", { class: "panel" });
  clear(root);
  root.append(header, el("div", { class: "layout" }, queueBox, mainBox));

  const issueCache = new Map<string, Issue>();

  async function issueDetail(issueId: string): Promise<Issue | null> {
    if (!issueCache.has(issueId)) {
      try {
        issueCache.set(issueId, await api.getIssue(issueId));
      } catch {
        return null;
      }
    }
    return issueCache.get(issueId) ?? null;
  }

  async function refreshSidebar(): Promise<void> {
    await Promise.all([queue.refresh(), gauge.refresh()]);
    gauge.render(gaugeBox);
    clear(queueBox);
    queueBox.append(
      el("h2", {}, `work queue (${queue.completedCount()}/${queue.entries.length} done)`),
    );
    for (const entry of queue.entries) {
      const row = el(
        "button",
        { class: entry.submitted ? "queue-item done" : "queue-item" },
        `${entry.issue_id} ${entry.submitted ? "[done]" : ""}`,
      );
      row.addEventListener("click", () => {
        void openAnnotation(entry.issue_id);
      });
      queueBox.append(row);
    }
    const adjudicationButton = el("button", { class: "open-adjudication" }, "adjudication queue");
    adjudicationButton.addEventListener("click", () => {
      void openAdjudication();
    });
    queueBox.append(adjudicationButton);
  }

  async function openAnnotation(issueId: string): Promise<void> {
    await queue.refresh();
    const entry = queue.entries.find((candidate) => candidate.issue_id === issueId);
    if (!entry) return;
    const flow = new AnnotationFlow(api, config.session, config.coder, entry, drafts);
    flow.render(mainBox, taxonomy, await issueDetail(issueId));
    mainBox.addEventListener("click", () => void refreshSidebar(), { once: true });
  }

  async function openAdjudication(): Promise<void> {
    const payload = await api.getDisagreements(config.session);
    clear(mainBox);
    mainBox.append(el("h2", {}, `disagreements (${payload.disagreements.length})`));
    if (payload.pending.length) {
      mainBox.append(el("p", {}, `pending submissions: ${payload.pending.join(", ")}`));
    }
    for (const disagreement of payload.disagreements) {
      const row = el("button", { class: "disagreement-item" },
        `${disagreement.issue_id} (masi ${disagreement.masi.toFixed(3)})`);
      row.addEventListener("click", () => {
        const flow = new AdjudicationFlow(api, config.session, disagreement);
        flow.render(mainBox, queue.session?.coders ?? []);
      });
      mainBox.append(row);
    }
    if (!payload.disagreements.length) {
      renderUnanimous(mainBox, "queue", []);
    }
  }

  await refreshSidebar();
}

declare global {
  interface Window {
    privlensMount?: typeof mount;
  }
}

if (typeof document !== "undefined" && document.getElementById("app")) {
  window.privlensMount = mount;
  void mount(
    document.getElementById("app") as HTMLElement,
    configFromLocation(window.location.search),
  );
}
