// Annotation flow: select requirements for one issue and submit them as a
// new label-record version. Drafts persist locally; version conflicts
// surface a reload-and-retry prompt without losing the selection.

import type { Api } from "./api";
import { ConflictError } from "./api";
import type { DraftStore } from "./drafts";
import { buildTree, searchRequirements } from "./browser";
import { clear, el } from "./dom";
import type { AssignmentEntry, Issue, LabelRecord, Taxonomy } from "./types";

export type AnnotationStatus =
  | "draft"
  | "confirm-empty"
  | "submitting"
  | "submitted"
  | "conflict"
  | "error";

export class AnnotationFlow {
  readonly selected = new Set<string>();
  status: AnnotationStatus = "draft";
  banner = "";
  version: number;
  note = "";

  constructor(
    private readonly api: Api,
    readonly sessionId: string,
    readonly coder: string,
    readonly entry: AssignmentEntry,
    private readonly drafts: DraftStore,
  ) {
    this.version = entry.version;
    for (const label of entry.labels) this.selected.add(label);
    const draft = drafts.load(sessionId, entry.issue_id, coder);
    if (draft && !entry.submitted) {
      this.selected.clear();
      for (const label of draft.labels) this.selected.add(label);
      this.note = draft.note;
    }
  }

  toggle(requirementId: string): void {
    if (this.status === "submitted") return; // read-only until a new version is opened
    if (this.selected.has(requirementId)) this.selected.delete(requirementId);
    else this.selected.add(requirementId);
    this.status = "draft";
    this.saveDraft();
  }

  saveDraft(): void {
    this.drafts.save(this.sessionId, this.entry.issue_id, this.coder, this.selected, this.note);
  }

  /** Open a new version of a submitted annotation for editing. */
  reopen(): void {
    if (this.status === "submitted") this.status = "draft";
  }

  async submit(options: { confirmedEmpty?: boolean } = {}): Promise<LabelRecord | null> {
    if (this.selected.size === 0 && !options.confirmedEmpty) {
      this.status = "confirm-empty";
      this.banner =
        "No requirement selected: submit an empty set to record that this issue raises no privacy requirement?";
      return null;
    }
    this.status = "submitting";
    try {
      const record = await this.api.submitLabels(
        this.sessionId,
        this.entry.issue_id,
        this.coder,
        [...this.selected].sort(),
        this.version,
      );
      this.version = record.version;
      this.status = "submitted";
      this.banner = `Submitted version ${record.version}.`;
      this.drafts.clear(this.sessionId, this.entry.issue_id, this.coder);
      return record;
    } catch (err) {
      this.saveDraft(); // never lose the selection
      if (err instanceof ConflictError) {
        this.status = "conflict";
        this.version = err.currentVersion;
        this.banner =
          "Someone already stored a newer version of your labels for this issue. " +
          "Your selection is kept; review and submit again.";
        return null;
      }
      this.status = "error";
      this.banner = err instanceof Error ? err.message : String(err);
      return null;
    }
  }

  /** After a conflict: the flow already reloaded the current version, so a
   *  plain resubmit retries against it. */
  async retryAfterConflict(): Promise<LabelRecord | null> {
    if (this.status !== "conflict") return null;
    return this.submit({ confirmedEmpty: true });
  }

  render(root: HTMLElement, taxonomy: Taxonomy, issue: Issue | null): void {
    clear(root);
    const readOnly = this.status === "submitted";
    root.append(
      el("h2", {}, `${this.entry.issue_id}: ${this.entry.title}`),
      el(
        "p",
        { class: "issue-meta" },
        `${this.entry.issue_type} - coder ${this.coder} - version ${this.version}`,
      ),
    );
    if (issue) root.append(el("pre", { class: "issue-description" }, issue.description));
    const bannerNode = el("div", { class: `banner banner-${this.status}` }, this.banner);
    root.append(bannerNode);

    const results = el("div", { class: "search-results" });
    const search = el("input", {
      type: "search",
      class: "requirement-search",
      placeholder: "search requirements",
    });
    search.addEventListener("input", () => {
      clear(results);
      for (const req of searchRequirements(taxonomy, search.value).slice(0, 12)) {
        results.append(this.requirementRow(req.id, req.text, readOnly));
      }
    });
    root.append(search, results);

    const tree = el("div", { class: "taxonomy-browser" });
    for (const category of buildTree(taxonomy)) {
      const box = el("details", { class: "category" });
      box.append(el("summary", {}, `${category.id} (${category.total})`));
      for (const req of category.requirements) {
        box.append(this.requirementRow(req.id, req.text, readOnly));
      }
      for (const sub of category.subcategories) {
        const subBox = el("details", { class: "subcategory" });
        subBox.append(el("summary", {}, `${sub.id} (${sub.requirements.length})`));
        for (const req of sub.requirements) {
          subBox.append(this.requirementRow(req.id, req.text, readOnly));
        }
        box.append(subBox);
      }
      tree.append(box);
    }
    root.append(tree);

    const submitButton = el("button", { class: "submit-labels" }, "Submit labels");
    if (readOnly) submitButton.setAttribute("disabled", "disabled");
    submitButton.addEventListener("click", () => {
      void this.submit().then(() => this.render(root, taxonomy, issue));
    });
    root.append(submitButton);
    if (this.status === "confirm-empty") {
      const confirmButton = el("button", { class: "confirm-empty" }, "Yes, submit empty set");
      confirmButton.addEventListener("click", () => {
        void this.submit({ confirmedEmpty: true }).then(() => this.render(root, taxonomy, issue));
      });
      root.append(confirmButton);
    }
    if (this.status === "conflict") {
      const retryButton = el("button", { class: "retry-submit" }, "Submit against latest version");
      retryButton.addEventListener("click", () => {
        void this.retryAfterConflict().then(() => this.render(root, taxonomy, issue));
      });
      root.append(retryButton);
    }
    if (readOnly) {
      const reopenButton = el("button", { class: "reopen" }, "Edit as new version");
      reopenButton.addEventListener("click", () => {
        this.reopen();
        this.render(root, taxonomy, issue);
      });
      root.append(reopenButton);
    }
  }

  private requirementRow(id: string, text: string, readOnly: boolean): HTMLElement {
    const checkbox = el("input", { type: "checkbox", "data-requirement": id });
    checkbox.checked = this.selected.has(id);
    if (readOnly) checkbox.setAttribute("disabled", "disabled");
    checkbox.addEventListener("change", () => this.toggle(id));
    return el("label", { class: "requirement-row" }, checkbox, ` ${text} (${id})`);
  }
}
