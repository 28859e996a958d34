// Adjudication flow: coder label sets side by side with their MASI distance,
// resolved either by combining (the union, pre-filled and locked) or by
// reclassifying with an explicitly chosen final set.

import type { Api } from "./api";
import { clear, el } from "./dom";
import type { Disagreement, FinalLabel } from "./types";

export type AdjudicationChoice = "combine" | "reclassify" | null;

export function unionOfSets(disagreement: Disagreement): string[] {
  const union = new Set<string>();
  for (const per of disagreement.label_sets) for (const label of per.labels) union.add(label);
  return [...union].sort();
}

export class AdjudicationFlow {
  choice: AdjudicationChoice = null;
  finalSet = new Set<string>();
  finalExplicit = false;
  note = "";
  banner = "";
  submitted: FinalLabel | null = null;

  constructor(
    private readonly api: Api,
    readonly sessionId: string,
    readonly disagreement: Disagreement,
  ) {}

  get locked(): boolean {
    return this.choice === "combine";
  }

  chooseCombine(): void {
    this.choice = "combine";
    this.finalSet = new Set(unionOfSets(this.disagreement));
    this.finalExplicit = true;
  }

  chooseReclassify(): void {
    this.choice = "reclassify";
    this.finalSet = new Set();
    this.finalExplicit = false;
  }

  setFinal(labels: Iterable<string>): void {
    if (this.locked) return;
    this.finalSet = new Set(labels);
    this.finalExplicit = true;
  }

  toggleFinal(label: string): void {
    if (this.locked) return;
    if (this.finalSet.has(label)) this.finalSet.delete(label);
    else this.finalSet.add(label);
    this.finalExplicit = true;
  }

  validate(): string | null {
    if (this.choice === null) return "choose combine or reclassify first";
    if (this.choice === "reclassify" && !this.finalExplicit) {
      return "reclassifying needs an explicit final set";
    }
    return null;
  }

  async submit(adjudicators: string[]): Promise<FinalLabel | null> {
    const problem = this.validate();
    if (problem) {
      this.banner = problem;
      return null;
    }
    try {
      const final = await this.api.adjudicate(this.sessionId, this.disagreement.issue_id, {
        final: [...this.finalSet].sort(),
        resolution: this.choice === "combine" ? "combined" : "reclassified",
        adjudicators,
        note: this.note,
      });
      this.submitted = final;
      this.banner = `Resolved as ${final.resolution}.`;
      return final;
    } catch (err) {
      this.banner = err instanceof Error ? err.message : String(err);
      return null;
    }
  }

  render(root: HTMLElement, adjudicators: string[]): void {
    clear(root);
    root.append(el("h2", {}, `Adjudicate ${this.disagreement.issue_id}`));
    root.append(
      el("span", { class: "masi-badge" }, `MASI distance ${this.disagreement.masi.toFixed(3)}`),
    );

    const sides = el("div", { class: "coder-sets" });
    for (const per of this.disagreement.label_sets) {
      sides.append(
        el(
          "div",
          { class: "coder-set" },
          el("h3", {}, per.coder),
          el("p", {}, per.labels.length ? per.labels.join(", ") : "(no requirement)"),
        ),
      );
    }
    root.append(sides);

    const combineButton = el("button", { class: "choose-combine" }, "Combine (union)");
    combineButton.addEventListener("click", () => {
      this.chooseCombine();
      this.render(root, adjudicators);
    });
    const reclassifyButton = el("button", { class: "choose-reclassify" }, "Reclassify");
    reclassifyButton.addEventListener("click", () => {
      this.chooseReclassify();
      this.render(root, adjudicators);
    });
    root.append(combineButton, reclassifyButton);

    const editor = el("div", { class: "final-editor" });
    const candidates = new Set([...unionOfSets(this.disagreement), ...this.finalSet]);
    for (const label of [...candidates].sort()) {
      const checkbox = el("input", { type: "checkbox", "data-final": label });
      checkbox.checked = this.finalSet.has(label);
      if (this.locked) checkbox.setAttribute("disabled", "disabled");
      checkbox.addEventListener("change", () => this.toggleFinal(label));
      editor.append(el("label", {}, checkbox, ` ${label}`));
    }
    const finalInput = el("input", {
      type: "text",
      class: "final-free-entry",
      placeholder: "add requirement id",
    });
    if (this.locked) finalInput.setAttribute("disabled", "disabled");
    finalInput.addEventListener("change", () => {
      const value = finalInput.value.trim();
      if (value) {
        this.toggleFinal(value);
        this.render(root, adjudicators);
      }
    });
    editor.append(finalInput);
    root.append(editor);

    const noteInput = el("textarea", { class: "resolution-note", placeholder: "note" });
    noteInput.value = this.note;
    noteInput.addEventListener("input", () => {
      this.note = noteInput.value;
    });
    root.append(noteInput);

    const submitButton = el("button", { class: "submit-resolution" }, "Store resolution");
    submitButton.addEventListener("click", () => {
      void this.submit(adjudicators).then(() => this.render(root, adjudicators));
    });
    root.append(submitButton, el("div", { class: "banner" }, this.banner));
  }
}

/** Read-only confirmation view for an issue whose coders already agree. */
export function renderUnanimous(root: HTMLElement, issueId: string, labels: string[]): void {
  clear(root);
  root.append(
    el("h2", {}, `${issueId} is unanimous`),
    el("p", {}, labels.length ? labels.join(", ") : "(no requirement)"),
    el("p", { class: "read-only-hint" }, "Nothing to adjudicate."),
  );
}
