// Live reliability gauge. The value is always fetched from the service, so
// the gauge and the CLI report identical numbers for identical state.

import type { Api } from "./api";
import { clear, el } from "./dom";
import type { IrrResult } from "./types";

export class AlphaGauge {
  result: IrrResult | null = null;
  error = "";

  constructor(
    private readonly api: Api,
    readonly sessionId: string,
    readonly pair: [string, string],
    readonly distance: string = "masi",
  ) {}

  async refresh(): Promise<IrrResult | null> {
    try {
      this.result = await this.api.getIrr(this.sessionId, this.pair, this.distance);
      this.error = "";
    } catch (err) {
      this.result = null;
      this.error = err instanceof Error ? err.message : String(err);
    }
    return this.result;
  }

  /** Display string, 3 decimals like the CLI report. */
  formatted(): string {
    if (!this.result) return "-";
    const flag = this.result.degenerate ? " (degenerate)" : "";
    return `${this.result.value.toFixed(3)}${flag}`;
  }

  render(root: HTMLElement): void {
    clear(root);
    const label = `alpha[${this.distance}] ${this.pair.join(",")}`;
    root.append(
      el("span", { class: "gauge-label" }, label),
      el("strong", { class: "gauge-value" }, this.error ? this.error : this.formatted()),
      this.result
        ? el("span", { class: "gauge-units" }, ` over ${this.result.n_units} issues`)
        : "",
    );
  }
}
