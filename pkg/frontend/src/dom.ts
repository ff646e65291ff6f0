/** SVG/DOM bindings for the view models. Browser-only; logic stays in view.ts. */

import type { Panel } from "./panel.js";
import {
  BOREDOM_THRESHOLD,
  compassView,
  headingStep,
  noveltyBars,
  traceSeries,
} from "./view.js";
import { PRESETS, presetNames } from "./presets.js";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  if (text) node.textContent = text;
  return node;
}

function svgEl(tag: string, attrs: Record<string, string> = {}): SVGElement {
  const node = document.createElementNS(SVG_NS, tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

export class PanelDom {
  private compass: SVGElement;
  private bars: SVGElement;
  private traces: SVGElement;
  private banner: HTMLElement;
  private status: HTMLElement;
  private errorBox: HTMLElement;
  private animatedHeading = 0;

  constructor(private root: HTMLElement, private panel: Panel) {
    this.banner = el("div", { class: "banner hidden" });
    this.status = el("div", { class: "status" }, "connecting…");
    this.errorBox = el("div", { class: "errors" });
    this.compass = svgEl("svg", { viewBox: "-130 -130 260 260", class: "compass" });
    this.bars = svgEl("svg", { viewBox: "0 0 240 130", class: "bars" });
    this.traces = svgEl("svg", { viewBox: "0 0 620 260", class: "traces" });

    root.append(this.banner, this.status);
    const row = el("div", { class: "row" });
    row.append(this.compass as unknown as HTMLElement, this.bars as unknown as HTMLElement);
    root.append(row, this.traces as unknown as HTMLElement, this.buildControls(), this.errorBox);

    panel.onChange(() => this.render());
    requestAnimationFrame(() => this.animate());
  }

  private buildControls(): HTMLElement {
    const box = el("div", { class: "controls" });
    const bearing = el("input", { type: "number", value: "0", step: "90" });
    const lightId = el("input", { type: "text", value: "lamp-1" });
    const preset = el("select");
    for (const name of presetNames()) preset.append(el("option", { value: name }, name));

    const addButton = el("button", {}, "add light");
    addButton.onclick = () => {
      this.guard("add_light", () =>
        this.panel.send({
          action: "add_light",
          light: {
            id: lightId.value,
            bearing: Number(bearing.value),
            pattern: PRESETS[preset.value],
          },
        }),
      );
    };
    const removeButton = el("button", {}, "remove light");
    removeButton.onclick = () => {
      this.guard("remove_light", () =>
        this.panel.send({ action: "remove_light", light_id: lightId.value }),
      );
    };
    const toggleButton = el("button", {}, "toggle forgetting");
    toggleButton.onclick = () => {
      const current = this.panel.snapshot?.forgetting ?? true;
      this.guard("set_forgetting", () =>
        this.panel.send({ action: "set_forgetting", forgetting: !current }),
      );
    };
    const resetButton = el("button", {}, "reset");
    resetButton.onclick = () => {
      this.guard("reset", () => this.panel.send({ action: "reset" }));
    };
    box.append(
      el("label", {}, "id"), lightId,
      el("label", {}, "bearing"), bearing,
      el("label", {}, "pattern"), preset,
      addButton, removeButton, toggleButton, resetButton,
    );
    return box;
  }

  private guard(action: string, fn: () => void): void {
    if (this.panel.isBusy(action)) return;
    try {
      fn();
    } catch (exc) {
      this.errorBox.textContent = String(exc);
    }
  }

  private animate(): void {
    const target = this.panel.snapshot?.heading ?? 0;
    this.animatedHeading = headingStep(this.animatedHeading, target, 0.2);
    const needle = this.compass.querySelector(".needle");
    if (needle) needle.setAttribute("transform", `rotate(${this.animatedHeading})`);
    requestAnimationFrame(() => this.animate());
  }

  render(): void {
    const panel = this.panel;
    this.status.textContent =
      panel.status === "connected"
        ? `tick ${panel.snapshot?.tick ?? "…"} | forgetting ${panel.snapshot?.forgetting ? "on" : "off"} | pending ${panel.pendingCount()}`
        : panel.status;
    if (panel.schemaMismatch !== null) {
      this.banner.textContent = `snapshot schema version ${panel.schemaMismatch} is not supported (expected 1)`;
      this.banner.classList.remove("hidden");
    } else {
      this.banner.classList.add("hidden");
    }
    if (panel.errors.length > 0) {
      const last = panel.errors[panel.errors.length - 1];
      this.errorBox.textContent = `server error: ${last.message}`;
    }
    const snapshot = panel.snapshot;
    if (!snapshot) return;
    this.renderCompass(snapshot);
    this.renderBars(snapshot);
    this.renderTraces();
  }

  private renderCompass(snapshot: NonNullable<Panel["snapshot"]>): void {
    const view = compassView(snapshot, 100);
    this.compass.replaceChildren();
    this.compass.append(svgEl("circle", { r: "100", fill: "#111", stroke: "#555" }));
    for (const field of view.fields) {
      const mid = field.facing;
      const a = ((mid - 90) * Math.PI) / 180;
      const x = 80 * Math.cos(a);
      const y = 80 * Math.sin(a);
      const label = svgEl("text", {
        x: String(x), y: String(y), fill: "#8af",
        "text-anchor": "middle", "font-size": "10",
      });
      label.textContent = `s${field.sensor} ${field.reading.toFixed(2)}`;
      this.compass.append(label);
    }
    for (const light of view.lights) {
      this.compass.append(
        svgEl("circle", {
          cx: String(light.x), cy: String(light.y), r: "7",
          fill: light.active && light.on ? "#ffd54f" : "#333",
          stroke: light.active ? "#ffb300" : "#666",
        }),
      );
    }
    const needle = svgEl("g", { class: "needle", transform: `rotate(${view.heading})` });
    needle.append(svgEl("polygon", { points: "0,-70 6,0 -6,0", fill: "#e53935" }));
    this.compass.append(needle);
  }

  private renderBars(snapshot: NonNullable<Panel["snapshot"]>): void {
    const bars = noveltyBars(snapshot);
    this.bars.replaceChildren();
    const height = 100;
    bars.forEach((bar, i) => {
      const h = bar.value * height;
      this.bars.append(
        svgEl("rect", {
          x: String(20 + i * 55), y: String(10 + height - h),
          width: "36", height: String(h),
          fill: bar.isNew ? "#29b6f6" : bar.aboveThreshold ? "#66bb6a" : "#777",
          class: `bar bar-${bar.sensor}`,
          "data-value": String(bar.value),
        }),
      );
    });
    const ty = 10 + height - BOREDOM_THRESHOLD * height;
    this.bars.append(
      svgEl("line", {
        x1: "10", x2: "230", y1: String(ty), y2: String(ty),
        stroke: "#e53935", "stroke-dasharray": "4 3", class: "threshold",
      }),
    );
  }

  private renderTraces(): void {
    const series = traceSeries(this.panel.history);
    this.traces.replaceChildren();
    if (series.length === 0) return;
    const ticks = this.panel.history.map((h) => h.tick);
    const t0 = ticks[0];
    const span = Math.max(1, ticks[ticks.length - 1] - t0);
    series.forEach((s, i) => {
      const ox = (i % 2) * 310;
      const oy = Math.floor(i / 2) * 130;
      this.traces.append(
        svgEl("rect", {
          x: String(ox + 8), y: String(oy + 8), width: "290", height: "110",
          fill: "none", stroke: "#444",
        }),
      );
      for (const line of s.lines) {
        if (line.length < 2) continue;
        const points = line
          .map(([tick, eff]) => {
            const x = ox + 8 + ((tick - t0) / span) * 290;
            const y = oy + 8 + (1 - eff) * 110;
            return `${x.toFixed(1)},${y.toFixed(1)}`;
          })
          .join(" ");
        this.traces.append(
          svgEl("polyline", {
            points, fill: "none", stroke: "#4fc3f7",
            "stroke-width": "0.6", opacity: "0.7",
          }),
        );
      }
    });
  }
}
