/**
 * Pure view-model builders: snapshot in, drawing coordinates out.
 *
 * Kept DOM-free so the rendering math (compass geometry, bar heights,
 * trace polylines) is testable; dom.ts binds these to SVG.
 */

import type { Snapshot } from "./protocol.js";
import type { EfficacyHistoryPoint } from "./panel.js";

export const BOREDOM_THRESHOLD = 0.4;

export interface CompassLight {
  id: string;
  bearing: number;
  on: boolean;
  active: boolean;
  x: number;
  y: number;
}

export interface SensorField {
  sensor: number;
  facing: number;
  arcStart: number;
  arcEnd: number;
  reading: number;
}

export interface CompassView {
  heading: number;
  fields: SensorField[];
  lights: CompassLight[];
}

export interface NoveltyBar {
  sensor: number;
  value: number;
  isNew: boolean;
  aboveThreshold: boolean;
  hasReport: boolean;
}

export interface TraceSeries {
  sensor: number;
  /** one polyline per neuron: [tick, efficacy] pairs */
  lines: [number, number][][];
}

function polar(bearingDeg: number, radius: number): { x: number; y: number } {
  // bearing 0 points up, increasing clockwise (screen coordinates)
  const rad = ((bearingDeg - 90) * Math.PI) / 180;
  return { x: radius * Math.cos(rad), y: radius * Math.sin(rad) };
}

export function compassView(snapshot: Snapshot, radius = 100): CompassView {
  const fields: SensorField[] = [];
  for (let s = 0; s < 4; s++) {
    const facing = (snapshot.heading + 90 * s) % 360;
    fields.push({
      sensor: s,
      facing,
      arcStart: (facing - 45 + 360) % 360,
      arcEnd: (facing + 45) % 360,
      reading: snapshot.readings[s],
    });
  }
  const lights = snapshot.lights.map((l) => {
    const { x, y } = polar(l.bearing, radius);
    return { id: l.id, bearing: l.bearing, on: l.on, active: l.active, x, y };
  });
  return { heading: snapshot.heading, fields, lights };
}

export function noveltyBars(snapshot: Snapshot): NoveltyBar[] {
  const bars: NoveltyBar[] = [];
  for (let s = 0; s < 4; s++) {
    const report = snapshot.reports[s];
    if (report === null || report === undefined) {
      bars.push({ sensor: s, value: 0, isNew: false, aboveThreshold: false, hasReport: false });
    } else {
      bars.push({
        sensor: s,
        value: report.novelty,
        isNew: report.is_new,
        aboveThreshold: report.is_new || report.novelty > BOREDOM_THRESHOLD,
        hasReport: true,
      });
    }
  }
  return bars;
}

export function traceSeries(history: EfficacyHistoryPoint[]): TraceSeries[] {
  if (history.length === 0) return [];
  const sensors = history[history.length - 1].efficacies.length;
  const out: TraceSeries[] = [];
  for (let s = 0; s < sensors; s++) {
    const neurons = history[history.length - 1].efficacies[s].length;
    const lines: [number, number][][] = [];
    for (let n = 0; n < neurons; n++) {
      const line: [number, number][] = [];
      for (const point of history) {
        if (s < point.efficacies.length && n < point.efficacies[s].length) {
          line.push([point.tick, point.efficacies[s][n]]);
        }
      }
      lines.push(line);
    }
    out.push({ sensor: s, lines });
  }
  return out;
}

/** Shortest-path angular interpolation for the compass animation. */
export function headingStep(current: number, target: number, fraction: number): number {
  const delta = ((target - current + 540) % 360) - 180;
  return (current + delta * fraction + 360) % 360;
}
