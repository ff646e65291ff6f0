/** Flash-pattern presets matching the simulation's defaults. */

import type { FlashPattern } from "./protocol.js";

export const PRESETS: Record<string, FlashPattern> = {
  constant: { variant: "constant" },
  slow: { variant: "periodic", period: 12, duty: 0.5 },
  fast: { variant: "periodic", period: 4, duty: 0.5 },
  SSLL: {
    variant: "sequence",
    symbols: ["short", "short", "long", "long"],
    short_ticks: 2,
    long_ticks: 4,
    gap_ticks: 2,
  },
  SLSL: {
    variant: "sequence",
    symbols: ["short", "long", "short", "long"],
    short_ticks: 2,
    long_ticks: 4,
    gap_ticks: 2,
  },
};

export function presetNames(): string[] {
  return Object.keys(PRESETS);
}
