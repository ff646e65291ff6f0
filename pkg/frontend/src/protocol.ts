/**
 * Wire protocol shared with the simulation service: newline-delimited JSON,
 * snapshots flowing in, commands flowing out, one ack or error per command.
 *
 * The decoders are hand-rolled type guards so the browser build needs no
 * runtime dependencies; anything that fails validation is reported, never
 * rendered.
 */

export const PROTOCOL_VERSION = 1;

export interface FlashPattern {
  variant: "constant" | "periodic" | "sequence";
  period?: number;
  duty?: number;
  symbols?: string[];
  short_ticks?: number;
  long_ticks?: number;
  gap_ticks?: number;
}

export interface LightView {
  id: string;
  bearing: number;
  intensity: number;
  active: boolean;
  on: boolean;
  pattern: FlashPattern;
}

export interface SensorReport {
  sensor_id: number;
  winner: number;
  novelty: number;
  is_new: boolean;
  raw_strength: number;
}

export interface Snapshot {
  type: "snapshot";
  version: number;
  tick: number;
  heading: number;
  lights: LightView[];
  readings: number[];
  reports: (SensorReport | null)[];
  decision: { action: string | null; sensor_id: number | null };
  efficacies: number[][];
  forgetting: boolean;
}

export interface Ack {
  type: "ack";
  id: string | null;
}

export interface ErrorReply {
  type: "error";
  id: string | null;
  message: string;
}

export type ServerMessage = Snapshot | Ack | ErrorReply;

export type Command =
  | { type: "command"; id: string; action: "add_light"; light: { id: string; bearing: number; intensity?: number; pattern?: FlashPattern } }
  | { type: "command"; id: string; action: "remove_light"; light_id: string }
  | { type: "command"; id: string; action: "set_active"; light_id: string; active: boolean }
  | { type: "command"; id: string; action: "set_pattern"; light_id: string; pattern: FlashPattern }
  | { type: "command"; id: string; action: "set_forgetting"; forgetting: boolean }
  | { type: "command"; id: string; action: "reset" };

function isNumber(x: unknown): x is number {
  return typeof x === "number" && Number.isFinite(x);
}

function isNumberArray(x: unknown): x is number[] {
  return Array.isArray(x) && x.every(isNumber);
}

function isReport(x: unknown): x is SensorReport {
  if (x === null || typeof x !== "object") return false;
  const r = x as Record<string, unknown>;
  return (
    isNumber(r.sensor_id) &&
    isNumber(r.winner) &&
    isNumber(r.novelty) &&
    typeof r.is_new === "boolean" &&
    isNumber(r.raw_strength)
  );
}

function isLight(x: unknown): x is LightView {
  if (x === null || typeof x !== "object") return false;
  const l = x as Record<string, unknown>;
  return (
    typeof l.id === "string" &&
    isNumber(l.bearing) &&
    isNumber(l.intensity) &&
    typeof l.active === "boolean" &&
    typeof l.on === "boolean" &&
    typeof l.pattern === "object" &&
    l.pattern !== null
  );
}

export function isSnapshot(x: unknown): x is Snapshot {
  if (x === null || typeof x !== "object") return false;
  const s = x as Record<string, unknown>;
  return (
    s.type === "snapshot" &&
    isNumber(s.version) &&
    isNumber(s.tick) &&
    isNumber(s.heading) &&
    Array.isArray(s.lights) &&
    s.lights.every(isLight) &&
    isNumberArray(s.readings) &&
    (s.readings as number[]).length === 4 &&
    Array.isArray(s.reports) &&
    s.reports.every((r) => r === null || isReport(r)) &&
    Array.isArray(s.efficacies) &&
    s.efficacies.every(isNumberArray) &&
    typeof s.forgetting === "boolean"
  );
}

export function isAck(x: unknown): x is Ack {
  if (x === null || typeof x !== "object") return false;
  const a = x as Record<string, unknown>;
  return a.type === "ack" && (a.id === null || typeof a.id === "string");
}

export function isErrorReply(x: unknown): x is ErrorReply {
  if (x === null || typeof x !== "object") return false;
  const e = x as Record<string, unknown>;
  return (
    e.type === "error" &&
    (e.id === null || e.id === undefined || typeof e.id === "string") &&
    typeof e.message === "string"
  );
}

export function decodeServerLine(line: string): ServerMessage | null {
  let doc: unknown;
  try {
    doc = JSON.parse(line);
  } catch {
    return null;
  }
  if (isSnapshot(doc) || isAck(doc) || isErrorReply(doc)) return doc;
  return null;
}

export function encodeCommand(command: Command): string {
  return JSON.stringify(command) + "\n";
}

/** Split a byte stream into complete lines, keeping the remainder. */
export class LineSplitter {
  private buffer = "";

  push(chunk: string): string[] {
    this.buffer += chunk;
    const parts = this.buffer.split("\n");
    this.buffer = parts.pop() ?? "";
    return parts.filter((p) => p.trim().length > 0);
  }
}
