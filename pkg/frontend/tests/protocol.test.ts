import { describe, expect, it } from "vitest";

import {
  LineSplitter,
  decodeServerLine,
  encodeCommand,
  isSnapshot,
} from "../src/protocol.js";

const SNAPSHOT = {
  type: "snapshot",
  version: 1,
  tick: 7,
  heading: 90.0,
  lights: [
    {
      id: "lamp",
      bearing: 90.0,
      intensity: 1.0,
      active: true,
      on: true,
      pattern: { variant: "constant" },
    },
  ],
  readings: [0.0, 1.0, 0.0, 0.0],
  reports: [
    null,
    { sensor_id: 1, winner: 3, novelty: 0.9, is_new: false, raw_strength: 0.8 },
    null,
    null,
  ],
  decision: { action: "none", sensor_id: null },
  efficacies: [[1, 1], [0.9, 1], [1, 1], [1, 1]],
  forgetting: true,
};

describe("protocol decoding", () => {
  it("accepts a well-formed snapshot", () => {
    expect(isSnapshot(SNAPSHOT)).toBe(true);
    const decoded = decodeServerLine(JSON.stringify(SNAPSHOT));
    expect(decoded).not.toBeNull();
    expect(decoded!.type).toBe("snapshot");
  });

  it("rejects malformed JSON and unknown message shapes", () => {
    expect(decodeServerLine("{nope")).toBeNull();
    expect(decodeServerLine('{"type": "telemetry"}')).toBeNull();
    expect(decodeServerLine('{"type": "snapshot", "tick": "seven"}')).toBeNull();
  });

  it("decodes acks and errors", () => {
    expect(decodeServerLine('{"type": "ack", "id": "c1"}')!.type).toBe("ack");
    const err = decodeServerLine('{"type": "error", "id": null, "message": "boom"}');
    expect(err!.type).toBe("error");
  });

  it("encodes commands as a single NDJSON line", () => {
    const line = encodeCommand({ type: "command", id: "c1", action: "reset" });
    expect(line.endsWith("\n")).toBe(true);
    expect(JSON.parse(line)).toEqual({ type: "command", id: "c1", action: "reset" });
  });
});

describe("line splitting", () => {
  it("reassembles lines across chunk boundaries", () => {
    const splitter = new LineSplitter();
    expect(splitter.push('{"a"')).toEqual([]);
    expect(splitter.push(': 1}\n{"b": 2}\n{"c"')).toEqual(['{"a": 1}', '{"b": 2}']);
    expect(splitter.push(": 3}\n")).toEqual(['{"c": 3}']);
  });

  it("drops blank lines", () => {
    const splitter = new LineSplitter();
    expect(splitter.push("\n\n  \nx\n")).toEqual(["x"]);
  });
});
