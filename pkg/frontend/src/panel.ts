/**
 * Panel state: the client-side mirror of the service.
 *
 * Strictly server-authoritative. The panel never simulates or predicts;
 * everything it renders comes from the latest acknowledged snapshot, and
 * each outgoing command stays pending (its control disabled) until the
 * server answers with exactly one ack or error.
 */

import {
  Command,
  ErrorReply,
  PROTOCOL_VERSION,
  ServerMessage,
  Snapshot,
  decodeServerLine,
  encodeCommand,
} from "./protocol.js";

export type ConnectionStatus = "connecting" | "connected" | "closed";

export interface Wire {
  send(line: string): void;
  close(): void;
}

export interface PendingCommand {
  id: string;
  action: string;
  sentTick: number | null;
}

export interface EfficacyHistoryPoint {
  tick: number;
  efficacies: number[][];
}

export const HISTORY_LIMIT = 600;

export class Panel {
  status: ConnectionStatus = "connecting";
  snapshot: Snapshot | null = null;
  schemaMismatch: number | null = null;
  errors: ErrorReply[] = [];
  history: EfficacyHistoryPoint[] = [];
  private pending = new Map<string, PendingCommand>();
  private wire: Wire | null = null;
  private counter = 0;
  private listeners: (() => void)[] = [];

  attach(wire: Wire): void {
    this.wire = wire;
    this.status = "connected";
    this.notify();
  }

  onChange(listener: () => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener();
  }

  handleLine(line: string): void {
    const message = decodeServerLine(line);
    if (message === null) return;
    this.handleMessage(message);
  }

  handleMessage(message: ServerMessage): void {
    if (message.type === "snapshot") {
      if (message.version !== PROTOCOL_VERSION) {
        this.schemaMismatch = message.version;
        this.notify();
        return;
      }
      this.schemaMismatch = null;
      this.snapshot = message;
      this.history.push({ tick: message.tick, efficacies: message.efficacies });
      if (this.history.length > HISTORY_LIMIT) {
        this.history.splice(0, this.history.length - HISTORY_LIMIT);
      }
    } else if (message.type === "ack") {
      if (message.id !== null) this.pending.delete(message.id);
    } else {
      if (message.id != null) this.pending.delete(message.id);
      this.errors.push(message);
      if (this.errors.length > 50) this.errors.shift();
    }
    this.notify();
  }

  handleClose(): void {
    this.status = "closed";
    this.notify();
  }

  /** One command in flight per action kind: controls disable until replied. */
  isBusy(action: string): boolean {
    for (const cmd of this.pending.values()) {
      if (cmd.action === action) return true;
    }
    return false;
  }

  pendingCount(): number {
    return this.pending.size;
  }

  send(command: Omit<Command, "type" | "id"> & { action: Command["action"] }): string {
    if (this.wire === null || this.status !== "connected") {
      throw new Error("not connected");
    }
    const id = `cmd-${++this.counter}`;
    const full = { type: "command", id, ...command } as Command;
    this.pending.set(id, {
      id,
      action: command.action,
      sentTick: this.snapshot ? this.snapshot.tick : null,
    });
    this.wire.send(encodeCommand(full));
    this.notify();
    return id;
  }
}
