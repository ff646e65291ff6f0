/** Wire adapters: raw TCP for Node (tests, tooling), WebSocket for browsers. */

import { LineSplitter } from "./protocol.js";
import type { Wire } from "./panel.js";

export interface WireEvents {
  onLine: (line: string) => void;
  onClose: () => void;
}

/** Browser side: the bridge relays NDJSON lines as WebSocket text frames. */
export class WebSocketWire implements Wire {
  private splitter = new LineSplitter();

  constructor(private ws: WebSocket, events: WireEvents) {
    ws.onmessage = (event) => {
      for (const line of this.splitter.push(String(event.data) + "\n")) {
        events.onLine(line);
      }
    };
    ws.onclose = () => events.onClose();
  }

  send(line: string): void {
    this.ws.send(line.trim());
  }

  close(): void {
    this.ws.close();
  }
}

/** Node side: plain TCP socket speaking NDJSON directly to the service. */
export async function connectTcp(
  host: string,
  port: number,
  events: WireEvents,
): Promise<Wire> {
  const net = await import("node:net");
  const splitter = new LineSplitter();
  const socket: import("node:net").Socket = await new Promise((resolve, reject) => {
    const s = net.createConnection({ host, port }, () => resolve(s));
    s.once("error", reject);
  });
  socket.setEncoding("utf8");
  socket.on("data", (chunk: string) => {
    for (const line of splitter.push(chunk)) events.onLine(line);
  });
  socket.on("close", () => events.onClose());
  return {
    send(line: string): void {
      socket.write(line.endsWith("\n") ? line : line + "\n");
    },
    close(): void {
      socket.destroy();
    },
  };
}
