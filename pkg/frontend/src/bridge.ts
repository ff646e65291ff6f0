/**
 * Browser bridge: serves the panel's static files over HTTP and relays the
 * service's NDJSON TCP stream over a WebSocket, payloads verbatim (one line
 * per text frame in each direction). Browsers cannot open raw TCP sockets,
 * so this is the only extra hop; no simulation state lives here.
 *
 * Usage: node dist/bridge.js [--service-host H] [--service-port P]
 *                            [--http-port P]
 */

import http from "node:http";
import net from "node:net";
import path from "node:path";
import { promises as fs } from "node:fs";
import { fileURLToPath } from "node:url";
import { WebSocketServer, WebSocket } from "ws";

import { LineSplitter } from "./protocol.js";

const CONTENT_TYPES: Record<string, string> = {
  ".html": "text/html",
  ".js": "text/javascript",
  ".map": "application/json",
  ".css": "text/css",
};

function argValue(name: string, fallback: string): string {
  const index = process.argv.indexOf(name);
  return index >= 0 && process.argv[index + 1] ? process.argv[index + 1] : fallback;
}

export interface BridgeOptions {
  serviceHost: string;
  servicePort: number;
  httpPort: number;
  rootDir: string;
}

export async function startBridge(options: BridgeOptions): Promise<{
  server: http.Server;
  close: () => Promise<void>;
  port: number;
}> {
  const server = http.createServer(async (req, res) => {
    const url = (req.url ?? "/").split("?")[0];
    const file = url === "/" ? "/index.html" : url;
    const full = path.join(options.rootDir, path.normalize(file));
    if (!full.startsWith(options.rootDir)) {
      res.writeHead(403).end();
      return;
    }
    try {
      const body = await fs.readFile(full);
      res.writeHead(200, {
        "content-type": CONTENT_TYPES[path.extname(full)] ?? "application/octet-stream",
      });
      res.end(body);
    } catch {
      res.writeHead(404).end("not found");
    }
  });

  const wss = new WebSocketServer({ server, path: "/ws" });
  wss.on("connection", (ws: WebSocket) => {
    const splitter = new LineSplitter();
    const upstream = net.createConnection({
      host: options.serviceHost,
      port: options.servicePort,
    });
    upstream.setEncoding("utf8");
    upstream.on("data", (chunk: string) => {
      for (const line of splitter.push(chunk)) {
        if (ws.readyState === WebSocket.OPEN) ws.send(line);
      }
    });
    upstream.on("close", () => ws.close());
    upstream.on("error", () => ws.close());
    ws.on("message", (data) => {
      const text = data.toString();
      upstream.write(text.endsWith("\n") ? text : text + "\n");
    });
    ws.on("close", () => upstream.destroy());
  });

  await new Promise<void>((resolve) => server.listen(options.httpPort, resolve));
  const address = server.address();
  const port = typeof address === "object" && address !== null ? address.port : options.httpPort;
  return {
    server,
    port,
    close: () =>
      new Promise<void>((resolve) => {
        wss.close();
        server.close(() => resolve());
      }),
  };
}

const isMain =
  process.argv[1] !== undefined &&
  fileURLToPath(import.meta.url) === path.resolve(process.argv[1]);

if (isMain) {
  const rootDir = path.resolve(path.dirname(fileURLToPath(import.meta.url)), "..");
  startBridge({
    serviceHost: argValue("--service-host", "127.0.0.1"),
    servicePort: Number(argValue("--service-port", "7141")),
    httpPort: Number(argValue("--http-port", "8080")),
    rootDir,
  }).then(({ port }) => {
    console.log(`panel on http://127.0.0.1:${port}/ (ws -> tcp bridge at /ws)`);
  });
}
