/** Browser entry: connect through the bridge's WebSocket and mount the panel. */

import { Panel } from "./panel.js";
import { PanelDom } from "./dom.js";
import { WebSocketWire } from "./connection.js";

function start(): void {
  const root = document.getElementById("panel");
  if (!root) throw new Error("missing #panel element");
  const panel = new Panel();
  new PanelDom(root, panel);
  const ws = new WebSocket(`ws://${location.host}/ws`);
  const wire = new WebSocketWire(ws, {
    onLine: (line) => panel.handleLine(line),
    onClose: () => panel.handleClose(),
  });
  ws.onopen = () => panel.attach(wire);
}

start();
