"""Live service mode: the simulation loop behind a local NDJSON socket.

One connection speaks newline-delimited JSON in both directions. The server
pushes a ``snapshot`` message per world tick (world state, per-sensor
readings and novelty reports, synapse efficacies); clients send ``command``
messages (light edits, forgetting toggle, reset) that are applied at the
next tick boundary and answered with exactly one ``ack`` or ``error``.
Malformed input earns an ``error`` reply and never disturbs the simulation.
"""

from __future__ import annotations

import json
import queue
import socket
import threading

from . import arena
from .harness import Engine, SimConfig

PROTOCOL_VERSION = 1


def _parse_light(doc: dict) -> arena.LightSource:
    pattern = arena.pattern_from_snapshot(doc.get("pattern", {"variant": "constant"}))
    return arena.LightSource(
        id=str(doc["id"]),
        bearing=float(doc["bearing"]),
        intensity=float(doc.get("intensity", 1.0)),
        pattern=pattern,
    )


class Service:
    """Tick driver plus connection handling for the control-panel protocol."""

    def __init__(
        self,
        config: SimConfig | None = None,
        host: str = "127.0.0.1",
        port: int = 0,
        ms_per_tick: float = 50.0,
    ):
        self.config = config if config is not None else SimConfig()
        self.engine = Engine(self.config)
        self.ms_per_tick = ms_per_tick
        self._commands: queue.Queue = queue.Queue()
        self._clients: list[socket.socket] = []
        self._clients_lock = threading.Lock()
        self._stop = threading.Event()
        self._server = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
        self._server.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        self._server.bind((host, port))
        self._server.listen()
        self.address = self._server.getsockname()
        self._threads: list[threading.Thread] = []

    # -- lifecycle ----------------------------------------------------------

    def start(self) -> None:
        for target in (self._accept_loop, self._tick_loop):
            thread = threading.Thread(target=target, daemon=True)
            thread.start()
            self._threads.append(thread)

    def stop(self) -> None:
        self._stop.set()
        try:
            self._server.close()
        except OSError:
            pass
        with self._clients_lock:
            for client in self._clients:
                try:
                    client.close()
                except OSError:
                    pass
            self._clients.clear()
        for thread in self._threads:
            thread.join(timeout=2.0)

    def run_forever(self) -> None:
        self.start()
        try:
            while not self._stop.is_set():
                self._stop.wait(0.2)
        except KeyboardInterrupt:
            pass
        finally:
            self.stop()

    # -- connection handling --------------------------------------------------

    def _accept_loop(self) -> None:
        while not self._stop.is_set():
            try:
                client, _ = self._server.accept()
            except OSError:
                return
            with self._clients_lock:
                self._clients.append(client)
            reader = threading.Thread(
                target=self._read_loop, args=(client,), daemon=True
            )
            reader.start()
            self._threads.append(reader)

    def _read_loop(self, client: socket.socket) -> None:
        buffer = b""
        while not self._stop.is_set():
            try:
                chunk = client.recv(4096)
            except OSError:
                return
            if not chunk:
                return
            buffer += chunk
            while b"\n" in buffer:
                line, buffer = buffer.split(b"\n", 1)
                if line.strip():
                    self._enqueue(client, line)

    def _enqueue(self, client: socket.socket, line: bytes) -> None:
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as exc:
            self._send(client, {"type": "error", "id": None, "message": f"bad JSON: {exc}"})
            return
        if not isinstance(doc, dict) or doc.get("type") != "command":
            self._send(
                client,
                {"type": "error", "id": None, "message": "expected a command message"},
            )
            return
        self._commands.put((client, doc))

    def _send(self, client: socket.socket, doc: dict) -> bool:
        try:
            client.sendall((json.dumps(doc) + "\n").encode())
            return True
        except OSError:
            with self._clients_lock:
                if client in self._clients:
                    self._clients.remove(client)
            return False

    def _broadcast(self, doc: dict) -> None:
        with self._clients_lock:
            targets = list(self._clients)
        for client in targets:
            self._send(client, doc)

    # -- simulation loop ------------------------------------------------------

    def _apply_command(self, doc: dict) -> None:
        # "id" correlates the reply; light references travel in "light"
        # (full definition) or "light_id"
        action = doc.get("action")
        engine = self.engine
        if action == "add_light":
            event = arena.WorldEvent(action="add_light", light=_parse_light(doc["light"]))
            engine.world = arena.apply_event(engine.world, event)
        elif action == "remove_light":
            event = arena.WorldEvent(action="remove_light", light_id=str(doc["light_id"]))
            engine.world = arena.apply_event(engine.world, event)
        elif action == "set_active":
            event = arena.WorldEvent(
                action="set_active",
                light_id=str(doc["light_id"]),
                active=bool(doc["active"]),
            )
            engine.world = arena.apply_event(engine.world, event)
        elif action == "set_pattern":
            event = arena.WorldEvent(
                action="set_pattern",
                light_id=str(doc["light_id"]),
                pattern=arena.pattern_from_snapshot(doc["pattern"]),
            )
            engine.world = arena.apply_event(engine.world, event)
        elif action == "set_forgetting":
            engine.set_forgetting(bool(doc["forgetting"]))
        elif action == "reset":
            engine.reset()
        else:
            raise ValueError(f"unknown action {action!r}")

    def _drain_commands(self) -> None:
        while True:
            try:
                client, doc = self._commands.get_nowait()
            except queue.Empty:
                return
            reply = {"type": "ack", "id": doc.get("id")}
            try:
                self._apply_command(doc)
            except (KeyError, ValueError, TypeError) as exc:
                reply = {"type": "error", "id": doc.get("id"), "message": str(exc)}
            self._send(client, reply)

    def _snapshot_message(self, record: dict) -> dict:
        world = self.engine.world
        return {
            "type": "snapshot",
            "version": PROTOCOL_VERSION,
            "tick": record["tick"],
            "heading": record["heading_after"],
            "lights": arena.world_snapshot(world)["lights"],
            "readings": record["readings"],
            "reports": record["reports"],
            "decision": record["decision"],
            "efficacies": [f.efficacies() for f in self.engine.filters],
            "forgetting": self.engine.config.forgetting,
        }

    def _tick_loop(self) -> None:
        while not self._stop.is_set():
            self._drain_commands()
            before = len(self.engine.records)
            self.engine.step()
            for record in self.engine.records[before:]:
                self._broadcast(self._snapshot_message(record))
            # keep memory bounded on long-running sessions
            if len(self.engine.records) > 10_000:
                del self.engine.records[:-1_000]
            if self.ms_per_tick > 0:
                self._stop.wait(self.ms_per_tick / 1000.0)


def serve(
    config: SimConfig | None = None,
    host: str = "127.0.0.1",
    port: int = 7141,
    ms_per_tick: float = 50.0,
) -> Service:
    """Construct and start a service; caller owns stop()."""
    service = Service(config=config, host=host, port=port, ms_per_tick=ms_per_tick)
    service.start()
    return service
