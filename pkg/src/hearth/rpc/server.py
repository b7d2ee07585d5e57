"""JSON-RPC 2.0 access to the tool interface, for external agents.

Frames are newline-delimited JSON over TCP (or stdio for subprocess
embedding). Each connection owns at most one session: a private world
built from the server's scenario plus private memory handles. Tool
failures travel as successful RPC responses carrying status=failure;
RPC-level errors are reserved for transport problems such as unknown
methods or malformed params. Ground-truth snapshots are withheld unless
the server was started with expose_ground_truth, so a remote agent
cannot peek at the world state it is supposed to discover.
"""

from __future__ import annotations

import json
import socketserver
import threading
from typing import Any, TextIO

from ..memory.episodic import EpisodicStore
from ..memory.scratchpad import Scratchpad
from ..tools.dispatch import MemoryHandles, ToolCall, dispatch
from ..tools.schemas import TOOL_SCHEMAS
from ..world.scenario import load_scenario
from ..world.state import WorldState, snapshot

PARSE_ERROR = -32700
INVALID_REQUEST = -32600
METHOD_NOT_FOUND = -32601
INVALID_PARAMS = -32602
INTERNAL_ERROR = -32603
APP_ERROR = -32000

_session_counter = 0
_session_lock = threading.Lock()


def _next_session_id() -> str:
    global _session_counter
    with _session_lock:
        _session_counter += 1
        return f"sess-{_session_counter:04d}"


class _RpcFault(Exception):
    def __init__(self, code: int, message: str) -> None:
        super().__init__(message)
        self.code = code
        self.message = message


class RpcConnection:
    """Per-connection protocol state: one optional session, a call log."""

    def __init__(self, scenario_data: dict[str, Any], expose_ground_truth: bool) -> None:
        self._scenario_data = scenario_data
        self._expose_ground_truth = expose_ground_truth
        self.session_id: str | None = None
        self.world: WorldState | None = None
        self.handles: MemoryHandles | None = None
        self.call_log: list[tuple[str, str]] = []

    def handle_line(self, line: str) -> str | None:
        """Process one frame; returns the response frame, or None for
        notifications."""
        try:
            payload = json.loads(line)
        except json.JSONDecodeError as exc:
            return self._encode_error(None, PARSE_ERROR, f"parse error: {exc}")
        if not isinstance(payload, dict):
            return self._encode_error(None, INVALID_REQUEST, "request must be an object")
        request_id = payload.get("id")
        if payload.get("jsonrpc") != "2.0":
            return self._encode_error(
                request_id, INVALID_REQUEST, "jsonrpc must be '2.0'"
            )
        method = payload.get("method")
        if not isinstance(method, str):
            return self._encode_error(
                request_id, INVALID_REQUEST, "method must be a string"
            )
        params = payload.get("params", {})
        try:
            result = self._route(method, params)
        except _RpcFault as fault:
            return self._encode_error(request_id, fault.code, fault.message)
        except Exception as exc:  # noqa: BLE001 - the frame must be answered
            return self._encode_error(
                request_id, INTERNAL_ERROR, f"internal error: {exc}"
            )
        if "id" not in payload:
            return None
        return json.dumps(
            {"jsonrpc": "2.0", "id": request_id, "result": result}, sort_keys=True
        )

    @staticmethod
    def _encode_error(request_id: Any, code: int, message: str) -> str:
        return json.dumps(
            {
                "jsonrpc": "2.0",
                "id": request_id,
                "error": {"code": code, "message": message},
            },
            sort_keys=True,
        )

    def _require_session(self) -> tuple[WorldState, MemoryHandles]:
        if self.world is None or self.handles is None:
            raise _RpcFault(APP_ERROR, "no session; call session.create first")
        return self.world, self.handles

    def _route(self, method: str, params: Any) -> Any:
        if params is None:
            params = {}
        if not isinstance(params, dict):
            raise _RpcFault(INVALID_PARAMS, "params must be an object")
        if method == "session.create":
            return self._session_create(params)
        if method == "session.snapshot":
            return self._session_snapshot()
        if method == "session.close":
            return self._session_close()
        if method.startswith("tool."):
            return self._tool_call(method[len("tool."):], params)
        raise _RpcFault(METHOD_NOT_FOUND, f"unknown method '{method}'")

    def _session_create(self, params: dict[str, Any]) -> dict[str, Any]:
        if self.session_id is not None:
            raise _RpcFault(APP_ERROR, "this connection already owns a session")
        model_id = params.get("model_id", "rpc-client")
        if not isinstance(model_id, str):
            raise _RpcFault(INVALID_PARAMS, "model_id must be a string")
        self.session_id = _next_session_id()
        self.world = load_scenario(self._scenario_data)
        self.handles = MemoryHandles(
            scratchpad=Scratchpad(), store=EpisodicStore(), model_id=model_id
        )
        return {"session_id": self.session_id, "tools": sorted(TOOL_SCHEMAS)}

    def _session_snapshot(self) -> dict[str, Any]:
        world, _ = self._require_session()
        if not self._expose_ground_truth:
            raise _RpcFault(
                APP_ERROR,
                "ground truth is not exposed; start the server with "
                "--expose-ground-truth",
            )
        return snapshot(world)

    def _session_close(self) -> dict[str, Any]:
        self._require_session()
        closed = self.session_id
        self.session_id = None
        self.world = None
        self.handles = None
        return {"closed": closed}

    def _tool_call(self, name: str, params: dict[str, Any]) -> dict[str, Any]:
        if name not in TOOL_SCHEMAS:
            raise _RpcFault(METHOD_NOT_FOUND, f"unknown method 'tool.{name}'")
        world, handles = self._require_session()
        result = dispatch(
            ToolCall(name, params, call_index=len(self.call_log)), world, handles
        )
        self.call_log.append((name, result.status))
        return result.to_dict()


class _Handler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        server: ToolRpcServer = self.server  # type: ignore[assignment]
        connection = RpcConnection(server.scenario_data, server.expose_ground_truth)
        while True:
            raw = self.rfile.readline()
            if not raw:
                break
            line = raw.decode("utf-8").strip()
            if not line:
                continue
            response = connection.handle_line(line)
            if response is not None:
                self.wfile.write(response.encode("utf-8") + b"\n")
                self.wfile.flush()


class ToolRpcServer(socketserver.ThreadingTCPServer):
    """Threaded TCP server; pass port 0 to bind an ephemeral port."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(
        self,
        address: tuple[str, int],
        scenario_data: dict[str, Any],
        expose_ground_truth: bool = False,
    ) -> None:
        super().__init__(address, _Handler)
        self.scenario_data = scenario_data
        self.expose_ground_truth = expose_ground_truth

    @property
    def port(self) -> int:
        return self.server_address[1]


def serve_stdio(
    scenario_data: dict[str, Any],
    expose_ground_truth: bool = False,
    stdin: TextIO | None = None,
    stdout: TextIO | None = None,
) -> None:
    """Serve one implicit connection over stdin/stdout."""
    import sys

    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    connection = RpcConnection(scenario_data, expose_ground_truth)
    for line in stdin:
        line = line.strip()
        if not line:
            continue
        response = connection.handle_line(line)
        if response is not None:
            stdout.write(response + "\n")
            stdout.flush()
