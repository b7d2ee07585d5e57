"""Minimal JSON-RPC client for the tool server."""

from __future__ import annotations

import json
import socket
from typing import Any


class RpcError(RuntimeError):
    """Error object returned by the server."""

    def __init__(self, code: int, message: str) -> None:
        super().__init__(f"RPC error {code}: {message}")
        self.code = code
        self.message = message


class RpcClient:
    """Blocking newline-delimited JSON-RPC 2.0 client."""

    def __init__(self, host: str, port: int, timeout_s: float = 10.0) -> None:
        self._socket = socket.create_connection((host, port), timeout=timeout_s)
        self._reader = self._socket.makefile("r", encoding="utf-8")
        self._next_id = 1

    def request(self, method: str, params: dict[str, Any] | None = None) -> Any:
        request_id = self._next_id
        self._next_id += 1
        frame = {
            "jsonrpc": "2.0",
            "id": request_id,
            "method": method,
            "params": params or {},
        }
        self._socket.sendall(json.dumps(frame).encode("utf-8") + b"\n")
        line = self._reader.readline()
        if not line:
            raise RpcError(-32603, "server closed the connection")
        response = json.loads(line)
        if response.get("id") != request_id:
            raise RpcError(-32603, f"response id mismatch: {response.get('id')}")
        if "error" in response:
            error = response["error"]
            raise RpcError(int(error.get("code", -32603)), error.get("message", ""))
        return response.get("result")

    def create_session(self, model_id: str = "rpc-client") -> dict[str, Any]:
        return self.request("session.create", {"model_id": model_id})

    def tool(self, name: str, **arguments: Any) -> dict[str, Any]:
        return self.request(f"tool.{name}", arguments)

    def snapshot(self) -> dict[str, Any]:
        return self.request("session.snapshot")

    def close_session(self) -> dict[str, Any]:
        return self.request("session.close")

    def close(self) -> None:
        try:
            self._reader.close()
        finally:
            self._socket.close()

    def __enter__(self) -> "RpcClient":
        return self

    def __exit__(self, *exc_info: Any) -> None:
        self.close()
