"""Local HTTP facade for the formation editor.

Four endpoints over one persisted formation document:

- ``GET /formation``       canonical text of the stored formation
- ``PUT /formation``       validate and persist (422 with a line number on
                           parse errors); ``?scratch=1`` stores an
                           ephemeral working copy instead
- ``GET /interpolate``     ``?x=&y=`` -> containing triangle + 11 positions
- ``GET /triangulation``   vertices and triangle index triples

Responses are plain text and deterministic functions of the stored
document.  A single lock serializes writers; readers always see a
complete document.  Development tool: binds to loopback, no auth.
"""
from __future__ import annotations

import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from typing import Optional
from urllib.parse import parse_qs, urlparse

from .formation import (
    Formation,
    FormationError,
    fmt_num,
    interpolate_positions,
    parse_formation,
    serialize_formation,
)
from .geom import Vec2, locate_and_barycentric


class FormationStore:
    """The single mutable document behind the service."""

    def __init__(self, path: str | Path, initial_text: Optional[str] = None):
        self.path = Path(path)
        self._lock = threading.Lock()
        if self.path.exists():
            text = self.path.read_text(encoding="utf-8")
        elif initial_text is not None:
            text = initial_text
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.write_text(text, encoding="utf-8")
        else:
            raise FileNotFoundError(self.path)
        self._formation = parse_formation(text)
        self._scratch: Optional[Formation] = None

    def get(self, scratch: bool = False) -> Formation:
        with self._lock:
            if scratch and self._scratch is not None:
                return self._scratch
            return self._formation

    def put(self, text: str, scratch: bool = False) -> Formation:
        formation = parse_formation(text)  # validate outside the lock
        with self._lock:
            if scratch:
                self._scratch = formation
            else:
                self._formation = formation
                self._scratch = None
                tmp = self.path.with_suffix(".tmp")
                tmp.write_text(serialize_formation(formation), encoding="utf-8")
                tmp.replace(self.path)
        return formation


def render_triangulation(formation: Formation) -> str:
    tri = formation.triangulation
    out = [f"vertices {len(tri.vertices)}"]
    for v in tri.vertices:
        out.append(f"{fmt_num(v.x)} {fmt_num(v.y)}")
    out.append(f"triangles {len(tri.triangles)}")
    for a, b, c in tri.triangles:
        out.append(f"{a} {b} {c}")
    return "\n".join(out) + "\n"


def render_interpolation(formation: Formation, ball: Vec2) -> str:
    loc = locate_and_barycentric(formation.triangulation, ball)
    tri_index = loc.triangle_index if loc.triangle_index is not None else -1
    out = [f"triangle {tri_index}"]
    for unum, p in enumerate(interpolate_positions(formation, ball), 1):
        out.append(f"{unum} {p.x:.6f} {p.y:.6f}")
    return "\n".join(out) + "\n"


class _Handler(BaseHTTPRequestHandler):
    store: FormationStore  # injected by make_server

    def _send(self, code: int, body: str) -> None:
        data = body.encode("utf-8")
        self.send_response(code)
        self.send_header("Content-Type", "text/plain; charset=utf-8")
        self.send_header("Content-Length", str(len(data)))
        self.send_header("Access-Control-Allow-Origin", "*")
        self.send_header("Access-Control-Allow-Methods", "GET, PUT, OPTIONS")
        self.send_header("Access-Control-Allow-Headers", "Content-Type")
        self.end_headers()
        self.wfile.write(data)

    def log_message(self, *args) -> None:  # quiet by default
        pass

    def do_OPTIONS(self) -> None:
        self._send(204, "")

    def do_GET(self) -> None:
        url = urlparse(self.path)
        query = parse_qs(url.query)
        scratch = query.get("scratch", ["0"])[0] == "1"
        if url.path == "/formation":
            self._send(200, serialize_formation(self.store.get(scratch)))
        elif url.path == "/triangulation":
            self._send(200, render_triangulation(self.store.get(scratch)))
        elif url.path == "/interpolate":
            try:
                x = float(query["x"][0])
                y = float(query["y"][0])
            except (KeyError, ValueError, IndexError):
                self._send(400, "expected numeric query parameters x and y\n")
                return
            self._send(200, render_interpolation(self.store.get(scratch), Vec2(x, y)))
        else:
            self._send(404, "unknown endpoint\n")

    def do_PUT(self) -> None:
        url = urlparse(self.path)
        if url.path != "/formation":
            self._send(404, "unknown endpoint\n")
            return
        query = parse_qs(url.query)
        scratch = query.get("scratch", ["0"])[0] == "1"
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            self._send(400, "bad Content-Length\n")
            return
        if length <= 0 or length > 4_000_000:
            self._send(400, "missing or oversized body\n")
            return
        text = self.rfile.read(length).decode("utf-8", errors="replace")
        try:
            self.store.put(text, scratch)
        except FormationError as exc:
            self._send(422, f"{exc}\n")
            return
        self._send(200, "ok\n")


def make_server(store: FormationStore, host: str = "127.0.0.1", port: int = 0) -> ThreadingHTTPServer:
    handler = type("BoundHandler", (_Handler,), {"store": store})
    return ThreadingHTTPServer((host, port), handler)


def serve_editor(store: FormationStore, host: str = "127.0.0.1", port: int = 8723) -> None:
    """Blocking entry point used by the CLI."""
    server = make_server(store, host, port)
    print(f"formation editor service on http://{host}:{server.server_address[1]}")
    print(f"document: {store.path}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
