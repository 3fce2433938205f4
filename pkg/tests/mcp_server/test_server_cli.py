from __future__ import annotations

import sys
from typing import Any

from pdim_lab.mcp_server import server


def test_main_http_defaults_to_localhost(monkeypatch: Any) -> None:
    monkeypatch.setattr(sys, "argv", ["pdim-lab-mcp", "--transport", "http"])
    monkeypatch.delenv("FORWARDED_ALLOW_IPS", raising=False)

    calls: list[dict[str, Any]] = []

    def _fake_uvicorn_run(app: Any, **kwargs: Any) -> None:
        calls.append(kwargs)

    monkeypatch.setattr("uvicorn.run", _fake_uvicorn_run)

    server.main()

    assert server.mcp.settings.host == "127.0.0.1"
    assert server.mcp.settings.port == 8000
    assert calls == [
        {
            "host": "127.0.0.1",
            "port": 8000,
            "proxy_headers": True,
            "forwarded_allow_ips": "127.0.0.1",
        }
    ]


def test_main_http_honours_forwarded_ips(monkeypatch: Any) -> None:
    monkeypatch.setattr(
        sys, "argv", ["pdim-lab-mcp", "--transport", "http", "--host", "0.0.0.0", "--port", "9100"]
    )
    monkeypatch.setenv("FORWARDED_ALLOW_IPS", "*")

    calls: list[dict[str, Any]] = []
    monkeypatch.setattr("uvicorn.run", lambda app, **kwargs: calls.append(kwargs))

    server.main()

    assert calls[0]["host"] == "0.0.0.0"
    assert calls[0]["port"] == 9100
    assert calls[0]["forwarded_allow_ips"] == "*"


def test_main_stdio_runs_server(monkeypatch: Any) -> None:
    monkeypatch.setattr(sys, "argv", ["pdim-lab-mcp"])
    runs: list[bool] = []
    monkeypatch.setattr(server.mcp, "run", lambda: runs.append(True))

    server.main()

    assert runs == [True]


def test_list_specs() -> None:
    result = server.list_specs()
    assert "zd:<d>" in result["group"]
    assert "poly:<s>,<R>" in result["measure"]
