import http.server
import threading
from dataclasses import dataclass, field

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@dataclass
class Route:
    status: int = 200
    body: bytes = b""
    headers: dict = field(default_factory=lambda: {"Content-Type": "text/html; charset=utf-8"})


class StubServer:
    """Local HTTP server with programmable routes, counting requests per path."""

    def __init__(self):
        self.routes: dict[str, Route] = {}
        self.hits: dict[str, int] = {}
        stub = self

        class Handler(http.server.BaseHTTPRequestHandler):
            def do_GET(self):
                stub.hits[self.path] = stub.hits.get(self.path, 0) + 1
                route = stub.routes.get(self.path, Route(404, b"not found"))
                self.send_response(route.status)
                for k, v in route.headers.items():
                    self.send_header(k, v)
                self.send_header("Content-Length", str(len(route.body)))
                self.end_headers()
                self.wfile.write(route.body)

            def log_message(self, *args):
                pass

        self.httpd = http.server.ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.httpd.serve_forever, daemon=True)

    @property
    def base(self) -> str:
        return f"http://127.0.0.1:{self.httpd.server_address[1]}"

    def url(self, path: str) -> str:
        return self.base + path

    def page(self, path: str, html: str, status: int = 200) -> str:
        self.routes[path] = Route(status, html.encode("utf-8"))
        return self.url(path)

    def redirect(self, path: str, target: str, status: int = 302) -> str:
        self.routes[path] = Route(status, b"", {"Location": target})
        return self.url(path)


@pytest.fixture
def stub_server():
    s = StubServer()
    s.thread.start()
    yield s
    s.httpd.shutdown()
    s.httpd.server_close()


# ---------------------------------------------------------------- acceptance summary

_CRITERIA: dict[int, tuple[str, str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.fixture
def measured(request):
    """Dict a criterion test fills with the numbers it checked."""
    values: dict = {}
    request.node._measured = values
    return values


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.skipped):
        return
    number, title = mark.args
    status = "SKIP" if rep.skipped else ("PASS" if rep.passed else "FAIL")
    detail = ", ".join(f"{k}={v}" for k, v in getattr(item, "_measured", {}).items())
    _CRITERIA[number] = (status, title, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        status, title, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:>2} {status}  {title}" + (f"  [{detail}]" if detail else ""))
