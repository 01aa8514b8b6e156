"""URL values, politeness scheduling, and the fetch transport abstraction.

Two transports implement the same ``fetch`` contract: :class:`LiveTransport`
speaks real HTTP, and the corpus transport in :mod:`onto_seeker.harness`
replays an in-memory corpus for deterministic tests.
"""

from __future__ import annotations

import os
import threading
import time
from dataclasses import dataclass, field
from http.cookiejar import CookiePolicy
from typing import Protocol
from urllib.parse import urljoin, urlsplit

import requests

from . import __version__
from .errors import OntoSeekerError

DEFAULT_PORTS = {"http": 80, "https": 443}
SUPPORTED_SCHEMES = frozenset(DEFAULT_PORTS)

_HOST_CHARS = frozenset("abcdefghijklmnopqrstuvwxyz0123456789._-")


class UnsupportedScheme(OntoSeekerError):
    pass


class MalformedUrl(OntoSeekerError):
    pass


class FetchError(OntoSeekerError):
    """Transport-level failure; HTTP error statuses are data, not errors."""


class Timeout(FetchError):
    pass


class ConnectionFailed(FetchError):
    pass


class TooManyRedirects(FetchError):
    pass


class BodyTooLarge(FetchError):
    pass


@dataclass(frozen=True)
class Url:
    """An absolute http(s) address with the fragment already stripped."""

    scheme: str
    host: str
    port: int
    path: str
    query: str | None = None

    @classmethod
    def parse(cls, raw: str) -> "Url":
        raw = raw.strip()
        try:
            parts = urlsplit(raw)
        except ValueError as exc:
            raise MalformedUrl(f"unparseable URL {raw!r}: {exc}") from None
        scheme = parts.scheme.lower()
        if scheme not in SUPPORTED_SCHEMES:
            raise UnsupportedScheme(f"scheme {scheme or '(none)'!r} in {raw!r}")
        if parts.username is not None or parts.password is not None:
            raise MalformedUrl(f"userinfo not allowed in {raw!r}")
        host = (parts.hostname or "").lower()
        if not host or not set(host) <= _HOST_CHARS:
            raise MalformedUrl(f"bad host in {raw!r}")
        try:
            port = parts.port
        except ValueError:
            raise MalformedUrl(f"bad port in {raw!r}") from None
        if port is None:
            port = DEFAULT_PORTS[scheme]
        path = parts.path or "/"
        if not path.startswith("/"):
            raise MalformedUrl(f"non-rooted path in {raw!r}")
        query = parts.query if "?" in raw.split("#", 1)[0] else None
        return cls(scheme=scheme, host=host, port=port, path=path, query=query)

    def __str__(self) -> str:
        port = "" if self.port == DEFAULT_PORTS[self.scheme] else f":{self.port}"
        query = "" if self.query is None else f"?{self.query}"
        return f"{self.scheme}://{self.host}{port}{self.path}{query}"


def normalize_url(base: Url, href: str) -> Url:
    """Resolve ``href`` against ``base`` into an absolute, fragment-free Url.

    Raises UnsupportedScheme for non-http(s) targets (mailto:, javascript:,
    ftp:, data:, ...) and MalformedUrl for anything urlsplit cannot stomach.
    """
    joined = urljoin(str(base), href.strip())
    return Url.parse(joined)


@dataclass(frozen=True)
class FetchResponse:
    final_url: Url
    status: int
    content_type: str | None
    body: bytes
    elapsed_ms: int


class Transport(Protocol):
    def fetch(
        self, url: Url, max_body_bytes: int, issued_at_ms: float | None = None
    ) -> FetchResponse: ...


def monotonic_ms() -> float:
    return time.monotonic() * 1000.0


@dataclass
class PolitenessGate:
    """Hands out request slots so same-host requests stay >= politeness_ms apart.

    Each acquire reserves the next free slot for the host, so concurrent
    callers each get a distinct grant time. ``per_host=False`` makes every
    request share one clock (global politeness).
    """

    politeness_ms: int
    per_host: bool = True
    _last_grant: dict[str, float] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def acquire_slot(self, host: str, now_ms: float | None = None) -> float:
        """Reserve the next slot for ``host``; returns the wait in ms (0 or more)."""
        if now_ms is None:
            now_ms = monotonic_ms()
        key = host if self.per_host else ""
        with self._lock:
            prev = self._last_grant.get(key)
            grant = now_ms if prev is None else max(now_ms, prev + self.politeness_ms)
            self._last_grant[key] = grant
        return grant - now_ms


def polite_fetch(
    transport: Transport,
    gate: PolitenessGate,
    url: Url,
    max_body_bytes: int,
) -> FetchResponse:
    """Acquire a slot for url's host, sleep it off, then fetch.

    The scheduled grant time is forwarded to the transport so corpus request
    logs record scheduler time rather than wall-clock jitter.
    """
    now = monotonic_ms()
    wait = gate.acquire_slot(url.host, now)
    if wait > 0:
        time.sleep(wait / 1000.0)
    return transport.fetch(url, max_body_bytes, issued_at_ms=now + wait)


def _strip_media_type(header: str | None) -> str | None:
    if not header:
        return None
    media = header.split(";", 1)[0].strip().lower()
    return media or None


class _RejectAllCookies(CookiePolicy):
    netscape = True
    rfc2965 = hide_cookie2 = False

    def set_ok(self, cookie, request):  # noqa: ARG002
        return False

    def return_ok(self, cookie, request):  # noqa: ARG002
        return False


class LiveTransport:
    """HTTP/1.1 transport with a fixed User-Agent, no cookies, no scripts.

    Note: robots.txt is NOT consulted (out of scope for this crawler model);
    be careful pointing this at hosts you do not control.
    """

    def __init__(
        self,
        timeout_s: float = 20.0,
        truncate_oversize: bool = True,
        user_agent: str | None = None,
        session: requests.Session | None = None,
    ):
        self.timeout_s = timeout_s
        self.truncate_oversize = truncate_oversize
        if session is None:
            session = requests.Session()
            session.cookies.set_policy(_RejectAllCookies())
        session.max_redirects = 5
        ua = user_agent or os.environ.get("ONTO_SEEKER_UA") or f"onto-seeker/{__version__}"
        session.headers["User-Agent"] = ua
        self._session = session

    def fetch(
        self, url: Url, max_body_bytes: int, issued_at_ms: float | None = None
    ) -> FetchResponse:
        start = monotonic_ms()
        try:
            resp = self._session.get(
                str(url), timeout=self.timeout_s, stream=True, allow_redirects=True
            )
        except requests.Timeout as exc:
            raise Timeout(str(url)) from exc
        except requests.TooManyRedirects as exc:
            raise TooManyRedirects(str(url)) from exc
        except requests.RequestException as exc:
            raise ConnectionFailed(f"{url}: {exc}") from exc
        with resp:
            limit = max_body_bytes if self.truncate_oversize else max_body_bytes + 1
            chunks: list[bytes] = []
            got = 0
            for chunk in resp.iter_content(chunk_size=65536):
                chunks.append(chunk)
                got += len(chunk)
                if got >= limit:
                    break
            body = b"".join(chunks)[:limit]
            if not self.truncate_oversize and len(body) > max_body_bytes:
                raise BodyTooLarge(f"{url}: body exceeds {max_body_bytes} bytes")
            try:
                final_url = Url.parse(resp.url)
            except OntoSeekerError as exc:
                raise ConnectionFailed(f"{url}: unusable final URL: {exc}") from exc
            return FetchResponse(
                final_url=final_url,
                status=resp.status_code,
                content_type=_strip_media_type(resp.headers.get("Content-Type")),
                body=body,
                elapsed_ms=int(monotonic_ms() - start),
            )
