"""Deterministic XML serialization primitives.

All persistent artifacts (signed documents, sealed translations,
certificates, rule sets) share one canonical form:

* UTF-8, no XML declaration, no inter-element whitespace;
* child elements in their schema-declared order;
* attributes sorted by name, double-quoted;
* absent optional elements are omitted entirely (an empty element is a
  *present* empty value and encodes differently);
* timestamps as ISO 8601 UTC ``YYYY-MM-DDThh:mm:ssZ``;
* binary payloads as base64 without line breaks.

Because serialization is canonical, the bytes written to disk are already
the canonical bytes used as signature input.  Parsing is strict about
element order and unknown elements/attributes so that any byte-level
mutation of a canonical file is either a :class:`ParseError` or a changed
logical value.
"""

from __future__ import annotations

import base64
import binascii
import hashlib
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from datetime import datetime, timezone

from .errors import ParseError

__all__ = [
    "XmlNode",
    "el",
    "canonical_bytes",
    "parse_xml",
    "leaf_text",
    "NodeReader",
    "b64encode",
    "b64decode_strict",
    "normalize_timestamp",
    "format_timestamp",
    "parse_timestamp",
    "content_digest",
    "now_utc",
]

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")


@dataclass
class XmlNode:
    """One element: either text content or child elements, never both."""

    tag: str
    text: str = ""
    children: list["XmlNode"] = field(default_factory=list)
    attrs: dict[str, str] = field(default_factory=dict)


def el(tag: str, *children: XmlNode, text: str = "", **attrs: str) -> XmlNode:
    """Shorthand constructor used by the per-type serializers."""
    return XmlNode(tag, text=text, children=list(children), attrs=dict(attrs))


# --- escaping ---------------------------------------------------------------

def _check_text_chars(value: str, where: str) -> None:
    for ch in value:
        code = ord(ch)
        if code < 0x20 and ch not in "\t\n":
            raise ValueError(
                f"control character U+{code:04X} not representable in {where}"
            )


def _escape_text(value: str) -> str:
    _check_text_chars(value, "element text")
    return value.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _escape_attr(value: str) -> str:
    for ch in value:
        if ord(ch) < 0x20:
            raise ValueError("control characters not allowed in attribute values")
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


# --- canonical emit ---------------------------------------------------------

def canonical_bytes(node: XmlNode) -> bytes:
    out: list[str] = []
    _emit(node, out)
    return "".join(out).encode("utf-8")


def _emit(node: XmlNode, out: list[str]) -> None:
    if not _NAME_RE.match(node.tag):
        raise ValueError(f"invalid element name {node.tag!r}")
    out.append("<" + node.tag)
    for name in sorted(node.attrs):
        if not _NAME_RE.match(name):
            raise ValueError(f"invalid attribute name {name!r}")
        out.append(f' {name}="{_escape_attr(node.attrs[name])}"')
    out.append(">")
    if node.children:
        if node.text:
            raise ValueError(f"element {node.tag!r} mixes text and children")
        for child in node.children:
            _emit(child, out)
    else:
        out.append(_escape_text(node.text))
    out.append("</" + node.tag + ">")


# --- parsing ----------------------------------------------------------------

def parse_xml(data: bytes) -> XmlNode:
    """Parse bytes into an :class:`XmlNode` tree.

    Tolerates an XML declaration and whitespace-only text around child
    elements (hand-edited input); everything else must fit the
    text-or-children model.
    """
    try:
        root = ET.fromstring(data)
    except ET.ParseError as exc:
        raise ParseError(f"malformed XML: {exc}") from None
    return _from_etree(root)


def _from_etree(elem: ET.Element) -> XmlNode:
    if "}" in elem.tag:
        raise ParseError(f"unexpected namespaced element {elem.tag!r}")
    children = list(elem)
    if children:
        if elem.text and elem.text.strip():
            raise ParseError(f"mixed content in element {elem.tag!r}")
        for child in children:
            if child.tail and child.tail.strip():
                raise ParseError(f"mixed content in element {elem.tag!r}")
        return XmlNode(
            elem.tag,
            children=[_from_etree(c) for c in children],
            attrs=dict(elem.attrib),
        )
    return XmlNode(elem.tag, text=elem.text or "", attrs=dict(elem.attrib))


def leaf_text(node: XmlNode, *, path: str = "") -> str:
    """Text of an element that must not have child elements."""
    if node.children:
        where = f" at {path}" if path else ""
        raise ParseError(f"expected text content in <{node.tag}>{where}")
    return node.text


class NodeReader:
    """Strict sequential reader enforcing schema-declared element order."""

    def __init__(self, node: XmlNode, *, expect: str | None = None, path: str = ""):
        self.node = node
        self.path = path or node.tag
        if expect is not None and node.tag != expect:
            raise ParseError(f"expected element <{expect}>, found <{node.tag}> at {self.path}")
        self._children = list(node.children)
        self._pos = 0

    # attribute access ------------------------------------------------------
    def attr(self, name: str) -> str | None:
        return self.node.attrs.get(name)

    def check_attrs(self, *allowed: str) -> None:
        unknown = set(self.node.attrs) - set(allowed)
        if unknown:
            raise ParseError(
                f"unexpected attribute {sorted(unknown)[0]!r} on {self.path}"
            )

    # child access ----------------------------------------------------------
    def _peek(self) -> XmlNode | None:
        if self._pos < len(self._children):
            return self._children[self._pos]
        return None

    def take(self, tag: str) -> XmlNode:
        nxt = self._peek()
        if nxt is None or nxt.tag != tag:
            found = f"<{nxt.tag}>" if nxt is not None else "end of element"
            raise ParseError(f"expected <{tag}> in {self.path}, found {found}")
        self._pos += 1
        return nxt

    def take_optional(self, tag: str) -> XmlNode | None:
        nxt = self._peek()
        if nxt is not None and nxt.tag == tag:
            self._pos += 1
            return nxt
        return None

    def take_all(self, tag: str) -> list[XmlNode]:
        out = []
        while True:
            nxt = self._peek()
            if nxt is None or nxt.tag != tag:
                return out
            self._pos += 1
            out.append(nxt)

    def text(self, tag: str) -> str:
        return self._leaf_text(self.take(tag))

    def text_optional(self, tag: str) -> str | None:
        node = self.take_optional(tag)
        if node is None:
            return None
        return self._leaf_text(node)

    def _leaf_text(self, node: XmlNode) -> str:
        if node.children:
            raise ParseError(f"expected text content in <{node.tag}> at {self.path}")
        return node.text

    def finish(self) -> None:
        nxt = self._peek()
        if nxt is not None:
            raise ParseError(f"unexpected element <{nxt.tag}> in {self.path}")

    def child(self, tag: str) -> "NodeReader":
        return NodeReader(self.take(tag), path=f"{self.path}/{tag}")

    def child_optional(self, tag: str) -> "NodeReader | None":
        node = self.take_optional(tag)
        if node is None:
            return None
        return NodeReader(node, path=f"{self.path}/{tag}")


# --- scalar codecs ----------------------------------------------------------

def b64encode(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def b64decode_strict(text: str, *, path: str = "value") -> bytes:
    """Decode base64, rejecting non-canonical encodings.

    Re-encoding must reproduce the input exactly; this closes the gap where
    two distinct base64 strings decode to identical bytes (trailing-bit and
    padding tricks), which would otherwise defeat byte-level tamper checks.
    """
    try:
        raw = base64.b64decode(text.encode("ascii"), validate=True)
    except (ValueError, binascii.Error, UnicodeEncodeError):
        raise ParseError(f"invalid base64 in {path}") from None
    if base64.b64encode(raw).decode("ascii") != text:
        raise ParseError(f"non-canonical base64 in {path}")
    return raw


def normalize_timestamp(value: datetime) -> datetime:
    """Normalize to timezone-aware UTC with second precision.

    Naive datetimes are taken to be UTC already.
    """
    if value.tzinfo is None:
        value = value.replace(tzinfo=timezone.utc)
    return value.astimezone(timezone.utc).replace(microsecond=0)


def format_timestamp(value: datetime) -> str:
    """Render a timestamp in canonical UTC form (second precision)."""
    return normalize_timestamp(value).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_timestamp(text: str, *, path: str = "timestamp") -> datetime:
    """Parse a timestamp in the canonical wire form ``YYYY-MM-DDThh:mm:ssZ``.

    Any other spelling is rejected, even one naming the same instant
    (different separator, explicit offset, fractional seconds): accepting
    an alternative encoding would let a byte-level change slip past the
    signatures, which cover the canonical re-serialization only.
    """
    candidate = text
    if candidate.endswith("Z"):
        candidate = candidate[:-1] + "+00:00"
    try:
        value = datetime.fromisoformat(candidate)
    except ValueError:
        raise ParseError(f"invalid timestamp {text!r} in {path}") from None
    if value.tzinfo is None:
        raise ParseError(f"timestamp {text!r} in {path} lacks a UTC designator")
    value = value.astimezone(timezone.utc).replace(microsecond=0)
    if format_timestamp(value) != text:
        raise ParseError(f"non-canonical timestamp {text!r} in {path}")
    return value


def content_digest(data: bytes) -> str:
    """SHA-256 content identifier: ``sha-256:`` + lowercase hex digest."""
    return "sha-256:" + hashlib.sha256(data).hexdigest()


def now_utc() -> datetime:
    return datetime.now(timezone.utc).replace(microsecond=0)
