"""Minimal HTML document model for label-anchored extraction of recorded pages.

Built on html.parser from the standard library; just enough tree to walk
tables and headings in the bulletin captures we ingest.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from html.parser import HTMLParser

_VOID_TAGS = frozenset(
    {"br", "hr", "img", "meta", "link", "input", "col", "area", "base", "embed", "wbr"}
)

# Elements whose open tag implicitly closes a same-level predecessor.
_AUTOCLOSE = {
    "td": {"td", "th"},
    "th": {"td", "th"},
    "tr": {"tr", "td", "th"},
    "li": {"li"},
    "p": {"p"},
}


@dataclass
class Element:
    tag: str
    attrs: dict[str, str] = field(default_factory=dict)
    children: list["Element | str"] = field(default_factory=list)

    def text(self) -> str:
        """Concatenated descendant text with whitespace collapsed."""
        parts: list[str] = []
        for child in self.children:
            parts.append(child.text() if isinstance(child, Element) else child)
        return re.sub(r"\s+", " ", "".join(parts)).strip()

    def find_all(self, tag: str) -> list["Element"]:
        found: list[Element] = []
        for child in self.children:
            if isinstance(child, Element):
                if child.tag == tag:
                    found.append(child)
                found.extend(child.find_all(tag))
        return found

    def find(self, tag: str) -> "Element | None":
        matches = self.find_all(tag)
        return matches[0] if matches else None


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = Element("document")
        self.stack = [self.root]

    def handle_starttag(self, tag, attrs):
        if tag in _VOID_TAGS:
            self.stack[-1].children.append(Element(tag, dict(attrs)))
            return
        closes = _AUTOCLOSE.get(tag, set())
        while len(self.stack) > 1 and self.stack[-1].tag in closes:
            self.stack.pop()
        element = Element(tag, dict(attrs))
        self.stack[-1].children.append(element)
        self.stack.append(element)

    def handle_endtag(self, tag):
        for i in range(len(self.stack) - 1, 0, -1):
            if self.stack[i].tag == tag:
                del self.stack[i:]
                return

    def handle_data(self, data):
        if data:
            self.stack[-1].children.append(data)


def parse_html(body: str) -> Element:
    builder = _TreeBuilder()
    builder.feed(body)
    builder.close()
    return builder.root


def table_rows(table: Element) -> list[list[str]]:
    """Cell texts per row, header cells included."""
    rows = []
    for tr in table.find_all("tr"):
        cells = [c.text() for c in tr.children if isinstance(c, Element) and c.tag in ("td", "th")]
        if cells:
            rows.append(cells)
    return rows
