"""Parser for monthly AOSP security-bulletin captures."""

from __future__ import annotations

import re

from ..domain import AospBulletin, CveId, DomainError, validate_cve
from ..htmlutil import parse_html
from ..serialize import parse_date
from .base import ParseError, SourceDocument

# Bulletins state their level as e.g. "Security patch levels of 2023-09-01 or
# later address all of these issues."
_SPL_SENTENCE = re.compile(
    r"security patch levels? of (\d{4}-\d{2}-\d{2})", re.IGNORECASE
)
_CVE_TOKEN = re.compile(r"CVE-\d{4}-\d{4,}", re.IGNORECASE)


def parse_aosp_bulletin(doc: SourceDocument) -> AospBulletin:
    root = parse_html(doc.body)
    text = root.text()

    m = _SPL_SENTENCE.search(text)
    if m is None:
        raise ParseError("bulletin does not state a security patch level")
    spl = parse_date(m.group(1))

    cves: set[CveId] = set()
    for token in _CVE_TOKEN.findall(text):
        try:
            cves.add(validate_cve(token))
        except DomainError as exc:
            raise ParseError(f"implausible CVE {token!r}: {exc}") from exc

    try:
        return AospBulletin(spl_date=spl, cves=frozenset(cves))
    except DomainError as exc:
        raise ParseError(str(exc)) from exc
