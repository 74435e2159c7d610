"""Best-effort HTML to plain-text conversion.

Built on the stdlib parser so malformed markup never raises: unknown tags
are dropped, block-level tags become line breaks, and character references
are decoded exactly once.
"""

import re
from html.parser import HTMLParser

# Tags whose boundaries translate to a newline in the text output.
_BLOCK_OPEN = {"p", "div", "br", "li", "tr", "ul", "ol", "table", "h1", "h2", "h3", "h4", "h5", "h6", "pre", "blockquote"}
_BLOCK_CLOSE = _BLOCK_OPEN - {"br"}

# Content of these tags never belongs in the text.
_SUPPRESSED = {"script", "style"}

_EXCESS_NEWLINES = re.compile(r"\n{3,}")


class _TextExtractor(HTMLParser):
    """Adjacent block edges merge into one line break; <br> breaks eagerly."""

    def __init__(self) -> None:
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self.title_parts: list[str] = []
        self._suppress_depth = 0
        self._in_title = False
        self._pending_break = False

    def handle_starttag(self, tag, attrs):
        if tag in _SUPPRESSED:
            self._suppress_depth += 1
        elif tag == "title":
            self._in_title = True
        elif tag == "br":
            self.parts.append("\n")
        elif tag in _BLOCK_OPEN:
            self._pending_break = True

    def handle_endtag(self, tag):
        if tag in _SUPPRESSED:
            self._suppress_depth = max(0, self._suppress_depth - 1)
        elif tag == "title":
            self._in_title = False
        elif tag in _BLOCK_CLOSE:
            self._pending_break = True

    def handle_data(self, data):
        if self._suppress_depth:
            return
        if self._in_title:
            self.title_parts.append(data)
            return
        if self._pending_break:
            if not data.strip():
                return  # layout whitespace between blocks
            if self.parts:
                self.parts.append("\n")
            self._pending_break = False
        self.parts.append(data)


def _tidy(raw: str) -> str:
    # Whitespace-only lines are layout artifacts, not content.
    lines = [line.rstrip() for line in raw.split("\n")]
    text = "\n".join(lines)
    text = _EXCESS_NEWLINES.sub("\n\n", text)
    return text.strip()


def strip_html(html: str) -> str:
    """Remove markup, turning block-tag boundaries into newlines."""
    extractor = _TextExtractor()
    extractor.feed(html)
    extractor.close()
    return _tidy("".join(extractor.parts))


def extract_page_parts(html: str) -> tuple[str, str]:
    """Split an HTML page into (title, body text).

    The title comes from the <title> element when present and is excluded
    from the body; callers fall back to an external name otherwise.
    """
    extractor = _TextExtractor()
    extractor.feed(html)
    extractor.close()
    title = " ".join("".join(extractor.title_parts).split())
    return title, _tidy("".join(extractor.parts))
