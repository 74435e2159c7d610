"""Thread reconciliation and plain-text document rendering."""

import json
from dataclasses import dataclass
from pathlib import Path

from corpusqa.ingest.htmltext import extract_page_parts, strip_html
from corpusqa.ingest.pii import PiiRoster, scrub_pii
from corpusqa.ingest.tables import RawTeamsMessage, RawTeamsReply

MESSAGE_PREFIX = "Message: "
RESPONSES_PREFIX = "This message has the following responses:"
PAGE_TITLE_PREFIX = "Page Title: "
PAGE_CONTENT_PREFIX = "The content of this page is as follows:"


@dataclass(frozen=True)
class ThreadDocument:
    """A scrubbed message with its replies in posting order."""

    message: str
    replies: tuple[str, ...]
    source_id: str
    channel_id: str


@dataclass(frozen=True)
class PageDocument:
    title: str
    body: str
    source_id: str


def _clean(html: str, roster: PiiRoster) -> str:
    return scrub_pii(strip_html(html), roster)


def reconcile_threads(
    messages: list[RawTeamsMessage],
    replies: list[RawTeamsReply],
    roster: PiiRoster,
) -> tuple[list[ThreadDocument], list[str]]:
    """Attach each reply to its parent message, chronologically.

    Replies whose parent is not in the message set are returned as orphan
    ids rather than dropped; losing them silently would skew any later
    retrieval analysis.
    """
    by_parent: dict[str, list[RawTeamsReply]] = {}
    message_ids = {m.id for m in messages}
    orphans: list[str] = []
    for reply in replies:
        if reply.parent_id in message_ids:
            by_parent.setdefault(reply.parent_id, []).append(reply)
        else:
            orphans.append(reply.id)

    threads: list[ThreadDocument] = []
    for message in messages:
        attached = sorted(by_parent.get(message.id, []), key=lambda r: r.created)
        threads.append(
            ThreadDocument(
                message=_clean(message.content, roster),
                replies=tuple(_clean(r.content, roster) for r in attached),
                source_id=message.id,
                channel_id=message.channel_id,
            )
        )
    return threads, orphans


def render_thread(thread: ThreadDocument) -> str:
    """Render a thread; the responses block is omitted when there are none."""
    parts = [MESSAGE_PREFIX + thread.message]
    if thread.replies:
        parts.append(RESPONSES_PREFIX)
        parts.extend(thread.replies)
    return "\n".join(parts)


def render_page(page: PageDocument) -> str:
    return f"{PAGE_TITLE_PREFIX}{page.title}\n{PAGE_CONTENT_PREFIX}\n{page.body}"


def load_pages(path: str | Path, roster: PiiRoster) -> list[PageDocument]:
    """Load wiki pages from a directory of .html files or a JSON array.

    JSON form: ``[{"title": ..., "html": ..., "id": ...}, ...]``.
    """
    path = Path(path)
    pages: list[PageDocument] = []
    if path.is_dir():
        for file in sorted(path.glob("*.html")):
            title, body = extract_page_parts(file.read_text(encoding="utf-8"))
            pages.append(
                PageDocument(
                    title=scrub_pii(title, roster) or file.stem,
                    body=scrub_pii(body, roster),
                    source_id=file.stem,
                )
            )
    else:
        entries = json.loads(path.read_text(encoding="utf-8"))
        for i, entry in enumerate(entries):
            pages.append(
                PageDocument(
                    title=scrub_pii(str(entry["title"]), roster),
                    body=scrub_pii(strip_html(entry["html"]), roster),
                    source_id=str(entry.get("id", f"page-{i}")),
                )
            )
    return pages
