"""Export parsing, PII scrubbing, thread reconciliation, and document rendering."""

from corpusqa.ingest.htmltext import extract_page_parts, strip_html
from corpusqa.ingest.pii import PiiRoster, scrub_pii
from corpusqa.ingest.remote import SourceSpec, fetch_remote
from corpusqa.ingest.tables import (
    MESSAGE_EXPORT_COLUMNS,
    REPLY_EXPORT_COLUMNS,
    ParsedTable,
    RawTeamsMessage,
    RawTeamsReply,
    RowError,
    parse_messages_table,
    parse_replies_table,
)
from corpusqa.ingest.threads import (
    PageDocument,
    ThreadDocument,
    load_pages,
    reconcile_threads,
    render_page,
    render_thread,
)

__all__ = [
    "MESSAGE_EXPORT_COLUMNS",
    "REPLY_EXPORT_COLUMNS",
    "PageDocument",
    "ParsedTable",
    "PiiRoster",
    "RawTeamsMessage",
    "RawTeamsReply",
    "RowError",
    "SourceSpec",
    "ThreadDocument",
    "extract_page_parts",
    "fetch_remote",
    "load_pages",
    "parse_messages_table",
    "parse_replies_table",
    "reconcile_threads",
    "render_page",
    "render_thread",
    "scrub_pii",
    "strip_html",
]
