"""CSV export parsing for chat messages and replies.

Exports come from the standard Microsoft Teams message dump: one table for
top-level messages (35 columns) and one for replies (43 columns). Only a
handful of columns are promoted to named fields; everything else rides along
in ``extras`` untouched.
"""

import csv
import io
from dataclasses import dataclass, field
from datetime import datetime

from corpusqa.errors import SchemaError

# Full column set of a conforming Microsoft Teams message export.
MESSAGE_EXPORT_COLUMNS = (
    "id",
    "etag",
    "messageType",
    "createdDateTime",
    "lastModifiedDateTime",
    "lastEditedDateTime",
    "importance",
    "locale",
    "webUrl",
    "attachments",
    "mentions",
    "reactions",
    "from.user.@odata.type",
    "userId",
    "userDisplayName",
    "userIdentityType",
    "tenantId",
    "contentType",
    "content",
    "channelIdentity.teamId",
    "channelIdentity.channelId",
    "subject",
    "deletedDateTime",
    "eventDetail.@odata.type",
    "eventDetail.channelId",
    "eventDetail.channelDescription",
    "eventDetail.initiator.application",
    "eventDetail.initiator.device",
    "eventDetail.initiator.user.@odata.type",
    "eventDetail.initiator.user.id",
    "eventDetail.initiator.user.displayName",
    "eventDetail.initiator.user.userIdentityType",
    "eventDetail.channelDisplayName",
    "eventDetail.visibleHistoryStartDateTime",
    "eventDetail.members",
)

# Full column set of a conforming Microsoft Teams reply export.
REPLY_EXPORT_COLUMNS = (
    "id",
    "replyToId",
    "etag",
    "messageType",
    "createdDateTime",
    "lastModifiedDateTime",
    "lastEditedDateTime",
    "deletedDateTime",
    "subject",
    "summary",
    "chatId",
    "importance",
    "locale",
    "webUrl",
    "onBehalfOf",
    "policyViolation",
    "eventDetail",
    "attachments",
    "mentions",
    "reactions",
    "from.application",
    "from.device",
    "from.user.@odata.type",
    "userId",
    "userDisplayName",
    "userIdentityType",
    "tenantId",
    "contentType",
    "content",
    "channelIdentity.teamId",
    "channelIdentity.channelId",
    "from",
    "eventDetail.@odata.type",
    "eventDetail.callId",
    "eventDetail.callDuration",
    "eventDetail.callEventType",
    "eventDetail.callParticipants",
    "eventDetail.initiator.application",
    "eventDetail.initiator.device",
    "eventDetail.initiator.user.@odata.type",
    "eventDetail.initiator.user.id",
    "eventDetail.initiator.user.displayName",
    "eventDetail.initiator.user.userIdentityType",
)

_MESSAGE_REQUIRED = (
    "id",
    "createdDateTime",
    "content",
    "userDisplayName",
    "userId",
    "channelIdentity.channelId",
)

_REPLY_REQUIRED = (
    "id",
    "replyToId",
    "createdDateTime",
    "content",
    "userDisplayName",
    "userId",
)


@dataclass(frozen=True)
class RawTeamsMessage:
    id: str
    created: datetime
    content: str
    sender_name: str
    sender_id: str
    channel_id: str
    extras: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class RawTeamsReply:
    id: str
    parent_id: str
    created: datetime
    content: str
    sender_name: str
    sender_id: str
    extras: dict[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class RowError:
    """A data row that could not be turned into a record.

    ``line`` is the 1-based line number in the CSV file (the header is
    line 1). Parsing continues past these; nothing is dropped silently.
    """

    line: int
    kind: str  # "malformed" or "duplicate_id"
    message: str


@dataclass
class ParsedTable:
    columns: list[str]
    records: list
    errors: list[RowError]

    @property
    def conforming(self) -> bool:
        """True when the header carries the full standard export column set."""
        expected = MESSAGE_EXPORT_COLUMNS if "replyToId" not in self.columns else REPLY_EXPORT_COLUMNS
        return set(self.columns) == set(expected)


def parse_timestamp(value: str) -> datetime:
    """Parse an ISO-8601 timestamp, accepting a trailing Z for UTC."""
    if value.endswith("Z"):
        value = value[:-1] + "+00:00"
    return datetime.fromisoformat(value)


def _read_rows(table_bytes: bytes, required: tuple[str, ...]):
    text = table_bytes.decode("utf-8")
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError(required[0]) from None
    for column in required:
        if column not in header:
            raise SchemaError(column)
    return header, reader


def _extras(header: list[str], row: dict[str, str], required) -> dict[str, str]:
    return {col: row[col] for col in header if col not in required}


def parse_messages_table(table_bytes: bytes) -> ParsedTable:
    """Parse a messages export. Row-level problems are collected, not fatal."""
    header, reader = _read_rows(table_bytes, _MESSAGE_REQUIRED)
    records: list[RawTeamsMessage] = []
    errors: list[RowError] = []
    seen: set[str] = set()
    for line, row in enumerate(reader, start=2):
        if len(row) != len(header):
            errors.append(RowError(line, "malformed", f"expected {len(header)} fields, got {len(row)}"))
            continue
        values = dict(zip(header, row))
        msg_id = values["id"]
        if not msg_id:
            errors.append(RowError(line, "malformed", "empty id"))
            continue
        if msg_id in seen:
            errors.append(RowError(line, "duplicate_id", f"duplicate id {msg_id!r}"))
            continue
        try:
            created = parse_timestamp(values["createdDateTime"])
        except ValueError:
            errors.append(RowError(line, "malformed", f"bad createdDateTime {values['createdDateTime']!r}"))
            continue
        seen.add(msg_id)
        records.append(
            RawTeamsMessage(
                id=msg_id,
                created=created,
                content=values["content"],
                sender_name=values["userDisplayName"],
                sender_id=values["userId"],
                channel_id=values["channelIdentity.channelId"],
                extras=_extras(header, values, _MESSAGE_REQUIRED),
            )
        )
    return ParsedTable(columns=header, records=records, errors=errors)


def parse_replies_table(table_bytes: bytes) -> ParsedTable:
    """Parse a replies export; ``replyToId`` becomes ``parent_id``."""
    header, reader = _read_rows(table_bytes, _REPLY_REQUIRED)
    records: list[RawTeamsReply] = []
    errors: list[RowError] = []
    seen: set[str] = set()
    for line, row in enumerate(reader, start=2):
        if len(row) != len(header):
            errors.append(RowError(line, "malformed", f"expected {len(header)} fields, got {len(row)}"))
            continue
        values = dict(zip(header, row))
        reply_id = values["id"]
        if not reply_id:
            errors.append(RowError(line, "malformed", "empty id"))
            continue
        if reply_id in seen:
            errors.append(RowError(line, "duplicate_id", f"duplicate id {reply_id!r}"))
            continue
        if not values["replyToId"]:
            errors.append(RowError(line, "malformed", "empty replyToId"))
            continue
        try:
            created = parse_timestamp(values["createdDateTime"])
        except ValueError:
            errors.append(RowError(line, "malformed", f"bad createdDateTime {values['createdDateTime']!r}"))
            continue
        seen.add(reply_id)
        records.append(
            RawTeamsReply(
                id=reply_id,
                parent_id=values["replyToId"],
                created=created,
                content=values["content"],
                sender_name=values["userDisplayName"],
                sender_id=values["userId"],
                extras=_extras(header, values, _REPLY_REQUIRED),
            )
        )
    return ParsedTable(columns=header, records=records, errors=errors)
