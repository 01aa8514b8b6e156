"""Build, persist, and reload the inverted index.

The index directory holds exactly three files: ``manifest.json`` (counts and
skip accounting), ``docs.tsv`` (one row per indexed document), and
``postings.tsv`` (token/field/doc/tf rows, sorted). Builds are sequential in
input order so doc ids and the on-disk bytes are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from datetime import datetime, timezone
from functools import cached_property
from pathlib import Path

from .errors import OntoSeekerError
from .netfetch import (
    FetchError,
    PolitenessGate,
    Transport,
    Url,
    polite_fetch,
)
from .rdf import (
    RDF_XML,
    TURTLE,
    OntologySummary,
    RdfParseError,
    detect_syntax,
    extract_summary,
    parse_rdf_xml,
    parse_turtle,
    tokenize,
)

FORMAT_VERSION = 1

FIELDS = ("class", "property", "relation")
FIELD_RANK = {name: rank for rank, name in enumerate(FIELDS)}
FIELD_WEIGHTS = {"class": 3.0, "property": 2.0, "relation": 1.0}

SKIP_REASONS = (
    "blank_or_null",
    "duplicate",
    "fetch_error",
    "unsupported_syntax",
    "parse_error",
    "empty_ontology",
    "oversize",
)

MANIFEST_FILE = "manifest.json"
DOCS_FILE = "docs.tsv"
POSTINGS_FILE = "postings.tsv"


class InputUnreadable(OntoSeekerError):
    pass


class IndexDirUnwritable(OntoSeekerError):
    pass


class MissingFile(OntoSeekerError):
    pass


class CorruptIndex(OntoSeekerError):
    pass


class VersionMismatch(OntoSeekerError):
    pass


@dataclass(frozen=True)
class IndexLimits:
    max_ontology_bytes: int = 3 * 1024 * 1024  # the "more than 3 Mb" cutoff, as MiB
    politeness_ms: int = 300
    timeout_s: float = 20.0

    def __post_init__(self):
        if self.max_ontology_bytes <= 0:
            raise ValueError("max_ontology_bytes must be > 0")


@dataclass(frozen=True)
class DocRecord:
    doc_id: int
    url: str
    byte_size: int
    class_count: int
    property_count: int
    relation_count: int


@dataclass(frozen=True)
class Posting:
    token: str
    field: str
    doc_id: int
    tf: int


@dataclass(frozen=True)
class IndexManifest:
    format_version: int
    created_at: str
    doc_count: int
    posting_count: int
    input_line_count: int
    skip_counts: dict[str, int]
    field_weights: dict[str, float]

    def to_json(self) -> str:
        return json.dumps(
            {
                "format_version": self.format_version,
                "created_at": self.created_at,
                "doc_count": self.doc_count,
                "posting_count": self.posting_count,
                "input_line_count": self.input_line_count,
                "skip_counts": self.skip_counts,
                "field_weights": self.field_weights,
            },
            sort_keys=True,
            indent=2,
        ) + "\n"


@dataclass
class Index:
    docs: list[DocRecord]
    postings: list[Posting]
    manifest: IndexManifest

    @cached_property
    def doc_by_url(self) -> dict[str, DocRecord]:
        return {doc.url: doc for doc in self.docs}

    @cached_property
    def postings_by_token_field(self) -> dict[tuple[str, str], list[Posting]]:
        table: dict[tuple[str, str], list[Posting]] = {}
        for posting in self.postings:
            table.setdefault((posting.token, posting.field), []).append(posting)
        return table


def now_utc_iso() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def index_summaries(summaries: list[OntologySummary]) -> tuple[list[DocRecord], list[Posting]]:
    """Turn per-document term sets into doc records and sorted postings.

    tf counts how many source terms in that field tokenize to contain the
    token, so one multi-word term contributes at most 1 per token.
    """
    docs: list[DocRecord] = []
    tf_table: dict[tuple[str, str, int], int] = {}
    for doc_id, summary in enumerate(summaries):
        docs.append(
            DocRecord(
                doc_id=doc_id,
                url=str(summary.url),
                byte_size=summary.byte_size,
                class_count=len(summary.classes),
                property_count=len(summary.properties),
                relation_count=len(summary.relations),
            )
        )
        for field_name, terms in (
            ("class", summary.classes),
            ("property", summary.properties),
            ("relation", summary.relations),
        ):
            for term in terms:
                for token in set(tokenize(term)):
                    key = (token, field_name, doc_id)
                    tf_table[key] = tf_table.get(key, 0) + 1
    postings = [
        Posting(token=token, field=field_name, doc_id=doc_id, tf=tf)
        for (token, field_name, doc_id), tf in sorted(
            tf_table.items(), key=lambda item: (item[0][0], FIELD_RANK[item[0][1]], item[0][2])
        )
    ]
    return docs, postings


def build_index(
    url_list_path: str | Path,
    transport: Transport,
    limits: IndexLimits,
    index_dir: str | Path,
    created_at: str | None = None,
) -> IndexManifest:
    """Fetch every URL in the crawler's list, apply the skip rules, and
    persist the index directory. Lines are processed in file order."""
    try:
        raw = Path(url_list_path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputUnreadable(f"{url_list_path}: {exc}") from exc
    lines = raw.splitlines()

    gate = PolitenessGate(limits.politeness_ms)
    skip_counts = {reason: 0 for reason in SKIP_REASONS}
    seen: set[str] = set()
    summaries: list[OntologySummary] = []

    for line in lines:
        line = line.strip()
        if not line or line == "null":
            skip_counts["blank_or_null"] += 1
            continue
        try:
            url = Url.parse(line)
            key = str(url)
        except OntoSeekerError:
            url = None
            key = line
        if key in seen:
            skip_counts["duplicate"] += 1
            continue
        seen.add(key)
        if url is None:
            skip_counts["fetch_error"] += 1
            continue
        try:
            resp = polite_fetch(transport, gate, url, limits.max_ontology_bytes + 1)
        except FetchError:
            skip_counts["fetch_error"] += 1
            continue
        if resp.status != 200:
            skip_counts["fetch_error"] += 1
            continue
        if len(resp.body) > limits.max_ontology_bytes:
            skip_counts["oversize"] += 1
            continue
        syntax = detect_syntax(resp.body, resp.content_type, key)
        if syntax == RDF_XML:
            parse = parse_rdf_xml
        elif syntax == TURTLE:
            parse = parse_turtle
        else:
            skip_counts["unsupported_syntax"] += 1
            continue
        try:
            triples = parse(resp.body, key)
        except RdfParseError:
            skip_counts["parse_error"] += 1
            continue
        summary = extract_summary(triples, key, len(resp.body))
        if summary.is_empty():
            skip_counts["empty_ontology"] += 1
            continue
        summaries.append(summary)

    docs, postings = index_summaries(summaries)
    manifest = IndexManifest(
        format_version=FORMAT_VERSION,
        created_at=created_at if created_at is not None else now_utc_iso(),
        doc_count=len(docs),
        posting_count=len(postings),
        input_line_count=len(lines),
        skip_counts=skip_counts,
        field_weights=dict(FIELD_WEIGHTS),
    )
    write_index(index_dir, docs, postings, manifest)
    return manifest


def write_index(
    index_dir: str | Path,
    docs: list[DocRecord],
    postings: list[Posting],
    manifest: IndexManifest,
) -> None:
    """Write manifest.json, docs.tsv, and postings.tsv (UTF-8, LF, TAB-separated)."""
    directory = Path(index_dir)
    try:
        directory.mkdir(parents=True, exist_ok=True)
        with open(directory / MANIFEST_FILE, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(manifest.to_json())
        with open(directory / DOCS_FILE, "w", encoding="utf-8", newline="\n") as fh:
            for doc in docs:
                fh.write(
                    f"{doc.doc_id}\t{doc.url}\t{doc.byte_size}\t"
                    f"{doc.class_count}\t{doc.property_count}\t{doc.relation_count}\n"
                )
        with open(directory / POSTINGS_FILE, "w", encoding="utf-8", newline="\n") as fh:
            for posting in postings:
                fh.write(f"{posting.token}\t{posting.field}\t{posting.doc_id}\t{posting.tf}\n")
    except OSError as exc:
        raise IndexDirUnwritable(f"{index_dir}: {exc}") from exc


def _corrupt(check: bool, message: str) -> None:
    if not check:
        raise CorruptIndex(message)


def read_index(index_dir: str | Path) -> Index:
    """Load and validate an index directory; raises MissingFile, CorruptIndex
    (naming the violated invariant), or VersionMismatch."""
    directory = Path(index_dir)
    for name in (MANIFEST_FILE, DOCS_FILE, POSTINGS_FILE):
        if not (directory / name).is_file():
            raise MissingFile(str(directory / name))

    try:
        data = json.loads((directory / MANIFEST_FILE).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptIndex(f"manifest.json unreadable: {exc}") from exc
    if not isinstance(data, dict) or data.get("format_version") != FORMAT_VERSION:
        raise VersionMismatch(
            f"index format {data.get('format_version')!r}, reader supports {FORMAT_VERSION}"
        )
    try:
        manifest = IndexManifest(
            format_version=data["format_version"],
            created_at=data["created_at"],
            doc_count=data["doc_count"],
            posting_count=data["posting_count"],
            input_line_count=data["input_line_count"],
            skip_counts={r: data["skip_counts"][r] for r in SKIP_REASONS},
            field_weights={f: float(data["field_weights"][f]) for f in FIELDS},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptIndex(f"manifest.json missing or malformed field: {exc}") from exc

    docs: list[DocRecord] = []
    for lineno, line in enumerate(_read_tsv_lines(directory / DOCS_FILE)):
        parts = line.split("\t")
        _corrupt(len(parts) == 6, f"docs.tsv line {lineno + 1}: expected 6 columns")
        try:
            doc = DocRecord(
                doc_id=int(parts[0]),
                url=parts[1],
                byte_size=int(parts[2]),
                class_count=int(parts[3]),
                property_count=int(parts[4]),
                relation_count=int(parts[5]),
            )
        except ValueError as exc:
            raise CorruptIndex(f"docs.tsv line {lineno + 1}: {exc}") from exc
        _corrupt(doc.doc_id == lineno, "doc ids must be dense and ascending from 0")
        _corrupt(
            doc.class_count >= 0 and doc.property_count >= 0 and doc.relation_count >= 0,
            f"docs.tsv line {lineno + 1}: negative count",
        )
        _corrupt(
            doc.class_count + doc.property_count + doc.relation_count > 0,
            f"docs.tsv line {lineno + 1}: document with no terms",
        )
        docs.append(doc)

    postings: list[Posting] = []
    prev_key: tuple[str, int, int] | None = None
    with_postings: set[int] = set()
    for lineno, line in enumerate(_read_tsv_lines(directory / POSTINGS_FILE)):
        parts = line.split("\t")
        _corrupt(len(parts) == 4, f"postings.tsv line {lineno + 1}: expected 4 columns")
        token, field_name = parts[0], parts[1]
        _corrupt(field_name in FIELD_RANK, f"postings.tsv line {lineno + 1}: unknown field")
        try:
            posting = Posting(token=token, field=field_name, doc_id=int(parts[2]), tf=int(parts[3]))
        except ValueError as exc:
            raise CorruptIndex(f"postings.tsv line {lineno + 1}: {exc}") from exc
        _corrupt(posting.tf >= 1, f"postings.tsv line {lineno + 1}: tf must be >= 1")
        _corrupt(
            0 <= posting.doc_id < len(docs),
            f"postings.tsv line {lineno + 1}: doc_id {posting.doc_id} not in docs.tsv",
        )
        key = (token, FIELD_RANK[field_name], posting.doc_id)
        _corrupt(
            prev_key is None or prev_key < key,
            f"postings.tsv line {lineno + 1}: rows not strictly sorted by token/field/doc",
        )
        prev_key = key
        with_postings.add(posting.doc_id)
        postings.append(posting)

    _corrupt(manifest.doc_count == len(docs), "manifest doc_count does not match docs.tsv")
    _corrupt(
        manifest.posting_count == len(postings),
        "manifest posting_count does not match postings.tsv",
    )
    _corrupt(
        manifest.doc_count + sum(manifest.skip_counts.values()) == manifest.input_line_count,
        "manifest accounting identity doc_count + skips == input lines violated",
    )
    _corrupt(
        with_postings == {doc.doc_id for doc in docs},
        "every indexed document must have at least one posting",
    )
    return Index(docs=docs, postings=postings, manifest=manifest)


def _read_tsv_lines(path: Path) -> list[str]:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CorruptIndex(f"{path.name} unreadable: {exc}") from exc
    return text.splitlines()


def render_skip_report(manifest: IndexManifest) -> str:
    """Skip accounting as "reason<TAB>count" lines in fixed reason order."""
    return "\n".join(f"{reason}\t{manifest.skip_counts[reason]}" for reason in SKIP_REASONS)
