"""Triple data model, syntax detection, and term extraction.

Blank nodes are written as ``_:label`` strings; anything else in subject or
object position is an IRI string, and literals get their own type. Predicates
are always IRIs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from urllib.parse import urljoin

from ..errors import OntoSeekerError

RDF_NS = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS_NS = "http://www.w3.org/2000/01/rdf-schema#"
OWL_NS = "http://www.w3.org/2002/07/owl#"
XSD_NS = "http://www.w3.org/2001/XMLSchema#"

RESERVED_NAMESPACES = frozenset({RDF_NS, RDFS_NS, OWL_NS, XSD_NS})

RDF_TYPE = RDF_NS + "type"
CLASS_TYPES = frozenset({OWL_NS + "Class", RDFS_NS + "Class"})
PROPERTY_TYPES = frozenset(
    {
        OWL_NS + "ObjectProperty",
        OWL_NS + "DatatypeProperty",
        OWL_NS + "AnnotationProperty",
        RDF_NS + "Property",
    }
)
SCHEMA_AXIOMS = frozenset(
    {
        RDFS_NS + "subClassOf",
        RDFS_NS + "subPropertyOf",
        RDFS_NS + "domain",
        RDFS_NS + "range",
    }
)

RDF_XML = "rdf-xml"
TURTLE = "turtle"
UNSUPPORTED = "unsupported"

RDF_XML_MEDIA_TYPES = frozenset({"application/rdf+xml"})
TURTLE_MEDIA_TYPES = frozenset({"text/turtle", "application/x-turtle"})


class RdfParseError(OntoSeekerError):
    """Base for all parse failures; a document yields triples or one of these."""


class UnsupportedConstruct(RdfParseError):
    """Input is in a supported syntax but uses a construct outside the subset."""

    def __init__(self, construct: str, detail: str = ""):
        self.construct = construct
        super().__init__(f"unsupported construct: {construct}" + (f" ({detail})" if detail else ""))


@dataclass(frozen=True)
class Literal:
    lexical: str
    datatype: str | None = None
    lang: str | None = None


@dataclass(frozen=True)
class Triple:
    subject: str
    predicate: str
    object: str | Literal


def is_blank(node: str | Literal) -> bool:
    return isinstance(node, str) and node.startswith("_:")


def is_iri(node: str | Literal) -> bool:
    return isinstance(node, str) and not node.startswith("_:")


@dataclass(frozen=True)
class OntologySummary:
    url: str
    classes: frozenset[str]
    properties: frozenset[str]
    relations: frozenset[str]
    triple_count: int = 0
    byte_size: int = 0

    def is_empty(self) -> bool:
        return not (self.classes or self.properties or self.relations)


def resolve_iri(base: str, ref: str) -> str:
    """urljoin that keeps a bare trailing '#' (urljoin drops empty fragments,
    which would corrupt namespace IRIs like ...rdf-syntax-ns#)."""
    out = urljoin(base, ref)
    if ref.endswith("#") and not out.endswith("#"):
        out += "#"
    return out


def local_name(iri: str) -> str:
    """Human-readable suffix: after the last '#', else last '/', else the IRI itself."""
    for sep in ("#", "/"):
        if sep in iri:
            tail = iri.rsplit(sep, 1)[1]
            return tail if tail else iri
    return iri


def tokenize(term: str) -> list[str]:
    """Split a local name into lowercase search tokens.

    Splits at '_', '-', '.', camelCase transitions (acronym runs stay whole:
    "HTTPServer" gives "http"/"server", "ISBN10" gives "isbn"/"10"), and
    letter/digit boundaries. Empty fragments are dropped; order is kept.
    """
    tokens: list[str] = []
    buf: list[str] = []

    def flush() -> None:
        if buf:
            tokens.append("".join(buf).lower())
            buf.clear()

    for i, ch in enumerate(term):
        if ch in "._-":
            flush()
            continue
        if buf:
            last = buf[-1]
            if (last.isalpha() and ch.isdigit()) or (last.isdigit() and ch.isalpha()):
                flush()
            elif last.islower() and ch.isupper():
                flush()
            elif (
                last.isupper()
                and ch.isupper()
                and i + 1 < len(term)
                and term[i + 1].islower()
            ):
                flush()
        buf.append(ch)
    flush()
    return tokens


def namespace_of(iri: str) -> str:
    """Everything up to and including the last '#' or '/'; '' when neither occurs."""
    name = local_name(iri)
    if name == iri:
        return ""
    return iri[: len(iri) - len(name)]


def extract_summary(
    triples: list[Triple],
    url: str,
    byte_size: int,
    reserved_namespaces: frozenset[str] = RESERVED_NAMESPACES,
) -> OntologySummary:
    """Distill one document's triples into class/property/relation term sets.

    Relations are the local names of non-reserved predicates actually used,
    plus IRI objects of subClassOf/subPropertyOf/domain/range axioms. Blank
    nodes have no name and never contribute; neither do literals.
    """
    classes: set[str] = set()
    properties: set[str] = set()
    relations: set[str] = set()
    for t in triples:
        if t.predicate == RDF_TYPE and is_iri(t.subject) and isinstance(t.object, str):
            if t.object in CLASS_TYPES:
                classes.add(local_name(t.subject))
            elif t.object in PROPERTY_TYPES:
                properties.add(local_name(t.subject))
        if namespace_of(t.predicate) not in reserved_namespaces:
            relations.add(local_name(t.predicate))
        if t.predicate in SCHEMA_AXIOMS and is_iri(t.object):
            relations.add(local_name(t.object))
    return OntologySummary(
        url=url,
        classes=frozenset(classes),
        properties=frozenset(properties),
        relations=frozenset(relations),
        triple_count=len(triples),
        byte_size=byte_size,
    )


_XML_PREAMBLE = re.compile(rb"\s*(<\?xml[^>]*\?>\s*)?(<!--.*?-->\s*)*(<!DOCTYPE[^>]*>\s*)?", re.DOTALL)
_FIRST_TAG = re.compile(rb"<([A-Za-z_][\w.-]*:)?([\w.-]+)((?:[^>\"']|\"[^\"]*\"|'[^']*')*)>?")
_XMLNS_ATTR = re.compile(rb"xmlns(?::([\w.-]+))?\s*=\s*(\"[^\"]*\"|'[^']*')")
_TURTLE_LEAD = re.compile(rb"\s*(?:#[^\n]*\n\s*)*(@prefix|@base|prefix\s|base\s)", re.IGNORECASE)


def _sniff_rdf_xml(body: bytes) -> bool:
    m = _XML_PREAMBLE.match(body)
    rest = body[m.end():] if m else body
    tag = _FIRST_TAG.match(rest)
    if not tag:
        return False
    prefix = (tag.group(1) or b"").rstrip(b":").decode("ascii", "replace")
    name = tag.group(2).decode("ascii", "replace")
    if name != "RDF":
        return False
    attrs = tag.group(3) or b""
    for am in _XMLNS_ATTR.finditer(attrs):
        declared = (am.group(1) or b"").decode("ascii", "replace")
        value = am.group(2)[1:-1].decode("ascii", "replace")
        if declared == prefix and value == RDF_NS:
            return True
    return False


def detect_syntax(body: bytes, content_type: str | None = None, url: str | None = None) -> str:
    """Decide which parser applies; the declared media type wins over sniffing."""
    if content_type in RDF_XML_MEDIA_TYPES:
        return RDF_XML
    if content_type in TURTLE_MEDIA_TYPES:
        return TURTLE
    if _sniff_rdf_xml(body):
        return RDF_XML
    if _TURTLE_LEAD.match(body):
        return TURTLE
    return UNSUPPORTED
