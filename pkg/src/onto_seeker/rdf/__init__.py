from .model import (
    OWL_NS,
    RDF_NS,
    RDFS_NS,
    RDF_XML,
    TURTLE,
    UNSUPPORTED,
    XSD_NS,
    Literal,
    OntologySummary,
    RdfParseError,
    Triple,
    UnsupportedConstruct,
    detect_syntax,
    extract_summary,
    local_name,
    tokenize,
)
from .rdfxml import XmlMalformed, parse_rdf_xml
from .turtle import TurtleSyntaxError, UndefinedPrefix, parse_turtle

__all__ = [
    "OWL_NS",
    "RDF_NS",
    "RDFS_NS",
    "RDF_XML",
    "TURTLE",
    "UNSUPPORTED",
    "XSD_NS",
    "Literal",
    "OntologySummary",
    "RdfParseError",
    "Triple",
    "TurtleSyntaxError",
    "UndefinedPrefix",
    "UnsupportedConstruct",
    "XmlMalformed",
    "detect_syntax",
    "extract_summary",
    "local_name",
    "parse_rdf_xml",
    "parse_turtle",
    "tokenize",
]
