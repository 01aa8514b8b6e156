from __future__ import annotations

import pytest

from onto_seeker.rdf import (
    OWL_NS,
    RDF_NS,
    Literal,
    Triple,
    UnsupportedConstruct,
    XmlMalformed,
    parse_rdf_xml,
)

BASE = "http://x/o.owl"
RDF_DECL = 'xmlns:rdf="http://www.w3.org/1999/02/22-rdf-syntax-ns#"'
OWL_DECL = 'xmlns:owl="http://www.w3.org/2002/07/owl#"'
EX_DECL = 'xmlns:ex="http://x/o.owl#"'


def _doc(inner: str, extra_attrs: str = "") -> bytes:
    return f'<rdf:RDF {RDF_DECL} {OWL_DECL} {EX_DECL} {extra_attrs}>{inner}</rdf:RDF>'.encode()


class TestParseRdfXml:
    def test_description_with_type_resource(self):
        body = _doc(
            '<rdf:Description rdf:about="#A">'
            '<rdf:type rdf:resource="http://www.w3.org/2002/07/owl#Class"/>'
            "</rdf:Description>"
        )
        assert parse_rdf_xml(body, BASE) == [
            Triple("http://x/o.owl#A", RDF_NS + "type", OWL_NS + "Class")
        ]

    def test_typed_node_expands_to_type_triple(self):
        body = _doc('<owl:Class rdf:about="#A"/>')
        assert parse_rdf_xml(body, BASE) == [
            Triple("http://x/o.owl#A", RDF_NS + "type", OWL_NS + "Class")
        ]

    def test_empty_document(self):
        assert parse_rdf_xml(f"<rdf:RDF {RDF_DECL}/>".encode(), BASE) == []

    def test_rdf_id_resolves_as_fragment(self):
        body = _doc('<rdf:Description rdf:ID="A"><ex:p rdf:resource="#B"/></rdf:Description>')
        assert parse_rdf_xml(body, BASE) == [
            Triple("http://x/o.owl#A", "http://x/o.owl#p", "http://x/o.owl#B")
        ]

    def test_node_id_makes_blank_subject(self):
        body = _doc('<rdf:Description rdf:nodeID="b1"><ex:p rdf:resource="#B"/></rdf:Description>')
        assert parse_rdf_xml(body, BASE)[0].subject == "_:b1"

    def test_node_id_object(self):
        body = _doc('<rdf:Description rdf:about="#A"><ex:p rdf:nodeID="b2"/></rdf:Description>')
        assert parse_rdf_xml(body, BASE)[0].object == "_:b2"

    def test_anonymous_node_gets_fresh_blank(self):
        body = _doc(
            '<rdf:Description rdf:about="#A"><ex:p><rdf:Description><ex:q rdf:resource="#B"/>'
            "</rdf:Description></ex:p></rdf:Description>"
        )
        triples = parse_rdf_xml(body, BASE)
        nested, outer = triples
        assert outer.object == nested.subject
        assert nested.subject.startswith("_:genid")

    def test_nested_node_emitted_depth_first(self):
        body = _doc(
            '<rdf:Description rdf:about="#A"><ex:p>'
            '<owl:Thing rdf:about="#B"/>'
            "</ex:p></rdf:Description>"
        )
        triples = parse_rdf_xml(body, BASE)
        assert triples == [
            Triple("http://x/o.owl#B", RDF_NS + "type", OWL_NS + "Thing"),
            Triple("http://x/o.owl#A", "http://x/o.owl#p", "http://x/o.owl#B"),
        ]

    def test_plain_literal(self):
        body = _doc('<rdf:Description rdf:about="#A"><ex:name>Ada</ex:name></rdf:Description>')
        assert parse_rdf_xml(body, BASE)[0].object == Literal("Ada")

    def test_datatyped_literal(self):
        body = _doc(
            '<rdf:Description rdf:about="#A">'
            '<ex:age rdf:datatype="http://www.w3.org/2001/XMLSchema#integer">22</ex:age>'
            "</rdf:Description>"
        )
        obj = parse_rdf_xml(body, BASE)[0].object
        assert obj == Literal("22", datatype="http://www.w3.org/2001/XMLSchema#integer")

    def test_xml_lang_inherited(self):
        body = _doc(
            '<rdf:Description rdf:about="#A" xml:lang="en"><ex:name>Ada</ex:name></rdf:Description>'
        )
        assert parse_rdf_xml(body, BASE)[0].object == Literal("Ada", lang="en")

    def test_datatype_beats_lang(self):
        body = _doc(
            '<rdf:Description rdf:about="#A" xml:lang="en">'
            '<ex:age rdf:datatype="http://www.w3.org/2001/XMLSchema#int">1</ex:age>'
            "</rdf:Description>"
        )
        assert parse_rdf_xml(body, BASE)[0].object == Literal("1", datatype="http://www.w3.org/2001/XMLSchema#int")

    def test_empty_literal(self):
        body = _doc('<rdf:Description rdf:about="#A"><ex:name/></rdf:Description>')
        assert parse_rdf_xml(body, BASE)[0].object == Literal("")

    def test_xml_base_scopes_resolution(self):
        body = _doc(
            '<rdf:Description rdf:about="#A" xml:base="http://other.example/base">'
            '<ex:p rdf:resource="#B"/></rdf:Description>'
        )
        triple = parse_rdf_xml(body, BASE)[0]
        assert triple.subject == "http://other.example/base#A"
        assert triple.object == "http://other.example/base#B"

    def test_malformed_xml_reports_position(self):
        with pytest.raises(XmlMalformed) as err:
            parse_rdf_xml(b"<rdf:RDF <<<", BASE)
        assert "line" in str(err.value) and "column" in str(err.value)

    def test_root_must_be_rdf(self):
        with pytest.raises(UnsupportedConstruct):
            parse_rdf_xml(f'<owl:Ontology {OWL_DECL}/>'.encode(), BASE)

    def test_parse_type_unsupported_and_named(self):
        body = _doc(
            '<rdf:Description rdf:about="#A"><ex:p rdf:parseType="Collection"/></rdf:Description>'
        )
        with pytest.raises(UnsupportedConstruct) as err:
            parse_rdf_xml(body, BASE)
        assert "parseType" in str(err.value)

    @pytest.mark.parametrize("tag", ["rdf:Bag", "rdf:Seq", "rdf:Alt"])
    def test_containers_unsupported(self, tag):
        body = _doc(f'<{tag} rdf:about="#A"/>')
        with pytest.raises(UnsupportedConstruct) as err:
            parse_rdf_xml(body, BASE)
        assert "containers" in str(err.value)

    def test_li_unsupported(self):
        body = _doc('<rdf:Description rdf:about="#A"><rdf:li rdf:resource="#B"/></rdf:Description>')
        with pytest.raises(UnsupportedConstruct):
            parse_rdf_xml(body, BASE)

    def test_reification_unsupported(self):
        body = _doc('<rdf:Statement rdf:about="#s"/>')
        with pytest.raises(UnsupportedConstruct) as err:
            parse_rdf_xml(body, BASE)
        assert "reification" in str(err.value)

    def test_property_attributes_unsupported(self):
        body = _doc('<rdf:Description rdf:about="#A" ex:name="Ada"/>')
        with pytest.raises(UnsupportedConstruct) as err:
            parse_rdf_xml(body, BASE)
        assert "property attribute" in str(err.value)

    def test_about_and_id_conflict(self):
        body = _doc('<rdf:Description rdf:about="#A" rdf:ID="A"/>')
        with pytest.raises(XmlMalformed):
            parse_rdf_xml(body, BASE)

    def test_two_children_in_property_malformed(self):
        body = _doc(
            '<rdf:Description rdf:about="#A"><ex:p>'
            '<rdf:Description rdf:about="#B"/><rdf:Description rdf:about="#C"/>'
            "</ex:p></rdf:Description>"
        )
        with pytest.raises(XmlMalformed):
            parse_rdf_xml(body, BASE)

    def test_multiple_properties_document_order(self):
        body = _doc(
            '<rdf:Description rdf:about="#A">'
            '<ex:first rdf:resource="#B"/><ex:second rdf:resource="#C"/>'
            "</rdf:Description>"
        )
        predicates = [t.predicate for t in parse_rdf_xml(body, BASE)]
        assert predicates == ["http://x/o.owl#first", "http://x/o.owl#second"]
