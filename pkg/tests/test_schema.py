import logging

import pytest

from ontoquery.rdf import Iri
from ontoquery.schema import build_schema_index
from ontoquery.turtle import load_turtle

from conftest import FIXTURES
from helpers import EX, ex


@pytest.fixture(scope="module")
def fixture_index():
    graph = load_turtle(FIXTURES.joinpath("parasite-schema.ttl").read_text(), "schema")
    return build_schema_index(graph)


def test_every_declared_class_is_indexed(fixture_index):
    assert len(fixture_index.classes) == 16
    assert ex("CellCloning") in fixture_index.classes
    assert ex("FivePrimeRegion") in fixture_index.classes


def test_labels_comments_and_alt_labels(fixture_index):
    sample = fixture_index.class_info(ex("TcruziSample"))
    assert sample.label == "T.cruzi sample"
    assert sample.alt_labels == ["trypanosoma cruzi sample"]
    assert "Trypanosoma cruzi" in sample.description
    assert fixture_index.class_info(ex("ThreePrimeRegion")).label == "3 prime region"


def test_subclass_edges(fixture_index):
    edges = fixture_index.direct_subclass_edges
    assert (ex("CellCloning"), ex("Process")) in edges
    assert (ex("ClonedSample"), ex("TcruziSample")) in edges
    assert (ex("ThreePrimeRegion"), ex("Region")) in edges
    assert len(edges) == 10


def test_existential_restrictions_attach_property_filler_pairs(fixture_index):
    cloning = fixture_index.class_info(ex("CellCloning"))
    assert set(cloning.restriction_props) == {
        (ex("preceded_by"), ex("DrugSelection")),
        (ex("has_output_value"), ex("TcruziSample")),
    }
    # The restriction blank nodes themselves never become classes.
    assert all(isinstance(c, Iri) for c in fixture_index.classes)


def test_other_restriction_kinds_are_skipped_with_a_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="ontoquery.schema"):
        graph = load_turtle(FIXTURES.joinpath("parasite-schema.ttl").read_text(), "schema")
        index = build_schema_index(graph)
    assert "minCardinality" in caplog.text
    assert "allValuesFrom" in caplog.text
    selection = index.class_info(ex("DrugSelection"))
    assert selection.restriction_props == [(ex("preceded_by"), ex("Transfection"))]


def test_object_property_digest(fixture_index):
    preceded = fixture_index.property_info(ex("preceded_by"))
    assert preceded.kind == "object"
    assert preceded.domains == {ex("Process")}
    assert preceded.ranges == {ex("Process")}
    assert preceded.datatype is None

    output = fixture_index.property_info(ex("has_output_value"))
    assert output.domains == set()
    assert output.ranges == {ex("TcruziSample")}


def test_data_property_digest(fixture_index):
    ratio = fixture_index.property_info(ex("log_base_2_ratio"))
    assert ratio.kind == "data"
    assert ratio.datatype == "decimal"
    assert ratio.label == "log-base-2-ratio"
    assert ratio.value_kind is None

    sequence = fixture_index.property_info(ex("primer_sequence"))
    assert sequence.datatype == "string"
    assert sequence.value_kind == "nucleotide-sequence"

    count = fixture_index.property_info(ex("clone_number"))
    assert count.datatype == "integer"
    assert len(fixture_index.properties) == 10


def test_lookup_by_label_is_case_insensitive(fixture_index):
    assert fixture_index.find_class_by_label("CELL CLONING").iri == ex("CellCloning")
    assert fixture_index.find_class_by_label("oligo").iri == ex("MicroarrayOligonucleotide")
    assert fixture_index.find_property_by_label("Has Primer").iri == ex("has_primer")
    assert fixture_index.find_class_by_label("no such thing") is None


def test_referenced_but_undeclared_classes_are_registered():
    doc = f"""
@prefix ex: <{EX}> .
@prefix owl: <http://www.w3.org/2002/07/owl#> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
ex:Child a owl:Class ; rdfs:subClassOf ex:Ghost_Parent .
ex:link a owl:ObjectProperty ; rdfs:domain ex:Child ; rdfs:range ex:Other .
"""
    index = build_schema_index(load_turtle(doc, "s"))
    ghost = index.class_info(ex("Ghost_Parent"))
    assert ghost is not None
    # Fallback label: the local name with underscores opened up.
    assert ghost.label == "Ghost Parent"
    assert index.class_info(ex("Other")) is not None
    assert (ex("Child"), ex("Ghost_Parent")) in index.direct_subclass_edges


def test_rdfs_class_declarations_count_too():
    doc = f"""
@prefix ex: <{EX}> .
@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .
ex:Plain a rdfs:Class ; rdfs:label "plain" .
"""
    index = build_schema_index(load_turtle(doc, "s"))
    assert index.class_info(ex("Plain")).label == "plain"
