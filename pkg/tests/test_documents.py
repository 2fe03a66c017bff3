import json

import pytest

from locpow import documents
from locpow.errors import ParseError
from locpow.expr import Atom, Coproduct, default_cutoff, evaluate, parse
from locpow.group import GroupOrientation, from_lie
from locpow.lie import BracketTable


def test_table_round_trip():
    t = BracketTable(3, 3, 3, {(0, 1): (0, 0, 3)})
    doc = documents.table_doc(t)
    assert doc["brackets"] == [{"i": 1, "j": 2, "coeffs": ["0", "0", "3"]}]
    assert documents.parse_table(json.loads(documents.dumps(doc))) == t


def test_presentation_and_element_docs():
    P = from_lie(BracketTable(3, 3, 2, {(0, 1): (0, 3)}))
    doc = documents.presentation_doc(P)
    assert documents.parse_presentation(doc).relations == P.relations
    assert documents.parse_element(documents.element_doc((1, 2)), 2) == (1, 2)
    theta = GroupOrientation(3, 2, (4, 1))
    assert documents.parse_orientation(documents.orientation_doc(theta), 3, 2, 2) == theta


@pytest.mark.parametrize(
    "doc,where",
    [
        ({"p": 3, "k": 2, "d": 2, "brackets": [{"i": 2, "j": 1, "coeffs": [0, 3]}]}, "$.brackets[0]"),
        ({"p": 3, "k": 2, "d": 2, "brackets": [{"i": 1, "j": 2, "coeffs": [0]}]}, "$.brackets[0].coeffs"),
        ({"p": 3, "k": 2, "d": 2, "brackets": [{"i": 1, "j": 2, "coeffs": ["x", 3]}]}, "$.brackets[0].coeffs[0]"),
        ({"p": 4, "k": 2, "d": 2, "brackets": []}, "$.p"),
        ({"p": 3, "d": 2, "brackets": []}, "$"),
    ],
)
def test_parse_errors_carry_locations(doc, where):
    with pytest.raises(ParseError) as info:
        documents.raw_table(doc)
    assert info.value.location == where


def test_json_syntax_error_reports_line(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "p": 3,\n  "k": \n}\n')
    with pytest.raises(ParseError) as info:
        documents.load(path)
    assert ":4:" in info.value.location


def test_expression_parsing():
    node = parse("theta_abelian(3, p^2) ∐ free(2) * zp_x_free(1)")
    assert isinstance(node, Coproduct) and len(node.parts) == 3
    assert node.parts[0] == Atom("theta_abelian", (3, ("p", 1, 2)), 1)
    assert default_cutoff(node) == 8
    assert parse("(free(1))") == Atom("free", (1,), 2)


@pytest.mark.parametrize(
    "text,pos",
    [("free(2) ∐", 10), ("free(", 6), ("bogus(1)", 1), ("free(2) free(3)", 9), ("free(2) # x", 9)],
)
def test_expression_errors_have_positions(text, pos):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert info.value.location == f"position {pos}"


def test_expression_evaluation():
    assert evaluate(parse("theta_abelian(3, p)"), 3, 4).dims == (1, 3, 3, 1, 0)
    assert evaluate(parse("free(2) ∐ free(3)"), 3, 6).r == 0
    assert evaluate(parse("theta_abelian(2, 2p)"), 3, 4).d == 2
    with pytest.raises(ParseError):
        evaluate(parse("theta_abelian(2, 2)"), 2, 4)
