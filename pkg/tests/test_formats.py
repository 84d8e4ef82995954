from __future__ import annotations

import random

import pytest

from prefdomains.errors import DomainError, ParseError
from prefdomains.fixtures import (
    TABLES,
    fixture,
    fixture_file,
    fixture_text,
    random_connected_subdomain,
    single_dipped,
    single_peaked,
    unrestricted,
)
from prefdomains.formats import domain_digest, format_domain, format_scf, parse_domain, parse_scf
from prefdomains.scf import dictatorial


def test_table_fixtures_round_trip_byte_exact():
    for name in TABLES:
        text = fixture_text(name)
        assert format_domain(parse_domain(text)) == text


def test_table_sizes():
    sizes = {"table1": 8, "table2": 7, "table3": 8, "table4": 12, "table5": 13, "table6": 9}
    for name, k in sizes.items():
        assert len(fixture(name)) == k and fixture(name).m == 4


def test_table4_is_table5_without_last_preference():
    assert set(fixture("table4").prefs) == set(fixture("table5").prefs[:12])


def test_parse_without_header_and_with_comments():
    d = parse_domain("# two orders\n\nx y z\n  z y x  \n")
    assert d.alts.labels == ("x", "y", "z")
    assert [d.label(i) for i in range(len(d))] == ["x y z", "z y x"]


def test_parse_errors_carry_positions():
    with pytest.raises(ParseError) as exc:
        parse_domain("alternatives: a b c\na b c\na q c\n")
    assert exc.value.line == 3 and exc.value.column == 3
    assert str(exc.value).startswith("line 3, column 3")
    with pytest.raises(ParseError, match="same as line 2"):
        parse_domain("alternatives: a b c\na b c\nb a c\na b c\n")
    with pytest.raises(ParseError):
        parse_domain("alternatives: a b c\na b\n")
    with pytest.raises(ParseError):
        parse_domain("# nothing\n")
    with pytest.raises(ParseError):
        parse_domain("a b c\nalternatives: a b c\n")


def test_digest_is_stable_and_content_sensitive():
    d = fixture("table4")
    assert domain_digest(d) == domain_digest(parse_domain(format_domain(d)))
    assert domain_digest(d) != domain_digest(fixture("table5"))
    assert domain_digest(d).startswith("sha256:") and len(domain_digest(d)) == 23


def test_scf_round_trip():
    d = fixture("table2")
    f = dictatorial(d, 2, voter=1)
    text = format_scf(f)
    assert text.splitlines()[0] == f"scf n=2 domain={domain_digest(d)}"
    assert text.splitlines()[1] == "1 1 -> a1"
    assert parse_scf(text, d) == f


def test_scf_parse_errors():
    d = fixture("table2")
    text = format_scf(dictatorial(d, 2))
    lines = text.splitlines()
    with pytest.raises(ParseError, match="does not match"):
        parse_scf(text, fixture("table3"))
    with pytest.raises(ParseError, match="missing"):
        parse_scf("\n".join(lines[:-1]) + "\n", d)
    with pytest.raises(ParseError, match="listed twice"):
        parse_scf(text + lines[1] + "\n", d)
    with pytest.raises(ParseError):
        parse_scf(text.replace("-> a1", "-> zz", 1), d)
    with pytest.raises(ParseError):
        parse_scf("\n".join(lines[1:]), d)


def test_generators():
    assert len(unrestricted(4)) == 24
    # 2^(m-1) single-peaked orders for a fixed axis
    assert len(single_peaked(4)) == 8 and len(single_peaked(5)) == 16
    sd = single_dipped(4)
    assert len(sd) == 8
    assert {p.top for p in sd.prefs} == {0, 3}
    sp = single_peaked(["x", "y", "z"])
    assert sp.alts.labels == ("x", "y", "z")
    assert set(fixture_file("single_peaked", m=3).splitlines()[1:]) == {
        "a1 a2 a3", "a2 a1 a3", "a2 a3 a1", "a3 a2 a1"}
    with pytest.raises(DomainError):
        fixture("table9")


def test_random_subdomains_are_seed_deterministic():
    a = random_connected_subdomain(4, random.Random(3))
    b = random_connected_subdomain(4, random.Random(3))
    assert a == b
    with pytest.raises(DomainError):
        random_connected_subdomain(3, random.Random(0), size=7)
