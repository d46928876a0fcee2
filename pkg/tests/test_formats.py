from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import DATA, cacti, complete_links, ring
from wcap.cactus import Solution, build_link_graph
from wcap.errors import MalformedInput
from wcap.formats import (
    format_cactus,
    format_cost,
    format_links,
    format_pi,
    format_solution,
    parse_cactus,
    parse_cost,
    parse_links,
    parse_pi,
    parse_solution,
)


@pytest.mark.parametrize(
    "text, value",
    [("1", Fraction(1)), ("0.5", Fraction(1, 2)), ("2/3", Fraction(2, 3)), ("1e-3", Fraction(1, 1000))],
)
def test_parse_cost(text, value):
    assert parse_cost(text) == value


@pytest.mark.parametrize("text", ["-1", "abc", "1/0", ""])
def test_parse_cost_rejects(text):
    with pytest.raises(MalformedInput):
        parse_cost(text)


@pytest.mark.parametrize(
    "value, text",
    [(Fraction(4), "4"), (Fraction(1, 2), "0.5"), (Fraction(3, 40), "0.075"), (Fraction(1, 3), "1/3")],
)
def test_format_cost(value, text):
    assert format_cost(value) == text


@given(st.fractions(min_value=0, max_value=10**6))
def test_cost_round_trip(value):
    assert parse_cost(format_cost(value)) == value


@settings(max_examples=40, deadline=None)
@given(cacti(14))
def test_cactus_round_trip(c):
    again = parse_cactus(format_cactus(c, "round trip"))
    assert again == c


def test_header_mismatch():
    with pytest.raises(MalformedInput):
        parse_cactus("p cactus 3 3 2\ne 1 2\ne 2 3\n")
    with pytest.raises(MalformedInput):
        parse_cactus("e 1 2\n")
    with pytest.raises(MalformedInput):
        parse_cactus("p cactus 2 1 0\ne 1 2\n")


def test_comments_are_skipped():
    c = parse_cactus("c hello\n\np cactus 2 1 2\nc mid\ne 1 2\n")
    assert c.n == 2


def test_pi_round_trip():
    pi = parse_pi((DATA / "fig1.pi").read_text())
    assert pi[5] == 2 and pi[7] == 4
    assert parse_pi(format_pi(pi)) == pi
    with pytest.raises(MalformedInput):
        parse_pi("1 1\n1 2\n")


def test_links_round_trip():
    raw = [(1, 2, Fraction(3, 4)), (2, 3, Fraction(7))]
    assert parse_links(format_links(raw)) == raw
    with pytest.raises(MalformedInput):
        parse_links("1 2\n")


def test_solution_round_trip():
    c = ring(4)
    lg = complete_links(c)
    s = Solution.from_ids(lg, [l.id for l in lg if (l.u, l.v) in {(1, 3), (2, 4)}])
    text = format_solution(s, lg)
    assert text.splitlines()[0] == "s wcap 2 2"
    cost, pairs = parse_solution(text)
    assert cost == 2 and sorted(pairs) == [(1, 3), (2, 4)]


def test_solution_uses_original_endpoints(fig1):
    lg = build_link_graph(fig1, [(5, 7, Fraction(1, 2))])
    text = format_solution(Solution.from_ids(lg, lg.ids()), lg)
    assert "l 5 7" in text and text.startswith("s wcap 0.5 1")
