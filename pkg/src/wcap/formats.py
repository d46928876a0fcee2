"""Plain-text file formats.

Cactus file::

    c optional comment
    p cactus <n> <m> <k>
    e <u> <v>            (m lines, 1-indexed)

Pi file: ``<orig_vertex> <cactus_vertex>`` per line. Link file:
``<u> <v> <cost>`` per line with a decimal cost. Solution file: a header
``s wcap <total_cost> <num_links>`` followed by ``l <u> <v>`` lines holding
original-graph endpoints.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from fractions import Fraction

from .cactus import CactusGraph, LinkGraph, Solution, map_solution_back
from .errors import MalformedInput


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c ") or line == "c" or line.startswith("#"):
            continue
        yield lineno, line.split()


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise MalformedInput(f"line {lineno}: expected an integer, got {tok!r}") from None


def parse_cost(tok: str) -> Fraction:
    """Parse a decimal (or ``p/q``) cost exactly."""
    try:
        value = Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise MalformedInput(f"bad cost {tok!r}") from None
    if value < 0:
        raise MalformedInput(f"negative cost {tok!r}")
    return value


def format_cost(value: Fraction) -> str:
    """Exact decimal when the value has a finite expansion, else ``p/q``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    den = value.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = max(twos, fives)
    scaled = value * 10**digits
    sign = "-" if scaled < 0 else ""
    q = abs(scaled.numerator)
    whole, frac = divmod(q, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}".rstrip("0").rstrip(".")


def parse_cactus_header(text: str) -> tuple[int, int, int, list[tuple[int, int]]]:
    header = None
    edges: list[tuple[int, int]] = []
    for lineno, tok in _lines(text):
        if tok[0] == "p":
            if header is not None:
                raise MalformedInput(f"line {lineno}: duplicate problem line")
            if len(tok) != 5 or tok[1] != "cactus":
                raise MalformedInput(f"line {lineno}: expected 'p cactus <n> <m> <k>'")
            header = tuple(_int(t, lineno) for t in tok[2:])
        elif tok[0] == "e":
            if header is None:
                raise MalformedInput(f"line {lineno}: edge before problem line")
            if len(tok) != 3:
                raise MalformedInput(f"line {lineno}: expected 'e <u> <v>'")
            edges.append((_int(tok[1], lineno), _int(tok[2], lineno)))
        else:
            raise MalformedInput(f"line {lineno}: unknown record {tok[0]!r}")
    if header is None:
        raise MalformedInput("missing 'p cactus' line")
    n, m, k = header
    if len(edges) != m:
        raise MalformedInput(f"header declares {m} edges, found {len(edges)}")
    return n, m, k, edges


def parse_cactus(text: str, pi: Mapping[int, int] | None = None) -> CactusGraph:
    n, _, k, edges = parse_cactus_header(text)
    if k < 1:
        raise MalformedInput(f"connectivity must be >= 1, got {k}")
    return CactusGraph.from_edges(n, edges, k, pi)


def parse_pi(text: str) -> dict[int, int]:
    pi: dict[int, int] = {}
    for lineno, tok in _lines(text):
        if len(tok) != 2:
            raise MalformedInput(f"line {lineno}: expected '<orig> <cactus>'")
        orig, cv = _int(tok[0], lineno), _int(tok[1], lineno)
        if orig in pi:
            raise MalformedInput(f"line {lineno}: vertex {orig} mapped twice")
        pi[orig] = cv
    return pi


def parse_links(text: str) -> list[tuple[int, int, Fraction]]:
    out = []
    for lineno, tok in _lines(text):
        if len(tok) != 3:
            raise MalformedInput(f"line {lineno}: expected '<u> <v> <cost>'")
        try:
            cost = parse_cost(tok[2])
        except MalformedInput as exc:
            raise MalformedInput(f"line {lineno}: {exc}") from None
        out.append((_int(tok[0], lineno), _int(tok[1], lineno), cost))
    return out


def format_cactus(c: CactusGraph, comment: str | None = None) -> str:
    lines = [f"c {comment}"] if comment else []
    lines.append(f"p cactus {c.n} {len(c.edges)} {c.k}")
    lines.extend(f"e {e.u} {e.v}" for e in c.edges)
    return "\n".join(lines) + "\n"


def format_pi(pi: Mapping[int, int]) -> str:
    return "".join(f"{a} {b}\n" for a, b in sorted(pi.items()))


def format_links(raw: Iterable[tuple[int, int, Fraction]]) -> str:
    return "".join(f"{u} {v} {format_cost(cost)}\n" for u, v, cost in raw)


def format_solution(s: Solution, lg: LinkGraph) -> str:
    rows = map_solution_back(s, lg)
    lines = [f"s wcap {format_cost(s.total_cost)} {len(rows)}"]
    lines.extend(f"l {u} {v}" for u, v, _ in rows)
    return "\n".join(lines) + "\n"


def parse_solution(text: str) -> tuple[Fraction, list[tuple[int, int]]]:
    header = None
    pairs = []
    for lineno, tok in _lines(text):
        if tok[0] == "s":
            if len(tok) != 4 or tok[1] != "wcap":
                raise MalformedInput(f"line {lineno}: expected 's wcap <cost> <num_links>'")
            header = (parse_cost(tok[2]), _int(tok[3], lineno))
        elif tok[0] == "l":
            if len(tok) != 3:
                raise MalformedInput(f"line {lineno}: expected 'l <u> <v>'")
            pairs.append((_int(tok[1], lineno), _int(tok[2], lineno)))
        else:
            raise MalformedInput(f"line {lineno}: unknown record {tok[0]!r}")
    if header is None:
        raise MalformedInput("missing 's wcap' line")
    if header[1] != len(pairs):
        raise MalformedInput(f"header declares {header[1]} links, found {len(pairs)}")
    return header[0], pairs
