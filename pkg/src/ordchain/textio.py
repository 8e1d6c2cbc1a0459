"""Line-based text formats for intervals, subsets and piecewise maps.

    map domain (-inf,+inf) codomain (0,1)
    piece (-inf,0]  mobius -1 2 -4 4
    piece (0,+inf)  mobius 1 0 4 4
    end
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .chain import ChainError, Interval, MobiusMap, SubsetModel, ext, fmt
from .piecewise import InvariantViolation, Piece, PiecewiseMap


class ParseError(ChainError):
    def __init__(self, msg: str, line: int = 0, col: int = 0):
        super().__init__(f"line {line}, col {col}: {msg}" if line else msg)
        self.line = line
        self.col = col


_IV = re.compile(r"^([\[(])\s*([^,\s]+)\s*,\s*([^\])\s]+)\s*([\])])$")
_PT = re.compile(r"^\{\s*([^}\s]+)\s*\}$")


def parse_interval(text: str) -> Interval:
    s = text.strip()
    m = _PT.match(s)
    try:
        if m:
            return Interval.point(ext(m.group(1)))
        m = _IV.match(s)
        if not m:
            raise ParseError(f"bad interval {text!r}")
        return Interval.make(ext(m.group(2)), ext(m.group(3)), m.group(1) == "[", m.group(4) == "]")
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad interval {text!r}: {exc}") from None


def parse_subset(text: str) -> SubsetModel:
    s = text.strip()
    if s in ("", "empty", "{}"):
        return SubsetModel()
    parts = re.split(r"\s+u\s+|\s*∪\s*|\s+U\s+", s)
    return SubsetModel.of(parse_interval(p) for p in parts)


def format_subset(y: SubsetModel) -> str:
    return str(y)


def format_map(f: PiecewiseMap) -> str:
    lines = [f"map domain {f.domain} codomain {f.codomain}"]
    lines.extend(str(pc) for pc in f.pieces)
    lines.append("end")
    return "\n".join(lines) + "\n"


def _piece_from_tokens(tokens: list[str], lineno: int, index: int) -> Piece:
    if len(tokens) < 3:
        raise ParseError("piece needs a domain and an action", lineno, 1)
    dom = parse_interval(tokens[1])
    kind = tokens[2]
    try:
        if kind == "const":
            if len(tokens) != 4:
                raise ParseError("const takes one value", lineno, 1)
            return Piece(dom, ext(tokens[3]))
        if kind == "mobius":
            if len(tokens) != 7:
                raise ParseError("mobius takes four coefficients", lineno, 1)
            coeffs = [ext(t) for t in tokens[3:]]
            return Piece(dom, MobiusMap(*coeffs))
    except InvariantViolation as exc:
        raise InvariantViolation(str(exc), index) from None
    except (ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ChainError):
            raise InvariantViolation(str(exc), index) from None
        raise ParseError(str(exc), lineno, 1) from None
    raise ParseError(f"unknown action {kind!r}", lineno, 1)


@dataclass
class Directive:
    tokens: list[str]
    line: int


Item = Union[Directive, PiecewiseMap]


def parse_document(text: str) -> list[Item]:
    """Map blocks plus any other non-empty lines, in file order."""
    items: list[Item] = []
    header = None
    pieces: list[Piece] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if header is None:
            if tokens[0] == "map":
                if len(tokens) != 5 or tokens[1] != "domain" or tokens[3] != "codomain":
                    raise ParseError("expected 'map domain I codomain J'", lineno, 1)
                try:
                    header = (parse_interval(tokens[2]), parse_interval(tokens[4]), lineno)
                except ParseError as exc:
                    raise ParseError(str(exc), lineno, raw.find(tokens[2]) + 1) from None
                pieces = []
            elif tokens[0] in ("piece", "end"):
                raise ParseError(f"'{tokens[0]}' outside a map block", lineno, 1)
            else:
                items.append(Directive(tokens, lineno))
            continue
        if tokens[0] == "piece":
            try:
                pieces.append(_piece_from_tokens(tokens, lineno, len(pieces)))
            except ParseError as exc:
                if exc.line:
                    raise
                raise ParseError(str(exc), lineno, raw.find(tokens[1]) + 1) from None
        elif tokens[0] == "end":
            dom, cod, _ = header
            items.append(PiecewiseMap(dom, cod, tuple(pieces)))
            header = None
        else:
            raise ParseError(f"unexpected {tokens[0]!r} inside a map block", lineno, 1)
    if header is not None:
        raise ParseError("map block without 'end'", header[2], 1)
    return items


def parse_maps(text: str) -> list[PiecewiseMap]:
    return [it for it in parse_document(text) if isinstance(it, PiecewiseMap)]


def parse_map(text: str) -> PiecewiseMap:
    maps = parse_maps(text)
    if len(maps) != 1:
        raise ParseError(f"expected exactly one map block, found {len(maps)}")
    return maps[0]


def parse_map_file(path) -> PiecewiseMap:
    with open(path, encoding="utf-8") as fh:
        return parse_map(fh.read())


def iter_blocks(items: list[Item]) -> Iterator[tuple[list[Directive], PiecewiseMap]]:
    """Group each map with the directive lines right before it."""
    pending: list[Directive] = []
    for it in items:
        if isinstance(it, Directive):
            pending.append(it)
        else:
            yield pending, it
            pending = []


__all__ = [
    "ParseError",
    "parse_interval",
    "parse_subset",
    "format_subset",
    "format_map",
    "parse_document",
    "parse_maps",
    "parse_map",
    "parse_map_file",
    "iter_blocks",
    "fmt",
]
