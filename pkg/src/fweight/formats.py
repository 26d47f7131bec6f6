"""Plain-text file formats.

Every reader takes the file's text and raises :class:`ParseError` (with a
line number) on malformed input.  Blank lines and ``#`` comments are ignored
everywhere.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterator

from .core import (
    BUILTIN,
    BitString,
    CylinderSet,
    FWeightError,
    INTEGER_EXPONENT,
    RATIONAL_TABLE,
    WeightFunction,
    all_strings,
    parse_bits,
    parse_rational,
    render_bits,
    render_rational,
)
from .dnrsim import FinitePiClass, OracleTable
from .families import TestFamily
from .kraft import CodeRequest
from .levin import MonotoneFunctionalTable
from .transforms import TreeFamily


class ParseError(FWeightError):
    def __init__(self, lineno: int, message: str):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _bits(lineno: int, token: str) -> BitString:
    try:
        return parse_bits(token)
    except FWeightError as exc:
        raise ParseError(lineno, str(exc)) from None


def _rational(lineno: int, token: str) -> Fraction:
    try:
        return parse_rational(token)
    except (FWeightError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(lineno, f"bad rational {token!r}: {exc}") from None


def _nat(lineno: int, token: str) -> int:
    if not token.isdigit():
        raise ParseError(lineno, f"expected a natural number, got {token!r}")
    return int(token)


# --------------------------------------------------------------------------
# cylinder sets and streams

def read_stream(text: str) -> list[BitString]:
    out = []
    for lineno, toks in _lines(text):
        if len(toks) != 1:
            raise ParseError(lineno, "expected one string per line")
        out.append(_bits(lineno, toks[0]))
    return out


def read_set(text: str) -> CylinderSet:
    return CylinderSet(read_stream(text))


def write_set(A) -> str:
    return "".join(render_bits(s) + "\n" for s in CylinderSet(A).sorted())


# --------------------------------------------------------------------------
# weights

_LENGTH_SCALED = re.compile(r"length-scaled\s+s=(\S+)$")


def read_weights(text: str) -> WeightFunction:
    """``mode:`` header, optional ``depth: <n>``, then ``<bits> <n/d>`` or ``<bits> e<k>`` lines."""
    mode = None
    depth = None
    entries: dict[BitString, tuple[str, Fraction | int]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if mode is None:
            if not line.startswith("mode:"):
                raise ParseError(lineno, "weight file must start with a 'mode:' header")
            mode = line[5:].strip()
            m = _LENGTH_SCALED.match(mode)
            if m:
                mode = ("length-scaled", _rational(lineno, m.group(1)))
            elif mode not in (INTEGER_EXPONENT, RATIONAL_TABLE):
                raise ParseError(lineno, f"unknown mode {mode!r}")
            continue
        if line.startswith("depth:"):
            depth = _nat(lineno, line[6:].strip())
            continue
        toks = line.split()
        if len(toks) != 2:
            raise ParseError(lineno, "expected '<bits> <value>'")
        sigma = _bits(lineno, toks[0])
        if sigma in entries:
            raise ParseError(lineno, f"duplicate entry for {toks[0]}")
        value = toks[1]
        if value.startswith("e") and re.fullmatch(r"e-?\d+", value):
            entries[sigma] = ("exp", int(value[1:]))
        else:
            q = _rational(lineno, value)
            if q <= 0:
                raise ParseError(lineno, "weights must be positive")
            entries[sigma] = ("rat", q)
    if mode is None:
        raise ParseError(1, "empty weight file")
    if isinstance(mode, tuple):
        if entries:
            raise ParseError(1, "length-scaled weights take no table lines")
        s = mode[1]
        if not 0 < s <= 1:
            raise ParseError(1, "length-scaled needs 0 < s <= 1")
        return WeightFunction.length_scaled(s, 64 if depth is None else depth)
    if mode == INTEGER_EXPONENT:
        if any(kind != "exp" for kind, _ in entries.values()):
            raise ParseError(1, "integer-exponent tables take 'e<k>' values only")
        return WeightFunction.from_exponents({s: k for s, (_, k) in entries.items()}, depth)
    table = {s: (Fraction(1, 2**v) if v >= 0 else Fraction(2**-v)) if kind == "exp" else v
             for s, (kind, v) in entries.items()}
    return WeightFunction.from_table(table, depth)


def write_weights(w: WeightFunction, depth: int | None = None) -> str:
    depth = w.depth if depth is None else depth
    if w.mode == BUILTIN:
        return f"mode: length-scaled s={render_rational(w.s)}\ndepth: {depth}\n"
    lines = [f"mode: {w.mode}", f"depth: {depth}"]
    for s in all_strings(depth):
        if w.mode == INTEGER_EXPONENT:
            lines.append(f"{render_bits(s)} e{w.exponent(s)}")
        else:
            lines.append(f"{render_bits(s)} {render_rational(w(s))}")
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# sectioned files

def _sections(text: str, pattern: str) -> dict[int, list[BitString]]:
    head = re.compile(pattern)
    out: dict[int, list[BitString]] = {}
    current = None
    for lineno, toks in _lines(text):
        line = " ".join(toks)
        m = head.fullmatch(line)
        if m:
            current = int(m.group(1))
            if current in out:
                raise ParseError(lineno, f"section {current} repeated")
            out[current] = []
        elif line.startswith("["):
            raise ParseError(lineno, f"bad section header {line!r}")
        elif current is None:
            raise ParseError(lineno, "member before the first section header")
        elif len(toks) != 1:
            raise ParseError(lineno, "expected one string per line")
        else:
            out[current].append(_bits(lineno, toks[0]))
    return out


def read_family(text: str) -> TestFamily:
    return TestFamily(_sections(text, r"\[test i=(\d+)\]"))


def write_family(fam: TestFamily) -> str:
    return "".join(f"[test i={i}]\n" + write_set(fam[i]) for i in fam)


def read_trees(text: str) -> TreeFamily:
    secs = _sections(text, r"\[tree (\d+)\]")
    if sorted(secs) != list(range(1, len(secs) + 1)):
        raise ParseError(1, "trees must be numbered 1, 2, ... without gaps")
    try:
        return TreeFamily([secs[i] for i in sorted(secs)])
    except FWeightError as exc:
        raise ParseError(1, str(exc)) from None


# --------------------------------------------------------------------------
# line-oriented tables

def read_requests(text: str) -> list[CodeRequest]:
    out = []
    for lineno, toks in _lines(text):
        if len(toks) != 2:
            raise ParseError(lineno, "expected '<label> <length>'")
        out.append(CodeRequest(toks[0], _nat(lineno, toks[1])))
    return out


def read_estimator_table(text: str) -> dict[BitString, int]:
    out = {}
    for lineno, toks in _lines(text):
        if len(toks) != 2:
            raise ParseError(lineno, "expected '<bits> <nat>'")
        out[_bits(lineno, toks[0])] = _nat(lineno, toks[1])
    return out


def read_functional(text: str) -> MonotoneFunctionalTable:
    table = {}
    for lineno, toks in _lines(text):
        if len(toks) != 3 or toks[1] != "->":
            raise ParseError(lineno, "expected '<Ybits> -> <Xbits>'")
        rho = _bits(lineno, toks[0])
        if rho in table:
            raise ParseError(lineno, f"input {toks[0]} listed twice")
        table[rho] = _bits(lineno, toks[2])
    return MonotoneFunctionalTable(table)


def read_caps(text: str) -> dict[BitString, Fraction]:
    out = {}
    for lineno, toks in _lines(text):
        if len(toks) != 2:
            raise ParseError(lineno, "expected '<bits> <num>/<den>'")
        q = _rational(lineno, toks[1])
        if q <= 0:
            raise ParseError(lineno, "caps must be positive")
        out[_bits(lineno, toks[0])] = q
    return out


def read_class(text: str) -> FinitePiClass:
    leaves = read_stream(text)
    try:
        return FinitePiClass(leaves)
    except FWeightError as exc:
        raise ParseError(1, str(exc)) from None


def read_oracle_table(text: str, N: int) -> OracleTable:
    values = {}
    for lineno, toks in _lines(text):
        if len(toks) != 3:
            raise ParseError(lineno, "expected '<n> <leaf> <value|undef>'")
        n = _nat(lineno, toks[0])
        if n >= N:
            raise ParseError(lineno, f"index {n} is not below N={N}")
        leaf = _bits(lineno, toks[1])
        if toks[2] != "undef":
            values[(n, leaf)] = _nat(lineno, toks[2])
    return OracleTable(N, values)
