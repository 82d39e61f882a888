"""Line-level syntax of definition files: sections, entries, linear expressions."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from ..exactla import Q


class DefinitionError(ValueError):
    """Problem in a definition file, with a 1-based line and column."""

    def __init__(self, line: int, col: int, msg: str):
        self.line, self.col, self.msg = line, col, msg
        super().__init__(f"{line}:{col}: {msg}")


@dataclass
class Entry:
    key: str
    args: list[str]
    value: str
    line: int
    col: int          # column of the key
    value_col: int    # column where ``value`` starts


@dataclass
class Section:
    kind: str
    name: str
    line: int
    col: int
    entries: list[Entry]


SECTION_KINDS = ("algebra", "map", "bimodule", "hopf", "coalgebra", "bicomodule",
                 "coring", "morita", "query")
_HEADER = re.compile(r"\[\s*([A-Za-z-]+)\s+([A-Za-z_][\w.']*)\s*\]\s*$")
NAME = re.compile(r"[A-Za-z_][\w.']*\*?")


def _strip_comment(line: str) -> str:
    i = line.find("#")
    return line if i < 0 else line[:i]


def split_sections(text: str) -> list[Section]:
    sections: list[Section] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw).rstrip()
        body = line.lstrip()
        if not body:
            continue
        col = len(line) - len(body) + 1
        if body.startswith("["):
            m = _HEADER.match(body)
            if not m:
                raise DefinitionError(ln, col, "syntax error: malformed section header")
            kind, name = m.group(1), m.group(2)
            if kind not in SECTION_KINDS:
                raise DefinitionError(ln, col + 1, f"syntax error: unknown section kind {kind!r}")
            sections.append(Section(kind, name, ln, col, []))
            continue
        if not sections:
            raise DefinitionError(ln, col, "syntax error: entry outside of any section")
        sections[-1].entries.append(_entry(body, ln, col))
    return sections


def _entry(body: str, ln: int, col: int) -> Entry:
    if body.startswith("query ") and "=" in body:
        # compact form: query kind=extension map=i ...
        return Entry("query", [], body[len("query "):], ln, col, col + len("query "))
    eq = body.find("=")
    if eq < 0:
        raise DefinitionError(ln, col, "syntax error: expected 'key = value'")
    lhs = body[:eq].split()
    if not lhs:
        raise DefinitionError(ln, col, "syntax error: missing key before '='")
    pos = 0
    for tok in lhs:
        pos = body.index(tok, pos)
        if not NAME.fullmatch(tok):
            raise DefinitionError(ln, col + pos, f"syntax error: bad name {tok!r}")
        pos += len(tok)
    rest = body[eq + 1:]
    value = rest.strip()
    vcol = col + eq + 1 + (len(rest) - len(rest.lstrip()))
    if not value:
        raise DefinitionError(ln, col + eq, "syntax error: missing value after '='")
    return Entry(lhs[0], lhs[1:], value, ln, col, vcol)


def parse_pairs(e: Entry) -> dict[str, tuple[str, int]]:
    """``k=v k2=v2`` tokens of a compact query line."""
    out = {}
    pos = 0
    for tok in e.value.split():
        pos = e.value.index(tok, pos)
        c = e.value_col + pos
        if tok.count("=") != 1:
            raise DefinitionError(e.line, c, f"syntax error: expected key=value, got {tok!r}")
        k, v = tok.split("=")
        if not NAME.fullmatch(k) or not v:
            raise DefinitionError(e.line, c, f"syntax error: expected key=value, got {tok!r}")
        out[k] = (v, c)
        pos += len(tok)
    return out


# -- rationals and linear expressions ------------------------------------------

_RAT = re.compile(r"[+-]?\d+(?:/\d+)?")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][\w.']*\*?)|(?P<op>[-+*@]))")


def parse_rational(s: str, line: int, col: int):
    s = s.strip()
    if not _RAT.fullmatch(s):
        raise DefinitionError(line, col, f"syntax error: expected a rational literal p/q, got {s!r}")
    try:
        return Q(Fraction(s))
    except ZeroDivisionError:
        raise DefinitionError(line, col, "syntax error: zero denominator") from None


def _tokens(s: str, line: int, col: int):
    pos = 0
    out = []
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            if s[pos:].strip() == "":
                break
            raise DefinitionError(line, col + pos, f"syntax error: unexpected character {s[pos]!r}")
        kind = m.lastgroup
        start = m.start(kind)
        out.append((kind, m.group(kind), col + start))
        pos = m.end()
    return out


def parse_linear(s: str, line: int, col: int) -> list[tuple]:
    """``2*a + b - 1/3*c@d`` as ``[(coef, (names...), col), ...]``; ``0`` is empty."""
    toks = _tokens(s, line, col)
    if not toks:
        raise DefinitionError(line, col, "syntax error: empty expression")
    terms = []
    i = 0

    def expect_atom(i):
        if i >= len(toks) or toks[i][0] != "name":
            c = toks[i][2] if i < len(toks) else col + len(s)
            raise DefinitionError(line, c, "syntax error: expected a basis name")
        names = [toks[i][1]]
        c0 = toks[i][2]
        i += 1
        while i < len(toks) and toks[i][1] == "@":
            if i + 1 >= len(toks) or toks[i + 1][0] != "name":
                raise DefinitionError(line, toks[i][2], "syntax error: '@' must join basis names")
            names.append(toks[i + 1][1])
            i += 2
        return tuple(names), c0, i

    first = True
    while i < len(toks):
        sign = 1
        if toks[i][1] in "+-" and toks[i][0] == "op":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise DefinitionError(line, toks[i][2], "syntax error: expected '+' or '-'")
        first = False
        if i >= len(toks):
            raise DefinitionError(line, col + len(s), "syntax error: dangling sign")
        kind, text, c = toks[i]
        if kind == "num":
            coef = parse_rational(text, line, c)
            i += 1
            if i < len(toks) and toks[i][1] == "*":
                names, c0, i = expect_atom(i + 1)
                terms.append((sign * coef, names, c0))
            else:
                if coef != 0:
                    raise DefinitionError(line, c, "syntax error: bare constant; write c*name")
        else:
            names, c0, i = expect_atom(i)
            terms.append((sign, names, c0))
    return terms


def vector_of(terms, names: dict[str, int], line: int, what: str = "basis name") -> list:
    """Coordinates of single-name terms in the basis ``names``."""
    v = [0] * len(names)
    for coef, atom, c in terms:
        if len(atom) != 1:
            raise DefinitionError(line, c, "syntax error: tensor '@' not allowed here")
        if atom[0] not in names:
            raise DefinitionError(line, c, f"undefined reference: unknown {what} {atom[0]!r}")
        v[names[atom[0]]] += coef
    return [Q(x) for x in v]


def tensor_vector_of(terms, first: dict[str, int], second: dict[str, int], line: int) -> list:
    """Coordinates in the kron basis ``first (x) second`` of ``a@b`` terms."""
    n2 = len(second)
    v = [0] * (len(first) * n2)
    for coef, atom, c in terms:
        if len(atom) != 2:
            raise DefinitionError(line, c, "syntax error: expected a tensor a@b")
        a, b = atom
        if a not in first:
            raise DefinitionError(line, c, f"undefined reference: unknown basis name {a!r}")
        if b not in second:
            raise DefinitionError(line, c, f"undefined reference: unknown basis name {b!r}")
        v[first[a] * n2 + second[b]] += coef
    return [Q(x) for x in v]


def format_linear(vec, names, sep: str = "@", second=None) -> str:
    """Inverse of the parsers above; deterministic."""
    from ..exactla import fmt
    parts = []
    n2 = len(second) if second is not None else 1
    for i, x in enumerate(vec):
        if not x:
            continue
        atom = names[i] if second is None else f"{names[i // n2]}{sep}{second[i % n2]}"
        mag = -x if x < 0 else x
        coef = "" if mag == 1 else fmt(mag) + "*"
        parts.append(("-" if x < 0 else "+", coef + atom))
    if not parts:
        return "0"
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s
