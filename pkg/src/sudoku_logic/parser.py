"""Text syntax for formulas and proposition sets.

Grammar (whitespace between tokens is ignored)::

    formula := iff
    iff     := imp ("<->" imp)*              left-associative
    imp     := chain ("->" imp)?             right-associative
    chain   := unary (("&" | "|") unary)*    one operator per chain
    unary   := "!" unary | "T" | "F" | cellexpr | "(" formula ")"
    cellexpr:= CELL ("!~" INT | "~" INT | "==" INT | "||" CELL)

``&`` and ``|`` share a precedence tier, so mixing them in one chain without
parentheses is a parse error.  The printer emits ASCII only; ``!(rIcJ !~ d)``
is printed as ``rIcJ ~ d``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .board import B3, BoardParams, Cell, Prop
from .formula import (
    And,
    Atom,
    Bottom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    Top,
    BOTTOM,
    TOP,
    atom,
    equiv_of,
    parallel_of,
    approx_of,
)


class ParseError(ValueError):
    def __init__(self, offset: int, expected: str, found: str):
        self.offset = offset
        self.expected = expected
        self.found = found
        super().__init__(f"at offset {offset}: expected {expected}, found {found}")


_UNICODE = {
    "¬": "!",
    "∧": "&",
    "∨": "|",
    "⇒": "->",
    "→": "->",
    "⇔": "<->",
    "↔": "<->",
    "≉": "!~",
    "≈": "~",
    "≡": "==",
    "∥": "||",
    "⊤": "T",
    "⊥": "F",
}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<cell>r(?P<row>\d+)c(?P<col>\d+))
  | (?P<int>\d+)
  | (?P<op><->|->|!~|==|\|\||[!~&|()TF])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "cell", "int", an operator string, or "end"
    text: str
    offset: int
    value: object = None


def tokenize(text: str) -> list[Token]:
    out = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch in _UNICODE:
            sym = _UNICODE[ch]
            out.append(Token(sym, ch, pos))
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(pos, "a token", repr(ch))
        if m.lastgroup == "ws":
            pass
        elif m.group("cell"):
            out.append(Token("cell", m.group(0), pos, Cell(int(m.group("row")), int(m.group("col")))))
        elif m.group("int"):
            out.append(Token("int", m.group(0), pos, int(m.group(0))))
        else:
            op = m.group("op")
            out.append(Token(op, op, pos))
        pos = m.end()
    out.append(Token("end", "end of input", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, params: BoardParams):
        self.toks = tokenize(text)
        self.i = 0
        self.params = params

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.offset, expected, repr(t.text) if t.kind != "end" else t.text)

    def take(self, kind: str, expected: str | None = None) -> Token:
        if self.tok.kind != kind:
            self.fail(expected or repr(kind))
        t = self.tok
        self.i += 1
        return t

    def formula(self) -> Formula:
        left = self.imp()
        while self.tok.kind == "<->":
            self.i += 1
            left = Iff(left, self.imp())
        return left

    def imp(self) -> Formula:
        left = self.chain()
        if self.tok.kind == "->":
            self.i += 1
            return Implies(left, self.imp())
        return left

    def chain(self) -> Formula:
        left = self.unary()
        op = None
        while self.tok.kind in ("&", "|"):
            if op is not None and self.tok.kind != op:
                self.fail(f"{op!r} (mixing '&' and '|' needs parentheses)")
            op = self.tok.kind
            self.i += 1
            right = self.unary()
            left = And(left, right) if op == "&" else Or(left, right)
        return left

    def unary(self) -> Formula:
        t = self.tok
        if t.kind == "!":
            self.i += 1
            return Not(self.unary())
        if t.kind == "T":
            self.i += 1
            return TOP
        if t.kind == "F":
            self.i += 1
            return BOTTOM
        if t.kind == "(":
            self.i += 1
            f = self.formula()
            self.take(")", "')'")
            return f
        if t.kind == "cell":
            return self.cellexpr()
        self.fail("a formula")

    def _wrap(self, t: Token, build):
        try:
            return build()
        except ValueError as exc:
            raise ParseError(t.offset, "an in-range cell expression", str(exc)) from None

    def cellexpr(self) -> Formula:
        t = self.take("cell")
        cell = t.value
        params = self.params
        op = self.tok
        if op.kind == "||":
            self.i += 1
            other = self.take("cell", "a cell")
            return self._wrap(t, lambda: parallel_of(cell, other.value, params))
        if op.kind not in ("!~", "~", "=="):
            self.fail("'!~', '~', '==' or '||' after a cell")
        self.i += 1
        d = self.take("int", "a digit").value
        if op.kind == "!~":
            return self._wrap(t, lambda: atom(cell.row, cell.col, d, params))
        if op.kind == "~":
            return self._wrap(t, lambda: approx_of(cell, d, params))
        return self._wrap(t, lambda: equiv_of(cell, d, params))


def parse_formula(text: str, params: BoardParams = B3) -> Formula:
    p = _Parser(text, params)
    f = p.formula()
    if p.tok.kind != "end":
        p.fail("end of input")
    return f


def parse_prop_set(text: str, params: BoardParams = B3) -> frozenset[Prop]:
    """Propositions separated by commas or newlines; ``#`` starts a comment."""
    out = set()
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.split("#", 1)[0]
        col = 0
        for entry in body.split(","):
            if entry.strip():
                try:
                    f = parse_formula(entry, params)
                except ParseError as exc:
                    raise ParseError(offset + col + exc.offset, exc.expected, exc.found) from None
                if not isinstance(f, Atom):
                    lead = len(entry) - len(entry.lstrip())
                    raise ParseError(offset + col + lead, "an atomic proposition 'rIcJ !~ d'", repr(entry.strip()))
                out.add(f.prop)
            col += len(entry) + 1
        offset += len(line)
    return frozenset(out)


def format_prop_set(props) -> str:
    return "\n".join(str(p) for p in sorted(props))


# printing -------------------------------------------------------------------

# precedence tiers: iff < imp < chain < unary
_IFF, _IMP, _CHAIN, _UNARY = 1, 2, 3, 4
_OPS = {And: "&", Or: "|", Implies: "->", Iff: "<->"}


def _tier(f: Formula) -> int:
    t = type(f)
    if t is Iff:
        return _IFF
    if t is Implies:
        return _IMP
    if t is And or t is Or:
        return _CHAIN
    return _UNARY


class _Paren:
    __slots__ = ("f",)

    def __init__(self, f):
        self.f = f


def _paren_if(g: Formula, cond: bool):
    return _Paren(g) if cond else g


def print_formula(f: Formula) -> str:
    """Minimal-parenthesis ASCII rendering that :func:`parse_formula` reads back."""
    out: list[str] = []
    stack: list = [f]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            out.append(item)
        elif isinstance(item, _Paren):
            stack.extend((")", item.f, "("))
        else:
            out.append(_print_one(item, stack))
    return "".join(out)


def _print_one(g: Formula, stack: list) -> str:
    """Emit the text for ``g`` directly or push its pieces onto ``stack``."""
    t = type(g)
    if t is Atom:
        return str(g.prop)
    if t is Top:
        return "T"
    if t is Bottom:
        return "F"
    if t is Not:
        if type(g.arg) is Atom:
            p = g.arg.prop
            return f"{p.cell} ~ {p.digit}"
        stack.append(_paren_if(g.arg, _tier(g.arg) < _UNARY))
        return "!"
    if t is And or t is Or:
        ops = []
        h = g
        while type(h) is t:
            ops.append(h.right)
            h = h.left
        ops.append(h)
        ops.reverse()
        sym = f" {_OPS[t]} "
        first = ops[0]
        items: list = [_paren_if(first, _tier(first) < _CHAIN or (_tier(first) == _CHAIN and type(first) is not t))]
        for o in ops[1:]:
            items.append(sym)
            items.append(_paren_if(o, _tier(o) <= _CHAIN))
        stack.extend(reversed(items))
        return ""
    if t is Implies:
        stack.extend(reversed([_paren_if(g.left, _tier(g.left) <= _IMP), " -> ", _paren_if(g.right, _tier(g.right) < _IMP)]))
        return ""
    stack.extend(reversed([_paren_if(g.left, _tier(g.left) < _IFF), " <-> ", _paren_if(g.right, _tier(g.right) <= _IFF)]))
    return ""
