"""Source text -> s-expression datums, with 1-based source positions.

The reader accepts both `(...)` and `[...]` (a bracket must close the kind
that opened it), quote shorthands, dotted pairs, `#(...)` vectors, `#t`/`#f`,
64-bit integers, and floating-point reals.  `;` comments run to end of line.
"""

import re

from .errors import LexError, ParseError
from .values import INT64_MAX, INT64_MIN, NIL, SourcePair, intern

LPAREN = "lparen"
RPAREN = "rparen"
LBRACKET = "lbracket"
RBRACKET = "rbracket"
QUOTE = "quote"
QUASIQUOTE = "quasiquote"
UNQUOTE = "unquote"
UNQUOTE_SPLICING = "unquote-splicing"
VECTOR_OPEN = "vector-open"
BOOLEAN = "boolean"
INTEGER = "integer"
REAL = "real"
STRING = "string"
SYMBOL = "symbol"
DOT = "dot"
EOF = "eof"


class Token:
    __slots__ = ("kind", "text", "line", "col", "value")

    def __init__(self, kind, text, line, col, value=None):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col
        self.value = value

    def __repr__(self):
        return f"Token({self.kind}, {self.text!r}, {self.line}:{self.col})"


class SourceDatum:
    __slots__ = ("value", "line", "col")

    def __init__(self, value, line, col):
        self.value = value
        self.line = line
        self.col = col


_DELIMITERS = frozenset(" \t\r\n()[]\";'`,")
_WHITESPACE = frozenset(" \t\r\n")
_STRING_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}

_INT_RE = re.compile(r"[+-]?[0-9]+\Z")
_REAL_RE = re.compile(r"[+-]?[0-9]+(?:\.[0-9]*)?(?:[eE][+-]?[0-9]+)?\Z")


def tokenize(text):
    """Lex `text` into a token list terminated by an `eof` token."""
    tokens = []
    i = 0
    n = len(text)
    line = 1
    col = 1
    while i < n:
        ch = text[i]
        if ch in _WHITESPACE:
            if ch == "\n":
                line += 1
                col = 1
            else:
                col += 1
            i += 1
            continue
        if ch == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch == "(":
            tokens.append(Token(LPAREN, "(", line, col))
            i += 1
            col += 1
            continue
        if ch == ")":
            tokens.append(Token(RPAREN, ")", line, col))
            i += 1
            col += 1
            continue
        if ch == "[":
            tokens.append(Token(LBRACKET, "[", line, col))
            i += 1
            col += 1
            continue
        if ch == "]":
            tokens.append(Token(RBRACKET, "]", line, col))
            i += 1
            col += 1
            continue
        if ch == "'":
            tokens.append(Token(QUOTE, "'", line, col))
            i += 1
            col += 1
            continue
        if ch == "`":
            tokens.append(Token(QUASIQUOTE, "`", line, col))
            i += 1
            col += 1
            continue
        if ch == ",":
            if i + 1 < n and text[i + 1] == "@":
                tokens.append(Token(UNQUOTE_SPLICING, ",@", line, col))
                i += 2
                col += 2
            else:
                tokens.append(Token(UNQUOTE, ",", line, col))
                i += 1
                col += 1
            continue
        if ch == '"':
            tok, i, line, col = _lex_string(text, i, line, col)
            tokens.append(tok)
            continue
        if ch == "#":
            tok, i, col = _lex_hash(text, i, line, col)
            tokens.append(tok)
            continue
        tok, i, col = _lex_atom(text, i, line, col)
        tokens.append(tok)
    tokens.append(Token(EOF, "", line, col))
    return tokens


def _lex_string(text, i, line, col):
    start_i, start_line, start_col = i, line, col
    n = len(text)
    i += 1
    col += 1
    parts = []
    while i < n and text[i] != '"':
        ch = text[i]
        if ch == "\\":
            if i + 1 >= n:
                break
            esc = text[i + 1]
            decoded = _STRING_ESCAPES.get(esc)
            if decoded is None:
                raise LexError(f"unknown string escape '\\{esc}'", line, col)
            parts.append(decoded)
            i += 2
            col += 2
        elif ch == "\n":
            parts.append(ch)
            i += 1
            line += 1
            col = 1
        else:
            parts.append(ch)
            i += 1
            col += 1
    if i >= n:
        raise LexError("unterminated string literal", start_line, start_col,
                       unexpected_eof=True)
    i += 1
    col += 1
    return (Token(STRING, text[start_i:i], start_line, start_col,
                  "".join(parts)),
            i, line, col)


def _lex_hash(text, i, line, col):
    n = len(text)
    nxt = text[i + 1] if i + 1 < n else ""
    if nxt == "(":
        return Token(VECTOR_OPEN, "#(", line, col), i + 2, col + 2
    if nxt in ("t", "f"):
        after = text[i + 2] if i + 2 < n else ""
        if after and after not in _DELIMITERS:
            raise LexError(f"malformed boolean near '#{nxt}{after}'", line, col)
        return (Token(BOOLEAN, text[i:i + 2], line, col, nxt == "t"),
                i + 2, col + 2)
    raise LexError(f"illegal character sequence '#{nxt}'", line, col)


def _lex_atom(text, i, line, col):
    n = len(text)
    j = i
    while j < n and text[j] not in _DELIMITERS:
        j += 1
    lexeme = text[i:j]
    width = j - i
    if lexeme == ".":
        return Token(DOT, ".", line, col), j, col + width
    first = lexeme[0]
    looks_numeric = first.isdigit() or (
        first in "+-" and len(lexeme) > 1 and lexeme[1].isdigit())
    if looks_numeric:
        if _INT_RE.match(lexeme):
            value = int(lexeme)
            if not INT64_MIN <= value <= INT64_MAX:
                raise LexError(f"integer literal out of 64-bit range: {lexeme}",
                               line, col)
            return Token(INTEGER, lexeme, line, col, value), j, col + width
        if _REAL_RE.match(lexeme):
            return Token(REAL, lexeme, line, col, float(lexeme)), j, col + width
        raise LexError(f"malformed number '{lexeme}'", line, col)
    return Token(SYMBOL, lexeme, line, col), j, col + width


_QUOTE_NAMES = {
    QUOTE: "quote",
    QUASIQUOTE: "quasiquote",
    UNQUOTE: "unquote",
    UNQUOTE_SPLICING: "unquote-splicing",
}

_MATCHING_CLOSER = {LPAREN: RPAREN, LBRACKET: RBRACKET}
_CLOSERS = frozenset((RPAREN, RBRACKET))


def read_datum(tokens, pos=0):
    """Parse exactly one datum starting at `pos`; returns (SourceDatum, pos)."""
    value, dline, dcol, pos = _read(tokens, pos)
    return SourceDatum(value, dline, dcol), pos


def read_all(text):
    """Parse every datum in `text`; empty input yields an empty list."""
    tokens = tokenize(text)
    out = []
    pos = 0
    while tokens[pos].kind is not EOF:
        datum, pos = read_datum(tokens, pos)
        out.append(datum)
    return out


def _read(tokens, pos):
    tok = tokens[pos]
    kind = tok.kind
    if kind in (INTEGER, REAL, STRING, BOOLEAN):
        return tok.value, tok.line, tok.col, pos + 1
    if kind is SYMBOL:
        return intern(tok.text), tok.line, tok.col, pos + 1
    if kind in (LPAREN, LBRACKET):
        return _read_list(tokens, pos)
    name = _QUOTE_NAMES.get(kind)
    if name is not None:
        inner, iline, icol, pos = _read(tokens, pos + 1)
        tail = SourcePair(inner, NIL, (iline, icol))
        return (SourcePair(intern(name), tail, (tok.line, tok.col)),
                tok.line, tok.col, pos)
    if kind is VECTOR_OPEN:
        return _read_vector(tokens, pos)
    if kind is EOF:
        raise ParseError("unexpected end of input", tok.line, tok.col,
                         unexpected_eof=True)
    if kind in _CLOSERS:
        raise ParseError(f"unexpected '{tok.text}'", tok.line, tok.col)
    raise ParseError(f"'{tok.text}' is not the start of a datum",
                     tok.line, tok.col)


def _read_list(tokens, pos):
    open_tok = tokens[pos]
    closer = _MATCHING_CLOSER[open_tok.kind]
    pos += 1
    items = []
    tail = NIL
    while True:
        tok = tokens[pos]
        kind = tok.kind
        if kind is EOF:
            raise ParseError(f"unclosed '{open_tok.text}'",
                             open_tok.line, open_tok.col, unexpected_eof=True)
        if kind in _CLOSERS:
            if kind is not closer:
                raise ParseError(
                    f"mismatched delimiter: '{open_tok.text}' closed by "
                    f"'{tok.text}'", tok.line, tok.col)
            pos += 1
            break
        if kind is DOT:
            if not items:
                raise ParseError("'.' at start of list", tok.line, tok.col)
            tail, _, _, pos = _read(tokens, pos + 1)
            tok = tokens[pos]
            if tok.kind is EOF:
                raise ParseError(f"unclosed '{open_tok.text}'",
                                 open_tok.line, open_tok.col,
                                 unexpected_eof=True)
            if tok.kind is not closer:
                raise ParseError("expected a single datum after '.'",
                                 tok.line, tok.col)
            pos += 1
            break
        value, vline, vcol, pos = _read(tokens, pos)
        items.append((value, vline, vcol))
    result = tail
    for value, vline, vcol in reversed(items):
        result = SourcePair(value, result, (vline, vcol))
    if items:
        # The head pair of the list carries the open delimiter's position.
        result.loc = (open_tok.line, open_tok.col)
    return result, open_tok.line, open_tok.col, pos


def _read_vector(tokens, pos):
    open_tok = tokens[pos]
    pos += 1
    items = []
    while True:
        tok = tokens[pos]
        if tok.kind is EOF:
            raise ParseError("unclosed '#('", open_tok.line, open_tok.col,
                             unexpected_eof=True)
        if tok.kind is RPAREN:
            pos += 1
            break
        if tok.kind in (RBRACKET, DOT):
            raise ParseError(f"unexpected '{tok.text}' in vector",
                             tok.line, tok.col)
        value, _, _, pos = _read(tokens, pos)
        items.append(value)
    return items, open_tok.line, open_tok.col, pos
