"""Subset Turtle parser.

Supported: @prefix/@base and SPARQL-style PREFIX/BASE, IRIs and prefixed
names, the "a" keyword, ";" predicate lists, "," object lists, labelled
blank nodes, single-line string literals with @lang or ^^datatype, and bare
integers/decimals. Collections ``( )``, anonymous blank nodes ``[ ]`` and
multi-line strings are out of the subset and raise UnsupportedConstruct.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from .model import Literal, RDF_NS, RdfParseError, Triple, UnsupportedConstruct, resolve_iri


class TurtleSyntaxError(RdfParseError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, column {col}: {message}")


class UndefinedPrefix(RdfParseError):
    def __init__(self, prefix: str, line: int, col: int):
        self.prefix = prefix
        super().__init__(f"line {line}, column {col}: undefined prefix {prefix + ':'!r}")


@dataclass(frozen=True)
class _Token:
    kind: str  # IRIREF PNAME BLANK STRING NUMBER WORD DIRECTIVE LANGTAG DTYPE PUNCT EOF
    value: str
    line: int
    col: int
    extra: str = ""


_WS = re.compile(r"(?:[ \t\r\n]+|#[^\n]*)+")
_NUMBER = re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)")
_PNAME = re.compile(r"((?:[^\W\d][\w.\-]*)?):([\w.\-%]*)")
_WORD = re.compile(r"[^\W\d][\w\-]*")
_BLANK = re.compile(r"_:[\w.\-]*")
_LANG = re.compile(r"[A-Za-z]+(?:-[A-Za-z0-9]+)*")
_STRING_ESCAPES = {
    "t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f",
    '"': '"', "'": "'", "\\": "\\",
}


class _Lexer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def _advance(self, count: int) -> None:
        chunk = self.text[self.pos : self.pos + count]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.col = count - chunk.rfind("\n")
        else:
            self.col += count
        self.pos += count

    def error(self, message: str) -> TurtleSyntaxError:
        return TurtleSyntaxError(message, self.line, self.col)

    def next_token(self) -> _Token:
        ws = _WS.match(self.text, self.pos)
        if ws:
            self._advance(ws.end() - self.pos)
        if self.pos >= len(self.text):
            return _Token("EOF", "", self.line, self.col)
        line, col = self.line, self.col
        ch = self.text[self.pos]

        if ch == "<":
            return self._iriref(line, col)
        if ch in "\"'":
            if self.text[self.pos : self.pos + 3] in ('"""', "'''"):
                raise UnsupportedConstruct("multi-line string", f"line {line}")
            return self._string(ch, line, col)
        if ch == "@":
            self._advance(1)
            word = _LANG.match(self.text, self.pos)
            if not word:
                raise self.error("expected directive or language tag after '@'")
            value = word.group(0)
            self._advance(len(value))
            if value in ("prefix", "base"):
                return _Token("DIRECTIVE", "@" + value, line, col)
            return _Token("LANGTAG", value, line, col)
        if ch == "^":
            if self.text[self.pos : self.pos + 2] == "^^":
                self._advance(2)
                return _Token("DTYPE", "^^", line, col)
            raise self.error("lone '^' (expected '^^')")
        if ch in "([":
            construct = "collection" if ch == "(" else "anonymous blank node"
            raise UnsupportedConstruct(construct, f"line {line}, column {col}")
        if ch in ")]":
            raise self.error(f"unbalanced {ch!r}")
        if ch == "_" and self.text[self.pos : self.pos + 2] == "_:":
            m = _BLANK.match(self.text, self.pos)
            label = m.group(0).rstrip(".")
            if label == "_:":
                raise self.error("blank node label missing")
            self._advance(len(label))
            return _Token("BLANK", label, line, col)
        num = _NUMBER.match(self.text, self.pos)
        if num and (ch.isdigit() or (ch in "+-." and len(num.group(0)) > 1)):
            self._advance(len(num.group(0)))
            return _Token("NUMBER", num.group(0), line, col)
        if ch in ".;,":
            self._advance(1)
            return _Token("PUNCT", ch, line, col)
        pname = _PNAME.match(self.text, self.pos)
        if pname:
            local = pname.group(2)
            trimmed = len(local) - len(local.rstrip("."))
            local = local[: len(local) - trimmed] if trimmed else local
            consumed = pname.end() - self.pos - trimmed
            self._advance(consumed)
            return _Token("PNAME", pname.group(1), line, col, extra=local)
        word = _WORD.match(self.text, self.pos)
        if word:
            self._advance(len(word.group(0)))
            return _Token("WORD", word.group(0), line, col)
        raise self.error(f"unexpected character {ch!r}")

    def _iriref(self, line: int, col: int) -> _Token:
        end = self.pos + 1
        text = self.text
        while end < len(text) and text[end] != ">":
            if text[end] in "\n\r":
                raise TurtleSyntaxError("newline inside IRI", line, col)
            end += 1
        if end >= len(text):
            raise TurtleSyntaxError("unterminated IRI", line, col)
        raw = text[self.pos + 1 : end]
        if any(c in raw for c in ' "{}|^`') or any(ord(c) < 0x20 for c in raw):
            raise TurtleSyntaxError(f"illegal character in IRI <{raw}>", line, col)
        self._advance(end + 1 - self.pos)
        return _Token("IRIREF", self._unescape(raw, line, col, iri=True), line, col)

    def _string(self, quote: str, line: int, col: int) -> _Token:
        text = self.text
        end = self.pos + 1
        while end < len(text):
            c = text[end]
            if c == "\\":
                end += 2
                continue
            if c == quote:
                break
            if c in "\n\r":
                raise TurtleSyntaxError("newline inside string literal", line, col)
            end += 1
        if end >= len(text):
            raise TurtleSyntaxError("unterminated string literal", line, col)
        raw = text[self.pos + 1 : end]
        self._advance(end + 1 - self.pos)
        return _Token("STRING", self._unescape(raw, line, col), line, col)

    def _unescape(self, raw: str, line: int, col: int, iri: bool = False) -> str:
        if "\\" not in raw:
            return raw
        out: list[str] = []
        i = 0
        while i < len(raw):
            c = raw[i]
            if c != "\\":
                out.append(c)
                i += 1
                continue
            if i + 1 >= len(raw):
                raise TurtleSyntaxError("dangling backslash", line, col)
            esc = raw[i + 1]
            if esc in ("u", "U"):
                width = 4 if esc == "u" else 8
                digits = raw[i + 2 : i + 2 + width]
                if len(digits) != width:
                    raise TurtleSyntaxError(f"bad \\{esc} escape", line, col)
                try:
                    out.append(chr(int(digits, 16)))
                except ValueError:
                    raise TurtleSyntaxError(f"bad \\{esc} escape", line, col) from None
                i += 2 + width
            elif not iri and esc in _STRING_ESCAPES:
                out.append(_STRING_ESCAPES[esc])
                i += 2
            else:
                raise TurtleSyntaxError(f"unknown escape \\{esc}", line, col)
        return "".join(out)


class _Parser:
    def __init__(self, text: str, base: str):
        self.lexer = _Lexer(text)
        self.base = base
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._peeked: _Token | None = None

    def peek(self) -> _Token:
        if self._peeked is None:
            self._peeked = self.lexer.next_token()
        return self._peeked

    def take(self) -> _Token:
        tok = self.peek()
        self._peeked = None
        return tok

    def expect_punct(self, symbol: str) -> None:
        tok = self.take()
        if tok.kind != "PUNCT" or tok.value != symbol:
            raise TurtleSyntaxError(
                f"expected {symbol!r}, found {tok.value or tok.kind!r}", tok.line, tok.col
            )

    def parse(self) -> list[Triple]:
        while True:
            tok = self.peek()
            if tok.kind == "EOF":
                return self.triples
            if tok.kind == "DIRECTIVE":
                self.take()
                self.directive(tok.value, trailing_dot=True)
            elif tok.kind == "WORD" and tok.value.lower() in ("prefix", "base"):
                self.take()
                self.directive("@" + tok.value.lower(), trailing_dot=False)
            else:
                self.triples_statement()

    def directive(self, which: str, trailing_dot: bool) -> None:
        if which == "@prefix":
            name = self.take()
            if name.kind != "PNAME" or name.extra:
                raise TurtleSyntaxError(
                    "expected 'prefix:' in prefix declaration", name.line, name.col
                )
            target = self.take()
            if target.kind != "IRIREF":
                raise TurtleSyntaxError("expected IRI in prefix declaration", target.line, target.col)
            self.prefixes[name.value] = resolve_iri(self.base, target.value)
        else:
            target = self.take()
            if target.kind != "IRIREF":
                raise TurtleSyntaxError("expected IRI in base declaration", target.line, target.col)
            self.base = resolve_iri(self.base, target.value)
        if trailing_dot:
            self.expect_punct(".")

    def triples_statement(self) -> None:
        subject = self.term(position="subject")
        while True:
            predicate = self.verb()
            while True:
                self.triples.append(Triple(subject, predicate, self.term(position="object")))
                tok = self.peek()
                if tok.kind == "PUNCT" and tok.value == ",":
                    self.take()
                    continue
                break
            tok = self.take()
            if tok.kind == "PUNCT" and tok.value == ";":
                while True:
                    nxt = self.peek()
                    if nxt.kind == "PUNCT" and nxt.value == ";":
                        self.take()
                        continue
                    break
                if nxt.kind == "PUNCT" and nxt.value == ".":
                    self.take()
                    return
                continue
            if tok.kind == "PUNCT" and tok.value == ".":
                return
            raise TurtleSyntaxError(
                f"expected ';', ',' or '.', found {tok.value or tok.kind!r}", tok.line, tok.col
            )

    def verb(self) -> str:
        tok = self.peek()
        if tok.kind == "WORD" and tok.value == "a":
            self.take()
            return RDF_NS + "type"
        return self.iri("predicate")

    def iri(self, position: str) -> str:
        tok = self.take()
        if tok.kind == "IRIREF":
            return resolve_iri(self.base, tok.value)
        if tok.kind == "PNAME":
            if tok.value not in self.prefixes:
                raise UndefinedPrefix(tok.value, tok.line, tok.col)
            return self.prefixes[tok.value] + tok.extra
        raise TurtleSyntaxError(
            f"expected IRI as {position}, found {tok.value or tok.kind!r}", tok.line, tok.col
        )

    def term(self, position: str) -> str | Literal:
        tok = self.peek()
        if tok.kind == "BLANK":
            self.take()
            return tok.value
        if tok.kind in ("IRIREF", "PNAME"):
            return self.iri(position)
        if position == "object":
            if tok.kind == "STRING":
                self.take()
                return self.literal_tail(tok.value)
            if tok.kind == "NUMBER":
                self.take()
                return Literal(tok.value)
        raise TurtleSyntaxError(
            f"expected {position}, found {tok.value or tok.kind!r}", tok.line, tok.col
        )

    def literal_tail(self, lexical: str) -> Literal:
        tok = self.peek()
        if tok.kind == "LANGTAG":
            self.take()
            return Literal(lexical, lang=tok.value)
        if tok.kind == "DTYPE":
            self.take()
            return Literal(lexical, datatype=self.iri("datatype"))
        return Literal(lexical)


def parse_turtle(body: bytes, base: str) -> list[Triple]:
    """Parse subset Turtle into triples; relative IRIs resolve against @base
    declarations, else ``base`` (normally the document URL)."""
    try:
        text = body.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise TurtleSyntaxError(f"not valid UTF-8: {exc}", 0, 0) from None
    return _Parser(text, base).parse()
