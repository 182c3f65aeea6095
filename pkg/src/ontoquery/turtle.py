"""Turtle reader and writer for the subset this engine consumes.

Supported constructs: ``@prefix`` directives, prefixed names, absolute
IRIs, the ``a`` keyword, predicate lists (``;``), object lists (``,``),
anonymous blank-node property lists (``[...]``, needed for restriction
harvesting), labelled blank nodes (``_:x``), and string / integer /
decimal / boolean literals (bare or ``^^``-typed). Collections, language
tags, and multiline strings are out of scope; datatypes outside the four
supported ones fall back to string with a logged warning.
"""

from __future__ import annotations

import logging
from decimal import Decimal, InvalidOperation
from typing import Iterator, Optional

from .errors import MalformedIriError, TurtleSyntaxError, UnresolvedPrefixError
from .rdf import BlankNode, Graph, Iri, Literal, Term, Triple, term_sort_key
from .vocab import RDF_TYPE, XSD_DATATYPES, XSD_NS

logger = logging.getLogger(__name__)

_ESCAPES = {"t": "\t", "n": "\n", "r": "\r", '"': '"', "\\": "\\"}

# Token kinds
_IRIREF = "iriref"
_PNAME = "pname"
_BLANK = "blank"
_STRING = "string"
_NUMBER = "number"
_KEYWORD = "keyword"  # a, true, false, @prefix
_PUNCT = "punct"  # . ; , [ ] ^^
_EOF = "eof"


class _Token:
    __slots__ = ("kind", "value", "line", "column")

    def __init__(self, kind, value, line, column):
        self.kind = kind
        self.value = value
        self.line = line
        self.column = column

    def __repr__(self):
        return f"<{self.kind} {self.value!r} @{self.line}:{self.column}>"


def _tokenize(text: str) -> Iterator[_Token]:
    line, col = 1, 1
    i, n = 0, len(text)

    def err(msg):
        raise TurtleSyntaxError(msg, line, col)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if c in " \t\r":
            i += 1
            col += 1
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        start_line, start_col = line, col
        if c == "<":
            j = text.find(">", i + 1)
            if j < 0 or "\n" in text[i:j]:
                err("unterminated IRI")
            value = text[i + 1 : j]
            col += j + 1 - i
            i = j + 1
            yield _Token(_IRIREF, value, start_line, start_col)
            continue
        if c == '"':
            j = i + 1
            out = []
            while True:
                if j >= n or text[j] == "\n":
                    err("unterminated string literal")
                ch = text[j]
                if ch == "\\":
                    if j + 1 >= n:
                        err("dangling escape in string literal")
                    esc = text[j + 1]
                    if esc == "u":
                        hexpart = text[j + 2 : j + 6]
                        if len(hexpart) < 4:
                            err("truncated \\u escape")
                        try:
                            out.append(chr(int(hexpart, 16)))
                        except ValueError:
                            err(f"bad \\u escape: {hexpart!r}")
                        j += 6
                        continue
                    if esc not in _ESCAPES:
                        err(f"unsupported escape: \\{esc}")
                    out.append(_ESCAPES[esc])
                    j += 2
                    continue
                if ch == '"':
                    break
                out.append(ch)
                j += 1
            col += j + 1 - i
            i = j + 1
            yield _Token(_STRING, "".join(out), start_line, start_col)
            continue
        if c == "^":
            if text[i : i + 2] != "^^":
                err("expected ^^")
            i += 2
            col += 2
            yield _Token(_PUNCT, "^^", start_line, start_col)
            continue
        if c in ".;,[]":
            # A dot may also start a decimal (.5); statement dots are
            # followed by whitespace/EOF in practice, digits are not.
            if c == "." and i + 1 < n and text[i + 1].isdigit():
                pass  # handled by the number branch below
            else:
                i += 1
                col += 1
                yield _Token(_PUNCT, c, start_line, start_col)
                continue
        if c == "@":
            j = i + 1
            while j < n and text[j].isalpha():
                j += 1
            word = text[i:j]
            if word != "@prefix":
                err(f"unsupported directive {word!r} (language tags are not supported)")
            col += j - i
            i = j
            yield _Token(_KEYWORD, "@prefix", start_line, start_col)
            continue
        if c.isdigit() or (c in "+-." and i + 1 < n and (text[i + 1].isdigit() or text[i + 1] == ".")):
            j = i
            if text[j] in "+-":
                j += 1
            seen_dot = False
            while j < n and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    # A trailing dot is the statement terminator, not a
                    # decimal point.
                    if j + 1 >= n or not text[j + 1].isdigit():
                        break
                    seen_dot = True
                j += 1
            value = text[i:j]
            col += j - i
            i = j
            yield _Token(_NUMBER, value, start_line, start_col)
            continue
        if c == "_" and text[i : i + 2] == "_:":
            j = i + 2
            while j < n and (text[j].isalnum() or text[j] in "_-"):
                j += 1
            if j == i + 2:
                err("blank node label missing")
            value = text[i + 2 : j]
            col += j - i
            i = j
            yield _Token(_BLANK, value, start_line, start_col)
            continue
        if c.isalpha() or c == ":" or c == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] in "_-.:"):
                j += 1
            # Trailing dots belong to the statement terminator.
            while j > i and text[j - 1] == ".":
                j -= 1
            word = text[i:j]
            col += j - i
            i = j
            if word in ("a", "true", "false"):
                yield _Token(_KEYWORD, word, start_line, start_col)
            elif ":" in word:
                yield _Token(_PNAME, word, start_line, start_col)
            else:
                raise TurtleSyntaxError(
                    f"expected a prefixed name, got {word!r}", start_line, start_col
                )
            continue
        err(f"unexpected character {c!r}")
    yield _Token(_EOF, None, line, col)


class _Parser:
    def __init__(self, text: str, graph_id: str):
        self.tokens = list(_tokenize(text))
        self.pos = 0
        self.graph_id = graph_id
        self.prefixes: dict[str, str] = {}
        self.triples: list[Triple] = []
        self._anon_count = 0
        self._explicit_blank_labels = {
            t.value for t in self.tokens if t.kind == _BLANK
        }

    # -- token helpers ----------------------------------------------------

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def next(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_punct(self, value: str) -> _Token:
        tok = self.next()
        if tok.kind != _PUNCT or tok.value != value:
            raise TurtleSyntaxError(
                f"expected {value!r}, got {tok.value!r}", tok.line, tok.column
            )
        return tok

    def fresh_blank(self) -> BlankNode:
        self._anon_count += 1
        label = f"b{self._anon_count}"
        while label in self._explicit_blank_labels:
            label += "x"
        return BlankNode(label)

    # -- grammar ----------------------------------------------------------

    def parse(self) -> Graph:
        while self.peek().kind != _EOF:
            if self.peek().kind == _KEYWORD and self.peek().value == "@prefix":
                self.parse_prefix()
            else:
                self.parse_statement()
        return Graph(self.graph_id, self.triples)

    def parse_prefix(self):
        self.next()  # @prefix
        tok = self.next()
        if tok.kind != _PNAME or not tok.value.endswith(":"):
            raise TurtleSyntaxError(
                "expected a prefix name ending in ':'", tok.line, tok.column
            )
        prefix = tok.value[:-1]
        iri_tok = self.next()
        if iri_tok.kind != _IRIREF:
            raise TurtleSyntaxError(
                "expected an IRI in @prefix", iri_tok.line, iri_tok.column
            )
        self.prefixes[prefix] = iri_tok.value
        self.expect_punct(".")

    def parse_statement(self):
        subject = self.parse_subject()
        # A bare [...] subject may close the statement without predicates.
        if not (isinstance(subject, BlankNode) and self.peek().value == "."):
            self.parse_predicate_object_list(subject)
        self.expect_punct(".")

    def parse_subject(self):
        tok = self.peek()
        if tok.kind in (_IRIREF, _PNAME):
            return self.parse_iri()
        if tok.kind == _BLANK:
            self.next()
            return BlankNode(tok.value)
        if tok.kind == _PUNCT and tok.value == "[":
            return self.parse_blank_property_list()
        raise TurtleSyntaxError(
            f"expected a subject, got {tok.value!r}", tok.line, tok.column
        )

    def parse_predicate_object_list(self, subject):
        while True:
            predicate = self.parse_verb()
            while True:
                obj = self.parse_object()
                self.triples.append(Triple(subject, predicate, obj))
                if self.peek().value == ",":
                    self.next()
                    continue
                break
            if self.peek().value == ";":
                self.next()
                # Allow a trailing semicolon before '.' or ']'.
                if self.peek().value in (".", "]"):
                    break
                continue
            break

    def parse_verb(self) -> Iri:
        tok = self.peek()
        if tok.kind == _KEYWORD and tok.value == "a":
            self.next()
            return RDF_TYPE
        if tok.kind in (_IRIREF, _PNAME):
            return self.parse_iri()
        raise TurtleSyntaxError(
            f"expected a predicate, got {tok.value!r}", tok.line, tok.column
        )

    def parse_object(self) -> Term:
        tok = self.peek()
        if tok.kind in (_IRIREF, _PNAME):
            return self.parse_iri()
        if tok.kind == _BLANK:
            self.next()
            return BlankNode(tok.value)
        if tok.kind == _PUNCT and tok.value == "[":
            return self.parse_blank_property_list()
        if tok.kind == _STRING:
            return self.parse_literal()
        if tok.kind == _NUMBER:
            self.next()
            if "." in tok.value:
                return Literal(tok.value, "decimal")
            return Literal(tok.value, "integer")
        if tok.kind == _KEYWORD and tok.value in ("true", "false"):
            self.next()
            return Literal(tok.value, "boolean")
        raise TurtleSyntaxError(
            f"expected an object, got {tok.value!r}", tok.line, tok.column
        )

    def parse_literal(self) -> Literal:
        tok = self.next()
        if self.peek().value == "^^":
            self.next()
            dt_tok = self.peek()
            dt_iri = self.parse_iri()
            datatype = XSD_DATATYPES.get(dt_iri.value)
            if datatype is None:
                logger.warning(
                    "datatype %s not supported, treating literal as string",
                    dt_iri.value,
                )
                datatype = "string"
            try:
                return Literal(tok.value, datatype)
            except ValueError as exc:
                raise TurtleSyntaxError(str(exc), dt_tok.line, dt_tok.column)
        return Literal(tok.value, "string")

    def parse_blank_property_list(self) -> BlankNode:
        open_tok = self.expect_punct("[")
        node = self.fresh_blank()
        if self.peek().value == "]":
            self.next()
            return node
        self.parse_predicate_object_list(node)
        tok = self.next()
        if tok.kind != _PUNCT or tok.value != "]":
            raise TurtleSyntaxError(
                "unterminated blank node property list", open_tok.line, open_tok.column
            )
        return node

    def parse_iri(self) -> Iri:
        tok = self.next()
        if tok.kind == _IRIREF:
            try:
                return Iri(tok.value)
            except MalformedIriError as exc:
                raise TurtleSyntaxError(str(exc), tok.line, tok.column)
        prefix, _, local = tok.value.partition(":")
        if prefix not in self.prefixes:
            raise UnresolvedPrefixError(
                f"prefix {prefix + ':'!r} is not declared", tok.line, tok.column
            )
        try:
            return Iri(self.prefixes[prefix] + local)
        except MalformedIriError as exc:
            raise TurtleSyntaxError(str(exc), tok.line, tok.column)


def load_turtle(document: str, graph_id: str) -> Graph:
    """Parse a Turtle document into a named graph.

    Anonymous blank nodes receive deterministic graph-unique labels, so
    parsing the same document twice yields identical graphs.
    """
    return _Parser(document, graph_id).parse()


def serialize_term(term: Term) -> str:
    if isinstance(term, Iri):
        return f"<{term.value}>"
    if isinstance(term, BlankNode):
        return f"_:{term.label}"
    if term.datatype == "string":
        escaped = (
            term.lexical.replace("\\", "\\\\")
            .replace('"', '\\"')
            .replace("\n", "\\n")
            .replace("\r", "\\r")
            .replace("\t", "\\t")
        )
        return f'"{escaped}"'
    if term.datatype in ("integer", "boolean"):
        return term.lexical
    # Decimal: bare form needs a decimal point to round-trip as decimal.
    if "." in term.lexical:
        return term.lexical
    return f'"{term.lexical}"^^<{XSD_NS}decimal>'


def serialize_turtle(graph: Graph) -> str:
    """Write a graph back out, one triple per line, in the deterministic
    (subject, predicate, object) lexicographic order."""
    lines = []
    ordered = sorted(
        graph.triples,
        key=lambda t: (
            term_sort_key(t.subject),
            term_sort_key(t.predicate),
            term_sort_key(t.object),
        ),
    )
    for t in ordered:
        lines.append(
            f"{serialize_term(t.subject)} {serialize_term(t.predicate)} "
            f"{serialize_term(t.object)} ."
        )
    return "\n".join(lines) + ("\n" if lines else "")
