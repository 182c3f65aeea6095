"""Compile path queries into evaluation plans and query text.

The text form uses Type / PropertyValue atoms over angle-bracketed IRIs
with subclass-extended Type semantics. The grammar is a documented
subset (docs/query-grammar.md) and this module's parser is its
reference consumer.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Optional, Union

from .errors import (
    MalformedIriError,
    QueryTextError,
    UnflaggedColumnError,
    UnknownSymbolError,
)
from .query import ClassNode, LiteralNode, PathQuery, QueryBuilder
from .rdf import Iri, Literal
from .reasoner import SubclassClosure, subclass_closure
from .schema import SchemaIndex

QUERY_TEXT_HEADER = "# ontoquery-ql v1"


# ---------------------------------------------------------------------------
# Evaluation plan


@dataclass(frozen=True)
class ExtendedTypeScan:
    """Bind a node to every instance of its class or any subclass."""

    node_id: int
    class_iri: Iri


@dataclass(frozen=True)
class EdgeJoin:
    """Keep rows where (subject instance, property, object instance) is
    asserted. Ids follow statement orientation, not tree orientation."""

    subject_id: int
    property: Iri
    object_id: int


@dataclass(frozen=True)
class InstanceRestrict:
    node_id: int
    op: str  # "any-of" | "none-of"
    instances: frozenset[Iri]


@dataclass(frozen=True)
class LiteralBind:
    """Bind a literal column to the datatype property's values at the
    parent node. Covers both the literal node and its edge."""

    node_id: int
    property: Iri
    from_node: int
    datatype: str


@dataclass(frozen=True)
class FilterApply:
    node_id: int
    comparator: str
    value: Literal


PlanStep = Union[ExtendedTypeScan, EdgeJoin, InstanceRestrict, LiteralBind, FilterApply]


@dataclass(frozen=True)
class EvaluationPlan:
    steps: tuple[PlanStep, ...]
    output_columns: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class SparqlText:
    text: str
    variable_map: dict[int, str]


def snake_label(text: str) -> str:
    out = re.sub(r"[^a-z0-9]+", "_", text.lower()).strip("_")
    return out or "node"


def _node_label(node, schema: SchemaIndex) -> str:
    if isinstance(node, LiteralNode):
        prop = schema.property_info(node.property)
        return prop.label if prop else node.property.local_name
    info = schema.class_info(node.class_iri)
    return info.label if info else node.class_iri.local_name


def variable_map(q: PathQuery, schema: SchemaIndex) -> dict[int, str]:
    """Ordinals are 1-based in node order, labels snake-cased."""
    return {
        n.node_id: f"?any_{snake_label(_node_label(n, schema))}{n.node_id + 1}"
        for n in q.nodes
    }


def output_columns(q: PathQuery, schema: SchemaIndex) -> tuple[tuple[int, str], ...]:
    return tuple((n.node_id, _node_label(n, schema)) for n in q.nodes)


def compile(q: PathQuery, schema: SchemaIndex, closure: SubclassClosure) -> EvaluationPlan:
    """One extended scan per concept node, one join per object edge, one
    bind per literal leaf; restrictions and filters trail their node's
    scan. Step order follows node ids, so it is rooted at node 0."""
    steps: list[PlanStep] = []
    for node in q.nodes:
        if isinstance(node, LiteralNode):
            steps.append(
                LiteralBind(
                    node_id=node.node_id,
                    property=node.property,
                    from_node=node.edge.parent_id,
                    datatype=node.datatype,
                )
            )
            for f in node.filters:
                steps.append(FilterApply(node.node_id, f.comparator, f.value))
            continue
        steps.append(ExtendedTypeScan(node.node_id, node.class_iri))
        if node.edge is not None:
            parent = node.edge.parent_id
            if node.edge.direction == "forward":
                steps.append(EdgeJoin(parent, node.edge.property, node.node_id))
            else:
                steps.append(EdgeJoin(node.node_id, node.edge.property, parent))
        if node.selection is not None:
            steps.append(
                InstanceRestrict(
                    node.node_id,
                    node.selection.mode,
                    frozenset(node.selection.instances),
                )
            )
    return EvaluationPlan(steps=tuple(steps), output_columns=output_columns(q, schema))


# ---------------------------------------------------------------------------
# Emission


def _quote(text: str) -> str:
    escaped = (
        text.replace("\\", "\\\\")
        .replace('"', '\\"')
        .replace("\n", "\\n")
        .replace("\r", "\\r")
        .replace("\t", "\\t")
    )
    return f'"{escaped}"'


def _constant(value: Literal) -> str:
    if value.datatype in ("integer", "decimal"):
        return str(value.numeric_value)
    if value.datatype == "boolean":
        return value.lexical
    return _quote(value.lexical)


def emit_sparql(q: PathQuery, schema: SchemaIndex) -> SparqlText:
    """Deterministic text for a query: same query, same bytes."""
    variables = variable_map(q, schema)
    lines = [QUERY_TEXT_HEADER, "SELECT " + " ".join(variables[n.node_id] for n in q.nodes), "WHERE {"]
    for node in q.nodes:
        var = variables[node.node_id]
        if isinstance(node, LiteralNode):
            parent_var = variables[node.edge.parent_id]
            lines.append(f"  PropertyValue({parent_var}, <{node.property.value}>, {var}).")
            continue
        if node.edge is not None:
            parent_var = variables[node.edge.parent_id]
            if node.edge.direction == "forward":
                subj, obj = parent_var, var
            else:
                subj, obj = var, parent_var
            lines.append(f"  PropertyValue({subj}, <{node.edge.property.value}>, {obj}).")
        lines.append(f"  Type({var}, <{node.class_iri.value}>).")
    for node in q.nodes:
        if isinstance(node, ClassNode) and node.selection is not None:
            var = variables[node.node_id]
            members = " ".join(f"<{i.value}>" for i in node.selection.instances)
            if node.selection.mode == "any-of":
                lines.append(f"  VALUES {var} {{ {members} }}")
            else:
                listed = ", ".join(f"<{i.value}>" for i in node.selection.instances)
                lines.append(f"  FILTER({var} NOT IN ({listed}))")
    for node in q.nodes:
        if isinstance(node, LiteralNode):
            var = variables[node.node_id]
            for f in node.filters:
                lines.append(f"  FILTER({var} {f.comparator} {_constant(f.value)})")
    lines.append("}")
    return SparqlText(text="\n".join(lines) + "\n", variable_map=variables)


# ---------------------------------------------------------------------------
# Parsing


_TOKEN_SPEC = [
    ("WS", re.compile(r"[ \t]+")),
    ("NEWLINE", re.compile(r"\r?\n")),
    ("COMMENT", re.compile(r"#[^\n]*")),
    ("IRIREF", re.compile(r"<([^<>\s]*)>")),
    ("VAR", re.compile(r"\?[A-Za-z_][A-Za-z0-9_]*")),
    ("STRING", re.compile(r'"(?:[^"\\\n]|\\.)*"')),
    ("NUMBER", re.compile(r"[+-]?(?:\d+\.\d+|\.\d+|\d+)(?:[eE][+-]?\d+)?")),
    ("IDENT", re.compile(r"[A-Za-z][A-Za-z0-9_]*")),
    ("NEQ", re.compile(r"!=")),
    ("LE", re.compile(r"<=")),
    ("GE", re.compile(r">=")),
    ("PUNCT", re.compile(r"[(){},.=<>]")),
]

_UNESCAPE = {"\\\\": "\\", '\\"': '"', "\\n": "\n", "\\r": "\r", "\\t": "\t"}


@dataclass(frozen=True)
class _Token:
    kind: str
    value: str
    line: int
    column: int


def _tokenize_query(text: str) -> list[_Token]:
    tokens = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        for kind, pattern in _TOKEN_SPEC:
            m = pattern.match(text, pos)
            if not m:
                continue
            value = m.group(0)
            if kind == "NEWLINE":
                line += 1
                col = 1
            elif kind in ("WS", "COMMENT"):
                col += len(value)
            else:
                tokens.append(_Token(kind, value, line, col))
                col += len(value)
            pos = m.end()
            break
        else:
            raise QueryTextError(f"unexpected character {text[pos]!r}", line, col)
    return tokens


def _unquote(raw: str) -> str:
    return re.sub(r"\\.", lambda m: _UNESCAPE.get(m.group(0), m.group(0)[1]), raw[1:-1])


class _QueryParser:
    def __init__(self, tokens: list[_Token], schema: SchemaIndex):
        self.tokens = tokens
        self.schema = schema
        self.pos = 0

    def _fail(self, message: str) -> None:
        if self.pos < len(self.tokens):
            t = self.tokens[self.pos]
            raise QueryTextError(message, t.line, t.column)
        last = self.tokens[-1] if self.tokens else None
        line = last.line if last else 1
        col = last.column + len(last.value) if last else 1
        raise QueryTextError(message + " (at end of input)", line, col)

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def next(self) -> _Token:
        t = self.peek()
        if t is None:
            self._fail("unexpected end of input")
        self.pos += 1
        return t

    def expect(self, kind: str, value: Optional[str] = None) -> _Token:
        t = self.peek()
        if t is None or t.kind != kind or (value is not None and t.value != value):
            want = value if value is not None else kind
            self._fail(f"expected {want!r}")
        return self.next()

    def expect_keyword(self, word: str) -> _Token:
        t = self.peek()
        if t is None or t.kind != "IDENT" or t.value != word:
            self._fail(f"expected {word!r}")
        return self.next()

    def parse_iri(self) -> Iri:
        t = self.expect("IRIREF")
        try:
            return Iri(t.value[1:-1])
        except MalformedIriError as exc:
            raise QueryTextError(str(exc), t.line, t.column) from exc


def parse_query_text(
    text: str, schema: SchemaIndex, closure: Optional[SubclassClosure] = None
) -> PathQuery:
    """Rebuild a query from its text form.

    The tree is recovered from variable order: the first selected
    variable is the root and every later variable must be linked to an
    earlier one by exactly one PropertyValue atom. Parsing revalidates
    each step against the schema, so semantically illegal text fails the
    same way interactive editing would.
    """
    stripped = text.lstrip("\r\n ").lstrip("\t")
    first_line = stripped.splitlines()[0].rstrip() if stripped else ""
    if first_line != QUERY_TEXT_HEADER:
        raise QueryTextError(f"first line must be {QUERY_TEXT_HEADER!r}", 1, 1)
    if closure is None:
        closure = subclass_closure(schema)

    # The header is consumed as a comment by the tokenizer.
    p = _QueryParser(_tokenize_query(text), schema)

    p.expect_keyword("SELECT")
    select_vars: list[str] = []
    while p.peek() is not None and p.peek().kind == "VAR":
        t = p.next()
        if t.value in select_vars:
            raise QueryTextError(f"duplicate variable {t.value}", t.line, t.column)
        select_vars.append(t.value)
    if not select_vars:
        p._fail("SELECT needs at least one variable")
    p.expect_keyword("WHERE")
    p.expect("PUNCT", "{")

    types: dict[str, tuple[Iri, _Token]] = {}
    prop_atoms: list[tuple[str, Iri, str, _Token]] = []
    selections: dict[str, tuple[str, list[Iri], _Token]] = {}
    filters: list[tuple[str, str, _Token, _Token]] = []

    def known_var(t: _Token) -> str:
        if t.value not in select_vars:
            raise UnflaggedColumnError(
                f"{t.value} is used at line {t.line} but not listed in SELECT"
            )
        return t.value

    while True:
        t = p.peek()
        if t is None:
            p._fail("expected '}'")
        if t.kind == "PUNCT" and t.value == "}":
            p.next()
            break
        if t.kind != "IDENT":
            p._fail("expected Type, PropertyValue, VALUES, FILTER or '}'")
        if t.value == "Type":
            p.next()
            p.expect("PUNCT", "(")
            var_tok = p.expect("VAR")
            var = known_var(var_tok)
            p.expect("PUNCT", ",")
            cls = p.parse_iri()
            p.expect("PUNCT", ")")
            p.expect("PUNCT", ".")
            if var in types:
                raise QueryTextError(
                    f"{var} already has a type atom", var_tok.line, var_tok.column
                )
            types[var] = (cls, var_tok)
        elif t.value == "PropertyValue":
            p.next()
            p.expect("PUNCT", "(")
            subj = known_var(p.expect("VAR"))
            p.expect("PUNCT", ",")
            prop = p.parse_iri()
            p.expect("PUNCT", ",")
            obj_tok = p.expect("VAR")
            obj = known_var(obj_tok)
            p.expect("PUNCT", ")")
            p.expect("PUNCT", ".")
            prop_atoms.append((subj, prop, obj, obj_tok))
        elif t.value == "VALUES":
            p.next()
            var_tok = p.expect("VAR")
            var = known_var(var_tok)
            p.expect("PUNCT", "{")
            members = []
            while p.peek() is not None and p.peek().kind == "IRIREF":
                members.append(p.parse_iri())
            p.expect("PUNCT", "}")
            if not members:
                raise QueryTextError("VALUES needs at least one IRI", var_tok.line, var_tok.column)
            if var in selections:
                raise QueryTextError(
                    f"{var} already has a selection", var_tok.line, var_tok.column
                )
            selections[var] = ("any-of", members, var_tok)
        elif t.value == "FILTER":
            p.next()
            p.expect("PUNCT", "(")
            var_tok = p.expect("VAR")
            var = known_var(var_tok)
            nxt = p.peek()
            if nxt is not None and nxt.kind == "IDENT" and nxt.value == "NOT":
                p.next()
                p.expect_keyword("IN")
                p.expect("PUNCT", "(")
                members = [p.parse_iri()]
                while p.peek() is not None and p.peek().kind == "PUNCT" and p.peek().value == ",":
                    p.next()
                    members.append(p.parse_iri())
                p.expect("PUNCT", ")")
                p.expect("PUNCT", ")")
                if var in selections:
                    raise QueryTextError(
                        f"{var} already has a selection", var_tok.line, var_tok.column
                    )
                selections[var] = ("none-of", members, var_tok)
            else:
                op_tok = p.next()
                if op_tok.kind in ("NEQ", "LE", "GE"):
                    comparator = op_tok.value
                elif op_tok.kind == "PUNCT" and op_tok.value in ("=", "<", ">"):
                    comparator = op_tok.value
                else:
                    raise QueryTextError(
                        "expected a comparison operator", op_tok.line, op_tok.column
                    )
                value_tok = p.next()
                filters.append((var, comparator, value_tok, var_tok))
                p.expect("PUNCT", ")")
        else:
            p._fail("expected Type, PropertyValue, VALUES, FILTER or '}'")

    if p.peek() is not None:
        p._fail("trailing content after '}'")

    return _rebuild(
        schema, closure, select_vars, types, prop_atoms, selections, filters
    )


def _parse_constant(tok: _Token) -> Literal:
    if tok.kind == "NUMBER":
        try:
            if re.fullmatch(r"[+-]?\d+", tok.value):
                return Literal.integer(tok.value)
            return Literal(lexical=str(Decimal(tok.value)), datatype="decimal")
        except InvalidOperation as exc:
            raise QueryTextError(f"bad number {tok.value!r}", tok.line, tok.column) from exc
    if tok.kind == "STRING":
        return Literal.string(_unquote(tok.value))
    if tok.kind == "IDENT" and tok.value in ("true", "false"):
        return Literal.boolean(tok.value == "true")
    raise QueryTextError("expected a number, string, or boolean", tok.line, tok.column)


def _rebuild(
    schema: SchemaIndex,
    closure: SubclassClosure,
    select_vars: list[str],
    types: dict[str, tuple[Iri, _Token]],
    prop_atoms: list[tuple[str, Iri, str, _Token]],
    selections: dict[str, tuple[str, list[Iri], _Token]],
    filters: list[tuple[str, str, _Token, _Token]],
) -> PathQuery:
    root_var = select_vars[0]
    if root_var not in types:
        raise QueryTextError(f"{root_var} needs a Type atom", 1, 1)
    for _, prop, _, tok in prop_atoms:
        if schema.property_info(prop) is None:
            raise UnknownSymbolError(f"unknown property {prop} at line {tok.line}")
    for var, (cls, tok) in types.items():
        if schema.class_info(cls) is None:
            raise UnknownSymbolError(f"unknown class {cls} at line {tok.line}")

    root_cls, _ = types[root_var]
    builder = QueryBuilder(schema, closure, root_cls)
    node_ids: dict[str, int] = {root_var: 0}
    consumed = [False] * len(prop_atoms)

    for var in select_vars[1:]:
        attach = None
        for idx, (subj, prop, obj, tok) in enumerate(prop_atoms):
            if consumed[idx]:
                continue
            info = schema.property_info(prop)
            if info.kind == "data":
                if obj != var or subj not in node_ids:
                    continue
                candidate = ("literal", idx, subj, prop, tok)
            elif subj in node_ids and obj == var:
                candidate = ("forward", idx, subj, prop, tok)
            elif obj in node_ids and subj == var:
                candidate = ("inverse", idx, obj, prop, tok)
            else:
                continue
            if attach is not None:
                raise QueryTextError(
                    f"{var} is linked by more than one statement", tok.line, tok.column
                )
            attach = candidate
        if attach is None:
            raise QueryTextError(
                f"{var} is not linked to any earlier variable; order variables"
                " so each one connects to one before it",
                1,
                1,
            )
        mode, idx, parent_var, prop, tok = attach
        consumed[idx] = True
        if mode == "literal":
            if var in types:
                _, type_tok = types[var]
                raise QueryTextError(
                    f"{var} binds a literal value and cannot have a Type atom",
                    type_tok.line,
                    type_tok.column,
                )
            node_ids[var] = builder.add_literal_step(node_ids[parent_var], prop)
        else:
            if var not in types:
                raise QueryTextError(f"{var} needs a Type atom", tok.line, tok.column)
            cls, _ = types[var]
            node_ids[var] = builder.add_object_step(
                node_ids[parent_var], prop, cls, direction=mode
            )

    for idx, (subj, prop, obj, tok) in enumerate(prop_atoms):
        if not consumed[idx]:
            raise QueryTextError(
                "statement does not extend the query tree (duplicate or cycle)",
                tok.line,
                tok.column,
            )

    for var, (mode, members, tok) in selections.items():
        node = builder.query.node(node_ids[var])
        if isinstance(node, LiteralNode):
            raise QueryTextError(
                f"{var} binds a literal value; use FILTER comparisons instead",
                tok.line,
                tok.column,
            )
        builder.set_selection(node_ids[var], mode, members)

    for var, comparator, value_tok, var_tok in filters:
        node = builder.query.node(node_ids[var])
        if not isinstance(node, LiteralNode):
            raise QueryTextError(
                f"{var} holds instances; FILTER comparisons apply to literal values",
                var_tok.line,
                var_tok.column,
            )
        builder.add_filter(node_ids[var], comparator, _parse_constant(value_tok))

    return builder.query
