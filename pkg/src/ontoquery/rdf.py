"""RDF terms, triples, and the indexed in-memory graph.

One :class:`Graph` holds the triples of one dataset. Graphs are immutable
after construction, so any number of readers may share them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import Decimal, InvalidOperation
from typing import Iterable, Iterator, Optional, Union

from .errors import MalformedIriError

DATATYPES = ("string", "decimal", "integer", "boolean")
NUMERIC_DATATYPES = ("decimal", "integer")


@dataclass(frozen=True, slots=True)
class Iri:
    """An absolute IRI."""

    value: str

    def __post_init__(self):
        if not self.value:
            raise MalformedIriError("empty IRI")
        if ":" not in self.value:
            raise MalformedIriError(f"IRI has no scheme separator: {self.value!r}")
        if any(c in self.value for c in ' <>"{}|^`\\') or any(
            ord(c) <= 0x20 for c in self.value
        ):
            raise MalformedIriError(f"IRI contains forbidden characters: {self.value!r}")

    @property
    def local_name(self) -> str:
        value = self.value
        for sep in ("#", "/", ":"):
            head, found, tail = value.rpartition(sep)
            if found and tail:
                return tail
        return value

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class BlankNode:
    """A blank node, identified by a graph-local label."""

    label: str


@dataclass(frozen=True, slots=True)
class Literal:
    """A typed literal value.

    ``numeric_value`` is derived from the lexical form for the numeric
    datatypes and excluded from equality (lexical + datatype identify a
    literal).
    """

    lexical: str
    datatype: str = "string"
    numeric_value: Union[Decimal, int, None] = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self):
        if self.datatype not in DATATYPES:
            raise ValueError(f"unsupported literal datatype: {self.datatype}")
        if self.datatype == "integer":
            try:
                object.__setattr__(self, "numeric_value", int(self.lexical, 10))
            except ValueError:
                raise ValueError(f"not an integer lexical form: {self.lexical!r}")
        elif self.datatype == "decimal":
            try:
                object.__setattr__(self, "numeric_value", Decimal(self.lexical))
            except InvalidOperation:
                raise ValueError(f"not a decimal lexical form: {self.lexical!r}")
        elif self.datatype == "boolean":
            if self.lexical not in ("true", "false"):
                raise ValueError(f"not a boolean lexical form: {self.lexical!r}")
            object.__setattr__(self, "numeric_value", None)

    @classmethod
    def string(cls, value: str) -> "Literal":
        return cls(value, "string")

    @classmethod
    def integer(cls, value: int) -> "Literal":
        return cls(str(value), "integer")

    @classmethod
    def decimal(cls, value) -> "Literal":
        return cls(str(value), "decimal")

    @classmethod
    def boolean(cls, value: bool) -> "Literal":
        return cls("true" if value else "false", "boolean")

    @property
    def is_numeric(self) -> bool:
        return self.datatype in NUMERIC_DATATYPES


Term = Union[Iri, BlankNode, Literal]
Subject = Union[Iri, BlankNode]


def term_sort_key(term: Term):
    """Total, deterministic order over terms: IRIs, then blanks, then literals."""
    if isinstance(term, Iri):
        return (0, term.value)
    if isinstance(term, BlankNode):
        return (1, term.label)
    return (2, term.datatype, term.lexical)


@dataclass(frozen=True, slots=True)
class Triple:
    subject: Subject
    predicate: Iri
    object: Term

    def __post_init__(self):
        if isinstance(self.subject, Literal):
            raise ValueError("triple subject cannot be a literal")
        if not isinstance(self.predicate, Iri):
            raise ValueError("triple predicate must be an IRI")


class Graph:
    """An immutable, indexed triple set for one dataset.

    Indexes by subject, predicate, and object back every lookup; insertion
    order is preserved so iteration is deterministic for a given input.
    """

    def __init__(self, graph_id: str, triples: Iterable[Triple] = ()):
        self.id = graph_id
        self._triples = tuple(dict.fromkeys(triples))
        self._by_subject: dict = {}
        self._by_predicate: dict = {}
        self._by_object: dict = {}
        for t in self._triples:
            self._by_subject.setdefault(t.subject, []).append(t)
            self._by_predicate.setdefault(t.predicate, []).append(t)
            self._by_object.setdefault(t.object, []).append(t)

    @property
    def triples(self) -> tuple:
        return self._triples

    def __len__(self) -> int:
        return len(self._triples)

    def __iter__(self) -> Iterator[Triple]:
        return iter(self._triples)

    def __contains__(self, triple: Triple) -> bool:
        return triple in self._by_subject.get(triple.subject, ())

    def lookup(
        self,
        subject: Optional[Subject] = None,
        predicate: Optional[Iri] = None,
        obj: Optional[Term] = None,
    ) -> Iterator[Triple]:
        """Yield all triples matching the bound positions of the pattern.

        The most selective available index drives the scan; unbound
        positions match anything.
        """
        if subject is not None:
            candidates = self._by_subject.get(subject, ())
        elif obj is not None:
            candidates = self._by_object.get(obj, ())
        elif predicate is not None:
            candidates = self._by_predicate.get(predicate, ())
        else:
            candidates = self._triples
        for t in candidates:
            if predicate is not None and t.predicate != predicate:
                continue
            if obj is not None and t.object != obj:
                continue
            if subject is not None and t.subject != subject:
                continue
            yield t

    def subjects_of(self, predicate: Iri, obj: Term) -> Iterator[Subject]:
        for t in self.lookup(predicate=predicate, obj=obj):
            yield t.subject

    def objects_of(self, subject: Subject, predicate: Iri) -> Iterator[Term]:
        for t in self.lookup(subject=subject, predicate=predicate):
            yield t.object
