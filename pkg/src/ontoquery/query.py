"""Tree-shaped query model: validated step-by-step editing, instance
selections, literal filters, and an undo history of snapshots."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

from .errors import (
    DatatypeMismatchError,
    IncompatibleTargetError,
    InapplicablePropertyError,
    NonLeafRemovalError,
    NothingToUndoError,
    TypeMismatchError,
    UnknownClassError,
)
from .rdf import Iri, Literal
from .reasoner import SubclassClosure, properties_of, restriction_fillers
from .schema import SchemaIndex

COMPARATORS = ("=", "!=", "<", "<=", ">", ">=")
ORDER_COMPARATORS = ("<", "<=", ">", ">=")
SELECTION_MODES = ("any-of", "none-of")
NUMERIC_DATATYPES = ("integer", "decimal")


@dataclass(frozen=True)
class InstanceSelection:
    mode: str  # "any-of" | "none-of"
    instances: tuple[Iri, ...]


@dataclass(frozen=True)
class LiteralFilter:
    comparator: str
    value: Literal


@dataclass(frozen=True)
class EdgeRef:
    """How a non-root node hangs off its parent. ``forward`` means the
    parent's instance is the statement subject; ``inverse`` swaps that."""

    parent_id: int
    property: Iri
    direction: str  # "forward" | "inverse"


@dataclass(frozen=True)
class ClassNode:
    node_id: int
    class_iri: Iri
    edge: Optional[EdgeRef]  # None only for the root
    selection: Optional[InstanceSelection] = None


@dataclass(frozen=True)
class LiteralNode:
    """A datatype-property leaf: binds the property's value at the parent
    instance and optionally constrains it."""

    node_id: int
    property: Iri
    datatype: str
    edge: EdgeRef
    filters: tuple[LiteralFilter, ...] = ()


QueryNode = Union[ClassNode, LiteralNode]


@dataclass(frozen=True)
class PathQuery:
    """An immutable query snapshot. Node ids are 0..n-1 in insertion
    order; every child's id is greater than its parent's."""

    nodes: tuple[QueryNode, ...]

    def node(self, node_id: int) -> QueryNode:
        if 0 <= node_id < len(self.nodes):
            return self.nodes[node_id]
        raise ValueError(f"no node with id {node_id}")

    @property
    def root(self) -> ClassNode:
        return self.nodes[0]  # type: ignore[return-value]

    def children(self, node_id: int) -> list[QueryNode]:
        return [n for n in self.nodes if n.edge is not None and n.edge.parent_id == node_id]

    def is_leaf(self, node_id: int) -> bool:
        return not self.children(node_id)

    def class_nodes(self) -> list[ClassNode]:
        return [n for n in self.nodes if isinstance(n, ClassNode)]

    def literal_nodes(self) -> list[LiteralNode]:
        return [n for n in self.nodes if isinstance(n, LiteralNode)]


def _compatible(closure: SubclassClosure, a: Iri, b: Iri) -> bool:
    return a in closure.reachable.get(b, frozenset()) or b in closure.reachable.get(a, frozenset())


def _canonical_literal(value: Literal) -> str:
    if value.datatype in NUMERIC_DATATYPES:
        return str(value.numeric_value)
    return f"{value.datatype}:{value.lexical}"


def canonicalize(query: PathQuery, dataset: str) -> str:
    """A stable text form for caching: identical meaning gives identical
    text regardless of node ids or the order steps were added in."""

    by_parent: dict[int, list[QueryNode]] = {}
    for n in query.nodes:
        if n.edge is not None:
            by_parent.setdefault(n.edge.parent_id, []).append(n)

    def render(node: QueryNode) -> str:
        if isinstance(node, LiteralNode):
            filters = ",".join(
                sorted(f"{f.comparator}{_canonical_literal(f.value)}" for f in node.filters)
            )
            return f"L({node.edge.property.value}|{filters})"
        sel = ""
        if node.selection is not None:
            members = ",".join(sorted(i.value for i in node.selection.instances))
            sel = f"|{node.selection.mode}:{members}"
        rendered_children = sorted(
            (
                child.edge.property.value,
                child.edge.direction,
                render(child),
            )
            for child in by_parent.get(node.node_id, [])
        )
        inner = "".join(f"[{p}|{d}|{r}]" for p, d, r in rendered_children)
        return f"C({node.class_iri.value}{sel}{inner})"

    return f"oq1;ds={dataset};{render(query.root)}"


class QueryBuilder:
    """Mutable editor over immutable :class:`PathQuery` snapshots.

    Every successful edit pushes the prior snapshot onto the history;
    rejected edits leave both the query and the history untouched.
    ``instance_lookup``, when given, maps a class IRI to the identifiers
    an instance selection may legally draw from.
    """

    def __init__(
        self,
        schema: SchemaIndex,
        closure: SubclassClosure,
        root_class: Iri,
        instance_lookup: Optional[Callable[[Iri], set[Iri]]] = None,
    ):
        if schema.class_info(root_class) is None:
            raise UnknownClassError(root_class)
        self._schema = schema
        self._closure = closure
        self._lookup = instance_lookup
        self._query = PathQuery(nodes=(ClassNode(node_id=0, class_iri=root_class, edge=None),))
        self._history: list[PathQuery] = []

    @property
    def query(self) -> PathQuery:
        return self._query

    @property
    def history_depth(self) -> int:
        return len(self._history)

    def _commit(self, new_query: PathQuery) -> None:
        self._history.append(self._query)
        self._query = new_query

    def _class_node(self, node_id: int) -> ClassNode:
        node = self._query.node(node_id)
        if not isinstance(node, ClassNode):
            raise TypeMismatchError(f"node {node_id} carries a literal value, not instances")
        return node

    def _applicable(self, cls: Iri) -> set[Iri]:
        return {p.iri for p in properties_of(self._schema, self._closure, cls)}

    def _target_ranges(self, cls: Iri, prop_iri: Iri) -> set[Iri]:
        prop = self._schema.property_info(prop_iri)
        ranges = set(prop.ranges) if prop else set()
        ranges |= restriction_fillers(self._schema, self._closure, cls, prop_iri)
        return ranges

    def add_object_step(
        self, parent_id: int, property_iri: Iri, target_class: Iri, direction: str = "forward"
    ) -> int:
        """Grow the tree by one concept node reached over an object
        property, in either traversal direction. Returns the new id."""
        if direction not in ("forward", "inverse"):
            raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
        parent = self._class_node(parent_id)
        prop = self._schema.property_info(property_iri)
        if prop is None or prop.kind != "object":
            raise InapplicablePropertyError(
                f"{property_iri} is not a known object property"
            )
        if self._schema.class_info(target_class) is None:
            raise UnknownClassError(target_class)

        # On an inverse edge the target's instances are the statement
        # subjects, so applicability is judged from the target side.
        subject_class = parent.class_iri if direction == "forward" else target_class
        object_class = target_class if direction == "forward" else parent.class_iri
        if property_iri not in self._applicable(subject_class):
            raise InapplicablePropertyError(
                f"{prop.label!r} does not apply to instances of {subject_class}"
            )
        ranges = self._target_ranges(subject_class, property_iri)
        if ranges and not any(_compatible(self._closure, object_class, r) for r in ranges):
            raise IncompatibleTargetError(
                f"{object_class} is outside the value classes of {prop.label!r}"
            )

        node_id = len(self._query.nodes)
        edge = EdgeRef(parent_id=parent_id, property=property_iri, direction=direction)
        node = ClassNode(node_id=node_id, class_iri=target_class, edge=edge)
        self._commit(PathQuery(nodes=self._query.nodes + (node,)))
        return node_id

    def add_literal_step(self, parent_id: int, property_iri: Iri) -> int:
        """Bind a datatype property's value at the parent node. Returns
        the new leaf's id."""
        parent = self._class_node(parent_id)
        prop = self._schema.property_info(property_iri)
        if prop is None or prop.kind != "data":
            raise InapplicablePropertyError(
                f"{property_iri} is not a known datatype property"
            )
        if property_iri not in self._applicable(parent.class_iri):
            raise InapplicablePropertyError(
                f"{prop.label!r} does not apply to instances of {parent.class_iri}"
            )
        node_id = len(self._query.nodes)
        edge = EdgeRef(parent_id=parent_id, property=property_iri, direction="forward")
        node = LiteralNode(
            node_id=node_id, property=property_iri, datatype=prop.datatype or "string", edge=edge
        )
        self._commit(PathQuery(nodes=self._query.nodes + (node,)))
        return node_id

    def set_selection(self, node_id: int, mode: str, instances: list[Iri]) -> None:
        """Pin a concept node to named instances (``any-of``) or exclude
        named instances (``none-of``). Replaces any prior selection."""
        node = self._class_node(node_id)
        if mode not in SELECTION_MODES:
            raise ValueError(f"mode must be one of {SELECTION_MODES}, got {mode!r}")
        if not instances:
            raise ValueError("a selection needs at least one instance")
        if self._lookup is not None:
            allowed = self._lookup(node.class_iri)
            outside = sorted(i.value for i in instances if i not in allowed)
            if outside:
                raise TypeMismatchError(
                    f"not instances of {node.class_iri}: {', '.join(outside)}"
                )
        selection = InstanceSelection(mode=mode, instances=tuple(instances))
        nodes = list(self._query.nodes)
        nodes[node_id] = replace(node, selection=selection)
        self._commit(PathQuery(nodes=tuple(nodes)))

    def clear_selection(self, node_id: int) -> None:
        node = self._class_node(node_id)
        if node.selection is None:
            return
        nodes = list(self._query.nodes)
        nodes[node_id] = replace(node, selection=None)
        self._commit(PathQuery(nodes=tuple(nodes)))

    def add_filter(self, node_id: int, comparator: str, value: Literal) -> None:
        """Constrain a bound literal with a comparison against a constant.
        Ordering comparators require a numeric value kind."""
        node = self._query.node(node_id)
        if not isinstance(node, LiteralNode):
            raise TypeMismatchError(f"node {node_id} holds instances, not a literal value")
        if comparator not in COMPARATORS:
            raise ValueError(f"comparator must be one of {COMPARATORS}, got {comparator!r}")
        numeric_node = node.datatype in NUMERIC_DATATYPES
        numeric_value = value.datatype in NUMERIC_DATATYPES
        if comparator in ORDER_COMPARATORS and not numeric_node:
            raise DatatypeMismatchError(
                f"{comparator!r} needs a numeric value, but the bound value is {node.datatype}"
            )
        if numeric_node != numeric_value or (
            not numeric_node and value.datatype != node.datatype
        ):
            raise DatatypeMismatchError(
                f"cannot compare a {node.datatype} value with a {value.datatype} constant"
            )
        nodes = list(self._query.nodes)
        nodes[node_id] = replace(
            node, filters=node.filters + (LiteralFilter(comparator=comparator, value=value),)
        )
        self._commit(PathQuery(nodes=tuple(nodes)))

    def remove_node(self, node_id: int) -> None:
        """Drop a leaf. Inner nodes and the root stay put; removing them
        would orphan the steps built on top of them."""
        node = self._query.node(node_id)
        if node.edge is None:
            raise NonLeafRemovalError("the root anchors the query and cannot be removed")
        if not self._query.is_leaf(node_id):
            raise NonLeafRemovalError(
                f"node {node_id} still has steps attached; remove those first"
            )
        kept = [n for n in self._query.nodes if n.node_id != node_id]
        renumber = {n.node_id: i for i, n in enumerate(kept)}
        nodes = []
        for n in kept:
            edge = n.edge
            if edge is not None:
                edge = replace(edge, parent_id=renumber[edge.parent_id])
            nodes.append(replace(n, node_id=renumber[n.node_id], edge=edge))
        self._commit(PathQuery(nodes=tuple(nodes)))

    def undo(self) -> PathQuery:
        """Roll back the latest successful edit."""
        if not self._history:
            raise NothingToUndoError("no edits to undo")
        self._query = self._history.pop()
        return self._query
