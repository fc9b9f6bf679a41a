"""Flowsheet graph data model and JSON interchange.

A flowsheet is a directed graph of unit operations.  Node names such as
``hex-1/2`` or ``C-3`` carry the category, the equipment number and, for
heat exchangers with several streams, the sub-unit index.  Edges carry a
kind (material or signal) and material edges may carry a column stream
tag.  Mutations are checked so that every reachable instance is valid
and serializable.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from .errors import GraphInvariantError, SchemaError

MATERIAL = "material"
SIGNAL = "signal"
EDGE_KINDS = (MATERIAL, SIGNAL)

# Column stream tags: bottom/top inlets, bottom/top draws.
COLUMN_TAGS = ("bin", "tin", "bout", "tout")

_NAME_RE = re.compile(r"^([A-Za-z]+)-(\d+)(?:/(\d+))?$")


@dataclass(frozen=True)
class NodeRef:
    """Identity of one unit operation node.

    ``sub`` is only meaningful for heat exchangers, where the same piece
    of equipment appears once per stream passing through it.
    """

    category: str
    number: int
    sub: int | None = None

    def __post_init__(self):
        if not self.category or not self.category.isalpha():
            raise ValueError(f"bad category: {self.category!r}")
        if self.number < 1:
            raise ValueError(f"equipment number must be positive: {self.number!r}")
        if self.sub is not None:
            if self.category != "hex":
                raise ValueError("sub-unit index is only valid on hex nodes")
            if self.sub < 1:
                raise ValueError(f"sub-unit index must be positive: {self.sub!r}")

    @property
    def name(self) -> str:
        if self.sub is None:
            return f"{self.category}-{self.number}"
        return f"{self.category}-{self.number}/{self.sub}"

    @property
    def equipment(self) -> tuple[str, int]:
        return (self.category, self.number)

    @classmethod
    def parse(cls, name: str) -> NodeRef:
        m = _NAME_RE.match(name)
        if not m:
            raise ValueError(f"not a node name: {name!r}")
        sub = m.group(3)
        return cls(m.group(1), int(m.group(2)), int(sub) if sub is not None else None)


@dataclass(frozen=True)
class EdgeAttr:
    kind: str = MATERIAL
    tag: str | None = None

    def __post_init__(self):
        if self.kind not in EDGE_KINDS:
            raise ValueError(f"bad edge kind: {self.kind!r}")
        if self.tag is not None:
            if self.kind != MATERIAL:
                raise ValueError("stream tags are only valid on material edges")
            if self.tag not in COLUMN_TAGS:
                raise ValueError(f"bad stream tag: {self.tag!r}")


class FlowsheetGraph:
    """Mutable directed flowsheet graph keyed by node name."""

    def __init__(self):
        self._refs: dict[str, NodeRef] = {}
        self._ctrl: dict[str, str | None] = {}
        self._edges: list[tuple[str, str, EdgeAttr]] = []
        self._edge_keys: set[tuple[str, str, str]] = set()

    # -- nodes

    def add_node(self, node: NodeRef | str, ctrl: str | None = None) -> NodeRef:
        ref = node if isinstance(node, NodeRef) else NodeRef.parse(node)
        if ref.name in self._refs:
            raise GraphInvariantError(f"duplicate node: {ref.name}")
        if (ref.category == "C") != (ctrl is not None):
            raise GraphInvariantError(
                "control code is required on C nodes and forbidden elsewhere"
            )
        if ref.category == "hex":
            for other in self._refs.values():
                if other.equipment == ref.equipment and (other.sub is None) != (ref.sub is None):
                    raise GraphInvariantError(
                        f"cannot mix plain and sub-unit forms of {ref.category}-{ref.number}"
                    )
        self._refs[ref.name] = ref
        self._ctrl[ref.name] = ctrl
        return ref

    def has_node(self, name: str) -> bool:
        return name in self._refs

    def node_ref(self, name: str) -> NodeRef:
        return self._refs[name]

    def ctrl(self, name: str) -> str | None:
        return self._ctrl[name]

    def nodes(self) -> list[str]:
        return list(self._refs)

    # -- edges

    def add_edge(self, src: str, dst: str, kind: str = MATERIAL, tag: str | None = None) -> None:
        attr = EdgeAttr(kind, tag)
        for name in (src, dst):
            if name not in self._refs:
                raise GraphInvariantError(f"unknown node: {name}")
        if src == dst:
            raise GraphInvariantError(f"self loop on {src}")
        key = (src, dst, kind)
        if key in self._edge_keys:
            raise GraphInvariantError(f"duplicate {kind} edge {src} -> {dst}")
        if kind == MATERIAL:
            if self._refs[dst].category == "raw":
                raise GraphInvariantError(f"material edge into raw node {dst}")
            if self._refs[src].category == "prod":
                raise GraphInvariantError(f"material edge out of prod node {src}")
        self._edges.append((src, dst, attr))
        self._edge_keys.add(key)

    def edges(self) -> list[tuple[str, str, EdgeAttr]]:
        return list(self._edges)

    def out_edges(self, name: str, kind: str | None = None) -> list[tuple[str, EdgeAttr]]:
        return [
            (dst, attr)
            for src, dst, attr in self._edges
            if src == name and (kind is None or attr.kind == kind)
        ]

    def in_edges(self, name: str, kind: str | None = None) -> list[tuple[str, EdgeAttr]]:
        return [
            (src, attr)
            for src, dst, attr in self._edges
            if dst == name and (kind is None or attr.kind == kind)
        ]

    def material_in_degree(self, name: str) -> int:
        return len(self.in_edges(name, MATERIAL))

    def material_out_degree(self, name: str) -> int:
        return len(self.out_edges(name, MATERIAL))

    def equipment_groups(self) -> dict[tuple[str, int], list[str]]:
        """All nodes grouped by shared equipment, sub-units in order."""
        groups: dict[tuple[str, int], list[str]] = {}
        for name, ref in self._refs.items():
            groups.setdefault(ref.equipment, []).append(name)
        for members in groups.values():
            members.sort(key=lambda n: self._refs[n].sub or 0)
        return groups

    # -- comparison and copying

    def __eq__(self, other) -> bool:
        if not isinstance(other, FlowsheetGraph):
            return NotImplemented
        return (
            self._ctrl == other._ctrl
            and set(self._refs) == set(other._refs)
            and {(s, d, a.kind, a.tag) for s, d, a in self._edges}
            == {(s, d, a.kind, a.tag) for s, d, a in other._edges}
        )

    __hash__ = None  # mutable container

    def copy(self) -> FlowsheetGraph:
        g = FlowsheetGraph()
        for name, ref in self._refs.items():
            g.add_node(ref, ctrl=self._ctrl[name])
        for src, dst, attr in self._edges:
            g.add_edge(src, dst, kind=attr.kind, tag=attr.tag)
        return g


# -- JSON interchange

_NODE_KEYS = {"name", "ctrl"}
_EDGE_KEYS = {"src", "dst", "kind", "tag"}


def load_json(
    data: bytes | str | dict,
    strict: bool = True,
    warnings: list[str] | None = None,
) -> FlowsheetGraph:
    """Build a graph from its JSON document (text or parsed).

    Unknown keys are rejected in strict mode and reported through
    ``warnings`` otherwise.  Structural violations raise
    GraphInvariantError, malformed documents raise SchemaError.
    """
    if isinstance(data, (bytes, str)):
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from exc
    else:
        doc = data

    def warn(msg: str):
        if warnings is not None:
            warnings.append(msg)

    if not isinstance(doc, dict):
        raise SchemaError("top level must be an object")
    extra = set(doc) - {"nodes", "edges"}
    if extra:
        if strict:
            raise SchemaError(f"unknown keys: {sorted(extra)}", field=sorted(extra)[0])
        warn(f"ignoring unknown keys: {sorted(extra)}")
    for field in ("nodes", "edges"):
        if field not in doc:
            raise SchemaError(f"missing field: {field}", field=field)
        if not isinstance(doc[field], list):
            raise SchemaError(f"{field} must be a list", field=field)

    g = FlowsheetGraph()
    for i, item in enumerate(doc["nodes"]):
        where = f"nodes[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(f"{where} must be an object", field=where)
        extra = set(item) - _NODE_KEYS
        if extra:
            if strict:
                raise SchemaError(f"{where} has unknown keys: {sorted(extra)}", field=where)
            warn(f"{where}: ignoring unknown keys {sorted(extra)}")
        if "name" not in item or not isinstance(item["name"], str):
            raise SchemaError(f"{where}.name must be a string", field=f"{where}.name")
        ctrl = item.get("ctrl")
        if ctrl is not None and not isinstance(ctrl, str):
            raise SchemaError(f"{where}.ctrl must be a string or null", field=f"{where}.ctrl")
        try:
            ref = NodeRef.parse(item["name"])
        except ValueError as exc:
            raise SchemaError(f"{where}.name: {exc}", field=f"{where}.name") from exc
        g.add_node(ref, ctrl=ctrl)

    for i, item in enumerate(doc["edges"]):
        where = f"edges[{i}]"
        if not isinstance(item, dict):
            raise SchemaError(f"{where} must be an object", field=where)
        extra = set(item) - _EDGE_KEYS
        if extra:
            if strict:
                raise SchemaError(f"{where} has unknown keys: {sorted(extra)}", field=where)
            warn(f"{where}: ignoring unknown keys {sorted(extra)}")
        for k in ("src", "dst"):
            if k not in item or not isinstance(item[k], str):
                raise SchemaError(f"{where}.{k} must be a string", field=f"{where}.{k}")
        kind = item.get("kind", MATERIAL)
        tag = item.get("tag")
        if kind not in EDGE_KINDS:
            raise SchemaError(f"{where}.kind must be material or signal", field=f"{where}.kind")
        if tag is not None and tag not in COLUMN_TAGS:
            raise SchemaError(f"{where}.tag must be one of {COLUMN_TAGS}", field=f"{where}.tag")
        g.add_edge(item["src"], item["dst"], kind=kind, tag=tag)
    return g


def save_json(graph: FlowsheetGraph) -> bytes:
    """Serialize to the canonical byte form: sorted, indented, newline-terminated."""
    doc = {
        "nodes": [
            {"name": name, "ctrl": graph.ctrl(name)} for name in sorted(graph.nodes())
        ],
        "edges": [
            {"src": src, "dst": dst, "kind": attr.kind, "tag": attr.tag}
            for src, dst, attr in sorted(
                graph.edges(), key=lambda e: (e[0], e[1], e[2].kind)
            )
        ],
    }
    return (json.dumps(doc, indent=2) + "\n").encode("utf-8")
