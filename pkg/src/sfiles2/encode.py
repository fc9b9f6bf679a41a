"""Serialization of flowsheet graphs into SFILES 2.0 strings.

Emission runs in two passes.  ``traverse`` plans a DFS forest over the
ranked graph: tree edges become the written chain, back and repeated
edges become numbered recycle pairs, and the first edge from a new tree
into already written material becomes that tree's converging insertion
point.  ``emit`` then walks the finished plan and renders tokens,
assigning recycle, signal and equipment-group identifiers by first
textual appearance.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canon import RankTable, rank_graph
from .errors import EncodeError
from .model import MATERIAL, SIGNAL, FlowsheetGraph

GENERALIZED = "generalized"
NUMBERED = "numbered"
MODES = (GENERALIZED, NUMBERED)


class SfilesString(str):
    """A rendered SFILES string that remembers which form it is in."""

    mode: str = GENERALIZED

    def __new__(cls, value: str, mode: str = GENERALIZED):
        s = super().__new__(cls, value)
        s.mode = mode
        return s


@dataclass
class _Tree:
    index: int
    component: int
    root: str
    children: dict[str, list[tuple[str, str | None]]] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)
    # (source, merge target, tag) once this tree converges into earlier text
    anchor: tuple[str, str, str | None] | None = None


@dataclass
class EmissionPlan:
    dfs_forest: list[_Tree]
    trains: list[int]
    insertions: dict[str, list[int]]
    recycles: list[tuple[str, str, str | None]]
    rec_in: dict[str, list[int]]
    rec_out: dict[str, list[int]]
    sig_out: dict[str, list[tuple[str, str]]]
    sig_in: dict[str, list[tuple[str, str]]]
    group_of: dict[str, tuple[str, int]]
    recycle_ids: dict[int, int] = field(default_factory=dict)
    signal_ids: dict[tuple[str, str], int] = field(default_factory=dict)
    hex_group_ids: dict[tuple[str, int], int] = field(default_factory=dict)


@dataclass(frozen=True)
class _NodeTok:
    name: str


@dataclass(frozen=True)
class _Mark:
    kind: str  # rec_in, rec_out, sig_out, sig_in, group
    key: object


def _sorted_out(graph: FlowsheetGraph, name: str, rank: dict[str, int]):
    out = [
        (dst, attr.tag)
        for dst, attr in graph.out_edges(name, MATERIAL)
    ]
    out.sort(key=lambda e: rank[e[0]])
    return out


def _cycle_root(graph: FlowsheetGraph, unvisited: list[str], rank: dict[str, int]) -> str:
    pool = set(unvisited)
    movers = [n for n in unvisited if graph.material_out_degree(n) > 0]
    w = min(movers or unvisited, key=lambda n: rank[n])
    preds = [
        src
        for src, attr in graph.in_edges(w, MATERIAL)
        if src in pool
    ]
    if preds:
        return min(preds, key=lambda n: rank[n])
    return w


def _grow_tree(graph, tree, rank, visited, tree_of, recycles):
    visited.add(tree.root)
    tree_of[tree.root] = tree.index
    tree.order.append(tree.root)
    on_stack = {tree.root}
    stack = [(tree.root, iter(_sorted_out(graph, tree.root, rank)))]
    while stack:
        node, edges = stack[-1]
        step = next(edges, None)
        if step is None:
            stack.pop()
            on_stack.discard(node)
            continue
        dst, tag = step
        if dst not in visited:
            visited.add(dst)
            tree_of[dst] = tree.index
            tree.children.setdefault(node, []).append((dst, tag))
            tree.order.append(dst)
            stack.append((dst, iter(_sorted_out(graph, dst, rank))))
            on_stack.add(dst)
        elif dst in on_stack:
            recycles.append((node, dst, tag))
        elif tree_of[dst] != tree.index and tree.anchor is None:
            tree.anchor = (node, dst, tag)
        else:
            recycles.append((node, dst, tag))


def traverse(graph: FlowsheetGraph, ranks: RankTable) -> EmissionPlan:
    """Plan the DFS forest for the components listed in ``ranks``."""
    trees: list[_Tree] = []
    trains: list[int] = []
    insertions: dict[str, list[int]] = {}
    recycles: list[tuple[str, str, str | None]] = []
    visited: set[str] = set()
    tree_of: dict[str, int] = {}

    for comp_idx, comp in enumerate(ranks.subgraph_order):
        roots = sorted(
            (n for n in comp if graph.material_in_degree(n) == 0),
            key=lambda n: ranks.rank[n],
        )
        qi = 0
        while True:
            root = None
            while qi < len(roots):
                cand = roots[qi]
                qi += 1
                if cand not in visited:
                    root = cand
                    break
            if root is None:
                unvisited = sorted(
                    (n for n in comp if n not in visited), key=lambda n: ranks.rank[n]
                )
                if not unvisited:
                    break
                root = _cycle_root(graph, unvisited, ranks.rank)
            tree = _Tree(len(trees), comp_idx, root)
            trees.append(tree)
            _grow_tree(graph, tree, ranks.rank, visited, tree_of, recycles)
            if tree.anchor is None:
                trains.append(tree.index)
            else:
                insertions.setdefault(tree.anchor[1], []).append(tree.index)

    # Textual position of every planned node, for deterministic mark order.
    pos: dict[str, tuple[int, int]] = {}
    for ci, comp in enumerate(ranks.subgraph_order):
        for n in comp:
            pos[n] = (ci, ranks.rank[n])

    rec_in: dict[str, list[int]] = {}
    rec_out: dict[str, list[int]] = {}
    for i, (src, dst, _tag) in enumerate(recycles):
        rec_out.setdefault(src, []).append(i)
        rec_in.setdefault(dst, []).append(i)
    for name, items in rec_in.items():
        items.sort(key=lambda i: pos[recycles[i][0]])
    for name, items in rec_out.items():
        items.sort(key=lambda i: pos[recycles[i][1]])

    sig_out: dict[str, list[tuple[str, str]]] = {}
    sig_in: dict[str, list[tuple[str, str]]] = {}
    for src, dst, attr in graph.edges():
        if attr.kind != SIGNAL or src not in pos or dst not in pos:
            continue
        sig_out.setdefault(src, []).append((src, dst))
        sig_in.setdefault(dst, []).append((src, dst))
    for name, items in sig_out.items():
        items.sort(key=lambda e: pos[e[1]])
    for name, items in sig_in.items():
        items.sort(key=lambda e: pos[e[0]])

    group_of: dict[str, tuple[str, int]] = {}
    for key, members in graph.equipment_groups().items():
        if len(members) >= 2:
            for m in members:
                group_of[m] = key

    return EmissionPlan(
        dfs_forest=trees,
        trains=trains,
        insertions=insertions,
        recycles=recycles,
        rec_in=rec_in,
        rec_out=rec_out,
        sig_out=sig_out,
        sig_in=sig_in,
        group_of=group_of,
    )


def _legacy_parts(graph, plan, tree):
    # The v1 notation writes a converging branch as a reversed chain, so
    # the inserted tree must be a plain pipe of nodes feeding at its end.
    chain = []
    node = tree.root
    while True:
        if (
            plan.rec_in.get(node)
            or plan.rec_out.get(node)
            or plan.sig_out.get(node)
            or plan.sig_in.get(node)
            or plan.insertions.get(node)
        ):
            raise EncodeError(
                "legacy converging notation cannot express marks inside an inserted branch"
            )
        chain.append(node)
        kids = tree.children.get(node, [])
        if not kids:
            break
        if len(kids) > 1:
            raise EncodeError("legacy converging notation cannot express nested branching")
        child, tag = kids[0]
        if tag:
            raise EncodeError("legacy converging notation cannot express stream tags")
        node = child
    src, _target, tag = tree.anchor
    if tag:
        raise EncodeError("legacy converging notation cannot express stream tags")
    if src != chain[-1]:
        raise EncodeError("legacy converging notation requires the feed at the end of the branch")
    parts: list[object] = ["["]
    for n in reversed(chain):
        parts.append("<")
        parts.append(_NodeTok(n))
        ctrl = graph.ctrl(n)
        if ctrl:
            parts.append("{%s}" % ctrl)
        if n in plan.group_of:
            parts.append(_Mark("group", plan.group_of[n]))
    parts.append("]")
    return parts


def _walk_node(graph, plan, tree, node, parts, legacy):
    parts.append(_NodeTok(node))
    ctrl = graph.ctrl(node)
    if ctrl:
        parts.append("{%s}" % ctrl)
    if node in plan.group_of:
        parts.append(_Mark("group", plan.group_of[node]))
    for ri in plan.rec_in.get(node, ()):
        parts.append(_Mark("rec_in", ri))
    for ri in plan.rec_out.get(node, ()):
        parts.append(_Mark("rec_out", ri))
    for e in plan.sig_out.get(node, ()):
        parts.append(_Mark("sig_out", e))
    for e in plan.sig_in.get(node, ()):
        parts.append(_Mark("sig_in", e))
    if tree.anchor is not None and tree.anchor[0] == node:
        tag = tree.anchor[2]
        if tag:
            parts.append("{%s}" % tag)
        parts.append("&")
    for ins in plan.insertions.get(node, ()):
        sub = plan.dfs_forest[ins]
        if legacy:
            parts.extend(_legacy_parts(graph, plan, sub))
        else:
            parts.append("<&|")
            _walk_node(graph, plan, sub, sub.root, parts, legacy)
            parts.append("|")
    kids = tree.children.get(node, [])
    for i, (child, tag) in enumerate(kids):
        last = i == len(kids) - 1
        if not last:
            parts.append("[")
        if tag:
            parts.append("{%s}" % tag)
        _walk_node(graph, plan, tree, child, parts, legacy)
        if not last:
            parts.append("]")


def _digits(i: int) -> str:
    if i < 10:
        return str(i)
    return "%%%02d" % i


def _assign_ids(plan: EmissionPlan, parts: list[object]) -> None:
    plan.recycle_ids.clear()
    plan.signal_ids.clear()
    plan.hex_group_ids.clear()
    next_rec = 1
    next_grp = 1
    for p in parts:
        if not isinstance(p, _Mark):
            continue
        if p.kind in ("rec_in", "rec_out") and p.key not in plan.recycle_ids:
            if next_rec > 99:
                raise EncodeError("more than 99 recycle connections in one string")
            plan.recycle_ids[p.key] = next_rec
            next_rec += 1
        elif p.kind == "group" and p.key not in plan.hex_group_ids:
            plan.hex_group_ids[p.key] = next_grp
            next_grp += 1
    next_sig = 1
    for p in parts:
        if isinstance(p, _Mark) and p.kind == "sig_out" and p.key not in plan.signal_ids:
            plan.signal_ids[p.key] = next_sig
            next_sig += 1


def _render_part(graph, plan, p, mode):
    if isinstance(p, str):
        return p
    if isinstance(p, _NodeTok):
        ref = graph.node_ref(p.name)
        return "(%s)" % (ref.category if mode == GENERALIZED else p.name)
    if p.kind == "rec_in":
        return "<" + _digits(plan.recycle_ids[p.key])
    if p.kind == "rec_out":
        tag = plan.recycles[p.key][2]
        prefix = "{%s}" % tag if tag else ""
        return prefix + _digits(plan.recycle_ids[p.key])
    if p.kind == "sig_out":
        return "_%d" % plan.signal_ids[p.key]
    if p.kind == "sig_in":
        return "<_%d" % plan.signal_ids[p.key]
    if p.kind == "group":
        return "{%d}" % plan.hex_group_ids[p.key]
    raise AssertionError(f"unrenderable part: {p!r}")


def emit(
    graph: FlowsheetGraph,
    plan: EmissionPlan,
    mode: str = GENERALIZED,
    legacy_converging: bool = False,
) -> str:
    parts: list[object] = []
    for i, ti in enumerate(plan.trains):
        if i:
            parts.append("n|")
        tree = plan.dfs_forest[ti]
        _walk_node(graph, plan, tree, tree.root, parts, legacy_converging)
    _assign_ids(plan, parts)
    return "".join(_render_part(graph, plan, p, mode) for p in parts)


def encode(
    graph: FlowsheetGraph,
    mode: str = GENERALIZED,
    *,
    legacy_converging: bool = False,
) -> SfilesString:
    """Render the canonical SFILES 2.0 string for a graph."""
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    ranks = rank_graph(graph)
    plan = traverse(graph, ranks)
    return SfilesString(emit(graph, plan, mode, legacy_converging), mode)


def component_string(graph: FlowsheetGraph, order: list[str], mode: str = GENERALIZED) -> str:
    """Serialize a single ranked component, with identifiers local to it.

    Used to order equally sized components; signal edges that leave the
    component are omitted because the peer component has no rank yet.
    """
    table = RankTable({n: i for i, n in enumerate(order, 1)}, [list(order)])
    plan = traverse(graph, table)
    return emit(graph, plan, mode)
