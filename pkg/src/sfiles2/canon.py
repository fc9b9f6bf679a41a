"""Canonical node ranking.

Ranking runs in two stages per connected component: iterative Morgan
refinement over the undirected material graph, then rule based
tie-breaking inside the surviving equivalence classes.  The resulting
rank order is what makes string emission deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass

from .model import MATERIAL, FlowsheetGraph

# Collation order for column tags in tie-break descriptors: inlets
# before draws, bottoms feed first, top draw before bottoms draw.
# Untagged edges sort before tagged ones.
TAG_RANK = {None: -1, "bin": 0, "tin": 1, "tout": 2, "bout": 3}

_CATEGORY_PRIO = {"C": 0, "prod": 1, "raw": 2}


@dataclass
class MorganState:
    """Snapshot of the refinement at its most discriminating iteration."""

    value: dict[str, int]
    val_set: int
    iteration: int

    def classes(self) -> list[list[str]]:
        by_value: dict[int, list[str]] = {}
        for name in sorted(self.value):
            by_value.setdefault(self.value[name], []).append(name)
        return [by_value[v] for v in sorted(by_value)]


@dataclass
class RankTable:
    """Per-component ranks plus the component emission order."""

    rank: dict[str, int]
    subgraph_order: list[list[str]]


def morgan_iterate(
    graph: FlowsheetGraph,
    nodes: list[str] | None = None,
    stagnation_window: int = 3,
) -> MorganState:
    """Refine node values by summing neighbor values over material edges.

    Values start at 1.  Each iteration replaces a node's value with the
    sum over its incident material edges of the neighbor's value, so a
    parallel edge pair counts its neighbor twice.  Iteration stops once
    the number of distinct values has not improved for
    ``stagnation_window`` rounds (or after 2*len(nodes) rounds), and the
    returned state is the snapshot of the first iteration that reached
    the best discrimination.
    """
    names = list(nodes) if nodes is not None else graph.nodes()
    members = set(names)
    nbrs: dict[str, list[str]] = {n: [] for n in names}
    for src, dst, attr in graph.edges():
        if attr.kind != MATERIAL or src not in members or dst not in members:
            continue
        nbrs[src].append(dst)
        nbrs[dst].append(src)

    value = {n: 1 for n in names}
    best = len(set(value.values()))
    snapshot = MorganState(dict(value), best, 0)
    stagnant = 0
    for it in range(1, 2 * len(names) + 1):
        if best == len(names):
            break  # fully discriminated, nothing left to refine
        value = {n: sum(value[m] for m in nbrs[n]) for n in names}
        distinct = len(set(value.values()))
        if distinct > best:
            best = distinct
            snapshot = MorganState(dict(value), best, it)
            stagnant = 0
        else:
            stagnant += 1
            if stagnant >= stagnation_window:
                break
    return snapshot


def _refine_colors(graph: FlowsheetGraph) -> dict[str, int]:
    """Structure-only node colors, stable under equipment renumbering.

    Seeds every node with (category, ctrl) and repeatedly refines by the
    sorted multiset of (direction, kind, tag, neighbor color) over all
    incident edges, material and signal alike, plus one ("grp", color)
    entry per co-equipment partner, until the partition stops splitting.
    Color ordinals come from sorting the refinement keys, so numbering
    never leaks in.  Used as the last structural tie-break before node
    numbers: without it, units that the value refinement and the local
    descriptors cannot separate would be ordered by their labels alone,
    and renaming equipment could change the canonical string.  The
    partner entries matter for the same reason: sharing a shell with an
    exchanger elsewhere in the plant is part of the drawing, so a
    grouped unit must never tie with an otherwise identical lone one.
    """
    names = graph.nodes()
    partners: dict[str, list[str]] = {n: [] for n in names}
    for members in graph.equipment_groups().values():
        if len(members) < 2:
            continue
        for m in members:
            partners[m] = [x for x in members if x != m]

    def ordinalize(keys: dict[str, object]) -> dict[str, int]:
        ranks = {k: i for i, k in enumerate(sorted(set(keys.values())))}
        return {n: ranks[keys[n]] for n in names}

    colors = ordinalize(
        {n: (graph.node_ref(n).category, graph.ctrl(n) or "") for n in names}
    )
    for _ in range(len(names)):
        keys: dict[str, object] = {}
        for n in names:
            descs = sorted(
                [("out", a.kind, a.tag or "", colors[d]) for d, a in graph.out_edges(n)]
                + [("in", a.kind, a.tag or "", colors[s]) for s, a in graph.in_edges(n)]
                + [("grp", "", "", colors[p]) for p in partners[n]]
            )
            keys[n] = (colors[n], tuple(descs))
        refined = ordinalize(keys)
        if len(set(refined.values())) == len(set(colors.values())):
            break  # stable partition; refinement never merges classes
        colors = refined
    return colors


def _successor_count(graph: FlowsheetGraph, start: str) -> int:
    seen = {start}
    stack = [start]
    while stack:
        n = stack.pop()
        for dst, attr in graph.out_edges(n):
            if attr.kind == MATERIAL and dst not in seen:
                seen.add(dst)
                stack.append(dst)
    return len(seen) - 1


def _step3_key(graph: FlowsheetGraph, name: str):
    ref = graph.node_ref(name)
    descs = []
    for dst, attr in graph.out_edges(name):
        material = attr.kind == MATERIAL
        descs.append(
            (
                graph.node_ref(dst).category,
                "out",
                TAG_RANK[attr.tag] if material else -1,
                0 if material else 1,
            )
        )
    for src, attr in graph.in_edges(name):
        material = attr.kind == MATERIAL
        descs.append(
            (
                graph.node_ref(src).category,
                "in",
                TAG_RANK[attr.tag] if material else -1,
                0 if material else 1,
            )
        )
    descs.sort()
    return (ref.category, graph.ctrl(name) or "", descs)


def _tie_key(graph: FlowsheetGraph, name: str, colors: dict[str, int]):
    ref = graph.node_ref(name)
    prio = _CATEGORY_PRIO.get(ref.category, 3)
    if ref.category == "raw":
        # Feeds with longer downstream paths come first.
        deg_key = -_successor_count(graph, name)
    elif prio == 3:
        deg_key = _successor_count(graph, name)
    else:
        deg_key = 0
    return (
        prio,
        deg_key,
        _step3_key(graph, name),
        colors[name],
        (ref.category, ref.number, ref.sub or 0),
    )


def break_ties(
    graph: FlowsheetGraph,
    classes: list[list[str]],
    colors: dict[str, int] | None = None,
) -> list[str]:
    """Flatten Morgan classes into a total order, lowest rank first."""
    if colors is None:
        colors = _refine_colors(graph)
    order: list[str] = []
    for cls in classes:
        order.extend(sorted(cls, key=lambda n: _tie_key(graph, n, colors)))
    return order


def _components(graph: FlowsheetGraph) -> list[list[str]]:
    adj: dict[str, set[str]] = {n: set() for n in graph.nodes()}
    for src, dst, attr in graph.edges():
        if attr.kind == MATERIAL:
            adj[src].add(dst)
            adj[dst].add(src)
    seen: set[str] = set()
    comps: list[list[str]] = []
    for n in graph.nodes():
        if n in seen:
            continue
        comp = []
        stack = [n]
        seen.add(n)
        while stack:
            x = stack.pop()
            comp.append(x)
            for m in adj[x]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
        comps.append(sorted(comp))
    return comps


def rank_graph(graph: FlowsheetGraph) -> RankTable:
    """Rank every node 1..n within its component and order the components.

    Components are emitted largest first.  Equal sizes are ordered by
    their provisional generalized string, then the numbered string, and
    as a last resort by their signal connections.
    """
    colors = _refine_colors(graph)
    ordered: list[list[str]] = []
    for comp in _components(graph):
        state = morgan_iterate(graph, comp)
        ordered.append(break_ties(graph, state.classes(), colors))

    by_size: dict[int, list[list[str]]] = {}
    for order in ordered:
        by_size.setdefault(len(order), []).append(order)

    final: list[list[str]] = []
    for size in sorted(by_size, reverse=True):
        group = by_size[size]
        if len(group) > 1:
            from .encode import component_string

            def comp_key(order: list[str]):
                signals = sorted(
                    (src, dst)
                    for src, dst, attr in graph.edges()
                    if attr.kind != MATERIAL and (src in set(order) or dst in set(order))
                )
                return (
                    component_string(graph, order, "generalized"),
                    component_string(graph, order, "numbered"),
                    signals,
                )

            group.sort(key=comp_key)
        final.extend(group)

    rank: dict[str, int] = {}
    for order in final:
        for i, name in enumerate(order, 1):
            rank[name] = i
    return RankTable(rank, final)
