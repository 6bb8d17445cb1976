"""The gadget toolbox: four reusable subgraphs (R, L, D, and the Y family)
with attachment points x and y, canonical Hamiltonian x-y paths, insertion
into host instances, and exhaustive certification of their deletion costs."""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx

from .graph import (
    Graph,
    GraphError,
    Instance,
    PlaneGraph,
    TraceStep,
    _norm_edge,
)
from .solvers import (
    EXHAUSTIVE_LIMIT,
    SolverError,
    check_planarity,
    enumerate_min_fvs,
    fvs_exact_exhaustive,
    is_fvs,
)


def build_core_wheel() -> Graph:
    """C4 joined to one apex: rim 0..3 in a cycle, apex 4. The cycle-rich
    core reused by the two smaller gadgets."""
    rim = [(0, 1), (1, 2), (2, 3), (3, 0)]
    return Graph.from_edges(rim + [(4, i) for i in range(4)])


@dataclass(frozen=True)
class Gadget:
    """A pluggable subgraph with boundary (x, y) and a fixed insertion cost.

    ham_path runs from x to y through every gadget vertex. k_delta is the
    certified minimum FVS size of the gadget, i.e. the exact amount the
    deletion budget must grow per insertion.
    """

    kind: str  # R | L | D | Y
    p: int | None
    pg: PlaneGraph
    x: int
    y: int
    x_port: int | None  # x' where the construction names one
    y_port: int | None
    ham_path: tuple
    k_delta: int

    @property
    def graph(self) -> Graph:
        return self.pg.graph

    def __post_init__(self):
        hp = self.ham_path
        g = self.pg.graph
        if hp[0] != self.x or hp[-1] != self.y:
            raise GraphError("ham_path must run from x to y")
        if len(hp) != g.n or set(hp) != g.vertices:
            raise GraphError("ham_path must visit every vertex once")
        for a, b in zip(hp, hp[1:]):
            if not g.has_edge(a, b):
                raise GraphError(f"ham_path uses a non-edge ({a}, {b})")


@dataclass(frozen=True)
class GadgetReport:
    """Exhaustively certified gadget facts; nothing here is taken on faith."""

    kind: str
    min_fvs: int
    excludes_x: bool
    excludes_y: bool
    separating: bool
    ham_xy: bool
    planar: bool
    port_in_some_optimal: bool

    def to_json(self):
        return {
            "kind": self.kind,
            "min_fvs": self.min_fvs,
            "excludes_x": self.excludes_x,
            "excludes_y": self.excludes_y,
            "separating": self.separating,
            "ham_xy": self.ham_xy,
            "planar": self.planar,
        }


def _build_r() -> Gadget:
    # wheel core on rim 2,3,4,5 with apex 6; ports 1 and 7 each cover two
    # adjacent rim vertices so every interior vertex ends up with degree 4
    edges = [
        (2, 3), (3, 4), (4, 5), (5, 2),
        (6, 2), (6, 3), (6, 4), (6, 5),
        (1, 2), (1, 3),
        (7, 4), (7, 5),
        (1, 7),
        (0, 1), (7, 8),
    ]
    g = Graph.from_edges(edges)
    ham = (0, 1, 2, 5, 6, 3, 4, 7, 8)
    return _finish("R", None, g, 0, 8, 1, 7, ham, 3)


def _build_l() -> Gadget:
    # two wheel cores bridged rim-to-rim; x and y attach with two edges each
    edges = [
        (1, 2), (2, 3), (3, 4), (4, 1),
        (5, 1), (5, 2), (5, 3), (5, 4),
        (6, 7), (7, 8), (8, 9), (9, 6),
        (10, 6), (10, 7), (10, 8), (10, 9),
        (1, 6), (2, 7),
        (0, 3), (0, 4),
        (11, 8), (11, 9),
    ]
    g = Graph.from_edges(edges)
    ham = (0, 4, 3, 2, 5, 1, 6, 10, 7, 8, 9, 11)
    return _finish("L", None, g, 0, 11, None, None, ham, 4)


def _build_d() -> Gadget:
    # hexagon 2..7 with an inner triangle 8,9,10, a hub 11, and ports 1, 12
    edges = [
        (2, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 2),
        (8, 9), (9, 10), (8, 10),
        (8, 2), (8, 3), (8, 7),
        (9, 3), (9, 4), (9, 5),
        (10, 5), (10, 6), (10, 7),
        (11, 4), (11, 5), (11, 6),
        (1, 0), (1, 11), (1, 2), (1, 3), (1, 4),
        (12, 13), (12, 11), (12, 2), (12, 6), (12, 7),
    ]
    g = Graph.from_edges(edges)
    ham = (0, 1, 3, 2, 8, 7, 6, 10, 5, 9, 4, 11, 12, 13)
    return _finish("D", None, g, 0, 13, 1, 12, ham, 6)


def _build_y(p: int) -> Gadget:
    if p < 3:
        raise GraphError("p must be >= 3")
    a = list(range(2, p + 2))
    b = list(range(p + 2, 2 * p + 2))
    xp, yp = 1, 2 * p + 2
    edges = []
    for i in range(p):
        for j in range(i + 1, p):
            edges.append((a[i], a[j]))
            edges.append((b[i], b[j]))
        edges.append((a[i], b[i]))
        edges.append((xp, a[i]))
        edges.append((yp, b[i]))
    edges.append((0, xp))
    edges.append((yp, 2 * p + 3))
    g = Graph.from_edges(edges)
    ham = (0, xp, *a, *reversed(b), yp, 2 * p + 3)
    return _finish("Y", p, g, 0, 2 * p + 3, xp, yp, ham, 2 * p - 2)


def _finish(kind, p, g, x, y, xp, yp, ham, k_delta) -> Gadget:
    planar, rot = check_planarity(g)
    if not planar:
        # clique sizes beyond 4 rule out a plane drawing; keep a well formed
        # but non-planar rotation so the type is uniform
        rot = {v: tuple(sorted(g.neighbors(v))) for v in g.vertices}
    pg = PlaneGraph(g, rot)
    return Gadget(kind, p, pg, x, y, xp, yp, ham, k_delta)


def build_gadget(kind: str, p: int | None = None) -> Gadget:
    if kind == "R":
        return _build_r()
    if kind == "L":
        return _build_l()
    if kind == "D":
        return _build_d()
    if kind == "Y":
        if p is None or p < 3:
            raise GraphError("p must be >= 3")
        return _build_y(p)
    raise GraphError(f"unknown gadget kind {kind!r}")


def insert_gadget_graph(g: Graph, gadget: Gadget, u, v):
    """Add a fresh copy of the gadget to g, fusing its x with u and its y
    with v. Returns (graph, id_map) where id_map sends gadget-local ids to
    host ids (x -> u, y -> v, interior -> fresh)."""
    if u not in g.vertices or v not in g.vertices:
        raise GraphError("attachment vertices must be present")
    if u == v and gadget.kind != "R":
        raise GraphError("same-vertex insertion is only defined for kind R")
    id_map = {gadget.x: u, gadget.y: v}
    nid = g.next_id
    for w in sorted(gadget.graph.vertices):
        if w not in id_map:
            id_map[w] = nid
            nid += 1
    new_edges = set()
    for a, b in gadget.graph.edges:
        ma, mb = id_map[a], id_map[b]
        if ma == mb:
            continue  # u=v R-insertion: the x and y pendant edges both land on u
        new_edges.add(_norm_edge(ma, mb))
    interior = [id_map[w] for w in sorted(gadget.graph.vertices) if w not in (gadget.x, gadget.y)]
    out = g.replace(add_vertices=interior, add_edges=new_edges, next_id=nid)
    return out, id_map


def insert_gadget(inst: Instance, gadget: Gadget, u, v, stage="insert"):
    """H-insertion on an instance: the budget grows by the gadget's certified
    deletion cost, keeping yes/no status unchanged."""
    g2, id_map = insert_gadget_graph(inst.graph, gadget, u, v)
    step = TraceStep(
        stage=stage,
        op="insert",
        k_delta=gadget.k_delta,
        gadget=gadget.kind,
        p=gadget.p,
        attach=(u, v),
    )
    return Instance(g2, inst.k + gadget.k_delta, None), step, id_map


def interior_path(gadget: Gadget, id_map) -> list:
    """The gadget's Hamiltonian x-y path restricted to interior vertices and
    mapped into the host; used to splice host cycle witnesses through an
    inserted gadget."""
    return [id_map[w] for w in gadget.ham_path[1:-1]]


def _ham_path_exists(g: Graph, s, t) -> bool:
    """Backtracking Hamiltonian s-t path search; gadget-sized inputs only."""
    adj = g.adjacency
    n = g.n
    visited = {s}
    def extend(v):
        if len(visited) == n:
            return v == t
        for w in sorted(adj[v]):
            if w in visited or (w == t and len(visited) < n - 1):
                continue
            visited.add(w)
            if extend(w):
                return True
            visited.remove(w)
        return False
    return extend(s)


def certify_gadget(gadget: Gadget) -> GadgetReport:
    """Recompute every claimed gadget property from scratch by exhaustive
    search; a disagreement with the stored k_delta raises."""
    g = gadget.graph
    if g.n > EXHAUSTIVE_LIMIT:
        raise SolverError("use sampled certification")
    opt, solutions = enumerate_min_fvs(g)
    excludes_x = all(gadget.x not in s for s in solutions)
    excludes_y = all(gadget.y not in s for s in solutions)
    ports = {gadget.x_port, gadget.y_port} - {None}
    port_hit = any(s & ports for s in solutions) if ports else False
    separating = any(_separates(g, s, gadget.x, gadget.y) for s in solutions)
    ham_xy = _ham_path_exists(g, gadget.x, gadget.y)
    planar, _ = check_planarity(g)
    if opt != gadget.k_delta:
        raise GraphError(
            f"gadget {gadget.kind}: certified optimum {opt} != stored k_delta {gadget.k_delta}"
        )
    return GadgetReport(
        kind=gadget.kind if gadget.p is None else f"Y{gadget.p}",
        min_fvs=opt,
        excludes_x=excludes_x,
        excludes_y=excludes_y,
        separating=separating,
        ham_xy=ham_xy,
        planar=planar,
        port_in_some_optimal=port_hit,
    )


def _separates(g: Graph, deleted, s, t) -> bool:
    kept = g.vertices - set(deleted)
    if s not in kept or t not in kept:
        return False
    seen = {s}
    stack = [s]
    while stack:
        for w in g.neighbors(stack.pop()):
            if w in kept and w not in seen:
                if w == t:
                    return False
                seen.add(w)
                stack.append(w)
    return True


def verify_insertion_equivalence(host: Graph, gadget: Gadget, u, v) -> bool:
    """Check opt(G') = opt(G) + k_delta with the exhaustive oracle."""
    combined = host.n + gadget.graph.n - 2
    if combined > EXHAUSTIVE_LIMIT:
        raise SolverError("size overflow")
    before = len(fvs_exact_exhaustive(host).deleted)
    g2, _ = insert_gadget_graph(host, gadget, u, v)
    after = len(fvs_exact_exhaustive(g2).deleted)
    return after == before + gadget.k_delta


def remainder_after(g: Graph, deleted) -> nx.Graph:
    """Induced subgraph after a deletion, as networkx, for isomorphism tests."""
    kept = g.vertices - set(deleted)
    H = nx.Graph()
    H.add_nodes_from(sorted(kept))
    H.add_edges_from(e for e in sorted(g.edges) if e[0] in kept and e[1] in kept)
    return H
