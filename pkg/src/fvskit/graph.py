"""Immutable simple-graph data model with the structural operations the
reduction stages are built from: subdivision, identification, low-degree
stripping, rotation systems with face traversal, and Hamiltonian-cycle
witnesses."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key

import networkx as nx


class GraphError(ValueError):
    """Structurally invalid graph state or operation."""


def _norm_edge(u, v):
    return (u, v) if u < v else (v, u)


class Graph:
    """Simple undirected graph with stable opaque integer vertex ids.

    Instances are immutable; every operation returns a new graph. Fresh ids
    come from a monotone counter so that traces replay deterministically.
    """

    __slots__ = ("vertices", "edges", "next_id", "_adj")

    def __init__(self, vertices=(), edges=(), next_id=None):
        vs = frozenset(vertices)
        es = set()
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at {u}")
            if u not in vs or v not in vs:
                raise GraphError(f"edge ({u}, {v}) has endpoint outside vertex set")
            es.add(_norm_edge(u, v))
        if next_id is None:
            next_id = max(vs, default=-1) + 1
        elif vs and next_id <= max(vs):
            raise GraphError("next_id collides with existing vertex ids")
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "edges", frozenset(es))
        object.__setattr__(self, "next_id", next_id)
        object.__setattr__(self, "_adj", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"

    @classmethod
    def from_edges(cls, edges, extra_vertices=()):
        vs = set(extra_vertices)
        for u, v in edges:
            vs.add(u)
            vs.add(v)
        return cls(vs, edges)

    @property
    def n(self):
        return len(self.vertices)

    @property
    def m(self):
        return len(self.edges)

    @property
    def adjacency(self):
        adj = object.__getattribute__(self, "_adj")
        if adj is None:
            tmp = {v: set() for v in self.vertices}
            for u, v in self.edges:
                tmp[u].add(v)
                tmp[v].add(u)
            adj = {v: frozenset(ns) for v, ns in tmp.items()}
            object.__setattr__(self, "_adj", adj)
        return adj

    def neighbors(self, v):
        return self.adjacency[v]

    def degree(self, v):
        return len(self.adjacency[v])

    def has_edge(self, u, v):
        return _norm_edge(u, v) in self.edges

    def replace(self, add_vertices=(), add_edges=(), drop_vertices=(), drop_edges=(), next_id=None):
        """Build a derived graph; dropping a vertex drops its incident edges."""
        dropped = set(drop_vertices)
        vs = (self.vertices - dropped) | set(add_vertices)
        es = {
            e
            for e in self.edges
            if not (e[0] in dropped or e[1] in dropped)
        }
        es -= {_norm_edge(u, v) for u, v in drop_edges}
        es |= {_norm_edge(u, v) for u, v in add_edges}
        if next_id is None:
            next_id = max(self.next_id, max(vs, default=-1) + 1)
        return Graph(vs, es, next_id)


def subdivide_edge(g: Graph, e) -> tuple[Graph, int]:
    """Replace edge e by a path through one fresh vertex; the FVS optimum
    is unchanged (every cycle through e survives, one vertex longer)."""
    e = _norm_edge(*e)
    if e not in g.edges:
        raise GraphError("edge not present")
    w = g.next_id
    u, v = e
    out = g.replace(
        add_vertices=(w,),
        add_edges=((u, w), (w, v)),
        drop_edges=(e,),
        next_id=w + 1,
    )
    return out, w


def identify_vertices(g: Graph, u, v) -> tuple[Graph, int]:
    """Merge u and v into one fresh vertex adjacent to their combined
    neighborhoods; parallel edges collapse, no self-loop is created."""
    if u == v:
        raise GraphError("identify requires distinct vertices")
    if u not in g.vertices or v not in g.vertices:
        raise GraphError("identify requires present vertices")
    merged = g.next_id
    nbrs = (g.neighbors(u) | g.neighbors(v)) - {u, v}
    out = g.replace(
        add_vertices=(merged,),
        add_edges=tuple((merged, w) for w in nbrs),
        drop_vertices=(u, v),
        next_id=merged + 1,
    )
    return out, merged


def check_regular(g: Graph, r: int) -> bool:
    return all(g.degree(v) == r for v in g.vertices)


def is_connected(g: Graph) -> bool:
    if g.n <= 1:
        return True
    adj = g.adjacency
    start = next(iter(g.vertices))
    seen = {start}
    stack = [start]
    while stack:
        for w in adj[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def to_networkx(g: Graph) -> nx.Graph:
    G = nx.Graph()
    G.add_nodes_from(sorted(g.vertices))
    G.add_edges_from(sorted(g.edges))
    return G


@dataclass(frozen=True, eq=False)
class PlaneGraph:
    """Graph plus a rotation system and optional exact straight-line coords."""

    graph: Graph
    rotation: dict
    coords: dict | None = None

    def __post_init__(self):
        adj = self.graph.adjacency
        if set(self.rotation) != self.graph.vertices:
            raise GraphError("rotation must cover exactly the vertex set")
        for v, order in self.rotation.items():
            if set(order) != set(adj[v]) or len(order) != len(adj[v]):
                raise GraphError(f"rotation at {v} does not match incident edges")
        if self.coords is not None:
            if set(self.coords) != self.graph.vertices:
                raise GraphError("coords must cover exactly the vertex set")
            if len(set(self.coords.values())) != self.graph.n:
                raise GraphError("coords must be pairwise distinct")


def faces(pg: PlaneGraph):
    """All face boundary walks of a connected embedded graph, via
    next-edge-in-rotation traversal; checks Euler's formula."""
    g = pg.graph
    if not is_connected(g):
        raise GraphError("faces require connected graph")
    if g.m == 0:
        return [sorted(g.vertices)]
    rot = pg.rotation
    index = {
        (v, u): i for v, order in rot.items() for i, u in enumerate(order)
    }
    remaining = set()
    for u, v in g.edges:
        remaining.add((u, v))
        remaining.add((v, u))
    out = []
    while remaining:
        u0, v0 = min(remaining)
        walk = []
        u, v = u0, v0
        while True:
            walk.append(u)
            remaining.discard((u, v))
            order = rot[v]
            i = index[(v, u)]
            u, v = v, order[(i + 1) % len(order)]
            if (u, v) == (u0, v0):
                break
        out.append(walk)
    if g.n - g.m + len(out) != 2:
        raise GraphError("rotation system is not a planar embedding")
    return out


def face_edge_sets(pg: PlaneGraph):
    """Faces as frozensets of undirected edges, for co-facial queries."""
    out = []
    for walk in faces(pg):
        es = set()
        for i, u in enumerate(walk):
            v = walk[(i + 1) % len(walk)]
            if u != v:
                es.add(_norm_edge(u, v))
        out.append(frozenset(es))
    return out


def rotation_from_coords(g: Graph, coords) -> dict:
    """Rotation system induced by a straight-line drawing: neighbors sorted
    counterclockwise around each vertex, compared exactly."""

    def angular_cmp(origin):
        ox, oy = origin

        def half(p):
            dx, dy = p[0] - ox, p[1] - oy
            return 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1

        def cmp(a, b):
            ha, hb = half(a), half(b)
            if ha != hb:
                return ha - hb
            ax, ay = a[0] - ox, a[1] - oy
            bx, by = b[0] - ox, b[1] - oy
            cross = ax * by - ay * bx
            return 0 if cross == 0 else (-1 if cross > 0 else 1)

        return cmp_to_key(cmp)

    rot = {}
    for v in g.vertices:
        key = angular_cmp(coords[v])
        rot[v] = tuple(
            sorted(g.neighbors(v), key=lambda w: key(coords[w]))
        )
    return rot


@dataclass(frozen=True)
class HamCycleWitness:
    """A Hamiltonian cycle given as the vertex order it visits."""

    order: tuple

    def is_valid_for(self, g: Graph) -> bool:
        order = self.order
        if len(order) != g.n or set(order) != g.vertices:
            return False
        if len(order) < 3:
            return False
        return all(
            g.has_edge(order[i], order[(i + 1) % len(order)])
            for i in range(len(order))
        )

    def edge_set(self):
        n = len(self.order)
        return frozenset(
            _norm_edge(self.order[i], self.order[(i + 1) % n]) for i in range(n)
        )


@dataclass(frozen=True)
class Instance:
    """An FVS instance: graph, deletion budget, optional cycle witness."""

    graph: Graph
    k: int
    witness: HamCycleWitness | None = None

    def __post_init__(self):
        if self.k < 0:
            raise GraphError("budget k must be non-negative")
        if self.witness is not None and not self.witness.is_valid_for(self.graph):
            raise GraphError("witness is not a Hamiltonian cycle of the graph")


def strip_low_degree(inst: Instance) -> Instance:
    """Iteratively delete degree-zero and degree-one vertices; equivalent
    instance with identical budget."""
    g = inst.graph
    adj = {v: set(ns) for v, ns in g.adjacency.items()}
    queue = [v for v, ns in adj.items() if len(ns) <= 1]
    while queue:
        v = queue.pop()
        if v not in adj or len(adj[v]) > 1:
            continue
        for w in adj.pop(v):
            adj[w].discard(v)
            if len(adj[w]) <= 1:
                queue.append(w)
    kept = set(adj)
    out = Graph(
        kept,
        (e for e in g.edges if e[0] in kept and e[1] in kept),
        next_id=g.next_id,
    )
    return Instance(out, inst.k, None)


@dataclass(frozen=True)
class TraceStep:
    """One replayable reduction event with its budget delta."""

    stage: str
    op: str  # subdivide | identify | insert | strip | copy | lift
    k_delta: int = 0
    gadget: str | None = None
    p: int | None = None
    attach: tuple = ()
    edge: tuple | None = None

    def to_json(self):
        return {
            "op": self.op,
            "gadget": self.gadget,
            "p": self.p,
            "attach": list(self.attach),
            "subdivided": list(self.edge) if self.edge else [],
            "k_delta": self.k_delta,
        }

    @classmethod
    def from_json(cls, stage, d):
        return cls(
            stage=stage,
            op=d["op"],
            k_delta=d["k_delta"],
            gadget=d.get("gadget"),
            p=d.get("p"),
            attach=tuple(d.get("attach", ())),
            edge=tuple(d["subdivided"]) if d.get("subdivided") else None,
        )


@dataclass(frozen=True)
class ReductionTrace:
    """Ordered ledger of reduction steps; the sum of k deltas certifies the
    budget of the output instance."""

    steps: tuple

    @property
    def total_k_delta(self):
        return sum(s.k_delta for s in self.steps)

    def stage_names(self):
        seen = []
        for s in self.steps:
            if not seen or seen[-1] != s.stage:
                seen.append(s.stage)
        return seen
