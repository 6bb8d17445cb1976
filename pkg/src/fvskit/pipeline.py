"""The staged reduction compiler. Each stage consumes an Instance and
produces an equivalent one on a more restricted class, together with a
replayable trace of subdivisions and gadget insertions whose budget deltas
sum to the output budget."""

from __future__ import annotations

from dataclasses import dataclass, field

from .gadgets import build_gadget, insert_gadget_graph, interior_path
from .geometry import (
    GeometryError,
    crossings_on,
    find_crossings,
    grid_embed,
    pick_epsilon,
    route_connection,
    scan_key,
)
from .graph import (
    Graph,
    GraphError,
    HamCycleWitness,
    Instance,
    PlaneGraph,
    ReductionTrace,
    TraceStep,
    check_regular,
    face_edge_sets,
    identify_vertices,
    is_connected,
    strip_low_degree,
    subdivide_edge,
    _norm_edge,
)
from .solvers import check_ore_condition, check_planarity, find_hamiltonian_cycle

GADGETS = {kind: build_gadget(kind) for kind in ("R", "L", "D")}


class PipelineError(ValueError):
    pass


@dataclass(frozen=True)
class ClassCertificate:
    """Structural facts about a stage output, re-verified from scratch."""

    regular: int | None
    planar: bool
    witness: bool
    even: bool

    def to_json(self):
        return {
            "regular": self.regular,
            "planar": self.planar,
            "witness": self.witness,
            "even": self.even,
        }


@dataclass(frozen=True)
class TwoFactor:
    """Spanning disjoint cycle cover; merging its cycles one by one yields
    the Hamiltonian witness."""

    components: tuple

    def validate(self, g: Graph):
        seen = set()
        for cyc in self.components:
            if len(cyc) < 3:
                raise PipelineError("2-factor cycle shorter than 3")
            for i, v in enumerate(cyc):
                if v in seen:
                    raise PipelineError("2-factor cycles are not disjoint")
                seen.add(v)
                if not g.has_edge(v, cyc[(i + 1) % len(cyc)]):
                    raise PipelineError("2-factor uses a non-edge")
        if seen != g.vertices:
            raise PipelineError("2-factor does not span all vertices")
        return True


@dataclass(frozen=True)
class StageResult:
    name: str
    instance: Instance
    steps: tuple
    certificate: ClassCertificate
    audit: object = None


def _certificate(inst: Instance, claim_planar=True) -> ClassCertificate:
    g = inst.graph
    reg = None
    if g.n:
        degs = {g.degree(v) for v in g.vertices}
        if len(degs) == 1:
            reg = degs.pop()
    planar = check_planarity(g)[0] if claim_planar else False
    wit = inst.witness is not None and inst.witness.is_valid_for(g)
    return ClassCertificate(reg, planar, wit, g.n % 2 == 0)


def _require(cond, msg):
    if not cond:
        raise PipelineError(msg)


def eliminate_degree_two(inst: Instance) -> StageResult:
    """Remove degree-2 vertices from the class by attaching one R gadget at
    (v, v) per such vertex, raising each to degree four."""
    g = inst.graph
    _require(is_connected(g), "precondition: connected graph required")
    _require(check_planarity(g)[0], "precondition: planar graph required")
    for v in sorted(g.vertices):
        if not 2 <= g.degree(v) <= 4:
            raise PipelineError(f"precondition: vertex {v} has degree {g.degree(v)}, need 2..4")
    R = GADGETS["R"]
    steps = []
    k = inst.k
    for v in sorted(v for v in g.vertices if g.degree(v) == 2):
        g, _ = insert_gadget_graph(g, R, v, v)
        k += R.k_delta
        steps.append(TraceStep("degree2", "insert", R.k_delta, gadget="R", attach=(v, v)))
    out = Instance(g, k)
    _require(all(3 <= out.graph.degree(v) <= 4 for v in out.graph.vertices) or not steps,
             "degree bounds violated after insertion")
    return StageResult("degree2", out, tuple(steps), _certificate(out))


@dataclass(frozen=True)
class PairingAudit:
    """Geometry evidence for the degree-3 pairing stage: the grid drawing,
    the routed chains, their crossings, and the final drawn fragments."""

    embedding: object
    pairs: tuple
    routes: tuple
    crossings: tuple
    coords_after: dict
    drawn_edges_after: tuple
    dissolution_vertices: tuple


def pair_degree_three(inst: Instance) -> StageResult:
    """Raise every degree-3 vertex to degree four by routing connections
    between scan-order pairs and realizing each routed fragment as an R
    gadget; crossings with drawn edges become degree-4 vertices."""
    g = inst.graph
    _require(is_connected(g), "precondition: connected graph required")
    for v in sorted(g.vertices):
        if not 3 <= g.degree(v) <= 4:
            raise PipelineError(f"precondition: vertex {v} has degree {g.degree(v)}, need 3..4")
    emb = grid_embed(g)
    deg3 = sorted((v for v in g.vertices if g.degree(v) == 3), key=lambda v: scan_key(emb, v))
    if len(deg3) % 2:
        raise PipelineError("handshake violation")
    if not deg3:
        out = Instance(g, inst.k)
        audit = PairingAudit(emb, (), (), (), dict(emb.coords), tuple(sorted(g.edges)), ())
        return StageResult("pairing", out, (), _certificate(out), audit)
    pairs = tuple((deg3[i], deg3[i + 1]) for i in range(0, len(deg3), 2))
    eps = pick_epsilon(emb, pairs)
    routes = [route_connection(emb, a, b, eps) for a, b in pairs]
    crossings = find_crossings(emb, routes)
    for c in crossings:
        if c.owner_a[0] == "route" and c.owner_b[0] == "route":
            raise PipelineError("routed connections cross each other")

    steps = []
    coords = {v: tuple(map(int, p)) for v, p in emb.coords.items()}
    # split every crossed drawn edge at its crossing points
    point_vertex = {}
    for e in sorted(g.edges):
        hits = crossings_on(crossings, ("edge", e))
        tail = e
        for _, c in hits:
            g, w = subdivide_edge(g, tail)
            steps.append(TraceStep("pairing", "subdivide", 0, edge=tail))
            coords[w] = c.point
            point_vertex[c.point] = w
            tail = _norm_edge(w, e[1])
    # realize each route as a chain of R gadgets through its crossing points
    R = GADGETS["R"]
    k = inst.k
    dissolution = []
    for ri, route in enumerate(routes):
        hits = crossings_on(crossings, ("route", ri))
        chain = [route.endpoints[0]]
        for _, c in hits:
            chain.append(point_vertex[c.point])
        chain.append(route.endpoints[1])
        dissolution.extend(chain[1:-1])
        for a, b in zip(chain, chain[1:]):
            g, _ = insert_gadget_graph(g, R, a, b)
            k += R.k_delta
            steps.append(TraceStep("pairing", "insert", R.k_delta, gadget="R", attach=(a, b)))
    out = Instance(g, k)
    _require(check_regular(g, 4), "output not 4-regular")
    _require(all(g.degree(d) == 4 for d in dissolution), "dissolution vertex degree != 4")
    drawn_after = tuple(e for e in sorted(g.edges) if e[0] in coords and e[1] in coords)
    audit = PairingAudit(emb, pairs, tuple(routes), tuple(crossings), coords,
                         drawn_after, tuple(dissolution))
    return StageResult("pairing", out, tuple(steps), _certificate(out), audit)


def compute_two_factor(g: Graph) -> TwoFactor:
    """2-factor of a 4-regular connected graph: orient an Euler circuit and
    take a perfect matching in the resulting out/in bipartite graph."""
    import networkx as nx

    _require(check_regular(g, 4), "precondition: 4-regular graph required")
    _require(is_connected(g) and g.n > 0, "connected required")
    G = nx.Graph()
    G.add_nodes_from(sorted(g.vertices))
    G.add_edges_from(sorted(g.edges))
    circuit = list(nx.eulerian_circuit(G, source=min(g.vertices)))
    # bipartite out/in copies encoded as even/odd integers so every internal
    # iteration order is hash-stable across processes
    B = nx.Graph()
    outs = {v: 2 * v for v in g.vertices}
    ins = {v: 2 * v + 1 for v in g.vertices}
    B.add_nodes_from(sorted(outs.values()))
    B.add_nodes_from(sorted(ins.values()))
    for a, b in circuit:
        B.add_edge(outs[a], ins[b])
    match = nx.bipartite.hopcroft_karp_matching(B, top_nodes=sorted(outs.values()))
    succ = {v: match[outs[v]] // 2 for v in g.vertices}
    comps = []
    seen = set()
    for v in sorted(g.vertices):
        if v in seen:
            continue
        cyc = [v]
        seen.add(v)
        w = succ[v]
        while w != v:
            cyc.append(w)
            seen.add(w)
            w = succ[w]
        comps.append(tuple(cyc))
    tf = TwoFactor(tuple(comps))
    tf.validate(g)
    return tf


def _cycle_long_way(cycle, frm, to):
    """Walk the whole cycle from frm to to, avoiding their direct edge."""
    L = len(cycle)
    i = cycle.index(frm)
    if cycle[(i + 1) % L] == to:
        return [cycle[(i - t) % L] for t in range(L)]
    if cycle[(i - 1) % L] == to:
        return [cycle[(i + t) % L] for t in range(L)]
    raise PipelineError("vertices not adjacent on the cycle")


def merge_step(inst: Instance, tf: TwoFactor):
    """Merge two 2-factor cycles joined by an edge {u, v} into one, keeping
    4-regularity and planarity. Co-facial cycle edges at u and v allow a
    single bridging L gadget (budget +4); otherwise the spare edge at u is
    threaded through two L gadgets (budget +8)."""
    g = inst.graph
    if len(tf.components) == 1:
        raise PipelineError("already Hamiltonian")
    planar, rot = check_planarity(g)
    _require(planar, "merge requires a planar graph")
    fsets = face_edge_sets(PlaneGraph(g, rot))
    cyc_of = {}
    cyc_edges = []
    for ci, cyc in enumerate(tf.components):
        es = set()
        for i, v in enumerate(cyc):
            cyc_of[v] = ci
            es.add(_norm_edge(v, cyc[(i + 1) % len(cyc)]))
        cyc_edges.append(es)

    def cofacial(e1, e2):
        return any(e1 in f and e2 in f for f in fsets)

    connecting = sorted(e for e in g.edges if cyc_of[e[0]] != cyc_of[e[1]])
    for u, v in connecting:
        Qi = tf.components[cyc_of[u]]
        Qj = tf.components[cyc_of[v]]
        u_edges = sorted(e for e in cyc_edges[cyc_of[u]] if u in e)
        v_edges = sorted(e for e in cyc_edges[cyc_of[v]] if v in e)
        for e in u_edges:
            for ep in v_edges:
                if cofacial(e, ep):
                    return _merge_case1(inst, tf, u, v, Qi, Qj, e, ep)
        spare = sorted(
            f for f in g.edges
            if u in f and f not in cyc_edges[cyc_of[u]] and f != _norm_edge(u, v)
        )
        for et in spare:
            for e in u_edges:
                for ep in v_edges:
                    if cofacial(e, et) and cofacial(et, ep):
                        return _merge_case2(inst, tf, u, v, Qi, Qj, e, et, ep)
    raise PipelineError("no mergeable configuration found")


def _other_end(e, v):
    return e[0] if e[1] == v else e[1]


def _replace_components(tf, drop, merged):
    comps = tuple(c for c in tf.components if c not in drop) + (tuple(merged),)
    return TwoFactor(comps)


def _merge_case1(inst, tf, u, v, Qi, Qj, e, ep):
    g = inst.graph
    u2 = _other_end(e, u)
    v2 = _other_end(ep, v)
    steps = [TraceStep("merge", "subdivide", 0, edge=e)]
    g, z = subdivide_edge(g, e)
    steps.append(TraceStep("merge", "subdivide", 0, edge=ep))
    g, zp = subdivide_edge(g, ep)
    L = GADGETS["L"]
    g, idm = insert_gadget_graph(g, L, z, zp)
    steps.append(TraceStep("merge", "insert", L.k_delta, gadget="L", attach=(z, zp)))
    interior = interior_path(L, idm)
    merged = [z] + _cycle_long_way(Qi, u2, u) + _cycle_long_way(Qj, v, v2) + [zp]
    merged += list(reversed(interior))
    out = Instance(g, inst.k + L.k_delta)
    tf2 = _replace_components(tf, {Qi, Qj}, merged)
    tf2.validate(g)
    _require(check_regular(g, 4), "merge broke 4-regularity")
    _require(check_planarity(g)[0], "merge broke planarity")
    return out, tf2, tuple(steps), 1


def _merge_case2(inst, tf, u, v, Qi, Qj, e, et, ep):
    g = inst.graph
    u2 = _other_end(e, u)
    wt = _other_end(et, u)
    v2 = _other_end(ep, v)
    steps = [TraceStep("merge", "subdivide", 0, edge=e)]
    g, z = subdivide_edge(g, e)
    steps.append(TraceStep("merge", "subdivide", 0, edge=et))
    g, zt1 = subdivide_edge(g, et)
    steps.append(TraceStep("merge", "subdivide", 0, edge=_norm_edge(zt1, wt)))
    g, zt2 = subdivide_edge(g, _norm_edge(zt1, wt))
    steps.append(TraceStep("merge", "subdivide", 0, edge=ep))
    g, zp = subdivide_edge(g, ep)
    L = GADGETS["L"]
    g, idm1 = insert_gadget_graph(g, L, z, zt1)
    steps.append(TraceStep("merge", "insert", L.k_delta, gadget="L", attach=(z, zt1)))
    g, idm2 = insert_gadget_graph(g, L, zt2, zp)
    steps.append(TraceStep("merge", "insert", L.k_delta, gadget="L", attach=(zt2, zp)))
    int1 = interior_path(L, idm1)
    int2 = interior_path(L, idm2)
    merged = [z] + int1 + [zt1, zt2] + int2 + [zp]
    merged += _cycle_long_way(Qj, v2, v) + _cycle_long_way(Qi, u, u2)
    out = Instance(g, inst.k + 2 * L.k_delta)
    tf2 = _replace_components(tf, {Qi, Qj}, merged)
    tf2.validate(g)
    _require(check_regular(g, 4), "merge broke 4-regularity")
    _require(check_planarity(g)[0], "merge broke planarity")
    return out, tf2, tuple(steps), 2


def hamiltonize(inst: Instance) -> StageResult:
    """Merge the 2-factor down to a single spanning cycle; at most n/3
    merges since every cycle has length at least 3."""
    g = inst.graph
    tf = compute_two_factor(g)
    budget = g.n // 3
    steps = []
    merges = 0
    while len(tf.components) > 1:
        if merges >= budget:
            raise PipelineError("merge budget n/3 exceeded")
        inst, tf, st, _case = merge_step(inst, tf)
        steps.extend(st)
        merges += 1
    witness = HamCycleWitness(tuple(tf.components[0]))
    out = Instance(inst.graph, inst.k, witness)
    return StageResult("hamiltonize", out, tuple(steps), _certificate(out), audit=merges)


def _disjoint_copy(g: Graph):
    """Second copy of g on fresh ids; returns (combined graph, old -> copy map)."""
    mapping = {}
    nid = g.next_id
    for v in sorted(g.vertices):
        mapping[v] = nid
        nid += 1
    new_edges = [(mapping[a], mapping[b]) for a, b in sorted(g.edges)]
    out = g.replace(add_vertices=mapping.values(), add_edges=new_edges, next_id=nid)
    return out, mapping


def evenize(inst: Instance) -> StageResult:
    """Force an even vertex count: duplicate the instance, doubly subdivide
    one witness edge in each copy, and bridge the copies with two L gadgets.
    Budget doubles plus 8; the order becomes 2n + 24."""
    _require(inst.witness is not None, "precondition: witness required")
    g = inst.graph
    if g.n % 2 == 0:
        return StageResult("evenize", inst, (), _certificate(inst))
    C = inst.witness.order
    e = min(inst.witness.edge_set())
    a, b = e
    g2, cmap = _disjoint_copy(g)
    steps = [TraceStep("evenize", "copy", inst.k)]
    ap, bp = cmap[a], cmap[b]
    g2, v1 = subdivide_edge(g2, (a, b))
    steps.append(TraceStep("evenize", "subdivide", 0, edge=(a, b)))
    g2, w1 = subdivide_edge(g2, (v1, b))
    steps.append(TraceStep("evenize", "subdivide", 0, edge=(v1, b)))
    g2, v2 = subdivide_edge(g2, (ap, bp))
    steps.append(TraceStep("evenize", "subdivide", 0, edge=(ap, bp)))
    g2, w2 = subdivide_edge(g2, (v2, bp))
    steps.append(TraceStep("evenize", "subdivide", 0, edge=(v2, bp)))
    L = GADGETS["L"]
    g2, idm1 = insert_gadget_graph(g2, L, v1, v2)
    steps.append(TraceStep("evenize", "insert", L.k_delta, gadget="L", attach=(v1, v2)))
    g2, idm2 = insert_gadget_graph(g2, L, w1, w2)
    steps.append(TraceStep("evenize", "insert", L.k_delta, gadget="L", attach=(w1, w2)))
    # splice: original cycle from b around to a, through the first L into the
    # copy, around it, and back through the second L
    main = _witness_long_way(C, b, a)
    copy_walk = [cmap[x] for x in _witness_long_way(C, a, b)]
    order = (
        main
        + [v1] + interior_path(L, idm1) + [v2]
        + copy_walk
        + [w2] + list(reversed(interior_path(L, idm2))) + [w1]
    )
    witness = HamCycleWitness(tuple(order))
    out = Instance(g2, 2 * inst.k + 8, witness)
    _require(out.graph.n == 2 * g.n + 24, "evenize size mismatch")
    _require(check_regular(out.graph, 4), "evenize broke 4-regularity")
    return StageResult("evenize", out, tuple(steps), _certificate(out))


def _witness_long_way(order, frm, to):
    """Traverse the witness cycle from frm to to the long way round."""
    return _cycle_long_way(list(order), frm, to)


def five_regularize(inst: Instance) -> StageResult:
    """One D gadget across every second witness edge lifts the whole graph
    from 4-regular to 5-regular; budget grows by 3n."""
    g = inst.graph
    _require(inst.witness is not None, "precondition: witness required")
    _require(check_regular(g, 4), "precondition: 4-regular graph required")
    if g.n % 2:
        raise PipelineError("evenize first")
    D = GADGETS["D"]
    order = inst.witness.order
    n = g.n
    steps = []
    k = inst.k
    new_order = []
    for i in range(0, n, 2):
        a, b = order[i], order[i + 1]
        g, idm = insert_gadget_graph(g, D, a, b)
        k += D.k_delta
        steps.append(TraceStep("5regular", "insert", D.k_delta, gadget="D", attach=(a, b)))
        new_order += [a] + interior_path(D, idm) + [b]
    witness = HamCycleWitness(tuple(new_order))
    out = Instance(g, k, witness)
    _require(out.graph.n == 7 * n, "5-regularization size mismatch")
    _require(check_regular(g, 5), "output not 5-regular")
    _require(k == inst.k + 3 * n, "budget ledger mismatch")
    return StageResult("5regular", out, tuple(steps), _certificate(out))


def p_regularize(inst: Instance, target_p: int) -> StageResult:
    """Repeated rounds of Y gadget insertions across a witness matching;
    each round raises regularity by one and keeps the order even."""
    g = inst.graph
    _require(inst.witness is not None, "precondition: witness required")
    degs = {g.degree(v) for v in g.vertices}
    _require(len(degs) == 1, "precondition: regular graph required")
    r = degs.pop()
    _require(r >= 4, "precondition: regularity >= 4 required")
    _require(r <= target_p, f"already {r}-regular, beyond target {target_p}")
    if g.n % 2:
        raise PipelineError("evenize first")
    steps = []
    k = inst.k
    witness = inst.witness
    while r < target_p:
        Y = build_gadget("Y", r)
        order = witness.order
        n = g.n
        new_order = []
        for i in range(0, n, 2):
            a, b = order[i], order[i + 1]
            g, idm = insert_gadget_graph(g, Y, a, b)
            k += Y.k_delta
            steps.append(TraceStep("pregular", "insert", Y.k_delta, gadget="Y", p=r, attach=(a, b)))
            new_order += [a] + interior_path(Y, idm) + [b]
        witness = HamCycleWitness(tuple(new_order))
        _require(g.n == n * (r + 2), "Y round size mismatch")
        r += 1
        _require(check_regular(g, r), f"Y round did not reach {r}-regularity")
    out = Instance(g, k, witness)
    # the clique gadgets rule out planarity from here on
    return StageResult("pregular", out, tuple(steps), _certificate(out, claim_planar=False))


def _lift_graph(g: Graph):
    """Join a K_{3n} onto g plus a dominating adjacent pair {x, y}."""
    n = g.n
    nid = g.next_id
    clique = list(range(nid, nid + 3 * n))
    x, y = nid + 3 * n, nid + 3 * n + 1
    edges = []
    for i, h in enumerate(clique):
        for h2 in clique[i + 1 :]:
            edges.append((h, h2))
        for v in g.vertices:
            edges.append((h, v))
        edges.append((h, x))
        edges.append((h, y))
    edges.append((x, y))
    g2 = g.replace(add_vertices=clique + [x, y], add_edges=edges, next_id=y + 1)
    return g2, clique, x, y


def lift_once(inst: Instance):
    """One join step; the result stays Hamiltonian and its budget grows by
    exactly 3n."""
    g = inst.graph
    _require(inst.witness is not None, "precondition: witness required")
    n = g.n
    g2, clique, x, y = _lift_graph(g)
    order = list(inst.witness.order) + [clique[0], x, y] + clique[1:]
    witness = HamCycleWitness(tuple(order))
    step = TraceStep("lift", "lift", 3 * n)
    return Instance(g2, inst.k + 3 * n, witness), step


def ham_ordered_lift(inst: Instance, target_p: int) -> StageResult:
    """Lift a Hamiltonian instance (3-Hamiltonian-ordered by definition) to
    target_p-Hamiltonian-ordered via target_p - 3 join steps, asserting the
    degree-sum sufficiency condition after each."""
    _require(inst.witness is not None, "precondition: witness required")
    _require(target_p >= 3, "precondition: target p >= 3 required")
    steps = []
    p = 3
    while p < target_p:
        inst, step = lift_once(inst)
        steps.append(step)
        p += 1
        _require(
            check_ore_condition(inst.graph, p),
            f"degree-sum condition failed for p={p}",
        )
    return StageResult("lift", inst, tuple(steps), _certificate(inst, claim_planar=False))


PLANAR_TARGETS = ("4reg-planar", "4reg-planar-ham", "5reg-planar-ham")


def parse_target(target: str):
    if target in PLANAR_TARGETS:
        return target, None
    for prefix in ("preg-ham:", "ham-ordered:"):
        if target.startswith(prefix):
            try:
                p = int(target[len(prefix):])
            except ValueError:
                raise PipelineError(f"malformed target {target!r}")
            if prefix == "preg-ham:" and p < 4:
                raise PipelineError("preg-ham requires p >= 4")
            if prefix == "ham-ordered:" and p < 3:
                raise PipelineError("ham-ordered requires p >= 3")
            return prefix[:-1], p
    raise PipelineError(f"unknown target {target!r}")


@dataclass(frozen=True)
class PipelineResult:
    input: Instance
    stages: tuple
    instance: Instance

    @property
    def trace(self) -> ReductionTrace:
        return ReductionTrace(tuple(s for st in self.stages for s in st.steps))


def run_pipeline(inst: Instance, target: str) -> PipelineResult:
    kind, p = parse_target(target)
    stages = []

    def push(sr):
        stages.append(sr)
        return sr.instance

    if kind == "ham-ordered":
        cur = inst
        if cur.witness is None:
            w = find_hamiltonian_cycle(cur.graph)
            _require(w is not None, "precondition: Hamiltonian input required")
            cur = Instance(cur.graph, cur.k, w)
        cur = push(ham_ordered_lift(cur, p))
        return PipelineResult(inst, tuple(stages), cur)

    stripped = strip_low_degree(inst)
    if stripped.graph != inst.graph:
        stages.append(StageResult("strip", stripped, (TraceStep("strip", "strip"),),
                                  _certificate(stripped)))
    cur = stripped
    _require(cur.graph.n > 0, "precondition: graph empty after stripping")
    cur = push(eliminate_degree_two(cur))
    cur = push(pair_degree_three(cur))
    if kind == "4reg-planar":
        return PipelineResult(inst, tuple(stages), cur)
    cur = push(hamiltonize(cur))
    if kind == "4reg-planar-ham" or (kind == "preg-ham" and p == 4):
        return PipelineResult(inst, tuple(stages), cur)
    cur = push(evenize(cur))
    cur = push(five_regularize(cur))
    if kind == "5reg-planar-ham" or (kind == "preg-ham" and p == 5):
        return PipelineResult(inst, tuple(stages), cur)
    # only preg-ham with p >= 6 remains
    cur = push(p_regularize(cur, p))
    return PipelineResult(inst, tuple(stages), cur)


def replay_trace(g: Graph, steps) -> tuple[Graph, int]:
    """Re-execute a recorded step list on the input graph. Fresh ids are
    allocated by the same deterministic counter, so a faithful trace
    reproduces the output graph exactly."""
    k_delta = 0
    for s in steps:
        if s.op == "strip":
            g = strip_low_degree(Instance(g, 0)).graph
        elif s.op == "subdivide":
            g, _ = subdivide_edge(g, s.edge)
        elif s.op == "identify":
            g, _ = identify_vertices(g, *s.attach)
        elif s.op == "insert":
            gadget = GADGETS[s.gadget] if s.gadget != "Y" else build_gadget("Y", s.p)
            g, _ = insert_gadget_graph(g, gadget, *s.attach)
        elif s.op == "copy":
            g, _ = _disjoint_copy(g)
        elif s.op == "lift":
            g, _, _, _ = _lift_graph(g)
        else:
            raise PipelineError(f"unknown trace op {s.op!r}")
        k_delta += s.k_delta
    return g, k_delta
