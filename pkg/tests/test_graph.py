import pytest

from fvskit.graph import (
    Graph,
    GraphError,
    HamCycleWitness,
    Instance,
    PlaneGraph,
    ReductionTrace,
    TraceStep,
    check_regular,
    face_edge_sets,
    faces,
    identify_vertices,
    rotation_from_coords,
    strip_low_degree,
    subdivide_edge,
)
from fvskit.solvers import check_planarity

from conftest import (
    bull_free_random,
    c4k1,
    complete_graph,
    cycle_graph,
    opt,
    path_graph,
)


class TestGraphBasics:
    def test_rejects_self_loop(self):
        with pytest.raises(GraphError, match="self-loop"):
            Graph([1], [(1, 1)])

    def test_rejects_dangling_edge(self):
        with pytest.raises(GraphError):
            Graph([1, 2], [(1, 3)])

    def test_parallel_edges_collapse(self):
        g = Graph([1, 2], [(1, 2), (2, 1)])
        assert g.m == 1

    def test_immutable(self):
        g = cycle_graph(3)
        with pytest.raises(AttributeError):
            g.vertices = frozenset()

    def test_next_id_fresh(self):
        g = Graph([0, 5], [(0, 5)])
        assert g.next_id == 6
        with pytest.raises(GraphError):
            Graph([0, 5], [(0, 5)], next_id=3)


class TestSubdivide:
    def test_k3_becomes_c4(self):
        g, w = subdivide_edge(cycle_graph(3), (1, 2))
        assert (g.n, g.m) == (4, 4)
        assert g.degree(w) == 2

    def test_c4k1_rim(self):
        g, _ = subdivide_edge(c4k1(), (1, 2))
        assert (g.n, g.m) == (6, 9)

    def test_single_edge(self):
        g, w = subdivide_edge(Graph.from_edges([(1, 2)]), (1, 2))
        assert opt(g) == 0

    def test_missing_edge(self):
        with pytest.raises(GraphError, match="edge not present"):
            subdivide_edge(cycle_graph(4), (1, 3))

    def test_preserves_optimum_small(self):
        graphs = [cycle_graph(5), complete_graph(4), c4k1()]
        graphs += [bull_free_random(7, 11, s) for s in range(4)]
        for g in graphs:
            assert g.n <= 10
            before = opt(g)
            for e in sorted(g.edges):
                g2, _ = subdivide_edge(g, e)
                assert opt(g2) == before


class TestIdentify:
    def test_two_paths(self):
        g = Graph.from_edges([(1, 2), (3, 4)])
        g2, m = identify_vertices(g, 2, 3)
        assert (g2.n, g2.m) == (3, 2)
        assert g2.degree(m) == 2

    def test_triangle_collapse(self):
        g2, m = identify_vertices(cycle_graph(3), 1, 2)
        assert (g2.n, g2.m) == (2, 1)

    def test_bowtie_from_triangles(self):
        g = Graph.from_edges([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        g2, m = identify_vertices(g, 3, 4)
        assert (g2.n, g2.m) == (5, 6)
        assert g2.degree(m) == 4

    def test_same_vertex(self):
        with pytest.raises(GraphError, match="identify requires distinct vertices"):
            identify_vertices(cycle_graph(3), 1, 1)


class TestStrip:
    def test_star(self):
        st = strip_low_degree(Instance(Graph.from_edges([(0, i) for i in range(1, 5)]), 2))
        assert st.graph.n == 0 and st.k == 2

    def test_pendant(self):
        g = Graph.from_edges([(1, 2), (2, 3), (1, 3), (3, 4)])
        st = strip_low_degree(Instance(g, 1))
        assert st.graph == cycle_graph(3)

    def test_forest(self):
        g = path_graph(10)
        assert opt(g) == 0
        assert strip_low_degree(Instance(g, 0)).graph.n == 0

    def test_idempotent_and_opt_preserving(self):
        for s in range(5):
            g = bull_free_random(8, 9, 100 + s)
            st = strip_low_degree(Instance(g, 0))
            again = strip_low_degree(st)
            assert again.graph == st.graph
            assert opt(g) == opt(st.graph)


def _embedded(g):
    planar, rot = check_planarity(g)
    assert planar
    return PlaneGraph(g, rot)


class TestFaces:
    def test_k3(self):
        fs = faces(_embedded(cycle_graph(3)))
        assert len(fs) == 2 and all(len(f) == 3 for f in fs)

    def test_k4(self):
        fs = faces(_embedded(complete_graph(4)))
        assert len(fs) == 4 and all(len(f) == 3 for f in fs)

    def test_c4k1(self):
        fs = faces(_embedded(c4k1()))
        assert len(fs) == 5
        assert sorted(len(f) for f in fs) == [3, 3, 3, 3, 4]

    def test_euler_on_corpus(self, pipeline_corpus):
        for g in pipeline_corpus.values():
            pg = _embedded(g)
            assert g.n - g.m + len(faces(pg)) == 2

    def test_disconnected(self):
        g = Graph.from_edges([(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        with pytest.raises(GraphError, match="faces require connected graph"):
            faces(_embedded(g))

    def test_face_edge_sets(self):
        fsets = face_edge_sets(_embedded(cycle_graph(4)))
        assert len(fsets) == 2
        assert all(len(f) == 4 for f in fsets)


class TestRotationFromCoords:
    def test_square_with_center(self):
        g = Graph.from_edges([(1, 2), (2, 3), (3, 4), (4, 1), (5, 1), (5, 2), (5, 3), (5, 4)])
        coords = {1: (0, 0), 2: (2, 0), 3: (2, 2), 4: (0, 2), 5: (1, 1)}
        rot = rotation_from_coords(g, coords)
        pg = PlaneGraph(g, rot, coords)
        assert g.n - g.m + len(faces(pg)) == 2
        assert set(rot[5]) == {1, 2, 3, 4}


class TestCheckRegular:
    def test_examples(self):
        assert not check_regular(c4k1(), 4)
        assert check_regular(complete_graph(5), 4)
        assert check_regular(Graph(), 7)


class TestWitnessAndInstance:
    def test_witness_valid(self):
        assert HamCycleWitness((1, 2, 3, 4, 5, 6)).is_valid_for(cycle_graph(6))

    def test_witness_broken_order(self):
        assert not HamCycleWitness((1, 2, 4, 3, 5, 6)).is_valid_for(cycle_graph(6))

    def test_witness_not_permutation(self):
        assert not HamCycleWitness((1, 2, 3)).is_valid_for(cycle_graph(4))

    def test_instance_negative_k(self):
        with pytest.raises(GraphError):
            Instance(cycle_graph(3), -1)

    def test_instance_bad_witness(self):
        with pytest.raises(GraphError):
            Instance(cycle_graph(4), 0, HamCycleWitness((1, 3, 2, 4)))


class TestTrace:
    def test_step_json_round_trip(self):
        s = TraceStep("merge", "insert", 4, gadget="L", attach=(3, 7))
        back = TraceStep.from_json("merge", s.to_json())
        assert back == s

    def test_ledger_sum(self):
        tr = ReductionTrace(
            (TraceStep("a", "insert", 3), TraceStep("a", "subdivide", 0), TraceStep("b", "insert", 4))
        )
        assert tr.total_k_delta == 7
        assert tr.stage_names() == ["a", "b"]
