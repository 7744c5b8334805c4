import itertools

import networkx as nx
import numpy as np
import pytest

from app.models.topology import (
    available_devices,
    cut_vertices,
    from_edge_list,
    named_topology,
    parse_edge_list,
    steiner_approx,
)
from app.utils.errors import (
    CircuitFormatError,
    DisconnectedTopologyError,
    InvalidQubitError,
    UnknownTopologyError,
)


def _exact_steiner_weight(t, terminals):
    """terminals를 포함하는 연결 유도 부분그래프 중 최소 정점 수 - 1"""
    others = [v for v in range(t.n) if v not in terminals]
    best = None
    for k in range(len(others) + 1):
        for extra in itertools.combinations(others, k):
            nodes = set(terminals) | set(extra)
            if nx.is_connected(t.graph.subgraph(nodes)):
                best = len(nodes) - 1
                break
        if best is not None:
            return best
    raise AssertionError("연결된 부분그래프가 없습니다")


class TestNamedTopologies:
    def test_line(self):
        assert named_topology("line-3").edges == {(0, 1), (1, 2)}

    def test_ring(self):
        t = named_topology("ring-4")
        assert t.edge_count == 4
        assert cut_vertices(t) == frozenset()

    def test_grid(self):
        t = named_topology("grid-2x3")
        assert t.n == 6
        assert t.edge_count == 7

    def test_complete(self):
        assert named_topology("complete-5").edge_count == 10

    def test_valencia_t_shape(self, valencia):
        degrees = [len(valencia.neighbors(v)) for v in range(valencia.n)]
        assert valencia.n == 5
        assert max(degrees) == 3

    @pytest.mark.parametrize("name,n", [
        ("valencia", 5), ("yorktown", 5), ("melbourne", 14), ("johannesburg", 20), ("singapore", 20),
    ])
    def test_bundled_devices(self, name, n):
        t = named_topology(name)
        assert t.n == n
        assert nx.is_connected(t.graph)
        assert name in available_devices()

    def test_case_insensitive(self):
        assert named_topology("Valencia").edges == named_topology("valencia").edges

    def test_unknown(self):
        with pytest.raises(UnknownTopologyError):
            named_topology("heron-133")


class TestEdgeList:
    def test_distance(self):
        assert from_edge_list(2, [(0, 1)]).dist[0][1] == 1

    def test_disconnected(self):
        with pytest.raises(DisconnectedTopologyError):
            from_edge_list(3, [(0, 1)])

    def test_out_of_range(self):
        with pytest.raises(InvalidQubitError):
            from_edge_list(2, [(0, 2)])

    def test_self_loop(self):
        with pytest.raises(InvalidQubitError):
            from_edge_list(2, [(0, 1), (1, 1)])

    def test_duplicates_collapse(self):
        assert from_edge_list(2, [(0, 1), (1, 0)]).edge_count == 1

    def test_parse(self):
        t = parse_edge_list("# 삼각형\nnodes 3\n0 1\n1 2  # 주석\n2 0\n", "tri")
        assert t.name == "tri"
        assert t.edge_count == 3

    def test_parse_error_has_line(self):
        with pytest.raises(CircuitFormatError) as exc:
            parse_edge_list("nodes 3\n0 1 2\n")
        assert exc.value.line_no == 2

    def test_johannesburg_distances(self):
        t = named_topology("johannesburg")
        assert np.array_equal(t.dist, t.dist.T)
        lengths = dict(nx.all_pairs_shortest_path_length(t.graph))
        for u in range(t.n):
            for v in range(t.n):
                assert t.dist[u][v] == lengths[u][v]
        assert 0 < t.diameter() < t.n

    def test_path_walks_edges(self):
        t = named_topology("melbourne")
        for u, v in [(0, 13), (3, 9), (7, 7)]:
            path = t.path(u, v)
            assert path[0] == u and path[-1] == v
            assert len(path) == t.dist[u][v] + 1
            assert all(t.has_edge(a, b) for a, b in zip(path, path[1:]))

    def test_path_respects_alive(self):
        t = named_topology("ring-6")
        assert t.path(0, 2, alive=[0, 5, 4, 3, 2]) == [0, 5, 4, 3, 2]
        with pytest.raises(DisconnectedTopologyError):
            t.path(0, 3, alive=[0, 3])


class TestSteiner:
    def test_line_path(self):
        tree = steiner_approx(named_topology("line-3"), {0, 2})
        assert tree.edges == {(0, 1), (1, 2)}
        assert tree.nodes() == {0, 1, 2}

    def test_single_terminal(self, valencia):
        assert steiner_approx(valencia, {3}).edges == frozenset()

    def test_within_twice_optimum_on_grid(self, rng):
        t = named_topology("grid-2x4")
        for _ in range(40):
            k = int(rng.integers(2, 5))
            terminals = {int(q) for q in rng.choice(t.n, size=k, replace=False)}
            tree = steiner_approx(t, terminals)
            assert nx.is_tree(tree.as_graph())
            assert terminals <= tree.nodes()
            assert all(t.has_edge(u, v) for u, v in tree.edges)
            assert tree.weight <= 2 * _exact_steiner_weight(t, terminals)

    def test_leaves_are_terminals(self, rng):
        t = named_topology("melbourne")
        for _ in range(20):
            terminals = {int(q) for q in rng.choice(t.n, size=5, replace=False)}
            g = steiner_approx(t, terminals).as_graph()
            assert all(v in terminals for v in g.nodes if g.degree(v) == 1)

    def test_alive_restriction(self):
        t = named_topology("ring-6")
        tree = steiner_approx(t, {0, 2}, alive=[0, 3, 4, 5, 2])
        assert tree.nodes() == {0, 2, 3, 4, 5}

    def test_rooted_postorder_ends_at_root(self):
        tree = steiner_approx(named_topology("line-5"), {0, 4})
        parents, order = tree.rooted(2)
        assert order[-1] == 2
        assert parents[0] == 1 and parents[4] == 3
        assert tree.depth(2) == 2


class TestCutVertices:
    def test_line(self):
        assert cut_vertices(named_topology("line-3")) == {1}

    def test_ring(self):
        assert cut_vertices(named_topology("ring-5")) == frozenset()

    def test_matches_removal_oracle(self, rng):
        t = named_topology("grid-3x3")
        checked = 0
        while checked < 40:
            k = int(rng.integers(2, 10))
            alive = sorted(int(q) for q in rng.choice(t.n, size=k, replace=False))
            sub = t.graph.subgraph(alive)
            if not nx.is_connected(sub):
                continue
            expected = {
                v for v in alive
                if len(alive) > 2 and not nx.is_connected(sub.subgraph([u for u in alive if u != v]))
            }
            assert cut_vertices(t, alive) == expected
            checked += 1

    def test_disconnected_alive(self):
        with pytest.raises(DisconnectedTopologyError):
            cut_vertices(named_topology("line-4"), [0, 3])
