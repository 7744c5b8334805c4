"""
연결 그래프(토폴로지), 최단거리 테이블, 근사 Steiner 트리, 절단 정점

모든 합성 알고리즘의 라우팅 기반입니다. 거리는 무가중치 홉 수이고,
거리 테이블(_tables)이 가중치 그래프로 확장할 때 바꿀 유일한 지점입니다.
"""
import logging
import re
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

from app.config.settings import get_settings
from app.utils.errors import (
    CircuitFormatError,
    DisconnectedTopologyError,
    InvalidQubitError,
    UnknownTopologyError,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]

_TABLE_CACHE_LIMIT = 4096


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Topology:
    """
    무방향 연결 그래프

    dist[u][v]: 홉 수, pred[s][v]: s에서 v로 가는 최단경로에서 v 직전 정점
    (동률이면 가장 작은 인덱스). 생성 후 변경되지 않습니다.
    """

    def __init__(self, n: int, edges: Iterable[Sequence[int]], name: Optional[str] = None):
        if n < 1:
            raise ValueError("노드 수는 1 이상이어야 합니다")
        normalized = set()
        for pair in edges:
            u, v = (int(x) for x in pair)
            for q in (u, v):
                if not 0 <= q < n:
                    raise InvalidQubitError(f"엣지 ({u}, {v})의 정점이 범위 [0, {n})를 벗어났습니다")
            if u == v:
                raise InvalidQubitError(f"셀프 루프는 허용되지 않습니다: ({u}, {v})")
            normalized.add(_edge(u, v))

        self.n = n
        self.name = name or f"custom-{n}"
        self.edges: FrozenSet[Edge] = frozenset(normalized)
        self.graph = nx.Graph()
        self.graph.add_nodes_from(range(n))
        self.graph.add_edges_from(sorted(normalized))
        if not nx.is_connected(self.graph):
            raise DisconnectedTopologyError(f"연결 그래프가 아닙니다: {self.name}")

        self._adjacency = np.zeros((n, n), dtype=bool)
        for u, v in normalized:
            self._adjacency[u, v] = self._adjacency[v, u] = True
        self._cache: Dict[FrozenSet[int], Tuple[np.ndarray, np.ndarray]] = {}
        dist, pred = self._tables(None)
        self.dist = dist.astype(np.int64)
        self.dist.setflags(write=False)
        self.pred = pred

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _edge(u, v) in self.edges

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(sorted(self.graph.neighbors(v)))

    def _tables(self, alive: Optional[FrozenSet[int]]) -> Tuple[np.ndarray, np.ndarray]:
        """alive로 유도된 부분그래프의 (dist, pred). 도달 불가 = inf / -1"""
        key = frozenset(range(self.n)) if alive is None else frozenset(alive)
        cached = self._cache.get(key)
        if cached is not None:
            return cached

        mask = np.zeros(self.n, dtype=bool)
        mask[list(key)] = True
        adjacency = self._adjacency & mask[:, None] & mask[None, :]
        dist = shortest_path(csr_matrix(adjacency.astype(np.int8)), method="D", directed=False, unweighted=True)
        pred = np.full((self.n, self.n), -1, dtype=np.int64)
        for v in range(self.n):
            neighbors = np.flatnonzero(adjacency[:, v])
            if neighbors.size == 0:
                continue
            for s in range(self.n):
                d = dist[s, v]
                if d == 0 or not np.isfinite(d):
                    continue
                candidates = neighbors[dist[s, neighbors] == d - 1]
                pred[s, v] = candidates.min()
        dist.setflags(write=False)
        pred.setflags(write=False)

        if len(self._cache) >= _TABLE_CACHE_LIMIT:
            self._cache.clear()
        self._cache[key] = (dist, pred)
        return dist, pred

    def path(self, u: int, v: int, alive: Optional[Iterable[int]] = None) -> List[int]:
        """
        u → v 최단경로 (양 끝 포함)

        Raises:
            DisconnectedTopologyError: alive 안에서 도달할 수 없는 경우
        """
        dist, pred = self._tables(None if alive is None else frozenset(alive))
        if not np.isfinite(dist[u, v]):
            raise DisconnectedTopologyError(f"{u} → {v} 경로가 없습니다")
        nodes = [v]
        while nodes[-1] != u:
            nodes.append(int(pred[u, nodes[-1]]))
        return list(reversed(nodes))

    def diameter(self) -> int:
        return int(self.dist.max())

    def __repr__(self) -> str:
        return f"Topology({self.name!r}, n={self.n}, edges={self.edge_count})"


@dataclass(frozen=True)
class SteinerTree:
    """terminals를 모두 포함하는 토폴로지 엣지 위의 트리"""

    terminals: FrozenSet[int]
    edges: FrozenSet[Edge]

    @property
    def weight(self) -> int:
        return len(self.edges)

    def nodes(self) -> FrozenSet[int]:
        nodes = set(self.terminals)
        for u, v in self.edges:
            nodes.update((u, v))
        return frozenset(nodes)

    def as_graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(sorted(self.nodes()))
        g.add_edges_from(sorted(self.edges))
        return g

    def rooted(self, root: int) -> Tuple[Dict[int, int], List[int]]:
        """
        root 기준 (부모 딕셔너리, 후위 순회 순서). 후위 순서의 마지막은 root
        """
        g = self.as_graph()
        parents = {child: parent for child, parent in nx.bfs_predecessors(g, root)}
        order = list(nx.dfs_postorder_nodes(g, root))
        return parents, order

    def depth(self, root: int) -> int:
        lengths = nx.single_source_shortest_path_length(self.as_graph(), root)
        return max(lengths.values())


def _kruskal(weighted: Iterable[Tuple[float, int, int]]) -> List[Edge]:
    """(가중치, u, v) 오름차순 크루스칼 (동률은 사전순 작은 쌍 우선)"""
    forest = UnionFind()
    chosen = []
    for _, u, v in sorted(weighted):
        if forest[u] != forest[v]:
            forest.union(u, v)
            chosen.append(_edge(u, v))
    return chosen


def steiner_approx(
    t: Topology,
    terminals: Iterable[int],
    alive: Optional[Iterable[int]] = None,
) -> SteinerTree:
    """
    메트릭 클로저 MST 기반 근사 Steiner 트리

    1. 터미널 간 최단거리 완전그래프의 MST
    2. MST 엣지를 최단경로로 펼침
    3. 합집합 위에서 다시 스패닝 트리를 잡고 터미널이 아닌 잎을 제거

    Args:
        t: 토폴로지
        terminals: 반드시 포함할 정점들
        alive: 사용할 수 있는 정점 집합 (None이면 전체)

    Raises:
        DisconnectedTopologyError: alive 안에서 터미널끼리 연결되지 않는 경우
    """
    terms = sorted({int(q) for q in terminals})
    if not terms:
        raise ValueError("터미널이 비어 있습니다")
    for q in terms:
        if not 0 <= q < t.n:
            raise InvalidQubitError(f"터미널 {q}가 범위 [0, {t.n})를 벗어났습니다")
    alive_set = None if alive is None else frozenset(alive) | frozenset(terms)
    if len(terms) == 1:
        return SteinerTree(frozenset(terms), frozenset())

    dist, _ = t._tables(alive_set)
    closure = []
    for i, a in enumerate(terms):
        for b in terms[i + 1:]:
            d = dist[a, b]
            if not np.isfinite(d):
                raise DisconnectedTopologyError(f"터미널 {a}, {b}가 연결되지 않습니다")
            closure.append((d, a, b))

    expanded = set()
    for a, b in _kruskal(closure):
        path = t.path(a, b, alive_set)
        expanded.update(_edge(u, v) for u, v in zip(path, path[1:]))

    tree = nx.Graph()
    tree.add_edges_from(_kruskal((1, u, v) for u, v in expanded))
    required = set(terms)
    leaves = [v for v in tree.nodes if tree.degree(v) == 1 and v not in required]
    while leaves:
        tree.remove_nodes_from(leaves)
        leaves = [v for v in tree.nodes if tree.degree(v) == 1 and v not in required]
    return SteinerTree(frozenset(terms), frozenset(_edge(u, v) for u, v in tree.edges))


def cut_vertices(t: Topology, alive: Optional[Iterable[int]] = None) -> FrozenSet[int]:
    """
    alive 유도 부분그래프의 절단 정점 (DFS low-link)

    Raises:
        DisconnectedTopologyError: 유도 부분그래프가 끊어진 경우
    """
    nodes = range(t.n) if alive is None else sorted(set(alive))
    if not nodes:
        return frozenset()
    sub = t.graph.subgraph(nodes)
    if not nx.is_connected(sub):
        raise DisconnectedTopologyError(f"alive 부분그래프가 연결되어 있지 않습니다: {sorted(nodes)}")
    return frozenset(nx.articulation_points(sub))


def from_edge_list(n: int, edges: Iterable[Sequence[int]], name: Optional[str] = None) -> Topology:
    return Topology(n, edges, name)


def parse_edge_list(text: str, name: Optional[str] = None) -> Topology:
    """
    엣지 리스트 텍스트 파싱: 첫 구문 'nodes <n>', 이후 'u v' 한 쌍씩, '#' 주석

    Raises:
        CircuitFormatError: 형식 오류
    """
    n = None
    edges = []
    for line_no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if n is None:
                if tokens[0] != "nodes" or len(tokens) != 2:
                    raise CircuitFormatError("첫 구문은 'nodes <n>' 이어야 합니다", line_no)
                n = int(tokens[1])
            elif len(tokens) == 2:
                edges.append((int(tokens[0]), int(tokens[1])))
            else:
                raise CircuitFormatError(f"엣지 줄 형식 오류: {line}", line_no)
        except ValueError as e:
            if isinstance(e, CircuitFormatError):
                raise
            raise CircuitFormatError(str(e), line_no)
    if n is None:
        raise CircuitFormatError("'nodes <n>' 선언이 없습니다")
    return Topology(n, edges, name)


def load_edge_list(path: Path, name: Optional[str] = None) -> Topology:
    return parse_edge_list(Path(path).read_text(encoding="utf-8"), name or Path(path).stem)


def _grid_edges(rows: int, cols: int) -> List[Edge]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return edges


_PATTERNS = {
    "line": re.compile(r"^line-(\d+)$"),
    "ring": re.compile(r"^ring-(\d+)$"),
    "grid": re.compile(r"^grid-(\d+)x(\d+)$"),
    "complete": re.compile(r"^complete-(\d+)$"),
}


def available_devices() -> List[str]:
    data_dir = get_settings().data_dir
    return sorted(p.stem for p in Path(data_dir).glob("*.txt"))


@lru_cache(maxsize=64)
def named_topology(name: str) -> Topology:
    """
    이름으로 토폴로지 조회

    line-k, ring-k, grid-RxC, complete-k 는 정의대로 만들고,
    valencia / yorktown / melbourne / johannesburg / singapore 는 번들 파일에서 읽습니다.

    Raises:
        UnknownTopologyError: 알 수 없는 이름
    """
    key = name.strip().lower()
    if match := _PATTERNS["line"].match(key):
        k = int(match.group(1))
        return Topology(k, [(i, i + 1) for i in range(k - 1)], key)
    if match := _PATTERNS["ring"].match(key):
        k = int(match.group(1))
        return Topology(k, [(i, (i + 1) % k) for i in range(k)] if k > 1 else [], key)
    if match := _PATTERNS["grid"].match(key):
        rows, cols = int(match.group(1)), int(match.group(2))
        return Topology(rows * cols, _grid_edges(rows, cols), key)
    if match := _PATTERNS["complete"].match(key):
        k = int(match.group(1))
        return Topology(k, [(i, j) for i in range(k) for j in range(i + 1, k)], key)

    path = Path(get_settings().data_dir) / f"{key}.txt"
    if path.is_file():
        topology = load_edge_list(path, key)
        logger.debug(f"✅ 토폴로지 로드: {key} (n={topology.n}, edges={topology.edge_count})")
        return topology
    raise UnknownTopologyError(f"알 수 없는 토폴로지: {name}")
