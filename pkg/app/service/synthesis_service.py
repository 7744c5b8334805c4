"""
연결 제약 합성 서비스

Steiner-GraySynth(SG), ParitySynth(Par), 가젯별 토폴로지 분해(gadget),
무제약 사다리 분해(naive)와 꼬리 합성용 PermRowCol을 제공합니다.

모든 백엔드는 같은 방식으로 동작합니다:
CNOT을 하나 내보낼 때마다 작업 테이블에 push하고,
첫 교환 영역에 레그 1개 가젯이 생기면 즉시 회전 게이트로 뽑아냅니다.
가젯이 모두 빠지면 남은 꼬리 행렬을 PermRowCol로 합성합니다.
Par는 탐욕적 소거, 가젯별 되돌림, (엣지 위에 있을 때) 사다리 분해 중 가장 싼 것을 고릅니다.
"""
import logging
import time
from enum import Enum
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.models.circuit import Gate, QubitMapping, SynthResult
from app.models.gf2 import ParityMatrix, gauss_cnots, solve
from app.models.phasepoly import GadgetTable, MixedPhasePolynomial, naive_gadget_circuit, relabel
from app.models.topology import Topology, cut_vertices, steiner_approx
from app.utils.errors import DimensionMismatchError, DisconnectedTopologyError, UnknownMethodError

logger = logging.getLogger(__name__)


class Method(str, Enum):
    """단일 합성 방법"""

    NAIVE = "naive"
    SG = "SG"
    PAR = "Par"
    GADGET = "gadget"

    @classmethod
    def parse(cls, name) -> "Method":
        if isinstance(name, Method):
            return name
        key = str(name).strip().lower()
        aliases = {
            "naive": cls.NAIVE,
            "uncompiled": cls.NAIVE,
            "sg": cls.SG,
            "steiner-graysynth": cls.SG,
            "par": cls.PAR,
            "paritysynth": cls.PAR,
            "gadget": cls.GADGET,
        }
        if key not in aliases:
            raise UnknownMethodError(f"알 수 없는 합성 방법: {name}")
        return aliases[key]


class _Emitter:
    """작업 테이블에 CNOT을 push하면서 출력 게이트를 쌓는 헬퍼"""

    def __init__(self, table: GadgetTable, topology: Topology):
        self.table = table
        self.topology = topology
        self.gates: List[Gate] = []

    def cnot(self, control: int, target: int) -> None:
        self.table.cnot(control, target)
        self.gates.append(Gate.cnot(control, target))

    def leg_add(self, is_x: bool, src: int, dst: int) -> None:
        """해당 기저 가젯들의 legs[dst] ^= legs[src]"""
        if is_x:
            self.cnot(src, dst)
        else:
            self.cnot(dst, src)

    def bridge(self, is_x: bool, path: Sequence[int]) -> None:
        """
        path[-1]의 레그를 path[0]에 더하고 중간 정점은 원래대로 되돌림

        경로 길이 k에 대해 4(k-1)개 (k=1이면 1개) CNOT.
        """
        k = len(path) - 1
        steps = (
            list(range(k - 1, -1, -1))
            + list(range(1, k))
            + list(range(k - 2, -1, -1))
            + list(range(1, k - 1))
        )
        for s in steps:
            self.leg_add(is_x, path[s + 1], path[s])

    def extract(self) -> None:
        self.gates.extend(self.table.extract_singles())


class SynthesisService:
    """연결 제약 합성 서비스"""

    @staticmethod
    def permrowcol(m: ParityMatrix, t: Topology) -> Tuple[List[Gate], QubitMapping]:
        """
        패리티 행렬을 토폴로지 엣지 위의 CNOT으로 합성 (큐비트 재배치 허용)

        m⁻¹에 행 연산만 적용해 치환행렬로 줄입니다. 매 단계 남은 그래프의
        절단 정점이 아닌 레지스터 r과 열 c를 골라 c열을 Steiner 트리로 소거하고,
        r행을 e_c로 만드는 행 조합을 다시 Steiner 트리로 더합니다.

        Args:
            m: 가역 패리티 행렬
            t: 토폴로지 (m.n == t.n)

        Returns:
            (CNOT 게이트 목록, 매핑 σ). replay(CNOT)[σ(j)] == m[j]

        Raises:
            SingularMatrixError: m이 특이 행렬인 경우
            DimensionMismatchError: 차원이 다른 경우
        """
        if m.n != t.n:
            raise DimensionMismatchError(f"행렬 차원 {m.n} != 토폴로지 크기 {t.n}")
        n = m.n
        work = m.invert().to_bits().astype(np.uint8)
        gates: List[Gate] = []
        sigma = [0] * n
        rows_left = list(range(n))
        cols_left = list(range(n))

        def row_add(src: int, dst: int) -> None:
            work[dst] ^= work[src]
            gates.append(Gate.cnot(src, dst))

        while len(rows_left) > 1:
            cuts = cut_vertices(t, rows_left)
            sub = work[np.ix_(rows_left, cols_left)]
            row_weight = sub.sum(axis=1, dtype=np.int64)
            col_weight = sub.sum(axis=0, dtype=np.int64)
            best = None
            for a, r in enumerate(rows_left):
                if r in cuts:
                    continue
                for b in np.flatnonzero(sub[a]):
                    key = (int(row_weight[a] + col_weight[b]), r, cols_left[b])
                    if best is None or key < best:
                        best = key
            _, r, c = best

            # c열 소거: c열이 1인 행들과 r을 잇는 트리
            ones = [v for v in rows_left if work[v, c]]
            tree = steiner_approx(t, ones + [r], alive=rows_left)
            parents, order = tree.rooted(r)
            for v in order:
                if v != r and not work[parents[v], c]:
                    row_add(v, parents[v])
            for v in order:
                if v != r:
                    row_add(parents[v], v)

            # r행 소거: r행 + (다른 행들의 조합) = e_c
            others = [v for v in rows_left if v != r]
            other_cols = [x for x in cols_left if x != c]
            coeffs = solve(work[np.ix_(others, other_cols)].T, work[r, other_cols])
            chosen = {others[i] for i in np.flatnonzero(coeffs)}
            if chosen:
                tree = steiner_approx(t, sorted(chosen) + [r], alive=rows_left)
                parents, order = tree.rooted(r)
                for v in reversed(order):
                    if v != r and v not in chosen:
                        row_add(v, parents[v])
                for v in order:
                    if v != r:
                        row_add(v, parents[v])

            sigma[c] = r
            rows_left.remove(r)
            cols_left.remove(c)

        sigma[cols_left[0]] = rows_left[0]
        return gates, QubitMapping(tuple(sigma))

    @staticmethod
    def cnot_network_gauss(m: ParityMatrix) -> List[Gate]:
        """연결 제약 없는 가우스 소거 구현 (naive 방법의 꼬리)"""
        return [Gate.cnot(c, t) for c, t in gauss_cnots(m)]

    @staticmethod
    def _extract_along_tree(em: _Emitter, index: int) -> None:
        """
        가젯 하나를 Steiner 트리 두 번 훑기로 레그 1개까지 줄임

        1차(잎→루트): 트리 위 0인 정점을 자식으로 채움
        2차(잎→루트): 부모 레그를 더해 루트만 남김
        """
        table = em.table
        is_x = bool(table.is_x[index])
        support = table.support(index)
        tree = steiner_approx(em.topology, support)
        root = min(support, key=lambda q: (tree.depth(q), q))
        parents, order = tree.rooted(root)
        for v in order:
            if v != root and not table.legs[index, parents[v]]:
                em.leg_add(is_x, v, parents[v])
        for v in order:
            if v != root:
                em.leg_add(is_x, parents[v], v)

    @staticmethod
    def _paritysynth(em: _Emitter) -> None:
        """영역마다 Steiner 트리 비용이 가장 작은 가젯부터 추출"""
        table = em.table
        while True:
            region = table.first_region()
            if region.size == 0:
                return
            best_index, best_cost = None, None
            for i in region:
                cost = steiner_approx(em.topology, table.support(i)).weight
                if best_cost is None or cost < best_cost:
                    best_index, best_cost = int(i), cost
            SynthesisService._extract_along_tree(em, best_index)
            em.extract()

    @staticmethod
    def _gadgetwise(em: _Emitter) -> None:
        """가젯마다 트리 분해 후 같은 CNOT을 거꾸로 되돌림 (레그 간 공유 없음)"""
        table = em.table
        while True:
            live = table.live()
            if live.size == 0:
                return
            start = len(em.gates)
            SynthesisService._extract_along_tree(em, int(live[0]))
            ladder = [g for g in em.gates[start:] if g.is_cnot]
            em.extract()
            for g in reversed(ladder):
                em.cnot(g.control, g.target)
            em.extract()

    @staticmethod
    def _clear_all_ones(em: _Emitter, is_x: bool, subset: List[int], qubits: frozenset, target: int) -> None:
        """
        subset의 모든 가젯에서 1인 레그(target 제외)를 target 쪽으로 지움

        target과 그 레그들을 잇는 트리를 잎부터 훑으면서,
        가장 가까운 조상 레그로 지우고 중간 Steiner 정점은 bridge로 복원합니다.
        """
        table = em.table
        t = em.topology
        while subset:
            bits = table.legs[subset]
            if not bits[:, target].all():
                return
            marked = [int(j) for j in np.flatnonzero(bits.all(axis=0)) if j != target]
            if not marked:
                return
            allowed = qubits | {target} | set(marked)
            try:
                tree = steiner_approx(t, marked + [target], alive=allowed)
            except DisconnectedTopologyError:
                tree = steiner_approx(t, marked + [target])
            parents, order = tree.rooted(target)
            anchors = set(marked) | {target}
            for v in order:
                if v == target or v not in anchors:
                    continue
                path = [v]
                while path[-1] == v or path[-1] not in anchors:
                    path.append(parents[path[-1]])
                em.bridge(is_x, path)
            em.extract()
            subset = [g for g in subset if table.alive[g]]

    @staticmethod
    def _graysynth_region(em: _Emitter, region: np.ndarray) -> None:
        """
        한 교환 영역에 대한 Steiner-GraySynth 재귀 (명시적 스택)

        (가젯 부분집합, 남은 큐비트 집합, 타깃)을 꺼낼 때마다
        남은 그래프의 절단 정점이 아닌 큐비트 중 비트 값이 가장 한쪽으로 몰린 것으로 분할합니다.
        """
        table = em.table
        t = em.topology
        is_x = bool(table.is_x[region[0]])
        stack: List[Tuple[List[int], frozenset, Optional[int]]] = [
            ([int(i) for i in region], frozenset(range(t.n)), None)
        ]
        while stack:
            subset, qubits, target = stack.pop()
            subset = [g for g in subset if table.alive[g]]
            if not subset:
                continue
            if target is not None:
                SynthesisService._clear_all_ones(em, is_x, subset, qubits, target)
                subset = [g for g in subset if table.alive[g]]
                if not subset:
                    continue
            if not qubits:
                continue

            nodes = qubits | {target} if target is not None else qubits
            try:
                cuts = cut_vertices(t, nodes)
            except DisconnectedTopologyError:
                cuts = frozenset()
            candidates = [q for q in sorted(qubits) if q not in cuts] or sorted(qubits)
            ones = table.legs[np.ix_(subset, candidates)].sum(axis=0, dtype=np.int64)
            score = np.maximum(ones, len(subset) - ones)
            j = candidates[int(np.argmax(score))]

            with_j = [g for g in subset if table.legs[g, j]]
            without_j = [g for g in subset if not table.legs[g, j]]
            rest = qubits - {j}
            stack.append((without_j, rest, target))
            stack.append((with_j, rest, target if target is not None else j))

        # 재귀가 남긴 가젯은 트리 추출로 마무리
        em.extract()
        leftovers = [int(i) for i in region if table.alive[i]]
        if leftovers:
            logger.debug(f"⚠️ SG 재귀 후 남은 가젯 {len(leftovers)}개를 트리 추출로 처리")
        for i in leftovers:
            if table.alive[i]:
                SynthesisService._extract_along_tree(em, i)
                em.extract()

    @staticmethod
    def _steiner_graysynth(em: _Emitter) -> None:
        table = em.table
        while True:
            region = table.first_region()
            if region.size == 0:
                return
            SynthesisService._graysynth_region(em, region)
            em.extract()

    @staticmethod
    def _run_backend(table: GadgetTable, t: Topology, backend) -> Tuple[List[Gate], QubitMapping]:
        em = _Emitter(table, t)
        em.extract()
        backend(em)
        tail_gates, sigma = SynthesisService.permrowcol(ParityMatrix.from_bits(table.tail), t)
        return em.gates + tail_gates, sigma

    @staticmethod
    def _ladder_on_edges(table: GadgetTable, t: Topology) -> Optional[Tuple[List[Gate], QubitMapping]]:
        """사다리 분해가 모두 엣지 위에 있으면 그 결과, 아니면 None"""
        p = table.to_polynomial()
        gates: List[Gate] = []
        for g in p.gadgets:
            gates.extend(naive_gadget_circuit(g))
        gates.extend(SynthesisService.cnot_network_gauss(p.tail))
        if not all(t.has_edge(g.control, g.target) for g in gates if g.is_cnot):
            return None
        return gates, QubitMapping.identity(table.n)

    @staticmethod
    def _cheapest_par(table: GadgetTable, t: Topology) -> Tuple[List[Gate], QubitMapping]:
        """
        Par 후보 중 CNOT이 가장 적은 것 (동률이면 앞선 후보)

        1. 탐욕적 잎 소거 (사다리 잔여물을 테이블에 남김)
        2. 가젯별 되돌림 (잔여물 없음)
        3. 사다리 분해 (모든 CNOT이 엣지 위일 때만, 완전 그래프에서는 항상)
        """
        candidates = [
            SynthesisService._run_backend(table.copy(), t, SynthesisService._paritysynth),
            SynthesisService._run_backend(table.copy(), t, SynthesisService._gadgetwise),
        ]
        ladder = SynthesisService._ladder_on_edges(table, t)
        if ladder is not None:
            candidates.append(ladder)
        return min(candidates, key=lambda c: sum(1 for g in c[0] if g.is_cnot))

    @staticmethod
    def synthesize_table(table: GadgetTable, t: Topology, method) -> Tuple[List[Gate], QubitMapping]:
        """
        물리 레지스터 기준 작업 테이블을 합성 (table은 소모될 수 있음)

        Returns:
            (게이트 목록, 꼬리 합성이 만든 매핑 σ)
        """
        method = Method.parse(method)
        if method == Method.NAIVE:
            raise UnknownMethodError("naive는 작업 테이블 합성을 지원하지 않습니다")
        if table.n != t.n:
            raise DimensionMismatchError(f"큐비트 수 {table.n} != 토폴로지 크기 {t.n}")
        if method == Method.SG:
            return SynthesisService._run_backend(table, t, SynthesisService._steiner_graysynth)
        if method == Method.PAR:
            return SynthesisService._cheapest_par(table, t)
        return SynthesisService._run_backend(table, t, SynthesisService._gadgetwise)

    @staticmethod
    def synthesize(
        p: MixedPhasePolynomial,
        t: Topology,
        method="SG",
        in_map: Optional[QubitMapping] = None,
    ) -> SynthResult:
        """
        다항식을 합성

        Args:
            p: 입력 다항식
            t: 토폴로지 (naive는 차원 확인에만 사용)
            method: naive | SG | Par | gadget
            in_map: 초기 매핑 (기본 항등)

        Returns:
            SynthResult (output_mapping = σ ∘ in_map)

        Raises:
            DimensionMismatchError: p.n != t.n
            UnknownMethodError: 알 수 없는 방법
        """
        method = Method.parse(method)
        if p.n != t.n:
            raise DimensionMismatchError(f"큐비트 수 {p.n} != 토폴로지 크기 {t.n}")
        in_map = in_map or QubitMapping.identity(p.n)
        start = time.perf_counter()

        physical = relabel(p, in_map)
        if method == Method.NAIVE:
            gates: List[Gate] = []
            for g in physical.gadgets:
                gates.extend(naive_gadget_circuit(g))
            gates.extend(SynthesisService.cnot_network_gauss(physical.tail))
            out_map = in_map
        else:
            gates, sigma = SynthesisService.synthesize_table(GadgetTable.from_polynomial(physical), t, method)
            out_map = in_map.then(sigma)

        result = SynthResult(tuple(gates), in_map, out_map, time.perf_counter() - start)
        logger.debug(
            f"✅ {method.value} 합성 완료: {t.name}, m={p.m}, CNOT={result.cnot_count}, {result.elapsed:.4f}s"
        )
        return result

    @staticmethod
    def steiner_graysynth(p: MixedPhasePolynomial, t: Topology, in_map: Optional[QubitMapping] = None) -> SynthResult:
        return SynthesisService.synthesize(p, t, Method.SG, in_map)

    @staticmethod
    def paritysynth(p: MixedPhasePolynomial, t: Topology, in_map: Optional[QubitMapping] = None) -> SynthResult:
        return SynthesisService.synthesize(p, t, Method.PAR, in_map)

    @staticmethod
    def topology_aware_naive(p: MixedPhasePolynomial, t: Topology, in_map: Optional[QubitMapping] = None) -> SynthResult:
        return SynthesisService.synthesize(p, t, Method.GADGET, in_map)
