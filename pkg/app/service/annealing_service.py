"""
메타휴리스틱 서비스

시뮬레이티드 어닐링: 회로 앞에 CNOT 레이어(cnot_blocks개)를 두고, 매 이동마다 한 레이어의
엣지 CNOT 하나를 토글한 뒤 그 변화를 다항식에 push합니다. 비용은 내부 합성 전체의 CNOT 수이고
거절된 이동은 같은 push 열을 한 번 더 적용해 정확히 되돌립니다.

Reverse Traversal: 회로와 역회로를 번갈아 합성하며 출력 매핑을 다음 입력 매핑으로 넘깁니다.
두 방법 모두 지금까지의 최선 결과를 반환합니다.
"""
import logging
import math
import time
from typing import List, Optional, Tuple

import numpy as np

from app.models.circuit import Gate, QubitMapping, SynthResult
from app.models.phasepoly import GadgetTable, MixedPhasePolynomial, relabel, reverse_polynomial
from app.models.topology import Topology
from app.schemas.pipeline import AnnealConfig, PipelineSpec
from app.service.synthesis_service import Method, SynthesisService
from app.utils.errors import DimensionMismatchError, UnknownMethodError

logger = logging.getLogger(__name__)

Cnot = Tuple[int, int]

_SEED_MASK = (1 << 64) - 1


def derive_seed(*parts: int) -> int:
    """(시드, 인덱스, ...)에서 결정적인 하위 시드 생성 (음수는 64비트 2의 보수로 취급)"""
    return int(np.random.SeedSequence([int(p) & _SEED_MASK for p in parts]).generate_state(1)[0])


def _toggle(layers: List[List[Cnot]], k: int, cnot: Cnot):
    """
    k번째 레이어에서 cnot을 토글

    Returns:
        (다항식에 push할 CNOT 열, 레이어 변경을 되돌리는 함수)
    """
    layer = layers[k]
    later = [g for block in layers[k + 1:] for g in block]
    if cnot in layer:
        pos = layer.index(cnot)
        after = layer[pos + 1:] + later
        layer.pop(pos)

        def undo():
            layer.insert(pos, cnot)
    else:
        after = later
        layer.append(cnot)

        def undo():
            layer.pop()
    return list(reversed(after)) + [cnot] + after, undo


class AnnealingService:
    """어닐링 / Reverse Traversal / 파이프라인 실행"""

    @staticmethod
    def accept_probability(delta_cost: float, temperature: float) -> float:
        """
        메트로폴리스 수락 확률

        Raises:
            ValueError: temperature <= 0
        """
        if temperature <= 0:
            raise ValueError(f"온도는 양수여야 합니다: {temperature}")
        if delta_cost <= 0:
            return 1.0
        return math.exp(-delta_cost / temperature)

    @staticmethod
    def anneal(
        p: MixedPhasePolynomial,
        t: Topology,
        cfg: Optional[AnnealConfig] = None,
        inner="SG",
        in_map: Optional[QubitMapping] = None,
    ) -> SynthResult:
        """
        CNOT 레이어 토글 기반 시뮬레이티드 어닐링

        Args:
            p: 입력 다항식
            t: 토폴로지
            cfg: 어닐링 설정 (기본값은 설정 파일)
            inner: 비용 계산용 내부 합성 (SG, Par, gadget)
            in_map: 초기 매핑

        Returns:
            지금까지 본 결과 중 CNOT 수가 가장 적은 SynthResult
        """
        cfg = cfg or AnnealConfig()
        method = Method.parse(inner)
        if method == Method.NAIVE:
            raise UnknownMethodError("어닐링 내부 합성으로 naive는 쓸 수 없습니다 (gadget 사용)")
        if p.n != t.n:
            raise DimensionMismatchError(f"큐비트 수 {p.n} != 토폴로지 크기 {t.n}")
        in_map = in_map or QubitMapping.identity(p.n)
        start = time.perf_counter()

        table = GadgetTable.from_polynomial(relabel(p, in_map))
        layers: List[List[Cnot]] = [[] for _ in range(cfg.cnot_blocks)]
        edges = sorted(t.edges)
        rng = np.random.default_rng(cfg.seed)

        def evaluate() -> Tuple[List[Gate], QubitMapping]:
            prefix = [Gate.cnot(c, x) for block in layers for c, x in block]
            core, sigma = SynthesisService.synthesize_table(table.copy(), t, method)
            return prefix + core, sigma

        gates, sigma = evaluate()
        current = sum(1 for g in gates if g.is_cnot)
        best_gates, best_sigma, best_cost = gates, sigma, current
        initial = current
        accepted = 0

        iterations = cfg.iterations if edges else 0
        for k in range(iterations):
            temperature = cfg.temperature(k)
            block = int(rng.integers(cfg.cnot_blocks))
            u, v = edges[int(rng.integers(len(edges)))]
            cnot = (u, v) if rng.integers(2) == 0 else (v, u)
            draw = rng.random()

            sequence, undo = _toggle(layers, block, cnot)
            for c, x in sequence:
                table.cnot(c, x)
            gates, sigma = evaluate()
            cost = sum(1 for g in gates if g.is_cnot)

            if draw < AnnealingService.accept_probability(cost - current, temperature):
                current = cost
                accepted += 1
                if cost < best_cost:
                    best_gates, best_sigma, best_cost = gates, sigma, cost
            else:
                for c, x in sequence:
                    table.cnot(c, x)
                undo()

        elapsed = time.perf_counter() - start
        logger.debug(
            f"✅ 어닐링 완료: {method.value}, {initial} → {best_cost} CNOT "
            f"(수락 {accepted}/{iterations}, {elapsed:.3f}s)"
        )
        return SynthResult(tuple(best_gates), in_map, in_map.then(best_sigma), elapsed)

    @staticmethod
    def _stage(
        p: MixedPhasePolynomial,
        t: Topology,
        inner,
        in_map: QubitMapping,
        anneal_iterations: int,
        seed: int,
    ) -> SynthResult:
        if anneal_iterations > 0:
            cfg = AnnealConfig(iterations=anneal_iterations, seed=seed)
            return AnnealingService.anneal(p, t, cfg, inner, in_map)
        return SynthesisService.synthesize(p, t, inner, in_map)

    @staticmethod
    def reverse_traversal(
        p: MixedPhasePolynomial,
        t: Topology,
        iterations: int,
        inner="SG",
        seed: int = 0,
        anneal_iterations: int = 0,
        in_map: Optional[QubitMapping] = None,
    ) -> SynthResult:
        """
        정방향/역방향 합성을 번갈아 하며 초기 매핑 개선

        Args:
            iterations: 정방향 합성 횟수 (1 이상)
            anneal_iterations: 0보다 크면 매 합성을 해당 횟수의 어닐링으로 수행

        Returns:
            정방향 결과 중 CNOT 수가 가장 적은 것 (동률이면 먼저 나온 것)
        """
        if iterations < 1:
            raise ValueError("Reverse Traversal 반복 횟수는 1 이상이어야 합니다")
        start = time.perf_counter()
        reverse = reverse_polynomial(p)
        mapping = in_map or QubitMapping.identity(p.n)
        best: Optional[SynthResult] = None
        history = []

        for k in range(iterations):
            forward = AnnealingService._stage(p, t, inner, mapping, anneal_iterations, derive_seed(seed, k, 0))
            history.append(forward.cnot_count)
            if best is None or forward.cnot_count < best.cnot_count:
                best = forward
            if k == iterations - 1:
                break
            backward = AnnealingService._stage(
                reverse, t, inner, forward.output_mapping, anneal_iterations, derive_seed(seed, k, 1)
            )
            mapping = backward.output_mapping

        elapsed = time.perf_counter() - start
        logger.debug(f"✅ Reverse Traversal 완료: {history[0]} → {best.cnot_count} CNOT ({iterations}회)")
        return SynthResult(best.gates, best.input_mapping, best.output_mapping, elapsed)

    @staticmethod
    def run_pipeline(p: MixedPhasePolynomial, t: Topology, spec, seed: int = 0) -> SynthResult:
        """
        이름 붙은 파이프라인 실행

        Args:
            spec: PipelineSpec 또는 파이프라인 이름 (예: "SG+RT->An")
            seed: 파이프라인 시드 (같은 입력/시드면 같은 게이트)

        Raises:
            UnknownMethodError: 알 수 없는 파이프라인
        """
        if not isinstance(spec, PipelineSpec):
            spec = PipelineSpec.from_name(spec)
        start = time.perf_counter()

        if spec.rt_iterations == 0 and spec.anneal_iterations == 0:
            result = SynthesisService.synthesize(p, t, spec.inner)
        elif spec.rt_iterations == 0:
            cfg = AnnealConfig(iterations=spec.anneal_iterations, seed=derive_seed(seed, 1))
            result = AnnealingService.anneal(p, t, cfg, spec.inner)
        elif spec.nested or spec.anneal_iterations == 0:
            result = AnnealingService.reverse_traversal(
                p, t, spec.rt_iterations, spec.inner, seed, anneal_iterations=spec.anneal_iterations
            )
        else:
            traversed = AnnealingService.reverse_traversal(p, t, spec.rt_iterations, spec.inner, seed)
            cfg = AnnealConfig(iterations=spec.anneal_iterations, seed=derive_seed(seed, 2))
            annealed = AnnealingService.anneal(p, t, cfg, spec.inner, traversed.input_mapping)
            result = annealed if annealed.cnot_count < traversed.cnot_count else traversed

        elapsed = time.perf_counter() - start
        logger.info(f"✅ {spec.name} 완료: {t.name}, m={p.m}, CNOT={result.cnot_count}, {elapsed:.3f}s")
        return SynthResult(result.gates, result.input_mapping, result.output_mapping, elapsed)
