"""
벤치마크 서비스

무작위 회로 생성 → 파이프라인 실행 → 연결성/유니타리 검증 → 결과 행.
작업마다 (전체 시드, 회로 번호, 파이프라인 이름)에서 시드를 만들기 때문에
프로세스 수(jobs)와 관계없이 같은 결과가 나옵니다.
"""
import csv
import logging
import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Sequence, TextIO, Tuple, Union

import numpy as np

from app.config.settings import get_settings
from app.models.gf2 import BitVec
from app.models.phasepoly import Basis, MixedPhasePolynomial, PhaseGadget
from app.models.topology import named_topology
from app.schemas.bench import CSV_FIELDS, SUMMARY_FIELDS, BenchRow, BenchSummary
from app.schemas.pipeline import PipelineName, PipelineSpec
from app.service.annealing_service import AnnealingService, derive_seed
from app.service.verify_service import VerifyService
from app.utils.errors import CircuitFormatError, VerificationError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class _Job:
    device: str
    ngadgets: int
    circuit_id: int
    pipeline: str
    seed: int
    verify: bool
    continuous: bool


def _circuit_seed(seed: int, n: int, m: int, circuit_id: int) -> int:
    return derive_seed(seed, n, m, circuit_id)


def _pipeline_seed(seed: int, circuit_id: int, pipeline: str) -> int:
    return derive_seed(seed, circuit_id, zlib.crc32(pipeline.encode("utf-8")))


def _run_job(job: _Job) -> BenchRow:
    """작업 하나 실행 (프로세스 풀에서 호출되므로 모듈 최상위 함수)"""
    topology = named_topology(job.device)
    spec = PipelineSpec.from_name(job.pipeline)
    circuit = BenchmarkService.random_circuit(
        topology.n, job.ngadgets, _circuit_seed(job.seed, topology.n, job.ngadgets, job.circuit_id), job.continuous
    )
    result = AnnealingService.run_pipeline(circuit, topology, spec, _pipeline_seed(job.seed, job.circuit_id, spec.name))

    if job.verify:
        def fail(reason: str) -> VerificationError:
            return VerificationError(reason, job.seed, job.device, job.ngadgets, spec.name, job.circuit_id)

        if spec.name != PipelineName.UNCOMPILED.value and not VerifyService.is_compliant(result.gates, topology):
            raise fail("연결성 위반: 토폴로지 엣지 밖의 CNOT")
        if topology.n <= get_settings().oracle_verify_max_qubits and not VerifyService.check_result(circuit, result):
            raise fail("유니타리 불일치")

    return BenchRow(
        device=job.device,
        ngadgets=job.ngadgets,
        circuit_id=job.circuit_id,
        method=spec.name,
        cnots=result.cnot_count,
        seconds=result.elapsed,
        seed=job.seed,
    )


class BenchmarkService:
    """무작위 회로 벤치마크"""

    @staticmethod
    def random_circuit(n: int, m: int, seed: int, continuous: bool = False) -> MixedPhasePolynomial:
        """
        무작위 혼합 위상 다항식

        가젯마다 레그 수는 [round(√n), n]에서 균등, 레그 위치는 균등 부분집합,
        기저는 Z/X 균등, 각도는 {π/4, …, 7π/4} 중 균등 (continuous면 [0, 2π) 균등).
        꼬리는 항등행렬입니다.

        Args:
            n: 큐비트 수 (2 이상)
            m: 가젯 수 (1 이상)
            seed: 난수 시드
            continuous: 연속 각도 사용 여부
        """
        if n < 2 or m < 1:
            raise ValueError(f"n >= 2, m >= 1 이어야 합니다 (n={n}, m={m})")
        rng = np.random.default_rng(seed)
        low = max(1, int(round(math.sqrt(n))))
        gadgets = []
        for _ in range(m):
            k = int(rng.integers(low, n + 1))
            legs = rng.choice(n, size=k, replace=False)
            basis = Basis.X if rng.integers(2) else Basis.Z
            if continuous:
                angle = float(rng.uniform(0.0, 2.0 * math.pi))
            else:
                angle = int(rng.integers(1, 8)) * math.pi / 4
            gadgets.append(PhaseGadget(basis, BitVec.from_support(n, legs), angle))
        return MixedPhasePolynomial(n, tuple(gadgets))

    @staticmethod
    def run_benchmark(
        devices: Sequence[str],
        gadget_counts: Sequence[int],
        circuits_per_cell: int,
        pipelines: Sequence[str],
        seed: int = 0,
        jobs: int = 1,
        verify: bool = True,
        continuous: bool = False,
    ) -> List[BenchRow]:
        """
        (device, m, 회로, 파이프라인) 전 조합 실행

        Returns:
            정렬된 BenchRow 목록 (device → m → circuit_id → 파이프라인 순)

        Raises:
            VerificationError: 연결성 또는 유니타리 검증 실패
            UnknownTopologyError / UnknownMethodError: 잘못된 이름
        """
        # 이름 검증을 먼저 해서 작업을 돌리기 전에 실패시킴
        for device in devices:
            named_topology(device)
        names = [PipelineSpec.from_name(p).name for p in pipelines]

        work = [
            _Job(device, m, cid, name, seed, verify, continuous)
            for device in devices
            for m in gadget_counts
            for cid in range(circuits_per_cell)
            for name in names
        ]
        if not work:
            return []
        logger.info(f"🔄 벤치마크 시작: 작업 {len(work)}개, jobs={jobs}")

        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                rows = list(pool.map(_run_job, work, chunksize=max(1, len(work) // (jobs * 4))))
        else:
            rows = [_run_job(job) for job in work]

        logger.info(f"✅ 벤치마크 완료: {len(rows)}행")
        return rows

    @staticmethod
    def summarize(rows: Iterable[BenchRow]) -> List[BenchSummary]:
        """(device, ngadgets, method)별 평균 CNOT / 평균 시간 (첫 등장 순서 유지)"""
        groups: Dict[Tuple[str, int, str], List[BenchRow]] = {}
        for row in rows:
            groups.setdefault((row.device, row.ngadgets, row.method), []).append(row)
        return [
            BenchSummary(
                device=device,
                ngadgets=m,
                method=method,
                circuits=len(members),
                mean_cnots=float(np.mean([r.cnots for r in members])),
                mean_seconds=float(np.mean([r.seconds for r in members])),
            )
            for (device, m, method), members in groups.items()
        ]

    @staticmethod
    def write_csv(rows: Iterable[BenchRow], out: Union[str, Path, TextIO], timing: bool = True) -> None:
        """헤더 device,ngadgets,circuit_id,method,cnots,seconds,seed 로 기록"""
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="", encoding="utf-8") as f:
                BenchmarkService.write_csv(rows, f, timing)
            return
        writer = csv.DictWriter(out, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow(row.to_csv_row(timing))

    @staticmethod
    def read_csv(path: Union[str, Path]) -> List[BenchRow]:
        """
        벤치마크 CSV 읽기

        Raises:
            CircuitFormatError: 헤더가 다르거나 값이 잘못된 경우
        """
        with open(path, newline="", encoding="utf-8") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames != CSV_FIELDS:
                raise CircuitFormatError(f"CSV 헤더가 다릅니다: {reader.fieldnames}")
            try:
                return [BenchRow(**record) for record in reader]
            except ValueError as e:
                raise CircuitFormatError(f"CSV 값 오류: {e}")

    @staticmethod
    def write_summary_csv(summary: Iterable[BenchSummary], out: Union[str, Path, TextIO]) -> None:
        if isinstance(out, (str, Path)):
            with open(out, "w", newline="", encoding="utf-8") as f:
                BenchmarkService.write_summary_csv(summary, f)
            return
        writer = csv.DictWriter(out, fieldnames=SUMMARY_FIELDS, lineterminator="\n")
        writer.writeheader()
        for item in summary:
            writer.writerow(item.to_csv_row())
