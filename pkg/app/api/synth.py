"""
합성 API 라우트

엔드포인트:
- POST /api/v1/synth: 회로 재합성
- POST /api/v1/verify: 합성 결과 등가성 검증
- GET /api/v1/topologies/{name}: 토폴로지 정보
"""
import logging

from fastapi import APIRouter, HTTPException, status

from app.models.circuit import QubitMapping
from app.models.topology import cut_vertices, named_topology
from app.schemas.synth import (
    SynthErrorResponse,
    SynthRequest,
    SynthResponse,
    TopologyResponse,
    VerifyRequest,
    VerifyResponse,
)
from app.service.annealing_service import AnnealingService
from app.service.verify_service import VerifyService
from app.utils.circuit_io import parse_circuit
from app.utils.qasm import export_qasm, import_qasm, read_mappings

logger = logging.getLogger(__name__)

router = APIRouter(prefix="/api/v1", tags=["Synthesis"])

ERROR_RESPONSES = {
    400: {"model": SynthErrorResponse, "description": "잘못된 입력"},
    500: {"model": SynthErrorResponse, "description": "서버 오류"},
}


def _bad_request(e: ValueError) -> HTTPException:
    return HTTPException(
        status_code=status.HTTP_400_BAD_REQUEST,
        detail={"error_code": type(e).__name__, "message": str(e)},
    )


def _server_error(e: Exception) -> HTTPException:
    logger.error(f"❌ 처리 중 오류: {str(e)}")
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail={"error_code": "INTERNAL_ERROR", "message": "처리 중 오류가 발생했습니다"},
    )


@router.post("/synth", response_model=SynthResponse, responses=ERROR_RESPONSES)
def synthesize(request: SynthRequest):
    """
    회로를 토폴로지에 맞게 재합성

    ### 요청 예시

    ```json
    {
        "circuit": "qubits 3\\nZ 111 0.7853981633974483\\nX 011 1.5707963267948966\\n",
        "topology": "line-3",
        "pipeline": "Par",
        "seed": 7
    }
    ```

    ### 에러 처리

    - `400 Bad Request`: 회로 형식 오류, 알 수 없는 토폴로지/파이프라인, 차원 불일치
    """
    try:
        circuit = parse_circuit(request.circuit)
        topology = named_topology(request.topology)
        result = AnnealingService.run_pipeline(circuit, topology, request.pipeline, request.seed)
        return SynthResponse(
            qasm=export_qasm(result.gates, circuit.n, result.input_mapping, result.output_mapping),
            cnot_count=result.cnot_count,
            gate_count=len(result.gates),
            input_mapping=list(result.input_mapping.perm),
            output_mapping=list(result.output_mapping.perm),
            elapsed=result.elapsed,
        )
    except ValueError as e:
        raise _bad_request(e)
    except Exception as e:
        raise _server_error(e)


@router.post("/verify", response_model=VerifyResponse, responses=ERROR_RESPONSES)
def verify(request: VerifyRequest):
    """
    합성된 QASM이 기준 회로와 같은 유니타리인지 검증 (전역 위상, 매핑 무시)

    밀집 행렬을 만들기 때문에 큐비트 수 상한(기본 12)이 있습니다.
    """
    try:
        circuit = parse_circuit(request.circuit)
        gates, n = import_qasm(request.qasm)
        if n != circuit.n:
            raise ValueError(f"큐비트 수 불일치: {circuit.n} != {n}")
        in_map, out_map = read_mappings(request.qasm)
        if request.input_mapping is not None:
            in_map = QubitMapping(tuple(request.input_mapping))
        if request.output_mapping is not None:
            out_map = QubitMapping(tuple(request.output_mapping))
        equivalent = VerifyService.equivalent(
            VerifyService.unitary_of_polynomial(circuit),
            VerifyService.unitary_of_gates(gates, n),
            in_map,
            out_map,
            request.tolerance,
        )
        return VerifyResponse(equivalent=equivalent, qubits=n)
    except ValueError as e:
        raise _bad_request(e)
    except Exception as e:
        raise _server_error(e)


@router.get("/topologies/{name}", response_model=TopologyResponse, responses=ERROR_RESPONSES)
def get_topology(name: str):
    """토폴로지 노드 수, 엣지, 절단 정점 조회"""
    try:
        topology = named_topology(name)
        return TopologyResponse(
            name=topology.name,
            qubits=topology.n,
            edges=sorted(topology.edges),
            cut_vertices=sorted(cut_vertices(topology)),
            diameter=topology.diameter(),
        )
    except ValueError as e:
        raise _bad_request(e)
