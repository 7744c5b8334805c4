"""
합성 API 요청/응답 스키마

회로 텍스트를 받아 토폴로지에 맞게 재합성하고, 결과를 QASM으로 돌려줍니다.
"""
from typing import List, Optional, Tuple

from pydantic import BaseModel, Field

EXAMPLE_CIRCUIT = "qubits 3\nZ 111 0.7853981633974483\nX 011 1.5707963267948966\n"


class SynthRequest(BaseModel):
    """
    합성 요청 스키마
    """
    circuit: str = Field(
        ...,
        description="회로 텍스트 (qubits / Z / X / CX 줄)",
        example=EXAMPLE_CIRCUIT
    )
    topology: str = Field(
        ...,
        description="토폴로지 이름 (line-k, ring-k, grid-RxC, valencia 등)",
        example="line-3"
    )
    pipeline: str = Field(
        "SG",
        description="파이프라인 이름 (SG, Par, An, SG+RT, SG+RT->An, An+SG+RT, Par+RT->An, Par+RT+An, Uncompiled)",
        example="Par"
    )
    seed: int = Field(
        0,
        ge=0,
        description="난수 시드",
        example=7
    )

    class Config:
        json_schema_extra = {
            "example": {
                "circuit": EXAMPLE_CIRCUIT,
                "topology": "line-3",
                "pipeline": "Par",
                "seed": 7
            }
        }


class SynthResponse(BaseModel):
    """
    합성 응답 스키마
    """
    qasm: str = Field(..., description="합성된 회로 (OpenQASM 2.0)")
    cnot_count: int = Field(..., description="CNOT 수", example=4)
    gate_count: int = Field(..., description="전체 게이트 수", example=6)
    input_mapping: List[int] = Field(..., description="논리 큐비트 → 물리 레지스터 (입력)", example=[0, 1, 2])
    output_mapping: List[int] = Field(..., description="논리 큐비트 → 물리 레지스터 (출력)", example=[0, 1, 2])
    elapsed: float = Field(..., description="컴파일 시간(초)", example=0.0042)


class VerifyRequest(BaseModel):
    """
    등가성 검증 요청 스키마
    """
    circuit: str = Field(..., description="기준 회로 텍스트", example=EXAMPLE_CIRCUIT)
    qasm: str = Field(..., description="합성된 회로 (OpenQASM 2.0)")
    input_mapping: Optional[List[int]] = Field(None, description="입력 매핑 (없으면 QASM 주석, 그것도 없으면 항등)", example=[0, 1, 2])
    output_mapping: Optional[List[int]] = Field(None, description="출력 매핑 (없으면 QASM 주석, 그것도 없으면 항등)", example=[0, 1, 2])
    tolerance: Optional[float] = Field(None, gt=0, description="프로베니우스 허용오차", example=1e-8)


class VerifyResponse(BaseModel):
    """
    등가성 검증 응답 스키마
    """
    equivalent: bool = Field(..., description="전역 위상/매핑을 무시하고 같은 유니타리인지", example=True)
    qubits: int = Field(..., description="큐비트 수", example=3)


class TopologyResponse(BaseModel):
    """
    토폴로지 조회 응답 스키마
    """
    name: str = Field(..., description="토폴로지 이름", example="valencia")
    qubits: int = Field(..., description="노드 수", example=5)
    edges: List[Tuple[int, int]] = Field(..., description="엣지 목록", example=[[0, 1], [1, 2], [1, 3], [3, 4]])
    cut_vertices: List[int] = Field(..., description="절단 정점", example=[1, 3])
    diameter: int = Field(..., description="지름 (홉 수)", example=3)


class SynthErrorResponse(BaseModel):
    """
    합성 API 에러 응답
    """
    error_code: str = Field(..., description="에러 코드", example="UnknownTopologyError")
    message: str = Field(..., description="에러 메시지", example="알 수 없는 토폴로지: foo")

    class Config:
        json_schema_extra = {
            "example": {
                "error_code": "UnknownTopologyError",
                "message": "알 수 없는 토폴로지: foo"
            }
        }
