"""
메타휴리스틱 설정 / 파이프라인 스키마

어닐링 설정과 이름 붙은 파이프라인(SG, Par, An, SG+RT, ...)의 단계별 반복 예산을 정의합니다.
"""
from enum import Enum
from typing import List

from pydantic import BaseModel, Field, model_validator

from app.config.settings import get_settings
from app.utils.errors import UnknownMethodError


class AnnealConfig(BaseModel):
    """
    시뮬레이티드 어닐링 설정

    온도는 t_initial에서 t_final까지 기하급수적으로 식습니다.
    """
    iterations: int = Field(
        default_factory=lambda: get_settings().anneal_iterations,
        ge=0,
        description="어닐링 반복 횟수 (단독 100, 중첩 10)",
        example=100
    )
    t_initial: float = Field(
        default_factory=lambda: get_settings().t_initial,
        gt=0,
        description="초기 온도 (CNOT 수 단위)",
        example=10.0
    )
    t_final: float = Field(
        default_factory=lambda: get_settings().t_final,
        gt=0,
        description="최종 온도",
        example=0.1
    )
    cnot_blocks: int = Field(
        default_factory=lambda: get_settings().cnot_blocks,
        ge=1,
        description="앞에 붙이는 CNOT 레이어 수",
        example=5
    )
    seed: int = Field(
        0,
        ge=0,
        description="난수 시드",
        example=7
    )

    class Config:
        frozen = True

    @model_validator(mode="after")
    def check_temperatures(self):
        if self.t_initial < self.t_final:
            raise ValueError("t_initial은 t_final 이상이어야 합니다")
        return self

    def temperature(self, k: int) -> float:
        """k번째 반복의 온도: T_k = t_initial·(t_final/t_initial)^(k/iterations)"""
        if self.iterations == 0:
            return self.t_initial
        return self.t_initial * (self.t_final / self.t_initial) ** (k / self.iterations)


class PipelineName(str, Enum):
    """벤치마크 방법 목록"""

    UNCOMPILED = "Uncompiled"
    SG = "SG"
    PAR = "Par"
    AN = "An"
    SG_RT = "SG+RT"
    SG_RT_AN = "SG+RT->An"
    AN_SG_RT = "An+SG+RT"
    PAR_RT_AN = "Par+RT->An"
    PAR_RT_NESTED = "Par+RT+An"


BENCHMARKED_PIPELINES: List[PipelineName] = [
    PipelineName.SG,
    PipelineName.PAR,
    PipelineName.AN,
    PipelineName.SG_RT,
    PipelineName.SG_RT_AN,
    PipelineName.AN_SG_RT,
    PipelineName.PAR_RT_AN,
]


class PipelineSpec(BaseModel):
    """
    파이프라인 = 내부 합성 방법 + 단계별 반복 예산

    nested=False: RT(rt_iterations) 후 그 최선 매핑에서 어닐링(anneal_iterations)
    nested=True: RT의 매 합성이 anneal_iterations회 어닐링
    """
    name: str = Field(..., description="파이프라인 이름", example="SG+RT->An")
    inner: str = Field(..., description="내부 합성 방법 (naive, SG, Par, gadget)", example="SG")
    rt_iterations: int = Field(0, ge=0, description="Reverse Traversal 반복 (0이면 사용 안 함)", example=10)
    anneal_iterations: int = Field(0, ge=0, description="어닐링 반복 (0이면 사용 안 함)", example=10)
    nested: bool = Field(False, description="어닐링을 RT 안쪽에서 실행할지 여부", example=False)

    class Config:
        frozen = True
        json_schema_extra = {
            "example": {
                "name": "SG+RT->An",
                "inner": "SG",
                "rt_iterations": 10,
                "anneal_iterations": 10,
                "nested": False
            }
        }

    @property
    def total_budget(self) -> int:
        """반복 예산 합계 (중첩이면 곱)"""
        if self.nested:
            return self.rt_iterations * self.anneal_iterations
        return self.rt_iterations + self.anneal_iterations

    @classmethod
    def from_name(cls, name: str) -> "PipelineSpec":
        """
        이름으로 파이프라인 구성 (반복 예산은 설정값 사용)

        Raises:
            UnknownMethodError: 알 수 없는 파이프라인 이름
        """
        settings = get_settings()
        key = str(name).strip().replace("→", "->")
        lookup = {p.value.lower(): p for p in PipelineName}
        if key.lower() not in lookup:
            raise UnknownMethodError(f"알 수 없는 파이프라인: {name}")
        pipeline = lookup[key.lower()]
        small = settings.nested_iterations

        if pipeline == PipelineName.UNCOMPILED:
            return cls(name=pipeline.value, inner="naive")
        if pipeline in (PipelineName.SG, PipelineName.PAR):
            return cls(name=pipeline.value, inner=pipeline.value)
        if pipeline == PipelineName.AN:
            return cls(name=pipeline.value, inner="gadget", anneal_iterations=settings.anneal_iterations)
        if pipeline == PipelineName.SG_RT:
            return cls(name=pipeline.value, inner="SG", rt_iterations=settings.rt_iterations)
        inner = "Par" if pipeline.value.startswith("Par") else "SG"
        nested = pipeline in (PipelineName.AN_SG_RT, PipelineName.PAR_RT_NESTED)
        return cls(name=pipeline.value, inner=inner, rt_iterations=small, anneal_iterations=small, nested=nested)
