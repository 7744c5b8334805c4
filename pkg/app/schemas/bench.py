"""
벤치마크 결과 스키마

CSV 한 줄 = (회로, 방법) 하나. 요약은 (device, ngadgets, method)별 평균입니다.
"""
from pydantic import BaseModel, Field

CSV_FIELDS = ["device", "ngadgets", "circuit_id", "method", "cnots", "seconds", "seed"]
SUMMARY_FIELDS = ["device", "ngadgets", "method", "circuits", "mean_cnots", "mean_seconds"]


class BenchRow(BaseModel):
    """
    벤치마크 결과 한 줄
    """
    device: str = Field(..., description="토폴로지 이름", example="valencia")
    ngadgets: int = Field(..., ge=0, description="가젯 수 m", example=10)
    circuit_id: int = Field(..., ge=0, description="셀 안에서의 회로 번호", example=0)
    method: str = Field(..., description="파이프라인 이름", example="SG+RT->An")
    cnots: int = Field(..., ge=0, description="CNOT 수", example=42)
    seconds: float = Field(..., ge=0, description="컴파일 시간(초)", example=0.0123)
    seed: int = Field(..., ge=0, description="벤치마크 전체 시드", example=7)

    def to_csv_row(self, timing: bool = True) -> dict:
        row = self.model_dump()
        row["seconds"] = f"{self.seconds if timing else 0.0:.6f}"
        return row


class BenchSummary(BaseModel):
    """
    (device, ngadgets, method)별 평균
    """
    device: str = Field(..., description="토폴로지 이름", example="melbourne")
    ngadgets: int = Field(..., description="가젯 수 m", example=100)
    method: str = Field(..., description="파이프라인 이름", example="Par")
    circuits: int = Field(..., description="집계한 회로 수", example=20)
    mean_cnots: float = Field(..., description="평균 CNOT 수", example=512.3)
    mean_seconds: float = Field(..., description="평균 컴파일 시간(초)", example=1.25)

    def to_csv_row(self) -> dict:
        row = self.model_dump()
        row["mean_cnots"] = f"{self.mean_cnots:.3f}"
        row["mean_seconds"] = f"{self.mean_seconds:.6f}"
        return row
