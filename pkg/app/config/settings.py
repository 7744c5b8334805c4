"""
애플리케이션 설정

환경변수(RESYNTH_ 접두사)와 .env 파일에서 값을 읽습니다.
"""
from functools import lru_cache
from pathlib import Path
from typing import List

from dotenv import load_dotenv
from pydantic_settings import BaseSettings, SettingsConfigDict

# 환경변수 로드
load_dotenv()

DEFAULT_DATA_DIR = Path(__file__).resolve().parent.parent / "data" / "topologies"


class Settings(BaseSettings):
    """합성/벤치마크 공통 설정"""

    model_config = SettingsConfigDict(env_prefix="RESYNTH_", env_file=".env", extra="ignore")

    # 로깅
    log_level: str = "INFO"

    # 번들된 IBM 계열 토폴로지 엣지 리스트 위치
    data_dir: Path = DEFAULT_DATA_DIR

    # 메타휴리스틱 기본값 (단독 100회, 중첩 시 10회씩)
    anneal_iterations: int = 100
    rt_iterations: int = 100
    nested_iterations: int = 10
    cnot_blocks: int = 5
    t_initial: float = 10.0
    t_final: float = 0.1

    # 각도 0 판정 허용오차 (라디안)
    angle_tolerance: float = 1e-12

    # 밀집 유니타리 오라클
    oracle_max_qubits: int = 12
    oracle_verify_max_qubits: int = 5
    oracle_tolerance: float = 1e-8

    # 벤치마크
    circuits_per_cell: int = 20
    gadget_counts: List[int] = [1, 10, 100]
    default_devices: List[str] = ["valencia", "yorktown", "melbourne", "johannesburg", "singapore"]
    bench_jobs: int = 1

    # HTTP API
    api_host: str = "0.0.0.0"
    api_port: int = 8080


@lru_cache
def get_settings() -> Settings:
    """Settings 싱글톤 반환"""
    return Settings()
