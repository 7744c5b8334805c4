"""
도메인 예외 정의

서비스 계층은 잘못된 입력에 대해 ValueError 계열 예외를 던지고,
API/CLI 계층에서 이를 에러 응답(또는 종료 코드)으로 변환합니다.
"""


class DimensionMismatchError(ValueError):
    """큐비트 수(차원)가 서로 맞지 않음"""


class SingularMatrixError(ValueError):
    """GF(2) 위에서 역행렬이 존재하지 않음"""


class InvalidQubitError(ValueError):
    """큐비트 인덱스가 범위를 벗어났거나 CNOT의 control == target"""


class DisconnectedTopologyError(ValueError):
    """연결 그래프가 아님 (또는 alive 부분그래프가 끊어짐)"""


class UnknownTopologyError(ValueError):
    """등록되지 않은 토폴로지 이름"""


class UnknownMethodError(ValueError):
    """알 수 없는 합성 방법 / 파이프라인 이름"""


class CircuitFormatError(ValueError):
    """회로 텍스트 / QASM / 엣지 리스트 파싱 실패"""

    def __init__(self, message: str, line_no: int | None = None):
        self.line_no = line_no
        if line_no is not None:
            message = f"{line_no}번째 줄: {message}"
        super().__init__(message)


class OracleSizeError(ValueError):
    """밀집 유니타리 오라클의 큐비트 상한 초과"""


class VerificationError(ValueError):
    """
    벤치마크 검증 실패 (연결성 위반 또는 유니타리 불일치)

    실패한 (seed, device, ngadgets, pipeline) 조합을 그대로 들고 있어서
    같은 입력으로 바로 재현할 수 있습니다.
    """

    def __init__(self, reason: str, seed: int, device: str, ngadgets: int, pipeline: str, circuit_id: int = 0):
        self.reason = reason
        self.seed = seed
        self.device = device
        self.ngadgets = ngadgets
        self.pipeline = pipeline
        self.circuit_id = circuit_id
        super().__init__(
            f"{reason} (seed={seed}, device={device}, ngadgets={ngadgets}, "
            f"circuit_id={circuit_id}, pipeline={pipeline})"
        )

    def __reduce__(self):
        return (
            self.__class__,
            (self.reason, self.seed, self.device, self.ngadgets, self.pipeline, self.circuit_id),
        )
