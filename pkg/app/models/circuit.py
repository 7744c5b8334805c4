"""
출력 회로 모델: 게이트, 큐비트 매핑, 합성 결과
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence, Tuple

from app.utils.errors import DimensionMismatchError, InvalidQubitError


class GateKind(str, Enum):
    """출력 게이트 알파벳"""

    CNOT = "CNOT"
    RZ = "RZ"
    RX = "RX"


@dataclass(frozen=True)
class Gate:
    """CNOT(control, target) 또는 RZ/RX(qubit, angle)"""

    kind: GateKind
    qubits: Tuple[int, ...]
    angle: float = 0.0

    def __post_init__(self):
        expected = 2 if self.kind == GateKind.CNOT else 1
        if len(self.qubits) != expected:
            raise InvalidQubitError(f"{self.kind.value} 게이트는 큐비트 {expected}개가 필요합니다")
        if any(q < 0 for q in self.qubits):
            raise InvalidQubitError(f"음수 큐비트 인덱스: {self.qubits}")
        if self.kind == GateKind.CNOT and self.qubits[0] == self.qubits[1]:
            raise InvalidQubitError(f"CNOT control == target: {self.qubits[0]}")

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, (int(control), int(target)))

    @classmethod
    def rz(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RZ, (int(qubit),), float(angle))

    @classmethod
    def rx(cls, qubit: int, angle: float) -> "Gate":
        return cls(GateKind.RX, (int(qubit),), float(angle))

    @property
    def is_cnot(self) -> bool:
        return self.kind == GateKind.CNOT

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[1]

    def relabel(self, mapping: Sequence[int]) -> "Gate":
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits), self.angle)


def cnot_count(gates: Iterable[Gate]) -> int:
    return sum(1 for g in gates if g.is_cnot)


@dataclass(frozen=True)
class QubitMapping:
    """
    논리 큐비트 → 물리 레지스터 전단사

    perm[q] = 논리 큐비트 q가 놓인 물리 레지스터
    """

    perm: Tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(len(perm))):
            raise InvalidQubitError(f"전단사가 아닌 매핑입니다: {perm}")

    @classmethod
    def identity(cls, n: int) -> "QubitMapping":
        return cls(tuple(range(n)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __getitem__(self, q: int) -> int:
        return self.perm[q]

    def __len__(self) -> int:
        return len(self.perm)

    def inverse(self) -> "QubitMapping":
        inv = [0] * self.n
        for q, p in enumerate(self.perm):
            inv[p] = q
        return QubitMapping(tuple(inv))

    def then(self, other: "QubitMapping") -> "QubitMapping":
        """self를 적용한 다음 other를 적용: q → other[self[q]]"""
        if other.n != self.n:
            raise DimensionMismatchError(f"매핑 길이 불일치: {self.n} != {other.n}")
        return QubitMapping(tuple(other.perm[p] for p in self.perm))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.n))

    def to_text(self) -> str:
        return ",".join(str(p) for p in self.perm)

    @classmethod
    def from_text(cls, text: str) -> "QubitMapping":
        try:
            return cls(tuple(int(tok) for tok in text.split(",") if tok.strip()))
        except ValueError as e:
            raise InvalidQubitError(f"매핑 형식 오류 ({text!r}): {e}")


@dataclass
class SynthResult:
    """합성 결과: 게이트 목록, 입출력 매핑, CNOT 수, 소요 시간(초)"""

    gates: Tuple[Gate, ...]
    input_mapping: QubitMapping
    output_mapping: QubitMapping
    elapsed: float = 0.0
    cnot_count: int = field(init=False)

    def __post_init__(self):
        self.gates = tuple(self.gates)
        if self.input_mapping.n != self.output_mapping.n:
            raise DimensionMismatchError("입력/출력 매핑 길이가 다릅니다")
        self.cnot_count = cnot_count(self.gates)

    @property
    def n(self) -> int:
        return self.input_mapping.n

    def cnots(self) -> Tuple[Tuple[int, int], ...]:
        return tuple((g.control, g.target) for g in self.gates if g.is_cnot)
