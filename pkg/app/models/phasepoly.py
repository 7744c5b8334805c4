"""
혼합 ZX 위상 다항식 (mixed ZX-phase polynomial)

회로 = 위상 가젯들의 순서열(리스트 순서대로 적용) 다음에 꼬리(tail) CNOT 네트워크.
CNOT을 다항식 앞쪽으로 밀어내면(push) 각 가젯의 레그가 XOR 규칙으로 바뀌고,
첫 번째 교환 영역에서 레그가 1개인 가젯은 단일 큐비트 회전으로 뽑아낼 수 있습니다.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence, Tuple

import numpy as np

from app.config.settings import get_settings
from app.models.circuit import Gate, QubitMapping
from app.models.gf2 import BitVec, ParityMatrix
from app.utils.errors import DimensionMismatchError, InvalidQubitError, SingularMatrixError

TAU = 2.0 * math.pi
ANGLE_TOLERANCE = get_settings().angle_tolerance


class Basis(str, Enum):
    """가젯의 파울리 기저"""

    Z = "Z"
    X = "X"


def normalize_angle(angle: float, tol: float = ANGLE_TOLERANCE) -> float:
    """각도를 [0, 2π)로 환원. 허용오차 안에서 0이면 정확히 0.0"""
    a = math.fmod(float(angle), TAU)
    if a < 0:
        a += TAU
    if a < tol or TAU - a < tol:
        return 0.0
    return a


@dataclass(frozen=True)
class PhaseGadget:
    """exp(-i·α/2·P), P는 legs 위의 Z…Z 또는 X…X"""

    basis: Basis
    legs: BitVec
    angle: float

    def __post_init__(self):
        object.__setattr__(self, "basis", Basis(self.basis))
        object.__setattr__(self, "angle", normalize_angle(self.angle))

    @classmethod
    def z(cls, legs: str, angle: float) -> "PhaseGadget":
        return cls(Basis.Z, BitVec.from_string(legs), angle)

    @classmethod
    def x(cls, legs: str, angle: float) -> "PhaseGadget":
        return cls(Basis.X, BitVec.from_string(legs), angle)

    @property
    def n(self) -> int:
        return self.legs.n

    @property
    def weight(self) -> int:
        return self.legs.weight

    def support(self) -> Tuple[int, ...]:
        return self.legs.support()

    def with_legs(self, legs: BitVec) -> "PhaseGadget":
        return PhaseGadget(self.basis, legs, self.angle)


@dataclass(frozen=True)
class MixedPhasePolynomial:
    """
    가젯 순서열 + 꼬리 패리티 행렬

    생성 시 레그가 0개인 가젯은 전역 위상(global_phase)으로 옮기고,
    각도가 0인 가젯은 버립니다.
    """

    n: int
    gadgets: Tuple[PhaseGadget, ...] = ()
    tail: ParityMatrix = None
    global_phase: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionMismatchError("큐비트 수는 1 이상이어야 합니다")
        tail = self.tail if self.tail is not None else ParityMatrix.identity(self.n)
        if tail.n != self.n:
            raise DimensionMismatchError(f"tail 차원 {tail.n} != n {self.n}")
        if not tail.is_invertible():
            raise SingularMatrixError("tail은 가역 행렬이어야 합니다")
        phase = self.global_phase
        kept = []
        for g in self.gadgets:
            if g.n != self.n:
                raise DimensionMismatchError(f"가젯 레그 길이 {g.n} != n {self.n}")
            if g.angle == 0.0:
                continue
            if g.legs.is_zero():
                phase -= g.angle / 2.0
                continue
            kept.append(g)
        object.__setattr__(self, "tail", tail)
        object.__setattr__(self, "gadgets", tuple(kept))
        object.__setattr__(self, "global_phase", math.remainder(phase, TAU))

    @classmethod
    def empty(cls, n: int) -> "MixedPhasePolynomial":
        return cls(n)

    @property
    def m(self) -> int:
        return len(self.gadgets)

    def is_empty(self) -> bool:
        return not self.gadgets and self.tail == ParityMatrix.identity(self.n)

    def same_circuit(self, other: "MixedPhasePolynomial") -> bool:
        """전역 위상을 무시한 구조적 동일성"""
        return self.n == other.n and self.gadgets == other.gadgets and self.tail == other.tail


def _check_cnot(n: int, control: int, target: int) -> None:
    for q in (control, target):
        if not 0 <= q < n:
            raise InvalidQubitError(f"큐비트 인덱스 {q}가 범위 [0, {n})를 벗어났습니다")
    if control == target:
        raise InvalidQubitError(f"control과 target이 같습니다: {control}")


def push_cnot(p: MixedPhasePolynomial, control: int, target: int) -> MixedPhasePolynomial:
    """
    CNOT 하나를 다항식 앞쪽으로 밀어냄: p = CNOT(control, target) 다음 push_cnot(p)

    Z 가젯은 legs[control] ^= legs[target], X 가젯은 legs[target] ^= legs[control],
    tail은 입력 쪽에 CNOT이 합성되므로 col[control] ^= col[target].
    """
    _check_cnot(p.n, control, target)
    gadgets = []
    for g in p.gadgets:
        if g.basis == Basis.Z and g.legs[target]:
            g = g.with_legs(g.legs ^ BitVec.unit(p.n, control))
        elif g.basis == Basis.X and g.legs[control]:
            g = g.with_legs(g.legs ^ BitVec.unit(p.n, target))
        gadgets.append(g)
    return MixedPhasePolynomial(p.n, tuple(gadgets), p.tail.prepend_cnot(control, target), p.global_phase)


def commuting_regions(p: MixedPhasePolynomial) -> List[Tuple[Basis, Tuple[PhaseGadget, ...]]]:
    """같은 기저가 연속된 최대 구간들로 분할 (순서 유지)"""
    regions: List[Tuple[Basis, List[PhaseGadget]]] = []
    for g in p.gadgets:
        if regions and regions[-1][0] == g.basis:
            regions[-1][1].append(g)
        else:
            regions.append((g.basis, [g]))
    return [(basis, tuple(gs)) for basis, gs in regions]


def merge_region(gadgets: Sequence[PhaseGadget]) -> List[PhaseGadget]:
    """
    같은 레그를 가진 가젯들의 각도를 합침 (첫 등장 순서 유지, 합이 0이면 제거)

    Raises:
        ValueError: 기저가 섞여 있는 경우
    """
    if len({g.basis for g in gadgets}) > 1:
        raise ValueError("merge_region은 같은 기저의 가젯만 받습니다")
    totals: Dict[BitVec, float] = {}
    first: Dict[BitVec, PhaseGadget] = {}
    for g in gadgets:
        if g.legs not in first:
            first[g.legs] = g
            totals[g.legs] = 0.0
        totals[g.legs] += g.angle
    merged = [PhaseGadget(g.basis, legs, totals[legs]) for legs, g in first.items()]
    return [g for g in merged if g.angle != 0.0]


def extract_leading_singles(p: MixedPhasePolynomial) -> Tuple[List[Gate], MixedPhasePolynomial]:
    """첫 교환 영역의 레그 1개짜리 가젯을 RZ/RX로 뽑아냄 (영역 경계가 바뀌면 반복)"""
    table = GadgetTable.from_polynomial(p)
    gates = table.extract_singles()
    if not gates:
        return [], p
    return gates, table.to_polynomial()


def reverse_polynomial(p: MixedPhasePolynomial) -> MixedPhasePolynomial:
    """
    역 유니타리를 나타내는 다항식

    tail' = tail⁻¹, 가젯 순서 반전 + 각도 부호 반전,
    Z 레그는 (tail⁻¹)ᵀ, X 레그는 tail 로 켤레변환합니다.
    """
    m = p.tail.to_bits().astype(np.int64)
    m_inv = p.tail.invert()
    z_map = m_inv.to_bits().T.astype(np.int64)
    gadgets = []
    for g in reversed(p.gadgets):
        legs = g.legs.to_bits().astype(np.int64)
        mapped = (z_map @ legs) & 1 if g.basis == Basis.Z else (m @ legs) & 1
        gadgets.append(PhaseGadget(g.basis, BitVec.from_bits(mapped), -g.angle))
    return MixedPhasePolynomial(p.n, tuple(gadgets), m_inv, -p.global_phase)


def naive_gadget_circuit(g: PhaseGadget) -> List[Gate]:
    """
    토폴로지를 무시한 사다리 분해: 2(k-1)개 CNOT + 회전 1개

    Z 가젯은 CNOT(l_i, l_{i+1}) 사다리로 가장 큰 인덱스 레그에 패리티를 모으고,
    X 가젯은 방향을 뒤집은 사다리를 씁니다.
    """
    legs = g.support()
    if not legs:
        raise ValueError("레그가 없는 가젯은 분해할 수 없습니다")
    if g.basis == Basis.Z:
        ladder = [Gate.cnot(a, b) for a, b in zip(legs, legs[1:])]
        rotation = Gate.rz(legs[-1], g.angle)
    else:
        ladder = [Gate.cnot(b, a) for a, b in zip(legs, legs[1:])]
        rotation = Gate.rx(legs[-1], g.angle)
    return ladder + [rotation] + list(reversed(ladder))


def relabel(p: MixedPhasePolynomial, mapping: QubitMapping) -> MixedPhasePolynomial:
    """논리 큐비트 q를 물리 레지스터 mapping[q]로 옮긴 다항식"""
    if mapping.n != p.n:
        raise DimensionMismatchError(f"매핑 길이 {mapping.n} != n {p.n}")
    if mapping.is_identity():
        return p
    perm = np.asarray(mapping.perm)
    gadgets = []
    for g in p.gadgets:
        bits = np.zeros(p.n, dtype=np.uint8)
        bits[perm] = g.legs.to_bits()
        gadgets.append(g.with_legs(BitVec.from_bits(bits)))
    tail = np.zeros((p.n, p.n), dtype=np.uint8)
    tail[np.ix_(perm, perm)] = p.tail.to_bits()
    return MixedPhasePolynomial(p.n, tuple(gadgets), ParityMatrix.from_bits(tail), p.global_phase)


@dataclass
class GadgetTable:
    """
    합성용 가변 작업 사본 (배타적 접근 전용)

    legs: (m, n) 0/1 행렬, is_x: X 기저 여부, alive: 아직 추출되지 않은 가젯,
    tail: (n, n) 0/1 꼬리 행렬. cnot()은 push_cnot과 같은 규칙을 제자리에서 적용합니다.
    """

    n: int
    legs: np.ndarray
    is_x: np.ndarray
    angles: np.ndarray
    tail: np.ndarray
    global_phase: float = 0.0
    alive: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.alive is None:
            self.alive = np.ones(len(self.angles), dtype=bool)

    @classmethod
    def from_polynomial(cls, p: MixedPhasePolynomial) -> "GadgetTable":
        m = p.m
        legs = np.zeros((m, p.n), dtype=np.uint8)
        for i, g in enumerate(p.gadgets):
            legs[i] = g.legs.to_bits()
        return cls(
            n=p.n,
            legs=legs,
            is_x=np.array([g.basis == Basis.X for g in p.gadgets], dtype=bool),
            angles=np.array([g.angle for g in p.gadgets], dtype=float),
            tail=p.tail.to_bits().astype(np.uint8),
            global_phase=p.global_phase,
        )

    def to_polynomial(self) -> MixedPhasePolynomial:
        gadgets = tuple(
            PhaseGadget(Basis.X if self.is_x[i] else Basis.Z, BitVec.from_bits(self.legs[i]), float(self.angles[i]))
            for i in np.flatnonzero(self.alive)
        )
        return MixedPhasePolynomial(self.n, gadgets, ParityMatrix.from_bits(self.tail), self.global_phase)

    def copy(self) -> "GadgetTable":
        return GadgetTable(
            n=self.n,
            legs=self.legs.copy(),
            is_x=self.is_x.copy(),
            angles=self.angles.copy(),
            tail=self.tail.copy(),
            global_phase=self.global_phase,
            alive=self.alive.copy(),
        )

    def cnot(self, control: int, target: int) -> None:
        """push_cnot을 제자리에서 적용 (같은 CNOT을 두 번 적용하면 원상복구)"""
        z = ~self.is_x
        self.legs[z, control] ^= self.legs[z, target]
        self.legs[self.is_x, target] ^= self.legs[self.is_x, control]
        self.tail[:, control] ^= self.tail[:, target]

    def live(self) -> np.ndarray:
        return np.flatnonzero(self.alive)

    def remaining(self) -> int:
        return int(self.alive.sum())

    def first_region(self) -> np.ndarray:
        live = self.live()
        if live.size == 0:
            return live
        basis = self.is_x[live[0]]
        breaks = np.flatnonzero(self.is_x[live] != basis)
        return live if breaks.size == 0 else live[: breaks[0]]

    def support(self, i: int) -> Tuple[int, ...]:
        return tuple(int(q) for q in np.flatnonzero(self.legs[i]))

    def extract_singles(self) -> List[Gate]:
        """첫 교환 영역에서 레그 1개 가젯을 회전 게이트로 추출 (더 없을 때까지 반복)"""
        gates: List[Gate] = []
        while True:
            region = self.first_region()
            if region.size == 0:
                break
            weights = self.legs[region].sum(axis=1, dtype=np.int64)
            hits = region[weights <= 1]
            if hits.size == 0:
                break
            for i in hits:
                support = np.flatnonzero(self.legs[i])
                if support.size == 0:
                    self.global_phase -= self.angles[i] / 2.0
                else:
                    q = int(support[0])
                    angle = float(self.angles[i])
                    gates.append(Gate.rx(q, angle) if self.is_x[i] else Gate.rz(q, angle))
                self.alive[i] = False
        return gates
